//! Search for a forbidden pattern embedded as a topological minor.
//!
//! A pattern embeds when its nodes map injectively to host nodes and its
//! edges map to internally vertex-disjoint host paths. If the pattern
//! source (sink) is not mapped to the host source (sink), a further
//! disjoint path from the host source (to the host sink) is required.

use std::fmt;

use serde::Serialize;

use crate::cost::Cost;
use crate::network::{Network, NetworkBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForbiddenPattern {
    /// `s→u, s→v, u→v, u→t, v→t`.
    Braess,
    /// `a: s→t` in parallel with `b: s→v` followed by `c, d: v→t`.
    EdgeThenParallel,
    /// `a: s→t` in parallel with `b, c: s→v` followed by `d: v→t`.
    ParallelThenEdge,
    /// `a: s→t` in parallel with `b: s→u`, then `c, d: u→v`, then `e: v→t`.
    EdgeParallelEdge,
}

impl ForbiddenPattern {
    pub const ALL: [ForbiddenPattern; 4] = [
        ForbiddenPattern::Braess,
        ForbiddenPattern::EdgeThenParallel,
        ForbiddenPattern::ParallelThenEdge,
        ForbiddenPattern::EdgeParallelEdge,
    ];

    /// Pattern edges as `(id, from, to)`.
    pub fn edges(self) -> &'static [(&'static str, &'static str, &'static str)] {
        match self {
            ForbiddenPattern::Braess => &[
                ("su", "s", "u"),
                ("sv", "s", "v"),
                ("uv", "u", "v"),
                ("ut", "u", "t"),
                ("vt", "v", "t"),
            ],
            ForbiddenPattern::EdgeThenParallel => &[
                ("a", "s", "t"),
                ("b", "s", "v"),
                ("c", "v", "t"),
                ("d", "v", "t"),
            ],
            ForbiddenPattern::ParallelThenEdge => &[
                ("a", "s", "t"),
                ("b", "s", "v"),
                ("c", "s", "v"),
                ("d", "v", "t"),
            ],
            ForbiddenPattern::EdgeParallelEdge => &[
                ("a", "s", "t"),
                ("b", "s", "u"),
                ("c", "u", "v"),
                ("d", "u", "v"),
                ("e", "v", "t"),
            ],
        }
    }

    /// Pattern nodes; source first, sink second.
    pub fn nodes(self) -> &'static [&'static str] {
        match self {
            ForbiddenPattern::Braess | ForbiddenPattern::EdgeParallelEdge => &["s", "t", "u", "v"],
            _ => &["s", "t", "v"],
        }
    }

    /// The pattern as a directed network with unit costs and capacities.
    pub fn network(self) -> Network {
        let mut b = NetworkBuilder::directed();
        for &(id, from, to) in self.edges() {
            b.push_edge(id, from, to, Cost::one(), 1);
        }
        b.build("s", "t").expect("pattern networks are valid")
    }
}

impl fmt::Display for ForbiddenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForbiddenPattern::Braess => "braess",
            ForbiddenPattern::EdgeThenParallel => "edge_then_parallel",
            ForbiddenPattern::ParallelThenEdge => "parallel_then_edge",
            ForbiddenPattern::EdgeParallelEdge => "edge_parallel_edge",
        })
    }
}

/// A concrete embedding, replayable with [`EmbeddingWitness::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingWitness {
    pub pattern: ForbiddenPattern,
    /// Pattern node → host node.
    pub node_map: Vec<(String, String)>,
    /// Pattern edge → host edge ids along the mapped path.
    pub edge_paths: Vec<(String, Vec<String>)>,
    /// Host edges from the host source to the image of the pattern source.
    pub source_extension: Vec<String>,
    /// Host edges from the image of the pattern sink to the host sink.
    pub sink_extension: Vec<String>,
}

impl EmbeddingWitness {
    /// Checks the witness against `host` independently of the search.
    pub fn verify(&self, host: &Network) -> bool {
        let mut image = std::collections::HashMap::new();
        let mut used_nodes = std::collections::HashSet::new();
        for (p, h) in &self.node_map {
            let Some(v) = host.node(h) else { return false };
            if !used_nodes.insert(v) {
                return false;
            }
            image.insert(p.as_str(), v);
        }
        let (Some(&s), Some(&t)) = (image.get("s"), image.get("t")) else {
            return false;
        };
        if image.len() != self.pattern.nodes().len() {
            return false;
        }
        for (p, &v) in &image {
            let is_s = *p == "s" && v == host.source();
            let is_t = *p == "t" && v == host.sink();
            if (v == host.source() || v == host.sink()) && !is_s && !is_t {
                return false;
            }
        }
        let mut used_edges = std::collections::HashSet::new();
        let mut interior = std::collections::HashSet::new();
        let mut walk = |from: usize, to: usize, ids: &[String]| -> bool {
            let mut at = from;
            for (k, id) in ids.iter().enumerate() {
                let Some(e) = host.edge_by_id(id) else { return false };
                if !used_edges.insert(e) {
                    return false;
                }
                let Some(next) = host.traverse(e, at) else { return false };
                at = next;
                if k + 1 < ids.len()
                    && (used_nodes.contains(&at) || !interior.insert(at))
                {
                    return false;
                }
            }
            at == to && !ids.is_empty()
        };
        for &(id, from, to) in self.pattern.edges() {
            let Some((_, path)) = self.edge_paths.iter().find(|(p, _)| p == id) else {
                return false;
            };
            if !walk(image[from], image[to], path) {
                return false;
            }
        }
        let src_ok = if s == host.source() {
            self.source_extension.is_empty()
        } else {
            walk(host.source(), s, &self.source_extension)
        };
        let snk_ok = if t == host.sink() {
            self.sink_extension.is_empty()
        } else {
            walk(t, host.sink(), &self.sink_extension)
        };
        src_ok && snk_ok && self.edge_paths.len() == self.pattern.edges().len()
    }
}

struct Search<'a> {
    host: &'a Network,
    pattern: ForbiddenPattern,
    map: Vec<usize>,
    blocked: Vec<bool>,
    used_edge: Vec<bool>,
    routes: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Routing jobs as `(from, to)` host nodes: pattern edges, then extensions.
    fn jobs(&self) -> Vec<(usize, usize)> {
        let names = self.pattern.nodes();
        let idx = |n: &str| names.iter().position(|m| *m == n).unwrap();
        let mut jobs: Vec<(usize, usize)> = self
            .pattern
            .edges()
            .iter()
            .map(|&(_, f, t)| (self.map[idx(f)], self.map[idx(t)]))
            .collect();
        if self.map[0] != self.host.source() {
            jobs.push((self.host.source(), self.map[0]));
        }
        if self.map[1] != self.host.sink() {
            jobs.push((self.map[1], self.host.sink()));
        }
        jobs
    }

    fn assign(&mut self, k: usize) -> bool {
        let names = self.pattern.nodes();
        if k == names.len() {
            let jobs = self.jobs();
            return self.route(&jobs, 0);
        }
        let (s, t) = (self.host.source(), self.host.sink());
        for v in 0..self.host.node_count() {
            if self.blocked[v] {
                continue;
            }
            // Host terminals may only be images of the matching pattern terminal.
            if (v == s && k != 0) || (v == t && k != 1) {
                continue;
            }
            if !self.degree_ok(names[k], v) {
                continue;
            }
            self.blocked[v] = true;
            self.map.push(v);
            if self.assign(k + 1) {
                return true;
            }
            self.map.pop();
            self.blocked[v] = false;
        }
        false
    }

    fn degree_ok(&self, name: &str, v: usize) -> bool {
        let mut need_out = 0;
        let mut need_in = 0;
        for &(_, f, t) in self.pattern.edges() {
            need_out += usize::from(f == name);
            need_in += usize::from(t == name);
        }
        if name == "s" && v != self.host.source() {
            need_in += 1;
        }
        if name == "t" && v != self.host.sink() {
            need_out += 1;
        }
        if self.host.is_directed() {
            self.host.out_edges(v).len() >= need_out && self.host.in_edges(v).len() >= need_in
        } else {
            self.host.out_edges(v).len() >= need_out + need_in
        }
    }

    fn route(&mut self, jobs: &[(usize, usize)], k: usize) -> bool {
        if k == jobs.len() {
            return true;
        }
        let (from, to) = jobs[k];
        let mut path = Vec::new();
        self.dfs(jobs, k, from, to, &mut path)
    }

    fn dfs(
        &mut self,
        jobs: &[(usize, usize)],
        k: usize,
        at: usize,
        to: usize,
        path: &mut Vec<usize>,
    ) -> bool {
        for i in 0..self.host.out_edges(at).len() {
            let e = self.host.out_edges(at)[i];
            if self.used_edge[e] {
                continue;
            }
            let Some(next) = self.host.traverse(e, at) else { continue };
            if next == to {
                self.used_edge[e] = true;
                path.push(e);
                self.routes.push(path.clone());
                if self.route(jobs, k + 1) {
                    return true;
                }
                self.routes.pop();
                path.pop();
                self.used_edge[e] = false;
                continue;
            }
            if self.blocked[next] {
                continue;
            }
            self.used_edge[e] = true;
            self.blocked[next] = true;
            path.push(e);
            if self.dfs(jobs, k, next, to, path) {
                return true;
            }
            path.pop();
            self.blocked[next] = false;
            self.used_edge[e] = false;
        }
        false
    }

    fn witness(&self) -> EmbeddingWitness {
        let ids = |p: &[usize]| -> Vec<String> {
            p.iter().map(|&e| self.host.edge(e).id.clone()).collect()
        };
        let names = self.pattern.nodes();
        let edges = self.pattern.edges();
        let mut rest = self.routes[edges.len()..].iter();
        let source_extension = if self.map[0] != self.host.source() {
            ids(rest.next().unwrap())
        } else {
            Vec::new()
        };
        let sink_extension = if self.map[1] != self.host.sink() {
            ids(rest.next().unwrap())
        } else {
            Vec::new()
        };
        EmbeddingWitness {
            pattern: self.pattern,
            node_map: names
                .iter()
                .zip(&self.map)
                .map(|(n, &v)| (n.to_string(), self.host.node_name(v).to_string()))
                .collect(),
            edge_paths: edges
                .iter()
                .zip(&self.routes)
                .map(|(&(id, _, _), p)| (id.to_string(), ids(p)))
                .collect(),
            source_extension,
            sink_extension,
        }
    }
}

/// Finds an embedding of one of the forbidden patterns, trying
/// [`ForbiddenPattern::ALL`] in order. `None` means the network is SPP.
///
/// Edges of capacity zero are treated like any other edge.
pub fn find_forbidden_embedding(host: &Network) -> Option<EmbeddingWitness> {
    ForbiddenPattern::ALL
        .iter()
        .find_map(|&p| find_pattern(host, p))
}

pub fn find_pattern(host: &Network, pattern: ForbiddenPattern) -> Option<EmbeddingWitness> {
    let mut search = Search {
        host,
        pattern,
        map: Vec::new(),
        blocked: vec![false; host.node_count()],
        used_edge: vec![false; host.edge_count()],
        routes: Vec::new(),
    };
    search.assign(0).then(|| search.witness())
}
