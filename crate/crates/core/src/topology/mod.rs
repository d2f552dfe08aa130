//! Network classes: series-parallel recognition, the extension-parallel and
//! series-of-parallel-paths subclasses, and composition.
//!
//! Recognition is the classic reduction: merge parallel edges, contract
//! interior nodes of in/out degree one, and succeed iff a single
//! source–sink edge remains. Each working edge carries the decomposition
//! subtree it stands for.

mod embed;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{enumerate_paths, Limits, Path};
use crate::network::{EdgeSpec, Network};

pub use embed::{find_forbidden_embedding, EmbeddingWitness, ForbiddenPattern};

/// Canonical series/parallel decomposition.
///
/// Series children are ordered source to sink and never themselves Series;
/// Parallel children are sorted by [`DecompositionTree::key`] and never
/// themselves Parallel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecompositionTree {
    Edge(String),
    Series(Vec<DecompositionTree>),
    Parallel(Vec<DecompositionTree>),
}

impl DecompositionTree {
    /// Textual canonical key, e.g. `P(a,S(b,P(c,d)))`.
    pub fn key(&self) -> String {
        self.to_string()
    }

    pub fn is_edge(&self) -> bool {
        matches!(self, DecompositionTree::Edge(_))
    }

    /// Leaf edge ids, source-to-sink within series.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            DecompositionTree::Edge(id) => out.push(id),
            DecompositionTree::Series(c) | DecompositionTree::Parallel(c) => {
                c.iter().for_each(|t| t.collect_leaves(out))
            }
        }
    }

    /// Series factors (a non-Series tree is its own single factor).
    pub fn factors(&self) -> &[DecompositionTree] {
        match self {
            DecompositionTree::Series(c) => c,
            other => std::slice::from_ref(other),
        }
    }

    fn reversed(&self) -> DecompositionTree {
        match self {
            DecompositionTree::Edge(id) => DecompositionTree::Edge(id.clone()),
            DecompositionTree::Series(c) => {
                DecompositionTree::Series(c.iter().rev().map(|t| t.reversed()).collect())
            }
            DecompositionTree::Parallel(c) => {
                DecompositionTree::Parallel(c.iter().map(|t| t.reversed()).collect())
            }
        }
    }

    /// Flattens nested Series/Parallel and sorts Parallel children.
    pub fn canonical(self) -> DecompositionTree {
        match self {
            DecompositionTree::Edge(_) => self,
            DecompositionTree::Series(children) => {
                let mut flat = Vec::new();
                for c in children.into_iter().map(DecompositionTree::canonical) {
                    match c {
                        DecompositionTree::Series(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    DecompositionTree::Series(flat)
                }
            }
            DecompositionTree::Parallel(children) => {
                let mut flat = Vec::new();
                for c in children.into_iter().map(DecompositionTree::canonical) {
                    match c {
                        DecompositionTree::Parallel(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    return flat.pop().unwrap();
                }
                flat.sort_by_cached_key(|t| t.key());
                DecompositionTree::Parallel(flat)
            }
        }
    }

    /// Rebuilds a network by series/parallel composition, taking edge
    /// attributes from `original` and naming fresh nodes `n0, n1, …`.
    pub fn to_network(&self, original: &Network) -> Result<Network> {
        let mut specs = Vec::new();
        let mut next = 2usize;
        let name = |i: usize| format!("n{i}");
        self.emit(original, 0, 1, &mut next, &mut specs, &name)?;
        let nodes = (0..next).map(name).collect();
        Network::new(original.is_directed(), nodes, specs, "n0", "n1")
    }

    fn emit(
        &self,
        original: &Network,
        from: usize,
        to: usize,
        next: &mut usize,
        specs: &mut Vec<EdgeSpec>,
        name: &dyn Fn(usize) -> String,
    ) -> Result<()> {
        match self {
            DecompositionTree::Edge(id) => {
                let e = original
                    .edge_by_id(id)
                    .ok_or_else(|| Error::Input(format!("tree edge {id:?} not in network")))?;
                let e = original.edge(e);
                specs.push(EdgeSpec {
                    id: id.clone(),
                    from: name(from),
                    to: name(to),
                    cost: e.cost,
                    capacity: e.capacity,
                });
            }
            DecompositionTree::Series(c) => {
                let mut at = from;
                for (i, t) in c.iter().enumerate() {
                    let end = if i + 1 == c.len() {
                        to
                    } else {
                        *next += 1;
                        *next - 1
                    };
                    t.emit(original, at, end, next, specs, name)?;
                    at = end;
                }
            }
            DecompositionTree::Parallel(c) => {
                for t in c {
                    t.emit(original, from, to, next, specs, name)?;
                }
            }
        }
        Ok(())
    }

    fn is_chain(&self) -> bool {
        match self {
            DecompositionTree::Edge(_) => true,
            DecompositionTree::Series(c) => c.iter().all(DecompositionTree::is_edge),
            DecompositionTree::Parallel(_) => false,
        }
    }

    fn is_parallel_paths(&self) -> bool {
        match self {
            DecompositionTree::Parallel(c) => c.iter().all(DecompositionTree::is_chain),
            other => other.is_chain(),
        }
    }

    fn is_parallel_edges(&self) -> bool {
        match self {
            DecompositionTree::Edge(_) => true,
            DecompositionTree::Parallel(c) => c.iter().all(DecompositionTree::is_edge),
            DecompositionTree::Series(_) => false,
        }
    }

    fn is_spp(&self) -> bool {
        self.factors().iter().all(DecompositionTree::is_parallel_paths)
    }

    fn is_ep(&self) -> bool {
        match self {
            DecompositionTree::Edge(_) => true,
            DecompositionTree::Parallel(c) => c.iter().all(DecompositionTree::is_ep),
            // Peeling single-edge factors off either end must leave at most
            // one factor, and that factor must be EP.
            DecompositionTree::Series(c) => {
                let mut inner = c.iter().filter(|t| !t.is_edge());
                match (inner.next(), inner.next()) {
                    (None, _) => true,
                    (Some(t), None) => t.is_ep(),
                    _ => false,
                }
            }
        }
    }

    fn is_series_of_ep(&self) -> bool {
        self.factors().iter().all(DecompositionTree::is_ep)
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, tag: &str, c: &[DecompositionTree]| {
            write!(f, "{tag}(")?;
            for (i, t) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")
        };
        match self {
            DecompositionTree::Edge(id) => f.write_str(id),
            DecompositionTree::Series(c) => list(f, "S", c),
            DecompositionTree::Parallel(c) => list(f, "P", c),
        }
    }
}

/// Why a network failed series-parallel recognition: the reduction stalled
/// with these interior nodes left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotSp {
    /// An interior node that could not be contracted and one of its neighbours.
    pub obstruction: (String, String),
    pub residual_nodes: Vec<String>,
    pub residual_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpDecomposition {
    Sp(DecompositionTree),
    NotSp(NotSp),
}

impl SpDecomposition {
    pub fn tree(&self) -> Option<&DecompositionTree> {
        match self {
            SpDecomposition::Sp(t) => Some(t),
            SpDecomposition::NotSp(_) => None,
        }
    }
}

/// Class flags. Implications: parallel_edges ⇒ parallel_paths ⇒ spp ⇒ sp,
/// and ep ⇒ sp.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TopologyClass {
    pub sp: bool,
    pub ep: bool,
    pub spp: bool,
    pub parallel_paths: bool,
    pub parallel_edges: bool,
    /// Series composition of EP networks (includes every EP and SPP network).
    pub series_of_ep: bool,
}

/// Edges that lie on no source–sink path.
fn useless_edges(network: &Network) -> Result<Vec<usize>> {
    if network.is_directed() {
        let forward = reach(network, network.source(), true);
        let backward = reach(network, network.sink(), false);
        Ok((0..network.edge_count())
            .filter(|&e| {
                let edge = network.edge(e);
                !(forward[edge.from] && backward[edge.to])
            })
            .collect())
    } else {
        let paths = enumerate_paths(
            network,
            network.source(),
            network.sink(),
            Limits::default().path_cap,
        )?;
        let mut used = vec![false; network.edge_count()];
        for p in &paths {
            for &e in p.edges() {
                used[e] = true;
            }
        }
        Ok((0..network.edge_count()).filter(|&e| !used[e]).collect())
    }
}

fn reach(network: &Network, start: usize, forward: bool) -> Vec<bool> {
    let mut seen = vec![false; network.node_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        let adj = if forward {
            network.out_edges(v)
        } else {
            network.in_edges(v)
        };
        for &e in adj {
            let edge = network.edge(e);
            let w = if forward { edge.to } else { edge.from };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

struct Work {
    from: usize,
    to: usize,
    tree: DecompositionTree,
}

/// Series-parallel recognition with canonical decomposition tree.
///
/// Errors when the network has no edges or some edge lies on no
/// source–sink path (those edges are named; prune them explicitly).
pub fn decompose_sp(network: &Network) -> Result<SpDecomposition> {
    if network.edge_count() == 0 {
        return Err(Error::Input("network has no edges".into()));
    }
    let useless = useless_edges(network)?;
    if !useless.is_empty() {
        let ids: Vec<&str> = useless
            .iter()
            .map(|&e| network.edge(e).id.as_str())
            .collect();
        return Err(Error::Input(format!(
            "edges not on any source-sink path: {}",
            ids.join(", ")
        )));
    }
    let directed = network.is_directed();
    let (s, t) = (network.source(), network.sink());
    let mut live: Vec<Option<Work>> = network
        .edges()
        .iter()
        .map(|e| {
            Some(Work {
                from: e.from,
                to: e.to,
                tree: DecompositionTree::Edge(e.id.clone()),
            })
        })
        .collect();

    loop {
        let mut changed = false;

        // Parallel merges.
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, w) in live.iter().enumerate() {
            if let Some(w) = w {
                let k = if directed {
                    (w.from, w.to)
                } else {
                    (w.from.min(w.to), w.from.max(w.to))
                };
                groups.entry(k).or_default().push(i);
            }
        }
        for (_, idx) in groups {
            if idx.len() < 2 {
                continue;
            }
            let first = live[idx[0]].take().unwrap();
            let mut children = vec![first.tree];
            for &j in &idx[1..] {
                let w = live[j].take().unwrap();
                children.push(if w.from == first.from {
                    w.tree
                } else {
                    w.tree.reversed()
                });
            }
            live[idx[0]] = Some(Work {
                from: first.from,
                to: first.to,
                tree: DecompositionTree::Parallel(children),
            });
            changed = true;
        }

        // Series contractions.
        let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, w) in live.iter().enumerate() {
            if let Some(w) = w {
                incident.entry(w.from).or_default().push(i);
                incident.entry(w.to).or_default().push(i);
            }
        }
        let mut candidates: Vec<usize> = incident.keys().copied().collect();
        candidates.sort_unstable();
        for v in candidates {
            if v == s || v == t {
                continue;
            }
            let inc: Vec<usize> = incident[&v]
                .iter()
                .copied()
                .filter(|&i| live[i].is_some())
                .collect();
            if inc.len() != 2 {
                continue;
            }
            let (a, b) = (inc[0], inc[1]);
            let (wa, wb) = (live[a].as_ref().unwrap(), live[b].as_ref().unwrap());
            let (first, second) = if directed {
                if wa.to == v && wb.from == v {
                    (a, b)
                } else if wb.to == v && wa.from == v {
                    (b, a)
                } else {
                    continue;
                }
            } else {
                (a, b)
            };
            let w1 = live[first].take().unwrap();
            let w2 = live[second].take().unwrap();
            // Orient w1 as x→v and w2 as v→y.
            let (x, t1) = if w1.to == v {
                (w1.from, w1.tree)
            } else {
                (w1.to, w1.tree.reversed())
            };
            let (y, t2) = if w2.from == v {
                (w2.to, w2.tree)
            } else {
                (w2.from, w2.tree.reversed())
            };
            if x == y {
                // Would create a loop; leave both edges in place.
                live[first] = Some(Work {
                    from: if directed { x } else { x },
                    to: v,
                    tree: t1,
                });
                live[second] = Some(Work {
                    from: v,
                    to: y,
                    tree: t2,
                });
                continue;
            }
            live[first] = Some(Work {
                from: x,
                to: y,
                tree: DecompositionTree::Series(vec![t1, t2]),
            });
            // Refresh incidence for the endpoints that changed.
            incident.get_mut(&x).unwrap().push(first);
            incident.get_mut(&y).unwrap().push(first);
            changed = true;
        }

        if !changed {
            break;
        }
    }

    let rest: Vec<&Work> = live.iter().flatten().collect();
    if rest.len() == 1 {
        let w = rest[0];
        if w.from == s && w.to == t {
            return Ok(SpDecomposition::Sp(w.tree.clone().canonical()));
        }
        if !directed && w.from == t && w.to == s {
            return Ok(SpDecomposition::Sp(w.tree.reversed().canonical()));
        }
    }
    let mut residual: Vec<usize> = rest
        .iter()
        .flat_map(|w| [w.from, w.to])
        .filter(|&v| v != s && v != t)
        .collect();
    residual.sort_unstable();
    residual.dedup();
    let obstruction = residual
        .first()
        .map(|&v| {
            let other = rest
                .iter()
                .find_map(|w| {
                    if w.from == v {
                        Some(w.to)
                    } else if w.to == v {
                        Some(w.from)
                    } else {
                        None
                    }
                })
                .unwrap_or(v);
            (
                network.node_name(v).to_string(),
                network.node_name(other).to_string(),
            )
        })
        .unwrap_or_else(|| {
            (
                network.node_name(s).to_string(),
                network.node_name(t).to_string(),
            )
        });
    Ok(SpDecomposition::NotSp(NotSp {
        obstruction,
        residual_nodes: residual
            .iter()
            .map(|&v| network.node_name(v).to_string())
            .collect(),
        residual_edges: rest.len(),
    }))
}

pub fn classify_tree(tree: &DecompositionTree) -> TopologyClass {
    let parallel_edges = tree.is_parallel_edges();
    let parallel_paths = tree.is_parallel_paths();
    TopologyClass {
        sp: true,
        ep: tree.is_ep(),
        spp: tree.is_spp(),
        parallel_paths,
        parallel_edges,
        series_of_ep: tree.is_series_of_ep(),
    }
}

pub fn classify(network: &Network) -> Result<TopologyClass> {
    Ok(match decompose_sp(network)? {
        SpDecomposition::Sp(tree) => classify_tree(&tree),
        SpDecomposition::NotSp(_) => TopologyClass::default(),
    })
}

/// Where a node sits in an SPP chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodePosition {
    /// Boundary between blocks `b - 1` and `b` (0 is the source, `k` the sink).
    Junction(usize),
    /// Interior node of `path` in `block`, `offset` edges from the block source.
    Inner {
        block: usize,
        path: usize,
        offset: usize,
    },
    /// Not on the network (isolated node).
    Detached,
}

/// A parallel-paths block of an SPP chain.
#[derive(Clone, Debug)]
pub struct Block {
    pub source: usize,
    pub sink: usize,
    /// Internally disjoint block-source → block-sink paths.
    pub paths: Vec<Path>,
}

impl Block {
    pub fn is_parallel_edges(&self) -> bool {
        self.paths.iter().all(|p| p.len() == 1)
    }
}

/// The block chain `G_1 → … → G_k` of an SPP network.
#[derive(Clone, Debug)]
pub struct SppChain {
    pub blocks: Vec<Block>,
    positions: Vec<NodePosition>,
}

impl SppChain {
    pub fn new(network: &Network) -> Result<SppChain> {
        let tree = match decompose_sp(network)? {
            SpDecomposition::Sp(t) if t.is_spp() => t,
            _ => return Err(Error::Domain("network is not SPP".into())),
        };
        let mut blocks = Vec::new();
        let mut at = network.source();
        for factor in tree.factors() {
            let chains: Vec<&DecompositionTree> = match factor {
                DecompositionTree::Parallel(c) => c.iter().collect(),
                other => vec![other],
            };
            let mut paths: Vec<Path> = chains
                .iter()
                .map(|c| Path::from_ids(network, at, &c.leaves()))
                .collect::<Result<_>>()?;
            paths.sort_by(|a, b| a.cmp_ids(b, network));
            let sink = paths[0].end();
            blocks.push(Block {
                source: at,
                sink,
                paths,
            });
            at = sink;
        }
        let mut positions = vec![NodePosition::Detached; network.node_count()];
        for (b, block) in blocks.iter().enumerate() {
            positions[block.source] = NodePosition::Junction(b);
            positions[block.sink] = NodePosition::Junction(b + 1);
            for (pi, p) in block.paths.iter().enumerate() {
                for (offset, &v) in p.nodes().iter().enumerate() {
                    if offset > 0 && offset < p.len() {
                        positions[v] = NodePosition::Inner {
                            block: b,
                            path: pi,
                            offset,
                        };
                    }
                }
            }
        }
        Ok(SppChain { blocks, positions })
    }

    pub fn position(&self, node: usize) -> NodePosition {
        self.positions[node]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn check_same_direction(parts: &[Network]) -> Result<bool> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Input("nothing to compose".into()))?;
    if parts.iter().any(|p| p.is_directed() != first.is_directed()) {
        return Err(Error::Input(
            "cannot compose directed with undirected networks".into(),
        ));
    }
    Ok(first.is_directed())
}

/// Edge ids stay as-is unless they collide across parts, in which case
/// every colliding id gets a `.{part}` suffix.
fn compose(parts: &[Network], terminals: impl Fn(usize) -> (String, String)) -> Result<Network> {
    let directed = check_same_direction(parts)?;
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for p in parts {
        for e in p.edges() {
            *seen.entry(e.id.as_str()).or_default() += 1;
        }
    }
    let mut nodes: Vec<String> = Vec::new();
    let mut specs = Vec::new();
    let mut taken = std::collections::HashSet::new();
    for (k, p) in parts.iter().enumerate() {
        let (s, t) = terminals(k);
        let rename = |v: usize| -> String {
            if v == p.source() {
                s.clone()
            } else if v == p.sink() {
                t.clone()
            } else {
                format!("{k}.{}", p.node_name(v))
            }
        };
        for v in 0..p.node_count() {
            let name = rename(v);
            if !nodes.contains(&name) {
                nodes.push(name);
            }
        }
        for e in p.edges() {
            let mut id = e.id.clone();
            if seen[e.id.as_str()] > 1 {
                let mut m = k;
                id = format!("{}.{m}", e.id);
                while seen.contains_key(id.as_str()) || taken.contains(&id) {
                    m += parts.len();
                    id = format!("{}.{m}", e.id);
                }
            }
            taken.insert(id.clone());
            specs.push(EdgeSpec {
                id,
                from: rename(e.from),
                to: rename(e.to),
                cost: e.cost,
                capacity: e.capacity,
            });
        }
    }
    let last = parts.len() - 1;
    let (s, _) = terminals(0);
    let (_, t) = terminals(last);
    Network::new(directed, nodes, specs, &s, &t)
}

/// `G_1 → G_2 → …`: sink of each part identified with the next source.
/// Identification points are named `s`, `j1`, …, `t`.
pub fn compose_series(parts: &[Network]) -> Result<Network> {
    let k = parts.len();
    compose(parts, |i| {
        let name = |j: usize| {
            if j == 0 {
                "s".to_string()
            } else if j == k {
                "t".to_string()
            } else {
                format!("j{j}")
            }
        };
        (name(i), name(i + 1))
    })
}

/// `G_1 ∥ G_2 ∥ …`: all sources identified as `s`, all sinks as `t`.
pub fn compose_parallel(parts: &[Network]) -> Result<Network> {
    compose(parts, |_| ("s".to_string(), "t".to_string()))
}
