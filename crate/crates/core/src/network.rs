//! Two-terminal multigraphs with per-edge cost and capacity.

use std::collections::HashMap;

use crate::cost::Cost;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub cost: Cost,
    /// Maximum number of agents; `0` makes the edge unusable.
    pub capacity: u32,
}

/// Edge description by node names, used to build a [`Network`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub cost: Cost,
    pub capacity: u32,
}

/// A directed or undirected multigraph with designated source and sink.
///
/// Nodes and edges are addressed by dense indices internally and by their
/// string ids at the boundary. Parallel edges are distinguished by id.
#[derive(Clone, Debug)]
pub struct Network {
    directed: bool,
    nodes: Vec<String>,
    edges: Vec<Edge>,
    source: usize,
    sink: usize,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    // Directed: outgoing / incoming. Undirected: both hold every incident edge.
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.nodes == other.nodes
            && self.edges == other.edges
            && self.source == other.source
            && self.sink == other.sink
    }
}

impl Eq for Network {}

impl Network {
    pub fn new(
        directed: bool,
        nodes: Vec<String>,
        edges: Vec<EdgeSpec>,
        source: &str,
        sink: &str,
    ) -> Result<Self> {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate node id {n:?}")));
            }
        }
        let lookup = |name: &str| -> Result<usize> {
            node_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Input(format!("unknown node id {name:?}")))
        };
        let source = lookup(source)?;
        let sink = lookup(sink)?;
        if source == sink {
            return Err(Error::Input("source and sink must differ".into()));
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut built = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            let from = lookup(&e.from)?;
            let to = lookup(&e.to)?;
            if from == to {
                return Err(Error::Input(format!("edge {:?} is a self-loop", e.id)));
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate edge id {:?}", e.id)));
            }
            built.push(Edge {
                id: e.id,
                from,
                to,
                cost: e.cost,
                capacity: e.capacity,
            });
        }
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        for (i, e) in built.iter().enumerate() {
            out_adj[e.from].push(i);
            in_adj[e.to].push(i);
            if !directed {
                out_adj[e.to].push(i);
                in_adj[e.from].push(i);
            }
        }
        Ok(Network {
            directed,
            nodes,
            edges: built,
            source,
            sink,
            node_index,
            edge_index,
            out_adj,
            in_adj,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.nodes[v]
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.node_index.get(name).copied()
    }

    pub fn require_node(&self, name: &str) -> Result<usize> {
        self.node(name)
            .ok_or_else(|| Error::Input(format!("unknown node id {name:?}")))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Edges that can be traversed leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Edges that can be traversed arriving at `v`.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// The node reached by traversing edge `e` from `v`, if that traversal is allowed.
    pub fn traverse(&self, e: usize, v: usize) -> Option<usize> {
        let edge = &self.edges[e];
        if edge.from == v {
            Some(edge.to)
        } else if !self.directed && edge.to == v {
            Some(edge.from)
        } else {
            None
        }
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec {
                id: e.id.clone(),
                from: self.nodes[e.from].clone(),
                to: self.nodes[e.to].clone(),
                cost: e.cost,
                capacity: e.capacity,
            })
            .collect()
    }

    /// Same graph with different terminals.
    pub fn with_terminals(&self, source: &str, sink: &str) -> Result<Network> {
        Network::new(
            self.directed,
            self.nodes.clone(),
            self.edge_specs(),
            source,
            sink,
        )
    }

    /// The same edge list read as an undirected network.
    pub fn undirected_twin(&self) -> Network {
        self.with_direction(false)
    }

    pub fn with_direction(&self, directed: bool) -> Network {
        Network::new(
            directed,
            self.nodes.clone(),
            self.edge_specs(),
            &self.nodes[self.source],
            &self.nodes[self.sink],
        )
        .expect("re-validating a valid network")
    }

    /// Keeps the listed edges (ids and node names preserved, all nodes kept).
    pub fn subnetwork(&self, keep: &[usize]) -> Network {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let specs = self.edge_specs();
        Network::new(
            self.directed,
            self.nodes.clone(),
            keep.into_iter().map(|e| specs[e].clone()).collect(),
            &self.nodes[self.source],
            &self.nodes[self.sink],
        )
        .expect("subnetwork of a valid network")
    }

    /// Every edge reversed, source and sink swapped.
    pub fn reversed(&self) -> Network {
        let specs = self
            .edge_specs()
            .into_iter()
            .map(|e| EdgeSpec {
                from: e.to,
                to: e.from,
                ..e
            })
            .collect();
        Network::new(
            self.directed,
            self.nodes.clone(),
            specs,
            &self.nodes[self.sink],
            &self.nodes[self.source],
        )
        .expect("reversal of a valid network")
    }

    /// Replaces cost and capacity per edge.
    pub fn map_edges(&self, mut f: impl FnMut(&Edge) -> (Cost, u32)) -> Network {
        let mut out = self.clone();
        for e in &mut out.edges {
            let (cost, capacity) = f(e);
            e.cost = cost;
            e.capacity = capacity;
        }
        out
    }

    pub fn max_capacity(&self) -> u32 {
        self.edges.iter().map(|e| e.capacity).max().unwrap_or(0)
    }

    /// `Some(c)` when every edge has capacity `c`.
    pub fn homogeneous_capacity(&self) -> Option<u32> {
        let first = self.edges.first()?.capacity;
        self.edges
            .iter()
            .all(|e| e.capacity == first)
            .then_some(first)
    }
}

/// Incremental construction that creates nodes on first mention.
#[derive(Clone, Debug)]
pub struct NetworkBuilder {
    directed: bool,
    nodes: Vec<String>,
    edges: Vec<EdgeSpec>,
}

impl NetworkBuilder {
    pub fn directed() -> Self {
        Self::new(true)
    }

    pub fn undirected() -> Self {
        Self::new(false)
    }

    pub fn new(directed: bool) -> Self {
        NetworkBuilder {
            directed,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node(mut self, name: &str) -> Self {
        self.touch(name);
        self
    }

    fn touch(&mut self, name: &str) {
        if !self.nodes.iter().any(|n| n == name) {
            self.nodes.push(name.to_string());
        }
    }

    pub fn edge(mut self, id: &str, from: &str, to: &str, cost: Cost, capacity: u32) -> Self {
        self.push_edge(id, from, to, cost, capacity);
        self
    }

    pub fn push_edge(&mut self, id: &str, from: &str, to: &str, cost: Cost, capacity: u32) {
        self.touch(from);
        self.touch(to);
        self.edges.push(EdgeSpec {
            id: id.to_string(),
            from: from.to_string(),
            to: to.to_string(),
            cost,
            capacity,
        });
    }

    pub fn build(mut self, source: &str, sink: &str) -> Result<Network> {
        self.touch(source);
        self.touch(sink);
        Network::new(self.directed, self.nodes, self.edges, source, sink)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Cost {
        Cost::one()
    }

    #[test]
    fn builder_creates_nodes_in_order() {
        let g = NetworkBuilder::directed()
            .edge("a", "s", "v", one(), 1)
            .edge("b", "v", "t", one(), 1)
            .build("s", "t")
            .unwrap();
        assert_eq!(g.nodes(), ["s", "v", "t"]);
        assert_eq!(g.edge_by_id("b"), Some(1));
        assert_eq!(g.traverse(0, 0), Some(1));
        assert_eq!(g.traverse(0, 1), None);
    }

    #[test]
    fn rejects_bad_networks() {
        let dup = NetworkBuilder::directed()
            .edge("a", "s", "t", one(), 1)
            .edge("a", "s", "t", one(), 1)
            .build("s", "t");
        assert!(matches!(dup, Err(Error::Input(_))));
        let same = NetworkBuilder::directed()
            .edge("a", "s", "t", one(), 1)
            .build("s", "s");
        assert!(same.is_err());
        let loop_ = NetworkBuilder::directed()
            .edge("a", "s", "s", one(), 1)
            .build("s", "t");
        assert!(loop_.is_err());
        let unknown = Network::new(true, vec!["s".into()], vec![], "s", "t");
        assert!(unknown.is_err());
    }

    #[test]
    fn undirected_traversal_goes_both_ways() {
        let g = NetworkBuilder::undirected()
            .edge("a", "s", "t", one(), 1)
            .build("s", "t")
            .unwrap();
        assert_eq!(g.traverse(0, 1), Some(0));
        assert_eq!(g.out_edges(1), [0]);
    }

    #[test]
    fn reversal_swaps_terminals() {
        let g = NetworkBuilder::directed()
            .edge("a", "s", "v", one(), 1)
            .edge("b", "v", "t", one(), 2)
            .build("s", "t")
            .unwrap();
        let r = g.reversed();
        assert_eq!(r.node_name(r.source()), "t");
        assert_eq!(r.edge(1).from, g.edge(1).to);
    }
}
