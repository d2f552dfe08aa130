//! Games, strategies and the fair cost-sharing rule.
//!
//! An agent's strategy is a simple path between its terminals. Edge costs
//! are split equally among the agents using the edge, and a profile that
//! overloads any edge costs every agent `∞`.

use std::cmp::Ordering;

use crate::cost::{harmonic, Cost, ExtCost};
use crate::error::{Error, Result};
use crate::network::Network;

/// Bounds on exhaustive enumeration. Exceeding one is a resource error,
/// never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of profiles (or joint deviations) scanned by one call.
    pub profile_cap: u128,
    /// Maximum number of simple paths per terminal pair.
    pub path_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            profile_cap: 1_000_000,
            path_cap: 100_000,
        }
    }
}

/// A simple walk, stored as edge indices plus the visited node sequence.
///
/// The node sequence fixes the traversal direction of every edge, which
/// matters in undirected networks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    edges: Vec<usize>,
    nodes: Vec<usize>,
}

impl Path {
    /// Builds a path from edge ids, walking from `start`.
    pub fn from_ids<S: AsRef<str>>(network: &Network, start: usize, ids: &[S]) -> Result<Path> {
        let mut edges = Vec::with_capacity(ids.len());
        let mut nodes = vec![start];
        let mut at = start;
        for id in ids {
            let id = id.as_ref();
            let e = network
                .edge_by_id(id)
                .ok_or_else(|| Error::Input(format!("unknown edge id {id:?}")))?;
            at = network.traverse(e, at).ok_or_else(|| {
                Error::Input(format!(
                    "edge {id:?} cannot be traversed from node {:?}",
                    network.node_name(at)
                ))
            })?;
            if nodes.contains(&at) {
                return Err(Error::Input(format!(
                    "path revisits node {:?}",
                    network.node_name(at)
                )));
            }
            edges.push(e);
            nodes.push(at);
        }
        Ok(Path { edges, nodes })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn start(&self) -> usize {
        self.nodes[0]
    }

    pub fn end(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.contains(&e)
    }

    pub fn edge_ids<'n>(&self, network: &'n Network) -> Vec<&'n str> {
        self.edges
            .iter()
            .map(|&e| network.edge(e).id.as_str())
            .collect()
    }

    /// Sum of the undivided edge costs.
    pub fn cost(&self, network: &Network) -> Cost {
        self.edges.iter().map(|&e| network.edge(e).cost).sum()
    }

    /// Smallest capacity along the path.
    pub fn bottleneck(&self, network: &Network) -> u32 {
        self.edges
            .iter()
            .map(|&e| network.edge(e).capacity)
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Concatenation; `self` must end where `next` starts.
    pub fn concat(&self, next: &Path) -> Path {
        assert_eq!(self.end(), next.start(), "paths do not meet");
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&next.edges);
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&next.nodes[1..]);
        Path { edges, nodes }
    }

    /// Canonical order: lexicographic by edge-id sequence.
    pub fn cmp_ids(&self, other: &Path, network: &Network) -> Ordering {
        self.edge_ids(network).cmp(&other.edge_ids(network))
    }
}

/// All simple `source → sink` paths, in canonical (edge-id lexicographic) order.
///
/// Capacity-0 edges are included: feasibility is a property of profiles.
pub fn enumerate_paths(
    network: &Network,
    source: usize,
    sink: usize,
    cap: usize,
) -> Result<Vec<Path>> {
    if source >= network.node_count() || sink >= network.node_count() {
        return Err(Error::Input("unknown terminal node".into()));
    }
    let mut out = Vec::new();
    if source == sink {
        return Ok(out);
    }
    let mut on_path = vec![false; network.node_count()];
    let mut edges = Vec::new();
    let mut nodes = vec![source];
    on_path[source] = true;
    dfs(
        network,
        sink,
        cap,
        &mut on_path,
        &mut edges,
        &mut nodes,
        &mut out,
    )?;
    out.sort_by(|a, b| a.cmp_ids(b, network));
    Ok(out)
}

fn dfs(
    network: &Network,
    sink: usize,
    cap: usize,
    on_path: &mut [bool],
    edges: &mut Vec<usize>,
    nodes: &mut Vec<usize>,
    out: &mut Vec<Path>,
) -> Result<()> {
    let at = *nodes.last().unwrap();
    for &e in network.out_edges(at) {
        let Some(next) = network.traverse(e, at) else {
            continue;
        };
        if on_path[next] {
            continue;
        }
        edges.push(e);
        nodes.push(next);
        if next == sink {
            if out.len() >= cap {
                return Err(Error::Resource {
                    what: "simple paths".into(),
                    required: cap as u128 + 1,
                    cap: cap as u128,
                });
            }
            out.push(Path {
                edges: edges.clone(),
                nodes: nodes.clone(),
            });
        } else {
            on_path[next] = true;
            dfs(network, sink, cap, on_path, edges, nodes, out)?;
            on_path[next] = false;
        }
        edges.pop();
        nodes.pop();
    }
    Ok(())
}

/// Who plays: `n` identical agents on the network terminals, or an explicit
/// list of per-agent terminal pairs (node indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agents {
    Symmetric { n: usize },
    Asymmetric { terminals: Vec<(usize, usize)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    network: Network,
    agents: Agents,
}

impl Game {
    pub fn symmetric(network: Network, n: usize) -> Result<Game> {
        if n == 0 {
            return Err(Error::Input("a game needs at least one agent".into()));
        }
        Ok(Game {
            network,
            agents: Agents::Symmetric { n },
        })
    }

    /// Agents given by `(source, sink)` node names.
    pub fn asymmetric<S: AsRef<str>>(network: Network, pairs: &[(S, S)]) -> Result<Game> {
        if pairs.is_empty() {
            return Err(Error::Input("a game needs at least one agent".into()));
        }
        let mut terminals = Vec::with_capacity(pairs.len());
        for (s, t) in pairs {
            let s = network.require_node(s.as_ref())?;
            let t = network.require_node(t.as_ref())?;
            if s == t {
                return Err(Error::Input("agent source and sink must differ".into()));
            }
            terminals.push((s, t));
        }
        Ok(Game {
            network,
            agents: Agents::Asymmetric { terminals },
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn agents(&self) -> &Agents {
        &self.agents
    }

    pub fn n(&self) -> usize {
        match &self.agents {
            Agents::Symmetric { n } => *n,
            Agents::Asymmetric { terminals } => terminals.len(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.agents, Agents::Symmetric { .. })
    }

    pub fn terminals(&self, agent: usize) -> (usize, usize) {
        match &self.agents {
            Agents::Symmetric { .. } => (self.network.source(), self.network.sink()),
            Agents::Asymmetric { terminals } => terminals[agent],
        }
    }

    /// The common source, when every agent starts at the same node.
    pub fn common_source(&self) -> Option<usize> {
        let s = self.terminals(0).0;
        (0..self.n())
            .all(|i| self.terminals(i).0 == s)
            .then_some(s)
    }

    /// Same agents on another network (ids of terminal nodes must exist there).
    pub fn with_network(&self, network: Network) -> Result<Game> {
        match &self.agents {
            Agents::Symmetric { n } => Game::symmetric(network, *n),
            Agents::Asymmetric { terminals } => {
                let names: Vec<(String, String)> = terminals
                    .iter()
                    .map(|&(s, t)| {
                        (
                            self.network.node_name(s).to_string(),
                            self.network.node_name(t).to_string(),
                        )
                    })
                    .collect();
                Game::asymmetric(network, &names)
            }
        }
    }

    /// Strategy sets, shared between agents with equal terminals.
    pub fn strategy_space(&self, limits: &Limits) -> Result<StrategySpace> {
        let mut class_terminals: Vec<(usize, usize)> = Vec::new();
        let mut agent_class = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            let t = self.terminals(i);
            let c = match class_terminals.iter().position(|&x| x == t) {
                Some(c) => c,
                None => {
                    class_terminals.push(t);
                    class_terminals.len() - 1
                }
            };
            agent_class.push(c);
        }
        let classes = class_terminals
            .iter()
            .map(|&(s, t)| enumerate_paths(&self.network, s, t, limits.path_cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(StrategySpace {
            classes,
            agent_class,
        })
    }

    /// Checks that the profile assigns every agent a path between its terminals.
    pub fn validate_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.n() != self.n() {
            return Err(Error::Input(format!(
                "profile has {} paths for {} agents",
                profile.n(),
                self.n()
            )));
        }
        for (i, p) in profile.paths().iter().enumerate() {
            let (s, t) = self.terminals(i);
            if p.start() != s || p.end() != t || p.is_empty() {
                return Err(Error::Input(format!(
                    "path of agent {i} does not join its terminals"
                )));
            }
        }
        Ok(())
    }

    /// `x_e(s)`: number of agents whose path contains `e`.
    pub fn usage(&self, profile: &StrategyProfile) -> Vec<u32> {
        let mut x = vec![0u32; self.network.edge_count()];
        for p in profile.paths() {
            for &e in p.edges() {
                x[e] += 1;
            }
        }
        x
    }

    pub fn is_feasible(&self, profile: &StrategyProfile) -> bool {
        self.usage(profile)
            .iter()
            .zip(self.network.edges())
            .all(|(&x, e)| x <= e.capacity)
    }

    /// `Σ_{e ∈ s_i} p_e / x_e(s)`, or `∞` when the profile is infeasible.
    pub fn agent_cost(&self, profile: &StrategyProfile, agent: usize) -> ExtCost {
        let x = self.usage(profile);
        self.agent_cost_with_usage(profile, agent, &x)
    }

    fn agent_cost_with_usage(&self, profile: &StrategyProfile, agent: usize, x: &[u32]) -> ExtCost {
        let feasible = x
            .iter()
            .zip(self.network.edges())
            .all(|(&x, e)| x <= e.capacity);
        if !feasible {
            return ExtCost::Infinite;
        }
        profile.paths()[agent]
            .edges()
            .iter()
            .map(|&e| self.network.edge(e).cost.share(x[e]))
            .sum::<Cost>()
            .into()
    }

    pub fn agent_costs(&self, profile: &StrategyProfile) -> Vec<ExtCost> {
        let x = self.usage(profile);
        (0..profile.n())
            .map(|i| self.agent_cost_with_usage(profile, i, &x))
            .collect()
    }

    /// Sum of agent costs, `∞` when infeasible.
    pub fn social_cost(&self, profile: &StrategyProfile) -> ExtCost {
        let mut total = Cost::zero();
        for c in self.agent_costs(profile) {
            match c {
                ExtCost::Finite(c) => total += c,
                ExtCost::Infinite => return ExtCost::Infinite,
            }
        }
        ExtCost::Finite(total)
    }

    /// Total cost of the edges in use; equals [`Game::social_cost`] on feasible profiles.
    pub fn used_edge_cost(&self, profile: &StrategyProfile) -> Cost {
        self.usage(profile)
            .iter()
            .zip(self.network.edges())
            .filter(|(&x, _)| x > 0)
            .map(|(_, e)| e.cost)
            .sum()
    }

    /// `Φ(s) = Σ_e p_e · H_{x_e(s)}`.
    pub fn potential(&self, profile: &StrategyProfile) -> Result<Cost> {
        if !self.is_feasible(profile) {
            return Err(Error::Domain("potential of an infeasible profile".into()));
        }
        Ok(self
            .usage(profile)
            .iter()
            .zip(self.network.edges())
            .map(|(&x, e)| e.cost * harmonic(x))
            .sum())
    }
}

/// Per-class strategy lists. Agents with equal terminals share a class.
#[derive(Clone, Debug)]
pub struct StrategySpace {
    pub classes: Vec<Vec<Path>>,
    pub agent_class: Vec<usize>,
}

impl StrategySpace {
    pub fn strategies(&self, agent: usize) -> &[Path] {
        &self.classes[self.agent_class[agent]]
    }

    /// Index of `path` in the agent's strategy list.
    pub fn index_of(&self, agent: usize, path: &Path) -> Option<usize> {
        self.strategies(agent).iter().position(|p| p == path)
    }
}

/// One path per agent (`s = (s_1, …, s_n)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    paths: Vec<Path>,
}

impl StrategyProfile {
    pub fn new(paths: Vec<Path>) -> Self {
        StrategyProfile { paths }
    }

    /// Parses per-agent edge-id lists against the game's terminals.
    pub fn from_ids<S: AsRef<str>>(game: &Game, ids: &[Vec<S>]) -> Result<Self> {
        if ids.len() != game.n() {
            return Err(Error::Input(format!(
                "profile has {} paths for {} agents",
                ids.len(),
                game.n()
            )));
        }
        let paths = ids
            .iter()
            .enumerate()
            .map(|(i, p)| Path::from_ids(game.network(), game.terminals(i).0, p))
            .collect::<Result<Vec<_>>>()?;
        let profile = StrategyProfile { paths };
        game.validate_profile(&profile)?;
        Ok(profile)
    }

    pub fn n(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, agent: usize) -> &Path {
        &self.paths[agent]
    }

    pub fn into_paths(self) -> Vec<Path> {
        self.paths
    }

    pub fn to_ids(&self, network: &Network) -> Vec<Vec<String>> {
        self.paths
            .iter()
            .map(|p| p.edge_ids(network).into_iter().map(String::from).collect())
            .collect()
    }

    /// Agents sorted by path (canonical multiset form for symmetric games).
    pub fn canonical(&self, network: &Network) -> StrategyProfile {
        let mut paths = self.paths.clone();
        paths.sort_by(|a, b| a.cmp_ids(b, network));
        StrategyProfile { paths }
    }

    pub fn with_path(&self, agent: usize, path: Path) -> StrategyProfile {
        let mut paths = self.paths.clone();
        paths[agent] = path;
        StrategyProfile { paths }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    fn c(n: i128, d: i128) -> Cost {
        Cost::frac(n, d)
    }

    fn fig1() -> Game {
        let g = NetworkBuilder::directed()
            .edge("a", "s", "t", c(1, 1), 1)
            .edge("b", "s", "v", c(6, 5), 2)
            .edge("c", "v", "t", c(1, 10), 1)
            .edge("d", "v", "t", c(1, 2), 1)
            .build("s", "t")
            .unwrap();
        Game::symmetric(g, 2).unwrap()
    }

    fn ids(paths: &[Path], g: &Network) -> Vec<Vec<String>> {
        paths
            .iter()
            .map(|p| p.edge_ids(g).into_iter().map(String::from).collect())
            .collect()
    }

    #[test]
    fn single_edge_has_one_path() {
        let g = NetworkBuilder::directed()
            .edge("e1", "s", "t", c(1, 1), 1)
            .build("s", "t")
            .unwrap();
        let p = enumerate_paths(&g, g.source(), g.sink(), 10).unwrap();
        assert_eq!(ids(&p, &g), [["e1"]]);
    }

    #[test]
    fn parallel_edges_give_two_paths() {
        let g = NetworkBuilder::directed()
            .edge("e2", "s", "t", c(1, 1), 0)
            .edge("e1", "s", "t", c(1, 1), 1)
            .build("s", "t")
            .unwrap();
        let p = enumerate_paths(&g, g.source(), g.sink(), 10).unwrap();
        assert_eq!(ids(&p, &g), [["e1"], ["e2"]]);
    }

    #[test]
    fn figure_one_paths() {
        let game = fig1();
        let g = game.network();
        let p = enumerate_paths(g, g.source(), g.sink(), 10).unwrap();
        assert_eq!(
            ids(&p, g),
            [vec!["a"], vec!["b", "c"], vec!["b", "d"]]
        );
    }

    #[test]
    fn path_cap_is_a_resource_error() {
        let game = fig1();
        let g = game.network();
        let err = enumerate_paths(g, g.source(), g.sink(), 2).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn undirected_paths_use_both_directions() {
        // s - u - t plus chord s - t and u - t twice
        let g = NetworkBuilder::undirected()
            .edge("x", "u", "s", c(1, 1), 1)
            .edge("y", "t", "u", c(1, 1), 1)
            .build("s", "t")
            .unwrap();
        let p = enumerate_paths(&g, g.source(), g.sink(), 10).unwrap();
        assert_eq!(ids(&p, &g), [["x", "y"]]);
        assert_eq!(p[0].nodes(), [0, 1, 2].map(|i| g.node(["s", "u", "t"][i]).unwrap()));
    }

    #[test]
    fn feasibility_by_capacity() {
        let g = NetworkBuilder::directed()
            .edge("two", "s", "t", c(1, 1), 2)
            .edge("one", "s", "t", c(1, 1), 1)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let both = |id: &str| StrategyProfile::from_ids(&game, &[vec![id], vec![id]]).unwrap();
        assert!(game.is_feasible(&both("two")));
        assert!(!game.is_feasible(&both("one")));
        assert_eq!(game.agent_cost(&both("one"), 0), ExtCost::Infinite);
        assert_eq!(game.social_cost(&both("one")), ExtCost::Infinite);
    }

    #[test]
    fn figure_one_costs() {
        let game = fig1();
        let ne = StrategyProfile::from_ids(&game, &[vec!["a"], vec!["b", "c"]]).unwrap();
        assert!(game.is_feasible(&ne));
        assert_eq!(game.agent_cost(&ne, 0), c(1, 1).into());
        assert_eq!(game.agent_cost(&ne, 1), c(13, 10).into());
        assert_eq!(game.social_cost(&ne), c(23, 10).into());
        let dev = StrategyProfile::from_ids(&game, &[vec!["b", "c"], vec!["b", "d"]]).unwrap();
        assert_eq!(game.agent_cost(&dev, 0), c(7, 10).into());
        assert_eq!(game.agent_cost(&dev, 1), c(11, 10).into());
        assert_eq!(game.potential(&dev).unwrap(), c(6, 5) * c(3, 2) + c(1, 10) + c(1, 2));
    }

    #[test]
    fn potential_examples() {
        let g = NetworkBuilder::directed()
            .edge("e", "s", "t", c(1, 1), 2)
            .edge("f", "s", "t", c(5, 1), 2)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let p = StrategyProfile::from_ids(&game, &[vec!["e"], vec!["e"]]).unwrap();
        assert_eq!(game.potential(&p).unwrap(), c(3, 2));

        let game = fig1();
        let p = StrategyProfile::from_ids(&game, &[vec!["b", "c"], vec!["b", "c"]]).unwrap();
        assert!(matches!(game.potential(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn free_edges_cost_nothing() {
        let g = NetworkBuilder::directed()
            .edge("free", "s", "t", Cost::zero(), 3)
            .edge("paid", "s", "t", c(4, 1), 3)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let p = StrategyProfile::from_ids(&game, &[vec!["free"], vec!["free"]]).unwrap();
        assert_eq!(game.social_cost(&p), Cost::zero().into());
    }

    #[test]
    fn rejects_misplaced_paths() {
        let game = fig1();
        assert!(StrategyProfile::from_ids(&game, &[vec!["c"], vec!["a"]]).is_err());
        assert!(StrategyProfile::from_ids(&game, &[vec!["b"], vec!["a"]]).is_err());
        assert!(StrategyProfile::from_ids(&game, &[vec!["a"]]).is_err());
    }
}
