//! Benchmark instances, the no-SE emulation on non-SPP networks, and
//! seeded random games per topology class.
//!
//! Values not stated numerically in the source constructions were fixed
//! by exact search against the equilibrium oracle; the tests in this crate
//! re-verify every listed constraint.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile};
use crate::network::{Network, NetworkBuilder};
use crate::topology::{classify, find_forbidden_embedding, ForbiddenPattern, TopologyClass};

pub const DEFAULT_EPS: (i128, i128) = (1, 10);
pub const DEFAULT_R: u64 = 100;

pub fn default_eps() -> Cost {
    Cost::frac(DEFAULT_EPS.0, DEFAULT_EPS.1)
}

pub fn default_r() -> Cost {
    Cost::integer(DEFAULT_R)
}

/// Which construction an instance comes from, with its parameters and the
/// constraints it must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub figure: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Cost>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<Cost>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub constraints: Vec<String>,
}

fn c(n: i128, d: i128) -> Cost {
    Cost::frac(n, d)
}

/// Two agents; `a` in parallel with `b` followed by `c ∥ d`.
pub fn build_fig1() -> Game {
    let g = NetworkBuilder::directed()
        .edge("a", "s", "t", c(1, 1), 1)
        .edge("b", "s", "v", c(6, 5), 2)
        .edge("c", "v", "t", c(1, 10), 1)
        .edge("d", "v", "t", c(1, 2), 1)
        .build("s", "t")
        .expect("valid network");
    Game::symmetric(g, 2).expect("valid game")
}

pub fn fig1_spec() -> InstanceSpec {
    InstanceSpec {
        figure: "fig1".into(),
        n: 2,
        eps: None,
        r: None,
        seed: None,
        constraints: vec![
            "cost([a]) alone = 1".into(),
            "cost([b,c]) alone = 13/10".into(),
            "joint deviation ([b,c],[b,d]) costs (7/10, 11/10)".into(),
            "unique NE orbit ([a],[b,c])".into(),
            "no SE".into(),
        ],
    }
}

/// Two agents on the Braess graph; admits a NE but no SE.
pub fn build_fig2_braess() -> Game {
    let g = NetworkBuilder::directed()
        .edge("su", "s", "u", c(1, 2), 2)
        .edge("sv", "s", "v", c(3, 10), 1)
        .edge("uv", "u", "v", c(1, 10), 1)
        .edge("ut", "u", "t", c(1, 10), 1)
        .edge("vt", "v", "t", c(1, 10), 1)
        .build("s", "t")
        .expect("valid network");
    Game::symmetric(g, 2).expect("valid game")
}

pub fn fig2_spec() -> InstanceSpec {
    InstanceSpec {
        figure: "fig2".into(),
        n: 2,
        eps: None,
        r: None,
        seed: None,
        constraints: vec!["NE set non-empty".into(), "no SE".into(), "not SP".into()],
    }
}

/// `n` agents: a chain of `n` segments, each a `(1, 1)` edge parallel to a
/// free edge of capacity `n - 1`, in parallel with a `(1 + ε, 1)` edge.
pub fn build_fig4_sp_spoa(n: usize, eps: Cost) -> Result<Game> {
    if n < 2 {
        return Err(Error::Input("fig4 needs n >= 2".into()));
    }
    let mut b = NetworkBuilder::directed();
    let node = |i: usize| match i {
        0 => "s".to_string(),
        i if i == n => "t".to_string(),
        i => format!("w{i}"),
    };
    for i in 0..n {
        b.push_edge(&format!("c{}", i + 1), &node(i), &node(i + 1), Cost::one(), 1);
        b.push_edge(
            &format!("z{}", i + 1),
            &node(i),
            &node(i + 1),
            Cost::zero(),
            (n - 1) as u32,
        );
    }
    b.push_edge("low", "s", "t", Cost::one() + eps, 1);
    Game::symmetric(b.build("s", "t")?, n)
}

pub fn fig4_spec(n: usize, eps: Cost) -> InstanceSpec {
    InstanceSpec {
        figure: "fig4".into(),
        n,
        eps: Some(eps),
        r: None,
        seed: None,
        constraints: vec![
            "each agent on one cost-1 edge and n-1 free edges is a SE of cost n".into(),
            "optimum = 1 + eps".into(),
            "SPoA = n / (1 + eps)".into(),
        ],
    }
}

/// Two agents, unit capacities: outer paths `a1 a2 a3` and `b1 b2 b3`
/// (`b2` costs `24R`) joined by crossing edges `e: x1→y2`, `f: y1→x2`.
pub fn build_fig5_unbounded_spoa(r: Cost) -> Result<Game> {
    let g = NetworkBuilder::directed()
        .edge("a1", "s", "x1", Cost::one(), 1)
        .edge("a2", "x1", "x2", Cost::one(), 1)
        .edge("a3", "x2", "t", Cost::one(), 1)
        .edge("b1", "s", "y1", Cost::one(), 1)
        .edge("b2", "y1", "y2", Cost::integer(24) * r, 1)
        .edge("b3", "y2", "t", Cost::one(), 1)
        .edge("e", "x1", "y2", Cost::integer(10), 1)
        .edge("f", "y1", "x2", Cost::integer(10), 1)
        .build("s", "t")?;
    Game::symmetric(g, 2)
}

pub fn fig5_spec(r: Cost) -> InstanceSpec {
    InstanceSpec {
        figure: "fig5".into(),
        n: 2,
        eps: None,
        r: Some(r),
        seed: None,
        constraints: vec![
            "profile without inner edges is a SE of cost 24R + 5".into(),
            "optimum = 24".into(),
            "not SP".into(),
        ],
    }
}

/// `n` agents: an upper chain of `n - 1` segments, each a free edge of
/// capacity `n - 2` parallel to a `(1, 1)` edge, in parallel with a direct
/// `(1, 1)` edge and `s→u (1 + ε, 2)` followed by `u→t` branches `(0, 1)`
/// and `(1/2, 1)`.
pub fn build_fig6_sp_spos(n: usize, eps: Cost) -> Result<Game> {
    if n < 3 {
        return Err(Error::Input("fig6 needs n >= 3".into()));
    }
    let mut b = NetworkBuilder::directed();
    let node = |i: usize| match i {
        0 => "s".to_string(),
        i if i == n - 1 => "t".to_string(),
        i => format!("v{i}"),
    };
    for i in 0..n - 1 {
        b.push_edge(
            &format!("z{}", i + 1),
            &node(i),
            &node(i + 1),
            Cost::zero(),
            (n - 2) as u32,
        );
        b.push_edge(&format!("c{}", i + 1), &node(i), &node(i + 1), Cost::one(), 1);
    }
    b.push_edge("direct", "s", "t", Cost::one(), 1);
    b.push_edge("su", "s", "u", Cost::one() + eps, 2);
    b.push_edge("ut0", "u", "t", Cost::zero(), 1);
    b.push_edge("ut1", "u", "t", c(1, 2), 1);
    Game::symmetric(b.build("s", "t")?, n)
}

pub fn fig6_spec(n: usize, eps: Cost) -> InstanceSpec {
    InstanceSpec {
        figure: "fig6".into(),
        n,
        eps: Some(eps),
        r: None,
        seed: None,
        constraints: vec![
            "every SE has every agent paying 1 (social cost n)".into(),
            "optimum = 3/2 + eps".into(),
            "SPoS = n / (3/2 + eps)".into(),
        ],
    }
}

/// Two agents on nodes `s, a, b, c, d, e, t`. The `b→t` link is a pair of
/// parallel edges: `bt` (cheap, capacity 1) and `btR` (cost `R`).
pub fn build_fig7_unbounded_spos(r: Cost) -> Result<Game> {
    let f = |k: i128| c(k, 20);
    let g = NetworkBuilder::directed()
        .edge("sa", "s", "a", f(17), 2)
        .edge("se", "s", "e", f(1), 1)
        .edge("ab", "a", "b", f(9), 1)
        .edge("ac", "a", "c", f(1), 1)
        .edge("ec", "e", "c", f(1), 1)
        .edge("et", "e", "t", f(19), 1)
        .edge("cd", "c", "d", f(8), 1)
        .edge("db", "d", "b", f(1), 1)
        .edge("dt", "d", "t", f(9), 1)
        .edge("bt", "b", "t", f(1), 1)
        .edge("btR", "b", "t", r, 1)
        .build("s", "t")?;
    Game::symmetric(g, 2)
}

pub fn fig7_spec(r: Cost) -> InstanceSpec {
    InstanceSpec {
        figure: "fig7".into(),
        n: 2,
        eps: None,
        r: Some(r),
        seed: None,
        constraints: vec![
            "cost(s,a,b,t) on btR alone = R + 13/10".into(),
            "cost(s,e,c,d,b,t) alone = 3/5".into(),
            "cost(s,e,t) = 1".into(),
            "undirected cost(s,a,b,d,t) = 9/5".into(),
            "both agents on sa: one pays >= 11/10".into(),
            "unique SE orbit with costs (3/5, R + 13/10)".into(),
            "undirected twin has the same unique SE".into(),
        ],
    }
}

/// Single source `s`; agent 1 goes to `t1`, agent 2 to `t2`. Edges
/// `r: s→t1 (R, 1)`, `f: s→t1 (0, 1)`, `g: t1→t2 (0, 1)`, `h: s→t2 (1, 1)`.
pub fn build_fig8_asymmetric(r: Cost) -> Result<Game> {
    let g = NetworkBuilder::directed()
        .edge("r", "s", "t1", r, 1)
        .edge("f", "s", "t1", Cost::zero(), 1)
        .edge("g", "t1", "t2", Cost::zero(), 1)
        .edge("h", "s", "t2", Cost::one(), 1)
        .build("s", "t2")?;
    Game::asymmetric(g, &[("s", "t1"), ("s", "t2")])
}

pub fn fig8_spec(r: Cost) -> InstanceSpec {
    InstanceSpec {
        figure: "fig8".into(),
        n: 2,
        eps: None,
        r: Some(r),
        seed: None,
        constraints: vec![
            "agent 1 on r and agent 2 on (f, g) is a SE of cost R".into(),
            "optimum = 1".into(),
            "EP".into(),
        ],
    }
}

/// Six agents: `e8: s→v (8, 4)`, `f: s→v (4, 2)`, `e5: v→t (5, 5)` and
/// `g: s→t (8, 2)`. The optimum uses `e8, e5, g`.
pub fn build_walkthrough() -> Game {
    let g = NetworkBuilder::directed()
        .edge("e8", "s", "v", Cost::integer(8), 4)
        .edge("f", "s", "v", Cost::integer(4), 2)
        .edge("e5", "v", "t", Cost::integer(5), 5)
        .edge("g", "s", "t", Cost::integer(8), 2)
        .build("s", "t")
        .expect("valid network");
    Game::symmetric(g, 6).expect("valid game")
}

/// The walkthrough's SE: agents 0..=2 on `e8, e5`, agents 3 and 4 on
/// `f, e5`, agent 5 on `g`.
pub fn walkthrough_se(game: &Game) -> StrategyProfile {
    let p = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let ids = [
        p(&["e8", "e5"]),
        p(&["e8", "e5"]),
        p(&["e8", "e5"]),
        p(&["f", "e5"]),
        p(&["f", "e5"]),
        p(&["g"]),
    ];
    StrategyProfile::from_ids(game, &ids).expect("valid profile")
}

pub fn walkthrough_spec() -> InstanceSpec {
    InstanceSpec {
        figure: "walkthrough".into(),
        n: 6,
        eps: None,
        r: None,
        seed: None,
        constraints: vec![
            "stated profile is a SE".into(),
            "optimum uses exactly e8, e5, g".into(),
            "chooser leaves agent 4 (0-based) unassigned and moves agent 3 to e8".into(),
        ],
    }
}

/// Two-agent no-SE values per pattern edge.
fn pattern_values(pattern: ForbiddenPattern) -> Vec<(&'static str, Cost, u32)> {
    match pattern {
        ForbiddenPattern::Braess => vec![
            ("su", c(1, 2), 2),
            ("sv", c(3, 10), 1),
            ("uv", c(1, 10), 1),
            ("ut", c(1, 10), 1),
            ("vt", c(1, 10), 1),
        ],
        ForbiddenPattern::EdgeThenParallel => vec![
            ("a", c(1, 1), 1),
            ("b", c(6, 5), 2),
            ("c", c(1, 10), 1),
            ("d", c(1, 2), 1),
        ],
        // The reversal of the previous pattern.
        ForbiddenPattern::ParallelThenEdge => vec![
            ("a", c(1, 1), 1),
            ("b", c(1, 10), 1),
            ("c", c(1, 2), 1),
            ("d", c(6, 5), 2),
        ],
        // The first variant followed by a free edge.
        ForbiddenPattern::EdgeParallelEdge => vec![
            ("a", c(1, 1), 1),
            ("b", c(6, 5), 2),
            ("c", c(1, 10), 1),
            ("d", c(1, 2), 1),
            ("e", c(0, 1), 2),
        ],
    }
}

/// A two-agent symmetric game without SE on any non-SPP network.
///
/// Each pattern edge's host path takes the pattern cost on its first edge
/// and cost 0 after it, all with the pattern capacity. Extension edges
/// cost 0 with capacity 2; every other host edge gets capacity 0.
pub fn build_no_se_game(network: &Network) -> Result<Game> {
    if network.edge_count() > 0 && classify(network).map(|c| c.spp).unwrap_or(false) {
        return Err(Error::Domain("network is SPP; every game on it has a SE".into()));
    }
    let witness = find_forbidden_embedding(network)
        .ok_or_else(|| Error::Domain("no forbidden embedding found".into()))?;
    let n = 2u32;
    let values = pattern_values(witness.pattern);
    let mut assigned: Vec<Option<(Cost, u32)>> = vec![None; network.edge_count()];
    for (pid, path) in &witness.edge_paths {
        let &(_, p, cap) = values.iter().find(|(id, _, _)| id == pid).unwrap();
        for (k, id) in path.iter().enumerate() {
            let e = network.edge_by_id(id).unwrap();
            assigned[e] = Some((if k == 0 { p } else { Cost::zero() }, cap));
        }
    }
    for id in witness.source_extension.iter().chain(&witness.sink_extension) {
        let e = network.edge_by_id(id).unwrap();
        assigned[e] = Some((Cost::zero(), n));
    }
    let emulated = network.map_edges(|e| {
        let idx = network.edge_by_id(&e.id).unwrap();
        assigned[idx].unwrap_or((e.cost, 0))
    });
    Game::symmetric(emulated, n as usize)
}

/// Target class for [`random_game`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomClass {
    ParallelEdges,
    ParallelPaths,
    Spp,
    Ep,
    Sp,
    General,
}

impl RandomClass {
    pub fn holds(self, class: &TopologyClass) -> bool {
        match self {
            RandomClass::ParallelEdges => class.parallel_edges,
            RandomClass::ParallelPaths => class.parallel_paths,
            RandomClass::Spp => class.spp,
            RandomClass::Ep => class.ep,
            RandomClass::Sp => class.sp,
            RandomClass::General => true,
        }
    }
}

impl std::str::FromStr for RandomClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "parallel_edges" | "parallel-edges" => RandomClass::ParallelEdges,
            "parallel_paths" | "parallel-paths" => RandomClass::ParallelPaths,
            "spp" => RandomClass::Spp,
            "ep" => RandomClass::Ep,
            "sp" => RandomClass::Sp,
            "general" => RandomClass::General,
            other => return Err(Error::Input(format!("unknown topology class {other:?}"))),
        })
    }
}

/// Small-grid rational costs.
const COST_GRID: [(i128, i128); 8] = [(0, 1), (1, 2), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1), (1, 10)];

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    builder: NetworkBuilder,
    nodes: usize,
    edges: usize,
    n: usize,
}

impl Gen<'_> {
    fn node(&mut self) -> String {
        self.nodes += 1;
        format!("v{}", self.nodes)
    }

    fn edge(&mut self, from: &str, to: &str) {
        let (p, q) = *COST_GRID.choose(self.rng).unwrap();
        let cap = self.rng.gen_range(0..=self.n as u32 + 1);
        let id = format!("e{}", self.edges);
        self.edges += 1;
        self.builder.push_edge(&id, from, to, Cost::frac(p, q), cap);
    }

    fn chain(&mut self, from: &str, to: &str, len: usize) {
        let mut at = from.to_string();
        for i in 0..len {
            let next = if i + 1 == len { to.to_string() } else { self.node() };
            self.edge(&at, &next);
            at = next;
        }
    }

    fn parallel_paths(&mut self, from: &str, to: &str, budget: usize) {
        let k = self.rng.gen_range(1..=budget.clamp(1, 3));
        for _ in 0..k {
            let len = self.rng.gen_range(1..=2);
            self.chain(from, to, len);
        }
    }

    fn ep(&mut self, from: &str, to: &str, budget: usize) {
        if budget <= 1 {
            return self.edge(from, to);
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let k = self.rng.gen_range(2..=3.min(budget));
                for _ in 0..k {
                    self.ep(from, to, budget / k);
                }
            }
            1 => {
                let mid = self.node();
                self.edge(from, &mid);
                self.ep(&mid, to, budget - 1);
            }
            _ => {
                let mid = self.node();
                self.ep(from, &mid, budget - 1);
                self.edge(&mid, to);
            }
        }
    }

    fn sp(&mut self, from: &str, to: &str, budget: usize) {
        if budget <= 1 {
            return self.edge(from, to);
        }
        let k = self.rng.gen_range(2..=3.min(budget));
        if self.rng.gen_bool(0.5) {
            for _ in 0..k {
                self.sp(from, to, budget / k);
            }
        } else {
            let mut at = from.to_string();
            for i in 0..k {
                let next = if i + 1 == k { to.to_string() } else { self.node() };
                self.sp(&at, &next, budget / k);
                at = next;
            }
        }
    }
}

/// Seeded symmetric random game on a network of the requested class.
/// `size` bounds the number of edges roughly. Infeasible draws are
/// rejected and redrawn from the same stream.
pub fn random_game(class: RandomClass, n: usize, size: usize, seed: u64) -> Result<Game> {
    if n == 0 {
        return Err(Error::Input("random games need at least one agent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let network = random_network(&mut rng, class, n, size.max(1))?;
        if !RandomClass::holds(class, &classify(&network)?) {
            continue;
        }
        let game = Game::symmetric(network, n)?;
        if crate::optimal::game_is_feasible(&game)? {
            return Ok(game);
        }
    }
    Err(Error::Domain("no feasible random game after 1000 draws".into()))
}

fn random_network(
    rng: &mut ChaCha8Rng,
    class: RandomClass,
    n: usize,
    size: usize,
) -> Result<Network> {
    let mut g = Gen {
        rng,
        builder: NetworkBuilder::directed().node("s").node("t"),
        nodes: 0,
        edges: 0,
        n,
    };
    match class {
        RandomClass::ParallelEdges => {
            let k = g.rng.gen_range(1..=size.min(4));
            for _ in 0..k {
                g.edge("s", "t");
            }
        }
        RandomClass::ParallelPaths => g.parallel_paths("s", "t", size),
        RandomClass::Spp => {
            let blocks = g.rng.gen_range(1..=3.min(size));
            let mut at = "s".to_string();
            for i in 0..blocks {
                let next = if i + 1 == blocks { "t".to_string() } else { g.node() };
                g.parallel_paths(&at, &next, (size / blocks).max(1));
                at = next;
            }
        }
        RandomClass::Ep => g.ep("s", "t", size),
        RandomClass::Sp => g.sp("s", "t", size),
        RandomClass::General => {
            g.sp("s", "t", size);
            let built = g.builder.clone().build("s", "t")?;
            // Forward chords between interior nodes of a topological order.
            let order = topological_order(&built);
            let extra = g.rng.gen_range(1..=2);
            for _ in 0..extra {
                if order.len() < 2 {
                    break;
                }
                let i = g.rng.gen_range(0..order.len() - 1);
                let j = g.rng.gen_range(i + 1..order.len());
                let (u, w) = (built.node_name(order[i]).to_string(), built.node_name(order[j]).to_string());
                if (u == "s" && w == "t") || u == w {
                    continue;
                }
                g.edge(&u, &w);
            }
        }
    }
    g.builder.build("s", "t")
}

fn topological_order(network: &Network) -> Vec<usize> {
    let mut indeg: Vec<usize> = (0..network.node_count())
        .map(|v| network.in_edges(v).len())
        .collect();
    let mut ready: Vec<usize> = (0..network.node_count()).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::new();
    while let Some(v) = ready.pop() {
        out.push(v);
        for &e in network.out_edges(v) {
            let w = network.edge(e).to;
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    out
}

/// Seeded asymmetric game on a random SPP network. With `single_source`
/// every agent starts at the network source; otherwise the network is a
/// chain of parallel-edge blocks with at most one parallel-paths block and
/// terminals are drawn from all its nodes.
pub fn random_asymmetric_spp(n: usize, size: usize, single_source: bool, seed: u64) -> Result<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let network = if single_source {
            random_network(&mut rng, RandomClass::Spp, n, size.max(1))?
        } else {
            random_edge_chain(&mut rng, n, size.max(1))?
        };
        let order = topological_order(&network);
        let pos = |v: usize| order.iter().position(|&x| x == v).unwrap();
        let mut pairs = Vec::new();
        for _ in 0..n {
            let (s, t) = if single_source {
                let t = *order[1..].choose(&mut rng).unwrap();
                (network.source(), t)
            } else {
                let i = rng.gen_range(0..order.len() - 1);
                let j = rng.gen_range(i + 1..order.len());
                (order[i], order[j])
            };
            debug_assert!(pos(s) < pos(t));
            pairs.push((
                network.node_name(s).to_string(),
                network.node_name(t).to_string(),
            ));
        }
        let game = match Game::asymmetric(network, &pairs) {
            Ok(g) => g,
            Err(_) => continue,
        };
        // Topological order does not guarantee reachability; skip such draws.
        let limits = crate::game::Limits::default();
        let space = game.strategy_space(&limits)?;
        if (0..n).any(|i| space.strategies(i).is_empty()) {
            continue;
        }
        if crate::optimal::game_is_feasible(&game)? {
            return Ok(game);
        }
    }
    Err(Error::Domain("no feasible random game after 1000 draws".into()))
}

fn random_edge_chain(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Result<Network> {
    let mut g = Gen {
        rng,
        builder: NetworkBuilder::directed().node("s").node("t"),
        nodes: 0,
        edges: 0,
        n,
    };
    let blocks = g.rng.gen_range(1..=3.min(size));
    let special = g.rng.gen_range(0..blocks);
    let mut at = "s".to_string();
    for i in 0..blocks {
        let next = if i + 1 == blocks { "t".to_string() } else { g.node() };
        if i == special {
            g.parallel_paths(&at, &next, 3);
        } else {
            let k = g.rng.gen_range(1..=2);
            for _ in 0..k {
                g.edge(&at, &next);
            }
        }
        at = next;
    }
    g.builder.build("s", "t")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig4_shape() {
        let g = build_fig4_sp_spoa(3, default_eps()).unwrap();
        assert_eq!(g.network().edge_count(), 7);
        let class = classify(g.network()).unwrap();
        assert!(class.sp && !class.ep && !class.spp);
    }

    #[test]
    fn random_games_are_reproducible() {
        let a = random_game(RandomClass::Spp, 3, 6, 7).unwrap();
        let b = random_game(RandomClass::Spp, 3, 6, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_classes_hold() {
        for class in [
            RandomClass::ParallelEdges,
            RandomClass::ParallelPaths,
            RandomClass::Spp,
            RandomClass::Ep,
            RandomClass::Sp,
        ] {
            for seed in 0..10 {
                let g = random_game(class, 2, 6, seed).unwrap();
                assert!(class.holds(&classify(g.network()).unwrap()), "{class:?} {seed}");
            }
        }
    }
}
