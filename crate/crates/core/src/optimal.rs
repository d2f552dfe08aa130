//! Social optimum, the SE-compatible choice of optimal profile on EP and
//! SPP networks, and the combined-profile feasibility check.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use crate::cost::Cost;
use crate::equilibria::{agent_parts, Part};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::game::{enumerate_paths, Game, Limits, Path, StrategyProfile};
use crate::network::Network;
use crate::topology::{decompose_sp, DecompositionTree, SpDecomposition, SppChain};

/// An optimal profile with its cost and used edges (sorted ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub profile: StrategyProfile,
    pub cost: Cost,
    pub used_edges: Vec<String>,
}

/// Integral max-flow on a small residual graph.
struct Flow {
    head: Vec<usize>,
    cap: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Flow {
    fn new(nodes: usize) -> Self {
        Flow {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) -> usize {
        let id = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.adj[u].push(id);
        self.head.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
        id
    }

    /// Augments along shortest paths until `limit` units flow.
    fn run(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total < limit {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.head[a];
                    if self.cap[a] > 0 && !seen[v] {
                        seen[v] = true;
                        prev[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut push = limit - total;
            let mut v = t;
            while v != s {
                let a = prev[v];
                push = push.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = prev[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.head[a ^ 1];
            }
            total += push;
        }
        total
    }
}

/// Source/sink demands when the game reduces to a single-commodity flow.
struct Demands {
    sources: BTreeMap<usize, i64>,
    sinks: BTreeMap<usize, i64>,
}

fn flow_demands(game: &Game) -> Option<Demands> {
    let mut sources = BTreeMap::new();
    let mut sinks = BTreeMap::new();
    for i in 0..game.n() {
        let (s, t) = game.terminals(i);
        *sources.entry(s).or_insert(0) += 1;
        *sinks.entry(t).or_insert(0) += 1;
    }
    (sources.len() == 1 || sinks.len() == 1).then_some(Demands { sources, sinks })
}

/// Builds the flow network on `edges`; returns (flow, arc per edge and
/// direction, super source, super sink).
fn build_flow(
    network: &Network,
    edges: &[usize],
    d: &Demands,
) -> (Flow, Vec<(usize, usize, Option<usize>)>, usize, usize) {
    let nn = network.node_count();
    let (ss, tt) = (nn, nn + 1);
    let mut f = Flow::new(nn + 2);
    let mut arcs = Vec::new();
    for &e in edges {
        let edge = network.edge(e);
        let c = i64::from(edge.capacity);
        let fwd = f.add(edge.from, edge.to, c);
        let back = (!network.is_directed()).then(|| f.add(edge.to, edge.from, c));
        arcs.push((e, fwd, back));
    }
    for (&s, &k) in &d.sources {
        f.add(ss, s, k);
    }
    for (&t, &k) in &d.sinks {
        f.add(t, tt, k);
    }
    (f, arcs, ss, tt)
}

fn routes(network: &Network, edges: &[usize], d: &Demands, n: i64) -> bool {
    let (mut f, _, ss, tt) = build_flow(network, edges, d);
    f.run(ss, tt, n) == n
}

/// Routes the agents on `edges` and decomposes the flow into one simple
/// path per agent.
fn route_profile(game: &Game, edges: &[usize], d: &Demands) -> Result<StrategyProfile> {
    let network = game.network();
    let n = game.n() as i64;
    let (mut f, arcs, ss, tt) = build_flow(network, edges, d);
    if f.run(ss, tt, n) != n {
        return Err(Error::Domain("no feasible profile".into()));
    }
    // Net flow per edge as (from, to, units).
    let mut flow: Vec<(usize, usize, usize, i64)> = Vec::new();
    for &(e, fwd, back) in &arcs {
        let edge = network.edge(e);
        let mut x = f.cap[fwd ^ 1];
        if let Some(b) = back {
            x -= f.cap[b ^ 1];
        }
        if x > 0 {
            flow.push((e, edge.from, edge.to, x));
        } else if x < 0 {
            flow.push((e, edge.to, edge.from, -x));
        }
    }
    cancel_cycles(&mut flow, network.node_count());

    let mut supply = d.sources.clone();
    let mut demand = d.sinks.clone();
    let mut by_terminals: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..game.n() {
        by_terminals.entry(game.terminals(i)).or_default().push(i);
    }
    let mut paths: Vec<Option<Path>> = vec![None; game.n()];
    for _ in 0..n {
        let (&s, _) = supply.iter().find(|(_, &k)| k > 0).expect("supply left");
        let mut at = s;
        let mut ids = Vec::new();
        let mut seen = HashSet::from([s]);
        // Walk until reaching a sink with remaining demand where an agent
        // with these terminals is still unrouted.
        loop {
            let wanted = demand.get(&at).copied().unwrap_or(0) > 0
                && by_terminals.get(&(s, at)).is_some_and(|v| !v.is_empty());
            if wanted {
                break;
            }
            let k = flow
                .iter()
                .position(|&(_, u, _, x)| u == at && x > 0)
                .ok_or_else(|| Error::Domain("flow decomposition failed".into()))?;
            flow[k].3 -= 1;
            ids.push(network.edge(flow[k].0).id.clone());
            at = flow[k].2;
            if !seen.insert(at) {
                return Err(Error::Domain("flow decomposition met a cycle".into()));
            }
        }
        *supply.get_mut(&s).unwrap() -= 1;
        *demand.get_mut(&at).unwrap() -= 1;
        let agent = by_terminals.get_mut(&(s, at)).unwrap().remove(0);
        paths[agent] = Some(Path::from_ids(network, s, &ids)?);
    }
    Ok(StrategyProfile::new(paths.into_iter().map(Option::unwrap).collect()))
}

/// Removes directed cycles from a flow (never increases cost).
fn cancel_cycles(flow: &mut [(usize, usize, usize, i64)], nodes: usize) {
    loop {
        // DFS for a cycle among positive arcs.
        let mut state = vec![0u8; nodes];
        let mut stack_arcs: Vec<usize> = Vec::new();
        let mut found: Option<Vec<usize>> = None;
        fn dfs(
            u: usize,
            flow: &[(usize, usize, usize, i64)],
            state: &mut [u8],
            stack: &mut Vec<usize>,
            found: &mut Option<Vec<usize>>,
        ) {
            state[u] = 1;
            for (k, &(_, a, b, x)) in flow.iter().enumerate() {
                if found.is_some() {
                    return;
                }
                if a != u || x <= 0 {
                    continue;
                }
                stack.push(k);
                if state[b] == 1 {
                    let start = stack.iter().position(|&j| flow[j].1 == b).unwrap();
                    *found = Some(stack[start..].to_vec());
                    return;
                }
                if state[b] == 0 {
                    dfs(b, flow, state, stack, found);
                }
                stack.pop();
            }
            state[u] = 2;
        }
        for v in 0..nodes {
            if state[v] == 0 && found.is_none() {
                dfs(v, flow, &mut state, &mut stack_arcs, &mut found);
            }
        }
        match found {
            Some(cycle) => {
                let m = cycle.iter().map(|&k| flow[k].3).min().unwrap();
                for k in cycle {
                    flow[k].3 -= m;
                }
            }
            None => return,
        }
    }
}

fn sorted_ids(network: &Network, edges: &[usize]) -> Vec<String> {
    let mut ids: Vec<String> = edges.iter().map(|&e| network.edge(e).id.clone()).collect();
    ids.sort();
    ids
}

struct BranchAndBound<'a> {
    network: &'a Network,
    order: Vec<usize>,
    d: &'a Demands,
    n: i64,
    best: Option<(Cost, Vec<String>, Vec<usize>)>,
    visited: u128,
    cap: u128,
}

impl BranchAndBound<'_> {
    fn consider(&mut self, chosen: &[usize]) {
        // Shrink to an inclusion-minimal routable subset.
        let mut set = chosen.to_vec();
        for &e in chosen.iter().rev() {
            let without: Vec<usize> = set.iter().copied().filter(|&x| x != e).collect();
            if routes(self.network, &without, self.d, self.n) {
                set = without;
            }
        }
        let cost: Cost = set.iter().map(|&e| self.network.edge(e).cost).sum();
        let ids = sorted_ids(self.network, &set);
        let better = match &self.best {
            None => true,
            Some((c, i, _)) => (cost, &ids) < (*c, i),
        };
        if better {
            self.best = Some((cost, ids, set));
        }
    }

    fn go(&mut self, k: usize, chosen: &mut Vec<usize>, cost: Cost) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::Resource {
                what: "branch-and-bound nodes".into(),
                required: 1u128 << self.order.len().min(127),
                cap: self.cap,
            });
        }
        if let Some((b, _, _)) = &self.best {
            if cost > *b {
                return Ok(());
            }
        }
        if routes(self.network, chosen, self.d, self.n) {
            self.consider(chosen);
            return Ok(());
        }
        if k == self.order.len() {
            return Ok(());
        }
        let mut optimistic = chosen.clone();
        optimistic.extend_from_slice(&self.order[k..]);
        if !routes(self.network, &optimistic, self.d, self.n) {
            return Ok(());
        }
        let e = self.order[k];
        chosen.push(e);
        self.go(k + 1, chosen, cost + self.network.edge(e).cost)?;
        chosen.pop();
        self.go(k + 1, chosen, cost)
    }
}

/// Minimum social cost with a witness profile.
///
/// Games with one common source or one common sink are solved by
/// branch-and-bound over used-edge subsets with max-flow feasibility;
/// other games by exhaustive profile enumeration. Among optima the
/// inclusion-minimal used-edge set with the smallest sorted id sequence wins.
pub fn solve_optimal(game: &Game, limits: &Limits) -> Result<Optimum> {
    let Some(d) = flow_demands(game) else {
        return solve_optimal_exhaustive(game, limits);
    };
    let network = game.network();
    let mut order: Vec<usize> = (0..network.edge_count())
        .filter(|&e| network.edge(e).capacity > 0)
        .collect();
    order.sort_by(|&a, &b| network.edge(a).id.cmp(&network.edge(b).id));
    let mut bb = BranchAndBound {
        network,
        order,
        d: &d,
        n: game.n() as i64,
        best: None,
        visited: 0,
        cap: limits.profile_cap,
    };
    bb.go(0, &mut Vec::new(), Cost::zero())?;
    let (cost, used_edges, set) = bb
        .best
        .ok_or_else(|| Error::Domain("infeasible game: no feasible profile".into()))?;
    let profile = route_profile(game, &set, &d)?;
    Ok(Optimum {
        profile,
        cost,
        used_edges,
    })
}

/// Whether some profile respects every capacity.
pub fn game_is_feasible(game: &Game) -> Result<bool> {
    if let Some(d) = flow_demands(game) {
        let network = game.network();
        let all: Vec<usize> = (0..network.edge_count()).collect();
        return Ok(routes(network, &all, &d, game.n() as i64));
    }
    match solve_optimal_exhaustive(game, &Limits::default()) {
        Ok(_) => Ok(true),
        Err(Error::Domain(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Exhaustive optimum over all profiles (orbits, for symmetric games).
/// Ties go to the smallest sorted used-edge id sequence.
pub fn solve_optimal_exhaustive(game: &Game, limits: &Limits) -> Result<Optimum> {
    let ev = Evaluator::new(game, limits)?;
    let n = game.n();
    let counts: Vec<usize> = (0..n).map(|i| ev.strategy_count(i)).collect();
    let total = counts
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
        .unwrap_or(u128::MAX);
    if !game.is_symmetric() && total > limits.profile_cap {
        return Err(Error::Resource {
            what: "strategy profiles".into(),
            required: total,
            cap: limits.profile_cap,
        });
    }
    let network = game.network();
    let mut best: Option<(i128, Vec<String>, Vec<usize>)> = None;
    let mut cur = vec![0usize; n];
    let mut scanned: u128 = 0;
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Domain("infeasible game: an agent has no path".into()));
    }
    loop {
        scanned += 1;
        if scanned > limits.profile_cap {
            return Err(Error::Resource {
                what: "strategy profiles".into(),
                required: total,
                cap: limits.profile_cap,
            });
        }
        let x = ev.usage(&cur);
        if ev.feasible(&x) {
            let cost = ev.social_scaled(&x);
            let used: Vec<usize> = (0..x.len()).filter(|&e| x[e] > 0).collect();
            let ids = sorted_ids(network, &used);
            if best.as_ref().map_or(true, |(c, i, _)| (cost, &ids) < (*c, i)) {
                best = Some((cost, ids, cur.clone()));
            }
        }
        if !crate::equilibria::advance_profile(&mut cur, &counts, game.is_symmetric()) {
            break;
        }
    }
    let (cost, used_edges, cur) =
        best.ok_or_else(|| Error::Domain("infeasible game: no feasible profile".into()))?;
    Ok(Optimum {
        profile: ev.profile(&cur),
        cost: ev.to_cost(cost),
        used_edges,
    })
}

/// Paths for a subset of agents; the rest are unassigned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialProfile {
    pub paths: Vec<Option<Path>>,
    /// Set when an extension edge could not take every agent routed
    /// through its subnetwork and some were left unassigned.
    pub capacity_guard_triggered: bool,
}

impl PartialProfile {
    pub fn assigned(&self) -> Vec<usize> {
        (0..self.paths.len())
            .filter(|&i| self.paths[i].is_some())
            .collect()
    }

    pub fn usage(&self, network: &Network) -> Vec<u32> {
        let mut x = vec![0u32; network.edge_count()];
        for p in self.paths.iter().flatten() {
            for &e in p.edges() {
                x[e] += 1;
            }
        }
        x
    }
}

/// Agent → edge-id sequence of the part of their path inside a subtree.
type Assignment = Vec<Option<Vec<String>>>;

struct Chooser<'a> {
    /// Agents using each edge id in the reference profile.
    users: BTreeMap<String, Vec<usize>>,
    capacity: BTreeMap<String, u32>,
    n: usize,
    guard: bool,
    limits: &'a Limits,
}

impl Chooser<'_> {
    fn users_of(&self, id: &str) -> &[usize] {
        self.users.get(id).map_or(&[], Vec::as_slice)
    }

    fn run(&mut self, tree: &DecompositionTree, agents: &[bool]) -> Result<Assignment> {
        match tree {
            DecompositionTree::Edge(id) => {
                let mut out = vec![None; self.n];
                for &i in self.users_of(id) {
                    if agents[i] {
                        out[i] = Some(vec![id.clone()]);
                    }
                }
                Ok(out)
            }
            DecompositionTree::Parallel(children) => {
                let mut out: Assignment = vec![None; self.n];
                let mut taken = vec![false; self.n];
                for child in children {
                    let mut mine = vec![false; self.n];
                    for id in child.leaves() {
                        for &i in self.users_of(id) {
                            if agents[i] && !taken[i] {
                                mine[i] = true;
                            }
                        }
                    }
                    for i in 0..self.n {
                        taken[i] |= mine[i];
                    }
                    let sub = self.run(child, &mine)?;
                    for (i, p) in sub.into_iter().enumerate() {
                        if p.is_some() {
                            out[i] = p;
                        }
                    }
                }
                Ok(out)
            }
            DecompositionTree::Series(factors) => {
                let first = &factors[0];
                let last = &factors[factors.len() - 1];
                let count = |t: &DecompositionTree| match t {
                    DecompositionTree::Edge(id) => self
                        .users_of(id)
                        .iter()
                        .filter(|&&i| agents[i])
                        .count(),
                    _ => 0,
                };
                // Peel the end edge used by more agents; the source side on ties.
                let at_front = match (first.is_edge(), last.is_edge()) {
                    (true, true) => count(first) >= count(last),
                    (true, false) => true,
                    (false, true) => false,
                    (false, false) => {
                        return Err(Error::Domain("optimal subnetwork is not EP".into()))
                    }
                };
                let (edge, rest) = if at_front {
                    (first, &factors[1..])
                } else {
                    (last, &factors[..factors.len() - 1])
                };
                let DecompositionTree::Edge(e) = edge else { unreachable!() };
                let inner = if rest.len() == 1 {
                    rest[0].clone()
                } else {
                    DecompositionTree::Series(rest.to_vec())
                };
                let mut sub = self.run(&inner, agents)?;
                let cap_e = self.capacity[e] as usize;
                // Step 3(b), with a guard on the extension edge capacity.
                let mut load = 0usize;
                for p in sub.iter_mut() {
                    if p.is_some() {
                        if load == cap_e {
                            *p = None;
                            self.guard = true;
                        } else {
                            load += 1;
                        }
                    }
                }
                // Step 3(c): other users of e try an available path of the rest.
                let mut x: BTreeMap<String, u32> = BTreeMap::new();
                for p in sub.iter().flatten() {
                    for id in p {
                        *x.entry(id.clone()).or_default() += 1;
                    }
                }
                let candidates = tree_paths(&inner, self.limits.path_cap)?;
                for i in self.users_of(e).to_vec() {
                    if !agents[i] || sub[i].is_some() {
                        continue;
                    }
                    let free = candidates.iter().find(|p| {
                        p.iter().all(|id| x.get(id).copied().unwrap_or(0) < self.capacity[id])
                    });
                    if let Some(p) = free {
                        if load == cap_e {
                            self.guard = true;
                            continue;
                        }
                        for id in p {
                            *x.entry(id.clone()).or_default() += 1;
                        }
                        load += 1;
                        sub[i] = Some(p.clone());
                    }
                }
                for p in sub.iter_mut().flatten() {
                    if at_front {
                        p.insert(0, e.clone());
                    } else {
                        p.push(e.clone());
                    }
                }
                Ok(sub)
            }
        }
    }
}

/// All source-to-sink edge-id sequences of a subtree, in canonical order.
fn tree_paths(tree: &DecompositionTree, cap: usize) -> Result<Vec<Vec<String>>> {
    let too_many = || Error::Resource {
        what: "simple paths".into(),
        required: cap as u128 + 1,
        cap: cap as u128,
    };
    let mut out = match tree {
        DecompositionTree::Edge(id) => vec![vec![id.clone()]],
        DecompositionTree::Parallel(c) => {
            let mut all = Vec::new();
            for t in c {
                all.extend(tree_paths(t, cap)?);
                if all.len() > cap {
                    return Err(too_many());
                }
            }
            all
        }
        DecompositionTree::Series(c) => {
            let mut acc: Vec<Vec<String>> = vec![Vec::new()];
            for t in c {
                let parts = tree_paths(t, cap)?;
                if acc.len().saturating_mul(parts.len()) > cap {
                    return Err(too_many());
                }
                acc = acc
                    .iter()
                    .flat_map(|a| {
                        parts.iter().map(move |p| {
                            let mut v = a.clone();
                            v.extend(p.iter().cloned());
                            v
                        })
                    })
                    .collect();
            }
            acc
        }
    };
    out.sort();
    Ok(out)
}

fn sp_tree(network: &Network) -> Result<DecompositionTree> {
    match decompose_sp(network)? {
        SpDecomposition::Sp(t) => Ok(t),
        SpDecomposition::NotSp(_) => Err(Error::Domain("network is not series-parallel".into())),
    }
}

/// The optimal-profile chooser on an EP subnetwork `g_opt` (same node and edge ids as the
/// game network). Paths of the result live on `g_opt`.
pub fn choose_optimal_profile(
    g_opt: &Network,
    se_profile: &StrategyProfile,
    game: &Game,
    limits: &Limits,
) -> Result<PartialProfile> {
    let tree = sp_tree(g_opt)?;
    if !crate::topology::classify_tree(&tree).ep {
        return Err(Error::Domain("optimal subnetwork is not EP".into()));
    }
    if !game.is_feasible(se_profile) {
        return Err(Error::Domain("reference profile is infeasible".into()));
    }
    let n = se_profile.n();
    let mut users: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, p) in se_profile.paths().iter().enumerate() {
        for id in p.edge_ids(game.network()) {
            users.entry(id.to_string()).or_default().push(i);
        }
    }
    let capacity = g_opt
        .edges()
        .iter()
        .map(|e| (e.id.clone(), e.capacity))
        .collect();
    let mut chooser = Chooser {
        users,
        capacity,
        n,
        guard: false,
        limits,
    };
    let assignment = chooser.run(&tree, &vec![true; n])?;
    let paths = assignment
        .into_iter()
        .map(|p| {
            p.map(|ids| Path::from_ids(g_opt, g_opt.source(), &ids))
                .transpose()
        })
        .collect::<Result<_>>()?;
    Ok(PartialProfile {
        paths,
        capacity_guard_triggered: chooser.guard,
    })
}

/// Completes a partial profile on `g_opt` one agent at a time, each on the
/// first feasible path (canonical order) that uses only edges of `template`.
pub fn extend_partial_profile(
    g_opt: &Network,
    template: &StrategyProfile,
    partial: &PartialProfile,
    limits: &Limits,
) -> Result<StrategyProfile> {
    sp_tree(g_opt)?;
    if template.n() != partial.paths.len() {
        return Err(Error::Input("template and partial profile sizes differ".into()));
    }
    let mut x = vec![0u32; g_opt.edge_count()];
    for p in template.paths() {
        for &e in p.edges() {
            x[e] += 1;
        }
    }
    if (0..g_opt.edge_count()).any(|e| x[e] > g_opt.edge(e).capacity) {
        return Err(Error::Domain("template profile is infeasible".into()));
    }
    let mut used: Vec<usize> = (0..g_opt.edge_count()).filter(|&e| x[e] > 0).collect();
    used.sort_unstable();
    let allowed = g_opt.subnetwork(&used);
    let candidates: Vec<Path> = enumerate_paths(
        &allowed,
        allowed.source(),
        allowed.sink(),
        limits.path_cap,
    )?
    .iter()
    .map(|p| Path::from_ids(g_opt, g_opt.source(), &p.edge_ids(&allowed)))
    .collect::<Result<_>>()?;

    let mut load = partial.usage(g_opt);
    if (0..g_opt.edge_count()).any(|e| load[e] > g_opt.edge(e).capacity) {
        return Err(Error::Domain("partial profile is infeasible".into()));
    }
    let mut paths = partial.paths.clone();
    for p in paths.iter_mut() {
        if p.is_some() {
            continue;
        }
        let free = candidates
            .iter()
            .find(|c| c.edges().iter().all(|&e| load[e] < g_opt.edge(e).capacity))
            .ok_or_else(|| {
                Error::Domain("no feasible completion path within the template's edges".into())
            })?;
        for &e in free.edges() {
            load[e] += 1;
        }
        *p = Some(free.clone());
    }
    Ok(StrategyProfile::new(paths.into_iter().map(Option::unwrap).collect()))
}

/// Re-expresses a profile on another network with the same edge ids.
pub fn lift_profile(
    profile: &StrategyProfile,
    from: &Network,
    to: &Network,
) -> Result<StrategyProfile> {
    let paths = profile
        .paths()
        .iter()
        .map(|p| {
            let start = to.require_node(from.node_name(p.start()))?;
            Path::from_ids(to, start, &p.edge_ids(from))
        })
        .collect::<Result<_>>()?;
    Ok(StrategyProfile::new(paths))
}

/// Outcome of the EP pipeline: the chosen optimal profile and the partial
/// profile it was completed from.
#[derive(Clone, Debug)]
pub struct SeCompatibleOptimum {
    pub optimum: Optimum,
    pub partial: PartialProfile,
    /// Full profile on the game network.
    pub profile: StrategyProfile,
}

/// Solves the optimum, then runs the chooser and the completion on the
/// optimal subnetwork (symmetric EP games).
pub fn se_compatible_optimum(
    game: &Game,
    se_profile: &StrategyProfile,
    limits: &Limits,
) -> Result<SeCompatibleOptimum> {
    if !game.is_symmetric() {
        return Err(Error::Domain("the optimal-profile chooser requires a symmetric game".into()));
    }
    let optimum = solve_optimal(game, limits)?;
    let network = game.network();
    let keep: Vec<usize> = optimum
        .used_edges
        .iter()
        .map(|id| network.edge_by_id(id).unwrap())
        .collect();
    let g_opt = network.subnetwork(&keep);
    let partial = choose_optimal_profile(&g_opt, se_profile, game, limits)?;
    let template = lift_profile(&optimum.profile, network, &g_opt)?;
    let full = extend_partial_profile(&g_opt, &template, &partial, limits)?;
    let profile = lift_profile(&full, &g_opt, network)?;
    Ok(SeCompatibleOptimum {
        optimum,
        partial,
        profile,
    })
}

/// Blockwise optimal profile for (possibly asymmetric) games on SPP
/// networks: within each block, paths of the optimal subnetwork that the
/// reference profile uses keep their agents; remaining crossing agents
/// take the first available optimal-subnetwork path.
pub fn blockwise_optimal_profile(
    game: &Game,
    se_profile: &StrategyProfile,
    optimum: &Optimum,
) -> Result<StrategyProfile> {
    let network = game.network();
    let chain = SppChain::new(network)?;
    let in_opt: HashSet<usize> = optimum
        .used_edges
        .iter()
        .map(|id| network.edge_by_id(id).unwrap())
        .collect();
    let n = game.n();
    let parts: Vec<Vec<(usize, Part)>> = (0..n)
        .map(|i| {
            let (s, t) = game.terminals(i);
            agent_parts(&chain, s, t)
        })
        .collect::<Result<_>>()?;
    let mut load = vec![0u32; network.edge_count()];
    let mut segments: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); n];
    for (b, block) in chain.blocks.iter().enumerate() {
        let crossing: Vec<usize> = (0..n)
            .filter(|&i| parts[i].iter().any(|(bb, p)| *bb == b && matches!(p, Part::Free)))
            .collect();
        for i in 0..n {
            for (bb, p) in &parts[i] {
                if *bb == b {
                    if let Part::Forced(seg) = p {
                        segments[i].insert(b, seg.clone());
                        seg.iter().for_each(|&e| load[e] += 1);
                    }
                }
            }
        }
        let opt_paths: Vec<&Path> = block
            .paths
            .iter()
            .filter(|p| p.edges().iter().all(|e| in_opt.contains(e)))
            .collect();
        let mut waiting = Vec::new();
        for &i in &crossing {
            let mine = se_profile.path(i);
            let kept = opt_paths
                .iter()
                .find(|p| p.edges().iter().all(|&e| mine.contains_edge(e)));
            match kept {
                Some(p) => {
                    p.edges().iter().for_each(|&e| load[e] += 1);
                    segments[i].insert(b, p.edges().to_vec());
                }
                None => waiting.push(i),
            }
        }
        for i in waiting {
            let p = opt_paths
                .iter()
                .find(|p| p.edges().iter().all(|&e| load[e] < network.edge(e).capacity))
                .ok_or_else(|| {
                    Error::Domain(format!("no available optimal path in block {b}"))
                })?;
            p.edges().iter().for_each(|&e| load[e] += 1);
            segments[i].insert(b, p.edges().to_vec());
        }
    }
    if (0..network.edge_count()).any(|e| load[e] > network.edge(e).capacity) {
        return Err(Error::Domain("blockwise profile violates capacities".into()));
    }
    let paths = (0..n)
        .map(|i| {
            let ids: Vec<&str> = segments[i]
                .values()
                .flatten()
                .map(|&e| network.edge(e).id.as_str())
                .collect();
            Path::from_ids(network, game.terminals(i).0, &ids)
        })
        .collect::<Result<_>>()?;
    Ok(StrategyProfile::new(paths))
}

/// An edge and a coalition `C` for which `(s*_C, s_{-C})` overloads it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinedViolation {
    pub edge: String,
    pub coalition: Vec<usize>,
}

/// `(s*_C, s_{-C})` is feasible for every `C` iff every edge satisfies
/// `|M_e ∪ M*_e| ≤ c_e`, with `M_e`, `M*_e` its users in `s` and `s*`.
/// The worst coalition for an edge is `M*_e \ M_e`.
pub fn check_combined_feasibility(
    game: &Game,
    se_profile: &StrategyProfile,
    opt_profile: &StrategyProfile,
) -> Option<CombinedViolation> {
    let network = game.network();
    for e in 0..network.edge_count() {
        let m: Vec<bool> = se_profile.paths().iter().map(|p| p.contains_edge(e)).collect();
        let ms: Vec<bool> = opt_profile.paths().iter().map(|p| p.contains_edge(e)).collect();
        let union = (0..m.len()).filter(|&i| m[i] || ms[i]).count();
        if union > network.edge(e).capacity as usize {
            return Some(CombinedViolation {
                edge: network.edge(e).id.clone(),
                coalition: (0..m.len()).filter(|&i| ms[i] && !m[i]).collect(),
            });
        }
    }
    None
}

/// `(s*_C, s_{-C})`.
pub fn combined_profile(
    se_profile: &StrategyProfile,
    opt_profile: &StrategyProfile,
    coalition: &[usize],
) -> StrategyProfile {
    let paths = (0..se_profile.n())
        .map(|i| {
            if coalition.contains(&i) {
                opt_profile.path(i).clone()
            } else {
                se_profile.path(i).clone()
            }
        })
        .collect();
    StrategyProfile::new(paths)
}
