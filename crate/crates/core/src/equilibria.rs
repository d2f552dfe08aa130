//! Nash and strong equilibria: verification by exhaustive deviation
//! search, enumeration of equilibrium sets, and constructive procedures
//! for SPP networks.

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{Cost, ExtCost};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::game::{Game, Limits, Path, StrategyProfile};
use crate::network::{EdgeSpec, Network};
use crate::topology::{classify, Block, NodePosition, SppChain};

/// A coalition and a joint deviation that strictly lowers every member's cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationWitness {
    /// Agent indices, ascending.
    pub coalition: Vec<usize>,
    /// New path per coalition member, aligned with `coalition`.
    pub new_paths: Vec<Path>,
    pub old_costs: Vec<Cost>,
    pub new_costs: Vec<Cost>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub coalition: Vec<usize>,
    pub new_paths: Vec<Vec<String>>,
    pub old_costs: Vec<Cost>,
    pub new_costs: Vec<Cost>,
}

impl DeviationWitness {
    pub fn report(&self, network: &Network) -> WitnessReport {
        WitnessReport {
            coalition: self.coalition.clone(),
            new_paths: self
                .new_paths
                .iter()
                .map(|p| p.edge_ids(network).into_iter().map(String::from).collect())
                .collect(),
            old_costs: self.old_costs.clone(),
            new_costs: self.new_costs.clone(),
        }
    }

    /// The profile after the deviation.
    pub fn apply(&self, profile: &StrategyProfile) -> StrategyProfile {
        let mut paths = profile.paths().to_vec();
        for (&i, p) in self.coalition.iter().zip(&self.new_paths) {
            paths[i] = p.clone();
        }
        StrategyProfile::new(paths)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub profiles_scanned: u128,
    pub feasible_profiles: u128,
    pub cap_hit: bool,
}

/// NE and SE sets in canonical order. Symmetric games list one
/// representative per orbit (agents sorted by path).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumSets {
    pub ne: Vec<StrategyProfile>,
    pub se: Vec<StrategyProfile>,
    pub stats: EnumerationStats,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Largest coalition searched; `None` means all agents.
    pub max_coalition: Option<usize>,
    /// Worker threads for enumeration; `1` is sequential.
    pub jobs: usize,
    pub limits: Limits,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_coalition: None,
            jobs: 1,
            limits: Limits::default(),
        }
    }
}

fn indices_of(ev: &Evaluator, profile: &StrategyProfile) -> Result<Vec<usize>> {
    ev.game.validate_profile(profile)?;
    if !ev.game.is_feasible(profile) {
        return Err(Error::Domain("profile violates edge capacities".into()));
    }
    ev.indices(profile)
        .ok_or_else(|| Error::Input("profile contains a non-simple path".into()))
}

/// Unilateral deviations only. `None` means the profile is a NE.
pub fn verify_ne(game: &Game, profile: &StrategyProfile) -> Result<Option<DeviationWitness>> {
    verify_ne_with(game, profile, &Limits::default())
}

pub fn verify_ne_with(
    game: &Game,
    profile: &StrategyProfile,
    limits: &Limits,
) -> Result<Option<DeviationWitness>> {
    let ev = Evaluator::new(game, limits)?;
    let cur = indices_of(&ev, profile)?;
    let agents: Vec<usize> = (0..game.n()).collect();
    Ok(ne_violation(&ev, &cur, &agents).map(|(i, k, old, new)| DeviationWitness {
        coalition: vec![i],
        new_paths: vec![ev.space.strategies(i)[k].clone()],
        old_costs: vec![ev.to_cost(old)],
        new_costs: vec![ev.to_cost(new)],
    }))
}

/// First improving unilateral move among `agents`: (agent, strategy, old, new).
fn ne_violation(
    ev: &Evaluator,
    cur: &[usize],
    agents: &[usize],
) -> Option<(usize, usize, i128, i128)> {
    let mut x = ev.usage(cur);
    for &i in agents {
        let old = ev.cost_scaled(i, cur[i], &x);
        for &e in ev.edges_of(i, cur[i]) {
            x[e] -= 1;
        }
        let mut found = None;
        for k in 0..ev.strategy_count(i) {
            if k == cur[i] {
                continue;
            }
            let edges = ev.edges_of(i, k);
            if edges.iter().any(|&e| x[e] + 1 > ev.caps[e]) {
                continue;
            }
            for &e in edges {
                x[e] += 1;
            }
            let new = ev.cost_scaled(i, k, &x);
            for &e in edges {
                x[e] -= 1;
            }
            if new < old {
                found = Some((i, k, old, new));
                break;
            }
        }
        for &e in ev.edges_of(i, cur[i]) {
            x[e] += 1;
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Coalition deviations up to `max_coalition` members (default: all).
/// `None` means the profile is a SE (for that coalition bound).
pub fn verify_se(
    game: &Game,
    profile: &StrategyProfile,
    max_coalition: Option<usize>,
) -> Result<Option<DeviationWitness>> {
    verify_se_with(
        game,
        profile,
        &SearchOptions {
            max_coalition,
            ..SearchOptions::default()
        },
    )
}

pub fn verify_se_with(
    game: &Game,
    profile: &StrategyProfile,
    opts: &SearchOptions,
) -> Result<Option<DeviationWitness>> {
    let ev = Evaluator::new(game, &opts.limits)?;
    let cur = indices_of(&ev, profile)?;
    let k = opts.max_coalition.unwrap_or(game.n()).min(game.n());
    let found = CoalitionSearch::new(&ev, &cur, opts.limits.profile_cap).run(1, k)?;
    Ok(found.map(|(members, choice)| {
        let x = {
            let mut next = cur.clone();
            for (&m, &c) in members.iter().zip(&choice) {
                next[m] = c;
            }
            ev.usage(&next)
        };
        let old_x = ev.usage(&cur);
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by_key(|&j| members[j]);
        DeviationWitness {
            coalition: order.iter().map(|&j| members[j]).collect(),
            new_paths: order
                .iter()
                .map(|&j| ev.space.strategies(members[j])[choice[j]].clone())
                .collect(),
            old_costs: order
                .iter()
                .map(|&j| ev.to_cost(ev.cost_scaled(members[j], cur[members[j]], &old_x)))
                .collect(),
            new_costs: order
                .iter()
                .map(|&j| ev.to_cost(ev.cost_scaled(members[j], choice[j], &x)))
                .collect(),
        }
    }))
}

/// Joint-deviation search.
///
/// Only deviations in which every member changes path are tried: a member
/// who keeps their path can be dropped without changing anyone's cost.
/// Agents with the same strategy class and the same current path are
/// interchangeable, so a coalition takes the lowest-indexed agents of each
/// such group and members of one group pick non-decreasing strategies.
struct CoalitionSearch<'a, 'g> {
    ev: &'a Evaluator<'g>,
    cur: &'a [usize],
    old: Vec<i128>,
    base: Vec<u32>,
    /// Agents grouped by (class, current strategy), groups ordered by first agent.
    groups: Vec<Vec<usize>>,
    visited: u128,
    cap: u128,
}

impl<'a, 'g> CoalitionSearch<'a, 'g> {
    fn new(ev: &'a Evaluator<'g>, cur: &'a [usize], cap: u128) -> Self {
        let base = ev.usage(cur);
        let old = (0..cur.len())
            .map(|i| ev.cost_scaled(i, cur[i], &base))
            .collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut keys: Vec<(usize, usize)> = Vec::new();
        for (i, &c) in cur.iter().enumerate() {
            let key = (ev.space.agent_class[i], c);
            match keys.iter().position(|&k| k == key) {
                Some(g) => groups[g].push(i),
                None => {
                    keys.push(key);
                    groups.push(vec![i]);
                }
            }
        }
        CoalitionSearch {
            ev,
            cur,
            old,
            base,
            groups,
            visited: 0,
            cap,
        }
    }

    fn estimate(&self, max_k: usize) -> u128 {
        let n = self.cur.len() as u128;
        let p = (0..self.cur.len())
            .map(|i| self.ev.strategy_count(i))
            .max()
            .unwrap_or(1) as u128;
        let mut total: u128 = 0;
        let mut binom: u128 = 1;
        for k in 1..=max_k as u128 {
            binom = binom.saturating_mul(n - k + 1) / k;
            total = total.saturating_add(binom.saturating_mul(p.saturating_sub(1).saturating_pow(k as u32)));
        }
        total
    }

    fn tick(&mut self, max_k: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::Resource {
                what: "coalition deviations".into(),
                required: self.estimate(max_k).max(self.visited),
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn run(&mut self, min_k: usize, max_k: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        for k in min_k.max(1)..=max_k {
            let mut counts = vec![0usize; self.groups.len()];
            if let Some(found) = self.split(k, 0, &mut counts, max_k)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn split(
        &mut self,
        left: usize,
        g: usize,
        counts: &mut Vec<usize>,
        max_k: usize,
    ) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        if g == self.groups.len() {
            if left > 0 {
                return Ok(None);
            }
            let members: Vec<usize> = self
                .groups
                .iter()
                .zip(counts.iter())
                .flat_map(|(grp, &m)| grp[..m].iter().copied())
                .collect();
            let mut x = self.base.clone();
            for &m in &members {
                for &e in self.ev.edges_of(m, self.cur[m]) {
                    x[e] -= 1;
                }
            }
            let mut choice = Vec::with_capacity(members.len());
            return Ok(self
                .assign(&members, 0, &mut x, &mut choice, max_k)?
                .then(|| (members, choice)));
        }
        let max_here = left.min(self.groups[g].len());
        for m in (0..=max_here).rev() {
            counts[g] = m;
            if let Some(found) = self.split(left - m, g + 1, counts, max_k)? {
                return Ok(Some(found));
            }
        }
        counts[g] = 0;
        Ok(None)
    }

    fn assign(
        &mut self,
        members: &[usize],
        pos: usize,
        x: &mut Vec<u32>,
        choice: &mut Vec<usize>,
        max_k: usize,
    ) -> Result<bool> {
        self.tick(max_k)?;
        if pos == members.len() {
            let ok = members
                .iter()
                .zip(choice.iter())
                .all(|(&m, &c)| self.ev.cost_scaled(m, c, x) < self.old[m]);
            return Ok(ok);
        }
        let m = members[pos];
        let same_group_prev = pos > 0 && {
            let p = members[pos - 1];
            self.ev.space.agent_class[p] == self.ev.space.agent_class[m]
                && self.cur[p] == self.cur[m]
        };
        let lo = if same_group_prev { choice[pos - 1] } else { 0 };
        for k in lo..self.ev.strategy_count(m) {
            if k == self.cur[m] {
                continue;
            }
            let edges = self.ev.edges_of(m, k);
            if edges.iter().any(|&e| x[e] + 1 > self.ev.caps[e]) {
                continue;
            }
            for &e in edges {
                x[e] += 1;
            }
            choice.push(k);
            let hit = self.assign(members, pos + 1, x, choice, max_k)?;
            if hit {
                return Ok(true);
            }
            choice.pop();
            for &e in self.ev.edges_of(m, k) {
                x[e] -= 1;
            }
        }
        Ok(false)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = match r.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    r
}

/// Next index vector in canonical order; symmetric games keep indices
/// non-decreasing so each orbit appears once.
pub(crate) fn advance_profile(cur: &mut [usize], counts: &[usize], symmetric: bool) -> bool {
    for i in (0..cur.len()).rev() {
        if cur[i] + 1 < counts[i] {
            cur[i] += 1;
            let v = if symmetric { cur[i] } else { 0 };
            for x in &mut cur[i + 1..] {
                *x = v;
            }
            return true;
        }
    }
    false
}

/// Tests every feasible profile (every orbit, for symmetric games).
pub fn enumerate_equilibria(game: &Game, opts: &SearchOptions) -> Result<EquilibriumSets> {
    let ev = Evaluator::new(game, &opts.limits)?;
    let n = game.n();
    let counts: Vec<usize> = (0..n).map(|i| ev.strategy_count(i)).collect();
    let total = if game.is_symmetric() {
        let p = counts.first().copied().unwrap_or(0) as u128;
        if p == 0 {
            0
        } else {
            binomial(p + n as u128 - 1, n as u128)
        }
    } else {
        counts
            .iter()
            .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
            .unwrap_or(u128::MAX)
    };
    if total > opts.limits.profile_cap {
        return Err(Error::Resource {
            what: "strategy profiles".into(),
            required: total,
            cap: opts.limits.profile_cap,
        });
    }

    let mut candidates: Vec<Vec<usize>> = Vec::new();
    if counts.iter().all(|&c| c > 0) && n > 0 {
        let mut cur = vec![0usize; n];
        loop {
            candidates.push(cur.clone());
            if !advance_profile(&mut cur, &counts, game.is_symmetric()) {
                break;
            }
        }
    }

    let max_k = opts.max_coalition.unwrap_or(n).min(n);
    let symmetric = game.is_symmetric();
    let check = |cur: &Vec<usize>| -> Result<(bool, bool, bool)> {
        let x = ev.usage(cur);
        if !ev.feasible(&x) {
            return Ok((false, false, false));
        }
        let agents: Vec<usize> = if symmetric {
            (0..n).filter(|&i| i == 0 || cur[i] != cur[i - 1]).collect()
        } else {
            (0..n).collect()
        };
        if ne_violation(&ev, cur, &agents).is_some() {
            return Ok((true, false, false));
        }
        let se = CoalitionSearch::new(&ev, cur, opts.limits.profile_cap)
            .run(2, max_k)?
            .is_none();
        Ok((true, true, se))
    };
    let results: Vec<(bool, bool, bool)> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
        pool.install(|| candidates.par_iter().map(check).collect::<Result<_>>())?
    } else {
        candidates.iter().map(check).collect::<Result<_>>()?
    };

    let mut sets = EquilibriumSets {
        ne: Vec::new(),
        se: Vec::new(),
        stats: EnumerationStats {
            profiles_scanned: candidates.len() as u128,
            feasible_profiles: 0,
            cap_hit: false,
        },
    };
    for (cur, (feasible, ne, se)) in candidates.iter().zip(results) {
        sets.stats.feasible_profiles += u128::from(feasible);
        if ne {
            sets.ne.push(ev.profile(cur));
        }
        if se {
            sets.se.push(ev.profile(cur));
        }
    }
    Ok(sets)
}

/// One step of the greedy output: `agents` agents placed on `edge`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub edge: String,
    pub agents: u32,
}

/// A path offered to the greedy, with per-edge forced co-users.
struct GreedyItem {
    terms: Vec<(Cost, u32)>,
    capacity: u32,
}

impl GreedyItem {
    fn per_agent(&self, k: u32) -> Cost {
        self.terms.iter().map(|&(p, f)| p.share(k + f)).sum()
    }
}

/// Greedy assignment generalised to forced co-users: repeatedly take the item
/// minimising its per-agent cost when filled with `min(capacity, remaining)`
/// agents. Ties go to the earlier item. Returns `(item, count)` steps with
/// non-decreasing per-agent cost.
fn greedy(items: &[GreedyItem], n: u32) -> Result<Vec<(usize, u32)>> {
    let mut used = vec![false; items.len()];
    let mut remaining = n;
    let mut out = Vec::new();
    while remaining > 0 {
        let mut best: Option<(Cost, usize, u32)> = None;
        for (i, item) in items.iter().enumerate() {
            if used[i] || item.capacity == 0 {
                continue;
            }
            let k = item.capacity.min(remaining);
            let c = item.per_agent(k);
            if best.as_ref().map_or(true, |(b, _, _)| c < *b) {
                best = Some((c, i, k));
            }
        }
        let (_, i, k) = best.ok_or_else(|| {
            Error::Domain(format!(
                "infeasible: capacities cannot host {remaining} more agents"
            ))
        })?;
        used[i] = true;
        remaining -= k;
        out.push((i, k));
    }
    Ok(out)
}

fn require_symmetric(game: &Game) -> Result<()> {
    if game.is_symmetric() {
        Ok(())
    } else {
        Err(Error::Domain("construction requires a symmetric game".into()))
    }
}

/// Greedy SE construction on a network of parallel edges.
pub fn construct_se_parallel_edges(game: &Game) -> Result<(StrategyProfile, Vec<Assignment>)> {
    require_symmetric(game)?;
    let network = game.network();
    if !classify(network)?.parallel_edges {
        return Err(Error::Domain("network is not a network of parallel edges".into()));
    }
    let mut edges: Vec<usize> = (0..network.edge_count()).collect();
    edges.sort_by(|&a, &b| network.edge(a).id.cmp(&network.edge(b).id));
    let items: Vec<GreedyItem> = edges
        .iter()
        .map(|&e| GreedyItem {
            terms: vec![(network.edge(e).cost, 0)],
            capacity: network.edge(e).capacity,
        })
        .collect();
    let steps = greedy(&items, game.n() as u32)?;
    let mut paths = Vec::with_capacity(game.n());
    let mut assignments = Vec::new();
    for (i, k) in steps {
        let e = edges[i];
        let path = Path::from_ids(network, network.source(), &[network.edge(e).id.as_str()])?;
        paths.extend(std::iter::repeat(path).take(k as usize));
        assignments.push(Assignment {
            edge: network.edge(e).id.clone(),
            agents: k,
        });
    }
    Ok((StrategyProfile::new(paths), assignments))
}

/// Replaces each path of a parallel-paths network by one edge with the
/// summed cost and the bottleneck capacity. Edge `i` of the result stands
/// for `paths[i]`. Single-edge paths keep their id; longer ones join ids with `+`.
pub fn reduce_parallel_paths(network: &Network) -> Result<(Network, Vec<Path>)> {
    if !classify(network)?.parallel_paths {
        return Err(Error::Domain("network is not a network of parallel paths".into()));
    }
    let chain = SppChain::new(network)?;
    let paths: Vec<Path> = if chain.len() == 1 {
        chain.blocks[0].paths.clone()
    } else {
        // A single chain of edges.
        let all = chain
            .blocks
            .iter()
            .map(|b| b.paths[0].clone())
            .reduce(|a, b| a.concat(&b))
            .unwrap();
        vec![all]
    };
    let (s, t) = (network.node_name(network.source()), network.node_name(network.sink()));
    let specs = paths
        .iter()
        .map(|p| EdgeSpec {
            id: p.edge_ids(network).join("+"),
            from: s.to_string(),
            to: t.to_string(),
            cost: p.cost(network),
            capacity: p.bottleneck(network),
        })
        .collect();
    let reduced = Network::new(
        network.is_directed(),
        vec![s.to_string(), t.to_string()],
        specs,
        s,
        t,
    )?;
    Ok((reduced, paths))
}

/// What an agent does inside one block.
#[derive(Clone, Debug)]
pub(crate) enum Part {
    /// Crosses the block on a path chosen by the construction.
    Free,
    /// Uses these edges, fixed by an inner terminal.
    Forced(Vec<usize>),
}

/// Per-agent block usage in a directed SPP chain.
pub(crate) fn agent_parts(chain: &SppChain, s: usize, t: usize) -> Result<Vec<(usize, Part)>> {
    let unreachable = || Error::Domain("agent sink is unreachable from its source".into());
    let detached = || Error::Domain("agent terminal is not on the network".into());
    let blocks = &chain.blocks;
    // First block, optional (path, offset) when starting inside it.
    let (first, start_inner) = match chain.position(s) {
        NodePosition::Junction(a) => (a, None),
        NodePosition::Inner {
            block,
            path,
            offset,
        } => (block, Some((path, offset))),
        NodePosition::Detached => return Err(detached()),
    };
    let (last, end_inner) = match chain.position(t) {
        NodePosition::Junction(0) => return Err(unreachable()),
        NodePosition::Junction(b) => (b - 1, None),
        NodePosition::Inner {
            block,
            path,
            offset,
        } => (block, Some((path, offset))),
        NodePosition::Detached => return Err(detached()),
    };
    if first > last || first >= blocks.len() {
        return Err(unreachable());
    }
    let mut parts = Vec::new();
    for b in first..=last {
        let from = if b == first { start_inner } else { None };
        let to = if b == last { end_inner } else { None };
        let part = match (from, to) {
            (None, None) => Part::Free,
            (Some((p, o)), None) => Part::Forced(blocks[b].paths[p].edges()[o..].to_vec()),
            (None, Some((p, o))) => Part::Forced(blocks[b].paths[p].edges()[..o].to_vec()),
            (Some((p1, o1)), Some((p2, o2))) => {
                if p1 != p2 || o1 >= o2 {
                    return Err(unreachable());
                }
                Part::Forced(blocks[b].paths[p1].edges()[o1..o2].to_vec())
            }
        };
        parts.push((b, part));
    }
    Ok(parts)
}

/// Two-step construction shared by the SPP procedures: fix forced
/// segments, then per block run the greedy for the agents crossing it and
/// hand out paths in `order`.
fn construct_on_chain(game: &Game, chain: &SppChain, order: &[usize]) -> Result<StrategyProfile> {
    let network = game.network();
    let n = game.n();
    let parts: Vec<Vec<(usize, Part)>> = (0..n)
        .map(|i| {
            let (s, t) = game.terminals(i);
            agent_parts(chain, s, t)
        })
        .collect::<Result<_>>()?;
    let mut forced = vec![0u32; network.edge_count()];
    for agent in &parts {
        for (_, part) in agent {
            if let Part::Forced(edges) = part {
                for &e in edges {
                    forced[e] += 1;
                }
            }
        }
    }
    if let Some(e) = (0..network.edge_count()).find(|&e| forced[e] > network.edge(e).capacity) {
        return Err(Error::Domain(format!(
            "infeasible: edge {} is forced on more agents than its capacity",
            network.edge(e).id
        )));
    }
    let mut rank = vec![0usize; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut chosen: Vec<Vec<Option<usize>>> = vec![vec![None; chain.len()]; n];
    for (b, block) in chain.blocks.iter().enumerate() {
        let mut crossing: Vec<usize> = (0..n)
            .filter(|&i| {
                parts[i]
                    .iter()
                    .any(|(bb, p)| *bb == b && matches!(p, Part::Free))
            })
            .collect();
        if crossing.is_empty() {
            continue;
        }
        crossing.sort_by_key(|&i| rank[i]);
        let items = block_items(network, block, &forced);
        let steps = greedy(&items, crossing.len() as u32)?;
        let mut next = crossing.into_iter();
        for (p, k) in steps {
            for _ in 0..k {
                chosen[next.next().unwrap()][b] = Some(p);
            }
        }
    }
    let paths = (0..n)
        .map(|i| {
            let mut edges = Vec::new();
            for (b, part) in &parts[i] {
                match part {
                    Part::Free => {
                        let p = chosen[i][*b].expect("every crossing agent gets a path");
                        edges.extend_from_slice(chain.blocks[*b].paths[p].edges());
                    }
                    Part::Forced(seg) => edges.extend_from_slice(seg),
                }
            }
            let ids: Vec<&str> = edges.iter().map(|&e| network.edge(e).id.as_str()).collect();
            Path::from_ids(network, game.terminals(i).0, &ids)
        })
        .collect::<Result<_>>()?;
    Ok(StrategyProfile::new(paths))
}

fn block_items(network: &Network, block: &Block, forced: &[u32]) -> Vec<GreedyItem> {
    block
        .paths
        .iter()
        .map(|p| GreedyItem {
            terms: p
                .edges()
                .iter()
                .map(|&e| (network.edge(e).cost, forced[e]))
                .collect(),
            capacity: p
                .edges()
                .iter()
                .map(|&e| network.edge(e).capacity - forced[e])
                .min()
                .unwrap_or(0),
        })
        .collect()
}

/// Per-block greedy construction on an SPP network, paths concatenated by rank.
pub fn construct_se_spp(game: &Game) -> Result<StrategyProfile> {
    require_symmetric(game)?;
    let chain = SppChain::new(game.network())?;
    let order: Vec<usize> = (0..game.n()).collect();
    construct_on_chain(game, &chain, &order)
}

fn require_directed(game: &Game) -> Result<()> {
    if game.network().is_directed() {
        Ok(())
    } else {
        Err(Error::Domain(
            "asymmetric constructions require a directed network".into(),
        ))
    }
}

/// All agents share one source; sinks anywhere on an SPP network.
pub fn construct_se_single_source(game: &Game) -> Result<StrategyProfile> {
    require_directed(game)?;
    if game.common_source().is_none() {
        return Err(Error::Domain("agents do not share a source".into()));
    }
    let chain = SppChain::new(game.network())?;
    // Agents reaching further come first; at the same block, agents ending
    // at the block sink come before agents ending inside it.
    let key = |i: usize| match chain.position(game.terminals(i).1) {
        NodePosition::Junction(b) => (std::cmp::Reverse(b.saturating_sub(1)), false),
        NodePosition::Inner { block, .. } => (std::cmp::Reverse(block), true),
        NodePosition::Detached => (std::cmp::Reverse(0), true),
    };
    let mut order: Vec<usize> = (0..game.n()).collect();
    order.sort_by_key(|&i| (key(i), i));
    construct_on_chain(game, &chain, &order)
}

/// Arbitrary terminals on a chain of parallel-edge blocks with at most one
/// parallel-paths block.
pub fn construct_se_multi_source(game: &Game) -> Result<StrategyProfile> {
    require_directed(game)?;
    let chain = SppChain::new(game.network())?;
    let path_blocks = chain
        .blocks
        .iter()
        .filter(|b| !b.is_parallel_edges())
        .count();
    if path_blocks > 1 {
        return Err(Error::Domain(
            "network has more than one block that is not parallel edges".into(),
        ));
    }
    let inner = |v: usize| matches!(chain.position(v), NodePosition::Inner { .. });
    let mut order: Vec<usize> = (0..game.n()).collect();
    order.sort_by_key(|&i| {
        let (s, t) = game.terminals(i);
        (inner(s) || inner(t), i)
    });
    construct_on_chain(game, &chain, &order)
}

/// Which constructive procedure applies to a game, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    ParallelEdges,
    Spp,
    SingleSource,
    MultiSource,
}

/// Picks the most specific applicable construction and runs it.
pub fn construct_se(game: &Game) -> Result<(Construction, StrategyProfile)> {
    let class = classify(game.network())?;
    if !class.spp {
        return Err(Error::Domain(
            "no SE construction applies: network is not SPP".into(),
        ));
    }
    if game.is_symmetric() {
        if class.parallel_edges {
            let (p, _) = construct_se_parallel_edges(game)?;
            return Ok((Construction::ParallelEdges, p));
        }
        return Ok((Construction::Spp, construct_se_spp(game)?));
    }
    if game.common_source().is_some() {
        return Ok((Construction::SingleSource, construct_se_single_source(game)?));
    }
    Ok((Construction::MultiSource, construct_se_multi_source(game)?))
}

/// Agent costs as exact values (errors on an infeasible profile).
pub fn finite_costs(game: &Game, profile: &StrategyProfile) -> Result<Vec<Cost>> {
    game.agent_costs(profile)
        .into_iter()
        .map(|c| match c {
            ExtCost::Finite(c) => Ok(c),
            ExtCost::Infinite => Err(Error::Domain("profile violates edge capacities".into())),
        })
        .collect()
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

    fn prof(game: &Game, ids: &[&[&str]]) -> StrategyProfile {
        let v: Vec<Vec<&str>> = ids.iter().map(|p| p.to_vec()).collect();
        StrategyProfile::from_ids(game, &v).unwrap()
    }

    #[test]
    fn fig1_ne_and_coalition_witness() {
        let g = fig1();
        let s = prof(&g, &[&["a"], &["b", "c"]]);
        assert_eq!(verify_ne(&g, &s).unwrap(), None);
        let w = verify_se(&g, &s, None).unwrap().unwrap();
        assert_eq!(w.coalition, [0, 1]);
        assert_eq!(w.new_paths[0].edge_ids(g.network()), ["b", "c"]);
        assert_eq!(w.new_paths[1].edge_ids(g.network()), ["b", "d"]);
        assert_eq!(w.new_costs, [c(7, 10), c(11, 10)]);
        assert_eq!(w.old_costs, [c(1, 1), c(13, 10)]);
        assert_eq!(verify_se(&g, &s, Some(1)).unwrap(), None);
    }

    #[test]
    fn fig1_unilateral_witness() {
        let g = fig1();
        let s = prof(&g, &[&["b", "c"], &["b", "d"]]);
        let w = verify_ne(&g, &s).unwrap().unwrap();
        assert_eq!(w.coalition, [1]);
        assert_eq!(w.new_paths[0].edge_ids(g.network()), ["a"]);
        assert_eq!((w.old_costs[0], w.new_costs[0]), (c(11, 10), c(1, 1)));
    }

    #[test]
    fn infeasible_profile_is_a_domain_error() {
        let g = fig1();
        let s = prof(&g, &[&["a"], &["a"]]);
        assert!(matches!(verify_ne(&g, &s), Err(Error::Domain(_))));
        assert!(matches!(verify_se(&g, &s, None), Err(Error::Domain(_))));
    }

    #[test]
    fn fig1_sets() {
        let g = fig1();
        let sets = enumerate_equilibria(&g, &SearchOptions::default()).unwrap();
        assert_eq!(sets.ne.len(), 1);
        assert_eq!(sets.ne[0].to_ids(g.network()), [vec!["a"], vec!["b", "c"]]);
        assert!(sets.se.is_empty());
        assert_eq!(sets.stats.profiles_scanned, 6);
    }

    #[test]
    fn greedy_examples() {
        let g = NetworkBuilder::directed()
            .edge("e1", "s", "t", c(1, 1), 1)
            .edge("e2", "s", "t", c(6, 5), 2)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let (p, steps) = construct_se_parallel_edges(&game).unwrap();
        assert_eq!(steps, [Assignment { edge: "e2".into(), agents: 2 }]);
        assert_eq!(finite_costs(&game, &p).unwrap(), [c(3, 5), c(3, 5)]);
        assert_eq!(verify_se(&game, &p, None).unwrap(), None);

        let g = NetworkBuilder::directed()
            .edge("x", "s", "t", c(1, 1), 1)
            .edge("y", "s", "t", c(1, 1), 1)
            .edge("z", "s", "t", c(1, 1), 1)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 3).unwrap();
        let (p, _) = construct_se_parallel_edges(&game).unwrap();
        assert_eq!(finite_costs(&game, &p).unwrap(), [c(1, 1); 3]);

        let g = NetworkBuilder::directed()
            .edge("x", "s", "t", c(1, 1), 1)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        assert!(matches!(construct_se_parallel_edges(&game), Err(Error::Domain(_))));
    }

    #[test]
    fn reduce_paths_formula() {
        let g = NetworkBuilder::directed()
            .edge("p", "s", "m", c(1, 2), 3)
            .edge("q", "m", "t", c(1, 2), 2)
            .build("s", "t")
            .unwrap();
        let (r, map) = reduce_parallel_paths(&g).unwrap();
        assert_eq!(r.edge_count(), 1);
        assert_eq!((r.edge(0).cost, r.edge(0).capacity), (c(1, 1), 2));
        assert_eq!(r.edge(0).id, "p+q");
        assert_eq!(map[0].edge_ids(&g), ["p", "q"]);
        assert!(reduce_parallel_paths(fig1().network()).is_err());
    }

    #[test]
    fn spp_cheap_block_pairs_by_rank() {
        let g = NetworkBuilder::directed()
            .edge("cheap", "s", "m", c(0, 1), 1)
            .edge("dear", "s", "m", c(10, 1), 2)
            .edge("free", "m", "t", c(0, 1), 2)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let p = construct_se_spp(&game).unwrap();
        assert_eq!(finite_costs(&game, &p).unwrap(), [c(0, 1), c(10, 1)]);
        assert_eq!(verify_se(&game, &p, None).unwrap(), None);
    }

    #[test]
    fn forced_co_users_enter_the_greedy() {
        // Naive path costs put A on the direct edge; then A and B gain by
        // sharing the long path together.
        let g = NetworkBuilder::directed()
            .edge("p1", "s", "w", c(10, 1), 2)
            .edge("p2", "w", "t", c(0, 1), 2)
            .edge("q", "s", "t", c(6, 1), 1)
            .build("s", "t")
            .unwrap();
        let game = Game::asymmetric(g, &[("s", "t"), ("s", "w")]).unwrap();
        let p = construct_se_single_source(&game).unwrap();
        assert_eq!(p.path(0).edge_ids(game.network()), ["p1", "p2"]);
        assert_eq!(verify_se(&game, &p, None).unwrap(), None);
    }

    #[test]
    fn multi_source_rejects_two_path_blocks() {
        let block = |a: &str, b: &str, x: &str, y: &str| {
            vec![
                (format!("{a}1"), x.to_string(), format!("{a}m")),
                (format!("{a}2"), format!("{a}m"), y.to_string()),
                (b.to_string(), x.to_string(), y.to_string()),
            ]
        };
        let mut nb = NetworkBuilder::directed();
        for (id, f, t) in block("p", "pd", "s", "j").into_iter().chain(block("q", "qd", "j", "t")) {
            nb.push_edge(&id, &f, &t, c(1, 1), 2);
        }
        let g = nb.build("s", "t").unwrap();
        let game = Game::asymmetric(g, &[("s", "t"), ("pm", "t")]).unwrap();
        assert!(matches!(construct_se_multi_source(&game), Err(Error::Domain(_))));
    }
}
