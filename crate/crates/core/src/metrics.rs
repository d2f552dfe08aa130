//! Efficiency ratios (PoA, PoS, SPoA, SPoS) with witness profiles, and
//! checks against the known upper bounds per topology class.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::cost::{harmonic, Cost};
use crate::equilibria::{enumerate_equilibria, EnumerationStats, SearchOptions};
use crate::error::Result;
use crate::game::{Game, StrategyProfile};
use crate::optimal::solve_optimal;
use crate::topology::{classify, TopologyClass};

/// An equilibrium cost divided by the optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ratio {
    Value(Cost),
    /// Positive equilibrium cost over a zero optimum.
    Infinite,
    /// The equilibrium set is empty.
    Undefined,
}

impl Ratio {
    pub fn of(cost: Cost, opt: Cost) -> Ratio {
        if opt.is_zero() {
            if cost.is_zero() {
                Ratio::Value(Cost::one())
            } else {
                Ratio::Infinite
            }
        } else {
            Ratio::Value(cost / opt)
        }
    }

    pub fn value(self) -> Option<Cost> {
        match self {
            Ratio::Value(c) => Some(c),
            _ => None,
        }
    }

    /// `self ≤ bound`; undefined ratios hold vacuously.
    pub fn at_most(self, bound: Cost) -> bool {
        match self {
            Ratio::Value(c) => c <= bound,
            Ratio::Infinite => false,
            Ratio::Undefined => true,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Value(c) => c.fmt(f),
            Ratio::Infinite => f.write_str("inf"),
            Ratio::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Undefined => serializer.serialize_none(),
            _ => serializer.collect_str(self),
        }
    }
}

/// An extreme equilibrium: its social cost and one profile attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extreme {
    pub cost: Cost,
    pub profile: Vec<Vec<String>>,
}

/// One bound check with the numbers compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    pub name: String,
    pub holds: bool,
    pub value: String,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub n: usize,
    pub opt_cost: Cost,
    pub opt_profile: Vec<Vec<String>>,
    pub ne_count: usize,
    pub se_count: usize,
    pub worst_ne: Option<Extreme>,
    pub best_ne: Option<Extreme>,
    pub worst_se: Option<Extreme>,
    pub best_se: Option<Extreme>,
    pub poa: Ratio,
    pub pos: Ratio,
    pub spoa: Ratio,
    pub spos: Ratio,
    /// `Φ` of the optimal profile.
    pub opt_potential: Cost,
    pub topology: TopologyClass,
    pub verdicts: Vec<BoundVerdict>,
    pub stats: EnumerationStats,
}

fn extremes(game: &Game, profiles: &[StrategyProfile]) -> (Option<Extreme>, Option<Extreme>) {
    let network = game.network();
    let mut worst: Option<Extreme> = None;
    let mut best: Option<Extreme> = None;
    for p in profiles {
        let Some(cost) = game.social_cost(p).finite() else {
            continue;
        };
        let make = || Extreme {
            cost,
            profile: p.to_ids(network),
        };
        if worst.as_ref().map_or(true, |w| cost > w.cost) {
            worst = Some(make());
        }
        if best.as_ref().map_or(true, |b| cost < b.cost) {
            best = Some(make());
        }
    }
    (worst, best)
}

fn ratio(e: &Option<Extreme>, opt: Cost) -> Ratio {
    e.as_ref().map_or(Ratio::Undefined, |e| Ratio::of(e.cost, opt))
}

/// Exact ratios from full equilibrium enumeration and the optimum.
pub fn compute_metrics(game: &Game, opts: &SearchOptions) -> Result<MetricsReport> {
    let optimum = solve_optimal(game, &opts.limits)?;
    let sets = enumerate_equilibria(game, opts)?;
    let (worst_ne, best_ne) = extremes(game, &sets.ne);
    let (worst_se, best_se) = extremes(game, &sets.se);
    let opt = optimum.cost;
    let mut report = MetricsReport {
        n: game.n(),
        opt_cost: opt,
        opt_profile: optimum.profile.to_ids(game.network()),
        ne_count: sets.ne.len(),
        se_count: sets.se.len(),
        poa: ratio(&worst_ne, opt),
        pos: ratio(&best_ne, opt),
        spoa: ratio(&worst_se, opt),
        spos: ratio(&best_se, opt),
        worst_ne,
        best_ne,
        worst_se,
        best_se,
        opt_potential: game.potential(&optimum.profile)?,
        topology: classify(game.network())?,
        verdicts: Vec::new(),
        stats: sets.stats,
    };
    report.verdicts = check_bounds(game, &report);
    Ok(report)
}

fn verdict(name: &str, holds: bool, value: impl fmt::Display, bound: impl fmt::Display) -> BoundVerdict {
    BoundVerdict {
        name: name.into(),
        holds,
        value: value.to_string(),
        bound: bound.to_string(),
    }
}

/// Evaluates every bound that applies to the game's class.
///
/// Symmetric EP, SPP or series-of-EP games: `SPoA ≤ H_n`; asymmetric SPP
/// games: `SPoA ≤ H_n`; symmetric SP games: `SPoA ≤ n`; symmetric EP/SPP
/// games with one capacity on every edge: `SPoA = 1`. Whenever a SE exists:
/// `Φ(s*) ≤ H_c·opt`, where `c` is the largest capacity (at most `n`), and on
/// the classes with the `H_n` bound also `cost(worst SE) ≤ Φ(s*)`.
pub fn check_bounds(game: &Game, report: &MetricsReport) -> Vec<BoundVerdict> {
    let n = report.n;
    let class = &report.topology;
    let h_n = harmonic(n as u32);
    let mut out = Vec::new();
    let symmetric = game.is_symmetric();
    let combinable = (symmetric && (class.ep || class.spp || class.series_of_ep)) || (!symmetric && class.spp);
    if combinable {
        out.push(verdict("spoa_le_harmonic_n", report.spoa.at_most(h_n), report.spoa, h_n));
    }
    if symmetric && class.sp {
        let bound = Cost::integer(n as u64);
        out.push(verdict("spoa_le_n", report.spoa.at_most(bound), report.spoa, bound));
    }
    if symmetric && (class.ep || class.spp) && game.network().homogeneous_capacity().is_some() {
        let holds = matches!(report.spoa, Ratio::Undefined) || report.spoa == Ratio::Value(Cost::one());
        out.push(verdict("homogeneous_spoa_eq_1", holds, report.spoa, 1));
    }
    if let Some(worst) = &report.worst_se {
        let c_max = game.network().max_capacity().min(n as u32);
        let h_c = harmonic(c_max) * report.opt_cost;
        if combinable {
            out.push(verdict(
                "worst_se_le_opt_potential",
                worst.cost <= report.opt_potential,
                worst.cost,
                report.opt_potential,
            ));
        }
        out.push(verdict(
            "opt_potential_le_harmonic_cmax_opt",
            report.opt_potential <= h_c,
            report.opt_potential,
            h_c,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_fig1, build_fig4_sp_spoa};
    use crate::network::NetworkBuilder;

    #[test]
    fn single_edge_ratios_are_one() {
        let g = NetworkBuilder::directed()
            .edge("e", "s", "t", Cost::integer(3), 2)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let r = compute_metrics(&game, &SearchOptions::default()).unwrap();
        for x in [r.poa, r.pos, r.spoa, r.spos] {
            assert_eq!(x, Ratio::Value(Cost::one()));
        }
        assert!(r.verdicts.iter().all(|v| v.holds));
    }

    #[test]
    fn fig1_has_undefined_strong_ratios() {
        let game = build_fig1();
        let r = compute_metrics(&game, &SearchOptions::default()).unwrap();
        assert_eq!(r.spoa, Ratio::Undefined);
        assert_eq!(r.spos, Ratio::Undefined);
        // NE cost 23/10 over the optimum 9/5.
        assert_eq!(r.poa, Ratio::Value(Cost::frac(23, 18)));
        assert_eq!(r.pos, r.poa);
    }

    #[test]
    fn fig4_spoa_matches_formula() {
        let game = build_fig4_sp_spoa(3, Cost::frac(1, 10)).unwrap();
        let r = compute_metrics(&game, &SearchOptions::default()).unwrap();
        assert_eq!(r.spoa, Ratio::Value(Cost::frac(30, 11)));
        let sp = r.verdicts.iter().find(|v| v.name == "spoa_le_n").unwrap();
        assert!(sp.holds);
    }

    #[test]
    fn zero_optimum_policy() {
        assert_eq!(Ratio::of(Cost::zero(), Cost::zero()), Ratio::Value(Cost::one()));
        assert_eq!(Ratio::of(Cost::one(), Cost::zero()), Ratio::Infinite);
    }
}
