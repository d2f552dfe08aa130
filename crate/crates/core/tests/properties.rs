//! Property tests over seeded random games.

mod common;

use ccs_core::equilibria::{
    construct_se, enumerate_equilibria, verify_ne, verify_se, SearchOptions,
};
use ccs_core::format::{game_from_json, game_to_json};
use ccs_core::instances::{build_no_se_game, random_asymmetric_spp, random_game, RandomClass};
use ccs_core::metrics::{compute_metrics, Ratio};
use ccs_core::optimal::{
    blockwise_optimal_profile, check_combined_feasibility, combined_profile,
    se_compatible_optimum, solve_optimal, solve_optimal_exhaustive,
};
use ccs_core::topology::{
    classify, compose_parallel, compose_series, decompose_sp, find_forbidden_embedding,
    SpDecomposition,
};
use ccs_core::{enumerate_paths, Cost, Game, Limits, StrategyProfile};
use proptest::prelude::*;

use common::strong_equilibria;

fn game(class: RandomClass, n: usize, size: usize, seed: u64) -> Option<Game> {
    random_game(class, n, size, seed)
        .ok()
        .filter(|g| g.network().edge_count() <= 10)
}

fn any_class() -> impl Strategy<Value = RandomClass> {
    prop_oneof![
        Just(RandomClass::ParallelEdges),
        Just(RandomClass::ParallelPaths),
        Just(RandomClass::Spp),
        Just(RandomClass::Ep),
        Just(RandomClass::Sp),
        Just(RandomClass::General),
    ]
}

fn all_profiles(game: &Game) -> Vec<StrategyProfile> {
    let space = game.strategy_space(&Limits::default()).unwrap();
    let mut out = vec![Vec::new()];
    for i in 0..game.n() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<_>| {
                space.strategies(i).iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(StrategyProfile::new).filter(|p| game.is_feasible(p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructions_are_strong(seed in any::<u64>(), n in 1usize..=4) {
        let Some(g) = game(RandomClass::Spp, n, 6, seed) else { return Ok(()) };
        let (_, p) = construct_se(&g).unwrap();
        prop_assert!(verify_se(&g, &p, None).unwrap().is_none());
    }

    #[test]
    fn strong_equilibria_are_nash(class in any_class(), seed in any::<u64>(), n in 1usize..=3) {
        let Some(g) = game(class, n, 6, seed) else { return Ok(()) };
        let sets = enumerate_equilibria(&g, &SearchOptions::default()).unwrap();
        for s in &sets.se {
            prop_assert!(sets.ne.contains(s));
            prop_assert!(verify_ne(&g, s).unwrap().is_none());
        }
    }

    #[test]
    fn parallel_enumeration_matches_sequential(class in any_class(), seed in any::<u64>(), n in 1usize..=3) {
        let Some(g) = game(class, n, 6, seed) else { return Ok(()) };
        let seq = enumerate_equilibria(&g, &SearchOptions::default()).unwrap();
        let par = enumerate_equilibria(&g, &SearchOptions { jobs: 4, ..SearchOptions::default() }).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn coalition_bound_is_monotone(class in any_class(), seed in any::<u64>(), n in 2usize..=3) {
        let Some(g) = game(class, n, 6, seed) else { return Ok(()) };
        for p in all_profiles(&g).iter().take(20) {
            let mut prev_stable = true;
            for k in 1..=n {
                let stable = verify_se(&g, p, Some(k)).unwrap().is_none();
                prop_assert!(prev_stable || !stable);
                prev_stable = stable;
            }
        }
    }

    #[test]
    fn branch_and_bound_matches_exhaustive(class in any_class(), seed in any::<u64>(), n in 1usize..=3) {
        let Some(g) = game(class, n, 6, seed) else { return Ok(()) };
        let a = solve_optimal(&g, &Limits::default()).unwrap();
        let b = solve_optimal_exhaustive(&g, &Limits::default()).unwrap();
        prop_assert_eq!(a.cost, b.cost);
        prop_assert!(g.is_feasible(&a.profile));
        prop_assert_eq!(g.social_cost(&a.profile).finite(), Some(a.cost));
    }

    #[test]
    fn combined_check_matches_brute_force(class in any_class(), seed in any::<u64>(), n in 1usize..=4, pick in any::<(u64, u64)>()) {
        let Some(g) = game(class, n, 5, seed) else { return Ok(()) };
        let profiles = all_profiles(&g);
        prop_assume!(!profiles.is_empty() && profiles.len() < 5000);
        let s = &profiles[(pick.0 % profiles.len() as u64) as usize];
        let t = &profiles[(pick.1 % profiles.len() as u64) as usize];
        let brute = (0u32..1 << n).any(|mask| {
            let c: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            !g.is_feasible(&combined_profile(s, t, &c))
        });
        let closed = check_combined_feasibility(&g, s, t);
        prop_assert_eq!(brute, closed.is_some());
        if let Some(v) = closed {
            prop_assert!(!g.is_feasible(&combined_profile(s, t, &v.coalition)));
        }
    }

    #[test]
    fn chooser_pipeline_on_ep_games(seed in any::<u64>(), n in 1usize..=4) {
        let Some(g) = game(RandomClass::Ep, n, 6, seed) else { return Ok(()) };
        for s in strong_equilibria(&g) {
            let out = se_compatible_optimum(&g, &s, &Limits::default()).unwrap();
            prop_assert!(!out.partial.capacity_guard_triggered);
            prop_assert_eq!(g.social_cost(&out.profile).finite(), Some(out.optimum.cost));
            prop_assert!(check_combined_feasibility(&g, &s, &out.profile).is_none());
        }
    }

    #[test]
    fn blockwise_optimum_on_asymmetric_spp(seed in any::<u64>(), n in 1usize..=4, single in any::<bool>()) {
        let Ok(g) = random_asymmetric_spp(n, 6, single, seed) else { return Ok(()) };
        let opt = solve_optimal(&g, &Limits::default()).unwrap();
        for s in strong_equilibria(&g) {
            let star = blockwise_optimal_profile(&g, &s, &opt).unwrap();
            prop_assert_eq!(g.social_cost(&star).finite(), Some(opt.cost));
            prop_assert!(check_combined_feasibility(&g, &s, &star).is_none());
        }
    }

    #[test]
    fn metric_orderings(class in any_class(), seed in any::<u64>(), n in 1usize..=3) {
        let Some(g) = game(class, n, 6, seed) else { return Ok(()) };
        let r = compute_metrics(&g, &SearchOptions::default()).unwrap();
        let le = |a: Ratio, b: Ratio| match (a.value(), b.value()) {
            (Some(x), Some(y)) => x <= y,
            _ => true,
        };
        prop_assert!(le(r.pos, r.poa));
        prop_assert!(le(r.spos, r.spoa));
        prop_assert!(le(r.pos, r.spos));
        for x in [r.poa, r.pos, r.spoa, r.spos] {
            prop_assert!(x.value().map_or(true, |v| v >= Cost::one()));
        }
        prop_assert!(r.verdicts.iter().all(|v| v.holds), "{:?}", r.verdicts);
    }

    #[test]
    fn spp_iff_no_embedding(class in any_class(), seed in any::<u64>()) {
        let Some(g) = game(class, 2, 7, seed) else { return Ok(()) };
        let net = g.network();
        let w = find_forbidden_embedding(net);
        prop_assert_eq!(classify(net).unwrap().spp, w.is_none());
        if let Some(w) = w {
            prop_assert!(w.verify(net));
        }
    }

    #[test]
    fn decomposition_round_trip(class in prop_oneof![Just(RandomClass::Spp), Just(RandomClass::Ep), Just(RandomClass::Sp)], seed in any::<u64>()) {
        let Some(g) = game(class, 2, 8, seed) else { return Ok(()) };
        let SpDecomposition::Sp(tree) = decompose_sp(g.network()).unwrap() else {
            return Err(TestCaseError::fail("generated SP network did not decompose"));
        };
        let rebuilt = tree.to_network(g.network()).unwrap();
        let SpDecomposition::Sp(again) = decompose_sp(&rebuilt).unwrap() else {
            return Err(TestCaseError::fail("rebuilt network is not SP"));
        };
        prop_assert_eq!(tree.key(), again.key());
        prop_assert_eq!(classify(&rebuilt).unwrap(), classify(g.network()).unwrap());
    }

    #[test]
    fn composition_preserves_classes(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (Some(a), Some(b)) = (game(RandomClass::Spp, 2, 5, s1), game(RandomClass::Spp, 2, 5, s2)) else {
            return Ok(());
        };
        let series = compose_series(&[a.network().clone(), b.network().clone()]).unwrap();
        prop_assert!(classify(&series).unwrap().spp);
        let (Some(p), Some(q)) = (game(RandomClass::ParallelPaths, 2, 5, s1), game(RandomClass::ParallelPaths, 2, 5, s2)) else {
            return Ok(());
        };
        let par = compose_parallel(&[p.network().clone(), q.network().clone()]).unwrap();
        prop_assert!(classify(&par).unwrap().parallel_paths);
    }

    #[test]
    fn emulation_keeps_pattern_path_count(seed in any::<u64>()) {
        let Some(g) = game(RandomClass::General, 2, 7, seed) else { return Ok(()) };
        let net = g.network();
        prop_assume!(!classify(net).unwrap().spp);
        let emulated = build_no_se_game(net).unwrap();
        let en = emulated.network();
        let usable: Vec<usize> = (0..en.edge_count()).filter(|&e| en.edge(e).capacity > 0).collect();
        let sub = en.subnetwork(&usable);
        let count = enumerate_paths(&sub, sub.source(), sub.sink(), 1000).unwrap().len();
        // Every forbidden pattern has exactly three source-sink paths.
        prop_assert_eq!(count, 3);
    }

    #[test]
    fn json_round_trip(class in any_class(), seed in any::<u64>(), n in 1usize..=4) {
        let Some(g) = game(class, n, 6, seed) else { return Ok(()) };
        let text = game_to_json(&g);
        prop_assert_eq!(game_from_json(&text).unwrap(), g);
    }
}
