//! Oracle checks for every frozen instance: each listed constraint is
//! re-derived by enumeration or independent arithmetic.

use ccs_core::equilibria::{enumerate_equilibria, finite_costs, verify_se, SearchOptions};
use ccs_core::instances::*;
use ccs_core::optimal::{
    choose_optimal_profile, extend_partial_profile, lift_profile, solve_optimal,
    solve_optimal_exhaustive,
};
use ccs_core::topology::{classify, ForbiddenPattern};
use ccs_core::{Cost, Game, Limits, NetworkBuilder, StrategyProfile};

fn c(n: i128, d: i128) -> Cost {
    Cost::frac(n, d)
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn profile(game: &Game, ids: &[&[&str]]) -> StrategyProfile {
    let ids: Vec<Vec<&str>> = ids.iter().map(|p| p.to_vec()).collect();
    StrategyProfile::from_ids(game, &ids).unwrap()
}

fn sorted_costs(game: &Game, p: &StrategyProfile) -> Vec<Cost> {
    let mut v = finite_costs(game, p).unwrap();
    v.sort();
    v
}

#[test]
fn fig1_values_solve_the_linear_constraints() {
    // b + c = 13/10, b/2 + c = 7/10, b/2 + d = 11/10.
    let sub = |x: Cost, y: Cost| x.checked_sub(y).unwrap();
    let b = sub(c(13, 10), c(7, 10)) * Cost::integer(2);
    let cc = sub(c(13, 10), b);
    let d = sub(c(11, 10), b / Cost::integer(2));
    let game = build_fig1();
    let net = game.network();
    let cost = |id: &str| net.edge(net.edge_by_id(id).unwrap()).cost;
    assert_eq!((cost("b"), cost("c"), cost("d")), (b, cc, d));
    assert_eq!(cost("a"), Cost::one());
}

#[test]
fn fig1_constraints() {
    let game = build_fig1();
    let alone = |ids: &[&str]| {
        let p = profile(&game, &[ids, &["a"]]);
        game.agent_cost(&p, 0).finite().unwrap()
    };
    assert_eq!(alone(&["b", "c"]), c(13, 10));
    let joint = profile(&game, &[&["b", "c"], &["b", "d"]]);
    assert_eq!(finite_costs(&game, &joint).unwrap(), vec![c(7, 10), c(11, 10)]);
    let sets = enumerate_equilibria(&game, &opts()).unwrap();
    assert_eq!(sets.ne.len(), 1);
    assert_eq!(sorted_costs(&game, &sets.ne[0]), vec![Cost::one(), c(13, 10)]);
    assert!(sets.se.is_empty());
    let class = classify(game.network()).unwrap();
    assert!(class.ep && !class.spp);
}

#[test]
fn fig2_constraints() {
    let game = build_fig2_braess();
    let sets = enumerate_equilibria(&game, &opts()).unwrap();
    assert!(!sets.ne.is_empty());
    assert!(sets.se.is_empty());
    assert!(!classify(game.network()).unwrap().sp);
}

#[test]
fn fig4_constraints() {
    let eps = default_eps();
    for n in 2..=4 {
        let game = build_fig4_sp_spoa(n, eps).unwrap();
        let opt = solve_optimal(&game, &Limits::default()).unwrap();
        assert_eq!(opt.cost, Cost::one() + eps);
        let sets = enumerate_equilibria(&game, &opts()).unwrap();
        let worst = sets
            .se
            .iter()
            .map(|p| game.social_cost(p).finite().unwrap())
            .max()
            .unwrap();
        assert_eq!(worst, Cost::integer(n as u64));
        // Agent i takes the cost-1 edge of segment i and free edges elsewhere.
        let paths: Vec<Vec<String>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if k == i { format!("c{}", k + 1) } else { format!("z{}", k + 1) })
                    .collect()
            })
            .collect();
        let p = StrategyProfile::from_ids(&game, &paths).unwrap();
        assert!(verify_se(&game, &p, None).unwrap().is_none());
        assert!(finite_costs(&game, &p).unwrap().iter().all(|&x| x == Cost::one()));
    }
}

#[test]
fn fig5_constraints() {
    for r in [Cost::integer(1), Cost::integer(100)] {
        let game = build_fig5_unbounded_spoa(r).unwrap();
        let p = profile(&game, &[&["a1", "a2", "a3"], &["b1", "b2", "b3"]]);
        assert!(verify_se(&game, &p, None).unwrap().is_none());
        assert_eq!(
            game.social_cost(&p).finite().unwrap(),
            Cost::integer(24) * r + Cost::integer(5)
        );
        let opt = solve_optimal(&game, &Limits::default()).unwrap();
        assert_eq!(opt.cost, Cost::integer(24));
        assert!(!classify(game.network()).unwrap().sp);
    }
}

#[test]
fn fig6_constraints() {
    let eps = default_eps();
    for n in 3..=5 {
        let game = build_fig6_sp_spos(n, eps).unwrap();
        let opt = solve_optimal(&game, &Limits::default()).unwrap();
        assert_eq!(opt.cost, c(3, 2) + eps);
        let sets = enumerate_equilibria(&game, &opts()).unwrap();
        assert!(!sets.se.is_empty());
        for p in &sets.se {
            assert!(finite_costs(&game, p).unwrap().iter().all(|&x| x == Cost::one()));
        }
    }
}

#[test]
fn fig7_constraints() {
    for r in [Cost::integer(10), Cost::integer(100), Cost::integer(1000)] {
        let game = build_fig7_unbounded_spos(r).unwrap();
        let solo = |ids: &[&str]| {
            let p = profile(&game, &[ids, &["se", "et"]]);
            game.agent_cost(&p, 0).finite().unwrap()
        };
        assert_eq!(solo(&["sa", "ab", "btR"]), r + c(13, 10));
        let p = profile(&game, &[&["se", "ec", "cd", "db", "bt"], &["sa", "ab", "btR"]]);
        assert_eq!(game.agent_cost(&p, 0).finite().unwrap(), c(3, 5));
        let p = profile(&game, &[&["se", "et"], &["sa", "ab", "bt"]]);
        assert_eq!(game.agent_cost(&p, 0).finite().unwrap(), Cost::one());
        // Both agents through sa: one of them pays at least 11/10.
        let both = profile(&game, &[&["sa", "ab", "bt"], &["sa", "ac", "cd", "dt"]]);
        assert!(sorted_costs(&game, &both)[1] >= c(11, 10));

        let sets = enumerate_equilibria(&game, &opts()).unwrap();
        assert_eq!(sets.se.len(), 1);
        assert_eq!(sorted_costs(&game, &sets.se[0]), vec![c(3, 5), r + c(13, 10)]);

        let twin = Game::symmetric(game.network().undirected_twin(), 2).unwrap();
        let undirected = profile(&twin, &[&["sa", "ab", "db", "dt"], &["se", "et"]]);
        assert_eq!(twin.agent_cost(&undirected, 0).finite().unwrap(), c(9, 5));
        let usets = enumerate_equilibria(&twin, &opts()).unwrap();
        assert_eq!(usets.se.len(), 1);
        assert_eq!(
            usets.se[0].to_ids(twin.network()),
            sets.se[0].to_ids(game.network())
        );
    }
}

#[test]
fn fig8_constraints() {
    let r = Cost::integer(50);
    let game = build_fig8_asymmetric(r).unwrap();
    let p = profile(&game, &[&["r"], &["f", "g"]]);
    assert!(verify_se(&game, &p, None).unwrap().is_none());
    assert_eq!(game.social_cost(&p).finite().unwrap(), r);
    assert_eq!(solve_optimal(&game, &Limits::default()).unwrap().cost, Cost::one());
    let class = classify(game.network()).unwrap();
    assert!(class.ep && !class.spp);
}

#[test]
fn walkthrough_constraints() {
    let game = build_walkthrough();
    let se = walkthrough_se(&game);
    assert!(verify_se(&game, &se, None).unwrap().is_none());
    let opt = solve_optimal(&game, &Limits::default()).unwrap();
    assert_eq!(opt.used_edges, vec!["e5", "e8", "g"]);
    assert_eq!(
        opt.cost,
        solve_optimal_exhaustive(&game, &Limits::default()).unwrap().cost
    );

    let net = game.network();
    let keep: Vec<usize> = ["e8", "e5", "g"].iter().map(|id| net.edge_by_id(id).unwrap()).collect();
    let g_opt = net.subnetwork(&keep);
    let partial = choose_optimal_profile(&g_opt, &se, &game, &Limits::default()).unwrap();
    let ids: Vec<Option<Vec<&str>>> = partial
        .paths
        .iter()
        .map(|p| p.as_ref().map(|p| p.edge_ids(&g_opt)))
        .collect();
    for i in 0..4 {
        assert_eq!(ids[i].as_deref(), Some(&["e8", "e5"][..]), "agent {i}");
    }
    assert_eq!(ids[4], None);
    assert_eq!(ids[5].as_deref(), Some(&["g"][..]));

    let template = lift_profile(&opt.profile, net, &g_opt).unwrap();
    let full = extend_partial_profile(&g_opt, &template, &partial, &Limits::default()).unwrap();
    assert_eq!(full.path(4).edge_ids(&g_opt), vec!["g"]);
}

#[test]
fn no_se_on_fig1_network_is_fig1() {
    let game = build_fig1();
    let emulated = build_no_se_game(game.network()).unwrap();
    assert_eq!(emulated, game);
}

#[test]
fn no_se_on_subdivided_fig1() {
    let net = NetworkBuilder::directed()
        .edge("a", "s", "t", Cost::one(), 1)
        .edge("b1", "s", "w", Cost::one(), 1)
        .edge("b2", "w", "v", Cost::one(), 1)
        .edge("c", "v", "t", Cost::one(), 1)
        .edge("d", "v", "t", Cost::one(), 1)
        .build("s", "t")
        .unwrap();
    let game = build_no_se_game(&net).unwrap();
    let sets = enumerate_equilibria(&game, &opts()).unwrap();
    assert!(sets.se.is_empty());
}

#[test]
fn no_se_on_braess_with_chord_and_extensions() {
    let net = NetworkBuilder::directed()
        .edge("x", "s", "s1", Cost::one(), 1)
        .edge("su", "s1", "u", Cost::one(), 1)
        .edge("sv", "s1", "v", Cost::one(), 1)
        .edge("uv", "u", "v", Cost::one(), 1)
        .edge("ut", "u", "t", Cost::one(), 1)
        .edge("vt", "v", "t", Cost::one(), 1)
        .edge("chord", "s1", "t", Cost::one(), 1)
        .build("s", "t")
        .unwrap();
    let game = build_no_se_game(&net).unwrap();
    let sets = enumerate_equilibria(&game, &opts()).unwrap();
    assert!(!sets.ne.is_empty());
    assert!(sets.se.is_empty());
}

#[test]
fn no_se_rejects_spp() {
    let net = NetworkBuilder::directed()
        .edge("a", "s", "t", Cost::one(), 1)
        .edge("b", "s", "t", Cost::one(), 1)
        .build("s", "t")
        .unwrap();
    assert!(build_no_se_game(&net).is_err());
}

#[test]
fn every_pattern_alone_yields_no_se() {
    for pattern in ForbiddenPattern::ALL {
        let game = build_no_se_game(&pattern.network()).unwrap();
        let sets = enumerate_equilibria(&game, &opts()).unwrap();
        assert!(sets.se.is_empty(), "{pattern}");
        assert!(!sets.ne.is_empty(), "{pattern}");
    }
}
