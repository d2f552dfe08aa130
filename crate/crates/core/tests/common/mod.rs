//! Seeded game suites shared by the integration tests.

#![allow(dead_code)]

use ccs_core::equilibria::{enumerate_equilibria, SearchOptions};
use ccs_core::instances::{random_game, RandomClass};
use ccs_core::optimal::game_is_feasible;
use ccs_core::{Game, StrategyProfile};

/// `count` symmetric games of `class` with at most `max_edges` edges and
/// `1..=max_n` agents, drawn from consecutive seeds starting at `base`.
pub fn suite(class: RandomClass, count: usize, max_n: usize, max_edges: usize, base: u64) -> Vec<Game> {
    let mut out = Vec::with_capacity(count);
    let mut seed = base;
    while out.len() < count {
        let n = 1 + (seed as usize % max_n);
        if let Ok(g) = random_game(class, n, max_edges.min(8), seed) {
            if g.network().edge_count() <= max_edges {
                out.push(g);
            }
        }
        seed += 1;
    }
    out
}

/// Same network with every capacity set to `c`, if the result is feasible.
pub fn with_uniform_capacity(game: &Game, c: u32) -> Option<Game> {
    let net = game.network().map_edges(|e| (e.cost, c));
    let g = game.with_network(net).ok()?;
    game_is_feasible(&g).ok()?.then_some(g)
}

pub fn strong_equilibria(game: &Game) -> Vec<StrategyProfile> {
    enumerate_equilibria(game, &SearchOptions::default())
        .expect("enumeration within caps")
        .se
}
