//! Integer-scaled evaluation for the enumeration hot loops.
//!
//! All shares `p_e / k` (for `k ≤ n`) are multiplied by a common scale
//! `L = lcm(cost denominators) · lcm(1..n)`, which makes every share an
//! exact integer. Comparisons on scaled sums are therefore exact.

use num_integer::Integer;

use crate::cost::Cost;
use crate::error::Result;
use crate::game::{Game, Limits, StrategyProfile, StrategySpace};

pub(crate) struct Evaluator<'g> {
    pub game: &'g Game,
    pub space: StrategySpace,
    strat_edges: Vec<Vec<Vec<usize>>>,
    pub caps: Vec<u32>,
    share: Vec<Vec<i128>>,
    scale: i128,
}

impl<'g> Evaluator<'g> {
    pub fn new(game: &'g Game, limits: &Limits) -> Result<Self> {
        let space = game.strategy_space(limits)?;
        Ok(Self::with_space(game, space))
    }

    pub fn with_space(game: &'g Game, space: StrategySpace) -> Self {
        let n = game.n() as i128;
        let network = game.network();
        let denoms = network
            .edges()
            .iter()
            .fold(1i128, |acc, e| acc.lcm(&e.cost.denom()));
        let counts = (1..=n.max(1)).fold(1i128, |acc, k| acc.lcm(&k));
        let scale = denoms * counts;
        let share = network
            .edges()
            .iter()
            .map(|e| {
                let base = e.cost.numer() * (scale / e.cost.denom());
                (0..=n)
                    .map(|k| if k == 0 { 0 } else { base / k })
                    .collect()
            })
            .collect();
        let strat_edges = space
            .classes
            .iter()
            .map(|paths| paths.iter().map(|p| p.edges().to_vec()).collect())
            .collect();
        let caps = network.edges().iter().map(|e| e.capacity).collect();
        Evaluator {
            game,
            space,
            strat_edges,
            caps,
            share,
            scale,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.caps.len()
    }

    pub fn strategy_count(&self, agent: usize) -> usize {
        self.strat_edges[self.space.agent_class[agent]].len()
    }

    pub fn edges_of(&self, agent: usize, strategy: usize) -> &[usize] {
        &self.strat_edges[self.space.agent_class[agent]][strategy]
    }

    pub fn usage(&self, profile: &[usize]) -> Vec<u32> {
        let mut x = vec![0u32; self.edge_count()];
        for (i, &k) in profile.iter().enumerate() {
            for &e in self.edges_of(i, k) {
                x[e] += 1;
            }
        }
        x
    }

    pub fn feasible(&self, x: &[u32]) -> bool {
        x.iter().zip(&self.caps).all(|(&u, &c)| u <= c)
    }

    /// Scaled cost of `agent` playing `strategy` under usage `x` (which
    /// already counts the agent).
    pub fn cost_scaled(&self, agent: usize, strategy: usize, x: &[u32]) -> i128 {
        self.edges_of(agent, strategy)
            .iter()
            .map(|&e| self.share[e][x[e] as usize])
            .sum()
    }

    /// Scaled `Φ` for usage `x`.
    #[cfg(test)]
    pub fn potential_scaled(&self, x: &[u32]) -> i128 {
        x.iter()
            .enumerate()
            .map(|(e, &k)| (1..=k as usize).map(|j| self.share[e][j]).sum::<i128>())
            .sum()
    }

    /// Scaled total cost of used edges.
    pub fn social_scaled(&self, x: &[u32]) -> i128 {
        x.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(e, _)| self.share[e][1])
            .sum()
    }

    pub fn to_cost(&self, scaled: i128) -> Cost {
        Cost::new(scaled, self.scale).expect("scaled costs are non-negative")
    }

    pub fn profile(&self, indices: &[usize]) -> StrategyProfile {
        StrategyProfile::new(
            indices
                .iter()
                .enumerate()
                .map(|(i, &k)| self.space.strategies(i)[k].clone())
                .collect(),
        )
    }

    pub fn indices(&self, profile: &StrategyProfile) -> Option<Vec<usize>> {
        profile
            .paths()
            .iter()
            .enumerate()
            .map(|(i, p)| self.space.index_of(i, p))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    #[test]
    fn scaled_costs_match_rational_costs() {
        let g = NetworkBuilder::directed()
            .edge("a", "s", "t", Cost::frac(1, 1), 1)
            .edge("b", "s", "v", Cost::frac(6, 5), 2)
            .edge("c", "v", "t", Cost::frac(1, 10), 1)
            .edge("d", "v", "t", Cost::frac(1, 2), 1)
            .build("s", "t")
            .unwrap();
        let game = Game::symmetric(g, 2).unwrap();
        let ev = Evaluator::new(&game, &Limits::default()).unwrap();
        // strategies: [a], [b,c], [b,d]
        let prof = [1usize, 2];
        let x = ev.usage(&prof);
        let p = ev.profile(&prof);
        for i in 0..2 {
            assert_eq!(
                crate::cost::ExtCost::Finite(ev.to_cost(ev.cost_scaled(i, prof[i], &x))),
                game.agent_cost(&p, i)
            );
        }
        assert_eq!(ev.to_cost(ev.potential_scaled(&x)), game.potential(&p).unwrap());
        assert_eq!(ev.to_cost(ev.social_scaled(&x)), game.used_edge_cost(&p));
    }
}
