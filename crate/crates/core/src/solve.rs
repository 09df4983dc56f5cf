//! All three regimes for one game.

use serde::{Deserialize, Serialize};

use crate::classical::{solve_classical, solve_unlimited};
use crate::error::Result;
use crate::game::{reduce_homogeneous_columns, GameMatrix, GameTransform};
use crate::hyperbit::{solve_hyperbit_above, solve_hyperbit_with, GammaVector, HyperbitOptions, HyperbitStrategy};
use crate::solution::{HyperbitDetails, RegimeParams, SolutionJson, StrategySolution};

#[derive(Debug, Clone, PartialEq)]
pub struct GameSolutions {
    pub unlimited: StrategySolution,
    pub classical: StrategySolution,
    pub hyperbit: StrategySolution,
}

impl GameSolutions {
    /// `I_H - I_C`.
    pub fn advantage(&self) -> f64 {
        self.hyperbit.value - self.classical.value
    }

    pub fn to_json(&self) -> SolutionsJson {
        SolutionsJson {
            i_u: self.unlimited.value,
            i_c: self.classical.value,
            i_h: self.hyperbit.value,
            advantage: self.advantage(),
            unlimited: self.unlimited.to_json(),
            classical: self.classical.to_json(),
            hyperbit: self.hyperbit.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionsJson {
    #[serde(rename = "I_U")]
    pub i_u: f64,
    #[serde(rename = "I_C")]
    pub i_c: f64,
    #[serde(rename = "I_H")]
    pub i_h: f64,
    pub advantage: f64,
    pub unlimited: SolutionJson,
    pub classical: SolutionJson,
    pub hyperbit: SolutionJson,
}

/// Hyperbit solution of `c` computed on its reduced game and mapped back.
/// Homogeneous columns always answer by default, so only the rest needs
/// the gamma enumeration.
pub fn solve_hyperbit_reduced(c: &GameMatrix, opts: &HyperbitOptions) -> Result<StrategySolution> {
    let (reduced, transform) = reduce_homogeneous_columns(c);
    match reduced {
        None => Ok(all_default(c, &transform)),
        Some(r) => Ok(lift(c, &transform, solve_hyperbit_with(&r, opts)?, opts)),
    }
}

fn all_default(c: &GameMatrix, transform: &GameTransform) -> StrategySolution {
    let gamma: Vec<f64> = transform.dropped_signs.iter().map(|&s| f64::from(s)).collect();
    let strategy = HyperbitStrategy::new(
        GammaVector::from_values(gamma).expect("signs are +-1"),
        vec![Vec::new(); c.rows()],
        vec![Vec::new(); c.cols()],
        0,
    )
    .expect("default-only strategy is valid");
    StrategySolution {
        regime: crate::solution::Regime::Hyperbit,
        value: transform.dropped_contribution,
        strategy: strategy.strategy_matrix(),
        params: RegimeParams::Hyperbit(Box::new(HyperbitDetails {
            near_optimal_gammas: vec![strategy.gamma.clone()],
            strategy,
            seed: 0,
            restarts: 0,
            warnings: Vec::new(),
        })),
    }
}

fn lift_gamma(transform: &GameTransform, reduced: &GammaVector) -> GammaVector {
    let mut g = vec![0.0; transform.original_shape.1];
    for (&k, &v) in transform.col_permutation.iter().zip(reduced.values()) {
        g[k] = v;
    }
    for (&k, &s) in transform.dropped_columns.iter().zip(&transform.dropped_signs) {
        g[k] = f64::from(s);
    }
    GammaVector::from_values(g).expect("entries in {-1, 0, 1}")
}

fn lift(c: &GameMatrix, transform: &GameTransform, sol: StrategySolution, opts: &HyperbitOptions) -> StrategySolution {
    let details = match sol.params {
        RegimeParams::Hyperbit(d) => d,
        _ => unreachable!("hyperbit solver returns hyperbit params"),
    };
    let st = &details.strategy;
    let mut y = vec![vec![0.0; st.d]; c.cols()];
    for (&k, v) in transform.col_permutation.iter().zip(&st.y) {
        y[k] = v.clone();
    }
    let strategy = HyperbitStrategy::new(lift_gamma(transform, &st.gamma), st.x.clone(), y, st.d)
        .expect("lifting preserves the strategy invariants");
    StrategySolution {
        regime: sol.regime,
        value: transform.reconstitute_value(sol.value),
        strategy: strategy.strategy_matrix(),
        params: RegimeParams::Hyperbit(Box::new(HyperbitDetails {
            near_optimal_gammas: details.near_optimal_gammas.iter().map(|g| lift_gamma(transform, g)).collect(),
            strategy,
            seed: opts.seed,
            restarts: opts.restarts,
            warnings: details.warnings,
        })),
    }
}

/// Unlimited, classical and hyperbit optima of `c`.
pub fn solve_game(c: &GameMatrix, opts: &HyperbitOptions) -> Result<GameSolutions> {
    Ok(GameSolutions {
        unlimited: solve_unlimited(c),
        classical: solve_classical(c)?,
        hyperbit: solve_hyperbit_reduced(c, opts)?,
    })
}

/// Values `(I_U, I_C, I_H)` when the hyperbit optimum beats `I_C + threshold`;
/// otherwise `I_H` is `None` and only known to be within the threshold.
/// Games whose reduced sign matrix has two or fewer distinct rows are
/// classically optimal and never reach the hyperbit solver.
pub fn screen_advantage(
    c: &GameMatrix,
    opts: &HyperbitOptions,
    threshold: f64,
) -> Result<(f64, f64, Option<StrategySolution>)> {
    let i_u = c.abs_sum();
    let i_c = crate::classical::classical_value(c)?;
    if i_u - i_c <= threshold {
        return Ok((i_u, i_c, None));
    }
    let (reduced, transform) = reduce_homogeneous_columns(c);
    let Some(r) = reduced else {
        return Ok((i_u, i_c, None));
    };
    if r.sign_matrix().distinct_rows() <= 2 {
        return Ok((i_u, i_c, None));
    }
    let floor = i_c + threshold - transform.dropped_contribution;
    let sol = solve_hyperbit_above(&r, opts, floor)?.map(|s| lift(c, &transform, s, opts));
    Ok((i_u, i_c, sol))
}
