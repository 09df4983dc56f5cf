//! Optimal hyperbit strategies `S_st = gamma_t + x_s . y_t`.
//!
//! At the optimum every `gamma_t` is either `0` (Bob uses the hyperbit on
//! column `t` with a unit `y_t`) or `sgn sum_s C_st` (Bob ignores all
//! communication and `y_t = 0`), and every `x_s` is a unit vector. The solver
//! enumerates the `2^N` default vectors, maximizes the hyperbit part of each
//! branch by low-rank ascent on its Gram matrix, and extracts vectors of
//! dimension `min(m, n)` for the winner.

pub mod ascent;
pub mod extract;

use crate::error::{Error, Result};
use crate::game::{sign_or_plus, GameMatrix, StrategyMatrix};
use crate::solution::{HyperbitDetails, Regime, RegimeParams, StrategySolution};

pub use ascent::{default_rank, solve_subproblem, AscentOptions, GramSolution};
pub use extract::{extract_vectors, pivoted_cholesky};

/// Bob's default answers; `0` marks a hyperbit column.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector(Vec<f64>);

impl GammaVector {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v != 0.0 && v != 1.0 && v != -1.0) {
            return Err(Error::InvalidStrategy(format!("gamma entry {v} not in {{-1, 0, 1}}")));
        }
        Ok(GammaVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Columns with `gamma_t = 0`.
    pub fn hyperbit_columns(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&t| self.0[t] == 0.0).collect()
    }

    /// Checks that every nonzero entry is the sign of its column sum.
    pub fn is_consistent_with(&self, c: &GameMatrix) -> bool {
        self.0.len() == c.cols()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(t, &g)| g == 0.0 || g == sign_or_plus(c.column_sum(t)))
    }
}

/// All `2^N` default vectors of `c`. Column `t` is either `0` or the sign of
/// its sum (`+1` when the sum is zero). Ordered by the choice bits with
/// column 0 most significant and the zero option first.
pub fn enumerate_gammas(c: &GameMatrix) -> Vec<GammaVector> {
    let n = c.cols();
    let signs: Vec<f64> = (0..n).map(|t| sign_or_plus(c.column_sum(t))).collect();
    (0..1u64 << n).map(|mask| gamma_for_mask(&signs, mask)).collect()
}

fn gamma_for_mask(signs: &[f64], mask: u64) -> GammaVector {
    let n = signs.len();
    GammaVector(
        (0..n)
            .map(|t| if (mask >> (n - 1 - t)) & 1 == 1 { signs[t] } else { 0.0 })
            .collect(),
    )
}

/// Default vector plus unit vectors realizing an optimal hyperbit strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbitStrategy {
    pub gamma: GammaVector,
    /// One vector per row, each of length `d`.
    pub x: Vec<Vec<f64>>,
    /// One vector per column, zero where `gamma_t != 0`.
    pub y: Vec<Vec<f64>>,
    pub d: usize,
}

/// Tolerance on the unit-norm and saturation invariants.
pub const NORM_TOLERANCE: f64 = 1e-9;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

impl HyperbitStrategy {
    pub fn new(gamma: GammaVector, x: Vec<Vec<f64>>, y: Vec<Vec<f64>>, d: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidStrategy(msg));
        if y.len() != gamma.len() {
            return bad(format!("{} y vectors for {} gamma entries", y.len(), gamma.len()));
        }
        if let Some(v) = x.iter().chain(&y).find(|v| v.len() != d) {
            return bad(format!("vector of length {} in a d = {d} strategy", v.len()));
        }
        let n_hyper = gamma.hyperbit_columns().len();
        if d != x.len().min(n_hyper) {
            return bad(format!("d = {d} but min(m, n) = {}", x.len().min(n_hyper)));
        }
        if d > 0 {
            if let Some((s, v)) = x.iter().enumerate().find(|(_, v)| (norm(v) - 1.0).abs() > NORM_TOLERANCE) {
                return bad(format!("x[{s}] has norm {}", norm(v)));
            }
        }
        for (t, (g, v)) in gamma.values().iter().zip(&y).enumerate() {
            if (g.abs() + norm(v) - 1.0).abs() > NORM_TOLERANCE {
                return bad(format!("|gamma[{t}]| + |y[{t}]| = {}", g.abs() + norm(v)));
            }
        }
        Ok(HyperbitStrategy { gamma, x, y, d })
    }

    pub fn rows(&self) -> usize {
        self.x.len()
    }

    pub fn cols(&self) -> usize {
        self.y.len()
    }

    /// Hyperbit correlation `x_s . y_t`.
    pub fn correlation(&self, s: usize, t: usize) -> f64 {
        ascent::dot(&self.x[s], &self.y[t])
    }

    pub fn entry(&self, s: usize, t: usize) -> f64 {
        self.gamma.values()[t] + self.correlation(s, t)
    }

    pub fn strategy_matrix(&self) -> StrategyMatrix {
        StrategyMatrix::from_fn(self.rows(), self.cols(), |s, t| self.entry(s, t).clamp(-1.0, 1.0))
            .expect("entries clamped to [-1, 1]")
    }
}

/// Knobs for [`solve_hyperbit_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbitOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Ascent rank; `None` picks [`default_rank`] per branch.
    pub rank_cap: Option<usize>,
    pub ascent: AscentOptions,
    /// Maximum number of columns whose default vectors are enumerated.
    pub enumeration_cap: usize,
    /// Branches within this of the optimum are reported as near-optimal.
    pub tie_tolerance: f64,
}

impl Default for HyperbitOptions {
    fn default() -> Self {
        HyperbitOptions {
            restarts: 32,
            seed: 0,
            rank_cap: None,
            ascent: AscentOptions::default(),
            enumeration_cap: 20,
            tie_tolerance: 1e-9,
        }
    }
}

struct Branch {
    index: usize,
    gamma: GammaVector,
    value: f64,
    gram: Option<GramSolution>,
}

fn solve_branches(c: &GameMatrix, opts: &HyperbitOptions, floor: Option<f64>) -> Result<Vec<Branch>> {
    let (m, n) = c.shape();
    if n > opts.enumeration_cap {
        return Err(Error::EnumerationCap {
            what: "columns",
            size: n,
            cap: opts.enumeration_cap,
        });
    }
    let col_sums: Vec<f64> = (0..n).map(|t| c.column_sum(t).abs()).collect();
    let col_abs: Vec<f64> = (0..n).map(|t| c.column_abs_sum(t)).collect();
    let mut best = floor.unwrap_or(f64::NEG_INFINITY);
    let mut branches = Vec::new();
    for (index, gamma) in enumerate_gammas(c).into_iter().enumerate() {
        let hyper = gamma.hyperbit_columns();
        let default: f64 = (0..n).filter(|t| !hyper.contains(t)).map(|t| col_sums[t]).sum();
        let (value, gram) = if hyper.is_empty() {
            (default, None)
        } else {
            // a hyperbit column earns at most sum_s |C_st|
            let bound = default + hyper.iter().map(|&t| col_abs[t]).sum::<f64>();
            let cutoff = match floor {
                Some(_) => best,
                None => best - opts.tie_tolerance,
            };
            if bound <= cutoff {
                continue;
            }
            let cp = c.select_columns(&hyper)?;
            let rank = opts.rank_cap.unwrap_or_else(|| default_rank(m, hyper.len()));
            let gram = ascent::solve_subproblem_with(
                &cp,
                rank,
                opts.restarts,
                opts.seed,
                index as u64,
                &opts.ascent,
            )?;
            (default + gram.objective, Some(gram))
        };
        if floor.is_some() && value <= best {
            continue;
        }
        best = best.max(value);
        branches.push(Branch {
            index,
            gamma,
            value,
            gram,
        });
    }
    Ok(branches)
}

/// Optimal hyperbit strategy with default options.
pub fn solve_hyperbit(c: &GameMatrix, restarts: usize, seed: u64) -> Result<StrategySolution> {
    let opts = HyperbitOptions {
        restarts,
        seed,
        ..HyperbitOptions::default()
    };
    solve_hyperbit_with(c, &opts)
}

pub fn solve_hyperbit_with(c: &GameMatrix, opts: &HyperbitOptions) -> Result<StrategySolution> {
    let branches = solve_branches(c, opts, None)?;
    finish(c, opts, branches)?.ok_or_else(|| Error::InvalidGame("no hyperbit branch could be extracted".into()))
}

/// Like [`solve_hyperbit_with`], but only looks for strategies whose value
/// exceeds `floor`; returns `None` when provably none does. Branches whose
/// upper bound cannot beat the floor are never solved.
pub fn solve_hyperbit_above(
    c: &GameMatrix,
    opts: &HyperbitOptions,
    floor: f64,
) -> Result<Option<StrategySolution>> {
    let branches = solve_branches(c, opts, Some(floor))?;
    finish(c, opts, branches)
}

fn finish(c: &GameMatrix, opts: &HyperbitOptions, mut branches: Vec<Branch>) -> Result<Option<StrategySolution>> {
    // best value first; ties keep enumeration order
    branches.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.index.cmp(&b.index)));
    let mut warnings = Vec::new();
    for (i, branch) in branches.iter().enumerate() {
        let strategy = match &branch.gram {
            None => HyperbitStrategy::new(
                branch.gamma.clone(),
                vec![Vec::new(); c.rows()],
                vec![Vec::new(); c.cols()],
                0,
            ),
            Some(gram) => extract_vectors(gram, &branch.gamma, c),
        };
        let strategy = match strategy {
            Ok(s) => s,
            Err(e) => {
                let msg = format!("gamma {:?} skipped: {e}", branch.gamma.values());
                log::warn!("{msg}");
                warnings.push(msg);
                continue;
            }
        };
        let near_optimal_gammas = branches[i..]
            .iter()
            .filter(|b| b.value >= branch.value - opts.tie_tolerance)
            .map(|b| b.gamma.clone())
            .collect();
        return Ok(Some(StrategySolution {
            regime: Regime::Hyperbit,
            value: branch.value,
            strategy: strategy.strategy_matrix(),
            params: RegimeParams::Hyperbit(Box::new(HyperbitDetails {
                strategy,
                seed: opts.seed,
                restarts: opts.restarts,
                near_optimal_gammas,
                warnings,
            })),
        }));
    }
    Ok(None)
}
