//! Low-rank block-coordinate ascent for the per-default-vector subproblem
//!
//! ```text
//! maximize   sum_{s,t} C'_st <x_s, y_t>   over unit vectors x_s, y_t in R^r
//! ```
//!
//! which is the rank-`r` restriction of the diagonal-constrained SDP over the
//! Gram matrix of `(x_1..x_m, y_1..y_n)`. With `y` fixed the optimal `x_s` is
//! the normalized `sum_t C'_st y_t`, and symmetrically for `y`; alternating
//! the two closed-form updates never decreases the objective.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::game::GameMatrix;

/// Stopping rule and rank for one ascent run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    /// Stop once a full sweep raises the objective by less than this...
    pub tol: f64,
    /// ...and no vector coordinate moved by more than this.
    pub step_tol: f64,
    pub max_iter: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            tol: 1e-10,
            step_tol: 1e-9,
            max_iter: 10_000,
        }
    }
}

/// Vectors reached by one ascent run, stored row-major (`m x r`, `n x r`).
#[derive(Debug, Clone, PartialEq)]
pub struct AscentRun {
    pub rank: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
    /// Objective after every sweep; non-decreasing up to rounding.
    pub trace: Vec<f64>,
    pub converged: bool,
    /// Some `sum C' v` was exactly zero and the dependent vector was set to
    /// the first basis vector.
    pub zero_direction: bool,
}

/// Optimal Gram matrix of one subproblem, `(m + n) x (m + n)`, x-block first.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSolution {
    pub gram: DMatrix<f64>,
    pub objective: f64,
    pub m: usize,
    pub n: usize,
    /// Index of the restart that produced this solution.
    pub restart: usize,
    pub iterations: usize,
    pub converged: bool,
    pub zero_direction: bool,
    pub trace: Vec<f64>,
}

impl GramSolution {
    fn from_run(run: AscentRun, m: usize, n: usize, restart: usize) -> Self {
        let r = run.rank;
        let vectors: Vec<&[f64]> = run.x.chunks(r).chain(run.y.chunks(r)).collect();
        let k = m + n;
        let gram = DMatrix::from_fn(k, k, |i, j| dot(vectors[i], vectors[j]));
        GramSolution {
            gram,
            objective: run.objective,
            m,
            n,
            restart,
            iterations: run.trace.len(),
            converged: run.converged,
            zero_direction: run.zero_direction,
            trace: run.trace,
        }
    }

    pub fn xx_block(&self) -> DMatrix<f64> {
        self.gram.view((0, 0), (self.m, self.m)).into_owned()
    }

    pub fn yy_block(&self) -> DMatrix<f64> {
        self.gram.view((self.m, self.m), (self.n, self.n)).into_owned()
    }

    pub fn xy(&self, s: usize, t: usize) -> f64 {
        self.gram[(s, self.m + t)]
    }

    /// Largest deviation of the diagonal from one.
    pub fn diagonal_error(&self) -> f64 {
        (0..self.m + self.n)
            .map(|i| (self.gram[(i, i)] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.gram
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normalizes `v` in place, returning its former norm. A zero vector becomes
/// the first basis vector.
fn normalize_or_basis(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|c| *c /= norm);
    } else {
        v.iter_mut().for_each(|c| *c = 0.0);
        v[0] = 1.0;
    }
    norm
}

/// Derives independent per-stream seeds from one user seed.
pub(crate) fn stream_seed(seed: u64, stream: u64, restart: u64) -> u64 {
    let mut z = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ restart.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn random_unit_rows(rows: usize, rank: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; rows * rank];
    for row in out.chunks_mut(rank) {
        loop {
            for c in row.iter_mut() {
                *c = StandardNormal.sample(&mut rng);
            }
            if normalize_or_basis(row) > 1e-12 {
                break;
            }
        }
    }
    out
}

/// Runs the alternating updates from the given initial `y` vectors.
pub fn ascend(c: &GameMatrix, rank: usize, y_init: Vec<f64>, opts: &AscentOptions) -> AscentRun {
    let (m, n) = c.shape();
    let r = rank;
    debug_assert_eq!(y_init.len(), n * r);
    let mut y = y_init;
    let mut x = vec![0.0; m * r];
    let mut x_next = vec![0.0; m * r];
    let mut y_next = vec![0.0; n * r];
    let mut trace = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut converged = false;
    let mut zero_direction = false;
    let mut first = true;

    for _ in 0..opts.max_iter {
        // x_s <- normalize(sum_t C'_st y_t)
        x_next.iter_mut().for_each(|v| *v = 0.0);
        for s in 0..m {
            let xs = &mut x_next[s * r..(s + 1) * r];
            for (t, &cst) in c.row(s).iter().enumerate() {
                if cst != 0.0 {
                    for (a, b) in xs.iter_mut().zip(&y[t * r..(t + 1) * r]) {
                        *a += cst * b;
                    }
                }
            }
            if normalize_or_basis(xs) == 0.0 {
                zero_direction = true;
            }
        }
        // y_t <- normalize(sum_s C'_st x_s); the objective is sum_t of the norms
        y_next.iter_mut().for_each(|v| *v = 0.0);
        for s in 0..m {
            let xs = &x_next[s * r..(s + 1) * r];
            for (t, &cst) in c.row(s).iter().enumerate() {
                if cst != 0.0 {
                    for (a, b) in y_next[t * r..(t + 1) * r].iter_mut().zip(xs) {
                        *a += cst * b;
                    }
                }
            }
        }
        let mut objective = 0.0;
        for t in 0..n {
            let norm = normalize_or_basis(&mut y_next[t * r..(t + 1) * r]);
            if norm == 0.0 {
                zero_direction = true;
            }
            objective += norm;
        }
        let step = if first {
            f64::INFINITY
        } else {
            x.iter()
                .zip(&x_next)
                .chain(y.iter().zip(&y_next))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        first = false;
        std::mem::swap(&mut x, &mut x_next);
        std::mem::swap(&mut y, &mut y_next);
        trace.push(objective);
        let gain = objective - prev;
        prev = objective;
        if gain < opts.tol && step < opts.step_tol {
            converged = true;
            break;
        }
    }

    AscentRun {
        rank,
        x,
        y,
        objective: prev,
        trace,
        converged,
        zero_direction,
    }
}

/// Default ascent rank: enough for the diagonal-constrained problem to have
/// no spurious second-order critical points, and never below `min(m, n)`.
pub fn default_rank(m: usize, n: usize) -> usize {
    let k = m + n;
    let mut r = 1;
    while r * (r + 1) / 2 <= k {
        r += 1;
    }
    r.max(m.min(n)).min(k)
}

/// Best-of-`restarts` ascent on `c_prime`.
pub fn solve_subproblem(
    c_prime: &GameMatrix,
    rank_cap: usize,
    restarts: usize,
    seed: u64,
) -> Result<GramSolution> {
    solve_subproblem_with(c_prime, rank_cap, restarts, seed, 0, &AscentOptions::default())
}

pub(crate) fn solve_subproblem_with(
    c_prime: &GameMatrix,
    rank_cap: usize,
    restarts: usize,
    seed: u64,
    stream: u64,
    opts: &AscentOptions,
) -> Result<GramSolution> {
    let (m, n) = c_prime.shape();
    if rank_cap < m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "rank cap {rank_cap} is below min(m, n) = {}",
            m.min(n)
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let mut best: Option<(usize, AscentRun)> = None;
    for restart in 0..restarts {
        let y0 = random_unit_rows(n, rank_cap, stream_seed(seed, stream, restart as u64));
        let run = ascend(c_prime, rank_cap, y0, opts);
        if best.as_ref().is_none_or(|(_, b)| run.objective > b.objective) {
            best = Some((restart, run));
        }
    }
    let (restart, run) = best.expect("restarts > 0");
    Ok(GramSolution::from_run(run, m, n, restart))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[f64]]) -> GameMatrix {
        GameMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_entry() {
        let sol = solve_subproblem(&g(&[&[1.0]]), 1, 4, 0).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!((sol.xy(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_unit_three_by_two() {
        let c = g(&[&[1.0, 1.0], &[1.0, -1.0], &[-1.0, -1.0]]);
        let sol = solve_subproblem(&c, 2, 8, 7).unwrap();
        assert!((sol.objective - 2.0 * 5f64.sqrt()).abs() < 1e-9, "{}", sol.objective);
        let yy = sol.yy_block();
        assert!((yy[(0, 1)] - 0.6).abs() < 1e-6, "{}", yy[(0, 1)]);
        assert!(sol.diagonal_error() < 1e-9);
        assert!(sol.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn trace_is_monotone() {
        let c = g(&[
            &[0.3, -1.2, 0.7, 0.2],
            &[-0.4, 0.9, 0.1, -1.0],
            &[1.1, 0.2, -0.8, 0.5],
            &[-0.6, -0.5, 0.4, 0.3],
        ]);
        for restart in 0..5 {
            let y0 = random_unit_rows(4, 4, restart);
            let run = ascend(&c, 4, y0, &AscentOptions::default());
            assert!(run.converged);
            for w in run.trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "{} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn zero_column_is_flagged() {
        let c = g(&[&[1.0, 0.0], &[-1.0, 0.0]]);
        let sol = solve_subproblem(&c, 2, 2, 0).unwrap();
        assert!(sol.zero_direction);
        assert!((sol.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_rank() {
        let c = g(&[&[1.0, 1.0], &[1.0, -1.0]]);
        assert!(solve_subproblem(&c, 1, 1, 0).is_err());
    }

    #[test]
    fn default_rank_bounds() {
        assert_eq!(default_rank(1, 1), 2);
        assert!(default_rank(3, 3) >= 3);
        assert!(default_rank(8, 8) * (default_rank(8, 8) + 1) / 2 > 16);
    }
}
