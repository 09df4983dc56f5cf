//! Closed-form treatment of canonical 3x2 games.
//!
//! With two hyperbit columns the objective only depends on `z = y_1 . y_2`:
//! `f(z) = sum_s sqrt(C_s1^2 + C_s2^2 + 2 C_s1 C_s2 z)`, which is concave on
//! `[-1, 1]`. The classical optimum loses `2 delta*` against the unlimited
//! value, where `delta*` is the cheapest of five candidate compromises.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{is_canonical_3x2, GameMatrix};
use crate::hyperbit::{GammaVector, HyperbitStrategy};

/// Minimum gap for [`ThreeTwoAnalysis::has_quantum_advantage`].
pub const ADVANTAGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumCase {
    BoundaryMinus,
    BoundaryPlus,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeTwoAnalysis {
    pub delta_star: f64,
    /// 1-based index into the five classical candidates.
    pub delta_index: usize,
    pub z_star: f64,
    pub case: OptimumCase,
    /// `f(z*)`, the value of using the hyperbit on both columns.
    pub f_star: f64,
    pub classical_value: f64,
    pub hyperbit_value: f64,
    pub unlimited_value: f64,
    /// `hyperbit_value - classical_value`.
    pub advantage: f64,
    pub has_quantum_advantage: bool,
}

fn check_shape(c: &GameMatrix) -> Result<()> {
    if c.shape() != (3, 2) {
        return Err(Error::InvalidGame(format!(
            "expected a 3x2 game, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    Ok(())
}

/// `f(z)` and `f'(z)`. Where a radicand vanishes with a nonzero coefficient
/// product the derivative is the matching signed infinity.
pub fn f_and_derivative(c: &GameMatrix, z: f64) -> Result<(f64, f64)> {
    check_shape(c)?;
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!("z = {z} outside [-1, 1]")));
    }
    let (mut f, mut df) = (0.0, 0.0);
    for s in 0..3 {
        let (a, b) = (c.get(s, 0), c.get(s, 1));
        let p = a * b;
        let r = (a * a + b * b + 2.0 * p * z).max(0.0);
        let root = r.sqrt();
        f += root;
        if p != 0.0 {
            df += if root > 0.0 { p / root } else { p.signum() * f64::INFINITY };
        }
    }
    Ok((f, df))
}

fn derivative(c: &GameMatrix, z: f64) -> f64 {
    f_and_derivative(c, z).expect("shape checked").1
}

/// Locates the maximizer of the concave `f` on `[-1, 1]`.
fn maximize_f(c: &GameMatrix) -> (f64, OptimumCase) {
    if derivative(c, -1.0) < 0.0 {
        return (-1.0, OptimumCase::BoundaryMinus);
    }
    if derivative(c, 1.0) > 0.0 {
        return (1.0, OptimumCase::BoundaryPlus);
    }
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = derivative(c, mid);
        if d == 0.0 {
            return (mid, OptimumCase::Interior);
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick whichever end of the final bracket has the smaller slope
    let z = if derivative(c, lo).abs() <= derivative(c, hi).abs() { lo } else { hi };
    (z, OptimumCase::Interior)
}

/// The five classical compromise costs, in candidate order.
pub fn delta_candidates(c: &GameMatrix) -> [f64; 5] {
    [
        c.get(0, 1).abs(),
        c.get(1, 0).abs(),
        c.get(1, 1).abs(),
        c.get(2, 0).abs(),
        c.get(0, 0).abs() + c.get(2, 1).abs(),
    ]
}

/// Smallest candidate and its 1-based index (lowest index on ties).
pub fn delta_star(c: &GameMatrix) -> (f64, usize) {
    let cands = delta_candidates(c);
    let mut best = (cands[0], 1);
    for (i, &v) in cands.iter().enumerate().skip(1) {
        if v < best.0 {
            best = (v, i + 1);
        }
    }
    best
}

pub fn solve_3x2(c: &GameMatrix) -> Result<ThreeTwoAnalysis> {
    check_shape(c)?;
    if !is_canonical_3x2(c) {
        return Err(Error::NotCanonical);
    }
    let (z_star, case) = maximize_f(c);
    let (f_star, _) = f_and_derivative(c, z_star)?;
    let (delta_star, delta_index) = delta_star(c);
    let unlimited_value = c.abs_sum();
    let classical_value = unlimited_value - 2.0 * delta_star;
    // branches with a default column are classical strategies, so the
    // hyperbit optimum is f(z*) unless that falls below the classical value
    let hyperbit_value = f_star.max(classical_value);
    let advantage = hyperbit_value - classical_value;
    Ok(ThreeTwoAnalysis {
        delta_star,
        delta_index,
        z_star,
        case,
        f_star,
        classical_value,
        hyperbit_value,
        unlimited_value,
        advantage,
        has_quantum_advantage: advantage > ADVANTAGE_TOLERANCE,
    })
}

/// Two-dimensional hyperbit vectors attaining `f(z*)`: `y_1 = e_1`,
/// `y_2 = (z*, sqrt(1 - z*^2))` and each `x_s` along `C_s1 y_1 + C_s2 y_2`.
pub fn interior_strategy(c: &GameMatrix, z_star: f64) -> Result<HyperbitStrategy> {
    check_shape(c)?;
    let y1 = vec![1.0, 0.0];
    let y2 = vec![z_star, (1.0 - z_star * z_star).max(0.0).sqrt()];
    let x = (0..3)
        .map(|s| {
            let (a, b) = (c.get(s, 0), c.get(s, 1));
            let v = [a * y1[0] + b * y2[0], a * y1[1] + b * y2[1]];
            let n = v[0].hypot(v[1]);
            if n > 0.0 {
                vec![v[0] / n, v[1] / n]
            } else {
                vec![1.0, 0.0]
            }
        })
        .collect();
    HyperbitStrategy::new(GammaVector::from_values(vec![0.0, 0.0])?, x, vec![y1, y2], 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::solve_classical;
    use crate::game::game_value;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(rows: &[&[f64]]) -> GameMatrix {
        GameMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn unit() -> GameMatrix {
        g(&[&[1.0, 1.0], &[1.0, -1.0], &[-1.0, -1.0]])
    }

    fn random_canonical(rng: &mut ChaCha8Rng) -> GameMatrix {
        let mut m = |sign: f64| sign * rng.random_range(0.01..10.0);
        g(&[&[m(1.0), m(1.0)], &[m(1.0), m(-1.0)], &[m(-1.0), m(-1.0)]])
    }

    #[test]
    fn row_with_zero_contributes_constant() {
        let c = g(&[&[3.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]]);
        for z in [-1.0, -0.3, 0.5, 1.0] {
            assert_eq!(f_and_derivative(&c, z).unwrap(), (3.0, 0.0));
        }
    }

    #[test]
    fn unit_game_values() {
        let (f, df) = f_and_derivative(&unit(), 0.6).unwrap();
        assert!((f - 2.0 * 5f64.sqrt()).abs() < 1e-12);
        assert!(df.abs() < 1e-12);
        let (f1, df1) = f_and_derivative(&unit(), 1.0).unwrap();
        assert!((f1 - 4.0).abs() < 1e-12);
        assert_eq!(df1, f64::NEG_INFINITY);

        let a = solve_3x2(&unit()).unwrap();
        assert_eq!(a.case, OptimumCase::Interior);
        assert!((a.z_star - 0.6).abs() < 1e-12);
        assert!((a.hyperbit_value - 2.0 * 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(a.classical_value, 4.0);
        assert_eq!(a.unlimited_value, 6.0);
        assert!(a.has_quantum_advantage);
    }

    #[test]
    fn region_three_point() {
        let a = solve_3x2(&g(&[&[10.0, 1.0], &[10.0, -2.0], &[-10.0, -10.0]])).unwrap();
        assert_eq!(a.case, OptimumCase::BoundaryPlus);
        assert_eq!(a.z_star, 1.0);
        assert_eq!(a.hyperbit_value, 41.0);
        assert_eq!(a.classical_value, 41.0);
        assert_eq!(a.delta_index, 1);
        assert!(!a.has_quantum_advantage);
    }

    #[test]
    fn hyperbit_never_below_classical() {
        // f(z*) < I_C here, so the default branches win
        let c = g(&[&[10.0, 0.01], &[10.0, -10.0], &[-10.0, -10.0]]);
        let a = solve_3x2(&c).unwrap();
        assert!(a.f_star < a.classical_value);
        assert_eq!(a.hyperbit_value, a.classical_value);
        assert!(!a.has_quantum_advantage);
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(matches!(
            solve_3x2(&g(&[&[-1.0, -1.0], &[-1.0, 1.0], &[1.0, 1.0]])),
            Err(Error::NotCanonical)
        ));
        assert!(solve_3x2(&g(&[&[1.0, 1.0]])).is_err());
    }

    #[test]
    fn endpoint_expansions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let c = random_canonical(&mut rng);
            let minus: f64 = (0..3).map(|s| (c.get(s, 0) - c.get(s, 1)).abs()).sum();
            let plus: f64 = (0..3).map(|s| (c.get(s, 0) + c.get(s, 1)).abs()).sum();
            assert!((f_and_derivative(&c, -1.0).unwrap().0 - minus).abs() <= 1e-12 * minus.max(1.0));
            assert!((f_and_derivative(&c, 1.0).unwrap().0 - plus).abs() <= 1e-12 * plus.max(1.0));
        }
    }

    #[test]
    fn concavity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let c = random_canonical(&mut rng);
            let z1: f64 = rng.random_range(-1.0..=1.0);
            let z2: f64 = rng.random_range(-1.0..=1.0);
            let l: f64 = rng.random_range(0.0..=1.0);
            let f = |z| f_and_derivative(&c, z).unwrap().0;
            assert!(f(l * z1 + (1.0 - l) * z2) >= l * f(z1) + (1.0 - l) * f(z2) - 1e-12 * f(1.0).max(1.0));
        }
    }

    #[test]
    fn classical_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let c = random_canonical(&mut rng);
            let a = solve_3x2(&c).unwrap();
            let brute = solve_classical(&c).unwrap().value;
            assert!((a.classical_value - brute).abs() <= 1e-12 * a.unlimited_value);
        }
    }

    #[test]
    fn interior_strategy_attains_f_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let c = random_canonical(&mut rng);
            let a = solve_3x2(&c).unwrap();
            let strat = interior_strategy(&c, a.z_star).unwrap();
            let v = game_value(&c, &strat.strategy_matrix()).unwrap();
            assert!((v - a.f_star).abs() <= 1e-9 * a.unlimited_value);
        }
    }

    // Squaring f'(z) = 0 twice gives the quartic
    // (p3^2 R1 R2 - p1^2 R2 R3 - p2^2 R1 R3)^2 = 4 p1^2 p2^2 R1 R2 R3^2,
    // so every interior optimum must be one of its roots.
    #[test]
    fn interior_root_solves_quartic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 50 {
            let c = random_canonical(&mut rng);
            let a = solve_3x2(&c).unwrap();
            if a.case != OptimumCase::Interior {
                continue;
            }
            let p: Vec<f64> = (0..3).map(|s| c.get(s, 0) * c.get(s, 1)).collect();
            let r = |s: usize, z: f64| c.get(s, 0).powi(2) + c.get(s, 1).powi(2) + 2.0 * p[s] * z;
            let q = |z: f64| {
                let (r1, r2, r3) = (r(0, z), r(1, z), r(2, z));
                let lhs = p[2] * p[2] * r1 * r2 - p[0] * p[0] * r2 * r3 - p[1] * p[1] * r1 * r3;
                (lhs * lhs, 4.0 * p[0] * p[0] * p[1] * p[1] * r1 * r2 * r3 * r3)
            };
            let (lhs, rhs) = q(a.z_star);
            assert!((lhs - rhs).abs() <= 1e-8 * lhs.max(rhs).max(1e-300), "{lhs} vs {rhs}");
            checked += 1;
        }
    }
}
