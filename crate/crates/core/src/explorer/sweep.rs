//! One-parameter game families `C(t) = A + B t`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::solve_3x2;
use crate::error::{Error, Result};
use crate::game::{canonicalize_3x2, GameMatrix, SignMatrix};
use crate::hyperbit::HyperbitOptions;
use crate::solve::solve_game;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub a: GameMatrix,
    pub b: GameMatrix,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpecJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn new(a: GameMatrix, b: GameMatrix, t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::DimensionMismatch {
                left: "A",
                left_rows: a.rows(),
                left_cols: a.cols(),
                right: "B",
                right_rows: b.rows(),
                right_cols: b.cols(),
            });
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidSweep(format!("step must be positive, got {step}")));
        }
        if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max) {
            return Err(Error::InvalidSweep(format!("bad range [{t_min}, {t_max}]")));
        }
        Ok(SweepSpec { a, b, t_min, t_max, step })
    }

    pub fn from_json(j: &SweepSpecJson) -> Result<Self> {
        SweepSpec::new(GameMatrix::new(j.a.clone())?, GameMatrix::new(j.b.clone())?, j.t_min, j.t_max, j.step)
    }

    pub fn to_json(&self) -> SweepSpecJson {
        SweepSpecJson {
            a: self.a.to_rows(),
            b: self.b.to_rows(),
            t_min: self.t_min,
            t_max: self.t_max,
            step: self.step,
        }
    }

    pub fn game_at(&self, t: f64) -> Result<GameMatrix> {
        GameMatrix::affine(&self.a, &self.b, t)
    }

    /// Grid `t_min + i * step` up to `t_max` (inclusive up to rounding).
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.t_max - self.t_min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.t_min + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t: f64,
    #[serde(rename = "I_U")]
    pub i_u: f64,
    #[serde(rename = "I_C")]
    pub i_c: f64,
    #[serde(rename = "I_H")]
    pub i_h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// `(I_U, I_C, I_H)`; canonicalizable 3x2 games use the closed form.
pub fn regime_values(c: &GameMatrix, opts: &HyperbitOptions) -> Result<(f64, f64, f64)> {
    if c.shape() == (3, 2) {
        if let Ok((canon, _)) = canonicalize_3x2(c) {
            let a = solve_3x2(&canon)?;
            return Ok((a.unlimited_value, a.classical_value, a.hyperbit_value));
        }
    }
    let s = solve_game(c, opts)?;
    Ok((s.unlimited.value, s.classical.value, s.hyperbit.value))
}

/// Values at every grid point. Solver failures are kept inline as NaN
/// values with an error message.
pub fn sweep(spec: &SweepSpec, opts: &HyperbitOptions) -> Vec<SweepPoint> {
    spec.grid()
        .into_par_iter()
        .map(|t| match spec.game_at(t).and_then(|c| regime_values(&c, opts)) {
            Ok((i_u, i_c, i_h)) => SweepPoint { t, i_u, i_c, i_h, error: None },
            Err(e) => SweepPoint {
                t,
                i_u: f64::NAN,
                i_c: f64::NAN,
                i_h: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering3 {
    /// `I_C = I_H = I_U`.
    AllEqual,
    /// `I_C = I_H < I_U`.
    NoHyperbitAdvantage,
    /// `I_C < I_H < I_U`.
    Strict,
    /// `I_C < I_H = I_U`.
    HyperbitReachesUnlimited,
}

/// Classifies a value triple with relative tolerance `tol`.
pub fn ordering(i_u: f64, i_c: f64, i_h: f64, tol: f64) -> Ordering3 {
    let eps = tol * i_u.abs().max(1.0);
    match (i_h - i_c > eps, i_u - i_h > eps) {
        (false, false) => Ordering3::AllEqual,
        (false, true) => Ordering3::NoHyperbitAdvantage,
        (true, true) => Ordering3::Strict,
        (true, false) => Ordering3::HyperbitReachesUnlimited,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    SignFlip,
    SmallestEntrySwitch,
    HyperbitOnset,
    HyperbitOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub t: f64,
    pub kind: BoundaryKind,
}

/// Discrete features whose changes mark region boundaries.
#[derive(Debug, Clone, PartialEq)]
struct Signature {
    signs: SignMatrix,
    delta_index: Option<usize>,
    advantage: bool,
}

fn signature(spec: &SweepSpec, t: f64, opts: &HyperbitOptions) -> Result<Signature> {
    let c = spec.game_at(t)?;
    let signs = c.sign_matrix();
    if c.shape() == (3, 2) {
        return Ok(match canonicalize_3x2(&c) {
            Ok((canon, _)) => {
                let a = solve_3x2(&canon)?;
                // an interior z* pays off exactly when one of these
                // compromises is the classical optimum
                let interior = a.case == crate::analytic::OptimumCase::Interior;
                Signature {
                    signs,
                    delta_index: Some(a.delta_index),
                    advantage: interior && matches!(a.delta_index, 2 | 3 | 5),
                }
            }
            Err(_) => Signature { signs, delta_index: None, advantage: false },
        });
    }
    let s = solve_game(&c, opts)?;
    Ok(Signature {
        signs,
        delta_index: None,
        advantage: s.advantage() > crate::analytic::ADVANTAGE_TOLERANCE,
    })
}

fn classify(before: &Signature, after: &Signature) -> BoundaryKind {
    if before.signs != after.signs {
        BoundaryKind::SignFlip
    } else if before.delta_index != after.delta_index {
        BoundaryKind::SmallestEntrySwitch
    } else if after.advantage {
        BoundaryKind::HyperbitOnset
    } else {
        BoundaryKind::HyperbitOffset
    }
}

/// Bisection stops once the bracket is this narrow.
pub const BOUNDARY_RESOLUTION: f64 = 1e-12;

/// Locates every change of sign matrix, classical compromise or hyperbit
/// advantage along the grid, each refined by bisection.
pub fn detect_boundaries(spec: &SweepSpec, opts: &HyperbitOptions) -> Result<Vec<Boundary>> {
    let grid = spec.grid();
    let sigs = grid
        .par_iter()
        .map(|&t| signature(spec, t, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 1..grid.len() {
        if sigs[i] == sigs[i - 1] {
            continue;
        }
        // several boundaries may share one cell; peel them off left to right
        let (mut lo, mut lo_sig) = (grid[i - 1], sigs[i - 1].clone());
        while lo_sig != sigs[i] {
            let mut hi = grid[i];
            let mut hi_sig = sigs[i].clone();
            while hi - lo > BOUNDARY_RESOLUTION {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let s = signature(spec, mid, opts)?;
                if s == lo_sig {
                    lo = mid;
                } else {
                    hi = mid;
                    hi_sig = s;
                }
            }
            out.push(Boundary { t: 0.5 * (lo + hi), kind: classify(&lo_sig, &hi_sig) });
            lo = hi;
            lo_sig = hi_sig;
        }
    }
    Ok(merge_close(out))
}

/// Collapses boundaries closer than 1e-6 (a transient zero entry at a sign
/// flip reads as two changes); sign flips win.
fn merge_close(bs: Vec<Boundary>) -> Vec<Boundary> {
    let mut out: Vec<Boundary> = Vec::with_capacity(bs.len());
    for b in bs {
        match out.last_mut() {
            Some(last) if (b.t - last.t).abs() < 1e-6 => {
                if b.kind == BoundaryKind::SignFlip && last.kind != BoundaryKind::SignFlip {
                    *last = b;
                }
            }
            _ => out.push(b),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(t_min: f64, t_max: f64, step: f64) -> SweepSpec {
        SweepSpec::new(
            GameMatrix::new(vec![vec![10.0, 1.0], vec![10.0, -2.0], vec![-10.0, -10.0]]).unwrap(),
            GameMatrix::new(vec![vec![0.0, 2.0], vec![0.0, -1.0], vec![0.0, 0.0]]).unwrap(),
            t_min,
            t_max,
            step,
        )
        .unwrap()
    }

    #[test]
    fn spec_validation() {
        let a = GameMatrix::new(vec![vec![1.0]]).unwrap();
        assert!(SweepSpec::new(a.clone(), a.clone(), 0.0, 1.0, 0.0).is_err());
        assert!(SweepSpec::new(a.clone(), a.clone(), 1.0, 0.0, 0.1).is_err());
        let b = GameMatrix::new(vec![vec![1.0, 2.0]]).unwrap();
        assert!(SweepSpec::new(a, b, 0.0, 1.0, 0.1).is_err());
        assert_eq!(family(0.0, 1.0, 0.1).grid().len(), 11);
    }

    #[test]
    fn values_at_zero() {
        let pts = sweep(&family(0.0, 0.0, 1.0), &HyperbitOptions::default());
        assert_eq!((pts[0].i_u, pts[0].i_c, pts[0].i_h), (43.0, 41.0, 41.0));
    }

    #[test]
    fn region_two_and_six() {
        let pts = sweep(&family(-1.5, -1.0, 0.25), &HyperbitOptions::default());
        for p in &pts {
            assert_eq!(ordering(p.i_u, p.i_c, p.i_h, 1e-9), Ordering3::AllEqual, "{p:?}");
        }
        let pts = sweep(&family(10.0, 10.0, 1.0), &HyperbitOptions::default());
        assert_eq!(ordering(pts[0].i_u, pts[0].i_c, pts[0].i_h, 1e-9), Ordering3::Strict);
    }

    #[test]
    fn boundaries_are_grid_independent() {
        let opts = HyperbitOptions::default();
        let coarse = detect_boundaries(&family(-10.0, 40.0, 0.1), &opts).unwrap();
        let fine = detect_boundaries(&family(-10.0, 40.0, 0.05), &opts).unwrap();
        assert_eq!(coarse.len(), 6, "{coarse:?}");
        assert_eq!(coarse.len(), fine.len());
        for (a, b) in coarse.iter().zip(&fine) {
            assert_eq!(a.kind, b.kind);
            assert!((a.t - b.t).abs() < 1e-4);
        }
    }
}
