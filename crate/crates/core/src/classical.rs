//! Unlimited-communication and single-classical-bit optimal strategies.
//!
//! With one classical bit the optimum sits at a corner of the strategy
//! polytope: Alice deterministically partitions her inputs into two sets and
//! Bob best-responds to each side of the partition column by column. The
//! solver enumerates all `2^M` partitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{sign_or_plus, GameMatrix, StrategyMatrix};
use crate::solution::{Regime, RegimeParams, StrategySolution};

/// Default cap on the number of rows enumerated by [`solve_classical`].
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Deterministic single-bit strategy: Alice answers `+1` on rows with
/// `p[s] == true`, Bob plays `alpha[t]` after `+1` and `beta[t]` after `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalStrategy {
    pub p: Vec<bool>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl ClassicalStrategy {
    pub fn entry(&self, s: usize, t: usize) -> f64 {
        if self.p[s] {
            self.alpha[t]
        } else {
            self.beta[t]
        }
    }

    pub fn strategy_matrix(&self) -> StrategyMatrix {
        StrategyMatrix::from_fn(self.p.len(), self.alpha.len(), |s, t| self.entry(s, t))
            .expect("entries are +-1")
    }

    /// Bob's best responses to a fixed partition.
    pub fn best_response(c: &GameMatrix, p: Vec<bool>) -> Self {
        let (alpha, beta) = (0..c.cols())
            .map(|t| {
                let (mut plus, mut minus) = (0.0, 0.0);
                for (s, &ps) in p.iter().enumerate() {
                    if ps {
                        plus += c.get(s, t);
                    } else {
                        minus += c.get(s, t);
                    }
                }
                (sign_or_plus(plus), sign_or_plus(minus))
            })
            .unzip();
        ClassicalStrategy { p, alpha, beta }
    }
}

/// `S* = sgn C` with value `sum |C_st|`.
pub fn solve_unlimited(c: &GameMatrix) -> StrategySolution {
    let strategy = StrategyMatrix::from_fn(c.rows(), c.cols(), |s, t| sign_or_plus(c.get(s, t)))
        .expect("entries are +-1");
    StrategySolution {
        regime: Regime::Unlimited,
        value: c.abs_sum(),
        strategy,
        params: RegimeParams::Unlimited,
    }
}

pub fn solve_classical(c: &GameMatrix) -> Result<StrategySolution> {
    solve_classical_with_cap(c, DEFAULT_ENUMERATION_CAP)
}

/// Exact single-bit optimum by enumerating Alice's deterministic partitions.
///
/// Partitions are visited in lexicographic order of `p` (with `false < true`)
/// and only a strictly better value replaces the incumbent, so the smallest
/// optimal `p` wins ties.
pub fn solve_classical_with_cap(c: &GameMatrix, cap: usize) -> Result<StrategySolution> {
    let (m, n) = c.shape();
    if m > cap {
        return Err(Error::EnumerationCap {
            what: "rows",
            size: m,
            cap,
        });
    }
    let (best_mask, best_value) = enumerate_partitions(c);
    let p = (0..m).map(|s| mask_bit(best_mask, m, s)).collect();
    let strategy = ClassicalStrategy::best_response(c, p);
    debug_assert_eq!(strategy.alpha.len(), n);
    Ok(StrategySolution {
        regime: Regime::Classical,
        value: best_value,
        strategy: strategy.strategy_matrix(),
        params: RegimeParams::Classical(strategy),
    })
}

/// Optimal single-bit value only.
pub fn classical_value(c: &GameMatrix) -> Result<f64> {
    if c.rows() > DEFAULT_ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            what: "rows",
            size: c.rows(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    Ok(enumerate_partitions(c).1)
}

#[inline]
fn mask_bit(mask: u64, m: usize, s: usize) -> bool {
    (mask >> (m - 1 - s)) & 1 == 1
}

fn tie_slack(c: &GameMatrix) -> f64 {
    1e-12 * c.abs_sum().max(f64::MIN_POSITIVE)
}

fn enumerate_partitions(c: &GameMatrix) -> (u64, f64) {
    let (m, n) = c.shape();
    let slack = tie_slack(c);
    let col_sums: Vec<f64> = (0..n).map(|t| c.column_sum(t)).collect();
    let mut plus = vec![0.0; n];
    let mut best = (0u64, f64::NEG_INFINITY);
    for mask in 0..(1u64 << m) {
        plus.iter_mut().for_each(|v| *v = 0.0);
        for s in 0..m {
            if mask_bit(mask, m, s) {
                for (acc, &v) in plus.iter_mut().zip(c.row(s)) {
                    *acc += v;
                }
            }
        }
        // sum over t of |sum_{p_s=1} C_st| + |sum_{p_s=0} C_st|
        let value: f64 = plus
            .iter()
            .zip(&col_sums)
            .map(|(&a, &total)| a.abs() + (total - a).abs())
            .sum();
        if value > best.1 + slack {
            best = (mask, value);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::game_value;

    fn g(rows: &[&[f64]]) -> GameMatrix {
        GameMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn unlimited_examples() {
        let sol = solve_unlimited(&g(&[&[3.0, -2.0], &[-1.0, 4.0]]));
        assert_eq!(sol.strategy.to_rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert_eq!(sol.value, 10.0);

        let sol = solve_unlimited(&g(&[&[0.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(sol.value, 0.0);
        assert!(sol.strategy.entries().iter().all(|&v| v == 1.0));

        let sol = solve_unlimited(&g(&[&[10.0, 1.0], &[10.0, -2.0], &[-10.0, -10.0]]));
        assert_eq!(sol.value, 43.0);
    }

    #[test]
    fn classical_examples() {
        let sol = solve_classical(&g(&[&[10.0, 1.0], &[10.0, -2.0], &[-10.0, -10.0]])).unwrap();
        assert_eq!(sol.value, 41.0);
        let c = g(&[&[1.0, 1.0], &[1.0, -1.0], &[-1.0, -1.0]]);
        let sol = solve_classical(&c).unwrap();
        assert_eq!(sol.value, 4.0);
        assert_eq!(game_value(&c, &sol.strategy).unwrap(), 4.0);
    }

    #[test]
    fn smallest_p_wins_ties() {
        // p and its complement always tie; the all-false side must be chosen
        let c = g(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        let sol = solve_classical(&c).unwrap();
        assert_eq!(sol.classical().unwrap().p, vec![false, true]);
        assert_eq!(sol.value, 4.0);
    }

    #[test]
    fn cap_is_enforced() {
        let c = GameMatrix::new(vec![vec![1.0]; 5]).unwrap();
        assert!(matches!(
            solve_classical_with_cap(&c, 4),
            Err(Error::EnumerationCap { size: 5, cap: 4, .. })
        ));
    }

    #[test]
    fn reported_value_matches_strategy() {
        let c = g(&[&[0.3, -1.2, 0.7], &[-0.4, 0.9, 0.1], &[1.1, 0.2, -0.8], &[-0.6, -0.5, 0.4]]);
        let sol = solve_classical(&c).unwrap();
        let v = game_value(&c, &sol.strategy).unwrap();
        assert!((v - sol.value).abs() < 1e-12);
        assert!(sol.value <= c.abs_sum());
    }
}
