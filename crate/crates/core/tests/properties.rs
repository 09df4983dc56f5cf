//! Structural invariants over generated games.

mod common;

use hbg::classical::{classical_value, solve_unlimited};
use hbg::explorer::search::{multisets, shoe_weight};
use hbg::game::{canonicalize_3x2, game_value, reduce_homogeneous_columns, GameMatrix, StrategyMatrix};
use hbg::hyperbit::HyperbitOptions;
use hbg::solve::solve_game;
use proptest::prelude::*;

// quarter-integer entries keep every sum exact, so equalities can be strict
fn matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec((-40i32..=40).prop_map(|v| f64::from(v) / 4.0), n), m)
    })
}

fn strategy_for(rows: &[Vec<f64>]) -> impl Strategy<Value = Vec<Vec<f64>>> {
    let (m, n) = (rows.len(), rows[0].len());
    prop::collection::vec(prop::collection::vec(-1.0..=1.0f64, n), m)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn game_value_is_bilinear(
        (rows, s1, s2) in matrix(5, 4).prop_flat_map(|r| (Just(r.clone()), strategy_for(&r), strategy_for(&r))),
        k in -3.0..3.0f64,
        w in 0.0..=1.0f64,
    ) {
        let c = GameMatrix::new(rows).unwrap();
        let a = StrategyMatrix::new(s1).unwrap();
        let b = StrategyMatrix::new(s2).unwrap();
        let (va, vb) = (game_value(&c, &a).unwrap(), game_value(&c, &b).unwrap());
        let mix = StrategyMatrix::from_fn(c.rows(), c.cols(), |s, t| w * a.get(s, t) + (1.0 - w) * b.get(s, t)).unwrap();
        prop_assert!((game_value(&c, &mix).unwrap() - (w * va + (1.0 - w) * vb)).abs() < 1e-9);
        prop_assert!((game_value(&c.scaled(k), &a).unwrap() - k * va).abs() < 1e-9);
        prop_assert!(va.abs() <= c.abs_sum() + 1e-9);
    }

    #[test]
    fn regimes_are_sandwiched(rows in matrix(4, 3), seed in 0u64..1000) {
        let c = GameMatrix::new(rows).unwrap();
        let opts = HyperbitOptions { restarts: 4, seed, ..Default::default() };
        let sol = solve_game(&c, &opts).unwrap();
        let slack = 1e-8 * c.abs_sum().max(1.0);
        prop_assert!(sol.classical.value <= sol.hyperbit.value + slack);
        prop_assert!(sol.hyperbit.value <= sol.unlimited.value + slack);
        prop_assert!((game_value(&c, &sol.hyperbit.strategy).unwrap() - sol.hyperbit.value).abs() < 1e-7);
        if c.sign_matrix().distinct_rows() <= 2 {
            prop_assert_eq!(classical_value(&c).unwrap(), solve_unlimited(&c).value);
        }
    }

    #[test]
    fn canonical_transform_round_trips(rows in matrix(3, 2), s in prop::collection::vec(prop::collection::vec(-1.0..=1.0f64, 2), 3)) {
        prop_assume!(rows.len() == 3 && rows[0].len() == 2);
        let c = GameMatrix::new(rows).unwrap();
        if let Ok((canon, t)) = canonicalize_3x2(&c) {
            let st = StrategyMatrix::new(s).unwrap();
            let back = t.invert_strategy(&st).unwrap();
            prop_assert!((game_value(&canon, &st).unwrap() - game_value(&c, &back).unwrap()).abs() < 1e-9);
            prop_assert_eq!(t.apply_to_strategy(&back).unwrap(), st);
            prop_assert_eq!(classical_value(&canon).unwrap(), classical_value(&c).unwrap());
        } else {
            prop_assert!(c.entries().contains(&0.0) || c.sign_matrix().distinct_rows() <= 2);
        }
    }

    #[test]
    fn reduction_keeps_classical_value(rows in matrix(5, 4)) {
        let c = GameMatrix::new(rows).unwrap();
        let (reduced, t) = reduce_homogeneous_columns(&c);
        let v = reduced.map_or(0.0, |r| classical_value(&r).unwrap());
        prop_assert!((t.reconstitute_value(v) - classical_value(&c).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn shoe_weights_are_a_distribution() {
    for k in 1..=6 {
        let total: f64 = multisets(k).iter().map(shoe_weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
