//! Library results against brute-force enumerations.

mod common;

use common::*;
use hbg::blackjack::{continuation_value, dealer_distribution, stand_value, CardType, HandState};
use hbg::classical::solve_classical;
use hbg::game::game_value;

#[test]
fn classical_matches_exhaustive_strategies() {
    let mut r = rng(11);
    for i in 0..200 {
        let m = 1 + i % 6;
        let n = 1 + (i / 6) % 4;
        let c = random_game(&mut r, m, n);
        let sol = solve_classical(&c).unwrap();
        assert_eq!(sol.value, classical_brute_force(&c), "{:?}", c.to_rows());
        assert_eq!(game_value(&c, &sol.strategy).unwrap(), sol.value);
    }
}

#[test]
fn dealer_matches_sequence_enumeration() {
    for up in CardType::ALL {
        let (probs, residual) = dealer_enumerate(up);
        assert!(residual.abs() < 1e-12, "{up}: residual {residual}");
        let d = dealer_distribution(up);
        for (a, b) in probs.iter().zip(d.probs) {
            assert!((a - b).abs() < 1e-10, "{up}: {probs:?} vs {:?}", d.probs);
        }
    }
}

#[test]
fn stand_and_continuation_match_tree_expansion() {
    for up in CardType::ALL {
        let (dealer, _) = dealer_enumerate(up);
        for (total, soft, cards) in representative_hands() {
            assert_eq!(score(&cards), (total, soft));
            let h = HandState::from_cards(&cards).unwrap();
            assert_eq!((u32::from(h.total), h.soft), (total, soft));
            let st = stand_value(h, up);
            assert!((st - stand_against(total, &dealer)).abs() < 1e-10);
            let (v, _) = continuation_value(h, up);
            let want = continuation_enumerate(&cards, &dealer);
            assert!((v - want).abs() < 1e-10, "{up} {h}: {v} vs {want}");
        }
    }
}
