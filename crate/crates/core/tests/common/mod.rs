//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use hbg::blackjack::CardType;
use hbg::game::GameMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Card points with an ace as 1.
fn pips(c: CardType) -> u32 {
    match c {
        CardType::Ace => 1,
        other => other.index() as u32 + 1,
    }
}

fn draw_probability(c: CardType) -> f64 {
    if c == CardType::Ten {
        4.0 / 13.0
    } else {
        1.0 / 13.0
    }
}

/// Best total of a list of cards and whether an ace counts as 11.
pub fn score(cards: &[CardType]) -> (u32, bool) {
    let hard: u32 = cards.iter().map(|&c| pips(c)).sum();
    if cards.contains(&CardType::Ace) && hard + 10 <= 21 {
        (hard + 10, true)
    } else {
        (hard, false)
    }
}

fn dealer_done(cards: &[CardType]) -> bool {
    let (t, soft) = score(cards);
    t > 21 || t >= 18 || (t == 17 && !soft)
}

/// Dealer outcome probabilities `[17, 18, 19, 20, 21, bust]` by walking
/// every draw sequence, plus the probability mass not accounted for.
pub fn dealer_enumerate(upcard: CardType) -> ([f64; 6], f64) {
    fn walk(cards: &mut Vec<CardType>, p: f64, out: &mut [f64; 6]) {
        if dealer_done(cards) {
            let (t, _) = score(cards);
            let i = if t > 21 { 5 } else { (t - 17) as usize };
            out[i] += p;
            return;
        }
        for c in CardType::ALL {
            cards.push(c);
            walk(cards, p * draw_probability(c), out);
            cards.pop();
        }
    }
    let mut out = [0.0; 6];
    walk(&mut vec![upcard], 1.0, &mut out);
    let residual = 1.0 - out.iter().sum::<f64>();
    (out, residual)
}

pub fn stand_against(total: u32, dealer: &[f64; 6]) -> f64 {
    if total > 21 {
        return -1.0;
    }
    let mut v = dealer[5];
    for (i, &p) in dealer[..5].iter().enumerate() {
        let d = 17 + i as u32;
        v += if d < total { p } else if d > total { -p } else { 0.0 };
    }
    v
}

/// Optimal value of a hand given as cards, by expanding the hit tree,
/// memoized on the sorted card list.
pub fn continuation_enumerate(cards: &[CardType], dealer: &[f64; 6]) -> f64 {
    fn go(cards: &mut Vec<CardType>, dealer: &[f64; 6], memo: &mut HashMap<Vec<CardType>, f64>) -> f64 {
        let (t, _) = score(cards);
        if t > 21 {
            return -1.0;
        }
        let mut key = cards.clone();
        key.sort();
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut hit = 0.0;
        for c in CardType::ALL {
            cards.push(c);
            hit += draw_probability(c) * go(cards, dealer, memo);
            cards.pop();
        }
        let v = hit.max(stand_against(t, dealer));
        memo.insert(key, v);
        v
    }
    go(&mut cards.to_vec(), dealer, &mut HashMap::new())
}

/// A card list reaching every live (total, soft) state.
pub fn representative_hands() -> Vec<(u32, bool, Vec<CardType>)> {
    use CardType::*;
    let card = |p: u32| CardType::from_index(p as usize - 1).unwrap();
    let mut out = Vec::new();
    for t in 2..=21u32 {
        let cards = match t {
            2..=10 => vec![card(t)],
            11 => vec![Nine, Two],
            12..=20 => vec![Ten, card(t - 10)],
            _ => vec![Ten, Nine, Two],
        };
        out.push((t, false, cards));
    }
    for t in 12..=21u32 {
        out.push((t, true, vec![Ace, card(t - 11)]));
    }
    out
}

/// Entries are multiples of 1/4 so that every partial sum is exact.
/// `max <C, S>` over every deterministic one-bit strategy
/// `S_st = alpha_t` if `p_s = 0` else `beta_t`.
pub fn classical_brute_force(c: &GameMatrix) -> f64 {
    let (m, n) = c.shape();
    let mut best = f64::NEG_INFINITY;
    for p in 0..1u32 << m {
        for a in 0..1u32 << n {
            for b in 0..1u32 << n {
                let sign = |bits: u32, t: usize| if bits >> t & 1 == 1 { 1.0 } else { -1.0 };
                let mut v = 0.0;
                for s in 0..m {
                    let ans = if p >> s & 1 == 1 { b } else { a };
                    for t in 0..n {
                        v += c.get(s, t) * sign(ans, t);
                    }
                }
                best = best.max(v);
            }
        }
    }
    best
}

pub fn random_game(rng: &mut ChaCha8Rng, m: usize, n: usize) -> GameMatrix {
    let rows = (0..m)
        .map(|_| (0..n).map(|_| f64::from(rng.random_range(-40..=40)) / 4.0).collect())
        .collect();
    GameMatrix::new(rows).unwrap()
}

pub fn random_canonical_3x2(rng: &mut ChaCha8Rng) -> GameMatrix {
    let mut mag = || rng.random_range(0.01..10.0);
    GameMatrix::new(vec![
        vec![mag(), mag()],
        vec![mag(), -mag()],
        vec![-mag(), -mag()],
    ])
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
