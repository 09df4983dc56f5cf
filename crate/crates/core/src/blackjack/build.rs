use serde::{Deserialize, Serialize};

use super::rules::DpTables;
use super::{CardType, HandState, RoundConfig};
use crate::error::Result;
use crate::game::GameMatrix;

/// Per-pair priors and payoffs behind a blackjack game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable {
    pub labels: Vec<CardType>,
    /// Expected payoff when Bob hits first.
    pub v_plus: Vec<Vec<f64>>,
    /// Expected payoff when Bob stands.
    pub v_minus: Vec<Vec<f64>>,
    /// Probability that Alice gets `s` and Bob gets `t`.
    pub prior: Vec<Vec<f64>>,
}

/// Probability of dealing `s` to Alice, then `t` to Bob, without replacement.
pub fn pair_prior(counts: &[u32; 10], s: CardType, t: CardType) -> f64 {
    let n: u32 = counts.iter().sum();
    if n < 2 {
        return 0.0;
    }
    let ns = counts[s.index()];
    let nt = counts[t.index()] - u32::from(s == t).min(counts[t.index()]);
    if ns == 0 {
        return 0.0;
    }
    f64::from(ns) / f64::from(n) * f64::from(nt) / f64::from(n - 1)
}

/// Game for one round: `C_st = pi(s,t) (V+ - V-)`, rows and columns over the
/// distinct card types left in the shoe.
///
/// Bob's first hit comes from the shoe minus both face-down cards; Alice's
/// own draw is ignored because, unseen by Bob, it leaves his draw
/// distribution unchanged. Pairs that cannot be dealt get `V+ = V-` and a
/// zero prior.
pub fn build_game(cfg: &RoundConfig) -> Result<(GameMatrix, PayoffTable)> {
    build_game_with(cfg, DpTables::shared())
}

pub(crate) fn build_game_with(cfg: &RoundConfig, tables: &DpTables) -> Result<(GameMatrix, PayoffTable)> {
    cfg.validate()?;
    let counts = cfg.counts();
    let labels: Vec<CardType> = CardType::ALL.into_iter().filter(|c| counts[c.index()] > 0).collect();
    let table = tables.get(cfg.dealer_upcard);
    let k = labels.len();
    let mut v_plus = vec![vec![0.0; k]; k];
    let mut v_minus = vec![vec![0.0; k]; k];
    let mut prior = vec![vec![0.0; k]; k];
    let mut c = vec![vec![0.0; k]; k];
    for (i, &s) in labels.iter().enumerate() {
        for (j, &t) in labels.iter().enumerate() {
            let hand = HandState::from_card(cfg.bob_upcard).add(t);
            let stand = table.stand(hand);
            v_minus[i][j] = stand;
            let pi = pair_prior(&counts, s, t);
            prior[i][j] = pi;
            if pi == 0.0 {
                v_plus[i][j] = stand;
                continue;
            }
            let mut rest = counts;
            rest[s.index()] -= 1;
            rest[t.index()] -= 1;
            let remaining: u32 = rest.iter().sum();
            let hit: f64 = CardType::ALL
                .iter()
                .filter(|d| rest[d.index()] > 0)
                .map(|&d| f64::from(rest[d.index()]) / f64::from(remaining) * table.continuation(hand.add(d)))
                .sum();
            v_plus[i][j] = hit;
            c[i][j] = pi * (hit - stand);
        }
    }
    let names: Vec<String> = labels.iter().map(ToString::to_string).collect();
    let game = GameMatrix::with_labels(c, Some(names.clone()), Some(names))?;
    Ok((game, PayoffTable { labels, v_plus, v_minus, prior }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackjack::parse_cards;
    use crate::classical::{solve_classical, solve_unlimited};

    fn round(bob: &str, dealer: &str, shoe: &str) -> RoundConfig {
        RoundConfig::new(bob.parse().unwrap(), dealer.parse().unwrap(), parse_cards(shoe).unwrap()).unwrap()
    }

    #[test]
    fn hypergeometric_priors() {
        let cfg = round("9", "T", "AA8T");
        let counts = cfg.counts();
        use CardType::*;
        assert!((pair_prior(&counts, Ace, Ace) - 1.0 / 6.0).abs() < 1e-15);
        assert!((pair_prior(&counts, Ace, Eight) - 1.0 / 6.0).abs() < 1e-15);
        assert!((pair_prior(&counts, Eight, Ten) - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(pair_prior(&counts, Eight, Eight), 0.0);
        let (_, p) = build_game(&cfg).unwrap();
        let total: f64 = p.prior.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn worked_example_matrix() {
        let (c, p) = build_game(&round("9", "T", "AA8T")).unwrap();
        assert_eq!(c.row_labels(), ["A", "8", "T"]);
        assert!(p.v_plus.iter().chain(&p.v_minus).flatten().all(|v| (-1.0..=1.0).contains(v)));
        // a single 8 cannot be dealt to both players
        assert_eq!(c.get(1, 1), 0.0);
        assert!((c.abs_sum() - 0.23916).abs() < 1e-5, "{}", c.abs_sum());
    }

    #[test]
    fn large_shoe_is_classically_trivial() {
        let mut shoe = Vec::new();
        for card in CardType::ALL {
            let n = if card == CardType::Ten { 4_000_000 } else { 1_000_000 };
            shoe.extend(std::iter::repeat_n(card, n));
        }
        let cfg = RoundConfig::new(CardType::Nine, CardType::Ten, shoe).unwrap();
        let (c, _) = build_game(&cfg).unwrap();
        let u = solve_unlimited(&c).value;
        let cl = solve_classical(&c).unwrap().value;
        assert!((u - cl).abs() < 1e-4);
    }
}
