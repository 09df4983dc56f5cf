//! Infinite-deck dealer play and Bob's continuation policy.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{CardType, HandState};
use crate::error::Result;

/// Labels of [`DealerDistribution::probs`].
pub const DEALER_OUTCOMES: [&str; 6] = ["17", "18", "19", "20", "21", "bust"];

/// Final dealer totals 17..=21 followed by bust.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DealerDistribution {
    pub probs: [f64; 6],
}

impl DealerDistribution {
    fn point(total: u8) -> Self {
        let mut probs = [0.0; 6];
        probs[outcome_index(total)] = 1.0;
        DealerDistribution { probs }
    }

    /// Probability of finishing on `total` (17..=21).
    pub fn final_total(&self, total: u8) -> f64 {
        if (17..=21).contains(&total) {
            self.probs[usize::from(total - 17)]
        } else {
            0.0
        }
    }

    pub fn bust(&self) -> f64 {
        self.probs[5]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

fn outcome_index(total: u8) -> usize {
    if total > 21 {
        5
    } else {
        usize::from(total - 17)
    }
}

/// The dealer stands on hard 17 or more and on soft 18 or more.
pub fn dealer_stands(h: HandState) -> bool {
    h.total >= 18 || (h.total == 17 && !h.soft)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Hit,
    Stand,
}

const STATES: usize = 22 * 2;

fn state_index(h: HandState) -> usize {
    usize::from(h.total) * 2 + usize::from(h.soft)
}

fn all_live_states() -> impl Iterator<Item = HandState> {
    (2..=21u8)
        .map(|t| HandState { total: t, soft: false })
        .chain((12..=21u8).map(|t| HandState { total: t, soft: true }))
}

/// Dealer outcome distribution starting from `hand`.
pub fn dealer_distribution_from(hand: HandState) -> DealerDistribution {
    let mut memo = vec![None; STATES];
    dealer_rec(hand, &mut memo)
}

fn dealer_rec(h: HandState, memo: &mut [Option<DealerDistribution>]) -> DealerDistribution {
    if h.is_bust() || dealer_stands(h) {
        return DealerDistribution::point(h.total);
    }
    if let Some(d) = memo[state_index(h)] {
        return d;
    }
    let mut probs = [0.0; 6];
    for c in CardType::ALL {
        let next = dealer_rec(h.add(c), memo);
        let p = c.infinite_deck_probability();
        probs.iter_mut().zip(next.probs).for_each(|(a, b)| *a += p * b);
    }
    let d = DealerDistribution { probs };
    memo[state_index(h)] = Some(d);
    d
}

fn stand_against(total: u8, dealer: &DealerDistribution) -> f64 {
    if total > 21 {
        return -1.0;
    }
    let mut v = dealer.bust();
    for (i, &p) in dealer.probs[..5].iter().enumerate() {
        let d = 17 + i as u8;
        if d < total {
            v += p;
        } else if d > total {
            v -= p;
        }
    }
    v
}

/// Per-upcard lookup tables over every live hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpcardTable {
    pub upcard: CardType,
    pub dealer: DealerDistribution,
    stand: Vec<f64>,
    continuation: Vec<f64>,
    hit: Vec<bool>,
}

impl UpcardTable {
    fn compute(upcard: CardType) -> Self {
        let dealer = dealer_distribution_from(HandState::from_card(upcard));
        let mut stand = vec![0.0; STATES];
        for h in all_live_states() {
            stand[state_index(h)] = stand_against(h.total, &dealer);
        }
        let mut memo = vec![None; STATES];
        for h in all_live_states() {
            cont_rec(h, &stand, &mut memo);
        }
        let continuation = memo.iter().map(|m| m.map_or(0.0, |(v, _)| v)).collect();
        let hit = memo.iter().map(|m| m.is_some_and(|(_, hit)| hit)).collect();
        UpcardTable { upcard, dealer, stand, continuation, hit }
    }

    pub fn stand(&self, h: HandState) -> f64 {
        if h.is_bust() {
            -1.0
        } else {
            self.stand[state_index(h)]
        }
    }

    pub fn continuation(&self, h: HandState) -> f64 {
        if h.is_bust() {
            -1.0
        } else {
            self.continuation[state_index(h)]
        }
    }

    pub fn action(&self, h: HandState) -> Action {
        if !h.is_bust() && self.hit[state_index(h)] {
            Action::Hit
        } else {
            Action::Stand
        }
    }

    /// Every live hand with its optimal action.
    pub fn policy(&self) -> Vec<(HandState, Action)> {
        all_live_states().map(|h| (h, self.action(h))).collect()
    }
}

fn cont_rec(h: HandState, stand: &[f64], memo: &mut [Option<(f64, bool)>]) -> f64 {
    if h.is_bust() {
        return -1.0;
    }
    if let Some((v, _)) = memo[state_index(h)] {
        return v;
    }
    let hit: f64 = CardType::ALL
        .iter()
        .map(|&c| c.infinite_deck_probability() * cont_rec(h.add(c), stand, memo))
        .sum();
    let st = stand[state_index(h)];
    // stand on exact ties
    let entry = if hit > st { (hit, true) } else { (st, false) };
    memo[state_index(h)] = Some(entry);
    entry.0
}

/// Tables for all ten dealer upcards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpTables {
    pub upcards: Vec<UpcardTable>,
}

const CACHE_FILE: &str = "hbg_dp_tables.json";

impl DpTables {
    pub fn compute() -> Self {
        DpTables { upcards: CardType::ALL.iter().map(|&u| UpcardTable::compute(u)).collect() }
    }

    pub fn get(&self, upcard: CardType) -> &UpcardTable {
        &self.upcards[upcard.index()]
    }

    /// Loads the tables from `dir`, computing and writing them on a miss.
    pub fn load_or_compute(dir: &Path) -> Result<Self> {
        let path = dir.join(CACHE_FILE);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(t) = serde_json::from_str::<DpTables>(&text) {
                if t.upcards.len() == 10 {
                    return Ok(t);
                }
            }
            log::warn!("ignoring unreadable table cache {}", path.display());
        }
        let t = DpTables::compute();
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, serde_json::to_string(&t)?)?;
        Ok(t)
    }

    /// Process-wide tables, read through `HBG_CACHE_DIR` when it is set.
    pub fn shared() -> &'static DpTables {
        static TABLES: OnceLock<DpTables> = OnceLock::new();
        TABLES.get_or_init(|| match std::env::var_os("HBG_CACHE_DIR") {
            Some(dir) => DpTables::load_or_compute(Path::new(&dir)).unwrap_or_else(|e| {
                log::warn!("table cache unavailable ({e}); computing in memory");
                DpTables::compute()
            }),
            None => DpTables::compute(),
        })
    }
}

/// Final dealer total distribution when the dealer starts from `upcard`
/// and draws everything else from the infinite deck.
pub fn dealer_distribution(upcard: CardType) -> DealerDistribution {
    DpTables::shared().get(upcard).dealer
}

/// Expected payoff of standing on `hand`; `-1` for a bust hand.
pub fn stand_value(hand: HandState, dealer_upcard: CardType) -> f64 {
    DpTables::shared().get(dealer_upcard).stand(hand)
}

/// Optimal expected payoff from `hand` on, and the action achieving it.
pub fn continuation_value(hand: HandState, dealer_upcard: CardType) -> (f64, Action) {
    let t = DpTables::shared().get(dealer_upcard);
    (t.continuation(hand), t.action(hand))
}

/// The full hit/stand policy against `dealer_upcard`.
pub fn policy_table(dealer_upcard: CardType) -> Vec<(HandState, Action)> {
    DpTables::shared().get(dealer_upcard).policy()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dealer_normalized() {
        for u in CardType::ALL {
            assert!((dealer_distribution(u).total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dealer_rules() {
        assert_eq!(dealer_distribution_from(HandState::hard(17)).final_total(17), 1.0);
        assert_eq!(dealer_distribution_from(HandState::soft(18)).final_total(18), 1.0);
        // soft 17 hits
        assert!(dealer_distribution_from(HandState::soft(17)).final_total(17) < 1.0);
    }

    #[test]
    fn stand_values() {
        let t = CardType::Ten;
        let d = dealer_distribution(t);
        assert!((stand_value(HandState::hard(21), t) - (1.0 - d.final_total(21))).abs() < 1e-15);
        assert_eq!(stand_value(HandState { total: 25, soft: false }, t), -1.0);
        // 16 and below only win on a dealer bust
        assert!((stand_value(HandState::hard(16), t) - (2.0 * d.bust() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn policy_examples() {
        for u in CardType::ALL {
            assert_eq!(continuation_value(HandState::hard(21), u).1, Action::Stand);
            assert_eq!(continuation_value(HandState::hard(20), u).1, Action::Stand);
        }
        let (v, a) = continuation_value(HandState::hard(11), CardType::Six);
        assert_eq!(a, Action::Hit);
        assert!(v > stand_value(HandState::hard(11), CardType::Six));
    }

    #[test]
    fn policy_is_monotone() {
        for u in CardType::ALL {
            let t = DpTables::shared().get(u);
            for soft in [false, true] {
                let lo = if soft { 12 } else { 2 };
                let mut standing = false;
                for total in lo..=21 {
                    let a = t.action(HandState { total, soft });
                    if standing {
                        assert_eq!(a, Action::Stand, "upcard {u}, {} {total}", if soft { "soft" } else { "hard" });
                    }
                    standing |= a == Action::Stand;
                }
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = DpTables::load_or_compute(dir.path()).unwrap();
        let b = DpTables::load_or_compute(dir.path()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, DpTables::compute());
    }
}
