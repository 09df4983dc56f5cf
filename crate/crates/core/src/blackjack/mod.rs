//! Simplified blackjack rounds as two-party games.
//!
//! Alice and Bob each see their own face-down card; Alice can signal one
//! bit through her hit/stand action, and Bob decides his first move. After
//! that move the shoe is reshuffled, so every later draw (Bob's further hits
//! and the whole dealer hand) comes from an infinite deck.

mod build;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use build::{build_game, pair_prior, PayoffTable};
pub use rules::{
    continuation_value, dealer_distribution, dealer_distribution_from, policy_table, stand_value,
    Action, DealerDistribution, DpTables, DEALER_OUTCOMES,
};

/// Card ranks with all ten-valued cards merged into `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CardType {
    Ace,
    Two,
    Three,
    Four,
    Five,
    Six,
    Seven,
    Eight,
    Nine,
    Ten,
}

impl CardType {
    pub const ALL: [CardType; 10] = [
        CardType::Ace,
        CardType::Two,
        CardType::Three,
        CardType::Four,
        CardType::Five,
        CardType::Six,
        CardType::Seven,
        CardType::Eight,
        CardType::Nine,
        CardType::Ten,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<CardType> {
        CardType::ALL.get(i).copied()
    }

    /// Hard point value (aces count 1).
    pub fn points(self) -> u8 {
        self as u8 + 1
    }

    /// Probability of drawing this type from an infinite supply of full decks.
    pub fn infinite_deck_probability(self) -> f64 {
        if self == CardType::Ten {
            4.0 / 13.0
        } else {
            1.0 / 13.0
        }
    }

    pub fn symbol(self) -> char {
        b"A23456789T"[self.index()] as char
    }
}

impl fmt::Display for CardType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for CardType {
    type Err = Error;

    fn from_str(s: &str) -> Result<CardType> {
        let card = match s.trim().to_ascii_uppercase().as_str() {
            "A" | "1" => CardType::Ace,
            "T" | "10" | "J" | "Q" | "K" => CardType::Ten,
            d if d.len() == 1 && ("2"..="9").contains(&d) => {
                CardType::from_index(usize::from(d.as_bytes()[0] - b'1')).expect("digit in range")
            }
            _ => return Err(Error::InvalidCard(s.to_string())),
        };
        Ok(card)
    }
}

impl Serialize for CardType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CardType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a shoe such as `"AA8T"` or `"A,A,8,10"`.
pub fn parse_cards(s: &str) -> Result<Vec<CardType>> {
    if s.contains(',') || s.contains(char::is_whitespace) {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    } else {
        let mut cards = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let take = if rest.starts_with("10") { 2 } else { rest.chars().next().map_or(1, char::len_utf8) };
            cards.push(rest[..take].parse()?);
            rest = &rest[take..];
        }
        Ok(cards)
    }
}

/// Sorted rank string of a shoe, e.g. `AA8T`.
pub fn shoe_key(cards: &[CardType]) -> String {
    let mut sorted = cards.to_vec();
    sorted.sort();
    sorted.iter().map(|c| c.symbol()).collect()
}

/// A hand total; `soft` means an ace is currently counted as 11.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HandState {
    pub total: u8,
    pub soft: bool,
}

impl HandState {
    pub fn new(total: u8, soft: bool) -> Result<HandState> {
        let ok = (2..=31).contains(&total) && (!soft || (12..=21).contains(&total));
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "no {} hand totals {total}",
                if soft { "soft" } else { "hard" }
            )));
        }
        Ok(HandState { total, soft })
    }

    pub fn hard(total: u8) -> HandState {
        HandState::new(total, false).expect("valid hard total")
    }

    pub fn soft(total: u8) -> HandState {
        HandState::new(total, true).expect("valid soft total")
    }

    /// Hand holding a single card.
    pub fn from_card(card: CardType) -> HandState {
        match card {
            CardType::Ace => HandState { total: 11, soft: true },
            c => HandState { total: c.points(), soft: false },
        }
    }

    pub fn from_cards(cards: &[CardType]) -> Result<HandState> {
        let (first, rest) = cards
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty hand".into()))?;
        Ok(rest.iter().fold(HandState::from_card(*first), |h, &c| h.add(c)))
    }

    pub fn add(self, card: CardType) -> HandState {
        let mut total = self.total + card.points();
        let mut soft = self.soft;
        if card == CardType::Ace && total + 10 <= 21 {
            total += 10;
            soft = true;
        }
        if total > 21 && soft {
            total -= 10;
            soft = false;
        }
        HandState { total, soft }
    }

    pub fn is_bust(self) -> bool {
        self.total > 21
    }
}

impl fmt::Display for HandState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.soft { "soft" } else { "hard" }, self.total)
    }
}

/// Public information at the decision point: both visible cards and the
/// shoe from which the two face-down cards are dealt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundConfig {
    pub bob_upcard: CardType,
    pub dealer_upcard: CardType,
    pub shoe: Vec<CardType>,
}

impl RoundConfig {
    pub fn new(bob_upcard: CardType, dealer_upcard: CardType, mut shoe: Vec<CardType>) -> Result<Self> {
        shoe.sort();
        let cfg = RoundConfig { bob_upcard, dealer_upcard, shoe };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Dealing needs two cards; a hit after the deal needs a third.
    pub fn validate(&self) -> Result<()> {
        if self.shoe.len() < 3 {
            return Err(Error::InvalidRound(format!(
                "shoe has {} cards; at least 3 are needed (two face-down cards plus one hit)",
                self.shoe.len()
            )));
        }
        Ok(())
    }

    pub fn counts(&self) -> [u32; 10] {
        let mut counts = [0; 10];
        for c in &self.shoe {
            counts[c.index()] += 1;
        }
        counts
    }

    /// `bob/dealer/shoe`, e.g. `9/T/AA8T`.
    pub fn key(&self) -> String {
        format!("{}/{}/{}", self.bob_upcard, self.dealer_upcard, shoe_key(&self.shoe))
    }
}
