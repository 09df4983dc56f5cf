//! Infinite-deck dealer outcomes and the continuation policy.

use hbg::blackjack::{dealer_distribution, policy_table, Action, CardType, DEALER_OUTCOMES};

fn main() {
    println!("{:>3} {}", "up", DEALER_OUTCOMES.map(|o| format!("{o:>8}")).concat());
    for up in CardType::ALL {
        let d = dealer_distribution(up);
        println!("{:>3} {}", up, d.probs.map(|p| format!("{p:>8.4}")).concat());
    }
    println!();
    for up in [CardType::Six, CardType::Ten] {
        let stands: Vec<String> = policy_table(up)
            .into_iter()
            .filter(|(h, a)| *a == Action::Stand && h.total <= 18)
            .map(|(h, _)| h.to_string())
            .collect();
        println!("against {up}, stand from: {}", stands.join(", "));
    }
}
