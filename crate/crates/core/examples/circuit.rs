//! Measurement circuits for the hyperbit strategy of a blackjack round.

use hbg::blackjack::{build_game, parse_cards, CardType, RoundConfig};
use hbg::circuit::build_circuit;
use hbg::hyperbit::HyperbitOptions;
use hbg::solve::solve_game;

fn main() -> hbg::error::Result<()> {
    let round = RoundConfig::new(CardType::Nine, CardType::Ten, parse_cards("AA8T")?)?;
    let (c, _) = build_game(&round)?;
    let sol = solve_game(&c, &HyperbitOptions::default())?;
    let strategy = &sol.hyperbit.hyperbit().expect("hyperbit params").strategy;
    let circuit = build_circuit(strategy)?;
    println!("{} qubits per player", circuit.qubits_per_player);
    println!("prep: {:?}", circuit.prep);
    for (s, gates) in circuit.alice.iter().enumerate() {
        println!("alice s={} ({}): {} gates", s, c.row_labels()[s], gates.len());
    }
    for (t, gates) in circuit.bob.iter().enumerate() {
        match (gates, circuit.defaults[t]) {
            (Some(g), _) => println!("bob t={} ({}): {} gates", t, c.col_labels()[t], g.len()),
            (None, Some(d)) => println!("bob t={} ({}): always answers {d}", t, c.col_labels()[t]),
            (None, None) => unreachable!(),
        }
    }
    println!("{}", serde_json::to_string_pretty(&circuit.to_json())?);
    Ok(())
}
