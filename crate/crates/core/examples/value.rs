//! Unlimited, classical and hyperbit values of a game.
//!
//!     cargo run --example value [game.json]

use hbg::game::GameMatrix;
use hbg::hyperbit::HyperbitOptions;
use hbg::solve::solve_game;

fn main() -> hbg::error::Result<()> {
    let c = match std::env::args().nth(1) {
        Some(path) => GameMatrix::from_json(&std::fs::read_to_string(path)?)?,
        None => GameMatrix::new(vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, -1.0]])?,
    };
    let sol = solve_game(&c, &HyperbitOptions::default())?;
    println!("I_U = {:.10}", sol.unlimited.value);
    println!("I_C = {:.10}", sol.classical.value);
    println!("I_H = {:.10}", sol.hyperbit.value);
    println!("advantage = {:.3e}", sol.advantage());
    println!("{}", serde_json::to_string_pretty(&sol.to_json())?);
    Ok(())
}
