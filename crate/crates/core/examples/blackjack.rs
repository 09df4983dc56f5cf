//! Game matrix and values of one blackjack round.
//!
//!     cargo run --example blackjack [bob dealer shoe], e.g. 9 T AA8T

use hbg::blackjack::{build_game, parse_cards, RoundConfig};
use hbg::hyperbit::HyperbitOptions;
use hbg::solve::solve_game;

fn main() -> hbg::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (bob, dealer, shoe) = match args.as_slice() {
        [b, d, s] => (b.as_str(), d.as_str(), s.as_str()),
        _ => ("9", "T", "AA8T"),
    };
    let round = RoundConfig::new(bob.parse()?, dealer.parse()?, parse_cards(shoe)?)?;
    let start = std::time::Instant::now();
    let (c, table) = build_game(&round)?;
    let sol = solve_game(&c, &HyperbitOptions::default())?;
    println!("round {}", round.key());
    println!("{:>4} {}", "", c.col_labels().iter().map(|l| format!("{l:>10}")).collect::<String>());
    for s in 0..c.rows() {
        let row: String = c.row(s).iter().map(|v| format!("{v:>10.5}")).collect();
        println!("{:>4} {row}", c.row_labels()[s]);
    }
    println!("prior of the first pair: {:.4}", table.prior[0][0]);
    println!("I_U = {:.7}  I_C = {:.7}  I_H = {:.7}", sol.unlimited.value, sol.classical.value, sol.hyperbit.value);
    println!("advantage = {:.7}  ({:?})", sol.advantage(), start.elapsed());
    Ok(())
}
