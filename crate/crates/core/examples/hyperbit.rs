//! Hyperbit optimum with its default answers and extracted vectors.

use hbg::game::{game_value, GameMatrix};
use hbg::hyperbit::{solve_hyperbit_with, HyperbitOptions};

fn main() -> hbg::error::Result<()> {
    let c = GameMatrix::new(vec![
        vec![10.0, 1.0 + 2.0 * 10.0],
        vec![10.0, -2.0 - 10.0],
        vec![-10.0, -10.0],
    ])?;
    let opts = HyperbitOptions { restarts: 16, seed: 7, ..Default::default() };
    let sol = solve_hyperbit_with(&c, &opts)?;
    let h = sol.hyperbit().expect("hyperbit params");
    println!("I_H = {:.10}  (d = {})", sol.value, h.strategy.d);
    println!("gamma = {:?}", h.strategy.gamma.values());
    for (s, x) in h.strategy.x.iter().enumerate() {
        println!("x_{s} = {x:.6?}");
    }
    for (t, y) in h.strategy.y.iter().enumerate() {
        println!("y_{t} = {y:.6?}");
    }
    println!("<C, S> = {:.10}", game_value(&c, &sol.strategy)?);
    for w in &h.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
