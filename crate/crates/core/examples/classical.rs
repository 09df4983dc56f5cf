//! One-bit classical optimum: Alice's partition and Bob's two answers.

use hbg::classical::{solve_classical, ClassicalStrategy};
use hbg::game::{game_value, GameMatrix};

fn main() -> hbg::error::Result<()> {
    let c = GameMatrix::new(vec![
        vec![2.0, 5.0, 1.0],
        vec![3.0, -5.0, -1.0],
        vec![1.0, -5.0, 2.0],
        vec![-4.0, 0.5, 3.0],
    ])?;
    let sol = solve_classical(&c)?;
    let st = sol.classical().expect("classical params");
    println!("I_C = {}", sol.value);
    println!("p     = {:?}", st.p.iter().map(|&b| u8::from(b)).collect::<Vec<_>>());
    println!("alpha = {:?}", st.alpha);
    println!("beta  = {:?}", st.beta);

    // every other partition, with Bob's best reply, does no better
    for mask in 0..1u32 << c.rows() {
        let p = (0..c.rows()).map(|s| mask >> (c.rows() - 1 - s) & 1 == 1).collect();
        let other = ClassicalStrategy::best_response(&c, p);
        assert!(game_value(&c, &other.strategy_matrix())? <= sol.value);
    }
    Ok(())
}
