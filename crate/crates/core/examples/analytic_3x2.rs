//! Closed-form 3x2 solution next to the numeric solver.

use hbg::analytic::{interior_strategy, solve_3x2, OptimumCase};
use hbg::game::{canonicalize_3x2, game_value, GameMatrix};
use hbg::hyperbit::solve_hyperbit;

fn main() -> hbg::error::Result<()> {
    let games = [
        vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, -1.0]],
        vec![vec![10.0, 21.0], vec![10.0, -12.0], vec![-10.0, -10.0]],
        vec![vec![-3.0, 2.0], vec![1.0, 4.0], vec![-1.0, -5.0]],
    ];
    for rows in games {
        let c = GameMatrix::new(rows)?;
        let (canon, _) = canonicalize_3x2(&c)?;
        let a = solve_3x2(&canon)?;
        let numeric = solve_hyperbit(&canon, 16, 0)?.value;
        println!(
            "{:?}\n  z* = {:.6} ({:?}), delta index {}, I_C = {:.6}, I_H = {:.6}, numeric {:.6}, advantage {}",
            canon.to_rows(),
            a.z_star,
            a.case,
            a.delta_index,
            a.classical_value,
            a.hyperbit_value,
            numeric,
            a.has_quantum_advantage
        );
        if a.case == OptimumCase::Interior && a.has_quantum_advantage {
            let st = interior_strategy(&canon, a.z_star)?;
            println!("  2-d strategy value {:.6}", game_value(&canon, &st.strategy_matrix())?);
        }
    }
    Ok(())
}
