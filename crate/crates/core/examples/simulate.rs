//! Statevector check of synthesized circuits, exact and sampled.

use hbg::analytic::{interior_strategy, solve_3x2};
use hbg::circuit::build_circuit;
use hbg::game::GameMatrix;
use hbg::qsim::{prepared_state, sample_zz, verify_on_game};

fn main() -> hbg::error::Result<()> {
    let c = GameMatrix::new(vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, -1.0]])?;
    let a = solve_3x2(&c)?;
    let strategy = interior_strategy(&c, a.z_star)?;
    let circuit = build_circuit(&strategy)?;
    let report = verify_on_game(&c, &strategy, &circuit, 1e-9)?;
    for e in &report.entries {
        println!("S[{}][{}] expected {:+.12} simulated {:+.12}", e.s, e.t, e.expected, e.simulated);
    }
    println!("pass = {}, max deviation {:.2e}", report.pass, report.max_deviation);
    println!("simulated value {:.12} vs 2 sqrt 5 = {:.12}", report.simulated_value.unwrap(), 2.0 * 5f64.sqrt());

    // the same correlation from measurement shots
    let l = circuit.qubits_per_player;
    let mut state = prepared_state(&circuit)?;
    state.apply_all(&circuit.alice[0])?;
    state.apply_all(circuit.bob[1].as_ref().expect("hyperbit column"))?;
    let shots = 20_000;
    let est = sample_zz(&state, 0, l, shots, 1)?;
    println!("S[0][1] from {shots} shots: {est:+.4} (exact {:+.4})", strategy.entry(0, 1));
    Ok(())
}
