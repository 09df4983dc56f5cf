//! Values along C(t) = A + B t and the region boundaries.

use hbg::explorer::sweep::{detect_boundaries, ordering, sweep, SweepSpec};
use hbg::game::GameMatrix;
use hbg::hyperbit::HyperbitOptions;

fn main() -> hbg::error::Result<()> {
    let spec = SweepSpec::new(
        GameMatrix::new(vec![vec![10.0, 1.0], vec![10.0, -2.0], vec![-10.0, -10.0]])?,
        GameMatrix::new(vec![vec![0.0, 2.0], vec![0.0, -1.0], vec![0.0, 0.0]])?,
        -10.0,
        40.0,
        0.1,
    )?;
    let opts = HyperbitOptions::default();
    for b in detect_boundaries(&spec, &opts)? {
        println!("boundary t = {:>10.6}  {:?}", b.t, b.kind);
    }
    let points = sweep(&spec, &opts);
    for p in points.iter().step_by(50) {
        println!(
            "t = {:>5.1}  I_U {:>8.3}  I_C {:>8.3}  I_H {:>8.3}  {:?}",
            p.t,
            p.i_u,
            p.i_c,
            p.i_h,
            ordering(p.i_u, p.i_c, p.i_h, 1e-9)
        );
    }
    Ok(())
}
