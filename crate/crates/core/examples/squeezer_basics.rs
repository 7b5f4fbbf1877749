//! Single-mode squeezing, dB conversion and a lossy converter.

use cvcluster::gaussian::{apply_symplectic, loss_channel, single_mode_squeezer, vacuum_state};
use cvcluster::measurement::{squeezing_from_db, SqueezingLevel};

fn main() -> cvcluster::Result<()> {
    let (level, params) = squeezing_from_db(-3.3)?;
    let squeezer = single_mode_squeezer(params);
    let state = apply_symplectic(&vacuum_state(1)?, &squeezer)?;
    println!(
        "input {:.2} dB: r = {:.5}, <q^2> = {:.5}",
        level.db,
        params.r(),
        state.cov()[(0, 0)]
    );

    for t in [1.0, 0.9, 0.83, 0.5] {
        let lossy = loss_channel(&state, 0, t)?;
        let after = SqueezingLevel::from_variance(lossy.cov()[(0, 0)])?;
        println!(
            "T = {t:.2}: <q^2> = {:.5} ({:+.2} dB), det(2C) = {:.4}",
            after.variance,
            after.db,
            lossy.purity_determinant()
        );
    }
    Ok(())
}
