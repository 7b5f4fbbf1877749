//! Graph matrix, topology and nullifier check of an arbitrary Gaussian state.

use nalgebra::DMatrix;

use cvcluster::gaussian::{
    apply_symplectic, compose, embed_map, single_mode_squeezer, vacuum_state, SqueezeParams,
    SymplecticMap,
};
use cvcluster::graph::{compute_z, extract_graph, nullifier_covariance};

fn main() -> cvcluster::Result<()> {
    let n = 3;
    let sq = single_mode_squeezer(SqueezeParams::new(0.7, 0.4)?);
    let (c, s) = (0.6, 0.8);
    let rotation = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
    let map = compose(&[embed_map(&sq, &[0], n)?, SymplecticMap::passive(&rotation)?])?;
    let state = apply_symplectic(&vacuum_state(n)?, &map)?;

    let graph = compute_z(&state)?;
    println!("Z =\n{:.4}", graph.z());
    let topo = extract_graph(&graph.z(), 1e-9)?;
    println!(
        "edges {:?}, fully connected {}",
        topo.edge_pairs(),
        topo.fully_connected
    );

    let dev = (nullifier_covariance(&state, &graph.v)? - &graph.u * 0.5)
        .abs()
        .max();
    println!("max |Cov(p - Vq) - U/2| = {dev:.2e}");
    Ok(())
}
