//! Box-shaped cluster from a radial and an azimuthal beam mixed on one mode pair.

use cvcluster::circuit::{run_circuit, scheme2_circuit};
use cvcluster::gaussian::SqueezeParams;
use cvcluster::graph::{
    analytic_z, analytic_z_scheme2_consistent, compute_z, extract_graph, match_up_to_signs,
    z_parameter, AnalyticScheme,
};

fn main() -> cvcluster::Result<()> {
    for r in [0.0, 0.3, 0.8] {
        let params = SqueezeParams::new(r, 1.0)?;
        let z = z_parameter(params);
        let out = run_circuit(&scheme2_circuit(params, None)?)?;
        let numeric = compute_z(&out.state)?.z();
        let topo = extract_graph(&numeric, 1e-9)?;
        let consistent =
            match_up_to_signs(&numeric, &analytic_z_scheme2_consistent(z), 1e-10).is_some();
        let literal =
            match_up_to_signs(&numeric, &analytic_z(AnalyticScheme::Scheme2, z), 1e-10).is_some();
        println!(
            "r = {r}: edges {:?}, Z_00 = {:.4}, (2z+i)I form {consistent}, 2(z+i)I form {literal}",
            topo.edge_pairs(),
            numeric[(0, 0)]
        );
    }
    Ok(())
}
