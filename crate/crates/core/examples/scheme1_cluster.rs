//! Fully connected four-mode cluster from one squeezed cylindrical beam.

use std::f64::consts::FRAC_PI_2;

use cvcluster::circuit::{run_circuit, scheme1_circuit};
use cvcluster::gaussian::SqueezeParams;
use cvcluster::graph::{
    analytic_z, compute_z, extract_graph, match_up_to_signs, z_parameter, AnalyticScheme,
};
use cvcluster::optics::CylindricalMode;

fn main() -> cvcluster::Result<()> {
    let params = SqueezeParams::new(0.5, FRAC_PI_2)?;
    let z = z_parameter(params);
    println!("z = {:.5}", z.value());

    for (kind, scheme) in [
        (CylindricalMode::APlus, AnalyticScheme::Scheme1Azimuthal),
        (CylindricalMode::RPlus, AnalyticScheme::Scheme1Radial),
    ] {
        let out = run_circuit(&scheme1_circuit(kind, params, None)?)?;
        let graph = compute_z(&out.state)?;
        let numeric = graph.z();
        let topo = extract_graph(&numeric, 1e-9)?;
        let signs = match_up_to_signs(&numeric, &analytic_z(scheme, z), 1e-10);
        println!(
            "\n{kind:?} input, outputs {:?}",
            out.ordering
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        );
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| format!("{:+.4}{:+.4}i", numeric[(i, j)].re, numeric[(i, j)].im))
                .collect();
            println!("  {}", row.join("  "));
        }
        println!(
            "  edges {}, fully symmetric {}, matches closed form with signs {:?}",
            topo.edges.len(),
            topo.fully_symmetric,
            signs
        );
    }
    Ok(())
}
