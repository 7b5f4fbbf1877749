//! Parse a netlist, print its canonical form and run it.

use cvcluster::circuit::{compile_circuit, parse_circuit, serialize_circuit};

const NETLIST: &str = "\
# split a squeezed azimuthal beam by polarization and rotate one arm
port in
port v
input in squeezed A r=0.6 theta=0
pbs in v -> u d
hwp u deg=22.5
outputs u:H01 u:V01 d:V10 d:H10
";

fn main() {
    let text = std::env::args()
        .nth(1)
        .map(|p| std::fs::read_to_string(p).expect("readable netlist"))
        .unwrap_or_else(|| NETLIST.to_string());
    let spec = match parse_circuit(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("line {} column {}: {e}", e.line, e.column);
            std::process::exit(3);
        }
    };
    print!("{}", serialize_circuit(&spec));
    let compiled = compile_circuit(&spec).expect("wired circuit");
    let full = compiled.run_full(&spec).expect("physical inputs");
    let out = compiled.select_outputs(&full).expect("outputs");
    println!(
        "\n{} carried modes, {} outputs",
        compiled.map.n_modes(),
        out.ordering.len()
    );
    for (k, label) in out.ordering.iter().enumerate() {
        println!("  {label}: <q^2> = {:.5}", out.state.cov()[(k, k)]);
    }
}
