//! The two cluster-generation layouts.
//!
//! Both are written as netlists so the presets and the file format cannot drift apart.

use crate::error::{Error, Result};
use crate::gaussian::SqueezeParams;
use crate::optics::CylindricalMode;

use super::{parse_circuit, CircuitSpec};

fn input_line(port: &str, letter: &str, params: SqueezeParams, loss: Option<f64>) -> String {
    let mut line = format!(
        "input {port} squeezed {letter} r={} theta={}",
        params.r(),
        params.theta()
    );
    if let Some(t) = loss {
        line.push_str(&format!(" loss={t}"));
    }
    line
}

/// Fully connected four-mode cluster from one squeezed cylindrical beam.
///
/// A PBS splits the beam into its H part (`u`) and V part (`d`). Each arm is
/// mixed on a wave plate at ±22.5° and split again, leaving exactly one
/// squeezed-light carrying basis mode in each of `o1..o4`. The wave plate on
/// `d` sits at −22.5°, which makes every output couple to the azimuthal mode
/// with the same sign.
pub fn scheme1_circuit(
    kind: CylindricalMode,
    params: SqueezeParams,
    loss: Option<f64>,
) -> Result<CircuitSpec> {
    let (letter, outputs) = match kind {
        CylindricalMode::RPlus => ("R", "outputs o1:H10 o2:V10 o3:H01 o4:V01"),
        CylindricalMode::APlus => ("A", "outputs o3:H10 o4:V10 o1:H01 o2:V01"),
        other => {
            return Err(Error::InvalidParameter(format!(
                "scheme 1 takes a radial or azimuthal input, got {other:?}"
            )))
        }
    };
    let text = [
        "port in".to_string(),
        "port v1".into(),
        "port v2".into(),
        "port v3".into(),
        input_line("in", letter, params, loss),
        "input v1 vacuum".into(),
        "input v2 vacuum".into(),
        "input v3 vacuum".into(),
        "pbs in v1 -> u d".into(),
        "hwp u deg=22.5".into(),
        "hwp d deg=-22.5".into(),
        "pbs u v2 -> o1 o2".into(),
        "pbs d v3 -> o3 o4".into(),
        outputs.into(),
    ]
    .join("\n");
    Ok(parse_circuit(&text)?)
}

/// Box-shaped four-mode cluster from a squeezed radial and a squeezed azimuthal beam.
///
/// Both beams are split into their H and V parts. The radial H10 part and the
/// azimuthal V10 part are recombined on a PBS, mixed on a 22.5° wave plate and
/// separated again; the two TEM₀₁ parts go straight to the outputs.
pub fn scheme2_circuit(params: SqueezeParams, loss: Option<f64>) -> Result<CircuitSpec> {
    let text = [
        "port r".to_string(),
        "port a".into(),
        "port v1".into(),
        "port v2".into(),
        input_line("r", "R", params, loss),
        input_line("a", "A", params, loss),
        "input v1 vacuum".into(),
        "input v2 vacuum".into(),
        "pbs r v1 -> rh rv".into(),
        "pbs a v2 -> ah av".into(),
        "pbs rh av -> m mx".into(),
        "hwp m deg=22.5".into(),
        "pbs m mx -> o1 o2".into(),
        "outputs o1:H10 o2:V10 ah:H01 rv:V01".into(),
    ]
    .join("\n");
    Ok(parse_circuit(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compile_circuit, run_circuit, serialize_circuit, Element};
    use crate::gaussian::is_symplectic;
    use nalgebra::DMatrix;

    fn p(r: f64, theta: f64) -> SqueezeParams {
        SqueezeParams::new(r, theta).unwrap()
    }

    #[test]
    fn scheme1_element_counts() {
        let spec = scheme1_circuit(CylindricalMode::RPlus, p(0.5, 0.0), None).unwrap();
        let text = serialize_circuit(&spec);
        assert_eq!(text.lines().filter(|l| l.starts_with("pbs ")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.starts_with("hwp ")).count(), 2);
        assert_eq!(spec.outputs.len(), 4);
        assert!(scheme1_circuit(CylindricalMode::AMinus, p(0.5, 0.0), None).is_err());
    }

    #[test]
    fn scheme1_output_amplitudes_are_half() {
        for (kind, expected) in [
            (CylindricalMode::RPlus, [0.5, 0.5, -0.5, -0.5]),
            (CylindricalMode::APlus, [-0.5, -0.5, -0.5, -0.5]),
        ] {
            let spec = scheme1_circuit(kind, p(0.3, 0.0), None).unwrap();
            let compiled = compile_circuit(&spec).unwrap();
            let amps = compiled.mode_amplitudes("in", kind).unwrap();
            for (a, e) in amps.iter().zip(expected) {
                assert!((a - e).abs() < 1e-14, "{kind:?}: {amps:?}");
            }
            assert!(compiled.map.is_orthogonal(1e-12));
            assert!(is_symplectic(&compiled.map, 1e-10));
        }
    }

    #[test]
    fn scheme1_azimuthal_pairwise_covariances() {
        let r = 0.5 * 2f64.ln();
        let out = run_circuit(&scheme1_circuit(CylindricalMode::APlus, p(r, 0.0), None).unwrap())
            .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!((out.state.cov()[(i, j)] + 0.0625).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scheme2_structure() {
        let spec = scheme2_circuit(p(0.0, 0.0), None).unwrap();
        let compiled = compile_circuit(&spec).unwrap();
        assert!(compiled.map.is_orthogonal(1e-12));
        let out = run_circuit(&spec).unwrap();
        assert!((out.state.cov() - DMatrix::identity(8, 8) * 0.5).amax() < 1e-15);
        let hwps = spec
            .elements
            .iter()
            .filter(|e| matches!(e, Element::Hwp { .. }))
            .count();
        assert_eq!(hwps, 1);
    }
}
