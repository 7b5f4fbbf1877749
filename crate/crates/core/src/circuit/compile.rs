use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_symplectic, compose, embed_map, single_mode_squeezer, vacuum_state, GaussianState,
    SqueezeParams, SymplecticMap,
};
use crate::optics::{
    cylindrical_mode_matrix, hwp_port_map, pbs_map, prepare_squeezed_cylindrical, BasisMode,
    CylindricalMode, ModeLabel,
};

use super::{CircuitSpec, Element, InputState, Wiring};

/// A circuit reduced to one symplectic map over all carried modes.
///
/// Mode `4·b + m` is basis mode `m` of block `b`; blocks are the source ports in
/// declaration order and keep their index as beam splitters rename them.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    pub map: SymplecticMap,
    /// Labels of every carried mode before the circuit.
    pub input_ordering: Vec<ModeLabel>,
    /// Labels of every carried mode after the circuit.
    pub output_ordering: Vec<ModeLabel>,
    /// Indices into `output_ordering` of the declared outputs, in declared order.
    pub output_modes: Vec<usize>,
}

fn labels(names: &[String]) -> Vec<ModeLabel> {
    names
        .iter()
        .flat_map(|n| {
            BasisMode::ALL
                .iter()
                .map(move |&m| ModeLabel::new(n.clone(), m))
        })
        .collect()
}

fn slots(block: usize) -> [usize; 4] {
    [4 * block, 4 * block + 1, 4 * block + 2, 4 * block + 3]
}

/// Compiles `spec` into one map; element maps are applied in listed order.
pub fn compile_circuit(spec: &CircuitSpec) -> Result<CompiledCircuit> {
    let wiring_err = |el: &dyn std::fmt::Display, message: String| Error::Wiring {
        element: el.to_string(),
        message,
    };
    let mut w = Wiring::default();
    for (name, _) in &spec.ports {
        w.declare_source(name)
            .map_err(|m| wiring_err(&format!("port {name}"), m))?;
    }
    if w.n_blocks() == 0 {
        return Err(Error::InvalidParameter("circuit declares no ports".into()));
    }
    let input_ordering = labels(&w.block_names());
    let n = 4 * w.n_blocks();

    let mut maps = Vec::with_capacity(spec.elements.len());
    for el in &spec.elements {
        let embedded = match el {
            Element::Hwp { port, deg } => {
                let b = w.block(port, "hwp").map_err(|m| wiring_err(el, m))?;
                embed_map(&hwp_port_map(deg.to_radians()), &slots(b), n)?
            }
            Element::Pbs {
                in_a,
                in_b,
                out_t,
                out_r,
            } => {
                let (a, b) = w
                    .pbs(in_a, in_b, out_t, out_r)
                    .map_err(|m| wiring_err(el, m))?;
                let targets: Vec<usize> = slots(a).into_iter().chain(slots(b)).collect();
                embed_map(&pbs_map(), &targets, n)?
            }
            Element::Squeeze { target, r, theta } => {
                let b = w
                    .block(&target.port, "squeeze")
                    .map_err(|m| wiring_err(el, m))?;
                let params = SqueezeParams::new(*r, *theta)?;
                embed_map(
                    &single_mode_squeezer(params),
                    &[4 * b + target.mode.index()],
                    n,
                )?
            }
        };
        maps.push(embedded);
    }
    let map = if maps.is_empty() {
        SymplecticMap::identity(n)
    } else {
        compose(&maps)?
    };

    let output_ordering = labels(&w.block_names());
    if spec.outputs.is_empty() {
        return Err(Error::InvalidParameter("no outputs declared".into()));
    }
    let mut output_modes = Vec::with_capacity(spec.outputs.len());
    for label in &spec.outputs {
        let idx = output_ordering
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Wiring {
                element: "outputs".into(),
                message: format!("output `{label}` is not a live mode"),
            })?;
        if output_modes.contains(&idx) {
            return Err(Error::Wiring {
                element: "outputs".into(),
                message: format!("output `{label}` listed twice"),
            });
        }
        output_modes.push(idx);
    }

    Ok(CompiledCircuit {
        map,
        input_ordering,
        output_ordering,
        output_modes,
    })
}

/// Output state of a circuit, restricted to and ordered by its declared outputs.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub state: GaussianState,
    pub ordering: Vec<ModeLabel>,
}

impl CompiledCircuit {
    /// Product state of all source-port inputs over the carried modes.
    pub fn prepare_inputs(&self, spec: &CircuitSpec) -> Result<GaussianState> {
        let mut state: Option<GaussianState> = None;
        for (_, input) in &spec.ports {
            let block = match input {
                InputState::Vacuum => vacuum_state(4)?,
                InputState::Squeezed {
                    kind,
                    r,
                    theta,
                    loss,
                } => prepare_squeezed_cylindrical(*kind, SqueezeParams::new(*r, *theta)?, *loss)?,
            };
            state = Some(match state {
                None => block,
                Some(s) => s.tensor(&block),
            });
        }
        state.ok_or_else(|| Error::InvalidParameter("circuit declares no ports".into()))
    }

    /// State of every carried mode after the circuit.
    pub fn run_full(&self, spec: &CircuitSpec) -> Result<GaussianState> {
        apply_symplectic(&self.prepare_inputs(spec)?, &self.map)
    }

    pub fn select_outputs(&self, full: &GaussianState) -> Result<RunOutput> {
        Ok(RunOutput {
            state: full.marginal(&self.output_modes)?,
            ordering: self
                .output_modes
                .iter()
                .map(|&i| self.output_ordering[i].clone())
                .collect(),
        })
    }

    /// Amplitude of each declared output on the source mode `kind` of source port `port`.
    ///
    /// This is the row of the compiled mode matrix for each output, contracted
    /// with the basis-mode expansion of the cylindrical mode.
    pub fn mode_amplitudes(&self, port: &str, kind: CylindricalMode) -> Result<Vec<f64>> {
        let first = self
            .input_ordering
            .iter()
            .position(|l| l.port == port)
            .ok_or_else(|| Error::InvalidParameter(format!("`{port}` is not a source port")))?;
        let expansion = cylindrical_mode_matrix().row(kind.index()).transpose();
        let n = self.map.n_modes();
        let q_block: DMatrix<f64> = self.map.matrix().view((0, 0), (n, n)).into_owned();
        Ok(self
            .output_modes
            .iter()
            .map(|&o| (0..4).map(|m| q_block[(o, first + m)] * expansion[m]).sum())
            .collect())
    }
}

/// Prepares the inputs, applies the compiled map and keeps the declared outputs.
pub fn run_circuit(spec: &CircuitSpec) -> Result<RunOutput> {
    let compiled = compile_circuit(spec)?;
    let full = compiled.run_full(spec)?;
    compiled.select_outputs(&full)
}
