//! Run reports: covariance, adjacency matrix, graph summary, nullifier check and
//! correlation table of a circuit, serialized as JSON or CSV.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{compile_circuit, scheme1_circuit, scheme2_circuit, CircuitSpec, InputState};
use crate::error::{Error, Result};
use crate::gaussian::SqueezeParams;
use crate::graph::{compute_z, extract_graph, nullifier_covariance, DEFAULT_EPSILON};
use crate::measurement::{
    correlation_rows, is_reference_input, squeezing_from_db, CorrelationRow, Sign, SqueezingLevel,
};
use crate::optics::CylindricalMode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputParameters {
    pub port: String,
    pub input: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_t: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RealMatrix {
    pub ordering: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexMatrix {
    pub ordering: Vec<String>,
    pub rows: Vec<Vec<ComplexValue>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeReport {
    pub modes: (String, String),
    pub i: usize,
    pub j: usize,
    pub weight: ComplexValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub epsilon: f64,
    pub edges: Vec<EdgeReport>,
    pub fully_connected: bool,
    pub fully_symmetric: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NullifierCheck {
    /// `max |Cov(p − Vq) − U/2|` over all entries.
    pub max_abs_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationRowReport {
    pub label: String,
    pub modes: (String, String),
    pub sign: Sign,
    pub physical_sign: Sign,
    pub predicted_db: f64,
    pub paper_db: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationTable {
    pub input_kind: Option<&'static str>,
    pub input_squeezing_db: Option<f64>,
    pub loss_t: Option<f64>,
    pub rows: Vec<CorrelationRowReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub quadrature_ordering: &'static str,
    pub vacuum_variance: f64,
    pub mode_operator: &'static str,
    pub squeeze_angle_unit: &'static str,
    pub waveplate_angle_unit: &'static str,
    pub correlation_reference: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            quadrature_ordering: "q_1..q_n, p_1..p_n",
            vacuum_variance: 0.5,
            mode_operator: "a = (q + i p)/sqrt(2)",
            squeeze_angle_unit: "rad",
            waveplate_angle_unit: "deg",
            correlation_reference: "10 log10 Var(q_i +- q_j) / 1",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub source: String,
    pub version: &'static str,
    pub parameters: Vec<InputParameters>,
    pub ordering: Vec<String>,
    pub covariance: RealMatrix,
    pub z: ComplexMatrix,
    pub graph: GraphSummary,
    pub nullifier_check: NullifierCheck,
    pub correlations: Option<CorrelationTable>,
    pub conventions: Conventions,
}

fn kind_name(kind: CylindricalMode) -> &'static str {
    match kind {
        CylindricalMode::RPlus => "R",
        CylindricalMode::APlus => "A",
        CylindricalMode::AMinus => "A-",
        CylindricalMode::RMinus => "R-",
    }
}

fn input_parameters(spec: &CircuitSpec) -> Vec<InputParameters> {
    spec.ports
        .iter()
        .map(|(port, input)| match input {
            InputState::Vacuum => InputParameters {
                port: port.clone(),
                input: "vacuum",
                kind: None,
                r: None,
                theta: None,
                loss_t: None,
            },
            InputState::Squeezed {
                kind,
                r,
                theta,
                loss,
            } => InputParameters {
                port: port.clone(),
                input: "squeezed",
                kind: Some(kind_name(*kind)),
                r: Some(*r),
                theta: Some(*theta),
                loss_t: *loss,
            },
        })
        .collect()
}

/// Kind, amplitude squeezing in dB and loss shared by all squeezed inputs, if any.
fn common_input(spec: &CircuitSpec) -> (Option<CylindricalMode>, Option<f64>, Option<f64>) {
    let squeezed: Vec<_> = spec
        .ports
        .iter()
        .filter_map(|(_, i)| match i {
            InputState::Squeezed {
                kind,
                r,
                theta,
                loss,
            } => Some((*kind, *r, *theta, *loss)),
            InputState::Vacuum => None,
        })
        .collect();
    let Some(&(kind0, r0, theta0, loss0)) = squeezed.first() else {
        return (None, None, None);
    };
    let kind = squeezed.iter().all(|s| s.0 == kind0).then_some(kind0);
    let amplitude = theta0 == 0.0 || theta0 == std::f64::consts::PI;
    let db = (amplitude && squeezed.iter().all(|s| s.1 == r0 && s.2 == theta0))
        .then(|| SqueezeParams::new(r0, theta0).ok())
        .flatten()
        .and_then(|p| SqueezingLevel::from_variance(p.q_variance()).ok())
        .map(|l| l.db);
    let loss = if squeezed.iter().all(|s| s.3 == loss0) {
        loss0
    } else {
        None
    };
    (kind, db, loss)
}

/// Runs `spec` and collects everything the report carries.
pub fn build_report(spec: &CircuitSpec, source: &str, epsilon: f64) -> Result<RunReport> {
    let compiled = compile_circuit(spec)?;
    let full = compiled.run_full(spec)?;
    let out = compiled.select_outputs(&full)?;
    let ordering: Vec<String> = out.ordering.iter().map(ToString::to_string).collect();
    let quad_ordering: Vec<String> = ["q", "p"]
        .iter()
        .flat_map(|q| ordering.iter().map(move |l| format!("{q}:{l}")))
        .collect();

    let cov = out.state.cov();
    let covariance = RealMatrix {
        ordering: quad_ordering,
        rows: cov
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
    };

    let graph = compute_z(&out.state)?.with_ordering(out.ordering.clone());
    let z = graph.z();
    let z_report = ComplexMatrix {
        ordering: ordering.clone(),
        rows: z
            .row_iter()
            .map(|r| r.iter().map(|&c| c.into()).collect())
            .collect(),
    };

    let topo = extract_graph(&z, epsilon)?;
    let summary = GraphSummary {
        epsilon,
        edges: topo
            .edges
            .iter()
            .map(|e| EdgeReport {
                modes: (ordering[e.i].clone(), ordering[e.j].clone()),
                i: e.i,
                j: e.j,
                weight: e.weight.into(),
            })
            .collect(),
        fully_connected: topo.fully_connected,
        fully_symmetric: topo.fully_symmetric,
    };

    let null_cov = nullifier_covariance(&out.state, &graph.v)?;
    let max_abs_deviation = (null_cov - &graph.u * 0.5).amax();

    let (kind, db, loss_t) = common_input(spec);
    let reference = db.is_some_and(is_reference_input);
    let correlations =
        correlation_rows(&out, reference)?.map(|rows: Vec<CorrelationRow>| CorrelationTable {
            input_kind: kind.map(kind_name),
            input_squeezing_db: db,
            loss_t,
            rows: rows
                .into_iter()
                .map(|r| CorrelationRowReport {
                    label: r.label,
                    modes: (r.pair.0.to_string(), r.pair.1.to_string()),
                    sign: r.sign,
                    physical_sign: r.physical_sign,
                    predicted_db: r.predicted_db,
                    paper_db: r.paper_db,
                })
                .collect(),
        });

    Ok(RunReport {
        source: source.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        parameters: input_parameters(spec),
        ordering,
        covariance,
        z: z_report,
        graph: summary,
        nullifier_check: NullifierCheck { max_abs_deviation },
        correlations,
        conventions: Conventions::default(),
    })
}

/// Input squeezing given either as `(r, θ)` or as amplitude squeezing in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeezing {
    Params { r: f64, theta: f64 },
    Db(f64),
}

impl Squeezing {
    pub fn params(self) -> Result<SqueezeParams> {
        match self {
            Squeezing::Params { r, theta } => SqueezeParams::new(r, theta),
            Squeezing::Db(db) => Ok(squeezing_from_db(db)?.1),
        }
    }
}

/// Builds the preset circuit for scheme `id` (1 or 2).
pub fn scheme_spec(
    id: u8,
    kind: Option<CylindricalMode>,
    squeezing: Squeezing,
    loss_t: Option<f64>,
) -> Result<CircuitSpec> {
    if let Some(t) = loss_t {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "transmittance must lie in [0, 1], got {t}"
            )));
        }
    }
    let params = squeezing.params()?;
    match (id, kind) {
        (1, Some(kind)) => scheme1_circuit(kind, params, loss_t),
        (1, None) => Err(Error::InvalidParameter(
            "scheme 1 needs an input kind (R or A)".into(),
        )),
        (2, None) => scheme2_circuit(params, loss_t),
        (2, Some(_)) => Err(Error::InvalidParameter(
            "scheme 2 always uses one R and one A input".into(),
        )),
        (other, _) => Err(Error::InvalidParameter(format!(
            "unknown scheme {other}, expected 1 or 2"
        ))),
    }
}

pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// CSV of the correlation table only; empty body when there is no table.
pub fn to_csv(report: &RunReport) -> String {
    let mut s = String::from("label,mode_a,mode_b,sign,physical_sign,predicted_db,paper_db\n");
    if let Some(table) = &report.correlations {
        for r in &table.rows {
            let paper = r.paper_db.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.label, r.modes.0, r.modes.1, r.sign, r.physical_sign, r.predicted_db, paper
            );
        }
    }
    s
}

pub fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}
