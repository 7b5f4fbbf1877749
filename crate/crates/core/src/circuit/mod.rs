//! Optical circuit netlists: data model, text format, compiler and the two cluster presets.
//!
//! A netlist is line oriented. Each line holds one statement and `#` starts a comment:
//!
//! ```text
//! port in                                   # declare a source port
//! input in squeezed R r=0.5 theta=0         # squeezed radial beam (theta in radians)
//! input v vacuum
//! pbs in v -> u d                           # transmit H to u, reflect V to d
//! hwp u deg=22.5                            # wave plate angle in degrees
//! squeeze u:H10 r=0.1 theta=0               # single-mode squeezer on one basis mode
//! outputs u:H10 u:V10 d:H01 d:V01
//! ```
//!
//! Source ports carry four basis modes each (`H10 V10 H01 V01`). A `pbs` consumes
//! its two input ports and creates the two output ports, so port names are wires.

mod compile;
mod parse;
mod presets;

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::optics::{CylindricalMode, ModeLabel};

pub use compile::{compile_circuit, run_circuit, CompiledCircuit, RunOutput};
pub use parse::parse_circuit;
pub use presets::{scheme1_circuit, scheme2_circuit};

/// Initial state of a source port.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum InputState {
    Vacuum,
    /// Squeezed co-rotating cylindrical mode, with optional uniform loss afterwards.
    Squeezed {
        kind: CylindricalMode,
        r: f64,
        theta: f64,
        loss: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Element {
    /// Half-wave plate on both profiles of a port; angle in degrees.
    Hwp { port: String, deg: f64 },
    Pbs {
        in_a: String,
        in_b: String,
        out_t: String,
        out_r: String,
    },
    Squeeze {
        target: ModeLabel,
        r: f64,
        theta: f64,
    },
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Hwp { port, deg } => write!(f, "hwp {port} deg={deg}"),
            Element::Pbs {
                in_a,
                in_b,
                out_t,
                out_r,
            } => write!(f, "pbs {in_a} {in_b} -> {out_t} {out_r}"),
            Element::Squeeze { target, r, theta } => {
                write!(f, "squeeze {target} r={r} theta={theta}")
            }
        }
    }
}

/// A complete circuit: source ports with their inputs, elements in order, and outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitSpec {
    /// Source ports in declaration order, each with its input state.
    pub ports: Vec<(String, InputState)>,
    pub elements: Vec<Element>,
    pub outputs: Vec<ModeLabel>,
}

fn kind_letter(kind: CylindricalMode) -> &'static str {
    match kind {
        CylindricalMode::RPlus => "R",
        CylindricalMode::APlus => "A",
        CylindricalMode::AMinus => "A-",
        CylindricalMode::RMinus => "R-",
    }
}

/// Canonical text form of `spec`: ports, inputs, elements, outputs.
pub fn serialize_circuit(spec: &CircuitSpec) -> String {
    let mut out = String::new();
    for (name, _) in &spec.ports {
        let _ = writeln!(out, "port {name}");
    }
    for (name, input) in &spec.ports {
        match input {
            InputState::Vacuum => {
                let _ = writeln!(out, "input {name} vacuum");
            }
            InputState::Squeezed {
                kind,
                r,
                theta,
                loss,
            } => {
                let _ = write!(
                    out,
                    "input {name} squeezed {} r={r} theta={theta}",
                    kind_letter(*kind)
                );
                if let Some(t) = loss {
                    let _ = write!(out, " loss={t}");
                }
                out.push('\n');
            }
        }
    }
    for el in &spec.elements {
        let _ = writeln!(out, "{el}");
    }
    if !spec.outputs.is_empty() {
        out.push_str("outputs");
        for label in &spec.outputs {
            let _ = write!(out, " {label}");
        }
        out.push('\n');
    }
    out
}

/// Category of a netlist error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax,
    UnknownElement,
    BadNumber,
    Wiring,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::UnknownElement => "unknown element",
            ParseErrorKind::BadNumber => "bad number",
            ParseErrorKind::Wiring => "wiring",
        };
        f.write_str(s)
    }
}

/// First error found in a netlist, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

/// Tracks which port names are live while walking a netlist in order.
///
/// Every live port occupies one slot block of four modes; a `pbs` hands its
/// input blocks over to its outputs.
#[derive(Debug, Default)]
pub(crate) struct Wiring {
    /// Live port name -> block index.
    live: HashMap<String, usize>,
    /// Every name ever bound, live or consumed.
    seen: HashMap<String, bool>,
    sources: Vec<String>,
    has_input: Vec<bool>,
}

impl Wiring {
    pub(crate) fn declare_source(&mut self, name: &str) -> Result<(), String> {
        if self.seen.contains_key(name) {
            return Err(format!("port `{name}` is already declared"));
        }
        let block = self.sources.len();
        self.sources.push(name.to_string());
        self.has_input.push(false);
        self.live.insert(name.to_string(), block);
        self.seen.insert(name.to_string(), true);
        Ok(())
    }

    pub(crate) fn set_input(&mut self, name: &str) -> Result<usize, String> {
        let idx = self
            .sources
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| self.unknown(name, "input"))?;
        if self.has_input[idx] {
            return Err(format!("port `{name}` already has an input"));
        }
        self.has_input[idx] = true;
        Ok(idx)
    }

    fn unknown(&self, name: &str, what: &str) -> String {
        if self.seen.contains_key(name) && !self.live.contains_key(name) {
            format!("port `{name}` was consumed by a beam splitter and cannot be used by {what}")
        } else if self.seen.contains_key(name) {
            format!("port `{name}` is not a source port and cannot take an {what}")
        } else {
            format!("port `{name}` used before it is declared")
        }
    }

    pub(crate) fn block(&self, name: &str, what: &str) -> Result<usize, String> {
        self.live
            .get(name)
            .copied()
            .ok_or_else(|| self.unknown(name, what))
    }

    /// Consumes `in_a`, `in_b` and binds `out_t`, `out_r`; returns the two blocks.
    pub(crate) fn pbs(
        &mut self,
        in_a: &str,
        in_b: &str,
        out_t: &str,
        out_r: &str,
    ) -> Result<(usize, usize), String> {
        let a = self.block(in_a, "pbs")?;
        let b = self.block(in_b, "pbs")?;
        if a == b {
            return Err(format!(
                "pbs inputs must be distinct ports, got `{in_a}` twice"
            ));
        }
        if out_t == out_r {
            return Err(format!(
                "pbs outputs must be distinct ports, got `{out_t}` twice"
            ));
        }
        for out in [out_t, out_r] {
            if self.seen.contains_key(out) && out != in_a && out != in_b {
                return Err(format!(
                    "pbs output `{out}` is already bound to another port"
                ));
            }
        }
        self.live.remove(in_a);
        self.live.remove(in_b);
        self.live.insert(out_t.to_string(), a);
        self.live.insert(out_r.to_string(), b);
        self.seen.insert(out_t.to_string(), true);
        self.seen.insert(out_r.to_string(), true);
        Ok((a, b))
    }

    pub(crate) fn n_blocks(&self) -> usize {
        self.sources.len()
    }

    /// Name of the live port currently occupying each block.
    pub(crate) fn block_names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.sources.len()];
        for (name, &b) in &self.live {
            names[b] = name.clone();
        }
        names
    }
}
