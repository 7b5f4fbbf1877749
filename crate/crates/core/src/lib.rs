//! Gaussian-state simulation of continuous-variable cluster states generated from
//! quadrature-squeezed cylindrically polarized light.
//!
//! The crate is organized bottom-up:
//!
//! - [`gaussian`]: covariance matrices, symplectic maps, squeezing and loss.
//! - [`optics`]: basis-mode bookkeeping, wave plates, polarizing beam splitters and
//!   the radial/azimuthal mode basis.
//! - [`circuit`]: the netlist format, its compiler and the two cluster layouts.
//! - [`graph`]: complex adjacency matrices `Z = iU + V`, nullifiers and topology.
//! - [`measurement`]: amplitude-correlation predictions in dB.
//! - [`report`]: JSON/CSV run reports used by the `cvcluster` binary.

pub mod circuit;
pub mod error;
pub mod gaussian;
pub mod graph;
pub mod measurement;
pub mod optics;
pub mod report;

pub use error::{Error, Result};
