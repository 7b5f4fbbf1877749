//! Complex adjacency matrices of Gaussian graph states.
//!
//! For a zero-mean Gaussian state with position block `C_qq` and symmetrized
//! position-momentum block `C_qp`, the graph is `Z = iU + V` with
//! `U = ½ C_qq⁻¹` and `V = C_qq⁻¹ C_qp`. The nullifiers `p − V q` then have
//! covariance `U/2`.

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SqueezeParams};
use crate::optics::ModeLabel;

/// Reciprocal condition number below which `C_qq` is refused.
pub const RCOND_TOL: f64 = 1e-10;
/// Default edge threshold for [`extract_graph`].
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// `U`, `V` and the mode ordering they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGraph {
    pub ordering: Option<Vec<ModeLabel>>,
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

impl ComplexGraph {
    pub fn n_modes(&self) -> usize {
        self.u.nrows()
    }

    /// `Z = iU + V`, assembled entrywise.
    pub fn z(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.u.nrows(), self.u.ncols(), |i, j| {
            Complex64::new(self.v[(i, j)], self.u[(i, j)])
        })
    }

    pub fn with_ordering(mut self, ordering: Vec<ModeLabel>) -> Self {
        self.ordering = Some(ordering);
        self
    }
}

/// Reciprocal condition number of a symmetric matrix from its spectrum.
fn symmetric_rcond(m: &DMatrix<f64>) -> f64 {
    let eig = m.clone().symmetric_eigenvalues();
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &x| {
        (lo.min(x), hi.max(x.abs()))
    });
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

/// `U = ½ C_qq⁻¹` and `V = C_qq⁻¹ C_qp`, in the state's mode order.
///
/// `C_qq` is inverted through a Cholesky factorization; ill-conditioned blocks
/// are refused rather than regularized.
pub fn compute_uv(state: &GaussianState) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let qq = state.qq_block();
    let rcond = symmetric_rcond(&qq);
    if rcond.is_nan() || rcond < RCOND_TOL {
        return Err(Error::Singular { rcond });
    }
    let chol = Cholesky::new(qq).ok_or(Error::Singular { rcond })?;
    let u = chol.inverse() * 0.5;
    let v = chol.solve(&state.qp_block());
    Ok((u, v))
}

pub fn compute_z(state: &GaussianState) -> Result<ComplexGraph> {
    let (u, v) = compute_uv(state)?;
    Ok(ComplexGraph {
        ordering: None,
        u,
        v,
    })
}

/// Squeezing strength of a cluster built from one squeezed input,
/// `z = (⟨qp⟩ − i⟨q²⟩ + i/2) / (4⟨q²⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZParameter(pub Complex64);

impl ZParameter {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

pub fn z_parameter(params: SqueezeParams) -> ZParameter {
    let q2 = params.q_variance();
    let qp = params.qp_covariance();
    ZParameter(Complex64::new(qp, 0.5 - q2) / (4.0 * q2))
}

/// Closed-form adjacency matrices of the two cluster layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AnalyticScheme {
    Scheme1Azimuthal,
    Scheme1Radial,
    Scheme2,
}

/// Sign pattern of the scheme-1 coupling matrix: all ones (azimuthal) or
/// alternating between H and V channels (radial).
pub fn scheme1_coupling(azimuthal: bool) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |i, j| {
        if azimuthal || (i + j) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// Box-shaped coupling between the TEM₁₀ pair and the TEM₀₁ pair.
pub fn scheme2_coupling() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 1.0, 1.0, //
            0.0, 0.0, 1.0, -1.0, //
            1.0, 1.0, 0.0, 0.0, //
            1.0, -1.0, 0.0, 0.0,
        ],
    )
}

fn complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Published closed forms: `iI + z·Ṽ₁` for scheme 1, `2(z+i)I + √2 z·Ṽ₂` for scheme 2.
///
/// The scheme-2 diagonal does not reduce to the vacuum value `i` at `z = 0`;
/// see [`analytic_z_scheme2_consistent`] for the form a passive circuit produces.
pub fn analytic_z(scheme: AnalyticScheme, z: ZParameter) -> DMatrix<Complex64> {
    let z = z.0;
    let id = complex(&DMatrix::identity(4, 4));
    match scheme {
        AnalyticScheme::Scheme1Azimuthal => {
            &id * Complex64::i() + complex(&scheme1_coupling(true)) * z
        }
        AnalyticScheme::Scheme1Radial => {
            &id * Complex64::i() + complex(&scheme1_coupling(false)) * z
        }
        AnalyticScheme::Scheme2 => {
            &id * ((z + Complex64::i()) * 2.0) + complex(&scheme2_coupling()) * (z * 2f64.sqrt())
        }
    }
}

/// `(2z + i)I + √2 z·Ṽ₂`: the scheme-2 graph with the vacuum diagonal `i`.
///
/// Two equally squeezed orthogonal modes spread over the outputs with
/// projector `P = ½I + Ṽ₂/(2√2)` give `Z = iI + 4z·P`.
pub fn analytic_z_scheme2_consistent(z: ZParameter) -> DMatrix<Complex64> {
    let z = z.0;
    let id = complex(&DMatrix::identity(4, 4));
    &id * (z * 2.0 + Complex64::i()) + complex(&scheme2_coupling()) * (z * 2f64.sqrt())
}

/// Looks for diagonal signs `D` with `max |D·a·D − b| ≤ tol`, trying all `2ⁿ` patterns.
pub fn match_up_to_signs(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    tol: f64,
) -> Option<Vec<f64>> {
    let n = a.nrows();
    if a.shape() != b.shape() || n != a.ncols() || n > 20 {
        return None;
    }
    (0u32..(1 << n)).find_map(|mask| {
        let d: Vec<f64> = (0..n)
            .map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        let ok =
            (0..n).all(|i| (0..n).all(|j| (a[(i, j)] * d[i] * d[j] - b[(i, j)]).norm() <= tol));
        ok.then_some(d)
    })
}

/// Covariance matrix of the operators `p_j − Σ_k V_jk q_k`.
pub fn nullifier_covariance(state: &GaussianState, v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = state.n_modes();
    if v.shape() != (n, n) {
        return Err(Error::Dimension {
            expected: n,
            found: v.nrows(),
        });
    }
    let qq = state.qq_block();
    let qp = state.qp_block();
    let pp = state.pp_block();
    let vqp = v * &qp;
    let cov = pp - &vqp - vqp.transpose() + v * qq * v.transpose();
    Ok((&cov + cov.transpose()) * 0.5)
}

/// Per-mode variances of `p_j − Σ_k A_jk q_k` for a real adjacency matrix `A`.
pub fn ideal_nullifier_residual(state: &GaussianState, a: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(nullifier_covariance(state, a)?
        .diagonal()
        .iter()
        .copied()
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: Complex64,
}

/// Edges of a graph above a magnitude threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphTopology {
    pub n: usize,
    pub epsilon: f64,
    pub edges: Vec<Edge>,
    /// Every pair of distinct modes is linked.
    pub fully_connected: bool,
    /// All off-diagonal entries agree within `epsilon`.
    pub fully_symmetric: bool,
}

impl GraphTopology {
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }
}

pub fn extract_graph(z: &DMatrix<Complex64>, epsilon: f64) -> Result<GraphTopology> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "edge threshold must be positive, got {epsilon}"
        )));
    }
    let n = z.nrows();
    let mut edges = Vec::new();
    let mut off_diag = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            off_diag.push(z[(i, j)]);
            off_diag.push(z[(j, i)]);
            if z[(i, j)].norm() > epsilon {
                edges.push(Edge {
                    i,
                    j,
                    weight: z[(i, j)],
                });
            }
        }
    }
    let fully_symmetric = off_diag
        .first()
        .is_none_or(|&w0| off_diag.iter().all(|w| (w - w0).norm() <= epsilon));
    Ok(GraphTopology {
        n,
        epsilon,
        fully_connected: edges.len() == n * (n - 1) / 2,
        fully_symmetric,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{apply_symplectic, single_mode_squeezer, vacuum_state};
    use nalgebra::DVector;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_graph() {
        let g = compute_z(&vacuum_state(4).unwrap()).unwrap();
        assert!((&g.u - DMatrix::identity(4, 4)).amax() < 1e-12);
        assert!(g.v.amax() < 1e-12);
        let z = g.z();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) };
                assert!((z[(i, j)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_mode_uv() {
        let p = SqueezeParams::new(0.5, FRAC_PI_2).unwrap();
        let s = apply_symplectic(&vacuum_state(1).unwrap(), &single_mode_squeezer(p)).unwrap();
        let (u, v) = compute_uv(&s).unwrap();
        assert!((u[(0, 0)] - 0.64805).abs() < 1e-5);
        assert!((u[(0, 0)] - 1.0 / 1f64.cosh()).abs() < 1e-12);
        assert!((v[(0, 0)] + 1f64.tanh()).abs() < 1e-12);
        let cov = nullifier_covariance(&s, &v).unwrap();
        assert!((cov[(0, 0)] - u[(0, 0)] / 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_position_block_refused() {
        let s = GaussianState::symmetrized(
            DVector::zeros(4),
            DMatrix::from_diagonal(&DVector::from_row_slice(&[1e-12, 0.5, 1e12, 0.5])),
        )
        .unwrap();
        assert!(matches!(compute_uv(&s), Err(Error::Singular { .. })));
    }

    #[test]
    fn z_parameter_values() {
        for theta in [0.0, 1.0, 4.0] {
            assert_eq!(
                z_parameter(SqueezeParams::new(0.0, theta).unwrap()).0,
                c(0.0, 0.0)
            );
        }
        let z = z_parameter(SqueezeParams::new(0.5, FRAC_PI_2).unwrap()).0;
        assert!((z - c(-0.19040, -0.08799)).norm() < 1e-5);
        let z = z_parameter(SqueezeParams::new(0.5 * 2f64.ln(), 0.0).unwrap()).0;
        assert!((z - c(0.0, 0.25)).norm() < 1e-12);
    }

    #[test]
    fn analytic_forms() {
        let zero = ZParameter(c(0.0, 0.0));
        let id_i = DMatrix::from_fn(4, 4, |i, j| if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) });
        assert_eq!(analytic_z(AnalyticScheme::Scheme1Azimuthal, zero), id_i);
        assert_eq!(
            analytic_z(AnalyticScheme::Scheme2, zero),
            &id_i * c(2.0, 0.0)
        );
        assert_eq!(analytic_z_scheme2_consistent(zero), id_i);

        let z = analytic_z(AnalyticScheme::Scheme1Azimuthal, ZParameter(c(0.0, 0.25)));
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { c(0.0, 1.25) } else { c(0.0, 0.25) };
                assert!((z[(i, j)] - expected).norm() < 1e-15);
            }
        }
        let r = scheme1_coupling(false);
        assert_eq!(
            r.row(0).iter().copied().collect::<Vec<_>>(),
            vec![1.0, -1.0, 1.0, -1.0]
        );
        assert_eq!(
            r.row(1).iter().copied().collect::<Vec<_>>(),
            vec![-1.0, 1.0, -1.0, 1.0]
        );
    }

    #[test]
    fn scheme2_coupling_squares_to_two() {
        let v = scheme2_coupling();
        assert_eq!(&v * &v, DMatrix::identity(4, 4) * 2.0);
        let p = DMatrix::identity(4, 4) * 0.5 + &v / (2.0 * 2f64.sqrt());
        assert!((&p * &p - &p).amax() < 1e-15);
    }

    #[test]
    fn sign_matching() {
        let a = analytic_z(AnalyticScheme::Scheme1Azimuthal, ZParameter(c(0.3, 0.1)));
        let b = analytic_z(AnalyticScheme::Scheme1Radial, ZParameter(c(0.3, 0.1)));
        let d = match_up_to_signs(&a, &b, 1e-12).unwrap();
        assert_eq!(d[0] * d[1], -1.0);
        let s2 = analytic_z(AnalyticScheme::Scheme2, ZParameter(c(0.3, 0.1)));
        assert!(match_up_to_signs(&a, &s2, 1e-6).is_none());
    }

    #[test]
    fn graph_extraction() {
        let g = extract_graph(
            &analytic_z(AnalyticScheme::Scheme1Azimuthal, ZParameter(c(0.1, 0.2))),
            1e-9,
        )
        .unwrap();
        assert!(g.fully_connected && g.fully_symmetric);
        assert_eq!(g.edges.len(), 6);

        let g = extract_graph(
            &analytic_z(AnalyticScheme::Scheme2, ZParameter(c(0.1, 0.2))),
            1e-9,
        )
        .unwrap();
        assert_eq!(g.edge_pairs(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(!g.fully_connected && !g.fully_symmetric);

        let g = extract_graph(
            &analytic_z(AnalyticScheme::Scheme1Radial, ZParameter(c(0.0, 0.0))),
            1e-9,
        )
        .unwrap();
        assert!(g.edges.is_empty());
        assert!(extract_graph(&DMatrix::zeros(2, 2), 0.0).is_err());
    }
}
