//! Quadrature-space Gaussian states and symplectic maps.
//!
//! Quadratures are stored in block order `(q_1 .. q_n, p_1 .. p_n)`, so the
//! symplectic form is `Ω = [[0, I], [-I, 0]]`. The vacuum variance of every
//! quadrature is `1/2`, which corresponds to `a = (q + i p) / √2`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance used when validating symmetry on construction.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lower bound on the spectrum of `cov + (i/2)Ω` for a state to count as physical.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Tolerance used when validating `SΩSᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Symplectic form `Ω` for `n` modes in block ordering.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        omega[(k, n + k)] = 1.0;
        omega[(n + k, k)] = -1.0;
    }
    omega
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Mean vector and covariance matrix of an `n`-mode bosonic Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state, symmetrizing `cov` and rejecting asymmetric or unphysical input.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let state = Self::symmetrized(mean, cov)?;
        let min_eig = state.physicality_margin();
        if min_eig < -PHYSICALITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "covariance violates the uncertainty principle (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(state)
    }

    /// Symmetry-checked construction without the uncertainty-principle check.
    pub(crate) fn symmetrized(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if cov.nrows() != cov.ncols() || !cov.nrows().is_multiple_of(2) || cov.nrows() == 0 {
            return Err(Error::InvalidParameter(format!(
                "covariance must be a non-empty even square matrix, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.len() != cov.nrows() {
            return Err(Error::Dimension {
                expected: cov.nrows(),
                found: mean.len(),
            });
        }
        let asym = max_abs(&(&cov - cov.transpose()));
        if asym > SYMMETRY_TOL * max_abs(&cov).max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self {
            n_modes: cov.nrows() / 2,
            mean,
            cov,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Position covariance block `⟨q qᵀ⟩`.
    pub fn qq_block(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        self.cov.view((0, 0), (n, n)).into_owned()
    }

    /// Symmetrized position-momentum block, `½⟨q_j p_k + p_k q_j⟩`.
    pub fn qp_block(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        self.cov.view((0, n), (n, n)).into_owned()
    }

    pub fn pp_block(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        self.cov.view((n, n), (n, n)).into_owned()
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/2)Ω`.
    ///
    /// Computed from the real symmetric embedding `[[A, -B], [B, A]]` of `A + iB`,
    /// which carries every eigenvalue of the Hermitian matrix twice.
    pub fn physicality_margin(&self) -> f64 {
        let dim = 2 * self.n_modes;
        let half_omega = symplectic_form(self.n_modes) * 0.5;
        let mut embed = DMatrix::zeros(2 * dim, 2 * dim);
        embed.view_mut((0, 0), (dim, dim)).copy_from(&self.cov);
        embed.view_mut((dim, dim), (dim, dim)).copy_from(&self.cov);
        embed
            .view_mut((0, dim), (dim, dim))
            .copy_from(&(-&half_omega));
        embed.view_mut((dim, 0), (dim, dim)).copy_from(&half_omega);
        embed
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |acc, &x| acc.min(x))
    }

    pub fn is_physical(&self) -> bool {
        self.physicality_margin() >= -PHYSICALITY_TOL
    }

    /// `det(2·cov)`, equal to one for pure states.
    pub fn purity_determinant(&self) -> f64 {
        (&self.cov * 2.0).determinant()
    }

    /// Reduced state on the listed modes, in the listed order.
    pub fn marginal(&self, modes: &[usize]) -> Result<Self> {
        let n = self.n_modes;
        if let Some(&bad) = modes.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidParameter(format!(
                "mode index {bad} out of range for {n} modes"
            )));
        }
        let k = modes.len();
        let idx: Vec<usize> = modes
            .iter()
            .copied()
            .chain(modes.iter().map(|m| m + n))
            .collect();
        let cov = DMatrix::from_fn(2 * k, 2 * k, |i, j| self.cov[(idx[i], idx[j])]);
        let mean = DVector::from_fn(2 * k, |i, _| self.mean[idx[i]]);
        Self::symmetrized(mean, cov)
    }

    /// Tensor product with `other`, whose modes are appended after this state's modes.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (a, b) = (self.n_modes, other.n_modes);
        let n = a + b;
        // (state, offset) per source: q-index mapping into the combined block layout
        let place =
            |i: usize, na: usize, off: usize| if i < na { i + off } else { i - na + n + off };
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        let mut mean = DVector::zeros(2 * n);
        for (src, na, off) in [(self, a, 0), (other, b, a)] {
            for i in 0..2 * na {
                mean[place(i, na, off)] = src.mean[i];
                for j in 0..2 * na {
                    cov[(place(i, na, off), place(j, na, off))] = src.cov[(i, j)];
                }
            }
        }
        GaussianState {
            n_modes: n,
            mean,
            cov,
        }
    }
}

/// `n`-mode vacuum: zero mean, covariance `I/2`.
pub fn vacuum_state(n: usize) -> Result<GaussianState> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "vacuum needs at least one mode".into(),
        ));
    }
    Ok(GaussianState {
        n_modes: n,
        mean: DVector::zeros(2 * n),
        cov: DMatrix::identity(2 * n, 2 * n) * 0.5,
    })
}

/// Real linear map on quadratures, `x ↦ S x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticMap {
    /// Wraps a matrix, rejecting it unless `SΩSᵀ = Ω` within [`SYMPLECTIC_TOL`].
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols()
            || !matrix.nrows().is_multiple_of(2)
            || matrix.nrows() == 0
        {
            return Err(Error::InvalidParameter(format!(
                "symplectic matrix must be a non-empty even square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let map = Self {
            n_modes: matrix.nrows() / 2,
            matrix,
        };
        if !is_symplectic(&map, SYMPLECTIC_TOL) {
            return Err(Error::InvalidParameter("matrix is not symplectic".into()));
        }
        Ok(map)
    }

    /// Wraps a matrix without validation; for callers that test `is_symplectic` themselves.
    pub fn new_unchecked(matrix: DMatrix<f64>) -> Self {
        Self {
            n_modes: matrix.nrows() / 2,
            matrix,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_modes: n,
            matrix: DMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Lifts a real orthogonal mode-space matrix `M` to `diag(M, M)`.
    ///
    /// This is the quadrature action of a passive linear-optics element with
    /// real amplitude coefficients.
    pub fn passive(modes: &DMatrix<f64>) -> Result<Self> {
        let n = modes.nrows();
        if modes.ncols() != n {
            return Err(Error::Dimension {
                expected: n,
                found: modes.ncols(),
            });
        }
        let mut matrix = DMatrix::zeros(2 * n, 2 * n);
        matrix.view_mut((0, 0), (n, n)).copy_from(modes);
        matrix.view_mut((n, n), (n, n)).copy_from(modes);
        Self::new(matrix)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Group inverse `Ω⁻¹ Sᵀ Ω = -Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let omega = symplectic_form(self.n_modes);
        Self {
            n_modes: self.n_modes,
            matrix: -(&omega * self.matrix.transpose() * &omega),
        }
    }

    /// Whether `S Sᵀ = I` within `tol`, i.e. the map is passive.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let dim = self.matrix.nrows();
        max_abs(&(&self.matrix * self.matrix.transpose() - DMatrix::identity(dim, dim))) <= tol
    }
}

/// Squeeze magnitude and angle of [`single_mode_squeezer`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    theta: f64,
}

impl SqueezeParams {
    /// `r` must be finite and non-negative; `theta` is reduced to `[0, 2π)`.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "squeeze magnitude must be finite and non-negative, got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeeze angle must be finite, got {theta}"
            )));
        }
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        Ok(Self { r, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `⟨q²⟩` of squeezed vacuum: `½[cosh 2r − sinh 2r cos θ]`.
    pub fn q_variance(&self) -> f64 {
        0.5 * ((2.0 * self.r).cosh() - (2.0 * self.r).sinh() * self.theta.cos())
    }

    /// `⟨qp⟩` of squeezed vacuum: `−½ sinh 2r sin θ`.
    pub fn qp_covariance(&self) -> f64 {
        -0.5 * (2.0 * self.r).sinh() * self.theta.sin()
    }
}

/// Single-mode squeezer `cosh r·I − sinh r·[[cos θ, sin θ], [sin θ, −cos θ]]`.
///
/// θ = 0 squeezes `q`.
pub fn single_mode_squeezer(params: SqueezeParams) -> SymplecticMap {
    let (c, s) = (params.r.cosh(), params.r.sinh());
    let (ct, st) = (params.theta.cos(), params.theta.sin());
    SymplecticMap::new_unchecked(DMatrix::from_row_slice(
        2,
        2,
        &[c - s * ct, -s * st, -s * st, c + s * ct],
    ))
}

/// `cov ↦ S cov Sᵀ`, `mean ↦ S mean`.
pub fn apply_symplectic(state: &GaussianState, map: &SymplecticMap) -> Result<GaussianState> {
    if state.n_modes != map.n_modes {
        return Err(Error::Dimension {
            expected: state.n_modes,
            found: map.n_modes,
        });
    }
    let s = &map.matrix;
    let cov = s * &state.cov * s.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianState {
        n_modes: state.n_modes,
        mean: s * &state.mean,
        cov,
    })
}

/// True iff `max |SΩSᵀ − Ω| ≤ tol`.
pub fn is_symplectic(map: &SymplecticMap, tol: f64) -> bool {
    let m = &map.matrix;
    if m.nrows() != 2 * map.n_modes || m.ncols() != 2 * map.n_modes {
        return false;
    }
    let omega = symplectic_form(map.n_modes);
    max_abs(&(m * &omega * m.transpose() - &omega)) <= tol
}

/// Places a `k`-mode map on `targets` inside an `n`-mode identity.
pub fn embed_map(map: &SymplecticMap, targets: &[usize], n: usize) -> Result<SymplecticMap> {
    let k = map.n_modes;
    if targets.len() != k {
        return Err(Error::Dimension {
            expected: k,
            found: targets.len(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::InvalidParameter(format!(
                "target mode {t} out of range for {n} modes"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "duplicate target mode {t}"
            )));
        }
    }
    let global = |i: usize| {
        if i < k {
            targets[i]
        } else {
            n + targets[i - k]
        }
    };
    let mut matrix = DMatrix::identity(2 * n, 2 * n);
    for i in 0..2 * k {
        for j in 0..2 * k {
            matrix[(global(i), global(j))] = map.matrix[(i, j)];
        }
    }
    Ok(SymplecticMap { n_modes: n, matrix })
}

/// Product of `maps` in application order: the first map is applied first.
pub fn compose(maps: &[SymplecticMap]) -> Result<SymplecticMap> {
    let first = maps
        .first()
        .ok_or_else(|| Error::InvalidParameter("cannot compose an empty list of maps".into()))?;
    let n = first.n_modes;
    let mut total = DMatrix::identity(2 * n, 2 * n);
    for m in maps {
        if m.n_modes != n {
            return Err(Error::Dimension {
                expected: n,
                found: m.n_modes,
            });
        }
        total = &m.matrix * total;
    }
    Ok(SymplecticMap {
        n_modes: n,
        matrix: total,
    })
}

/// Pure-loss channel with transmittance `t` on one mode.
///
/// The mode's own block becomes `t·block + (1−t)/2·I`, its cross-covariances
/// and mean scale by `√t`.
pub fn loss_channel(state: &GaussianState, mode: usize, t: f64) -> Result<GaussianState> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "transmittance must lie in [0, 1], got {t}"
        )));
    }
    let n = state.n_modes;
    if mode >= n {
        return Err(Error::InvalidParameter(format!(
            "mode index {mode} out of range for {n} modes"
        )));
    }
    let mut scale = DVector::from_element(2 * n, 1.0);
    scale[mode] = t.sqrt();
    scale[n + mode] = t.sqrt();
    let mut cov = DMatrix::from_fn(2 * n, 2 * n, |i, j| state.cov[(i, j)] * scale[i] * scale[j]);
    cov[(mode, mode)] += 0.5 * (1.0 - t);
    cov[(n + mode, n + mode)] += 0.5 * (1.0 - t);
    Ok(GaussianState {
        n_modes: n,
        mean: state.mean.component_mul(&scale),
        cov,
    })
}

/// Variance `cᵀ cov c` of the quadrature combination with coefficients `c`.
pub fn quad_combination_variance(state: &GaussianState, coeffs: &DVector<f64>) -> Result<f64> {
    if coeffs.len() != 2 * state.n_modes {
        return Err(Error::Dimension {
            expected: 2 * state.n_modes,
            found: coeffs.len(),
        });
    }
    if coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidParameter("coefficient vector is zero".into()));
    }
    Ok(coeffs.dot(&(&state.cov * coeffs)))
}
