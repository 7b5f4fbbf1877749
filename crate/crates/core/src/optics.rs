//! Mode bookkeeping and the passive polarization optics used by the cluster circuits.
//!
//! Every optical port carries four basis modes, the first-order Hermite-Gauss
//! profiles TEM₁₀ and TEM₀₁ in horizontal and vertical polarization. Inside a
//! port they are always ordered `[H10, V10, H01, V01]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_symplectic, embed_map, loss_channel, single_mode_squeezer, vacuum_state, GaussianState,
    SqueezeParams, SymplecticMap,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Profile {
    Tem10,
    Tem01,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

/// One of the four basis modes carried by a port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisMode {
    H10,
    V10,
    H01,
    V01,
}

impl BasisMode {
    pub const ALL: [BasisMode; 4] = [
        BasisMode::H10,
        BasisMode::V10,
        BasisMode::H01,
        BasisMode::V01,
    ];

    /// Position inside a port's `[H10, V10, H01, V01]` block.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn profile(self) -> Profile {
        match self {
            BasisMode::H10 | BasisMode::V10 => Profile::Tem10,
            BasisMode::H01 | BasisMode::V01 => Profile::Tem01,
        }
    }

    pub fn polarization(self) -> Polarization {
        match self {
            BasisMode::H10 | BasisMode::H01 => Polarization::H,
            BasisMode::V10 | BasisMode::V01 => Polarization::V,
        }
    }

    pub fn from_parts(profile: Profile, pol: Polarization) -> Self {
        match (profile, pol) {
            (Profile::Tem10, Polarization::H) => BasisMode::H10,
            (Profile::Tem10, Polarization::V) => BasisMode::V10,
            (Profile::Tem01, Polarization::H) => BasisMode::H01,
            (Profile::Tem01, Polarization::V) => BasisMode::V01,
        }
    }
}

impl fmt::Display for BasisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisMode::H10 => "H10",
            BasisMode::V10 => "V10",
            BasisMode::H01 => "H01",
            BasisMode::V01 => "V01",
        };
        f.write_str(s)
    }
}

impl FromStr for BasisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H10" => Ok(BasisMode::H10),
            "V10" => Ok(BasisMode::V10),
            "H01" => Ok(BasisMode::H01),
            "V01" => Ok(BasisMode::V01),
            _ => Err(Error::InvalidParameter(format!("unknown basis mode `{s}`"))),
        }
    }
}

/// A mode of a named port, e.g. `o1:H10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub port: String,
    pub mode: BasisMode,
}

impl ModeLabel {
    pub fn new(port: impl Into<String>, mode: BasisMode) -> Self {
        Self {
            port: port.into(),
            mode,
        }
    }

    pub fn profile(&self) -> Profile {
        self.mode.profile()
    }

    pub fn polarization(&self) -> Polarization {
        self.mode.polarization()
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.port, self.mode)
    }
}

/// Cylindrically polarized modes: radial and azimuthal, co- and counter-rotating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CylindricalMode {
    RPlus,
    APlus,
    AMinus,
    RMinus,
}

impl CylindricalMode {
    /// Slot in the `[R⁺, A⁺, A⁻, R⁻]` ordering of [`cylindrical_basis_change`].
    pub fn index(self) -> usize {
        self as usize
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Mode-space rows of the cylindrical basis, expressed over `[H10, V10, H01, V01]`.
pub fn cylindrical_mode_matrix() -> DMatrix<f64> {
    let h = FRAC_1_SQRT_2;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            h, 0.0, 0.0, h, // R+ = (H10 + V01)/√2
            0.0, h, -h, 0.0, // A+ = (V10 − H01)/√2
            0.0, h, h, 0.0, // A− = (V10 + H01)/√2
            -h, 0.0, 0.0, h, // R− = (−H10 + V01)/√2
        ],
    )
}

/// Basis change from `[H10, V10, H01, V01]` to `[R⁺, A⁺, A⁻, R⁻]`, lifted to quadratures.
pub fn cylindrical_basis_change() -> SymplecticMap {
    SymplecticMap::passive(&cylindrical_mode_matrix()).expect("cylindrical basis is orthogonal")
}

/// Half-wave plate with its fast axis at `phi` radians, acting on an `(H, V)` pair.
///
/// `a_H → cos 2φ·a_H + sin 2φ·a_V`, `a_V → sin 2φ·a_H − cos 2φ·a_V`.
pub fn hwp_mode_matrix(phi: f64) -> DMatrix<f64> {
    let (s, c) = (2.0 * phi).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, s, -c])
}

pub fn hwp_map(phi: f64) -> SymplecticMap {
    SymplecticMap::passive(&hwp_mode_matrix(phi)).expect("wave plate matrix is orthogonal")
}

/// Wave plate acting on both profiles of one port, over `[H10, V10, H01, V01]`.
pub fn hwp_port_map(phi: f64) -> SymplecticMap {
    let plate = hwp_mode_matrix(phi);
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(&plate);
    m.view_mut((2, 2), (2, 2)).copy_from(&plate);
    SymplecticMap::passive(&m).expect("wave plate matrix is orthogonal")
}

/// Polarizing beam splitter on two ports, transmitting H and reflecting V.
///
/// Acts on the eight modes `[in_a: H10 V10 H01 V01, in_b: H10 V10 H01 V01]` and
/// returns them as `[out_t: …, out_r: …]`: `out_t` collects the H modes of `in_a`
/// and the V modes of `in_b`, `out_r` the V modes of `in_a` and the H modes of
/// `in_b`. Reflection adds no phase, so the map is a permutation.
pub fn pbs_map() -> SymplecticMap {
    let mut m = DMatrix::zeros(8, 8);
    for mode in BasisMode::ALL {
        let i = mode.index();
        match mode.polarization() {
            Polarization::H => {
                m[(i, i)] = 1.0;
                m[(4 + i, 4 + i)] = 1.0;
            }
            Polarization::V => {
                m[(i, 4 + i)] = 1.0;
                m[(4 + i, i)] = 1.0;
            }
        }
    }
    SymplecticMap::passive(&m).expect("permutation is orthogonal")
}

/// Squeezed co-rotating cylindrical mode on one port, over `[H10, V10, H01, V01]`.
///
/// The other three cylindrical modes stay in vacuum. `loss_t`, when given,
/// attenuates all four basis modes after squeezing.
pub fn prepare_squeezed_cylindrical(
    kind: CylindricalMode,
    params: SqueezeParams,
    loss_t: Option<f64>,
) -> Result<GaussianState> {
    if !matches!(kind, CylindricalMode::RPlus | CylindricalMode::APlus) {
        return Err(Error::InvalidParameter(format!(
            "only co-rotating modes can be squeezed at the source, got {kind:?}"
        )));
    }
    let squeeze = embed_map(&single_mode_squeezer(params), &[kind.index()], 4)?;
    let cylindrical = apply_symplectic(&vacuum_state(4)?, &squeeze)?;
    let mut state = apply_symplectic(&cylindrical, &cylindrical_basis_change().inverse())?;
    if let Some(t) = loss_t {
        for mode in 0..4 {
            state = loss_channel(&state, mode, t)?;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::is_symplectic;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn hwp_settings() {
        let h = FRAC_1_SQRT_2;
        let balanced = DMatrix::from_row_slice(2, 2, &[h, h, h, -h]);
        assert!((hwp_mode_matrix(FRAC_PI_8) - balanced).amax() < 1e-15);
        let zero = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(hwp_mode_matrix(0.0), zero);
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((hwp_mode_matrix(FRAC_PI_4) - swap).amax() < 1e-15);
    }

    #[test]
    fn hwp_quarter_turn_is_sign_flip() {
        for phi in [0.1, 0.7, 2.0] {
            let a = hwp_map(phi);
            let b = hwp_map(phi + PI / 2.0);
            assert!((a.matrix() + b.matrix()).amax() < 1e-12);
        }
    }

    #[test]
    fn elements_are_orthogonal_and_symplectic() {
        let maps = [
            hwp_map(0.3),
            hwp_port_map(-0.4),
            pbs_map(),
            cylindrical_basis_change(),
        ];
        for m in &maps {
            assert!(m.is_orthogonal(1e-12));
            assert!(is_symplectic(m, 1e-12));
        }
        let b = cylindrical_mode_matrix();
        assert!((b.transpose() * &b - DMatrix::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn cylindrical_basis_of_h10() {
        let e = DVector::from_row_slice(&[1.0, 0.0, 0.0, 0.0]);
        let v = cylindrical_mode_matrix() * e;
        let h = FRAC_1_SQRT_2;
        assert!((v - DVector::from_row_slice(&[h, 0.0, 0.0, -h])).amax() < 1e-15);
        let b = cylindrical_basis_change();
        let round = b.matrix().transpose() * b.matrix();
        assert!((round - DMatrix::identity(8, 8)).amax() < 1e-15);
    }

    #[test]
    fn pbs_routing() {
        let m = pbs_map();
        // H10 of in_a leaves through out_t
        let mut x = DVector::zeros(16);
        x[BasisMode::H10.index()] = 1.0;
        let y = m.matrix() * &x;
        assert_eq!(y, x);
        // V01 of in_b leaves through out_t
        let mut x = DVector::zeros(16);
        x[4 + BasisMode::V01.index()] = 1.0;
        let y = m.matrix() * &x;
        assert_eq!(y[BasisMode::V01.index()], 1.0);
        // split then recombine
        let twice = m.matrix() * m.matrix();
        assert_eq!(twice, DMatrix::identity(16, 16));
        let vac = vacuum_state(8).unwrap();
        assert_eq!(apply_symplectic(&vac, &m).unwrap(), vac);
    }

    #[test]
    fn squeezed_radial_state() {
        let r = 0.5 * 2f64.ln();
        let params = SqueezeParams::new(r, 0.0).unwrap();
        let s = prepare_squeezed_cylindrical(CylindricalMode::RPlus, params, None).unwrap();
        let (h10, v10, h01, v01) = (0, 1, 2, 3);
        assert_abs_diff_eq!(s.cov()[(h10, h10)], 0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(s.cov()[(v01, v01)], 0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(s.cov()[(h10, v01)], -0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(s.cov()[(v10, v10)], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.cov()[(h01, h01)], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.purity_determinant(), 1.0, epsilon = 1e-9);

        let a = prepare_squeezed_cylindrical(CylindricalMode::APlus, params, None).unwrap();
        assert_abs_diff_eq!(a.cov()[(v10, v10)], 0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(a.cov()[(h01, h01)], 0.375, epsilon = 1e-12);
        // a_A = (V10 − H01)/√2 puts a minus sign on the H01 coefficient
        assert_abs_diff_eq!(a.cov()[(v10, h01)], 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(a.cov()[(h10, h10)], 0.5, epsilon = 1e-12);

        let vac = prepare_squeezed_cylindrical(
            CylindricalMode::RPlus,
            SqueezeParams::new(0.0, 1.0).unwrap(),
            None,
        )
        .unwrap();
        assert!((vac.cov() - DMatrix::identity(8, 8) * 0.5).amax() < 1e-15);

        assert!(prepare_squeezed_cylindrical(CylindricalMode::RMinus, params, None).is_err());
    }

    #[test]
    fn converter_loss_is_uniform_and_physical() {
        let params = SqueezeParams::new(0.6, 0.4).unwrap();
        let lossy =
            prepare_squeezed_cylindrical(CylindricalMode::APlus, params, Some(0.83)).unwrap();
        let pure = prepare_squeezed_cylindrical(CylindricalMode::APlus, params, None).unwrap();
        let expected = pure.cov() * 0.83 + DMatrix::identity(8, 8) * (0.17 * 0.5);
        assert!((lossy.cov() - expected).amax() < 1e-14);
        assert!(lossy.is_physical());
        assert!(lossy.purity_determinant() > 1.0 + 1e-6);
    }

    #[test]
    fn passive_elements_preserve_photon_number() {
        let state = prepare_squeezed_cylindrical(
            CylindricalMode::RPlus,
            SqueezeParams::new(0.9, 1.3).unwrap(),
            None,
        )
        .unwrap();
        let out = apply_symplectic(&state, &hwp_port_map(0.37)).unwrap();
        assert_abs_diff_eq!(out.cov().trace(), state.cov().trace(), epsilon = 1e-12);
    }

    #[test]
    fn mode_label_display_and_parse() {
        let l = ModeLabel::new("o1", BasisMode::V01);
        assert_eq!(l.to_string(), "o1:V01");
        assert_eq!(l.profile(), Profile::Tem01);
        assert_eq!(l.polarization(), Polarization::V);
        for m in BasisMode::ALL {
            assert_eq!(m.to_string().parse::<BasisMode>().unwrap(), m);
            assert_eq!(BasisMode::from_parts(m.profile(), m.polarization()), m);
            assert_eq!(BasisMode::from_index(m.index()), Some(m));
        }
        assert!("X10".parse::<BasisMode>().is_err());
    }
}
