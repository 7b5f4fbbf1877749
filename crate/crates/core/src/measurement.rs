//! Amplitude-quadrature correlation predictions relative to shot noise.
//!
//! The amplitude quadrature is `q`. A two-mode combination `q_i ± q_j` is
//! compared against its shot-noise level `1` (twice the vacuum variance).

use std::f64::consts::{LN_10, PI};
use std::fmt;

use serde::Serialize;

use crate::circuit::{run_circuit, scheme1_circuit, RunOutput};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SqueezeParams};
use crate::optics::{BasisMode, CylindricalMode, ModeLabel};

/// Input squeezing at which the published theory values apply.
pub const REFERENCE_INPUT_DB: f64 = -1.9;
/// Published theory value for the correlated ("+") rows at [`REFERENCE_INPUT_DB`].
pub const REFERENCE_SUM_DB: f64 = -0.8;
/// Published theory value for the uncorrelated ("−") rows.
pub const REFERENCE_DIFFERENCE_DB: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `10·log₁₀(Var(q_i ± q_j) / 1)`.
pub fn correlation_db(state: &GaussianState, i: usize, j: usize, sign: Sign) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidParameter(
            "correlation needs two distinct modes".into(),
        ));
    }
    let n = state.n_modes();
    if i >= n || j >= n {
        return Err(Error::InvalidParameter(format!(
            "mode index out of range for {n} modes"
        )));
    }
    let c = state.cov();
    let s = sign.factor();
    let var = c[(i, i)] + c[(j, j)] + 2.0 * s * c[(i, j)];
    Ok(10.0 * var.log10())
}

/// A squeezing level in dB relative to vacuum, with its `q` variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingLevel {
    pub db: f64,
    pub variance: f64,
}

impl SqueezingLevel {
    pub fn from_db(db: f64) -> Self {
        Self {
            db,
            variance: 0.5 * 10f64.powf(db / 10.0),
        }
    }

    pub fn from_variance(variance: f64) -> Result<Self> {
        if !variance.is_finite() || variance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "variance must be positive, got {variance}"
            )));
        }
        Ok(Self {
            db: 10.0 * (variance / 0.5).log10(),
            variance,
        })
    }
}

/// Amplitude squeezing (θ = 0) with `e^{−2r}/2 = ½·10^{db/10}`.
///
/// Positive `db` means amplitude anti-squeezing and is realized with θ = π.
pub fn squeezing_from_db(db: f64) -> Result<(SqueezingLevel, SqueezeParams)> {
    if !db.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squeezing must be finite, got {db} dB"
        )));
    }
    let r = (db * LN_10 / 20.0).abs();
    let theta = if db > 0.0 { PI } else { 0.0 };
    Ok((SqueezingLevel::from_db(db), SqueezeParams::new(r, theta)?))
}

/// Mode pairs in the row order of the published correlation table.
pub const TABLE_PAIRS: [(BasisMode, BasisMode); 6] = [
    (BasisMode::H01, BasisMode::H10),
    (BasisMode::H01, BasisMode::V10),
    (BasisMode::V01, BasisMode::H10),
    (BasisMode::V01, BasisMode::V10),
    (BasisMode::H01, BasisMode::V01),
    (BasisMode::V10, BasisMode::H10),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    /// Row name as in the table, e.g. `H01+H10`.
    pub label: String,
    pub pair: (ModeLabel, ModeLabel),
    /// "+" rows are the correlated combinations, "−" rows the uncorrelated ones.
    pub sign: Sign,
    /// Sign actually used in `q_i ± q_j` for this row.
    pub physical_sign: Sign,
    pub predicted_db: f64,
    pub paper_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
    pub input_kind: Option<CylindricalMode>,
    pub input_squeezing_db: Option<f64>,
    pub loss_t: Option<f64>,
}

/// The twelve table rows for a four-mode output carrying each basis mode once.
///
/// Each pair's "+" row uses the combination whose excess noise is reduced
/// (`q_i + q_j` when `⟨q_i q_j⟩ ≤ 0`, else `q_i − q_j`); `None` if the outputs
/// are not one each of `H10, V10, H01, V01`. `reference` attaches the published
/// theory values.
pub fn correlation_rows(out: &RunOutput, reference: bool) -> Result<Option<Vec<CorrelationRow>>> {
    if out.ordering.len() != 4 {
        return Ok(None);
    }
    let find = |m: BasisMode| out.ordering.iter().position(|l| l.mode == m);
    let mut index = [0usize; 4];
    for m in BasisMode::ALL {
        match find(m) {
            Some(i) => index[m.index()] = i,
            None => return Ok(None),
        }
    }
    let mut rows = Vec::with_capacity(12);
    for sign in [Sign::Plus, Sign::Minus] {
        for (a, b) in TABLE_PAIRS {
            let (i, j) = (index[a.index()], index[b.index()]);
            let correlated = if out.state.cov()[(i, j)] <= 0.0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let physical_sign = match sign {
                Sign::Plus => correlated,
                Sign::Minus => correlated.flip(),
            };
            rows.push(CorrelationRow {
                label: format!("{a}{sign}{b}"),
                pair: (out.ordering[i].clone(), out.ordering[j].clone()),
                sign,
                physical_sign,
                predicted_db: correlation_db(&out.state, i, j, physical_sign)?,
                paper_db: reference.then_some(match sign {
                    Sign::Plus => REFERENCE_SUM_DB,
                    Sign::Minus => REFERENCE_DIFFERENCE_DB,
                }),
            });
        }
    }
    Ok(Some(rows))
}

/// Whether `db` is the input level the published table refers to.
pub fn is_reference_input(db: f64) -> bool {
    (db - REFERENCE_INPUT_DB).abs() < 1e-9
}

/// Correlation table of the fully connected layout for a squeezed input of `input_db`.
pub fn table1_report(
    kind: CylindricalMode,
    input_db: f64,
    loss_t: Option<f64>,
) -> Result<CorrelationReport> {
    let (_, params) = squeezing_from_db(input_db)?;
    let out = run_circuit(&scheme1_circuit(kind, params, loss_t)?)?;
    let rows = correlation_rows(&out, is_reference_input(input_db))?.ok_or_else(|| {
        Error::InvalidParameter("scheme output is not one mode per basis label".into())
    })?;
    Ok(CorrelationReport {
        rows,
        input_kind: Some(kind),
        input_squeezing_db: Some(input_db),
        loss_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::vacuum_state;

    #[test]
    fn vacuum_is_shot_noise() {
        let v = vacuum_state(3).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            assert_eq!(correlation_db(&v, 0, 2, sign).unwrap(), 0.0);
        }
        assert!(correlation_db(&v, 1, 1, Sign::Plus).is_err());
        assert!(correlation_db(&v, 1, 3, Sign::Plus).is_err());
    }

    #[test]
    fn db_conversions() {
        let (lvl, p) = squeezing_from_db(0.0).unwrap();
        assert_eq!((lvl.variance, p.r()), (0.5, 0.0));

        let (lvl, p) = squeezing_from_db(-10.0 * 2f64.log10()).unwrap();
        assert!((lvl.variance - 0.25).abs() < 1e-15);
        assert!((p.r() - 0.34657).abs() < 1e-5);
        assert!((p.q_variance() - lvl.variance).abs() < 1e-15);

        let (lvl, p) = squeezing_from_db(-1.9).unwrap();
        assert!((lvl.variance - 0.32283).abs() < 1e-5);
        assert!((p.q_variance() - lvl.variance).abs() < 1e-15);

        let (lvl, p) = squeezing_from_db(2.0).unwrap();
        assert!((p.q_variance() - lvl.variance).abs() < 1e-14);

        let back = SqueezingLevel::from_variance(lvl.variance).unwrap();
        assert!((back.db - 2.0).abs() < 1e-12);
        assert!(SqueezingLevel::from_variance(0.0).is_err());
        assert!(squeezing_from_db(f64::NAN).is_err());
    }

    #[test]
    fn table_rows_at_reference_input() {
        for kind in [CylindricalMode::RPlus, CylindricalMode::APlus] {
            let report = table1_report(kind, -1.9, None).unwrap();
            assert_eq!(report.rows.len(), 12);
            assert_eq!(report.rows[0].label, "H01+H10");
            assert_eq!(report.rows[6].label, "H01-H10");
            for row in &report.rows[..6] {
                assert!((row.predicted_db + 0.8469).abs() < 1e-3, "{row:?}");
                assert_eq!(row.paper_db, Some(-0.8));
            }
            for row in &report.rows[6..] {
                assert!(row.predicted_db.abs() < 1e-10, "{row:?}");
                assert_eq!(row.paper_db, Some(0.0));
            }
        }
    }

    #[test]
    fn no_reference_away_from_reference_input() {
        let report = table1_report(CylindricalMode::RPlus, 0.0, None).unwrap();
        assert!(report
            .rows
            .iter()
            .all(|r| r.paper_db.is_none() && r.predicted_db.abs() < 1e-12));
    }
}
