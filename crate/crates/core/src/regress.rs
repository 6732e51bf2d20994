//! Ordinary polynomial regression.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition number above which a fit is flagged as ill-conditioned.
pub const CONDITION_WARNING: f64 = 1e10;

/// Refinement sweeps applied after the initial QR solve.
const REFINEMENT_STEPS: usize = 2;

/// Ordered observations `(xᵢ, yᵢ)` with strictly increasing, non-negative x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct Series {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TryFrom<RawSeries> for Series {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        Series::new(raw.x, raw.y)
    }
}

impl From<Series> for RawSeries {
    fn from(s: Series) -> Self {
        RawSeries { x: s.x, y: s.y }
    }
}

impl Series {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::domain(format!(
                "x has {} values but y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::domain("a series needs at least two points"));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::domain("series values must be finite"));
        }
        if x[0] < 0.0 {
            return Err(Error::domain("abscissae must be non-negative"));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("abscissae must be strictly increasing"));
        }
        Ok(Self { x, y })
    }

    /// Series with abscissae 1, 2, …, N.
    pub fn indexed(y: Vec<f64>) -> Result<Self> {
        let x = (1..=y.len()).map(|i| i as f64).collect();
        Self::new(x, y)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// `y(x) = Σ βᵢ xⁱ`, coefficients from the intercept upward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyModel {
    coeffs: Vec<f64>,
}

impl PolyModel {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("polynomial coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn intercept(&self) -> f64 {
        self.coeffs[0]
    }
}

/// Horner evaluation.
pub fn predict_poly(model: &PolyModel, x: f64) -> f64 {
    model.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Vandermonde rows `[1, xᵢ, …, xᵢᵐ]`.
///
/// Any shape is built; [`fit_poly`] rejects underdetermined systems.
pub fn design_matrix(x: &[f64], m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), m + 1, |i, j| x[i].powi(j as i32))
}

/// Numerical health of a least-squares solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics {
    /// Numerical rank found by the pivoted factorization.
    pub rank: usize,
    /// 2-norm condition number of the normal-equations matrix XᵀX
    /// (the square of the design matrix's condition number).
    pub condition: f64,
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresFit {
    pub coeffs: Vec<f64>,
    pub diagnostics: FitDiagnostics,
}

/// Minimises ‖y − Xβ‖₂.
///
/// Columns are equilibrated to unit norm, factorized with a column-pivoted
/// Householder QR and the solution is polished by iterative refinement.
/// A condition number above [`CONDITION_WARNING`] is logged and reported in
/// the diagnostics but does not fail the fit.
pub fn fit_least_squares(design: &DMatrix<f64>, y: &[f64]) -> Result<LeastSquaresFit> {
    let (rows, cols) = design.shape();
    if rows != y.len() {
        return Err(Error::domain(format!(
            "design matrix has {rows} rows but y has {} values",
            y.len()
        )));
    }
    if cols == 0 || rows < cols {
        return Err(Error::RankDeficient {
            rank: rows.min(cols),
            cols,
        });
    }
    if design.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::domain("least squares inputs must be finite"));
    }

    let scales: Vec<f64> = design.column_iter().map(|c| c.norm()).collect();
    if scales.contains(&0.0) {
        return Err(Error::RankDeficient {
            rank: scales.iter().filter(|&&s| s > 0.0).count(),
            cols,
        });
    }
    let mut scaled = design.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).unscale_mut(*s);
    }

    let qr = scaled.clone().col_piv_qr();
    let q = qr.q();
    let r = qr.r();
    let perm = qr.p();

    let r00 = r[(0, 0)].abs();
    let tol = r00 * f64::EPSILON * rows.max(cols) as f64 * 10.0;
    let rank = (0..cols).take_while(|&k| r[(k, k)].abs() > tol).count();
    if rank < cols {
        return Err(Error::RankDeficient { rank, cols });
    }

    let solve = |rhs: &DVector<f64>| -> DVector<f64> {
        let qty = q.tr_mul(rhs);
        let mut z = r
            .solve_upper_triangular(&qty)
            .expect("full-rank triangular factor");
        perm.inv_permute_rows(&mut z);
        z
    };

    let y_vec = DVector::from_column_slice(y);
    let mut beta_scaled = solve(&y_vec);
    for _ in 0..REFINEMENT_STEPS {
        let residual = &y_vec - &scaled * &beta_scaled;
        beta_scaled += solve(&residual);
    }

    let coeffs: Vec<f64> = beta_scaled
        .iter()
        .zip(&scales)
        .map(|(b, s)| b / s)
        .collect();

    let sv = design.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 {
        (smax / smin).powi(2)
    } else {
        f64::INFINITY
    };
    let ill_conditioned = condition > CONDITION_WARNING;
    if ill_conditioned {
        log::warn!(
            "normal-equations condition number {condition:.3e} exceeds {CONDITION_WARNING:e}"
        );
    }

    Ok(LeastSquaresFit {
        coeffs,
        diagnostics: FitDiagnostics {
            rank,
            condition,
            ill_conditioned,
        },
    })
}

/// Least-squares polynomial of degree `m` through a series.
pub fn fit_poly(series: &Series, m: usize) -> Result<(PolyModel, FitDiagnostics)> {
    if series.len() < m + 1 {
        return Err(Error::domain(format!(
            "degree {m} needs at least {} observations, got {}",
            m + 1,
            series.len()
        )));
    }
    let design = design_matrix(series.x(), m);
    let fit = fit_least_squares(&design, series.y())?;
    Ok((PolyModel::new(fit.coeffs)?, fit.diagnostics))
}

/// Coefficient of determination `1 − SS_res/SS_tot`; negative when the
/// predictions are worse than the mean.
pub fn r_squared(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::domain(format!(
            "{} observations but {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    if actual.len() < 2 {
        return Err(Error::domain("R² needs at least two observations"));
    }
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(Error::Degenerate);
    }
    let ss_res: f64 = actual
        .iter()
        .zip(predicted)
        .map(|(a, p)| (a - p).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Chronological train ("interpolation") / test ("extrapolation") split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSeries {
    pub train: Series,
    pub test: Series,
}

/// Takes the last ⌈fraction·N⌉ points as the test part, without shuffling.
pub fn split_ordered(s: &Series, test_fraction: f64) -> Result<SplitSeries> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::domain(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let n = s.len();
    if n < 5 {
        return Err(Error::domain(format!(
            "need at least 5 points to split, got {n}"
        )));
    }
    let n_test = (test_fraction * n as f64).ceil() as usize;
    if n_test >= n - 1 {
        return Err(Error::domain(format!(
            "test fraction {test_fraction} leaves fewer than two training points"
        )));
    }
    let cut = n - n_test;
    // slices of a valid series stay ordered; the test part may be a single point
    Ok(SplitSeries {
        train: Series {
            x: s.x[..cut].to_vec(),
            y: s.y[..cut].to_vec(),
        },
        test: Series {
            x: s.x[cut..].to_vec(),
            y: s.y[cut..].to_vec(),
        },
    })
}
