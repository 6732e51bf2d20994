//! Fractional regression model and the α sweep.
//!
//! Given a fitted polynomial `β₀ + Σ βᵢ xⁱ`, the fractional model of order α
//! keeps the intercept and maps every other monomial through the power rule:
//!
//! ```text
//! σ(α, x) = β₀ + Σ_{i=1}^{m} βᵢ · Γ(i+1)/Γ(i−α+1) · x^{i−α}
//! ```
//!
//! For α ∈ (−1, 1) every exponent `i − α` is positive, so `σ(α, 0) = β₀`.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::{frac_power_coeff, FracOrder};
use crate::regress::{
    design_matrix, fit_least_squares, predict_poly, r_squared, PolyModel, Series, SplitSeries,
};

/// `(min, max, step)` of the default sweep: effective degrees m+0.5 … m−0.5.
pub const DEFAULT_GRID: (f64, f64, f64) = (-0.5, 0.5, 0.05);

/// A polynomial whose non-constant terms carry a fractional order α.
#[derive(Debug, Clone, PartialEq)]
pub struct FracModel {
    base: PolyModel,
    alpha: f64,
    /// Γ(i+1)/Γ(i−α+1) for i = 1..=m
    term_factors: Vec<f64>,
}

impl FracModel {
    pub fn new(base: PolyModel, alpha: f64) -> Result<Self> {
        FracOrder::for_model(alpha)?;
        if base.degree() < 1 {
            return Err(Error::domain("a degree-0 model has no terms to transform"));
        }
        let term_factors = (1..=base.degree())
            .map(|i| frac_power_coeff(i as f64, alpha))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            base,
            alpha,
            term_factors,
        })
    }

    pub fn base(&self) -> &PolyModel {
        &self.base
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `m − α`
    pub fn effective_degree(&self) -> f64 {
        self.base.degree() as f64 - self.alpha
    }
}

/// Evaluates σ(α, x). At α = 0 this is exactly [`predict_poly`].
pub fn predict_frac(model: &FracModel, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 || !x.is_finite() {
        return Err(Error::domain(format!(
            "fractional model needs a finite x ≥ 0, got {x}"
        )));
    }
    if model.alpha == 0.0 {
        return Ok(predict_poly(&model.base, x));
    }
    let coeffs = model.base.coeffs();
    let sum: f64 = coeffs[1..]
        .iter()
        .zip(&model.term_factors)
        .enumerate()
        .map(|(k, (beta, factor))| {
            let power = (k + 1) as f64 - model.alpha;
            beta * factor * x.powf(power)
        })
        .sum();
    Ok(coeffs[0] + sum)
}

/// One α of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub effective_degree: f64,
    pub r2_interp: f64,
    pub r2_extrap: f64,
}

/// Whether β is kept from the integer-order fit or refitted for each α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaMode {
    #[default]
    Fixed,
    Refit,
}

/// Grid `min, min+step, …, max`, with values snapped to 1e-9 so decimal steps
/// land on their nearest doubles (0.15, not 0.15000000000000002).
pub fn alpha_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if ![min, max, step].iter().all(|v| v.is_finite()) || step <= 0.0 || max < min {
        return Err(Error::domain(format!(
            "invalid α grid: min {min}, max {max}, step {step}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=count)
        .map(|k| {
            let v = ((min + k as f64 * step) * 1e9).round() / 1e9;
            // normalise −0.0 so α = 0 prints and compares as zero
            if v == 0.0 {
                0.0
            } else {
                v
            }
        })
        .collect();
    if let Some(bad) = grid.iter().find(|a| **a <= -1.0 || **a >= 1.0) {
        return Err(Error::domain(format!("grid value {bad} outside (-1, 1)")));
    }
    Ok(grid)
}

pub fn default_alpha_grid() -> Vec<f64> {
    let (min, max, step) = DEFAULT_GRID;
    alpha_grid(min, max, step).expect("default grid is valid")
}

/// The order actually used for degree `m` at grid value `alpha`: the double
/// α' = m − fl(m − α). The subtraction is exact (Sterbenz) whenever
/// m − α ∈ [m/2, 2m], so `(m − α') + α' == m` holds bit-for-bit.
pub fn snap_order(m: usize, alpha: f64) -> f64 {
    let m = m as f64;
    m - (m - alpha)
}

fn predictions(model: &FracModel, s: &Series) -> Result<Vec<f64>> {
    s.x().iter().map(|&x| predict_frac(model, x)).collect()
}

fn evaluate(model: &FracModel, split: &SplitSeries) -> Result<SweepRow> {
    let r2_interp = r_squared(split.train.y(), &predictions(model, &split.train)?)?;
    let r2_extrap = r_squared(split.test.y(), &predictions(model, &split.test)?)?;
    Ok(SweepRow {
        alpha: model.alpha(),
        effective_degree: model.effective_degree(),
        r2_interp,
        r2_extrap,
    })
}

/// Sweeps α with β held at the integer-order fit.
pub fn sweep_alpha(base: &PolyModel, split: &SplitSeries, grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&alpha| {
            let alpha = snap_order(base.degree(), alpha);
            evaluate(&FracModel::new(base.clone(), alpha)?, split)
        })
        .collect()
}

/// Sweeps α, refitting β on the fractional basis for every grid point.
pub fn sweep_alpha_refit(split: &SplitSeries, m: usize, grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&alpha| {
            evaluate(
                &refit_per_alpha(&split.train, m, snap_order(m, alpha))?,
                split,
            )
        })
        .collect()
}

/// Row chosen from a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub row: SweepRow,
    /// `true` when no row had positive interpolation R² and the unconstrained
    /// extrapolation maximum was taken instead.
    pub fallback: bool,
}

fn prefer(a: &SweepRow, b: &SweepRow) -> Ordering {
    // Greater extrapolation R² first, then smaller |α|, then smaller α.
    b.r2_extrap
        .total_cmp(&a.r2_extrap)
        .then(a.alpha.abs().total_cmp(&b.alpha.abs()))
        .then(a.alpha.total_cmp(&b.alpha))
}

/// Maximises extrapolation R² among rows with positive interpolation R².
pub fn select_best(rows: &[SweepRow]) -> Result<Selection> {
    if rows.is_empty() {
        return Err(Error::Empty("sweep produced no rows".into()));
    }
    let constrained = rows
        .iter()
        .filter(|r| r.r2_interp > 0.0)
        .min_by(|a, b| prefer(a, b));
    Ok(match constrained {
        Some(row) => Selection {
            row: *row,
            fallback: false,
        },
        None => Selection {
            row: *rows.iter().min_by(|a, b| prefer(a, b)).expect("non-empty"),
            fallback: true,
        },
    })
}

/// Fractional design matrix: columns `1, cᵢ·x^{i−α}` with cᵢ = Γ(i+1)/Γ(i−α+1).
fn fractional_design(x: &[f64], m: usize, alpha: f64) -> Result<DMatrix<f64>> {
    if alpha == 0.0 {
        return Ok(design_matrix(x, m));
    }
    let factors = (1..=m)
        .map(|i| frac_power_coeff(i as f64, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(x.len(), m + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            factors[c - 1] * x[r].powf(c as f64 - alpha)
        }
    }))
}

/// Least-squares β fitted directly on the fractional basis of order α.
pub fn refit_per_alpha(train: &Series, m: usize, alpha: f64) -> Result<FracModel> {
    FracOrder::for_model(alpha)?;
    if m < 1 {
        return Err(Error::domain("refit needs degree ≥ 1"));
    }
    let design = fractional_design(train.x(), m, alpha)?;
    let fit = fit_least_squares(&design, train.y())?;
    FracModel::new(PolyModel::new(fit.coeffs)?, alpha)
}

fn logistic(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// `f(β₀ + Σ βᵢ·Γ(2)/Γ(2−α)·xᵢ^{1−α})` with the logistic `f`; features must be
/// min-max normalised into [0, 1].
pub fn fractional_logistic(features: &[f64], beta: &[f64], alpha: f64) -> Result<f64> {
    FracOrder::for_model(alpha)?;
    if beta.len() != features.len() + 1 {
        return Err(Error::domain(format!(
            "{} features need {} coefficients, got {}",
            features.len(),
            features.len() + 1,
            beta.len()
        )));
    }
    if let Some(bad) = features.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::domain(format!("feature {bad} outside [0, 1]")));
    }
    let factor = frac_power_coeff(1.0, alpha)?;
    let linear: f64 = beta[0]
        + features
            .iter()
            .zip(&beta[1..])
            .map(|(x, b)| {
                if alpha == 0.0 {
                    b * x
                } else {
                    b * factor * x.powf(1.0 - alpha)
                }
            })
            .sum::<f64>();
    Ok(logistic(linear))
}
