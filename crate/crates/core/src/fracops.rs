//! Fractional operators on power functions.
//!
//! The closed form `D^α x^μ = Γ(μ+1)/Γ(μ−α+1) · x^{μ−α}` drives the models.
//! Negative orders are fractional integrals. The quadrature routines below
//! evaluate the Riemann–Liouville integral, the Riemann–Liouville derivative
//! and the Caputo derivative directly from their integral definitions and
//! serve as independent checks on the closed form.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_ratio};

/// Nodes per Gauss–Legendre panel.
const PANEL_NODES: usize = 16;

/// Minimum total node count accepted by the quadrature routines.
pub const MIN_QUAD_POINTS: usize = 64;

/// Node count used when a caller does not choose one.
pub const DEFAULT_QUAD_POINTS: usize = 512;

/// Ratio between consecutive panel widths near a graded endpoint.
const GRADING: f64 = 0.35;

/// A fractional order α.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain(format!(
                "fractional order {alpha} is not finite"
            )));
        }
        Ok(Self(alpha))
    }

    /// Order admissible in the regression model: α ∈ (−1, 1).
    pub fn for_model(alpha: f64) -> Result<Self> {
        let order = Self::new(alpha)?;
        if alpha <= -1.0 || alpha >= 1.0 {
            return Err(Error::domain(format!(
                "model order must lie in (-1, 1), got {alpha}"
            )));
        }
        Ok(order)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0.0
    }

    /// Integer derivative order n = ⌈α⌉ used by the RL and Caputo definitions.
    pub fn ceil(self) -> i64 {
        self.0.ceil() as i64
    }
}

/// `coeff · x^mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub mu: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, mu: f64) -> Self {
        Self { coeff, mu }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeff * x.powf(self.mu)
    }
}

/// Γ(μ+1)/Γ(μ−α+1), the factor the power rule attaches to `x^{μ−α}`.
///
/// Exactly 1 for α = 0.
pub fn frac_power_coeff(mu: f64, alpha: f64) -> Result<f64> {
    if !mu.is_finite() || mu <= -1.0 {
        return Err(Error::domain(format!(
            "power rule requires mu > -1, got {mu}"
        )));
    }
    let order = FracOrder::new(alpha)?;
    if order.is_identity() {
        return Ok(1.0);
    }
    gamma_ratio(mu + 1.0, mu - alpha + 1.0)
}

/// Applies `D^α` to a single power term.
pub fn apply_power_rule(term: PowerTerm, alpha: f64) -> Result<PowerTerm> {
    let factor = frac_power_coeff(term.mu, alpha)?;
    if alpha == 0.0 {
        return Ok(term);
    }
    Ok(PowerTerm {
        coeff: term.coeff * factor,
        mu: term.mu - alpha,
    })
}

/// A scalar function together with the lower terminal `a` of the
/// fractional operators applied to it.
pub struct SampledFunction<F> {
    f: F,
    lower: f64,
}

impl<F: Fn(f64) -> f64> SampledFunction<F> {
    pub fn new(f: F, lower: f64) -> Self {
        Self { f, lower }
    }

    pub fn lower_limit(&self) -> f64 {
        self.lower
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

fn legendre_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_NODES).expect("valid Gauss-Legendre degree"))
}

/// Deepest geometric refinement applied at each end of the interval.
const MAX_GRADED_LEVELS: usize = 12;

/// Width of each graded end zone within [0, 1].
const GRADED_ZONE: f64 = 0.25;

/// Panel breakpoints on [0, 1]: geometric refinement towards both ends,
/// uniform panels in between.
fn graded_breakpoints(n_points: usize) -> Vec<f64> {
    let panels = (n_points / PANEL_NODES).max(4);
    let levels = ((panels - 1) / 2).min(MAX_GRADED_LEVELS);
    let middle = panels - 2 * levels;

    let mut points = Vec::with_capacity(panels + 1);
    points.push(0.0);
    for k in (0..levels).rev() {
        points.push(GRADED_ZONE * GRADING.powi(k as i32));
    }
    let span = 1.0 - 2.0 * GRADED_ZONE;
    for k in 1..middle {
        points.push(GRADED_ZONE + span * k as f64 / middle as f64);
    }
    for k in 0..levels {
        points.push(1.0 - GRADED_ZONE * GRADING.powi(k as i32));
    }
    points.push(1.0);
    points
}

/// ∫₀^upper g(u) du on graded composite Gauss–Legendre panels.
fn graded_integral<G: Fn(f64) -> f64>(upper: f64, n_points: usize, g: G) -> f64 {
    let rule = legendre_rule();
    graded_breakpoints(n_points)
        .windows(2)
        .map(|w| rule.integrate(w[0] * upper, w[1] * upper, &g))
        .sum()
}

fn check_terminal(a: f64, x: f64) -> Result<()> {
    if !x.is_finite() || !a.is_finite() || x <= a {
        return Err(Error::domain(format!(
            "evaluation point {x} must exceed the lower terminal {a}"
        )));
    }
    Ok(())
}

/// Riemann–Liouville integral `(1/Γ(α)) ∫ₐˣ (x−t)^{α−1} f(t) dt`.
///
/// The substitution `u = (x−t)^α` turns the weakly singular kernel into a
/// constant, leaving `(1/Γ(α+1)) ∫₀^{(x−a)^α} f(x − u^{1/α}) du`, which is
/// integrated on graded Gauss–Legendre panels.
pub fn rl_integral_quad<F: Fn(f64) -> f64>(
    f: &SampledFunction<F>,
    alpha: f64,
    x: f64,
    n_points: usize,
) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!(
            "integral order must be positive, got {alpha}"
        )));
    }
    let a = f.lower_limit();
    check_terminal(a, x)?;
    if n_points < MIN_QUAD_POINTS {
        return Err(Error::domain(format!(
            "quadrature needs at least {MIN_QUAD_POINTS} points, got {n_points}"
        )));
    }
    let upper = (x - a).powf(alpha);
    let inv = 1.0 / alpha;
    let integral = graded_integral(upper, n_points, |u| {
        // clamp guards against u^{1/α} overshooting x − a by an ulp
        let t = (x - u.powf(inv)).max(a);
        f.eval(t)
    });
    Ok(integral / gamma(alpha + 1.0)?)
}

/// Central-difference step used by [`rl_derivative_quad`] by default.
pub fn default_fd_step(x: f64) -> f64 {
    1e-4 * x.abs().max(1.0)
}

/// Riemann–Liouville derivative of order α ∈ (0, 1): `d/dx I^{1−α} f (x)`,
/// differentiated by a central difference of step `h`.
pub fn rl_derivative_quad<F: Fn(f64) -> f64>(
    f: &SampledFunction<F>,
    alpha: f64,
    x: f64,
    h: f64,
) -> Result<f64> {
    check_unit_order(alpha)?;
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let a = f.lower_limit();
    check_terminal(a, x - h)?;
    let order = 1.0 - alpha;
    let forward = rl_integral_quad(f, order, x + h, DEFAULT_QUAD_POINTS)?;
    let backward = rl_integral_quad(f, order, x - h, DEFAULT_QUAD_POINTS)?;
    Ok((forward - backward) / (2.0 * h))
}

/// Caputo derivative of order α ∈ (0, 1): `I^{1−α} f′ (x)`.
pub fn caputo_derivative_quad<F, D>(
    f: &SampledFunction<F>,
    f_prime: D,
    alpha: f64,
    x: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    check_unit_order(alpha)?;
    let derivative = SampledFunction::new(f_prime, f.lower_limit());
    rl_integral_quad(&derivative, 1.0 - alpha, x, DEFAULT_QUAD_POINTS)
}

fn check_unit_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "derivative order must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}
