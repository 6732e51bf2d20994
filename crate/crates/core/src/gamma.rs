//! Real Gamma function and Gamma ratios.
//!
//! Γ is evaluated with the Lanczos approximation (g = 7, nine coefficients)
//! for arguments at or above 0.5. Smaller arguments are shifted up with the
//! recurrence Γ(z) = Γ(z+1)/z, so every negative non-integer argument is
//! reachable without the reflection formula's `sin(πz)` cancellation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance below which an argument is treated as sitting on a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Returns `true` when `z` is (numerically) one of 0, −1, −2, …
pub fn is_pole(z: f64) -> bool {
    let nearest = z.round();
    nearest <= 0.0 && (z - nearest).abs() < POLE_TOLERANCE
}

fn check_arg(z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::domain(format!("Gamma argument {z} is not finite")));
    }
    if is_pole(z) {
        return Err(Error::Pole { z });
    }
    Ok(())
}

/// Lanczos series `A_g(z)` evaluated at `z - 1`, valid for z ≥ 0.5.
fn lanczos_sum(z: f64) -> f64 {
    let x = z - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    sum
}

fn gamma_lanczos(z: f64) -> f64 {
    debug_assert!(z >= 0.5);
    let t = z - 0.5 + LANCZOS_G;
    (2.0 * PI).sqrt() * t.powf(z - 0.5) * (-t).exp() * lanczos_sum(z)
}

fn ln_gamma_lanczos(z: f64) -> f64 {
    debug_assert!(z >= 0.5);
    let t = z - 0.5 + LANCZOS_G;
    0.5 * (2.0 * PI).ln() + (z - 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Shifts `z` upward until it reaches 0.5, returning the shifted argument
/// and the product z(z+1)…(z+k−1) of the factors stepped over.
fn shift_up(z: f64) -> (f64, f64) {
    let mut arg = z;
    let mut product = 1.0;
    while arg < 0.5 {
        product *= arg;
        arg += 1.0;
    }
    (arg, product)
}

/// Γ(z) for real, finite `z` away from the poles.
pub fn gamma(z: f64) -> Result<f64> {
    check_arg(z)?;
    if z >= 0.5 {
        return Ok(gamma_lanczos(z));
    }
    let (shifted, product) = shift_up(z);
    Ok(gamma_lanczos(shifted) / product)
}

/// ln Γ(z) for z > 0.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::domain(format!(
            "ln_gamma requires a finite positive argument, got {z}"
        )));
    }
    if z >= 0.5 {
        Ok(ln_gamma_lanczos(z))
    } else {
        // Γ is positive on (0, 0.5); one recurrence step keeps full precision.
        Ok(ln_gamma_lanczos(z + 1.0) - z.ln())
    }
}

/// Sign and ln|Γ(z)| for any non-pole argument.
fn signed_ln_gamma(z: f64) -> Result<(f64, f64)> {
    check_arg(z)?;
    if z > 0.0 {
        return Ok((1.0, ln_gamma(z)?));
    }
    let (shifted, product) = shift_up(z);
    Ok((
        product.signum(),
        ln_gamma_lanczos(shifted) - product.abs().ln(),
    ))
}

/// Γ(num)/Γ(den).
///
/// Equal arguments short-circuit to exactly 1. A pole in either argument is
/// an error; a pole in the denominator is not folded into a zero ratio.
pub fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    check_arg(num)?;
    check_arg(den)?;
    if num.to_bits() == den.to_bits() {
        return Ok(1.0);
    }
    let (sign_num, ln_num) = signed_ln_gamma(num)?;
    let (sign_den, ln_den) = signed_ln_gamma(den)?;
    Ok(sign_num * sign_den * (ln_num - ln_den).exp())
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // frozen reference values
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Euler integral ∫₀^∞ t^{z−1} e^{−t} dt with t = s^k, k = 1/z, so the
    /// integrand becomes k·exp(−s^k), smooth at s = 0. Composite Simpson.
    fn euler_integral(z: f64) -> f64 {
        let k = 1.0 / z;
        let upper = 60f64.powf(1.0 / k);
        let n = 200_000;
        let h = upper / n as f64;
        let f = |s: f64| k * (-s.powf(k)).exp();
        let mut acc = f(0.0) + f(upper);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn euler_integral_oracle_agrees_with_frozen_half() {
        let oracle = euler_integral(0.5);
        assert_relative_eq!(oracle, 1.772_453_850_905_516, max_relative = 1e-12);
        assert_relative_eq!(gamma(0.5).unwrap(), oracle, max_relative = 1e-12);
    }

    #[test]
    fn integer_and_half_values() {
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            gamma(0.5).unwrap(),
            1.772_453_850_905_516,
            max_relative = 1e-13
        );
    }

    #[test]
    fn factorials() {
        let mut fact = 1.0f64;
        for n in 1..=20u32 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            assert_relative_eq!(gamma(n as f64).unwrap(), fact, max_relative = 1e-12);
        }
    }

    #[test]
    fn recurrence_on_grid() {
        let mut z = 0.5;
        while z <= 30.0 {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            z += 0.0625;
        }
    }

    #[test]
    fn negative_arguments_use_recurrence() {
        // Γ(−0.5) = −2√π
        let expected = -2.0 * PI.sqrt();
        assert_relative_eq!(gamma(-0.5).unwrap(), expected, max_relative = 1e-13);
        // Γ(−1.5) = 4√π/3
        assert_relative_eq!(
            gamma(-1.5).unwrap(),
            4.0 * PI.sqrt() / 3.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            gamma(0.3).unwrap(),
            gamma(1.3).unwrap() / 0.3,
            max_relative = 1e-14
        );
    }

    #[test]
    fn poles_and_non_finite() {
        for z in [0.0, -1.0, -2.0, -7.0, -3.0 + 1e-13] {
            assert!(matches!(gamma(z), Err(Error::Pole { .. })), "z = {z}");
        }
        assert!(matches!(gamma(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(gamma(f64::INFINITY), Err(Error::Domain(_))));
        // close but outside the tolerance
        assert!(gamma(-1.0 + 1e-9).is_ok());
    }

    #[test]
    fn ln_gamma_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-15);
        // ln(9!) from exact integer factorial
        let ln_fact9 = 362_880_f64.ln();
        assert_relative_eq!(ln_fact9, 12.801_827_480_081_469, max_relative = 1e-15);
        assert_relative_eq!(ln_gamma(10.0).unwrap(), ln_fact9, max_relative = 1e-14);
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(ln_gamma(-2.5), Err(Error::Domain(_))));
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        let mut z = 0.5;
        while z <= 30.0 {
            let via_ln = ln_gamma(z).unwrap().exp();
            assert_relative_eq!(via_ln, gamma(z).unwrap(), max_relative = 1e-10);
            z += 0.25;
        }
    }

    #[test]
    fn ratios() {
        assert_relative_eq!(gamma_ratio(3.0, 2.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_eq!(gamma_ratio(2.5, 2.5).unwrap(), 1.0);
        let two_over_sqrt_pi = 2.0 / euler_integral(0.5);
        assert_relative_eq!(
            two_over_sqrt_pi,
            1.128_379_167_095_512_6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gamma_ratio(2.0, 1.5).unwrap(),
            1.128_379_167_095_512_6,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ratio_with_negative_arguments_tracks_sign() {
        let direct = gamma(-0.5).unwrap() / gamma(1.5).unwrap();
        assert_relative_eq!(
            gamma_ratio(-0.5, 1.5).unwrap(),
            direct,
            max_relative = 1e-13
        );
        let direct = gamma(2.2).unwrap() / gamma(-1.3).unwrap();
        assert_relative_eq!(
            gamma_ratio(2.2, -1.3).unwrap(),
            direct,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ratio_poles_are_errors() {
        assert!(matches!(gamma_ratio(1.0, 0.0), Err(Error::Pole { .. })));
        assert!(matches!(gamma_ratio(-2.0, 1.0), Err(Error::Pole { .. })));
        assert!(matches!(gamma_ratio(-2.0, -2.0), Err(Error::Pole { .. })));
    }
}
