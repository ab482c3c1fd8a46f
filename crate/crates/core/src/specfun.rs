//! Double-precision special functions needed by the transform series.
//!
//! `J0`, `J1`, `Y0`, `Y1` and `erf` come from the `libm` port of fdlibm
//! (rational minimax fits below |x| = 8, Hankel asymptotics above). The
//! Struve functions are evaluated here in three regimes:
//!
//! | range          | method                                                |
//! |----------------|-------------------------------------------------------|
//! | `x <= 8`       | ascending power series                                |
//! | `8 < x <= 30`  | 64-point Gauss–Legendre on the Poisson integral       |
//! | `x > 30`       | asymptotic expansion of `H_n - Y_n` plus `Y_n`         |
//!
//! In binary64 the power series loses about `e^x / x` in relative terms to
//! cancellation, and the asymptotic series cannot reach 1e-10 below x ≈ 25,
//! so neither covers the middle band alone.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

const SERIES_CUTOFF: f64 = 8.0;
const ASYMPTOTIC_CUTOFF: f64 = 30.0;
const POISSON_NODES: usize = 64;

fn check_finite(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { function, x })
    }
}

fn check_nonnegative(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { function, x })
    }
}

/// Bessel function of the first kind, order 0.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite("bessel_j0", x)?;
    Ok(libm::j0(x))
}

/// Bessel function of the first kind, order 1.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_finite("bessel_j1", x)?;
    Ok(libm::j1(x))
}

/// Error function.
pub fn erf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain { function: "erf", x });
    }
    Ok(libm::erf(x))
}

/// Struve function `H0(x)` for `x >= 0`.
pub fn struve_h0(x: f64) -> Result<f64> {
    check_nonnegative("struve_h0", x)?;
    Ok(h0_unchecked(x))
}

/// Struve function `H1(x)` for `x >= 0`.
pub fn struve_h1(x: f64) -> Result<f64> {
    check_nonnegative("struve_h1", x)?;
    Ok(h1_unchecked(x))
}

/// `D(x) = H0(x) J1(x) - H1(x) J0(x)`.
pub fn struve_d(x: f64) -> Result<f64> {
    check_nonnegative("struve_d", x)?;
    Ok(d_unchecked(x))
}

/// `∫₀ˣ J0(t) dt`, evaluated as `x J0(x) + (π x / 2) D(x)`.
pub fn j0_primitive(x: f64) -> Result<f64> {
    check_nonnegative("j0_primitive", x)?;
    Ok(j0_primitive_unchecked(x))
}

pub(crate) fn j0_primitive_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x * libm::j0(x) + FRAC_PI_2 * x * d_unchecked(x)
}

fn d_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let (h0, h1) = if x > SERIES_CUTOFF && x <= ASYMPTOTIC_CUTOFF {
        h0_h1_poisson(x)
    } else {
        (h0_unchecked(x), h1_unchecked(x))
    };
    h0 * libm::j1(x) - h1 * libm::j0(x)
}

fn h0_unchecked(x: f64) -> f64 {
    if x <= SERIES_CUTOFF {
        h0_series(x)
    } else if x <= ASYMPTOTIC_CUTOFF {
        h0_poisson(x)
    } else {
        libm::y0(x) + h0_minus_y0(x)
    }
}

fn h1_unchecked(x: f64) -> f64 {
    if x <= SERIES_CUTOFF {
        h1_series(x)
    } else if x <= ASYMPTOTIC_CUTOFF {
        h1_poisson(x)
    } else {
        libm::y1(x) + h1_minus_y1(x)
    }
}

/// `H0 = (2/π) Σ (-1)^k x^(2k+1) / ((2k+1)!!)²`
fn h0_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = term;
    for k in 0..200 {
        let m = (2 * k + 3) as f64;
        term *= -x2 / (m * m);
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    FRAC_2_PI * sum
}

/// `H1 = (2/π) Σ (-1)^k x^(2k+2) / ((2k+1)!! (2k+3)!!)`
fn h1_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x2 / 3.0;
    let mut sum = term;
    for k in 0..200 {
        let a = (2 * k + 3) as f64;
        let b = (2 * k + 5) as f64;
        term *= -x2 / (a * b);
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    FRAC_2_PI * sum
}

/// Gauss–Legendre nodes on `[0, π/2]` as `(weight, cos θ, sin² θ)`.
fn poisson_nodes() -> &'static [(f64, f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let rule = GaussLegendre::new(POISSON_NODES);
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&t, &w)| {
                let theta = FRAC_PI_2 * 0.5 * (t + 1.0);
                let (s, c) = theta.sin_cos();
                (w * FRAC_PI_2 * 0.5, c, s * s)
            })
            .collect()
    })
}

/// `H0(x) = (2/π) ∫₀^{π/2} sin(x cos θ) dθ` and
/// `H1(x) = (2x/π) ∫₀^{π/2} sin²θ sin(x cos θ) dθ` in one pass.
fn h0_h1_poisson(x: f64) -> (f64, f64) {
    let mut h0 = 0.0;
    let mut h1 = 0.0;
    for &(w, c, s2) in poisson_nodes() {
        let v = w * (x * c).sin();
        h0 += v;
        h1 += v * s2;
    }
    (FRAC_2_PI * h0, FRAC_2_PI * x * h1)
}

fn h0_poisson(x: f64) -> f64 {
    h0_h1_poisson(x).0
}

fn h1_poisson(x: f64) -> f64 {
    h0_h1_poisson(x).1
}

/// Sums an alternating asymptotic series given its first term and the ratio
/// `t_{k+1} / t_k`, stopping at the smallest term.
fn asymptotic_sum(first: f64, ratio: impl Fn(f64) -> f64) -> f64 {
    let mut term = first;
    let mut sum = first;
    let mut k = 0.0;
    loop {
        let next = term * ratio(k);
        if next.abs() >= term.abs() || next.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            if next.abs() < term.abs() {
                sum += next;
            }
            return sum;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
}

/// `H0 - Y0 ~ (2/(π x)) Σ (-1)^k ((2k-1)!!)² (2/x)^{2k} / 4^k`
fn h0_minus_y0(x: f64) -> f64 {
    let w = 2.0 / x;
    asymptotic_sum(w / PI, |k| -(k + 0.5) * (k + 0.5) * w * w)
}

/// `H1 - Y1 ~ 2/π + 2/(π x²) - ...`
fn h1_minus_y1(x: f64) -> f64 {
    let w = 2.0 / x;
    asymptotic_sum(FRAC_2_PI, |k| (k + 0.5) * (0.5 - k) * w * w)
}
