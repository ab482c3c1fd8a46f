//! Hankel transforms from a Haar table via exact Bessel/Struve atom integrals.
//!
//! For the unit-interval atoms the integrals are closed form:
//!
//! * `∫_a^b J1(q x) dx = (J0(q a) - J0(q b)) / q`
//! * `∫_a^b J0(q x) dx = (G(q b) - G(q a)) / q`, with
//!   `G(t) = t J0(t) + (π t / 2) D(t)`
//!
//! A wavelet atom `ψ_jk` contributes `2^{j/2}` times the difference between
//! its left and right half integrals. That is a second difference of `J0`
//! for order 1, or of `G` for order 0, at the dyadic points `2^{-j}k`,
//! `2^{-j}(k+½)` and `2^{-j}(k+1)`.
//!
//! A table for `ĝ(x) = g(h x)` gives `∫₀^h g(r) J_n(p r) dr = h ∫₀¹ ĝ(x) J_n(p h x) dx`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::haar::{dyadic_cell, WaveletCoefficients};
use crate::quadrature::CompensatedSum;
use crate::specfun::j0_primitive_unchecked;

/// Below this value of `q · b` atoms switch to power-series evaluation.
const SMALL_ARGUMENT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformOrder {
    Order0,
    Order1,
}

impl TransformOrder {
    pub fn index(self) -> u32 {
        match self {
            TransformOrder::Order0 => 0,
            TransformOrder::Order1 => 1,
        }
    }
}

impl fmt::Display for TransformOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl FromStr for TransformOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(TransformOrder::Order0),
            "1" => Ok(TransformOrder::Order1),
            other => Err(invalid(format!("order must be 0 or 1, got {other:?}"))),
        }
    }
}

/// Ordered `(p, value)` samples of a transform.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Curve {
    points: Vec<(f64, f64)>,
}

impl Curve {
    /// Fails unless abscissae are strictly increasing and every value is finite.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(p, v)) in points.iter().enumerate() {
            if !p.is_finite() || !v.is_finite() {
                return Err(invalid(format!("curve point {i} is not finite")));
            }
            if i > 0 && p <= points[i - 1].0 {
                return Err(invalid("curve abscissae must be strictly increasing"));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(p, _)| p)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, v)| v)
    }
}

fn check_argument(q: f64) -> Result<()> {
    if q.is_finite() && q >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("transform argument must be finite and >= 0, got {q}")))
    }
}

/// `J0(t) - 1` through `t⁶`; used where the exact bracket cancels.
fn j0_minus_one_series(t: f64) -> f64 {
    let t2 = t * t;
    t2 * (-0.25 + t2 * (1.0 / 64.0 - t2 / 2304.0))
}

/// `∫_a^b J0(q x) dx` by the term-wise integrated power series.
fn j0_integral_series(q: f64, a: f64, b: f64) -> f64 {
    let q2 = q * q;
    let span = |n: i32| b.powi(n) - a.powi(n);
    span(1) - q2 / 12.0 * span(3) + q2 * q2 / 320.0 * span(5) - q2 * q2 * q2 / 16128.0 * span(7)
}

/// `∫ₖ^{k+1} J_n(q x) dx` for the unit scaling atom.
pub fn atom_transform_scaling(k: u64, q: f64, order: TransformOrder) -> Result<f64> {
    check_argument(q)?;
    let a = k as f64;
    let b = a + 1.0;
    Ok(match order {
        TransformOrder::Order1 if q == 0.0 => 0.0,
        TransformOrder::Order0 if q == 0.0 => 1.0,
        TransformOrder::Order1 if q * b < SMALL_ARGUMENT => {
            (j0_minus_one_series(q * a) - j0_minus_one_series(q * b)) / q
        }
        TransformOrder::Order0 if q * b < SMALL_ARGUMENT => j0_integral_series(q, a, b),
        _ => scaling_bracket(order, q, kernel(order, q * a), kernel(order, q * b)),
    })
}

/// `J0` for order 1, the `J0` primitive for order 0.
fn kernel(order: TransformOrder, t: f64) -> f64 {
    match order {
        TransformOrder::Order0 => j0_primitive_unchecked(t),
        TransformOrder::Order1 => libm::j0(t),
    }
}

fn scaling_bracket(order: TransformOrder, q: f64, at_lo: f64, at_hi: f64) -> f64 {
    match order {
        TransformOrder::Order0 => (at_hi - at_lo) / q,
        TransformOrder::Order1 => (at_lo - at_hi) / q,
    }
}

fn detail_bracket(order: TransformOrder, q: f64, at_lo: f64, at_mid: f64, at_hi: f64) -> f64 {
    match order {
        TransformOrder::Order0 => (2.0 * at_mid - at_lo - at_hi) / q,
        TransformOrder::Order1 => (at_lo - 2.0 * at_mid + at_hi) / q,
    }
}

/// `∫ ψ_jk(x) J_n(q x) dx`, including the `2^{j/2}` normalisation of `ψ_jk`.
pub fn atom_transform_detail(j: u32, k: u64, q: f64, order: TransformOrder) -> Result<f64> {
    check_argument(q)?;
    if j > crate::haar::MAX_LEVEL || k >= 1u64 << j {
        return Err(invalid(format!("atom ({j}, {k}) is out of range")));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let norm = 2f64.powf(0.5 * j as f64);
    let (lo, mid, hi) = dyadic_cell(j, k);
    let bracket = if q * hi < SMALL_ARGUMENT {
        match order {
            TransformOrder::Order1 => {
                (j0_minus_one_series(q * lo) - 2.0 * j0_minus_one_series(q * mid)
                    + j0_minus_one_series(q * hi))
                    / q
            }
            TransformOrder::Order0 => {
                j0_integral_series(q, lo, mid) - j0_integral_series(q, mid, hi)
            }
        }
    } else {
        detail_bracket(
            order,
            q,
            kernel(order, q * lo),
            kernel(order, q * mid),
            kernel(order, q * hi),
        )
    };
    Ok(norm * bracket)
}

/// Kernel values on the level-`J+1` dyadic grid, shared by all atoms.
///
/// Grid point `i / N` equals the atom endpoint `k 2^{-j}` exactly, so lookups
/// reproduce the per-atom evaluation bit for bit.
struct DyadicKernel {
    values: Vec<f64>,
    top: u32,
}

impl DyadicKernel {
    fn new(order: TransformOrder, q: f64, max_level: u32) -> Self {
        let top = max_level + 1;
        let n = 1u64 << top;
        let values = (0..=n)
            .map(|i| kernel(order, q * (i as f64 / n as f64)))
            .collect();
        Self { values, top }
    }

    fn at(&self, j: u32, numerator: u64) -> f64 {
        // numerator / 2^j  ->  index on the 2^top grid
        self.values[(numerator << (self.top - j)) as usize]
    }
}

/// Tables at least this dense (and no deeper than `MAX_CACHED_LEVEL`) use
/// the shared dyadic grid.
const MAX_CACHED_LEVEL: u32 = 22;

fn use_dyadic_grid(coeffs: &WaveletCoefficients) -> bool {
    let level = coeffs.max_level();
    level <= MAX_CACHED_LEVEL && (coeffs.detail_count() as u64) * 4 >= 1u64 << (level + 1)
}

/// `F_n(p) = ∫₀^h g(r) J_n(p r) dr` from the table.
///
/// Terms are accumulated coarse to fine with compensated summation.
pub fn transform(coeffs: &WaveletCoefficients, order: TransformOrder, p: f64) -> Result<f64> {
    check_argument(p)?;
    let h = coeffs.h();
    let q = p * h;
    if q == 0.0 {
        return Ok(match order {
            TransformOrder::Order0 => h * coeffs.scaling(),
            TransformOrder::Order1 => 0.0,
        });
    }
    let mut acc = CompensatedSum::default();
    acc.add(coeffs.scaling() * atom_transform_scaling(0, q, order)?);
    if use_dyadic_grid(coeffs) {
        let grid = DyadicKernel::new(order, q, coeffs.max_level());
        for (j, k, d) in coeffs.details() {
            // j + 1 resolves the midpoint (2k + 1) / 2^{j+1}
            let hi = dyadic_cell(j, k).2;
            let atom = if q * hi < SMALL_ARGUMENT {
                atom_transform_detail(j, k, q, order)?
            } else {
                let norm = 2f64.powf(0.5 * j as f64);
                norm * detail_bracket(
                    order,
                    q,
                    grid.at(j + 1, 2 * k),
                    grid.at(j + 1, 2 * k + 1),
                    grid.at(j + 1, 2 * k + 2),
                )
            };
            acc.add(d * atom);
        }
    } else {
        for (j, k, d) in coeffs.details() {
            acc.add(d * atom_transform_detail(j, k, q, order)?);
        }
    }
    Ok(h * acc.value())
}

/// Pointwise [`transform`] over a strictly increasing grid.
pub fn transform_grid(
    coeffs: &WaveletCoefficients,
    order: TransformOrder,
    grid: &[f64],
) -> Result<Curve> {
    for (i, &p) in grid.iter().enumerate() {
        check_argument(p)?;
        if i > 0 && p <= grid[i - 1] {
            return Err(invalid("p grid must be strictly increasing"));
        }
    }
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&p| transform(coeffs, order, p))
        .collect::<Result<_>>()?;
    Curve::new(grid.iter().copied().zip(values).collect())
}
