//! Haar wavelet representation of `g(r) = r f(r)` on a truncated support.
//!
//! Coefficients are taken for the rescaled weight `ĝ(x) = g(h x)` on the unit
//! interval, so a table carries one scaling coefficient `c₀₀ = ∫₀¹ ĝ` and
//! details `d_jk = 2^{j/2} (∫_{left half} ĝ - ∫_{right half} ĝ)` for
//! `0 <= j <= J`, `0 <= k < 2^j`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::quadrature::adaptive_gk;
use crate::radial::{Gaussian, RadialFunction};

/// Highest resolution level a table may hold.
pub const MAX_LEVEL: u32 = 30;

/// Settings for numeric coefficient integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientQuadrature {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for CoefficientQuadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_depth: 50,
        }
    }
}

/// Sparse Haar coefficient table on the unit interval plus the physical
/// support length `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoefficients {
    h: f64,
    max_level: u32,
    scaling: f64,
    details: BTreeMap<(u32, u64), f64>,
    threshold: f64,
}

impl WaveletCoefficients {
    /// Builds a table, checking index ranges and finiteness. Details with
    /// `|d| <= threshold` are dropped.
    pub fn new(
        h: f64,
        max_level: u32,
        scaling: f64,
        details: impl IntoIterator<Item = ((u32, u64), f64)>,
        threshold: f64,
    ) -> Result<Self> {
        check_support(h)?;
        check_level(max_level)?;
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(invalid(format!("threshold must be >= 0, got {threshold}")));
        }
        if !scaling.is_finite() {
            return Err(invalid("scaling coefficient is not finite"));
        }
        let mut table = BTreeMap::new();
        for ((j, k), d) in details {
            if j > max_level {
                return Err(invalid(format!("detail level {j} exceeds max level {max_level}")));
            }
            if k >= 1u64 << j {
                return Err(invalid(format!("detail index k = {k} out of range at level {j}")));
            }
            if !d.is_finite() {
                return Err(invalid(format!("detail ({j}, {k}) is not finite")));
            }
            if d.abs() > threshold && table.insert((j, k), d).is_some() {
                return Err(invalid(format!("duplicate detail ({j}, {k})")));
            }
        }
        Ok(Self {
            h,
            max_level,
            scaling,
            details: table,
            threshold,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// `c₀₀`.
    pub fn scaling(&self) -> f64 {
        self.scaling
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn detail(&self, j: u32, k: u64) -> Option<f64> {
        self.details.get(&(j, k)).copied()
    }

    /// Stored details, coarse to fine and by ascending `k`.
    pub fn details(&self) -> impl Iterator<Item = (u32, u64, f64)> + '_ {
        self.details.iter().map(|(&(j, k), &d)| (j, k, d))
    }

    pub fn detail_count(&self) -> usize {
        self.details.len()
    }

    /// Copy keeping only details with `|d| > eps`. A no-op when `eps` does not
    /// exceed the current threshold.
    pub fn sparsify(&self, eps: f64) -> Result<Self> {
        let eps = eps.max(self.threshold);
        Self::new(
            self.h,
            self.max_level,
            self.scaling,
            self.details.iter().map(|(&key, &d)| (key, d)),
            eps,
        )
    }

    /// Partial Haar sum at the unit coordinate `x`. Atoms are right-continuous
    /// on `[0, 1)`, so the sum vanishes at `x = 1` and outside the interval.
    pub fn reconstruct(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        let mut sum = self.scaling;
        for j in 0..=self.max_level {
            let scaled = x * (1u64 << j) as f64;
            let k = scaled.floor() as u64;
            if let Some(d) = self.detail(j, k) {
                let norm = 2f64.powf(0.5 * j as f64);
                let sign = if scaled - (k as f64) < 0.5 { 1.0 } else { -1.0 };
                sum += sign * norm * d;
            }
        }
        sum
    }

    /// Partial sum at the physical radius `r`, i.e. the approximation of `g(r)`.
    pub fn reconstruct_at_radius(&self, r: f64) -> f64 {
        self.reconstruct(r / self.h)
    }
}

/// The reconstructed table viewed as a radial weight on `[0, h]`.
///
/// Breakpoints sit on the level-`J+1` dyadic grid, so quadrature over it is
/// exact per cell.
pub struct HaarApproximation<'a> {
    coeffs: &'a WaveletCoefficients,
}

impl<'a> HaarApproximation<'a> {
    pub fn new(coeffs: &'a WaveletCoefficients) -> Self {
        Self { coeffs }
    }
}

impl RadialFunction for HaarApproximation<'_> {
    fn value(&self, r: f64) -> f64 {
        self.weighted(r) / r
    }

    fn weighted(&self, r: f64) -> f64 {
        self.coeffs.reconstruct_at_radius(r)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let cells = 1u64 << (self.coeffs.max_level + 1).min(24);
        (0..=cells)
            .map(|i| self.coeffs.h * i as f64 / cells as f64)
            .collect()
    }
}

/// `ĝ(x) = g(h x)` for a radial function on `[0, h]`.
pub struct Rescaled<'a, F: ?Sized> {
    f: &'a F,
    h: f64,
    breakpoints: Vec<f64>,
}

impl<'a, F: RadialFunction + ?Sized> Rescaled<'a, F> {
    pub fn new(f: &'a F, h: f64) -> Result<Self> {
        check_support(h)?;
        let mut breakpoints: Vec<f64> = f
            .breakpoints()
            .into_iter()
            .map(|r| r / h)
            .filter(|x| *x > 0.0 && *x < 1.0)
            .collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(Self { f, h, breakpoints })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn value(&self, x: f64) -> f64 {
        self.f.weighted(self.h * x)
    }

    /// `∫_{x0}^{x1} ĝ(x) dx`, from the antiderivative when available.
    pub fn integral(&self, x0: f64, x1: f64, quad: &CoefficientQuadrature) -> Result<f64> {
        if let (Some(a0), Some(a1)) = (
            self.f.weighted_antiderivative(self.h * x0),
            self.f.weighted_antiderivative(self.h * x1),
        ) {
            return Ok((a1 - a0) / self.h);
        }
        let integrand = |x: f64| self.value(x);
        let start = self.breakpoints.partition_point(|&b| b <= x0);
        let mut lo = x0;
        let mut total = 0.0;
        for &b in self.breakpoints[start..].iter().take_while(|&&b| b < x1) {
            total += adaptive_gk(&integrand, lo, b, quad.abs_tol, quad.max_depth)
                .map_err(|e| physical_interval(e, self.h))?;
            lo = b;
        }
        total += adaptive_gk(&integrand, lo, x1, quad.abs_tol, quad.max_depth)
            .map_err(|e| physical_interval(e, self.h))?;
        Ok(total)
    }
}

fn physical_interval(e: Error, h: f64) -> Error {
    match e {
        Error::Integration { lo, hi, error } => Error::Integration {
            lo: lo * h,
            hi: hi * h,
            error,
        },
        other => other,
    }
}

/// `∫ₖ^{k+1} ĝ(x) dx`.
pub fn scaling_coefficient<F: RadialFunction + ?Sized>(
    g: &Rescaled<'_, F>,
    k: u64,
    quad: &CoefficientQuadrature,
) -> Result<f64> {
    g.integral(k as f64, k as f64 + 1.0, quad)
}

/// `2^{j/2} (∫ over [2^{-j} k, 2^{-j}(k+½)] − ∫ over [2^{-j}(k+½), 2^{-j}(k+1)])`.
pub fn detail_coefficient<F: RadialFunction + ?Sized>(
    g: &Rescaled<'_, F>,
    j: u32,
    k: u64,
    quad: &CoefficientQuadrature,
) -> Result<f64> {
    check_level(j)?;
    if k >= 1u64 << j {
        return Err(invalid(format!("detail index k = {k} out of range at level {j}")));
    }
    let (lo, mid, hi) = dyadic_cell(j, k);
    let left = g.integral(lo, mid, quad)?;
    let right = g.integral(mid, hi, quad)?;
    Ok(2f64.powf(0.5 * j as f64) * (left - right))
}

/// `(2^{-j} k, 2^{-j}(k+½), 2^{-j}(k+1))`
pub(crate) fn dyadic_cell(j: u32, k: u64) -> (f64, f64, f64) {
    let width = (-(j as f64)).exp2();
    let lo = k as f64 * width;
    (lo, lo + 0.5 * width, lo + width)
}

/// Haar table of `g = r f` truncated to `[0, h]` through level `J`, keeping
/// only details with `|d| > eps`.
pub fn decompose<F: RadialFunction + ?Sized>(
    f: &F,
    h: f64,
    max_level: u32,
    eps: f64,
    quad: &CoefficientQuadrature,
) -> Result<WaveletCoefficients> {
    check_level(max_level)?;
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(invalid(format!("threshold must be >= 0, got {eps}")));
    }
    let g = Rescaled::new(f, h)?;
    let scaling = scaling_coefficient(&g, 0, quad)?;
    let mut details = Vec::new();
    for j in 0..=max_level {
        let count = 1u64 << j;
        // bounded chunks keep memory flat for deep levels
        let chunk = 1u64 << 16;
        let mut start = 0;
        while start < count {
            let end = (start + chunk).min(count);
            let level: Vec<(u64, f64)> = (start..end)
                .into_par_iter()
                .map(|k| detail_coefficient(&g, j, k, quad).map(|d| (k, d)))
                .collect::<Result<_>>()?;
            details.extend(
                level
                    .into_iter()
                    .filter(|(_, d)| d.abs() > eps)
                    .map(|(k, d)| ((j, k), d)),
            );
            start = end;
        }
    }
    WaveletCoefficients::new(h, max_level, scaling, details, eps)
}

/// Closed-form table for `g(r) = r² e^{-a² r²}` on `[0, h]`.
///
/// Uses the antiderivative `(√π erf(a r) - 2 a r e^{-a² r²}) / (4 a³)`
/// directly; no quadrature is involved. Exact zeros are dropped.
pub fn gaussian_coefficients(a: f64, h: f64, max_level: u32) -> Result<WaveletCoefficients> {
    let gaussian = Gaussian::new(a)?;
    check_support(h)?;
    check_level(max_level)?;
    // ∫ ĝ over [x0, x1] = (P(h x1) - P(h x0)) / h
    let cell = |x0: f64, x1: f64| {
        (gaussian.antiderivative(h * x1) - gaussian.antiderivative(h * x0)) / h
    };
    let scaling = cell(0.0, 1.0);
    let mut details = Vec::new();
    for j in 0..=max_level {
        let norm = 2f64.powf(0.5 * j as f64);
        let level: Vec<(u64, f64)> = (0..1u64 << j)
            .into_par_iter()
            .map(|k| {
                let (lo, mid, hi) = dyadic_cell(j, k);
                (k, norm * (cell(lo, mid) - cell(mid, hi)))
            })
            .collect();
        details.extend(level.into_iter().map(|(k, d)| ((j, k), d)));
    }
    WaveletCoefficients::new(h, max_level, scaling, details, 0.0)
}

fn check_support(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("support length h must be positive, got {h}")))
    }
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        Err(Error::Capacity {
            level,
            max: MAX_LEVEL,
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{DyadicStep, FnRadial};
    use approx::assert_abs_diff_eq;

    fn unit_g<G: Fn(f64) -> f64 + Sync>(g: G) -> impl RadialFunction {
        // f = g / r so that the weight is exactly g
        struct W<G>(G);
        impl<G: Fn(f64) -> f64 + Sync> RadialFunction for W<G> {
            fn value(&self, r: f64) -> f64 {
                (self.0)(r) / r
            }
            fn weighted(&self, r: f64) -> f64 {
                (self.0)(r)
            }
        }
        W(g)
    }

    #[test]
    fn scaling_of_constant_and_zero() {
        let q = CoefficientQuadrature::default();
        let one = unit_g(|_| 1.0);
        let g = Rescaled::new(&one, 1.0).unwrap();
        assert_abs_diff_eq!(scaling_coefficient(&g, 0, &q).unwrap(), 1.0, epsilon = 1e-15);
        let zero = unit_g(|_| 0.0);
        let g = Rescaled::new(&zero, 1.0).unwrap();
        assert_eq!(scaling_coefficient(&g, 0, &q).unwrap(), 0.0);
    }

    #[test]
    fn scaling_of_rescaled_gaussian() {
        let q = CoefficientQuadrature::default();
        let f = FnRadial::new(|r: f64| r * (-r * r).exp());
        let g = Rescaled::new(&f, 1.0).unwrap();
        let expected = (std::f64::consts::PI.sqrt() * libm::erf(1.0) - 2.0 * (-1f64).exp()) / 4.0;
        assert_abs_diff_eq!(scaling_coefficient(&g, 0, &q).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn detail_of_constant_vanishes() {
        let q = CoefficientQuadrature::default();
        let c = unit_g(|_| 3.5);
        let g = Rescaled::new(&c, 2.0).unwrap();
        for j in 0..5 {
            for k in 0..1u64 << j {
                assert_abs_diff_eq!(detail_coefficient(&g, j, k, &q).unwrap(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn detail_of_identity_at_root() {
        let q = CoefficientQuadrature::default();
        let id = unit_g(|r| r);
        let g = Rescaled::new(&id, 1.0).unwrap();
        assert_abs_diff_eq!(detail_coefficient(&g, 0, 0, &q).unwrap(), -0.25, epsilon = 1e-15);
    }

    #[test]
    fn detail_index_out_of_range() {
        let q = CoefficientQuadrature::default();
        let id = unit_g(|r| r);
        let g = Rescaled::new(&id, 1.0).unwrap();
        assert!(detail_coefficient(&g, 2, 4, &q).is_err());
    }

    #[test]
    fn zero_function_has_empty_detail_table() {
        let f = FnRadial::new(|_| 0.0);
        let c = decompose(&f, 3.0, 4, 0.0, &CoefficientQuadrature::default()).unwrap();
        assert_eq!(c.scaling(), 0.0);
        assert_eq!(c.detail_count(), 0);
        assert_eq!(c.max_level(), 4);
        assert_eq!(c.h(), 3.0);
    }

    #[test]
    fn decompose_rejects_deep_levels() {
        let f = FnRadial::new(|_| 0.0);
        let err = decompose(&f, 1.0, 31, 0.0, &CoefficientQuadrature::default()).unwrap_err();
        assert_eq!(err, Error::Capacity { level: 31, max: 30 });
        assert!(gaussian_coefficients(1.0, 1.0, 31).is_err());
    }

    #[test]
    fn decompose_rejects_bad_parameters() {
        let f = FnRadial::new(|_| 0.0);
        let q = CoefficientQuadrature::default();
        assert!(decompose(&f, 0.0, 1, 0.0, &q).is_err());
        assert!(decompose(&f, 1.0, 1, -1.0, &q).is_err());
        assert!(gaussian_coefficients(-1.0, 1.0, 1).is_err());
    }

    #[test]
    fn reconstruct_trivial_tables() {
        let zero = WaveletCoefficients::new(1.0, 3, 0.0, [], 0.0).unwrap();
        assert_eq!(zero.reconstruct(0.3), 0.0);
        let unit = WaveletCoefficients::new(1.0, 3, 1.0, [], 0.0).unwrap();
        for x in [0.0, 0.1, 0.5, 0.99] {
            assert_eq!(unit.reconstruct(x), 1.0);
        }
        assert_eq!(unit.reconstruct(1.0), 0.0);
    }

    #[test]
    fn step_function_round_trip() {
        let step = DyadicStep::new(4.0, 3, vec![1.0, -2.0, 0.5, 0.5, 3.0, 0.0, 0.0, 7.25]).unwrap();
        let c = decompose(&step, 4.0, 2, 0.0, &CoefficientQuadrature::default()).unwrap();
        for (i, &v) in step.levels().iter().enumerate() {
            let x = (i as f64 + 0.37) / 8.0;
            assert_abs_diff_eq!(c.reconstruct(x), v, epsilon = 1e-13);
        }
    }

    #[test]
    fn new_rejects_bad_entries() {
        assert!(WaveletCoefficients::new(1.0, 2, 0.0, [((3, 0), 1.0)], 0.0).is_err());
        assert!(WaveletCoefficients::new(1.0, 2, 0.0, [((1, 2), 1.0)], 0.0).is_err());
        assert!(WaveletCoefficients::new(1.0, 2, 0.0, [((1, 1), f64::NAN)], 0.0).is_err());
        assert!(WaveletCoefficients::new(1.0, 2, f64::INFINITY, [], 0.0).is_err());
        assert!(WaveletCoefficients::new(1.0, 2, 0.0, [((1, 1), 1.0), ((1, 1), 2.0)], 0.0).is_err());
    }

    #[test]
    fn sparsify_drops_small_details() {
        let c = gaussian_coefficients(1.0, 6.0, 3).unwrap();
        let s = c.sparsify(1e-3).unwrap();
        assert!(s.detail_count() <= c.detail_count());
        assert!(s.details().all(|(_, _, d)| d.abs() > 1e-3));
        assert_eq!(s.threshold(), 1e-3);
    }

    #[test]
    fn gaussian_details_underflow_beyond_support() {
        let c = gaussian_coefficients(1.0, 12.0, 5).unwrap();
        for (j, k, d) in c.details() {
            let (lo, _, _) = dyadic_cell(j, k);
            if lo * 12.0 >= 6.5 {
                assert!(d.abs() < 1e-14, "d({j},{k}) = {d}");
            }
        }
    }
}
