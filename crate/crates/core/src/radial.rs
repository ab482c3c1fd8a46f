//! Radial input functions.
//!
//! The transform acts on `g(r) = r f(r)`, where `f` is the physical radial
//! profile. Implementors supply `f`; anything that is naturally described at
//! the level of `g` (step functions, reconstructed Haar tables) overrides
//! [`RadialFunction::weighted`] instead.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

pub trait RadialFunction: Sync {
    /// The physical profile `f(r)`.
    fn value(&self, r: f64) -> f64;

    /// The transform integrand weight `g(r) = r f(r)`.
    fn weighted(&self, r: f64) -> f64 {
        r * self.value(r)
    }

    /// Closed-form antiderivative of `g`, when one is known.
    fn weighted_antiderivative(&self, _r: f64) -> Option<f64> {
        None
    }

    /// Radii where `g` or its derivative jumps. Quadrature splits there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<T: RadialFunction + ?Sized> RadialFunction for &T {
    fn value(&self, r: f64) -> f64 {
        (**self).value(r)
    }
    fn weighted(&self, r: f64) -> f64 {
        (**self).weighted(r)
    }
    fn weighted_antiderivative(&self, r: f64) -> Option<f64> {
        (**self).weighted_antiderivative(r)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// `f(r) = r e^{-a² r²}`, so `g(r) = r² e^{-a² r²}`.
///
/// Its order-1 transform is `p / (4 a⁴) · exp(-p² / (4 a²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    a: f64,
}

impl Gaussian {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(invalid(format!("gaussian width a must be positive, got {a}")));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `(√π erf(a r) - 2 a r e^{-a² r²}) / (4 a³)`
    pub fn antiderivative(&self, r: f64) -> f64 {
        let a = self.a;
        let ar = a * r;
        (PI.sqrt() * libm::erf(ar) - 2.0 * ar * (-ar * ar).exp()) / (4.0 * a * a * a)
    }

    /// Closed-form order-1 transform of `f`.
    pub fn order1_transform(&self, p: f64) -> f64 {
        let a2 = self.a * self.a;
        p / (4.0 * a2 * a2) * (-p * p / (4.0 * a2)).exp()
    }
}

impl RadialFunction for Gaussian {
    fn value(&self, r: f64) -> f64 {
        r * (-self.a * self.a * r * r).exp()
    }

    fn weighted_antiderivative(&self, r: f64) -> Option<f64> {
        Some(self.antiderivative(r))
    }
}

/// Wraps a closure `f(r)`. No antiderivative, no breakpoints.
pub struct FnRadial<F> {
    f: F,
}

impl<F: Fn(f64) -> f64 + Sync> FnRadial<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<F: Fn(f64) -> f64 + Sync> RadialFunction for FnRadial<F> {
    fn value(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

/// Piecewise-linear interpolation of `(r, f)` samples, zero beyond the last
/// sample. Between `0` and the first sample the first value is held.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(invalid("sample radii and values differ in length"));
        }
        if radii.is_empty() {
            return Err(invalid("no samples"));
        }
        for (i, (&r, &v)) in radii.iter().zip(&values).enumerate() {
            let line = i as u64 + 2;
            if !(r.is_finite() && v.is_finite()) {
                return Err(Error::Input {
                    line,
                    message: "non-finite sample".into(),
                });
            }
            if r < 0.0 {
                return Err(Error::Input {
                    line,
                    message: format!("negative radius {r}"),
                });
            }
            if i > 0 && r <= radii[i - 1] {
                return Err(Error::Input {
                    line,
                    message: format!("radius {r} is not strictly increasing"),
                });
            }
        }
        Ok(Self { radii, values })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Radius of the last sample.
    pub fn support_end(&self) -> f64 {
        *self.radii.last().expect("non-empty by construction")
    }
}

impl RadialFunction for SampledFunction {
    fn value(&self, r: f64) -> f64 {
        let last = self.radii.len() - 1;
        if r > self.radii[last] {
            return 0.0;
        }
        if r <= self.radii[0] {
            return self.values[0];
        }
        let i = self.radii.partition_point(|&x| x <= r).min(last);
        let (r0, r1) = (self.radii[i - 1], self.radii[i]);
        let t = (r - r0) / (r1 - r0);
        self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.radii.clone()
    }
}

/// A weight `g` that is constant on each of `2^depth` equal cells of
/// `[0, h]` and zero outside. Haar tables of level `J >= depth - 1`
/// represent it exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStep {
    h: f64,
    depth: u32,
    levels: Vec<f64>,
}

impl DyadicStep {
    pub fn new(h: f64, depth: u32, levels: Vec<f64>) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid(format!("support h must be positive, got {h}")));
        }
        if depth > 30 || levels.len() != 1usize << depth {
            return Err(invalid("step table must have 2^depth entries"));
        }
        Ok(Self { h, depth, levels })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

impl RadialFunction for DyadicStep {
    fn value(&self, r: f64) -> f64 {
        self.weighted(r) / r
    }

    fn weighted(&self, r: f64) -> f64 {
        if !(0.0..self.h).contains(&r) {
            return 0.0;
        }
        let cell = ((r / self.h) * self.levels.len() as f64) as usize;
        self.levels[cell.min(self.levels.len() - 1)]
    }

    fn breakpoints(&self) -> Vec<f64> {
        let n = self.levels.len();
        (0..=n).map(|i| self.h * i as f64 / n as f64).collect()
    }
}
