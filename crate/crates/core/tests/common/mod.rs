//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use haar_hankel::{
    quadrature::GaussLegendre, QuadratureConfig, RadialFunction, TransformOrder,
};

/// One row of the offline reference table.
#[derive(Debug, Clone, Copy)]
pub struct Reference {
    pub x: f64,
    pub j0: f64,
    pub j1: f64,
    pub h0: f64,
    pub h1: f64,
    pub d: f64,
    pub erf: f64,
}

/// Table produced by `tests/data/gen_reference.py` (mpmath, 40 digits).
pub fn reference_table() -> Vec<Reference> {
    include_str!("../data/specfun_reference.csv")
        .lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            Reference {
                x: v[0],
                j0: v[1],
                j1: v[2],
                h0: v[3],
                h1: v[4],
                d: v[5],
                erf: v[6],
            }
        })
        .collect()
}

/// `g` given directly, so `f = g / r`.
pub struct Weight<G>(pub G);

impl<G: Fn(f64) -> f64 + Sync> RadialFunction for Weight<G> {
    fn value(&self, r: f64) -> f64 {
        (self.0)(r) / r
    }
    fn weighted(&self, r: f64) -> f64 {
        (self.0)(r)
    }
}

/// Brute-force `∫_lo^hi g(x) J_n(q x) dx`: fixed 64-point Gauss–Legendre on
/// uniform panels far narrower than an oscillation. Shares nothing with the
/// oracle's zero placement or adaptivity.
pub fn brute_force_bessel_integral(
    g: impl Fn(f64) -> f64,
    order: TransformOrder,
    q: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    let rule = GaussLegendre::new(64);
    let panels = ((hi - lo) * q / 2.0).ceil().max(1.0) as usize;
    let width = (hi - lo) / panels as f64;
    (0..panels)
        .map(|i| {
            let a = lo + i as f64 * width;
            rule.integrate(
                &|x: f64| {
                    let b = match order {
                        TransformOrder::Order0 => libm::j0(q * x),
                        TransformOrder::Order1 => libm::j1(q * x),
                    };
                    g(x) * b
                },
                a,
                a + width,
            )
        })
        .sum()
}

/// Oracle settings with tolerances a notch tighter than the defaults.
pub fn tight_oracle(r_max: f64) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::new(r_max);
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-13;
    cfg
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
