//! Direct panel quadrature of `∫ g(r) J_n(p r) dr`.
//!
//! Panel ends are placed at first-order McMahon approximations of the zeros of
//! `J_n(p r)` (plus any breakpoints the integrand declares), so each panel
//! spans about half an oscillation. Each panel is integrated with an
//! `n`-point Gauss–Legendre rule and compared against the same rule on its two
//! halves; panels with the largest discrepancy are bisected until the summed
//! estimate meets `max(abs_tol, rel_tol · |result|)`.
//!
//! Nothing here touches the Haar or series code, so it serves as an
//! independent check on both.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{CompensatedSum, GaussLegendre};
use crate::radial::RadialFunction;
use crate::series::TransformOrder;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub nodes_per_panel: usize,
    /// Truncation radius for [`direct_hankel`].
    pub r_max: f64,
}

impl QuadratureConfig {
    /// Defaults: tolerances 1e-11, 10⁵ panels, 32 nodes per panel.
    pub fn new(r_max: f64) -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            max_panels: 100_000,
            nodes_per_panel: 32,
            r_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(invalid("quadrature tolerances must be positive"));
        }
        if self.max_panels < 1 {
            return Err(invalid("max_panels must be at least 1"));
        }
        if self.nodes_per_panel < 2 {
            return Err(invalid("nodes_per_panel must be at least 2"));
        }
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return Err(invalid(format!("r_max must be positive, got {}", self.r_max)));
        }
        Ok(())
    }
}

/// Integral value with its error estimate and panel accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Panels from zero and breakpoint placement, before any bisection.
    pub initial_panels: usize,
    /// Panels after adaptive bisection.
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

struct ByError(f64, usize);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

fn panel<F: Fn(f64) -> f64 + ?Sized>(rule: &GaussLegendre, f: &F, lo: f64, hi: f64) -> Panel {
    let whole = rule.integrate(f, lo, hi);
    let mid = 0.5 * (lo + hi);
    let halves = rule.integrate(f, lo, mid) + rule.integrate(f, mid, hi);
    Panel {
        lo,
        hi,
        value: halves,
        error: (halves - whole).abs(),
    }
}

/// Globally adaptive panel integration over consecutive `boundaries`.
fn integrate_panels<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    boundaries: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let rule = GaussLegendre::cached(cfg.nodes_per_panel);
    let mut panels: Vec<Panel> = boundaries
        .windows(2)
        .map(|w| panel(&rule, f, w[0], w[1]))
        .collect();
    let initial_panels = panels.len();
    if initial_panels > cfg.max_panels {
        let (value, error) = totals(&panels);
        return Err(Error::Convergence {
            estimate: value,
            error_bound: error,
            panels: initial_panels,
        });
    }
    let mut heap: BinaryHeap<ByError> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| ByError(p.error, i))
        .collect();
    let (mut value, mut error) = totals(&panels);
    let mut since_refresh = 0usize;
    loop {
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            // recompute in positional order before accepting
            (value, error) = totals(&panels);
            if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
                return Ok(Estimate {
                    value,
                    error,
                    initial_panels,
                    panels: panels.len(),
                });
            }
        }
        let worst = match heap.pop() {
            Some(ByError(_, i)) => i,
            None => unreachable!("error above tolerance implies a panel"),
        };
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        if panels.len() >= cfg.max_panels || mid <= p.lo || mid >= p.hi {
            let (value, error) = totals(&panels);
            return Err(Error::Convergence {
                estimate: value,
                error_bound: error,
                panels: panels.len(),
            });
        }
        let left = panel(&rule, f, p.lo, mid);
        let right = panel(&rule, f, mid, p.hi);
        value += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        panels[worst] = left;
        panels.push(right);
        heap.push(ByError(left.error, worst));
        heap.push(ByError(right.error, panels.len() - 1));
        since_refresh += 1;
        if since_refresh == 1024 {
            (value, error) = totals(&panels);
            since_refresh = 0;
        }
    }
}

/// Sums panel values left to right regardless of bisection history.
fn totals(panels: &[Panel]) -> (f64, f64) {
    let mut order: Vec<usize> = (0..panels.len()).collect();
    order.sort_by(|&a, &b| panels[a].lo.total_cmp(&panels[b].lo));
    let mut value = CompensatedSum::default();
    let mut error = 0.0;
    for i in order {
        value.add(panels[i].value);
        error += panels[i].error;
    }
    (value.value(), error)
}

/// First-order McMahon estimate of the `s`-th positive zero of `J_n`.
pub fn mcmahon_zero(order: TransformOrder, s: u32) -> f64 {
    let n = order.index() as f64;
    let beta = (s as f64 + 0.5 * n - 0.25) * PI;
    beta - (4.0 * n * n - 1.0) / (8.0 * beta)
}

/// Sorted panel boundaries on `[lo, hi]`: the ends, approximate zeros of
/// `J_n(p r)`, and the supplied breakpoints.
fn boundaries(order: TransformOrder, p: f64, lo: f64, hi: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut points = vec![lo, hi];
    if p > 0.0 {
        // zeros are ~π/p apart; start a couple before lo to be safe
        let first = ((lo * p / PI).floor() as i64 - 2).max(1) as u32;
        let mut s = first;
        loop {
            let r = mcmahon_zero(order, s) / p;
            if r >= hi {
                break;
            }
            if r > lo {
                points.push(r);
            }
            s += 1;
        }
    }
    points.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
    points.sort_by(f64::total_cmp);
    let min_gap = 1e-13 * (hi - lo).max(f64::MIN_POSITIVE);
    let mut out: Vec<f64> = Vec::with_capacity(points.len());
    for x in points {
        match out.last() {
            Some(&last) if x - last <= min_gap => {
                if x == hi {
                    *out.last_mut().expect("non-empty") = hi;
                }
            }
            _ => out.push(x),
        }
    }
    out
}

/// `∫_lo^hi g(r) J_n(p r) dr` for a plain closure `g`.
pub fn oscillatory_integral<G: Fn(f64) -> f64 + ?Sized>(
    g: &G,
    order: TransformOrder,
    p: f64,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(invalid(format!("p must be finite and >= 0, got {p}")));
    }
    check_interval(lo, hi)?;
    if lo == hi || (p == 0.0 && order == TransformOrder::Order1) {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            initial_panels: 0,
            panels: 0,
        });
    }
    let kernel = |r: f64| {
        let bessel = match order {
            TransformOrder::Order0 => libm::j0(p * r),
            TransformOrder::Order1 => libm::j1(p * r),
        };
        g(r) * bessel
    };
    integrate_panels(&kernel, &boundaries(order, p, lo, hi, breakpoints), cfg)
}

/// [`direct_hankel`] with the error estimate and panel counts attached.
pub fn direct_hankel_estimate<F: RadialFunction + ?Sized>(
    f: &F,
    order: TransformOrder,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let breakpoints = f.breakpoints();
    oscillatory_integral(
        &|r: f64| f.weighted(r),
        order,
        p,
        0.0,
        cfg.r_max,
        &breakpoints,
        cfg,
    )
}

/// `∫₀^{r_max} r f(r) J_n(p r) dr` by panel quadrature.
pub fn direct_hankel<F: RadialFunction + ?Sized>(
    f: &F,
    order: TransformOrder,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    direct_hankel_estimate(f, order, p, cfg).map(|e| e.value)
}

/// Adaptive `∫_lo^hi g(r) dr` on the same panel machinery (no Bessel factor).
/// `cfg.r_max` is ignored.
pub fn direct_integral<G: Fn(f64) -> f64 + ?Sized>(
    g: &G,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_interval(lo, hi)?;
    if lo == hi {
        return Ok(0.0);
    }
    integrate_panels(g, &[lo, hi], cfg).map(|e| e.value)
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo <= hi {
        Ok(())
    } else {
        Err(invalid(format!("invalid interval [{lo}, {hi}]")))
    }
}
