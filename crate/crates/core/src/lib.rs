//! Hankel transforms of order 0 and 1 through Haar wavelet expansion.
//!
//! The radial weight `g(r) = r f(r)` is truncated to `[0, h]`, expanded in the
//! Haar basis, and each basis atom is transformed in closed form with Bessel
//! and Struve functions. Summing the atoms against the wavelet coefficients
//! gives `F_n(p) = ∫₀^h g(r) J_n(p r) dr` at any `p` with no quadrature in the
//! evaluation path.
//!
//! ```
//! use haar_hankel::{gaussian_coefficients, transform, Gaussian, TransformOrder};
//!
//! let coeffs = gaussian_coefficients(1.0, 6.0, 8)?;
//! let value = transform(&coeffs, TransformOrder::Order1, 2.0)?;
//! let exact = Gaussian::new(1.0)?.order1_transform(2.0);
//! assert!((value - exact).abs() < 1e-4);
//! # Ok::<(), haar_hankel::Error>(())
//! ```
//!
//! [`oracle`] evaluates the same integrals by direct oscillatory quadrature
//! and is used to validate everything else.

pub mod csv_io;
pub mod error;
pub mod haar;
pub mod oracle;
pub mod quadrature;
pub mod radial;
pub mod series;
pub mod specfun;

pub use error::{Error, Result};
pub use haar::{
    decompose, detail_coefficient, gaussian_coefficients, scaling_coefficient,
    CoefficientQuadrature, HaarApproximation, Rescaled, WaveletCoefficients,
};
pub use oracle::{direct_hankel, direct_integral, QuadratureConfig};
pub use radial::{DyadicStep, FnRadial, Gaussian, RadialFunction, SampledFunction};
pub use series::{
    atom_transform_detail, atom_transform_scaling, transform, transform_grid, Curve,
    TransformOrder,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/special-functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/haar.md")]
    mod haar {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}
