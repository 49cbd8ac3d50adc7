//! Numerical checks on the zeros of Legendre polynomials and the sign
//! structure they induce: zero brackets, the Laplace asymptotic and its
//! error orders, alternating root sums, an argument-principle contour
//! identity, and positive/negative areas of spherical harmonics.
//!
//! Numeric code is generic over [`scalar::Real`] (`f32`, `f64`); the
//! polynomial recurrence additionally accepts complex numbers and exact
//! rationals. The aliases below fix the scalar to `f64`.
//!
//! ```
//! use signeq::{find_roots, validate_bounds, Degree};
//!
//! let roots = find_roots::<f64>(Degree::new(2)?)?;
//! assert!((roots.theta(1).cos() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
//! assert!(validate_bounds(&roots).all_pass());
//! # Ok::<(), signeq::Error>(())
//! ```

pub mod alternating;
pub mod asymptotics;
pub mod contour;
pub mod error;
pub mod export;
pub mod fit;
pub mod legendre;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod sphere;

pub use alternating::{alt_f_sum, alt_theta_sum, riemann_grid_sum, Interval, TestFunction};
pub use contour::{build_contour, integrate_contour, CenterMode};
pub use error::{Error, Result};
pub use fit::{fit_rate, RateFit};
pub use legendre::{eval_assoc_legendre, eval_legendre, AssocNorm, Degree};
pub use roots::{find_roots, validate_bounds, RootSet};
pub use scalar::Real;
pub use sphere::{azimuthal_ratio, zonal_band_areas, BasisFunction};

pub type RootSet64 = roots::RootSet<f64>;
pub type BoundReport64 = roots::BoundReport<f64>;
pub type Interval64 = alternating::Interval<f64>;
pub type AltSumReport64 = alternating::AltSumReport<f64>;
pub type LaplaceProfile64 = asymptotics::LaplaceProfile<f64>;
pub type StieltjesComparison64 = asymptotics::StieltjesComparison<f64>;
pub type ContourSpec64 = contour::ContourSpec<f64>;
pub type ContourReport64 = contour::ContourReport<f64>;
pub type SphereSymmetryReport64 = sphere::SphereSymmetryReport<f64>;
pub type RateFit64 = fit::RateFit<f64>;
