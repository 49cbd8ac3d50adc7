//! Laplace main term `A(θ) = sqrt(2/(nπ sin θ)) cos((n+½)θ - π/4)`, its
//! θ-derivative, the errors `E = P_n(cos θ) - A` and `E' = ∂_θ P_n(cos θ) - A'`,
//! and the Stieltjes double-integral remainder.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, num};
use crate::fit::{fit_rate, RateFit};
use crate::legendre::{legendre_cos, Degree};
use crate::quadrature::{adaptive_complex, GaussRule};
use crate::scalar::Real;

pub use crate::fit::{fit_slope, MIN_RATE_POINTS};

/// Number of equispaced θ samples used for the `max |E|` proxy of the sup norm.
pub const SUP_GRID_POINTS: usize = 33;

fn check_interior<T: Real>(theta: T) -> Result<()> {
    if theta > T::zero() && theta < T::PI() && theta.sin() > T::zero() {
        Ok(())
    } else {
        Err(Error::Domain(format!("θ = {theta} must lie strictly inside (0, π)")))
    }
}

fn phase<T: Real>(n: usize, theta: T) -> T {
    (T::from_usize_exact(n) + T::lit(0.5)) * theta - T::FRAC_PI_4()
}

/// `A(θ)`.
pub fn laplace_main<T: Real>(n: Degree, theta: T) -> Result<T> {
    check_interior(theta)?;
    let amp = (T::lit(2.0) / (T::from_usize_exact(n.get()) * T::PI() * theta.sin())).sqrt();
    Ok(amp * phase(n.get(), theta).cos())
}

/// `A'(θ)`: amplitude-derivative term plus `-(n+½)·amplitude·sin(phase)`.
pub fn laplace_main_deriv<T: Real>(n: Degree, theta: T) -> Result<T> {
    check_interior(theta)?;
    let nn = T::from_usize_exact(n.get());
    let (s, c) = theta.sin_cos();
    let k = (T::lit(2.0) / (nn * T::PI())).sqrt();
    let ph = phase(n.get(), theta);
    let amp = k / s.sqrt();
    let d_amp = -T::lit(0.5) * k * c / (s * s.sqrt());
    Ok(d_amp * ph.cos() - (nn + T::lit(0.5)) * amp * ph.sin())
}

/// `B(n+1, 1/2) = 2 · Π_{k=1}^{n} 2k/(2k+1)`.
fn beta_half<T: Real>(n: usize) -> T {
    let f = T::from_usize_exact;
    (1..=n).fold(T::lit(2.0), |b, k| b * f(2 * k) / f(2 * k + 1))
}

/// Leading Stieltjes term `(2/π) B(n+1, ½) cos((n+½)θ - π/4) / sqrt(2 sin θ)`.
///
/// Differs from `A(θ)` only through the coefficient, which here is exact
/// rather than its large-`n` limit; the gap is itself `O(n^{-3/2})`.
pub fn stieltjes_main_term<T: Real>(n: Degree, theta: T) -> Result<T> {
    check_interior(theta)?;
    let two = T::lit(2.0);
    Ok(two / T::PI() * beta_half::<T>(n.get()) * phase(n.get(), theta).cos()
        / (two * theta.sin()).sqrt())
}

/// Smallest distance from 0 and π accepted by [`stieltjes_remainder`].
pub const STIELTJES_MIN_EPSILON: f64 = 0.2;
const STIELTJES_INNER_POINTS: usize = 64;
const STIELTJES_OUTER_POINTS: usize = 20;
const STIELTJES_REL_TOL: f64 = 1e-9;
const STIELTJES_MAX_DEPTH: u32 = 40;

/// Reusable quadrature state for repeated remainder evaluations.
pub struct StieltjesQuadrature<T> {
    inner: GaussRule<T>,
    outer: GaussRule<T>,
}

impl<T: Real> StieltjesQuadrature<T> {
    pub fn new() -> Result<Self> {
        Ok(StieltjesQuadrature {
            inner: GaussRule::new(STIELTJES_INNER_POINTS)?,
            outer: GaussRule::new(STIELTJES_OUTER_POINTS)?,
        })
    }

    /// `(1/π) ∫_0^π z sin²φ / (1 - z sin²φ) dφ`.
    fn inner(&self, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        self.inner.integrate_complex(T::zero(), T::PI(), |phi| {
            let s2 = phi.sin().powi(2);
            z * s2 / (one - z * s2)
        }) / T::PI()
    }

    /// The double integral
    ///
    /// ```text
    /// (2/π) Im[ e^{i(n+1)θ} e^{i(π/4 - θ/2)} (2 sin θ)^{-1/2}
    ///           ∫_0^1 t^n (1-t)^{-1/2} (1/π) ∫_0^π z sin²φ/(1 - z sin²φ) dφ dt ]
    /// z = (1 - t) e^{i(θ - π/2)} / (2 sin θ)
    /// ```
    ///
    /// evaluated after `t = 1 - s²`, which turns `(1-t)^{-1/2} dt` into `2 ds`.
    pub fn remainder(&self, n: Degree, theta: T) -> Result<T> {
        let eps = T::lit(STIELTJES_MIN_EPSILON);
        if !(theta >= eps && theta <= T::PI() - eps) {
            return Err(Error::Domain(format!(
                "Stieltjes remainder needs θ in [{STIELTJES_MIN_EPSILON}, π - {STIELTJES_MIN_EPSILON}], got {theta}"
            )));
        }
        if n.get() < 2 {
            return Err(Error::Domain("Stieltjes remainder needs n >= 2".into()));
        }
        let two = T::lit(2.0);
        let sin = theta.sin();
        let rot = Complex::from_polar(T::one() / (two * sin), theta - T::FRAC_PI_2());
        let nn = n.get() as i32;
        let (integral, _) = adaptive_complex(
            &self.outer,
            T::zero(),
            T::one(),
            T::lit(STIELTJES_REL_TOL),
            STIELTJES_MAX_DEPTH,
            |s| {
                let weight = two * (T::one() - s * s).powi(nn);
                self.inner(rot * (s * s)) * weight
            },
        )?;
        let nf = T::from_usize_exact(n.get());
        let angle = (nf + T::one()) * theta + T::FRAC_PI_4() - theta / two;
        let prefactor = Complex::from_polar(T::one() / (two * sin).sqrt(), angle);
        Ok(two / T::PI() * (prefactor * integral).im)
    }
}

/// One-shot wrapper around [`StieltjesQuadrature::remainder`].
pub fn stieltjes_remainder<T: Real>(n: Degree, theta: T) -> Result<T> {
    StieltjesQuadrature::new()?.remainder(n, theta)
}

/// Stieltjes remainder set against the direct difference at one point.
#[derive(Clone, Debug, Serialize)]
pub struct StieltjesComparison<T> {
    pub n: usize,
    pub theta: T,
    /// Double-integral value.
    pub remainder: T,
    /// `P_n(cos θ) - A(θ)`.
    pub direct: T,
    /// `remainder / direct`.
    pub ratio: T,
    /// `S₀(θ) - A(θ)`: the difference between the two main terms.
    pub main_term_gap: T,
    /// `|remainder + main_term_gap - direct| / |direct|`.
    pub corrected_rel_error: T,
}

pub fn compare_stieltjes<T: Real>(
    quad: &StieltjesQuadrature<T>,
    n: Degree,
    theta: T,
) -> Result<StieltjesComparison<T>> {
    let remainder = quad.remainder(n, theta)?;
    let (p, _) = legendre_cos(n, theta);
    let a = laplace_main(n, theta)?;
    let direct = p - a;
    let gap = stieltjes_main_term(n, theta)? - a;
    Ok(StieltjesComparison {
        n: n.get(),
        theta,
        remainder,
        direct,
        ratio: remainder / direct,
        main_term_gap: gap,
        corrected_rel_error: (remainder + gap - direct).abs() / direct.abs(),
    })
}

/// Verdict over a set of comparisons.
#[derive(Clone, Debug, Serialize)]
pub struct StieltjesVerdict<T> {
    /// Every `|ratio - 1| <= 0.1`.
    pub agrees: bool,
    /// At least two points, every ratio within 10% of the mean ratio (and
    /// the mean nonzero).
    pub constant_ratio: bool,
    pub mean_ratio: T,
    pub min_ratio: T,
    pub max_ratio: T,
    /// Set when agreement fails but a stable constant ratio holds.
    pub convention_discrepancy: bool,
    /// Largest relative error once the main-term gap is added back.
    pub max_corrected_rel_error: T,
}

impl<T: Real> StieltjesVerdict<T> {
    pub fn passes(&self) -> bool {
        self.agrees || self.constant_ratio
    }
}

pub const STIELTJES_AGREEMENT: f64 = 0.1;

pub fn stieltjes_verdict<T: Real>(rows: &[StieltjesComparison<T>]) -> StieltjesVerdict<T> {
    let tol = T::lit(STIELTJES_AGREEMENT);
    let k = T::from_usize_exact(rows.len().max(1));
    let mean = rows.iter().map(|r| r.ratio).sum::<T>() / k;
    let agrees = !rows.is_empty() && rows.iter().all(|r| (r.ratio - T::one()).abs() <= tol);
    let constant_ratio = rows.len() >= 2
        && mean != T::zero()
        && rows.iter().all(|r| (r.ratio - mean).abs() <= tol * mean.abs());
    StieltjesVerdict {
        agrees,
        constant_ratio,
        mean_ratio: mean,
        min_ratio: rows.iter().map(|r| r.ratio).fold(T::infinity(), T::min),
        max_ratio: rows.iter().map(|r| r.ratio).fold(T::neg_infinity(), T::max),
        convention_discrepancy: !agrees && constant_ratio,
        max_corrected_rel_error: rows
            .iter()
            .map(|r| r.corrected_rel_error)
            .fold(T::zero(), T::max),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LaplaceSample<T> {
    pub theta: T,
    pub a: T,
    pub a_prime: T,
    pub e: T,
    pub e_prime: T,
    pub stieltjes_e: Option<T>,
}

/// Pointwise `A, A', E, E'` over `[ε, π - ε]`.
#[derive(Clone, Debug, Serialize)]
pub struct LaplaceProfile<T> {
    pub n: Degree,
    pub epsilon: T,
    pub samples: Vec<LaplaceSample<T>>,
}

/// `k` equispaced samples of `[ε, π - ε]`, endpoints included.
pub fn error_profile<T: Real>(n: Degree, epsilon: T, k: usize) -> Result<LaplaceProfile<T>> {
    if !(epsilon > T::zero() && epsilon < T::FRAC_PI_2()) {
        return Err(Error::Domain(format!("ε = {epsilon} must lie in (0, π/2)")));
    }
    if k < 2 {
        return Err(Error::Domain("profile needs at least 2 samples".into()));
    }
    let step = (T::PI() - epsilon - epsilon) / T::from_usize_exact(k - 1);
    let samples = (0..k)
        .map(|i| {
            let theta = if i == k - 1 {
                T::PI() - epsilon
            } else {
                epsilon + step * T::from_usize_exact(i)
            };
            let (p, dp) = legendre_cos(n, theta);
            let a = laplace_main(n, theta)?;
            let a_prime = laplace_main_deriv(n, theta)?;
            Ok(LaplaceSample {
                theta,
                a,
                a_prime,
                e: p - a,
                e_prime: dp - a_prime,
                stieltjes_e: None,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LaplaceProfile { n, epsilon, samples })
}

impl<T: Real> LaplaceProfile<T> {
    /// Fills `stieltjes_e` at every sample inside `[0.2, π - 0.2]`.
    pub fn attach_stieltjes(&mut self, quad: &StieltjesQuadrature<T>) -> Result<()> {
        let eps = T::lit(STIELTJES_MIN_EPSILON);
        if self.n.get() < 2 {
            return Ok(());
        }
        for s in &mut self.samples {
            if s.theta >= eps && s.theta <= T::PI() - eps {
                s.stieltjes_e = Some(quad.remainder(self.n, s.theta)?);
            }
        }
        Ok(())
    }

    fn max_by(&self, f: impl Fn(&LaplaceSample<T>) -> T) -> T {
        self.samples.iter().map(|s| f(s).abs()).fold(T::zero(), T::max)
    }

    pub fn max_abs_e(&self) -> T {
        self.max_by(|s| s.e)
    }

    pub fn max_abs_e_prime(&self) -> T {
        self.max_by(|s| s.e_prime)
    }

    pub fn max_abs_a_prime(&self) -> T {
        self.max_by(|s| s.a_prime)
    }

    /// CSV columns `theta, A, A_prime, E, E_prime, stieltjes_E`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["theta", "A", "A_prime", "E", "E_prime", "stieltjes_E"])?;
        for s in &self.samples {
            w.write_record([
                num(s.theta),
                num(s.a),
                num(s.a_prime),
                num(s.e),
                num(s.e_prime),
                s.stieltjes_e.map(num).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Slopes of `max|E|`, `max|E'|` and `max|A'|` against `n`.
#[derive(Clone, Debug, Serialize)]
pub struct OrderSweep<T> {
    pub profiles: Vec<LaplaceProfile<T>>,
    pub e_fit: RateFit<T>,
    pub e_prime_fit: RateFit<T>,
    pub a_prime_fit: RateFit<T>,
}

/// Runs [`error_profile`] on [`SUP_GRID_POINTS`] samples for each degree and
/// fits the three growth rates.
pub fn order_sweep<T: Real>(degrees: &[Degree], epsilon: T) -> Result<OrderSweep<T>> {
    let profiles: Vec<LaplaceProfile<T>> = degrees
        .par_iter()
        .map(|&n| error_profile(n, epsilon, SUP_GRID_POINTS))
        .collect::<Result<_>>()?;
    let collect = |f: &dyn Fn(&LaplaceProfile<T>) -> T| -> Vec<(usize, T)> {
        profiles.iter().map(|p| (p.n.get(), f(p))).collect()
    };
    let e_fit = fit_rate(&collect(&|p| p.max_abs_e()))?;
    let e_prime_fit = fit_rate(&collect(&|p| p.max_abs_e_prime()))?;
    let a_prime_fit = fit_rate(&collect(&|p| p.max_abs_a_prime()))?;
    Ok(OrderSweep {
        profiles,
        e_fit,
        e_prime_fit,
        a_prime_fit,
    })
}
