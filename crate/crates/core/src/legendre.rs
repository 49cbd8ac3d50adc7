//! Legendre polynomials `P_n` and associated Legendre functions `P_n^m`.
//!
//! Everything here is built on the upward three-term recurrence
//!
//! ```text
//! (k+1) P_{k+1}(x) = (2k+1) x P_k(x) - k P_{k-1}(x)
//! ```
//!
//! which is stable on `[-1, 1]` and on the thin complex neighbourhoods
//! `|Im z| = O(1/n)` used by the contour module, where `|cos z| <= 1 + O(1/n)`.
//!
//! The recurrence itself ([`legendre_recurrence`]) is generic over any ring
//! with small-integer conversion, so the same code evaluates `f32`, `f64`,
//! `Complex<f64>` and exact rationals.

use std::fmt;

use num_complex::Complex;
use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default upper bound on the polynomial degree.
pub const MAX_DEGREE: usize = 5000;

/// Polynomial degree `n`, validated to `1 <= n <= limit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Degree(usize);

impl Degree {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limit(n, MAX_DEGREE)
    }

    /// Like [`Degree::new`] with a caller-chosen cap.
    pub fn with_limit(n: usize, limit: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if n > limit {
            return Err(Error::Capacity { degree: n, limit });
        }
        Ok(Degree(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Degree {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Degree::new(n)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
fn small<S: FromPrimitive>(k: usize) -> S {
    S::from_usize(k).expect("small integer representable")
}

/// `P_n(x)` by upward recurrence. Accepts `n = 0` and performs no capacity
/// check; prefer [`eval_legendre`] at API boundaries.
pub fn legendre_recurrence<S>(n: usize, x: S) -> S
where
    S: Num + Clone + FromPrimitive,
{
    let mut prev = S::zero();
    let mut cur = S::one();
    for k in 0..n {
        let next = (small::<S>(2 * k + 1) * x.clone() * cur.clone() - small::<S>(k) * prev)
            / small::<S>(k + 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// `(P_n(1 - u), P_n'(1 - u))` carried as differences `D_k = P_k - P_{k-1}`:
///
/// ```text
/// D_{k+1} = (k D_k - (2k+1) u P_k) / (k+1)
/// ```
///
/// `u` enters with full relative precision, so values near `x = 1` do not
/// inherit the absolute rounding of `x` itself.
fn legendre_near_one<T: Real>(n: usize, u: T) -> (T, T) {
    let f = T::from_usize_exact;
    let x = T::one() - u;
    let mut p = T::one();
    let mut diff = T::zero();
    let mut dp = T::zero();
    for k in 0..n {
        let next_diff = (f(k) * diff - f(2 * k + 1) * u * p) / f(k + 1);
        dp = x * dp + f(k + 1) * p;
        diff = next_diff;
        p += diff;
    }
    (p, dp)
}

/// Returns `(P_n(x), P_n'(x))` using `P'_{k+1} = x P'_k + (k+1) P_k`.
///
/// The derivative recurrence has no `1/(1-x^2)` factor, so it is valid at
/// the endpoints and for complex `x`.
pub fn legendre_and_derivative<S>(n: usize, x: S) -> (S, S)
where
    S: Num + Clone + FromPrimitive,
{
    let mut prev = S::zero();
    let mut cur = S::one();
    let mut dcur = S::zero();
    for k in 0..n {
        let next = (small::<S>(2 * k + 1) * x.clone() * cur.clone() - small::<S>(k) * prev)
            / small::<S>(k + 1);
        dcur = x.clone() * dcur + small::<S>(k + 1) * cur.clone();
        prev = cur;
        cur = next;
    }
    (cur, dcur)
}

/// `P_n(x)` for any real, complex or rational scalar.
pub fn eval_legendre<S>(n: Degree, x: S) -> S
where
    S: Num + Clone + FromPrimitive,
{
    legendre_recurrence(n.get(), x)
}

/// `(P_n(cos θ), d/dθ P_n(cos θ))`.
///
/// For `θ` in `[0, π/2]` the recurrence runs on `u = 1 - cos θ = 2 sin²(θ/2)`;
/// above `π/2` it runs on `1 + cos θ = 2 cos²(θ/2)` and the result is
/// reflected with `P_n(-x) = (-1)^n P_n(x)`. Either way the small distance to
/// the nearer endpoint keeps full relative precision.
pub fn legendre_cos<T: Real>(n: Degree, theta: T) -> (T, T) {
    let two = T::lit(2.0);
    let half = theta / two;
    let s = theta.sin();
    if theta.cos() >= T::zero() {
        let u = two * half.sin().powi(2);
        let (p, dp) = legendre_near_one(n.get(), u);
        (p, -s * dp)
    } else {
        let v = two * half.cos().powi(2);
        let (p, dp) = legendre_near_one(n.get(), v);
        // P_n(x) = (-1)^n P_n(-x),  P_n'(x) = (-1)^{n+1} P_n'(-x)
        if n.get().is_multiple_of(2) {
            (p, s * dp)
        } else {
            (-p, -s * dp)
        }
    }
}

/// `d/dθ [P_n(cos θ)] = -sin θ · P_n'(cos θ)`, for any real `θ`.
pub fn eval_legendre_theta_deriv<T: Real>(n: Degree, theta: T) -> T {
    legendre_cos(n, theta).1
}

/// `(P_n(cos z), d/dz P_n(cos z))` for complex `z`.
pub fn legendre_cos_complex<T: Real>(n: Degree, z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let (p, dp) = legendre_and_derivative(n.get(), z.cos());
    (p, -z.sin() * dp)
}

/// Normalization of [`eval_assoc_legendre`].
///
/// Both variants carry the Condon–Shortley phase `(-1)^m`, so for example
/// `P_1^1(x) = -(1 - x^2)^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssocNorm {
    /// Classical `P_n^m`. Overflows `f64` somewhere past `n ≈ 150`.
    Unnormalized,
    /// `sqrt((2n+1)/(4π) · (n-m)!/(n+m)!) · P_n^m`, the θ-factor of the
    /// orthonormal spherical harmonics. Safe at any degree.
    Orthonormal,
}

impl AssocNorm {
    pub fn tag(self) -> &'static str {
        match self {
            AssocNorm::Unnormalized => "unnormalized-cs",
            AssocNorm::Orthonormal => "orthonormal-cs",
        }
    }
}

/// Associated Legendre function `P_n^m(x)` for `x` in `[-1, 1]`.
///
/// Seeds `P_m^m` by an `m`-fold product and recurs upward in degree.
pub fn eval_assoc_legendre<T: Real>(n: Degree, m: usize, x: T, norm: AssocNorm) -> Result<T> {
    let n = n.get();
    if m > n {
        return Err(Error::Domain(format!("order m = {m} exceeds degree n = {n}")));
    }
    if x.abs() > T::one() {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    if m == 0 && norm == AssocNorm::Unnormalized {
        return Ok(legendre_recurrence(n, x));
    }
    let s = ((T::one() - x) * (T::one() + x)).sqrt();
    let f = T::from_usize_exact;
    match norm {
        AssocNorm::Unnormalized => {
            let mut pmm = T::one();
            for i in 1..=m {
                pmm = -pmm * f(2 * i - 1) * s;
            }
            if n == m {
                return Ok(pmm);
            }
            let mut prev = pmm;
            let mut cur = x * f(2 * m + 1) * pmm;
            for k in (m + 1)..n {
                let next = (f(2 * k + 1) * x * cur - f(k + m) * prev) / f(k - m + 1);
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
        AssocNorm::Orthonormal => {
            let mut pmm = (T::one() / (f(4) * T::PI())).sqrt();
            for i in 1..=m {
                pmm = -pmm * (f(2 * i + 1) / f(2 * i)).sqrt() * s;
            }
            if n == m {
                return Ok(pmm);
            }
            let mut prev = pmm;
            let mut cur = x * f(2 * m + 3).sqrt() * pmm;
            for k in (m + 2)..=n {
                let kk = f(k);
                let mm = f(m);
                let a = ((f(4) * kk * kk - T::one()) / (kk * kk - mm * mm)).sqrt();
                let km1 = kk - T::one();
                let b = ((km1 * km1 - mm * mm) / (f(4) * km1 * km1 - T::one())).sqrt();
                let next = a * (x * cur - b * prev);
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn d(n: usize) -> Degree {
        Degree::new(n).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert!((eval_legendre(d(2), 0.5_f64) - (-0.125)).abs() < 1e-16);
        assert_eq!(eval_legendre(d(7), 1.0), 1.0);
        assert!((eval_legendre(d(3), 0.3_f64) - (-0.3825)).abs() < 1e-15);
    }

    #[test]
    fn capacity_and_zero_degree_rejected() {
        assert!(matches!(
            Degree::new(MAX_DEGREE + 1),
            Err(Error::Capacity { degree: 5001, limit: 5000 })
        ));
        assert!(Degree::new(0).is_err());
        assert!(Degree::with_limit(6000, 10_000).is_ok());
        assert!(Degree::with_limit(11, 10).is_err());
    }

    #[test]
    fn exact_rational_recurrence() {
        let half = BigRational::new(1.into(), 2.into());
        let p3 = legendre_recurrence(3, half);
        assert_eq!(p3, BigRational::new((-7).into(), 16.into()));
    }

    #[test]
    fn endpoints_are_exact() {
        for n in 1..=2000 {
            let p1 = eval_legendre(d(n), 1.0_f64);
            let pm1 = eval_legendre(d(n), -1.0_f64);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((p1 - 1.0).abs() <= 1e-13, "n={n}");
            assert!((pm1 - sign).abs() <= 1e-13, "n={n}");
        }
    }

    #[test]
    fn theta_derivative_closed_forms() {
        let q = std::f64::consts::FRAC_PI_4;
        assert!((eval_legendre_theta_deriv(d(2), q) + 1.5).abs() < 1e-14);
        let h = std::f64::consts::FRAC_PI_2;
        assert!((eval_legendre_theta_deriv(d(1), h) + 1.0).abs() < 1e-15);
    }

    fn fd_theta(n: usize, theta: f64, h: f64) -> f64 {
        let p = |t: f64| eval_legendre(d(n), t.cos());
        (p(theta + h) - p(theta - h)) / (2.0 * h)
    }

    #[test]
    fn theta_derivative_matches_finite_difference_n20() {
        let exact = eval_legendre_theta_deriv(d(20), 1.0);
        let fd = fd_theta(20, 1.0, 1e-6);
        assert!((exact - fd).abs() <= 1e-8 * exact.abs(), "{exact} vs {fd}");
    }

    #[test]
    fn theta_derivative_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=500);
            let theta = rng.gen_range(0.1..(std::f64::consts::PI - 0.1));
            let exact = eval_legendre_theta_deriv(d(n), theta);
            // Derivative envelope: n times the Laplace amplitude.
            let scale = (n as f64) * (2.0 / (n as f64 * std::f64::consts::PI * theta.sin())).sqrt();
            let fd = fd_theta(n, theta, 1e-6);
            assert!(
                (exact - fd).abs() <= 1e-7 * scale.max(exact.abs()),
                "n={n} θ={theta}: {exact} vs {fd}"
            );
        }
    }

    #[test]
    fn complex_input_on_real_axis_is_real() {
        for n in [1usize, 5, 50, 500] {
            for &x in &[-0.9_f64, -0.3, 0.0, 0.41, 0.99] {
                let re = eval_legendre(d(n), x);
                let z = eval_legendre(d(n), Complex::new(x, 0.0));
                assert!(z.im.abs() <= 1e-14 * re.abs().max(1e-3));
                assert!((z.re - re).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn complex_theta_derivative_matches_real() {
        let n = d(37);
        let (p, dp) = legendre_cos(n, 0.83_f64);
        let (pc, dpc) = legendre_cos_complex(n, Complex::new(0.83_f64, 0.0));
        assert!((pc.re - p).abs() < 1e-15 && (dpc.re - dp).abs() < 1e-13);
    }

    #[test]
    fn assoc_examples() {
        let p11 = eval_assoc_legendre(d(1), 1, 0.0_f64, AssocNorm::Unnormalized).unwrap();
        assert_eq!(p11, -1.0);
        let p33 = eval_assoc_legendre(d(3), 3, 0.5_f64, AssocNorm::Unnormalized).unwrap();
        // -15 (1 - x^2)^{3/2} at x = 1/2 equals -45 sqrt(3) / 8.
        assert!((p33 - (-45.0 * 3f64.sqrt() / 8.0)).abs() < 1e-13);
        let p50 = eval_assoc_legendre(d(5), 0, 0.7_f64, AssocNorm::Unnormalized).unwrap();
        assert_eq!(p50, eval_legendre(d(5), 0.7));
        assert!(eval_assoc_legendre(d(2), 3, 0.1_f64, AssocNorm::Unnormalized).is_err());
        assert!(eval_assoc_legendre(d(2), 1, 1.5_f64, AssocNorm::Orthonormal).is_err());
    }

    #[test]
    fn assoc_closed_form_low_degree() {
        // P_2^1 = -3x sqrt(1-x^2), P_3^2 = 15 x (1 - x^2)
        let x = 0.37_f64;
        let s = (1.0 - x * x).sqrt();
        let p21 = eval_assoc_legendre(d(2), 1, x, AssocNorm::Unnormalized).unwrap();
        assert!((p21 + 3.0 * x * s).abs() < 1e-15);
        let p32 = eval_assoc_legendre(d(3), 2, x, AssocNorm::Unnormalized).unwrap();
        assert!((p32 - 15.0 * x * (1.0 - x * x)).abs() < 1e-14);
    }

    fn factorial_ratio(n: usize, m: usize) -> f64 {
        // (n-m)!/(n+m)!
        ((n - m + 1)..=(n + m)).fold(1.0, |acc, k| acc / k as f64)
    }

    #[test]
    fn orthonormal_matches_scaled_unnormalized() {
        for (n, m) in [(1, 1), (4, 2), (10, 3), (25, 25), (60, 7)] {
            for &x in &[-0.8, -0.1, 0.33, 0.9] {
                let raw = eval_assoc_legendre(d(n), m, x, AssocNorm::Unnormalized).unwrap();
                let nrm = eval_assoc_legendre(d(n), m, x, AssocNorm::Orthonormal).unwrap();
                let k = ((2 * n + 1) as f64 / (4.0 * std::f64::consts::PI) * factorial_ratio(n, m))
                    .sqrt();
                assert!(
                    (nrm - k * raw).abs() <= 1e-11 * nrm.abs().max(1e-3),
                    "n={n} m={m} x={x}: {nrm} vs {}",
                    k * raw
                );
            }
        }
    }

    #[test]
    fn orthonormal_integrates_to_one_over_two_pi() {
        // ∫_{-1}^{1} (P̄_n^m)^2 dx = 1/(2π) for the θ-factor normalization.
        let (nodes, weights) = crate::quadrature::gauss_legendre::<f64>(200).unwrap();
        for (n, m) in [(3, 1), (40, 40), (90, 17)] {
            let s: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| {
                    w * eval_assoc_legendre(d(n), m, x, AssocNorm::Orthonormal).unwrap().powi(2)
                })
                .sum();
            assert!((s - 0.5 / std::f64::consts::PI).abs() < 1e-12, "n={n} m={m}: {s}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let v = eval_legendre(d(3), 0.3_f32);
        assert!((v + 0.3825).abs() < 1e-6);
        let dv = eval_legendre_theta_deriv(d(2), std::f32::consts::FRAC_PI_4);
        assert!((dv + 1.5).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn parity(n in 1usize..=200, x in -1.0f64..=1.0) {
            let p = eval_legendre(d(n), x);
            let q = eval_legendre(d(n), -x);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((q - sign * p).abs() <= 1e-12 * p.abs().max(1.0));
        }

        #[test]
        fn assoc_parity(n in 1usize..=80, m_frac in 0.0f64..=1.0, x in -1.0f64..=1.0) {
            let m = ((n as f64) * m_frac).floor() as usize;
            let p = eval_assoc_legendre(d(n), m, x, AssocNorm::Orthonormal).unwrap();
            let q = eval_assoc_legendre(d(n), m, -x, AssocNorm::Orthonormal).unwrap();
            let sign = if (n + m).is_multiple_of(2) { 1.0 } else { -1.0 };
            prop_assert!((q - sign * p).abs() <= 1e-12 * p.abs().max(1.0));
        }
    }
}
