//! Alternating root sums `Σ_{θ_j ∈ I} (-1)^j f(θ_j)` and their grid
//! counterparts over `θ⁰_j = (2πj - π/2)/(2n+1)`.
//!
//! The sign always uses the *global* index `j` of the root in the full
//! increasing enumeration, never a position inside `I`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, num};
use crate::fit::{fit_rate, RateFit};
use crate::legendre::Degree;
use crate::roots::{find_roots, RootSet};
use crate::scalar::Real;

/// Distance below which an endpoint counts as sitting on a root.
pub const ENDPOINT_ROOT_TOL: f64 = 1e-9;
/// Outward shift applied to such an endpoint.
pub const ENDPOINT_NUDGE: f64 = 1e-8;

/// Closed interval `[a, b]` with `0 < a < b < π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a > T::zero() && a < b && b < T::PI()) {
            return Err(Error::Domain(format!("interval [{a}, {b}] must satisfy 0 < a < b < π")));
        }
        Ok(Interval { a, b })
    }

    /// `[margin, π - margin]`.
    pub fn symmetric(margin: T) -> Result<Self> {
        Self::new(margin, T::PI() - margin)
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    pub fn contains(&self, theta: T) -> bool {
        theta >= self.a && theta <= self.b
    }

    /// Moves any endpoint lying within [`ENDPOINT_ROOT_TOL`] of a root outward
    /// by [`ENDPOINT_NUDGE`]. Returns the adjusted interval and whether it moved.
    pub fn avoiding_roots(&self, roots: &RootSet<T>) -> (Self, bool) {
        let tol = T::lit(ENDPOINT_ROOT_TOL);
        let nudge = T::lit(ENDPOINT_NUDGE);
        let near = |x: T| roots.thetas.iter().any(|&t| (t - x).abs() <= tol);
        let mut out = *self;
        let mut moved = false;
        if near(out.a) {
            out.a = (out.a - nudge).max(T::min_positive_value());
            moved = true;
        }
        if near(out.b) {
            out.b = (out.b + nudge).min(T::PI() - T::epsilon());
            moved = true;
        }
        (out, moved)
    }

    /// Global indices `j` (1-based) of the roots inside the interval.
    pub fn root_indices(&self, roots: &RootSet<T>) -> std::ops::Range<usize> {
        let lo = roots.thetas.partition_point(|&t| t < self.a);
        let hi = roots.thetas.partition_point(|&t| t <= self.b);
        (lo + 1)..(hi + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(count: usize) -> Self {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Built-in test functions, each analytic in a neighbourhood of `[0, π]`
/// with sup norm at most 1 there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    /// `f ≡ 1`
    One,
    /// `f(θ) = θ`; the only choice for which the length comparison applies.
    Identity,
    Cos,
    Sin,
    /// `f(θ) = exp(θ - π)`
    ScaledExp,
    /// `f(θ) = 4θ(π - θ)/π²`
    Polynomial,
}

impl TestFunction {
    pub const ALL: [TestFunction; 6] = [
        TestFunction::One,
        TestFunction::Identity,
        TestFunction::Cos,
        TestFunction::Sin,
        TestFunction::ScaledExp,
        TestFunction::Polynomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::Identity => "identity",
            TestFunction::Cos => "cos",
            TestFunction::Sin => "sin",
            TestFunction::ScaledExp => "exp",
            TestFunction::Polynomial => "poly",
        }
    }

    pub fn eval<T: Real>(self, theta: T) -> T {
        match self {
            TestFunction::One => T::one(),
            TestFunction::Identity => theta,
            TestFunction::Cos => theta.cos(),
            TestFunction::Sin => theta.sin(),
            TestFunction::ScaledExp => (theta - T::PI()).exp(),
            TestFunction::Polynomial => T::lit(4.0) * theta * (T::PI() - theta) / (T::PI() * T::PI()),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TestFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `θ⁰_j` written as the grid node `(2πj - π/2)/(2n+1)`.
pub fn grid_node<T: Real>(n: usize, j: usize) -> T {
    let f = T::from_usize_exact;
    (T::lit(2.0) * T::PI() * f(j) - T::FRAC_PI_2()) / f(2 * n + 1)
}

#[inline]
fn alternating_sign<T: Real>(j: usize) -> T {
    if j.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AltSumReport<T> {
    pub n: Degree,
    /// Interval actually used (after any endpoint nudge).
    pub interval: Interval<T>,
    pub nudged: bool,
    pub function: TestFunction,
    /// Global index of the first enclosed root, if any.
    pub first_index: Option<usize>,
    pub root_count: usize,
    pub parity: Parity,
    /// `Σ (-1)^j f(θ_j)` over enclosed roots.
    pub sum: T,
    /// `| |sum| - length/2 |`, only for the identity with an even count.
    pub half_length_deviation: Option<T>,
    /// `Σ (-1)^j f(θ⁰_j)` over the same indices.
    pub grid_sum: T,
    pub grid_deviation: T,
}

/// [`alt_f_sum`] with `f(θ) = θ`.
pub fn alt_theta_sum<T: Real>(roots: &RootSet<T>, interval: Interval<T>) -> AltSumReport<T> {
    alt_f_sum(roots, interval, TestFunction::Identity)
}

/// Alternating sum of `f` over the roots in `interval` and over the matching
/// grid nodes.
pub fn alt_f_sum<T: Real>(
    roots: &RootSet<T>,
    interval: Interval<T>,
    f: TestFunction,
) -> AltSumReport<T> {
    let (interval, nudged) = interval.avoiding_roots(roots);
    let n = roots.degree();
    let indices = interval.root_indices(roots);
    let root_count = indices.len();
    let mut sum = T::zero();
    let mut grid_sum = T::zero();
    for j in indices.clone() {
        let sign = alternating_sign::<T>(j);
        sum += sign * f.eval(roots.theta(j));
        grid_sum += sign * f.eval(grid_node::<T>(n, j));
    }
    let parity = Parity::of(root_count);
    let half_length_deviation = (f == TestFunction::Identity && parity == Parity::Even)
        .then(|| (sum.abs() - interval.length() / T::lit(2.0)).abs());
    AltSumReport {
        n: roots.n,
        interval,
        nudged,
        function: f,
        first_index: (root_count > 0).then_some(indices.start),
        root_count,
        parity,
        sum,
        half_length_deviation,
        grid_sum,
        grid_deviation: (sum - grid_sum).abs(),
    }
}

/// `Σ_{j=1}^{n} (-1)^j cos((2πj - π/2)/(2n+1))`.
///
/// Tends to `-1` along even `n`. For odd `n` the nodes pair as
/// `θ⁰_j + θ⁰_{n+1-j} = π` with equal signs, so the sum is exactly zero.
pub fn riemann_grid_sum<T: Real>(n: Degree) -> T {
    let n = n.get();
    (1..=n)
        .map(|j| alternating_sign::<T>(j) * grid_node::<T>(n, j).cos())
        .sum()
}

/// Finds roots for every degree (in parallel) and reports the alternating sum.
pub fn alt_sum_sweep<T: Real>(
    degrees: &[Degree],
    interval: Interval<T>,
    f: TestFunction,
) -> Result<Vec<AltSumReport<T>>> {
    degrees
        .par_iter()
        .map(|&n| Ok(alt_f_sum(&find_roots::<T>(n)?, interval, f)))
        .collect()
}

/// `(n, half_length_deviation)` over even-parity reports.
pub fn half_length_pairs<T: Real>(reports: &[AltSumReport<T>]) -> Vec<(usize, T)> {
    reports
        .iter()
        .filter_map(|r| r.half_length_deviation.map(|d| (r.n.get(), d)))
        .collect()
}

/// `(n, grid_deviation)` for every report.
pub fn grid_pairs<T: Real>(reports: &[AltSumReport<T>]) -> Vec<(usize, T)> {
    reports.iter().map(|r| (r.n.get(), r.grid_deviation)).collect()
}

/// Rate of `half_length_deviation`; odd-parity degrees are left out.
pub fn half_length_rate<T: Real>(reports: &[AltSumReport<T>]) -> Result<RateFit<T>> {
    fit_rate(&half_length_pairs(reports))
}

pub fn grid_rate<T: Real>(reports: &[AltSumReport<T>]) -> Result<RateFit<T>> {
    fit_rate(&grid_pairs(reports))
}

/// CSV: `n, a, b, root_count, parity, sum, half_length_deviation, grid_sum,
/// grid_deviation`, one row per report.
pub fn write_sweep_csv<T: Real, W: std::io::Write>(reports: &[AltSumReport<T>], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record([
        "n", "a", "b", "root_count", "parity", "sum", "half_length_deviation", "grid_sum",
        "grid_deviation",
    ])?;
    for r in reports {
        w.write_record([
            r.n.to_string(),
            num(r.interval.a),
            num(r.interval.b),
            r.root_count.to_string(),
            r.parity.as_str().to_string(),
            num(r.sum),
            r.half_length_deviation.map(num).unwrap_or_default(),
            num(r.grid_sum),
            num(r.grid_deviation),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::initial_guesses;
    use std::f64::consts::PI;

    fn d(n: usize) -> Degree {
        Degree::new(n).unwrap()
    }

    fn roots(n: usize) -> RootSet<f64> {
        find_roots(d(n)).unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0).is_err());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(1.0, PI).is_err());
        assert!((Interval::new(0.5_f64, 2.5).unwrap().length() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degree_two_closed_form() {
        let rep = alt_theta_sum(&roots(2), Interval::new(0.5, 2.5).unwrap());
        let t1 = (1.0 / 3f64.sqrt()).acos();
        let t2 = (-1.0 / 3f64.sqrt()).acos();
        assert_eq!(rep.root_count, 2);
        assert_eq!(rep.parity, Parity::Even);
        assert!((rep.sum - (t2 - t1)).abs() < 1e-15);
        assert!((rep.sum - 1.2309594).abs() < 1e-7);
        assert!((rep.half_length_deviation.unwrap() - 0.2309594).abs() < 1e-7);
    }

    #[test]
    fn empty_interval() {
        let r = roots(10);
        // Gap strictly between θ_3 and θ_4.
        let a = r.theta(3) + 1e-3;
        let b = r.theta(4) - 1e-3;
        let rep = alt_theta_sum(&r, Interval::new(a, b).unwrap());
        assert_eq!(rep.root_count, 0);
        assert_eq!(rep.first_index, None);
        assert_eq!(rep.sum, 0.0);
        assert_eq!(rep.parity, Parity::Even);
        assert!((rep.half_length_deviation.unwrap() - (b - a) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn constant_function_cancels_pairwise() {
        let r = roots(60);
        for (a, b) in [(0.3, 1.2), (0.5, 2.9), (1.0, 2.0)] {
            let rep = alt_f_sum(&r, Interval::new(a, b).unwrap(), TestFunction::One);
            if rep.parity == Parity::Even {
                assert_eq!(rep.sum, 0.0);
                assert_eq!(rep.grid_sum, 0.0);
            } else {
                assert_eq!(rep.sum.abs(), 1.0);
            }
            assert!(rep.half_length_deviation.is_none());
        }
    }

    #[test]
    fn identity_matches_theta_sum() {
        let r = roots(123);
        let i = Interval::new(0.4, 2.2).unwrap();
        let a = alt_theta_sum(&r, i);
        let b = alt_f_sum(&r, i, TestFunction::Identity);
        assert_eq!(a.sum, b.sum);
        assert_eq!(a.grid_sum, b.grid_sum);
    }

    #[test]
    fn grid_nodes_equal_guesses() {
        for n in [1usize, 2, 7, 50, 800, 3200] {
            for (j, g) in initial_guesses::<f64>(d(n)).iter().enumerate() {
                assert!((grid_node::<f64>(n, j + 1) - g).abs() <= 1e-15, "n={n} j={}", j + 1);
            }
        }
    }

    #[test]
    fn odd_degree_cos_sum_vanishes() {
        for n in [1usize, 3, 11, 101, 999] {
            let rep = alt_f_sum(&roots(n), Interval::symmetric(1e-6).unwrap(), TestFunction::Cos);
            assert_eq!(rep.root_count, n);
            assert!(rep.sum.abs() <= 1e-12, "n={n}: {}", rep.sum);
        }
    }

    #[test]
    fn local_indexing_flips_sign_when_first_global_index_is_even() {
        let r = roots(200);
        let rep = alt_theta_sum(&r, Interval::new(0.3, 1.2).unwrap());
        let first = rep.first_index.unwrap();
        let local: f64 = r.thetas[first - 1..first - 1 + rep.root_count]
            .iter()
            .enumerate()
            .map(|(i, t)| if (i + 1) % 2 == 0 { *t } else { -*t })
            .sum();
        if first.is_multiple_of(2) {
            assert!((local + rep.sum).abs() < 1e-12);
        } else {
            assert!((local - rep.sum).abs() < 1e-12);
        }
        // Make sure both branches get exercised somewhere.
        let shifted = alt_theta_sum(&r, Interval::new(r.theta(first + 1) - 1e-4, 1.2).unwrap());
        assert_ne!(shifted.first_index.unwrap() % 2, first % 2);
    }

    #[test]
    fn endpoint_on_root_is_nudged() {
        let r = roots(30);
        let a = r.theta(5);
        let rep = alt_theta_sum(&r, Interval::new(a, 2.0).unwrap());
        assert!(rep.nudged);
        assert!((rep.interval.a - (a - ENDPOINT_NUDGE)).abs() < 1e-15);
        assert_eq!(rep.first_index, Some(5));
    }

    #[test]
    fn riemann_sum_values() {
        assert!(riemann_grid_sum::<f64>(d(1)).abs() < 1e-16);
        let v2 = riemann_grid_sum::<f64>(d(2));
        assert!((v2 + 2.0 * (0.3 * PI).cos()).abs() < 1e-15);
        assert!((v2 + 1.1755705).abs() < 1e-7);
        for n in [10usize, 36, 100, 1000, 5000] {
            assert!((riemann_grid_sum::<f64>(d(n)) + 1.0).abs() <= 3.0 / n as f64);
        }
        for n in [3usize, 37, 1001] {
            assert!(riemann_grid_sum::<f64>(d(n)).abs() < 1e-13);
        }
    }

    #[test]
    fn unknown_function_name() {
        assert!(matches!("tan".parse::<TestFunction>(), Err(Error::UnknownFunction(_))));
        for f in TestFunction::ALL {
            assert_eq!(f.name().parse::<TestFunction>().unwrap(), f);
            for t in [0.0_f64, 1.0, PI] {
                assert!(f.eval(t).abs() <= PI);
            }
        }
    }

    #[test]
    fn half_length_rate_on_dense_degrees() {
        // Four degrees per octave from 50 to 3200; odd-parity ones drop out.
        let degrees: Vec<Degree> = (0..=24)
            .map(|k| d((50.0 * 2f64.powf(k as f64 / 4.0)).round() as usize))
            .collect();
        let i = Interval::new(0.3, 1.2).unwrap();
        let reps = alt_sum_sweep(&degrees, i, TestFunction::Identity).unwrap();
        let fit = half_length_rate(&reps).unwrap();
        assert!(fit.pairs.len() >= 4);
        assert!(
            (-1.4..=-0.6).contains(&fit.slope),
            "slope {} over {:?}",
            fit.slope,
            fit.pairs
        );
    }

    #[test]
    fn cos_grid_deviation_bounded_by_c_over_n() {
        let i = Interval::new(0.3, 2.8).unwrap();
        let rep = alt_f_sum(&roots(800), i, TestFunction::Cos);
        assert!(rep.grid_deviation <= 1.0 / 800.0);
    }

    #[test]
    fn sweep_csv() {
        let reps = alt_sum_sweep(&[d(2), d(3)], Interval::new(0.5, 2.5).unwrap(), TestFunction::Identity)
            .unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&reps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("2,0.5,2.5,2,even,1.23095"));
        assert!(lines[2].contains(",odd,") && lines[2].contains(",,"));
    }
}
