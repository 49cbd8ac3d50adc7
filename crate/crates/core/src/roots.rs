//! Zeros `θ_1 < … < θ_n` of `P_n(cos θ)` and the classical bracket families
//! that locate them.
//!
//! Roots are found independently per index by Newton's method in `θ`,
//! started from `θ⁰_j = π(j - 1/4)/(n + 1/2)`. Each Newton run is confined to
//! the Bruns bracket `[π(j - 1/2)/(n + 1/2), πj/(n + 1/2)]`, which holds
//! exactly one zero; leaving it (or stalling) switches to bisection on the
//! bracket.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, num};
use crate::legendre::{eval_legendre, legendre_cos, Degree};
use crate::scalar::Real;

const MAX_NEWTON: u32 = 50;
const MAX_BISECTION: u32 = 400;

/// Increasing zeros of `P_n(cos θ)` with per-root diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct RootSet<T> {
    pub n: Degree,
    pub thetas: Vec<T>,
    /// `|P_n(cos θ_j)|` at the returned root.
    pub residuals: Vec<T>,
    pub newton_iters: Vec<u32>,
    /// Whether the bisection fallback produced root `j`.
    pub bisected: Vec<bool>,
    /// `d/dθ P_n(cos θ)` at each root; these give the Gauss weights.
    #[serde(skip)]
    pub theta_derivs: Vec<T>,
}

/// `θ⁰_j = π(j - 1/4)/(n + 1/2)`, `j = 1..=n`.
pub fn initial_guesses<T: Real>(n: Degree) -> Vec<T> {
    (1..=n.get()).map(|j| guess(n.get(), j)).collect()
}

#[inline]
pub(crate) fn guess<T: Real>(n: usize, j: usize) -> T {
    let f = T::from_usize_exact;
    T::PI() * (f(j) - T::lit(0.25)) / (f(n) + T::lit(0.5))
}

/// Bruns bracket for the `j`-th zero.
pub fn bruns_bracket<T: Real>(n: usize, j: usize) -> (T, T) {
    let f = T::from_usize_exact;
    let denom = f(n) + T::lit(0.5);
    (
        T::PI() * (f(j) - T::lit(0.5)) / denom,
        T::PI() * f(j) / denom,
    )
}

/// Local size of `P_n(cos θ)`: `sqrt(2 / (nπ sin θ))`.
pub fn laplace_amplitude<T: Real>(n: usize, theta: T) -> T {
    (T::lit(2.0) / (T::from_usize_exact(n) * T::PI() * theta.sin())).sqrt()
}

struct Root<T> {
    theta: T,
    iters: u32,
    bisected: bool,
}

fn newton_root<T: Real>(n: Degree, j: usize) -> Result<Root<T>> {
    let (lo, hi) = bruns_bracket::<T>(n.get(), j);
    let tol = T::epsilon() * T::lit(4.0);
    let mut theta = guess::<T>(n.get(), j);
    for iter in 1..=MAX_NEWTON {
        let (g, dg) = legendre_cos(n, theta);
        if dg == T::zero() {
            break;
        }
        let step = g / dg;
        theta -= step;
        if !(theta > lo && theta < hi) {
            break;
        }
        if step.abs() <= tol * theta.max(T::one()) {
            return Ok(Root {
                theta,
                iters: iter,
                bisected: false,
            });
        }
    }
    bisect_root(n, j, lo, hi)
}

fn bisect_root<T: Real>(n: Degree, j: usize, mut lo: T, mut hi: T) -> Result<Root<T>> {
    let g = |t: T| eval_legendre(n, t.cos());
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == T::zero() {
        return Ok(Root { theta: lo, iters: 0, bisected: true });
    }
    if g_hi == T::zero() {
        return Ok(Root { theta: hi, iters: 0, bisected: true });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::RootConvergence { n: n.get(), j });
    }
    let two = T::lit(2.0);
    let mut iters = 0;
    while hi - lo > T::epsilon() * two * hi {
        iters += 1;
        if iters > MAX_BISECTION {
            return Err(Error::RootConvergence { n: n.get(), j });
        }
        let mid = (lo + hi) / two;
        let g_mid = g(mid);
        if g_mid == T::zero() {
            return Ok(Root { theta: mid, iters, bisected: true });
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let mut theta = (lo + hi) / two;
    let (gv, dg) = legendre_cos(n, theta);
    if dg != T::zero() {
        let polished = theta - gv / dg;
        if polished >= lo && polished <= hi {
            theta = polished;
        }
    }
    Ok(Root { theta, iters, bisected: true })
}

/// All `n` zeros of `P_n(cos θ)` in increasing order.
pub fn find_roots<T: Real>(n: Degree) -> Result<RootSet<T>> {
    let found: Vec<Root<T>> = (1..=n.get())
        .into_par_iter()
        .map(|j| newton_root::<T>(n, j))
        .collect::<Result<_>>()?;

    let mut set = RootSet {
        n,
        thetas: Vec::with_capacity(n.get()),
        residuals: Vec::with_capacity(n.get()),
        newton_iters: Vec::with_capacity(n.get()),
        bisected: Vec::with_capacity(n.get()),
        theta_derivs: Vec::with_capacity(n.get()),
    };
    for r in found {
        let (g, dg) = legendre_cos(n, r.theta);
        set.thetas.push(r.theta);
        set.residuals.push(g.abs());
        set.newton_iters.push(r.iters);
        set.bisected.push(r.bisected);
        set.theta_derivs.push(dg);
    }
    set.check_structure()?;
    Ok(set)
}

impl<T: Real> RootSet<T> {
    pub fn degree(&self) -> usize {
        self.n.get()
    }

    /// `θ_j` with the 1-based index used throughout.
    pub fn theta(&self, j: usize) -> T {
        self.thetas[j - 1]
    }

    /// Count, ordering and range. Violations here are hard errors.
    fn check_structure(&self) -> Result<()> {
        let n = self.n.get();
        if self.thetas.len() != n {
            return Err(Error::Domain(format!("expected {n} roots, got {}", self.thetas.len())));
        }
        for (i, &t) in self.thetas.iter().enumerate() {
            if !(t > T::zero() && t < T::PI()) {
                return Err(Error::RootConvergence { n, j: i + 1 });
            }
            if i > 0 && t <= self.thetas[i - 1] {
                return Err(Error::RootConvergence { n, j: i + 1 });
            }
        }
        Ok(())
    }

    /// `max_j |θ_j + θ_{n+1-j} - π|`.
    pub fn mirror_defect(&self) -> T {
        let n = self.thetas.len();
        (0..n)
            .map(|i| (self.thetas[i] + self.thetas[n - 1 - i] - T::PI()).abs())
            .fold(T::zero(), T::max)
    }

    /// Largest residual relative to the local amplitude `sqrt(2/(nπ sin θ_j))`.
    pub fn max_relative_residual(&self) -> T {
        self.thetas
            .iter()
            .zip(&self.residuals)
            .map(|(&t, &r)| r / laplace_amplitude(self.n.get(), t))
            .fold(T::zero(), T::max)
    }

    /// Checks every structural invariant plus residuals against
    /// `residual_tol · amplitude` and mirror symmetry against `mirror_tol`.
    pub fn verify(&self, residual_tol: T, mirror_tol: T) -> Result<()> {
        self.check_structure()?;
        let rel = self.max_relative_residual();
        if rel > residual_tol {
            return Err(Error::Domain(format!("relative residual {rel} exceeds {residual_tol}")));
        }
        let mirror = self.mirror_defect();
        if mirror > mirror_tol {
            return Err(Error::Domain(format!("mirror defect {mirror} exceeds {mirror_tol}")));
        }
        Ok(())
    }

    /// CSV with columns `j, theta_j, residual, newton_iters`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["j", "theta_j", "residual", "newton_iters"])?;
        for (i, ((&t, &r), &it)) in self
            .thetas
            .iter()
            .zip(&self.residuals)
            .zip(&self.newton_iters)
            .enumerate()
        {
            w.write_record([(i + 1).to_string(), num(t), num(r), it.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Outcome of one bracket check for one root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Pass,
    Fail,
    /// Middle root of odd degree, pinned to `π/2` by parity. The one-sided
    /// families are stated for `j <= ⌊n/2⌋` and their mirror images, and the
    /// middle root lies exactly on both endpoints of each.
    Symmetry,
}

impl BoundStatus {
    pub fn ok(self) -> bool {
        !matches!(self, BoundStatus::Fail)
    }

    fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Pass => "pass",
            BoundStatus::Fail => "fail",
            BoundStatus::Symmetry => "symmetry",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFamily {
    Bruns,
    MarkoffStieltjes,
    Szego,
}

/// Bracket `[lo, hi]` that must contain `θ_j`, in the original coordinate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundFailure<T> {
    pub j: usize,
    pub theta: T,
    pub family: BoundFamily,
    pub bracket: Bracket<T>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow<T> {
    pub j: usize,
    pub theta: T,
    pub bruns: Bracket<T>,
    pub markoff_stieltjes: Option<Bracket<T>>,
    pub szego: Option<Bracket<T>>,
    pub bruns_ok: BoundStatus,
    pub markoff_stieltjes_ok: BoundStatus,
    pub szego_ok: BoundStatus,
    /// Smallest slack over the applicable brackets of this root.
    pub margin: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport<T> {
    pub n: Degree,
    pub rows: Vec<BoundRow<T>>,
    pub worst_margin: T,
    pub failures: Vec<BoundFailure<T>>,
}

impl<T: Real> BoundReport<T> {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.worst_margin > T::zero()
    }

    pub fn bruns_ok(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.bruns_ok.ok()).collect()
    }

    pub fn markoff_stieltjes_ok(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.markoff_stieltjes_ok.ok()).collect()
    }

    pub fn szego_ok(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.szego_ok.ok()).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record([
            "j", "theta_j", "bruns_lo", "bruns_hi", "bruns", "ms_lo", "ms_hi", "markoff_stieltjes",
            "szego_lo", "szego_hi", "szego", "margin",
        ])?;
        let opt = |b: Option<Bracket<T>>| match b {
            Some(b) => (num(b.lo), num(b.hi)),
            None => (String::new(), String::new()),
        };
        for r in &self.rows {
            let (ms_lo, ms_hi) = opt(r.markoff_stieltjes);
            let (sz_lo, sz_hi) = opt(r.szego);
            w.write_record([
                r.j.to_string(),
                num(r.theta),
                num(r.bruns.lo),
                num(r.bruns.hi),
                r.bruns_ok.as_str().to_string(),
                ms_lo,
                ms_hi,
                r.markoff_stieltjes_ok.as_str().to_string(),
                sz_lo,
                sz_hi,
                r.szego_ok.as_str().to_string(),
                num(r.margin),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn lower_half_brackets<T: Real>(n: usize, j: usize) -> (Bracket<T>, Bracket<T>) {
    let f = T::from_usize_exact;
    let (nn, jj) = (f(n), f(j));
    let ms = Bracket {
        lo: T::PI() * (jj - T::lit(0.5)) / nn,
        hi: T::PI() * jj / (nn + T::one()),
    };
    let sz = Bracket {
        lo: T::PI() * (jj - T::lit(0.25)) / (nn + T::lit(0.5)),
        hi: T::PI() * jj / (nn + T::one()),
    };
    (ms, sz)
}

fn slack<T: Real>(theta: T, b: Bracket<T>) -> T {
    (theta - b.lo).min(b.hi - theta)
}

/// Evaluates the Bruns, Markoff–Stieltjes and Szegő brackets for every root.
///
/// The latter two are stated for `j <= ⌊n/2⌋`; upper-half roots are checked
/// through `θ_{n+1-j} = π - θ_j`.
pub fn validate_bounds<T: Real>(roots: &RootSet<T>) -> BoundReport<T> {
    let n = roots.degree();
    let half = n / 2;
    let pi = T::PI();
    let mirror_tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
    let mut rows = Vec::with_capacity(n);
    let mut failures = Vec::new();
    let mut worst = T::infinity();

    for (i, &theta) in roots.thetas.iter().enumerate() {
        let j = i + 1;
        let (blo, bhi) = bruns_bracket::<T>(n, j);
        let bruns = Bracket { lo: blo, hi: bhi };
        let bruns_margin = slack(theta, bruns);
        let bruns_ok = if bruns_margin > T::zero() { BoundStatus::Pass } else { BoundStatus::Fail };
        if !bruns_ok.ok() {
            failures.push(BoundFailure { j, theta, family: BoundFamily::Bruns, bracket: bruns });
        }
        let mut margin = bruns_margin;

        let middle = n % 2 == 1 && j == half + 1;
        let (ms, sz, ms_ok, sz_ok) = if middle {
            let status = if (theta - pi / T::lit(2.0)).abs() <= mirror_tol {
                BoundStatus::Symmetry
            } else {
                BoundStatus::Fail
            };
            (None, None, status, status)
        } else {
            let (ms, sz) = if j <= half {
                lower_half_brackets::<T>(n, j)
            } else {
                let (ms, sz) = lower_half_brackets::<T>(n, n + 1 - j);
                let flip = |b: Bracket<T>| Bracket { lo: pi - b.hi, hi: pi - b.lo };
                (flip(ms), flip(sz))
            };
            let ms_margin = slack(theta, ms);
            let sz_margin = slack(theta, sz);
            margin = margin.min(ms_margin).min(sz_margin);
            let st = |m: T| if m > T::zero() { BoundStatus::Pass } else { BoundStatus::Fail };
            (Some(ms), Some(sz), st(ms_margin), st(sz_margin))
        };
        if ms_ok == BoundStatus::Fail {
            let bracket = ms.unwrap_or(Bracket { lo: pi / T::lit(2.0), hi: pi / T::lit(2.0) });
            failures.push(BoundFailure { j, theta, family: BoundFamily::MarkoffStieltjes, bracket });
        }
        if sz_ok == BoundStatus::Fail {
            let bracket = sz.unwrap_or(Bracket { lo: pi / T::lit(2.0), hi: pi / T::lit(2.0) });
            failures.push(BoundFailure { j, theta, family: BoundFamily::Szego, bracket });
        }
        worst = worst.min(margin);
        rows.push(BoundRow {
            j,
            theta,
            bruns,
            markoff_stieltjes: ms,
            szego: sz,
            bruns_ok,
            markoff_stieltjes_ok: ms_ok,
            szego_ok: sz_ok,
            margin,
        });
    }

    BoundReport {
        n: roots.n,
        rows,
        worst_margin: worst,
        failures,
    }
}

/// `Σ_j w_j` with Gauss–Legendre weights `w_j = 2/((1 - x_j^2) P_n'(x_j)^2)`.
/// Exact nodes give 2; the deviation measures root error.
pub fn gauss_weight_checksum<T: Real>(roots: &RootSet<T>) -> T {
    let two = T::lit(2.0);
    roots
        .thetas
        .iter()
        .map(|&t| {
            let (_, dg) = legendre_cos(roots.n, t);
            two / (dg * dg)
        })
        .sum()
}
