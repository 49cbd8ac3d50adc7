//! Argument-principle check of the alternating root sum.
//!
//! For the roots `θ_j` of `P_n(cos θ)` inside an interval, the cycle made of
//! one small circle per root, traversed with orientation `(-1)^j`, satisfies
//!
//! ```text
//! (1/2πi) ∮ z · ∂_z P_n(cos z) / P_n(cos z) dz = Σ_{θ_j ∈ I} (-1)^j θ_j
//! ```
//!
//! This cycle has the same winding numbers around every zero as a braid
//! weaving between consecutive roots, so it computes the same integral.
//! Each circle is integrated with the trapezoidal rule, which converges
//! geometrically for periodic analytic integrands; doubling the node count
//! until two estimates agree gives the error control.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::alternating::Interval;
use crate::error::{Error, Result};
use crate::export::{csv_writer, num};
use crate::legendre::{legendre_cos_complex, Degree};
use crate::roots::{find_roots, guess, RootSet};
use crate::scalar::Real;

pub const INITIAL_QUAD_POINTS: usize = 16;
pub const MAX_QUAD_POINTS: usize = 1 << 16;
/// Agreement between successive doublings that ends refinement.
pub const QUAD_TOLERANCE: f64 = 1e-10;
/// Node count per circle for the α survey.
pub const ALPHA_POINTS: usize = 64;

/// Where circles are centred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterMode {
    /// On the computed root `θ_j`.
    RootCentered,
    /// On `θ⁰_j = π(j - 1/4)/(n + 1/2)`, the zero of the Laplace phase factor.
    GuessCentered,
}

/// `π / (2(2n+1))`: half the spacing of the `θ⁰_j`.
pub fn default_radius<T: Real>(n: usize) -> T {
    T::PI() / (T::lit(2.0) * T::from_usize_exact(2 * n + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct Circle<T> {
    /// Global root index.
    pub j: usize,
    pub center: T,
    /// The root this circle encloses.
    pub root: T,
    /// `+1` counterclockwise, `-1` clockwise.
    pub orientation: i8,
    /// Guess-centred build fell back to the root for this circle.
    pub failed_over: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContourSpec<T> {
    pub n: Degree,
    pub interval: Interval<T>,
    pub mode: CenterMode,
    pub radius: T,
    /// Starting node count per circle; a power of two.
    pub quad_points: usize,
    pub circles: Vec<Circle<T>>,
}

impl<T: Real> ContourSpec<T> {
    /// Same circles with every orientation flipped.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.circles {
            c.orientation = -c.orientation;
        }
        out
    }

    pub fn failovers(&self) -> usize {
        self.circles.iter().filter(|c| c.failed_over).count()
    }
}

/// One circle per root in `interval`, with the default radius.
pub fn build_contour<T: Real>(
    roots: &RootSet<T>,
    interval: Interval<T>,
    mode: CenterMode,
) -> Result<ContourSpec<T>> {
    build_contour_with_radius(roots, interval, mode, default_radius(roots.degree()))
}

/// Like [`build_contour`] with an explicit radius. Fails if circles overlap
/// or any circle does not enclose exactly its own root.
pub fn build_contour_with_radius<T: Real>(
    roots: &RootSet<T>,
    interval: Interval<T>,
    mode: CenterMode,
    radius: T,
) -> Result<ContourSpec<T>> {
    if radius.is_nan() || radius <= T::zero() {
        return Err(Error::Contour(format!("radius must be positive, got {radius}")));
    }
    let n = roots.degree();
    let (interval, _) = interval.avoiding_roots(roots);
    let mut circles = Vec::new();
    for j in interval.root_indices(roots) {
        let root = roots.theta(j);
        let (center, failed_over) = match mode {
            CenterMode::RootCentered => (root, false),
            CenterMode::GuessCentered => {
                let g = guess::<T>(n, j);
                if (root - g).abs() < radius {
                    (g, false)
                } else {
                    (root, true)
                }
            }
        };
        circles.push(Circle {
            j,
            center,
            root,
            orientation: if j % 2 == 0 { 1 } else { -1 },
            failed_over,
        });
    }

    for pair in circles.windows(2) {
        if pair[1].center - pair[0].center <= radius + radius {
            return Err(Error::Contour(format!(
                "circles around θ_{} and θ_{} overlap at radius {radius}",
                pair[0].j, pair[1].j
            )));
        }
    }
    for c in &circles {
        let inside = roots
            .thetas
            .iter()
            .filter(|&&t| (t - c.center).abs() < radius)
            .count();
        if inside != 1 || (c.root - c.center).abs() >= radius {
            return Err(Error::Contour(format!(
                "circle for θ_{} encloses {inside} roots",
                c.j
            )));
        }
    }

    Ok(ContourSpec {
        n: roots.n,
        interval,
        mode,
        radius,
        quad_points: INITIAL_QUAD_POINTS,
        circles,
    })
}

/// `|cos((n + ½) z - π/4)|`.
fn phase_factor<T: Real>(n: usize, z: Complex<T>) -> T {
    let k = T::from_usize_exact(n) + T::lit(0.5);
    (z * k - Complex::new(T::FRAC_PI_4(), T::zero())).cos().norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleResult<T> {
    pub j: usize,
    pub center: T,
    pub orientation: i8,
    /// Counterclockwise `(1/2πi) ∮ z g'/g dz`, before orientation.
    pub value: Complex<T>,
    /// Counterclockwise `(1/2πi) ∮ g'/g dz`: the number of enclosed zeros.
    pub pole_count: Complex<T>,
    pub quad_points: usize,
    pub alpha_local: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContourReport<T> {
    pub n: Degree,
    /// Oriented sum over all circles.
    pub integral_value: Complex<T>,
    pub imag_residual: T,
    /// `Σ (-1)^j θ_j` over the enclosed roots.
    pub root_sum: T,
    pub mismatch: T,
    /// Minimum of `|cos((n+½)z - π/4)|` over all quadrature nodes.
    pub alpha: T,
    /// `max |pole_count - 1|` over circles.
    pub pole_count_defect: T,
    pub circles: Vec<CircleResult<T>>,
}

impl<T: Real> ContourReport<T> {
    /// Both the real mismatch and the imaginary part are within `tol`.
    pub fn passes(&self, tol: T) -> bool {
        self.mismatch <= tol && self.imag_residual <= tol
    }

    /// Per-circle rows `j, center, orientation, value_re, value_im,
    /// quad_points, alpha_local`, then one `summary` row.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record([
            "j", "center", "orientation", "value_re", "value_im", "quad_points", "alpha_local",
        ])?;
        for c in &self.circles {
            w.write_record([
                c.j.to_string(),
                num(c.center),
                c.orientation.to_string(),
                num(c.value.re),
                num(c.value.im),
                c.quad_points.to_string(),
                num(c.alpha_local),
            ])?;
        }
        w.write_record([
            "summary".to_string(),
            num(self.root_sum),
            String::new(),
            num(self.integral_value.re),
            num(self.integral_value.im),
            self.circles.iter().map(|c| c.quad_points).max().unwrap_or(0).to_string(),
            num(self.alpha),
        ])?;
        w.flush()?;
        Ok(())
    }
}

struct Sums<T> {
    moment: Complex<T>,
    count: Complex<T>,
    alpha: T,
}

/// Unnormalised trapezoid sums over nodes `k = start, start+step, …` of an
/// `points`-node grid on the circle.
fn circle_sums<T: Real>(
    n: Degree,
    center: T,
    radius: T,
    points: usize,
    start: usize,
    step: usize,
) -> Sums<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = Sums {
        moment: zero,
        count: zero,
        alpha: T::infinity(),
    };
    let c = Complex::new(center, T::zero());
    let tau = T::lit(2.0) * T::PI();
    let mut k = start;
    while k < points {
        let psi = tau * T::from_usize_exact(k) / T::from_usize_exact(points);
        let offset = Complex::from_polar(radius, psi);
        let z = c + offset;
        let (g, dg) = legendre_cos_complex(n, z);
        let log_deriv = dg / g;
        out.count += log_deriv * offset;
        out.moment += z * log_deriv * offset;
        out.alpha = out.alpha.min(phase_factor(n.get(), z));
        k += step;
    }
    out
}

fn integrate_circle<T: Real>(
    n: Degree,
    circle: &Circle<T>,
    radius: T,
    initial_points: usize,
) -> Result<CircleResult<T>> {
    let tol = T::lit(QUAD_TOLERANCE);
    let mut points = initial_points.max(4).next_power_of_two();
    let s = circle_sums(n, circle.center, radius, points, 0, 1);
    let (mut moment, mut count, mut alpha) = (s.moment, s.count, s.alpha);
    let mut estimate = moment / T::from_usize_exact(points);
    loop {
        if points >= MAX_QUAD_POINTS {
            return Err(Error::ContourConvergence {
                points,
                delta: f64::NAN,
            });
        }
        // Doubling: old nodes are the even ones of the finer grid.
        let fine = points * 2;
        let s = circle_sums(n, circle.center, radius, fine, 1, 2);
        moment += s.moment;
        count += s.count;
        alpha = alpha.min(s.alpha);
        let refined = moment / T::from_usize_exact(fine);
        let delta = (refined - estimate).norm();
        points = fine;
        estimate = refined;
        if delta <= tol {
            break;
        }
        if points >= MAX_QUAD_POINTS {
            return Err(Error::ContourConvergence {
                points,
                delta: delta.to_f64_lossy(),
            });
        }
    }
    Ok(CircleResult {
        j: circle.j,
        center: circle.center,
        orientation: circle.orientation,
        value: estimate,
        pole_count: count / T::from_usize_exact(points),
        quad_points: points,
        alpha_local: alpha,
    })
}

/// Integrates every circle (concurrently) and assembles the oriented total.
pub fn integrate_contour<T: Real>(spec: &ContourSpec<T>) -> Result<ContourReport<T>> {
    let circles: Vec<CircleResult<T>> = spec
        .circles
        .par_iter()
        .map(|c| integrate_circle(spec.n, c, spec.radius, spec.quad_points))
        .collect::<Result<_>>()?;

    let zero = Complex::new(T::zero(), T::zero());
    let mut total = zero;
    let mut alpha = T::infinity();
    let mut defect = T::zero();
    for c in &circles {
        let sign = T::from_i8(c.orientation).expect("±1");
        total += c.value * sign;
        alpha = alpha.min(c.alpha_local);
        defect = defect.max((c.pole_count - Complex::new(T::one(), T::zero())).norm());
    }
    let root_sum: T = spec
        .circles
        .iter()
        .map(|c| T::from_i8(c.orientation).expect("±1") * c.root)
        .sum();
    Ok(ContourReport {
        n: spec.n,
        integral_value: total,
        imag_residual: total.im.abs(),
        root_sum,
        mismatch: (total.re - root_sum).abs(),
        alpha,
        pole_count_defect: defect,
        circles,
    })
}

/// Minimum of `|cos((n+½)z - π/4)|` over [`ALPHA_POINTS`] nodes of every
/// guess-centred circle in `interval`, per degree.
pub fn alpha_floor_sweep<T: Real>(degrees: &[Degree], interval: Interval<T>) -> Result<Vec<(usize, T)>> {
    degrees
        .par_iter()
        .map(|&n| {
            let roots = find_roots::<T>(n)?;
            let spec = build_contour(&roots, interval, CenterMode::GuessCentered)?;
            let alpha = spec
                .circles
                .iter()
                .map(|c| circle_sums(n, c.center, spec.radius, ALPHA_POINTS, 0, 1).alpha)
                .fold(T::infinity(), T::min);
            Ok((n.get(), alpha))
        })
        .collect()
}
