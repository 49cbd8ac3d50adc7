//! Gauss–Legendre rules and an adaptive integrator built on them.
//!
//! Nodes come from [`crate::roots::find_roots`], so the same Newton solver
//! that the bound checks exercise also drives every internal quadrature.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::legendre::Degree;
use crate::roots::find_roots;
use crate::scalar::Real;

/// `n`-point Gauss–Legendre rule on `[-1, 1]`: nodes ascending, weights.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let roots = find_roots::<T>(Degree::new(n)?)?;
    let two = T::lit(2.0);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // Increasing θ means decreasing x; walk backwards for ascending nodes.
    for (&theta, &dtheta) in roots.thetas.iter().zip(&roots.theta_derivs).rev() {
        nodes.push(theta.cos());
        // w = 2 / ((1 - x^2) P_n'(x)^2) = 2 / (d/dθ P_n(cos θ))^2
        weights.push(two / (dtheta * dtheta));
    }
    Ok((nodes, weights))
}

/// A Gauss–Legendre rule ready to be mapped onto arbitrary intervals.
#[derive(Clone, Debug)]
pub struct GaussRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    pub fn new(points: usize) -> Result<Self> {
        let (nodes, weights) = gauss_legendre(points)?;
        Ok(GaussRule { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F>(&self, a: T, b: T, f: F) -> T
    where
        F: Fn(T) -> T,
    {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F>(&self, a: T, b: T, f: F) -> Complex<T>
    where
        F: Fn(T) -> Complex<T>,
    {
        self.mapped(a, b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (x, w)| acc + f(x) * w)
    }
}

/// Adaptive bisection with a fixed Gauss rule per panel.
///
/// A panel is accepted when the rule on the panel and on its two halves
/// agree to `rel_tol · |I| · (panel length / total length)`, with `I` a
/// first-pass estimate of the whole integral. Returns the integral and the
/// summed panel deltas.
pub fn adaptive_complex<T, F>(
    rule: &GaussRule<T>,
    a: T,
    b: T,
    rel_tol: T,
    max_depth: u32,
    f: F,
) -> Result<(Complex<T>, T)>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let two = T::lit(2.0);
    let total_len = b - a;
    let coarse = rule.integrate_complex(a, b, &f);
    let mut scale = coarse.norm();
    if scale == T::zero() {
        scale = T::min_positive_value();
    }

    let mut acc = Complex::new(T::zero(), T::zero());
    let mut achieved = T::zero();
    let mut stack = vec![(a, b, coarse, 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = (lo + hi) / two;
        let left = rule.integrate_complex(lo, mid, &f);
        let right = rule.integrate_complex(mid, hi, &f);
        let delta = (left + right - whole).norm();
        let allowed = rel_tol * scale * (hi - lo) / total_len;
        if delta <= allowed {
            acc = acc + left + right;
            achieved += delta;
        } else if depth >= max_depth {
            return Err(Error::Quadrature {
                achieved: (delta / scale).to_f64_lossy(),
                wanted: rel_tol.to_f64_lossy(),
            });
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok((acc, achieved))
}
