//! Positive and negative areas on the unit sphere for the product
//! eigenfunctions `P_n(cos θ)`, `P_n^m(cos θ) cos(mφ)`, `P_n^m(cos θ) sin(mφ)`.
//!
//! Zonal case: the zeros `z_j = cos θ_j` cut the sphere into bands, and the
//! band between the planes `z = a` and `z = b` has area `2π(b - a)`.
//!
//! For `m >= 1`, shifting `φ` by `π/m` negates the function, so the positive
//! and negative regions are congruent and have equal area. Each then covers
//! half the sphere; the reported quantity is the area ratio, which is one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, num};
use crate::fit::{fit_slope, RateFit};
use crate::legendre::{eval_assoc_legendre, AssocNorm, Degree};
use crate::quadrature::gauss_legendre;
use crate::roots::{find_roots, RootSet};
use crate::scalar::Real;

/// Gauss–Legendre nodes in `cos θ` for the `m >= 1` check.
pub const THETA_NODES: usize = 512;
/// `φ` nodes per unit of `4m`.
pub const PHI_NODES_PER_4M: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Azimuthal {
    None,
    Cosine,
    Sine,
}

impl Azimuthal {
    pub fn as_str(self) -> &'static str {
        match self {
            Azimuthal::None => "none",
            Azimuthal::Cosine => "cosine",
            Azimuthal::Sine => "sine",
        }
    }
}

impl std::str::FromStr for Azimuthal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Azimuthal::None),
            "cosine" | "cos" => Ok(Azimuthal::Cosine),
            "sine" | "sin" => Ok(Azimuthal::Sine),
            other => Err(Error::Domain(format!(
                "unknown azimuthal factor {other:?}; expected none, cosine or sine"
            ))),
        }
    }
}

/// One member of the product basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFunction {
    pub n: Degree,
    pub m: usize,
    pub azimuthal: Azimuthal,
}

impl BasisFunction {
    /// Requires `m <= n` and `azimuthal == None` exactly when `m == 0`.
    pub fn new(n: Degree, m: usize, azimuthal: Azimuthal) -> Result<Self> {
        if m > n.get() {
            return Err(Error::Domain(format!("order m = {m} exceeds degree n = {n}")));
        }
        if (m == 0) != (azimuthal == Azimuthal::None) {
            return Err(Error::Domain(format!(
                "m = {m} with azimuthal factor {}; zonal functions take none, m >= 1 takes cosine or sine",
                azimuthal.as_str()
            )));
        }
        Ok(BasisFunction { n, m, azimuthal })
    }

    pub fn zonal(n: Degree) -> Self {
        BasisFunction {
            n,
            m: 0,
            azimuthal: Azimuthal::None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreaMethod {
    BandSum,
    Quadrature,
    Analytic,
    /// Sign sampling at random points; used by the command-line tool.
    MonteCarlo,
}

impl AreaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AreaMethod::BandSum => "band-sum",
            AreaMethod::Quadrature => "quadrature",
            AreaMethod::Analytic => "analytic",
            AreaMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereSymmetryReport<T> {
    pub function: BasisFunction,
    pub vol_pos: T,
    pub vol_neg: T,
    pub ratio: T,
    pub method: AreaMethod,
    /// `max(ratio, 1/ratio)`.
    pub df_ratio_bound: T,
    /// Even zonal `n` only: `|vol_neg - 2π |Σ (-1)^j z_j||`.
    pub telescoping_gap: Option<T>,
}

impl<T: Real> SphereSymmetryReport<T> {
    pub fn from_volumes(function: BasisFunction, vol_pos: T, vol_neg: T, method: AreaMethod) -> Self {
        let ratio = vol_pos / vol_neg;
        SphereSymmetryReport {
            function,
            vol_pos,
            vol_neg,
            ratio,
            method,
            df_ratio_bound: ratio.max(ratio.recip()),
            telescoping_gap: None,
        }
    }

    /// `|vol_pos + vol_neg - 4π|`.
    pub fn area_defect(&self) -> T {
        (self.vol_pos + self.vol_neg - T::lit(4.0) * T::PI()).abs()
    }
}

/// Band areas of `P_n(cos θ)` from its zeros. Signs alternate from
/// `P_n(1) = 1` across the simple zeros, so nothing is evaluated near a zero.
pub fn zonal_band_areas<T: Real>(roots: &RootSet<T>) -> SphereSymmetryReport<T> {
    let two_pi = T::lit(2.0) * T::PI();
    // θ ascending means z descending: the top band [z_1, 1] is positive.
    let mut upper = T::one();
    let mut pos = T::zero();
    let mut neg = T::zero();
    let mut alt = T::zero();
    for (i, &theta) in roots.thetas.iter().enumerate() {
        let z = theta.cos();
        if i % 2 == 0 {
            pos += upper - z;
            alt -= z;
        } else {
            neg += upper - z;
            alt += z;
        }
        upper = z;
    }
    if roots.thetas.len().is_multiple_of(2) {
        pos += upper + T::one();
    } else {
        neg += upper + T::one();
    }
    let mut report = SphereSymmetryReport::from_volumes(
        BasisFunction::zonal(roots.n),
        two_pi * pos,
        two_pi * neg,
        AreaMethod::BandSum,
    );
    if roots.degree().is_multiple_of(2) {
        report.telescoping_gap = Some((report.vol_neg - two_pi * alt.abs()).abs());
    }
    report
}

/// Exact and quadrature areas for an `m >= 1` basis function.
#[derive(Clone, Debug, Serialize)]
pub struct AzimuthalReport<T> {
    pub analytic: SphereSymmetryReport<T>,
    pub quadrature: SphereSymmetryReport<T>,
}

/// Ratio `1` by the `φ ↦ φ + π/m` argument, together with a tensor-product
/// sign quadrature: [`THETA_NODES`] Gauss nodes in `cos θ` times `256m`
/// uniform `φ` nodes. The `φ` grid is offset by half a step so that no node
/// lands on a zero of `cos(mφ)` or `sin(mφ)`.
pub fn azimuthal_ratio<T: Real>(f: BasisFunction) -> Result<AzimuthalReport<T>> {
    if f.m == 0 {
        return Err(Error::Domain(
            "azimuthal_ratio needs m >= 1; use zonal_band_areas for m = 0".into(),
        ));
    }
    let two_pi = T::lit(2.0) * T::PI();
    let analytic =
        SphereSymmetryReport::from_volumes(f, two_pi, two_pi, AreaMethod::Analytic);

    let (xs, ws) = gauss_legendre::<T>(THETA_NODES)?;
    let phi_count = 4 * f.m * PHI_NODES_PER_4M;
    let dphi = two_pi / T::from_usize_exact(phi_count);
    let mf = T::from_usize_exact(f.m);
    let half = T::lit(0.5);
    let angular: Vec<T> = (0..phi_count)
        .map(|k| {
            let phi = (T::from_usize_exact(k) + half) * dphi;
            match f.azimuthal {
                Azimuthal::Sine => (mf * phi).sin(),
                _ => (mf * phi).cos(),
            }
        })
        .collect();

    let mut pos = T::zero();
    let mut neg = T::zero();
    for (&x, &w) in xs.iter().zip(&ws) {
        let radial = eval_assoc_legendre(f.n, f.m, x, AssocNorm::Orthonormal)?;
        for &a in &angular {
            let v = radial * a;
            let cell = w * dphi;
            if v > T::zero() {
                pos += cell;
            } else if v < T::zero() {
                neg += cell;
            } else {
                pos += cell * half;
                neg += cell * half;
            }
        }
    }
    let quadrature = SphereSymmetryReport::from_volumes(f, pos, neg, AreaMethod::Quadrature);
    Ok(AzimuthalReport {
        analytic,
        quadrature,
    })
}

/// How `|ratio - 1|` behaves across a sweep.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SymmetryTrend<T> {
    Fitted { fit: RateFit<T> },
    /// Every ratio is exactly one; nothing to fit on a log scale.
    ExactSymmetry,
    /// Fewer than two degrees with a nonzero deviation.
    TooFewDegrees,
}

/// Classifies `(n, |ratio - 1|)` pairs.
pub fn symmetry_trend<T: Real>(pairs: &[(usize, T)]) -> SymmetryTrend<T> {
    if pairs.iter().all(|p| p.1 == T::zero()) {
        return SymmetryTrend::ExactSymmetry;
    }
    let nonzero: Vec<(usize, T)> = pairs.iter().copied().filter(|p| p.1 > T::zero()).collect();
    match fit_slope(&nonzero) {
        Ok(fit) => SymmetryTrend::Fitted { fit },
        Err(_) => SymmetryTrend::TooFewDegrees,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetrySweep<T> {
    pub reports: Vec<SphereSymmetryReport<T>>,
    pub trend: SymmetryTrend<T>,
}

impl<T: Real> SymmetrySweep<T> {
    /// `(n, |ratio - 1|)` in degree order.
    pub fn deviations(&self) -> Vec<(usize, T)> {
        self.reports
            .iter()
            .map(|r| (r.function.n.get(), (r.ratio - T::one()).abs()))
            .collect()
    }

    /// Each deviation is at most `(1 + jitter)` times the previous one.
    pub fn nonincreasing_within(&self, jitter: T) -> bool {
        self.deviations()
            .windows(2)
            .all(|w| w[1].1 <= (T::one() + jitter) * w[0].1)
    }

    pub fn terminal_deviation(&self) -> Option<T> {
        self.deviations().last().map(|p| p.1)
    }
}

/// Band areas for even degrees, in parallel, with a rate fit of
/// `|ratio - 1|`. Odd degrees are rejected: their ratio is exactly one.
pub fn symmetry_sweep<T: Real>(degrees: &[Degree]) -> Result<SymmetrySweep<T>> {
    if let Some(n) = degrees.iter().find(|n| n.get() % 2 == 1) {
        return Err(Error::Domain(format!(
            "symmetry sweeps take even degrees; odd n = {n} is exactly symmetric"
        )));
    }
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let reports: Vec<SphereSymmetryReport<T>> = degrees
        .par_iter()
        .map(|&n| Ok(zonal_band_areas(&find_roots::<T>(n)?)))
        .collect::<Result<_>>()?;
    let mut sweep = SymmetrySweep {
        reports,
        trend: SymmetryTrend::ExactSymmetry,
    };
    sweep.trend = symmetry_trend(&sweep.deviations());
    Ok(sweep)
}

/// CSV: `n, m, azimuthal, vol_pos, vol_neg, ratio, method`.
pub fn write_reports_csv<T: Real, W: std::io::Write>(
    reports: &[SphereSymmetryReport<T>],
    out: W,
) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "m", "azimuthal", "vol_pos", "vol_neg", "ratio", "method"])?;
    for r in reports {
        w.write_record([
            r.function.n.to_string(),
            r.function.m.to_string(),
            r.function.azimuthal.as_str().to_string(),
            num(r.vol_pos),
            num(r.vol_neg),
            num(r.ratio),
            r.method.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn d(n: usize) -> Degree {
        Degree::new(n).unwrap()
    }

    fn zonal(n: usize) -> SphereSymmetryReport<f64> {
        zonal_band_areas(&find_roots::<f64>(d(n)).unwrap())
    }

    #[test]
    fn degree_two_closed_form() {
        let r = zonal(2);
        assert!((r.vol_neg - 2.0 * PI * 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((r.vol_neg - 7.2551975).abs() < 1e-7);
        assert!((r.vol_pos - (4.0 * PI - 4.0 * PI / 3f64.sqrt())).abs() < 1e-12);
        assert!((r.vol_pos - 5.3111732).abs() < 1e-7);
        assert!((r.ratio - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(r.telescoping_gap.unwrap() < 1e-12);
        assert!((r.df_ratio_bound - 1.0 / (3f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn degree_one_hemispheres() {
        let r = zonal(1);
        // cos of the rounded π/2 is 6e-17, not 0
        assert!((r.vol_pos - 2.0 * PI).abs() < 1e-14, "{r:?}");
        assert!((r.ratio - 1.0).abs() < 1e-15);
        assert!(r.telescoping_gap.is_none());
    }

    #[test]
    fn odd_degrees_are_exactly_symmetric() {
        for n in (1..=2001).step_by(50) {
            let r = zonal(n);
            assert!((r.ratio - 1.0).abs() <= 1e-12, "n={n}: {}", r.ratio);
        }
    }

    #[test]
    fn area_and_telescoping_invariants() {
        for n in [2, 3, 10, 51, 200, 999, 1000] {
            let r = zonal(n);
            assert!(r.area_defect() <= 1e-9);
            assert!(r.vol_pos > 0.0 && r.vol_neg > 0.0);
            if let Some(g) = r.telescoping_gap {
                assert!(g <= 1e-10, "n={n}: {g}");
            }
        }
    }

    #[test]
    fn degree_thousand_near_symmetric() {
        assert!((zonal(1000).ratio - 1.0).abs() <= 0.05);
    }

    #[test]
    fn basis_invariants() {
        assert!(BasisFunction::new(d(3), 0, Azimuthal::Cosine).is_err());
        assert!(BasisFunction::new(d(3), 2, Azimuthal::None).is_err());
        assert!(BasisFunction::new(d(3), 4, Azimuthal::Sine).is_err());
        assert!(BasisFunction::new(d(3), 3, Azimuthal::Sine).is_ok());
        assert!("tan".parse::<Azimuthal>().is_err());
        assert_eq!("sin".parse::<Azimuthal>().unwrap(), Azimuthal::Sine);
    }

    #[test]
    fn zonal_rejected_by_azimuthal() {
        let err = azimuthal_ratio::<f64>(BasisFunction::zonal(d(4))).unwrap_err();
        assert!(err.to_string().contains("zonal_band_areas"));
    }

    #[test]
    fn azimuthal_examples() {
        for (n, m, a) in [(1, 1, Azimuthal::Cosine), (5, 3, Azimuthal::Sine), (40, 40, Azimuthal::Cosine)] {
            let rep = azimuthal_ratio::<f64>(BasisFunction::new(d(n), m, a).unwrap()).unwrap();
            assert_eq!(rep.analytic.ratio, 1.0);
            assert!((rep.quadrature.ratio - 1.0).abs() <= 1e-3, "({n},{m}): {}", rep.quadrature.ratio);
            assert!(rep.quadrature.area_defect() <= 1e-9);
        }
    }

    #[test]
    fn trend_classification() {
        assert!(matches!(symmetry_trend(&[(2usize, 0.0f64), (4, 0.0)]), SymmetryTrend::ExactSymmetry));
        let single = symmetry_sweep::<f64>(&[d(2)]).unwrap();
        assert_eq!(single.reports.len(), 1);
        assert!((single.reports[0].ratio - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(matches!(single.trend, SymmetryTrend::TooFewDegrees));
        assert!(symmetry_sweep::<f64>(&[d(3)]).is_err());
    }

    #[test]
    fn sweep_decreases() {
        let degs: Vec<Degree> = [50, 100, 200, 400].iter().map(|&n| d(n)).collect();
        let s = symmetry_sweep::<f64>(&degs).unwrap();
        assert!(s.nonincreasing_within(0.2), "{:?}", s.deviations());
        assert!(matches!(s.trend, SymmetryTrend::Fitted { .. }));
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_reports_csv(&[zonal(2)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,m,azimuthal,vol_pos,vol_neg,ratio,method"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("2,0,none,5.31117") && row.ends_with(",band-sum"));
    }
}
