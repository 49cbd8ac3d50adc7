//! Log-log least squares for turning `O(n^p)` claims into measured slopes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, num};
use crate::scalar::Real;

/// Minimum number of distinct degrees accepted by [`fit_rate`].
pub const MIN_RATE_POINTS: usize = 4;

/// Straight-line fit of `log(error)` against `log(n)`.
#[derive(Clone, Debug, Serialize)]
pub struct RateFit<T> {
    pub pairs: Vec<(usize, T)>,
    pub slope: T,
    pub intercept: T,
    /// Root-mean-square residual in log space.
    pub residual: T,
}

/// Fits `error ≈ exp(intercept) · n^slope` over at least four distinct degrees.
pub fn fit_rate<T: Real>(pairs: &[(usize, T)]) -> Result<RateFit<T>> {
    fit_with_minimum(pairs, MIN_RATE_POINTS)
}

/// Same fit with only two distinct degrees required. For sweeps whose
/// admissible degree set is fixed in advance and may be short.
pub fn fit_slope<T: Real>(pairs: &[(usize, T)]) -> Result<RateFit<T>> {
    fit_with_minimum(pairs, 2)
}

fn fit_with_minimum<T: Real>(pairs: &[(usize, T)], minimum: usize) -> Result<RateFit<T>> {
    if let Some(&(n, e)) = pairs.iter().find(|(n, e)| *n == 0 || e.is_nan() || *e <= T::zero()) {
        return Err(Error::Domain(format!(
            "rate fit needs positive n and error, got ({n}, {e})"
        )));
    }
    let mut distinct: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < minimum {
        return Err(Error::Domain(format!(
            "rate fit needs at least {minimum} distinct degrees, got {}",
            distinct.len()
        )));
    }

    let k = T::from_usize_exact(pairs.len());
    let pts: Vec<(T, T)> = pairs
        .iter()
        .map(|&(n, e)| (T::from_usize_exact(n).ln(), e.ln()))
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<T>() / k;
    let my = pts.iter().map(|p| p.1).sum::<T>() / k;
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: T = pts
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(RateFit {
        pairs: pairs.to_vec(),
        slope,
        intercept,
        residual: (ss / k).sqrt(),
    })
}

impl<T: Real> RateFit<T> {
    /// `exp(intercept) · n^slope`.
    pub fn predict(&self, n: usize) -> T {
        (self.intercept + self.slope * T::from_usize_exact(n).ln()).exp()
    }

    /// One-line summary, also used as the CSV comment header.
    pub fn summary(&self) -> String {
        format!(
            "slope={} intercept={} residual={} points={}",
            num(self.slope),
            num(self.intercept),
            num(self.residual),
            self.pairs.len()
        )
    }

    /// `# <summary>` followed by an `n,error` table.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# {}", self.summary())?;
        let mut w = csv_writer(out);
        w.write_record(["n", "error"])?;
        for &(n, e) in &self.pairs {
            w.write_record([n.to_string(), num(e)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_n() {
        let pairs: Vec<(usize, f64)> = [10, 20, 40, 80].iter().map(|&n| (n, 1.0 / n as f64)).collect();
        let fit = fit_rate(&pairs).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn three_halves() {
        let pairs: Vec<(usize, f64)> =
            [50, 100, 200, 400, 800].iter().map(|&n| (n, (n as f64).powf(-1.5))).collect();
        assert!((fit_rate(&pairs).unwrap().slope + 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let few = [(10usize, 0.1), (20, 0.05), (40, 0.025)];
        assert!(fit_rate(&few).is_err());
        assert!(fit_slope(&few).is_ok());
        let dup = [(10usize, 0.1), (10, 0.1), (20, 0.05), (20, 0.05)];
        assert!(fit_rate(&dup).is_err());
        let neg = [(10usize, 0.1), (20, 0.0), (40, 0.025), (80, 0.01)];
        assert!(matches!(fit_rate(&neg), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_has_summary_header() {
        let pairs: Vec<(usize, f64)> = [10, 20, 40, 80].iter().map(|&n| (n, 2.0 / n as f64)).collect();
        let mut buf = Vec::new();
        fit_rate(&pairs).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# slope=-1"));
        assert_eq!(text.lines().nth(1), Some("n,error"));
        assert_eq!(text.lines().count(), 6);
    }

    proptest! {
        #[test]
        fn recovers_power_laws(p in -3.0f64..3.0, c in 0.01f64..100.0) {
            let pairs: Vec<(usize, f64)> =
                [7usize, 30, 111, 500, 2048].iter().map(|&n| (n, c * (n as f64).powf(p))).collect();
            let fit = fit_rate(&pairs).unwrap();
            prop_assert!((fit.slope - p).abs() < 1e-10);
            prop_assert!((fit.predict(64) / (c * 64f64.powf(p)) - 1.0).abs() < 1e-9);
        }
    }
}
