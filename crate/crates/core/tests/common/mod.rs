#![allow(dead_code)]

pub mod oracle;

use signeq::legendre::legendre_recurrence;

/// Roots of `P_n(cos θ)` by plain bisection: scan a uniform θ grid for sign
/// changes, then halve each bracket to machine resolution.
pub fn bisection_roots(n: usize) -> Vec<f64> {
    let f = |t: f64| legendre_recurrence(n, t.cos());
    let cells = 64 * n;
    let h = std::f64::consts::PI / cells as f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..cells {
        let (mut a, mut b) = (i as f64 * h, (i + 1) as f64 * h);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            out.push(a);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if f(mid).signum() == fa.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// `(vol_pos, vol_neg)` of `P_n(cos θ)` on the sphere from the sign of
/// `P_n` at `samples` uniform midpoints of `[-1, 1]` (area element `2π dz`).
pub fn sampled_band_areas(n: usize, samples: usize) -> (f64, f64) {
    let h = 2.0 / samples as f64;
    let mut pos = 0usize;
    for i in 0..samples {
        let z = -1.0 + (i as f64 + 0.5) * h;
        if legendre_recurrence(n, z) > 0.0 {
            pos += 1;
        }
    }
    let cell = 2.0 * std::f64::consts::PI * h;
    (pos as f64 * cell, (samples - pos) as f64 * cell)
}

/// Fixture rows: `(n, m, x, value)`.
pub fn load_fixtures() -> Vec<(usize, usize, f64, String)> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/legendre.csv");
    let mut rdr = csv::Reader::from_path(path).expect("fixture file");
    rdr.records()
        .map(|r| {
            let r = r.expect("row");
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
                r[3].to_string(),
            )
        })
        .collect()
}

/// `|got - want| / |want|`, or `|got|` when `want` is zero.
pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
