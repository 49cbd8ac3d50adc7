//! Shared CSV plumbing.
//!
//! Numbers are written as the shortest decimal string that round-trips to the
//! same `f64` (at most 17 significant digits), switching to exponent form for
//! very large or very small magnitudes.

use crate::scalar::Real;

pub fn csv_writer<W: std::io::Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

/// Shortest round-trip representation of `x` as `f64`.
pub fn num<T: Real>(x: T) -> String {
    format!("{:?}", x.to_f64_lossy())
}
