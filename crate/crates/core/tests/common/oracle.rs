//! Exact reference values for the fixture file.
//!
//! Uses the explicit sum
//! `P_n(x) = 2^{-n} Σ_k (-1)^k C(n,k) C(2n-2k,n) x^{n-2k}`
//! in rational arithmetic at the exact value of the `f64` argument, so it
//! shares nothing with the recurrence under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Fractional decimal digits carried when rendering values.
pub const DIGITS: u32 = 60;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `d^m/dx^m P_n(x)`, exactly.
pub fn legendre_derivative(n: u64, m: u64, x: &BigRational) -> BigRational {
    let mut sum = BigRational::zero();
    for k in 0..=n / 2 {
        let p = n - 2 * k;
        if p < m {
            continue;
        }
        let mut c = binomial(n, k) * binomial(2 * n - 2 * k, n);
        for i in 0..m {
            c *= BigInt::from(p - i);
        }
        if k % 2 == 1 {
            c = -c;
        }
        sum += BigRational::from_integer(c) * x.pow((p - m) as i32);
    }
    sum / BigRational::from_integer(BigInt::one() << n)
}

/// `P_n^m(x)` with the Condon–Shortley phase, as a decimal string with
/// [`DIGITS`] fractional digits (truncated).
pub fn assoc_legendre_decimal(n: u64, m: u64, x: f64) -> String {
    let xr = BigRational::from_float(x).expect("finite");
    let d = legendre_derivative(n, m, &xr);
    let one_minus = BigRational::one() - &xr * &xr;
    let mut r = d * one_minus.pow((m / 2) as i32);
    if m % 2 == 1 {
        r = -r;
    }
    let scale = BigInt::from(10u32).pow(DIGITS);
    let mut scaled = if m % 2 == 1 {
        // r · sqrt(1 - x^2) · 10^D = sign(r) · sqrt(r^2 (1 - x^2) 10^{2D})
        let sq = &r * &r * &one_minus * BigRational::from_integer(&scale * &scale);
        let floor = (sq.numer() / sq.denom()).magnitude().clone();
        BigInt::from(Roots::sqrt(&floor))
    } else {
        (r.abs() * BigRational::from_integer(scale)).to_integer()
    };
    let negative = r.is_negative() && !scaled.is_zero();
    scaled = scaled.abs();
    let digits = scaled.to_string();
    let width = DIGITS as usize + 1;
    let padded = format!("{digits:0>width$}");
    let (int, frac) = padded.split_at(padded.len() - DIGITS as usize);
    format!("{}{int}.{frac}", if negative { "-" } else { "" })
}

/// Row set written to `legendre.csv`: `(n, m, x)`.
pub fn fixture_points() -> Vec<(u64, u64, f64)> {
    let xs = [-1.0, -0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 0.99, 1.0];
    let mut out = Vec::new();
    for n in [1u64, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000] {
        for &x in &xs {
            out.push((n, 0, x));
        }
    }
    for (n, m) in [(1u64, 1u64), (2, 1), (2, 2), (3, 3), (5, 2), (10, 3), (20, 7), (20, 20)] {
        for &x in &[-0.5, 0.0, 0.5, 0.8] {
            out.push((n, m, x));
        }
    }
    out
}

/// Parses a fixture decimal to the nearest `f64`.
pub fn to_f64(s: &str) -> f64 {
    s.parse().expect("decimal")
}
