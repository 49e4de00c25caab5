//! Generators and independent oracles shared by the integration suites.
//!
//! The oracles here work on plain coefficient vectors and brute-force sums;
//! they never call into the library's calculus or shadow code.

#![allow(dead_code)]

use fini_core::{EventualSeq, RatFunc, Rational, Seq};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Seed for the randomized suites: `FINI_SEED` if set, else a fixed default.
pub fn seed() -> u64 {
    std::env::var("FINI_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x5eed_f1e1)
}

// ---- rand-based generators (acceptance suite) ----

pub fn rand_coeffs(rng: &mut impl Rng, max_degree: usize, bound: i64) -> Vec<Rational> {
    let len = rng.gen_range(1..=max_degree + 1);
    (0..len).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

pub fn rand_ratfunc(rng: &mut impl Rng, max_degree: usize, bound: i64) -> RatFunc {
    loop {
        let num = rand_coeffs(rng, max_degree, bound);
        let den = rand_coeffs(rng, max_degree, bound);
        if let Ok(f) = RatFunc::from_coeffs(num, den) {
            return f;
        }
    }
}

/// Modulus 1..=4, degrees <= 4, integer coefficients in [-10, 10], plus
/// occasional patches.
pub fn rand_seq(rng: &mut impl Rng) -> Seq {
    let m = rng.gen_range(1..=4);
    let branches = (0..m).map(|_| rand_ratfunc(rng, 4, 10)).collect();
    let s = EventualSeq::masked(m, branches).unwrap();
    let patches: Vec<(u64, Rational)> =
        (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(1..=20), int(rng.gen_range(-10..=10)))).collect();
    s.patched(patches)
}

/// A rational `p/q` with `|p| <= 9 * q`, `q` in 1..=9.
pub fn rand_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let den = rng.gen_range(1..=9);
    q(rng.gen_range(-bound * den..=bound * den), den)
}

/// `limit + (a n + b) / (n^2 + c n + d)` on each branch, with `c, d >= 0`
/// so the denominators have no positive roots.
pub fn rand_convergent(rng: &mut impl Rng, limit: &Rational, coeff_bound: i64) -> Seq {
    let m = rng.gen_range(1..=3);
    let branches = (0..m)
        .map(|_| {
            let tail = RatFunc::from_coeffs(
                vec![int(rng.gen_range(-coeff_bound..=coeff_bound)), int(rng.gen_range(-coeff_bound..=coeff_bound))],
                vec![int(rng.gen_range(0..=coeff_bound)), int(rng.gen_range(0..=coeff_bound)), int(1)],
            )
            .unwrap();
            &tail + &RatFunc::constant(limit.clone())
        })
        .collect();
    EventualSeq::masked(m, branches).unwrap()
}

// ---- proptest strategies ----

pub fn coeffs_strategy(max_degree: usize, bound: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-bound..=bound, 1..=max_degree + 1).prop_map(|v| v.into_iter().map(int).collect())
}

pub fn ratfunc_strategy(max_degree: usize, bound: i64) -> impl Strategy<Value = RatFunc> {
    (coeffs_strategy(max_degree, bound), coeffs_strategy(max_degree, bound))
        .prop_filter_map("zero denominator", |(n, d)| RatFunc::from_coeffs(n, d).ok())
}

pub fn seq_strategy(max_modulus: usize, max_degree: usize, bound: i64) -> impl Strategy<Value = Seq> {
    (1..=max_modulus)
        .prop_flat_map(move |m| {
            (
                Just(m),
                prop::collection::vec(ratfunc_strategy(max_degree, bound), m),
                prop::collection::vec((1u64..=30, -bound..=bound), 0..3),
            )
        })
        .prop_map(|(m, branches, patches)| {
            EventualSeq::masked(m, branches).unwrap().patched(patches.into_iter().map(|(k, v)| (k, int(v))))
        })
}

pub fn rational_strategy(bound: i64) -> impl Strategy<Value = Rational> {
    (1i64..=9).prop_flat_map(move |d| (-bound * d..=bound * d).prop_map(move |p| q(p, d)))
}

// ---- oracles on coefficient vectors (lowest degree first) ----

pub fn poly_eval(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, k| acc * x + k)
}

/// Power rule.
pub fn poly_derivative(c: &[Rational]) -> Vec<Rational> {
    c.iter().enumerate().skip(1).map(|(k, v)| v * int(k as i64)).collect()
}

/// Antiderivative vanishing at 0.
pub fn poly_antiderivative(c: &[Rational]) -> Vec<Rational> {
    std::iter::once(Rational::zero()).chain(c.iter().enumerate().map(|(k, v)| v / int(k as i64 + 1))).collect()
}

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Text form of a polynomial for the expression parser, e.g. `(3/2)*x^2 + (-1)*x^1 + (4)`.
pub fn poly_text(c: &[Rational]) -> String {
    if c.is_empty() {
        return "0".to_string();
    }
    c.iter()
        .enumerate()
        .map(|(k, v)| {
            let lit = if v.is_negative() { format!("(0-{})", v.abs()) } else { format!("({v})") };
            if k == 0 {
                lit
            } else {
                format!("{lit}*x^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Coefficients of the interpolating polynomial through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); xs.len()];
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = poly_mul(&basis, &[-xj.clone(), Rational::one()]);
                denom *= xi - xj;
            }
        }
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * yi / &denom;
        }
    }
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// `Σ_{i=1..n} i^k` by direct summation.
pub fn brute_power_sum(k: u32, n: u64) -> Rational {
    (1..=n).map(|i| Rational::from_integer(num_bigint::BigInt::from(i).pow(k))).sum()
}

/// Upper bound on `|s(n) - L| * n` for all `n >= threshold`, per branch of a
/// convergent sequence: returns `(C, threshold)`.
pub fn convergence_constant(f: &RatFunc, limit: &Rational) -> (Rational, Rational) {
    let p = f.numerator().coeffs();
    let den = f.denominator().coeffs();
    let d = den.len() - 1;
    // e = p - L * den has degree < d; den is monic
    let e: Vec<Rational> = (0..=d)
        .map(|k| p.get(k).cloned().unwrap_or_default() - limit * den.get(k).cloned().unwrap_or_default())
        .collect();
    let c: Rational = e.iter().map(|v| v.abs()).sum::<Rational>() * int(2);
    let threshold: Rational = den[..d].iter().map(|v| v.abs()).sum::<Rational>() * int(2);
    (c, threshold.max(int(1)))
}
