//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, FromPrimitive, Signed, Zero};

use crate::scalar::Scalar;

/// Coefficients are stored lowest degree first with no trailing zeros, so
/// the zero polynomial is the empty vector and derived equality is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `n`.
    pub fn identity() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `n^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_float<F: Float + FromPrimitive>(&self, x: F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x + F::from_f64(c.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan))
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) if !lead.is_one() => {
                let inv = T::one() / lead.clone();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.degree().is_some_and(|d| d > 0) && other.degree().is_some_and(|d| d > 0) && coprime_mod_p(self, other) {
            return Self::one();
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * T::from_index(k as u64)).collect())
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Cauchy's bound `1 + max |c_i| / |c_lead|`: every root has smaller modulus.
    pub fn cauchy_bound(&self) -> T {
        let Some(lead) = self.leading() else {
            return T::one();
        };
        let lead = lead.abs();
        let max = self.coeffs[..self.coeffs.len() - 1].iter().map(Signed::abs).max().unwrap_or_else(T::zero);
        T::one() + max / lead
    }

    /// Sign of `p(n)` for all sufficiently large `n`: -1, 0 or 1.
    pub fn sign_at_infinity(&self) -> i8 {
        match self.leading() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while let [.., a, b] = chain.as_slice() {
            if b.is_zero() {
                chain.pop();
                break;
            }
            let r = -&a.div_rem(b).1;
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_changes(chain: &[Self], x: &T) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_real_roots(&self, lo: &T, hi: &T) -> usize {
        if self.is_constant() || lo >= hi {
            return 0;
        }
        let chain = self.square_free().sturm_chain();
        Self::sign_changes(&chain, lo).saturating_sub(Self::sign_changes(&chain, hi))
    }

    /// Whether some real root lies in the closed interval `[lo, hi]`.
    pub fn has_root_in(&self, lo: &T, hi: &T) -> bool {
        if self.is_zero() {
            return true;
        }
        self.eval(lo).is_zero() || self.count_real_roots(lo, hi) > 0
    }

    /// All integer roots in `[from, to]`, ascending. The zero polynomial has none
    /// by convention.
    pub fn integer_roots_in(&self, from: u64, to: u64) -> Vec<u64> {
        if self.is_constant() || from > to {
            return Vec::new();
        }
        // Scanning is cheaper than root isolation on all but huge ranges.
        if to - from <= MODULAR_SCAN_LIMIT {
            if let Some(roots) = self.integer_roots_by_residues(from, to) {
                return roots;
            }
        }
        if to - from <= 64 {
            return (from..=to).filter(|&k| self.eval(&T::from_index(k)).is_zero()).collect();
        }
        let sf = self.square_free();
        let chain = sf.sturm_chain();
        let half = T::one() / T::from_index(2);
        let mut out = Vec::new();
        // Each range [a, b] is probed on the half-integer interval (a - 1/2, b + 1/2].
        let mut stack = vec![(from, to)];
        while let Some((a, b)) = stack.pop() {
            let lo = T::from_index(a) - half.clone();
            let hi = T::from_index(b) + half.clone();
            let roots = Self::sign_changes(&chain, &lo).saturating_sub(Self::sign_changes(&chain, &hi));
            if roots == 0 {
                continue;
            }
            if b - a <= 8 {
                out.extend((a..=b).filter(|&k| sf.eval(&T::from_index(k)).is_zero()));
                continue;
            }
            let mid = a + (b - a) / 2;
            stack.push((mid + 1, b));
            stack.push((a, mid));
        }
        out.sort_unstable();
        out
    }

    /// Scans `[from, to]` modulo two primes and confirms the survivors exactly.
    /// `None` if no prime keeps the coefficients well defined.
    fn integer_roots_by_residues(&self, from: u64, to: u64) -> Option<Vec<u64>> {
        let images: Vec<(u64, Vec<u64>)> = PRIMES
            .iter()
            .filter_map(|&p| Some((p, self.coeffs.iter().map(|c| c.residue(p)).collect::<Option<Vec<_>>>()?)))
            .take(2)
            .collect();
        if images.is_empty() {
            return None;
        }
        let vanishes = |k: u64| {
            images.iter().all(|(p, c)| {
                let x = k % p;
                c.iter().rev().fold(0, |acc, v| (acc * x + v) % p) == 0
            })
        };
        Some((from..=to).filter(|&k| vanishes(k) && self.eval(&T::from_index(k)).is_zero()).collect())
    }

    /// Human-readable form in the given variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let coeff = if abs.is_one() && k > 0 {
                String::new()
            } else if k > 0 && abs.to_string().contains('/') {
                format!("({abs})")
            } else {
                abs.to_string()
            };
            out.push_str(&coeff);
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("n"))
    }
}

/// Longest index range searched for integer roots by residues rather than
/// by Sturm bisection.
const MODULAR_SCAN_LIMIT: u64 = 1 << 20;

/// Primes below 2^31, so products of residues fit in a `u64`.
const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Certifies that `a` and `b` have no common factor by finding a prime that
/// keeps both leading coefficients and whose gcd image is constant.
///
/// Reduction mod such a prime can only raise the degree of the gcd, so a
/// constant image is proof. `false` means "unknown".
fn coprime_mod_p<T: Scalar>(a: &Polynomial<T>, b: &Polynomial<T>) -> bool {
    let image = |q: &Polynomial<T>, p: u64| -> Option<Vec<u64>> {
        let v = q.coeffs.iter().map(|c| c.residue(p)).collect::<Option<Vec<_>>>()?;
        (v.last() != Some(&0)).then_some(v)
    };
    PRIMES.iter().any(|&p| match (image(a, p), image(b, p)) {
        (Some(x), Some(y)) => gcd_degree_mod(x, y, p) == 0,
        _ => false,
    })
}

/// Degree of `gcd(x, y)` over `Z/p`; both inputs have a nonzero leading term.
fn gcd_degree_mod(mut x: Vec<u64>, mut y: Vec<u64>, p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let inv = crate::scalar::mod_inverse(*y.last().expect("nonempty"), p);
        while x.len() >= y.len() {
            let shift = x.len() - y.len();
            let c = x.last().expect("nonempty") * inv % p;
            for (j, d) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + p - c * d % p) % p;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len().saturating_sub(1)
}

impl<'a, T: Scalar> Add<&'a Polynomial<T>> for &'a Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Sub<&'a Polynomial<T>> for &'a Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Mul<&'a Polynomial<T>> for &'a Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}
