//! Rational functions of the index variable, kept in canonical form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, FromPrimitive};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// `numerator / denominator` with the two coprime and the denominator monic.
///
/// That makes the representation unique: derived equality is equality of
/// functions, and zero is always `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunc<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

/// Behavior of a rational function as `n → ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchLimit<T> {
    Finite(T),
    PlusInfinity,
    MinusInfinity,
}

impl<T: Scalar> BranchLimit<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, BranchLimit::Finite(_))
    }
}

impl<T: Scalar> fmt::Display for BranchLimit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchLimit::Finite(v) => write!(f, "{v}"),
            BranchLimit::PlusInfinity => f.write_str("+inf"),
            BranchLimit::MinusInfinity => f.write_str("-inf"),
        }
    }
}

impl<T: Scalar> RationalFunc<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominatorPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = T::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Self { num, den })
    }

    /// Builds from coefficient lists, lowest degree first.
    pub fn from_coeffs(num: Vec<T>, den: Vec<T>) -> Result<Self> {
        Self::new(Polynomial::new(num), Polynomial::new(den))
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The function `n ↦ n`.
    pub fn identity() -> Self {
        Self::from_poly(Polynomial::identity())
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The value if constant.
    pub fn as_constant(&self) -> Option<T> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &T) -> Option<T> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn eval_float<F: Float + FromPrimitive>(&self, x: F) -> F {
        self.num.eval_float(x) / self.den.eval_float(x)
    }

    /// Sign for all sufficiently large arguments.
    pub fn sign_at_infinity(&self) -> i8 {
        // the denominator is monic, so only the numerator's lead matters
        self.num.sign_at_infinity()
    }

    /// Limit at infinity, by comparing degrees.
    pub fn limit(&self) -> BranchLimit<T> {
        let Some(dn) = self.num.degree() else {
            return BranchLimit::Finite(T::zero());
        };
        let dd = self.den.degree().expect("nonzero denominator");
        if dn < dd {
            BranchLimit::Finite(T::zero())
        } else if dn == dd {
            BranchLimit::Finite(self.num.leading().cloned().unwrap_or_else(T::zero))
        } else if self.sign_at_infinity() > 0 {
            BranchLimit::PlusInfinity
        } else {
            BranchLimit::MinusInfinity
        }
    }

    /// Largest Cauchy root bound of numerator and denominator: past it both
    /// have constant sign.
    pub fn root_bound(&self) -> T {
        self.num.cauchy_bound().max(self.den.cauchy_bound())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::EventuallyZeroDivisor);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::EventuallyZeroDivisor);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self { num: self.num.pow(exp), den: self.den.pow(exp) }
    }

    /// Substitutes `inner` for the variable: `n ↦ self(inner(n))`.
    ///
    /// Fails when the substituted denominator is the zero function.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let horner = |p: &Polynomial<T>| {
            p.coeffs().iter().rev().fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
        };
        let den = horner(&self.den);
        if den.is_zero() {
            return Err(Error::EventuallyZeroDivisor);
        }
        horner(&self.num).checked_div(&den)
    }

    /// Splits into polynomial part and proper remainder `q + r/den`.
    pub fn split(&self) -> (Polynomial<T>, Polynomial<T>) {
        self.num.div_rem(&self.den)
    }

    /// Human-readable form in the given variable.
    pub fn display_in(&self, var: &str) -> String {
        let wrap = |p: &Polynomial<T>| {
            let s = p.display_in(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            return self.num.display_in(var);
        }
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }

    /// Polynomial part plus proper fraction, e.g. `6 + 1/n`.
    pub fn display_split(&self, var: &str) -> String {
        let (q, r) = self.split();
        if r.is_zero() {
            return q.display_in(var);
        }
        let frac = Self { num: r, den: self.den.clone() };
        let frac_text = frac.display_in(var);
        if q.is_zero() {
            return frac_text;
        }
        match frac_text.strip_prefix('-') {
            Some(rest) => format!("{} - {}", q.display_in(var), rest),
            None => format!("{} + {}", q.display_in(var), frac_text),
        }
    }
}

impl<T: Scalar> fmt::Display for RationalFunc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("n"))
    }
}

impl<'a, T: Scalar> Add<&'a RationalFunc<T>> for &'a RationalFunc<T> {
    type Output = RationalFunc<T>;

    fn add(self, rhs: &RationalFunc<T>) -> RationalFunc<T> {
        if self.den == rhs.den {
            return RationalFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        // over the lcm of the denominators only factors of their gcd can cancel
        let g = self.den.gcd(&rhs.den);
        let (a, b) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_rem(&g).0, rhs.den.div_rem(&g).0)
        };
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        if num.is_zero() {
            return RationalFunc::zero();
        }
        let den = &self.den * &b;
        if g.is_one() {
            return RationalFunc { num, den };
        }
        let h = num.gcd(&g);
        if h.is_one() {
            RationalFunc { num, den }
        } else {
            RationalFunc { num: num.div_rem(&h).0, den: den.div_rem(&h).0 }
        }
    }
}

impl<'a, T: Scalar> Sub<&'a RationalFunc<T>> for &'a RationalFunc<T> {
    type Output = RationalFunc<T>;

    fn sub(self, rhs: &RationalFunc<T>) -> RationalFunc<T> {
        self + &(-rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a RationalFunc<T>> for &'a RationalFunc<T> {
    type Output = RationalFunc<T>;

    fn mul(self, rhs: &RationalFunc<T>) -> RationalFunc<T> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero();
        }
        // both sides are reduced, so only cross factors can cancel
        let cancel = |a: &Polynomial<T>, b: &Polynomial<T>| {
            let g = a.gcd(b);
            if g.is_one() {
                (a.clone(), b.clone())
            } else {
                (a.div_rem(&g).0, b.div_rem(&g).0)
            }
        };
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        // quotients of monic polynomials by monic gcds stay monic
        RationalFunc { num: &n1 * &n2, den: &d1 * &d2 }
    }
}

impl<T: Scalar> Neg for &RationalFunc<T> {
    type Output = RationalFunc<T>;

    fn neg(self) -> RationalFunc<T> {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}
