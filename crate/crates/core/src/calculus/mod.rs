//! Derivatives and integrals of rational functions as shadows.
//!
//! A function `f` extends to sequences termwise, `n ↦ f(s(n))`. The
//! derivative at `x0` is the shadow of the difference quotient
//! `(f(x0 + ε) - f(x0)) / ε` with `ε` the class of `1/n`; the integral over
//! `[a, b]` is the shadow of the right-endpoint Riemann sum with `n`
//! subintervals, summed in closed form with Faulhaber polynomials. Both are
//! computed inside the sequence ring and come out exact.

mod faulhaber;
mod parser;

use std::fmt;

use num_traits::{Float, FromPrimitive};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunc;
use crate::scalar::Scalar;
use crate::seqcore::{ClassTag, EventualSeq};
use crate::shadow::{shadow_exact, ShadowResult, Verdict};

pub use faulhaber::{power_sum, BernoulliTable, DEFAULT_MAX_DEGREE};
pub use parser::GRAMMAR;

/// Byte range of a node in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind<T> {
    Variable(String),
    Constant(T),
    Neg(Box<Node<T>>),
    Add(Box<Node<T>>, Box<Node<T>>),
    Sub(Box<Node<T>>, Box<Node<T>>),
    Mul(Box<Node<T>>, Box<Node<T>>),
    Div(Box<Node<T>>, Box<Node<T>>),
    Pow(Box<Node<T>>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node<T> {
    pub kind: ExprKind<T>,
    pub span: Span,
}

impl<T: Scalar> Node<T> {
    fn variable(&self) -> Result<Option<&str>> {
        match &self.kind {
            ExprKind::Variable(v) => Ok(Some(v.as_str())),
            ExprKind::Constant(_) => Ok(None),
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => a.variable(),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                match (a.variable()?, b.variable()?) {
                    (Some(x), Some(y)) if x != y => {
                        Err(Error::MultipleVariables { first: x.to_string(), second: y.to_string() })
                    }
                    (x, y) => Ok(x.or(y)),
                }
            }
        }
    }

    fn to_ratfunc(&self) -> Result<RationalFunc<T>> {
        Ok(match &self.kind {
            ExprKind::Variable(_) => RationalFunc::identity(),
            ExprKind::Constant(c) => RationalFunc::constant(c.clone()),
            ExprKind::Neg(a) => -&a.to_ratfunc()?,
            ExprKind::Add(a, b) => &a.to_ratfunc()? + &b.to_ratfunc()?,
            ExprKind::Sub(a, b) => &a.to_ratfunc()? - &b.to_ratfunc()?,
            ExprKind::Mul(a, b) => &a.to_ratfunc()? * &b.to_ratfunc()?,
            ExprKind::Div(a, b) => {
                a.to_ratfunc()?.checked_div(&b.to_ratfunc()?).map_err(|_| Error::ZeroDenominatorPolynomial)?
            }
            ExprKind::Pow(a, e) => a.to_ratfunc()?.pow(*e),
        })
    }
}

/// A parsed univariate expression with its canonical rational form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncExpr<T> {
    root: Node<T>,
    variable: Option<String>,
    canonical: RationalFunc<T>,
}

impl<T: Scalar> FuncExpr<T> {
    pub fn from_node(root: Node<T>) -> Result<Self> {
        let variable = root.variable()?.map(str::to_string);
        let canonical = root.to_ratfunc()?;
        Ok(Self { root, variable, canonical })
    }

    pub fn root(&self) -> &Node<T> {
        &self.root
    }

    /// The variable name, if the expression mentions one.
    pub fn variable(&self) -> Option<&str> {
        self.variable.as_deref()
    }

    pub fn canonical(&self) -> &RationalFunc<T> {
        &self.canonical
    }

    pub fn is_polynomial(&self) -> bool {
        self.canonical.is_polynomial()
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &T) -> Option<T> {
        self.canonical.eval(x)
    }
}

impl<T: Scalar> fmt::Display for FuncExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical.display_in(self.variable().unwrap_or("x")))
    }
}

/// Parses an expression in one variable.
pub fn parse_expr<T: Scalar>(text: &str) -> Result<FuncExpr<T>> {
    FuncExpr::from_node(parser::parse(text)?)
}

/// Termwise extension `n ↦ f(s(n))`. Indices where `s(n)` hits a pole of
/// `f` get the value 0.
pub fn extend<T: Scalar>(f: &FuncExpr<T>, s: &EventualSeq<T>) -> Result<EventualSeq<T>> {
    let g = f.canonical();
    let branches = s.branches().iter().map(|b| g.compose(b)).collect::<Result<Vec<_>>>()?;
    let patches: Vec<(u64, T)> = s.patches().iter().map(|(&k, v)| (k, g.eval(v).unwrap_or_else(T::zero))).collect();
    Ok(EventualSeq::masked(s.modulus(), branches)?.patched(patches).with_start(s.start()))
}

/// A derivative with the difference quotient it was read off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivative<T> {
    pub value: T,
    pub quotient: EventualSeq<T>,
}

/// Exact derivative at `x0`, the shadow of the difference quotient with
/// increment `1/n`.
pub fn derivative<T: Scalar>(f: &FuncExpr<T>, x0: &T) -> Result<T> {
    derivative_trace(f, x0).map(|d| d.value)
}

pub fn derivative_trace<T: Scalar>(f: &FuncExpr<T>, x0: &T) -> Result<Derivative<T>> {
    derivative_with_increment(f, x0, &EventualSeq::reciprocal_index())
}

/// The derivative read off with an arbitrary nonzero infinitesimal increment.
pub fn derivative_with_increment<T: Scalar>(
    f: &FuncExpr<T>,
    x0: &T,
    increment: &EventualSeq<T>,
) -> Result<Derivative<T>> {
    if f.eval(x0).is_none() {
        return Err(Error::PoleAtPoint(x0.to_string()));
    }
    let germ = increment.germ();
    if germ.classify().tag != ClassTag::Infinitesimal || germ.branches().iter().any(RationalFunc::is_zero) {
        return Err(Error::PreconditionViolation("increment must be a nonzero infinitesimal".into()));
    }
    let base = EventualSeq::constant(x0.clone());
    let moved = extend(f, &(&base + increment))?;
    let fixed = extend(f, &base)?;
    let quotient = (&moved - &fixed).checked_div(increment)?;
    let value = match shadow_exact(&quotient).verdict {
        Verdict::Exact(v) => v,
        other => panic!("difference quotient of a rational function must converge, got {other:?}"),
    };
    Ok(Derivative { value, quotient })
}

/// An integral with the Riemann sum it was read off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integral<T> {
    pub value: T,
    /// `Σ_{i=1..n} f(a + i(b-a)/n) (b-a)/n` as a function of `n`.
    pub riemann_sum: RationalFunc<T>,
}

/// Exact integral of a polynomial over `[a, b]`.
pub fn integral<T: Scalar>(f: &FuncExpr<T>, a: &T, b: &T) -> Result<T> {
    integral_trace(f, a, b).map(|i| i.value)
}

pub fn integral_trace<T: Scalar>(f: &FuncExpr<T>, a: &T, b: &T) -> Result<Integral<T>> {
    integral_with_table(f, a, b, &BernoulliTable::new())
}

pub fn integral_with_table<T: Scalar>(f: &FuncExpr<T>, a: &T, b: &T, table: &BernoulliTable<T>) -> Result<Integral<T>> {
    if !f.is_polynomial() {
        return Err(Error::NonPolynomialIntegrand);
    }
    if a > b {
        return Err(Error::InvalidInterval);
    }
    // canonical denominators are monic, so a constant one is 1
    let p = f.canonical().numerator();
    let width = b.clone() - a.clone();
    // f(a + y) = Σ d_j y^j; with y = i·width/n each term sums via P_j
    let shifted = p.compose(&Polynomial::new(vec![a.clone(), T::one()]));
    let degree = shifted.degree().unwrap_or(0);
    let mut numerator = Polynomial::zero();
    let mut width_pow = width.clone();
    for (j, d) in shifted.coeffs().iter().enumerate() {
        let term = table.power_sum(j)?.scale(&(d.clone() * width_pow.clone()));
        numerator = &numerator + &(&term * &Polynomial::monomial(T::one(), degree - j));
        width_pow = width_pow * width.clone();
    }
    let riemann_sum = RationalFunc::new(numerator, Polynomial::monomial(T::one(), degree + 1))?;
    let value = match shadow_exact(&EventualSeq::from_ratfunc(riemann_sum.clone())).verdict {
        Verdict::Exact(v) => v,
        other => panic!("Riemann sum of a polynomial must converge, got {other:?}"),
    };
    Ok(Integral { value, riemann_sum })
}

/// Right-endpoint Riemann sum with `n` subintervals, in floating point.
pub fn riemann_sum_float<T: Scalar, F: Float + FromPrimitive>(f: &FuncExpr<T>, a: &T, b: &T, n: u64) -> F {
    let conv = |v: &T| F::from_f64(v.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan);
    let (a, b) = (conv(a), conv(b));
    let n_f = F::from_u64(n).unwrap_or_else(F::nan);
    let h = (b - a) / n_f;
    let mut sum = F::zero();
    for i in 1..=n {
        let x = a + F::from_u64(i).unwrap_or_else(F::nan) * h;
        sum = sum + f.canonical().eval_float(x);
    }
    sum * h
}

/// Subinterval counts tried by [`numeric_shadow`]: 2^4 through 2^20.
pub fn numeric_schedule() -> impl Iterator<Item = u64> {
    (4..=20).map(|k| 1u64 << k)
}

/// Floating-point Riemann sums on a doubling schedule, stopped once two
/// consecutive sums differ by less than `tol/2`.
///
/// The result is an enclosure of width `tol` centered (to within `tol/128`)
/// on `2*S(2n) - S(n)`, the last two sums with their first-order error
/// cancelled. For functions with a bounded second derivative this estimate
/// is far closer to the integral than the last difference; the enclosure is
/// still not a rigorous bound.
pub fn numeric_shadow<T: Scalar>(f: &FuncExpr<T>, a: &T, b: &T, tol: &T) -> Result<ShadowResult<T>> {
    if !tol.is_positive() {
        return Err(Error::ToleranceNotPositive);
    }
    if a > b {
        return Err(Error::InvalidInterval);
    }
    if f.canonical().denominator().has_root_in(a, b) {
        return Err(Error::PoleInInterval);
    }
    let tol_f = tol.to_f64().unwrap_or(f64::NAN);
    let mut prev: Option<f64> = None;
    for n in numeric_schedule() {
        let sum: f64 = riemann_sum_float(f, a, b, n);
        if let Some(p) = prev {
            if (sum - p).abs() < tol_f / 2.0 {
                // snap the center to a dyadic grid finer than tol/64
                let scale = (64.0 / tol_f).log2().ceil().exp2();
                let estimate = 2.0 * sum - p;
                let center = T::from_f64((estimate * scale).round() / scale).ok_or(Error::NoConvergenceWithinBudget)?;
                let half = tol.clone() / T::from_index(2);
                return Ok(ShadowResult {
                    verdict: Verdict::Enclosure { lo: center.clone() - half.clone(), hi: center + half },
                    witness: None,
                });
            }
        }
        prev = Some(sum);
    }
    Err(Error::NoConvergenceWithinBudget)
}
