//! Exact arithmetic for eventually-defined rational sequences.
//!
//! Sequences indexed by `n = 1, 2, 3, ...` are identified when they agree
//! from some index on. The resulting ring contains the rationals, positive
//! infinitesimals such as the class of `1/n`, and infinite elements such as
//! the class of `n`. Limits of convergent members give a ring epimorphism
//! onto the rationals (the shadow), and derivatives and integrals of
//! rational functions come out exactly as shadows of difference quotients
//! and of Riemann sums with an infinite number of subintervals.
//!
//! Every algebraic type is generic over an exact [`Scalar`] field; the
//! aliases below fix it to arbitrary-precision rationals.

pub mod calculus;
mod error;
mod poly;
mod ratfun;
mod scalar;
pub mod seqcore;
pub mod shadow;
pub mod ultralab;

pub use error::{Error, Result, SyntaxError};
pub use poly::Polynomial;
pub use ratfun::{BranchLimit, RationalFunc};
pub use scalar::Scalar;
pub use seqcore::{parse_seq, ClassTag, Classification, EventualSeq, HyperNum};

/// Arbitrary-precision rationals, the default scalar.
pub type Rational = num_rational::BigRational;

pub type Poly = Polynomial<Rational>;
pub type RatFunc = RationalFunc<Rational>;
pub type Seq = EventualSeq<Rational>;
pub type Hyper = HyperNum<Rational>;
pub type Expr = calculus::FuncExpr<Rational>;
pub type Shadow = shadow::ShadowResult<Rational>;
pub type Scene = ultralab::FilterScene;
pub type Table = ultralab::SeqTable<Rational>;

/// Machine-word rationals: faster, but overflow panics.
pub type Rational64 = num_rational::Rational64;
