//! Eventually-defined rational sequences and the ring of their germs.
//!
//! An [`EventualSeq`] is a function of the index `n >= start` given by one
//! rational function per residue class `n mod m`, overridden at finitely many
//! indices by patches. The class is closed under `+ - *` and, away from
//! identically-zero divisors, under `/`. Because each branch is a rational
//! function, its sign is constant past a computable index, which makes
//! eventual equality and eventual comparison decidable.
//!
//! A [`HyperNum`] is the germ of a sequence: what remains once finitely many
//! indices are forgotten. Germs form a partially ordered, non-Archimedean
//! commutative ring with zero divisors.

mod literal;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratfun::{BranchLimit, RationalFunc};
use crate::scalar::Scalar;

pub use literal::{parse_seq, GRAMMAR};

/// Root bounds past this are clamped; indices that large are never patched.
const MAX_INDEX: u64 = u64::MAX >> 2;

/// A total function on `n >= start`, in canonical form.
///
/// Canonical means: the modulus is minimal, every patch differs from the
/// branch value it overrides, and every positive integer pole of a branch
/// (at or past `start`) is patched. Values at such poles, and at indices
/// where a division hit zero, are `0` by convention. Two canonical values
/// with equal fields are the same function, so derived equality is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualSeq<T> {
    modulus: usize,
    branches: Vec<RationalFunc<T>>,
    patches: BTreeMap<u64, T>,
    start: u64,
}

fn minimal_modulus<T: Scalar>(mut branches: Vec<RationalFunc<T>>) -> Vec<RationalFunc<T>> {
    let m = branches.len();
    let d =
        (1..m).filter(|&d| m.is_multiple_of(d)).find(|&d| (d..m).all(|r| branches[r] == branches[r % d])).unwrap_or(m);
    branches.truncate(d);
    branches
}

fn combine_branches<T: Scalar>(
    a: &[RationalFunc<T>],
    b: &[RationalFunc<T>],
    op: impl Fn(&RationalFunc<T>, &RationalFunc<T>) -> Result<RationalFunc<T>>,
) -> Result<Vec<RationalFunc<T>>> {
    let l = a.len().lcm(&b.len());
    (0..l).map(|r| op(&a[r % a.len()], &b[r % b.len()])).collect()
}

fn bound_index<T: Scalar>(bound: &T) -> u64 {
    bound.ceil_index().unwrap_or(MAX_INDEX).min(MAX_INDEX)
}

impl<T: Scalar> EventualSeq<T> {
    fn canonical(branches: Vec<RationalFunc<T>>, mut patches: BTreeMap<u64, T>, start: u64) -> Self {
        let start = start.max(1);
        let branches = minimal_modulus(branches);
        let m = branches.len();
        patches.retain(|&k, _| k >= start);
        let bound = branches.iter().map(|b| bound_index(&b.denominator().cauchy_bound())).max().unwrap_or(1);
        for (r, branch) in branches.iter().enumerate() {
            for k in branch.denominator().integer_roots_in(start, bound) {
                if k as usize % m == r {
                    patches.entry(k).or_insert_with(T::zero);
                }
            }
        }
        patches.retain(|&k, v| branches[k as usize % m].eval(&T::from_index(k)).as_ref() != Some(v));
        Self { modulus: m, branches, patches, start }
    }

    /// A single-branch sequence from coefficient lists, lowest degree first.
    pub fn ratfun(num: Vec<T>, den: Vec<T>) -> Result<Self> {
        Ok(Self::from_ratfunc(RationalFunc::from_coeffs(num, den)?))
    }

    pub fn from_ratfunc(f: RationalFunc<T>) -> Self {
        Self::canonical(vec![f], BTreeMap::new(), 1)
    }

    pub fn constant(c: T) -> Self {
        Self::from_ratfunc(RationalFunc::constant(c))
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    /// The sequence `n`.
    pub fn index_seq() -> Self {
        Self::from_ratfunc(RationalFunc::identity())
    }

    /// The sequence `1/n`.
    pub fn reciprocal_index() -> Self {
        Self::from_ratfunc(RationalFunc::identity().recip().expect("n is not the zero function"))
    }

    /// Residue-class sequence: branch `r` applies at indices `n ≡ r (mod modulus)`.
    pub fn masked(modulus: usize, branches: Vec<RationalFunc<T>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if branches.len() != modulus {
            return Err(Error::BranchCountMismatch { expected: modulus, got: branches.len() });
        }
        Ok(Self::canonical(branches, BTreeMap::new(), 1))
    }

    /// `1` on even indices, `0` on odd ones.
    pub fn even_indicator() -> Self {
        Self::masked(2, vec![RationalFunc::one(), RationalFunc::zero()]).expect("two branches")
    }

    /// `1` on odd indices, `0` on even ones.
    pub fn odd_indicator() -> Self {
        Self::masked(2, vec![RationalFunc::zero(), RationalFunc::one()]).expect("two branches")
    }

    /// Overrides the value at finitely many indices.
    pub fn patched(&self, values: impl IntoIterator<Item = (u64, T)>) -> Self {
        let mut patches = self.patches.clone();
        patches.extend(values);
        Self::canonical(self.branches.clone(), patches, self.start)
    }

    /// Moves the first defined index; earlier patches are dropped.
    pub fn with_start(&self, start: u64) -> Self {
        Self::canonical(self.branches.clone(), self.patches.clone(), start)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn branches(&self) -> &[RationalFunc<T>] {
        &self.branches
    }

    pub fn patches(&self) -> &BTreeMap<u64, T> {
        &self.patches
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn eval_at(&self, n: u64) -> Result<T> {
        if n < self.start {
            return Err(Error::IndexBeforeStart { index: n, start: self.start });
        }
        if let Some(v) = self.patches.get(&n) {
            return Ok(v.clone());
        }
        let branch = &self.branches[n as usize % self.modulus];
        Ok(branch.eval(&T::from_index(n)).expect("poles are patched in canonical form"))
    }

    /// An index past which no patch applies and every branch numerator and
    /// denominator has constant sign.
    pub fn stabilization_index(&self) -> u64 {
        let roots = self.branches.iter().map(|b| bound_index(&b.root_bound())).max().unwrap_or(1);
        let patches = self.patches.keys().next_back().map_or(1, |k| k + 1);
        roots.max(patches).max(self.start)
    }

    fn zip_with(
        &self,
        other: &Self,
        extra_keys: impl IntoIterator<Item = u64>,
        branch_op: impl Fn(&RationalFunc<T>, &RationalFunc<T>) -> Result<RationalFunc<T>>,
        point_op: impl Fn(T, T) -> T,
    ) -> Result<Self> {
        let branches = combine_branches(&self.branches, &other.branches, branch_op)?;
        let start = self.start.max(other.start);
        let patches = self
            .patches
            .keys()
            .chain(other.patches.keys())
            .copied()
            .chain(extra_keys)
            .filter(|&k| k >= start)
            .map(|k| {
                let a = self.eval_at(k).expect("k >= start");
                let b = other.eval_at(k).expect("k >= start");
                (k, point_op(a, b))
            })
            .collect();
        Ok(Self::canonical(branches, patches, start))
    }

    /// Pointwise quotient. Indices where the divisor vanishes get the value 0.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.branches.iter().any(RationalFunc::is_zero) {
            return Err(Error::EventuallyZeroDivisor);
        }
        let bound = rhs.stabilization_index();
        let m = rhs.modulus;
        let zeros: Vec<u64> = rhs
            .branches
            .iter()
            .enumerate()
            .flat_map(|(r, b)| {
                b.numerator().integer_roots_in(rhs.start, bound).into_iter().filter(move |&k| k as usize % m == r)
            })
            .collect();
        self.zip_with(rhs, zeros, RationalFunc::checked_div, |a, b| if b.is_zero() { T::zero() } else { a / b })
    }

    /// The germ: the sequence with its finitely many exceptions forgotten.
    pub fn germ(&self) -> HyperNum<T> {
        HyperNum { branches: self.branches.clone() }
    }

    pub fn classify(&self) -> Classification<T> {
        classify_branches(&self.branches)
    }
}

impl<T: Scalar> fmt::Display for EventualSeq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        literal::write_seq(self, f)
    }
}

macro_rules! seq_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a, T: Scalar> $trait<&'a EventualSeq<T>> for &'a EventualSeq<T> {
            type Output = EventualSeq<T>;

            fn $method(self, rhs: &EventualSeq<T>) -> EventualSeq<T> {
                self.zip_with(rhs, [], |a, b| Ok(a $op b), |a, b| a $op b)
                    .expect("infallible branch operation")
            }
        }

        impl<T: Scalar> $trait for EventualSeq<T> {
            type Output = EventualSeq<T>;

            fn $method(self, rhs: EventualSeq<T>) -> EventualSeq<T> {
                &self $op &rhs
            }
        }
    };
}

seq_binop!(Add, add, +);
seq_binop!(Sub, sub, -);
seq_binop!(Mul, mul, *);

impl<T: Scalar> Neg for &EventualSeq<T> {
    type Output = EventualSeq<T>;

    fn neg(self) -> EventualSeq<T> {
        EventualSeq {
            modulus: self.modulus,
            branches: self.branches.iter().map(|b| -b).collect(),
            patches: self.patches.iter().map(|(&k, v)| (k, -v.clone())).collect(),
            start: self.start,
        }
    }
}

impl<T: Scalar> Neg for EventualSeq<T> {
    type Output = EventualSeq<T>;

    fn neg(self) -> EventualSeq<T> {
        -&self
    }
}

/// The germ of an [`EventualSeq`]: its class under eventual equality.
///
/// Only the residue-class branches survive; the modulus is minimal, so
/// derived equality is eventual equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperNum<T> {
    branches: Vec<RationalFunc<T>>,
}

impl<T: Scalar> HyperNum<T> {
    fn from_branches(branches: Vec<RationalFunc<T>>) -> Self {
        Self { branches: minimal_modulus(branches) }
    }

    /// The standard embedding of a rational.
    pub fn constant(c: T) -> Self {
        Self { branches: vec![RationalFunc::constant(c)] }
    }

    /// The germ of `1/n`: a positive infinitesimal.
    pub fn infinitesimal_unit() -> Self {
        EventualSeq::reciprocal_index().germ()
    }

    /// The germ of `n`: a positive infinite element.
    pub fn infinite_unit() -> Self {
        EventualSeq::index_seq().germ()
    }

    pub fn modulus(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[RationalFunc<T>] {
        &self.branches
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(RationalFunc::is_zero)
    }

    /// A total sequence with this germ (poles patched to 0).
    pub fn representative(&self) -> EventualSeq<T> {
        EventualSeq::canonical(self.branches.clone(), BTreeMap::new(), 1)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.branches.iter().any(RationalFunc::is_zero) {
            return Err(Error::EventuallyZeroDivisor);
        }
        combine_branches(&self.branches, &rhs.branches, RationalFunc::checked_div).map(Self::from_branches)
    }

    /// Eventual comparison. `None` when the sign of the difference is not
    /// the same on every residue class.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        let diff = self - other;
        let mut signs = diff.branches.iter().map(RationalFunc::sign_at_infinity);
        let first = signs.next().expect("at least one branch");
        if !signs.all(|s| s == first) {
            return None;
        }
        Some(first.cmp(&0))
    }

    pub fn classify(&self) -> Classification<T> {
        classify_branches(&self.branches)
    }
}

impl<T: Scalar> PartialOrd for HyperNum<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other)
    }
}

impl<T: Scalar> From<&EventualSeq<T>> for HyperNum<T> {
    fn from(s: &EventualSeq<T>) -> Self {
        s.germ()
    }
}

impl<T: Scalar> fmt::Display for HyperNum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.representative().fmt(f)
    }
}

macro_rules! hyper_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a, T: Scalar> $trait<&'a HyperNum<T>> for &'a HyperNum<T> {
            type Output = HyperNum<T>;

            fn $method(self, rhs: &HyperNum<T>) -> HyperNum<T> {
                let branches = combine_branches(&self.branches, &rhs.branches, |a, b| Ok(a $op b))
                    .expect("infallible branch operation");
                HyperNum::from_branches(branches)
            }
        }

        impl<T: Scalar> $trait for HyperNum<T> {
            type Output = HyperNum<T>;

            fn $method(self, rhs: HyperNum<T>) -> HyperNum<T> {
                &self $op &rhs
            }
        }
    };
}

hyper_binop!(Add, add, +);
hyper_binop!(Sub, sub, -);
hyper_binop!(Mul, mul, *);

impl<T: Scalar> Neg for &HyperNum<T> {
    type Output = HyperNum<T>;

    fn neg(self) -> HyperNum<T> {
        HyperNum { branches: self.branches.iter().map(|b| -b).collect() }
    }
}

impl<T: Scalar> Neg for HyperNum<T> {
    type Output = HyperNum<T>;

    fn neg(self) -> HyperNum<T> {
        -&self
    }
}

/// Where a germ sits relative to the reals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    /// Every branch tends to 0.
    Infinitesimal,
    /// Every branch tends to the same nonzero limit.
    Appreciable,
    /// Every branch is unbounded.
    InfiniteElement,
    /// Bounded, but the branch limits disagree.
    FiniteNonConvergent,
    /// Some branches bounded, some not.
    MixedGalaxy,
}

impl ClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Infinitesimal => "infinitesimal",
            ClassTag::Appreciable => "appreciable",
            ClassTag::InfiniteElement => "infinite",
            ClassTag::FiniteNonConvergent => "finite-non-convergent",
            ClassTag::MixedGalaxy => "mixed-galaxy",
        }
    }

    /// In the finite part: bounded by some rational.
    pub fn is_finite(self) -> bool {
        matches!(self, ClassTag::Infinitesimal | ClassTag::Appreciable | ClassTag::FiniteNonConvergent)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification<T> {
    pub tag: ClassTag,
    /// Limit of each residue-class branch, in residue order.
    pub detail: Vec<BranchLimit<T>>,
}

fn classify_branches<T: Scalar>(branches: &[RationalFunc<T>]) -> Classification<T> {
    let detail: Vec<_> = branches.iter().map(RationalFunc::limit).collect();
    let finite: Vec<&T> = detail
        .iter()
        .filter_map(|l| match l {
            BranchLimit::Finite(v) => Some(v),
            _ => None,
        })
        .collect();
    let tag = if finite.is_empty() {
        ClassTag::InfiniteElement
    } else if finite.len() < detail.len() {
        ClassTag::MixedGalaxy
    } else if finite.iter().all(|v| *v == finite[0]) {
        if finite[0].is_zero() {
            ClassTag::Infinitesimal
        } else {
            ClassTag::Appreciable
        }
    } else {
        ClassTag::FiniteNonConvergent
    };
    Classification { tag, detail }
}

/// Convenience for the common single-polynomial case.
pub fn polynomial_seq<T: Scalar>(p: Polynomial<T>) -> EventualSeq<T> {
    EventualSeq::from_ratfunc(RationalFunc::from_poly(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn seq(num: &[i64], den: &[i64]) -> EventualSeq<Rational> {
        EventualSeq::ratfun(qs(num), qs(den)).unwrap()
    }

    #[test]
    fn make_ratfun_examples() {
        let n = seq(&[0, 1], &[1]);
        assert_eq!(n.branches(), &[RationalFunc::identity()]);
        assert!(n.patches().is_empty());
        assert_eq!(seq(&[1], &[1]), EventualSeq::constant(q(1)));
        let eps = seq(&[1], &[0, 1]);
        assert_eq!(eps.start(), 1);
        assert!(eps.patches().is_empty());
        assert_eq!(EventualSeq::<Rational>::ratfun(qs(&[1]), qs(&[0, 0])), Err(Error::ZeroDenominatorPolynomial));
    }

    #[test]
    fn poles_are_patched_with_zero() {
        // 1/(n - 3)
        let s = seq(&[1], &[-3, 1]);
        assert_eq!(s.patches().get(&3), Some(&q(0)));
        assert_eq!(s.eval_at(3).unwrap(), q(0));
        assert_eq!(s.eval_at(4).unwrap(), q(1));
        assert_eq!(s.eval_at(0), Err(Error::IndexBeforeStart { index: 0, start: 1 }));
    }

    #[test]
    fn masked_examples() {
        let even = EventualSeq::<Rational>::even_indicator();
        let vals: Vec<_> = (1..=4).map(|n| even.eval_at(n).unwrap()).collect();
        assert_eq!(vals, qs(&[0, 1, 0, 1]));
        let n = RationalFunc::identity();
        assert_eq!(EventualSeq::masked(1, vec![n.clone()]).unwrap(), EventualSeq::index_seq());
        let merged = EventualSeq::<Rational>::masked(2, vec![n.clone(), n.clone()]).unwrap();
        assert_eq!(merged.modulus(), 1);
        assert_eq!(
            EventualSeq::<Rational>::masked(3, vec![n]),
            Err(Error::BranchCountMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn arithmetic_examples() {
        let sum = &EventualSeq::reciprocal_index() + &EventualSeq::index_seq();
        assert_eq!(sum, seq(&[1, 0, 1], &[0, 1]));
        let prod = &EventualSeq::<Rational>::even_indicator() * &EventualSeq::odd_indicator();
        assert_eq!(prod, EventualSeq::zero());
        let x = seq(&[1, 0, 1], &[1]);
        assert_eq!(&x + &(-&x), EventualSeq::zero());
    }

    #[test]
    fn division_examples() {
        let one = EventualSeq::constant(q(1));
        assert_eq!(one.checked_div(&EventualSeq::reciprocal_index()).unwrap(), EventualSeq::index_seq());
        let x = seq(&[1, 0, 1], &[1]);
        assert_eq!(x.checked_div(&x).unwrap(), one);
        assert_eq!(one.checked_div(&EventualSeq::even_indicator()), Err(Error::EventuallyZeroDivisor));
        // 1/(n - 2): the zero of the divisor at n = 2 becomes a zero patch
        let q_ = one.checked_div(&seq(&[-2, 1], &[1])).unwrap();
        assert_eq!(q_.eval_at(2).unwrap(), q(0));
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(seq(&[-100, 1], &[1]).stabilization_index(), 101);
        assert_eq!(EventualSeq::constant(q(5)).stabilization_index(), 1);
        let patched = EventualSeq::reciprocal_index().patched([(3, q(99))]);
        assert_eq!(patched.stabilization_index(), 4);
    }

    #[test]
    fn compare_examples() {
        let n = HyperNum::<Rational>::infinite_unit();
        let eps = HyperNum::<Rational>::infinitesimal_unit();
        for r in [-5, 0, 7, 1_000_000] {
            assert_eq!(n.compare(&HyperNum::constant(q(r))), Some(Ordering::Greater));
        }
        assert_eq!(eps.compare(&HyperNum::constant(Rational::new(1.into(), 1000.into()))), Some(Ordering::Less));
        assert_eq!(eps.compare(&HyperNum::constant(q(0))), Some(Ordering::Greater));
        let even = EventualSeq::<Rational>::even_indicator().germ();
        let odd = EventualSeq::<Rational>::odd_indicator().germ();
        assert_eq!(even.compare(&odd), None);
        assert!(even.partial_cmp(&odd).is_none() && even != odd);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(EventualSeq::<Rational>::reciprocal_index().classify().tag, ClassTag::Infinitesimal);
        assert_eq!(EventualSeq::<Rational>::zero().classify().tag, ClassTag::Infinitesimal);
        assert_eq!(EventualSeq::<Rational>::even_indicator().classify().tag, ClassTag::FiniteNonConvergent);
        assert_eq!(seq(&[1, 3], &[2, 1]).classify().tag, ClassTag::Appreciable);
        assert_eq!(seq(&[0, -1], &[1]).classify().tag, ClassTag::InfiniteElement);
        let mixed = EventualSeq::<Rational>::masked(2, vec![RationalFunc::identity(), RationalFunc::one()]).unwrap();
        assert_eq!(mixed.classify().tag, ClassTag::MixedGalaxy);
    }

    #[test]
    fn patches_do_not_change_the_germ() {
        let s = EventualSeq::reciprocal_index();
        let p = s.patched([(5, q(42)), (1, q(-3))]);
        assert_ne!(s, p);
        assert_eq!(s.germ(), p.germ());
        // a patch equal to the branch value is redundant
        assert_eq!(s.patched([(2, Rational::new(1.into(), 2.into()))]), s);
    }
}
