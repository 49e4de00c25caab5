//! Limits of sequences: the exact shadow of convergent members and a
//! sampling-based nested-interval enclosure for arbitrary index oracles.

use std::fmt;

use crate::error::{Error, Result};
use crate::ratfun::BranchLimit;
use crate::scalar::Scalar;
use crate::seqcore::EventualSeq;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T> {
    Exact(T),
    Enclosure {
        lo: T,
        hi: T,
    },
    /// Some branch is unbounded.
    Divergent,
    /// Bounded, but the branch limits disagree (or the sampled tail never
    /// settles into a shrinking interval).
    NotCauchy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowResult<T> {
    pub verdict: Verdict<T>,
    /// Per-branch limits, when the result came from exact analysis.
    pub witness: Option<Vec<BranchLimit<T>>>,
}

impl<T: Scalar> ShadowResult<T> {
    fn bare(verdict: Verdict<T>) -> Self {
        Self { verdict, witness: None }
    }

    pub fn exact_value(&self) -> Option<&T> {
        match &self.verdict {
            Verdict::Exact(v) => Some(v),
            _ => None,
        }
    }

    /// Whether `x` is the exact value or lies in the enclosure.
    pub fn contains(&self, x: &T) -> bool {
        match &self.verdict {
            Verdict::Exact(v) => v == x,
            Verdict::Enclosure { lo, hi } => lo <= x && x <= hi,
            _ => false,
        }
    }

    /// Single-line `key=value` form.
    pub fn to_kv(&self) -> String {
        match &self.verdict {
            Verdict::Exact(v) => format!("verdict=exact value={v}"),
            Verdict::Enclosure { lo, hi } => format!("verdict=enclosure lo={lo} hi={hi}"),
            Verdict::Divergent => "verdict=divergent".to_string(),
            Verdict::NotCauchy => "verdict=not-cauchy".to_string(),
        }
    }
}

impl<T: Scalar> fmt::Display for ShadowResult<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Exact(v) => write!(f, "exact {v}"),
            Verdict::Enclosure { lo, hi } => write!(f, "enclosure [{lo}, {hi}]"),
            Verdict::Divergent => f.write_str("divergent"),
            Verdict::NotCauchy => f.write_str("not-cauchy"),
        }
    }
}

/// Every branch converges, all to the same limit.
pub fn is_convergent<T: Scalar>(s: &EventualSeq<T>) -> bool {
    matches!(shadow_exact(s).verdict, Verdict::Exact(_))
}

/// The limit of a convergent sequence, computed from leading coefficients.
pub fn shadow_exact<T: Scalar>(s: &EventualSeq<T>) -> ShadowResult<T> {
    let limits: Vec<_> = s.branches().iter().map(|b| b.limit()).collect();
    let verdict = if limits.iter().any(|l| !l.is_finite()) {
        Verdict::Divergent
    } else if limits.iter().all(|l| *l == limits[0]) {
        match &limits[0] {
            BranchLimit::Finite(v) => Verdict::Exact(v.clone()),
            _ => unreachable!("all limits finite"),
        }
    } else {
        Verdict::NotCauchy
    };
    ShadowResult { verdict, witness: Some(limits) }
}

/// The two sequences agree from some index on.
///
/// Strictly finer than having equal shadows: `1/n` and `0` are not
/// equivalent, though both have shadow 0.
pub fn refined_equivalent<T: Scalar>(u: &EventualSeq<T>, v: &EventualSeq<T>) -> bool {
    u.germ() == v.germ()
}

/// Checks that the shadow is additive and multiplicative on the given pair.
pub fn epimorphism_check<T: Scalar>(a: &EventualSeq<T>, b: &EventualSeq<T>) -> Result<bool> {
    let limit = |s: &EventualSeq<T>, what: &str| {
        shadow_exact(s)
            .exact_value()
            .cloned()
            .ok_or_else(|| Error::PreconditionViolation(format!("{what} is not convergent")))
    };
    let (la, lb) = (limit(a, "first argument")?, limit(b, "second argument")?);
    let sum = shadow_exact(&(a + b));
    let prod = shadow_exact(&(a * b));
    Ok(sum.exact_value() == Some(&(la.clone() + lb.clone())) && prod.exact_value() == Some(&(la * lb)))
}

/// Consecutive indices sampled at each horizon point; covers every residue
/// class of modulus up to this size.
pub const SAMPLE_WINDOW: u64 = 8;

/// Powers of two from 1 to 2^16.
pub fn default_horizons() -> Vec<u64> {
    (0..=16).map(|k| 1u64 << k).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    Lower,
    Middle,
    Upper,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Segment::Lower => "lower",
            Segment::Middle => "middle",
            Segment::Upper => "upper",
        })
    }
}

/// One halving of the enclosing interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionStep<T> {
    pub lo: T,
    pub hi: T,
    /// First index of the tail that had to fit the kept segment.
    pub horizon: u64,
    pub kept: Segment,
}

/// Nested-interval enclosure of the limit of an index oracle.
///
/// At each step the interval `[lo, hi]` is replaced by a closed segment of
/// half its width that contains every sampled value past the current
/// horizon: the lower half, the upper half, or the middle half. Among the
/// segments that contain the tail, the one leaving the widest margin is
/// kept (ties favor lower, then middle; a value exactly at the midpoint
/// therefore goes to the lower half). The horizon moves further out along
/// `horizons` while no segment contains the tail with a margin of at least
/// an eighth of the segment width. At the last horizon the best containing
/// segment is kept regardless of margin, and if none contains the tail the
/// result is `NotCauchy`.
///
/// The tail past horizon `h` is the oracle sampled at `k, k+1, ..., k+7` for
/// every schedule point `k >= h`.
pub fn bisection_shadow<T: Scalar>(
    evaluator: impl Fn(u64) -> T,
    lo: T,
    hi: T,
    tol: T,
    horizons: &[u64],
) -> Result<ShadowResult<T>> {
    bisection_trace(evaluator, lo, hi, tol, horizons).map(|(r, _)| r)
}

/// [`bisection_shadow`] together with the sequence of kept segments.
pub fn bisection_trace<T: Scalar>(
    evaluator: impl Fn(u64) -> T,
    mut lo: T,
    mut hi: T,
    tol: T,
    horizons: &[u64],
) -> Result<(ShadowResult<T>, Vec<BisectionStep<T>>)> {
    if lo >= hi {
        return Err(Error::InvalidBounds);
    }
    if !tol.is_positive() {
        return Err(Error::ToleranceNotPositive);
    }
    let mut horizons = horizons.to_vec();
    horizons.sort_unstable();
    horizons.dedup();
    if horizons.is_empty() {
        return Ok((ShadowResult::bare(Verdict::NotCauchy), Vec::new()));
    }
    // (min, max) of the sampled tail from each horizon onwards
    let windows: Vec<(T, T)> = horizons
        .iter()
        .map(|&k| {
            let vals: Vec<T> = (k..k + SAMPLE_WINDOW).map(&evaluator).collect();
            let min = vals.iter().min().expect("nonempty window").clone();
            let max = vals.iter().max().expect("nonempty window").clone();
            (min, max)
        })
        .collect();
    let mut tails = windows;
    for i in (0..tails.len().saturating_sub(1)).rev() {
        let (nmin, nmax) = tails[i + 1].clone();
        let (min, max) = &mut tails[i];
        *min = min.clone().min(nmin);
        *max = max.clone().max(nmax);
    }

    let two = T::from_index(2);
    let four = T::from_index(4);
    let mut level = 0;
    let mut steps = Vec::new();
    while hi.clone() - lo.clone() > tol {
        let width = hi.clone() - lo.clone();
        let mid = (lo.clone() + hi.clone()) / two.clone();
        let quarter = width.clone() / four.clone();
        // a kept segment must clear the tail by an eighth of its own width
        let eighth = width / T::from_index(16);
        let candidates = [
            (Segment::Lower, lo.clone(), mid.clone()),
            (Segment::Middle, lo.clone() + quarter.clone(), hi.clone() - quarter),
            (Segment::Upper, mid, hi.clone()),
        ];
        let chosen = loop {
            let (min, max) = &tails[level];
            let best = candidates
                .iter()
                .filter(|(_, a, b)| a <= min && max <= b)
                .map(|(seg, a, b)| {
                    let margin = (min.clone() - a.clone()).min(b.clone() - max.clone());
                    (margin, *seg, a.clone(), b.clone())
                })
                .fold(None::<(T, Segment, T, T)>, |best, c| match best {
                    Some(b) if b.0 >= c.0 => Some(b),
                    _ => Some(c),
                });
            let last = level + 1 == tails.len();
            match best {
                Some(found) if last || found.0 >= eighth => break found,
                None if last => return Ok((ShadowResult::bare(Verdict::NotCauchy), steps)),
                _ => level += 1,
            }
        };
        let (_, kept, a, b) = chosen;
        lo = a;
        hi = b;
        steps.push(BisectionStep { lo: lo.clone(), hi: hi.clone(), horizon: horizons[level], kept });
    }
    Ok((ShadowResult::bare(Verdict::Enclosure { lo, hi }), steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Seq};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn seq(num: &[i64], den: &[i64]) -> Seq {
        EventualSeq::ratfun(num.iter().map(|&v| q(v, 1)).collect(), den.iter().map(|&v| q(v, 1)).collect()).unwrap()
    }

    #[test]
    fn convergence_examples() {
        assert!(is_convergent(&seq(&[1, 3], &[2, 1])));
        assert!(!is_convergent(&Seq::even_indicator()));
        assert!(is_convergent(&Seq::constant(q(7, 1))));
    }

    #[test]
    fn exact_shadow_examples() {
        assert_eq!(shadow_exact(&seq(&[1, 3], &[2, 1])).verdict, Verdict::Exact(q(3, 1)));
        assert_eq!(shadow_exact(&Seq::reciprocal_index()).verdict, Verdict::Exact(q(0, 1)));
        assert_eq!(shadow_exact(&Seq::index_seq()).verdict, Verdict::Divergent);
        assert_eq!(shadow_exact(&Seq::even_indicator()).verdict, Verdict::NotCauchy);
    }

    #[test]
    fn refined_equivalence_examples() {
        let eps = Seq::reciprocal_index();
        assert!(refined_equivalent(&eps, &eps.patched([(5, q(42, 1))])));
        assert!(!refined_equivalent(&eps, &Seq::zero()));
        assert_eq!(shadow_exact(&eps), ShadowResult { verdict: Verdict::Exact(q(0, 1)), ..shadow_exact(&eps) });
        assert_eq!(shadow_exact(&eps).verdict, shadow_exact(&Seq::zero()).verdict);
        assert!(!refined_equivalent(&Seq::even_indicator(), &Seq::zero()));
    }

    #[test]
    fn epimorphism_examples() {
        assert_eq!(epimorphism_check(&seq(&[1, 3], &[2, 1]), &Seq::reciprocal_index()), Ok(true));
        let one = Seq::constant(q(1, 1));
        assert_eq!(epimorphism_check(&one, &one), Ok(true));
        assert!(matches!(
            epimorphism_check(&Seq::index_seq(), &Seq::reciprocal_index()),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn bisection_examples() {
        let h = default_horizons();
        let r = bisection_shadow(|n| q(1, n as i64), q(0, 1), q(1, 1), q(1, 8), &h).unwrap();
        let Verdict::Enclosure { lo, hi } = &r.verdict else { panic!("{r}") };
        assert!(hi.clone() - lo.clone() <= q(1, 8));
        assert!(r.contains(&q(0, 1)));

        let r = bisection_shadow(|_| q(1, 2), q(0, 1), q(1, 1), q(1, 4), &h).unwrap();
        assert!(r.contains(&q(1, 2)), "{r}");

        let r = bisection_shadow(|n| q((n % 2) as i64, 1), q(0, 1), q(1, 1), q(1, 4), &h).unwrap();
        assert_eq!(r.verdict, Verdict::NotCauchy);
    }

    #[test]
    fn bisection_rejects_bad_arguments() {
        let h = default_horizons();
        assert_eq!(bisection_shadow(|_| q(0, 1), q(1, 1), q(1, 1), q(1, 8), &h), Err(Error::InvalidBounds));
        assert_eq!(bisection_shadow(|_| q(0, 1), q(0, 1), q(1, 1), q(0, 1), &h), Err(Error::ToleranceNotPositive));
    }

    #[test]
    fn equal_margins_prefer_the_lower_half() {
        // tail {1/4, 1/2}: the lower half and the middle half both fit with margin 0
        let (r, steps) =
            bisection_trace(|n| if n % 2 == 0 { q(1, 2) } else { q(1, 4) }, q(0, 1), q(1, 1), q(1, 2), &[1]).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].kept, Segment::Lower);
        assert_eq!(r.verdict, Verdict::Enclosure { lo: q(0, 1), hi: q(1, 2) });
    }
}
