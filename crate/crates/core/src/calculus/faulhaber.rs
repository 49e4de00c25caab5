//! Closed forms for sums of powers.

use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Largest exponent [`power_sum`] accepts by default.
pub const DEFAULT_MAX_DEGREE: usize = 64;

/// Memoized Bernoulli numbers with `B_1 = +1/2`.
///
/// With that sign, `Σ_{j=0..m} C(m+1, j) B_j = m + 1` for every `m`, and the
/// Faulhaber polynomial sums `i^k` over `i = 1..n` with no correction term.
/// Lookups take a read lock; a miss extends the table under the write lock,
/// so fills are idempotent and readers never see a partial entry.
#[derive(Debug)]
pub struct BernoulliTable<T> {
    values: RwLock<Vec<T>>,
    max_degree: usize,
}

impl<T: Scalar> Default for BernoulliTable<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> BernoulliTable<T> {
    pub fn new() -> Self {
        Self::with_max_degree(DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(max_degree: usize) -> Self {
        Self { values: RwLock::new(vec![T::one()]), max_degree }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `B_m`.
    pub fn get(&self, m: usize) -> T {
        if let Some(v) = self.values.read().expect("bernoulli table poisoned").get(m) {
            return v.clone();
        }
        let mut values = self.values.write().expect("bernoulli table poisoned");
        while values.len() <= m {
            let next = values.len();
            let top = T::from_index(next as u64 + 1);
            let mut binom = T::one();
            let mut acc = T::zero();
            for (j, b) in values.iter().enumerate() {
                acc = acc + binom.clone() * b.clone();
                // C(next+1, j+1) from C(next+1, j)
                binom = binom * T::from_index((next + 1 - j) as u64) / T::from_index(j as u64 + 1);
            }
            values.push((top.clone() - acc) / top);
        }
        values[m].clone()
    }

    /// The degree-`k+1` polynomial `P_k` with `P_k(n) = Σ_{i=1..n} i^k`.
    pub fn power_sum(&self, k: usize) -> Result<Polynomial<T>> {
        if k > self.max_degree {
            return Err(Error::DegreeBoundExceeded { degree: k, bound: self.max_degree });
        }
        let top = k + 1;
        let mut coeffs = vec![T::zero(); top + 1];
        let mut binom = T::one();
        for j in 0..=k {
            coeffs[top - j] = binom.clone() * self.get(j) / T::from_index(top as u64);
            binom = binom * T::from_index((top - j) as u64) / T::from_index(j as u64 + 1);
        }
        let p = Polynomial::new(coeffs);
        debug_assert!({
            // P(n) - P(n - 1) = n^k
            let shifted = p.compose(&Polynomial::new(vec![-T::one(), T::one()]));
            &p - &shifted == Polynomial::monomial(T::one(), k)
        });
        Ok(p)
    }
}

/// [`BernoulliTable::power_sum`] on a fresh table with the default bound.
pub fn power_sum<T: Scalar>(k: usize) -> Result<Polynomial<T>> {
    BernoulliTable::new().power_sum(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn bernoulli_values() {
        let t = BernoulliTable::<Rational>::new();
        let expected = [q(1, 1), q(1, 2), q(1, 6), q(0, 1), q(-1, 30), q(0, 1), q(1, 42), q(0, 1), q(-1, 30)];
        for (m, b) in expected.iter().enumerate() {
            assert_eq!(&t.get(m), b, "B_{m}");
        }
        assert_eq!(t.get(12), q(-691, 2730));
    }

    #[test]
    fn small_power_sums() {
        let p0 = power_sum::<Rational>(0).unwrap();
        assert_eq!(p0.coeffs(), &[q(0, 1), q(1, 1)]);
        let p1 = power_sum::<Rational>(1).unwrap();
        assert_eq!(p1.coeffs(), &[q(0, 1), q(1, 2), q(1, 2)]);
        // n(n+1)(2n+1)/6 = n/6 + n^2/2 + n^3/3
        let p2 = power_sum::<Rational>(2).unwrap();
        assert_eq!(p2.coeffs(), &[q(0, 1), q(1, 6), q(1, 2), q(1, 3)]);
    }

    #[test]
    fn degree_bound() {
        let t = BernoulliTable::<Rational>::with_max_degree(4);
        assert!(t.power_sum(4).is_ok());
        assert_eq!(t.power_sum(5), Err(Error::DegreeBoundExceeded { degree: 5, bound: 4 }));
        assert!(power_sum::<Rational>(64).is_ok());
        assert!(power_sum::<Rational>(65).is_err());
    }

    #[test]
    fn concurrent_lookups_agree() {
        let t = BernoulliTable::<Rational>::new();
        let results: Vec<Rational> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4).map(|_| s.spawn(|| t.get(20))).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(results.iter().all(|r| *r == q(-174611, 330)));
    }
}
