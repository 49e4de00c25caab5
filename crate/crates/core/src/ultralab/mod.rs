//! Finite truncations of the filter combinatorics behind P-points.
//!
//! A [`FilterScene`] lives on the universe `{1..N}`: a partition into cells
//! and, optionally, an inclusion-decreasing chain `X_1 ⊇ X_2 ⊇ ... ⊇ X_d`
//! with `X_1` the whole universe. On it we can run the two combinatorial
//! moves that relate P-points to convergence on a dominant set: checking
//! that a candidate meets every cell in few points, and building the
//! diagonal sequence `f(i) = 1/n` for `i ∈ X_n \ X_{n+1}`, which oscillates
//! on any set meeting two consecutive strata.
//!
//! At this scale "finite" is rendered as "at most `bound` elements"; nothing
//! here decides anything about an actual ultrafilter.

mod scene_file;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use scene_file::parse_scene;

pub type IndexSet = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterScene {
    universe: usize,
    partition: Vec<IndexSet>,
    chain: Option<Vec<IndexSet>>,
}

impl FilterScene {
    /// Validates that `partition` consists of nonempty, pairwise disjoint
    /// cells covering `{1..universe}`. The chain is checked when used.
    pub fn new(universe: usize, partition: Vec<IndexSet>, chain: Option<Vec<IndexSet>>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::InvalidPartition("universe must be nonempty".into()));
        }
        let mut seen = IndexSet::new();
        for (c, cell) in partition.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::InvalidPartition(format!("cell {} is empty", c + 1)));
            }
            for &i in cell {
                if i == 0 || i > universe {
                    return Err(Error::InvalidPartition(format!("index {i} is outside 1..={universe}")));
                }
                if !seen.insert(i) {
                    return Err(Error::InvalidPartition(format!("index {i} is in two cells")));
                }
            }
        }
        if seen.len() != universe {
            let missing = (1..=universe).find(|i| !seen.contains(i)).expect("some index uncovered");
            return Err(Error::InvalidPartition(format!("index {missing} is in no cell")));
        }
        Ok(Self { universe, partition, chain })
    }

    /// A scene whose partition is the single cell `{1..universe}`.
    pub fn with_chain(universe: usize, chain: Vec<IndexSet>) -> Result<Self> {
        Self::new(universe, vec![(1..=universe).collect()], Some(chain))
    }

    /// Splits `{1..universe}` into consecutive blocks of the given sizes.
    pub fn blocks(sizes: &[usize]) -> Result<Self> {
        let mut next = 1;
        let cells = sizes
            .iter()
            .map(|&s| {
                let cell = (next..next + s).collect();
                next += s;
                cell
            })
            .collect();
        Self::new(next - 1, cells, None)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn partition(&self) -> &[IndexSet] {
        &self.partition
    }

    pub fn chain(&self) -> Option<&[IndexSet]> {
        self.chain.as_deref()
    }

    /// The strata `X_n \ X_{n+1}`, with `X_{d+1}` empty.
    pub fn strata(&self) -> Result<Vec<IndexSet>> {
        let chain = self.validated_chain()?;
        Ok(chain
            .iter()
            .enumerate()
            .map(|(n, x)| match chain.get(n + 1) {
                Some(next) => x.difference(next).copied().collect(),
                None => x.clone(),
            })
            .collect())
    }

    fn validated_chain(&self) -> Result<&[IndexSet]> {
        let chain = self.chain.as_deref().ok_or(Error::MissingChain)?;
        let full: IndexSet = (1..=self.universe).collect();
        match chain.first() {
            Some(first) if *first == full => {}
            _ => return Err(Error::ChainNotDecreasing(1)),
        }
        for (n, pair) in chain.windows(2).enumerate() {
            if !pair[1].is_subset(&pair[0]) {
                return Err(Error::ChainNotDecreasing(n + 2));
            }
        }
        Ok(chain)
    }
}

/// Whether `candidate` meets every cell in at most `bound` indices.
pub fn check_pseudo_intersection(scene: &FilterScene, candidate: &IndexSet, bound: usize) -> Result<bool> {
    if let Some(&bad) = candidate.iter().find(|&&i| i == 0 || i > scene.universe) {
        return Err(Error::CandidateOutOfUniverse(bad));
    }
    Ok(scene.partition.iter().all(|cell| cell.intersection(candidate).count() <= bound))
}

/// One representative per cell: the smallest index of each.
pub fn greedy_pseudo_intersection(scene: &FilterScene) -> IndexSet {
    scene.partition.iter().filter_map(|cell| cell.first().copied()).collect()
}

/// A sequence on the finite universe, keyed by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqTable<T> {
    values: BTreeMap<usize, T>,
}

impl<T: Scalar> SeqTable<T> {
    pub fn get(&self, i: usize) -> Option<&T> {
        self.values.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.values.iter().map(|(&i, v)| (i, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T: Scalar> FromIterator<(usize, T)> for SeqTable<T> {
    fn from_iter<I: IntoIterator<Item = (usize, T)>>(iter: I) -> Self {
        Self { values: iter.into_iter().collect() }
    }
}

/// `f(i) = 1/n` for the unique `n` with `i ∈ X_n \ X_{n+1}`.
pub fn build_diagonal_sequence<T: Scalar>(scene: &FilterScene) -> Result<SeqTable<T>> {
    let strata = scene.strata()?;
    Ok(strata
        .iter()
        .enumerate()
        .flat_map(|(n, stratum)| {
            let value = T::one() / T::from_index(n as u64 + 1);
            stratum.iter().map(move |&i| (i, value.clone()))
        })
        .collect())
}

/// `max |f(i) - f(j)|` over `i, j` in `subset` with `i, j >= from_index`;
/// zero when fewer than two such indices are in the table.
pub fn oscillation_on<T: Scalar>(table: &SeqTable<T>, subset: &IndexSet, from_index: usize) -> T {
    let mut vals = subset.range(from_index..).filter_map(|&i| table.get(i));
    let Some(first) = vals.next() else {
        return T::zero();
    };
    let (min, max) = vals.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
    max.clone() - min.clone()
}
