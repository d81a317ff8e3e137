//! Constructive freeness: MAT-steps, MAT- and MAT*-partitions, and
//! inductive freeness through addition-deletion.
//!
//! Nothing here decides freeness of the derivation module in general. Every
//! "free" verdict is tied to the construction that certifies it.

mod cover;
mod inductive;
mod mat;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cover::{avoiding_point, covering_points, covers_by_union, CoverMethod};
pub use inductive::{
    addition_deletion_pattern, check_inductively_free, check_inductively_free_with, verify_inductive_certificate,
    verify_inductive_chain, ChainReport, ChainStep, InductiveCertificate, InductiveNode, InductiveOptions,
    InductiveOutcome,
};
pub use mat::{
    find_mat_partition, find_mat_partition_with, find_matstar_partition, mat_step_check, verify_certificate,
    verify_mat_partition, verify_matstar_partition, Condition, CoveredPoint, FailureDetail, MatCertificate,
    PartitionFailure, PartitionVerdict, Refutation, SearchOptions, SearchOutcome, SearchStats, StepEvidence,
    StepFailure, StepReport,
};

/// MAT uses the union-avoidance condition (b); MAT* the lattice condition (b*).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "MAT")]
    Mat,
    #[serde(rename = "MAT*")]
    MatStar,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Mat => "MAT",
            Variant::MatStar => "MAT*",
        })
    }
}

/// Result of re-checking a certificate against an arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub problems: Vec<String>,
}

impl CertificateCheck {
    pub fn from_problems(problems: Vec<String>) -> CertificateCheck {
        CertificateCheck {
            valid: problems.is_empty(),
            problems,
        }
    }
}

/// A multiset of exponents, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Exponents(Vec<usize>);

impl From<Vec<usize>> for Exponents {
    fn from(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        Exponents(v)
    }
}

impl From<Exponents> for Vec<usize> {
    fn from(e: Exponents) -> Self {
        e.0
    }
}

impl Exponents {
    pub fn new(values: Vec<usize>) -> Exponents {
        values.into()
    }

    pub fn zeros(dim: usize) -> Exponents {
        Exponents(vec![0; dim])
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// Highest exponent, 0 when there are none.
    pub fn max(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// How many entries equal the highest exponent.
    pub fn top_multiplicity(&self) -> usize {
        let e = self.max();
        self.0.iter().filter(|&&x| x == e).count()
    }

    /// If `sub` is a sub-multiset of `self` with exactly one entry fewer,
    /// the leftover entry.
    pub fn leftover(&self, sub: &Exponents) -> Option<usize> {
        if sub.len() + 1 != self.len() {
            return None;
        }
        let mut rest = self.0.clone();
        for x in &sub.0 {
            let pos = rest.iter().position(|y| y == x)?;
            rest.remove(pos);
        }
        rest.pop()
    }

    /// Multiset inclusion.
    pub fn is_subset_of(&self, other: &Exponents) -> bool {
        let mut rest = other.0.clone();
        self.0.iter().all(|x| match rest.iter().position(|y| y == x) {
            Some(pos) => {
                rest.remove(pos);
                true
            }
            None => false,
        })
    }

    /// `self ∪ {extra}`.
    pub fn with(&self, extra: usize) -> Exponents {
        let mut v = self.0.clone();
        v.push(extra);
        v.into()
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Ordered blocks of hyperplane indices. Block order matters, order within
/// a block does not (blocks are kept sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> OrderedPartition {
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        OrderedPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// The first `k` blocks.
    pub fn prefix(&self, k: usize) -> OrderedPartition {
        OrderedPartition {
            blocks: self.blocks[..k].to_vec(),
        }
    }

    /// Checks that the blocks are nonempty, disjoint, and cover `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            for &i in b {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::NotAPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::NotAPartition(format!("index {missing} is not covered")));
        }
        Ok(())
    }
}

/// Dual-partition exponents: `e_i = |{k : |π_k| >= ℓ - i + 1}|`.
pub fn exponents_from_partition(dim: usize, partition: &OrderedPartition) -> Result<Exponents> {
    exponents_from_block_sizes(dim, &partition.block_sizes())
}

pub fn exponents_from_block_sizes(dim: usize, sizes: &[usize]) -> Result<Exponents> {
    if let Some(&size) = sizes.iter().find(|&&s| s > dim) {
        return Err(Error::BlockTooLarge { size, dim });
    }
    let values = (1..=dim)
        .map(|i| sizes.iter().filter(|&&s| s > dim - i).count())
        .collect();
    Ok(Exponents::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_partition_examples() {
        assert_eq!(exponents_from_block_sizes(3, &[3, 2, 1]).unwrap().values(), &[1, 2, 3]);
        assert_eq!(exponents_from_block_sizes(3, &[3]).unwrap().values(), &[1, 1, 1]);
        assert_eq!(
            exponents_from_block_sizes(4, &[3, 2, 1]).unwrap().values(),
            &[0, 1, 2, 3]
        );
        assert_eq!(exponents_from_block_sizes(3, &[]).unwrap().values(), &[0, 0, 0]);
        assert_eq!(
            exponents_from_block_sizes(2, &[3]),
            Err(Error::BlockTooLarge { size: 3, dim: 2 })
        );
    }

    // The dual partition of a partition of |A| has the same total.
    #[test]
    fn dual_partition_sums_to_size() {
        for sizes in [vec![3, 3, 1], vec![2, 2, 2, 2], vec![4, 1], vec![1]] {
            let e = exponents_from_block_sizes(4, &sizes).unwrap();
            assert_eq!(e.sum(), sizes.iter().sum::<usize>());
        }
    }

    #[test]
    fn multiset_helpers() {
        let e = Exponents::new(vec![3, 1, 2]);
        assert_eq!(e.values(), &[1, 2, 3]);
        assert_eq!(e.leftover(&Exponents::new(vec![1, 3])), Some(2));
        assert_eq!(e.leftover(&Exponents::new(vec![1, 4])), None);
        assert!(Exponents::new(vec![1, 2]).is_subset_of(&e));
        assert!(!Exponents::new(vec![2, 2]).is_subset_of(&e));
        assert_eq!(Exponents::new(vec![1, 2, 2]).top_multiplicity(), 2);
        assert_eq!(e.to_string(), "(1,2,3)");
    }

    #[test]
    fn partition_validation() {
        let p = OrderedPartition::new(vec![vec![2, 0, 1], vec![3]]);
        assert_eq!(p.blocks()[0], vec![0, 1, 2]);
        assert!(p.validate(4).is_ok());
        assert!(matches!(p.validate(5), Err(Error::NotAPartition(_))));
        assert!(matches!(p.validate(3), Err(Error::IndexOutOfRange { .. })));
        assert!(OrderedPartition::new(vec![vec![0], vec![0]]).validate(1).is_err());
        assert!(OrderedPartition::new(vec![vec![]]).validate(0).is_err());
    }
}
