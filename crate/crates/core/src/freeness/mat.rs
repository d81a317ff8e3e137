//! MAT-steps, MAT/MAT*-partition verification, and the partition search.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::cover::{avoiding_point, covering_points, covers_by_union, CoverMethod};
use super::{exponents_from_partition, CertificateCheck, Exponents, OrderedPartition, Variant};
use crate::arrangement::{Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::guard;
use crate::lattice::mask_indices;
use crate::linalg::{self, Subspace};

/// The condition of a MAT-step that failed. The first three read (a), (b)
/// or (b*), (c) for partitions and (1), (2) or (2*), (3) for single steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// The added hyperplanes are linearly independent.
    Rank,
    /// Their intersection is not covered by the union of the previous ones.
    Avoidance,
    /// Their intersection lies in no single previous hyperplane.
    AvoidanceStar,
    /// Each added hyperplane meets the previous ones in exactly `|A'| - e` flats.
    RestrictionCount,
    /// More hyperplanes added than the multiplicity of the highest exponent.
    Multiplicity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Rank => "(a) rank",
            Condition::Avoidance => "(b) union avoidance",
            Condition::AvoidanceStar => "(b*) hyperplane avoidance",
            Condition::RestrictionCount => "(c) restriction count",
            Condition::Multiplicity => "top exponent multiplicity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveredPoint {
    pub point: Vec<Scalar>,
    pub hyperplane: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureDetail {
    Rank {
        size: usize,
        rank: usize,
    },
    /// Every point of the center, each with a previous hyperplane containing it.
    Covered {
        points: Vec<CoveredPoint>,
    },
    ContainedIn {
        hyperplane: usize,
    },
    RestrictionCount {
        hyperplane: usize,
        expected: usize,
        found: usize,
    },
    Multiplicity {
        added: usize,
        multiplicity: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFailure {
    pub condition: Condition,
    pub detail: FailureDetail,
}

/// Outcome of [`mat_step_check`]. Indices in a failure refer to positions
/// in `A'` (previous hyperplanes) or in the added list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub ok: bool,
    pub failure: Option<StepFailure>,
    pub exponents: Option<Exponents>,
    pub witness: Option<Vec<Scalar>>,
    pub top_multiplicity: usize,
}

struct StepPass {
    rank: usize,
    witness: Option<Vec<Scalar>>,
    restriction_sizes: Vec<usize>,
}

/// Conditions (1)-(3), or (1), (2*), (3), with local indices.
fn check_step(
    prev: &Arrangement,
    added: &[Hyperplane],
    e: usize,
    variant: Variant,
) -> Result<std::result::Result<StepPass, StepFailure>> {
    let field = prev.field();
    let dim = prev.dim();
    let rows: Vec<&[Scalar]> = added.iter().map(Hyperplane::covector).collect();
    let rank = linalg::rank_of(field, dim, &rows);
    if rank != added.len() {
        return Ok(Err(StepFailure {
            condition: Condition::Rank,
            detail: FailureDetail::Rank {
                size: added.len(),
                rank,
            },
        }));
    }
    let center = Subspace::annihilated_by(field, dim, &rows);
    let mut witness = None;
    if !prev.is_empty() {
        match variant {
            Variant::MatStar => {
                if let Some(i) = prev.hyperplanes().iter().position(|h| h.contains(&center)) {
                    return Ok(Err(StepFailure {
                        condition: Condition::AvoidanceStar,
                        detail: FailureDetail::ContainedIn { hyperplane: i },
                    }));
                }
            }
            Variant::Mat if field.is_finite() => {
                let pts = covering_points(&center, prev.hyperplanes())?;
                match pts.iter().find(|(_, by)| by.is_none()) {
                    Some((p, _)) => witness = Some(p.clone()),
                    None => {
                        let points = pts
                            .into_iter()
                            .map(|(point, by)| CoveredPoint {
                                point,
                                hyperplane: by.expect("covered"),
                            })
                            .collect();
                        return Ok(Err(StepFailure {
                            condition: Condition::Avoidance,
                            detail: FailureDetail::Covered { points },
                        }));
                    }
                }
            }
            Variant::Mat => match prev.hyperplanes().iter().position(|h| h.contains(&center)) {
                Some(i) => {
                    return Ok(Err(StepFailure {
                        condition: Condition::Avoidance,
                        detail: FailureDetail::ContainedIn { hyperplane: i },
                    }))
                }
                None => witness = avoiding_point(&center, prev.hyperplanes())?,
            },
        }
    }
    let mut restriction_sizes = Vec::with_capacity(added.len());
    for (j, h) in added.iter().enumerate() {
        let found = prev.restriction_size(h)?;
        if prev.len() != found + e {
            return Ok(Err(StepFailure {
                condition: Condition::RestrictionCount,
                detail: FailureDetail::RestrictionCount {
                    hyperplane: j,
                    expected: prev.len().saturating_sub(e),
                    found,
                },
            }));
        }
        restriction_sizes.push(found);
    }
    Ok(Ok(StepPass {
        rank,
        witness,
        restriction_sizes,
    }))
}

/// Checks whether adding `added` to the free arrangement `prev` with
/// exponents `exp` is a MAT-step (or a MAT*-step), and if so reports the
/// new exponents `(e_1, …, e_{ℓ-q}, e+1, …, e+1)`.
pub fn mat_step_check(
    prev: &Arrangement,
    exp: &Exponents,
    added: &[Hyperplane],
    variant: Variant,
) -> Result<StepReport> {
    if exp.len() != prev.dim() {
        return Err(Error::DimensionMismatch {
            expected: prev.dim(),
            found: exp.len(),
        });
    }
    for (j, h) in added.iter().enumerate() {
        if h.dim() != prev.dim() {
            return Err(Error::DimensionMismatch {
                expected: prev.dim(),
                found: h.dim(),
            });
        }
        if let Some(i) = prev.position(h) {
            return Err(Error::NotDisjoint(format!(
                "added hyperplane {j} is hyperplane {i} of A'"
            )));
        }
        if let Some(previous) = added[..j].iter().position(|x| x == h) {
            return Err(Error::DuplicateHyperplane { index: j, previous });
        }
    }
    let e = exp.max();
    let top = exp.top_multiplicity();
    let fail = |failure| StepReport {
        ok: false,
        failure: Some(failure),
        exponents: None,
        witness: None,
        top_multiplicity: top,
    };
    let pass = match check_step(prev, added, e, variant)? {
        Ok(p) => p,
        Err(f) => return Ok(fail(f)),
    };
    let q = added.len();
    if q > top {
        return Ok(fail(StepFailure {
            condition: Condition::Multiplicity,
            detail: FailureDetail::Multiplicity {
                added: q,
                multiplicity: top,
            },
        }));
    }
    let mut values = exp.values().to_vec();
    let l = values.len();
    for v in &mut values[l - q..] {
        *v += 1;
    }
    Ok(StepReport {
        ok: true,
        failure: None,
        exponents: Some(Exponents::new(values)),
        witness: pass.witness,
        top_multiplicity: top,
    })
}

/// Per-block evidence recorded in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEvidence {
    pub k: usize,
    pub block: Vec<usize>,
    pub rank: usize,
    pub restriction_sizes: Vec<usize>,
}

/// A verified MAT- or MAT*-partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatCertificate {
    pub variant: Variant,
    pub blocks: Vec<Vec<usize>>,
    pub exponents: Exponents,
    /// For MAT: a point of each block's center on no earlier hyperplane
    /// (`None` for the first block). Empty for MAT*.
    #[serde(default)]
    pub witnesses: Vec<Option<Vec<Scalar>>>,
    #[serde(default)]
    pub steps: Vec<StepEvidence>,
}

impl MatCertificate {
    pub fn partition(&self) -> OrderedPartition {
        OrderedPartition::new(self.blocks.clone())
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

/// Where a partition stops being a MAT-partition. `step` is `k`, the
/// number of blocks before the failing one; indices are global.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFailure {
    pub variant: Variant,
    pub step: usize,
    pub block: Vec<usize>,
    pub condition: Condition,
    pub detail: FailureDetail,
}

impl fmt::Display for PartitionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at k={} (block {:?}): {}",
            self.variant, self.step, self.block, self.condition
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionVerdict {
    Valid(MatCertificate),
    Invalid(PartitionFailure),
}

impl PartitionVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PartitionVerdict::Valid(_))
    }

    pub fn certificate(&self) -> Option<&MatCertificate> {
        match self {
            PartitionVerdict::Valid(c) => Some(c),
            PartitionVerdict::Invalid(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&PartitionFailure> {
        match self {
            PartitionVerdict::Valid(_) => None,
            PartitionVerdict::Invalid(f) => Some(f),
        }
    }
}

fn globalize(detail: FailureDetail, prev: &[usize], block: &[usize]) -> FailureDetail {
    match detail {
        FailureDetail::Covered { points } => FailureDetail::Covered {
            points: points
                .into_iter()
                .map(|p| CoveredPoint {
                    hyperplane: prev[p.hyperplane],
                    point: p.point,
                })
                .collect(),
        },
        FailureDetail::ContainedIn { hyperplane } => FailureDetail::ContainedIn {
            hyperplane: prev[hyperplane],
        },
        FailureDetail::RestrictionCount {
            hyperplane,
            expected,
            found,
        } => FailureDetail::RestrictionCount {
            hyperplane: block[hyperplane],
            expected,
            found,
        },
        other => other,
    }
}

/// Checks conditions (a), (b) or (b*), and (c) for every prefix
/// `A_k = π_1 ∪ … ∪ π_k`. Condition (b) is decided by enumeration over
/// finite fields and by prime avoidance over the rationals.
pub fn verify_mat_partition(
    a: &Arrangement,
    partition: &OrderedPartition,
    variant: Variant,
) -> Result<PartitionVerdict> {
    partition.validate(a.len())?;
    let mut prev: Vec<usize> = Vec::new();
    let mut witnesses = Vec::new();
    let mut steps = Vec::new();
    for (k, block) in partition.blocks().iter().enumerate() {
        let prev_arr = a.subarrangement(&prev)?;
        let added: Vec<Hyperplane> = block.iter().map(|&i| a.get(i).clone()).collect();
        match check_step(&prev_arr, &added, k, variant)? {
            Ok(pass) => {
                if variant == Variant::Mat {
                    witnesses.push(pass.witness);
                }
                steps.push(StepEvidence {
                    k,
                    block: block.clone(),
                    rank: pass.rank,
                    restriction_sizes: pass.restriction_sizes,
                });
            }
            Err(f) => {
                return Ok(PartitionVerdict::Invalid(PartitionFailure {
                    variant,
                    step: k,
                    block: block.clone(),
                    condition: f.condition,
                    detail: globalize(f.detail, &prev, block),
                }))
            }
        }
        prev.extend_from_slice(block);
    }
    Ok(PartitionVerdict::Valid(MatCertificate {
        variant,
        blocks: partition.blocks().to_vec(),
        exponents: exponents_from_partition(a.dim(), partition)?,
        witnesses,
        steps,
    }))
}

pub fn verify_matstar_partition(a: &Arrangement, partition: &OrderedPartition) -> Result<PartitionVerdict> {
    verify_mat_partition(a, partition, Variant::MatStar)
}

/// Re-verifies a certificate from scratch: the partition itself, the
/// claimed exponents, and every recorded witness point.
pub fn verify_certificate(a: &Arrangement, cert: &MatCertificate) -> Result<CertificateCheck> {
    let mut problems = Vec::new();
    let partition = cert.partition();
    match verify_mat_partition(a, &partition, cert.variant)? {
        PartitionVerdict::Invalid(f) => problems.push(f.to_string()),
        PartitionVerdict::Valid(fresh) => {
            if fresh.exponents != cert.exponents {
                problems.push(format!(
                    "claimed exponents {} but the partition gives {}",
                    cert.exponents, fresh.exponents
                ));
            }
        }
    }
    if !cert.witnesses.is_empty() && cert.witnesses.len() != cert.blocks.len() {
        problems.push("one witness entry per block expected".into());
    }
    let field = a.field();
    let mut prev: Vec<usize> = Vec::new();
    for (k, block) in cert.blocks.iter().enumerate() {
        if let Some(Some(w)) = cert.witnesses.get(k) {
            if w.len() != a.dim() || w.iter().any(|c| !field.contains(c)) {
                problems.push(format!("witness {k} is not a point of the ambient space"));
            } else {
                if let Some(&i) = block
                    .iter()
                    .find(|&&i| i < a.len() && !a.get(i).contains_point(field, w))
                {
                    problems.push(format!("witness {k} is not on hyperplane {i}"));
                }
                if let Some(&i) = prev.iter().find(|&&i| i < a.len() && a.get(i).contains_point(field, w)) {
                    problems.push(format!("witness {k} lies on earlier hyperplane {i}"));
                }
            }
        }
        prev.extend_from_slice(block);
    }
    Ok(CertificateCheck::from_problems(problems))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Overrides the method used for condition (b) over finite fields.
    pub cover_method: Option<CoverMethod>,
    /// Evaluate condition (b) with both finite-field methods and count disagreements.
    pub cross_check_covers: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub explored_states: u64,
    pub cover_queries: u64,
    pub cover_disagreements: u64,
}

/// An exhausted search: no ordered partition satisfies the conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub variant: Variant,
    pub explored_states: u64,
    pub cover_queries: u64,
    pub cover_disagreements: u64,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Certificate {
        certificate: MatCertificate,
        stats: SearchStats,
    },
    Refutation(Refutation),
}

impl SearchOutcome {
    pub fn is_certificate(&self) -> bool {
        matches!(self, SearchOutcome::Certificate { .. })
    }

    pub fn is_refutation(&self) -> bool {
        matches!(self, SearchOutcome::Refutation(_))
    }

    pub fn certificate(&self) -> Option<&MatCertificate> {
        match self {
            SearchOutcome::Certificate { certificate, .. } => Some(certificate),
            SearchOutcome::Refutation(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            SearchOutcome::Certificate { .. } => None,
            SearchOutcome::Refutation(r) => Some(r),
        }
    }
}

struct Search<'a> {
    a: &'a Arrangement,
    variant: Variant,
    opts: &'a SearchOptions,
    subspaces: Vec<Subspace>,
    full: u64,
    failed: HashSet<(u64, usize)>,
    blocks: Vec<Vec<usize>>,
    stats: SearchStats,
}

impl Search<'_> {
    fn avoids(&mut self, mask: u64, block: &[usize]) -> Result<bool> {
        if mask == 0 {
            return Ok(true);
        }
        let center = self.a.intersection_of(block);
        let prev = mask_indices(mask);
        if self.variant == Variant::MatStar {
            return Ok(prev.iter().all(|&i| !self.a.get(i).contains(&center)));
        }
        let hs: Vec<Hyperplane> = prev.iter().map(|&i| self.a.get(i).clone()).collect();
        if !self.a.field().is_finite() {
            return Ok(!covers_by_union(&center, &hs, CoverMethod::PrimeAvoidance)?);
        }
        self.stats.cover_queries += 1;
        let method = self.opts.cover_method.unwrap_or(CoverMethod::Enumerate);
        let covered = covers_by_union(&center, &hs, method)?;
        if self.opts.cross_check_covers {
            let other = match method {
                CoverMethod::Charpoly => CoverMethod::Enumerate,
                _ => CoverMethod::Charpoly,
            };
            if covers_by_union(&center, &hs, other)? != covered {
                self.stats.cover_disagreements += 1;
            }
        }
        Ok(!covered)
    }

    fn dfs(&mut self, mask: u64, k: usize) -> Result<bool> {
        if mask == self.full {
            return Ok(true);
        }
        if self.failed.contains(&(mask, k)) {
            return Ok(false);
        }
        self.stats.explored_states += 1;
        let prev = self.a.subarrangement_mask(mask);
        let candidates: Vec<usize> = (0..self.a.len())
            .filter(|&i| mask >> i & 1 == 0)
            .filter(|&i| prev.len() == prev.restriction_size_unchecked(&self.subspaces[i]) + k)
            .collect();
        let max_size = candidates.len().min(self.a.dim());
        for size in (1..=max_size).rev() {
            for block in candidates.iter().copied().combinations(size) {
                if self.a.rank_of(&block) != size || !self.avoids(mask, &block)? {
                    continue;
                }
                let next = block.iter().fold(mask, |m, &i| m | 1 << i);
                self.blocks.push(block);
                if self.dfs(next, k + 1)? {
                    return Ok(true);
                }
                self.blocks.pop();
            }
        }
        self.failed.insert((mask, k));
        Ok(false)
    }
}

/// Deterministic depth-first search for a MAT- or MAT*-partition.
pub fn find_mat_partition(a: &Arrangement, variant: Variant) -> Result<SearchOutcome> {
    find_mat_partition_with(a, variant, &SearchOptions::default())
}

pub fn find_matstar_partition(a: &Arrangement) -> Result<SearchOutcome> {
    find_mat_partition(a, Variant::MatStar)
}

/// At each state `(A_k, k)` the blocks tried are subsets of the hyperplanes
/// satisfying (c), in decreasing size and then lexicographic order; failed
/// states are memoized by `(A_k, k)`. The first partition found is returned.
pub fn find_mat_partition_with(a: &Arrangement, variant: Variant, opts: &SearchOptions) -> Result<SearchOutcome> {
    guard::check("arrangement size", a.len() as u128, guard::MAX_HYPERPLANES as u128)?;
    let full = if a.len() == 64 { u64::MAX } else { (1u64 << a.len()) - 1 };
    let mut search = Search {
        a,
        variant,
        opts,
        subspaces: a.hyperplanes().iter().map(|h| h.subspace(a.field())).collect(),
        full,
        failed: HashSet::new(),
        blocks: Vec::new(),
        stats: SearchStats::default(),
    };
    if search.dfs(0, 0)? {
        let partition = OrderedPartition::new(std::mem::take(&mut search.blocks));
        let certificate = match verify_mat_partition(a, &partition, variant)? {
            PartitionVerdict::Valid(c) => c,
            PartitionVerdict::Invalid(f) => panic!("search produced an invalid partition: {f}"),
        };
        Ok(SearchOutcome::Certificate {
            certificate,
            stats: search.stats,
        })
    } else {
        Ok(SearchOutcome::Refutation(Refutation {
            variant,
            explored_states: search.stats.explored_states,
            cover_queries: search.stats.cover_queries,
            cover_disagreements: search.stats.cover_disagreements,
            statement: format!("depth-first search over all admissible block sequences found no {variant}-partition"),
        }))
    }
}
