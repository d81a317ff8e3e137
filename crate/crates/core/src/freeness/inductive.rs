//! Inductive freeness through addition-deletion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CertificateCheck, Exponents};
use crate::arrangement::{Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::guard;

/// A derivation tree. `Step` nodes name the deleted hyperplane by its
/// covector; the deletion subtree certifies `A' = A ∖ {H₀}` and the
/// restriction subtree certifies `A'' = A^{H₀}` in the echelon chart of `H₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum InductiveNode {
    Empty {
        exponents: Exponents,
    },
    /// Rank at most 2.
    Base {
        rank: usize,
        size: usize,
        exponents: Exponents,
    },
    Step {
        deleted: Vec<Scalar>,
        exponents: Exponents,
        deletion: Box<InductiveNode>,
        restriction: Box<InductiveNode>,
    },
}

impl InductiveNode {
    pub fn exponents(&self) -> &Exponents {
        match self {
            InductiveNode::Empty { exponents }
            | InductiveNode::Base { exponents, .. }
            | InductiveNode::Step { exponents, .. } => exponents,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            InductiveNode::Step {
                deletion, restriction, ..
            } => 1 + deletion.size() + restriction.size(),
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveCertificate {
    pub exponents: Exponents,
    pub tree: InductiveNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InductiveOutcome {
    Free { certificate: InductiveCertificate },
    NotFree { explored: u64, statement: String },
}

impl InductiveOutcome {
    pub fn is_free(&self) -> bool {
        matches!(self, InductiveOutcome::Free { .. })
    }

    pub fn certificate(&self) -> Option<&InductiveCertificate> {
        match self {
            InductiveOutcome::Free { certificate } => Some(certificate),
            InductiveOutcome::NotFree { .. } => None,
        }
    }

    pub fn exponents(&self) -> Option<&Exponents> {
        self.certificate().map(|c| &c.exponents)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InductiveOptions {
    /// Accept rank ≤ 2 arrangements directly with exponents `(1, |A|-1, 0, …)`.
    /// When off, the recursion runs down to empty arrangements.
    pub rank2_base: bool,
}

impl Default for InductiveOptions {
    fn default() -> Self {
        InductiveOptions { rank2_base: true }
    }
}

fn base_exponents(dim: usize, rank: usize, size: usize) -> Exponents {
    let mut v = vec![0; dim];
    match rank {
        0 => {}
        1 => v[dim - 1] = 1,
        _ => {
            v[dim - 2] = 1;
            v[dim - 1] = size - 1;
        }
    }
    Exponents::new(v)
}

/// Whether `(exp A, exp A', exp A'')` has the shape
/// `(b_1, …, b_ℓ)`, `(b_1, …, b_{ℓ-1}, b_ℓ - 1)`, `(b_1, …, b_{ℓ-1})`.
pub fn addition_deletion_pattern(exp: &Exponents, deletion: &Exponents, restriction: &Exponents) -> bool {
    if exp.len() != deletion.len() || restriction.len() + 1 != exp.len() {
        return false;
    }
    match exp.leftover(restriction) {
        Some(b) if b >= 1 => restriction.with(b - 1) == *deletion,
        _ => false,
    }
}

struct Solver {
    opts: InductiveOptions,
    memo: HashMap<(usize, Vec<Hyperplane>), Option<InductiveNode>>,
}

impl Solver {
    fn solve(&mut self, a: &Arrangement) -> Option<InductiveNode> {
        let key = a.canonical_key();
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let canonical = Arrangement::new(a.field(), key.0, key.1.clone()).expect("distinct hyperplanes");
        let result = self.solve_canonical(&canonical);
        self.memo.insert(key, result.clone());
        result
    }

    fn solve_canonical(&mut self, a: &Arrangement) -> Option<InductiveNode> {
        if a.is_empty() {
            return Some(InductiveNode::Empty {
                exponents: Exponents::zeros(a.dim()),
            });
        }
        let rank = a.rank();
        if self.opts.rank2_base && rank <= 2 {
            return Some(InductiveNode::Base {
                rank,
                size: a.len(),
                exponents: base_exponents(a.dim(), rank, a.len()),
            });
        }
        for i in 0..a.len() {
            let Some(del) = self.solve(&a.deletion(i)) else {
                continue;
            };
            let Some(res) = self.solve(&a.restriction_to(i)) else {
                continue;
            };
            if let Some(b) = del.exponents().leftover(res.exponents()) {
                return Some(InductiveNode::Step {
                    deleted: a.get(i).covector().to_vec(),
                    exponents: res.exponents().with(b + 1),
                    deletion: Box::new(del),
                    restriction: Box::new(res),
                });
            }
        }
        None
    }
}

/// Searches for an addition-deletion derivation of `a`.
pub fn check_inductively_free(a: &Arrangement) -> Result<InductiveOutcome> {
    check_inductively_free_with(a, InductiveOptions::default())
}

/// Every deletion hyperplane is tried at every level, with results memoized
/// on the sorted hyperplane list of each intermediate arrangement.
pub fn check_inductively_free_with(a: &Arrangement, opts: InductiveOptions) -> Result<InductiveOutcome> {
    guard::check(
        "arrangement size for inductive freeness",
        a.len() as u128,
        guard::MAX_INDUCTIVE_HYPERPLANES as u128,
    )?;
    let mut solver = Solver {
        opts,
        memo: HashMap::new(),
    };
    Ok(match solver.solve(a) {
        Some(tree) => InductiveOutcome::Free {
            certificate: InductiveCertificate {
                exponents: tree.exponents().clone(),
                tree,
            },
        },
        None => InductiveOutcome::NotFree {
            explored: solver.memo.len() as u64,
            statement: "no deletion hyperplane admits an addition-deletion derivation".into(),
        },
    })
}

fn check_node(a: &Arrangement, node: &InductiveNode, path: &str, problems: &mut Vec<String>) {
    let here = if path.is_empty() { "root" } else { path };
    if node.exponents().len() != a.dim() {
        problems.push(format!(
            "{here}: {} exponents for dimension {}",
            node.exponents().len(),
            a.dim()
        ));
        return;
    }
    match node {
        InductiveNode::Empty { exponents } => {
            if !a.is_empty() {
                problems.push(format!(
                    "{here}: leaf claims an empty arrangement but has {} hyperplanes",
                    a.len()
                ));
            } else if *exponents != Exponents::zeros(a.dim()) {
                problems.push(format!("{here}: empty arrangement must have zero exponents"));
            }
        }
        InductiveNode::Base { exponents, .. } => {
            let rank = a.rank();
            if a.is_empty() || rank > 2 {
                problems.push(format!(
                    "{here}: base case needs a nonempty arrangement of rank at most 2, found rank {rank}"
                ));
            } else if *exponents != base_exponents(a.dim(), rank, a.len()) {
                problems.push(format!("{here}: wrong base exponents {exponents}"));
            }
        }
        InductiveNode::Step {
            deleted,
            exponents,
            deletion,
            restriction,
        } => {
            let idx = Hyperplane::new(a.field(), deleted.clone())
                .ok()
                .and_then(|h| a.position(&h));
            let Some(i) = idx else {
                problems.push(format!("{here}: deleted hyperplane is not in the arrangement"));
                return;
            };
            check_node(&a.deletion(i), deletion, &format!("{path}/d"), problems);
            check_node(&a.restriction_to(i), restriction, &format!("{path}/r"), problems);
            if !addition_deletion_pattern(exponents, deletion.exponents(), restriction.exponents()) {
                problems.push(format!(
                    "{here}: exponents {} / {} / {} break the addition-deletion pattern",
                    exponents,
                    deletion.exponents(),
                    restriction.exponents()
                ));
            }
        }
    }
}

/// Re-checks a derivation tree against `a` without searching.
pub fn verify_inductive_certificate(a: &Arrangement, cert: &InductiveCertificate) -> Result<CertificateCheck> {
    let mut problems = Vec::new();
    check_node(a, &cert.tree, "", &mut problems);
    if cert.exponents != *cert.tree.exponents() {
        problems.push(format!(
            "claimed exponents {} differ from the tree's {}",
            cert.exponents,
            cert.tree.exponents()
        ));
    }
    Ok(CertificateCheck::from_problems(problems))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    /// Index in the original arrangement of the hyperplane added.
    pub index: usize,
    /// Number of hyperplanes after adding it.
    pub size: usize,
    pub restriction_size: usize,
    pub exponents_before: Exponents,
    pub restriction_exponents: Option<Exponents>,
    pub exponents_after: Option<Exponents>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub ok: bool,
    pub steps: Vec<ChainStep>,
    pub exponents: Option<Exponents>,
}

/// Adds the hyperplanes of `a` one at a time in `order`, checking at each
/// step that the restriction to the new hyperplane is inductively free with
/// exponents contained in those of the previous prefix. Stops at the first
/// failing step.
pub fn verify_inductive_chain(a: &Arrangement, order: &[usize]) -> Result<ChainReport> {
    let mut seen = vec![false; a.len()];
    if order.len() != a.len()
        || order
            .iter()
            .any(|&i| i >= a.len() || std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::NotAPermutation);
    }
    let mut exp = Exponents::zeros(a.dim());
    let mut steps = Vec::with_capacity(order.len());
    for (n, &index) in order.iter().enumerate() {
        let prefix = a.subarrangement(&order[..=n])?;
        let restriction = prefix.restriction_to(n);
        let res_exp = check_inductively_free(&restriction)?.exponents().cloned();
        let after = res_exp.as_ref().and_then(|r| exp.leftover(r).map(|b| r.with(b + 1)));
        let ok = after.is_some();
        steps.push(ChainStep {
            index,
            size: n + 1,
            restriction_size: restriction.len(),
            exponents_before: exp.clone(),
            restriction_exponents: res_exp,
            exponents_after: after.clone(),
            ok,
        });
        match after {
            Some(e) => exp = e,
            None => {
                return Ok(ChainReport {
                    ok: false,
                    steps,
                    exponents: None,
                })
            }
        }
    }
    Ok(ChainReport {
        ok: true,
        steps,
        exponents: Some(exp),
    })
}
