//! Exhaustive surveys: every set of normalized covectors over a small field.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use matfree::arrangement::{Arrangement, Hyperplane};
use matfree::exactfield::{FieldSpec, Scalar};
use matfree::freeness::{
    find_mat_partition, find_mat_partition_with, Exponents, SearchOptions, SearchOutcome, Variant,
};
use matfree::guard;
use matfree::lattice::build_lattice;
use matfree::parse::FieldDecl;

use crate::{CliError, CliResult};

/// Bound on the number of rows a survey may produce.
pub const MAX_ROWS: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub struct SurveyParams {
    pub field: String,
    pub dim: usize,
    pub max_hyperplanes: usize,
    pub cross_check: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub indices: Vec<usize>,
    pub profile: Vec<usize>,
    pub mat: bool,
    pub matstar: bool,
    pub exponents: Option<Exponents>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub rows: usize,
    pub mat_free: usize,
    pub matstar_free: usize,
    pub matstar_not_mat: usize,
    /// Every MAT-free row is MAT*-free.
    pub mat_implies_matstar: bool,
    pub cover_queries: u64,
    pub cover_disagreements: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survey {
    pub field: String,
    pub dim: usize,
    pub covectors: Vec<Vec<Scalar>>,
    pub rows: Vec<SurveyRow>,
    pub summary: SurveySummary,
}

/// Covectors whose first nonzero coordinate is 1, in lexicographic order
/// of their encodings.
pub fn normalized_covectors(field: &FieldSpec, dim: usize) -> CliResult<Vec<Vec<Scalar>>> {
    let q = field
        .cardinality()
        .ok_or_else(|| CliError::Usage("surveys need a finite field".into()))? as u128;
    let total = q.checked_pow(dim as u32).unwrap_or(u128::MAX);
    guard::check("survey ambient point count", total, guard::MAX_POINTS)?;
    let mut out = Vec::new();
    for n in 0..total {
        let mut digits = vec![0u32; dim];
        let mut r = n;
        for d in digits.iter_mut().rev() {
            *d = (r % q) as u32;
            r /= q;
        }
        if digits.iter().find(|&&d| d != 0) == Some(&1) {
            out.push(digits.into_iter().map(Scalar::Finite).collect());
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Nonempty subsets of `0..n` of size at most `m`, in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in start..n {
            cur.push(i);
            out.push(cur.clone());
            if cur.len() < m {
                go(n, m, i + 1, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, 0, &mut Vec::new(), &mut out);
    out
}

fn survey_row(a: &Arrangement, indices: Vec<usize>, opts: &SearchOptions) -> CliResult<(SurveyRow, u64, u64)> {
    let profile = build_lattice(a)?.profile();
    let mat = find_mat_partition_with(a, Variant::Mat, opts)?;
    let star = find_mat_partition(a, Variant::MatStar)?;
    let (queries, disagreements) = match &mat {
        SearchOutcome::Certificate { stats, .. } => (stats.cover_queries, stats.cover_disagreements),
        SearchOutcome::Refutation(r) => (r.cover_queries, r.cover_disagreements),
    };
    let exponents = mat.certificate().or(star.certificate()).map(|c| c.exponents.clone());
    Ok((
        SurveyRow {
            indices,
            profile,
            mat: mat.is_certificate(),
            matstar: star.is_certificate(),
            exponents,
        },
        queries,
        disagreements,
    ))
}

pub fn run(params: &SurveyParams) -> CliResult<Survey> {
    let field = FieldDecl::from_name(&params.field)?.build()?;
    if !field.is_finite() {
        return Err(CliError::Usage("surveys need a finite field".into()));
    }
    if params.dim == 0 {
        return Err(CliError::Usage("dimension must be positive".into()));
    }
    let covectors = normalized_covectors(&field, params.dim)?;
    let c = covectors.len();
    guard::check("survey covector count", c as u128, guard::MAX_HYPERPLANES as u128)?;
    guard::check_hard("survey covector count", c, guard::HARD_MAX_HYPERPLANES)?;
    let m = params.max_hyperplanes.min(c);
    let rows_total: u128 = (1..=m as u128).map(|k| binomial(c as u128, k)).sum();
    guard::check("survey row count", rows_total, MAX_ROWS)?;

    let hyperplanes: Vec<Hyperplane> = covectors
        .iter()
        .map(|v| Hyperplane::new(&field, v.clone()))
        .collect::<matfree::Result<_>>()?;
    let opts = SearchOptions {
        cover_method: None,
        cross_check_covers: params.cross_check,
    };
    let results: Vec<(SurveyRow, u64, u64)> = subsets(c, m)
        .into_par_iter()
        .map(|idx| {
            let hs = idx.iter().map(|&i| hyperplanes[i].clone()).collect();
            let a = Arrangement::new(&field, params.dim, hs)?;
            survey_row(&a, idx, &opts)
        })
        .collect::<CliResult<_>>()?;

    let mut summary = SurveySummary {
        rows: results.len(),
        mat_implies_matstar: true,
        ..SurveySummary::default()
    };
    let mut rows = Vec::with_capacity(results.len());
    for (row, q, d) in results {
        summary.mat_free += usize::from(row.mat);
        summary.matstar_free += usize::from(row.matstar);
        summary.matstar_not_mat += usize::from(row.matstar && !row.mat);
        summary.mat_implies_matstar &= !row.mat || row.matstar;
        summary.cover_queries += q;
        summary.cover_disagreements += d;
        rows.push(row);
    }
    Ok(Survey {
        field: field.to_string(),
        dim: params.dim,
        covectors,
        rows,
        summary,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_rows(s: &Survey) -> String {
    let mut out = String::new();
    for (i, c) in s.covectors.iter().enumerate() {
        let parts: Vec<String> = c.iter().map(Scalar::to_string).collect();
        writeln!(out, "covector {i}: {}", parts.join(" ")).unwrap();
    }
    for r in &s.rows {
        let idx: Vec<String> = r.indices.iter().map(usize::to_string).collect();
        let profile: Vec<String> = r.profile.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{{{}}}  profile {}  MAT {}  MAT* {}  exp {}",
            idx.join(","),
            profile.join(" "),
            yes_no(r.mat),
            yes_no(r.matstar),
            r.exponents.as_ref().map_or("-".into(), Exponents::to_string)
        )
        .unwrap();
    }
    out
}

pub fn render_summary(s: &Survey) -> String {
    let m = &s.summary;
    let mut out = format!(
        "{} dim {}: rows {}  MF {}  MF* {}  MF*\\MF {}  MF subset of MF*: {}\n",
        s.field,
        s.dim,
        m.rows,
        m.mat_free,
        m.matstar_free,
        m.matstar_not_mat,
        yes_no(m.mat_implies_matstar)
    );
    if m.cover_queries > 0 {
        writeln!(
            out,
            "cover queries {}  method disagreements {}",
            m.cover_queries, m.cover_disagreements
        )
        .unwrap();
    }
    out
}
