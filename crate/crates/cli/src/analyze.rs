use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use matfree::arrangement::Arrangement;
use matfree::freeness::{
    check_inductively_free, find_mat_partition, Exponents, InductiveCertificate, InductiveOutcome, MatCertificate,
    Refutation, SearchOutcome, Variant,
};
use matfree::lattice::{build_lattice, format_polynomial, polynomial_from_roots, LatticeDump};

use crate::{hyperplane_name, CliResult};

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub mat: bool,
    pub matstar: bool,
    pub indfree: bool,
    pub timing: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            mat: true,
            matstar: true,
            indfree: true,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementSummary {
    pub field: String,
    pub dim: usize,
    pub size: usize,
    pub rank: usize,
    pub polynomial: String,
    pub hyperplanes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub profile: Vec<usize>,
    #[serde(flatten)]
    pub dump: LatticeDump,
    pub charpoly_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatVerdict {
    pub variant: Variant,
    pub free: bool,
    pub certificate: Option<MatCertificate>,
    pub refutation: Option<Refutation>,
    /// Whether `χ(t) = ∏ (t - e_i)` for the certified exponents.
    pub charpoly_factors: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveVerdict {
    pub free: bool,
    pub certificate: Option<InductiveCertificate>,
    pub explored: Option<u64>,
    pub charpoly_factors: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub arrangement: ArrangementSummary,
    pub lattice: LatticeSummary,
    pub mat: Option<MatVerdict>,
    pub matstar: Option<MatVerdict>,
    pub inductive: Option<InductiveVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

fn factors(charpoly: &[i64], exp: &Exponents) -> bool {
    polynomial_from_roots(exp.values()) == charpoly
}

fn mat_verdict(a: &Arrangement, variant: Variant, charpoly: &[i64]) -> CliResult<MatVerdict> {
    Ok(match find_mat_partition(a, variant)? {
        SearchOutcome::Certificate { certificate, .. } => MatVerdict {
            variant,
            free: true,
            charpoly_factors: Some(factors(charpoly, &certificate.exponents)),
            certificate: Some(certificate),
            refutation: None,
        },
        SearchOutcome::Refutation(r) => MatVerdict {
            variant,
            free: false,
            certificate: None,
            refutation: Some(r),
            charpoly_factors: None,
        },
    })
}

pub fn analyze(a: &Arrangement, vars: &[String], opts: &AnalyzeOptions) -> CliResult<AnalysisReport> {
    let start = Instant::now();
    let lattice = build_lattice(a)?;
    let charpoly = lattice.characteristic_polynomial();
    let mat = opts.mat.then(|| mat_verdict(a, Variant::Mat, &charpoly)).transpose()?;
    let matstar = opts
        .matstar
        .then(|| mat_verdict(a, Variant::MatStar, &charpoly))
        .transpose()?;
    let inductive = if opts.indfree {
        Some(match check_inductively_free(a)? {
            InductiveOutcome::Free { certificate } => InductiveVerdict {
                free: true,
                charpoly_factors: Some(factors(&charpoly, &certificate.exponents)),
                certificate: Some(certificate),
                explored: None,
            },
            InductiveOutcome::NotFree { explored, .. } => InductiveVerdict {
                free: false,
                certificate: None,
                explored: Some(explored),
                charpoly_factors: None,
            },
        })
    } else {
        None
    };
    Ok(AnalysisReport {
        arrangement: ArrangementSummary {
            field: a.field().to_string(),
            dim: a.dim(),
            size: a.len(),
            rank: a.rank(),
            polynomial: a.defining_polynomial(vars),
            hyperplanes: (0..a.len()).map(|i| hyperplane_name(a, vars, i)).collect(),
        },
        lattice: LatticeSummary {
            profile: lattice.profile(),
            charpoly_text: format_polynomial(&charpoly),
            dump: lattice.dump(),
        },
        mat,
        matstar,
        inductive,
        timing_ms: opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn render_blocks(blocks: &[Vec<usize>], names: &[String]) -> String {
    let parts: Vec<String> = blocks
        .iter()
        .map(|b| b.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(", "))
        .collect();
    format!("({})", parts.join(" | "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_mat(out: &mut String, v: &MatVerdict, names: &[String]) {
    match (&v.certificate, &v.refutation) {
        (Some(c), _) => {
            writeln!(out, "{}-free: yes, exp {}", v.variant, c.exponents).unwrap();
            writeln!(out, "  partition {}", render_blocks(&c.blocks, names)).unwrap();
            if let Some(f) = v.charpoly_factors {
                writeln!(out, "  charpoly factors over exp: {}", yes_no(f)).unwrap();
            }
        }
        (None, Some(r)) => {
            writeln!(out, "{}-free: no ({} states explored)", v.variant, r.explored_states).unwrap();
        }
        (None, None) => {}
    }
}

pub fn render(r: &AnalysisReport) -> String {
    let a = &r.arrangement;
    let mut out = String::new();
    writeln!(
        out,
        "field {}  dim {}  hyperplanes {}  rank {}",
        a.field, a.dim, a.size, a.rank
    )
    .unwrap();
    writeln!(out, "Q = {}", a.polynomial).unwrap();
    writeln!(out, "flats per rank: {}", join(&r.lattice.profile, " ")).unwrap();
    writeln!(out, "chi(t) = {}", r.lattice.charpoly_text).unwrap();
    for v in [&r.mat, &r.matstar].into_iter().flatten() {
        render_mat(&mut out, v, &a.hyperplanes);
    }
    if let Some(ind) = &r.inductive {
        match &ind.certificate {
            Some(c) => {
                writeln!(out, "inductively free: yes, exp {}", c.exponents).unwrap();
                if let Some(f) = ind.charpoly_factors {
                    writeln!(out, "  charpoly factors over exp: {}", yes_no(f)).unwrap();
                }
            }
            None => writeln!(out, "inductively free: no").unwrap(),
        }
    }
    if let Some(ms) = r.timing_ms {
        writeln!(out, "time {ms:.1} ms").unwrap();
    }
    out
}
