use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use matfree::arrangement::Arrangement;
use matfree::freeness::{find_mat_partition, Exponents, Variant};
use matfree::lattice::{build_lattice, lattice_isomorphic, IntersectionLattice};
use matfree::parse::{ArrangementFile, FieldDecl};

use crate::{hyperplane_name, CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRow {
    pub field: String,
    pub size: Option<usize>,
    pub profile: Option<Vec<usize>>,
    pub mat: Option<bool>,
    pub matstar: Option<bool>,
    pub exponents: Option<Exponents>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldComparison {
    pub rows: Vec<FieldRow>,
    /// `isomorphic[i][j]`, `None` when either field failed.
    pub isomorphic: Vec<Vec<Option<bool>>>,
}

fn analyze_field(file: &ArrangementFile, name: &str) -> (FieldRow, Option<IntersectionLattice>) {
    let mut row = FieldRow {
        field: name.to_string(),
        size: None,
        profile: None,
        mat: None,
        matstar: None,
        exponents: None,
        error: None,
    };
    let result = (|| -> matfree::Result<IntersectionLattice> {
        let field = FieldDecl::from_name(name)?.build()?;
        row.field = field.to_string();
        let a = file.realize_over(&field)?;
        let lattice = build_lattice(&a)?;
        row.size = Some(a.len());
        row.profile = Some(lattice.profile());
        let mat = find_mat_partition(&a, Variant::Mat)?;
        let star = find_mat_partition(&a, Variant::MatStar)?;
        row.mat = Some(mat.is_certificate());
        row.matstar = Some(star.is_certificate());
        row.exponents = star.certificate().map(|c| c.exponents.clone());
        Ok(lattice)
    })();
    match result {
        Ok(l) => (row, Some(l)),
        Err(e) => {
            row.error = Some(e.to_string());
            (row, None)
        }
    }
}

/// Realizes a polynomial arrangement file over each named field. Failures
/// over one field (a factor vanishing, two factors coinciding, an unknown
/// field) are reported in that field's row.
pub fn compare_fields(text: &str, fields: &[String]) -> CliResult<FieldComparison> {
    let file = ArrangementFile::parse(text)?;
    if !file.is_polynomial() {
        return Err(CliError::Usage("compare-fields needs a file with a poly line".into()));
    }
    let (rows, lattices): (Vec<_>, Vec<_>) = fields.iter().map(|f| analyze_field(&file, f)).unzip();
    let isomorphic = lattices
        .iter()
        .map(|x| {
            lattices
                .iter()
                .map(|y| match (x, y) {
                    (Some(x), Some(y)) => Some(lattice_isomorphic(x, y).is_some()),
                    _ => None,
                })
                .collect()
        })
        .collect();
    Ok(FieldComparison { rows, isomorphic })
}

fn opt_yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

pub fn render_fields(c: &FieldComparison) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<22} {:>4}  {:<14} {:<4} {:<5} exp",
        "field", "|A|", "profile", "MAT", "MAT*"
    )
    .unwrap();
    for r in &c.rows {
        if let Some(e) = &r.error {
            writeln!(out, "{:<22} error: {e}", r.field).unwrap();
            continue;
        }
        let profile = r
            .profile
            .as_ref()
            .map(|p| p.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        writeln!(
            out,
            "{:<22} {:>4}  {:<14} {:<4} {:<5} {}",
            r.field,
            r.size.unwrap_or(0),
            profile,
            opt_yes_no(r.mat),
            opt_yes_no(r.matstar),
            r.exponents.as_ref().map_or("-".into(), Exponents::to_string)
        )
        .unwrap();
    }
    writeln!(out, "lattice isomorphism:").unwrap();
    for (r, row) in c.rows.iter().zip(&c.isomorphic) {
        let cells: Vec<&str> = row.iter().map(|&b| opt_yes_no(b)).collect();
        writeln!(out, "  {:<20} {}", r.field, cells.join(" ")).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    pub profile_a: Vec<usize>,
    pub profile_b: Vec<usize>,
    pub bijection: Option<Vec<usize>>,
}

pub fn iso(a: &Arrangement, b: &Arrangement) -> CliResult<IsoReport> {
    let la = build_lattice(a)?;
    let lb = build_lattice(b)?;
    let bijection = lattice_isomorphic(&la, &lb);
    Ok(IsoReport {
        isomorphic: bijection.is_some(),
        profile_a: la.profile(),
        profile_b: lb.profile(),
        bijection,
    })
}

pub fn render_iso(r: &IsoReport, a: &Arrangement, va: &[String], b: &Arrangement, vb: &[String]) -> String {
    let mut out = String::new();
    let profile = |p: &[usize]| p.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    match &r.bijection {
        Some(s) => {
            writeln!(out, "isomorphic").unwrap();
            for (i, &j) in s.iter().enumerate() {
                writeln!(
                    out,
                    "  {i} -> {j}    {} -> {}",
                    hyperplane_name(a, va, i),
                    hyperplane_name(b, vb, j)
                )
                .unwrap();
            }
        }
        None => {
            writeln!(out, "not isomorphic").unwrap();
            if r.profile_a != r.profile_b {
                writeln!(
                    out,
                    "  flats per rank differ: {} vs {}",
                    profile(&r.profile_a),
                    profile(&r.profile_b)
                )
                .unwrap();
            } else {
                writeln!(out, "  exhaustive atom-bijection search found no isomorphism").unwrap();
            }
        }
    }
    out
}
