//! The two-field example: `xyz(x+y)(x+z)(y+z)` over GF(2) (called A) and
//! over GF(4) (called B).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use matfree::arrangement::Arrangement;
use matfree::exactfield::FieldSpec;
use matfree::freeness::{
    check_inductively_free, find_mat_partition, verify_certificate, verify_inductive_certificate, Exponents,
    MatCertificate, Refutation, Variant,
};
use matfree::lattice::{build_lattice, lattice_isomorphic};
use matfree::parse::parse_defining_polynomial;

use crate::CliResult;

pub const POLYNOMIAL: &str = "x*y*z*(x+y)*(x+z)*(y+z)";
pub const EXPECTED_EXPONENTS: [usize; 3] = [1, 2, 3];

pub fn vars() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

pub fn arrangement(field: &FieldSpec) -> CliResult<Arrangement> {
    Ok(parse_defining_polynomial(POLYNOMIAL, field, &vars())?)
}

/// Arrangement-file text for the example over `field` (e.g. `gf 2`).
pub fn file_text(field: &str) -> String {
    format!("field {field}\ndim 3\nvars x y z\npoly {POLYNOMIAL}\n")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentClaim {
    pub inductive_a: Option<Exponents>,
    pub inductive_b: Option<Exponents>,
    pub mat_b: Option<Exponents>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismClaim {
    pub profile_a: Vec<usize>,
    pub profile_b: Vec<usize>,
    pub bijection: Option<Vec<usize>>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatClaim {
    pub certificate_b: Option<MatCertificate>,
    pub certificate_b_verified: bool,
    pub refutation_a: Option<Refutation>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatStarClaim {
    pub certificate_a: Option<MatCertificate>,
    pub certificate_b: Option<MatCertificate>,
    pub verified: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub exponents: ExponentClaim,
    pub isomorphism: IsomorphismClaim,
    pub mat: MatClaim,
    pub matstar: MatStarClaim,
    pub summary: String,
    pub ok: bool,
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

pub fn run() -> CliResult<ExampleReport> {
    let a = arrangement(&FieldSpec::gf(2)?)?;
    let b = arrangement(&FieldSpec::gf(4)?)?;
    let expected = Exponents::new(EXPECTED_EXPONENTS.to_vec());

    let ind_a = check_inductively_free(&a)?;
    let ind_b = check_inductively_free(&b)?;
    let ind_ok = [(&a, &ind_a), (&b, &ind_b)]
        .iter()
        .all(|(arr, out)| match out.certificate() {
            Some(c) => {
                c.exponents == expected && verify_inductive_certificate(arr, c).map(|v| v.valid).unwrap_or(false)
            }
            None => false,
        });

    let mat_b = find_mat_partition(&b, Variant::Mat)?;
    let mat_a = find_mat_partition(&a, Variant::Mat)?;
    let cert_b = mat_b.certificate().cloned();
    let cert_b_verified = match &cert_b {
        Some(c) => verify_certificate(&b, c)?.valid,
        None => false,
    };
    let mat_b_exp = cert_b.as_ref().map(|c| c.exponents.clone());

    let exponents = ExponentClaim {
        inductive_a: ind_a.exponents().cloned(),
        inductive_b: ind_b.exponents().cloned(),
        ok: ind_ok && mat_b_exp.as_ref() == Some(&expected),
        mat_b: mat_b_exp,
    };

    let la = build_lattice(&a)?;
    let lb = build_lattice(&b)?;
    let bijection = lattice_isomorphic(&la, &lb);
    let isomorphism = IsomorphismClaim {
        profile_a: la.profile(),
        profile_b: lb.profile(),
        ok: bijection.is_some() && la.profile() == lb.profile(),
        bijection,
    };

    let refutation_a = mat_a.refutation().cloned();
    let mat = MatClaim {
        ok: cert_b_verified && refutation_a.as_ref().is_some_and(|r| r.explored_states > 0),
        certificate_b: cert_b,
        certificate_b_verified: cert_b_verified,
        refutation_a,
    };

    let star_a = find_mat_partition(&a, Variant::MatStar)?;
    let star_b = find_mat_partition(&b, Variant::MatStar)?;
    let verified = match (star_a.certificate(), star_b.certificate()) {
        (Some(ca), Some(cb)) => verify_certificate(&a, ca)?.valid && verify_certificate(&b, cb)?.valid,
        _ => false,
    };
    let matstar = MatStarClaim {
        certificate_a: star_a.certificate().cloned(),
        certificate_b: star_b.certificate().cloned(),
        ok: verified,
        verified,
    };

    let summary = format!(
        "(1) exp=(1,2,3) {} (2) L(A)≅L(B) {} (3) B MAT-free, A not MAT-free {}; both MAT*-free {}",
        mark(exponents.ok),
        mark(isomorphism.ok),
        mark(mat.ok),
        mark(matstar.ok)
    );
    let ok = exponents.ok && isomorphism.ok && mat.ok && matstar.ok;
    Ok(ExampleReport {
        exponents,
        isomorphism,
        mat,
        matstar,
        summary,
        ok,
    })
}

fn show(e: &Option<Exponents>) -> String {
    e.as_ref().map_or("none".into(), Exponents::to_string)
}

pub fn render(r: &ExampleReport) -> String {
    let mut out = String::new();
    writeln!(out, "Q = {POLYNOMIAL}; A over GF(2), B over GF(4)").unwrap();
    writeln!(
        out,
        "exp A (inductive) {}  exp B (inductive) {}  exp B (MAT) {}",
        show(&r.exponents.inductive_a),
        show(&r.exponents.inductive_b),
        show(&r.exponents.mat_b)
    )
    .unwrap();
    let profile = |p: &[usize]| p.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    writeln!(
        out,
        "flats per rank A: {}  B: {}",
        profile(&r.isomorphism.profile_a),
        profile(&r.isomorphism.profile_b)
    )
    .unwrap();
    if let Some(s) = &r.isomorphism.bijection {
        let pairs: Vec<String> = s.iter().enumerate().map(|(i, j)| format!("{i}->{j}")).collect();
        writeln!(out, "bijection {}", pairs.join(" ")).unwrap();
    }
    if let Some(c) = &r.mat.certificate_b {
        writeln!(out, "B MAT-partition {:?}", c.blocks).unwrap();
    }
    if let Some(rf) = &r.mat.refutation_a {
        writeln!(out, "A MAT search exhausted after {} states", rf.explored_states).unwrap();
    }
    writeln!(out, "{}", r.summary).unwrap();
    out
}
