use std::fmt::Write as _;

use serde::Deserialize;

use matfree::arrangement::Arrangement;
use matfree::freeness::{
    verify_certificate, verify_inductive_certificate, CertificateCheck, InductiveCertificate, MatCertificate,
};

use crate::analyze::AnalysisReport;
use crate::{CliError, CliResult, Output, EXIT_INPUT, EXIT_OK};

#[derive(Deserialize)]
#[serde(untagged)]
enum CertificateInput {
    Report(Box<AnalysisReport>),
    Mat(MatCertificate),
    Inductive(InductiveCertificate),
}

/// Label and outcome for each certificate checked.
pub type Checks = Vec<(String, CertificateCheck)>;

pub fn check_mat(a: &Arrangement, cert: &MatCertificate) -> CliResult<(String, CertificateCheck)> {
    Ok((format!("{} certificate", cert.variant), verify_certificate(a, cert)?))
}

pub fn check_inductive(a: &Arrangement, cert: &InductiveCertificate) -> CliResult<(String, CertificateCheck)> {
    Ok(("inductive certificate".into(), verify_inductive_certificate(a, cert)?))
}

/// Checks a single certificate or every certificate inside an analysis report.
/// Refutations in a report are not re-checked.
pub fn verify_json(a: &Arrangement, text: &str) -> CliResult<Checks> {
    let input: CertificateInput =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("unrecognized certificate JSON: {e}")))?;
    let mut checks = Vec::new();
    match input {
        CertificateInput::Mat(c) => checks.push(check_mat(a, &c)?),
        CertificateInput::Inductive(c) => checks.push(check_inductive(a, &c)?),
        CertificateInput::Report(r) => {
            for v in [&r.mat, &r.matstar].into_iter().flatten() {
                if let Some(c) = &v.certificate {
                    checks.push(check_mat(a, c)?);
                }
            }
            if let Some(c) = r.inductive.as_ref().and_then(|i| i.certificate.as_ref()) {
                checks.push(check_inductive(a, c)?);
            }
        }
    }
    Ok(checks)
}

pub fn verify_text(a: &Arrangement, text: &str) -> CliResult<Output> {
    let checks = verify_json(a, text)?;
    let mut out = String::new();
    if checks.is_empty() {
        out.push_str("no certificates found\n");
    }
    for (label, check) in &checks {
        if check.valid {
            writeln!(out, "{label}: valid").unwrap();
        } else {
            writeln!(out, "{label}: INVALID").unwrap();
            for p in &check.problems {
                writeln!(out, "  {p}").unwrap();
            }
        }
    }
    let ok = !checks.is_empty() && checks.iter().all(|(_, c)| c.valid);
    Ok(Output {
        text: out,
        code: if ok { EXIT_OK } else { EXIT_INPUT },
    })
}
