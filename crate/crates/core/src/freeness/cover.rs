use serde::{Deserialize, Serialize};

use crate::arrangement::{normalize, Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::lattice::{build_lattice, evaluate};
use crate::linalg::Subspace;

/// How `X ⊆ ⋃ H` is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMethod {
    /// Test every point of `X` (finite fields).
    Enumerate,
    /// Count the points of `X` off the induced arrangement as `χ(q)` (finite fields).
    Charpoly,
    /// A subspace inside a finite union lies inside one member (infinite fields).
    PrimeAvoidance,
}

impl CoverMethod {
    fn name(self) -> &'static str {
        match self {
            CoverMethod::Enumerate => "enumerate",
            CoverMethod::Charpoly => "charpoly",
            CoverMethod::PrimeAvoidance => "prime_avoidance",
        }
    }
}

fn check_compatible(x: &Subspace, hs: &[Hyperplane]) -> Result<()> {
    for h in hs {
        if h.dim() != x.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: x.ambient_dim(),
                found: h.dim(),
            });
        }
    }
    Ok(())
}

/// Whether `x ⊆ ⋃ hs`.
pub fn covers_by_union(x: &Subspace, hs: &[Hyperplane], method: CoverMethod) -> Result<bool> {
    check_compatible(x, hs)?;
    let field = x.field();
    match (method, field.is_finite()) {
        (CoverMethod::PrimeAvoidance, true) | (CoverMethod::Enumerate | CoverMethod::Charpoly, false) => {
            return Err(Error::MethodFieldMismatch { method: method.name() })
        }
        _ => {}
    }
    if hs.is_empty() {
        return Ok(false);
    }
    match method {
        CoverMethod::Enumerate => Ok(x
            .enumerate_points()?
            .iter()
            .all(|p| hs.iter().any(|h| h.contains_point(field, p)))),
        CoverMethod::PrimeAvoidance => Ok(hs.iter().any(|h| h.contains(x))),
        CoverMethod::Charpoly => {
            if hs.iter().any(|h| h.contains(x)) {
                return Ok(true);
            }
            let induced = induced_arrangement(x, hs);
            let chi = build_lattice(&induced)?.characteristic_polynomial();
            let q = field.cardinality().expect("finite") as i64;
            Ok(evaluate(&chi, q) == 0)
        }
    }
}

/// `{ x ∩ H : x ⊄ H }` in the echelon coordinates of `x`.
fn induced_arrangement(x: &Subspace, hs: &[Hyperplane]) -> Arrangement {
    let field = x.field();
    let mut covectors: Vec<Vec<Scalar>> = Vec::new();
    for h in hs {
        if let Some(c) = normalize(field, x.restrict_covector(h.covector())) {
            if !covectors.contains(&c) {
                covectors.push(c);
            }
        }
    }
    Arrangement::from_covectors(field, x.dim(), covectors).expect("distinct normalized covectors")
}

/// A point of `x` on none of `hs`, if any. Over finite fields this is the
/// first such point in enumeration order; over infinite fields it is found on
/// the curve `c ↦ Σ c^j b_j` through the echelon basis, where each hyperplane
/// not containing `x` has at most `dim x - 1` roots.
pub fn avoiding_point(x: &Subspace, hs: &[Hyperplane]) -> Result<Option<Vec<Scalar>>> {
    check_compatible(x, hs)?;
    let field = x.field();
    if field.is_finite() {
        return Ok(x
            .enumerate_points()?
            .into_iter()
            .find(|p| hs.iter().all(|h| !h.contains_point(field, p))));
    }
    if hs.iter().any(|h| h.contains(x)) {
        return Ok(None);
    }
    let d = x.dim();
    let tries = hs.len() * d.saturating_sub(1) + 1;
    for c in 0..tries as i64 {
        let c = field.from_int(c);
        let mut v = vec![field.zero(); x.ambient_dim()];
        let mut power = field.one();
        for row in x.basis().row_iter() {
            for (vi, bi) in v.iter_mut().zip(row) {
                *vi = field.add(vi, &field.mul(&power, bi));
            }
            power = field.mul(&power, &c);
        }
        if hs.iter().all(|h| !h.contains_point(field, &v)) {
            return Ok(Some(v));
        }
    }
    unreachable!("a nonzero polynomial of degree < dim x has fewer roots than tries")
}

/// Every point of `x` with the index of the first hyperplane of `hs`
/// containing it (finite fields).
pub fn covering_points(x: &Subspace, hs: &[Hyperplane]) -> Result<Vec<(Vec<Scalar>, Option<usize>)>> {
    check_compatible(x, hs)?;
    let field = x.field();
    Ok(x.enumerate_points()?
        .into_iter()
        .map(|p| {
            let by = hs.iter().position(|h| h.contains_point(field, &p));
            (p, by)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldSpec;

    fn h(f: &FieldSpec, c: &[i64]) -> Hyperplane {
        Hyperplane::from_ints(f, c).unwrap()
    }

    #[test]
    fn two_field_cover_examples() {
        let f2 = FieldSpec::gf(2).unwrap();
        let x = h(&f2, &[0, 0, 1]).subspace(&f2);
        let hs = vec![h(&f2, &[1, 0, 0]), h(&f2, &[0, 1, 0]), h(&f2, &[1, 1, 0])];
        assert!(covers_by_union(&x, &hs, CoverMethod::Enumerate).unwrap());
        assert!(covers_by_union(&x, &hs, CoverMethod::Charpoly).unwrap());
        assert_eq!(avoiding_point(&x, &hs).unwrap(), None);

        let f4 = FieldSpec::gf(4).unwrap();
        let x4 = h(&f4, &[0, 0, 1]).subspace(&f4);
        let hs4 = vec![h(&f4, &[1, 0, 0]), h(&f4, &[0, 1, 0]), h(&f4, &[1, 1, 0])];
        assert!(!covers_by_union(&x4, &hs4, CoverMethod::Enumerate).unwrap());
        assert!(!covers_by_union(&x4, &hs4, CoverMethod::Charpoly).unwrap());
        let w = avoiding_point(&x4, &hs4).unwrap().unwrap();
        assert!(hs4.iter().all(|hp| !hp.contains_point(&f4, &w)));
        // (1, t, 0) avoids all three.
        let witness = vec![Scalar::Finite(1), Scalar::Finite(2), Scalar::Finite(0)];
        assert!(hs4.iter().all(|hp| !hp.contains_point(&f4, &witness)));
    }

    #[test]
    fn empty_union() {
        let f2 = FieldSpec::gf(2).unwrap();
        let x = Subspace::full(&f2, 2);
        assert!(!covers_by_union(&x, &[], CoverMethod::Enumerate).unwrap());
        assert!(!covers_by_union(&x, &[], CoverMethod::Charpoly).unwrap());
        let q = FieldSpec::rational();
        assert!(!covers_by_union(&Subspace::full(&q, 2), &[], CoverMethod::PrimeAvoidance).unwrap());
    }

    #[test]
    fn method_field_mismatch() {
        let f2 = FieldSpec::gf(2).unwrap();
        let q = FieldSpec::rational();
        assert!(matches!(
            covers_by_union(&Subspace::full(&f2, 2), &[], CoverMethod::PrimeAvoidance),
            Err(Error::MethodFieldMismatch { .. })
        ));
        assert!(matches!(
            covers_by_union(&Subspace::full(&q, 2), &[], CoverMethod::Enumerate),
            Err(Error::MethodFieldMismatch { .. })
        ));
        assert!(matches!(
            covers_by_union(&Subspace::full(&q, 2), &[], CoverMethod::Charpoly),
            Err(Error::MethodFieldMismatch { .. })
        ));
    }

    #[test]
    fn rational_witness() {
        let q = FieldSpec::rational();
        let x = Subspace::full(&q, 3);
        let hs = vec![
            h(&q, &[1, 0, 0]),
            h(&q, &[0, 1, 0]),
            h(&q, &[1, -1, 0]),
            h(&q, &[1, 1, 1]),
        ];
        assert!(!covers_by_union(&x, &hs, CoverMethod::PrimeAvoidance).unwrap());
        let w = avoiding_point(&x, &hs).unwrap().unwrap();
        assert!(hs.iter().all(|hp| !hp.contains_point(&q, &w)));
        let line = h(&q, &[1, 0, 0])
            .subspace(&q)
            .intersect(&h(&q, &[0, 1, 0]).subspace(&q))
            .unwrap();
        assert!(covers_by_union(&line, &hs, CoverMethod::PrimeAvoidance).unwrap());
        assert_eq!(avoiding_point(&line, &hs).unwrap(), None);
    }

    #[test]
    fn covering_points_name_their_hyperplane() {
        let f2 = FieldSpec::gf(2).unwrap();
        let x = h(&f2, &[0, 1, 1]).subspace(&f2);
        let hs = vec![h(&f2, &[1, 0, 0]), h(&f2, &[0, 1, 0]), h(&f2, &[1, 1, 0])];
        let pts = covering_points(&x, &hs).unwrap();
        let v = |a: &[u32]| a.iter().map(|&c| Scalar::Finite(c)).collect::<Vec<_>>();
        assert_eq!(
            pts,
            vec![
                (v(&[0, 0, 0]), Some(0)),
                (v(&[1, 0, 0]), Some(1)),
                (v(&[0, 1, 1]), Some(0)),
                (v(&[1, 1, 1]), Some(2)),
            ]
        );
    }
}
