//! Central hyperplane arrangements, localizations and restrictions.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};
use crate::guard;
use crate::linalg::{self, Subspace};

/// A hyperplane `ker(α)`, stored by its covector scaled so that the first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    covector: Vec<Scalar>,
}

impl Hyperplane {
    pub fn new(field: &FieldSpec, covector: Vec<Scalar>) -> Result<Hyperplane> {
        for c in &covector {
            field.validate(c)?;
        }
        normalize(field, covector)
            .map(|covector| Hyperplane { covector })
            .ok_or(Error::ZeroCovector)
    }

    pub fn from_ints(field: &FieldSpec, coeffs: &[i64]) -> Result<Hyperplane> {
        Hyperplane::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn covector(&self) -> &[Scalar] {
        &self.covector
    }

    pub fn dim(&self) -> usize {
        self.covector.len()
    }

    pub fn subspace(&self, field: &FieldSpec) -> Subspace {
        Subspace::annihilated_by(field, self.dim(), &[&self.covector])
    }

    /// `x ⊆ H`.
    pub fn contains(&self, x: &Subspace) -> bool {
        x.inside_kernel_of(&self.covector)
    }

    pub fn contains_point(&self, field: &FieldSpec, v: &[Scalar]) -> bool {
        field.is_zero(&linalg::dot(field, &self.covector, v))
    }
}

/// Scales a covector so its first nonzero entry is 1; `None` for zero.
pub fn normalize(field: &FieldSpec, mut covector: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let lead = covector.iter().find(|c| !field.is_zero(c))?.clone();
    if !field.is_one(&lead) {
        let inv = field.inv(&lead).expect("lead is nonzero");
        for c in covector.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
    Some(covector)
}

/// An ordered set of distinct hyperplanes in `field^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    field: FieldSpec,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(field: &FieldSpec, dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Arrangement> {
        guard::check_hard("arrangement size", hyperplanes.len(), guard::HARD_MAX_HYPERPLANES)?;
        let mut seen: HashMap<&Hyperplane, usize> = HashMap::new();
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: h.dim(),
                });
            }
            for c in h.covector() {
                field.validate(c)?;
            }
            if let Some(&previous) = seen.get(h) {
                return Err(Error::DuplicateHyperplane { index: i, previous });
            }
            seen.insert(h, i);
        }
        Ok(Arrangement {
            dim,
            field: field.clone(),
            hyperplanes,
        })
    }

    pub fn from_covectors(field: &FieldSpec, dim: usize, covectors: Vec<Vec<Scalar>>) -> Result<Arrangement> {
        let hs = covectors
            .into_iter()
            .map(|c| Hyperplane::new(field, c))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(field, dim, hs)
    }

    pub fn from_int_rows(field: &FieldSpec, dim: usize, rows: &[&[i64]]) -> Result<Arrangement> {
        let hs = rows
            .iter()
            .map(|r| Hyperplane::from_ints(field, r))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(field, dim, hs)
    }

    /// The empty arrangement Φ_dim.
    pub fn empty(field: &FieldSpec, dim: usize) -> Arrangement {
        Arrangement {
            dim,
            field: field.clone(),
            hyperplanes: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn get(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    pub fn position(&self, h: &Hyperplane) -> Option<usize> {
        self.hyperplanes.iter().position(|x| x == h)
    }

    pub fn covectors(&self) -> Vec<&[Scalar]> {
        self.hyperplanes.iter().map(Hyperplane::covector).collect()
    }

    /// Codimension of the center, i.e. the rank of the top flat.
    pub fn rank(&self) -> usize {
        linalg::rank_of(&self.field, self.dim, &self.covectors())
    }

    /// Rank of the hyperplanes with the given indices.
    pub fn rank_of(&self, indices: &[usize]) -> usize {
        let rows: Vec<&[Scalar]> = indices.iter().map(|&i| self.hyperplanes[i].covector()).collect();
        linalg::rank_of(&self.field, self.dim, &rows)
    }

    /// Intersection of the hyperplanes with the given indices.
    pub fn intersection_of(&self, indices: &[usize]) -> Subspace {
        let rows: Vec<&[Scalar]> = indices.iter().map(|&i| self.hyperplanes[i].covector()).collect();
        Subspace::annihilated_by(&self.field, self.dim, &rows)
    }

    pub fn center(&self) -> Subspace {
        Subspace::annihilated_by(&self.field, self.dim, &self.covectors())
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// The hyperplanes with the given indices, in the given order.
    pub fn subarrangement(&self, indices: &[usize]) -> Result<Arrangement> {
        let mut hs = Vec::with_capacity(indices.len());
        for &i in indices {
            self.check_index(i)?;
            hs.push(self.hyperplanes[i].clone());
        }
        Arrangement::new(&self.field, self.dim, hs)
    }

    pub fn subarrangement_mask(&self, mask: u64) -> Arrangement {
        let hs = (0..self.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.hyperplanes[i].clone())
            .collect();
        Arrangement {
            dim: self.dim,
            field: self.field.clone(),
            hyperplanes: hs,
        }
    }

    /// `A ∖ {H_i}`.
    pub fn deletion(&self, i: usize) -> Arrangement {
        let mut hs = self.hyperplanes.clone();
        hs.remove(i);
        Arrangement {
            dim: self.dim,
            field: self.field.clone(),
            hyperplanes: hs,
        }
    }

    fn check_ambient(&self, x: &Subspace) -> Result<()> {
        if x.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.ambient_dim(),
            });
        }
        if x.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Indices of the hyperplanes containing `x`.
    pub fn localization_indices(&self, x: &Subspace) -> Result<Vec<usize>> {
        self.check_ambient(x)?;
        Ok((0..self.len()).filter(|&i| self.hyperplanes[i].contains(x)).collect())
    }

    /// `A_X = { H ∈ A : X ⊆ H }`, order preserved.
    pub fn localization(&self, x: &Subspace) -> Result<Arrangement> {
        let idx = self.localization_indices(x)?;
        self.subarrangement(&idx)
    }

    /// `A^X = { X ∩ H : H ∈ A ∖ A_X }` as an arrangement in `x`, using the
    /// echelon basis of `x` as coordinates. Coinciding intersections are merged,
    /// keeping the first occurrence.
    pub fn restriction(&self, x: &Subspace) -> Result<Arrangement> {
        self.check_ambient(x)?;
        if x.dim() == 0 {
            return Err(Error::ZeroRestriction);
        }
        Ok(self.restriction_unchecked(x))
    }

    pub(crate) fn restriction_unchecked(&self, x: &Subspace) -> Arrangement {
        let mut hs: Vec<Hyperplane> = Vec::new();
        for h in &self.hyperplanes {
            let restricted = x.restrict_covector(h.covector());
            if let Some(c) = normalize(&self.field, restricted) {
                let h = Hyperplane { covector: c };
                if !hs.contains(&h) {
                    hs.push(h);
                }
            }
        }
        Arrangement {
            dim: x.dim(),
            field: self.field.clone(),
            hyperplanes: hs,
        }
    }

    /// `(A ∪ {H})^H` for `H = self[i]`, i.e. restriction of the deletion to `H_i`.
    pub fn restriction_to(&self, i: usize) -> Arrangement {
        let h = self.hyperplanes[i].subspace(&self.field);
        self.restriction_unchecked(&h)
    }

    /// Number of distinct subspaces `h ∩ H'` over `H' ∈ A`, `H' ≠ h`.
    pub fn restriction_size(&self, h: &Hyperplane) -> Result<usize> {
        if h.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: h.dim(),
            });
        }
        Ok(self.restriction_size_unchecked(&h.subspace(&self.field)))
    }

    pub(crate) fn restriction_size_unchecked(&self, h: &Subspace) -> usize {
        let mut seen: Vec<Vec<Scalar>> = Vec::new();
        for hp in &self.hyperplanes {
            if let Some(c) = normalize(&self.field, h.restrict_covector(hp.covector())) {
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
        seen.len()
    }

    /// Hyperplanes sorted, so equal sets give equal keys.
    pub fn canonical_key(&self) -> (usize, Vec<Hyperplane>) {
        let mut hs = self.hyperplanes.clone();
        hs.sort();
        (self.dim, hs)
    }

    pub fn default_vars(dim: usize) -> Vec<String> {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }

    /// `Q(A)` as a `*`-separated product, readable by the polynomial parser.
    pub fn defining_polynomial(&self, vars: &[String]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let factors: Vec<String> = self
            .hyperplanes
            .iter()
            .map(|h| linear_form(&self.field, h.covector(), vars))
            .collect();
        factors.join("*")
    }

    /// Serializes to the arrangement file format.
    pub fn to_file_string(&self, vars: &[String]) -> String {
        let mut out = String::new();
        match self.field.cardinality() {
            None => out.push_str("field rational\n"),
            Some(q) => {
                out.push_str(&format!("field gf {q}"));
                if let Some(m) = self.field.modulus() {
                    out.push_str(" modulus");
                    for d in m {
                        out.push_str(&format!(" {d}"));
                    }
                }
                out.push('\n');
            }
        }
        out.push_str(&format!("dim {}\n", self.dim));
        out.push_str(&format!("vars {}\n", vars.join(" ")));
        if !self.is_empty() {
            out.push_str(&format!("poly {}\n", self.defining_polynomial(vars)));
        }
        out
    }
}

fn coefficient_literal(field: &FieldSpec, c: &Scalar) -> (bool, String) {
    match field.prime_subfield_value(c) {
        Some(n) if n < num_bigint::BigInt::from(0) => (true, (-n).to_string()),
        Some(n) => (false, n.to_string()),
        None => (false, format!("[{c}]")),
    }
}

fn linear_form(field: &FieldSpec, covector: &[Scalar], vars: &[String]) -> String {
    let mut s = String::new();
    let mut terms = 0;
    let mut bare = true;
    for (c, v) in covector.iter().zip(vars) {
        if field.is_zero(c) {
            continue;
        }
        let (negative, lit) = coefficient_literal(field, c);
        if terms > 0 || negative {
            s.push_str(if negative { "-" } else { "+" });
        }
        if lit != "1" {
            s.push_str(&lit);
            s.push('*');
        }
        bare &= !negative && lit == "1";
        s.push_str(v);
        terms += 1;
    }
    if terms == 1 && bare {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = Arrangement::default_vars(self.dim);
        write!(f, "{} over {}", self.defining_polynomial(&vars), self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(field: &FieldSpec) -> Arrangement {
        Arrangement::from_int_rows(
            field,
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]],
        )
        .unwrap()
    }

    fn h(field: &FieldSpec, c: &[i64]) -> Hyperplane {
        Hyperplane::from_ints(field, c).unwrap()
    }

    #[test]
    fn normalization() {
        let q = FieldSpec::rational();
        let a = h(&q, &[0, 2, -4]);
        assert_eq!(a.covector(), &[q.from_int(0), q.from_int(1), q.from_int(-2)]);
        assert_eq!(Hyperplane::from_ints(&q, &[0, 0]), Err(Error::ZeroCovector));
        let f2 = FieldSpec::gf(2).unwrap();
        assert_eq!(Hyperplane::from_ints(&f2, &[2, 0]), Err(Error::ZeroCovector));
    }

    #[test]
    fn duplicates_rejected() {
        let q = FieldSpec::rational();
        let err = Arrangement::from_int_rows(&q, 2, &[&[1, 0], &[3, 0]]).unwrap_err();
        assert_eq!(err, Error::DuplicateHyperplane { index: 1, previous: 0 });
    }

    #[test]
    fn localization_examples() {
        let f2 = FieldSpec::gf(2).unwrap();
        let a = example(&f2);
        assert!(a.localization(&Subspace::full(&f2, 3)).unwrap().is_empty());
        assert_eq!(a.localization(&Subspace::zero(&f2, 3)).unwrap(), a);
        let x = a.intersection_of(&[0, 1]);
        assert_eq!(a.localization_indices(&x).unwrap(), vec![0, 1, 3]);
        assert!(matches!(
            a.localization(&Subspace::full(&f2, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn restriction_examples() {
        let f2 = FieldSpec::gf(2).unwrap();
        let a = Arrangement::from_int_rows(&f2, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]).unwrap();
        let x = a.get(3).subspace(&f2);
        let r = a.restriction(&x).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.len(), 2);
        assert!(Arrangement::empty(&f2, 3).restriction(&x).unwrap().is_empty());
        let p = example(&f2);
        assert_eq!(p.restriction(&p.get(2).subspace(&f2)).unwrap().len(), 3);
        assert_eq!(p.restriction(&Subspace::zero(&f2, 3)), Err(Error::ZeroRestriction));
    }

    #[test]
    fn restriction_size_examples() {
        let f2 = FieldSpec::gf(2).unwrap();
        let a = Arrangement::from_int_rows(&f2, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(a.restriction_size(&h(&f2, &[1, 1, 0])).unwrap(), 2);
        assert_eq!(
            Arrangement::empty(&f2, 3)
                .restriction_size(&h(&f2, &[1, 1, 0]))
                .unwrap(),
            0
        );
        let one = Arrangement::from_int_rows(&f2, 3, &[&[1, 0, 0]]).unwrap();
        assert_eq!(one.restriction_size(&h(&f2, &[0, 1, 0])).unwrap(), 1);
    }

    // Intersections computed as point sets, an oracle independent of the chart.
    #[test]
    fn restriction_size_matches_point_sets() {
        let f3 = FieldSpec::gf(3).unwrap();
        let all: Vec<Vec<i64>> = (0..27)
            .map(|n| vec![n / 9, n / 3 % 3, n % 3])
            .filter(|v| v.iter().any(|&c| c != 0))
            .collect();
        let a =
            Arrangement::from_int_rows(&f3, 3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 2, 1], &[0, 1, 1]]).unwrap();
        for c in &all {
            let hp = h(&f3, c);
            if a.position(&hp).is_some() {
                continue;
            }
            let hs = hp.subspace(&f3);
            let mut sets: Vec<Vec<Vec<Scalar>>> = Vec::new();
            for other in a.hyperplanes() {
                let mut pts = hs.intersect(&other.subspace(&f3)).unwrap().enumerate_points().unwrap();
                pts.sort();
                if !sets.contains(&pts) {
                    sets.push(pts);
                }
            }
            let size = a.restriction_size(&hp).unwrap();
            assert_eq!(size, sets.len());
            assert!(size <= a.len());
        }
    }

    #[test]
    fn polynomial_printing() {
        let f2 = FieldSpec::gf(2).unwrap();
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(example(&f2).defining_polynomial(&vars), "x*y*z*(x+y)*(x+z)*(y+z)");
        let q = FieldSpec::rational();
        let a = Arrangement::from_covectors(
            &q,
            2,
            vec![
                vec![q.from_int(1), q.from_int(-2)],
                vec![q.from_int(0), q.from_int(1)],
                vec![q.from_int(1), Scalar::rational(1, 2)],
            ],
        )
        .unwrap();
        assert_eq!(a.defining_polynomial(&vars[..2]), "(x-2*y)*y*(x+[1/2]*y)");
        let f4 = FieldSpec::gf(4).unwrap();
        let b = Arrangement::from_covectors(&f4, 2, vec![vec![Scalar::Finite(1), Scalar::Finite(3)]]).unwrap();
        assert_eq!(b.defining_polynomial(&vars[..2]), "(x+[3]*y)");
    }
}
