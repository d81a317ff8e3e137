//! The intersection lattice L(A): flats, Möbius function, characteristic
//! polynomial, and isomorphism of lattices through atom bijections.
//!
//! Flats are keyed by their atom sets (the indices of the hyperplanes
//! containing them) as `u64` masks; the subspace is kept for geometry.
//! Intersection lattices of central arrangements are geometric, so a
//! bijection of atoms mapping the family of atom sets onto the other family
//! is the same thing as a lattice isomorphism.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::Subspace;

pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn indices_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub subspace: Subspace,
    pub atoms: u64,
    pub rank: usize,
}

impl Flat {
    pub fn atom_indices(&self) -> Vec<usize> {
        mask_indices(self.atoms)
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    source: Arrangement,
    /// Grouped by rank, lexicographic by sorted atom indices within a rank.
    flats: Vec<Flat>,
    rank_starts: Vec<usize>,
    moebius: Vec<i64>,
    by_atoms: HashMap<u64, usize>,
}

/// JSON form of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDump {
    pub flats_by_rank: Vec<Vec<Vec<usize>>>,
    pub moebius_by_rank: Vec<Vec<i64>>,
    pub charpoly: Vec<i64>,
}

fn atoms_of(a: &Arrangement, x: &Subspace) -> u64 {
    a.hyperplanes()
        .iter()
        .enumerate()
        .filter(|(_, h)| h.contains(x))
        .fold(0, |m, (i, _)| m | 1 << i)
}

pub fn build_lattice(a: &Arrangement) -> Result<IntersectionLattice> {
    guard::check("arrangement size", a.len() as u128, guard::MAX_HYPERPLANES as u128)?;
    let field = a.field();
    let top = Flat {
        subspace: Subspace::full(field, a.dim()),
        atoms: 0,
        rank: 0,
    };
    let mut levels: Vec<Vec<Flat>> = vec![vec![top]];
    loop {
        let current = levels.last().expect("nonempty");
        let mut next: Vec<Flat> = Vec::new();
        for x in current {
            for (i, h) in a.hyperplanes().iter().enumerate() {
                let bit = 1u64 << i;
                if x.atoms & bit != 0 {
                    continue;
                }
                let wanted = x.atoms | bit;
                if next.iter().any(|y| y.atoms & wanted == wanted) {
                    continue;
                }
                let subspace = x.subspace.intersect(&h.subspace(field))?;
                let atoms = atoms_of(a, &subspace);
                next.push(Flat {
                    rank: a.dim() - subspace.dim(),
                    subspace,
                    atoms,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by_key(|f| f.atom_indices());
        levels.push(next);
    }

    let mut flats = Vec::new();
    let mut rank_starts = Vec::new();
    for level in levels {
        rank_starts.push(flats.len());
        flats.extend(level);
    }
    let by_atoms = flats.iter().enumerate().map(|(i, f)| (f.atoms, i)).collect();
    let mut lattice = IntersectionLattice {
        source: a.clone(),
        flats,
        rank_starts,
        moebius: Vec::new(),
        by_atoms,
    };
    lattice.moebius = lattice.compute_moebius();
    Ok(lattice)
}

impl IntersectionLattice {
    fn compute_moebius(&self) -> Vec<i64> {
        let mut mu = vec![0i64; self.flats.len()];
        for (x, fx) in self.flats.iter().enumerate() {
            if x == 0 {
                mu[0] = 1;
                continue;
            }
            let below: i64 = self.flats[..x]
                .iter()
                .enumerate()
                .filter(|(_, fz)| fz.rank < fx.rank && fz.atoms & fx.atoms == fz.atoms)
                .map(|(z, _)| mu[z])
                .sum();
            mu[x] = -below;
        }
        mu
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.source
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Rank of the arrangement: the largest flat rank.
    pub fn rank(&self) -> usize {
        self.rank_starts.len() - 1
    }

    pub fn flats_of_rank(&self, r: usize) -> &[Flat] {
        let start = self.rank_starts[r];
        let end = self.rank_starts.get(r + 1).copied().unwrap_or(self.flats.len());
        &self.flats[start..end]
    }

    /// Number of flats of each rank.
    pub fn profile(&self) -> Vec<usize> {
        (0..=self.rank()).map(|r| self.flats_of_rank(r).len()).collect()
    }

    pub fn moebius(&self, flat: usize) -> i64 {
        self.moebius[flat]
    }

    pub fn flat_index(&self, atoms: u64) -> Option<usize> {
        self.by_atoms.get(&atoms).copied()
    }

    /// `flats[i] <= flats[j]` in the lattice order (reverse inclusion).
    pub fn leq(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.flats[i].atoms, self.flats[j].atoms);
        a & b == a
    }

    /// Smallest flat containing the given atoms, i.e. their join.
    pub fn closure(&self, atoms: u64) -> u64 {
        self.flats
            .iter()
            .filter(|f| f.atoms & atoms == atoms)
            .min_by_key(|f| f.rank)
            .map(|f| f.atoms)
            .expect("the full atom set is a flat's superset")
    }

    /// Ascending coefficients of `χ(A, t) = Σ μ(X) t^{dim X}`.
    pub fn characteristic_polynomial(&self) -> Vec<i64> {
        let dim = self.source.dim();
        let mut coeffs = vec![0i64; dim + 1];
        for (f, mu) in self.flats.iter().zip(&self.moebius) {
            coeffs[dim - f.rank] += mu;
        }
        coeffs
    }

    pub fn dump(&self) -> LatticeDump {
        LatticeDump {
            flats_by_rank: (0..=self.rank())
                .map(|r| self.flats_of_rank(r).iter().map(Flat::atom_indices).collect())
                .collect(),
            moebius_by_rank: (0..=self.rank())
                .map(|r| {
                    let start = self.rank_starts[r];
                    (0..self.flats_of_rank(r).len())
                        .map(|i| self.moebius[start + i])
                        .collect()
                })
                .collect(),
            charpoly: self.characteristic_polynomial(),
        }
    }
}

pub fn characteristic_polynomial(l: &IntersectionLattice) -> Vec<i64> {
    l.characteristic_polynomial()
}

/// Evaluates an ascending integer coefficient list at `t`.
pub fn evaluate(coeffs: &[i64], t: i64) -> i128 {
    coeffs.iter().rev().fold(0i128, |acc, &c| acc * t as i128 + c as i128)
}

/// Expands `∏ (t - e_i)` into ascending coefficients.
pub fn polynomial_from_roots(roots: &[usize]) -> Vec<i64> {
    let mut coeffs = vec![1i64];
    for &r in roots {
        let mut next = vec![0i64; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r as i64;
        }
        coeffs = next;
    }
    coeffs
}

/// Renders ascending coefficients as a polynomial in `t`, highest degree first.
pub fn format_polynomial(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (d, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let a = c.unsigned_abs();
        match (d, a) {
            (0, _) => out.push_str(&a.to_string()),
            (1, 1) => out.push('t'),
            (1, _) => out.push_str(&format!("{a}t")),
            (_, 1) => out.push_str(&format!("t^{d}")),
            _ => out.push_str(&format!("{a}t^{d}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `|V ∖ ⋃ H|` by enumerating every point of `V`.
pub fn count_points_off_hyperplanes(a: &Arrangement) -> Result<u128> {
    if !a.field().is_finite() {
        return Err(Error::InfiniteField);
    }
    let field = a.field();
    let points = Subspace::full(field, a.dim()).enumerate_points()?;
    Ok(points
        .iter()
        .filter(|p| a.hyperplanes().iter().all(|h| !h.contains_point(field, p)))
        .count() as u128)
}

struct IsoData {
    n: usize,
    flats: Vec<(u64, usize)>,
    set: HashSet<(u64, usize)>,
    /// `join[i * n + j]`: atoms of the rank-2 flat spanned by atoms i and j.
    join: Vec<u64>,
    signature: Vec<Vec<usize>>,
}

impl IsoData {
    fn new(l: &IntersectionLattice) -> IsoData {
        let n = l.arrangement().len();
        let flats: Vec<(u64, usize)> = l.flats.iter().map(|f| (f.atoms, f.rank)).collect();
        let mut join = vec![0u64; n * n];
        if l.rank() >= 2 {
            for f in l.flats_of_rank(2) {
                let atoms = f.atom_indices();
                for &i in &atoms {
                    for &j in &atoms {
                        join[i * n + j] = f.atoms;
                    }
                }
            }
        }
        let signature = (0..n)
            .map(|i| {
                let mut sig: Vec<usize> = (0..=l.rank())
                    .map(|r| l.flats_of_rank(r).iter().filter(|f| f.atoms >> i & 1 == 1).count())
                    .collect();
                let mut line_sizes: Vec<usize> = if l.rank() >= 2 {
                    l.flats_of_rank(2)
                        .iter()
                        .filter(|f| f.atoms >> i & 1 == 1)
                        .map(|f| f.atoms.count_ones() as usize)
                        .collect()
                } else {
                    Vec::new()
                };
                line_sizes.sort_unstable();
                sig.push(usize::MAX);
                sig.extend(line_sizes);
                sig
            })
            .collect();
        IsoData {
            n,
            set: flats.iter().copied().collect(),
            flats,
            join,
            signature,
        }
    }
}

fn map_mask(mask: u64, sigma: &[usize]) -> u64 {
    mask_indices(mask).iter().fold(0, |m, &i| m | 1 << sigma[i])
}

/// Whether `sigma` maps every flat of `l1` onto a flat of `l2` of the same rank,
/// bijectively.
pub fn verify_bijection(l1: &IntersectionLattice, l2: &IntersectionLattice, sigma: &[usize]) -> bool {
    let n = l1.arrangement().len();
    if l2.arrangement().len() != n || sigma.len() != n || l1.len() != l2.len() {
        return false;
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return false;
        }
    }
    let images: HashSet<u64> = l1
        .flats
        .iter()
        .filter_map(|f| {
            let img = map_mask(f.atoms, sigma);
            l2.flat_index(img).filter(|&j| l2.flats[j].rank == f.rank).map(|_| img)
        })
        .collect();
    images.len() == l1.len()
}

/// An atom bijection `sigma` (atom `i` of `l1` goes to `sigma[i]` of `l2`)
/// inducing a lattice isomorphism, or `None`. Candidates are tried in
/// ascending order, so the identity wins whenever it works.
pub fn lattice_isomorphic(l1: &IntersectionLattice, l2: &IntersectionLattice) -> Option<Vec<usize>> {
    if l1.arrangement().len() != l2.arrangement().len() || l1.profile() != l2.profile() {
        return None;
    }
    let d1 = IsoData::new(l1);
    let d2 = IsoData::new(l2);
    let mut sigma = Vec::with_capacity(d1.n);
    let mut used = vec![false; d1.n];
    if extend(&d1, &d2, &mut sigma, &mut used) {
        Some(sigma)
    } else {
        None
    }
}

fn consistent(d1: &IsoData, d2: &IsoData, sigma: &[usize]) -> bool {
    let n = d1.n;
    let i = sigma.len() - 1;
    let j = sigma[i];
    for a in 0..i {
        let ja = d1.join[i * n + a];
        let jb = d2.join[j * n + sigma[a]];
        if ja.count_ones() != jb.count_ones() {
            return false;
        }
        for (m, &sm) in sigma.iter().enumerate() {
            if (ja >> m & 1) != (jb >> sm & 1) {
                return false;
            }
        }
        for b in 0..a {
            let ja = d1.join[a * n + b];
            let jb = d2.join[sigma[a] * n + sigma[b]];
            if (ja >> i & 1) != (jb >> j & 1) {
                return false;
            }
        }
    }
    true
}

fn extend(d1: &IsoData, d2: &IsoData, sigma: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = sigma.len();
    if i == d1.n {
        return d1
            .flats
            .iter()
            .all(|&(atoms, rank)| d2.set.contains(&(map_mask(atoms, sigma), rank)));
    }
    for j in 0..d2.n {
        if used[j] || d1.signature[i] != d2.signature[j] {
            continue;
        }
        sigma.push(j);
        used[j] = true;
        if consistent(d1, d2, sigma) && extend(d1, d2, sigma, used) {
            return true;
        }
        used[j] = false;
        sigma.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldSpec;

    fn example(q: u64) -> Arrangement {
        let f = FieldSpec::gf(q).unwrap();
        Arrangement::from_int_rows(
            &f,
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]],
        )
        .unwrap()
    }

    /// Distinct intersections over all 2^n index subsets, compared as point sets.
    fn brute_force_profile(a: &Arrangement) -> Vec<usize> {
        let mut seen: Vec<(usize, Vec<Vec<crate::exactfield::Scalar>>)> = Vec::new();
        for mask in 0u64..1 << a.len() {
            let x = a.intersection_of(&mask_indices(mask));
            let mut pts = x.enumerate_points().unwrap();
            pts.sort();
            let entry = (a.dim() - x.dim(), pts);
            if !seen.contains(&entry) {
                seen.push(entry);
            }
        }
        let max = seen.iter().map(|e| e.0).max().unwrap();
        (0..=max).map(|r| seen.iter().filter(|e| e.0 == r).count()).collect()
    }

    #[test]
    fn empty_arrangement() {
        let f = FieldSpec::gf(2).unwrap();
        let l = build_lattice(&Arrangement::empty(&f, 3)).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.moebius(0), 1);
        assert_eq!(l.characteristic_polynomial(), vec![0, 0, 0, 1]);
    }

    #[test]
    fn example_profiles() {
        for q in [2, 4] {
            let a = example(q);
            let l = build_lattice(&a).unwrap();
            assert_eq!(l.profile(), vec![1, 6, 7, 1]);
            assert_eq!(l.profile(), brute_force_profile(&a));
            assert_eq!(l.rank(), 3);
        }
    }

    #[test]
    fn example_charpoly() {
        for q in [2, 4] {
            let l = build_lattice(&example(q)).unwrap();
            let chi = l.characteristic_polynomial();
            assert_eq!(chi, vec![-6, 11, -6, 1]);
            assert_eq!(chi, polynomial_from_roots(&[1, 2, 3]));
        }
        assert_eq!(evaluate(&[-6, 11, -6, 1], 2), 0);
        assert_eq!(evaluate(&[-6, 11, -6, 1], 4), 6);
    }

    #[test]
    fn boolean_charpoly() {
        let f = FieldSpec::gf(3).unwrap();
        let a = Arrangement::from_int_rows(&f, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let l = build_lattice(&a).unwrap();
        assert_eq!(l.characteristic_polynomial(), polynomial_from_roots(&[1, 1, 1]));
        assert_eq!(l.profile(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn moebius_recursion_holds() {
        let l = build_lattice(&example(4)).unwrap();
        for x in 1..l.len() {
            let s: i64 = (0..l.len()).filter(|&z| l.leq(z, x)).map(|z| l.moebius(z)).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn point_counts() {
        let f = FieldSpec::gf(2).unwrap();
        assert_eq!(count_points_off_hyperplanes(&Arrangement::empty(&f, 3)).unwrap(), 8);
        assert_eq!(count_points_off_hyperplanes(&example(2)).unwrap(), 0);
        assert_eq!(count_points_off_hyperplanes(&example(4)).unwrap(), 6);
        let q = FieldSpec::rational();
        assert_eq!(
            count_points_off_hyperplanes(&Arrangement::empty(&q, 1)),
            Err(Error::InfiniteField)
        );
    }

    #[test]
    fn isomorphism_examples() {
        let la = build_lattice(&example(2)).unwrap();
        let lb = build_lattice(&example(4)).unwrap();
        assert_eq!(lattice_isomorphic(&la, &la), Some(vec![0, 1, 2, 3, 4, 5]));
        assert_eq!(lattice_isomorphic(&la, &lb), Some(vec![0, 1, 2, 3, 4, 5]));
        let f = FieldSpec::gf(2).unwrap();
        let boolean = Arrangement::from_int_rows(&f, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let pencil = Arrangement::from_int_rows(&f, 3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert!(lattice_isomorphic(&build_lattice(&boolean).unwrap(), &build_lattice(&pencil).unwrap()).is_none());
    }

    #[test]
    fn isomorphism_of_permuted_arrangement() {
        let a = example(2);
        let perm = [4, 2, 5, 0, 3, 1];
        let b = a.subarrangement(&perm).unwrap();
        let la = build_lattice(&a).unwrap();
        let lb = build_lattice(&b).unwrap();
        let sigma = lattice_isomorphic(&lb, &la).unwrap();
        assert!(verify_bijection(&lb, &la, &sigma));
        let back = lattice_isomorphic(&la, &lb).unwrap();
        assert!(verify_bijection(&la, &lb, &back));
    }

    #[test]
    fn format_chi() {
        assert_eq!(format_polynomial(&[-6, 11, -6, 1]), "t^3 - 6t^2 + 11t - 6");
        assert_eq!(format_polynomial(&[0, 0, 0, 1]), "t^3");
    }
}
