//! Exact linear algebra over a [`FieldSpec`]: row reduction, kernels and
//! subspaces kept in reduced row echelon form.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};
use crate::guard;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: FieldSpec,
}

impl Matrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        for e in &entries {
            field.validate(e)?;
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
            field: field.clone(),
        })
    }

    pub fn from_rows<R: AsRef<[Scalar]>>(field: &FieldSpec, cols: usize, rows: &[R]) -> Result<Matrix> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Matrix::new(field, rows.len(), cols, entries)
    }

    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    /// Reduced row echelon form and rank. Pivots are taken column by column,
    /// from the first row at or below the current one with a nonzero entry.
    pub fn rref(&self) -> (Matrix, usize) {
        let f = &self.field;
        let mut rows: Vec<Vec<Scalar>> = self.row_iter().map(<[Scalar]>::to_vec).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| !f.is_zero(&rows[r][col])) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = f.inv(&rows[rank][col]).expect("pivot is nonzero");
            for x in rows[rank].iter_mut() {
                *x = f.mul(x, &inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || f.is_zero(&row[col]) {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        let entries = rows.into_iter().flatten().collect();
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                entries,
                field: f.clone(),
            },
            rank,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// `{ v : self * v = 0 }`.
    pub fn kernel(&self) -> Subspace {
        let f = &self.field;
        let (r, rank) = self.rref();
        let mut pivots = Vec::with_capacity(rank);
        for i in 0..rank {
            let c = (0..self.cols)
                .find(|&c| !f.is_zero(r.get(i, c)))
                .expect("nonzero rref row");
            pivots.push(c);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, &basis).expect("kernel vectors have ambient length")
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.row_iter().map(|row| dot(&self.field, row, v)).collect()
    }

    fn stack(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
            field: self.field.clone(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_iter() {
            let line: Vec<String> = row.iter().map(Scalar::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot(field: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

/// Rank of a list of vectors of a common length.
pub fn rank_of<R: AsRef<[Scalar]>>(field: &FieldSpec, cols: usize, rows: &[R]) -> usize {
    Matrix::from_rows(field, cols, rows)
        .expect("rows have the ambient length")
        .rank()
}

/// A linear subspace of `field^ambient_dim`, stored as the nonzero rows of
/// its reduced row echelon basis. Equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn span<R: AsRef<[Scalar]>>(field: &FieldSpec, ambient_dim: usize, vectors: &[R]) -> Result<Subspace> {
        let m = Matrix::from_rows(field, ambient_dim, vectors)?;
        let (r, rank) = m.rref();
        let basis = Matrix {
            rows: rank,
            cols: ambient_dim,
            entries: r.entries[..rank * ambient_dim].to_vec(),
            field: field.clone(),
        };
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn full(field: &FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    pub fn zero(field: &FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::zero(field, 0, ambient_dim),
        }
    }

    /// The common zero set of the given covectors.
    pub fn annihilated_by<R: AsRef<[Scalar]>>(field: &FieldSpec, ambient_dim: usize, covectors: &[R]) -> Subspace {
        if covectors.is_empty() {
            return Subspace::full(field, ambient_dim);
        }
        Matrix::from_rows(field, ambient_dim, covectors)
            .expect("covectors have the ambient length")
            .kernel()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.basis.field
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Covectors spanning the annihilator, in echelon form.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let a = self.annihilator();
        let b = other.annihilator();
        let stacked = a.basis.stack(&b.basis);
        if stacked.rows == 0 {
            return Ok(Subspace::full(self.field(), self.ambient_dim));
        }
        Ok(stacked.kernel())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let stacked = self.basis.stack(&other.basis);
        let rows: Vec<&[Scalar]> = stacked.row_iter().collect();
        Subspace::span(self.field(), self.ambient_dim, &rows)
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        let ann = other.annihilator();
        Ok(self.basis.row_iter().all(|v| {
            ann.basis
                .row_iter()
                .all(|a| self.field().is_zero(&dot(self.field(), a, v)))
        }))
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let f = self.field();
        self.annihilator().basis.row_iter().all(|a| f.is_zero(&dot(f, a, v)))
    }

    /// Whether the covector vanishes on the whole subspace.
    pub fn inside_kernel_of(&self, covector: &[Scalar]) -> bool {
        let f = self.field();
        self.basis.row_iter().all(|v| f.is_zero(&dot(f, covector, v)))
    }

    /// Number of points, `q^dim`, or `None` over an infinite field.
    pub fn point_count(&self) -> Option<u128> {
        let q = self.field().cardinality()? as u128;
        Some(q.pow(self.dim() as u32))
    }

    /// All points as combinations of the basis rows; the coefficient of the
    /// first basis row varies fastest, each running in encoding order.
    pub fn enumerate_points(&self) -> Result<Vec<Vec<Scalar>>> {
        let count = self.point_count().ok_or(Error::InfiniteField)?;
        guard::check("subspace point count", count, guard::MAX_POINTS)?;
        let f = self.field();
        let els = f.elements()?;
        let q = els.len();
        let d = self.dim();
        let mut out = Vec::with_capacity(count as usize);
        let mut coeffs = vec![0usize; d];
        for _ in 0..count {
            let mut v = vec![f.zero(); self.ambient_dim];
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (x, b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x = f.add(x, &f.mul(&els[c], b));
                }
            }
            out.push(v);
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    /// Coordinates of a vector of this subspace with respect to its basis.
    /// The basis is in echelon form, so coordinates are read off the pivots.
    pub fn coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        self.basis
            .row_iter()
            .map(|row| {
                let pivot = row.iter().position(|x| !f.is_zero(x)).expect("nonzero basis row");
                v[pivot].clone()
            })
            .collect()
    }

    /// Pulls a covector on the ambient space back to the basis coordinates
    /// of this subspace: entry `j` is the covector evaluated at basis row `j`.
    pub fn restrict_covector(&self, covector: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        self.basis.row_iter().map(|b| dot(f, covector, b)).collect()
    }
}
