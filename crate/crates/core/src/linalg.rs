//! Exact dense linear algebra and canonical subspaces.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("codimension {codim} impossible for a superspace of a {base_dim}-dimensional subspace of K^{ambient}")]
    InvalidCodim { codim: usize, base_dim: usize, ambient: usize },
    #[error("random sampling failed to produce independent vectors after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Knobs for randomized constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    /// Rational samples are integers in `[-bound, bound]`.
    pub rational_bound: i64,
    pub max_retries: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { rational_bound: 1000, max_retries: 64 }
    }
}

/// Dense row-major matrix over one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries in `field`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::AmbientMismatch(row.len(), cols));
            }
            for s in row {
                if s.field() != field {
                    return Err(FieldError::FieldMismatch { left: field, right: s.field() }.into());
                }
                data.push(s);
            }
        }
        Ok(Matrix { rows: nrows, cols, field, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Matrix::from_rows(field, cols, rows).expect("rectangular integer matrix")
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rows: usize, cols: usize, rng: &mut R, bound: i64) -> Self {
        let data = (0..rows * cols).map(|_| field.sample(rng, bound)).collect();
        Matrix { rows, cols, field, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::AmbientMismatch(self.cols, other.rows));
        }
        if self.field != other.field {
            return Err(FieldError::FieldMismatch { left: self.field, right: other.field }.into());
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::AmbientMismatch(v.len(), self.cols));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::AmbientMismatch(self.cols, other.cols));
        }
        if self.field != other.field {
            return Err(FieldError::FieldMismatch { left: self.field, right: other.field }.into());
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: rows.len(), cols: self.cols, field: self.field, data }
    }

    /// Reduced row-echelon form, its rank and pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(lead, j) * &inv;
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let sub = &factor * m.get(lead, j);
                    if !sub.is_zero() {
                        let v = m.get(r, j) - &sub;
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> (Matrix, usize) {
        let (m, piv) = self.rref_with_pivots();
        (m, piv.len())
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Rows form a basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                let e = r.get(row, free);
                if !e.is_zero() {
                    v[pc] = -e;
                }
            }
            basis.push(v);
        }
        Matrix::from_rows(self.field, self.cols, basis).expect("nullspace rows")
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for r in c + 1..m.rows {
                let f = m.get(r, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(r, j) - &(&f * m.get(c, j));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Entrywise reduction of a rational matrix into `F_q`.
    pub fn reduce_mod(&self, q: u64) -> Result<Matrix, LinalgError> {
        let field = FieldSpec::prime(q)?;
        let data = self.data.iter().map(|s| s.reduce_mod(q)).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, field, data })
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a.first().or(b.first()).map_or(FieldSpec::Rational, Scalar::field);
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            &acc + &(x * y)
        }
    })
}

/// A linear subspace of `K^ambient`, stored by its rref basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in K^{}: {:?})", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn whole(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    /// Span of the rows of `m`.
    pub fn row_span(m: &Matrix) -> Self {
        let (r, rank) = m.rref();
        Subspace { ambient: m.ncols(), basis: r.select_rows(&(0..rank).collect::<Vec<_>>()) }
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        Ok(Subspace::row_span(&Matrix::from_rows(field, ambient, vectors)?))
    }

    /// Span of standard basis vectors, 1-based indices (`e1`, `e2`, ...).
    pub fn coordinate(field: FieldSpec, ambient: usize, indices: &[usize]) -> Self {
        let rows = indices
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient];
                v[i - 1] = field.one();
                v
            })
            .collect();
        Subspace::span(field, ambient, rows).expect("coordinate vectors")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field() != other.field() {
            return Err(FieldError::FieldMismatch { left: self.field(), right: other.field() }.into());
        }
        Ok(())
    }

    /// Rows span the linear functionals vanishing on this subspace.
    pub fn annihilator(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::identity(self.field(), self.ambient);
        }
        self.basis.nullspace()
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        let constraints = self.annihilator().stack(&other.annihilator())?;
        if constraints.nrows() == 0 {
            return Ok(Subspace::whole(self.field(), self.ambient));
        }
        Ok(Subspace::row_span(&constraints.nullspace()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(Subspace::row_span(&self.basis.stack(&other.basis)?))
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::AmbientMismatch(v.len(), self.ambient));
        }
        // Reduce against the rref basis: the pivot of row k is its leading column.
        let mut rest = v.to_vec();
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            let pc = row.iter().position(|s| !s.is_zero()).expect("rref row");
            let f = rest[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, b) in rest.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = &*x - &(&f * b);
                }
            }
        }
        Ok(rest.iter().all(Scalar::is_zero))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other)?;
        for v in other.basis_vectors() {
            if !self.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Adds one vector to the span.
    pub fn extend(&self, v: &[Scalar]) -> Result<Subspace, LinalgError> {
        let m = Matrix::from_rows(self.field(), self.ambient, vec![v.to_vec()])?;
        Ok(Subspace::row_span(&self.basis.stack(&m)?))
    }

    /// A subspace `U ⊇ self` with `dim U = ambient - codim`, built by adjoining
    /// random vectors.
    pub fn random_superspace<R: Rng + ?Sized>(
        &self,
        codim: usize,
        rng: &mut R,
        cfg: &SampleConfig,
    ) -> Result<Subspace, LinalgError> {
        if codim > self.ambient || self.ambient - codim < self.dim() {
            return Err(LinalgError::InvalidCodim { codim, base_dim: self.dim(), ambient: self.ambient });
        }
        let target = self.ambient - codim;
        let mut cur = self.clone();
        let mut failures = 0;
        while cur.dim() < target {
            let v: Vec<Scalar> = (0..self.ambient).map(|_| self.field().sample(rng, cfg.rational_bound)).collect();
            let next = cur.extend(&v)?;
            if next.dim() > cur.dim() {
                cur = next;
            } else {
                failures += 1;
                if failures > cfg.max_retries {
                    return Err(LinalgError::RetryBudgetExhausted(failures));
                }
            }
        }
        Ok(cur)
    }

    /// Random subspace of the given dimension.
    pub fn random<R: Rng + ?Sized>(
        field: FieldSpec,
        ambient: usize,
        dim: usize,
        rng: &mut R,
        cfg: &SampleConfig,
    ) -> Result<Subspace, LinalgError> {
        Subspace::zero(field, ambient).random_superspace(ambient.saturating_sub(dim), rng, cfg)
    }

    pub fn reduce_mod(&self, q: u64) -> Result<Subspace, LinalgError> {
        Ok(Subspace::row_span(&self.basis.reduce_mod(q)?))
    }
}
