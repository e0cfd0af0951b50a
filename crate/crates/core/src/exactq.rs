//! Exact dense linear algebra over the rationals.
//!
//! Everything here is computed with arbitrary-precision rationals, so ranks,
//! kernels and subspace equalities are exact. Subspaces are kept in reduced
//! row-echelon form, which makes `==` a decision procedure for equal spans.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qvec(entries: &[i64]) -> Vec<Rational> {
    entries.iter().map(|&e| q(e)).collect()
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = Rational::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn scale_vec(k: &Rational, v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| k * x).collect()
}

pub fn add_vec(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        RationalMatrix::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        RationalMatrix::from_rows(rows.iter().map(|r| qvec(r)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = RationalMatrix::new(
            rows,
            columns.len(),
            vec![Rational::zero(); rows * columns.len()],
        )?;
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Panics if `n == 0`.
    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| k * x).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn try_mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        other: &RationalMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut rows = self.row_vecs();
        let pivots = rref_in_place(&mut rows, self.cols);
        let m = RationalMatrix::from_rows(rows).expect("shape preserved");
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref_in_place(&mut rows, self.cols).len()
    }

    /// Entries rendered as strings (`"p"` or `"p/q"`), one list per row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    /// Panics on incompatible shapes; use [`RationalMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_mul(rhs).expect("incompatible matrix shapes")
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_add(rhs).expect("incompatible matrix shapes")
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_sub(rhs).expect("incompatible matrix shapes")
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;

    fn neg(self) -> RationalMatrix {
        self.scale(&-Rational::one())
    }
}

/// Gauss-Jordan elimination on a list of rows, skipping zero entries.
/// Leaves the nonzero rows in reduced echelon form at the top (zero rows are
/// dropped) and returns the pivot columns in order.
pub(crate) fn rref_in_place(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Prefer the pivot with the smallest numerator height to keep entries small.
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].numer().abs() + rows[i][c].denom())
        else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        let support: Vec<usize> = (c..ncols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.is_empty() {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Kernel of the linear map whose matrix has the given rows, as a basis list.
fn kernel_basis(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows = rows;
    let pivots = rref_in_place(&mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[p] = -row[f].clone();
                }
            }
            v
        })
        .collect()
}

/// A linear subspace of `Q^n`, stored as the nonzero rows of its reduced
/// row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient_dim];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace {
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                ambient_dim
            )));
        }
        Ok(Subspace::span_unchecked(ambient_dim, vectors.to_vec()))
    }

    fn span_unchecked(ambient_dim: usize, mut rows: Vec<Vec<Rational>>) -> Self {
        let pivots = rref_in_place(&mut rows, ambient_dim);
        Subspace {
            ambient_dim,
            basis: rows,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// The canonical (reduced echelon) basis.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// Residue of `v` after reduction against the echelon basis.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let factor = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient_dim && is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::span_unchecked(self.ambient_dim, rows))
    }

    /// Vectors orthogonal to the subspace under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let basis = kernel_basis(self.basis.clone(), self.ambient_dim);
        Subspace::span_unchecked(self.ambient_dim, basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let constraints: Vec<Vec<Rational>> = self
            .annihilator()
            .basis
            .into_iter()
            .chain(other.annihilator().basis)
            .collect();
        let basis = kernel_basis(constraints, self.ambient_dim);
        Ok(Subspace::span_unchecked(self.ambient_dim, basis))
    }

    /// Image of the subspace under `m`.
    pub fn image_under(&self, m: &RationalMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a subspace of Q^{}",
                m.rows(),
                m.cols(),
                self.ambient_dim
            )));
        }
        let images = self
            .basis
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span_unchecked(m.rows(), images))
    }
}

/// `{v : Mv = 0}`.
pub fn kernel(m: &RationalMatrix) -> Subspace {
    let basis = kernel_basis(m.row_vecs(), m.cols());
    Subspace::span_unchecked(m.cols(), basis)
}

/// Kernel of the map `v -> (row_i . v)_i` given by a possibly empty list of rows.
pub fn kernel_of_rows(ambient_dim: usize, rows: Vec<Vec<Rational>>) -> Result<Subspace> {
    if let Some(r) = rows.iter().find(|r| r.len() != ambient_dim) {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} in ambient dimension {}",
            r.len(),
            ambient_dim
        )));
    }
    let basis = kernel_basis(rows, ambient_dim);
    Ok(Subspace::span_unchecked(ambient_dim, basis))
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.rank()
}

/// Rank of the matrix with the given rows (which may be an empty list).
pub fn rank_of_rows(ncols: usize, rows: Vec<Vec<Rational>>) -> usize {
    let mut rows = rows;
    rref_in_place(&mut rows, ncols).len()
}

pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.intersect(v)
}

/// The simultaneous fixed space `∩ ker(M_i - I)`; the whole space for an
/// empty list.
pub fn fixed_space(ambient_dim: usize, actions: &[RationalMatrix]) -> Result<Subspace> {
    let mut rows = Vec::new();
    for m in actions {
        if !m.is_square() || m.rows() != ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} action on Q^{}",
                m.rows(),
                m.cols(),
                ambient_dim
            )));
        }
        for i in 0..ambient_dim {
            let mut row = m.row(i).to_vec();
            row[i] -= Rational::one();
            if !is_zero_vec(&row) {
                rows.push(row);
            }
        }
    }
    let basis = kernel_basis(rows, ambient_dim);
    Ok(Subspace::span_unchecked(ambient_dim, basis))
}

/// Some `x` with `Ax = b`, or `None` when the system is inconsistent.
pub fn solve(a: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let mut rows: Vec<Vec<Rational>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref_in_place(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Ok(Some(x))
}

/// Whether the vectors are linearly independent.
pub fn independent(vectors: &[Vec<Rational>]) -> bool {
    let Some(n) = vectors.first().map(Vec::len) else {
        return true;
    };
    let mut rows = vectors.to_vec();
    rref_in_place(&mut rows, n).len() == vectors.len()
}
