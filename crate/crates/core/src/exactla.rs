//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Everything downstream (Lie algebras, 2-vector spaces, bibundles) reduces
//! to row reduction over `Scalar`, so equality of the objects we build is
//! decidable. No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

/// Integer scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational scalar `p/q`.
pub fn rat(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zeros_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

pub fn concat_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has length {vec_len}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        vec_len: usize,
    },
    #[error("codomain mismatch: maps land in dimensions {left} and {right}")]
    CodomainMismatch { left: usize, right: usize },
    #[error("ambient mismatch: expected ambient dimension {expected}, subspace has {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("vector of length {vec_len} does not lie in the given subspace of ambient dimension {ambient}")]
    NotInSubspace { ambient: usize, vec_len: usize },
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from integer literals, handy in tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: Vec<Vec<Scalar>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                vec_len: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect())
    }

    /// Apply without the shape check; panics on mismatch.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mul_vec(v).expect("shape mismatch")
    }

    /// `[self | other]` side by side.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.at(r, j).clone();
                let other = m.at(p, j).clone();
                m.set(r, j, other);
                m.set(p, j, tmp);
            }
            let inv = m.at(r, c).recip();
            for j in 0..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j) - &f * m.at(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (red, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| red.at(i, j + n).clone()))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Linear subspace of an ambient coordinate space, stored as a reduced
/// echelon basis so equality of subspaces is equality of representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    /// Basis rows in reduced echelon form.
    basis: Vec<Vec<Scalar>>,
    /// Pivot coordinate of each basis row.
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
        Subspace::span(ambient_dim, Matrix::identity(ambient_dim).row_vecs())
    }

    /// Span of the given ambient vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        if vectors.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        let (red, pivots) = Matrix::from_rows(vectors).rref();
        let basis = (0..pivots.len()).map(|i| red.row(i)).collect();
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of a matrix (ambient_dim x dim).
    pub fn basis_cols(&self) -> Matrix {
        Matrix::from_fn(self.ambient_dim, self.basis.len(), |i, j| {
            self.basis[j][i].clone()
        })
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rec = zeros_vec(self.ambient_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            rec = add_vec(&rec, &scale_vec(c, b));
        }
        if rec == v { Some(coords) } else { None }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.clone());
        Subspace::span(self.ambient_dim, vs)
    }

    /// Reconstruct the ambient vector with the given basis coordinates.
    pub fn from_coordinates(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim());
        let mut out = zeros_vec(self.ambient_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            out = add_vec(&out, &scale_vec(c, b));
        }
        out
    }
}

/// Solution of an inhomogeneous linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    pub kernel: Subspace,
}

/// Solve `A x = b` exactly. Returns `None` when `b` is outside the column
/// space; otherwise a particular solution together with the null space.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Solution>, Error> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            rows: a.rows(),
            cols: a.cols(),
            vec_len: b.len(),
        });
    }
    let aug = a.hstack(&Matrix::from_cols(vec![b.to_vec()]));
    let (red, pivots) = aug.rref();
    if pivots.contains(&a.cols()) {
        return Ok(None); // inconsistent
    }
    let mut particular = zeros_vec(a.cols());
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = red.at(r, a.cols()).clone();
    }
    Ok(Some(Solution {
        particular,
        kernel: null_space(a),
    }))
}

/// Null space of `A` as a subspace of the domain.
pub fn null_space(a: &Matrix) -> Subspace {
    let (red, pivots) = a.rref();
    let mut basis = Vec::new();
    for j in 0..a.cols() {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = zeros_vec(a.cols());
        v[j] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -red.at(r, j).clone();
        }
        basis.push(v);
    }
    Subspace::span(a.cols(), basis)
}

/// Column space of `A` as a subspace of the codomain.
pub fn column_space(a: &Matrix) -> Subspace {
    Subspace::span(a.rows(), a.transpose().row_vecs())
}

/// Kernel and image of the linear map `f`.
pub fn kernel_image(f: &Matrix) -> (Subspace, Subspace) {
    (null_space(f), column_space(f))
}

/// Pullback `{(a, b) : f(a) = g(b)}` as a subspace of the direct sum of the
/// two domains. The maps must share a codomain.
pub fn pullback_space(f: &Matrix, g: &Matrix) -> Result<Subspace, Error> {
    if f.rows() != g.rows() {
        return Err(Error::CodomainMismatch {
            left: f.rows(),
            right: g.rows(),
        });
    }
    let stacked = f.hstack(&g.scale(&-Scalar::one()));
    Ok(null_space(&stacked))
}

/// Quotient of the ambient space by `w`. The projection has kernel exactly
/// `w`; the complement is spanned by the non-pivot coordinates of `w`'s
/// echelon basis, so the output is deterministic.
pub fn quotient(ambient_dim: usize, w: &Subspace) -> Result<(usize, Matrix), Error> {
    if w.ambient_dim() != ambient_dim {
        return Err(Error::AmbientMismatch {
            expected: ambient_dim,
            found: w.ambient_dim(),
        });
    }
    let dim = ambient_dim - w.dim();
    let nonpivot: Vec<usize> = (0..ambient_dim)
        .filter(|j| !w.pivots().contains(j))
        .collect();
    // proj(x)[r] = x[j_r] - sum_s x[pivot_s] * basis_s[j_r]
    let proj = Matrix::from_fn(dim, ambient_dim, |r, c| {
        let j = nonpivot[r];
        if c == j {
            Scalar::one()
        } else if let Some(s) = w.pivots().iter().position(|&p| p == c) {
            -w.basis()[s][j].clone()
        } else {
            Scalar::zero()
        }
    });
    Ok((dim, proj))
}

/// Section of the quotient projection: maps quotient coordinates to the
/// complement spanned by the non-pivot coordinates.
pub fn quotient_section(ambient_dim: usize, w: &Subspace) -> Matrix {
    let nonpivot: Vec<usize> = (0..ambient_dim)
        .filter(|j| !w.pivots().contains(j))
        .collect();
    Matrix::from_fn(ambient_dim, nonpivot.len(), |i, j| {
        if i == nonpivot[j] {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}
