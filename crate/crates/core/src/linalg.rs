//! Dense complex vectors and matrices for the 2- and 4-dimensional spaces of
//! the simulator.
//!
//! Basis ordering for the composite path ⊗ polarization space is fixed
//! globally as path-major: `a⊗V, a⊗H, b⊗V, b⊗H` (index = 2·path + pol).

use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

pub type C<T> = Complex<T>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch between {left} and {right}")]
    DimensionMismatch {
        op: &'static str,
        left: Shape,
        right: Shape,
    },
    #[error("expected a square matrix, got {0}")]
    NonSquare(Shape),
    #[error("entry count {got} does not match shape {shape}")]
    BadLength { shape: Shape, got: usize },
    #[error("non-finite component at index {0}")]
    NonFinite(usize),
    #[error("empty vector or matrix")]
    Empty,
}

/// Shape of a vector (`cols == 1`) or matrix, used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

fn check_finite<T: Real>(data: &[C<T>]) -> Result<(), LinalgError> {
    match data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(i) => Err(LinalgError::NonFinite(i)),
        None => Ok(()),
    }
}

/// Complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec<T> {
    data: Vec<C<T>>,
}

impl<T: Real> CVec<T> {
    pub fn new(data: Vec<C<T>>) -> Result<Self, LinalgError> {
        if data.is_empty() {
            return Err(LinalgError::Empty);
        }
        check_finite(&data)?;
        Ok(Self { data })
    }

    /// Builds a vector from real components.
    pub fn from_reals(xs: &[T]) -> Result<Self, LinalgError> {
        Self::new(xs.iter().map(|&x| C::new(x, T::zero())).collect())
    }

    pub(crate) fn from_raw(data: Vec<C<T>>) -> Self {
        debug_assert!(!data.is_empty());
        Self { data }
    }

    /// Unit vector `e_index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut data = vec![C::new(T::zero(), T::zero()); dim];
        data[index] = C::new(T::one(), T::zero());
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![C::new(T::zero(), T::zero()); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<C<T>> {
        self.data
    }

    pub fn norm_sqr(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self::from_raw(self.data.iter().map(|&z| z * k).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with("add", other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with("sub", other, |x, y| x - y)
    }

    fn zip_with(
        &self,
        op: &'static str,
        other: &Self,
        f: impl Fn(C<T>, C<T>) -> C<T>,
    ) -> Result<Self, LinalgError> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        ))
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T, LinalgError> {
        Ok(self
            .sub(other)?
            .data
            .iter()
            .fold(T::zero(), |m, z| m.max(z.norm())))
    }

    pub fn shape(&self) -> Shape {
        Shape {
            rows: self.dim(),
            cols: 1,
        }
    }
}

impl<T> std::ops::Index<usize> for CVec<T> {
    type Output = C<T>;
    fn index(&self, i: usize) -> &C<T> {
        &self.data[i]
    }
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self, LinalgError> {
        let shape = Shape { rows, cols };
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadLength {
                shape,
                got: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// 2×2 matrix from rows.
    pub fn mat2(m: [[C<T>; 2]; 2]) -> Self {
        Self::from_raw(2, 2, vec![m[0][0], m[0][1], m[1][0], m[1][1]])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C::new(T::one(), T::zero());
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![C::new(T::zero(), T::zero()); rows * cols])
    }

    /// Diagonal matrix from the given entries.
    pub fn diag(entries: &[C<T>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Outer product `|u)(v|`.
    pub fn outer(u: &CVec<T>, v: &CVec<T>) -> Self {
        let (m, n) = (u.dim(), v.dim());
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                data.push(u[i] * v[j].conj());
            }
        }
        Self::from_raw(m, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> Shape {
        Shape {
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> C<T> {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: C<T>) {
        self.data[r * self.cols + c] = z;
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|&z| z * k).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with("add", other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with("sub", other, |x, y| x - y)
    }

    fn zip_with(
        &self,
        op: &'static str,
        other: &Self,
        f: impl Fn(C<T>, C<T>) -> C<T>,
    ) -> Result<Self, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        ))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T, LinalgError> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn trace(&self) -> Result<C<T>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare(self.shape()));
        }
        Ok((0..self.rows).fold(C::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i)))
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare(self.shape()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = matmul(&acc, self)?;
        }
        Ok(acc)
    }
}

/// Tensor product of two vectors: component `i·n + j` is `u_i · v_j`.
pub fn tensor<T: Real>(u: &CVec<T>, v: &CVec<T>) -> CVec<T> {
    let data = u
        .as_slice()
        .iter()
        .flat_map(|&x| v.as_slice().iter().map(move |&y| x * y))
        .collect();
    CVec::from_raw(data)
}

/// Kronecker product `A ⊗ B`.
pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
    let mut out = CMat::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, x * b.get(k, l));
                }
            }
        }
    }
    out
}

pub fn matvec<T: Real>(m: &CMat<T>, v: &CVec<T>) -> Result<CVec<T>, LinalgError> {
    if m.cols != v.dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "matvec",
            left: m.shape(),
            right: v.shape(),
        });
    }
    let data = (0..m.rows)
        .map(|r| {
            m.data[r * m.cols..(r + 1) * m.cols]
                .iter()
                .zip(v.as_slice())
                .fold(C::new(T::zero(), T::zero()), |acc, (&x, &y)| acc + x * y)
        })
        .collect();
    Ok(CVec::from_raw(data))
}

pub fn matmul<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>, LinalgError> {
    if a.cols != b.rows {
        return Err(LinalgError::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = CMat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            for j in 0..b.cols {
                out.data[i * b.cols + j] = out.data[i * b.cols + j] + x * b.get(k, j);
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(m: &CMat<T>) -> CMat<T> {
    let mut out = CMat::zeros(m.cols, m.rows);
    for r in 0..m.rows {
        for c in 0..m.cols {
            out.set(c, r, m.get(r, c).conj());
        }
    }
    out
}

/// `(u|v)`, conjugate-linear in `u`.
pub fn inner<T: Real>(u: &CVec<T>, v: &CVec<T>) -> Result<C<T>, LinalgError> {
    if u.dim() != v.dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "inner",
            left: u.shape(),
            right: v.shape(),
        });
    }
    Ok(u
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .fold(C::new(T::zero(), T::zero()), |acc, (x, &y)| acc + x.conj() * y))
}

/// `AB - BA`.
pub fn commutator<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>, LinalgError> {
    matmul(a, b)?.sub(&matmul(b, a)?)
}

/// True iff the max-abs entry of `M†M − I` is at most `tol`.
pub fn is_unitary<T: Real>(m: &CMat<T>, tol: T) -> Result<bool, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare(m.shape()));
    }
    let defect = matmul(&adjoint(m), m)?.sub(&CMat::identity(m.rows))?;
    Ok(defect.max_abs() <= tol)
}

/// True iff the max-abs entry of `M − M†` is at most `tol`.
pub fn is_hermitian<T: Real>(m: &CMat<T>, tol: T) -> Result<bool, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare(m.shape()));
    }
    Ok(m.max_abs_diff(&adjoint(m))? <= tol)
}
