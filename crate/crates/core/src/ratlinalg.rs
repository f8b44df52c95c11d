//! Exact rational linear algebra.
//!
//! Every routine here works over arbitrary-precision rationals. Elimination is
//! carried out fraction-free on integer rows (each row is kept primitive) and
//! only normalized back to rationals once the reduced row echelon form is
//! known, so verdicts about rank, kernels and image membership are exact.

use std::fmt;
use std::ops::{Deref, Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
}

fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<(), LinAlgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinAlgError::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {input:?}: expected an integer or \"p/q\" with q != 0")]
pub struct ScalarParseError {
    pub input: String,
}

/// Parses `"p"` or `"p/q"` (optional leading `-`).
pub fn parse_scalar(input: &str) -> Result<Scalar, ScalarParseError> {
    let err = || ScalarParseError {
        input: input.to_owned(),
    };
    let well_formed = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match input.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (input, None),
    };
    if !well_formed(num) {
        return Err(err());
    }
    let numer = BigInt::from_str(num).map_err(|_| err())?;
    let denom = match den {
        Some(d) => {
            if !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return Err(err());
            }
            BigInt::from_str(d).map_err(|_| err())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Dense vector of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        Vector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Vector(vec![Scalar::zero(); len])
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = Scalar::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Vector(values.iter().map(|&v| int(v)).collect())
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scaled(&self, factor: &Scalar) -> Vector {
        Vector(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|x| -x).collect())
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, factor: &Scalar, other: &Vector) {
        debug_assert_eq!(self.len(), other.len());
        if factor.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += factor * b;
        }
    }

    /// Rescales to a primitive integer vector with the same direction.
    /// The zero vector is returned unchanged.
    pub fn primitive(&self) -> Vector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| (x * &lcm).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Vector(
            ints.into_iter()
                .map(|x| Scalar::from_integer(x / &gcd))
                .collect(),
        )
    }

    pub fn linear_combination(vectors: &[Vector], coefficients: &[Scalar], len: usize) -> Vector {
        let mut out = Vector::zeros(len);
        for (v, c) in vectors.iter().zip(coefficients) {
            out.add_scaled(c, v);
        }
        out
    }
}

impl Deref for Vector {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(v: Vec<Scalar>) -> Self {
        Vector(v)
    }
}

impl FromIterator<Scalar> for Vector {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
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
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix with `cols` columns from row vectors; every row must
    /// have exactly `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinAlgError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor for integer test fixtures. Panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self, LinAlgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            check_dim("column length", rows, col.len())?;
            for i in 0..rows {
                m[(i, j)] = col[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector, LinAlgError> {
        check_dim("matrix-vector product", self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.iter())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        check_dim("matrix product", self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sub-matrix made of the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn rank(&self) -> usize {
        Rref::of(self).pivots.len()
    }

    /// Determinant by Bareiss fraction-free elimination. Independent of the
    /// echelon routine used elsewhere; certificate verifiers rely on that.
    pub fn determinant(&self) -> Result<Scalar, LinAlgError> {
        check_dim("determinant (square matrix)", self.rows, self.cols)?;
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let (mut a, denoms) = integer_rows(self);
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(Scalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det_int = sign * a[n - 1][n - 1].clone();
        let scale = denoms.iter().fold(BigInt::one(), |acc, d| acc * d);
        Ok(Scalar::new(det_int, scale))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Clears denominators row by row. Returns the integer rows and, per row, the
/// positive factor each row was multiplied by.
fn integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows);
    let mut factors = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let slice = &m.data[i * m.cols..(i + 1) * m.cols];
        let lcm = slice
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(slice.iter().map(|x| (x * &lcm).to_integer()).collect());
        factors.push(lcm);
    }
    (rows, factors)
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Reduced row echelon form: nonzero rows only, pivot entries equal to one.
#[derive(Debug, Clone)]
pub(crate) struct Rref {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn of(m: &Matrix) -> Rref {
        let (mut a, _) = integer_rows(m);
        for row in a.iter_mut() {
            make_primitive(row);
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == a.len() {
                break;
            }
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r);
            let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
            for other in head.iter_mut().chain(tail.iter_mut()) {
                if other[c].is_zero() {
                    continue;
                }
                let f = other[c].clone();
                let p = &pivot_row[c];
                for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                    *x = &*x * p - &f * y;
                }
                make_primitive(other);
            }
            pivots.push(c);
            r += 1;
        }
        let rows = a
            .into_iter()
            .take(pivots.len())
            .zip(&pivots)
            .map(|(row, &pc)| {
                let pivot = row[pc].clone();
                row.into_iter()
                    .map(|x| Scalar::new(x, pivot.clone()))
                    .collect()
            })
            .collect();
        Rref { rows, pivots }
    }

    fn free_columns(&self, upto: usize) -> Vec<usize> {
        (0..upto).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Kernel basis of the first `upto` columns, one vector per free column
    /// in column order, each rescaled to a primitive integer vector.
    fn kernel(&self, upto: usize) -> Vec<Vector> {
        self.free_columns(upto)
            .into_iter()
            .map(|f| {
                let mut v = Vector::zeros(upto);
                v[f] = Scalar::one();
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    if pc < upto {
                        v[pc] = -row[f].clone();
                    }
                }
                v.primitive()
            })
            .collect()
    }
}

/// A solution of `M x = v`: the canonical particular solution (zeros at the
/// free columns of the reduced echelon form) plus a kernel basis of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSolution {
    pub particular: Vector,
    pub nullspace: Vec<Vector>,
}

pub fn solve_general(m: &Matrix, v: &Vector) -> Result<Option<GeneralSolution>, LinAlgError> {
    check_dim("solve_general right-hand side", m.rows, v.len())?;
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = v[i].clone();
    }
    let rref = Rref::of(&aug);
    if rref.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut particular = Vector::zeros(m.cols);
    for (row, &pc) in rref.rows.iter().zip(&rref.pivots) {
        particular[pc] = row[m.cols].clone();
    }
    Ok(Some(GeneralSolution {
        particular,
        nullspace: rref.kernel(m.cols),
    }))
}

/// Basis of `{x : M x = 0}`, ordered by free column; empty iff the kernel is trivial.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    Rref::of(m).kernel(m.cols)
}

/// Basis of `{w : w^T M = 0}`.
pub fn cokernel_basis(m: &Matrix) -> Vec<Vector> {
    kernel_basis(&m.transpose())
}

pub fn image_contains(m: &Matrix, v: &Vector) -> Result<bool, LinAlgError> {
    Ok(solve_general(m, v)?.is_some())
}

/// Indices of a maximal linearly independent subset of `vectors`, chosen
/// greedily in order.
pub fn independent_subset(len: usize, vectors: &[Vector]) -> Result<Vec<usize>, LinAlgError> {
    let m = Matrix::from_columns(len, vectors)?;
    Ok(Rref::of(&m).pivots)
}

/// Row indices of `m` forming a maximal independent set, chosen greedily.
pub fn independent_rows(m: &Matrix) -> Vec<usize> {
    Rref::of(&m.transpose()).pivots
}

/// Coefficients `c` with `M (sum c_i s_i) = v`, canonical in span coordinates
/// (zeros at free coordinates of the reduced system). `None` iff no
/// combination of the span vectors solves the system.
pub fn solve_in_span_coefficients(
    m: &Matrix,
    v: &Vector,
    span: &[Vector],
) -> Result<Option<Vec<Scalar>>, LinAlgError> {
    check_dim("solve_in_span right-hand side", m.rows, v.len())?;
    for s in span {
        check_dim("solve_in_span span vector", m.cols, s.len())?;
    }
    let images: Vec<Vector> = span
        .iter()
        .map(|s| m.mul_vec(s))
        .collect::<Result<_, _>>()?;
    let reduced = Matrix::from_columns(m.rows, &images)?;
    Ok(solve_general(&reduced, v)?.map(|sol| sol.particular.into_entries()))
}

pub fn solve_in_span(
    m: &Matrix,
    v: &Vector,
    span: &[Vector],
) -> Result<Option<Vector>, LinAlgError> {
    Ok(solve_in_span_coefficients(m, v, span)?
        .map(|c| Vector::linear_combination(span, &c, m.cols)))
}

/// Sign of a scalar as -1, 0 or 1.
pub fn signum(x: &Scalar) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
