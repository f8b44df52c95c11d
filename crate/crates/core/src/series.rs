//! Truncated power series `Y(t) = Y_0 + Y_1 t + ... + Y_q t^q` around a base
//! point, the coefficient recurrence
//!
//! ```text
//! C Y_p = -sum_{l=1}^{p-1} B(Y_l, Y_{p-l})
//! ```
//!
//! and the operations built on it: constrained extension, residual orders and
//! reparameterization `t = tau + a tau^e`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::quadsys::{BaseOperators, QuadraticSystem};
use crate::ratlinalg::{independent_subset, kernel_basis, LinAlgError, Matrix, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("a series needs at least the base point")]
    Empty,
    #[error("coefficient {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("order {order} needs coefficients through {needed}, series has degree {degree}")]
    NotEnoughCoefficients {
        order: usize,
        needed: usize,
        degree: usize,
    },
    #[error("invalid subspace constraint: {0}")]
    InvalidConstraint(&'static str),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoefficients {
    coeffs: Vec<Vector>,
}

impl SeriesCoefficients {
    pub fn new(coeffs: Vec<Vector>) -> Result<Self, SeriesError> {
        let m = coeffs.first().ok_or(SeriesError::Empty)?.len();
        for (index, c) in coeffs.iter().enumerate() {
            if c.len() != m {
                return Err(SeriesError::LengthMismatch {
                    index,
                    expected: m,
                    found: c.len(),
                });
            }
        }
        Ok(SeriesCoefficients { coeffs })
    }

    /// The constant series at `x0`.
    pub fn constant(x0: Vector) -> Self {
        SeriesCoefficients { coeffs: vec![x0] }
    }

    /// `x0 + t v` padded with `leading_zeros` zero coefficients before `v`.
    pub fn from_direction(x0: Vector, v: Vector, leading_zeros: usize) -> Self {
        let m = x0.len();
        let mut coeffs = vec![x0];
        coeffs.extend(std::iter::repeat_n(Vector::zeros(m), leading_zeros));
        coeffs.push(v);
        SeriesCoefficients { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn variable_count(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn coefficients(&self) -> &[Vector] {
        &self.coeffs
    }

    pub fn coefficient(&self, p: usize) -> Option<&Vector> {
        self.coeffs.get(p)
    }

    pub fn base_point(&self) -> &Vector {
        &self.coeffs[0]
    }

    pub fn push(&mut self, next: Vector) -> Result<(), SeriesError> {
        if next.len() != self.variable_count() {
            return Err(SeriesError::LengthMismatch {
                index: self.coeffs.len(),
                expected: self.variable_count(),
                found: next.len(),
            });
        }
        self.coeffs.push(next);
        Ok(())
    }

    /// The first `q + 1` coefficients (all of them if the degree is lower).
    pub fn truncated(&self, q: usize) -> Self {
        SeriesCoefficients {
            coeffs: self.coeffs.iter().take(q + 1).cloned().collect(),
        }
    }

    /// True when `Y_1 = ... = Y_q = 0`.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Vector::is_zero)
    }

    pub fn into_coefficients(self) -> Vec<Vector> {
        self.coeffs
    }
}

/// Where the next coefficient has to live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceConstraint {
    Unconstrained,
    /// An independent spanning set.
    SpanOf(Vec<Vector>),
    /// A complement of `ker C`: independent and meeting the kernel only in 0.
    Complement(Vec<Vector>),
}

impl SubspaceConstraint {
    /// Span of arbitrary vectors, dropping zero and dependent ones.
    pub fn span_of(len: usize, vectors: &[Vector]) -> Result<Self, SeriesError> {
        let keep = independent_subset(len, vectors)?;
        Ok(SubspaceConstraint::SpanOf(
            keep.into_iter().map(|i| vectors[i].clone()).collect(),
        ))
    }

    fn basis(&self) -> Option<&[Vector]> {
        match self {
            SubspaceConstraint::Unconstrained => None,
            SubspaceConstraint::SpanOf(b) | SubspaceConstraint::Complement(b) => Some(b),
        }
    }

    /// Checks the basis against the operators it will be used with.
    pub fn validate(&self, ops: &BaseOperators) -> Result<(), SeriesError> {
        let Some(basis) = self.basis() else {
            return Ok(());
        };
        let m = ops.variable_count();
        if basis.iter().any(|v| v.len() != m) {
            return Err(SeriesError::InvalidConstraint(
                "basis vector of wrong length",
            ));
        }
        if independent_subset(m, basis)?.len() != basis.len() {
            return Err(SeriesError::InvalidConstraint(
                "basis is linearly dependent",
            ));
        }
        if let SubspaceConstraint::Complement(_) = self {
            let images: Vec<Vector> = basis.iter().map(|v| ops.apply_c(v)).collect();
            if independent_subset(ops.equation_count(), &images)?.len() != basis.len() {
                return Err(SeriesError::InvalidConstraint(
                    "complement meets the kernel of C",
                ));
            }
        }
        Ok(())
    }
}

/// `-sum_{l=1}^{p-1} B(Y_l, Y_{p-l})`; needs `Y_1 .. Y_{p-1}`.
pub fn recurrence_rhs(
    ops: &BaseOperators,
    s: &SeriesCoefficients,
    p: usize,
) -> Result<Vector, SeriesError> {
    if p == 0 || p > s.degree() + 1 {
        return Err(SeriesError::NotEnoughCoefficients {
            order: p,
            needed: p.saturating_sub(1),
            degree: s.degree(),
        });
    }
    check_width(ops, s)?;
    let y = s.coefficients();
    let mut acc = Vector::zeros(ops.equation_count());
    let two = Scalar::from_integer(2.into());
    // Pair l with p - l once, using B symmetry.
    for l in 1..=(p - 1) / 2 {
        acc.add_scaled(&two, &ops.bilinear(&y[l], &y[p - l]));
    }
    if p.is_multiple_of(2) && p >= 2 {
        acc.add_scaled(&Scalar::one(), &ops.bilinear(&y[p / 2], &y[p / 2]));
    }
    Ok(acc.neg())
}

fn check_width(ops: &BaseOperators, s: &SeriesCoefficients) -> Result<(), SeriesError> {
    if s.variable_count() != ops.variable_count() {
        return Err(SeriesError::LengthMismatch {
            index: 0,
            expected: ops.variable_count(),
            found: s.variable_count(),
        });
    }
    Ok(())
}

/// A solution of one recurrence step plus the directions in which it can be
/// changed without leaving the constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub next: Vector,
    pub freedom: Vec<Vector>,
}

/// Solves for `Y_{q+1}` inside the constraint; `None` if the right-hand side
/// is out of reach. The returned vector is the canonical representative.
pub fn extend_step(
    ops: &BaseOperators,
    s: &SeriesCoefficients,
    constraint: &SubspaceConstraint,
) -> Result<Option<Extension>, SeriesError> {
    constraint.validate(ops)?;
    let rhs = recurrence_rhs(ops, s, s.degree() + 1)?;
    solve_constrained(ops, &rhs, constraint)
}

pub(crate) fn solve_constrained(
    ops: &BaseOperators,
    rhs: &Vector,
    constraint: &SubspaceConstraint,
) -> Result<Option<Extension>, SeriesError> {
    let m = ops.variable_count();
    let c = ops.c_matrix();
    match constraint.basis() {
        None => Ok(
            crate::ratlinalg::solve_general(c, rhs)?.map(|sol| Extension {
                next: sol.particular,
                freedom: sol.nullspace,
            }),
        ),
        Some(basis) => {
            let images: Vec<Vector> = basis.iter().map(|v| ops.apply_c(v)).collect();
            let reduced = Matrix::from_columns(ops.equation_count(), &images)?;
            let Some(sol) = crate::ratlinalg::solve_general(&reduced, rhs)? else {
                return Ok(None);
            };
            let next = Vector::linear_combination(basis, sol.particular.entries(), m);
            let freedom = kernel_basis(&reduced)
                .iter()
                .map(|c| Vector::linear_combination(basis, c.entries(), m).primitive())
                .collect();
            Ok(Some(Extension { next, freedom }))
        }
    }
}

/// Result of extending a series step by step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Reached(SeriesCoefficients),
    /// The recurrence has no solution in the constraint at `order`.
    Stalled {
        series: SeriesCoefficients,
        order: usize,
        rhs: Vector,
    },
}

/// Repeats [`extend_step`] with canonical choices until `degree` is reached.
pub fn extend_to(
    ops: &BaseOperators,
    s: &SeriesCoefficients,
    degree: usize,
    constraint: &SubspaceConstraint,
) -> Result<Extended, SeriesError> {
    constraint.validate(ops)?;
    let mut series = s.clone();
    while series.degree() < degree {
        let order = series.degree() + 1;
        let rhs = recurrence_rhs(ops, &series, order)?;
        match solve_constrained(ops, &rhs, constraint)? {
            Some(ext) => series.push(ext.next)?,
            None => return Ok(Extended::Stalled { series, order, rhs }),
        }
    }
    Ok(Extended::Reached(series))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ResidualOrder {
    Finite(usize),
    Infinite,
}

impl ResidualOrder {
    /// True iff the series is an approximate solution of degree `q`.
    pub fn exceeds(self, q: usize) -> bool {
        match self {
            ResidualOrder::Infinite => true,
            ResidualOrder::Finite(p) => p > q,
        }
    }
}

/// Coefficients of `F(Y(t))` at orders `0 ..= 2q`; `F(Y(t))` is a polynomial
/// of exactly that degree bound, so nothing is truncated.
pub fn residual_coefficients(
    sys: &QuadraticSystem,
    s: &SeriesCoefficients,
) -> Result<Vec<Vector>, SeriesError> {
    let m = sys.variable_count();
    if s.variable_count() != m {
        return Err(SeriesError::LengthMismatch {
            index: 0,
            expected: m,
            found: s.variable_count(),
        });
    }
    let y = s.coefficients();
    let q = s.degree();
    let n = sys.equation_count();
    let mut out = Vec::with_capacity(2 * q + 1);
    out.push(sys.evaluate(&y[0]).expect("length checked"));
    for p in 1..=2 * q {
        let mut acc = Vector::zeros(n);
        for l in p.saturating_sub(q)..=p.min(q) {
            acc.add_scaled(&Scalar::one(), &sys.bilinear_unchecked(&y[l], &y[p - l]));
        }
        if p <= q {
            acc.add_scaled(
                &Scalar::one(),
                &sys.apply_linear(&y[p]).expect("length checked"),
            );
        }
        out.push(acc);
    }
    Ok(out)
}

/// Lowest order at which `F(Y(t))` has a nonzero coefficient. Order 0 is
/// reported when the base point itself is not a solution.
pub fn residual_order(
    sys: &QuadraticSystem,
    s: &SeriesCoefficients,
) -> Result<ResidualOrder, SeriesError> {
    Ok(residual_coefficients(sys, s)?
        .iter()
        .position(|c| !c.is_zero())
        .map_or(ResidualOrder::Infinite, ResidualOrder::Finite))
}

/// Coefficients of `Y(tau + a tau^e)` through `out_degree`.
pub fn reparameterize(
    s: &SeriesCoefficients,
    a: &Scalar,
    e: usize,
    out_degree: usize,
) -> SeriesCoefficients {
    assert!(e >= 2, "reparameterization exponent must be at least 2");
    let m = s.variable_count();
    let mut t = vec![Scalar::zero(); out_degree + 1];
    if out_degree >= 1 {
        t[1] = Scalar::one();
    }
    if e <= out_degree {
        t[e] = a.clone();
    }
    let mut power = vec![Scalar::zero(); out_degree + 1];
    power[0] = Scalar::one();
    let mut out = vec![Vector::zeros(m); out_degree + 1];
    for y in s.coefficients() {
        if power.iter().all(Zero::is_zero) {
            break;
        }
        for (target, c) in out.iter_mut().zip(&power) {
            if !c.is_zero() {
                target.add_scaled(c, y);
            }
        }
        power = truncated_product(&power, &t, out_degree);
    }
    SeriesCoefficients { coeffs: out }
}

fn truncated_product(a: &[Scalar], b: &[Scalar], degree: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); degree + 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(degree + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}
