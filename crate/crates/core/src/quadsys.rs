//! Polynomial systems of degree at most two, reduction of arbitrary
//! polynomial systems to that form, and the operators of the coefficient
//! recurrence at a base point.
//!
//! Equation `k` of a quadratic system is
//!
//! ```text
//! F_k(X) = sum_ij alpha^k_ij x_i x_j + sum_i beta^k_i x_i + gamma^k
//! ```
//!
//! with `alpha^k` symmetric. The bilinear map is `B(X, Y)_k = sum_ij
//! alpha^k_ij x_i y_j` and the linearization at `X0` is
//! `C X = B(X0, X) + B(X, X0) + A X`, where `A` collects the `beta` rows.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ratlinalg::{kernel_basis, LinAlgError, Matrix, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("equation {equation}: {what} index {index} out of range for {variables} variables")]
    IndexOutOfRange {
        equation: usize,
        what: &'static str,
        index: usize,
        variables: usize,
    },
    #[error("expected a vector of length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("base point is not a solution; residual {residual}")]
    NotASolution { residual: Vector },
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("equation {equation}: exponent vector has {found} entries, expected {expected}")]
    ExponentLength {
        equation: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn check_len(expected: usize, found: usize) -> Result<(), SystemError> {
    if expected == found {
        Ok(())
    } else {
        Err(SystemError::LengthMismatch { expected, found })
    }
}

/// Coefficients of one equation as they appear in input files: `alpha`
/// entries may be listed asymmetrically and repeated entries accumulate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawEquation {
    pub alpha: Vec<(usize, usize, Scalar)>,
    pub beta: Vec<(usize, Scalar)>,
    pub gamma: Scalar,
}

/// One symmetrized equation. `quad` stores `alpha_ij` for `i <= j` only,
/// zero entries omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticEquation {
    quad: BTreeMap<(usize, usize), Scalar>,
    linear: Vector,
    constant: Scalar,
}

impl QuadraticEquation {
    pub fn alpha(&self, i: usize, j: usize) -> Scalar {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.quad.get(&key).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Nonzero upper-triangle entries `(i, j, alpha_ij)` with `i <= j`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.quad.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn beta(&self) -> &Vector {
        &self.linear
    }

    pub fn gamma(&self) -> &Scalar {
        &self.constant
    }

    pub fn is_linear(&self) -> bool {
        self.quad.is_empty()
    }

    fn bilinear(&self, x: &Vector, y: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for (&(i, j), a) in &self.quad {
            if i == j {
                acc += a * &x[i] * &y[i];
            } else {
                acc += a * (&x[i] * &y[j] + &x[j] * &y[i]);
            }
        }
        acc
    }
}

/// A system of `n` equations of degree at most two in `m` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSystem {
    variables: Vec<String>,
    equations: Vec<QuadraticEquation>,
}

/// Builds a system from raw coefficients, replacing each `alpha` by
/// `(alpha + alpha^T) / 2`. The quadratic forms are unchanged.
pub fn validate_and_symmetrize(
    variables: Vec<String>,
    raw: &[RawEquation],
) -> Result<QuadraticSystem, SystemError> {
    check_unique(&variables)?;
    let m = variables.len();
    let half = Scalar::new(1.into(), 2.into());
    let mut equations = Vec::with_capacity(raw.len());
    for (k, eq) in raw.iter().enumerate() {
        let mut full: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (i, j, v) in &eq.alpha {
            for &idx in [i, j] {
                if idx >= m {
                    return Err(SystemError::IndexOutOfRange {
                        equation: k,
                        what: "alpha",
                        index: idx,
                        variables: m,
                    });
                }
            }
            *full.entry((*i, *j)).or_insert_with(Scalar::zero) += v;
        }
        let mut quad = BTreeMap::new();
        for (&(i, j), v) in &full {
            if i > j && full.contains_key(&(j, i)) {
                continue;
            }
            let value = if i == j {
                v.clone()
            } else {
                let other = full.get(&(j, i)).cloned().unwrap_or_else(Scalar::zero);
                (v + other) * &half
            };
            if !value.is_zero() {
                quad.insert((i.min(j), i.max(j)), value);
            }
        }
        let mut linear = Vector::zeros(m);
        for (i, v) in &eq.beta {
            if *i >= m {
                return Err(SystemError::IndexOutOfRange {
                    equation: k,
                    what: "beta",
                    index: *i,
                    variables: m,
                });
            }
            linear[*i] += v;
        }
        equations.push(QuadraticEquation {
            quad,
            linear,
            constant: eq.gamma.clone(),
        });
    }
    Ok(QuadraticSystem {
        variables,
        equations,
    })
}

fn check_unique(names: &[String]) -> Result<(), SystemError> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(SystemError::DuplicateVariable(n.clone()));
        }
    }
    Ok(())
}

impl QuadraticSystem {
    /// Variable count `m`.
    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    /// Equation count `n`.
    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[QuadraticEquation] {
        &self.equations
    }

    /// Dense symmetric `alpha` matrix of equation `k`.
    pub fn alpha_matrix(&self, k: usize) -> Matrix {
        let m = self.variable_count();
        let mut a = Matrix::zeros(m, m);
        for (i, j, v) in self.equations[k].upper_entries() {
            a[(i, j)] = v.clone();
            a[(j, i)] = v.clone();
        }
        a
    }

    /// The `A` operator: row `k` is `beta^k`.
    pub fn linear_part(&self) -> Matrix {
        let rows = self
            .equations
            .iter()
            .map(|e| e.linear.entries().to_vec())
            .collect();
        Matrix::from_rows(self.variable_count(), rows).expect("beta rows have length m")
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Vector, SystemError> {
        check_len(self.variable_count(), x.len())?;
        Ok(self
            .equations
            .iter()
            .map(|e| e.bilinear(x, x) + e.linear.dot(x) + &e.constant)
            .collect())
    }

    /// `B(X, Y)`.
    pub fn bilinear(&self, x: &Vector, y: &Vector) -> Result<Vector, SystemError> {
        check_len(self.variable_count(), x.len())?;
        check_len(self.variable_count(), y.len())?;
        Ok(self.bilinear_unchecked(x, y))
    }

    pub(crate) fn bilinear_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        self.equations.iter().map(|e| e.bilinear(x, y)).collect()
    }

    /// `A X`.
    pub fn apply_linear(&self, x: &Vector) -> Result<Vector, SystemError> {
        check_len(self.variable_count(), x.len())?;
        Ok(self.equations.iter().map(|e| e.linear.dot(x)).collect())
    }

    /// Linearization at a base point; fails with the exact residual when
    /// `x0` does not solve the system.
    pub fn linearize(&self, x0: &Vector) -> Result<BaseOperators, SystemError> {
        let residual = self.evaluate(x0)?;
        if !residual.is_zero() {
            return Err(SystemError::NotASolution { residual });
        }
        let m = self.variable_count();
        let n = self.equation_count();
        let two = Scalar::from_integer(2.into());
        let mut c = Matrix::zeros(n, m);
        for (k, e) in self.equations.iter().enumerate() {
            for j in 0..m {
                c[(k, j)] = e.linear[j].clone();
            }
            for (i, j, a) in e.upper_entries() {
                c[(k, j)] += &two * a * &x0[i];
                if i != j {
                    c[(k, i)] += &two * a * &x0[j];
                }
            }
        }
        debug_assert!((0..m).all(|j| {
            let ej = Vector::unit(m, j);
            let col = self
                .bilinear_unchecked(x0, &ej)
                .scaled(&two)
                .add(&self.apply_linear(&ej).unwrap());
            col == c.column(j)
        }));
        let kernel = kernel_basis(&c);
        Ok(BaseOperators {
            system: self.clone(),
            base_point: x0.clone(),
            c,
            kernel,
        })
    }

    /// The same system written as general polynomials.
    pub fn to_general(&self) -> GeneralPolySystem {
        let m = self.variable_count();
        let two = Scalar::from_integer(2.into());
        let equations = self
            .equations
            .iter()
            .map(|e| {
                let mut p = Polynomial::zero(m);
                for (i, j, a) in e.upper_entries() {
                    let mut exps = vec![0u32; m];
                    exps[i] += 1;
                    exps[j] += 1;
                    let coeff = if i == j { a.clone() } else { a * &two };
                    p.add_term(exps, coeff);
                }
                for (i, b) in e.linear.iter().enumerate() {
                    let mut exps = vec![0u32; m];
                    exps[i] = 1;
                    p.add_term(exps, b.clone());
                }
                p.add_term(vec![0; m], e.constant.clone());
                p
            })
            .collect();
        GeneralPolySystem {
            variables: self.variables.clone(),
            equations,
        }
    }
}

/// Operators of the coefficient recurrence at a base point that solves the
/// system: `B`, `A` (through the system) and the linearization `C`, with the
/// kernel of `C` cached.
#[derive(Debug, Clone)]
pub struct BaseOperators {
    system: QuadraticSystem,
    base_point: Vector,
    c: Matrix,
    kernel: Vec<Vector>,
}

impl BaseOperators {
    pub fn system(&self) -> &QuadraticSystem {
        &self.system
    }

    pub fn base_point(&self) -> &Vector {
        &self.base_point
    }

    pub fn c_matrix(&self) -> &Matrix {
        &self.c
    }

    pub fn kernel(&self) -> &[Vector] {
        &self.kernel
    }

    pub fn kernel_dimension(&self) -> usize {
        self.kernel.len()
    }

    pub fn variable_count(&self) -> usize {
        self.c.cols()
    }

    pub fn equation_count(&self) -> usize {
        self.c.rows()
    }

    /// `B(X, Y)`; lengths must equal the variable count.
    pub fn bilinear(&self, x: &Vector, y: &Vector) -> Vector {
        debug_assert_eq!(x.len(), self.variable_count());
        debug_assert_eq!(y.len(), self.variable_count());
        self.system.bilinear_unchecked(x, y)
    }

    /// `-B(X, Y) - B(Y, X)`, the right-hand side attached to a coefficient pair.
    pub fn pair_rhs(&self, x: &Vector, y: &Vector) -> Vector {
        let two = Scalar::from_integer(2.into());
        self.bilinear(x, y).scaled(&-two)
    }

    pub fn apply_c(&self, x: &Vector) -> Vector {
        self.c.mul_vec(x).expect("length checked by caller")
    }
}

/// Multivariate polynomial as a map from exponent vectors to nonzero
/// coefficients. All exponent vectors have the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    variables: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl Polynomial {
    pub fn zero(variables: usize) -> Self {
        Polynomial {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        variables: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Self, SystemError> {
        let mut p = Polynomial::zero(variables);
        for (exps, c) in terms {
            check_len(variables, exps.len())?;
            p.add_term(exps, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: Scalar) {
        debug_assert_eq!(exponents.len(), self.variables);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Scalar)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Straightforward term-by-term evaluation.
    pub fn evaluate(&self, x: &[Scalar]) -> Scalar {
        self.terms.iter().fold(Scalar::zero(), |acc, (exps, c)| {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(exps) {
                for _ in 0..e {
                    t *= xi;
                }
            }
            acc + t
        })
    }

    fn widen(&mut self, variables: usize) {
        if variables == self.variables {
            return;
        }
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .map(|(mut e, c)| {
                e.resize(variables, 0);
                (e, c)
            })
            .collect();
        self.variables = variables;
    }
}

/// A polynomial system of arbitrary degree, as read before reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPolySystem {
    variables: Vec<String>,
    equations: Vec<Polynomial>,
}

impl GeneralPolySystem {
    pub fn new(variables: Vec<String>, equations: Vec<Polynomial>) -> Result<Self, SystemError> {
        check_unique(&variables)?;
        for (k, p) in equations.iter().enumerate() {
            if p.variables != variables.len() {
                return Err(SystemError::ExponentLength {
                    equation: k,
                    expected: variables.len(),
                    found: p.variables,
                });
            }
        }
        Ok(GeneralPolySystem {
            variables,
            equations,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Vector, SystemError> {
        check_len(self.variables.len(), x.len())?;
        Ok(self.equations.iter().map(|p| p.evaluate(x)).collect())
    }

    /// Converts a system whose equations all have degree at most two.
    /// Returns `None` if some equation has higher degree.
    pub fn to_quadratic(&self) -> Option<QuadraticSystem> {
        let m = self.variables.len();
        let mut raw = Vec::with_capacity(self.equations.len());
        for p in &self.equations {
            let mut eq = RawEquation::default();
            for (exps, c) in p.terms() {
                let support: Vec<usize> = exps
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                    .collect();
                match support.as_slice() {
                    [] => eq.gamma += c,
                    [i] => eq.beta.push((*i, c.clone())),
                    [i, j] => eq.alpha.push((*i, *j, c.clone())),
                    _ => return None,
                }
            }
            raw.push(eq);
        }
        let sys = validate_and_symmetrize(self.variables.clone(), &raw)
            .expect("indices come from exponent vectors of length m");
        debug_assert_eq!(sys.variable_count(), m);
        Some(sys)
    }
}

/// An auxiliary variable introduced by [`reduce_degree`], standing for a
/// monomial in variables with smaller indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxDefinition {
    pub variable: usize,
    pub monomial: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionMap {
    pub original_variable_count: usize,
    pub auxiliary: Vec<AuxDefinition>,
}

impl ReductionMap {
    pub fn is_empty(&self) -> bool {
        self.auxiliary.is_empty()
    }

    /// Extends a point of the original system by the values of the auxiliary
    /// monomials.
    pub fn lift_base_point(&self, x0: &Vector) -> Result<Vector, SystemError> {
        check_len(self.original_variable_count, x0.len())?;
        let mut out = x0.entries().to_vec();
        for def in &self.auxiliary {
            debug_assert_eq!(def.variable, out.len());
            let mut value = Scalar::one();
            for (x, &e) in out.iter().zip(&def.monomial) {
                for _ in 0..e {
                    value *= x;
                }
            }
            out.push(value);
        }
        Ok(Vector::new(out))
    }

    /// Drops the auxiliary coordinates.
    pub fn project(&self, x: &Vector) -> Vector {
        Vector::new(x.entries()[..self.original_variable_count].to_vec())
    }
}

/// Free-standing form of [`ReductionMap::lift_base_point`].
pub fn lift_base_point(map: &ReductionMap, x0: &Vector) -> Result<Vector, SystemError> {
    map.lift_base_point(x0)
}

/// Rewrites a polynomial system into an equivalent one of degree at most two.
///
/// While some term has degree `d > 2`, the first such term of highest degree
/// (equation order, then exponent order) is split: its first `ceil(d / 2)`
/// variable factors, taken in variable order, are replaced by an auxiliary
/// variable `u` together with the new equation `monomial - u = 0`. Auxiliary
/// variables are reused when the same sub-monomial shows up again.
pub fn reduce_degree(poly: &GeneralPolySystem) -> (QuadraticSystem, ReductionMap) {
    let original = poly.variables.len();
    let mut variables = poly.variables.clone();
    let mut equations = poly.equations.clone();
    let mut known: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut map = ReductionMap {
        original_variable_count: original,
        auxiliary: Vec::new(),
    };

    loop {
        let mut target: Option<(usize, Vec<u32>, u32)> = None;
        for (k, p) in equations.iter().enumerate() {
            for (exps, _) in p.terms() {
                let d: u32 = exps.iter().sum();
                if d > 2 && target.as_ref().is_none_or(|(_, _, best)| d > *best) {
                    target = Some((k, exps.to_vec(), d));
                }
            }
        }
        let Some((k, exps, d)) = target else { break };

        let mut take = d.div_ceil(2);
        let mut sub = vec![0u32; exps.len()];
        for (i, &e) in exps.iter().enumerate() {
            let t = e.min(take);
            sub[i] = t;
            take -= t;
            if take == 0 {
                break;
            }
        }
        // Trailing zeros do not distinguish monomials.
        let mut key = sub.clone();
        while key.last() == Some(&0) {
            key.pop();
        }

        let aux = match known.get(&key) {
            Some(&v) => v,
            None => {
                let v = variables.len();
                variables.push(fresh_name(&variables));
                for p in equations.iter_mut() {
                    p.widen(v + 1);
                }
                let mut def = Polynomial::zero(v + 1);
                let mut mono = sub.clone();
                mono.resize(v + 1, 0);
                def.add_term(mono, Scalar::one());
                let mut u = vec![0u32; v + 1];
                u[v] = 1;
                def.add_term(u, -Scalar::one());
                equations.push(def);
                known.insert(key, v);
                map.auxiliary.push(AuxDefinition {
                    variable: v,
                    monomial: sub.clone(),
                });
                v
            }
        };

        let width = variables.len();
        let p = &mut equations[k];
        p.widen(width);
        let mut old = exps.clone();
        old.resize(width, 0);
        let coeff = p.terms.remove(&old).expect("target term present");
        let mut new = old.clone();
        for (i, s) in sub.iter().enumerate() {
            new[i] -= s;
        }
        new[aux] += 1;
        p.add_term(new, coeff);
    }

    let width = variables.len();
    for p in equations.iter_mut() {
        p.widen(width);
    }
    let general = GeneralPolySystem {
        variables,
        equations,
    };
    let quad = general
        .to_quadratic()
        .expect("all terms have degree at most two after reduction");
    (quad, map)
}

fn fresh_name(taken: &[String]) -> String {
    let mut i = taken.len() + 1;
    loop {
        let name = format!("x{i}");
        if !taken.contains(&name) {
            return name;
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::{int, ratio};

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    pub(crate) fn example1() -> QuadraticSystem {
        let raw = vec![
            RawEquation {
                alpha: vec![(0, 0, int(1)), (1, 1, int(1)), (2, 2, int(-1))],
                beta: vec![],
                gamma: int(-1),
            },
            RawEquation {
                alpha: vec![],
                beta: vec![(0, int(3)), (1, int(1)), (2, int(-3))],
                gamma: int(1),
            },
            RawEquation {
                alpha: vec![],
                beta: vec![(0, int(1)), (1, int(-3)), (2, int(1))],
                gamma: int(3),
            },
        ];
        validate_and_symmetrize(names(3), &raw).unwrap()
    }

    #[test]
    fn symmetrization_splits_off_diagonal_mass() {
        let raw = [RawEquation {
            alpha: vec![(0, 1, int(2))],
            ..Default::default()
        }];
        let sys = validate_and_symmetrize(names(2), &raw).unwrap();
        assert_eq!(
            sys.alpha_matrix(0),
            Matrix::from_int_rows(&[&[0, 1], &[1, 0]])
        );

        let raw = [RawEquation {
            alpha: vec![
                (0, 0, int(1)),
                (0, 1, int(3)),
                (1, 0, int(1)),
                (1, 1, int(1)),
            ],
            ..Default::default()
        }];
        let sys = validate_and_symmetrize(names(2), &raw).unwrap();
        assert_eq!(
            sys.alpha_matrix(0),
            Matrix::from_int_rows(&[&[1, 2], &[2, 1]])
        );
        let at_ones = sys.evaluate(&Vector::from_ints(&[1, 1])).unwrap();
        assert_eq!(at_ones[0], int(6));
    }

    #[test]
    fn example1_tables_are_accepted_unchanged() {
        let sys = example1();
        assert_eq!(
            sys.alpha_matrix(0),
            Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]])
        );
        assert!(sys.equations()[0].beta().is_zero());
        assert_eq!(sys.equations()[0].gamma(), &int(-1));
    }

    #[test]
    fn example1_family_points_solve_the_system() {
        let sys = example1();
        assert!(sys
            .evaluate(&Vector::from_ints(&[5, 5, 7]))
            .unwrap()
            .is_zero());
        assert!(sys
            .evaluate(&Vector::from_ints(&[9, 8, 12]))
            .unwrap()
            .is_zero());
        let zero = validate_and_symmetrize(names(2), &[RawEquation::default()]).unwrap();
        assert!(zero
            .evaluate(&Vector::from_ints(&[3, -4]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn example1_linearization() {
        let ops = example1()
            .linearize(&Vector::from_ints(&[5, 5, 7]))
            .unwrap();
        assert_eq!(
            ops.c_matrix(),
            &Matrix::from_int_rows(&[&[10, 10, -14], &[3, 1, -3], &[1, -3, 1]])
        );
        assert_eq!(ops.kernel(), &[Vector::from_ints(&[4, 3, 5])]);
        let x1 = Vector::from_ints(&[4, 3, 5]);
        assert!(ops.bilinear(&x1, &x1).is_zero());
    }

    #[test]
    fn non_solution_base_point_is_rejected_with_residual() {
        let err = example1()
            .linearize(&Vector::from_ints(&[5, 5, 8]))
            .unwrap_err();
        assert_eq!(
            err,
            SystemError::NotASolution {
                residual: Vector::from_ints(&[-15, -3, 1])
            }
        );
    }

    #[test]
    fn length_and_index_errors() {
        assert!(example1().evaluate(&Vector::zeros(2)).is_err());
        assert!(example1()
            .bilinear(&Vector::zeros(3), &Vector::zeros(4))
            .is_err());
        let raw = [RawEquation {
            beta: vec![(5, int(1))],
            ..Default::default()
        }];
        assert!(matches!(
            validate_and_symmetrize(names(2), &raw),
            Err(SystemError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            validate_and_symmetrize(vec!["a".into(), "a".into()], &[]),
            Err(SystemError::DuplicateVariable(_))
        ));
    }

    fn poly(vars: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_terms(vars, terms.iter().map(|(e, c)| (e.to_vec(), int(*c)))).unwrap()
    }

    #[test]
    fn cubic_cusp_reduces_to_two_quadrics() {
        let g = GeneralPolySystem::new(names(2), vec![poly(2, &[(&[3, 0], 1), (&[0, 2], -1)])])
            .unwrap();
        let (q, map) = reduce_degree(&g);
        assert_eq!(q.variable_count(), 3);
        assert_eq!(q.equation_count(), 2);
        assert_eq!(
            map.auxiliary,
            vec![AuxDefinition {
                variable: 2,
                monomial: vec![2, 0]
            }]
        );
        // x1 x3 - x2^2 and x1^2 - x3
        let expected = GeneralPolySystem::new(
            names(3),
            vec![
                poly(3, &[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]),
                poly(3, &[(&[2, 0, 0], 1), (&[0, 0, 1], -1)]),
            ],
        )
        .unwrap();
        assert_eq!(q, expected.to_quadratic().unwrap());
        assert_eq!(
            map.lift_base_point(&Vector::zeros(2)).unwrap(),
            Vector::zeros(3)
        );
    }

    #[test]
    fn already_quadratic_system_is_untouched() {
        let g = example1().to_general();
        let (q, map) = reduce_degree(&g);
        assert!(map.is_empty());
        assert_eq!(q, example1());
        let x = Vector::from_ints(&[1, 2, 3]);
        assert_eq!(map.lift_base_point(&x).unwrap(), x);
    }

    #[test]
    fn lifting_fills_auxiliary_monomials() {
        let g = GeneralPolySystem::new(names(2), vec![poly(2, &[(&[2, 1], 1), (&[0, 0], -9)])])
            .unwrap();
        let (q, map) = reduce_degree(&g);
        let lifted = map.lift_base_point(&Vector::from_ints(&[3, 1])).unwrap();
        assert_eq!(lifted, Vector::from_ints(&[3, 1, 9]));
        assert!(q.evaluate(&lifted).unwrap().is_zero());
        assert!(g.evaluate(&Vector::from_ints(&[3, 1])).unwrap().is_zero());
    }

    #[test]
    fn high_powers_reuse_auxiliaries() {
        let g = GeneralPolySystem::new(names(1), vec![poly(1, &[(&[4], 1), (&[0], -16)])]).unwrap();
        let (q, map) = reduce_degree(&g);
        // x1^4 -> u^2 with u = x1^2
        assert_eq!(map.auxiliary.len(), 1);
        assert_eq!(q.equation_count(), 2);
        let lifted = map.lift_base_point(&Vector::from_ints(&[2])).unwrap();
        assert_eq!(lifted, Vector::from_ints(&[2, 4]));
        assert!(q.evaluate(&lifted).unwrap().is_zero());
        let half = Vector::new(vec![ratio(1, 2)]);
        assert_eq!(
            q.evaluate(&map.lift_base_point(&half).unwrap()).unwrap()[0],
            g.evaluate(&half).unwrap()[0]
        );
    }
}
