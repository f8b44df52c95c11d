//! Rigidity and flexibility certificates for a solution `X0` of a quadratic
//! system, their independent verifiers, and the analysis pipeline.
//!
//! * [`theorem2_check`]: `ker C = 0`, witnessed by a nonsingular maximal minor.
//! * [`theorem3_check`]: no nonzero `X1` in `ker C` has `B(X1, X1)` in `im C`.
//! * [`theorem1_check`]: a span-closure condition on a truncated series that
//!   guarantees extension to an analytic family.
//! * [`t_standard_run`]: when `ker C` is a line, the normalized formal
//!   solution with higher coefficients in a complement `T` either exists to
//!   every order or fails at a finite order, and failure proves isolation.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::quadsys::{BaseOperators, QuadraticSystem, SystemError};
use crate::ratlinalg::{
    cokernel_basis, independent_rows, independent_subset, solve_in_span_coefficients, Matrix,
    Scalar, Vector,
};
use crate::series::{
    extend_to, recurrence_rhs, residual_order, solve_constrained, Extended, SeriesCoefficients,
    SeriesError, SubspaceConstraint,
};

pub const DEFAULT_Q_MAX: usize = 8;
pub const DEFAULT_MAX_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `C` has full column rank: the listed rows form a nonsingular square minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderRigid {
    pub rows: Vec<usize>,
    pub minor_determinant: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionReason {
    /// The projected form of this cokernel functional is definite on `ker C`.
    DefiniteForm { functional: usize },
    /// Two-dimensional kernel: every real root of form `base` (all of them
    /// rational, listed as kernel coordinates) is a non-root of the form
    /// named in `refuted_by`.
    NoCommonRoot {
        base: usize,
        roots: Vec<(Scalar, Scalar)>,
        refuted_by: Vec<usize>,
    },
    /// Two-dimensional kernel: form `base` has two irrational conjugate roots
    /// and form `other` is nonzero and not proportional to it, so they share
    /// no root.
    IrrationalRootsNotShared { base: usize, other: usize },
}

/// No order-two approximate solution with nonzero first coefficient exists.
/// `forms[l]` is the symmetric matrix `(w_l . B(k_i, k_j))_ij` for cokernel
/// functional `w_l` and kernel basis `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondOrderObstruction {
    pub kernel: Vec<Vector>,
    pub cokernel: Vec<Vector>,
    pub forms: Vec<Matrix>,
    pub reason: ObstructionReason,
}

/// Solution of `C y = -2 B(Y_i, Y_j)` as coefficients over `Y_k .. Y_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSolution {
    pub i: usize,
    pub j: usize,
    pub coefficients: Vec<Scalar>,
}

/// Span-closure certificate for the truncated series `Y_0 .. Y_q`. The
/// bridge holds `Y_{q+1} .. Y_{2q}` as coefficients over `Y_k .. Y_q`;
/// past order `2q` every recurrence right-hand side is a combination of the
/// certified pairs, so the series extends inside the span to all orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Flex {
    pub q: usize,
    pub k: usize,
    pub series: SeriesCoefficients,
    pub pairs: Vec<PairSolution>,
    pub bridge: Vec<Vec<Scalar>>,
}

impl Theorem1Flex {
    pub fn span(&self) -> &[Vector] {
        &self.series.coefficients()[self.k..=self.q]
    }

    /// The certified series continued through order `2q`.
    pub fn extended_series(&self) -> SeriesCoefficients {
        let m = self.series.variable_count();
        let mut s = self.series.clone();
        for c in &self.bridge {
            let next = Vector::linear_combination(self.span(), c, m);
            s.push(next).expect("same width");
        }
        s
    }
}

/// The normalized formal solution with `Y_p` in `T` (p >= 2) has no
/// coefficient at order `p`: `rhs` is not in `im C`, as `functional` shows
/// (`functional . C = 0`, `functional . rhs != 0`). `series` holds `Y_0 .. Y_{p-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TStandardFail {
    pub t_basis: Vec<Vector>,
    pub series: SeriesCoefficients,
    pub p: usize,
    pub rhs: Vector,
    pub functional: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TStandardSurvived {
    pub t_basis: Vec<Vector>,
    pub series: SeriesCoefficients,
}

impl TStandardSurvived {
    pub fn depth(&self) -> usize {
        self.series.degree()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    FirstOrderRigid(FirstOrderRigid),
    SecondOrderObstruction(SecondOrderObstruction),
    Theorem1Flex(Theorem1Flex),
    TStandardFail(TStandardFail),
    TStandardSurvived(TStandardSurvived),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::FirstOrderRigid(_) => "FirstOrderRigid",
            Certificate::SecondOrderObstruction(_) => "SecondOrderObstruction",
            Certificate::Theorem1Flex(_) => "Theorem1Flex",
            Certificate::TStandardFail(_) => "TStandardFail",
            Certificate::TStandardSurvived(_) => "TStandardSurvived",
        }
    }

    /// True for the kinds that prove the base point isolated.
    pub fn proves_rigidity(&self) -> bool {
        matches!(
            self,
            Certificate::FirstOrderRigid(_)
                | Certificate::SecondOrderObstruction(_)
                | Certificate::TStandardFail(_)
        )
    }
}

// ---------------------------------------------------------------------------
// First order

pub fn theorem2_check(ops: &BaseOperators) -> Option<FirstOrderRigid> {
    if ops.kernel_dimension() != 0 {
        return None;
    }
    let c = ops.c_matrix();
    let rows = independent_rows(c);
    debug_assert_eq!(rows.len(), c.cols());
    let minor_determinant = c
        .select_rows(&rows)
        .determinant()
        .expect("selected minor is square");
    Some(FirstOrderRigid {
        rows,
        minor_determinant,
    })
}

// ---------------------------------------------------------------------------
// Second order

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theorem3Outcome {
    /// `ker C = 0`; nothing to decide.
    NotApplicable,
    Obstruction(SecondOrderObstruction),
    /// Some nonzero `X1` in `ker C` has `B(X1, X1)` in `im C`. The witness is
    /// given when it is rational.
    CandidateExists {
        witness: Option<Vector>,
    },
    /// Kernel of dimension three or more and no definite form found.
    Undecided,
}

pub fn theorem3_check(ops: &BaseOperators) -> Option<SecondOrderObstruction> {
    match theorem3_decide(ops) {
        Theorem3Outcome::Obstruction(o) => Some(o),
        _ => None,
    }
}

fn projected_forms(sys: &QuadraticSystem, kernel: &[Vector], cokernel: &[Vector]) -> Vec<Matrix> {
    let d = kernel.len();
    let mut products = vec![vec![Vector::zeros(0); d]; d];
    for i in 0..d {
        for j in i..d {
            let b = sys
                .bilinear(&kernel[i], &kernel[j])
                .expect("kernel vectors have system width");
            products[i][j] = b.clone();
            products[j][i] = b;
        }
    }
    cokernel
        .iter()
        .map(|w| {
            let mut q = Matrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    q[(i, j)] = w.dot(&products[i][j]);
                }
            }
            q
        })
        .collect()
}

fn is_zero_matrix(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m[(i, j)].is_zero()))
}

/// Sylvester's criterion, applied to `q` and `-q`.
pub(crate) fn is_definite(q: &Matrix) -> bool {
    let d = q.rows();
    let minors: Vec<Scalar> = (1..=d)
        .map(|s| {
            let mut sub = Matrix::zeros(s, s);
            for i in 0..s {
                for j in 0..s {
                    sub[(i, j)] = q[(i, j)].clone();
                }
            }
            sub.determinant().expect("square")
        })
        .collect();
    let positive = minors.iter().all(Signed::is_positive);
    let negative = minors.iter().enumerate().all(|(i, m)| {
        if i % 2 == 0 {
            m.is_negative()
        } else {
            m.is_positive()
        }
    });
    d > 0 && (positive || negative)
}

fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Scalar::new(n, d))
}

fn binary_coeffs(q: &Matrix) -> (Scalar, Scalar, Scalar) {
    (q[(0, 0)].clone(), q[(0, 1)].clone(), q[(1, 1)].clone())
}

fn binary_eval(q: &Matrix, root: &(Scalar, Scalar)) -> Scalar {
    let (a, b, e) = binary_coeffs(q);
    let two = Scalar::from_integer(2.into());
    a * &root.0 * &root.0 + two * b * &root.0 * &root.1 + e * &root.1 * &root.1
}

/// Projective roots of a nonzero binary form with a rational-square
/// discriminant, distinct and in a fixed order.
fn rational_roots(q: &Matrix) -> Option<Vec<(Scalar, Scalar)>> {
    let (a, b, e) = binary_coeffs(q);
    let disc = &b * &b - &a * &e;
    let s = rational_sqrt(&disc)?;
    let mut roots = if !a.is_zero() {
        vec![(-&b + &s, a.clone()), (-&b - &s, a.clone())]
    } else {
        let two = Scalar::from_integer(2.into());
        vec![(Scalar::one(), Scalar::zero()), (-e, two * b)]
    };
    roots.retain(|r| !(r.0.is_zero() && r.1.is_zero()));
    let mut distinct: Vec<(Scalar, Scalar)> = Vec::new();
    for r in roots {
        if !distinct.iter().any(|t| &t.0 * &r.1 == &t.1 * &r.0) {
            distinct.push(r);
        }
    }
    Some(distinct)
}

fn proportional(p: &Matrix, q: &Matrix) -> bool {
    let (a1, b1, e1) = binary_coeffs(p);
    let (a2, b2, e2) = binary_coeffs(q);
    &a1 * &b2 == &a2 * &b1 && &a1 * &e2 == &a2 * &e1 && &b1 * &e2 == &b2 * &e1
}

pub fn theorem3_decide(ops: &BaseOperators) -> Theorem3Outcome {
    let kernel = ops.kernel().to_vec();
    let d = kernel.len();
    if d == 0 {
        return Theorem3Outcome::NotApplicable;
    }
    let cokernel = cokernel_basis(ops.c_matrix());
    let forms = projected_forms(ops.system(), &kernel, &cokernel);
    let obstruction = |reason| {
        Theorem3Outcome::Obstruction(SecondOrderObstruction {
            kernel: kernel.clone(),
            cokernel: cokernel.clone(),
            forms: forms.clone(),
            reason,
        })
    };
    let nonzero: Vec<usize> = (0..forms.len())
        .filter(|&l| !is_zero_matrix(&forms[l]))
        .collect();
    if nonzero.is_empty() {
        return Theorem3Outcome::CandidateExists {
            witness: Some(kernel[0].clone()),
        };
    }
    if let Some(&functional) = nonzero.iter().find(|&&l| is_definite(&forms[l])) {
        return obstruction(ObstructionReason::DefiniteForm { functional });
    }
    match d {
        1 => unreachable!("a nonzero 1x1 form is definite"),
        2 => {
            let base = nonzero[0];
            match rational_roots(&forms[base]) {
                Some(roots) => {
                    let mut refuted_by = Vec::new();
                    for r in &roots {
                        match nonzero
                            .iter()
                            .find(|&&l| !binary_eval(&forms[l], r).is_zero())
                        {
                            Some(&l) => refuted_by.push(l),
                            None => {
                                let x = kernel[0].scaled(&r.0).add(&kernel[1].scaled(&r.1));
                                return Theorem3Outcome::CandidateExists {
                                    witness: Some(x.primitive()),
                                };
                            }
                        }
                    }
                    obstruction(ObstructionReason::NoCommonRoot {
                        base,
                        roots,
                        refuted_by,
                    })
                }
                None => match nonzero
                    .iter()
                    .find(|&&l| !proportional(&forms[base], &forms[l]))
                {
                    Some(&other) => {
                        obstruction(ObstructionReason::IrrationalRootsNotShared { base, other })
                    }
                    None => Theorem3Outcome::CandidateExists { witness: None },
                },
            }
        }
        _ => Theorem3Outcome::Undecided,
    }
}

// ---------------------------------------------------------------------------
// Span closure

fn two() -> Scalar {
    Scalar::from_integer(2.into())
}

/// Checks the span-closure condition for `Y_0 .. Y_q` (a prefix of `s`)
/// with span `Y_k .. Y_q`. Pairs run over `i` in `1..=q` (from 0 when
/// `k = 0`, since the span then contains `Y_0`) and `j` in `k..=q`.
///
/// Returns `None` when the condition fails, when the truncated series is
/// constant, or when the series cannot be continued inside the span through
/// order `2q`.
pub fn theorem1_check(
    ops: &BaseOperators,
    s: &SeriesCoefficients,
    q: usize,
    k: usize,
) -> Result<Option<Theorem1Flex>, CertifyError> {
    if q == 0 || k > q {
        return Err(CertifyError::Precondition(format!(
            "need 0 <= k <= q and q >= 1, got q = {q}, k = {k}"
        )));
    }
    if s.degree() < q {
        return Err(CertifyError::Precondition(format!(
            "series has degree {}, below q = {q}",
            s.degree()
        )));
    }
    if s.base_point() != ops.base_point() {
        return Err(CertifyError::Precondition(
            "series does not start at the base point".into(),
        ));
    }
    let series = s.truncated(q);
    if !residual_order(ops.system(), &series)?.exceeds(q) {
        return Err(CertifyError::Precondition(format!(
            "series is not an approximate solution of degree {q}"
        )));
    }
    if series.is_constant() {
        return Ok(None);
    }
    let y = series.coefficients();
    let span = &y[k..=q];
    let c = ops.c_matrix();
    let i_min = if k == 0 { 0 } else { 1 };
    let mut pairs = Vec::new();
    for i in i_min..=q {
        for j in k..=q {
            let rhs = ops.pair_rhs(&y[i], &y[j]);
            match solve_in_span_coefficients(c, &rhs, span).map_err(SeriesError::from)? {
                Some(coefficients) => pairs.push(PairSolution { i, j, coefficients }),
                None => return Ok(None),
            }
        }
    }
    let mut extended = series.clone();
    let mut bridge = Vec::with_capacity(q);
    for p in q + 1..=2 * q {
        let rhs = recurrence_rhs(ops, &extended, p)?;
        let Some(coeffs) = solve_in_span_coefficients(c, &rhs, span).map_err(SeriesError::from)?
        else {
            return Ok(None);
        };
        extended.push(Vector::linear_combination(
            span,
            &coeffs,
            ops.variable_count(),
        ))?;
        bridge.push(coeffs);
    }
    Ok(Some(Theorem1Flex {
        q,
        k,
        series,
        pairs,
        bridge,
    }))
}

/// Candidate approximate solutions used by the search: each kernel basis
/// vector, entered at orders 1, 2 and 3, continued canonically up to `q_max`
/// (or until the recurrence stalls).
pub fn search_series(ops: &BaseOperators, q_max: usize) -> Vec<SeriesCoefficients> {
    let mut out = Vec::new();
    for v in ops.kernel() {
        for zeros in 0..=2 {
            let start =
                SeriesCoefficients::from_direction(ops.base_point().clone(), v.clone(), zeros);
            let target = q_max.max(start.degree());
            let s = match extend_to(ops, &start, target, &SubspaceConstraint::Unconstrained)
                .expect("unconstrained extension of a well-formed series")
            {
                Extended::Reached(s) => s,
                Extended::Stalled { series, .. } => series,
            };
            out.push(s);
        }
    }
    out
}

pub fn theorem1_search(ops: &BaseOperators, q_max: usize) -> Option<Theorem1Flex> {
    theorem1_search_with(ops, q_max, |_| true)
}

/// First certificate in increasing `(q, k)` order, `1 <= k < q <= q_max`,
/// that `accept` approves. Absence proves nothing.
pub fn theorem1_search_with(
    ops: &BaseOperators,
    q_max: usize,
    mut accept: impl FnMut(&Theorem1Flex) -> bool,
) -> Option<Theorem1Flex> {
    let candidates = search_series(ops, q_max);
    for q in 2..=q_max {
        for k in 1..q {
            for s in candidates.iter().filter(|s| s.degree() >= q) {
                if let Ok(Some(cert)) = theorem1_check(ops, s, q, k) {
                    if accept(&cert) {
                        return Some(cert);
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClosure {
    pub i: usize,
    pub j: usize,
    pub solvable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanClosureReport {
    Inapplicable {
        reason: String,
    },
    Checked {
        pairs: Vec<PairClosure>,
        /// First pair whose equation has no solution in the span; its
        /// presence means the series is not the start of an analytic family
        /// of this shape.
        contradiction: Option<(usize, usize)>,
    },
}

/// Necessary conditions on an exact family whose coefficients stay in
/// `span{X_1 .. X_r}`: for `r = 2` when `X_3, X_4` lie in `span{X_1, X_2}`,
/// for `r = 3` when `X_4 .. X_7` lie in `span{X_1, X_2, X_3}`, every pair
/// equation `C Y = -2 B(X_i, X_j)`, `i, j <= r`, is solvable in that span.
pub fn span_closure_diagnostic(
    ops: &BaseOperators,
    s: &SeriesCoefficients,
    r: usize,
) -> Result<SpanClosureReport, CertifyError> {
    let upto = match r {
        2 => 4,
        3 => 7,
        _ => {
            return Err(CertifyError::Precondition(format!(
                "r must be 2 or 3, got {r}"
            )))
        }
    };
    if s.degree() < upto {
        return Ok(SpanClosureReport::Inapplicable {
            reason: format!("series needs degree {upto}, has {}", s.degree()),
        });
    }
    let y = s.coefficients();
    let span = &y[1..=r];
    let m = s.variable_count();
    let rank = independent_subset(m, span)
        .map_err(SeriesError::from)?
        .len();
    for (p, extra) in y.iter().enumerate().take(upto + 1).skip(r + 1) {
        let mut with = span.to_vec();
        with.push(extra.clone());
        if independent_subset(m, &with)
            .map_err(SeriesError::from)?
            .len()
            != rank
        {
            return Ok(SpanClosureReport::Inapplicable {
                reason: format!("coefficient {p} leaves the span of coefficients 1..{r}"),
            });
        }
    }
    let mut pairs = Vec::new();
    let mut contradiction = None;
    for i in 1..=r {
        for j in i..=r {
            let rhs = ops.pair_rhs(&y[i], &y[j]);
            let solvable = solve_in_span_coefficients(ops.c_matrix(), &rhs, span)
                .map_err(SeriesError::from)?
                .is_some();
            if !solvable && contradiction.is_none() {
                contradiction = Some((i, j));
            }
            pairs.push(PairClosure { i, j, solvable });
        }
    }
    Ok(SpanClosureReport::Checked {
        pairs,
        contradiction,
    })
}

// ---------------------------------------------------------------------------
// T-standard formal solutions

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TStandardConfig {
    pub t_basis: Vec<Vector>,
    pub max_depth: usize,
    pub leading_coeff: Vector,
}

impl TStandardConfig {
    /// `T` is the coordinate hyperplane missing the coordinate where the
    /// kernel vector is largest in absolute value (lowest index on ties).
    pub fn default_for(ops: &BaseOperators, max_depth: usize) -> Result<Self, CertifyError> {
        if ops.kernel_dimension() != 1 {
            return Err(CertifyError::Inapplicable(format!(
                "kernel of C has dimension {}, need 1",
                ops.kernel_dimension()
            )));
        }
        let v = ops.kernel()[0].clone();
        let mut pivot = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        let m = v.len();
        let t_basis = (0..m)
            .filter(|&i| i != pivot)
            .map(|i| Vector::unit(m, i))
            .collect();
        Ok(TStandardConfig {
            t_basis,
            max_depth,
            leading_coeff: v,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TStandardOutcome {
    Fail(TStandardFail),
    Survived(TStandardSurvived),
}

impl From<TStandardOutcome> for Certificate {
    fn from(o: TStandardOutcome) -> Self {
        match o {
            TStandardOutcome::Fail(f) => Certificate::TStandardFail(f),
            TStandardOutcome::Survived(s) => Certificate::TStandardSurvived(s),
        }
    }
}

pub fn t_standard_run(
    ops: &BaseOperators,
    cfg: &TStandardConfig,
) -> Result<TStandardOutcome, CertifyError> {
    if ops.kernel_dimension() != 1 {
        return Err(CertifyError::Inapplicable(format!(
            "kernel of C has dimension {}, need 1",
            ops.kernel_dimension()
        )));
    }
    let m = ops.variable_count();
    if cfg.leading_coeff.len() != m
        || cfg.leading_coeff.is_zero()
        || !ops.apply_c(&cfg.leading_coeff).is_zero()
    {
        return Err(CertifyError::Precondition(
            "leading coefficient must span the kernel of C".into(),
        ));
    }
    if cfg.t_basis.len() + 1 != m {
        return Err(CertifyError::Precondition(format!(
            "T must have dimension {}, got {}",
            m - 1,
            cfg.t_basis.len()
        )));
    }
    let constraint = SubspaceConstraint::Complement(cfg.t_basis.clone());
    constraint.validate(ops)?;
    let mut series =
        SeriesCoefficients::from_direction(ops.base_point().clone(), cfg.leading_coeff.clone(), 0);
    for p in 2..=cfg.max_depth {
        let rhs = recurrence_rhs(ops, &series, p)?;
        match solve_constrained(ops, &rhs, &constraint)? {
            Some(ext) => series.push(ext.next)?,
            None => {
                let functional = cokernel_basis(ops.c_matrix())
                    .into_iter()
                    .find(|w| !w.dot(&rhs).is_zero())
                    .expect("a right-hand side outside im C is seen by some cokernel functional");
                return Ok(TStandardOutcome::Fail(TStandardFail {
                    t_basis: cfg.t_basis.clone(),
                    series,
                    p,
                    rhs,
                    functional,
                }));
            }
        }
    }
    Ok(TStandardOutcome::Survived(TStandardSurvived {
        t_basis: cfg.t_basis.clone(),
        series,
    }))
}

// ---------------------------------------------------------------------------
// Pipeline

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub q_max: usize,
    pub max_depth: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            q_max: DEFAULT_Q_MAX,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Flexible,
    Rigid,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Flexible => "Flexible",
            Verdict::Rigid => "Rigid",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub kernel_dimension: usize,
    pub depth_reached: usize,
    pub notes: Vec<String>,
}

pub fn analyze_system(
    sys: &QuadraticSystem,
    x0: &Vector,
    config: &AnalysisConfig,
) -> Result<AnalysisReport, CertifyError> {
    let ops = sys.linearize(x0)?;
    Ok(analyze_operators(&ops, config, |_| true))
}

/// The pipeline on prepared operators. `accept` filters flexibility
/// certificates (frameworks require a nontrivial flexion).
pub fn analyze_operators(
    ops: &BaseOperators,
    config: &AnalysisConfig,
    accept: impl FnMut(&Theorem1Flex) -> bool,
) -> AnalysisReport {
    let d = ops.kernel_dimension();
    let report = |verdict, certificate, depth_reached, notes| AnalysisReport {
        verdict,
        certificate,
        kernel_dimension: d,
        depth_reached,
        notes,
    };
    let mut notes = Vec::new();

    if let Some(cert) = theorem2_check(ops) {
        return report(
            Verdict::Rigid,
            Some(Certificate::FirstOrderRigid(cert)),
            1,
            vec!["kernel of C is trivial: first-order rigid".into()],
        );
    }

    let mut survived = None;
    if d == 1 {
        let cfg =
            TStandardConfig::default_for(ops, config.max_depth).expect("kernel dimension checked");
        match t_standard_run(ops, &cfg).expect("default configuration is valid") {
            TStandardOutcome::Fail(fail) => {
                let p = fail.p;
                return report(
                    Verdict::Rigid,
                    Some(Certificate::TStandardFail(fail)),
                    p,
                    vec![format!(
                        "normalized formal solution breaks down at order {p}: base point is isolated"
                    )],
                );
            }
            TStandardOutcome::Survived(s) => {
                notes.push(format!(
                    "normalized formal solution exists through order {}",
                    s.depth()
                ));
                survived = Some(s);
            }
        }
    } else {
        match theorem3_decide(ops) {
            Theorem3Outcome::Obstruction(o) => {
                return report(
                    Verdict::Rigid,
                    Some(Certificate::SecondOrderObstruction(o)),
                    2,
                    vec!["no second-order approximate solution with nonzero first term".into()],
                );
            }
            Theorem3Outcome::Undecided => notes.push(format!(
                "second-order obstruction undecided for kernel dimension {d}"
            )),
            _ => {}
        }
    }

    if let Some(cert) = theorem1_search_with(ops, config.q_max, accept) {
        let depth = 2 * cert.q;
        notes.push(format!(
            "span closure holds at q = {}, k = {}: the series extends to an analytic family",
            cert.q, cert.k
        ));
        return report(
            Verdict::Flexible,
            Some(Certificate::Theorem1Flex(cert)),
            depth,
            notes,
        );
    }
    notes.push(format!(
        "no flexibility certificate up to q_max = {}; this does not imply rigidity",
        config.q_max
    ));
    let depth = survived
        .as_ref()
        .map_or(config.q_max, |s| s.depth().max(config.q_max));
    report(
        Verdict::Inconclusive,
        survived.map(Certificate::TStandardSurvived),
        depth,
        notes,
    )
}

// ---------------------------------------------------------------------------
// Verification. Everything is recomputed from the system: `C` column by
// column from `B` and `A`, series residuals by expanding each polynomial
// equation, determinants by Bareiss elimination.

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate rejected: {0}")]
pub struct VerifyError(pub String);

fn reject<T>(msg: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError(msg.into()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), VerifyError> {
    if cond {
        Ok(())
    } else {
        Err(VerifyError(msg()))
    }
}

struct Replay<'a> {
    sys: &'a QuadraticSystem,
    x0: &'a Vector,
    c: Matrix,
}

impl<'a> Replay<'a> {
    fn new(sys: &'a QuadraticSystem, x0: &'a Vector) -> Result<Self, VerifyError> {
        let m = sys.variable_count();
        ensure(x0.len() == m, || "base point has the wrong length".into())?;
        let f0 = sys.evaluate(x0).map_err(|e| VerifyError(e.to_string()))?;
        ensure(f0.is_zero(), || {
            format!("base point is not a solution: {f0}")
        })?;
        let columns: Vec<Vector> = (0..m)
            .map(|j| {
                let e = Vector::unit(m, j);
                let b = sys.bilinear(x0, &e).expect("width");
                b.scaled(&two()).add(&sys.apply_linear(&e).expect("width"))
            })
            .collect();
        let c = Matrix::from_columns(sys.equation_count(), &columns).expect("width");
        Ok(Replay { sys, x0, c })
    }

    fn width(&self, v: &Vector, what: &str) -> Result<(), VerifyError> {
        ensure(v.len() == self.c.cols(), || {
            format!("{what} has the wrong length")
        })
    }

    fn c_times(&self, v: &Vector) -> Vector {
        self.c.mul_vec(v).expect("width checked")
    }

    fn rank(&self) -> usize {
        self.c.rank()
    }

    /// Coefficients of `F(Y(t))` through order `upto` by expanding every
    /// monomial of the polynomial form of the system.
    fn residuals(&self, s: &SeriesCoefficients, upto: usize) -> Vec<Vector> {
        let general = self.sys.to_general();
        let y = s.coefficients();
        let m = self.sys.variable_count();
        let coord: Vec<Vec<Scalar>> = (0..m)
            .map(|i| {
                (0..=upto)
                    .map(|p| y.get(p).map_or(Scalar::zero(), |v| v[i].clone()))
                    .collect()
            })
            .collect();
        let mul = |a: &[Scalar], b: &[Scalar]| {
            let mut out = vec![Scalar::zero(); upto + 1];
            for (i, x) in a.iter().enumerate() {
                for (j, z) in b.iter().enumerate().take(upto + 1 - i) {
                    out[i + j] += x * z;
                }
            }
            out
        };
        let mut out = vec![Vector::zeros(self.sys.equation_count()); upto + 1];
        for (k, poly) in general.equations().iter().enumerate() {
            for (exps, coeff) in poly.terms() {
                let mut acc = vec![Scalar::zero(); upto + 1];
                acc[0] = coeff.clone();
                for (i, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        acc = mul(&acc, &coord[i]);
                    }
                }
                for (p, a) in acc.into_iter().enumerate() {
                    out[p][k] += a;
                }
            }
        }
        out
    }

    fn check_series(&self, s: &SeriesCoefficients, through: usize) -> Result<(), VerifyError> {
        ensure(s.base_point() == self.x0, || {
            "series does not start at the base point".into()
        })?;
        ensure(s.variable_count() == self.c.cols(), || {
            "series has the wrong width".into()
        })?;
        let res = self.residuals(s, through);
        match res.iter().position(|r| !r.is_zero()) {
            None => Ok(()),
            Some(p) => reject(format!("series has a nonzero residual at order {p}")),
        }
    }

    fn check_kernel_basis(&self, kernel: &[Vector]) -> Result<(), VerifyError> {
        let m = self.c.cols();
        for v in kernel {
            self.width(v, "kernel vector")?;
            ensure(self.c_times(v).is_zero(), || format!("{v} is not in ker C"))?;
        }
        ensure(
            independent_subset(m, kernel)
                .map_err(|e| VerifyError(e.to_string()))?
                .len()
                == kernel.len()
                && kernel.len() == m - self.rank(),
            || "kernel vectors do not form a basis of ker C".into(),
        )
    }

    fn check_cokernel_basis(&self, cokernel: &[Vector]) -> Result<(), VerifyError> {
        let n = self.c.rows();
        let ct = self.c.transpose();
        for w in cokernel {
            ensure(w.len() == n, || {
                "cokernel vector has the wrong length".into()
            })?;
            ensure(ct.mul_vec(w).expect("len").is_zero(), || {
                format!("{w} does not annihilate im C")
            })?;
        }
        ensure(
            independent_subset(n, cokernel)
                .map_err(|e| VerifyError(e.to_string()))?
                .len()
                == cokernel.len()
                && cokernel.len() == n - self.rank(),
            || "cokernel vectors do not form a basis".into(),
        )
    }
}

pub fn verify_certificate(
    sys: &QuadraticSystem,
    x0: &Vector,
    cert: &Certificate,
) -> Result<(), VerifyError> {
    let replay = Replay::new(sys, x0)?;
    match cert {
        Certificate::FirstOrderRigid(c) => verify_first_order(&replay, c),
        Certificate::SecondOrderObstruction(c) => verify_obstruction(&replay, c),
        Certificate::Theorem1Flex(c) => verify_theorem1(&replay, c),
        Certificate::TStandardFail(c) => verify_t_fail(&replay, c),
        Certificate::TStandardSurvived(c) => verify_t_survived(&replay, c),
    }
}

fn verify_first_order(r: &Replay, c: &FirstOrderRigid) -> Result<(), VerifyError> {
    let m = r.c.cols();
    let mut rows = c.rows.clone();
    rows.sort_unstable();
    rows.dedup();
    ensure(rows.len() == m && c.rows.len() == m, || {
        format!("need {m} distinct rows, got {:?}", c.rows)
    })?;
    ensure(rows.iter().all(|&i| i < r.c.rows()), || {
        "row index out of range".into()
    })?;
    let det = r.c.select_rows(&c.rows).determinant().expect("square");
    ensure(!det.is_zero(), || "selected minor is singular".into())?;
    ensure(det == c.minor_determinant, || {
        format!(
            "minor determinant is {det}, certificate says {}",
            c.minor_determinant
        )
    })
}

fn verify_obstruction(r: &Replay, c: &SecondOrderObstruction) -> Result<(), VerifyError> {
    ensure(!c.kernel.is_empty(), || {
        "empty kernel needs no second-order argument".into()
    })?;
    r.check_kernel_basis(&c.kernel)?;
    r.check_cokernel_basis(&c.cokernel)?;
    let forms = projected_forms(r.sys, &c.kernel, &c.cokernel);
    ensure(forms == c.forms, || "projected forms do not match B".into())?;
    let form = |l: usize| {
        forms
            .get(l)
            .ok_or_else(|| VerifyError(format!("no functional {l}")))
    };
    match &c.reason {
        ObstructionReason::DefiniteForm { functional } => {
            ensure(is_definite(form(*functional)?), || {
                "form is not definite".into()
            })
        }
        ObstructionReason::NoCommonRoot {
            base,
            roots,
            refuted_by,
        } => {
            ensure(c.kernel.len() == 2, || {
                "root argument needs a 2-dimensional kernel".into()
            })?;
            let q = form(*base)?;
            ensure(!is_zero_matrix(q), || "base form is zero".into())?;
            ensure(roots.len() == refuted_by.len(), || {
                "one refutation per root".into()
            })?;
            for root in roots {
                ensure(!(root.0.is_zero() && root.1.is_zero()), || {
                    "zero root".into()
                })?;
                ensure(binary_eval(q, root).is_zero(), || {
                    "listed root is not a root".into()
                })?;
            }
            let (a, b, e) = binary_coeffs(q);
            let disc = &b * &b - &a * &e;
            let complete = match roots.as_slice() {
                [] => disc.is_negative(),
                [_] => disc.is_zero() || (a.is_zero() && b.is_zero()),
                [x, y] => &x.0 * &y.1 != &x.1 * &y.0,
                _ => false,
            };
            ensure(complete, || {
                "listed roots are not all the roots of the base form".into()
            })?;
            for (root, &l) in roots.iter().zip(refuted_by) {
                ensure(!binary_eval(form(l)?, root).is_zero(), || {
                    "refuting form vanishes at the root".into()
                })?;
            }
            Ok(())
        }
        ObstructionReason::IrrationalRootsNotShared { base, other } => {
            ensure(c.kernel.len() == 2, || {
                "root argument needs a 2-dimensional kernel".into()
            })?;
            let q = form(*base)?;
            let o = form(*other)?;
            let (a, b, e) = binary_coeffs(q);
            let disc = &b * &b - &a * &e;
            ensure(disc.is_positive() && rational_sqrt(&disc).is_none(), || {
                "base form does not have irrational roots".into()
            })?;
            ensure(!is_zero_matrix(o) && !proportional(q, o), || {
                "other form is zero or proportional to the base form".into()
            })
        }
    }
}

fn verify_theorem1(r: &Replay, c: &Theorem1Flex) -> Result<(), VerifyError> {
    let (q, k) = (c.q, c.k);
    ensure(q >= 1 && k <= q, || format!("bad indices q = {q}, k = {k}"))?;
    ensure(c.series.degree() == q, || {
        "series degree differs from q".into()
    })?;
    ensure(!c.series.is_constant(), || "series is constant".into())?;
    r.check_series(&c.series, q)?;
    let y = c.series.coefficients();
    let span = &y[k..=q];
    let m = r.c.cols();
    let i_min = if k == 0 { 0 } else { 1 };
    let mut expected = Vec::new();
    for i in i_min..=q {
        for j in k..=q {
            expected.push((i, j));
        }
    }
    let listed: Vec<(usize, usize)> = c.pairs.iter().map(|p| (p.i, p.j)).collect();
    ensure(listed == expected, || {
        "pair list does not cover the required pairs".into()
    })?;
    for pair in &c.pairs {
        ensure(pair.coefficients.len() == span.len(), || {
            "coefficient count mismatch".into()
        })?;
        let yv = Vector::linear_combination(span, &pair.coefficients, m);
        let rhs = r
            .sys
            .bilinear(&y[pair.i], &y[pair.j])
            .expect("width")
            .scaled(&-two());
        ensure(r.c_times(&yv) == rhs, || {
            format!(
                "pair ({}, {}) solution does not solve its equation",
                pair.i, pair.j
            )
        })?;
    }
    ensure(c.bridge.len() == q, || "bridge must reach order 2q".into())?;
    ensure(c.bridge.iter().all(|b| b.len() == span.len()), || {
        "bridge coefficient count mismatch".into()
    })?;
    r.check_series(&c.extended_series(), 2 * q)
}

fn check_t_basis(r: &Replay, t: &[Vector], kernel_dir: &Vector) -> Result<(), VerifyError> {
    let m = r.c.cols();
    ensure(m - r.rank() == 1, || "kernel of C is not a line".into())?;
    r.width(kernel_dir, "leading coefficient")?;
    ensure(
        !kernel_dir.is_zero() && r.c_times(kernel_dir).is_zero(),
        || "leading coefficient does not span ker C".into(),
    )?;
    ensure(t.len() + 1 == m, || "T is not a hyperplane".into())?;
    for v in t {
        r.width(v, "T basis vector")?;
    }
    let mut all = t.to_vec();
    all.push(kernel_dir.clone());
    ensure(
        independent_subset(m, &all)
            .map_err(|e| VerifyError(e.to_string()))?
            .len()
            == m,
        || "T meets ker C or is degenerate".into(),
    )
}

fn check_in_span(v: &Vector, basis: &[Vector]) -> bool {
    let m = v.len();
    let mut all = basis.to_vec();
    let before = independent_subset(m, &all).map(|s| s.len());
    all.push(v.clone());
    before == independent_subset(m, &all).map(|s| s.len())
}

fn check_t_series(r: &Replay, t: &[Vector], s: &SeriesCoefficients) -> Result<(), VerifyError> {
    ensure(s.degree() >= 1, || {
        "series lacks a first coefficient".into()
    })?;
    check_t_basis(r, t, &s.coefficients()[1])?;
    for (p, y) in s.coefficients().iter().enumerate().skip(2) {
        ensure(check_in_span(y, t), || {
            format!("coefficient {p} is not in T")
        })?;
    }
    r.check_series(s, s.degree())
}

fn verify_t_fail(r: &Replay, c: &TStandardFail) -> Result<(), VerifyError> {
    ensure(c.p >= 2 && c.series.degree() + 1 == c.p, || {
        "series must stop just before p".into()
    })?;
    check_t_series(r, &c.t_basis, &c.series)?;
    let y = c.series.coefficients();
    let mut rhs = Vector::zeros(r.c.rows());
    for l in 1..c.p {
        rhs.add_scaled(
            &-Scalar::one(),
            &r.sys.bilinear(&y[l], &y[c.p - l]).expect("width"),
        );
    }
    ensure(rhs == c.rhs, || "recorded right-hand side is wrong".into())?;
    ensure(c.functional.len() == r.c.rows(), || {
        "functional has the wrong length".into()
    })?;
    ensure(
        r.c.transpose()
            .mul_vec(&c.functional)
            .expect("len")
            .is_zero(),
        || "functional does not annihilate im C".into(),
    )?;
    ensure(!c.functional.dot(&c.rhs).is_zero(), || {
        "functional does not separate rhs".into()
    })
}

fn verify_t_survived(r: &Replay, c: &TStandardSurvived) -> Result<(), VerifyError> {
    check_t_series(r, &c.t_basis, &c.series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadsys::{validate_and_symmetrize, RawEquation};
    use crate::ratlinalg::{int, ratio};

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    fn build(m: usize, raw: Vec<RawEquation>, x0: &[i64]) -> BaseOperators {
        validate_and_symmetrize(names(m), &raw)
            .unwrap()
            .linearize(&Vector::from_ints(x0))
            .unwrap()
    }

    fn quad(alpha: &[(usize, usize, i64)], beta: &[(usize, i64)], gamma: i64) -> RawEquation {
        RawEquation {
            alpha: alpha.iter().map(|&(i, j, v)| (i, j, int(v))).collect(),
            beta: beta.iter().map(|&(i, v)| (i, int(v))).collect(),
            gamma: int(gamma),
        }
    }

    #[test]
    fn invertible_linearization_is_first_order_rigid() {
        let ops = build(
            2,
            vec![quad(&[], &[(0, 1)], 0), quad(&[], &[(1, 1)], 0)],
            &[0, 0],
        );
        let cert = theorem2_check(&ops).unwrap();
        assert_eq!(cert.rows, vec![0, 1]);
        assert_eq!(cert.minor_determinant, int(1));
        verify_certificate(
            ops.system(),
            ops.base_point(),
            &Certificate::FirstOrderRigid(cert),
        )
        .unwrap();
    }

    #[test]
    fn definite_form_on_two_dimensional_kernel() {
        // x1^2 + x2^2 + x3 = 0 at the origin: C = (0 0 1), ker = {x3 = 0},
        // and the cokernel is zero, so add a second equation making the
        // cokernel nontrivial: x3 = 0 twice.
        let ops = build(
            3,
            vec![
                quad(&[(0, 0, 1), (1, 1, 1)], &[], 0),
                quad(&[], &[(2, 1)], 0),
            ],
            &[0, 0, 0],
        );
        assert_eq!(ops.kernel_dimension(), 2);
        let o = theorem3_check(&ops).unwrap();
        assert_eq!(o.reason, ObstructionReason::DefiniteForm { functional: 0 });
        verify_certificate(
            ops.system(),
            ops.base_point(),
            &Certificate::SecondOrderObstruction(o),
        )
        .unwrap();
    }

    #[test]
    fn hyperbolic_pair_without_common_root() {
        // x1 x2 = 0 and x1^2 - 2 x2^2 + x1 x2 = 0 ... roots of the first are
        // the axes, neither of which kills the second.
        let ops = build(
            2,
            vec![
                quad(&[(0, 1, 2)], &[], 0),
                quad(&[(0, 0, 1), (1, 1, -2), (0, 1, 1)], &[], 0),
            ],
            &[0, 0],
        );
        let o = theorem3_check(&ops).unwrap();
        assert!(matches!(o.reason, ObstructionReason::NoCommonRoot { .. }));
        verify_certificate(
            ops.system(),
            ops.base_point(),
            &Certificate::SecondOrderObstruction(o),
        )
        .unwrap();
    }

    #[test]
    fn irrational_roots_not_shared() {
        // x1^2 - 2 x2^2 has roots on irrational lines; x1 x2 does not vanish there.
        let ops = build(
            2,
            vec![
                quad(&[(0, 0, 1), (1, 1, -2)], &[], 0),
                quad(&[(0, 1, 2)], &[], 0),
            ],
            &[0, 0],
        );
        let o = theorem3_check(&ops).unwrap();
        assert_eq!(
            o.reason,
            ObstructionReason::IrrationalRootsNotShared { base: 0, other: 1 }
        );
        verify_certificate(
            ops.system(),
            ops.base_point(),
            &Certificate::SecondOrderObstruction(o),
        )
        .unwrap();
        // The same form alone has real roots, so no obstruction.
        let ops = build(2, vec![quad(&[(0, 0, 1), (1, 1, -2)], &[], 0)], &[0, 0]);
        assert_eq!(
            theorem3_decide(&ops),
            Theorem3Outcome::CandidateExists { witness: None }
        );
    }

    #[test]
    fn shared_rational_root_is_a_candidate() {
        // x1 x2 and x2^2 share the root x2 = 0.
        let ops = build(
            2,
            vec![quad(&[(0, 1, 1)], &[], 0), quad(&[(1, 1, 1)], &[], 0)],
            &[0, 0],
        );
        assert_eq!(
            theorem3_decide(&ops),
            Theorem3Outcome::CandidateExists {
                witness: Some(Vector::from_ints(&[1, 0]))
            }
        );
    }

    #[test]
    fn three_dimensional_kernel_without_definite_form_is_undecided() {
        let ops = build(3, vec![quad(&[(0, 0, 1), (1, 1, -1)], &[], 0)], &[0, 0, 0]);
        assert_eq!(theorem3_decide(&ops), Theorem3Outcome::Undecided);
        let ops = build(
            3,
            vec![quad(&[(0, 0, 1), (1, 1, 1), (2, 2, 2)], &[], 0)],
            &[0, 0, 0],
        );
        assert!(matches!(
            theorem3_decide(&ops),
            Theorem3Outcome::Obstruction(_)
        ));
    }

    #[test]
    fn parabola_flexes_and_diagnostic_is_clean() {
        // x2 - x1^2 = 0 at the origin: family (t, t^2).
        let ops = build(2, vec![quad(&[(0, 0, -1)], &[(1, 1)], 0)], &[0, 0]);
        let report = analyze_operators(&ops, &AnalysisConfig::default(), |_| true);
        assert_eq!(report.verdict, Verdict::Flexible);
        let Some(Certificate::Theorem1Flex(cert)) = &report.certificate else {
            panic!("expected a flexibility certificate")
        };
        verify_certificate(
            ops.system(),
            ops.base_point(),
            report.certificate.as_ref().unwrap(),
        )
        .unwrap();
        let s = cert.extended_series();
        let mut long = s.clone();
        while long.degree() < 7 {
            long.push(Vector::zeros(2)).unwrap();
        }
        let diag = span_closure_diagnostic(&ops, &long, 2).unwrap();
        assert!(matches!(
            diag,
            SpanClosureReport::Checked {
                contradiction: None,
                ..
            }
        ));
    }

    #[test]
    fn diagnostic_precondition_gate() {
        let ops = build(3, vec![quad(&[], &[], 0)], &[0, 0, 0]);
        let s = SeriesCoefficients::new(vec![
            Vector::zeros(3),
            Vector::from_ints(&[1, 0, 0]),
            Vector::from_ints(&[0, 1, 0]),
            Vector::from_ints(&[0, 0, 1]),
            Vector::zeros(3),
        ])
        .unwrap();
        assert!(matches!(
            span_closure_diagnostic(&ops, &s, 2).unwrap(),
            SpanClosureReport::Inapplicable { .. }
        ));
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let ops = build(2, vec![quad(&[(0, 0, -1)], &[(1, 1)], 0)], &[0, 0]);
        let Some(mut cert) = theorem1_search(&ops, 4) else {
            panic!("parabola certificate")
        };
        let good = Certificate::Theorem1Flex(cert.clone());
        verify_certificate(ops.system(), ops.base_point(), &good).unwrap();
        // Y_1 spans ker C, so only the last coefficient changes C y.
        *cert.pairs[0].coefficients.last_mut().unwrap() += int(1);
        let bad = Certificate::Theorem1Flex(cert);
        assert!(verify_certificate(ops.system(), ops.base_point(), &bad).is_err());

        let ops = build(
            2,
            vec![quad(&[], &[(0, 1)], 0), quad(&[], &[(1, 1)], 0)],
            &[0, 0],
        );
        let mut c = theorem2_check(&ops).unwrap();
        c.minor_determinant = ratio(1, 2);
        assert!(verify_certificate(
            ops.system(),
            ops.base_point(),
            &Certificate::FirstOrderRigid(c)
        )
        .is_err());
    }
}
