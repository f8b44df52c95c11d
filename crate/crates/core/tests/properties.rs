use num_traits::Zero;
use proptest::prelude::*;

use flexcert::certify::{analyze_system, verify_certificate, AnalysisConfig};
use flexcert::format::{parse_system, write_system, ParsedSystem, SystemFile};
use flexcert::quadsys::{
    reduce_degree, validate_and_symmetrize, GeneralPolySystem, Polynomial, QuadraticSystem,
    RawEquation,
};
use flexcert::ratlinalg::{
    format_scalar, image_contains, int, kernel_basis, parse_scalar, ratio, solve_general,
    solve_in_span, Matrix, Scalar, Vector,
};
use flexcert::series::{
    extend_to, recurrence_rhs, reparameterize, residual_order, Extended, ResidualOrder,
    SeriesCoefficients, SubspaceConstraint,
};

fn small() -> impl Strategy<Value = i64> {
    -3i64..=3
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn vector(len: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(small(), len).prop_map(|v| Vector::from_ints(&v))
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(small(), c), r).prop_map(move |rows| {
            let rows: Vec<Vec<Scalar>> = rows
                .into_iter()
                .map(|row| row.into_iter().map(int).collect())
                .collect();
            Matrix::from_rows(c, rows).unwrap()
        })
    })
}

/// A quadratic system in `m` variables with `n` equations, shifted so that
/// `x0` solves it.
fn system_through(m: usize, n: usize) -> impl Strategy<Value = (QuadraticSystem, Vector)> {
    let eq = (
        prop::collection::vec((0..m, 0..m, small()), 0..=3),
        prop::collection::vec((0..m, small()), 0..=2),
    );
    (prop::collection::vec(eq, n), vector(m)).prop_map(move |(eqs, x0)| {
        let names: Vec<String> = (0..m).map(|i| format!("x{i}")).collect();
        let mut raw: Vec<RawEquation> = eqs
            .into_iter()
            .map(|(a, b)| RawEquation {
                alpha: a.into_iter().map(|(i, j, v)| (i, j, int(v))).collect(),
                beta: b.into_iter().map(|(i, v)| (i, int(v))).collect(),
                gamma: Scalar::zero(),
            })
            .collect();
        let sys = validate_and_symmetrize(names.clone(), &raw).unwrap();
        let value = sys.evaluate(&x0).unwrap();
        for (eq, v) in raw.iter_mut().zip(value.iter()) {
            eq.gamma = -v.clone();
        }
        (validate_and_symmetrize(names, &raw).unwrap(), x0)
    })
}

fn any_system() -> impl Strategy<Value = (QuadraticSystem, Vector)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| system_through(m, n))
}

fn monomials(vars: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=2, vars), small()), 1..=4).prop_map(
        move |terms| {
            Polynomial::from_terms(vars, terms.into_iter().map(|(e, c)| (e, int(c)))).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trip(x in scalar()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&x)).unwrap(), x);
    }

    #[test]
    fn general_solution_solves(m in matrix(), seed in prop::collection::vec(small(), 4)) {
        let x = Vector::from_ints(&seed[..m.cols()]);
        let b = m.mul_vec(&x).unwrap();
        let sol = solve_general(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&sol.particular).unwrap(), b);
        for k in &sol.nullspace {
            prop_assert!(m.mul_vec(k).unwrap().is_zero());
        }
    }

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len(), m.cols() - m.rank());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn image_membership_agrees_with_solving(m in matrix(), seed in prop::collection::vec(small(), 4)) {
        let v = Vector::from_ints(&seed[..m.rows()]);
        let inside = image_contains(&m, &v).unwrap();
        match solve_general(&m, &v).unwrap() {
            Some(sol) => {
                prop_assert!(inside);
                prop_assert_eq!(m.mul_vec(&sol.particular).unwrap(), v);
            }
            None => prop_assert!(!inside),
        }
    }

    #[test]
    fn determinant_matches_rank(n in 1usize..=4, entries in prop::collection::vec(small(), 16)) {
        let rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| (0..n).map(|j| int(entries[i * 4 + j])).collect())
            .collect();
        let m = Matrix::from_rows(n, rows).unwrap();
        let det = m.determinant().unwrap();
        prop_assert_eq!(det.is_zero(), m.rank() < n);
        prop_assert_eq!(det, m.transpose().determinant().unwrap());
    }

    /// Two-dimensional spans over a small grid: a solution exists in the span
    /// exactly when some grid combination reaches it (the grid includes the
    /// generating combination).
    #[test]
    fn span_solution_brute_force(
        m in matrix(),
        s in prop::collection::vec(prop::collection::vec(small(), 4), 2),
        a in -2i64..=2,
        b in -2i64..=2,
        reachable in any::<bool>(),
        other in prop::collection::vec(small(), 4),
    ) {
        let span: Vec<Vector> = s.iter().map(|v| Vector::from_ints(&v[..m.cols()])).collect();
        let target = if reachable {
            m.mul_vec(&span[0].scaled(&int(a)).add(&span[1].scaled(&int(b)))).unwrap()
        } else {
            Vector::from_ints(&other[..m.rows()])
        };
        match solve_in_span(&m, &target, &span).unwrap() {
            Some(y) => prop_assert_eq!(m.mul_vec(&y).unwrap(), target),
            None => {
                prop_assert!(!reachable);
                for i in -2..=2 {
                    for j in -2..=2 {
                        let y = span[0].scaled(&int(i)).add(&span[1].scaled(&int(j)));
                        prop_assert_ne!(m.mul_vec(&y).unwrap(), target.clone());
                    }
                }
            }
        }
    }

    #[test]
    fn row_order_does_not_change_kernel(m in matrix()) {
        let reversed: Vec<usize> = (0..m.rows()).rev().collect();
        let p = m.select_rows(&reversed);
        prop_assert_eq!(kernel_basis(&m), kernel_basis(&p));
    }

    #[test]
    fn bilinear_form_is_symmetric_and_bilinear(
        (sys, _) in system_through(3, 2),
        x in vector(3),
        y in vector(3),
        z in vector(3),
        c in scalar(),
    ) {
        let b = |u: &Vector, v: &Vector| sys.bilinear(u, v).unwrap();
        prop_assert_eq!(b(&x, &y), b(&y, &x));
        prop_assert_eq!(b(&x.scaled(&c).add(&z), &y), b(&x, &y).scaled(&c).add(&b(&z, &y)));
    }

    #[test]
    fn taylor_expansion_is_exact((sys, x0) in any_system(), seed in prop::collection::vec(small(), 3)) {
        let ops = sys.linearize(&x0).unwrap();
        let z = Vector::from_ints(&seed[..sys.variable_count()]);
        let lhs = sys.evaluate(&x0.add(&z)).unwrap().sub(&sys.evaluate(&x0).unwrap());
        let rhs = ops.apply_c(&z).add(&ops.bilinear(&z, &z));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_preserves_values(
        polys in prop::collection::vec(monomials(3), 1..=3),
        point in vector(3),
    ) {
        // Raise degrees past two by multiplying through by x0 * x1.
        let lifted: Vec<Polynomial> = polys
            .iter()
            .map(|p| {
                Polynomial::from_terms(
                    3,
                    p.terms().map(|(e, c)| (vec![e[0] + 1, e[1] + 1, e[2]], c.clone())),
                )
                .unwrap()
            })
            .collect();
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let g = GeneralPolySystem::new(names, lifted).unwrap();
        let (q, map) = reduce_degree(&g);
        for p in q.to_general().equations() {
            prop_assert!(p.degree() <= 2);
        }
        let up = map.lift_base_point(&point).unwrap();
        prop_assert_eq!(map.project(&up), point.clone());
        let reduced = q.evaluate(&up).unwrap();
        let original = g.evaluate(&point).unwrap();
        let n = original.len();
        prop_assert_eq!(&reduced.entries()[..n], original.entries());
        prop_assert!(reduced.entries()[n..].iter().all(Zero::is_zero));
    }

    #[test]
    fn recurrence_pairs_symmetric((sys, x0) in system_through(3, 2), ys in prop::collection::vec(vector(3), 4)) {
        let ops = sys.linearize(&x0).unwrap();
        let mut coeffs = vec![x0.clone()];
        coeffs.extend(ys.iter().cloned());
        let s = SeriesCoefficients::new(coeffs).unwrap();
        let mut direct = Vector::zeros(2);
        for l in 1..5 {
            direct = direct.sub(&ops.bilinear(&ys[l - 1], &ys[5 - l - 1]));
        }
        prop_assert_eq!(recurrence_rhs(&ops, &s, 5).unwrap(), direct);
    }

    #[test]
    fn canonical_extension_is_an_approximate_solution((sys, x0) in any_system(), pick in 0usize..3) {
        let ops = sys.linearize(&x0).unwrap();
        prop_assume!(ops.kernel_dimension() > 0);
        let v = ops.kernel()[pick % ops.kernel_dimension()].clone();
        let start = SeriesCoefficients::from_direction(x0, v, 0);
        match extend_to(&ops, &start, 5, &SubspaceConstraint::Unconstrained).unwrap() {
            Extended::Reached(s) => prop_assert!(residual_order(&sys, &s).unwrap().exceeds(5)),
            Extended::Stalled { series, order, rhs } => {
                prop_assert!(residual_order(&sys, &series).unwrap().exceeds(order - 1));
                prop_assert!(!image_contains(ops.c_matrix(), &rhs).unwrap());
            }
        }
    }

    #[test]
    fn reparameterization_keeps_residual_order(
        (sys, x0) in any_system(),
        a in scalar(),
        e in 2usize..=3,
    ) {
        let ops = sys.linearize(&x0).unwrap();
        prop_assume!(ops.kernel_dimension() > 0);
        let start = SeriesCoefficients::from_direction(x0, ops.kernel()[0].clone(), 0);
        let s = match extend_to(&ops, &start, 4, &SubspaceConstraint::Unconstrained).unwrap() {
            Extended::Reached(s) => s,
            Extended::Stalled { series, .. } => series,
        };
        let q = s.degree();
        let r = residual_order(&sys, &s).unwrap();
        let t = reparameterize(&s, &a, e, q);
        let bound = match r {
            ResidualOrder::Finite(p) => p.min(q + 1),
            ResidualOrder::Infinite => q + 1,
        };
        prop_assert!(residual_order(&sys, &t).unwrap().exceeds(bound - 1));
        let y = s.coefficients();
        let z = t.coefficients();
        prop_assert_eq!(&z[1], &y[1]);
        if e == 2 && q >= 3 {
            prop_assert_eq!(z[2].clone(), y[2].add(&y[1].scaled(&a)));
            prop_assert_eq!(z[3].clone(), y[3].add(&y[2].scaled(&(&a * int(2)))));
        }
    }

    #[test]
    fn system_file_round_trip((sys, x0) in any_system()) {
        let file = SystemFile {
            system: ParsedSystem::Quadratic(sys),
            base_point: Some(x0),
            auxiliary: Vec::new(),
        };
        let text = write_system(&file);
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(write_system(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_replay((sys, x0) in any_system()) {
        let config = AnalysisConfig { q_max: 4, max_depth: 8 };
        let report = analyze_system(&sys, &x0, &config).unwrap();
        if let Some(cert) = &report.certificate {
            prop_assert!(verify_certificate(&sys, &x0, cert).is_ok(), "{:?}", cert);
        }
    }
}
