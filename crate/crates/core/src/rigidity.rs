//! Bar-joint frameworks compiled into edge-length systems
//! `|x_i - x_j|^2 = |x_i(0) - x_j(0)|^2`, with rigid motions removed by
//! pinning coordinates.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::certify::{
    analyze_operators, AnalysisConfig, AnalysisReport, Certificate, Theorem1Flex, Verdict,
};
use crate::quadsys::{validate_and_symmetrize, QuadraticSystem, RawEquation};
use crate::ratlinalg::{independent_subset, kernel_basis, Matrix, Scalar, Vector};
use crate::series::SeriesCoefficients;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("framework has no joints")]
    NoJoints,
    #[error("framework has no bars")]
    NoBars,
    #[error("joint {id:?} has {found} coordinates, expected {expected}")]
    CoordinateCount {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate joint id {0:?}")]
    DuplicateJoint(String),
    #[error("unknown joint {0:?}")]
    UnknownJoint(String),
    #[error("bar joins joint {0:?} to itself")]
    SelfLoop(String),
    #[error("bar {0:?}-{1:?} listed twice")]
    DuplicateBar(String, String),
    #[error("bar graph is not connected")]
    Disconnected,
    #[error("joint {id:?} has no coordinate {coord}")]
    PinOutOfRange { id: String, coord: usize },
    #[error("framework already has pins")]
    AlreadyPinned,
    #[error(
        "no joints in normal position for pinning: need a joint at the origin and, for \
         k = 2..n, a joint whose coordinates from k on vanish and whose coordinate k-1 does \
         not; translate and rotate the framework first"
    )]
    NoNormalSimplex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joint {
    pub id: String,
    pub coords: Vector,
}

/// Joints are kept in declaration order, which is the order used for
/// variables, pinning and witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framework {
    dimension: usize,
    joints: Vec<Joint>,
    bars: Vec<(usize, usize)>,
    pins: BTreeSet<(usize, usize)>,
}

impl Framework {
    pub fn new(
        dimension: usize,
        joints: Vec<Joint>,
        bars: &[(String, String)],
        pins: &[(String, Vec<usize>)],
    ) -> Result<Self, FrameworkError> {
        if dimension == 0 {
            return Err(FrameworkError::ZeroDimension);
        }
        if joints.is_empty() {
            return Err(FrameworkError::NoJoints);
        }
        for j in &joints {
            if j.coords.len() != dimension {
                return Err(FrameworkError::CoordinateCount {
                    id: j.id.clone(),
                    expected: dimension,
                    found: j.coords.len(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for j in &joints {
            if !seen.insert(j.id.as_str()) {
                return Err(FrameworkError::DuplicateJoint(j.id.clone()));
            }
        }
        let index = |id: &str| {
            joints
                .iter()
                .position(|j| j.id == id)
                .ok_or_else(|| FrameworkError::UnknownJoint(id.to_string()))
        };
        if bars.is_empty() && joints.len() > 1 {
            return Err(FrameworkError::NoBars);
        }
        let mut edge_set = BTreeSet::new();
        let mut edges = Vec::with_capacity(bars.len());
        for (a, b) in bars {
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                return Err(FrameworkError::SelfLoop(a.clone()));
            }
            if !edge_set.insert((i.min(j), i.max(j))) {
                return Err(FrameworkError::DuplicateBar(a.clone(), b.clone()));
            }
            edges.push((i, j));
        }
        let mut pinned = BTreeSet::new();
        for (id, coords) in pins {
            let i = index(id)?;
            for &c in coords {
                if c >= dimension {
                    return Err(FrameworkError::PinOutOfRange {
                        id: id.clone(),
                        coord: c,
                    });
                }
                pinned.insert((i, c));
            }
        }
        let fw = Framework {
            dimension,
            joints,
            bars: edges,
            pins: pinned,
        };
        if !fw.is_connected() {
            return Err(FrameworkError::Disconnected);
        }
        Ok(fw)
    }

    fn is_connected(&self) -> bool {
        let n = self.joints.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.bars {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    /// Bars as joint index pairs, in declaration order.
    pub fn bars(&self) -> &[(usize, usize)] {
        &self.bars
    }

    /// Pinned `(joint index, coordinate)` pairs.
    pub fn pins(&self) -> &BTreeSet<(usize, usize)> {
        &self.pins
    }

    pub fn has_bar(&self, i: usize, j: usize) -> bool {
        self.bars
            .iter()
            .any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.joints.len();
        self.bars.len() == n * (n - 1) / 2
    }

    /// Unpinned `(joint, coordinate)` pairs in lexicographic order.
    pub fn free_coordinates(&self) -> Vec<(usize, usize)> {
        (0..self.joints.len())
            .flat_map(|j| (0..self.dimension).map(move |c| (j, c)))
            .filter(|p| !self.pins.contains(p))
            .collect()
    }
}

/// Pins a simplex in normal position: `v_1` at the origin is pinned in every
/// coordinate, and `v_k` (k = 2..n), lying in the span of the first `k - 1`
/// axes with a nonzero coordinate `k - 1`, is pinned in coordinates `k..n`.
/// Each `v_k` is the first such joint in declaration order.
pub fn auto_pin(fw: &Framework) -> Result<Framework, FrameworkError> {
    if !fw.pins.is_empty() {
        return Err(FrameworkError::AlreadyPinned);
    }
    let n = fw.dimension;
    let mut pins = BTreeSet::new();
    let mut used = Vec::new();
    for k in 1..=n {
        // 0-based: coordinates k-1.. vanish; for k >= 2, coordinate k-2 does not.
        let found = fw.joints.iter().enumerate().find(|(i, j)| {
            !used.contains(i)
                && j.coords.iter().skip(k - 1).all(Zero::is_zero)
                && (k == 1 || !j.coords[k - 2].is_zero())
        });
        let Some((i, _)) = found else {
            return Err(FrameworkError::NoNormalSimplex);
        };
        used.push(i);
        let first = if k == 1 { 0 } else { k - 1 };
        for c in first..n {
            pins.insert((i, c));
        }
    }
    Ok(Framework { pins, ..fw.clone() })
}

/// The compiled system together with its base point and the meaning of each
/// variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSystem {
    pub system: QuadraticSystem,
    pub base_point: Vector,
    pub coordinates: Vec<(usize, usize)>,
}

fn axis_name(dimension: usize, c: usize) -> String {
    if dimension <= 3 {
        ["x", "y", "z"][c].to_string()
    } else {
        format!("c{}", c + 1)
    }
}

/// Affine form `sum coeff * var + constant`.
struct Affine {
    terms: Vec<(usize, Scalar)>,
    constant: Scalar,
}

impl Affine {
    fn square_into(&self, eq: &mut RawEquation) {
        let two = Scalar::from_integer(2.into());
        for (a, (i, ci)) in self.terms.iter().enumerate() {
            for (j, cj) in &self.terms[a..] {
                let mut v = ci * cj;
                if i != j {
                    v *= &two;
                }
                eq.alpha.push((*i, *j, v));
            }
            eq.beta.push((*i, &two * ci * &self.constant));
        }
        eq.gamma += &self.constant * &self.constant;
    }
}

pub fn build_edge_system(fw: &Framework) -> EdgeSystem {
    let coordinates = fw.free_coordinates();
    let var_of = |j: usize, c: usize| coordinates.iter().position(|&p| p == (j, c));
    let names = coordinates
        .iter()
        .map(|&(j, c)| format!("{}.{}", fw.joints[j].id, axis_name(fw.dimension, c)))
        .collect();
    let mut raw = Vec::with_capacity(fw.bars.len());
    for &(a, b) in &fw.bars {
        let mut eq = RawEquation::default();
        for c in 0..fw.dimension {
            let mut form = Affine {
                terms: Vec::new(),
                constant: Scalar::zero(),
            };
            for (joint, sign) in [(a, 1), (b, -1)] {
                let s = Scalar::from_integer(sign.into());
                match var_of(joint, c) {
                    Some(v) => form.terms.push((v, s)),
                    None => form.constant += s * &fw.joints[joint].coords[c],
                }
            }
            form.square_into(&mut eq);
            let d = &fw.joints[a].coords[c] - &fw.joints[b].coords[c];
            eq.gamma -= &d * &d;
        }
        raw.push(eq);
    }
    let system =
        validate_and_symmetrize(names, &raw).expect("indices come from the coordinate map");
    let base_point: Vector = coordinates
        .iter()
        .map(|&(j, c)| fw.joints[j].coords[c].clone())
        .collect();
    debug_assert!(system.evaluate(&base_point).unwrap().is_zero());
    EdgeSystem {
        system,
        base_point,
        coordinates,
    }
}

/// Velocity fields of rigid motions (translations and infinitesimal
/// rotations about the origin) that keep every pinned coordinate fixed,
/// restricted to the free coordinates and reduced to a basis.
pub fn trivial_motion_basis(fw: &Framework) -> Vec<Vector> {
    let n = fw.dimension;
    let joints = fw.joints.len();
    let len = n * joints;
    let mut generators = Vec::new();
    for c in 0..n {
        let mut v = Vector::zeros(len);
        for j in 0..joints {
            v[j * n + c] = Scalar::from_integer(1.into());
        }
        generators.push(v);
    }
    for a in 0..n {
        for b in a + 1..n {
            let mut v = Vector::zeros(len);
            for j in 0..joints {
                let p = &fw.joints[j].coords;
                v[j * n + b] = p[a].clone();
                v[j * n + a] = -p[b].clone();
            }
            generators.push(v);
        }
    }
    let pinned: Vec<usize> = fw.pins.iter().map(|&(j, c)| j * n + c).collect();
    let constraint = Matrix::from_rows(
        generators.len(),
        pinned
            .iter()
            .map(|&r| generators.iter().map(|g| g[r].clone()).collect())
            .collect(),
    )
    .expect("one entry per generator");
    let combos = if pinned.is_empty() {
        (0..generators.len())
            .map(|i| Vector::unit(generators.len(), i))
            .collect()
    } else {
        kernel_basis(&constraint)
    };
    let free = fw.free_coordinates();
    let fields: Vec<Vector> = combos
        .iter()
        .map(|lambda| {
            let full = Vector::linear_combination(&generators, lambda.entries(), len);
            free.iter().map(|&(j, c)| full[j * n + c].clone()).collect()
        })
        .collect();
    independent_subset(free.len(), &fields)
        .expect("uniform lengths")
        .into_iter()
        .map(|i| fields[i].clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    /// Joints `pair` are not joined by a bar and the coefficient of their
    /// squared distance at `order` is `coefficient != 0`.
    Nontrivial {
        pair: (usize, usize),
        order: usize,
        coefficient: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexionReport {
    pub order: usize,
    pub flexion: SeriesCoefficients,
    pub classification: Classification,
}

/// Squared distance between two joints along the series, through `upto`.
fn distance_series(
    fw: &Framework,
    coordinates: &[(usize, usize)],
    s: &SeriesCoefficients,
    i: usize,
    j: usize,
    upto: usize,
) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); upto + 1];
    for c in 0..fw.dimension {
        let track = |joint: usize| -> Vec<Scalar> {
            match coordinates.iter().position(|&p| p == (joint, c)) {
                Some(v) => (0..=upto)
                    .map(|p| s.coefficient(p).map_or(Scalar::zero(), |y| y[v].clone()))
                    .collect(),
                None => {
                    let mut t = vec![Scalar::zero(); upto + 1];
                    t[0] = fw.joints[joint].coords[c].clone();
                    t
                }
            }
        };
        let (a, b) = (track(i), track(j));
        let diff: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        for p in 0..=upto {
            for l in 0..=p {
                out[p] += &diff[l] * &diff[p - l];
            }
        }
    }
    out
}

/// Looks for a non-bar pair whose squared distance changes at some order in
/// `1..=max_order`; the lowest order wins, then the first pair.
pub fn flexion_nontriviality_upto(
    fw: &Framework,
    s: &SeriesCoefficients,
    max_order: usize,
) -> FlexionReport {
    let coordinates = fw.free_coordinates();
    let report = |classification| FlexionReport {
        order: s.degree(),
        flexion: s.clone(),
        classification,
    };
    if fw.is_complete() {
        return report(Classification::Trivial);
    }
    let joints = fw.joints.len();
    let series: Vec<((usize, usize), Vec<Scalar>)> = (0..joints)
        .flat_map(|i| (i + 1..joints).map(move |j| (i, j)))
        .filter(|&(i, j)| !fw.has_bar(i, j))
        .map(|(i, j)| {
            (
                (i, j),
                distance_series(fw, &coordinates, s, i, j, max_order),
            )
        })
        .collect();
    for order in 1..=max_order {
        for (pair, d) in &series {
            if !d[order].is_zero() {
                return report(Classification::Nontrivial {
                    pair: *pair,
                    order,
                    coefficient: d[order].clone(),
                });
            }
        }
    }
    report(Classification::Trivial)
}

/// Expands to twice the series degree.
pub fn flexion_nontriviality(fw: &Framework, s: &SeriesCoefficients) -> FlexionReport {
    flexion_nontriviality_upto(fw, s, 2 * s.degree())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// A flexibility certificate whose series moves a non-bar distance.
    NontrivialFlexion,
    FirstOrderRigidity,
    SecondOrderRigidity,
    /// One-dimensional first-order flexion space and no normalized formal
    /// solution.
    SingleFlexionObstruction,
}

impl Criterion {
    pub fn theorem(self) -> u8 {
        match self {
            Criterion::NontrivialFlexion => 7,
            Criterion::FirstOrderRigidity => 8,
            Criterion::SecondOrderRigidity => 9,
            Criterion::SingleFlexionObstruction => 10,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Criterion::NontrivialFlexion => "nontrivial analytic flexion: flexible",
            Criterion::FirstOrderRigidity => "first-order rigid, hence rigid",
            Criterion::SecondOrderRigidity => "second-order rigid, hence rigid",
            Criterion::SingleFlexionObstruction => {
                "single first-order flexion admits no formal extension: rigid"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameworkReport {
    pub framework: Framework,
    pub edges: EdgeSystem,
    pub analysis: AnalysisReport,
    pub criterion: Option<Criterion>,
    pub witness: Option<FlexionReport>,
}

impl FrameworkReport {
    pub fn verdict(&self) -> Verdict {
        self.analysis.verdict
    }
}

fn nontrivial_witness(fw: &Framework, cert: &Theorem1Flex) -> Option<FlexionReport> {
    let report = flexion_nontriviality_upto(fw, &cert.extended_series(), 2 * cert.q);
    matches!(report.classification, Classification::Nontrivial { .. }).then_some(report)
}

/// Pins (automatically when asked and no pins exist), compiles and analyzes.
/// Flexibility is only reported for certificates whose series changes some
/// non-bar distance within the exactly determined orders `1..=2q`.
pub fn analyze_framework(
    fw: &Framework,
    config: &AnalysisConfig,
    auto: bool,
) -> Result<FrameworkReport, FrameworkError> {
    let fw = if auto && fw.pins.is_empty() {
        auto_pin(fw)?
    } else {
        fw.clone()
    };
    let edges = build_edge_system(&fw);
    let ops = edges
        .system
        .linearize(&edges.base_point)
        .expect("framework base point solves its edge system");
    let analysis = analyze_operators(&ops, config, |cert| nontrivial_witness(&fw, cert).is_some());
    let (criterion, witness) = match &analysis.certificate {
        Some(Certificate::FirstOrderRigid(_)) => (Some(Criterion::FirstOrderRigidity), None),
        Some(Certificate::SecondOrderObstruction(_)) => {
            (Some(Criterion::SecondOrderRigidity), None)
        }
        Some(Certificate::TStandardFail(_)) => (Some(Criterion::SingleFlexionObstruction), None),
        Some(Certificate::Theorem1Flex(cert)) => (
            Some(Criterion::NontrivialFlexion),
            nontrivial_witness(&fw, cert),
        ),
        _ => (None, None),
    };
    Ok(FrameworkReport {
        framework: fw,
        edges,
        analysis,
        criterion,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::{int, ratio};

    fn joint(id: &str, coords: &[Scalar]) -> Joint {
        Joint {
            id: id.into(),
            coords: Vector::new(coords.to_vec()),
        }
    }

    fn bars(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn triangle() -> Framework {
        Framework::new(
            2,
            vec![
                joint("v1", &[int(0), int(0)]),
                joint("v2", &[int(1), int(0)]),
                joint("v3", &[ratio(1, 2), int(1)]),
            ],
            &bars(&[("v1", "v2"), ("v2", "v3"), ("v1", "v3")]),
            &[],
        )
        .unwrap()
    }

    fn square(extra: &[(&str, &str)]) -> Framework {
        let mut list = vec![("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")];
        list.extend_from_slice(extra);
        Framework::new(
            2,
            vec![
                joint("v1", &[int(0), int(0)]),
                joint("v2", &[int(1), int(0)]),
                joint("v3", &[int(1), int(1)]),
                joint("v4", &[int(0), int(1)]),
            ],
            &bars(&list),
            &[],
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        let j = vec![joint("a", &[int(0)]), joint("b", &[int(1)])];
        assert_eq!(
            Framework::new(1, j.clone(), &[], &[]).unwrap_err(),
            FrameworkError::NoBars
        );
        assert_eq!(
            Framework::new(1, j.clone(), &bars(&[("a", "a")]), &[]).unwrap_err(),
            FrameworkError::SelfLoop("a".into())
        );
        assert_eq!(
            Framework::new(1, j.clone(), &bars(&[("a", "c")]), &[]).unwrap_err(),
            FrameworkError::UnknownJoint("c".into())
        );
        let three = vec![
            joint("a", &[int(0)]),
            joint("b", &[int(1)]),
            joint("c", &[int(2)]),
        ];
        assert_eq!(
            Framework::new(1, three, &bars(&[("a", "b")]), &[]).unwrap_err(),
            FrameworkError::Disconnected
        );
        assert!(matches!(
            Framework::new(1, j, &bars(&[("a", "b")]), &[("a".into(), vec![1])]),
            Err(FrameworkError::PinOutOfRange { .. })
        ));
    }

    #[test]
    fn auto_pin_counts() {
        let t = auto_pin(&triangle()).unwrap();
        assert_eq!(
            t.pins().iter().copied().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1), (1, 1)]
        );
        let seg = Framework::new(
            1,
            vec![joint("a", &[int(0)]), joint("b", &[int(1)])],
            &bars(&[("a", "b")]),
            &[],
        )
        .unwrap();
        assert_eq!(auto_pin(&seg).unwrap().pins().len(), 1);
        assert_eq!(auto_pin(&t), Err(FrameworkError::AlreadyPinned));
        let off = Framework::new(
            2,
            vec![joint("a", &[int(1), int(1)]), joint("b", &[int(2), int(1)])],
            &bars(&[("a", "b")]),
            &[],
        )
        .unwrap();
        assert_eq!(auto_pin(&off), Err(FrameworkError::NoNormalSimplex));
    }

    #[test]
    fn single_bar_system() {
        let seg = Framework::new(
            1,
            vec![joint("a", &[int(0)]), joint("b", &[int(1)])],
            &bars(&[("a", "b")]),
            &[("a".into(), vec![0])],
        )
        .unwrap();
        let e = build_edge_system(&seg);
        assert_eq!(e.system.variable_count(), 1);
        assert_eq!(e.base_point, Vector::from_ints(&[1]));
        // (x - 0)^2 - 1
        assert_eq!(
            e.system.evaluate(&Vector::from_ints(&[3])).unwrap(),
            Vector::from_ints(&[8])
        );
        assert_eq!(e.system.variables(), &["b.x".to_string()]);
    }

    #[test]
    fn trivial_motions() {
        assert_eq!(trivial_motion_basis(&triangle()).len(), 3);
        assert!(trivial_motion_basis(&auto_pin(&triangle()).unwrap()).is_empty());
        let lone = Framework::new(2, vec![joint("o", &[int(0), int(0)])], &[], &[]).unwrap();
        assert_eq!(trivial_motion_basis(&lone).len(), 2);
    }

    #[test]
    fn complete_graph_is_never_nontrivial() {
        let k4 = square(&[("v1", "v3"), ("v2", "v4")]);
        assert!(k4.is_complete());
        let e = build_edge_system(&auto_pin(&k4).unwrap());
        let s = SeriesCoefficients::from_direction(
            e.base_point.clone(),
            Vector::from_ints(&[1, 1, 1, 1, 1]),
            0,
        );
        assert_eq!(
            flexion_nontriviality(&k4, &s).classification,
            Classification::Trivial
        );
    }

    #[test]
    fn square_flexes_with_diagonal_witness() {
        let report = analyze_framework(&square(&[]), &AnalysisConfig::default(), true).unwrap();
        assert_eq!(report.verdict(), Verdict::Flexible);
        assert_eq!(report.criterion, Some(Criterion::NontrivialFlexion));
        let w = report.witness.unwrap();
        let Classification::Nontrivial { pair, .. } = w.classification else {
            panic!("witness expected")
        };
        assert!(pair == (0, 2) || pair == (1, 3));
    }

    #[test]
    fn braced_square_and_triangle_are_first_order_rigid() {
        for fw in [triangle(), square(&[("v1", "v3")])] {
            let report = analyze_framework(&fw, &AnalysisConfig::default(), true).unwrap();
            assert_eq!(report.verdict(), Verdict::Rigid);
            assert_eq!(report.criterion, Some(Criterion::FirstOrderRigidity));
        }
    }
}
