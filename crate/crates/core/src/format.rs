//! JSON file formats and report rendering.
//!
//! Rationals are strings, `"-3"` or `"7/2"`. Indices inside input files are
//! 0-based; equation and variable indices inside reports are 1-based.
//!
//! System file:
//!
//! ```json
//! {"variables": ["x1", "x2"],
//!  "equations": [{"alpha": [[0, 0, "1"]], "beta": [[1, "-1"]], "gamma": "0"},
//!                {"terms": [{"exponents": [3, 0], "coeff": "1"}]}],
//!  "base_point": ["0", "0"]}
//! ```
//!
//! An equation is given either by `alpha`/`beta`/`gamma` (degree at most
//! two, `alpha` entries accumulate and are symmetrized) or by `terms`.
//!
//! Framework file:
//!
//! ```json
//! {"dimension": 2,
//!  "joints": [{"id": "a", "coords": ["0", "0"]}, {"id": "b", "coords": ["1", "0"]}],
//!  "bars": [["a", "b"]],
//!  "pins": [{"joint": "a", "coords": [0, 1]}],
//!  "auto_pin": false}
//! ```

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::certify::{
    AnalysisReport, Certificate, FirstOrderRigid, ObstructionReason, SecondOrderObstruction,
    TStandardFail, TStandardSurvived, Theorem1Flex,
};
use crate::quadsys::{
    reduce_degree, validate_and_symmetrize, AuxDefinition, GeneralPolySystem, Polynomial,
    QuadraticSystem, RawEquation, ReductionMap,
};
use crate::ratlinalg::{format_scalar, parse_scalar, Matrix, Scalar, Vector};
use crate::rigidity::{Classification, Framework, FrameworkReport, Joint};
use crate::series::SeriesCoefficients;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        FormatError::Json {
            path,
            line: inner.line(),
            column: inner.column(),
            message: strip_position(&inner.to_string()),
        }
    })?;
    // Reject trailing content.
    let mut de = serde_json::Deserializer::from_str(text);
    serde::de::IgnoredAny::deserialize(&mut de)
        .and_then(|_| de.end())
        .map_err(|e| FormatError::Json {
            path: ".".into(),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// A rational in its string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub Scalar);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map(Rat).map_err(D::Error::custom)
    }
}

fn rats(v: &Vector) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn vector(v: Vec<Rat>) -> Vector {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDto {
    exponents: Vec<u32>,
    coeff: Rat,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<(usize, usize, Rat)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<(usize, Rat)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<TermDto>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuxDto {
    variable: usize,
    monomial: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDto {
    variables: Vec<String>,
    equations: Vec<EquationDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_point: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    auxiliary: Option<Vec<AuxDto>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedSystem {
    Quadratic(QuadraticSystem),
    General(GeneralPolySystem),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub system: ParsedSystem,
    pub base_point: Option<Vector>,
    /// Auxiliary definitions recorded by an earlier reduction.
    pub auxiliary: Vec<AuxDefinition>,
}

impl SystemFile {
    /// The degree-two form of the system and the map back to the original
    /// variables (empty when no reduction was needed).
    pub fn quadratic(&self) -> (QuadraticSystem, ReductionMap) {
        match &self.system {
            ParsedSystem::Quadratic(q) => (
                q.clone(),
                ReductionMap {
                    original_variable_count: q.variable_count(),
                    auxiliary: Vec::new(),
                },
            ),
            ParsedSystem::General(g) => match g.to_quadratic() {
                Some(q) => (
                    q,
                    ReductionMap {
                        original_variable_count: g.variables().len(),
                        auxiliary: Vec::new(),
                    },
                ),
                None => reduce_degree(g),
            },
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> FormatError {
    FormatError::Invalid(e.to_string())
}

pub fn parse_system(text: &str) -> Result<SystemFile, FormatError> {
    let dto: SystemDto = from_json(text)?;
    let m = dto.variables.len();
    let any_terms = dto.equations.iter().any(|e| e.terms.is_some());
    for (k, e) in dto.equations.iter().enumerate() {
        let quad = e.alpha.is_some() || e.beta.is_some() || e.gamma.is_some();
        if e.terms.is_some() && quad {
            return Err(FormatError::Invalid(format!(
                "equation {k}: give either terms or alpha/beta/gamma, not both"
            )));
        }
    }
    let system = if any_terms {
        let mut polys = Vec::with_capacity(dto.equations.len());
        for (k, e) in dto.equations.into_iter().enumerate() {
            let mut p = Polynomial::zero(m);
            match e.terms {
                Some(terms) => {
                    for t in terms {
                        if t.exponents.len() != m {
                            return Err(FormatError::Invalid(format!(
                                "equation {k}: exponent vector has {} entries, expected {m}",
                                t.exponents.len()
                            )));
                        }
                        p.add_term(t.exponents, t.coeff.0);
                    }
                }
                None => {
                    let q = quadratic_from_dto(&[e], m)?;
                    p = q.to_general().equations()[0].clone();
                }
            }
            polys.push(p);
        }
        ParsedSystem::General(GeneralPolySystem::new(dto.variables, polys).map_err(invalid)?)
    } else {
        ParsedSystem::Quadratic(quadratic_from_named(dto.variables, &dto.equations)?)
    };
    let base_point = dto.base_point.map(vector);
    if let Some(b) = &base_point {
        if b.len() != m {
            return Err(FormatError::Invalid(format!(
                "base_point has {} entries, expected {m}",
                b.len()
            )));
        }
    }
    let auxiliary = dto
        .auxiliary
        .unwrap_or_default()
        .into_iter()
        .map(|a| AuxDefinition {
            variable: a.variable,
            monomial: a.monomial,
        })
        .collect();
    Ok(SystemFile {
        system,
        base_point,
        auxiliary,
    })
}

fn raw_from_dto(equations: &[EquationDto]) -> Vec<RawEquation> {
    equations
        .iter()
        .map(|e| RawEquation {
            alpha: e
                .alpha
                .iter()
                .flatten()
                .map(|(i, j, v)| (*i, *j, v.0.clone()))
                .collect(),
            beta: e
                .beta
                .iter()
                .flatten()
                .map(|(i, v)| (*i, v.0.clone()))
                .collect(),
            gamma: e
                .gamma
                .as_ref()
                .map_or_else(Scalar::default, |g| g.0.clone()),
        })
        .collect()
}

fn quadratic_from_named(
    variables: Vec<String>,
    equations: &[EquationDto],
) -> Result<QuadraticSystem, FormatError> {
    validate_and_symmetrize(variables, &raw_from_dto(equations)).map_err(invalid)
}

fn quadratic_from_dto(equations: &[EquationDto], m: usize) -> Result<QuadraticSystem, FormatError> {
    let names = (0..m).map(|i| format!("v{i}")).collect();
    quadratic_from_named(names, equations)
}

fn quadratic_equations(sys: &QuadraticSystem) -> Vec<EquationDto> {
    sys.equations()
        .iter()
        .map(|e| {
            let mut alpha = Vec::new();
            for (i, j, v) in e.upper_entries() {
                alpha.push((i, j, Rat(v.clone())));
                if i != j {
                    alpha.push((j, i, Rat(v.clone())));
                }
            }
            let beta = e
                .beta()
                .iter()
                .enumerate()
                .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                .map(|(i, v)| (i, Rat(v.clone())))
                .collect();
            EquationDto {
                alpha: Some(alpha),
                beta: Some(beta),
                gamma: Some(Rat(e.gamma().clone())),
                terms: None,
            }
        })
        .collect()
}

fn general_equations(sys: &GeneralPolySystem) -> Vec<EquationDto> {
    sys.equations()
        .iter()
        .map(|p| EquationDto {
            terms: Some(
                p.terms()
                    .map(|(e, c)| TermDto {
                        exponents: e.to_vec(),
                        coeff: Rat(c.clone()),
                    })
                    .collect(),
            ),
            ..Default::default()
        })
        .collect()
}

pub fn write_system(file: &SystemFile) -> String {
    let (variables, equations) = match &file.system {
        ParsedSystem::Quadratic(q) => (q.variables().to_vec(), quadratic_equations(q)),
        ParsedSystem::General(g) => (g.variables().to_vec(), general_equations(g)),
    };
    let dto = SystemDto {
        variables,
        equations,
        base_point: file.base_point.as_ref().map(rats),
        auxiliary: (!file.auxiliary.is_empty()).then(|| {
            file.auxiliary
                .iter()
                .map(|a| AuxDto {
                    variable: a.variable,
                    monomial: a.monomial.clone(),
                })
                .collect()
        }),
    };
    let mut out = serde_json::to_string_pretty(&dto).expect("serializable");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JointDto {
    id: String,
    coords: Vec<Rat>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PinDto {
    joint: String,
    coords: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameworkDto {
    dimension: usize,
    joints: Vec<JointDto>,
    bars: Vec<(String, String)>,
    #[serde(default)]
    pins: Vec<PinDto>,
    #[serde(default)]
    auto_pin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameworkFile {
    pub framework: Framework,
    pub auto_pin: bool,
}

pub fn parse_framework(text: &str) -> Result<FrameworkFile, FormatError> {
    let dto: FrameworkDto = from_json(text)?;
    let joints = dto
        .joints
        .into_iter()
        .map(|j| Joint {
            id: j.id,
            coords: vector(j.coords),
        })
        .collect();
    let pins: Vec<(String, Vec<usize>)> =
        dto.pins.into_iter().map(|p| (p.joint, p.coords)).collect();
    let framework = Framework::new(dto.dimension, joints, &dto.bars, &pins).map_err(invalid)?;
    Ok(FrameworkFile {
        framework,
        auto_pin: dto.auto_pin,
    })
}

pub fn write_framework(file: &FrameworkFile) -> String {
    let fw = &file.framework;
    let id = |i: usize| fw.joints()[i].id.clone();
    let mut pins: Vec<PinDto> = Vec::new();
    for &(j, c) in fw.pins() {
        match pins.last_mut() {
            Some(p) if p.joint == id(j) => p.coords.push(c),
            _ => pins.push(PinDto {
                joint: id(j),
                coords: vec![c],
            }),
        }
    }
    let dto = FrameworkDto {
        dimension: fw.dimension(),
        joints: fw
            .joints()
            .iter()
            .map(|j| JointDto {
                id: j.id.clone(),
                coords: rats(&j.coords),
            })
            .collect(),
        bars: fw.bars().iter().map(|&(a, b)| (id(a), id(b))).collect(),
        pins,
        auto_pin: file.auto_pin,
    };
    let mut out = serde_json::to_string_pretty(&dto).expect("serializable");
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Reports

fn rat_value(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}

pub fn vector_value(v: &Vector) -> Value {
    Value::Array(v.iter().map(rat_value).collect())
}

fn vectors_value(vs: &[Vector]) -> Value {
    Value::Array(vs.iter().map(vector_value).collect())
}

fn scalars_value(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(rat_value).collect())
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_value(&m.row(i))).collect())
}

pub fn series_value(s: &SeriesCoefficients) -> Value {
    json!({
        "degree": s.degree(),
        "coefficients": vectors_value(s.coefficients()),
    })
}

pub fn certificate_value(cert: &Certificate) -> Value {
    let body = match cert {
        Certificate::FirstOrderRigid(FirstOrderRigid {
            rows,
            minor_determinant,
        }) => json!({
            "rows": rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
            "minor_determinant": rat_value(minor_determinant),
        }),
        Certificate::SecondOrderObstruction(SecondOrderObstruction {
            kernel,
            cokernel,
            forms,
            reason,
        }) => {
            let reason = match reason {
                ObstructionReason::DefiniteForm { functional } => json!({
                    "type": "definite_form",
                    "functional": functional + 1,
                }),
                ObstructionReason::NoCommonRoot {
                    base,
                    roots,
                    refuted_by,
                } => json!({
                    "type": "no_common_root",
                    "base": base + 1,
                    "roots": roots.iter().map(|(a, b)| scalars_value(&[a.clone(), b.clone()])).collect::<Vec<_>>(),
                    "refuted_by": refuted_by.iter().map(|l| l + 1).collect::<Vec<_>>(),
                }),
                ObstructionReason::IrrationalRootsNotShared { base, other } => json!({
                    "type": "irrational_roots_not_shared",
                    "base": base + 1,
                    "other": other + 1,
                }),
            };
            json!({
                "kernel": vectors_value(kernel),
                "cokernel": vectors_value(cokernel),
                "forms": forms.iter().map(matrix_value).collect::<Vec<_>>(),
                "reason": reason,
            })
        }
        Certificate::Theorem1Flex(
            c @ Theorem1Flex {
                q,
                k,
                series,
                pairs,
                bridge,
            },
        ) => json!({
            "q": q,
            "k": k,
            "series": series_value(series),
            "pairs": pairs.iter().map(|p| json!({
                "i": p.i,
                "j": p.j,
                "coefficients": scalars_value(&p.coefficients),
            })).collect::<Vec<_>>(),
            "bridge": bridge.iter().map(|b| scalars_value(b)).collect::<Vec<_>>(),
            "extended_series": series_value(&c.extended_series()),
        }),
        Certificate::TStandardFail(TStandardFail {
            t_basis,
            series,
            p,
            rhs,
            functional,
        }) => json!({
            "t_basis": vectors_value(t_basis),
            "series": series_value(series),
            "p": p,
            "rhs": vector_value(rhs),
            "functional": vector_value(functional),
        }),
        Certificate::TStandardSurvived(s @ TStandardSurvived { t_basis, series }) => json!({
            "t_basis": vectors_value(t_basis),
            "series": series_value(series),
            "depth": s.depth(),
        }),
    };
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), Value::String(cert.kind().into()));
    if let Value::Object(fields) = body {
        obj.extend(fields);
    }
    Value::Object(obj)
}

pub fn report_value(report: &AnalysisReport) -> Value {
    json!({
        "verdict": report.verdict.to_string(),
        "certificate": report.certificate.as_ref().map_or(Value::Null, certificate_value),
        "kernel_dimension": report.kernel_dimension,
        "depth": report.depth_reached,
        "notes": report.notes,
    })
}

pub fn framework_report_value(report: &FrameworkReport) -> Value {
    let mut v = report_value(&report.analysis);
    let fw = &report.framework;
    let obj = v.as_object_mut().expect("report is an object");
    obj.insert("variables".into(), json!(report.edges.system.variables()));
    obj.insert(
        "pins".into(),
        Value::Array(
            fw.pins()
                .iter()
                .map(|&(j, c)| json!([fw.joints()[j].id, c]))
                .collect(),
        ),
    );
    obj.insert(
        "criterion".into(),
        report.criterion.map_or(
            Value::Null,
            |c| json!({"theorem": c.theorem(), "description": c.describe()}),
        ),
    );
    let witness = report
        .witness
        .as_ref()
        .and_then(|w| match &w.classification {
            Classification::Nontrivial {
                pair,
                order,
                coefficient,
            } => Some(json!({
                "pair": [fw.joints()[pair.0].id, fw.joints()[pair.1].id],
                "order": order,
                "coefficient": rat_value(coefficient),
            })),
            Classification::Trivial => None,
        });
    obj.insert("witness".into(), witness.unwrap_or(Value::Null));
    v
}

/// Canonical JSON text: pretty-printed, keys sorted, trailing newline.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
