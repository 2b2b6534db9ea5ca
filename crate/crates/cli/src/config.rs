//! Run configuration. The JSON document is deserialized strictly and then
//! validated into kernel objects; every error names the offending field or
//! the line and column of the document.

use crate::expr::{parse_expr, parse_rational};
use nfold::diffalg::{Frame, Rde};
use nfold::gl3::GL3Matrix;
use nfold::matrix::Matrix;
use nfold::typea::{gln_embedding, MobiusParameters};
use nfold::typeb::{FSpec, OmegaMatrix};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Preservation,
    Conditions,
    AbcCovariance,
    Invariants,
    SuperalgebraTier1,
    SuperalgebraTier2,
    Adjoint,
    ConstantsInvariance,
    TypeaLimit,
    Transvectants,
    Embedding,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Preservation,
        CheckKind::Conditions,
        CheckKind::AbcCovariance,
        CheckKind::Invariants,
        CheckKind::SuperalgebraTier1,
        CheckKind::SuperalgebraTier2,
        CheckKind::Adjoint,
        CheckKind::ConstantsInvariance,
        CheckKind::TypeaLimit,
        CheckKind::Transvectants,
        CheckKind::Embedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Preservation => "preservation",
            CheckKind::Conditions => "conditions",
            CheckKind::AbcCovariance => "abc-covariance",
            CheckKind::Invariants => "invariants",
            CheckKind::SuperalgebraTier1 => "superalgebra-tier1",
            CheckKind::SuperalgebraTier2 => "superalgebra-tier2",
            CheckKind::Adjoint => "adjoint",
            CheckKind::ConstantsInvariance => "constants-invariance",
            CheckKind::TypeaLimit => "typea-limit",
            CheckKind::Transvectants => "transvectants",
            CheckKind::Embedding => "embedding",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A 3×3 array of rational strings, or a token such as `"symbolic"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixField {
    Token(String),
    Rows(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MobiusField {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gl2Field {
    pub gl2: MobiusField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlNParams {
    pub n: usize,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlNField {
    #[serde(rename = "glN")]
    pub gln: GlNParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaField {
    Matrix(MatrixField),
    Gl2(Gl2Field),
    GlN(GlNField),
}

/// The document as written.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<MatrixField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaField>,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, rename = "random-trials", skip_serializing_if = "Option::is_none")]
    pub random_trials: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OmegaChoice {
    Concrete(OmegaMatrix),
    Symbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LambdaChoice {
    Matrix(GL3Matrix),
    Gl2(MobiusParameters),
    GlN(usize, MobiusParameters),
    Symbolic,
}

impl LambdaChoice {
    /// The 3×3 frame matrix, when the choice has one.
    pub fn gl3(&self) -> Option<GL3Matrix> {
        match self {
            LambdaChoice::Matrix(m) => Some(m.clone()),
            LambdaChoice::Symbolic => Some(GL3Matrix::symbolic()),
            LambdaChoice::Gl2(m) | LambdaChoice::GlN(3, m) => {
                GL3Matrix::new(gln_embedding(3, m).ok()?).ok()
            }
            LambdaChoice::GlN(..) => None,
        }
    }

    pub fn mobius(&self) -> Option<(usize, MobiusParameters)> {
        match self {
            LambdaChoice::Gl2(m) => Some((3, m.clone())),
            LambdaChoice::GlN(n, m) => Some((*n, m.clone())),
            _ => None,
        }
    }
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub omega: Option<OmegaChoice>,
    pub f: FSpec,
    pub lambda: Option<LambdaChoice>,
    pub checks: Vec<CheckKind>,
    pub seed: u64,
    pub random_trials: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    /// `"line L, column C"` or a field path such as `"omega[1][2]"`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field_err(location: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { location: location.into(), message: message.into() }
}

pub fn parse_config(text: &[u8]) -> Result<RunConfig, ConfigError> {
    let text = std::str::from_utf8(text).map_err(|e| field_err("document", format!("not UTF-8: {e}")))?;
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| json_error(text, &e))?;
    validate(raw)
}

fn json_error(text: &str, e: &serde_json::Error) -> ConfigError {
    let mut message = e.to_string();
    if let Some(at) = message.rfind(" at line ") {
        message.truncate(at);
    }
    // Untagged enums report only a variant mismatch; name the accepted forms.
    if message.contains("untagged enum MatrixField") {
        message = "omega: expected a 3×3 array of rational strings or \"symbolic\"".into();
    } else if message.contains("untagged enum LambdaField") {
        message = "lambda: expected a 3×3 array of rational strings, {\"gl2\": {...}}, {\"glN\": {...}} or \"symbolic\"".into();
    }
    let (line, col) = (e.line(), e.column());
    let snippet = text.lines().nth(line.saturating_sub(1)).map(str::trim).unwrap_or("");
    let location = if snippet.is_empty() {
        format!("line {line}, column {col}")
    } else {
        format!("line {line}, column {col} (`{snippet}`)")
    };
    ConfigError { location, message }
}

pub fn validate(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let omega = match &raw.omega {
        None => None,
        Some(MatrixField::Token(t)) if t == "symbolic" => Some(OmegaChoice::Symbolic),
        Some(MatrixField::Token(t)) => return Err(field_err("omega", format!("unknown token \"{t}\"; expected \"symbolic\""))),
        Some(MatrixField::Rows(rows)) => {
            Some(OmegaChoice::Concrete(OmegaMatrix::new(rational_matrix("omega", rows)?).expect("3×3")))
        }
    };
    let f = parse_f(raw.f.as_deref().unwrap_or("formal"))?;
    let lambda = match &raw.lambda {
        None => None,
        Some(l) => Some(parse_lambda(l)?),
    };
    Ok(RunConfig {
        omega,
        f,
        lambda,
        checks: raw.checks.clone(),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        random_trials: raw.random_trials.unwrap_or(DEFAULT_TRIALS),
        raw,
    })
}

/// `"formal"` or an expression in `z` with `f″ ≢ 0`.
pub fn parse_f(src: &str) -> Result<FSpec, ConfigError> {
    if src.trim() == "formal" {
        return Ok(FSpec::Formal);
    }
    let f = parse_expr(src).map_err(|e| field_err(format!("f, column {}", e.column), e.message))?;
    let z = Frame::z();
    let f2 = z.derive(&z.derive(&f).expect("z-frame")).expect("z-frame");
    if f2.is_zero() {
        return Err(field_err("f", format!("f″ ≡ 0 for f = {f}; the gauged Hamiltonian divides by f″")));
    }
    Ok(FSpec::Concrete(f))
}

fn rational(path: &str, s: &str) -> Result<Rde, ConfigError> {
    parse_rational(s)
        .map(|r| Rde::from_rational(&r))
        .ok_or_else(|| field_err(path, format!("\"{s}\" is not an exact rational (\"p\", \"p/q\" or a decimal)")))
}

fn rational_matrix(name: &str, rows: &[Vec<String>]) -> Result<Matrix, ConfigError> {
    if rows.len() != 3 {
        return Err(field_err(name, format!("expected 3 rows, found {}", rows.len())));
    }
    let mut out = Vec::with_capacity(3);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != 3 {
            return Err(field_err(format!("{name}[{i}]"), format!("expected 3 entries, found {}", row.len())));
        }
        let parsed: Result<Vec<Rde>, _> =
            row.iter().enumerate().map(|(j, s)| rational(&format!("{name}[{i}][{j}]"), s)).collect();
        out.push(parsed?);
    }
    Ok(Matrix::from_rows(out).expect("3×3"))
}

fn mobius(path: &str, alpha: &str, beta: &str, gamma: &str, delta: &str) -> Result<MobiusParameters, ConfigError> {
    let p = |k: &str, s: &str| rational(&format!("{path}.{k}"), s);
    MobiusParameters::new(p("alpha", alpha)?, p("beta", beta)?, p("gamma", gamma)?, p("delta", delta)?)
        .map_err(|_| field_err(path, "αδ − βγ = 0"))
}

fn parse_lambda(l: &LambdaField) -> Result<LambdaChoice, ConfigError> {
    match l {
        LambdaField::Matrix(MatrixField::Token(t)) if t == "symbolic" => Ok(LambdaChoice::Symbolic),
        LambdaField::Matrix(MatrixField::Token(t)) => {
            Err(field_err("lambda", format!("unknown token \"{t}\"; expected \"symbolic\"")))
        }
        LambdaField::Matrix(MatrixField::Rows(rows)) => {
            let m = rational_matrix("lambda", rows)?;
            GL3Matrix::new(m).map(LambdaChoice::Matrix).map_err(|_| field_err("lambda", "det Λ = 0"))
        }
        LambdaField::Gl2(g) => {
            let m = &g.gl2;
            mobius("lambda.gl2", &m.alpha, &m.beta, &m.gamma, &m.delta).map(LambdaChoice::Gl2)
        }
        LambdaField::GlN(g) => {
            let m = &g.gln;
            if m.n < 2 {
                return Err(field_err("lambda.glN.n", format!("N = {} but the embedding needs N ≥ 2", m.n)));
            }
            mobius("lambda.glN", &m.alpha, &m.beta, &m.gamma, &m.delta).map(|p| LambdaChoice::GlN(m.n, p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RunConfig, ConfigError> {
        parse_config(s.as_bytes())
    }

    #[test]
    fn minimal_example() {
        let c = parse(r#"{"omega": [["1","0","0"],["0","1","0"],["0","0","1"]], "f": "z^3", "checks": ["preservation"]}"#)
            .unwrap();
        assert_eq!(c.omega, Some(OmegaChoice::Concrete(OmegaMatrix::identity())));
        assert_eq!(c.checks, vec![CheckKind::Preservation]);
        assert_eq!((c.seed, c.random_trials), (DEFAULT_SEED, DEFAULT_TRIALS));
    }

    #[test]
    fn typea_example_and_lambda_forms() {
        let c = parse(r#"{"f": "z^2", "checks": ["typea-limit"], "lambda": {"gl2": {"alpha":"1","beta":"2","gamma":"0","delta":"1/2"}}}"#)
            .unwrap();
        assert!(matches!(c.lambda, Some(LambdaChoice::Gl2(_))));
        assert!(c.lambda.unwrap().gl3().is_some());
        let c = parse(r#"{"lambda": {"glN": {"n": 4, "alpha":"1","beta":"0","gamma":"1","delta":"1"}}}"#).unwrap();
        assert!(matches!(c.lambda, Some(LambdaChoice::GlN(4, _))));
        assert!(c.lambda.unwrap().gl3().is_none());
        let c = parse(r#"{"lambda": "symbolic", "omega": "symbolic", "f": "formal"}"#).unwrap();
        assert_eq!(c.lambda, Some(LambdaChoice::Symbolic));
        assert!(c.f.is_formal());
    }

    #[test]
    fn degenerate_f_rejected() {
        let e = parse(r#"{"f": "z + 1"}"#).unwrap_err();
        assert_eq!(e.location, "f");
        assert!(e.message.contains("f″ ≡ 0"));
    }

    #[test]
    fn diagnostics_are_located() {
        let e = parse("{\n  \"omega\": [[\"1\",\"x\",\"0\"],[\"0\",\"1\",\"0\"],[\"0\",\"0\",\"1\"]]\n}").unwrap_err();
        assert_eq!(e.location, "omega[0][1]");
        let e = parse("{\n  \"f\": \"z^2\",\n  \"colour\": 1\n}").unwrap_err();
        assert!(e.location.starts_with("line 3"), "{e}");
        assert!(e.message.contains("unknown field `colour`"));
        let e = parse("{\"checks\": [\"preservation\", \"nope\"]}").unwrap_err();
        assert!(e.message.contains("unknown variant `nope`"), "{e}");
        let e = parse("{\"f\": \"z^2 +\"}").unwrap_err();
        assert_eq!(e.location, "f, column 6");
        let e = parse("{\"omega\": [[\"1\"]]}").unwrap_err();
        assert_eq!(e.location, "omega");
        let e = parse("{\"lambda\": [[\"1\",\"2\",\"3\"],[\"2\",\"4\",\"6\"],[\"0\",\"0\",\"1\"]]}").unwrap_err();
        assert_eq!(e.message, "det Λ = 0");
        let e = parse("{\"lambda\": {\"gl2\": {\"alpha\":\"1\",\"beta\":\"1\",\"gamma\":\"1\",\"delta\":\"1\"}}}").unwrap_err();
        assert_eq!(e.location, "lambda.gl2");
        let e = parse("{\"lambda\": 5}").unwrap_err();
        assert!(e.message.starts_with("lambda:"), "{e}");
        let e = parse("{\"omega\": \"random\"}").unwrap_err();
        assert_eq!(e.location, "omega");
        assert!(parse("{").unwrap_err().location.starts_with("line 1"));
    }

    #[test]
    fn check_names_round_trip() {
        for k in CheckKind::ALL {
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
            assert_eq!(<CheckKind as clap::ValueEnum>::from_str(k.name(), false), Ok(k));
        }
    }
}
