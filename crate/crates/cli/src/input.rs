//! Map and joint-state input documents.
//!
//! ```json
//! { "kind": "kraus", "dim": 2, "data": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]] }
//! ```
//!
//! Complex scalars are two-element arrays `[re, im]`. `choi`, `superop_a` and
//! `superop_b` carry one `N² × N²` matrix in `data`; `kraus` carries a list
//! of `N × N` matrices plus optional `weights` and `signs` (`1` or `-1`);
//! `joint_dynamics` carries `dims`, a `state` vector and an optional
//! `unitary`. A report produced by `extract` is also accepted: its
//! `extracted_map` member is loaded.

use extmaps::map::kraus_to_map;
use extmaps::{linalg, CMatrix, CVector, KrausSet, LinearMap, Sign, Tolerance};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Kraus,
    Choi,
    SuperopA,
    SuperopB,
    JointDynamics,
}

impl Kind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "kraus" => Self::Kraus,
            "choi" => Self::Choi,
            "superop_a" => Self::SuperopA,
            "superop_b" => Self::SuperopB,
            "joint_dynamics" => Self::JointDynamics,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Kraus => "kraus",
            Self::Choi => "choi",
            Self::SuperopA => "superop_a",
            Self::SuperopB => "superop_b",
            Self::JointDynamics => "joint_dynamics",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ToleranceOverrides {
    pub zero_eig_rel: Option<f64>,
    pub residual_abs: Option<f64>,
}

impl ToleranceOverrides {
    /// Fields of `self` win over `base`.
    pub fn or(self, base: Self) -> Self {
        Self {
            zero_eig_rel: self.zero_eig_rel.or(base.zero_eig_rel),
            residual_abs: self.residual_abs.or(base.residual_abs),
        }
    }

    pub fn resolve(self) -> Result<Tolerance, CliError> {
        let d = Tolerance::default();
        Tolerance::new(
            self.zero_eig_rel.unwrap_or(d.zero_eig_rel),
            self.residual_abs.unwrap_or(d.residual_abs),
        )
        .map_err(|e| CliError::Input(format!("tolerance: {e}")))
    }
}

#[derive(Debug, Clone)]
pub struct MapDocument {
    pub kind: Kind,
    pub map: LinearMap,
}

#[derive(Debug, Clone)]
pub struct JointDocument {
    pub dims: (usize, usize),
    pub state: CVector,
    pub unitary: Option<CMatrix>,
}

#[derive(Debug, Clone)]
pub enum Payload {
    Map(MapDocument),
    Joint(JointDocument),
}

#[derive(Debug, Clone)]
pub struct Document {
    pub payload: Payload,
    pub seed: Option<u64>,
    pub tolerance: ToleranceOverrides,
}

fn err(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

fn child(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

pub fn parse(bytes: &[u8]) -> Result<Document, CliError> {
    let value: Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
    parse_value(&value, "$")
}

fn parse_value(value: &Value, path: &str) -> Result<Document, CliError> {
    let obj = value.as_object().ok_or_else(|| err(path, "expected an object"))?;
    if !obj.contains_key("kind") {
        if let Some(inner) = obj.get("extracted_map") {
            return parse_value(inner, &child(path, "extracted_map"));
        }
    }
    let kind_path = child(path, "kind");
    let kind_str = obj
        .get("kind")
        .ok_or_else(|| err(&kind_path, "missing"))?
        .as_str()
        .ok_or_else(|| err(&kind_path, "expected a string"))?;
    let kind = Kind::parse(kind_str).ok_or_else(|| {
        err(
            &kind_path,
            format!("unknown kind {kind_str:?}; expected kraus, choi, superop_a, superop_b or joint_dynamics"),
        )
    })?;

    let allowed: &[&str] = match kind {
        Kind::Kraus => &["kind", "dim", "data", "weights", "signs", "seed", "tolerance"],
        Kind::JointDynamics => &["kind", "dims", "state", "unitary", "seed", "tolerance"],
        _ => &["kind", "dim", "data", "seed", "tolerance"],
    };
    if let Some(key) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(err(
            &child(path, key),
            format!("unexpected field for kind {}", kind.as_str()),
        ));
    }

    let seed = match obj.get("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| err(&child(path, "seed"), "expected a non-negative integer"))?,
        ),
    };
    let tolerance = parse_tolerance(obj.get("tolerance"), &child(path, "tolerance"))?;

    let payload = match kind {
        Kind::JointDynamics => Payload::Joint(parse_joint(obj, path)?),
        _ => Payload::Map(MapDocument {
            kind,
            map: parse_map(kind, obj, path)?,
        }),
    };
    Ok(Document {
        payload,
        seed,
        tolerance,
    })
}

fn parse_tolerance(value: Option<&Value>, path: &str) -> Result<ToleranceOverrides, CliError> {
    let Some(value) = value else {
        return Ok(ToleranceOverrides::default());
    };
    let obj = value.as_object().ok_or_else(|| err(path, "expected an object"))?;
    let mut out = ToleranceOverrides::default();
    for (key, v) in obj {
        let p = child(path, key);
        let x = v.as_f64().ok_or_else(|| err(&p, "expected a number"))?;
        match key.as_str() {
            "zero_eig_rel" => out.zero_eig_rel = Some(x),
            "residual_abs" => out.residual_abs = Some(x),
            _ => return Err(err(&p, "unknown tolerance field; expected zero_eig_rel or residual_abs")),
        }
    }
    Ok(out)
}

fn parse_dim(obj: &Map<String, Value>, path: &str) -> Result<usize, CliError> {
    let p = child(path, "dim");
    let dim = obj
        .get("dim")
        .ok_or_else(|| err(&p, "missing"))?
        .as_u64()
        .ok_or_else(|| err(&p, "expected a positive integer"))?;
    if dim == 0 {
        return Err(err(&p, "must be positive"));
    }
    usize::try_from(dim).map_err(|_| err(&p, "too large"))
}

fn parse_map(kind: Kind, obj: &Map<String, Value>, path: &str) -> Result<LinearMap, CliError> {
    let dim = parse_dim(obj, path)?;
    let data_path = child(path, "data");
    let data = obj.get("data").ok_or_else(|| err(&data_path, "missing"))?;
    let lib = |e: extmaps::Error| err(&data_path, e);
    match kind {
        Kind::Kraus => {
            let items = data
                .as_array()
                .ok_or_else(|| err(&data_path, "expected an array of matrices"))?;
            if items.is_empty() {
                return Err(err(&data_path, "at least one operator is required"));
            }
            let ops = items
                .iter()
                .enumerate()
                .map(|(i, m)| parse_matrix(m, &index(&data_path, i), dim, dim))
                .collect::<Result<Vec<_>, _>>()?;
            let weights = match obj.get("weights") {
                None => None,
                Some(w) => Some(parse_reals(w, &child(path, "weights"), ops.len())?),
            };
            let signs = match obj.get("signs") {
                None => None,
                Some(s) => Some(parse_signs(s, &child(path, "signs"), ops.len())?),
            };
            let set = KrausSet::new(dim, ops, weights).map_err(|e| err(&child(path, "weights"), e))?;
            kraus_to_map(&set, signs.as_deref()).map_err(lib)
        }
        Kind::Choi | Kind::SuperopA | Kind::SuperopB => {
            let side = dim * dim;
            let m = parse_matrix(data, &data_path, side, side)?;
            match kind {
                Kind::Choi => LinearMap::from_standard_choi(&m),
                Kind::SuperopA => LinearMap::from_a_form(&m),
                _ => LinearMap::from_choi(m),
            }
            .map_err(lib)
        }
        Kind::JointDynamics => unreachable!("handled by parse_joint"),
    }
}

fn parse_joint(obj: &Map<String, Value>, path: &str) -> Result<JointDocument, CliError> {
    let dims_path = child(path, "dims");
    let dims = obj
        .get("dims")
        .ok_or_else(|| err(&dims_path, "missing"))?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| err(&dims_path, "expected [system_dim, environment_dim]"))?;
    let mut d = [0usize; 2];
    for (i, v) in dims.iter().enumerate() {
        d[i] = v
            .as_u64()
            .filter(|&x| x > 0)
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| err(&index(&dims_path, i), "expected a positive integer"))?;
    }
    let total = d[0] * d[1];
    let state_path = child(path, "state");
    let state = obj.get("state").ok_or_else(|| err(&state_path, "missing"))?;
    let state = parse_vector(state, &state_path, total)?;
    let unitary = match obj.get("unitary") {
        None | Some(Value::Null) => None,
        Some(u) => Some(parse_matrix(u, &child(path, "unitary"), total, total)?),
    };
    Ok(JointDocument {
        dims: (d[0], d[1]),
        state,
        unitary,
    })
}

fn parse_real(v: &Value, path: &str) -> Result<f64, CliError> {
    let x = v.as_f64().ok_or_else(|| err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(err(path, "not finite"));
    }
    Ok(x)
}

fn parse_complex(v: &Value, path: &str) -> Result<Complex64, CliError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(
            parse_real(re, &index(path, 0))?,
            parse_real(im, &index(path, 1))?,
        )),
        _ => Err(err(path, "expected a complex number [re, im]")),
    }
}

fn parse_array<'a>(v: &'a Value, path: &str, len: usize, what: &str) -> Result<&'a [Value], CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| err(path, format!("expected an array of {len} {what}")))?;
    if items.len() != len {
        return Err(err(
            path,
            format!("expected {len} {what}, found {} (declared dimension does not match)", items.len()),
        ));
    }
    Ok(items)
}

fn parse_vector(v: &Value, path: &str, len: usize) -> Result<CVector, CliError> {
    let items = parse_array(v, path, len, "entries")?;
    let entries = items
        .iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &index(path, i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CVector::from_vec(entries))
}

fn parse_matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<CMatrix, CliError> {
    let row_values = parse_array(v, path, rows, "rows")?;
    let mut m = linalg::zeros(rows, cols);
    for (r, row) in row_values.iter().enumerate() {
        let row_path = index(path, r);
        let entries = parse_array(row, &row_path, cols, "entries")?;
        for (c, z) in entries.iter().enumerate() {
            m[(r, c)] = parse_complex(z, &index(&row_path, c))?;
        }
    }
    Ok(m)
}

fn parse_reals(v: &Value, path: &str, len: usize) -> Result<Vec<f64>, CliError> {
    parse_array(v, path, len, "weights")?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_real(x, &index(path, i)))
        .collect()
}

fn parse_signs(v: &Value, path: &str, len: usize) -> Result<Vec<Sign>, CliError> {
    parse_array(v, path, len, "signs")?
        .iter()
        .enumerate()
        .map(|(i, x)| match x.as_i64() {
            Some(1) => Ok(Sign::Plus),
            Some(-1) => Ok(Sign::Minus),
            _ => Err(err(&index(path, i), "expected 1 or -1")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(s: &str) -> Result<Document, CliError> {
        parse(s.as_bytes())
    }

    fn message(r: Result<Document, CliError>) -> String {
        match r {
            Err(CliError::Input(m)) => m,
            other => panic!("expected an input error, got {other:?}"),
        }
    }

    #[test]
    fn identity_kraus() {
        let doc = parse_str(r#"{"kind":"kraus","dim":2,"data":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#).unwrap();
        let Payload::Map(m) = doc.payload else { panic!() };
        assert!((m.map.choi() - extmaps::channels::identity(2).choi()).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_names_the_path() {
        let msg = message(parse_str(r#"{"kind":"superop_b","dim":3,"data":[[[1,0]]]}"#));
        assert!(msg.starts_with("$.data:"), "{msg}");
        assert!(msg.contains("expected 9 rows"), "{msg}");
    }

    #[test]
    fn bad_complex_names_the_entry() {
        let msg = message(parse_str(r#"{"kind":"kraus","dim":1,"data":[[["1"]]]}"#));
        assert!(msg.starts_with("$.data[0][0][0]:"), "{msg}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let msg = message(parse_str(r#"{"kind":"choi","dim":1,"data":[[[1,0]]],"colour":1}"#));
        assert!(msg.starts_with("$.colour:"), "{msg}");
    }

    #[test]
    fn extracted_map_is_unwrapped() {
        let doc = parse_str(r#"{"command":"extract","extracted_map":{"kind":"superop_b","dim":1,"data":[[[1,0]]]}}"#)
            .unwrap();
        assert!(matches!(doc.payload, Payload::Map(_)));
    }

    #[test]
    fn tolerance_precedence() {
        let doc = ToleranceOverrides { zero_eig_rel: Some(1e-8), residual_abs: None };
        let flags = ToleranceOverrides { zero_eig_rel: None, residual_abs: Some(1e-6) };
        let t = flags.or(doc).resolve().unwrap();
        assert_eq!((t.zero_eig_rel, t.residual_abs), (1e-8, 1e-6));
    }
}
