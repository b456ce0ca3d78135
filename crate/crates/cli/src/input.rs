//! Parsing of `--system`, element and matrix payloads.

use serde_json::Value;

use ftvn::instances::{make_system, InstanceSpec};
use ftvn::numerics::Matrix;
use ftvn::{Element, System};

/// A parsed `--x`/`--y`/`--matrix` argument.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Vector(Vec<f64>),
    /// Rectangular, given by rows.
    Matrix(Vec<Vec<f64>>),
}

impl Payload {
    pub fn flatten(&self) -> Vec<f64> {
        match self {
            Self::Vector(v) => v.clone(),
            Self::Matrix(rows) => rows.concat(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Vector(v) => v.len(),
            Self::Matrix(rows) => rows.len() * rows.first().map_or(0, Vec::len),
        }
    }
}

/// Reads `text` literally, or the file it names when prefixed with `@`.
pub fn read_arg(text: &str) -> Result<String, String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
        None => Ok(text.to_string()),
    }
}

fn number(v: &Value, at: &str) -> Result<f64, String> {
    let x = v
        .as_f64()
        .ok_or_else(|| format!("{at}: expected a number, found {v}"))?;
    if !x.is_finite() {
        return Err(format!("{at}: non-finite number"));
    }
    Ok(x)
}

/// A JSON array of numbers or a rectangular array of arrays.
pub fn parse_element(text: &str) -> Result<Payload, String> {
    let text = read_arg(text)?;
    let value: Value = serde_json::from_str(text.trim()).map_err(|e| format!("malformed JSON: {e}"))?;
    let items = value
        .as_array()
        .ok_or_else(|| "expected a JSON array".to_string())?;
    if items.iter().all(Value::is_array) && !items.is_empty() {
        let mut rows = Vec::with_capacity(items.len());
        for (i, row) in items.iter().enumerate() {
            let row = row.as_array().expect("checked array");
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, v)| number(v, &format!("entry [{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(parsed);
        }
        let width = rows[0].len();
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            return Err(format!(
                "shape error: row {i} has {} entries, row 0 has {width}",
                rows[i].len()
            ));
        }
        return Ok(Payload::Matrix(rows));
    }
    let v = items
        .iter()
        .enumerate()
        .map(|(i, v)| number(v, &format!("entry [{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Payload::Vector(v))
}

/// An element of `V`: a vector of length `dim V`, or a matrix whose
/// row-major flattening has that length.
pub fn element_for(sys: &System, p: &Payload) -> Result<Element, String> {
    if p.len() != sys.dim_v() {
        return Err(format!(
            "shape error: {} has dim V = {}, got {} entries",
            sys.name(),
            sys.dim_v(),
            p.len()
        ));
    }
    Ok(Element(p.flatten()))
}

/// A square matrix given by rows.
pub fn square_matrix(p: &Payload, n: Option<usize>) -> Result<Matrix, String> {
    let Payload::Matrix(rows) = p else {
        return Err("expected a matrix (array of arrays)".into());
    };
    if rows.len() != rows[0].len() {
        return Err(format!("shape error: {}×{} matrix is not square", rows.len(), rows[0].len()));
    }
    if let Some(n) = n {
        if rows.len() != n {
            return Err(format!("shape error: expected a {n}×{n} matrix, got {0}×{0}", rows.len()));
        }
    }
    Matrix::from_rows(rows).map_err(|e| e.to_string())
}

/// Resolves `--system`: a JSON instance spec (optionally `@file`), or a
/// kind name combined with `dim`.
/// Without `dim`, the size is inferred from an element payload `hint` or,
/// failing that, from the side of a linear map `map_hint`.
pub fn resolve_system(
    text: &str,
    dim: Option<usize>,
    hint: Option<&Payload>,
    map_hint: Option<&Payload>,
) -> Result<System, String> {
    let text = read_arg(text)?;
    let trimmed = text.trim();
    let spec = if trimmed.starts_with('{') {
        serde_json::from_str::<InstanceSpec>(trimmed).map_err(|e| format!("bad instance spec: {e}"))?
    } else {
        let infer = |kind: &str| -> usize {
            dim.or_else(|| hint.map(|p| inferred_dim(kind, p.len())))
                .or_else(|| match map_hint {
                    Some(Payload::Matrix(rows)) => Some(inferred_dim(kind, rows.len())),
                    _ => None,
                })
                .unwrap_or(3)
        };
        match trimmed {
            "rn-down" => InstanceSpec::RnDown { dim: infer(trimmed) },
            "rn-abs" => InstanceSpec::RnAbs { dim: infer(trimmed) },
            "norm-system" => InstanceSpec::NormSystem { dim: infer(trimmed) },
            "sym" => InstanceSpec::Sym { dim: infer(trimmed) },
            "sing-val" => InstanceSpec::SingVal { dim: infer(trimmed) },
            "spin" => InstanceSpec::Spin { dim: infer(trimmed) },
            "finite-seq" => InstanceSpec::FiniteSeq { dim: infer(trimmed) },
            "subspace-counterexample" => InstanceSpec::SubspaceCounterexample,
            "discrete" | "twisted" | "product" => {
                return Err(format!("{trimmed} needs a JSON instance spec, e.g. {}", example_spec(trimmed)))
            }
            other => return Err(format!("unknown system {other:?}")),
        }
    };
    make_system(&spec).map_err(|e| e.to_string())
}

/// Instance size from `dim V`.
fn inferred_dim(kind: &str, dim_v: usize) -> usize {
    match kind {
        "sym" | "sing-val" => (dim_v as f64).sqrt().round() as usize,
        "spin" => dim_v.saturating_sub(1),
        _ => dim_v,
    }
}

fn example_spec(kind: &str) -> &'static str {
    match kind {
        "discrete" => r#"{"kind":"discrete","isometry":[[0,1],[1,0]]}"#,
        "twisted" => r#"{"kind":"twisted","inner":{"kind":"rn-down","dim":3}}"#,
        _ => r#"{"kind":"product","parts":[{"kind":"rn-down","dim":2},{"kind":"sym","dim":3}]}"#,
    }
}
