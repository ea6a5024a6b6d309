//! JSON schemas: polytopes and lattices on disk, reports and certificates on
//! the way out. Every exact rational travels as a `[numerator, denominator]`
//! integer pair; decimal renderings are companions, never the source of
//! truth.

use std::fmt::Write as _;
use std::path::Path;

use num::{BigInt, Zero};
use serde_json::{json, Map, Value};

use crate::cover::verify::{CoveringCertificate, ScaleBracket, Verdict};
use crate::cover::MultiplicityEstimate;
use crate::error::GeomError;
use crate::geom::convex_hull;
use crate::geom::radical::RadicalSum;
use crate::lattice::Lattice;
use crate::linalg::{Matrix, Vector};
use crate::optim::SearchResult;
use crate::ratext::exact_decimal;
use crate::report::{AuditReport, AuditValue};
use crate::scalar::Scalar;
use crate::{Rat, RatVPolytope, RatVector};

/// Schema or syntax problem in an input file, with position info.
#[derive(Debug, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

fn err(path: &str, message: impl Into<String>) -> ParseError {
    ParseError {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn int_json(i: &BigInt) -> Value {
    match i64::try_from(i.clone()) {
        Ok(v) => json!(v),
        Err(_) => json!(i.to_string()),
    }
}

pub fn rat_json(r: &Rat) -> Value {
    Value::Array(vec![int_json(r.numer()), int_json(r.denom())])
}

/// `[num, den]` plus a decimal rendering: exact when terminating, otherwise
/// a float approximation.
pub fn rat_json_with_decimal(r: &Rat) -> Value {
    json!({
        "frac": rat_json(r),
        "decimal": exact_decimal(r).unwrap_or_else(|| format!("{}", r.to_f64())),
    })
}

pub fn point_json(p: &RatVector) -> Value {
    Value::Array(p.0.iter().map(rat_json).collect())
}

pub fn radical_json(r: &RadicalSum) -> Value {
    let terms: Vec<Value> = r
        .terms()
        .map(|(rad, coef)| {
            json!({
                "coef": rat_json(coef),
                "radicand": int_json(rad),
            })
        })
        .collect();
    json!({ "radical_terms": terms, "decimal": r.to_f64() })
}

fn int_from_json(v: &Value, path: &str, what: &str) -> Result<BigInt, ParseError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(err(path, format!("{what}: expected an integer, got {n}")))
            }
        }
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| err(path, format!("{what}: bad integer string {s:?}"))),
        other => Err(err(path, format!("{what}: expected an integer, got {other}"))),
    }
}

fn rat_from_json(v: &Value, path: &str, what: &str) -> Result<Rat, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| err(path, format!("{what}: expected [num, den] pair")))?;
    if arr.len() != 2 {
        return Err(err(
            path,
            format!("{what}: expected [num, den] pair, got {} entries", arr.len()),
        ));
    }
    let num = int_from_json(&arr[0], path, &format!("{what} numerator"))?;
    let den = int_from_json(&arr[1], path, &format!("{what} denominator"))?;
    if den.is_zero() {
        return Err(err(path, format!("{what}: denominator is zero")));
    }
    Ok(Rat::new(num, den))
}

fn root_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, ParseError> {
    v.as_object()
        .ok_or_else(|| err(path, "expected a JSON object at the top level"))
}

fn read_json(path: &Path) -> Result<Value, ParseError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| err(&display, format!("{e}")))?;
    serde_json::from_str(&text).map_err(|e| {
        err(
            &display,
            format!("JSON syntax error at line {}, column {}: {e}", e.line(), e.column()),
        )
    })
}

/// Load `{"dim": n, "vertices": [[[num,den], ...], ...]}`; the vertex list
/// is canonicalized to the extreme points on load.
pub fn load_polytope(path: &Path) -> Result<RatVPolytope, ParseError> {
    let display = path.display().to_string();
    let value = read_json(path)?;
    let obj = root_object(&value, &display)?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| err(&display, "missing positive integer field \"dim\""))? as usize;
    let verts_json = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| err(&display, "missing array field \"vertices\""))?;
    let mut vertices: Vec<RatVector> = Vec::with_capacity(verts_json.len());
    for (i, vj) in verts_json.iter().enumerate() {
        let coords = vj
            .as_array()
            .ok_or_else(|| err(&display, format!("vertices[{i}]: expected an array")))?;
        if coords.len() != dim {
            return Err(err(
                &display,
                format!("vertices[{i}]: expected {dim} coordinates, got {}", coords.len()),
            ));
        }
        let mut v = Vec::with_capacity(dim);
        for (j, c) in coords.iter().enumerate() {
            v.push(rat_from_json(c, &display, &format!("vertices[{i}][{j}]"))?);
        }
        vertices.push(Vector(v));
    }
    if vertices.is_empty() {
        return Err(err(&display, "vertex list is empty"));
    }
    match convex_hull(&vertices) {
        Ok(hull) => Ok(hull),
        Err(GeomError::DegenerateInput(msg)) => Err(err(
            &display,
            format!("polytope is not full-dimensional: {msg}"),
        )),
        Err(e) => Err(err(&display, format!("{e}"))),
    }
}

pub fn polytope_json(p: &RatVPolytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": Value::Array(p.vertices().iter().map(point_json).collect()),
    })
}

/// Load `{"basis": [[[num,den], ...], ...]}` (rows are generators).
pub fn load_lattice(path: &Path) -> Result<Lattice, ParseError> {
    let display = path.display().to_string();
    let value = read_json(path)?;
    let obj = root_object(&value, &display)?;
    let rows_json = obj
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| err(&display, "missing array field \"basis\""))?;
    let n = rows_json.len();
    let mut rows: Vec<RatVector> = Vec::with_capacity(n);
    for (i, rj) in rows_json.iter().enumerate() {
        let coords = rj
            .as_array()
            .ok_or_else(|| err(&display, format!("basis[{i}]: expected an array")))?;
        if coords.len() != n {
            return Err(err(
                &display,
                format!("basis[{i}]: expected {n} entries, got {}", coords.len()),
            ));
        }
        let mut v = Vec::with_capacity(n);
        for (j, c) in coords.iter().enumerate() {
            v.push(rat_from_json(c, &display, &format!("basis[{i}][{j}]"))?);
        }
        rows.push(Vector(v));
    }
    Lattice::new(Matrix::from_rows(rows))
        .map_err(|e| err(&display, format!("bad lattice basis: {e}")))
}

pub fn lattice_json(l: &Lattice) -> Value {
    json!({
        "basis": Value::Array(
            l.basis().rows().iter().map(point_json).collect()
        ),
        "det": rat_json_with_decimal(l.det()),
    })
}

pub fn audit_value_json(v: &AuditValue) -> Value {
    match v {
        AuditValue::Rat(r) => rat_json(r),
        AuditValue::Int(i) => int_json(i),
        AuditValue::Count(c) => json!(c),
        AuditValue::Radical(r) => radical_json(r),
        AuditValue::Float(f) => json!(f),
        AuditValue::Text(t) => json!(t),
    }
}

pub fn report_json(report: &AuditReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "check": r.check,
                "lhs": audit_value_json(&r.lhs),
                "rhs": audit_value_json(&r.rhs),
                "lhs_decimal": r.lhs.to_f64(),
                "rhs_decimal": r.rhs.to_f64(),
                "satisfied": r.satisfied,
                "context": r.context,
            })
        })
        .collect();
    json!({
        "rows": rows,
        "all_satisfied": report.all_satisfied(),
    })
}

pub fn certificate_json(cert: &CoveringCertificate) -> Value {
    let mut obj = Map::new();
    obj.insert("verdict".into(), json!(cert.verdict.name()));
    obj.insert("depth_used".into(), json!(cert.depth_used));
    obj.insert(
        "candidates".into(),
        Value::Array(cert.candidate_translates.iter().map(point_json).collect()),
    );
    match &cert.verdict {
        Verdict::Uncovered { witness } => {
            obj.insert("witness".into(), point_json(witness));
        }
        Verdict::Inconclusive { open_boxes } => {
            obj.insert(
                "open_boxes".into(),
                Value::Array(
                    open_boxes
                        .iter()
                        .map(|b| json!({ "level": b.level, "corner": b.corner }))
                        .collect(),
                ),
            );
        }
        Verdict::Impossible { volume, det } => {
            obj.insert("volume".into(), rat_json(volume));
            obj.insert("det".into(), rat_json(det));
        }
        Verdict::Covered => {}
    }
    Value::Object(obj)
}

pub fn estimate_json(est: &MultiplicityEstimate, det: &Rat) -> Value {
    json!({
        "mean_inverse_multiplicity": est.mean_inverse_multiplicity,
        "std_error": est.std_error,
        "samples": est.samples,
        "estimated_det": est.estimated_det,
        "exact_det": rat_json_with_decimal(det),
        "abs_error": (est.estimated_det - det.to_f64()).abs(),
    })
}

pub fn bracket_json(b: &ScaleBracket) -> Value {
    json!({
        "lo": rat_json_with_decimal(&b.lo),
        "hi": rat_json_with_decimal(&b.hi),
        "hi_certificate": certificate_json(&b.hi_certificate),
        "evaluations": b.evaluations,
    })
}

pub fn search_result_json(r: &SearchResult) -> Value {
    json!({
        "best_basis": Value::Array(r.best_basis.rows().iter().map(point_json).collect()),
        "best_density": rat_json_with_decimal(&r.best_density),
        "certificate": certificate_json(&r.certificate),
        "audits": report_json(&r.audits),
        "restarts_certified": r.restarts_certified,
        "evaluations": r.history.len(),
    })
}

/// Optimizer history as two-column CSV.
pub fn history_csv(history: &[(u64, f64)]) -> String {
    let mut out = String::from("evaluation,best_density\n");
    for (i, v) in history {
        let _ = writeln!(out, "{i},{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::standard_simplex;
    use num::One;

    #[test]
    fn polytope_roundtrip_through_json() {
        let t2 = standard_simplex::<Rat>(2);
        let dir = std::env::temp_dir().join("cover_io_test_poly.json");
        std::fs::write(&dir, serde_json::to_string(&polytope_json(&t2)).unwrap()).unwrap();
        let back = load_polytope(&dir).unwrap();
        assert!(back.vertex_set_eq(&t2));
    }

    #[test]
    fn big_integers_become_strings() {
        let big: BigInt = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
        assert!(int_json(&big).is_string());
        assert_eq!(int_json(&BigInt::from(7)), json!(7));
        let r = Rat::new(big.clone(), BigInt::one());
        let parsed = rat_from_json(&rat_json(&r), "test", "x").unwrap();
        assert_eq!(parsed, r);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(rat_from_json(&json!([1, 0]), "test", "x").is_err());
    }

    #[test]
    fn malformed_polytope_reports_position() {
        let dir = std::env::temp_dir().join("cover_io_test_bad.json");
        std::fs::write(&dir, r#"{"dim": 2, "vertices": [[[0,1],[0,1]], [[1],[0,1]]]}"#).unwrap();
        let e = load_polytope(&dir).unwrap_err();
        assert!(e.message.contains("vertices[1]"), "{e}");
    }
}
