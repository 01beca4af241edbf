//! JSON presentations of algebras, quantum groups, hypergroups, functionals and reports.
//!
//! Complex numbers are `[re, im]` pairs. An algebra is
//! `{"dim", "mul": [[i, j, k, re, im], …], "unit": [[re, im], …], "invol": d×d}`,
//! where `invol` is the coordinate matrix of the conjugate-linear involution
//! composed with conjugation. A quantum group adds sparse
//! `"comul": [[row, col, re, im], …]` with `row = j*d + k`, `"counit"`,
//! dense `"antipode"` and an optional `"haar"`. Hypergroups carry `"kappa"` in
//! place of `"antipode"`, a `"haar"` and `"kind": "hypergroup"`. A group is
//! `{"kind": "function_algebra" | "group_algebra", "table": [[…], …]}`.

use crate::algebra::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::groups::FiniteGroup;
use crate::hypergroup::Hypergroup;
use crate::linalg::{c, CMatrix, CVector, C64};
use crate::quantum_group::{function_algebra, group_algebra, QuantumGroup};
use crate::report::Report;
use serde_json::{json, Map, Value};

fn malformed(field: &str, msg: &str) -> Error {
    Error::Malformed(format!("field `{field}`: {msg}"))
}

fn get<'a>(obj: &'a Map<String, Value>, field: &str) -> Result<&'a Value> {
    obj.get(field).ok_or_else(|| malformed(field, "missing"))
}

fn as_array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(field, "expected an array"))
}

fn as_f64(v: &Value, field: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| malformed(field, "expected a number"))
}

fn as_index(v: &Value, field: &str, bound: usize) -> Result<usize> {
    let i = v.as_u64().ok_or_else(|| malformed(field, "expected a nonnegative integer"))? as usize;
    if i >= bound {
        return Err(malformed(field, &format!("index {i} out of range (< {bound})")));
    }
    Ok(i)
}

fn parse_complex(v: &Value, field: &str) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(c(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(a) if a.len() == 2 => Ok(c(as_f64(&a[0], field)?, as_f64(&a[1], field)?)),
        _ => Err(malformed(field, "expected [re, im]")),
    }
}

fn parse_vector(v: &Value, field: &str, d: usize) -> Result<CVector> {
    let a = as_array(v, field)?;
    if a.len() != d {
        return Err(malformed(field, &format!("expected {d} entries, found {}", a.len())));
    }
    let mut out = CVector::zeros(d);
    for (i, x) in a.iter().enumerate() {
        out[i] = parse_complex(x, &format!("{field}[{i}]"))?;
    }
    Ok(out)
}

fn parse_dense(v: &Value, field: &str, rows: usize, cols: usize) -> Result<CMatrix> {
    let a = as_array(v, field)?;
    if a.len() != rows {
        return Err(malformed(field, &format!("expected {rows} rows, found {}", a.len())));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (i, row) in a.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let rv = as_array(row, &f)?;
        if rv.len() != cols {
            return Err(malformed(&f, &format!("expected {cols} entries, found {}", rv.len())));
        }
        for (j, x) in rv.iter().enumerate() {
            m[(i, j)] = parse_complex(x, &format!("{f}[{j}]"))?;
        }
    }
    Ok(m)
}

fn parse_sparse(v: &Value, field: &str, rows: usize, cols: usize) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(rows, cols);
    for (t, e) in as_array(v, field)?.iter().enumerate() {
        let f = format!("{field}[{t}]");
        let a = as_array(e, &f)?;
        if a.len() != 4 {
            return Err(malformed(&f, "expected [row, col, re, im]"));
        }
        let i = as_index(&a[0], &f, rows)?;
        let j = as_index(&a[1], &f, cols)?;
        m[(i, j)] += c(as_f64(&a[2], &f)?, as_f64(&a[3], &f)?);
    }
    Ok(m)
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Malformed("top level: expected an object".into()))
}

pub fn parse_algebra(v: &Value) -> Result<AlgebraPresentation> {
    let obj = object(v)?;
    let d = get(obj, "dim")?.as_u64().ok_or_else(|| malformed("dim", "expected a positive integer"))? as usize;
    if d == 0 {
        return Err(malformed("dim", "must be positive"));
    }
    let mut entries = Vec::new();
    for (t, e) in as_array(get(obj, "mul")?, "mul")?.iter().enumerate() {
        let f = format!("mul[{t}]");
        let a = as_array(e, &f)?;
        if a.len() != 5 {
            return Err(malformed(&f, "expected [i, j, k, re, im]"));
        }
        entries.push((
            as_index(&a[0], &f, d)?,
            as_index(&a[1], &f, d)?,
            as_index(&a[2], &f, d)?,
            c(as_f64(&a[3], &f)?, as_f64(&a[4], &f)?),
        ));
    }
    let unit = parse_vector(get(obj, "unit")?, "unit", d)?;
    let invol = parse_dense(get(obj, "invol")?, "invol", d, d)?;
    AlgebraPresentation::new(d, entries, unit, invol)
}

fn parse_group_table(obj: &Map<String, Value>) -> Result<FiniteGroup> {
    let rows = as_array(get(obj, "table")?, "table")?;
    let n = rows.len();
    let mut table = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let f = format!("table[{i}]");
        let entries = as_array(row, &f)?;
        let parsed: Result<Vec<usize>> = entries.iter().enumerate().map(|(j, x)| as_index(x, &format!("{f}[{j}]"), n)).collect();
        table.push(parsed?);
    }
    FiniteGroup::from_table(table).map_err(|e| malformed("table", &e.to_string()))
}

/// A quantum group from JSON: a full presentation or a group table.
pub fn parse_quantum_group(text: &str) -> Result<QuantumGroup> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid JSON: {e}")))?;
    let obj = object(&v)?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("function_algebra") => return function_algebra(&parse_group_table(obj)?),
        Some("group_algebra") => return group_algebra(&parse_group_table(obj)?),
        Some("hypergroup") => return Err(malformed("kind", "a hypergroup is not a quantum group")),
        Some("quantum_group") | None => {}
        Some(other) => return Err(malformed("kind", &format!("unknown kind `{other}`"))),
    }
    let alg = parse_algebra(&v)?;
    let d = alg.dim();
    let comul = parse_sparse(get(obj, "comul")?, "comul", d * d, d)?;
    let counit = parse_vector(get(obj, "counit")?, "counit", d)?;
    let antipode = parse_dense(get(obj, "antipode")?, "antipode", d, d)?;
    let haar = obj.get("haar").map(|h| parse_vector(h, "haar", d)).transpose()?;
    QuantumGroup::new(alg, comul, counit, antipode, haar)
}

pub fn parse_hypergroup(text: &str) -> Result<Hypergroup> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid JSON: {e}")))?;
    let obj = object(&v)?;
    if obj.get("kind").and_then(Value::as_str) != Some("hypergroup") {
        return Err(malformed("kind", "expected \"hypergroup\""));
    }
    let alg = parse_algebra(&v)?;
    let d = alg.dim();
    let comul = parse_sparse(get(obj, "comul")?, "comul", d * d, d)?;
    let counit = parse_vector(get(obj, "counit")?, "counit", d)?;
    let kappa = parse_dense(get(obj, "kappa")?, "kappa", d, d)?;
    let haar = parse_vector(get(obj, "haar")?, "haar", d)?;
    Hypergroup::new(alg, comul, counit, kappa, haar)
}

/// A functional given either as a bare array or as `{"covector": […]}`.
pub fn parse_functional(text: &str, d: usize) -> Result<Functional> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid JSON: {e}")))?;
    let arr = match &v {
        Value::Object(o) => get(o, "covector")?,
        other => other,
    };
    Ok(Functional::new(parse_vector(arr, "covector", d)?))
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_json(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| complex_json(z)).collect())
}

pub fn dense_json(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

fn sparse_json(m: &CMatrix) -> Value {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z.norm() > 1e-14 {
                out.push(json!([i, j, z.re, z.im]));
            }
        }
    }
    Value::Array(out)
}

fn algebra_fields(alg: &AlgebraPresentation) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("dim".into(), json!(alg.dim()));
    m.insert(
        "mul".into(),
        Value::Array(alg.entries().map(|(i, j, k, z)| json!([i, j, k, z.re, z.im])).collect()),
    );
    m.insert("unit".into(), vector_json(alg.unit()));
    m.insert("invol".into(), dense_json(alg.invol()));
    m
}

pub fn algebra_json(alg: &AlgebraPresentation) -> Value {
    Value::Object(algebra_fields(alg))
}

pub fn quantum_group_json(qg: &QuantumGroup) -> Value {
    let mut m = algebra_fields(&qg.algebra);
    m.insert("kind".into(), json!("quantum_group"));
    m.insert("comul".into(), sparse_json(&qg.comul));
    m.insert("counit".into(), vector_json(&qg.counit));
    m.insert("antipode".into(), dense_json(&qg.antipode));
    m.insert("haar".into(), vector_json(&qg.haar));
    Value::Object(m)
}

pub fn hypergroup_json(h: &Hypergroup) -> Value {
    let mut m = algebra_fields(&h.algebra);
    m.insert("kind".into(), json!("hypergroup"));
    m.insert("comul".into(), sparse_json(&h.comul));
    m.insert("counit".into(), vector_json(&h.counit));
    m.insert("kappa".into(), dense_json(&h.kappa));
    m.insert("haar".into(), vector_json(&h.haar));
    Value::Object(m)
}

pub fn functional_json(f: &Functional) -> Value {
    vector_json(&f.covec)
}

/// Scientific notation with six significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

pub fn report_json(rep: &Report) -> Value {
    Value::Array(
        rep.checks
            .iter()
            .map(|ch| json!({"name": ch.name, "residual": sci(ch.residual), "tol": sci(ch.tol), "pass": ch.pass}))
            .collect(),
    )
}
