// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON form of a circuit.
//!
//! ```json
//! {"n": 2, "m": 2, "bands": [
//!   {"singles": [{"clifford": "H"}, {"clifford": "I"}], "cz": [[0, 1]]},
//!   {"singles": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}, {"clifford": "S"}], "cz": []}
//! ]}
//! ```
//!
//! Matrices are row-major with each entry written as `[re, im]`.

use serde_json::{json, Map, Value};

use super::{Band, Circuit, Gate};
use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::linalg::{C64, Mat2};

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| err(&format!("{path}.{key}"), "missing field"))
}

fn index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| err(path, "expected a number"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(path, format!("unknown field \"{k}\""))),
        None => Ok(()),
    }
}

fn parse_matrix(v: &Value, path: &str) -> Result<Mat2> {
    let rows = array(v, path)?;
    if rows.len() != 2 {
        return Err(err(path, "expected 2 rows"));
    }
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{r}]");
        let cols = array(row, &rp)?;
        if cols.len() != 2 {
            return Err(err(&rp, "expected 2 entries"));
        }
        for (c, entry) in cols.iter().enumerate() {
            let ep = format!("{rp}[{c}]");
            let pair = array(entry, &ep)?;
            if pair.len() != 2 {
                return Err(err(&ep, "expected [re, im]"));
            }
            m[r][c] = C64::new(
                number(&pair[0], &format!("{ep}[0]"))?,
                number(&pair[1], &format!("{ep}[1]"))?,
            );
        }
    }
    Ok(m)
}

fn parse_gate(v: &Value, path: &str) -> Result<Gate> {
    let obj = object(v, path)?;
    match (obj.get("clifford"), obj.get("matrix")) {
        (Some(name), None) => {
            reject_unknown(obj, &["clifford"], path)?;
            let p = format!("{path}.clifford");
            let s = name.as_str().ok_or_else(|| err(&p, "expected a string"))?;
            Clifford::from_name(s)
                .map(Gate::Clifford)
                .ok_or_else(|| err(&p, format!("unknown Clifford \"{s}\"")))
        }
        (None, Some(m)) => {
            reject_unknown(obj, &["matrix"], path)?;
            Gate::unitary(parse_matrix(m, &format!("{path}.matrix"))?)
        }
        _ => Err(err(path, "expected exactly one of \"clifford\" or \"matrix\"")),
    }
}

/// Parses a circuit. Schema problems report the JSON path; invariant
/// violations report the band and qubit.
pub fn parse(text: &str) -> Result<Circuit> {
    let root: Value = serde_json::from_str(text).map_err(|e| err("$", e.to_string()))?;
    let obj = object(&root, "$")?;
    reject_unknown(obj, &["n", "m", "bands"], "$")?;
    let n = index(field(obj, "n", "$")?, "$.n")?;
    let m = index(field(obj, "m", "$")?, "$.m")?;
    let raw = array(field(obj, "bands", "$")?, "$.bands")?;
    if raw.len() != m {
        return Err(err(
            "$.bands",
            format!("m is {m} but {} bands are given", raw.len()),
        ));
    }
    let mut bands = Vec::with_capacity(m);
    for (j, b) in raw.iter().enumerate() {
        let bp = format!("$.bands[{j}]");
        let bo = object(b, &bp)?;
        reject_unknown(bo, &["singles", "cz"], &bp)?;
        let sp = format!("{bp}.singles");
        let singles = array(field(bo, "singles", &bp)?, &sp)?
            .iter()
            .enumerate()
            .map(|(i, g)| parse_gate(g, &format!("{sp}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let cp = format!("{bp}.cz");
        let mut cz = Vec::new();
        for (k, pair) in array(field(bo, "cz", &bp)?, &cp)?.iter().enumerate() {
            let pp = format!("{cp}[{k}]");
            let pa = array(pair, &pp)?;
            if pa.len() != 2 {
                return Err(err(&pp, "expected a pair of qubit indices"));
            }
            cz.push((
                index(&pa[0], &format!("{pp}[0]"))?,
                index(&pa[1], &format!("{pp}[1]"))?,
            ));
        }
        bands.push(Band::new(singles, cz));
    }
    Circuit::new(n, bands)
}

fn gate_value(g: &Gate) -> Value {
    match g {
        Gate::Clifford(c) => json!({ "clifford": c.name() }),
        Gate::Unitary(m) => {
            let rows: Vec<Value> = m
                .iter()
                .map(|row| Value::Array(row.iter().map(|z| json!([z.re, z.im])).collect()))
                .collect();
            json!({ "matrix": rows })
        }
    }
}

/// Canonical JSON: fixed field order, pairs as `[lo, hi]` sorted ascending.
pub fn serialize(c: &Circuit) -> String {
    let bands: Vec<Value> = c
        .bands()
        .iter()
        .map(|b| {
            json!({
                "singles": b.singles.iter().map(gate_value).collect::<Vec<_>>(),
                "cz": b.cz.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut root = Map::new();
    root.insert("n".into(), json!(c.n()));
    root.insert("m".into(), json!(c.m()));
    root.insert("bands".into(), Value::Array(bands));
    let mut out = serde_json::to_string(&Value::Object(root)).expect("serialising a Value");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"n":2,"m":2,"bands":[
        {"singles":[{"clifford":"H"},{"clifford":"I"}],"cz":[[1,0]]},
        {"singles":[{"matrix":[[[1,0],[0,0]],[[0,0],[0,1]]]},{"clifford":"S"}],"cz":[]}]}"#;

    #[test]
    fn round_trip_is_byte_stable() {
        let c = parse(SAMPLE).unwrap();
        assert_eq!(c.band(1).cz, vec![(0, 1)]);
        let once = serialize(&c);
        let twice = serialize(&parse(&once).unwrap());
        assert_eq!(once, twice);
        assert_eq!(parse(&once).unwrap(), c);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let e = parse(r#"{"n":2,"m":1}"#).unwrap_err();
        assert!(e.to_string().starts_with("$.bands:"), "{e}");
        let e = parse(r#"{"n":1,"m":1,"bands":[{"singles":[{"clifford":"Q"}],"cz":[]}]}"#)
            .unwrap_err();
        assert!(e.to_string().starts_with("$.bands[0].singles[0].clifford"), "{e}");
        let e = parse(r#"{"n":1,"m":1,"bands":[{"singles":[{"matrix":[[1]]}],"cz":[]}]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("$.bands[0].singles[0].matrix"), "{e}");
    }

    #[test]
    fn invariant_errors_are_validation_errors() {
        let e = parse(r#"{"n":2,"m":1,"bands":[{"singles":[{"clifford":"I"},{"clifford":"I"}],"cz":[[0,1]]}]}"#)
            .unwrap_err();
        assert!(matches!(e, Error::InvalidCircuit(_)));
        assert!(e.to_string().contains("final band must have no cZ"));
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let e = parse(r#"{"n":1,"m":1,"bands":[{"singles":[{"matrix":[[[1.001,0],[0,0]],[[0,0],[1,0]]]}],"cz":[]}]}"#)
            .unwrap_err();
        assert!(matches!(e, Error::NotUnitary { .. }), "{e}");
    }
}
