//! Matrix exchange formats.
//!
//! Text: first line `rows cols`, then the entries in row-major order separated
//! by whitespace. JSON: `{"rows":r,"cols":c,"data":[...]}` with row-major data;
//! entries outside the `i64` range are written as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::group::{big_from_json, big_to_json};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

pub fn to_text(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(s: &str) -> Result<IntMatrix> {
    let mut tokens = s.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad {what}")))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let data = tokens
        .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            rows * cols,
            data.len()
        )));
    }
    IntMatrix::from_data(rows, cols, data)
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<serde_json::Value>,
}

pub fn to_json(m: &IntMatrix) -> String {
    serde_json::to_string(&JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        data: m.entries().iter().map(big_to_json).collect(),
    })
    .expect("matrix serializes")
}

pub fn from_json(s: &str) -> Result<IntMatrix> {
    let j: JsonMatrix = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let data = j
        .data
        .iter()
        .map(|v| big_from_json(v).ok_or_else(|| Error::Parse(format!("bad entry {v}"))))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_data(j.rows, j.cols, data).map_err(|e| Error::Parse(e.to_string()))
}

/// Accepts either format, choosing by the first non-space character.
pub fn parse_matrix(s: &str) -> Result<IntMatrix> {
    if s.trim_start().starts_with('{') {
        from_json(s)
    } else {
        from_text(s)
    }
}
