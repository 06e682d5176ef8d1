//! JSON code files.
//!
//! ```json
//! {"kind": "AE", "two_J": 7, "label": "…",
//!  "basis": [[{"sign": 1, "radicand_num": "3", "radicand_den": "10"}, …], …]}
//! ```
//!
//! Radicands are written as decimal strings so arbitrarily large integers
//! survive the round trip. `sign` and `two_J` are also accepted as strings.

use std::path::Path;

use rug::Rational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codes::{parse_integer, CodeBasis, CodeKind};
use crate::error::{Error, Result};
use crate::exactnum::{Sign, SqrtRational};

#[derive(Serialize, Deserialize)]
struct EntryFile {
    sign: Value,
    radicand_num: String,
    radicand_den: String,
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    kind: CodeKind,
    #[serde(rename = "two_J")]
    two_j: Value,
    #[serde(default)]
    label: String,
    basis: Vec<Vec<EntryFile>>,
}

fn small_int(v: &Value, what: &str) -> Result<i64> {
    match v {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| Error::Format(format!("{what} must be an integer, got {v}")))
}

fn entry_to_json(c: &SqrtRational) -> EntryFile {
    EntryFile {
        sign: Value::from(c.sign().as_i32()),
        radicand_num: c.radicand().numer().to_string(),
        radicand_den: c.radicand().denom().to_string(),
    }
}

fn entry_from_json(e: &EntryFile) -> Result<SqrtRational> {
    let sign = Sign::from_i32(small_int(&e.sign, "sign")? as i32)
        .ok_or_else(|| Error::Format("sign must be -1, 0 or 1".into()))?;
    let num = parse_integer(&e.radicand_num)?;
    let den = parse_integer(&e.radicand_den)?;
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    let r = Rational::from((num, den));
    SqrtRational::new(sign, r).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_json(c: &CodeBasis) -> String {
    let file = CodeFile {
        kind: c.kind(),
        two_j: Value::from(c.two_j()),
        label: c.label().to_string(),
        basis: c
            .basis()
            .iter()
            .map(|v| v.iter().map(entry_to_json).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("code files always serialize")
}

pub fn from_json(text: &str) -> Result<CodeBasis> {
    let file: CodeFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let two_j = small_int(&file.two_j, "two_J")?;
    let two_j = u32::try_from(two_j)
        .map_err(|_| Error::Format(format!("two_J out of range: {two_j}")))?;
    let basis = file
        .basis
        .iter()
        .map(|v| v.iter().map(entry_from_json).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    CodeBasis::new(file.kind, two_j, file.label, basis)
}

pub fn read_code(path: &Path) -> Result<CodeBasis> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write_code(path: &Path, c: &CodeBasis) -> Result<()> {
    std::fs::write(path, to_json(c) + "\n")?;
    Ok(())
}
