//! Text formats for tables and codes.
//!
//! Both formats are deliberately diff-able. A table file is whitespace
//! separated: the domain size first, then the n values; `#` starts a comment
//! to end of line. A code file is line oriented:
//!
//! ```text
//! FFC 1 <perm|func>
//! N <n> L <ℓ>
//! <sigma: n integers>
//! <starts: ℓ+1 integers>
//! <aux: ℓ integers>
//! ```
//!
//! σ⁻¹ and the dense component index are rebuilt on load rather than stored,
//! and every structural invariant is re-validated.

use std::io::{Read, Write};

use crate::codec::{CodeKind, FastForwardCode, IndexMode};
use crate::error::{Error, Result};
use crate::table::FunctionTable;

/// Reads a table file: first token the domain size, then exactly that many
/// values; `#` comments run to end of line.
pub fn read_table<R: Read>(mut source: R) -> Result<FunctionTable> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut tokens = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split_whitespace() {
            tokens.push((ln + 1, tok));
        }
    }
    let mut iter = tokens.into_iter();
    let (line, tok) = iter
        .next()
        .ok_or(Error::ParseError {
            line: 1,
            token: String::new(),
        })?;
    let n: usize = parse_token(line, tok)?;
    let mut values = Vec::new();
    for (line, tok) in iter {
        values.push(parse_token(line, tok)?);
    }
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: values.len(),
        });
    }
    FunctionTable::new(n, values)
}

/// Writes a table in the format [`read_table`] accepts.
pub fn write_table<W: Write>(t: &FunctionTable, mut destination: W) -> Result<()> {
    writeln!(destination, "{}", t.n())?;
    write_ints(&mut destination, t.values())?;
    Ok(())
}

/// Writes a code file. σ⁻¹ and the component index are not serialized.
pub fn write_code<W: Write>(code: &FastForwardCode, mut destination: W) -> Result<()> {
    let kind = match code.kind() {
        CodeKind::Permutation => "perm",
        CodeKind::General => "func",
    };
    writeln!(destination, "FFC 1 {kind}")?;
    writeln!(destination, "N {} L {}", code.n(), code.num_components())?;
    write_ints(&mut destination, code.sigma())?;
    write_ints(&mut destination, code.starts())?;
    write_ints(&mut destination, code.aux())?;
    Ok(())
}

/// Reads a code file, rebuilding σ⁻¹ and a dense component index, and
/// re-validating every invariant of the code.
pub fn read_code<R: Read>(mut source: R) -> Result<FastForwardCode> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut lines = text.lines();

    let magic = lines.next().unwrap_or("");
    let kind = match magic {
        "FFC 1 perm" => CodeKind::Permutation,
        "FFC 1 func" => CodeKind::General,
        other => return Err(Error::BadMagic(other.to_string())),
    };

    let header = lines.next().unwrap_or("");
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "N" || fields[2] != "L" {
        return Err(Error::ParseError {
            line: 2,
            token: header.to_string(),
        });
    }
    let n: usize = parse_token(2, fields[1])?;
    let ell: usize = parse_token(2, fields[3])?;

    let sigma = parse_int_line(lines.next(), 3)?;
    let starts = parse_int_line(lines.next(), 4)?;
    let aux = parse_int_line(lines.next(), 5)?;
    if lines.any(|rest| !rest.trim().is_empty()) {
        return Err(Error::InvariantViolation("trailing content after the aux line"));
    }

    if sigma.len() != n {
        return Err(Error::InvariantViolation(
            "sigma length must equal the declared domain size",
        ));
    }
    if starts.len() != ell + 1 {
        return Err(Error::InvariantViolation(
            "starts length must be one more than the declared component count",
        ));
    }
    if aux.len() != ell {
        return Err(Error::InvariantViolation(
            "aux length must equal the declared component count",
        ));
    }
    FastForwardCode::from_code_parts(sigma, starts, aux, kind, IndexMode::Dense)
}

fn parse_token<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::ParseError {
        line,
        token: tok.to_string(),
    })
}

fn parse_int_line(line: Option<&str>, number: usize) -> Result<Vec<usize>> {
    let line = line.ok_or(Error::ParseError {
        line: number,
        token: String::new(),
    })?;
    line.split_whitespace()
        .map(|tok| parse_token(number, tok))
        .collect()
}

fn write_ints<W: Write>(w: &mut W, values: &[usize]) -> std::io::Result<()> {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            w.write_all(b" ")?;
        }
        write!(w, "{v}")?;
    }
    w.write_all(b"\n")
}
