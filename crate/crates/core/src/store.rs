//! Text file formats for layers, classes, upward tables and result records.
//!
//! ```text
//! mbf-layer n=<n> count=<d_n>           then one hex element per line, ascending
//! mbf-classes n=<n> count=<r_n>         then "<hex> <gamma>" per line
//! mbf-retable n=<n> mode=upward count=<k>  then "<hex> <count>" per line
//! lambda n=<n> method=<m> value=<decimal> base_n=<n> seconds=<float>
//! ```

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::budget::DEDEKIND;
use crate::counting::{LambdaResult, Method};
use crate::error::{Error, Result};
use crate::intervals::UpwardTable;
use crate::layer::Layer;
use crate::mbf::{Mbf, MAX_VARS};
use crate::orbits::OrbitClass;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Splits `tag k=v k=v ...` and checks the tag.
fn header_fields(line: &str, tag: &str, line_no: usize) -> Result<HashMap<String, String>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(parse_err(
            line_no,
            format!("expected header starting with {tag:?}"),
        ));
    }
    parts
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| parse_err(line_no, format!("malformed field {kv:?}")))
        })
        .collect()
}

fn field<T: std::str::FromStr>(
    fields: &HashMap<String, String>,
    key: &str,
    line: usize,
) -> Result<T> {
    fields
        .get(key)
        .ok_or_else(|| parse_err(line, format!("missing field {key}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("invalid value for {key}")))
}

fn read_header<R: BufRead>(
    lines: &mut std::io::Lines<R>,
    tag: &str,
) -> Result<HashMap<String, String>> {
    let first = lines.next().ok_or_else(|| parse_err(1, "empty file"))??;
    header_fields(&first, tag, 1)
}

fn check_n(n: usize) -> Result<usize> {
    if n > MAX_VARS {
        return Err(Error::WidthOverflow { n, max: MAX_VARS });
    }
    Ok(n)
}

pub fn write_layer<W: Write>(mut w: W, layer: &Layer) -> Result<()> {
    writeln!(w, "mbf-layer n={} count={}", layer.n(), layer.len())?;
    for m in layer.iter() {
        writeln!(w, "{}", m.to_hex())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_layer<R: BufRead>(r: R) -> Result<Layer> {
    let mut lines = r.lines();
    let header = read_header(&mut lines, "mbf-layer")?;
    let n = check_n(field(&header, "n", 1)?)?;
    let count: usize = field(&header, "count", 1)?;
    let mut elements = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let m = Mbf::from_hex(n, line.trim()).map_err(|e| parse_err(i + 2, e.to_string()))?;
        elements.push(m.word());
    }
    if elements.len() != count {
        return Err(parse_err(
            0,
            format!("header says {count} elements, found {}", elements.len()),
        ));
    }
    Layer::from_elements(n, elements)
}

/// Writes classes after checking that the orbit sizes add up to `d_n`.
pub fn write_classes<W: Write>(mut w: W, n: usize, classes: &[OrbitClass]) -> Result<()> {
    let total: u128 = classes.iter().map(|c| c.gamma as u128).sum();
    if DEDEKIND.get(n) != Some(&total) {
        return Err(parse_err(
            0,
            format!("orbit sizes sum to {total}, not d_{n}"),
        ));
    }
    writeln!(w, "mbf-classes n={n} count={}", classes.len())?;
    for c in classes {
        writeln!(w, "{} {}", c.representative.to_hex(), c.gamma)?;
    }
    w.flush()?;
    Ok(())
}

fn hex_and_count(n: usize, line: &str, line_no: usize) -> Result<(Mbf, u64)> {
    let (hex, num) = line
        .split_once(' ')
        .ok_or_else(|| parse_err(line_no, "expected \"<hex> <decimal>\""))?;
    let m = Mbf::from_hex(n, hex).map_err(|e| parse_err(line_no, e.to_string()))?;
    let v = num
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, format!("invalid count {num:?}")))?;
    Ok((m, v))
}

pub fn read_classes<R: BufRead>(r: R) -> Result<(usize, Vec<OrbitClass>)> {
    let mut lines = r.lines();
    let header = read_header(&mut lines, "mbf-classes")?;
    let n = check_n(field(&header, "n", 1)?)?;
    let count: usize = field(&header, "count", 1)?;
    let mut classes = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let (representative, gamma) = hex_and_count(n, &line?, i + 2)?;
        classes.push(OrbitClass {
            representative,
            gamma,
        });
    }
    if classes.len() != count {
        return Err(parse_err(
            0,
            format!("header says {count} classes, found {}", classes.len()),
        ));
    }
    Ok((n, classes))
}

pub fn write_upward<W: Write>(mut w: W, table: &UpwardTable) -> Result<()> {
    writeln!(
        w,
        "mbf-retable n={} mode=upward count={}",
        table.n,
        table.entries.len()
    )?;
    for (m, c) in &table.entries {
        writeln!(w, "{} {c}", m.to_hex())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_upward<R: BufRead>(r: R) -> Result<UpwardTable> {
    let mut lines = r.lines();
    let header = read_header(&mut lines, "mbf-retable")?;
    let n = check_n(field(&header, "n", 1)?)?;
    let mode: String = field(&header, "mode", 1)?;
    if mode != "upward" {
        return Err(parse_err(1, format!("unsupported table mode {mode:?}")));
    }
    let count: usize = field(&header, "count", 1)?;
    let entries = lines
        .enumerate()
        .map(|(i, line)| hex_and_count(n, &line?, i + 2))
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != count {
        return Err(parse_err(
            0,
            format!("header says {count} entries, found {}", entries.len()),
        ));
    }
    Ok(UpwardTable { n, entries })
}

/// Parses a result record line. `base_lambda` is not part of the record.
pub fn parse_record(line: &str) -> Result<LambdaResult> {
    let f = header_fields(line.trim(), "lambda", 1)?;
    let method: String = field(&f, "method", 1)?;
    Ok(LambdaResult {
        n_target: field(&f, "n", 1)?,
        method: method.parse::<Method>().map_err(|e| parse_err(1, e))?,
        value: field(&f, "value", 1)?,
        base_n: field(&f, "base_n", 1)?,
        seconds: field(&f, "seconds", 1)?,
        base_lambda: None,
    })
}
