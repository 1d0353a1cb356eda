//! Line-oriented pair files.
//!
//! ```text
//! # ivconform pairs v1
//! # generator: interval-conform 0.1.0
//! # function: sin
//! # format: b64
//! # seed: 42
//! # count: 1
//! sin b64 [0x0p+0,0x1.4p+3] [-0x1p+0,0x1p+0] [-0x1.0000000000001p+0,0x1.0000000000001p+0] # special
//! ```
//!
//! A record is the function name, the format token, one interval per
//! argument, `y`, an optional `y′`, and an optional `# tag`. The header is
//! optional when reading; when `count` is present the number of records
//! must match it.

use std::io::{self, BufRead, Write};

use crate::conformance::TestingPair;
use crate::format::Format;
use crate::function::FunctionId;
use crate::hexfloat::{format_interval, parse_interval};

pub const MAGIC: &str = "# ivconform pairs v1";
pub const GENERATOR: &str = concat!("interval-conform ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairHeader {
    pub generator: Option<String>,
    /// A function name, or `mixed`.
    pub function: Option<String>,
    /// A format token, or `mixed`.
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFile {
    pub header: PairHeader,
    pub pairs: Vec<TestingPair>,
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn common<'a>(mut names: impl Iterator<Item = &'a str>) -> String {
    match names.next() {
        None => "none".to_string(),
        Some(first) => {
            if names.all(|n| n == first) {
                first.to_string()
            } else {
                "mixed".to_string()
            }
        }
    }
}

/// Writes a header and one record per pair.
pub fn write_pairs(w: &mut impl Write, pairs: &[TestingPair], seed: Option<u64>) -> io::Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "# generator: {GENERATOR}")?;
    writeln!(w, "# function: {}", common(pairs.iter().map(|p| p.f.name())))?;
    writeln!(w, "# format: {}", common(pairs.iter().map(|p| p.format().token())))?;
    if let Some(s) = seed {
        writeln!(w, "# seed: {s}")?;
    }
    writeln!(w, "# count: {}", pairs.len())?;
    for p in pairs {
        writeln!(w, "{}", format_record(p))?;
    }
    Ok(())
}

pub fn format_record(p: &TestingPair) -> String {
    let mut s = format!("{} {}", p.f, p.format());
    for a in &p.args {
        s.push(' ');
        s.push_str(&format_interval(a));
    }
    s.push(' ');
    s.push_str(&format_interval(&p.y));
    if let Some(yp) = &p.y_prime {
        s.push(' ');
        s.push_str(&format_interval(yp));
    }
    if !p.tag.is_empty() {
        s.push_str(" # ");
        s.push_str(&p.tag);
    }
    s
}

pub fn parse_record(text: &str) -> Result<TestingPair, String> {
    let (body, tag) = match text.split_once('#') {
        Some((b, t)) => (b, t.trim()),
        None => (text, ""),
    };
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let [name, fmt, rest @ ..] = tokens.as_slice() else {
        return Err("expected `<function> <format> <intervals…>`".to_string());
    };
    let f: FunctionId = name.parse().map_err(|e| format!("{e}"))?;
    let format: Format = fmt.parse().map_err(|e| format!("{e}"))?;
    let n = f.arity();
    if rest.len() != n + 1 && rest.len() != n + 2 {
        return Err(format!(
            "{f} takes {n} argument(s): expected {} or {} intervals, found {}",
            n + 1,
            n + 2,
            rest.len()
        ));
    }
    let parse = |t: &str| parse_interval(t, format).map_err(|e| format!("{e}"));
    let args = rest[..n].iter().map(|t| parse(t)).collect::<Result<Vec<_>, _>>()?;
    let y = parse(rest[n])?;
    let y_prime = rest.get(n + 1).map(|t| parse(t)).transpose()?;
    if let Some(yp) = &y_prime {
        if !y.is_subset(yp) {
            return Err(format!("y {y} is not inside y' {yp}"));
        }
    }
    Ok(TestingPair {
        f,
        args,
        y,
        y_prime,
        tag: tag.to_string(),
    })
}

fn header_field(header: &mut PairHeader, line: &str) -> Result<(), String> {
    let Some((key, value)) = line.trim_start_matches('#').split_once(':') else {
        return Ok(());
    };
    let value = value.trim();
    match key.trim() {
        "generator" => header.generator = Some(value.to_string()),
        "function" => header.function = Some(value.to_string()),
        "format" => header.format = Some(value.to_string()),
        "seed" => header.seed = Some(value.parse().map_err(|_| format!("bad seed `{value}`"))?),
        "count" => header.count = Some(value.parse().map_err(|_| format!("bad count `{value}`"))?),
        _ => {}
    }
    Ok(())
}

/// Reads a pair file. Blank lines and `#` comment lines are skipped; comment
/// lines before the first record are read as header fields.
pub fn read_pairs(r: impl BufRead) -> Result<PairFile, ParseError> {
    let mut header = PairHeader::default();
    let mut pairs = Vec::new();
    let mut last = 0;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        last = n;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('#') {
            if pairs.is_empty() {
                header_field(&mut header, t).map_err(|reason| ParseError::Syntax { line: n, reason })?;
            }
            continue;
        }
        let pair = parse_record(t).map_err(|reason| ParseError::Syntax { line: n, reason })?;
        if let Some(fmt) = header.format.as_deref() {
            if fmt != "mixed" && fmt != pair.format().token() {
                return Err(ParseError::Syntax {
                    line: n,
                    reason: format!("record format {} differs from header format {fmt}", pair.format()),
                });
            }
        }
        pairs.push(pair);
    }
    if let Some(count) = header.count {
        if count != pairs.len() {
            return Err(ParseError::Syntax {
                line: last + 1,
                reason: format!("header announces {count} records, found {}", pairs.len()),
            });
        }
    }
    Ok(PairFile { header, pairs })
}

pub fn read_pairs_str(text: &str) -> Result<PairFile, ParseError> {
    read_pairs(text.as_bytes())
}
