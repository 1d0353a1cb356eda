//! Line-oriented wire protocol between the harness and an adapter process.
//!
//! ```text
//! harness → adapter   HELLO
//! adapter → harness   HELLO <name>
//!                     FORMATS <format>...
//!                     FUNCTIONS <fn>...
//!                     MODE <fn> <level>        (one line per function)
//!                     REENTRANT yes|no
//!                     READY
//! harness → adapter   EVAL <fn> <format> <interval>...
//! adapter → harness   RES <interval>  |  ERR <message>
//! harness → adapter   BYE
//! ```
//!
//! Intervals use the pair-file hex encoding, including `[empty]` and
//! `[entire]`. Every `EVAL` gets exactly one reply line.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use crate::adapters::{Capabilities, Evaluator};
use crate::conformance::Level;
use crate::format::Format;
use crate::function::FunctionId;
use crate::hexfloat::{format_interval, parse_interval};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("handshake: {0}")]
    Handshake(String),
    #[error("malformed request: {0}")]
    Request(String),
    #[error("malformed response: {0}")]
    Response(String),
}

/// The lines an adapter sends in reply to `HELLO`.
pub fn handshake_lines(caps: &Capabilities) -> Vec<String> {
    let join = |v: Vec<&str>| v.join(" ");
    let mut out = vec![
        format!("HELLO {}", caps.name),
        format!("FORMATS {}", join(caps.formats.iter().map(|f| f.token()).collect())),
        format!("FUNCTIONS {}", join(caps.functions.iter().map(|f| f.name()).collect())),
    ];
    out.extend(caps.modes.iter().map(|(f, l)| format!("MODE {f} {l}")));
    out.push(format!("REENTRANT {}", if caps.reentrant { "yes" } else { "no" }));
    out.push("READY".to_string());
    out
}

/// Incrementally parses handshake lines; `push` returns the capabilities
/// once `READY` arrives.
#[derive(Debug, Default)]
pub struct HandshakeParser {
    name: Option<String>,
    formats: Vec<Format>,
    functions: Vec<FunctionId>,
    modes: BTreeMap<FunctionId, Level>,
    reentrant: bool,
}

impl HandshakeParser {
    pub fn push(&mut self, line: &str) -> Result<Option<Capabilities>, ProtocolError> {
        let bad = |m: String| ProtocolError::Handshake(m);
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        if self.name.is_none() && head != "HELLO" {
            return Err(bad(format!("expected HELLO, got `{line}`")));
        }
        match head {
            "HELLO" => self.name = Some(words.collect::<Vec<_>>().join(" ")),
            "FORMATS" => {
                for w in words {
                    self.formats.push(w.parse().map_err(|e| bad(format!("{e}")))?);
                }
            }
            "FUNCTIONS" => {
                for w in words {
                    self.functions.push(w.parse().map_err(|e| bad(format!("{e}")))?);
                }
            }
            "MODE" => {
                let (Some(f), Some(l), None) = (words.next(), words.next(), words.next()) else {
                    return Err(bad(format!("expected `MODE <fn> <level>`, got `{line}`")));
                };
                let f: FunctionId = f.parse().map_err(|e| bad(format!("{e}")))?;
                let l: Level = l.parse().map_err(|e| bad(format!("{e}")))?;
                self.modes.insert(f, l);
            }
            "REENTRANT" => {
                self.reentrant = match words.next() {
                    Some("yes") => true,
                    Some("no") => false,
                    _ => return Err(bad(format!("expected `REENTRANT yes|no`, got `{line}`"))),
                }
            }
            "READY" => {
                return Ok(Some(Capabilities {
                    name: self.name.take().unwrap_or_default(),
                    formats: std::mem::take(&mut self.formats),
                    functions: std::mem::take(&mut self.functions),
                    modes: std::mem::take(&mut self.modes),
                    reentrant: self.reentrant,
                }))
            }
            _ => return Err(bad(format!("unexpected line `{line}`"))),
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Request {
    pub f: FunctionId,
    pub format: Format,
    pub args: Vec<Interval>,
}

pub fn format_request(f: FunctionId, args: &[Interval]) -> String {
    let format = args.first().map_or(Format::Binary64, |a| a.format());
    let mut s = format!("EVAL {f} {format}");
    for a in args {
        s.push(' ');
        s.push_str(&format_interval(a));
    }
    s
}

pub fn parse_request(line: &str) -> Result<Request, ProtocolError> {
    let bad = |m: String| ProtocolError::Request(m);
    let words: Vec<&str> = line.split_whitespace().collect();
    let ["EVAL", f, format, args @ ..] = words.as_slice() else {
        return Err(bad(format!("expected `EVAL <fn> <format> <interval>...`, got `{line}`")));
    };
    let f: FunctionId = f.parse().map_err(|e| bad(format!("{e}")))?;
    let format: Format = format.parse().map_err(|e| bad(format!("{e}")))?;
    if args.len() != f.arity() {
        return Err(bad(format!("{f} takes {} argument(s), got {}", f.arity(), args.len())));
    }
    let args = args
        .iter()
        .map(|t| parse_interval(t, format).map_err(|e| bad(format!("{e}"))))
        .collect::<Result<_, _>>()?;
    Ok(Request { f, format, args })
}

pub fn format_response(r: &Result<Interval, String>) -> String {
    match r {
        Ok(z) => format!("RES {}", format_interval(z)),
        Err(m) => format!("ERR {}", m.replace('\n', " ")),
    }
}

/// Outer error: the response line was malformed. Inner error: the adapter
/// answered `ERR`.
pub fn parse_response(line: &str, format: Format) -> Result<Result<Interval, String>, ProtocolError> {
    let line = line.trim_end();
    if let Some(rest) = line.strip_prefix("RES ") {
        parse_interval(rest.trim(), format)
            .map(Ok)
            .map_err(|e| ProtocolError::Response(format!("{e} in `{line}`")))
    } else if let Some(msg) = line.strip_prefix("ERR") {
        Ok(Err(msg.trim().to_string()))
    } else {
        Err(ProtocolError::Response(format!("expected RES or ERR, got `{line}`")))
    }
}

/// Serves `evaluator` until `BYE` or end of input.
pub fn serve(evaluator: &mut dyn Evaluator, input: impl BufRead, mut output: impl Write) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        let t = line.trim();
        match t.split_whitespace().next() {
            None => continue,
            Some("HELLO") => {
                for l in handshake_lines(&evaluator.capabilities()) {
                    writeln!(output, "{l}")?;
                }
            }
            Some("BYE") => break,
            Some(_) => {
                let reply = match parse_request(t) {
                    Ok(req) => evaluator.evaluate(req.f, &req.args),
                    Err(e) => Err(e.to_string()),
                };
                writeln!(output, "{}", format_response(&reply))?;
            }
        }
        output.flush()?;
    }
    output.flush()
}
