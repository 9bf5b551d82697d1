//! Line-oriented text format for interpretations.
//!
//! ```text
//! # comments and blank lines are ignored
//! name paper
//! source posdiv
//! target mod
//! universe(u) := not (u mod u = u)
//! <(a, b) := a mod b = a
//! divides(b, a) := (a mod b) mod (a mod b) = a mod b
//! ```
//!
//! `source` and `target` name built-in signatures. Entries after `universe`
//! appear in symbol order when written.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{is_identifier, parse, ParseError, Signature};

use super::{AtomDefinition, InterpError, Interpretation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

pub(super) fn write_manifest(i: &Interpretation) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\n", i.name()));
    out.push_str(&format!("source {}\n", i.source().name()));
    out.push_str(&format!("target {}\n", i.target().name()));
    out.push_str(&format!("universe({}) := {}\n", i.universe_var(), i.universe()));
    for (sym, def) in i.atoms() {
        out.push_str(&format!("{}({}) := {}\n", sym, def.params.join(", "), def.formula));
    }
    out
}

struct Entry {
    line: usize,
    symbol: String,
    params: Vec<String>,
    body: String,
}

fn split_entry(line_no: usize, line: &str) -> Result<Entry, ManifestError> {
    let syntax = |message: &str| ManifestError::Syntax {
        line: line_no,
        message: message.into(),
    };
    let (head, body) = line
        .split_once(":=")
        .ok_or_else(|| syntax("expected `symbol(params) := formula`"))?;
    let head = head.trim();
    let open = head.find('(').ok_or_else(|| syntax("expected `(` after the symbol"))?;
    let inner = head[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax("expected `)` closing the parameter list"))?;
    let symbol = head[..open].trim().to_string();
    if symbol.is_empty() {
        return Err(syntax("missing symbol name"));
    }
    let params: Vec<String> = inner.split(',').map(|p| p.trim().to_string()).collect();
    if let Some(bad) = params.iter().find(|p| !is_identifier(p)) {
        return Err(syntax(&format!("`{bad}` is not a parameter name")));
    }
    Ok(Entry {
        line: line_no,
        symbol,
        params,
        body: body.trim().to_string(),
    })
}

pub(super) fn parse_manifest(text: &str) -> Result<Interpretation, ManifestError> {
    let mut name = None;
    let mut source = None;
    let mut target = None;
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.contains(":=") {
            entries.push(split_entry(line_no, line)?);
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).ok_or_else(|| ManifestError::Syntax {
            line: line_no,
            message: format!("unrecognized line `{line}`"),
        })?;
        let value = value.trim();
        let signature = |v: &str| {
            Signature::builtin(v).ok_or_else(|| ManifestError::Syntax {
                line: line_no,
                message: format!("unknown signature `{v}`"),
            })
        };
        match key {
            "name" => name = Some(value.to_string()),
            "source" => source = Some(signature(value)?),
            "target" => target = Some(signature(value)?),
            other => {
                return Err(ManifestError::Syntax {
                    line: line_no,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let source = source.ok_or(ManifestError::Missing("source"))?;
    let target = target.ok_or(ManifestError::Missing("target"))?;
    let name = name.unwrap_or_else(|| "manifest".to_string());
    let mut universe = None;
    let mut atoms = BTreeMap::new();
    for e in entries {
        let formula = parse(&e.body, &target).map_err(|source| ManifestError::Formula {
            line: e.line,
            source,
        })?;
        if e.symbol == "universe" {
            if e.params.len() != 1 {
                return Err(ManifestError::Syntax {
                    line: e.line,
                    message: "universe takes exactly one parameter".into(),
                });
            }
            universe = Some((e.params[0].clone(), formula));
        } else {
            let def = AtomDefinition {
                params: e.params,
                formula,
            };
            if atoms.insert(e.symbol.clone(), def).is_some() {
                return Err(ManifestError::Syntax {
                    line: e.line,
                    message: format!("`{}` defined twice", e.symbol),
                });
            }
        }
    }
    let (var, universe) = universe.ok_or(ManifestError::Missing("universe"))?;
    Ok(Interpretation::new(name, source, target, var, universe, atoms)?)
}
