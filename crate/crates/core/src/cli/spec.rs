//! The `mvkit-algebra v1` text format.
//!
//! ```text
//! mvkit-algebra v1
//! # comments and blank lines are ignored
//! kind = table
//! size = 3
//! oplus = [[0, 1, 2], [1, 2, 2], [2, 2, 2]]
//! neg = [2, 1, 0]
//! zero = 0
//! one = 2
//! ```
//!
//! Kinds and their fields:
//! `chain` (`n`), `divisible-chain` (none), `table` (`size`, `oplus`, `neg`,
//! `zero`, `one`), `product` (`factors`: file paths relative to this file),
//! `quotient` (`base`: a path, `generators`: element strings), `gamma`
//! (`generators`: vectors of `p/q` strings, `unit`: a vector). Every kind
//! accepts an optional `name`. Array values are JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::Value as Json;

use crate::algebra::{verify_axioms, Algebra, TableSpec};
use crate::error::{MvError, Result};
use crate::ideals::{generate_ideal, quotient};
use crate::lgroup::{gamma, Group, GroupElement, UnitalGroup};
use crate::rational::{self, Rational};

pub const HEADER: &str = "mvkit-algebra v1";

/// Nesting limit for product and quotient references.
const MAX_DEPTH: usize = 16;

struct Fields {
    values: BTreeMap<String, (usize, String)>,
}

impl Fields {
    fn raw(&self, key: &str) -> Result<(usize, &str)> {
        self.values
            .get(key)
            .map(|(l, v)| (*l, v.as_str()))
            .ok_or_else(|| MvError::Parse {
                line: 0,
                message: format!("missing field '{key}'"),
            })
    }

    fn optional(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(_, v)| v.as_str())
    }

    fn int(&self, key: &str) -> Result<usize> {
        let (line, v) = self.raw(key)?;
        v.parse().map_err(|_| MvError::Parse {
            line,
            message: format!("'{key}' must be a non-negative integer"),
        })
    }

    fn json(&self, key: &str) -> Result<(usize, Json)> {
        let (line, v) = self.raw(key)?;
        let j = serde_json::from_str(v).map_err(|e| MvError::Parse {
            line,
            message: format!("'{key}': {e}"),
        })?;
        Ok((line, j))
    }

    fn ints(&self, key: &str) -> Result<Vec<usize>> {
        let (line, j) = self.json(key)?;
        serde_json::from_value(j).map_err(|e| MvError::Parse {
            line,
            message: format!("'{key}' must be an integer list: {e}"),
        })
    }

    fn strings(&self, key: &str) -> Result<Vec<String>> {
        let (line, j) = self.json(key)?;
        serde_json::from_value(j).map_err(|e| MvError::Parse {
            line,
            message: format!("'{key}' must be a list of strings: {e}"),
        })
    }
}

fn split_fields(text: &str) -> Result<Fields> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.find(|(_, l)| !l.is_empty() && !l.starts_with('#')) {
        Some((_, l)) if l == HEADER => {}
        Some((line, l)) => {
            return Err(MvError::Parse {
                line,
                message: format!("expected header '{HEADER}', found '{l}'"),
            })
        }
        None => {
            return Err(MvError::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    let mut values = BTreeMap::new();
    for (line, l) in lines {
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (k, v) = l.split_once('=').ok_or_else(|| MvError::Parse {
            line,
            message: "expected 'key = value'".into(),
        })?;
        let key = k.trim().to_string();
        if values
            .insert(key.clone(), (line, v.trim().to_string()))
            .is_some()
        {
            return Err(MvError::Parse {
                line,
                message: format!("duplicate field '{key}'"),
            });
        }
    }
    Ok(Fields { values })
}

/// Reads, constructs and axiom-checks the algebra described by `path`.
pub fn parse_spec(path: &Path) -> Result<Algebra> {
    load(path, 0)
}

fn load(path: &Path, depth: usize) -> Result<Algebra> {
    if depth > MAX_DEPTH {
        return Err(MvError::InvalidParameter(format!(
            "references nest deeper than {MAX_DEPTH} at {}",
            path.display()
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| MvError::Io(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    build(&text, &dir, depth)
}

/// Builds an algebra from spec text; references resolve against `dir`.
pub fn parse_spec_str(text: &str, dir: &Path) -> Result<Algebra> {
    build(text, dir, 0)
}

fn build(text: &str, dir: &Path, depth: usize) -> Result<Algebra> {
    let f = split_fields(text)?;
    let (kind_line, kind) = f.raw("kind")?;
    let resolve = |p: &str| -> PathBuf { dir.join(p) };
    let a = match kind {
        "chain" => {
            let n = f.int("n")?;
            Algebra::chain(
                u32::try_from(n).map_err(|_| MvError::InvalidParameter(format!("n = {n}")))?,
            )?
        }
        "divisible-chain" => Algebra::rational_chain(),
        "table" => {
            let size = f.int("size")?;
            let (line, rows) = f.json("oplus")?;
            let rows: Vec<Vec<usize>> =
                serde_json::from_value(rows).map_err(|e| MvError::Parse {
                    line,
                    message: format!("'oplus' must be a matrix of integers: {e}"),
                })?;
            if rows.len() != size || rows.iter().any(|r| r.len() != size) {
                return Err(MvError::Parse {
                    line,
                    message: format!("'oplus' must be {size} x {size}"),
                });
            }
            let spec = TableSpec {
                size,
                oplus: rows.into_iter().flatten().collect(),
                neg: f.ints("neg")?,
                zero: f.int("zero")?,
                one: f.int("one")?,
            };
            match f.optional("name") {
                Some(n) => Algebra::from_table_named(unquote(n), spec)?,
                None => Algebra::from_table(spec)?,
            }
        }
        "product" => {
            let paths = f.strings("factors")?;
            if paths.is_empty() {
                return Err(MvError::InvalidParameter(
                    "a product needs at least one factor".into(),
                ));
            }
            let factors = paths
                .iter()
                .map(|p| load(&resolve(p), depth + 1))
                .collect::<Result<Vec<_>>>()?;
            Algebra::product(factors)?
        }
        "quotient" => {
            let (_, base) = f.raw("base")?;
            let base = load(&resolve(&unquote(base)), depth + 1)?;
            let gens = f
                .strings("generators")?
                .iter()
                .map(|g| base.parse_element(g))
                .collect::<Result<Vec<_>>>()?;
            let ideal = generate_ideal(&base, &gens)?;
            quotient(&base, &ideal)?.0
        }
        "gamma" => {
            let (line, gens) = f.json("generators")?;
            let gens: Vec<Vec<String>> =
                serde_json::from_value(gens).map_err(|e| MvError::Parse {
                    line,
                    message: format!("'generators' must be a list of vectors of rationals: {e}"),
                })?;
            let gens = gens
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|s| rational::parse(s))
                        .collect::<Result<Vec<Rational>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let unit = f
                .strings("unit")?
                .iter()
                .map(|s| rational::parse(s))
                .collect::<Result<Vec<Rational>>>()?;
            gamma(UnitalGroup::new(
                Group::span(gens)?,
                GroupElement::Vector(unit),
            )?)?
        }
        other => {
            return Err(MvError::Parse {
                line: kind_line,
                message: format!("unknown kind '{other}'"),
            })
        }
    };
    let a = match (kind, f.optional("name")) {
        ("table", _) | (_, None) => a,
        (_, Some(n)) => a.renamed(unquote(n)),
    };
    let report = verify_axioms(&a)?;
    if let Some((axiom, witness)) = report.violation {
        return Err(MvError::AxiomViolation { axiom, witness });
    }
    Ok(a)
}

fn unquote(s: &str) -> String {
    s.trim().trim_matches('"').to_string()
}
