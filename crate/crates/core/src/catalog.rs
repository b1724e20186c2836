//! The catalog of small finite algebras used as cotargets and test corpus.
//!
//! Every finite algebra is a product of finite chains, so one representative
//! per isomorphism class of size `s` comes from each multiplicative partition
//! of `s` into factors `≥ 2`. Each entry is axiom-checked when it is built or
//! loaded. The catalog can be cached on disk as a versioned text file.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use crate::algebra::{Algebra, TableSpec};
use crate::error::{MvError, Result};

/// Largest carrier in the catalog.
pub const CATALOG_MAX_SIZE: usize = 12;
pub const CATALOG_HEADER: &str = "mvkit-catalog v1";
pub const CATALOG_FILE: &str = "catalog.txt";
/// Environment variable naming a catalog directory.
pub const CATALOG_ENV: &str = "MVKIT_CATALOG";

/// Non-increasing factorizations of `s` into factors `≥ 2`.
fn factorizations(s: usize, max_factor: usize) -> Vec<Vec<usize>> {
    if s == 1 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for f in (2..=max_factor.min(s)).rev() {
        if s.is_multiple_of(f) {
            for mut rest in factorizations(s / f, f) {
                rest.insert(0, f);
                out.push(rest);
            }
        }
    }
    out
}

fn chain_product(factors: &[usize]) -> Result<Algebra> {
    match factors {
        [] => Ok(Algebra::trivial()),
        [f] => Algebra::chain(*f as u32 - 1),
        _ => {
            let chains = factors
                .iter()
                .map(|&f| Algebra::chain(f as u32 - 1))
                .collect::<Result<Vec<_>>>()?;
            let name = factors
                .iter()
                .map(|f| format!("L{f}"))
                .collect::<Vec<_>>()
                .join("x");
            Ok(Algebra::product(chains)?.renamed(name))
        }
    }
}

/// One algebra per isomorphism class with at most `max_size` elements,
/// ordered by size and then by factorization (longest chain first).
pub fn generate(max_size: usize) -> Result<Vec<Algebra>> {
    let mut out = Vec::new();
    for s in 1..=max_size {
        for f in factorizations(s, s) {
            let a = chain_product(&f)?;
            let report = crate::algebra::verify_axioms(&a.materialize()?)?;
            if !report.passed() {
                return Err(MvError::AxiomViolation {
                    axiom: report.violation.clone().unwrap().0,
                    witness: report.violation.unwrap().1,
                });
            }
            out.push(a);
        }
    }
    Ok(out)
}

pub fn catalog_path(dir: &Path) -> PathBuf {
    dir.join(CATALOG_FILE)
}

/// Writes operation tables in canonical order.
pub fn save(dir: &Path, algebras: &[Algebra]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = String::new();
    text.push_str(CATALOG_HEADER);
    text.push('\n');
    for a in algebras {
        let t = a.table_spec()?;
        text.push_str(&format!("algebra {} {}\n", a.name(), t.size));
        let neg: Vec<String> = t.neg.iter().map(usize::to_string).collect();
        text.push_str(&format!("neg {}\n", neg.join(" ")));
        for row in t.oplus.chunks(t.size) {
            let row: Vec<String> = row.iter().map(usize::to_string).collect();
            text.push_str(&format!("row {}\n", row.join(" ")));
        }
    }
    fs::write(catalog_path(dir), text)?;
    Ok(())
}

/// Reads a catalog file, re-verifying every table.
pub fn load(dir: &Path) -> Result<Vec<Algebra>> {
    let text = fs::read_to_string(catalog_path(dir))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Vec<Algebra>> {
    let err = |line: usize, message: &str| MvError::Parse {
        line,
        message: message.into(),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, h)) if h == CATALOG_HEADER => {}
        _ => return Err(err(1, "missing catalog header")),
    }
    let numbers = |line: usize, s: &str| -> Result<Vec<usize>> {
        s.split_whitespace()
            .map(|w| w.parse().map_err(|_| err(line, "expected an integer")))
            .collect()
    };
    let mut out = Vec::new();
    let mut lines = lines.filter(|(_, l)| !l.is_empty()).peekable();
    while let Some((no, l)) = lines.next() {
        let rest = l
            .strip_prefix("algebra ")
            .ok_or_else(|| err(no, "expected `algebra <name> <size>`"))?;
        let (name, size) = rest
            .rsplit_once(' ')
            .ok_or_else(|| err(no, "expected `algebra <name> <size>`"))?;
        let size: usize = size.parse().map_err(|_| err(no, "bad size"))?;
        let (no, l) = lines.next().ok_or_else(|| err(no, "missing neg line"))?;
        let neg = numbers(
            no,
            l.strip_prefix("neg")
                .ok_or_else(|| err(no, "expected `neg`"))?,
        )?;
        let mut oplus = Vec::with_capacity(size * size);
        for _ in 0..size {
            let (no, l) = lines.next().ok_or_else(|| err(no, "missing row"))?;
            oplus.extend(numbers(
                no,
                l.strip_prefix("row")
                    .ok_or_else(|| err(no, "expected `row`"))?,
            )?);
        }
        let spec = TableSpec {
            size,
            oplus,
            neg,
            zero: 0,
            one: size.saturating_sub(1),
        };
        out.push(Algebra::from_table_named(name, spec)?);
    }
    Ok(out)
}

/// Loads the catalog from `dir`, generating and writing it when missing or
/// when `regenerate` is set.
pub fn load_or_generate(dir: &Path, regenerate: bool) -> Result<Vec<Algebra>> {
    if !regenerate && catalog_path(dir).exists() {
        return load(dir);
    }
    let algebras = generate(CATALOG_MAX_SIZE)?;
    save(dir, &algebras)?;
    Ok(algebras)
}

/// The process-wide catalog: read from `$MVKIT_CATALOG` when set (and
/// written there on first use), otherwise generated in memory.
pub fn default_catalog() -> &'static [Algebra] {
    static CATALOG: OnceLock<Vec<Algebra>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let from_env = std::env::var_os(CATALOG_ENV)
            .map(PathBuf::from)
            .and_then(|dir| load_or_generate(&dir, false).ok());
        from_env.unwrap_or_else(|| generate(CATALOG_MAX_SIZE).expect("catalog generation"))
    })
}
