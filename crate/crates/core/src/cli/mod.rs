//! Command-line front end: spec files in, JSON reports (and DOT) out.
//!
//! Exit codes: 0 on success, 1 on usage, parse or I/O errors, 2 when an
//! axiom, round trip or theorem check fails.

pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::algebra::{classify, verify_axioms, Algebra};
use crate::catalog;
use crate::divis::{
    self, a_closed_check, a_extension_check, div_solve, divisible_hull, epicompletion_with_probe,
    harness, is_divisible, AExtVerdict, DivOutcome, Divisibility,
};
use crate::error::MvError;
use crate::ideals::{enumerate_ideals, generate_ideal, primes_and_minimal_primes, quotient};
use crate::lgroup::{chang_embed, mundici_roundtrip, xi};
use crate::morphisms::{bounded_epi_oracle, enumerate_homs, EpiEvidence};

pub use report::{ideal_dot, ReportDoc};
pub use spec::{parse_spec, parse_spec_str, HEADER};

#[derive(Parser, Debug)]
#[command(name = "mvkit", version, about = "Exact computations with MV-algebras")]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the MV-algebra axioms and classify the algebra.
    Check { file: PathBuf },
    /// Enumerate the ideal lattice.
    Ideals {
        file: PathBuf,
        /// Write the Hasse diagram as a DOT digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Prime and minimal prime ideals.
    Primes { file: PathBuf },
    /// Quotient by the ideal generated by the given elements.
    Quotient {
        file: PathBuf,
        #[arg(long = "gen", required = true)]
        generators: Vec<String>,
    },
    /// All homomorphisms between two finite algebras.
    Homs { source: PathBuf, target: PathBuf },
    /// Epimorphism evidence for every homomorphism between two algebras.
    Epi {
        source: PathBuf,
        target: PathBuf,
        /// Largest cotarget size searched for a separating pair.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Generators and unit of the Chang group.
    Chang { file: PathBuf },
    /// Round trip through the Chang group and back.
    Roundtrip { file: PathBuf },
    /// The divisible hull and its embedding.
    Hull {
        file: PathBuf,
        #[arg(long, default_value_t = divis::DEFAULT_PROBE_DENOMINATOR)]
        probe: u64,
    },
    /// Divisibility, or one division when --target and --n are given.
    Divisible {
        file: PathBuf,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// a-extension check for every embedding of the first algebra into the second.
    Aext {
        sub: PathBuf,
        sup: PathBuf,
        #[arg(long, default_value_t = 16)]
        bound: u64,
    },
    /// a-closedness for the classes with a decision rule.
    Aclosed { file: PathBuf },
    /// The epicompletion with its certificates.
    Epicomplete {
        file: PathBuf,
        #[arg(long, default_value_t = divis::DEFAULT_PROBE_DENOMINATOR)]
        probe: u64,
    },
    /// Check a theorem on every algebra of the catalog.
    Verify {
        #[arg(long)]
        theorem: String,
        /// Catalog directory; defaults to $MVKIT_CATALOG, then ./catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Rebuild the catalog even when the directory already has one.
        #[arg(long)]
        regenerate: bool,
    },
}

/// Outcome of one command before it is printed.
struct Outcome {
    inputs: Vec<PathBuf>,
    results: Json,
    /// A check failed (exit 2) rather than the command itself.
    violated: bool,
}

fn exit_code_for(e: &MvError) -> i32 {
    match e {
        MvError::AxiomViolation { .. }
        | MvError::CriterionMismatch(_)
        | MvError::UniquenessViolation { .. }
        | MvError::RoundTripFailure(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs the command, prints the
/// report on stdout and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let (doc, code) = match execute(&cli.command) {
        Ok(o) => {
            let code = if o.violated { 2 } else { 0 };
            (
                ReportDoc::new(name, &o.inputs, o.results, started.elapsed()),
                code,
            )
        }
        Err(e) => {
            let results = json!({ "error": e.to_string() });
            (
                ReportDoc::new(
                    name,
                    &command_inputs(&cli.command),
                    results,
                    started.elapsed(),
                ),
                exit_code_for(&e),
            )
        }
    };
    let text = doc.to_pretty();
    println!("{text}");
    if let Some(out) = &cli.out {
        if let Err(e) = std::fs::write(out, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", out.display());
            return 1;
        }
    }
    if code != 0 {
        if let Some(err) = doc.results.get("error") {
            eprintln!("error: {}", err.as_str().unwrap_or_default());
        }
    }
    code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Ideals { .. } => "ideals",
        Command::Primes { .. } => "primes",
        Command::Quotient { .. } => "quotient",
        Command::Homs { .. } => "homs",
        Command::Epi { .. } => "epi",
        Command::Chang { .. } => "chang",
        Command::Roundtrip { .. } => "roundtrip",
        Command::Hull { .. } => "hull",
        Command::Divisible { .. } => "divisible",
        Command::Aext { .. } => "aext",
        Command::Aclosed { .. } => "aclosed",
        Command::Epicomplete { .. } => "epicomplete",
        Command::Verify { .. } => "verify",
    }
}

fn command_inputs(c: &Command) -> Vec<PathBuf> {
    match c {
        Command::Check { file }
        | Command::Ideals { file, .. }
        | Command::Primes { file }
        | Command::Quotient { file, .. }
        | Command::Chang { file }
        | Command::Roundtrip { file }
        | Command::Hull { file, .. }
        | Command::Divisible { file, .. }
        | Command::Aclosed { file }
        | Command::Epicomplete { file, .. } => vec![file.clone()],
        Command::Homs { source, target } | Command::Epi { source, target, .. } => {
            vec![source.clone(), target.clone()]
        }
        Command::Aext { sub, sup, .. } => vec![sub.clone(), sup.clone()],
        Command::Verify { .. } => Vec::new(),
    }
}

fn ok(inputs: &[&Path], results: Json) -> crate::Result<Outcome> {
    Ok(Outcome {
        inputs: inputs.iter().map(|p| p.to_path_buf()).collect(),
        results,
        violated: false,
    })
}

fn elements(a: &Algebra, idx: impl IntoIterator<Item = usize>) -> Vec<String> {
    idx.into_iter()
        .map(|i| a.format(&a.element(i).expect("index in range")))
        .collect()
}

fn execute(c: &Command) -> crate::Result<Outcome> {
    match c {
        Command::Check { file } => {
            let a = parse_spec(file)?;
            let report = verify_axioms(&a)?;
            let flags = classify(&a)?;
            ok(
                &[file],
                json!({
                    "algebra": a.name(),
                    "size": a.size(),
                    "passed": report.passed(),
                    "certificate": report.certificate,
                    "linear": flags.is_linear,
                    "simple": flags.is_simple,
                    "boolean": flags.is_boolean,
                }),
            )
        }
        Command::Ideals { file, dot } => {
            let a = parse_spec(file)?;
            let lat = enumerate_ideals(&a)?;
            if let Some(path) = dot {
                std::fs::write(path, ideal_dot(&a, &lat))?;
            }
            let ideals: Vec<Json> = lat
                .ideals
                .iter()
                .map(|i| json!({ "members": elements(&a, i.members()), "proper": i.is_proper(&a) }))
                .collect();
            ok(
                &[file],
                json!({ "algebra": a.name(), "count": ideals.len(), "ideals": ideals, "covers": lat.covers }),
            )
        }
        Command::Primes { file } => {
            let a = parse_spec(file)?;
            let p = primes_and_minimal_primes(&a)?;
            let describe = |set: &[crate::ideals::Ideal]| -> crate::Result<Vec<Json>> {
                set.iter()
                    .map(|i| {
                        let (q, _) = quotient(&a, i)?;
                        Ok(json!({ "members": elements(&a, i.members()), "quotient_size": q.size() }))
                    })
                    .collect()
            };
            ok(
                &[file],
                json!({ "algebra": a.name(), "primes": describe(&p.primes)?, "minimal": describe(&p.minimal)? }),
            )
        }
        Command::Quotient { file, generators } => {
            let a = parse_spec(file)?;
            let gens = generators
                .iter()
                .map(|g| a.parse_element(g))
                .collect::<crate::Result<Vec<_>>>()?;
            let ideal = generate_ideal(&a, &gens)?;
            let (q, proj) = quotient(&a, &ideal)?;
            let classes: Vec<Json> = (0..q.size().unwrap())
                .map(|c| {
                    let members = (0..a.size().unwrap()).filter(|&x| proj.image_idx(x) == Some(c));
                    json!({ "class": q.format(&q.element(c).expect("in range")), "members": elements(&a, members) })
                })
                .collect();
            ok(
                &[file],
                json!({
                    "algebra": a.name(),
                    "ideal": elements(&a, ideal.members()),
                    "quotient_size": q.size(),
                    "linear": classify(&q)?.is_linear,
                    "classes": classes,
                }),
            )
        }
        Command::Homs { source, target } => {
            let (a, b) = (parse_spec(source)?, parse_spec(target)?);
            let homs = enumerate_homs(&a, &b)?;
            let list: Vec<Json> = homs
                .iter()
                .map(|h| {
                    let images: Vec<String> =
                        h.images().iter().map(|v| b.format_value(v)).collect();
                    Ok(json!({
                        "images": images,
                        "injective": h.is_injective(),
                        "surjective": h.is_surjective()?,
                    }))
                })
                .collect::<crate::Result<_>>()?;
            ok(
                &[source, target],
                json!({ "source": a.name(), "target": b.name(), "count": list.len(), "homs": list }),
            )
        }
        Command::Epi {
            source,
            target,
            bound,
        } => {
            let (a, b) = (parse_spec(source)?, parse_spec(target)?);
            let mut list = Vec::new();
            for h in enumerate_homs(&a, &b)? {
                let images: Vec<String> = h.images().iter().map(|v| b.format_value(v)).collect();
                let ev = bounded_epi_oracle(&h, *bound)?;
                let witness = match &ev {
                    EpiEvidence::NotEpi {
                        cotarget,
                        alpha,
                        beta,
                    } => json!({
                        "cotarget": cotarget.name(),
                        "alpha": alpha.images().iter().map(|v| cotarget.format_value(v)).collect::<Vec<_>>(),
                        "beta": beta.images().iter().map(|v| cotarget.format_value(v)).collect::<Vec<_>>(),
                        "replays": crate::morphisms::replay_not_epi(&h, alpha, beta)?,
                    }),
                    _ => Json::Null,
                };
                list.push(json!({ "images": images, "evidence": ev.label(), "witness": witness }));
            }
            ok(
                &[source, target],
                json!({ "source": a.name(), "target": b.name(), "bound": bound, "homs": list }),
            )
        }
        Command::Chang { file } => {
            let a = parse_spec(file)?;
            let g = xi(&a)?;
            let gens: Vec<Json> = (0..a.size().unwrap())
                .map(|x| json!({ "element": elements(&a, [x])[0], "generator": g.format(&chang_embed(&a, x)) }))
                .collect();
            ok(
                &[file],
                json!({ "algebra": a.name(), "group": g.name(), "unit": g.format(g.unit()), "generators": gens }),
            )
        }
        Command::Roundtrip { file } => {
            let a = parse_spec(file)?;
            let (back, h) = mundici_roundtrip(&a)?;
            let bijective = h.is_injective() && h.is_surjective()?;
            Ok(Outcome {
                inputs: vec![file.clone()],
                results: json!({ "algebra": a.name(), "image": back.name(), "size": back.size(), "bijective": bijective }),
                violated: !bijective,
            })
        }
        Command::Hull { file, probe } => {
            let a = parse_spec(file)?;
            let h = divisible_hull(&a)?;
            let embedding = h.embedding().map(|f| {
                f.images()
                    .iter()
                    .map(|v| h.hull().format_value(v))
                    .collect::<Vec<_>>()
            });
            let probes = h.probe_set(*probe)?;
            let multiples = h.hull_property(&probes)?;
            ok(
                &[file],
                json!({
                    "algebra": a.name(),
                    "hull": h.hull().name(),
                    "route": format!("{:?}", h.route()),
                    "rank": h.rank(),
                    "embedding": embedding,
                    "probes": probes.len(),
                    "largest_multiple": multiples.iter().max(),
                }),
            )
        }
        Command::Divisible { file, target, n } => {
            let a = parse_spec(file)?;
            match (target, n) {
                (Some(t), Some(n)) => {
                    let t = a.parse_element(t)?;
                    let r = match div_solve(&a, &t, *n)? {
                        DivOutcome::Witness(w) => {
                            json!({ "solution": a.format(&w.x), "replays": w.replay(&a)? })
                        }
                        DivOutcome::NoSolution => json!({ "solution": Json::Null }),
                    };
                    ok(
                        &[file],
                        json!({ "algebra": a.name(), "target": a.format(&t), "n": n, "result": r }),
                    )
                }
                (None, None) => {
                    let r = match is_divisible(&a)? {
                        Divisibility::Divisible(cert) => {
                            json!({ "divisible": true, "certificate": cert })
                        }
                        Divisibility::NotDivisible { a: t, n } => {
                            json!({ "divisible": false, "witness": { "a": a.format(&t), "n": n } })
                        }
                    };
                    ok(&[file], json!({ "algebra": a.name(), "result": r }))
                }
                _ => Err(MvError::InvalidParameter(
                    "--target and --n go together".into(),
                )),
            }
        }
        Command::Aext { sub, sup, bound } => {
            let (a, b) = (parse_spec(sub)?, parse_spec(sup)?);
            let mut list = Vec::new();
            for f in enumerate_homs(&a, &b)?
                .into_iter()
                .filter(|f| f.is_injective())
            {
                let r = a_extension_check(&f, *bound)?;
                let witnesses: Vec<Json> = r
                    .witnesses
                    .iter()
                    .map(|w| json!({ "y": b.format(&w.y), "n": w.n, "x": b.format(&w.x), "strict": w.strict }))
                    .collect();
                let verdict = match &r.verdict {
                    AExtVerdict::Holds => json!("holds"),
                    AExtVerdict::Fails { y } => json!({ "fails_at": b.format(y) }),
                    AExtVerdict::Inconclusive { bound } => json!({ "inconclusive_up_to": bound }),
                };
                list.push(json!({
                    "images": f.images().iter().map(|v| b.format_value(v)).collect::<Vec<_>>(),
                    "verdict": verdict,
                    "lattice": r.lattice,
                    "witnesses": witnesses,
                    "replays": r.replay(&b)?,
                }));
            }
            ok(
                &[sub, sup],
                json!({ "sub": a.name(), "sup": b.name(), "embeddings": list }),
            )
        }
        Command::Aclosed { file } => {
            let a = parse_spec(file)?;
            let v = a_closed_check(&a)?;
            let detail = match &v {
                divis::AClosedVerdict::NotAClosed { extension, reason } => json!({
                    "reason": reason,
                    "extension": extension.as_ref().map(|(f, _)| f.target().name().to_string()),
                }),
                divis::AClosedVerdict::AClosed { reason }
                | divis::AClosedVerdict::Unknown { reason } => {
                    json!({ "reason": reason })
                }
            };
            ok(
                &[file],
                json!({ "algebra": a.name(), "verdict": v.label(), "detail": detail }),
            )
        }
        Command::Epicomplete { file, probe } => {
            let a = parse_spec(file)?;
            let e = epicompletion_with_probe(&a, *probe)?;
            let certified = e.all_certified();
            Ok(Outcome {
                inputs: vec![file.clone()],
                results: json!({
                    "algebra": a.name(),
                    "hull": e.hull.hull().name(),
                    "route": format!("{:?}", e.hull.route()),
                    "alpha_injective": e.alpha_injective,
                    "alpha_epi_reason": e.alpha_epi_reason,
                    "hull_divisible": e.hull_divisibility.is_divisible(),
                    "division_checks": e.division_checks,
                    "a_extension": format!("{:?}", e.a_extension.verdict),
                    "a_extension_witnesses": e.a_extension.witnesses.len(),
                    "idempotent": e.idempotent,
                    "certified": certified,
                }),
                violated: !certified,
            })
        }
        Command::Verify {
            theorem,
            catalog: dir,
            regenerate,
        } => {
            let selector = harness::Selector::parse(theorem)?;
            let dir = dir
                .clone()
                .or_else(|| std::env::var_os(catalog::CATALOG_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("catalog"));
            let algebras = catalog::load_or_generate(&dir, *regenerate)?;
            let report = harness::run(selector, &algebras)?;
            let violated = report.has_counterexample();
            Ok(Outcome {
                inputs: vec![catalog::catalog_path(&dir)],
                results: serde_json::to_value(&report).map_err(|e| MvError::Io(e.to_string()))?,
                violated,
            })
        }
    }
}
