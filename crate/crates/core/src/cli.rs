//! The `modfo` command line. [`run`] takes explicit streams so it can be
//! driven from tests without spawning a process.
//!
//! Exit codes: 0 success, 1 a counterexample was found (or `eval` came out
//! false), 2 usage, parse or other errors.

use std::fs;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::corpus;
use crate::formula::{parse, Formula, Signature};
use crate::interp::{paper_interpretation, Definition, Interpretation, SymbolKind};
use crate::structures::{eval, Assignment, Structure, Value};
use crate::verify::{
    check_definition_in, check_lemma, fuzz_differential, mutations, shrink, stability, Counterexample, FuzzConfig,
    ShrinkContext,
};
use crate::MAX_BOUND;

#[derive(Debug, Parser)]
#[command(name = "modfo", version, about = "First-order logic over (N, mod)")]
struct Cli {
    /// Emit machine-readable JSON lines instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the exhaustive and fuzzing checks.
    #[arg(long, global = true, env = "MODFO_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Formula text, or `-` to read standard input.
    formula: Option<String>,
    /// Read the formula from a file.
    #[arg(long, conflicts_with = "formula")]
    file: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Parse {
        #[command(flatten)]
        input: Input,
        /// Built-in signature: mod, posdiv, order, ordsucc, natfull.
        #[arg(long, default_value = "posdiv")]
        signature: String,
    },
    /// Evaluate a formula in a built-in structure up to a bound.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Built-in structure: mod, posdiv, natfull.
        #[arg(long, default_value = "posdiv")]
        structure: String,
        #[arg(long, default_value_t = 100)]
        bound: Value,
        /// Values of free variables, e.g. `x=3,y=5`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Evaluate a sentence at several bounds and report whether it changes.
    Stability {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "posdiv")]
        structure: String,
        /// Comma-separated bounds.
        #[arg(long, value_delimiter = ',', default_value = "5,50,500")]
        bounds: Vec<Value>,
    },
    /// Translate a source formula through an interpretation.
    Translate {
        #[command(flatten)]
        input: Input,
        /// `paper` or a manifest file.
        #[arg(long, default_value = "paper")]
        interp: String,
        /// Print the interpretation manifest instead.
        #[arg(long)]
        manifest: bool,
    },
    /// Exhaustive checks.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Differential fuzzing of a translation.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Maximum quantifier depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Maximum node count.
        #[arg(long, default_value_t = 25)]
        nodes: usize,
        #[arg(long, default_value_t = 20)]
        bound: Value,
        #[arg(long, default_value = "paper")]
        interp: String,
        /// Fuzz a deliberately broken interpretation (all of them if no name).
        #[arg(long, num_args = 0..=1, default_missing_value = "all")]
        mutate: Option<String>,
        /// Minimize each counterexample before printing.
        #[arg(long)]
        shrink: bool,
    },
    /// Compare a candidate definition with a native relation.
    Defcheck {
        /// Corpus entry name.
        #[arg(long, conflicts_with = "formula")]
        definition: Option<String>,
        /// Graph formula of an ad hoc definition.
        #[arg(long, requires = "params")]
        formula: Option<String>,
        /// Parameters of the ad hoc definition, e.g. `x,y`.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Native relation to compare against [default: the corpus entry's, else succ].
        #[arg(long)]
        oracle: Option<String>,
        /// Structure to evaluate in [default: the corpus entry's, else natfull].
        #[arg(long)]
        structure: Option<String>,
        /// Signature the ad hoc graph may use (defaults to the structure's).
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 100)]
        bound: Value,
    },
    /// Named candidate definitions.
    Corpus {
        #[command(subcommand)]
        what: CorpusCommand,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// The zero, order and divisibility characterizations on [0, bound]².
    Lemma {
        #[arg(long, default_value_t = 100)]
        bound: Value,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusCommand {
    /// List entries.
    List,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    json: bool,
    jobs: Option<usize>,
}

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", s.as_ref())?;
        Ok(())
    }

    fn read_input(&mut self, input: &Input) -> Result<String, Failure> {
        match (&input.formula, &input.file) {
            (_, Some(path)) => Ok(fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))?),
            (Some(f), None) if f == "-" => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(s)
            }
            (Some(f), None) => Ok(f.clone()),
            (None, None) => Err(Failure("no formula given".into())),
        }
    }

    fn counterexamples(&mut self, cs: &[Counterexample]) -> Result<(), Failure> {
        for c in cs {
            self.line(c.to_json())?;
        }
        Ok(())
    }
}

fn check_bound(bound: Value) -> Result<Value, Failure> {
    if bound > MAX_BOUND {
        return Err(Failure(format!("bound {bound} exceeds the cap of {MAX_BOUND}")));
    }
    Ok(bound)
}

fn signature(name: &str) -> Result<Signature, Failure> {
    Signature::builtin(name).ok_or_else(|| Failure(format!("unknown signature `{name}`")))
}

fn structure(name: &str) -> Result<Structure, Failure> {
    Structure::builtin(name).ok_or_else(|| Failure(format!("unknown structure `{name}`")))
}

fn interpretation(arg: &str) -> Result<Interpretation, Failure> {
    if arg == "paper" {
        return Ok(paper_interpretation());
    }
    let text = fs::read_to_string(arg).map_err(|e| Failure(format!("{arg}: {e}")))?;
    Ok(Interpretation::from_manifest(&text)?)
}

fn parse_input(io: &mut Io, input: &Input, sig: &Signature) -> Result<Formula, Failure> {
    let text = io.read_input(input)?;
    Ok(parse(&text, sig)?)
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

fn execute(io: &mut Io, command: Command) -> Result<i32, Failure> {
    match command {
        Command::Parse { input, signature: sig } => {
            let f = parse_input(io, &input, &signature(&sig)?)?;
            if io.json {
                let m = f.measure();
                let free: Vec<String> = f.free_vars().into_iter().collect();
                io.line(json!({"formula": f.to_string(), "nodes": m.nodes, "depth": m.depth, "free": free}).to_string())?;
            } else {
                io.line(f.to_string())?;
            }
            Ok(0)
        }
        Command::Eval {
            input,
            structure: name,
            bound,
            assign,
        } => {
            let s = structure(&name)?;
            let f = parse_input(io, &input, s.signature())?;
            let a = Assignment::parse(&assign).map_err(Failure)?;
            let r = eval(&f, &s, &a, check_bound(bound)?)?;
            if io.json {
                io.line(json!({"value": r.value, "bound": r.bound, "visited": r.assignments_visited}).to_string())?;
            } else {
                io.line(format!("{} (bound {}, {} values visited)", r.value, r.bound, r.assignments_visited))?;
            }
            Ok(if r.value { 0 } else { 1 })
        }
        Command::Stability {
            input,
            structure: name,
            bounds,
        } => {
            let s = structure(&name)?;
            let f = parse_input(io, &input, s.signature())?;
            for &b in &bounds {
                check_bound(b)?;
            }
            let r = stability(&f, &s, &bounds)?;
            if io.json {
                let values: Vec<_> = r.values.iter().map(|(b, v)| json!({"bound": b, "value": v})).collect();
                io.line(json!({"values": values, "stable": r.stable}).to_string())?;
            } else {
                for (b, v) in &r.values {
                    io.line(format!("bound {b}: {v}"))?;
                }
                io.line(if r.stable { "stable" } else { "unstable" })?;
            }
            Ok(0)
        }
        Command::Translate {
            input,
            interp,
            manifest,
        } => {
            let i = interpretation(&interp)?;
            if manifest {
                if io.json {
                    io.line(json!({"interpretation": i.name(), "manifest": i.to_manifest()}).to_string())?;
                } else {
                    write!(io.out, "{}", i.to_manifest())?;
                }
                return Ok(0);
            }
            let f = parse_input(io, &input, i.source())?;
            let t = i.translate_fresh(&f)?;
            if io.json {
                io.line(json!({"formula": f.to_string(), "translated": t.to_string(), "interpretation": i.name()}).to_string())?;
            } else {
                io.line(t.to_string())?;
            }
            Ok(0)
        }
        Command::Check {
            what: CheckCommand::Lemma { bound },
        } => {
            let r = check_lemma(check_bound(bound)?, io.jobs)?;
            io.counterexamples(&r.counterexamples)?;
            if io.json {
                io.line(
                    json!({
                        "command": "check lemma",
                        "bound": r.bound,
                        "items": r.items,
                        "pairs": r.pairs,
                        "counterexamples": r.counterexamples.len(),
                        "passed": r.passed(),
                    })
                    .to_string(),
                )?;
            } else if r.passed() {
                io.line(format!("pass: {} lemma items, {} pairs (bound {})", r.items, r.pairs, r.bound))?;
            } else {
                io.line(format!("fail: {} violations in {} pairs (bound {})", r.counterexamples.len(), r.pairs, r.bound))?;
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Fuzz {
            seed,
            count,
            depth,
            nodes,
            bound,
            interp,
            mutate,
            shrink: minimize,
        } => {
            let base = interpretation(&interp)?;
            let targets: Vec<Interpretation> = match mutate.as_deref() {
                None => vec![base],
                Some("all") => mutations().iter().map(|m| m.apply(&base)).collect::<Result<_, _>>()?,
                Some(name) => {
                    let m = mutations()
                        .into_iter()
                        .find(|m| m.name == name)
                        .ok_or_else(|| Failure(format!("unknown mutation `{name}`")))?;
                    vec![m.apply(&base)?]
                }
            };
            let mut any = false;
            for i in targets {
                let source = structure_for(i.source())?;
                let target = structure_for(i.target())?;
                let cfg = FuzzConfig {
                    seed,
                    count,
                    max_depth: depth,
                    max_nodes: nodes,
                    bound: check_bound(bound)?,
                    signature: i.source().clone(),
                };
                let r = fuzz_differential(&i, &source, &target, &cfg, io.jobs)?;
                let mut found = r.counterexamples.clone();
                if minimize {
                    let ctx = ShrinkContext {
                        interpretation: &i,
                        source: &source,
                        target: &target,
                    };
                    found = found.iter().map(|c| shrink(c, &ctx)).collect::<Result<_, _>>()?;
                }
                io.counterexamples(&found)?;
                any |= !r.passed();
                if io.json {
                    io.line(
                        json!({
                            "command": "fuzz",
                            "interpretation": i.name(),
                            "seed": seed,
                            "bound": bound,
                            "sentences": r.sentences,
                            "agreements": r.agreements,
                            "counterexamples": found.len(),
                            "passed": r.passed(),
                        })
                        .to_string(),
                    )?;
                } else {
                    io.line(format!(
                        "{}: {}: {} of {} sentences agree (seed {seed}, bound {bound})",
                        verdict(r.passed()),
                        i.name(),
                        r.agreements,
                        r.sentences
                    ))?;
                }
            }
            Ok(if any { 1 } else { 0 })
        }
        Command::Defcheck {
            definition,
            formula,
            params,
            oracle,
            structure: name,
            base,
            bound,
        } => {
            let (d, s, oracle) = match (definition, formula) {
                (Some(entry), _) => {
                    let e = corpus::get(&entry).ok_or_else(|| Failure(format!("unknown corpus entry `{entry}`")))?;
                    let s = structure(name.as_deref().unwrap_or(e.structure))?;
                    (e.definition, s, oracle.unwrap_or_else(|| e.oracle.to_string()))
                }
                (None, Some(text)) => {
                    let s = structure(name.as_deref().unwrap_or("natfull"))?;
                    let sig = match &base {
                        Some(b) => signature(b)?,
                        None => s.signature().clone(),
                    };
                    let graph = parse(&text, &sig)?;
                    let names: Vec<&str> = params.iter().map(String::as_str).collect();
                    let d = Definition::new("Defined", SymbolKind::Relation, &names, graph, sig)?;
                    (d, s, oracle.unwrap_or_else(|| "succ".into()))
                }
                (None, None) => return Err(Failure("give --definition or --formula".into())),
            };
            let r = check_definition_in(&d, &s, &oracle, check_bound(bound)?)?;
            if let Some(c) = &r.counterexample {
                io.line(c.to_json())?;
            }
            if io.json {
                io.line(
                    json!({
                        "command": "defcheck",
                        "graph": d.graph().to_string(),
                        "oracle": oracle,
                        "structure": s.name(),
                        "bound": bound,
                        "tuples": r.tuples,
                        "passed": r.passed(),
                    })
                    .to_string(),
                )?;
            } else {
                io.line(format!(
                    "{}: {} against {oracle} in {}, {} tuples (bound {bound})",
                    verdict(r.passed()),
                    d.graph(),
                    s.name(),
                    r.tuples
                ))?;
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Corpus {
            what: CorpusCommand::List,
        } => {
            for e in corpus::entries() {
                if io.json {
                    io.line(
                        json!({
                            "name": e.name,
                            "structure": e.structure,
                            "oracle": e.oracle,
                            "params": e.definition.params(),
                            "graph": e.definition.graph().to_string(),
                            "description": e.description,
                        })
                        .to_string(),
                    )?;
                } else {
                    io.line(format!(
                        "{}\t{}\t{}({})\t{}",
                        e.name,
                        e.structure,
                        e.oracle,
                        e.definition.params().join(", "),
                        e.definition.graph()
                    ))?;
                }
            }
            Ok(0)
        }
    }
}

/// The built-in structure whose signature has the same symbols as `sig`.
fn structure_for(sig: &Signature) -> Result<Structure, Failure> {
    crate::structures::BUILTIN_STRUCTURES
        .iter()
        .filter_map(|n| Structure::builtin(n))
        .find(|s| s.signature().same_symbols(sig))
        .ok_or_else(|| Failure(format!("no built-in structure for signature `{}`", sig.name())))
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    let mut io = Io {
        stdin,
        out: stdout,
        json: cli.json,
        jobs: cli.jobs,
    };
    match execute(&mut io, cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
