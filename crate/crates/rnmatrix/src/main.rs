use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use rnmatrix::config::Budgets;
use rnmatrix::formula::{enumerate_corpus, Closure, Signature};
use rnmatrix::hilbert::{check_proof, search_proof, Proof, ProofSystem};
use rnmatrix::kripke::{kripke_check, BoundedVerdict, FrameClass};
use rnmatrix::levels::{check_consequence_n, check_validity_n_in, default_fragment};
use rnmatrix::matrix::{matrix_for, SystemName};
use rnmatrix::parser::parse;
use rnmatrix::restriction::Restriction;
use rnmatrix::runner::{
    compare_engines, replay, run_corpus, ResultRecord, RunConfig, SemanticsKind,
};
use rnmatrix::valuation::Verdict;

#[derive(Parser)]
#[command(
    name = "rnmatrix",
    version,
    about = "Decision procedures for modal logics over non-deterministic truth-snapshot matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a system's truth tables
    Table {
        #[arg(long)]
        system: SystemName,
        #[arg(long)]
        json: bool,
    },
    /// Decide validity, or consequence when premises are given
    Check {
        #[arg(long)]
        system: SystemName,
        #[arg(long, default_value = "nmatrix")]
        semantics: String,
        /// Comma-separated restriction names for rn semantics (defaults to
        /// the set matching the system name)
        #[arg(long, value_delimiter = ',')]
        axioms: Option<Vec<String>>,
        /// Close the system under necessitation via level valuations
        #[arg(long)]
        with_n: bool,
        #[arg(long)]
        goal: String,
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Show the level-valuation filtration for a goal
    Levels {
        #[arg(long)]
        system: SystemName,
        #[arg(long, default_value = "nmatrix")]
        semantics: String,
        #[arg(long, value_delimiter = ',')]
        axioms: Option<Vec<String>>,
        #[arg(long)]
        goal: String,
        /// Semicolon-separated fragment; defaults to the goal's closure plus
        /// boxes of formulas the base set forces
        #[arg(long)]
        fragment: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a Hilbert-style proof
    Prove {
        #[arg(long)]
        system: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Check a proof file (JSON list of {formula, rule, refs})
    CheckProof {
        #[arg(long)]
        system: String,
        #[arg(long)]
        file: PathBuf,
        /// Defaults to the proof's final line
        #[arg(long)]
        goal: Option<String>,
        #[arg(long = "premise")]
        premises: Vec<String>,
    },
    /// Bounded Kripke countermodel search
    Kripke {
        #[arg(long)]
        frames: FrameClass,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a formula corpus, one JSON record per line; or verify a record
    /// file with --replay
    Corpus {
        #[arg(long, default_value = "M")]
        system: SystemName,
        #[arg(long, default_value = "nmatrix")]
        semantics: String,
        #[arg(long, value_delimiter = ',')]
        axioms: Option<Vec<String>>,
        #[arg(long)]
        with_n: bool,
        #[arg(long, default_value = "p,q", value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_connectives: usize,
        /// Read formulas (one per line) instead of enumerating
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write records here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        /// Verify the witnesses in an existing record file and exit
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Run the refined matrix against its restriction-based counterpart
    Compare {
        #[arg(long)]
        system: SystemName,
        #[arg(long, default_value = "p,q", value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_connectives: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn parse_restrictions(axioms: &Option<Vec<String>>) -> anyhow::Result<Option<Vec<Restriction>>> {
    match axioms {
        None => Ok(None),
        Some(names) => {
            let mut out = Vec::with_capacity(names.len());
            for n in names {
                out.push(n.parse::<Restriction>()?);
            }
            Ok(Some(out))
        }
    }
}

fn build_config(
    system: SystemName,
    semantics: &str,
    axioms: &Option<Vec<String>>,
    with_n: bool,
    budgets: &Budgets,
) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::new(system, semantics.parse::<SemanticsKind>()?);
    cfg.restrictions = parse_restrictions(axioms)?;
    cfg.necessitation = with_n;
    cfg.budgets = budgets.clone();
    cfg.engine()?; // surface bad restriction sets immediately
    Ok(cfg)
}

fn verdict_json(verdict: &Verdict) -> serde_json::Value {
    match verdict {
        Verdict::Valid => serde_json::json!({"status": "valid"}),
        Verdict::Countermodel(v) => serde_json::json!({
            "status": "countermodel",
            "witness": v.witness_entries(),
        }),
    }
}

fn print_verdict(verdict: &Verdict, json: bool) {
    if json {
        println!("{}", verdict_json(verdict));
        return;
    }
    match verdict {
        Verdict::Valid => println!("valid"),
        Verdict::Countermodel(v) => {
            println!("countermodel:");
            println!("{v}");
        }
    }
}

fn corpus_lines(
    input: &Option<PathBuf>,
    vars: &[String],
    max_connectives: usize,
    signature: Signature,
    budgets: &Budgets,
) -> anyhow::Result<Vec<String>> {
    match input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(text
                .lines()
                .map(|l| l.trim().to_string())
                .filter(|l| !l.is_empty())
                .collect())
        }
        None => {
            let formulas =
                enumerate_corpus(vars, max_connectives, signature, budgets.corpus_cap)?;
            Ok(formulas.iter().map(|f| f.to_string()).collect())
        }
    }
}

fn main() {
    // die quietly when the reader goes away, as in `rnmatrix table | head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let budgets = Budgets::from_env();
    match cli.command {
        Command::Table { system, json } => {
            let m = matrix_for(system);
            if json {
                println!("{}", m.to_json());
            } else {
                println!("{}", m.render_table());
            }
        }
        Command::Check {
            system,
            semantics,
            axioms,
            with_n,
            goal,
            premises,
            json,
        } => {
            let cfg = build_config(system, &semantics, &axioms, with_n, &budgets)?;
            let goal = parse(&goal, cfg.signature())?;
            let premises = premises
                .iter()
                .map(|p| parse(p, cfg.signature()))
                .collect::<Result<Vec<_>, _>>()?;
            let engine = cfg.engine()?;
            if with_n {
                if premises.is_empty() {
                    let out = rnmatrix::levels::check_validity_n(&engine, &goal, &budgets)?;
                    print_verdict(&out.verdict, json);
                } else {
                    let out = check_consequence_n(&engine, &premises, &goal, &budgets)?;
                    if json {
                        let mut value = verdict_json(&out.outcome.verdict);
                        value["entailed"] = serde_json::json!(out.entailed);
                        value["checked"] = serde_json::json!(out.outcome.goal.to_string());
                        println!("{value}");
                    } else if out.entailed {
                        let subset: Vec<String> = out
                            .witness_subset
                            .unwrap_or_default()
                            .iter()
                            .map(|f| f.to_string())
                            .collect();
                        println!("entailed (via {})", if subset.is_empty() {
                            "the goal alone".to_string()
                        } else {
                            subset.join(", ")
                        });
                    } else {
                        println!("not entailed; countermodel for {}:", out.outcome.goal);
                        if let Verdict::Countermodel(v) = &out.outcome.verdict {
                            println!("{v}");
                        }
                    }
                }
            } else if premises.is_empty() {
                let verdict = engine.check_validity(&goal, budgets.free_bits)?;
                print_verdict(&verdict, json);
            } else {
                let verdict = engine.check_consequence(&premises, &goal, budgets.free_bits)?;
                print_verdict(&verdict, json);
            }
        }
        Command::Levels {
            system,
            semantics,
            axioms,
            goal,
            fragment,
            json,
        } => {
            let cfg = build_config(system, &semantics, &axioms, true, &budgets)?;
            let goal = parse(&goal, cfg.signature())?;
            let engine = cfg.engine()?;
            let fragment = match fragment {
                Some(spec) => {
                    let formulas = spec
                        .split(';')
                        .map(|s| parse(s.trim(), cfg.signature()))
                        .collect::<Result<Vec<_>, _>>()?;
                    Closure::of_all(&formulas)
                }
                None => default_fragment(&engine, &goal, &budgets)?,
            };
            let out = check_validity_n_in(&engine, &goal, &fragment, budgets.level_free_bits)?;
            if json {
                let stages: Vec<serde_json::Value> = out
                    .trace
                    .stages()
                    .iter()
                    .map(|s| {
                        serde_json::json!({
                            "level": s.level,
                            "survivors": s.survivors.len(),
                            "newly_forced": s
                                .newly_forced
                                .iter()
                                .map(|&i| out.trace.fragment().formula(i).to_string())
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let mut value = verdict_json(&out.verdict);
                value["fragment"] = serde_json::json!(out
                    .trace
                    .fragment()
                    .items()
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>());
                value["stages"] = serde_json::json!(stages);
                value["fixpoint_level"] = serde_json::json!(out.trace.fixpoint_level());
                println!("{value}");
            } else {
                println!("{}", out.trace);
                match &out.verdict {
                    Verdict::Valid => println!("goal {}: valid", out.goal),
                    Verdict::Countermodel(v) => {
                        println!("goal {}: countermodel survives the fixpoint", out.goal);
                        println!("{v}");
                    }
                }
            }
        }
        Command::Prove { system, goal, depth } => {
            let system: ProofSystem = system.parse()?;
            let goal = parse(&goal, Signature::Unimodal)?;
            match search_proof(&system, &goal, depth, &budgets)? {
                Some(proof) => println!("{}", proof.to_json()),
                None => println!("no proof found within depth {depth}"),
            }
        }
        Command::CheckProof {
            system,
            file,
            goal,
            premises,
        } => {
            let system: ProofSystem = system.parse()?;
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let proof = Proof::from_json(&text)?;
            let premises = premises
                .iter()
                .map(|p| parse(p, Signature::Unimodal))
                .collect::<Result<Vec<_>, _>>()?;
            let goal = match goal {
                Some(g) => parse(&g, Signature::Unimodal)?,
                None => match proof.conclusion() {
                    Some(f) => f.clone(),
                    None => bail!("the proof file contains no lines"),
                },
            };
            match check_proof(&system, &proof, &premises, &goal) {
                Ok(()) => println!("ok: {} lines establish {}", proof.lines.len(), goal),
                Err(d) => println!("rejected: {d}"),
            }
        }
        Command::Kripke {
            frames,
            formula,
            max_worlds,
            json,
        } => {
            let goal = parse(&formula, Signature::Unimodal)?;
            let verdict = kripke_check(frames, &goal, max_worlds, &budgets)?;
            if json {
                let value = match &verdict {
                    BoundedVerdict::Countermodel { model, world } => serde_json::json!({
                        "status": "countermodel",
                        "world": world,
                        "model": model,
                    }),
                    BoundedVerdict::NoCountermodelUpTo(n) => serde_json::json!({
                        "status": "no-countermodel",
                        "max_worlds": n,
                    }),
                };
                println!("{value}");
            } else {
                println!("{verdict}");
            }
        }
        Command::Corpus {
            system,
            semantics,
            axioms,
            with_n,
            vars,
            max_connectives,
            input,
            output,
            replay: replay_path,
        } => {
            if let Some(path) = replay_path {
                let text = fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let records = text
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(serde_json::from_str::<ResultRecord>)
                    .collect::<Result<Vec<_>, _>>()?;
                let outcomes = replay(&records, &budgets);
                let bad: Vec<_> = outcomes.iter().filter(|o| !o.ok).collect();
                for o in &bad {
                    eprintln!("record {}: {}", o.index, o.detail);
                }
                println!("replayed {} records, {} failed", outcomes.len(), bad.len());
                if !bad.is_empty() {
                    bail!("{} witness(es) failed to replay", bad.len());
                }
                return Ok(());
            }
            let cfg = build_config(system, &semantics, &axioms, with_n, &budgets)?;
            let lines = corpus_lines(&input, &vars, max_connectives, cfg.signature(), &budgets)?;
            let records = run_corpus(&cfg, &lines);
            let mut rendered = String::new();
            for r in &records {
                rendered.push_str(&serde_json::to_string(r)?);
                rendered.push('\n');
            }
            match output {
                Some(path) => {
                    let mut f = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    f.write_all(rendered.as_bytes())?;
                }
                None => print!("{rendered}"),
            }
        }
        Command::Compare {
            system,
            vars,
            max_connectives,
            input,
        } => {
            let lines = corpus_lines(&input, &vars, max_connectives, Signature::Unimodal, &budgets)?;
            let report = compare_engines(system, &budgets, &lines);
            println!(
                "system {}: {} formulas, {} disagreements, {} errors",
                report.system,
                report.total,
                report.disagreements.len(),
                report.errors
            );
            for d in &report.disagreements {
                println!(
                    "  {} -> nmatrix {}, rn {}",
                    d.formula, d.nmatrix.status, d.rn.status
                );
            }
        }
    }
    Ok(())
}
