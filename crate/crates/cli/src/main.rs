use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use eqbase_core::assoc::{classify_all, classify_identity};
use eqbase_core::data;
use eqbase_core::harness::{
    find_base, replicate_all, verify_completeness, verify_independence, verify_soundness, verify_spectrum, BaseRecord,
    CompletenessVerdict, Mode, ReplicateConfig,
};
use eqbase_core::kernel::check_script;
use eqbase_core::models::{counterexample, format_model, parse_models, search_models, ModelError, SearchOptions};
use eqbase_core::prover::{prove, prove_staged, staged_script, ProverLimits, ProverOutcome};
use eqbase_core::syntax::{
    format_axiom_file, format_proof_script, format_term, parse_axiom_file, parse_equation, parse_proof_script,
    AxiomFile,
};
use eqbase_core::term::Identity;

#[derive(Parser)]
#[command(name = "eqbase", version, about = "Equational workbench for Boolean algebras over meet and complement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an identity file (.eqb), proof script (.eqp) or model file (.eqm)
    /// and print it back in normal form.
    Parse {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a proof script against an axiom file.
    Check {
        script: PathBuf,
        #[arg(long)]
        axioms: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Try to derive a goal from an axiom file.
    Prove {
        #[arg(long)]
        axioms: PathBuf,
        /// An equation, `NAME: equation`, or `@FILE` holding several goals.
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 60.0)]
        max_seconds: f64,
        /// Prove the goals in order, each one available to the next.
        #[arg(long)]
        staged: bool,
        #[arg(long)]
        emit_proofs: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Search for finite models of an axiom file.
    Models {
        #[arg(long)]
        axioms: PathBuf,
        #[arg(long)]
        size: usize,
        /// Name of an identity the models must violate.
        #[arg(long)]
        violates: Option<String>,
        #[arg(long)]
        up_to_iso: bool,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Classify identities of associative type of length 3.
    ClassifyAssoc {
        /// An identity to classify; all classes are listed when omitted.
        #[arg(long)]
        goal: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run soundness, completeness, spectrum and independence checks on one base.
    VerifyBase {
        /// A registry name such as "{A6, J5'}".
        name: Option<String>,
        /// Check the identities of this file instead of a registry entry.
        #[arg(long)]
        axioms: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long)]
        staged: bool,
        #[arg(long, default_value_t = 60.0)]
        max_seconds: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        emit_proofs: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every check on every registered base and the shipped proof scripts.
    Replicate {
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Only run the bases and scripts of this section (repeatable).
        #[arg(long)]
        section: Vec<u8>,
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Also run the unstaged prover where a ladder is used.
        #[arg(long)]
        unstaged_bonus: bool,
        #[arg(long)]
        emit_proofs: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Exit codes.
const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const EXHAUSTED: u8 = 3;

/// An error carrying its exit code.
struct Exit(u8, anyhow::Error);

fn usage(e: impl Into<anyhow::Error>) -> Exit {
    Exit(USAGE, e.into())
}

fn model_err(e: ModelError) -> Exit {
    match e {
        ModelError::ResourceExhausted { .. } => Exit(EXHAUSTED, e.into()),
        _ => usage(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)
}

fn load_axioms(path: &Path) -> Result<AxiomFile, Exit> {
    parse_axiom_file(&read(path)?).with_context(|| format!("in {}", path.display())).map_err(usage)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display())).map_err(usage)?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display())).map_err(usage)
}

/// A file-system friendly version of a goal or base name.
fn slug(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else if c == '\'' {
                'p'
            } else {
                '_'
            }
        })
        .collect();
    s.trim_matches('_').split('_').filter(|p| !p.is_empty()).collect::<Vec<_>>().join("_")
}

fn parse_goal_text(text: &str) -> Result<Identity, Exit> {
    let (name, eq) = match text.split_once(':') {
        Some((n, e)) if !n.contains('=') => (n.trim().to_string(), e),
        _ => ("goal".to_string(), text),
    };
    let (l, r) = parse_equation(eq).map_err(|e| usage(anyhow!("goal: {e}")))?;
    Ok(Identity::new(name, l, r))
}

fn parse_goals(arg: &str) -> Result<Vec<Identity>, Exit> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let f = load_axioms(Path::new(path))?;
            if f.identities.is_empty() {
                return Err(usage(anyhow!("{path} contains no goals")));
            }
            Ok(f.identities)
        }
        None => Ok(vec![parse_goal_text(arg)?]),
    }
}

fn lookup_identity(name: &str, axioms: &AxiomFile) -> Result<Identity, Exit> {
    if let Some(i) = axioms.get(name) {
        return Ok(i.clone());
    }
    if let Some(i) = data::catalog().get(name) {
        return Ok(i.clone());
    }
    if name.contains('=') {
        return parse_goal_text(name);
    }
    Err(usage(anyhow!("unknown identity `{name}`")))
}

fn run(cmd: Command) -> Result<u8, Exit> {
    match cmd {
        Command::Parse { file, common } => cmd_parse(&file, common.format),
        Command::Check { script, axioms, common } => cmd_check(&script, &axioms, common.format),
        Command::Prove { axioms, goal, max_seconds, staged, emit_proofs, common } => {
            cmd_prove(&axioms, &goal, max_seconds, staged, emit_proofs.as_deref(), common.format)
        }
        Command::Models { axioms, size, violates, up_to_iso, limit, workers, common } => {
            cmd_models(&axioms, size, violates.as_deref(), up_to_iso, limit, workers, common.format)
        }
        Command::ClassifyAssoc { goal, common } => cmd_classify(goal.as_deref(), common.format),
        Command::VerifyBase { name, axioms, size, staged, max_seconds, workers, emit_proofs, common } => {
            let base = match (name, axioms) {
                (Some(n), None) => find_base(&n).ok_or_else(|| usage(anyhow!("no registered base named {n}")))?,
                (None, Some(p)) => BaseRecord::from_file(&p.display().to_string(), &load_axioms(&p)?),
                _ => return Err(usage(anyhow!("give either a base name or --axioms"))),
            };
            cmd_verify_base(&base, size, staged, max_seconds, workers, emit_proofs.as_deref(), common.format)
        }
        Command::Replicate { report, size, workers, section, max_seconds, unstaged_bonus, emit_proofs, common } => {
            let mut config = ReplicateConfig {
                sections: (!section.is_empty()).then_some(section),
                max_size: size,
                workers,
                unstaged_bonus,
                ..ReplicateConfig::default()
            };
            if let Some(s) = max_seconds {
                config.limits.max_seconds = s;
                config.claimed_limits.max_seconds = s;
            }
            cmd_replicate(&config, report.as_deref(), emit_proofs.as_deref(), common.format)
        }
    }
}

fn cmd_parse(file: &Path, format: Format) -> Result<u8, Exit> {
    let text = read(file)?;
    let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
    let ctx = || format!("in {}", file.display());
    match ext {
        "eqb" => {
            let f = parse_axiom_file(&text).with_context(ctx).map_err(usage)?;
            match format {
                Format::Text => print!("{}", format_axiom_file(&f)),
                Format::Json => print_json(&json!({
                    "kind": "identities",
                    "identities": f.identities.iter().map(|i| json!({
                        "name": i.name, "lhs": format_term(&i.lhs), "rhs": format_term(&i.rhs)
                    })).collect::<Vec<_>>(),
                })),
            }
        }
        "eqp" => {
            let s = parse_proof_script(&text).with_context(ctx).map_err(usage)?;
            match format {
                Format::Text => print!("{}", format_proof_script(&s)),
                Format::Json => print_json(&json!({
                    "kind": "script",
                    "lemmas": s.lemmas().map(|l| json!({"name": l.name, "steps": l.steps.len()})).collect::<Vec<_>>(),
                    "steps": s.step_count(),
                })),
            }
        }
        "eqm" => {
            let ms = parse_models(&text).with_context(ctx).map_err(usage)?;
            match format {
                Format::Text => {
                    for m in &ms {
                        print!("{}", format_model(m));
                    }
                }
                Format::Json => print_json(&json!({"kind": "models", "models": ms})),
            }
        }
        _ => return Err(usage(anyhow!("unknown file kind `{}`; expected .eqb, .eqp or .eqm", file.display()))),
    }
    Ok(OK)
}

fn cmd_check(script: &Path, axioms: &Path, format: Format) -> Result<u8, Exit> {
    let ax = load_axioms(axioms)?;
    let s = parse_proof_script(&read(script)?).with_context(|| format!("in {}", script.display())).map_err(usage)?;
    let v = check_script(&s, &ax);
    match format {
        Format::Text => println!("{v}"),
        Format::Json => print_json(&json!({
            "pass": v.all_pass(), "passed": v.passed(), "steps": v.checked_steps(), "lemmas": v.lemmas,
        })),
    }
    Ok(if v.all_pass() { OK } else { FAILED })
}

fn cmd_prove(
    axioms: &Path,
    goal: &str,
    max_seconds: f64,
    staged: bool,
    emit: Option<&Path>,
    format: Format,
) -> Result<u8, Exit> {
    let ax = load_axioms(axioms)?;
    let goals = parse_goals(goal)?;
    if max_seconds <= 0.0 {
        return Err(usage(anyhow!("--max-seconds must be positive")));
    }
    let limits = ProverLimits::default().with_seconds(max_seconds);
    let outcomes: Vec<ProverOutcome> = if staged {
        prove_staged(&ax.identities, &goals, &limits)
    } else {
        goals.iter().map(|g| prove(&ax.identities, g, &limits)).collect()
    };

    let mut written = Vec::new();
    if let Some(dir) = emit {
        if staged {
            if let Some(s) = staged_script(&outcomes) {
                let p = dir.join("staged.eqp");
                write_file(&p, &format_proof_script(&s))?;
                written.push(p);
            }
        } else {
            for (g, o) in goals.iter().zip(&outcomes) {
                if let Some(s) = o.script() {
                    let p = dir.join(format!("{}.eqp", slug(&g.name)));
                    write_file(&p, &format_proof_script(s))?;
                    written.push(p);
                }
            }
        }
    }

    // A failed goal that some small model refutes is a verification failure.
    let mut refuted = Vec::new();
    for (g, o) in goals.iter().zip(&outcomes) {
        if !o.is_proved() {
            for n in 1..=3 {
                let opts = SearchOptions::new(n, ax.identities.clone()).violating(g.clone()).limit(1);
                if let Some(m) = search_models(&opts).ok().and_then(|o| o.models.into_iter().next()) {
                    refuted.push((g.name.clone(), m));
                    break;
                }
            }
        }
    }

    match format {
        Format::Text => {
            for (g, o) in goals.iter().zip(&outcomes) {
                let s = o.stats();
                println!(
                    "{}: {} ({} iterations, {} generated, {} kept, {:.2}s)",
                    g.name,
                    o.kind(),
                    s.iterations,
                    s.generated,
                    s.kept,
                    s.elapsed.as_secs_f64()
                );
            }
            for (g, m) in &refuted {
                println!("{g} fails in this model of the axioms:\n{}", format_model(m));
            }
            if emit.is_some() {
                for p in &written {
                    println!("wrote {}", p.display());
                }
            } else if outcomes.iter().all(ProverOutcome::is_proved) {
                let script = if staged {
                    staged_script(&outcomes).expect("all proved")
                } else {
                    let mut all = eqbase_core::syntax::ProofScriptFile::default();
                    for o in &outcomes {
                        all.items.extend(o.script().expect("proved").items.iter().cloned());
                    }
                    all
                };
                print!("{}", format_proof_script(&script));
            }
        }
        Format::Json => print_json(&json!({
            "goals": goals.iter().zip(&outcomes).map(|(g, o)| json!({
                "goal": g.name,
                "outcome": o.kind(),
                "stats": o.stats(),
                "seconds": o.stats().elapsed.as_secs_f64(),
            })).collect::<Vec<_>>(),
            "refuted": refuted.iter().map(|(g, m)| json!({"goal": g, "model": format_model(m)})).collect::<Vec<_>>(),
            "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        })),
    }
    Ok(if outcomes.iter().all(ProverOutcome::is_proved) {
        OK
    } else if !refuted.is_empty() {
        FAILED
    } else {
        EXHAUSTED
    })
}

fn cmd_models(
    axioms: &Path,
    size: usize,
    violates: Option<&str>,
    up_to_iso: bool,
    limit: Option<usize>,
    workers: usize,
    format: Format,
) -> Result<u8, Exit> {
    let ax = load_axioms(axioms)?;
    if size == 0 || size > 255 {
        return Err(usage(anyhow!("--size must be between 1 and 255")));
    }
    let mut opts = SearchOptions::new(size, ax.identities.clone()).workers(workers.max(1));
    if let Some(v) = violates {
        opts = opts.violating(lookup_identity(v, &ax)?);
    }
    if up_to_iso {
        opts = opts.up_to_iso();
    }
    if let Some(l) = limit {
        opts = opts.limit(l);
    }
    let out = search_models(&opts).map_err(model_err)?;
    match format {
        Format::Text => {
            let target = opts.violate.as_ref();
            for m in &out.models {
                if let Some(t) = target {
                    let a = counterexample(m, t).expect("model violates the target");
                    let a: Vec<String> = a.iter().map(|(v, k)| format!("{v}={k}")).collect();
                    println!("# violates {} at {}", t.name, a.join(", "));
                }
                print!("{}", format_model(m));
            }
            println!("# {} model(s), {} nodes", out.models.len(), out.nodes);
        }
        Format::Json => {
            print_json(&json!({"size": size, "count": out.models.len(), "nodes": out.nodes, "models": out.models}))
        }
    }
    Ok(OK)
}

fn cmd_classify(goal: Option<&str>, format: Format) -> Result<u8, Exit> {
    match goal {
        Some(g) => {
            let id = parse_goal_text(g)?;
            let class = classify_identity(&id).map_err(|e| Exit(FAILED, e.into()))?;
            match format {
                Format::Text => println!(
                    "{}  (representative {} = {}, {} members)",
                    class.label,
                    format_term(&class.representative.lhs),
                    format_term(&class.representative.rhs),
                    class.members.len()
                ),
                Format::Json => print_json(&class),
            }
        }
        None => {
            let classes = classify_all();
            match format {
                Format::Text => {
                    for c in &classes {
                        println!(
                            "{:4} {} = {}  ({} members)",
                            c.label,
                            format_term(&c.representative.lhs),
                            format_term(&c.representative.rhs),
                            c.members.len()
                        );
                    }
                    println!("{} classes", classes.len());
                }
                Format::Json => print_json(&classes),
            }
        }
    }
    Ok(OK)
}

fn cmd_verify_base(
    base: &BaseRecord,
    size: usize,
    staged: bool,
    max_seconds: f64,
    workers: usize,
    emit: Option<&Path>,
    format: Format,
) -> Result<u8, Exit> {
    if max_seconds <= 0.0 {
        return Err(usage(anyhow!("--max-seconds must be positive")));
    }
    let limits = ProverLimits::default().with_seconds(max_seconds);
    let mode = if staged { Mode::Staged } else { Mode::Unstaged };
    let soundness = verify_soundness(base);
    let completeness = verify_completeness(base, mode, &limits, size);
    let spectrum = verify_spectrum(base, size, workers.max(1));
    let independence = verify_independence(base, size, workers.max(1));
    if let Some(dir) = emit {
        for (name, s) in &completeness.scripts {
            write_file(&dir.join(format!("{}-{}.eqp", slug(&base.name), slug(name))), &format_proof_script(s))?;
        }
    }
    match format {
        Format::Text => {
            println!("{} ({} axioms)", base.name, base.axioms.len());
            println!("soundness     {}", if soundness.pass { "pass" } else { "FAIL" });
            for f in &soundness.failures {
                println!("  {} fails in {}", f.axiom, f.model);
            }
            println!("completeness  {:?} ({})", completeness.verdict, completeness.mode);
            for g in &completeness.goals {
                println!("  {:8} {} ({} kept)", g.goal, g.outcome, g.stats.kept);
            }
            for r in &completeness.refutations {
                println!("  {} fails in:\n{}", r.goal, r.model);
            }
            let note = if spectrum.exhausted { ", then out of nodes" } else { "" };
            println!("spectrum      {:?} {}{note}", spectrum.counts, if spectrum.pass { "pass" } else { "differs" });
            for i in &independence {
                match &i.witness {
                    Some(w) => println!("independent   {} (witness of size {})\n{}", i.axiom, w.size, w.model),
                    None => println!("inconclusive  {} (no witness up to size {})", i.axiom, i.bound),
                }
            }
        }
        Format::Json => print_json(&json!({
            "name": base.name,
            "soundness": soundness,
            "completeness": completeness,
            "spectrum": spectrum.counts,
            "spectrum_pass": spectrum.pass,
            "spectrum_exhausted": spectrum.exhausted,
            "independence": independence,
        })),
    }
    Ok(if !soundness.pass || completeness.verdict == CompletenessVerdict::Refuted || !spectrum.pass {
        FAILED
    } else if completeness.verdict == CompletenessVerdict::Inconclusive
        || spectrum.exhausted
        || independence.iter().any(|i| i.bound < size)
    {
        EXHAUSTED
    } else {
        OK
    })
}

fn cmd_replicate(
    config: &ReplicateConfig,
    report: Option<&Path>,
    emit: Option<&Path>,
    format: Format,
) -> Result<u8, Exit> {
    if config.max_size == 0 {
        return Err(usage(anyhow!("--size must be positive")));
    }
    let r = replicate_all(config);
    if let Some(path) = report {
        let text = serde_json::to_string_pretty(&r).expect("serializable") + "\n";
        write_file(path, &text)?;
    }
    if let Some(dir) = emit {
        for b in &r.bases {
            for (name, s) in &b.completeness.scripts {
                write_file(&dir.join(format!("{}-{}.eqp", slug(&b.name), slug(name))), &format_proof_script(s))?;
            }
        }
    }
    match format {
        Format::Text => println!("{r}"),
        Format::Json => print_json(&r),
    }
    if r.hard_failures.is_empty() {
        Ok(OK)
    } else {
        Err(Exit(FAILED, anyhow!("{} hard failure(s)", r.hard_failures.len())))
    }
}
