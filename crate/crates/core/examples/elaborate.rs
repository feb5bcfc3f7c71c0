//! Turns a proof sketch into a kernel-checkable proof script.
//!
//! A sketch looks like a proof script whose steps omit the position and the
//! substitution and may skip several rewrites at once:
//!
//! ```text
//! lemma L from J1, J2, J5: x ^ x' = y ^ y'
//!   x ^ x'
//!   = x ^ ((x ^ y)' ^ (x ^ y')') by J5
//!   = (x ^ y)' ^ (x ^ (x ^ y')') by J1, J2
//! ```
//!
//! `by` lists the rules the gap may use (all available rules when omitted).
//! Every gap is bridged by a short search; gaps the search cannot close are
//! handed to the prover, whose lemmas are inserted before the current one.
//! The output is written in the explicit `.eqp` form.
//!
//! Usage: `cargo run --example elaborate -- AXIOMS.eqb SKETCH OUT.eqp`

use std::fs;
use std::process::ExitCode;

use eqbase_core::elaborate::bridge;
use eqbase_core::kernel::{apply_step, Environment, Step};
use eqbase_core::prover::{prove, ProverLimits};
use eqbase_core::syntax::{
    format_proof_script, format_term, parse_axiom_file, parse_term, LemmaBlock, ProofScriptFile, ScriptItem, ScriptStep,
};
use eqbase_core::term::{Identity, Position, Substitution, Term};

struct SketchLemma {
    header: String,
    name: String,
    hypotheses: Vec<String>,
    initial: String,
    gaps: Vec<(String, Option<Vec<String>>, usize)>,
    comments: Vec<String>,
}

fn zero_term(src: &str, zero: bool) -> Result<Term, String> {
    // The sketch may use 0 after an abbreviation; parse through the script
    // parser's rules by substituting a marker variable.
    let text = if zero { src.replace('0', "zzzero") } else { src.to_string() };
    let t = parse_term(&text).map_err(|e| format!("{e} in `{src}`"))?;
    let mut s = Substitution::new();
    s.insert("zzzero", Term::var("0"));
    Ok(t.substitute(&s))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 4 {
        eprintln!("usage: elaborate AXIOMS.eqb SKETCH OUT.eqp");
        return ExitCode::from(2);
    }
    match run(&args[1], &args[2], &args[3]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}

fn run(axioms_path: &str, sketch_path: &str, out_path: &str) -> Result<(), String> {
    let axioms =
        parse_axiom_file(&fs::read_to_string(axioms_path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let sketch = fs::read_to_string(sketch_path).map_err(|e| e.to_string())?;
    let mut env = Environment::from_axioms(&axioms);
    let mut out = String::new();
    let mut lemma_names: Vec<String> = Vec::new();
    let mut pending: Option<SketchLemma> = None;
    let mut zero = false;
    let mut leading = true;
    let mut failures = 0;

    let mut flush = |pending: &mut Option<SketchLemma>,
                     env: &mut Environment,
                     lemma_names: &mut Vec<String>,
                     out: &mut String,
                     zero: bool|
     -> Result<(), String> {
        let Some(l) = pending.take() else { return Ok(()) };
        let mut pre = String::new();
        let mut cur = env.expand(&zero_term(&l.initial, zero)?);
        let mut steps = Vec::new();
        for (target_src, rules, line) in &l.gaps {
            let target = env.expand(&zero_term(target_src, zero)?);
            let rules: Vec<String> = match rules {
                Some(r) => r.clone(),
                None => l.hypotheses.iter().chain(lemma_names.iter()).cloned().collect(),
            };
            let found = bridge(&cur, &target, env, &rules, 6).or_else(|| {
                let all: Vec<String> = l.hypotheses.iter().chain(lemma_names.iter()).cloned().collect();
                let r = bridge(&cur, &target, env, &all, 5);
                if let Some(s) = &r {
                    let used: Vec<&str> = s.iter().map(|x| x.rule.as_str()).collect();
                    eprintln!("note: {} line {line}: cited rules insufficient; used {:?}", l.name, used);
                }
                r
            });
            let found = match found {
                Some(f) => f,
                None => match prove_gap(&cur, &target, env, &l, lemma_names, *line, &mut pre) {
                    Some(f) => f,
                    None => {
                        eprintln!(
                            "error: {} line {line}: no bridge from {} to {}",
                            l.name,
                            format_term(&cur),
                            format_term(&target)
                        );
                        failures += 1;
                        return Ok(());
                    }
                },
            };
            for s in found {
                cur = apply_step(&cur, &s, env).map_err(|e| format!("{}: {e}", l.name))?;
                let sub = s.substitution.clone().unwrap_or_default();
                let sub: Substitution = sub.iter().map(|(v, t)| (v.clone(), env.contract(t))).collect();
                steps.push(ScriptStep {
                    term: env.contract(&s.result),
                    rule: s.rule.clone(),
                    direction: s.direction,
                    position: s.position.clone(),
                    substitution: Some(sub.without_identity_bindings()),
                    line: 0,
                });
            }
        }
        let block = LemmaBlock {
            name: l.name.clone(),
            hypotheses: l.hypotheses.clone(),
            statement: None,
            initial: zero_term(&l.initial, zero)?,
            steps,
            line: 0,
        };
        let file = ProofScriptFile { header: vec![], items: vec![ScriptItem::Lemma(block)] };
        let text = format_proof_script(&file);
        let mut lines = text.lines();
        lines.next();
        out.push_str(&pre);
        out.push('\n');
        for c in &l.comments {
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&l.header);
        out.push('\n');
        for line in lines {
            out.push_str(line);
            out.push('\n');
        }
        // Register the claim from the header statement when present.
        let header_stmt = l.header.split_once(':').map(|(_, s)| s.trim().to_string()).unwrap_or_default();
        let (lhs, rhs) = if header_stmt.is_empty() {
            (env.expand(&zero_term(&l.initial, zero)?), cur.clone())
        } else {
            let (a, b) = header_stmt.split_once('=').ok_or("bad statement")?;
            (env.expand(&zero_term(a.trim(), zero)?), env.expand(&zero_term(b.trim(), zero)?))
        };
        env.add(Identity::new(l.name.clone(), lhs, rhs));
        lemma_names.push(l.name.clone());
        Ok(())
    };

    let mut comment_buf: Vec<String> = Vec::new();
    for (idx, raw) in sketch.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if leading && trimmed.starts_with('#') {
            out.push_str(trimmed);
            out.push('\n');
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        leading = false;
        if trimmed.starts_with('#') {
            match pending.as_mut() {
                Some(p) if !p.initial.is_empty() => {
                    // Comments inside a lemma are kept above it.
                    p.comments.push(trimmed.to_string());
                }
                _ => comment_buf.push(trimmed.to_string()),
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("lemma ") {
            flush(&mut pending, &mut env, &mut lemma_names, &mut out, zero)?;
            let (head, _) = rest.split_once(':').ok_or(format!("line {line}: missing `:`"))?;
            let (name, hyps) = match head.split_once(" from ") {
                Some((n, h)) => (n.trim().to_string(), h.split(',').map(|s| s.trim().to_string()).collect()),
                None => (head.trim().to_string(), vec![]),
            };
            pending = Some(SketchLemma {
                header: trimmed.to_string(),
                name,
                hypotheses: hyps,
                initial: String::new(),
                gaps: vec![],
                comments: std::mem::take(&mut comment_buf),
            });
            continue;
        }
        if trimmed.starts_with("abbrev ") {
            flush(&mut pending, &mut env, &mut lemma_names, &mut out, zero)?;
            out.push('\n');
            for c in comment_buf.drain(..) {
                out.push_str(&c);
                out.push('\n');
            }
            out.push_str(trimmed);
            out.push('\n');
            zero = true;
            // The kernel re-checks the declaration when the output is replayed.
            let body = trimmed
                .strip_prefix("abbrev 0 =")
                .and_then(|s| s.split_once(" by "))
                .ok_or(format!("line {line}: bad abbrev"))?;
            let body_t = parse_term(body.0.trim()).map_err(|e| e.to_string())?;
            if env.get(body.1.trim()).is_none() {
                return Err(format!("line {line}: unknown lemma"));
            }
            let mut s = Substitution::new();
            s.insert(body_t.vars()[0].as_ref(), Term::var(eqbase_core::kernel::ZERO_VAR));
            env.set_zero_unchecked(body_t.substitute(&s));
            continue;
        }
        let Some(p) = pending.as_mut() else { return Err(format!("line {line}: step outside lemma")) };
        if let Some(rest) = trimmed.strip_prefix('=') {
            let (term, rules) = match rest.split_once(" by ") {
                Some((t, r)) => {
                    let r = r.trim();
                    let rules =
                        if r == "*" { None } else { Some(r.split(',').map(|s| s.trim().to_string()).collect()) };
                    (t.trim().to_string(), rules)
                }
                None => (rest.trim().to_string(), None),
            };
            p.gaps.push((term, rules, line));
        } else {
            p.initial = trimmed.to_string();
        }
    }
    flush(&mut pending, &mut env, &mut lemma_names, &mut out, zero)?;
    fs::write(out_path, out).map_err(|e| e.to_string())?;
    if failures > 0 {
        return Err(format!("{failures} gap(s) could not be bridged"));
    }
    Ok(())
}

/// Closes a gap with the prover; the helper lemmas go to `pre` and become
/// available rules.
fn prove_gap(
    cur: &Term,
    target: &Term,
    env: &mut Environment,
    l: &SketchLemma,
    lemma_names: &[String],
    line: usize,
    pre: &mut String,
) -> Option<Vec<Step>> {
    let names: Vec<String> = l.hypotheses.iter().chain(lemma_names.iter()).cloned().collect();
    let rules: Vec<Identity> = names.iter().filter_map(|n| env.get(n).cloned()).collect();
    let gap = format!("{}.g{line}", l.name);
    let goal = Identity::new(gap.clone(), cur.clone(), target.clone());
    let outcome = prove(&rules, &goal, &ProverLimits::default().with_seconds(30.0));
    let mut script = outcome.script()?.clone();
    eprintln!("note: {} line {line}: gap closed by the prover ({} lemmas)", l.name, script.items.len());
    let renamed: std::collections::HashMap<String, String> = script
        .lemmas()
        .filter(|b| b.name != gap)
        .map(|b| (b.name.clone(), format!("{}.{}", l.name, b.name.to_lowercase())))
        .collect();
    for item in &mut script.items {
        if let ScriptItem::Lemma(b) = item {
            if let Some(n) = renamed.get(&b.name) {
                b.name = n.clone();
            }
            for s in &mut b.steps {
                if let Some(n) = renamed.get(&s.rule) {
                    s.rule = n.clone();
                }
            }
            let (lhs, rhs) = b.claim();
            env.add(Identity::new(b.name.clone(), lhs, rhs));
        }
    }
    pre.push('\n');
    pre.push_str(&format_proof_script(&script));
    Some(vec![Step {
        rule: gap,
        direction: eqbase_core::syntax::Direction::Forward,
        position: Position::root(),
        substitution: Some(Substitution::new()),
        result: target.clone(),
    }])
}
