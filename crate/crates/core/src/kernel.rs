//! The trusted proof checker.
//!
//! A proof script is replayed one step at a time. A step is accepted only if
//! the addressed subterm is an instance of the cited rule's source side and
//! the declared result is exactly the term obtained by replacing it with the
//! corresponding instance of the target side. Lemmas that pass become rules
//! for the lemmas after them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{AxiomFile, Direction, LemmaBlock, ProofScriptFile, ScriptItem, ScriptStep, ZERO_NAME};
use crate::term::{match_into, match_pattern, Identity, Position, Substitution, Term, TermError};

/// Variable that replaces the abbreviated constant `0` at check time. The
/// canonical alphabet never produces it, so transcribed scripts do not use
/// it for anything else.
pub const ZERO_VAR: &str = "v0";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid position {position} in {term}")]
    InvalidPosition { position: Position, term: Term },
    #[error("source mismatch: rule side instance {expected} does not equal subterm {found}")]
    SourceMismatch { expected: Term, found: Term },
    #[error("target mismatch: declared {declared} but rewriting gives {computed}")]
    TargetMismatch { declared: Term, computed: Term },
    #[error("statement mismatch: declared {declared} but the chain has {actual}")]
    StatementMismatch { declared: Term, actual: Term },
    #[error("abbreviation `{0}` is not justified: {1}")]
    BadAbbreviation(String, String),
}

impl From<TermError> for KernelError {
    fn from(e: TermError) -> Self {
        match e {
            TermError::InvalidPosition(position, term) => KernelError::InvalidPosition { position, term },
        }
    }
}

/// Rules available while checking: axioms and lemmas accepted so far.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    rules: HashMap<String, Identity>,
    zero: Option<Term>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: &AxiomFile) -> Self {
        let mut env = Environment::new();
        for a in &axioms.identities {
            env.add(a.clone());
        }
        env
    }

    pub fn add(&mut self, rule: Identity) {
        self.rules.insert(rule.name.clone(), rule);
    }

    pub fn get(&self, name: &str) -> Option<&Identity> {
        self.rules.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.rules.contains_key(name)
    }

    /// Expands every `0` placeholder into the abbreviation body instantiated
    /// at [`ZERO_VAR`]. Terms without `0` are returned unchanged.
    pub fn expand(&self, t: &Term) -> Term {
        match &self.zero {
            Some(body) if t.contains_var(ZERO_NAME) => {
                let mut s = Substitution::new();
                s.insert(ZERO_NAME, body.clone());
                t.substitute(&s)
            }
            _ => t.clone(),
        }
    }

    /// Inverse of [`Environment::expand`]: folds expansions back into `0`.
    pub fn contract(&self, t: &Term) -> Term {
        let Some(body) = &self.zero else { return t.clone() };
        if t == body {
            return Term::var(ZERO_NAME);
        }
        match t {
            Term::Var(_) => t.clone(),
            Term::Meet(l, r) => Term::meet(self.contract(l), self.contract(r)),
            Term::Comp(a) => Term::comp(self.contract(a)),
        }
    }

    /// Installs an abbreviation body without checking its justification.
    /// [`check_script`] never calls this; it exists for tooling that builds
    /// scripts and replays them through the kernel afterwards.
    pub fn set_zero_unchecked(&mut self, body: Term) {
        self.zero = Some(body);
    }

    pub fn has_zero(&self) -> bool {
        self.zero.is_some()
    }

    fn expand_subst(&self, s: &Substitution) -> Substitution {
        s.iter().map(|(v, t)| (v.clone(), self.expand(t))).collect()
    }
}

/// A fully elaborated step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub direction: Direction,
    pub position: Position,
    pub substitution: Option<Substitution>,
    pub result: Term,
}

impl From<&ScriptStep> for Step {
    fn from(s: &ScriptStep) -> Self {
        Step {
            rule: s.rule.clone(),
            direction: s.direction,
            position: s.position.clone(),
            substitution: s.substitution.clone(),
            result: s.term.clone(),
        }
    }
}

fn sides(rule: &Identity, dir: Direction) -> (&Term, &Term) {
    match dir {
        Direction::Forward => (&rule.lhs, &rule.rhs),
        Direction::Backward => (&rule.rhs, &rule.lhs),
    }
}

/// Applies one step and returns the rewritten term, which must equal the
/// step's declared result.
///
/// An explicit substitution is used as given (unlisted variables map to
/// themselves). Without one, the source side is matched against the
/// addressed subterm and variables occurring only in the target side are
/// read off the declared result.
pub fn apply_step(current: &Term, step: &Step, env: &Environment) -> Result<Term, KernelError> {
    let rule = env.get(&step.rule).ok_or_else(|| KernelError::UnknownRule(step.rule.clone()))?;
    let (source, target) = sides(rule, step.direction);
    let sub = current.subterm_at(&step.position)?;
    let sigma = match &step.substitution {
        Some(s) => s.clone(),
        None => {
            let mut s = match_pattern(source, sub)
                .ok_or_else(|| KernelError::SourceMismatch { expected: source.clone(), found: sub.clone() })?;
            if let Ok(declared_sub) = step.result.subterm_at(&step.position) {
                let mut extended = s.clone();
                if match_into(target, declared_sub, &mut extended) {
                    s = extended;
                }
            }
            s
        }
    };
    let instance = source.substitute(&sigma);
    if &instance != sub {
        return Err(KernelError::SourceMismatch { expected: instance, found: sub.clone() });
    }
    let computed = current.replace_at(&step.position, target.substitute(&sigma))?;
    if computed != step.result {
        return Err(KernelError::TargetMismatch { declared: step.result.clone(), computed });
    }
    Ok(computed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LemmaStatus {
    Pass,
    Fail { step: usize, error: String },
    Skipped { missing: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaVerdict {
    pub name: String,
    pub steps: usize,
    #[serde(flatten)]
    pub status: LemmaStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub lemmas: Vec<LemmaVerdict>,
}

impl Verdict {
    pub fn all_pass(&self) -> bool {
        self.lemmas.iter().all(|l| l.status == LemmaStatus::Pass)
    }

    pub fn passed(&self) -> usize {
        self.lemmas.iter().filter(|l| l.status == LemmaStatus::Pass).count()
    }

    /// Steps of the lemmas that passed.
    pub fn checked_steps(&self) -> usize {
        self.lemmas.iter().filter(|l| l.status == LemmaStatus::Pass).map(|l| l.steps).sum()
    }

    pub fn get(&self, name: &str) -> Option<&LemmaVerdict> {
        self.lemmas.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.lemmas.iter().map(|l| l.name.len()).max().unwrap_or(5).max(5);
        for l in &self.lemmas {
            match &l.status {
                LemmaStatus::Pass => writeln!(f, "{:width$}  PASS  {} steps", l.name, l.steps)?,
                LemmaStatus::Fail { step, error } => writeln!(f, "{:width$}  FAIL  step {step}: {error}", l.name)?,
                LemmaStatus::Skipped { missing } => {
                    writeln!(f, "{:width$}  SKIP  depends on {}", l.name, missing.join(", "))?
                }
            }
        }
        write!(f, "{} of {} lemmas pass, {} checked steps", self.passed(), self.lemmas.len(), self.checked_steps())
    }
}

/// Checks every lemma of a script against an axiom file.
pub fn check_script(script: &ProofScriptFile, axioms: &AxiomFile) -> Verdict {
    let mut env = Environment::from_axioms(axioms);
    let mut failed: BTreeSet<String> = BTreeSet::new();
    let mut verdict = Verdict::default();
    for item in &script.items {
        match item {
            ScriptItem::Abbrev(a) => {
                if let Err(e) = declare_zero(&mut env, &a.body, &a.justification, &failed) {
                    // Later lemmas mentioning `0` report it as missing.
                    failed.insert(ZERO_NAME.to_string());
                    verdict.lemmas.push(LemmaVerdict {
                        name: format!("abbrev {}", a.symbol),
                        steps: 0,
                        status: LemmaStatus::Fail { step: 0, error: e.to_string() },
                    });
                }
            }
            ScriptItem::Lemma(lemma) => {
                let status = check_lemma(lemma, &env, &failed);
                if status == LemmaStatus::Pass {
                    let (lhs, rhs) = lemma.claim();
                    let rule = Identity::new(lemma.name.clone(), env.expand(&lhs), env.expand(&rhs));
                    env.add(rule);
                } else {
                    failed.insert(lemma.name.clone());
                }
                verdict.lemmas.push(LemmaVerdict { name: lemma.name.clone(), steps: lemma.steps.len(), status });
            }
        }
    }
    verdict
}

fn declare_zero(env: &mut Environment, body: &Term, just: &str, failed: &BTreeSet<String>) -> Result<(), KernelError> {
    let bad = |why: &str| KernelError::BadAbbreviation("0".into(), why.into());
    if failed.contains(just) {
        return Err(bad(&format!("justifying lemma `{just}` did not pass")));
    }
    let lemma = env.get(just).ok_or_else(|| KernelError::UnknownRule(just.to_string()))?;
    let vars = body.vars();
    if vars.len() != 1 {
        return Err(bad("body must contain exactly one variable"));
    }
    let bound = |side: &Term| -> Option<Arc<str>> {
        match match_pattern(body, side)?.get(&vars[0])? {
            Term::Var(v) => Some(v.clone()),
            _ => None,
        }
    };
    match (bound(&lemma.lhs), bound(&lemma.rhs)) {
        (Some(a), Some(b)) if a != b => {}
        _ => return Err(bad(&format!("`{just}` is not of the form p(x) = p(y)"))),
    }
    let mut s = Substitution::new();
    s.insert(&vars[0], Term::var(ZERO_VAR));
    env.zero = Some(body.substitute(&s));
    Ok(())
}

fn check_lemma(lemma: &LemmaBlock, env: &Environment, failed: &BTreeSet<String>) -> LemmaStatus {
    let mut missing: BTreeSet<String> = BTreeSet::new();
    for name in lemma.hypotheses.iter().chain(lemma.steps.iter().map(|s| &s.rule)) {
        if failed.contains(name) {
            missing.insert(name.clone());
        } else if !env.contains(name) {
            return LemmaStatus::Fail { step: 0, error: KernelError::UnknownRule(name.clone()).to_string() };
        }
    }
    let mentions_zero = std::iter::once(&lemma.initial)
        .chain(lemma.steps.iter().map(|s| &s.term))
        .chain(lemma.statement.iter().flat_map(|(l, r)| [l, r]))
        .any(|t| t.contains_var(ZERO_NAME));
    if mentions_zero {
        if failed.contains(ZERO_NAME) {
            missing.insert(ZERO_NAME.to_string());
        } else if env.zero.is_none() {
            return LemmaStatus::Fail { step: 0, error: "`0` used before its abbreviation".into() };
        }
    }
    if !missing.is_empty() {
        return LemmaStatus::Skipped { missing: missing.into_iter().collect() };
    }

    let mut current = env.expand(&lemma.initial);
    if let Some((lhs, _)) = &lemma.statement {
        let lhs = env.expand(lhs);
        if lhs != current {
            return LemmaStatus::Fail {
                step: 0,
                error: KernelError::StatementMismatch { declared: lhs, actual: current }.to_string(),
            };
        }
    }
    for (i, s) in lemma.steps.iter().enumerate() {
        let step = Step {
            rule: s.rule.clone(),
            direction: s.direction,
            position: s.position.clone(),
            substitution: s.substitution.as_ref().map(|x| env.expand_subst(x)),
            result: env.expand(&s.term),
        };
        match apply_step(&current, &step, env) {
            Ok(next) => current = next,
            Err(e) => return LemmaStatus::Fail { step: i + 1, error: e.to_string() },
        }
    }
    if let Some((_, rhs)) = &lemma.statement {
        let rhs = env.expand(rhs);
        if rhs != current {
            return LemmaStatus::Fail {
                step: lemma.steps.len(),
                error: KernelError::StatementMismatch { declared: rhs, actual: current }.to_string(),
            };
        }
    }
    LemmaStatus::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_axiom_file, parse_proof_script, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn johnson() -> AxiomFile {
        parse_axiom_file(
            "J1: x ^ y = y ^ x\nJ2: (x ^ y) ^ z = x ^ (y ^ z)\nJ3: x ^ x = x\nJ4: x'' = x\nJ5: x' = (x ^ y)' ^ (x ^ y')'\n",
        )
        .unwrap()
    }

    fn step(rule: &str, dir: Direction, pos: &[u8], sub: Option<Substitution>, result: &str) -> Step {
        Step {
            rule: rule.into(),
            direction: dir,
            position: Position(pos.to_vec()),
            substitution: sub,
            result: t(result),
        }
    }

    #[test]
    fn apply_step_examples() {
        let env = Environment::from_axioms(&johnson());
        let mut id = Substitution::new();
        id.insert("x", t("x"));
        assert_eq!(apply_step(&t("x''"), &step("J4", Direction::Forward, &[], Some(id), "x"), &env), Ok(t("x")));
        let mut s = Substitution::new();
        s.insert("x", t("x"));
        s.insert("y", t("y"));
        assert_eq!(
            apply_step(&t("x ^ y"), &step("J1", Direction::Forward, &[], Some(s), "y ^ x"), &env),
            Ok(t("y ^ x"))
        );
        let err = apply_step(&t("x ^ y"), &step("J4", Direction::Forward, &[], Some(Substitution::new()), "x"), &env);
        assert!(matches!(err, Err(KernelError::SourceMismatch { .. })));
        let err = apply_step(&t("x ^ y"), &step("J4", Direction::Forward, &[], None, "x"), &env);
        assert!(matches!(err, Err(KernelError::SourceMismatch { .. })));
    }

    #[test]
    fn apply_step_errors() {
        let env = Environment::from_axioms(&johnson());
        let e = apply_step(&t("x"), &step("B2", Direction::Forward, &[], None, "x"), &env);
        assert_eq!(e, Err(KernelError::UnknownRule("B2".into())));
        let e = apply_step(&t("x'"), &step("J4", Direction::Forward, &[1], None, "x"), &env);
        assert!(matches!(e, Err(KernelError::InvalidPosition { .. })));
        let e = apply_step(&t("x ^ y"), &step("J1", Direction::Forward, &[], None, "x ^ y"), &env);
        assert!(matches!(e, Err(KernelError::TargetMismatch { .. })));
    }

    #[test]
    fn inference_reads_target_only_variables_from_result() {
        let env = Environment::from_axioms(&johnson());
        // J5 forward introduces y; it is read off the declared result.
        let r = apply_step(&t("z'"), &step("J5", Direction::Forward, &[], None, "(z ^ u)' ^ (z ^ u')'"), &env);
        assert_eq!(r, Ok(t("(z ^ u)' ^ (z ^ u')'")));
    }

    #[test]
    fn zero_abbreviation() {
        let src = "\
lemma P from J1: x ^ x' = y ^ y'
  x ^ x'
  = y ^ y' by J1 -> at []

abbrev 0 = x ^ x' by P

lemma Q from J4: 0'' = 0
  0''
  = 0 by J4 -> at []
";
        // P is bogus (J1 does not prove it), so Q is skipped.
        let v = check_script(&parse_proof_script(src).unwrap(), &johnson());
        assert!(matches!(v.lemmas[0].status, LemmaStatus::Fail { step: 1, .. }));
        assert!(matches!(v.lemmas[1].status, LemmaStatus::Fail { .. }));
        assert!(matches!(&v.lemmas[2].status, LemmaStatus::Skipped { missing } if missing == &vec!["0".to_string()]));
    }

    #[test]
    fn zero_abbreviation_requires_pattern_lemma() {
        let src = "\
lemma P from J4: x'' = x
  x''
  = x by J4 -> at []

abbrev 0 = x ^ x' by P
";
        let v = check_script(&parse_proof_script(src).unwrap(), &johnson());
        assert!(matches!(v.lemmas[1].status, LemmaStatus::Fail { .. }));
    }

    #[test]
    fn skipped_dependents() {
        let src = "\
lemma A from J1: x ^ y = y ^ x
  x ^ y
  = x ^ y by J1 -> at []

lemma B from J4: x'' ^ y = y ^ x
  x'' ^ y
  = x ^ y by J4 -> at [0]
  = y ^ x by A -> at []
";
        let v = check_script(&parse_proof_script(src).unwrap(), &johnson());
        assert!(matches!(v.lemmas[0].status, LemmaStatus::Fail { step: 1, .. }));
        assert_eq!(v.lemmas[1].status, LemmaStatus::Skipped { missing: vec!["A".into()] });
        assert!(!v.all_pass());
    }

    #[test]
    fn statement_is_enforced() {
        let src = "lemma A from J4: x'' = y\n  x''\n  = x by J4 -> at []\n";
        let v = check_script(&parse_proof_script(src).unwrap(), &johnson());
        assert!(matches!(&v.lemmas[0].status, LemmaStatus::Fail { error, .. } if error.contains("statement")));
    }
}
