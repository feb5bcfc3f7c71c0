//! The base registry and the four checks run on every base: soundness in
//! small Boolean algebras, derivability of the reference axioms, the finite
//! spectrum, and independence witnesses.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assoc::{classify_all, AssocClass};
use crate::data;
use crate::kernel::{check_script, Verdict};
use crate::models::{counterexample, format_model, search_models, FiniteModel, SearchOptions};
use crate::prover::{prove, prove_ladder, staged_script, ProverLimits, ProverOutcome, ProverStats, Stage};
use crate::syntax::{format_term, AxiomFile};
use crate::term::Identity;

/// The reference base every record is expected to derive.
pub const TARGETS: [&str; 4] = ["J1", "J2", "J4", "J5"];

/// Model counts up to isomorphism of Boolean algebras at sizes 1 to 4.
pub const BA_SPECTRUM: [usize; 4] = [1, 1, 0, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseStatus {
    ProvedInPaper,
    ClaimedForSequel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub citation: String,
    pub quote: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BaseRecord {
    pub name: String,
    pub axioms: Vec<Identity>,
    pub provenance: Provenance,
    pub status: BaseStatus,
    pub arity: usize,
    pub section: u8,
    /// Lemma names in the shipped proof script of `section`, used as stage
    /// goals before the reference axioms.
    pub ladder: Vec<String>,
    /// Further catalogue identities to derive besides the reference axioms.
    pub also_prove: Vec<String>,
}

#[derive(Deserialize)]
struct RawRecord {
    name: String,
    axioms: Vec<String>,
    status: BaseStatus,
    arity: usize,
    section: u8,
    citation: String,
    quote: String,
    #[serde(default)]
    note: Option<String>,
    #[serde(default)]
    ladder: Vec<String>,
    #[serde(default)]
    also_prove: Vec<String>,
}

const REGISTRY: &str = include_str!("../../../axioms/registry.json");

/// Every base, in a fixed order.
pub fn registry() -> Vec<BaseRecord> {
    let raw: Vec<RawRecord> = serde_json::from_str(REGISTRY).expect("registry is valid JSON");
    let catalog = data::catalog();
    raw.into_iter()
        .map(|r| BaseRecord {
            axioms: r
                .axioms
                .iter()
                .map(|n| catalog.get(n).unwrap_or_else(|| panic!("unknown identity {n}")).clone())
                .collect(),
            name: r.name,
            provenance: Provenance { citation: r.citation, quote: r.quote, note: r.note },
            status: r.status,
            arity: r.arity,
            section: r.section,
            ladder: r.ladder,
            also_prove: r.also_prove,
        })
        .collect()
}

pub fn find_base(name: &str) -> Option<BaseRecord> {
    let squash = |s: &str| s.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect::<String>();
    registry().into_iter().find(|b| squash(&b.name) == squash(name))
}

impl BaseRecord {
    /// A record built from an axiom file, for checks on bases outside the
    /// registry.
    pub fn from_file(name: &str, file: &AxiomFile) -> Self {
        BaseRecord {
            name: name.to_string(),
            arity: file.identities.len(),
            axioms: file.identities.clone(),
            provenance: Provenance { citation: "user supplied".into(), quote: name.to_string(), note: None },
            status: BaseStatus::ClaimedForSequel,
            section: 0,
            ladder: vec![],
            also_prove: vec![],
        }
    }

    pub fn axiom_file(&self) -> AxiomFile {
        AxiomFile { header: vec![], identities: self.axioms.clone() }
    }

    fn has_axiom(&self, name: &str) -> bool {
        self.axioms.iter().any(|a| a.name == name)
    }

    /// Catalogue identities this base should derive, in order.
    pub fn goals(&self) -> Vec<Identity> {
        let catalog = data::catalog();
        self.also_prove
            .iter()
            .map(String::as_str)
            .chain(TARGETS)
            .filter(|n| !self.has_axiom(n))
            .map(|n| catalog.get(n).expect("catalogue identity").clone())
            .collect()
    }

    /// Statements of the ladder lemmas, with abbreviations expanded. A ladder
    /// may borrow lemmas from any shipped proof script.
    pub fn ladder_goals(&self) -> Vec<Identity> {
        self.ladder_stages().into_iter().map(|s| s.goal).collect()
    }

    /// The ladder as prover stages. Each lemma's premises are the hypotheses
    /// it cites in its script, with helper lemmas replaced by what they cite.
    pub fn ladder_stages(&self) -> Vec<Stage> {
        if self.ladder.is_empty() {
            return vec![];
        }
        let mut claims = Vec::new();
        let mut hyps: HashMap<String, Vec<String>> = HashMap::new();
        for e in data::CORPUS {
            let script = e.script();
            claims.extend(lemma_claims(&script, &e.axiom_file()));
            for item in &script.items {
                if let crate::syntax::ScriptItem::Lemma(l) = item {
                    hyps.insert(l.name.clone(), l.hypotheses.clone());
                }
            }
        }
        fn cited(name: &str, hyps: &HashMap<String, Vec<String>>, out: &mut Vec<String>) {
            for h in hyps.get(name).into_iter().flatten() {
                if h.starts_with(&format!("{name}.")) {
                    cited(h, hyps, out);
                } else if !out.contains(h) {
                    out.push(h.clone());
                }
            }
        }
        let catalog = data::catalog();
        let mut stages: Vec<Stage> = Vec::new();
        for n in &self.ladder {
            let goal = claims
                .iter()
                .find(|c| &c.name == n)
                .unwrap_or_else(|| panic!("ladder lemma {n} is not in the corpus"))
                .clone();
            let mut premises = Vec::new();
            cited(n, &hyps, &mut premises);
            // A cited axiom that is not in this base may be an earlier stage.
            for p in &mut premises {
                if self.has_axiom(p) || stages.iter().any(|s| &s.goal.name == p) {
                    continue;
                }
                let Some(ax) = catalog.identities.iter().find(|i| &i.name == p) else { continue };
                if let Some(s) = stages.iter().find(|s| s.goal.alpha_eq(ax) || s.goal.alpha_eq(&ax.swapped())) {
                    *p = s.goal.name.clone();
                }
            }
            stages.push(Stage { goal, premises: Some(premises) });
        }
        stages
    }
}

/// The claim of every lemma in a script, with `0` expanded as the kernel
/// would.
pub fn lemma_claims(script: &crate::syntax::ProofScriptFile, axioms: &AxiomFile) -> Vec<Identity> {
    use crate::syntax::ScriptItem;
    let mut env = crate::kernel::Environment::from_axioms(axioms);
    let mut out = Vec::new();
    for item in &script.items {
        match item {
            ScriptItem::Abbrev(a) => env.set_zero_unchecked(a.body.clone()),
            ScriptItem::Lemma(l) => {
                let (lhs, rhs) = l.claim();
                let id = Identity::new(l.name.clone(), env.expand(&lhs), env.expand(&rhs));
                env.add(id.clone());
                out.push(id);
            }
        }
    }
    out
}

fn eq_text(i: &Identity) -> String {
    format!("{} = {}", format_term(&i.lhs), format_term(&i.rhs))
}

// Soundness

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessFailure {
    pub model: String,
    pub axiom: String,
    pub assignment: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Soundness {
    pub pass: bool,
    pub models: Vec<String>,
    pub failures: Vec<SoundnessFailure>,
}

/// Every axiom must hold in the two- and four-element Boolean algebras.
pub fn verify_soundness(b: &BaseRecord) -> Soundness {
    let models = [("BA2", FiniteModel::ba2()), ("BA4", FiniteModel::ba4())];
    let mut failures = Vec::new();
    for (name, m) in &models {
        for a in &b.axioms {
            if let Some(assignment) = counterexample(m, a) {
                failures.push(SoundnessFailure { model: name.to_string(), axiom: a.name.clone(), assignment });
            }
        }
    }
    Soundness { pass: failures.is_empty(), models: models.iter().map(|(n, _)| n.to_string()).collect(), failures }
}

// Completeness

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Staged,
    Unstaged,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Staged => "staged",
            Mode::Unstaged => "unstaged",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletenessVerdict {
    /// Every goal proved and the proofs pass the kernel.
    Pass,
    /// Some goal fails in a finite model of the base.
    Refuted,
    /// Some goal was neither proved nor refuted within the limits.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoalResult {
    pub goal: String,
    pub equation: String,
    pub outcome: String,
    /// Part of the ladder rather than a reference axiom.
    pub ladder: bool,
    pub stats: ProverStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refutation {
    pub goal: String,
    pub model: String,
    pub assignment: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Completeness {
    pub mode: Mode,
    pub verdict: CompletenessVerdict,
    pub goals: Vec<GoalResult>,
    /// Totals over all goals.
    pub stats: ProverStats,
    /// Whether the emitted scripts passed the kernel; `None` if nothing was
    /// proved.
    pub kernel_checked: Option<bool>,
    pub kernel_steps: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub refutations: Vec<Refutation>,
    #[serde(skip)]
    pub scripts: Vec<(String, crate::syntax::ProofScriptFile)>,
}

/// Derives the reference axioms from `b`. Staged mode proves the ladder and
/// then each target in turn, every proved goal becoming a rule for the next;
/// unstaged mode proves each target from the axioms alone.
pub fn verify_completeness(b: &BaseRecord, mode: Mode, limits: &ProverLimits, max_model_size: usize) -> Completeness {
    let targets = b.goals();
    let ladder = if mode == Mode::Staged { b.ladder_stages() } else { vec![] };
    let axioms = b.axiom_file();
    let mut goals = Vec::new();
    let mut total = ProverStats::default();
    let mut scripts = Vec::new();
    let mut failed = Vec::new();

    let mut record = |g: &Identity, o: &ProverOutcome, in_ladder: bool, total: &mut ProverStats| {
        total.absorb(o.stats());
        goals.push(GoalResult {
            goal: g.name.clone(),
            equation: eq_text(g),
            outcome: o.kind().to_string(),
            ladder: in_ladder,
            stats: o.stats().clone(),
        });
    };

    match mode {
        Mode::Staged => {
            let mut all = ladder.clone();
            all.extend(targets.iter().map(|g| Stage { goal: g.clone(), premises: None }));
            let outcomes = prove_ladder(&b.axioms, &all, limits);
            for (k, (s, o)) in all.iter().zip(&outcomes).enumerate() {
                record(&s.goal, o, k < ladder.len(), &mut total);
                if !o.is_proved() {
                    failed.push(s.goal.clone());
                }
            }
            if let Some(s) = staged_script(&outcomes) {
                scripts.push(("staged".to_string(), s));
            }
        }
        Mode::Unstaged => {
            for g in &targets {
                let o = prove(&b.axioms, g, limits);
                record(g, &o, false, &mut total);
                match o.script() {
                    Some(s) => scripts.push((g.name.clone(), s.clone())),
                    None => failed.push(g.clone()),
                }
            }
        }
    }

    let verdicts: Vec<Verdict> = scripts.iter().map(|(_, s)| check_script(s, &axioms)).collect();
    let kernel_checked = (!verdicts.is_empty()).then(|| verdicts.iter().all(Verdict::all_pass));
    let kernel_steps = verdicts.iter().map(Verdict::checked_steps).sum();

    let mut refutations = Vec::new();
    for g in failed.iter().filter(|g| targets.iter().any(|t| t.name == g.name)) {
        if let Some((model, assignment)) = countermodel(&b.axioms, g, max_model_size) {
            refutations.push(Refutation { goal: g.name.clone(), model: format_model(&model), assignment });
        }
    }
    let verdict = if failed.is_empty() && kernel_checked != Some(false) {
        CompletenessVerdict::Pass
    } else if !refutations.is_empty() {
        CompletenessVerdict::Refuted
    } else {
        CompletenessVerdict::Inconclusive
    };
    Completeness { mode, verdict, goals, stats: total, kernel_checked, kernel_steps, refutations, scripts }
}

fn countermodel(axioms: &[Identity], goal: &Identity, max_size: usize) -> Option<(FiniteModel, Vec<(String, usize)>)> {
    for n in 1..=max_size {
        let opts = SearchOptions::new(n, axioms.to_vec()).violating(goal.clone()).up_to_iso().limit(1);
        if let Ok(out) = search_models(&opts) {
            if let Some(m) = out.models.into_iter().next() {
                let a = counterexample(&m, goal).expect("model violates the goal");
                return Some((m, a));
            }
        }
    }
    None
}

// Spectrum

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    /// Models up to isomorphism at sizes 1, 2, ...
    pub counts: Vec<usize>,
    pub pass: bool,
    /// Fewer sizes were searched than the full spectrum prefix.
    pub partial: bool,
    /// The search at the next size ran out of nodes.
    pub exhausted: bool,
    pub nodes: u64,
}

/// Counts models up to isomorphism at each size. A size whose search runs
/// out of nodes ends the spectrum early.
pub fn verify_spectrum(b: &BaseRecord, max_size: usize, workers: usize) -> Spectrum {
    let mut counts = Vec::new();
    let mut nodes = 0;
    let mut exhausted = false;
    for n in 1..=max_size {
        match search_models(&SearchOptions::new(n, b.axioms.clone()).up_to_iso().workers(workers)) {
            Ok(out) => {
                nodes += out.nodes;
                counts.push(out.models.len());
            }
            Err(_) => {
                exhausted = true;
                break;
            }
        }
    }
    let k = counts.len().min(BA_SPECTRUM.len());
    let pass = counts[..k] == BA_SPECTRUM[..k];
    Spectrum { partial: counts.len() < BA_SPECTRUM.len(), counts, pass, exhausted, nodes }
}

// Independence

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependenceVerdict {
    Independent,
    InconclusiveAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub size: usize,
    pub model: String,
    pub assignment: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomIndependence {
    pub axiom: String,
    pub verdict: IndependenceVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub bound: usize,
}

/// For each axiom, looks for a model of the others that violates it.
/// `bound` is the largest size searched in full.
pub fn verify_independence(b: &BaseRecord, max_size: usize, workers: usize) -> Vec<AxiomIndependence> {
    let mut out = Vec::new();
    for (i, a) in b.axioms.iter().enumerate() {
        let rest: Vec<Identity> =
            b.axioms.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        let mut witness = None;
        let mut bound = max_size;
        for n in 2..=max_size {
            let opts = SearchOptions::new(n, rest.clone()).violating(a.clone()).up_to_iso().limit(1).workers(workers);
            let Ok(found) = search_models(&opts) else {
                bound = n - 1;
                break;
            };
            if let Some(m) = found.models.into_iter().next() {
                let assignment = counterexample(&m, a).expect("witness violates the axiom");
                witness = Some(Witness { size: n, model: format_model(&m), assignment });
                break;
            }
        }
        out.push(AxiomIndependence {
            axiom: a.name.clone(),
            verdict: if witness.is_some() {
                IndependenceVerdict::Independent
            } else {
                IndependenceVerdict::InconclusiveAtBound
            },
            witness,
            bound,
        });
    }
    out
}

// Corpus

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusFile {
    pub path: String,
    pub axioms: String,
    pub section: u8,
    pub lemmas: usize,
    pub passed: usize,
    pub steps: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub files: Vec<CorpusFile>,
    pub lemmas: usize,
    pub steps: usize,
    pub pass: bool,
}

/// Kernel-checks the shipped proof scripts of the given sections (all when
/// `None`).
pub fn check_corpus(sections: Option<&[u8]>) -> CorpusReport {
    let mut files = Vec::new();
    for c in data::CORPUS.iter().filter(|c| sections.is_none_or(|s| s.contains(&c.section))) {
        let v = check_script(&c.script(), &c.axiom_file());
        files.push(CorpusFile {
            path: c.path.to_string(),
            axioms: c.axioms.to_string(),
            section: c.section,
            lemmas: v.lemmas.len(),
            passed: v.passed(),
            steps: v.checked_steps(),
            pass: v.all_pass() && !v.lemmas.is_empty(),
            failures: v
                .lemmas
                .iter()
                .filter(|l| l.status != crate::kernel::LemmaStatus::Pass)
                .map(|l| l.name.clone())
                .collect(),
        });
    }
    CorpusReport {
        lemmas: files.iter().map(|f| f.lemmas).sum(),
        steps: files.iter().map(|f| f.steps).sum(),
        pass: files.iter().all(|f| f.pass),
        files,
    }
}

// Replication

#[derive(Clone, Debug)]
pub struct ReplicateConfig {
    /// Restrict to these sections; `None` runs everything.
    pub sections: Option<Vec<u8>>,
    pub max_size: usize,
    /// Bases checked in parallel.
    pub workers: usize,
    pub limits: ProverLimits,
    /// Limits per goal for bases with no transcribed proof.
    pub claimed_limits: ProverLimits,
    /// Also run the unstaged prover on bases checked in staged mode.
    pub unstaged_bonus: bool,
}

impl Default for ReplicateConfig {
    fn default() -> Self {
        ReplicateConfig {
            sections: None,
            max_size: 4,
            workers: 1,
            limits: ProverLimits::default().with_iterations(60_000),
            claimed_limits: ProverLimits::default().with_iterations(1_000).with_seconds(30.0),
            unstaged_bonus: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseReport {
    pub name: String,
    pub status: BaseStatus,
    pub arity: usize,
    pub axioms: Vec<String>,
    pub provenance: Provenance,
    pub soundness: Soundness,
    pub completeness: Completeness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unstaged_bonus: Option<Completeness>,
    /// Model counts up to isomorphism at sizes 1, 2, ...
    pub spectrum: Vec<usize>,
    pub spectrum_pass: bool,
    pub spectrum_partial: bool,
    pub independence: Vec<AxiomIndependence>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl BaseReport {
    /// Reasons this base counts as a hard failure. Claimed bases only fail
    /// hard on soundness.
    pub fn hard_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.soundness.pass {
            out.push(format!("{}: soundness", self.name));
        }
        if self.status == BaseStatus::ProvedInPaper {
            if self.completeness.verdict != CompletenessVerdict::Pass {
                out.push(format!("{}: completeness", self.name));
            }
            if !self.spectrum_pass {
                out.push(format!("{}: spectrum", self.name));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifierReport {
    pub identities: usize,
    pub pass: bool,
    pub classes: Vec<AssocClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub max_size: usize,
    pub bases: Vec<BaseReport>,
    pub corpus: CorpusReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifier: Option<ClassifierReport>,
    pub hard_failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn run_base(b: &BaseRecord, config: &ReplicateConfig) -> BaseReport {
    let start = Instant::now();
    let proved = b.status == BaseStatus::ProvedInPaper;
    let limits = if proved { &config.limits } else { &config.claimed_limits };
    let mode = if proved && !b.ladder.is_empty() { Mode::Staged } else { Mode::Unstaged };
    let completeness = verify_completeness(b, mode, limits, config.max_size);
    let unstaged_bonus = (config.unstaged_bonus && mode == Mode::Staged)
        .then(|| verify_completeness(b, Mode::Unstaged, &config.claimed_limits, 0));
    let spectrum = verify_spectrum(b, config.max_size, 1);
    let independence = verify_independence(b, config.max_size, 1);
    BaseReport {
        name: b.name.clone(),
        status: b.status,
        arity: b.arity,
        axioms: b.axioms.iter().map(|a| format!("{}: {}", a.name, eq_text(a))).collect(),
        provenance: b.provenance.clone(),
        soundness: verify_soundness(b),
        completeness,
        unstaged_bonus,
        spectrum: spectrum.counts,
        spectrum_pass: spectrum.pass,
        spectrum_partial: spectrum.partial,
        independence,
        elapsed: start.elapsed(),
    }
}

pub fn replicate_all(config: &ReplicateConfig) -> Report {
    let start = Instant::now();
    let wanted = |s: u8| config.sections.as_ref().is_none_or(|v| v.contains(&s));
    let bases: Vec<BaseRecord> = registry().into_iter().filter(|b| wanted(b.section)).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.workers.max(1)).build().expect("thread pool");
    let bases: Vec<BaseReport> = pool.install(|| bases.par_iter().map(|b| run_base(b, config)).collect());
    let corpus = check_corpus(config.sections.as_deref());
    let classifier = wanted(3).then(|| {
        let classes = classify_all();
        ClassifierReport {
            identities: classes.iter().map(|c| c.members.len()).sum(),
            pass: classes.len() == 14,
            classes,
        }
    });
    let mut hard_failures: Vec<String> = bases.iter().flat_map(BaseReport::hard_failures).collect();
    if !corpus.pass {
        hard_failures.push("corpus".into());
    }
    if classifier.as_ref().is_some_and(|c| !c.pass) {
        hard_failures.push("classifier".into());
    }
    Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        max_size: config.max_size,
        bases,
        corpus,
        classifier,
        hard_failures,
        elapsed: start.elapsed(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

impl fmt::Display for BaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            BaseStatus::ProvedInPaper => "proved",
            BaseStatus::ClaimedForSequel => "claimed",
        };
        writeln!(f, "{} [{}, {}-base] {}", self.name, status, self.arity, secs(self.elapsed))?;
        writeln!(f, "  soundness     {}", if self.soundness.pass { "pass" } else { "FAIL" })?;
        let c = &self.completeness;
        let proved = c.goals.iter().filter(|g| g.outcome == "proved").count();
        writeln!(
            f,
            "  completeness  {:?} ({}, {}/{} goals, {} kept, {})",
            c.verdict,
            c.mode,
            proved,
            c.goals.len(),
            c.stats.kept,
            secs(c.stats.elapsed)
        )?;
        for g in c.goals.iter().filter(|g| g.outcome != "proved") {
            writeln!(f, "    {} {}: {}", g.goal, g.equation, g.outcome)?;
        }
        for r in &c.refutations {
            writeln!(f, "    {} fails in a model of the base", r.goal)?;
        }
        if let Some(bonus) = &self.unstaged_bonus {
            let n = bonus.goals.iter().filter(|g| g.outcome == "proved").count();
            writeln!(f, "  unstaged      {}/{} goals", n, bonus.goals.len())?;
        }
        let counts: Vec<String> = self.spectrum.iter().map(usize::to_string).collect();
        writeln!(
            f,
            "  spectrum      ({}) {}{}",
            counts.join(", "),
            if self.spectrum_pass { "pass" } else { "differs" },
            if self.spectrum_partial { " (partial)" } else { "" }
        )?;
        for i in &self.independence {
            match &i.witness {
                Some(w) => writeln!(f, "  independent   {} (witness of size {})", i.axiom, w.size)?,
                None => writeln!(f, "  inconclusive  {} (no witness up to size {})", i.axiom, i.bound)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            writeln!(f, "{b}")?;
        }
        for c in &self.corpus.files {
            writeln!(
                f,
                "corpus {}: {}/{} lemmas, {} steps{}",
                c.path,
                c.passed,
                c.lemmas,
                c.steps,
                if c.pass { "" } else { " FAIL" }
            )?;
        }
        if let Some(c) = &self.classifier {
            writeln!(f, "classifier: {} classes over {} identities", c.classes.len(), c.identities)?;
        }
        writeln!(f, "total {}", secs(self.elapsed))?;
        if self.hard_failures.is_empty() {
            write!(f, "no hard failures")
        } else {
            write!(f, "hard failures: {}", self.hard_failures.join("; "))
        }
    }
}
