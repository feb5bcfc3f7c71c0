//! Oracles and generators shared by the property suites and the acceptance
//! run. Nothing here calls the library's evaluator or model search.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use eqbase_core::kernel::check_script;
use eqbase_core::prover::{prove, ProverLimits, ProverOutcome};
use eqbase_core::syntax::{
    format_proof_script, format_term, parse_equation, parse_proof_script, parse_term, AxiomFile, Direction, LemmaBlock,
    ProofScriptFile, ScriptItem, ScriptStep,
};
use eqbase_core::term::{compare_kbo, match_pattern, Identity, KboOrder, Position, Substitution, Term};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const VARS: [&str; 4] = ["x", "y", "z", "u"];

pub fn id(name: &str, text: &str) -> Identity {
    let (l, r) = parse_equation(text).expect("test identity parses");
    Identity::new(name, l, r)
}

// Tables

/// A finite algebra as plain tables: `meet[a * n + b]`, `comp[a]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tables {
    pub n: usize,
    pub meet: Vec<usize>,
    pub comp: Vec<usize>,
}

impl Tables {
    pub fn ba2() -> Tables {
        Tables { n: 2, meet: vec![0, 0, 0, 1], comp: vec![1, 0] }
    }

    /// Subsets of a two-element set as bit masks.
    pub fn ba4() -> Tables {
        let meet = (0..16).map(|i| (i / 4) & (i % 4)).collect();
        Tables { n: 4, meet, comp: (0..4).map(|a| 3 - a).collect() }
    }

    pub fn all_zero() -> Tables {
        Tables { n: 2, meet: vec![0; 4], comp: vec![0; 2] }
    }

    pub fn left_projection() -> Tables {
        Tables { n: 2, meet: vec![0, 0, 1, 1], comp: vec![0, 1] }
    }

    /// The group of order two, complement being the identity map.
    pub fn xor2() -> Tables {
        Tables { n: 2, meet: vec![0, 1, 1, 0], comp: vec![0, 1] }
    }

    pub fn from_model(m: &eqbase_core::models::FiniteModel) -> Tables {
        Tables {
            n: m.size(),
            meet: m.meet_table().iter().map(|&v| v as usize).collect(),
            comp: m.comp_table().iter().map(|&v| v as usize).collect(),
        }
    }

    pub fn eval(&self, t: &Term, env: &HashMap<String, usize>) -> usize {
        match t {
            Term::Var(v) => env[&**v],
            Term::Meet(a, b) => self.meet[self.eval(a, env) * self.n + self.eval(b, env)],
            Term::Comp(a) => self.comp[self.eval(a, env)],
        }
    }

    /// Whether `l = r` holds under every assignment.
    pub fn holds(&self, l: &Term, r: &Term) -> bool {
        let mut vars: BTreeSet<String> = BTreeSet::new();
        collect_vars(l, &mut vars);
        collect_vars(r, &mut vars);
        let vars: Vec<String> = vars.into_iter().collect();
        let mut digits = vec![0usize; vars.len()];
        loop {
            let env: HashMap<String, usize> = vars.iter().cloned().zip(digits.iter().copied()).collect();
            if self.eval(l, &env) != self.eval(r, &env) {
                return false;
            }
            let mut k = 0;
            while k < digits.len() && digits[k] + 1 == self.n {
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                return true;
            }
            digits[k] += 1;
        }
    }

    pub fn satisfies(&self, i: &Identity) -> bool {
        self.holds(&i.lhs, &i.rhs)
    }

    fn relabel(&self, p: &[usize]) -> Tables {
        let n = self.n;
        let mut meet = vec![0; n * n];
        let mut comp = vec![0; n];
        for a in 0..n {
            comp[p[a]] = p[self.comp[a]];
            for b in 0..n {
                meet[p[a] * n + p[b]] = p[self.meet[a * n + b]];
            }
        }
        Tables { n, meet, comp }
    }

    /// Least relabelling in (comp, meet) order: one per isomorphism class.
    pub fn canonical(&self) -> (Vec<usize>, Vec<usize>) {
        permutations(self.n)
            .iter()
            .map(|p| {
                let t = self.relabel(p);
                (t.comp, t.meet)
            })
            .min()
            .expect("at least one permutation")
    }
}

fn collect_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.to_string());
        }
        Term::Meet(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Term::Comp(a) => collect_vars(a, out),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every algebra of size `n` satisfying `satisfy` and, if given, failing
/// `violate`, by enumerating all tables.
pub fn brute_force(n: usize, satisfy: &[Identity], violate: Option<&Identity>) -> Vec<Tables> {
    let cells = n * n + n;
    let mut digits = vec![0usize; cells];
    let mut out = Vec::new();
    loop {
        let t = Tables { n, meet: digits[..n * n].to_vec(), comp: digits[n * n..].to_vec() };
        if satisfy.iter().all(|i| t.satisfies(i)) && violate.is_none_or(|v| !t.satisfies(v)) {
            out.push(t);
        }
        let mut k = 0;
        while k < cells && digits[k] + 1 == n {
            digits[k] = 0;
            k += 1;
        }
        if k == cells {
            break;
        }
        digits[k] += 1;
    }
    out.sort();
    out
}

pub fn iso_classes(models: &[Tables]) -> usize {
    models.iter().map(Tables::canonical).collect::<BTreeSet<_>>().len()
}

// Strategies

pub fn term_over(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Term> {
    let leaf = proptest::sample::select(vars).prop_map(Term::var);
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![inner.clone().prop_map(Term::comp), (inner.clone(), inner).prop_map(|(a, b)| Term::meet(a, b)),]
    })
    .boxed()
}

pub fn term() -> BoxedStrategy<Term> {
    term_over(&VARS, 5)
}

pub fn substitution() -> impl Strategy<Value = Substitution> {
    proptest::collection::vec(term_over(&VARS, 3), VARS.len()).prop_map(|ts| {
        let mut s = Substitution::new();
        for (v, t) in VARS.iter().zip(ts) {
            s.insert(v, t);
        }
        s
    })
}

/// Small identities over x, y, z for the model-search comparison.
pub fn small_identity() -> impl Strategy<Value = Identity> {
    let side = term_over(&VARS[..3], 3);
    (side.clone(), side).prop_map(|(l, r)| Identity::new("R", l, r))
}

// Term-core laws

pub fn prop_match_substitute(p: &Term, s: &Substitution) -> Result<(), TestCaseError> {
    let inst = p.substitute(s);
    let m = match_pattern(p, &inst).ok_or_else(|| TestCaseError::fail("instance does not match its pattern"))?;
    prop_assert_eq!(p.substitute(&m), inst);
    for v in p.vars() {
        let want = s.get(&v).cloned().unwrap_or_else(|| Term::Var(v.clone()));
        let got = m.get(&v).cloned().unwrap_or_else(|| Term::Var(v.clone()));
        prop_assert_eq!(got, want);
    }
    Ok(())
}

pub fn prop_match_sound(p: &Term, t: &Term) -> Result<(), TestCaseError> {
    if let Some(m) = match_pattern(p, t) {
        prop_assert_eq!(&p.substitute(&m), t);
    }
    Ok(())
}

pub fn prop_positions(t: &Term) -> Result<(), TestCaseError> {
    let ps = t.positions();
    prop_assert_eq!(ps.len(), t.size());
    prop_assert!(ps[0].is_root());
    let marker = Term::var("marker");
    for p in &ps {
        let sub = t.subterm_at(p).expect("listed position").clone();
        prop_assert_eq!(&t.replace_at(p, sub.clone()).unwrap(), t);
        let r = t.replace_at(p, marker.clone()).unwrap();
        prop_assert_eq!(r.subterm_at(p).unwrap(), &marker);
        prop_assert_eq!(r.size() + sub.size(), t.size() + 1);
    }
    let past = Position(vec![0; t.depth()]);
    prop_assert!(t.subterm_at(&past).is_err());
    Ok(())
}

fn flip(o: KboOrder) -> KboOrder {
    match o {
        KboOrder::Greater => KboOrder::Less,
        KboOrder::Less => KboOrder::Greater,
        o => o,
    }
}

pub fn prop_kbo(a: &Term, b: &Term, c: &Term, s: &Substitution) -> Result<(), TestCaseError> {
    let ab = compare_kbo(a, b);
    prop_assert_eq!(compare_kbo(b, a), flip(ab));
    prop_assert_eq!(ab == KboOrder::Equal, a == b);
    if ab == KboOrder::Greater {
        prop_assert_eq!(compare_kbo(&a.substitute(s), &b.substitute(s)), KboOrder::Greater);
        if compare_kbo(b, c) == KboOrder::Greater {
            prop_assert_eq!(compare_kbo(a, c), KboOrder::Greater);
        }
    }
    for p in a.positions().iter().skip(1) {
        prop_assert_eq!(compare_kbo(a, a.subterm_at(p).unwrap()), KboOrder::Greater);
    }
    Ok(())
}

// Syntax

pub fn prop_term_round_trip(t: &Term) -> Result<(), TestCaseError> {
    let text = format_term(t);
    let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&back, t);
    Ok(())
}

pub fn prop_script_round_trip(script: &ProofScriptFile) -> Result<(), TestCaseError> {
    let text = format_proof_script(script);
    let back = parse_proof_script(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(format_proof_script(&back), text);
    prop_assert_eq!(back.step_count(), script.step_count());
    Ok(())
}

// Derivations

/// A base and algebras known (by the oracle) to satisfy it.
pub struct Theory {
    pub axioms: AxiomFile,
    pub models: Vec<Tables>,
}

pub fn theories() -> Vec<Theory> {
    let mk = |ids: &[(&str, &str)], models: Vec<Tables>| {
        let identities: Vec<Identity> = ids.iter().map(|(n, s)| id(n, s)).collect();
        for m in &models {
            assert!(identities.iter().all(|i| m.satisfies(i)), "oracle model must satisfy the base");
        }
        Theory { axioms: AxiomFile { header: vec![], identities }, models }
    };
    vec![
        mk(
            &[("A9", "x ^ (y ^ z) = z ^ (y ^ x)"), ("J5", "x' = (x ^ y)' ^ (x ^ y')'")],
            vec![Tables::ba2(), Tables::ba4(), Tables::all_zero()],
        ),
        mk(
            &[("A1", "x ^ (y ^ z) = (x ^ y) ^ z"), ("J5'", "x = (x' ^ y)' ^ (x' ^ y')'")],
            vec![Tables::ba2(), Tables::ba4(), Tables::left_projection()],
        ),
        mk(
            &[("J1", "x ^ y = y ^ x"), ("J2", "x ^ (y ^ z) = (x ^ y) ^ z"), ("J4", "x'' = x")],
            vec![Tables::ba2(), Tables::ba4(), Tables::xor2()],
        ),
    ]
}

/// One choice per step: where to rewrite, which rule instance, and terms
/// for variables that only the target side has.
pub type Plan = Vec<(usize, usize, Term)>;

pub fn plan() -> impl Strategy<Value = (Term, Plan)> {
    (term_over(&VARS, 4), proptest::collection::vec((any::<usize>(), any::<usize>(), term_over(&VARS, 2)), 1..5))
}

/// Applies `plan` to `start` with the rules of `axioms`. At each step the
/// candidates are every (position, rule, direction) whose source matches;
/// target-only variables get the plan's term.
pub fn derive(axioms: &AxiomFile, start: &Term, plan: &Plan) -> LemmaBlock {
    let mut cur = start.clone();
    let mut steps = Vec::new();
    for (pick, rule_pick, fresh) in plan {
        let mut cands = Vec::new();
        for p in cur.positions() {
            let sub = cur.subterm_at(&p).unwrap();
            for r in &axioms.identities {
                for (dir, src, tgt) in [(Direction::Forward, &r.lhs, &r.rhs), (Direction::Backward, &r.rhs, &r.lhs)] {
                    if let Some(mut m) = match_pattern(src, sub) {
                        for v in tgt.vars() {
                            if m.get(&v).is_none() {
                                m.insert(&v, fresh.clone());
                            }
                        }
                        cands.push((p.clone(), r.name.clone(), dir, m, tgt.clone()));
                    }
                }
            }
        }
        if cands.is_empty() {
            break;
        }
        let (p, rule, direction, m, tgt) = cands.swap_remove((pick ^ rule_pick.rotate_left(7)) % cands.len());
        cur = cur.replace_at(&p, tgt.substitute(&m)).unwrap();
        steps.push(ScriptStep { term: cur.clone(), rule, direction, position: p, substitution: Some(m), line: 0 });
    }
    LemmaBlock {
        name: "D".into(),
        hypotheses: axioms.identities.iter().map(|i| i.name.clone()).collect(),
        statement: None,
        initial: start.clone(),
        steps,
        line: 0,
    }
}

pub fn single(lemma: LemmaBlock) -> ProofScriptFile {
    ProofScriptFile { header: vec![], items: vec![ScriptItem::Lemma(lemma)] }
}

/// A derivation built from sound steps passes the kernel, and its claim
/// holds in every algebra satisfying the axioms. Corrupting the last step
/// makes the kernel reject it.
pub fn prop_kernel_sound(th: &Theory, start: &Term, plan: &Plan) -> Result<(), TestCaseError> {
    let lemma = derive(&th.axioms, start, plan);
    let (l, r) = lemma.claim();
    let script = single(lemma.clone());
    let v = check_script(&script, &th.axioms);
    prop_assert!(v.all_pass(), "{}", v);
    for m in &th.models {
        prop_assert!(m.holds(&l, &r));
    }
    prop_script_round_trip(&script)?;
    if let Some(last) = lemma.steps.len().checked_sub(1) {
        let mut bad = lemma;
        let t = &bad.steps[last].term;
        bad.steps[last].term = Term::comp(t.clone());
        prop_assert!(!check_script(&single(bad), &th.axioms).all_pass());
    }
    Ok(())
}

/// Whatever the prover returns as a proof replays in the kernel, and it
/// never proves an equation that some algebra of the base refutes.
pub fn prop_prover_replay(th: &Theory, goal: &Identity) -> Result<(), TestCaseError> {
    let limits = ProverLimits::default().with_iterations(150).with_seconds(2.0);
    let o = prove(&th.axioms.identities, goal, &limits);
    let refuted = th.models.iter().any(|m| !m.satisfies(goal));
    if let ProverOutcome::Proved { script, .. } = &o {
        prop_assert!(!refuted, "proved a refuted goal {}", goal);
        let v = check_script(script, &th.axioms);
        prop_assert!(v.all_pass(), "{}", v);
        let last = script.lemmas().last().expect("a proof has a lemma");
        let (l, r) = last.claim();
        prop_assert!(
            (l == goal.lhs && r == goal.rhs)
                || (l == goal.rhs && r == goal.lhs)
                || th.models.iter().all(|m| m.holds(&l, &r))
        );
    }
    Ok(())
}

/// Goals for the replay property: half come from derivations, so they hold,
/// and half are arbitrary.
pub fn goal_for(th: &Theory, start: &Term, plan: &Plan, other: &Term, derived: bool) -> Identity {
    if derived {
        let lemma = derive(&th.axioms, start, plan);
        let (l, r) = lemma.claim();
        Identity::new("G", l, r)
    } else {
        Identity::new("G", start.clone(), other.clone())
    }
}
