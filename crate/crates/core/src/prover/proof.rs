//! Turning a successful run into a proof script.
//!
//! Each kept equation that the goal depends on becomes one lemma whose chain
//! is: its left side rewritten back to the raw equation, the step that
//! produced the raw equation (an axiom, a critical-pair peak, or an earlier
//! equation), then forward to its right side. Substitutions are recovered by
//! matching against consecutive terms, so the kernel gets explicit steps.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::flat::{
    end, instantiate, match_at, normalize_vars, path_of, replace, shift_vars, to_term, Binds, FTerm, Sym,
};
use super::{overlap_terms, Engine, Goal, Origin, Record, RwStep};
use crate::syntax::{Direction, LemmaBlock, ProofScriptFile, ScriptItem, ScriptStep};
use crate::term::{match_into, Identity, Position, Substitution, Term};

#[derive(Clone, Copy)]
enum Cite {
    Axiom(u32),
    Rec(u32),
}

struct ChainStep {
    cite: Cite,
    backward: bool,
    path: Vec<u8>,
}

struct Chain {
    terms: Vec<FTerm>,
    steps: Vec<ChainStep>,
}

impl Chain {
    fn start(t: FTerm) -> Self {
        Chain { terms: vec![t], steps: vec![] }
    }

    fn last(&self) -> &FTerm {
        self.terms.last().expect("non-empty chain")
    }

    fn push(&mut self, t: FTerm, step: ChainStep) {
        self.terms.push(t);
        self.steps.push(step);
    }

    fn reversed(mut self) -> Chain {
        self.terms.reverse();
        self.steps.reverse();
        for s in &mut self.steps {
            s.backward = !s.backward;
        }
        self
    }

    fn append(&mut self, other: Chain) {
        debug_assert_eq!(self.last(), &other.terms[0]);
        self.terms.extend(other.terms.into_iter().skip(1));
        self.steps.extend(other.steps);
    }

    fn rename(&mut self, map: &mut HashMap<u32, u32>) {
        let mut next = map.values().copied().max().map_or(0, |v| v + 1);
        for t in &mut self.terms {
            for s in t.iter_mut() {
                if let Sym::Var(v) = s {
                    *v = *map.entry(*v).or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                }
            }
        }
    }
}

/// The renaming that [`normalize_vars`] would apply to `ts`.
fn var_map(ts: &[&[Sym]]) -> HashMap<u32, u32> {
    let mut map = HashMap::new();
    for t in ts {
        for s in t.iter() {
            if let Sym::Var(v) = s {
                let n = map.len() as u32;
                map.entry(*v).or_insert(n);
            }
        }
    }
    map
}

fn replay(recs: &[Record], start: &[Sym], steps: &[RwStep], ground: bool) -> Chain {
    let mut chain = Chain::start(start.to_vec());
    let mut binds = Binds::new();
    for s in steps {
        let cur = chain.last().clone();
        let (src, tgt) = recs[s.rule as usize].sides(s.rev);
        let at = s.at as usize;
        assert!(match_at(src, &cur, at, &mut binds), "recorded rewrite does not replay");
        let out = instantiate(tgt, &binds, &cur, ground.then_some(Sym::Const(0)));
        let next = replace(&cur, at, &out);
        chain.push(next, ChainStep { cite: Cite::Rec(s.rule), backward: s.rev, path: path_of(&cur, at) });
    }
    chain
}

fn origin_chain(e: &Engine, origin: Origin) -> Chain {
    match origin {
        Origin::Axiom(i) => {
            let (l, r) = &e.axioms[i as usize];
            let mut c = Chain::start(l.clone());
            c.push(r.clone(), ChainStep { cite: Cite::Axiom(i), backward: false, path: vec![] });
            c
        }
        Origin::Renewed(f) => {
            let rec = &e.recs[f as usize];
            let mut c = Chain::start(rec.lhs.clone());
            c.push(rec.rhs.clone(), ChainStep { cite: Cite::Rec(f), backward: false, path: vec![] });
            c
        }
        Origin::Cp { outer, outer_rev, inner, inner_rev, at } => {
            let (o, i) = (&e.recs[outer as usize], &e.recs[inner as usize]);
            let (osrc, otgt) = o.sides(outer_rev);
            let (isrc, itgt) = i.sides(inner_rev);
            let shift =
                super::flat::max_var(osrc).map_or(0, |v| v + 1).max(super::flat::max_var(otgt).map_or(0, |v| v + 1));
            let (isrc, itgt) = (shift_vars(isrc, shift), shift_vars(itgt, shift));
            let at = at as usize;
            let (mut s0, mut peak, mut t0) =
                overlap_terms(osrc, otgt, o.oriented, &isrc, &itgt, i.oriented, at).expect("recorded overlap");
            normalize_vars(&mut [&mut s0, &mut t0, &mut peak]);
            let mut c = Chain::start(s0);
            c.push(peak, ChainStep { cite: Cite::Rec(inner), backward: !inner_rev, path: path_of(osrc, at) });
            c.push(t0, ChainStep { cite: Cite::Rec(outer), backward: outer_rev, path: vec![] });
            c
        }
    }
}

fn record_chain(e: &Engine, id: u32) -> Chain {
    let rec = &e.recs[id as usize];
    let mut origin = origin_chain(e, rec.origin);
    if rec.flipped {
        origin = origin.reversed();
    }
    debug_assert_eq!(origin.terms[0], rec.raw_l);
    debug_assert_eq!(origin.last(), &rec.raw_r);
    let left = replay(&e.recs, &rec.raw_l, &rec.l_steps, false);
    let right = replay(&e.recs, &rec.raw_r, &rec.r_steps, false);
    let mut map = var_map(&[left.last(), right.last()]);
    let mut chain = left.reversed();
    chain.append(origin);
    chain.append(right);
    chain.rename(&mut map);
    debug_assert_eq!(chain.terms[0], rec.lhs);
    debug_assert_eq!(chain.last(), &rec.rhs);
    chain
}

/// Records that are an input axiom verbatim (up to orientation) are cited
/// as that axiom.
fn alias(rec: &Record) -> Option<(u32, bool)> {
    match rec.origin {
        Origin::Axiom(i) if rec.l_steps.is_empty() && rec.r_steps.is_empty() => Some((i, rec.flipped)),
        _ => None,
    }
}

fn deps(rec: &Record) -> Vec<u32> {
    let mut d: Vec<u32> = match rec.origin {
        Origin::Axiom(_) => vec![],
        Origin::Renewed(f) => vec![f],
        Origin::Cp { outer, inner, .. } => vec![outer, inner],
    };
    d.extend(rec.l_steps.iter().chain(&rec.r_steps).map(|s| s.rule));
    d
}

struct Writer<'a> {
    e: &'a Engine<'a>,
    axioms: &'a [Identity],
    prefix: &'a str,
    rules: HashMap<u32, Identity>,
}

impl Writer<'_> {
    fn cite(&self, c: Cite, backward: bool) -> (Identity, Direction, Option<String>) {
        let dir = |b: bool| if b { Direction::Backward } else { Direction::Forward };
        match c {
            Cite::Axiom(i) => {
                let ax = &self.axioms[i as usize];
                (ax.clone(), dir(backward), Some(ax.name.clone()))
            }
            Cite::Rec(r) => match alias(&self.e.recs[r as usize]) {
                Some((i, flipped)) => {
                    let ax = &self.axioms[i as usize];
                    (ax.clone(), dir(backward != flipped), Some(ax.name.clone()))
                }
                None => (self.rules[&r].clone(), dir(backward), None),
            },
        }
    }

    fn lemma(&self, name: String, statement: (Term, Term), chain: &Chain, consts: &[Term]) -> LemmaBlock {
        let terms: Vec<Term> = chain.terms.iter().map(|t| to_term(t, consts)).collect();
        let mut hyps = BTreeSet::new();
        let mut steps = Vec::new();
        for (k, s) in chain.steps.iter().enumerate() {
            let (rule, direction, axiom) = self.cite(s.cite, s.backward);
            if let Some(a) = axiom {
                hyps.insert(a);
            }
            let position = Position(s.path.clone());
            let (src, tgt) = match direction {
                Direction::Forward => (&rule.lhs, &rule.rhs),
                Direction::Backward => (&rule.rhs, &rule.lhs),
            };
            let mut sigma = Substitution::new();
            let cur = terms[k].subterm_at(&position).expect("step position");
            let next = terms[k + 1].subterm_at(&position).expect("step position");
            let ok = match_into(src, cur, &mut sigma) && match_into(tgt, next, &mut sigma);
            assert!(ok, "step of {name} does not match its rule");
            steps.push(ScriptStep {
                term: terms[k + 1].clone(),
                rule: rule.name.clone(),
                direction,
                position,
                substitution: Some(sigma.without_identity_bindings()),
                line: 0,
            });
        }
        LemmaBlock {
            name,
            hypotheses: hyps.into_iter().collect(),
            statement: Some(statement),
            initial: terms[0].clone(),
            steps,
            line: 0,
        }
    }
}

pub(super) fn emit(
    e: &Engine,
    axioms: &[Identity],
    goal: &Identity,
    g: &Goal,
    consts: &[Term],
    prefix: &str,
) -> ProofScriptFile {
    let left = replay(&e.recs, &g.orig_l, &g.l_steps, true);
    let right = replay(&e.recs, &g.orig_r, &g.r_steps, true);
    let closing = g.closed.expect("goal closed");
    let mut roots: Vec<u32> = g.l_steps.iter().chain(&g.r_steps).map(|s| s.rule).collect();
    roots.extend(closing.map(|c| c.rule));

    // Post-order over the dependency DAG, without recursion.
    let mut order = Vec::new();
    let mut done: HashSet<u32> = HashSet::new();
    let mut stack: Vec<(u32, bool)> = roots.iter().rev().map(|&r| (r, false)).collect();
    while let Some((id, expanded)) = stack.pop() {
        if done.contains(&id) {
            continue;
        }
        let rec = &e.recs[id as usize];
        if alias(rec).is_some() {
            done.insert(id);
            continue;
        }
        if expanded {
            done.insert(id);
            order.push(id);
        } else {
            stack.push((id, true));
            for d in deps(rec).into_iter().rev() {
                if !done.contains(&d) {
                    stack.push((d, false));
                }
            }
        }
    }

    let mut w = Writer { e, axioms, prefix, rules: HashMap::new() };
    let mut items = Vec::new();
    for id in order {
        let rec = &e.recs[id as usize];
        let chain = record_chain(e, id);
        let name = format!("{}{}", w.prefix, id);
        let statement = (to_term(&rec.lhs, &[]), to_term(&rec.rhs, &[]));
        let block = w.lemma(name.clone(), statement.clone(), &chain, &[]);
        w.rules.insert(id, Identity::new(name, statement.0, statement.1));
        items.push(ScriptItem::Lemma(block));
    }

    let mut chain = left;
    if let Some(c) = closing {
        let l = chain.last().clone();
        let at = c.at as usize;
        let path = path_of(&l, at);
        // The right normal form is the left one with the instance swapped.
        let r_at = index_in(right.last(), &path);
        let next = replace(&l, at, &right.last()[r_at..end(right.last(), r_at)]);
        chain.push(next, ChainStep { cite: Cite::Rec(c.rule), backward: c.rev, path });
    }
    chain.append(right.reversed());
    items.push(ScriptItem::Lemma(w.lemma(goal.name.clone(), (goal.lhs.clone(), goal.rhs.clone()), &chain, consts)));
    ProofScriptFile { header: vec![], items }
}

fn index_in(t: &[Sym], path: &[u8]) -> usize {
    super::index_of_path(t, path)
}
