//! Unfailing completion for unit equations over ⟨∧, ′⟩.
//!
//! Given-clause loop: the smallest passive equation is simplified by the
//! active set, oriented if the ordering allows it, used to simplify the
//! active set, and overlapped with every active equation. Goals are ground
//! (their variables become constants) and are normalized after every new
//! active equation; a goal is proved once its sides meet or differ by one
//! instance of an active equation.
//!
//! Every kept equation remembers how it arose, and a successful run is
//! replayed into a proof script that the kernel checks independently.

mod flat;
mod index;
mod proof;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::syntax::ProofScriptFile;
use crate::term::{Identity, Term};
use flat::{
    end, from_term, instantiate, instantiate_into, is_ground, kbo, kbo_gt, match_at, normalize_vars, path_of, replace,
    shift_vars, to_term, vars_subset, Binds, Cmp, FTerm, Sym, Unifier,
};
use index::DiscTree;

#[derive(Clone, Debug)]
pub struct ProverLimits {
    pub max_kept: usize,
    pub max_term_size: usize,
    pub max_seconds: f64,
    /// Given-clause iterations; unlike the time limit this bound gives the
    /// same outcome on every machine.
    pub max_iterations: Option<u64>,
    /// Identities proved first, in order, and then available as rules.
    pub hints: Vec<Identity>,
    /// Every this many picks take the oldest pending equation instead of
    /// the lightest. Zero picks by weight alone.
    pub oldest_every: u64,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits {
            max_kept: 50_000,
            max_term_size: 40,
            max_seconds: 60.0,
            max_iterations: None,
            hints: Vec::new(),
            oldest_every: 0,
        }
    }
}

impl ProverLimits {
    pub fn with_iterations(mut self, n: u64) -> Self {
        self.max_iterations = Some(n);
        self
    }

    pub fn with_seconds(mut self, s: f64) -> Self {
        self.max_seconds = s;
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ProverStats {
    /// Given-clause selections.
    pub iterations: u64,
    /// Critical pairs generated.
    pub generated: u64,
    /// Equations that became active.
    pub kept: u64,
    /// Critical pairs discarded for exceeding the term size bound.
    pub oversized: u64,
    /// True when the passive set ran empty with nothing discarded, which
    /// means the goal does not follow from the axioms.
    pub saturated: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ProverStats {
    /// Adds the work counted in `o`. `saturated` is kept as it is.
    pub fn absorb(&mut self, o: &ProverStats) {
        self.iterations += o.iterations;
        self.generated += o.generated;
        self.kept += o.kept;
        self.oversized += o.oversized;
        self.elapsed += o.elapsed;
    }
}

impl PartialEq for ProverStats {
    fn eq(&self, o: &Self) -> bool {
        (self.iterations, self.generated, self.kept, self.oversized, self.saturated)
            == (o.iterations, o.generated, o.kept, o.oversized, o.saturated)
    }
}

impl Eq for ProverStats {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverOutcome {
    Proved { script: ProofScriptFile, stats: ProverStats },
    Exhausted(ProverStats),
    TimedOut(ProverStats),
}

impl ProverOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProverOutcome::Proved { .. })
    }

    pub fn stats(&self) -> &ProverStats {
        match self {
            ProverOutcome::Proved { stats, .. } | ProverOutcome::Exhausted(stats) | ProverOutcome::TimedOut(stats) => {
                stats
            }
        }
    }

    fn stats_mut(&mut self) -> &mut ProverStats {
        match self {
            ProverOutcome::Proved { stats, .. } | ProverOutcome::Exhausted(stats) | ProverOutcome::TimedOut(stats) => {
                stats
            }
        }
    }

    pub fn script(&self) -> Option<&ProofScriptFile> {
        match self {
            ProverOutcome::Proved { script, .. } => Some(script),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProverOutcome::Proved { .. } => "proved",
            ProverOutcome::Exhausted(_) => "exhausted",
            ProverOutcome::TimedOut(_) => "timed-out",
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct RwStep {
    rule: u32,
    rev: bool,
    at: u16,
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Axiom(u32),
    Cp { outer: u32, outer_rev: bool, inner: u32, inner_rev: bool, at: u16 },
    Renewed(u32),
}

struct Record {
    lhs: FTerm,
    rhs: FTerm,
    oriented: bool,
    active: bool,
    raw_l: FTerm,
    raw_r: FTerm,
    l_steps: Vec<RwStep>,
    r_steps: Vec<RwStep>,
    /// The origin relates `raw_r` to `raw_l` rather than the reverse.
    flipped: bool,
    origin: Origin,
}

impl Record {
    fn sides(&self, rev: bool) -> (&[Sym], &[Sym]) {
        if rev {
            (&self.rhs, &self.lhs)
        } else {
            (&self.lhs, &self.rhs)
        }
    }
}

struct Pending {
    l: FTerm,
    r: FTerm,
    origin: Origin,
}

#[derive(Clone, Copy, Debug)]
struct Closing {
    rule: u32,
    rev: bool,
    /// Position in the left side; the same path in the right side.
    at: u16,
}

struct Goal {
    orig_l: FTerm,
    orig_r: FTerm,
    l: FTerm,
    r: FTerm,
    l_steps: Vec<RwStep>,
    r_steps: Vec<RwStep>,
    closed: Option<Option<Closing>>,
}

struct Engine<'a> {
    limits: &'a ProverLimits,
    axioms: Vec<(FTerm, FTerm)>,
    recs: Vec<Record>,
    index: DiscTree,
    active: Vec<u32>,
    heap: BinaryHeap<Reverse<(u32, u64)>>,
    pool: Vec<Option<Pending>>,
    oldest: usize,
    binds: Binds,
    scratch: FTerm,
    stats: ProverStats,
}

enum Stop {
    Proved,
    Exhausted,
    TimedOut,
}

impl<'a> Engine<'a> {
    fn new(axioms: &[Identity], limits: &'a ProverLimits) -> Self {
        let mut e = Engine {
            limits,
            axioms: Vec::new(),
            recs: Vec::new(),
            index: DiscTree::new(),
            active: Vec::new(),
            heap: BinaryHeap::new(),
            pool: Vec::new(),
            oldest: 0,
            binds: Binds::new(),
            scratch: Vec::new(),
            stats: ProverStats::default(),
        };
        for (i, ax) in axioms.iter().enumerate() {
            let mut vars = Vec::new();
            let l = from_term(&ax.lhs, &mut vars, false);
            let r = from_term(&ax.rhs, &mut vars, false);
            e.axioms.push((l.clone(), r.clone()));
            e.push_pending(l, r, Origin::Axiom(i as u32));
        }
        e
    }

    fn push_pending(&mut self, l: FTerm, r: FTerm, origin: Origin) {
        let w = (l.len() + r.len()) as u32;
        self.push_weighted(l, r, origin, w);
    }

    fn push_weighted(&mut self, l: FTerm, r: FTerm, origin: Origin, w: u32) {
        let seq = self.pool.len() as u64;
        self.pool.push(Some(Pending { l, r, origin }));
        self.heap.push(Reverse((w, seq)));
    }

    /// One rewrite step at `at`, if some active rule applies there.
    fn rewrite_at(&mut self, t: &[Sym], at: usize, ground: bool) -> Option<(FTerm, RwStep)> {
        let Engine { index, recs, binds, scratch, .. } = self;
        let mut found: Option<(FTerm, RwStep)> = None;
        index.generalizations(t, at, &mut |v| {
            let (rule, rev) = (v >> 1, v & 1 == 1);
            let rec = &recs[rule as usize];
            if !rec.active {
                return false;
            }
            let (src, tgt) = rec.sides(rev);
            if !match_at(src, t, at, binds) {
                return false;
            }
            let out = if rec.oriented {
                instantiate(tgt, binds, t, None)
            } else {
                if !ground && !vars_subset(tgt, src) {
                    return false;
                }
                instantiate_into(tgt, binds, t, Some(Sym::Const(0)), scratch);
                if !kbo_gt(&t[at..end(t, at)], scratch) {
                    return false;
                }
                scratch.clone()
            };
            found = Some((out, RwStep { rule, rev, at: at as u16 }));
            true
        });
        found
    }

    /// Innermost normalization of the subterm at `at`, in place.
    fn normalize_at(&mut self, cur: &mut FTerm, at: usize, ground: bool, steps: &mut Vec<RwStep>) {
        loop {
            match cur[at] {
                Sym::Meet => {
                    self.normalize_at(cur, at + 1, ground, steps);
                    let second = end(cur, at + 1);
                    self.normalize_at(cur, second, ground, steps);
                }
                Sym::Comp => self.normalize_at(cur, at + 1, ground, steps),
                _ => {}
            }
            let Some((out, step)) = self.rewrite_at(cur, at, ground) else { return };
            steps.push(step);
            let e = end(cur, at);
            cur.splice(at..e, out);
        }
    }

    fn normal_form(&mut self, t: &[Sym], ground: bool, steps: &mut Vec<RwStep>) -> FTerm {
        let mut cur = t.to_vec();
        self.normalize_at(&mut cur, 0, ground, steps);
        cur
    }

    /// Whether `l = r` is an instance of an active equation, in either order.
    fn instance_of_active(&mut self, l: &[Sym], r: &[Sym], at_l: usize, at_r: usize) -> Option<(u32, bool)> {
        let Engine { index, recs, binds, .. } = self;
        let mut subject = Vec::with_capacity(l.len() + r.len() + 1);
        subject.push(Sym::Meet);
        subject.extend_from_slice(&l[at_l..end(l, at_l)]);
        subject.extend_from_slice(&r[at_r..end(r, at_r)]);
        let check = |rule: u32, rev: bool, binds: &mut Binds| {
            let rec = &recs[rule as usize];
            if !rec.active {
                return false;
            }
            let (src, tgt) = rec.sides(rev);
            let mut pat = Vec::with_capacity(src.len() + tgt.len() + 1);
            pat.push(Sym::Meet);
            pat.extend_from_slice(src);
            pat.extend_from_slice(tgt);
            match_at(&pat, &subject, 0, binds)
        };
        let mut found = None;
        index.generalizations(l, at_l, &mut |v| {
            let hit = check(v >> 1, v & 1 == 1, binds);
            if hit {
                found = Some((v >> 1, v & 1 == 1));
            }
            hit
        });
        if found.is_none() {
            // Oriented rules are indexed one way only; try them reversed.
            index.generalizations(r, at_r, &mut |v| {
                let rule = v >> 1;
                let hit = v & 1 == 0 && recs[rule as usize].oriented && check(rule, true, binds);
                if hit {
                    found = Some((rule, true));
                }
                hit
            });
        }
        found
    }

    fn close(&mut self, l: &[Sym], r: &[Sym]) -> Option<Closing> {
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            if let Some((rule, rev)) = self.instance_of_active(l, r, i, j) {
                return Some(Closing { rule, rev, at: i as u16 });
            }
            if l[i] != r[j] || l[i].arity() == 0 {
                return None;
            }
            // Descend only when exactly one argument differs.
            let (mut ci, mut cj) = (i + 1, j + 1);
            let mut diff = None;
            for _ in 0..l[i].arity() {
                let (ei, ej) = (end(l, ci), end(r, cj));
                if l[ci..ei] != r[cj..ej] {
                    if diff.is_some() {
                        return None;
                    }
                    diff = Some((ci, cj));
                }
                ci = ei;
                cj = ej;
            }
            (i, j) = diff?;
        }
    }

    fn usable(&self, id: u32) -> &'static [bool] {
        if self.recs[id as usize].oriented {
            &[false]
        } else {
            &[false, true]
        }
    }

    fn critical_pairs(&mut self, outer: u32, inner: u32) {
        for &orev in self.usable(outer) {
            for &irev in self.usable(inner) {
                let (osrc, otgt) = self.recs[outer as usize].sides(orev);
                let (osrc, otgt) = (osrc.to_vec(), otgt.to_vec());
                let (isrc, itgt) = self.recs[inner as usize].sides(irev);
                let shift = flat::max_var(&osrc).map_or(0, |v| v + 1).max(flat::max_var(&otgt).map_or(0, |v| v + 1));
                let (isrc, itgt) = (shift_vars(isrc, shift), shift_vars(itgt, shift));
                for p in 0..osrc.len() {
                    if matches!(osrc[p], Sym::Var(_)) || (outer == inner && orev == irev && p == 0) {
                        continue;
                    }
                    if !matches!(isrc[0], Sym::Var(_)) && isrc[0] != osrc[p] {
                        continue;
                    }
                    if let Some((s0, peak, t0)) = self.overlap(&osrc, &otgt, outer, &isrc, &itgt, inner, p) {
                        self.stats.generated += 1;
                        // Only prime superpositions: a peak reducible strictly
                        // below the overlap gives a redundant pair.
                        let at = index_of_path(&peak, &path_of(&osrc, p));
                        if (at + 1..end(&peak, at)).any(|q| self.rewrite_at(&peak, q, false).is_some()) {
                            continue;
                        }
                        if s0.len() > self.limits.max_term_size || t0.len() > self.limits.max_term_size {
                            self.stats.oversized += 1;
                            continue;
                        }
                        // Weigh by the simplified pair; joinable pairs are dropped here.
                        let ns = self.normal_form(&s0, false, &mut Vec::new());
                        let nt = self.normal_form(&t0, false, &mut Vec::new());
                        if ns == nt {
                            continue;
                        }
                        let w = (ns.len() + nt.len()) as u32;
                        let (mut s0, mut t0) = (s0, t0);
                        normalize_vars(&mut [&mut s0, &mut t0]);
                        let origin = Origin::Cp { outer, outer_rev: orev, inner, inner_rev: irev, at: p as u16 };
                        self.push_weighted(s0, t0, origin, w);
                    }
                }
            }
        }
    }

    /// The critical pair of `inner` into `outer` at `p`, as (s0, peak, t0)
    /// where the peak rewrites to s0 with `inner` and to t0 with `outer`.
    #[allow(clippy::too_many_arguments)]
    fn overlap(
        &self,
        osrc: &[Sym],
        otgt: &[Sym],
        outer: u32,
        isrc: &[Sym],
        itgt: &[Sym],
        inner: u32,
        p: usize,
    ) -> Option<(FTerm, FTerm, FTerm)> {
        overlap_terms(osrc, otgt, self.recs[outer as usize].oriented, isrc, itgt, self.recs[inner as usize].oriented, p)
    }

    fn back_simplify(&mut self, new: u32) {
        let ids: Vec<u32> = self.active.clone();
        for f in ids {
            if f == new || !self.recs[f as usize].active {
                continue;
            }
            if self.reducible_by(f, new) {
                self.recs[f as usize].active = false;
                let (l, r) = (self.recs[f as usize].lhs.clone(), self.recs[f as usize].rhs.clone());
                self.push_pending(l, r, Origin::Renewed(f));
            }
        }
        self.active.retain(|&a| self.recs[a as usize].active);
    }

    fn reducible_by(&mut self, f: u32, by: u32) -> bool {
        let rec = &self.recs[by as usize];
        let fr = &self.recs[f as usize];
        for &rev in if rec.oriented { &[false][..] } else { &[false, true][..] } {
            let (src, tgt) = rec.sides(rev);
            if !rec.oriented && !vars_subset(tgt, src) {
                continue;
            }
            for t in [&fr.lhs, &fr.rhs] {
                for at in 0..t.len() {
                    if !match_at(src, t, at, &mut self.binds) {
                        continue;
                    }
                    if rec.oriented {
                        return true;
                    }
                    let b = instantiate(tgt, &self.binds, t, None);
                    if kbo_gt(&t[at..end(t, at)], &b) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn activate(&mut self, p: Pending) -> Option<u32> {
        let mut l_steps = Vec::new();
        let mut r_steps = Vec::new();
        let l1 = self.normal_form(&p.l, false, &mut l_steps);
        let r1 = self.normal_form(&p.r, false, &mut r_steps);
        if l1 == r1
            || self.instance_of_active(&l1, &r1, 0, 0).is_some()
            || self.instance_of_active(&r1, &l1, 0, 0).is_some()
        {
            return None;
        }
        let flipped = kbo(&l1, &r1) == Cmp::Less;
        let (raw_l, raw_r, mut lhs, mut rhs, l_steps, r_steps) =
            if flipped { (p.r, p.l, r1, l1, r_steps, l_steps) } else { (p.l, p.r, l1, r1, l_steps, r_steps) };
        normalize_vars(&mut [&mut lhs, &mut rhs]);
        let oriented = kbo_gt(&lhs, &rhs);
        let id = self.recs.len() as u32;
        self.index.insert(&lhs, id << 1);
        if !oriented {
            self.index.insert(&rhs, (id << 1) | 1);
        }
        self.recs.push(Record {
            lhs,
            rhs,
            oriented,
            active: true,
            raw_l,
            raw_r,
            l_steps,
            r_steps,
            flipped,
            origin: p.origin,
        });
        self.stats.kept += 1;
        self.back_simplify(id);
        self.active.push(id);
        let actives = self.active.clone();
        for a in actives {
            self.critical_pairs(id, a);
            if a != id {
                self.critical_pairs(a, id);
            }
        }
        Some(id)
    }

    fn advance_goal(&mut self, g: &mut Goal) {
        if g.closed.is_some() {
            return;
        }
        let l = g.l.clone();
        g.l = self.normal_form(&l, true, &mut g.l_steps);
        let r = g.r.clone();
        g.r = self.normal_form(&r, true, &mut g.r_steps);
        if g.l == g.r {
            g.closed = Some(None);
        } else if let Some(c) = self.close(&g.l.clone(), &g.r.clone()) {
            g.closed = Some(Some(c));
        }
    }

    /// Mostly the lightest pending equation; every few picks the oldest, so
    /// that a heavy equation needed early is not starved.
    fn select(&mut self) -> Option<Pending> {
        let k = self.limits.oldest_every;
        if k > 0 && self.stats.iterations % k == k - 1 {
            while self.oldest < self.pool.len() {
                self.oldest += 1;
                if let Some(p) = self.pool[self.oldest - 1].take() {
                    return Some(p);
                }
            }
        }
        while let Some(Reverse((_, seq))) = self.heap.pop() {
            if let Some(p) = self.pool[seq as usize].take() {
                return Some(p);
            }
        }
        None
    }

    fn run(&mut self, goal: &mut Goal) -> Stop {
        let start = Instant::now();
        self.advance_goal(goal);
        let stop = loop {
            if goal.closed.is_some() {
                break Stop::Proved;
            }
            if start.elapsed().as_secs_f64() > self.limits.max_seconds {
                break Stop::TimedOut;
            }
            if self.limits.max_iterations.is_some_and(|m| self.stats.iterations >= m)
                || self.recs.len() >= self.limits.max_kept
            {
                break Stop::Exhausted;
            }
            let Some(p) = self.select() else {
                self.stats.saturated = self.stats.oversized == 0;
                break Stop::Exhausted;
            };
            self.stats.iterations += 1;
            if self.activate(p).is_some() {
                self.advance_goal(goal);
            }
        };
        self.stats.elapsed = start.elapsed();
        stop
    }
}

/// Computes (s0, peak, t0) for an overlap, or `None` when the terms do not
/// unify or an ordering constraint rules the overlap out.
fn overlap_terms(
    osrc: &[Sym],
    otgt: &[Sym],
    o_oriented: bool,
    isrc: &[Sym],
    itgt: &[Sym],
    i_oriented: bool,
    p: usize,
) -> Option<(FTerm, FTerm, FTerm)> {
    let mut u = Unifier::new();
    if !u.unify(&osrc[p..end(osrc, p)], isrc) {
        return None;
    }
    let peak = u.apply(osrc);
    let t0 = u.apply(otgt);
    if !o_oriented && kbo_gt(&t0, &peak) {
        return None;
    }
    let inner_tgt = u.apply(itgt);
    let path = path_of(osrc, p);
    let at = index_of_path(&peak, &path);
    if !i_oriented && kbo_gt(&inner_tgt, &peak[at..end(&peak, at)]) {
        return None;
    }
    let s0 = replace(&peak, at, &inner_tgt);
    if s0 == t0 {
        return None;
    }
    Some((s0, peak, t0))
}

fn index_of_path(t: &[Sym], path: &[u8]) -> usize {
    let mut i = 0;
    for &k in path {
        i += 1;
        if k == 1 {
            i = end(t, i);
        }
    }
    i
}

fn goal_terms(goal: &Identity) -> (FTerm, FTerm, Vec<Term>) {
    let mut vars = Vec::new();
    let l = from_term(&goal.lhs, &mut vars, true);
    let r = from_term(&goal.rhs, &mut vars, true);
    let least = vars.first().map(|v| Term::Var(v.clone())).unwrap_or_else(|| Term::var("x"));
    let consts = std::iter::once(least).chain(vars.iter().map(|v| Term::Var(v.clone()))).collect();
    (l, r, consts)
}

fn prove_single(axioms: &[Identity], goal: &Identity, limits: &ProverLimits, prefix: &str) -> ProverOutcome {
    let mut engine = Engine::new(axioms, limits);
    let (l, r, consts) = goal_terms(goal);
    let mut g = Goal { orig_l: l.clone(), orig_r: r.clone(), l, r, l_steps: vec![], r_steps: vec![], closed: None };
    match engine.run(&mut g) {
        Stop::Proved => {
            let script = proof::emit(&engine, axioms, goal, &g, &consts, prefix);
            ProverOutcome::Proved { script, stats: engine.stats }
        }
        Stop::Exhausted => ProverOutcome::Exhausted(engine.stats),
        Stop::TimedOut => ProverOutcome::TimedOut(engine.stats),
    }
}

/// Tries to derive `goal` from `axioms`. Hint lemmas in `limits` are proved
/// first, as in [`prove_staged`], and the returned script contains their
/// proofs too.
pub fn prove(axioms: &[Identity], goal: &Identity, limits: &ProverLimits) -> ProverOutcome {
    if limits.hints.is_empty() {
        return prove_single(axioms, goal, limits, "P");
    }
    let mut goals = limits.hints.clone();
    goals.push(goal.clone());
    let plain = ProverLimits { hints: vec![], ..limits.clone() };
    let outcomes = prove_staged(axioms, &goals, &plain);
    let mut script = ProofScriptFile::default();
    let mut total = ProverStats::default();
    for o in &outcomes {
        total.absorb(o.stats());
        match o {
            ProverOutcome::Proved { script: part, .. } => script.items.extend(part.items.iter().cloned()),
            ProverOutcome::Exhausted(_) => return ProverOutcome::Exhausted(total),
            ProverOutcome::TimedOut(_) => return ProverOutcome::TimedOut(total),
        }
    }
    ProverOutcome::Proved { script, stats: total }
}

/// Proves goals in order; each proved goal becomes a rule named after the
/// goal for the later ones. Goals after a failure are still attempted with
/// whatever has been proved so far.
pub fn prove_staged(axioms: &[Identity], goals: &[Identity], limits: &ProverLimits) -> Vec<ProverOutcome> {
    let stages: Vec<Stage> = goals.iter().map(|g| Stage { goal: g.clone(), premises: None }).collect();
    prove_ladder(axioms, &stages, limits)
}

/// A goal of [`prove_ladder`] and the names of the axioms or earlier goals
/// it is expected to need.
#[derive(Clone, Debug)]
pub struct Stage {
    pub goal: Identity,
    pub premises: Option<Vec<String>>,
}

/// Like [`prove_staged`], but a stage with premises is first tried from
/// those alone: briefly with some oldest-first picks, then by weight with a
/// quarter of the limits. When a premise is missing or both attempts fail,
/// the stage is retried with every rule proved so far. The outcome carries
/// the work of every attempt.
pub fn prove_ladder(axioms: &[Identity], stages: &[Stage], limits: &ProverLimits) -> Vec<ProverOutcome> {
    let share = |d: f64, every: u64| ProverLimits {
        max_seconds: limits.max_seconds / d,
        max_iterations: limits.max_iterations.map(|n| (n as f64 / d) as u64),
        oldest_every: every,
        ..limits.clone()
    };
    let narrow = [share(8.0, 6), share(4.0, limits.oldest_every)];
    let mut rules: Vec<Identity> = axioms.to_vec();
    let mut out = Vec::new();
    for (k, stage) in stages.iter().enumerate() {
        let prefix = format!("S{}.P", k + 1);
        let selected: Option<Vec<Identity>> = stage
            .premises
            .as_ref()
            .and_then(|names| names.iter().map(|n| rules.iter().find(|r| &r.name == n).cloned()).collect());
        let mut spent = ProverStats::default();
        let mut proved = None;
        if let Some(sel) = &selected {
            for l in &narrow {
                let o = prove_single(sel, &stage.goal, l, &prefix);
                if o.is_proved() {
                    proved = Some(o);
                    break;
                }
                spent.absorb(o.stats());
            }
        }
        let mut o = proved.unwrap_or_else(|| prove_single(&rules, &stage.goal, limits, &prefix));
        o.stats_mut().absorb(&spent);
        if o.is_proved() {
            rules.push(stage.goal.clone());
        }
        out.push(o);
    }
    out
}

/// Joins the scripts of a staged run into one script, checkable against the
/// original axioms, provided every stage was proved.
pub fn staged_script(outcomes: &[ProverOutcome]) -> Option<ProofScriptFile> {
    let mut script = ProofScriptFile::default();
    for o in outcomes {
        script.items.extend(o.script()?.items.iter().cloned());
    }
    Some(script)
}

/// Rewrites `t` to normal form with oriented rules (each `lhs > rhs`).
/// Variables of `t` are treated as constants.
pub fn normalize(t: &Term, rules: &[Identity]) -> Term {
    let mut vars = Vec::new();
    let mut cur = from_term(t, &mut vars, true);
    let rules: Vec<(FTerm, FTerm)> = rules
        .iter()
        .map(|r| {
            let mut rv = Vec::new();
            (from_term(&r.lhs, &mut rv, false), from_term(&r.rhs, &mut rv, false))
        })
        .collect();
    let mut binds = Binds::new();
    'outer: loop {
        for at in 0..cur.len() {
            for (l, r) in &rules {
                if match_at(l, &cur, at, &mut binds) && vars_subset(r, l) {
                    let out = instantiate(r, &binds, &cur, None);
                    cur = replace(&cur, at, &out);
                    continue 'outer;
                }
            }
        }
        break;
    }
    let consts: Vec<Term> = std::iter::once(Term::var("x")).chain(vars.iter().map(|v| Term::Var(v.clone()))).collect();
    debug_assert!(is_ground(&cur));
    to_term(&cur, &consts)
}

/// The state of a completion run after at most `limits` work, with no goal.
pub struct Saturation {
    /// Active equations with `lhs > rhs`.
    pub rules: Vec<Identity>,
    /// Active equations that cannot be oriented.
    pub equations: Vec<Identity>,
    /// True when the passive set ran empty without discarding anything.
    pub complete: bool,
}

pub fn saturate(axioms: &[Identity], limits: &ProverLimits) -> Saturation {
    let mut engine = Engine::new(axioms, limits);
    // A goal that can never close: two distinct constants.
    let mut g = Goal {
        orig_l: vec![Sym::Const(1)],
        orig_r: vec![Sym::Const(2)],
        l: vec![Sym::Const(1)],
        r: vec![Sym::Const(2)],
        l_steps: vec![],
        r_steps: vec![],
        closed: None,
    };
    engine.run(&mut g);
    let mut rules = Vec::new();
    let mut equations = Vec::new();
    for &id in &engine.active {
        let rec = &engine.recs[id as usize];
        let ident = Identity::new(format!("R{id}"), to_term(&rec.lhs, &[]), to_term(&rec.rhs, &[]));
        if rec.oriented {
            rules.push(ident);
        } else {
            equations.push(ident);
        }
    }
    Saturation { rules, equations, complete: engine.stats.saturated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check_script;
    use crate::syntax::{parse_axiom_file, parse_equation, AxiomFile};

    fn id(name: &str, s: &str) -> Identity {
        let (l, r) = parse_equation(s).unwrap();
        Identity::new(name, l, r)
    }

    fn file(ids: &[Identity]) -> AxiomFile {
        AxiomFile { header: vec![], identities: ids.to_vec() }
    }

    #[test]
    fn reflexive_goal_has_empty_chain() {
        let o = prove(&[], &id("G", "x = x"), &ProverLimits::default());
        let script = o.script().unwrap();
        assert_eq!(script.step_count(), 0);
        assert!(check_script(script, &file(&[])).all_pass());
    }

    #[test]
    fn group_like_consequence() {
        let ax = vec![id("A", "x'' = x"), id("C", "x ^ y = y ^ x")];
        let goal = id("G", "(a ^ b'')' = (b ^ a)'");
        let o = prove(&ax, &goal, &ProverLimits::default());
        let script = o.script().expect("proved");
        let v = check_script(script, &file(&ax));
        assert!(v.all_pass(), "{v}");
    }

    #[test]
    fn j3_from_reference_base() {
        let ax = parse_axiom_file(
            "J1: x ^ y = y ^ x\nJ2: x ^ (y ^ z) = (x ^ y) ^ z\nJ4: x'' = x\nJ5: x' = (x ^ y)' ^ (x ^ y')'\n",
        )
        .unwrap();
        let o = prove(&ax.identities, &id("J3", "x ^ x = x"), &ProverLimits::default());
        let script = o.script().unwrap_or_else(|| panic!("{:?}", o.stats()));
        let v = check_script(script, &ax);
        assert!(v.all_pass(), "{v}");
    }

    #[test]
    fn unprovable_goal_exhausts() {
        let ax = vec![id("A9", "x ^ (y ^ z) = z ^ (y ^ x)"), id("J5", "x' = (x ^ y)' ^ (x ^ y')'")];
        let o = prove(&ax, &id("J4", "x'' = x"), &ProverLimits::default().with_iterations(300));
        assert!(!o.is_proved());
    }

    #[test]
    fn normalize_examples() {
        let t = crate::syntax::parse_term("x''''").unwrap();
        assert_eq!(normalize(&t, &[id("J4", "x'' = x")]), crate::syntax::parse_term("x").unwrap());
        let y = crate::syntax::parse_term("y").unwrap();
        assert_eq!(normalize(&y, &[id("J4", "x'' = x")]), y);
    }

    #[test]
    fn staged_adds_goals_as_rules() {
        let ax = vec![id("A", "x'' = x"), id("C", "x ^ y = y ^ x")];
        let goals = vec![id("G1", "x'''' = x"), id("G2", "(x'''' ^ y)'' = y ^ x")];
        let outs = prove_staged(&ax, &goals, &ProverLimits::default());
        assert!(outs.iter().all(|o| o.is_proved()));
        let all = staged_script(&outs).unwrap();
        assert!(check_script(&all, &file(&ax)).all_pass());
        assert!(prove_staged(&ax, &[], &ProverLimits::default()).is_empty());
    }
}
