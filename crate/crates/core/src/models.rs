//! Finite algebras ⟨{0..n-1}, ∧, ′⟩: evaluation, satisfaction and search.
//!
//! The search is a backtracking procedure over table cells (complement cells
//! first, then the meet table row by row) with incremental checking. Every
//! ground instance of every required identity watches one undecided cell it
//! needs; when that cell is decided the instance is re-evaluated and either
//! moves on to the next undecided cell, forces the last missing cell, or
//! reports a conflict. Watches are never restored on backtracking: an
//! instance always watches a cell decided after every cell it has read so far,
//! so undoing a read cell also undoes the watched one.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::term::{Identity, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("element {value} out of range for a model of size {size}")]
    OutOfRange { value: usize, size: usize },
    #[error("table has {found} entries, expected {expected}")]
    BadTable { expected: usize, found: usize },
    #[error("search node budget of {budget} exceeded")]
    ResourceExhausted { budget: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite model with total operation tables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteModel {
    size: usize,
    // Field order gives the derived ordering: complement table first, then
    // the meet table row by row.
    comp: Vec<u8>,
    meet: Vec<u8>,
}

impl FiniteModel {
    pub fn new(size: usize, meet: Vec<u8>, comp: Vec<u8>) -> Result<Self, ModelError> {
        if meet.len() != size * size {
            return Err(ModelError::BadTable { expected: size * size, found: meet.len() });
        }
        if comp.len() != size {
            return Err(ModelError::BadTable { expected: size, found: comp.len() });
        }
        if let Some(&v) = meet.iter().chain(&comp).find(|&&v| v as usize >= size) {
            return Err(ModelError::OutOfRange { value: v as usize, size });
        }
        if size == 0 || size > 255 {
            return Err(ModelError::OutOfRange { value: size, size: 255 });
        }
        Ok(FiniteModel { size, comp, meet })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    pub fn comp(&self, a: usize) -> usize {
        self.comp[a] as usize
    }

    pub fn meet_table(&self) -> &[u8] {
        &self.meet
    }

    pub fn comp_table(&self) -> &[u8] {
        &self.comp
    }

    /// The two-element Boolean algebra: meet is minimum, complement swaps.
    pub fn ba2() -> Self {
        FiniteModel::new(2, vec![0, 0, 0, 1], vec![1, 0]).expect("valid")
    }

    /// The four-element Boolean algebra, built as the square of [`Self::ba2`].
    pub fn ba4() -> Self {
        Self::ba2().product(&Self::ba2())
    }

    /// Direct product; the pair `(i, j)` is element `i * other.size + j`.
    pub fn product(&self, other: &FiniteModel) -> FiniteModel {
        let (n, k) = (self.size, other.size);
        let idx = |i: usize, j: usize| (i * k + j) as u8;
        let mut meet = Vec::with_capacity(n * k * n * k);
        for a in 0..n * k {
            for b in 0..n * k {
                meet.push(idx(self.meet(a / k, b / k), other.meet(a % k, b % k)));
            }
        }
        let comp = (0..n * k).map(|a| idx(self.comp(a / k), other.comp(a % k))).collect();
        FiniteModel::new(n * k, meet, comp).expect("product of valid models")
    }

    /// The model obtained by renaming every element `a` to `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteModel {
        let n = self.size;
        let mut meet = vec![0u8; n * n];
        let mut comp = vec![0u8; n];
        for a in 0..n {
            comp[perm[a]] = perm[self.comp(a)] as u8;
            for b in 0..n {
                meet[perm[a] * n + perm[b]] = perm[self.meet(a, b)] as u8;
            }
        }
        FiniteModel { size: n, comp, meet }
    }

    /// Least isomorphic copy under all domain permutations.
    pub fn canonical(&self) -> FiniteModel {
        let mut best = self.clone();
        for_each_permutation(self.size, |perm| {
            let m = self.permuted(perm);
            if m < best {
                best = m;
            }
        });
        best
    }

    pub fn is_isomorphic(&self, other: &FiniteModel) -> bool {
        self.size == other.size && self.canonical() == other.canonical()
    }
}

impl fmt::Debug for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_model(self))
    }
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    // Heap's algorithm.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Evaluates a term under an assignment of its variables.
pub fn evaluate(m: &FiniteModel, t: &Term, assignment: &HashMap<String, usize>) -> Result<usize, ModelError> {
    match t {
        Term::Var(v) => {
            let a = *assignment.get(&**v).ok_or_else(|| ModelError::UnboundVariable(v.to_string()))?;
            if a >= m.size {
                return Err(ModelError::OutOfRange { value: a, size: m.size });
            }
            Ok(a)
        }
        Term::Meet(l, r) => Ok(m.meet(evaluate(m, l, assignment)?, evaluate(m, r, assignment)?)),
        Term::Comp(a) => Ok(m.comp(evaluate(m, a, assignment)?)),
    }
}

/// Postfix program for fast repeated evaluation.
#[derive(Clone, Debug)]
struct Program {
    ops: Vec<Op>,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Comp,
    Meet,
}

impl Program {
    fn compile(t: &Term, vars: &[std::sync::Arc<str>]) -> Program {
        fn go(t: &Term, vars: &[std::sync::Arc<str>], ops: &mut Vec<Op>) {
            match t {
                Term::Var(v) => ops.push(Op::Var(vars.iter().position(|w| w == v).expect("var listed"))),
                Term::Meet(l, r) => {
                    go(l, vars, ops);
                    go(r, vars, ops);
                    ops.push(Op::Meet);
                }
                Term::Comp(a) => {
                    go(a, vars, ops);
                    ops.push(Op::Comp);
                }
            }
        }
        let mut ops = Vec::new();
        go(t, vars, &mut ops);
        Program { ops }
    }

    fn eval(&self, m: &FiniteModel, env: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for op in &self.ops {
            match *op {
                Op::Var(i) => stack.push(env[i]),
                Op::Comp => {
                    let a = stack.pop().expect("arity");
                    stack.push(m.comp(a));
                }
                Op::Meet => {
                    let b = stack.pop().expect("arity");
                    let a = stack.pop().expect("arity");
                    stack.push(m.meet(a, b));
                }
            }
        }
        stack[0]
    }

    /// Evaluation against a partial table (`UNDECIDED` marks open cells).
    fn eval_partial(&self, n: usize, cells: &[u8], env: &[usize], stack: &mut Vec<usize>) -> Partial {
        stack.clear();
        let last = self.ops.len() - 1;
        for (k, op) in self.ops.iter().enumerate() {
            match *op {
                Op::Var(i) => stack.push(env[i]),
                Op::Comp => {
                    let a = stack.pop().expect("arity");
                    let cell = a;
                    match cells[cell] {
                        UNDECIDED => return Partial::Blocked { cell, root: k == last },
                        v => stack.push(v as usize),
                    }
                }
                Op::Meet => {
                    let b = stack.pop().expect("arity");
                    let a = stack.pop().expect("arity");
                    let cell = n + a * n + b;
                    match cells[cell] {
                        UNDECIDED => return Partial::Blocked { cell, root: k == last },
                        v => stack.push(v as usize),
                    }
                }
            }
        }
        Partial::Value(stack[0])
    }
}

enum Partial {
    Value(usize),
    Blocked { cell: usize, root: bool },
}

const UNDECIDED: u8 = u8::MAX;

struct Compiled {
    vars: usize,
    lhs: Program,
    rhs: Program,
}

impl Compiled {
    fn new(i: &Identity) -> Compiled {
        let vars = i.vars();
        Compiled { vars: vars.len(), lhs: Program::compile(&i.lhs, &vars), rhs: Program::compile(&i.rhs, &vars) }
    }

    fn holds(&self, m: &FiniteModel) -> bool {
        let mut env = vec![0usize; self.vars];
        let mut stack = Vec::new();
        loop {
            if self.lhs.eval(m, &env, &mut stack) != self.rhs.eval(m, &env, &mut stack) {
                return false;
            }
            if !next_assignment(&mut env, m.size) {
                return true;
            }
        }
    }
}

fn next_assignment(env: &mut [usize], n: usize) -> bool {
    for slot in env.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// True iff both sides agree under all `n^k` assignments.
pub fn satisfies(m: &FiniteModel, identity: &Identity) -> bool {
    Compiled::new(identity).holds(m)
}

/// Some assignment under which the identity fails, if any.
pub fn counterexample(m: &FiniteModel, identity: &Identity) -> Option<Vec<(String, usize)>> {
    let vars = identity.vars();
    let c = Compiled::new(identity);
    let mut env = vec![0usize; vars.len()];
    let mut stack = Vec::new();
    loop {
        if c.lhs.eval(m, &env, &mut stack) != c.rhs.eval(m, &env, &mut stack) {
            return Some(vars.iter().map(|v| v.to_string()).zip(env.iter().copied()).collect());
        }
        if !next_assignment(&mut env, m.size) {
            return None;
        }
    }
}

/// Reference base J1, J2, J4, J5 for Boolean algebras.
pub fn boolean_algebra_base() -> Vec<Identity> {
    use crate::syntax::parse_equation;
    [
        ("J1", "x ^ y = y ^ x"),
        ("J2", "x ^ (y ^ z) = (x ^ y) ^ z"),
        ("J4", "x'' = x"),
        ("J5", "x' = (x ^ y)' ^ (x ^ y')'"),
    ]
    .iter()
    .map(|(n, s)| {
        let (l, r) = parse_equation(s).expect("valid");
        Identity::new(*n, l, r)
    })
    .collect()
}

pub fn is_boolean_algebra(m: &FiniteModel) -> bool {
    boolean_algebra_base().iter().all(|i| satisfies(m, i))
}

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub size: usize,
    pub satisfy: Vec<Identity>,
    pub violate: Option<Identity>,
    /// Maximum number of models returned.
    pub limit: Option<usize>,
    pub up_to_iso: bool,
    pub node_budget: u64,
    pub workers: usize,
}

impl SearchOptions {
    pub fn new(size: usize, satisfy: Vec<Identity>) -> Self {
        SearchOptions {
            size,
            satisfy,
            violate: None,
            limit: None,
            up_to_iso: false,
            node_budget: DEFAULT_NODE_BUDGET,
            workers: 1,
        }
    }

    pub fn violating(mut self, target: Identity) -> Self {
        self.violate = Some(target);
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn up_to_iso(mut self) -> Self {
        self.up_to_iso = true;
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub models: Vec<FiniteModel>,
    /// Decision nodes visited.
    pub nodes: u64,
}

struct Searcher<'a> {
    n: usize,
    instances: Vec<(usize, Vec<usize>)>,
    programs: &'a [Compiled],
    violate: Option<&'a Compiled>,
    up_to_iso: bool,
    cells: Vec<u8>,
    watches: Vec<Vec<usize>>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    stack: Vec<usize>,
    nodes: u64,
    budget: u64,
    limit: usize,
    found: Vec<FiniteModel>,
    classes: BTreeSet<FiniteModel>,
}

enum Eval {
    Ok,
    Conflict,
}

impl<'a> Searcher<'a> {
    fn new(
        n: usize,
        programs: &'a [Compiled],
        violate: Option<&'a Compiled>,
        up_to_iso: bool,
        budget: u64,
        limit: usize,
    ) -> Self {
        let mut instances = Vec::new();
        for (k, p) in programs.iter().enumerate() {
            let mut env = vec![0usize; p.vars];
            loop {
                instances.push((k, env.clone()));
                if !next_assignment(&mut env, n) {
                    break;
                }
            }
        }
        let cells = n + n * n;
        Searcher {
            n,
            instances,
            programs,
            violate,
            up_to_iso,
            cells: vec![UNDECIDED; cells],
            watches: vec![Vec::new(); cells],
            trail: Vec::new(),
            queue: Vec::new(),
            stack: Vec::new(),
            nodes: 0,
            budget,
            limit,
            found: Vec::new(),
            classes: BTreeSet::new(),
        }
    }

    fn assign(&mut self, cell: usize, value: u8) {
        self.cells[cell] = value;
        self.trail.push(cell);
        self.queue.push(cell);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let c = self.trail.pop().expect("non-empty");
            self.cells[c] = UNDECIDED;
        }
        self.queue.clear();
    }

    /// Evaluates one instance; on success the instance has been re-filed
    /// under the right watch list (or forced a cell and been filed there).
    fn visit(&mut self, inst: usize, keep: &mut Vec<usize>, current: Option<usize>) -> Eval {
        let (k, ref env) = self.instances[inst];
        let p = &self.programs[k];
        let l = p.lhs.eval_partial(self.n, &self.cells, env, &mut self.stack);
        let r = p.rhs.eval_partial(self.n, &self.cells, env, &mut self.stack);
        let (watch, force) = match (l, r) {
            (Partial::Value(a), Partial::Value(b)) => {
                if a != b {
                    return Eval::Conflict;
                }
                // Stay where we are: re-checked when this cell changes.
                (current, None)
            }
            (Partial::Value(v), Partial::Blocked { cell, root: true })
            | (Partial::Blocked { cell, root: true }, Partial::Value(v)) => (Some(cell), Some((cell, v as u8))),
            (Partial::Blocked { cell, .. }, _) | (_, Partial::Blocked { cell, .. }) => (Some(cell), None),
        };
        match watch {
            Some(c) if Some(c) == current => keep.push(inst),
            Some(c) => self.watches[c].push(inst),
            None => keep.push(inst),
        }
        if let Some((cell, v)) = force {
            self.assign(cell, v);
        }
        Eval::Ok
    }

    fn initialize(&mut self) -> Eval {
        let mut keep = Vec::new();
        for inst in 0..self.instances.len() {
            let before = keep.len();
            if let Eval::Conflict = self.visit(inst, &mut keep, None) {
                return Eval::Conflict;
            }
            // Instances decided without reading any cell need no watch.
            keep.truncate(before);
        }
        self.propagate()
    }

    fn propagate(&mut self) -> Eval {
        while let Some(cell) = self.queue.pop() {
            let list = std::mem::take(&mut self.watches[cell]);
            let mut keep = Vec::with_capacity(list.len());
            for (i, &inst) in list.iter().enumerate() {
                if let Eval::Conflict = self.visit(inst, &mut keep, Some(cell)) {
                    keep.extend_from_slice(&list[i..]);
                    self.watches[cell].extend(keep);
                    self.queue.clear();
                    return Eval::Conflict;
                }
            }
            self.watches[cell].extend(keep);
        }
        Eval::Ok
    }

    fn model(&self) -> FiniteModel {
        let n = self.n;
        FiniteModel { size: n, comp: self.cells[..n].to_vec(), meet: self.cells[n..].to_vec() }
    }

    /// Least-number pruning: elements not yet mentioned by any assigned
    /// cell are interchangeable, so only the smallest of them is tried.
    fn candidates(&self, cell: usize) -> u64 {
        let n = self.n;
        let all = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        if !self.up_to_iso || n > 64 {
            return all;
        }
        let args = |c: usize| -> u64 {
            if c < n {
                1 << c
            } else {
                (1 << ((c - n) / n)) | (1 << ((c - n) % n))
            }
        };
        let mut used = args(cell);
        for &c in &self.trail {
            used |= args(c) | (1 << self.cells[c]);
        }
        let fresh = !used & all;
        used | (fresh & fresh.wrapping_neg())
    }

    /// Without isomorphism pruning cells are filled in table order, so
    /// models come out sorted. Otherwise the search branches on the cell
    /// the most pending instances are waiting for.
    fn pick(&self) -> Option<usize> {
        let open = (0..self.cells.len()).filter(|&c| self.cells[c] == UNDECIDED);
        if self.up_to_iso {
            open.max_by_key(|&c| (self.watches[c].len(), std::cmp::Reverse(c)))
        } else {
            open.min()
        }
    }

    fn leaf(&mut self) -> bool {
        let m = self.model();
        if self.violate.is_some_and(|v| v.holds(&m)) {
            return true;
        }
        if self.up_to_iso {
            let c = m.canonical();
            if !self.classes.contains(&c) {
                self.classes.insert(c.clone());
                self.found.push(c);
            }
        } else {
            self.found.push(m);
        }
        self.found.len() < self.limit
    }

    /// Depth-first search from the current state. Returns `false` once the
    /// limit is reached or the budget is exhausted.
    fn search(&mut self) -> bool {
        let Some(cell) = self.pick() else {
            return self.leaf();
        };
        let values = self.candidates(cell);
        for v in 0..self.n as u8 {
            if values & (1 << v) == 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let mark = self.trail.len();
            self.assign(cell, v);
            let go_on = match self.propagate() {
                Eval::Ok => self.search(),
                Eval::Conflict => true,
            };
            self.undo_to(mark);
            if !go_on {
                return false;
            }
        }
        true
    }
}

struct SubtreeResult {
    models: Vec<FiniteModel>,
    nodes: u64,
    exhausted: bool,
}

fn search_subtree(
    opts: &SearchOptions,
    programs: &[Compiled],
    violate: Option<&Compiled>,
    first: Option<u8>,
    budget: u64,
) -> SubtreeResult {
    let limit = opts.limit.unwrap_or(usize::MAX);
    let mut s = Searcher::new(opts.size, programs, violate, opts.up_to_iso, budget, limit);
    if let Eval::Conflict = s.initialize() {
        return SubtreeResult { models: vec![], nodes: 0, exhausted: false };
    }
    if let Some(v) = first {
        // Cell 0 (the complement of element 0) may already be forced.
        match s.cells[0] {
            UNDECIDED => {
                if s.candidates(0) & (1 << v) == 0 {
                    return SubtreeResult { models: vec![], nodes: 0, exhausted: false };
                }
                s.nodes += 1;
                s.assign(0, v);
                if let Eval::Conflict = s.propagate() {
                    return SubtreeResult { models: vec![], nodes: s.nodes, exhausted: false };
                }
            }
            forced if forced != v => return SubtreeResult { models: vec![], nodes: 0, exhausted: false },
            _ => {}
        }
    }
    s.search();
    SubtreeResult { exhausted: s.nodes > budget, models: s.found, nodes: s.nodes.min(budget) }
}

/// Finds models of `opts.satisfy` (violating `opts.violate` if given) in
/// lexicographic order of (complement table, meet table). With `up_to_iso`
/// each isomorphism class is represented by its least member; if a limit
/// cuts the search short, which classes are returned depends on the search
/// order (but not on anything else).
///
/// The result does not depend on `opts.workers`: subtrees are merged as if
/// searched in sequence, and the node budget is charged in that order.
pub fn search_models(opts: &SearchOptions) -> Result<SearchOutcome, ModelError> {
    let programs: Vec<Compiled> = opts.satisfy.iter().map(Compiled::new).collect();
    let violate = opts.violate.as_ref().map(Compiled::new);
    let n = opts.size;
    if n == 0 {
        return Ok(SearchOutcome { models: vec![], nodes: 0 });
    }
    let limit = opts.limit.unwrap_or(usize::MAX);
    // Each first-cell value is searched from a fresh state so that node
    // counts are the same however the subtrees are scheduled.
    let run = |v: u8| search_subtree(opts, &programs, violate.as_ref(), Some(v), opts.node_budget);
    let parts: Vec<SubtreeResult> = if opts.workers <= 1 {
        let mut parts = Vec::new();
        let mut nodes = 0u64;
        let mut found = BTreeSet::new();
        for v in 0..n as u8 {
            let part = run(v);
            nodes += part.nodes;
            found.extend(part.models.iter().cloned());
            let stop = part.exhausted || nodes > opts.node_budget || found.len() >= limit;
            parts.push(part);
            if stop {
                break;
            }
        }
        parts
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.workers).build().expect("thread pool");
        pool.install(|| (0..n as u8).into_par_iter().map(run).collect())
    };
    let mut models = Vec::new();
    let mut seen = BTreeSet::new();
    let mut nodes = 0u64;
    for part in parts {
        for m in part.models {
            // Subtrees may meet the same isomorphism class.
            if models.len() < limit && seen.insert(m.clone()) {
                models.push(m);
            }
        }
        nodes += part.nodes;
        if nodes > opts.node_budget || part.exhausted {
            return Err(ModelError::ResourceExhausted { budget: opts.node_budget });
        }
        if models.len() >= limit {
            break;
        }
    }
    models.sort();
    Ok(SearchOutcome { models, nodes })
}

/// Parses one or more models in `.eqm` format, separated by blank lines.
pub fn parse_models(input: &str) -> Result<Vec<FiniteModel>, ModelError> {
    let mut models = Vec::new();
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    let err = |line: usize, message: &str| ModelError::Parse { line, message: message.to_string() };
    let row = |line: usize, text: &str| -> Result<Vec<u8>, ModelError> {
        text.split_whitespace().map(|w| w.parse::<u8>().map_err(|_| err(line, "expected an element"))).collect()
    };
    while let Some((line, text)) = lines.next() {
        let size: usize = text
            .strip_prefix("size")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(line, "expected `size N`"))?;
        let (line, text) = lines.next().ok_or_else(|| err(line, "expected `meet:`"))?;
        if text != "meet:" {
            return Err(err(line, "expected `meet:`"));
        }
        let mut meet = Vec::new();
        for _ in 0..size {
            let (line, text) = lines.next().ok_or_else(|| err(line, "missing meet row"))?;
            let r = row(line, text)?;
            if r.len() != size {
                return Err(err(line, "meet row has the wrong length"));
            }
            meet.extend(r);
        }
        let (line, text) = lines.next().ok_or_else(|| err(line, "expected `comp:`"))?;
        if text != "comp:" {
            return Err(err(line, "expected `comp:`"));
        }
        let (line, text) = lines.next().ok_or_else(|| err(line, "missing comp row"))?;
        let comp = row(line, text)?;
        if comp.len() != size {
            return Err(err(line, "comp row has the wrong length"));
        }
        models.push(FiniteModel::new(size, meet, comp).map_err(|e| err(line, &e.to_string()))?);
    }
    Ok(models)
}

pub fn format_model(m: &FiniteModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "size {}", m.size);
    out.push_str("meet:\n");
    for a in 0..m.size {
        let row: Vec<String> = (0..m.size).map(|b| m.meet(a, b).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out.push_str("comp:\n");
    let row: Vec<String> = m.comp.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "{}", row.join(" "));
    out
}

/// Number of isomorphism classes among `models`.
pub fn count_up_to_iso(models: &[FiniteModel]) -> usize {
    models.iter().map(|m| m.canonical()).collect::<BTreeSet<_>>().len()
}
