//! Flat preorder terms used inside the prover.
//!
//! A term is a `Vec<Sym>` in prefix order. Variables are numbered per
//! equation; constants stand for goal variables (skolem constants). `Const(0)`
//! is the least term of the ordering and is used to instantiate variables
//! that only occur on the output side of a rule when rewriting ground goals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::term::{alphabet_var, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Sym {
    Meet,
    Comp,
    Var(u32),
    Const(u32),
}

impl Sym {
    #[inline]
    pub(crate) fn arity(self) -> usize {
        match self {
            Sym::Meet => 2,
            Sym::Comp => 1,
            _ => 0,
        }
    }

    // Precedence: ′ > ∧ > constants, constants ordered by index.
    fn prec(self) -> u64 {
        match self {
            Sym::Comp => u64::MAX,
            Sym::Meet => u64::MAX - 1,
            Sym::Const(c) => c as u64,
            Sym::Var(_) => unreachable!("variables have no precedence"),
        }
    }
}

pub(crate) type FTerm = Vec<Sym>;

/// End (exclusive) of the subterm starting at `i`.
#[inline]
pub(crate) fn end(t: &[Sym], i: usize) -> usize {
    let mut need = 1usize;
    let mut j = i;
    while need > 0 {
        need += t[j].arity();
        need -= 1;
        j += 1;
    }
    j
}

pub(crate) fn is_ground(t: &[Sym]) -> bool {
    !t.iter().any(|s| matches!(s, Sym::Var(_)))
}

pub(crate) fn max_var(t: &[Sym]) -> Option<u32> {
    t.iter()
        .filter_map(|s| match s {
            Sym::Var(v) => Some(*v),
            _ => None,
        })
        .max()
}

/// Preorder index to tree path.
pub(crate) fn path_of(t: &[Sym], at: usize) -> Vec<u8> {
    let mut path = Vec::new();
    let mut i = 0;
    while i != at {
        match t[i] {
            Sym::Comp => {
                path.push(0);
                i += 1;
            }
            Sym::Meet => {
                let second = end(t, i + 1);
                if at < second {
                    path.push(0);
                    i += 1;
                } else {
                    path.push(1);
                    i = second;
                }
            }
            _ => unreachable!("position inside a leaf"),
        }
    }
    path
}

pub(crate) fn replace(t: &[Sym], at: usize, with: &[Sym]) -> FTerm {
    let e = end(t, at);
    let mut out = Vec::with_capacity(t.len() - (e - at) + with.len());
    out.extend_from_slice(&t[..at]);
    out.extend_from_slice(with);
    out.extend_from_slice(&t[e..]);
    out
}

/// Bindings of pattern variables to ranges of the subject.
pub(crate) struct Binds {
    slots: Vec<Option<(u32, u32)>>,
}

impl Binds {
    pub(crate) fn new() -> Self {
        Binds { slots: Vec::new() }
    }

    fn clear(&mut self) {
        self.slots.clear();
    }

    pub(crate) fn get<'a>(&self, v: u32, subject: &'a [Sym]) -> Option<&'a [Sym]> {
        self.slots.get(v as usize).copied().flatten().map(|(a, b)| &subject[a as usize..b as usize])
    }
}

/// One-way matching of `pat` against the subterm of `subj` at `at`.
pub(crate) fn match_at(pat: &[Sym], subj: &[Sym], at: usize, b: &mut Binds) -> bool {
    b.clear();
    let mut j = at;
    for &p in pat {
        match p {
            Sym::Var(v) => {
                let e = end(subj, j);
                let v = v as usize;
                if b.slots.len() <= v {
                    b.slots.resize(v + 1, None);
                }
                match b.slots[v] {
                    None => b.slots[v] = Some((j as u32, e as u32)),
                    Some((x, y)) => {
                        if subj[x as usize..y as usize] != subj[j..e] {
                            return false;
                        }
                    }
                }
                j = e;
            }
            s => {
                if subj[j] != s {
                    return false;
                }
                j += 1;
            }
        }
    }
    true
}

/// Instantiates `t` with bindings into `subj`. Unbound variables become
/// `fill` when given, else stay as they are.
pub(crate) fn instantiate(t: &[Sym], b: &Binds, subj: &[Sym], fill: Option<Sym>) -> FTerm {
    let mut out = Vec::with_capacity(t.len() * 2);
    instantiate_into(t, b, subj, fill, &mut out);
    out
}

pub(crate) fn instantiate_into(t: &[Sym], b: &Binds, subj: &[Sym], fill: Option<Sym>, out: &mut FTerm) {
    out.clear();
    for &s in t {
        match s {
            Sym::Var(v) => match b.get(v, subj) {
                Some(r) => out.extend_from_slice(r),
                None => out.push(fill.unwrap_or(s)),
            },
            s => out.push(s),
        }
    }
}

pub(crate) fn vars_subset(small: &[Sym], big: &[Sym]) -> bool {
    small.iter().all(|s| match s {
        Sym::Var(_) => big.contains(s),
        _ => true,
    })
}

/// Renames variables to 0, 1, … in order of first occurrence across `ts`.
pub(crate) fn normalize_vars(ts: &mut [&mut FTerm]) {
    let mut map: HashMap<u32, u32> = HashMap::new();
    for t in ts.iter_mut() {
        for s in t.iter_mut() {
            if let Sym::Var(v) = s {
                let n = map.len() as u32;
                *v = *map.entry(*v).or_insert(n);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Cmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

fn var_dominates(s: &[Sym], t: &[Sym]) -> bool {
    // Multiset inclusion of variable occurrences.
    let mut small = [0i32; 32];
    let mut big: Vec<i32> = Vec::new();
    let mut any = false;
    for x in t {
        if let Sym::Var(v) = *x {
            any = true;
            let v = v as usize;
            if v < 32 {
                small[v] += 1;
            } else {
                if big.len() <= v {
                    big.resize(v + 1, 0);
                }
                big[v] += 1;
            }
        }
    }
    if !any {
        return true;
    }
    for x in s {
        if let Sym::Var(v) = *x {
            let v = v as usize;
            if v < 32 {
                small[v] -= 1;
            } else if v < big.len() {
                big[v] -= 1;
            }
        }
    }
    small.iter().chain(&big).all(|&c| c <= 0)
}

/// Knuth–Bendix order, all weights 1. Total on ground terms.
pub(crate) fn kbo_gt(s: &[Sym], t: &[Sym]) -> bool {
    if let Sym::Var(_) = t[0] {
        return s.len() > 1 && s.contains(&t[0]);
    }
    if let Sym::Var(_) = s[0] {
        return false;
    }
    if s.len() < t.len() {
        return false;
    }
    // Decide ignoring variables, then check the variable condition.
    let pre = s.len() > t.len()
        || match s[0].prec().cmp(&t[0].prec()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                // Same head: compare arguments left to right.
                let (mut i, mut j) = (1, 1);
                let mut r = false;
                for _ in 0..s[0].arity() {
                    let (ei, ej) = (end(s, i), end(t, j));
                    if s[i..ei] != t[j..ej] {
                        r = kbo_gt(&s[i..ei], &t[j..ej]);
                        break;
                    }
                    i = ei;
                    j = ej;
                }
                r
            }
        };
    pre && var_dominates(s, t)
}

pub(crate) fn kbo(s: &[Sym], t: &[Sym]) -> Cmp {
    if s == t {
        Cmp::Equal
    } else if kbo_gt(s, t) {
        Cmp::Greater
    } else if kbo_gt(t, s) {
        Cmp::Less
    } else {
        Cmp::Incomparable
    }
}

/// Syntactic unification over two variable-disjoint terms. Bindings are
/// kept in triangular form and resolved by [`Unifier::apply`].
pub(crate) struct Unifier {
    binds: HashMap<u32, FTerm>,
}

impl Unifier {
    pub(crate) fn new() -> Self {
        Unifier { binds: HashMap::new() }
    }

    fn deref<'a>(&'a self, t: &'a [Sym]) -> &'a [Sym] {
        let mut t = t;
        while let Sym::Var(v) = t[0] {
            match self.binds.get(&v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &[Sym]) -> bool {
        t.iter().any(|s| match s {
            Sym::Var(w) if *w == v => true,
            Sym::Var(w) => self.binds.get(w).is_some_and(|b| self.occurs(v, b)),
            _ => false,
        })
    }

    pub(crate) fn unify(&mut self, a: &[Sym], b: &[Sym]) -> bool {
        let a = self.deref(a).to_vec();
        let b = self.deref(b).to_vec();
        match (a[0], b[0]) {
            (Sym::Var(x), Sym::Var(y)) if x == y => true,
            (Sym::Var(x), _) => {
                if self.occurs(x, &b) {
                    return false;
                }
                self.binds.insert(x, b);
                true
            }
            (_, Sym::Var(y)) => {
                if self.occurs(y, &a) {
                    return false;
                }
                self.binds.insert(y, a);
                true
            }
            (f, g) if f != g => false,
            (f, _) => {
                let (mut i, mut j) = (1, 1);
                for _ in 0..f.arity() {
                    let (ei, ej) = (end(&a, i), end(&b, j));
                    if !self.unify(&a[i..ei], &b[j..ej]) {
                        return false;
                    }
                    i = ei;
                    j = ej;
                }
                true
            }
        }
    }

    pub(crate) fn apply(&self, t: &[Sym]) -> FTerm {
        let mut out = Vec::with_capacity(t.len());
        self.apply_into(t, &mut out);
        out
    }

    fn apply_into(&self, t: &[Sym], out: &mut FTerm) {
        for &s in t {
            match s {
                Sym::Var(v) => match self.binds.get(&v) {
                    Some(b) => self.apply_into(b, out),
                    None => out.push(s),
                },
                s => out.push(s),
            }
        }
    }
}

pub(crate) fn shift_vars(t: &[Sym], by: u32) -> FTerm {
    t.iter()
        .map(|&s| match s {
            Sym::Var(v) => Sym::Var(v + by),
            s => s,
        })
        .collect()
}

/// Converts a term, numbering its variables through `vars`.
pub(crate) fn from_term(t: &Term, vars: &mut Vec<Arc<str>>, as_const: bool) -> FTerm {
    fn go(t: &Term, vars: &mut Vec<Arc<str>>, as_const: bool, out: &mut FTerm) {
        match t {
            Term::Var(v) => {
                let i = match vars.iter().position(|w| w == v) {
                    Some(i) => i,
                    None => {
                        vars.push(v.clone());
                        vars.len() - 1
                    }
                };
                out.push(if as_const { Sym::Const(i as u32 + 1) } else { Sym::Var(i as u32) });
            }
            Term::Meet(a, b) => {
                out.push(Sym::Meet);
                go(a, vars, as_const, out);
                go(b, vars, as_const, out);
            }
            Term::Comp(a) => {
                out.push(Sym::Comp);
                go(a, vars, as_const, out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, vars, as_const, &mut out);
    out
}

/// Converts back; variables use the standard alphabet, constants are looked
/// up in `consts` (index 0 is the least constant).
pub(crate) fn to_term(t: &[Sym], consts: &[Term]) -> Term {
    fn go(t: &[Sym], i: &mut usize, consts: &[Term]) -> Term {
        let s = t[*i];
        *i += 1;
        match s {
            Sym::Meet => {
                let a = go(t, i, consts);
                let b = go(t, i, consts);
                Term::meet(a, b)
            }
            Sym::Comp => Term::comp(go(t, i, consts)),
            Sym::Var(v) => Term::var(&alphabet_var(v as usize)),
            Sym::Const(c) => consts[c as usize].clone(),
        }
    }
    go(t, &mut 0, consts)
}
