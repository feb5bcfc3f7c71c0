//! Terms over the signature ⟨∧, ′⟩: a binary meet and a unary complement.
//!
//! Everything here is immutable; subterms are shared through [`Arc`] so
//! terms are cheap to clone and can be sent between worker threads.
//! Structural equality is literal tree equality. No associativity or
//! commutativity is ever assumed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid position {0} for term {1}")]
    InvalidPosition(Position, Term),
}

/// A term: a variable, a meet of two terms, or the complement of a term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Arc<str>),
    Meet(Arc<Term>, Arc<Term>),
    Comp(Arc<Term>),
}

/// Name of the `i`-th variable of the canonical alphabet:
/// `x, y, z, u, w, t`, then `v1, v2, ...`.
pub fn alphabet_var(i: usize) -> String {
    const FIRST: [&str; 6] = ["x", "y", "z", "u", "w", "t"];
    match FIRST.get(i) {
        Some(name) => (*name).to_string(),
        None => format!("v{}", i - FIRST.len() + 1),
    }
}

/// Rank of a variable name in the canonical alphabet order. Names outside
/// the alphabet sort after it, alphabetically.
pub fn var_rank(name: &str) -> (usize, usize, &str) {
    const FIRST: [&str; 6] = ["x", "y", "z", "u", "w", "t"];
    if let Some(i) = FIRST.iter().position(|v| *v == name) {
        return (0, i, "");
    }
    if let Some(n) = name.strip_prefix('v').and_then(|d| d.parse::<usize>().ok()) {
        if n >= 1 && !name[1..].starts_with('0') {
            return (1, n, "");
        }
    }
    (2, 0, name)
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn meet(left: Term, right: Term) -> Term {
        Term::Meet(Arc::new(left), Arc::new(right))
    }

    pub fn comp(arg: Term) -> Term {
        Term::Comp(Arc::new(arg))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Meet(l, r) => 1 + l.size() + r.size(),
            Term::Comp(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Meet(l, r) => 1 + l.depth().max(r.depth()),
            Term::Comp(a) => 1 + a.depth(),
        }
    }

    /// Distinct variables in order of first occurrence (left to right).
    pub fn vars(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|w| w == v) {
                    out.push(v.clone());
                }
            }
            Term::Meet(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Term::Comp(a) => a.collect_vars(out),
        }
    }

    /// Occurrence count of every variable.
    pub fn var_counts(&self) -> HashMap<Arc<str>, usize> {
        let mut counts = HashMap::new();
        self.count_vars(&mut counts);
        counts
    }

    fn count_vars(&self, counts: &mut HashMap<Arc<str>, usize>) {
        match self {
            Term::Var(v) => *counts.entry(v.clone()).or_insert(0) += 1,
            Term::Meet(l, r) => {
                l.count_vars(counts);
                r.count_vars(counts);
            }
            Term::Comp(a) => a.count_vars(counts),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => &**v == name,
            Term::Meet(l, r) => l.contains_var(name) || r.contains_var(name),
            Term::Comp(a) => a.contains_var(name),
        }
    }

    /// Immediate children, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) => vec![],
            Term::Meet(l, r) => vec![&**l, &**r],
            Term::Comp(a) => vec![&**a],
        }
    }

    fn child(&self, index: u8) -> Option<&Term> {
        match (self, index) {
            (Term::Meet(l, _), 0) => Some(l),
            (Term::Meet(_, r), 1) => Some(r),
            (Term::Comp(a), 0) => Some(a),
            _ => None,
        }
    }

    /// All positions of the term in pre-order (root first).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<u8>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        match self {
            Term::Var(_) => {}
            Term::Meet(l, r) => {
                path.push(0);
                l.collect_positions(path, out);
                path.pop();
                path.push(1);
                r.collect_positions(path, out);
                path.pop();
            }
            Term::Comp(a) => {
                path.push(0);
                a.collect_positions(path, out);
                path.pop();
            }
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term, TermError> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = cur.child(i).ok_or_else(|| TermError::InvalidPosition(pos.clone(), self.clone()))?;
        }
        Ok(cur)
    }

    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Result<Term, TermError> {
        self.replace_from(&pos.0, replacement).ok_or_else(|| TermError::InvalidPosition(pos.clone(), self.clone()))
    }

    fn replace_from(&self, path: &[u8], replacement: Term) -> Option<Term> {
        let Some((&head, rest)) = path.split_first() else {
            return Some(replacement);
        };
        match (self, head) {
            (Term::Meet(l, r), 0) => Some(Term::Meet(Arc::new(l.replace_from(rest, replacement)?), r.clone())),
            (Term::Meet(l, r), 1) => Some(Term::Meet(l.clone(), Arc::new(r.replace_from(rest, replacement)?))),
            (Term::Comp(a), 0) => Some(Term::Comp(Arc::new(a.replace_from(rest, replacement)?))),
            _ => None,
        }
    }

    /// Simultaneous substitution; unmapped variables stay as they are.
    pub fn substitute(&self, subst: &Substitution) -> Term {
        match self {
            Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Meet(l, r) => Term::meet(l.substitute(subst), r.substitute(subst)),
            Term::Comp(a) => Term::comp(a.substitute(subst)),
        }
    }

    /// Renames variables through `f`; variables for which `f` returns `None`
    /// are kept.
    pub fn rename(&self, f: &impl Fn(&str) -> Option<Arc<str>>) -> Term {
        match self {
            Term::Var(v) => match f(v) {
                Some(w) => Term::Var(w),
                None => self.clone(),
            },
            Term::Meet(l, r) => Term::meet(l.rename(f), r.rename(f)),
            Term::Comp(a) => Term::comp(a.rename(f)),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::format_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::format_term(self))
    }
}

/// Address of a subterm: 0 is the left child of a meet or the only child of
/// a complement, 1 is the right child of a meet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u8>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u8) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// A finite map from variable names to terms. Application is simultaneous.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<Arc<str>, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: &str, term: Term) {
        self.0.insert(Arc::from(var), term);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Arc<str>, &Term)> {
        self.0.iter()
    }

    /// Drops bindings of the form `v := v`.
    pub fn without_identity_bindings(&self) -> Substitution {
        Substitution(
            self.0
                .iter()
                .filter(|(v, t)| !matches!(t, Term::Var(w) if w == *v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        )
    }
}

impl FromIterator<(Arc<str>, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Arc<str>, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

/// One-way matching: finds `σ` with `pattern σ = subject`.
pub fn match_pattern(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    match_into(pattern, subject, &mut subst).then_some(subst)
}

/// Extends `subst` so that `pattern subst = subject`. On failure `subst` may
/// hold partial bindings.
pub fn match_into(pattern: &Term, subject: &Term, subst: &mut Substitution) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => match subst.0.get(v) {
            Some(bound) => bound == subject,
            None => {
                subst.0.insert(v.clone(), subject.clone());
                true
            }
        },
        (Term::Meet(pl, pr), Term::Meet(sl, sr)) => match_into(pl, sl, subst) && match_into(pr, sr, subst),
        (Term::Comp(pa), Term::Comp(sa)) => match_into(pa, sa, subst),
        _ => false,
    }
}

/// A named equation `lhs ≈ rhs`. Direction matters for rewriting; symmetry
/// is always applied explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(name: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        Identity { name: name.into(), lhs, rhs }
    }

    pub fn swapped(&self) -> Identity {
        Identity::new(self.name.clone(), self.rhs.clone(), self.lhs.clone())
    }

    /// Distinct variables, lhs first.
    pub fn vars(&self) -> Vec<Arc<str>> {
        let mut vs = self.lhs.vars();
        for v in self.rhs.vars() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs
    }

    /// Equal up to renaming of variables (not up to swapping sides).
    pub fn alpha_eq(&self, other: &Identity) -> bool {
        let a = alpha_canonical(self);
        let b = alpha_canonical(other);
        a.lhs == b.lhs && a.rhs == b.rhs
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Renames variables to `x, y, z, ...` in order of first occurrence,
/// reading the lhs and then the rhs.
pub fn alpha_canonical(identity: &Identity) -> Identity {
    let map: HashMap<Arc<str>, Arc<str>> =
        identity.vars().into_iter().enumerate().map(|(i, v)| (v, Arc::from(alphabet_var(i).as_str()))).collect();
    let f = |v: &str| map.get(v).cloned();
    Identity::new(identity.name.clone(), identity.lhs.rename(&f), identity.rhs.rename(&f))
}

/// Outcome of a Knuth–Bendix comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KboOrder {
    Greater,
    Less,
    Equal,
    Incomparable,
}

/// Knuth–Bendix ordering with every symbol and variable of weight 1 and
/// precedence ′ > ∧. Distinct variables are incomparable.
pub fn compare_kbo(a: &Term, b: &Term) -> KboOrder {
    if a == b {
        return KboOrder::Equal;
    }
    if kbo_greater(a, b) {
        KboOrder::Greater
    } else if kbo_greater(b, a) {
        KboOrder::Less
    } else {
        KboOrder::Incomparable
    }
}

fn kbo_greater(s: &Term, t: &Term) -> bool {
    if let Term::Var(v) = t {
        return s != t && s.contains_var(v);
    }
    if s.is_var() {
        return false;
    }
    let sc = s.var_counts();
    let tc = t.var_counts();
    if tc.iter().any(|(v, n)| sc.get(v).copied().unwrap_or(0) < *n) {
        return false;
    }
    match s.size().cmp(&t.size()) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match (s, t) {
            (Term::Comp(_), Term::Meet(..)) => true,
            (Term::Meet(..), Term::Comp(_)) => false,
            (Term::Comp(a), Term::Comp(b)) => kbo_greater(a, b),
            (Term::Meet(sl, sr), Term::Meet(tl, tr)) => {
                if sl == tl {
                    kbo_greater(sr, tr)
                } else {
                    kbo_greater(sl, tl)
                }
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn substitute_examples() {
        let mut s = Substitution::new();
        s.insert("x", t("z'"));
        s.insert("y", t("x"));
        assert_eq!(t("x ^ y").substitute(&s), t("z' ^ x"));
        assert_eq!(t("x ^ (y ^ z)").substitute(&Substitution::new()), t("x ^ (y ^ z)"));
        let mut s = Substitution::new();
        s.insert("x", t("x ^ x'"));
        assert_eq!(t("x'").substitute(&s), t("(x ^ x')'"));
    }

    #[test]
    fn match_examples() {
        let m = match_pattern(&t("x ^ x'"), &t("(y ^ z) ^ (y ^ z)'")).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.get("x"), Some(&t("y ^ z")));
        assert!(match_pattern(&t("x ^ x"), &t("x ^ y'")).is_none());
        let m = match_pattern(&t("x"), &t("(x' ^ y)'")).unwrap();
        assert_eq!(m.get("x"), Some(&t("(x' ^ y)'")));
    }

    #[test]
    fn position_examples() {
        let p = |v: &[u8]| Position(v.to_vec());
        assert_eq!(t("x ^ (y ^ z)").subterm_at(&p(&[1])).unwrap(), &t("y ^ z"));
        assert_eq!(t("x ^ (y ^ z)").replace_at(&p(&[1, 0]), t("z'")).unwrap(), t("x ^ (z' ^ z)"));
        assert!(matches!(t("x'").subterm_at(&p(&[1])), Err(TermError::InvalidPosition(..))));
        assert!(t("x").replace_at(&p(&[0]), t("y")).is_err());
        assert_eq!(p(&[1, 0]).to_string(), "[1,0]");
        assert_eq!(Position::root().to_string(), "[]");
    }

    #[test]
    fn kbo_examples() {
        assert_eq!(compare_kbo(&t("x ^ x"), &t("x")), KboOrder::Greater);
        assert_eq!(compare_kbo(&t("x"), &t("x ^ x")), KboOrder::Less);
        assert_eq!(compare_kbo(&t("x"), &t("y")), KboOrder::Incomparable);
        // Equal weights and variables; left arguments decide: x ^ y > x.
        assert_eq!(compare_kbo(&t("(x ^ y) ^ z"), &t("x ^ (y ^ z)")), KboOrder::Greater);
        assert_eq!(compare_kbo(&t("x ^ y"), &t("y ^ x")), KboOrder::Incomparable);
        assert_eq!(compare_kbo(&t("x''"), &t("x")), KboOrder::Greater);
        assert_eq!(compare_kbo(&t("(x ^ y)'"), &t("x' ^ y")), KboOrder::Greater);
        assert_eq!(compare_kbo(&t("x ^ x'"), &t("y ^ y'")), KboOrder::Incomparable);
        assert_eq!(compare_kbo(&t("x ^ y"), &t("x ^ y")), KboOrder::Equal);
    }

    #[test]
    fn alpha_canonical_examples() {
        let i = Identity::new("a", t("b ^ (a ^ c)"), t("a ^ (c ^ b)"));
        let c = alpha_canonical(&i);
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (t("x ^ (y ^ z)"), t("y ^ (z ^ x)")));
        assert_eq!(alpha_canonical(&c), c);
        let i = Identity::new("j1", t("x ^ y"), t("y ^ x"));
        assert_eq!(alpha_canonical(&i), i);
        let i = Identity::new("r", t("z'"), t("z'"));
        assert_eq!(alpha_canonical(&i).lhs, t("x'"));
    }

    #[test]
    fn alphabet_order() {
        let names: Vec<String> = (0..8).map(alphabet_var).collect();
        assert_eq!(names, ["x", "y", "z", "u", "w", "t", "v1", "v2"]);
        let mut sorted = vec!["v2", "t", "x", "v1", "a", "y"];
        sorted.sort_by_key(|v| var_rank(v));
        assert_eq!(sorted, ["x", "y", "t", "v1", "v2", "a"]);
    }
}
