//! Identities of associative type of length 3 and their classification up
//! to renaming of variables and exchange of sides.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{format_term, parse_equation};
use crate::term::{Identity, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AssocError {
    #[error("`{0}` is not of associative type of length 3")]
    NotAssocType(String),
}

/// The fourteen representatives, in their usual numbering.
pub const GAMMA: [(&str, &str); 14] = [
    ("A1", "x ^ (y ^ z) = (x ^ y) ^ z"),
    ("A2", "x ^ (y ^ z) = x ^ (z ^ y)"),
    ("A3", "x ^ (y ^ z) = (x ^ z) ^ y"),
    ("A4", "x ^ (y ^ z) = y ^ (x ^ z)"),
    ("A5", "x ^ (y ^ z) = (y ^ x) ^ z"),
    ("A6", "x ^ (y ^ z) = y ^ (z ^ x)"),
    ("A7", "x ^ (y ^ z) = (y ^ z) ^ x"),
    ("A8", "x ^ (y ^ z) = (z ^ x) ^ y"),
    ("A9", "x ^ (y ^ z) = z ^ (y ^ x)"),
    ("A10", "x ^ (y ^ z) = (z ^ y) ^ x"),
    ("A11", "(x ^ y) ^ z = (x ^ z) ^ y"),
    ("A12", "(x ^ y) ^ z = (y ^ x) ^ z"),
    ("A13", "(x ^ y) ^ z = (y ^ z) ^ x"),
    ("A14", "(x ^ y) ^ z = (z ^ y) ^ x"),
];

pub fn gamma() -> Vec<Identity> {
    GAMMA
        .iter()
        .map(|(n, s)| {
            let (l, r) = parse_equation(s).expect("valid");
            Identity::new(*n, l, r)
        })
        .collect()
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
const XYZ: [&str; 3] = ["x", "y", "z"];

/// The 12 terms: for each ordering of x, y, z, the right- then the
/// left-bracketed product.
pub fn enumerate_assoc_terms() -> Vec<Term> {
    let v = |i: usize| Term::var(XYZ[i]);
    let mut out = Vec::new();
    for p in PERMS {
        out.push(Term::meet(v(p[0]), Term::meet(v(p[1]), v(p[2]))));
        out.push(Term::meet(Term::meet(v(p[0]), v(p[1])), v(p[2])));
    }
    out
}

/// All 66 identities between distinct enumerated terms.
pub fn enumerate_assoc_identities() -> Vec<Identity> {
    let terms = enumerate_assoc_terms();
    let mut out = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            out.push(Identity::new(format!("I{}", out.len() + 1), terms[i].clone(), terms[j].clone()));
        }
    }
    out
}

/// Shape of an associative-type term: bracketing and variable order.
fn shape(t: &Term) -> Option<(bool, [Arc<str>; 3])> {
    let var = |t: &Term| match t {
        Term::Var(v) => Some(v.clone()),
        _ => None,
    };
    match t {
        Term::Meet(a, b) => match (&**a, &**b) {
            (Term::Var(x), Term::Meet(c, d)) => Some((true, [x.clone(), var(c)?, var(d)?])),
            (Term::Meet(c, d), Term::Var(z)) => Some((false, [var(c)?, var(d)?, z.clone()])),
            _ => None,
        },
        _ => None,
    }
}

/// Encodes a side as (bracketing, positions of x, y, z after renaming).
type Side = (bool, [usize; 3]);

fn sides(i: &Identity) -> Result<(Side, Side), AssocError> {
    let bad = || AssocError::NotAssocType(i.to_string());
    let (lb, lv) = shape(&i.lhs).ok_or_else(bad)?;
    let (rb, rv) = shape(&i.rhs).ok_or_else(bad)?;
    if lv[0] == lv[1] || lv[1] == lv[2] || lv[0] == lv[2] {
        return Err(bad());
    }
    let idx = |v: &Arc<str>| lv.iter().position(|w| w == v);
    let r = [idx(&rv[0]).ok_or_else(bad)?, idx(&rv[1]).ok_or_else(bad)?, idx(&rv[2]).ok_or_else(bad)?];
    if r[0] == r[1] || r[1] == r[2] || r[0] == r[2] || (lb == rb && r == [0, 1, 2]) {
        return Err(bad());
    }
    Ok(((lb, [0, 1, 2]), (rb, r)))
}

/// Least image of an identity under renaming and side exchange.
fn orbit_key(l: Side, r: Side) -> (Side, Side) {
    let mut best: Option<(Side, Side)> = None;
    for p in PERMS {
        let apply = |s: Side| (s.0, [p[s.1[0]], p[s.1[1]], p[s.1[2]]]);
        for (a, b) in [(apply(l), apply(r)), (apply(r), apply(l))] {
            let k = (a, b);
            if best.is_none_or(|b| k < b) {
                best = Some(k);
            }
        }
    }
    best.expect("non-empty group")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssocClass {
    /// `A1` … `A14`, or `unlabelled` for a class with no representative.
    pub label: String,
    #[serde(serialize_with = "ser_identity")]
    pub representative: Identity,
    #[serde(serialize_with = "ser_identities")]
    pub members: Vec<Identity>,
}

fn ser_identity<S: serde::Serializer>(i: &Identity, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{} = {}", format_term(&i.lhs), format_term(&i.rhs)))
}

fn ser_identities<S: serde::Serializer>(v: &[Identity], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| format!("{} = {}", format_term(&i.lhs), format_term(&i.rhs))))
}

fn gamma_keys() -> Vec<((Side, Side), Identity)> {
    gamma()
        .into_iter()
        .map(|g| {
            let (l, r) = sides(&g).expect("representatives have the right shape");
            (orbit_key(l, r), g)
        })
        .collect()
}

/// The class of `i` among the 66 identities.
pub fn classify_identity(i: &Identity) -> Result<AssocClass, AssocError> {
    let (l, r) = sides(i)?;
    let key = orbit_key(l, r);
    let found = classify_all().into_iter().find(|c| {
        let (pl, pr) = sides(&c.members[0]).expect("enumerated shape");
        orbit_key(pl, pr) == key
    });
    Ok(found.expect("every valid shape is among the enumerated identities"))
}

/// Partitions the 66 identities into orbits, ordered by label.
pub fn classify_all() -> Vec<AssocClass> {
    let mut orbits: BTreeMap<(Side, Side), Vec<Identity>> = BTreeMap::new();
    for i in enumerate_assoc_identities() {
        let (l, r) = sides(&i).expect("enumerated shape");
        orbits.entry(orbit_key(l, r)).or_default().push(i);
    }
    let reps = gamma_keys();
    let mut labelled: Vec<(usize, AssocClass)> = orbits
        .into_iter()
        .map(|(key, members)| match reps.iter().position(|(k, _)| *k == key) {
            Some(n) => (n, AssocClass { label: reps[n].1.name.clone(), representative: reps[n].1.clone(), members }),
            None => {
                (usize::MAX, AssocClass { label: "unlabelled".into(), representative: members[0].clone(), members })
            }
        })
        .collect();
    labelled.sort_by_key(|(n, _)| *n);
    labelled.into_iter().map(|(_, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> Identity {
        let (l, r) = parse_equation(s).unwrap();
        Identity::new("t", l, r)
    }

    #[test]
    fn counts() {
        let terms = enumerate_assoc_terms();
        assert_eq!(terms.len(), 12);
        assert!(terms.contains(&crate::syntax::parse_term("(z ^ y) ^ x").unwrap()));
        let ids = enumerate_assoc_identities();
        assert_eq!(ids.len(), 66);
        assert!(ids.iter().all(|i| i.lhs != i.rhs));
    }

    #[test]
    fn examples() {
        assert_eq!(classify_identity(&id("x ^ (y ^ z) = z ^ (x ^ y)")).unwrap().label, "A6");
        assert_eq!(classify_identity(&id("x ^ (y ^ z) = (x ^ y) ^ z")).unwrap().label, "A1");
        assert_eq!(classify_identity(&id("(x ^ y) ^ z = (z ^ x) ^ y")).unwrap().label, "A13");
        assert_eq!(classify_identity(&id("a ^ (b ^ c) = (c ^ b) ^ a")).unwrap().label, "A10");
        assert!(classify_identity(&id("x ^ (y ^ z) = x ^ (y ^ z)")).is_err());
        assert!(classify_identity(&id("x ^ (y ^ x) = (x ^ y) ^ x")).is_err());
        assert!(classify_identity(&id("x' ^ (y ^ z) = (x ^ y) ^ z")).is_err());
        assert!(classify_identity(&id("x ^ (y ^ z) = (x ^ y) ^ u")).is_err());
    }

    #[test]
    fn fourteen_classes() {
        let classes = classify_all();
        assert_eq!(classes.len(), 14);
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 66);
        let labels: Vec<&str> = classes.iter().map(|c| c.label.as_str()).collect();
        let expect: Vec<&str> = GAMMA.iter().map(|(n, _)| *n).collect();
        assert_eq!(labels, expect);
    }
}
