//! Filling in kernel steps between two terms.
//!
//! Hand-written equality chains usually skip the bookkeeping: the position,
//! the substitution, and silent uses of commutativity or associativity. The
//! helpers here recover explicit single steps so that a chain can be checked
//! by the kernel. Nothing here is trusted; every result is replayed by
//! [`crate::kernel::apply_step`].

use std::collections::{HashMap, VecDeque};

use crate::kernel::{Environment, Step};
use crate::syntax::Direction;
use crate::term::{match_into, Position, Substitution, Term};

/// Positions where `a` and `b` differ at the node itself (different symbol
/// or different variable).
fn difference_positions(a: &Term, b: &Term, path: &mut Vec<u8>, out: &mut Vec<Position>) {
    match (a, b) {
        (Term::Meet(al, ar), Term::Meet(bl, br)) => {
            path.push(0);
            difference_positions(al, bl, path, out);
            path.pop();
            path.push(1);
            difference_positions(ar, br, path, out);
            path.pop();
        }
        (Term::Comp(x), Term::Comp(y)) => {
            path.push(0);
            difference_positions(x, y, path, out);
            path.pop();
        }
        _ if a == b => {}
        _ => out.push(Position(path.clone())),
    }
}

fn rule_sides<'a>(env: &'a Environment, rule: &str, dir: Direction) -> Option<(&'a Term, &'a Term)> {
    let r = env.get(rule)?;
    Some(match dir {
        Direction::Forward => (&r.lhs, &r.rhs),
        Direction::Backward => (&r.rhs, &r.lhs),
    })
}

/// Finds a single step turning `current` into `next` with one of `rules`.
/// Candidate positions are tried deepest first.
pub fn infer_step(current: &Term, next: &Term, env: &Environment, rules: &[String]) -> Option<Step> {
    if current == next {
        return None;
    }
    let mut diffs = Vec::new();
    difference_positions(current, next, &mut Vec::new(), &mut diffs);
    let mut common: Vec<u8> = diffs[0].0.clone();
    for d in &diffs[1..] {
        let n = common.iter().zip(&d.0).take_while(|(a, b)| a == b).count();
        common.truncate(n);
    }
    for depth in (0..=common.len()).rev() {
        let pos = Position(common[..depth].to_vec());
        let (Ok(a), Ok(b)) = (current.subterm_at(&pos), next.subterm_at(&pos)) else { continue };
        for rule in rules {
            for dir in [Direction::Forward, Direction::Backward] {
                let Some((source, target)) = rule_sides(env, rule, dir) else { continue };
                let mut sigma = Substitution::new();
                if match_into(source, a, &mut sigma) && match_into(target, b, &mut sigma) {
                    return Some(Step {
                        rule: rule.clone(),
                        direction: dir,
                        position: pos,
                        substitution: Some(sigma),
                        result: next.clone(),
                    });
                }
            }
        }
    }
    None
}

/// All single rewrites of `t` by `rules` whose target side introduces no new
/// variables, paired with the step that produces them.
pub fn one_step_rewrites(t: &Term, env: &Environment, rules: &[String]) -> Vec<(Term, Step)> {
    let mut out = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm_at(&pos).expect("own position");
        for rule in rules {
            for dir in [Direction::Forward, Direction::Backward] {
                let Some((source, target)) = rule_sides(env, rule, dir) else { continue };
                let svars = source.vars();
                if target.vars().iter().any(|v| !svars.contains(v)) {
                    continue;
                }
                let mut sigma = Substitution::new();
                if !match_into(source, sub, &mut sigma) {
                    continue;
                }
                let result = t.replace_at(&pos, target.substitute(&sigma)).expect("own position");
                if &result == t {
                    continue;
                }
                let step = Step {
                    rule: rule.clone(),
                    direction: dir,
                    position: pos.clone(),
                    substitution: Some(sigma),
                    result: result.clone(),
                };
                out.push((result, step));
            }
        }
    }
    out
}

/// Searches for a chain of at most `max_depth` steps from `from` to `to`,
/// growing one frontier from each end. The meeting test also accepts a
/// single inferred step between the two frontiers when they are small.
pub fn bridge(from: &Term, to: &Term, env: &Environment, rules: &[String], max_depth: usize) -> Option<Vec<Step>> {
    if from == to {
        return Some(Vec::new());
    }
    if let Some(s) = infer_step(from, to, env, rules) {
        return Some(vec![s]);
    }
    // term -> (predecessor, step producing it)
    let mut fwd: HashMap<Term, Option<(Term, Step)>> = HashMap::new();
    // term -> (successor towards `to`, step from term to successor)
    let mut bwd: HashMap<Term, Option<(Term, Step)>> = HashMap::new();
    fwd.insert(from.clone(), None);
    bwd.insert(to.clone(), None);
    let mut fq: VecDeque<Term> = VecDeque::from([from.clone()]);
    let mut bq: VecDeque<Term> = VecDeque::from([to.clone()]);
    let limit = 200_000;

    let path = |meet_f: &Term,
                meet_b: &Term,
                mid: Option<Step>,
                fwd: &HashMap<Term, Option<(Term, Step)>>,
                bwd: &HashMap<Term, Option<(Term, Step)>>| {
        let mut front = Vec::new();
        let mut cur = meet_f.clone();
        while let Some(Some((prev, step))) = fwd.get(&cur) {
            front.push(step.clone());
            cur = prev.clone();
        }
        front.reverse();
        front.extend(mid);
        let mut cur = meet_b.clone();
        while let Some(Some((next, step))) = bwd.get(&cur) {
            front.push(step.clone());
            cur = next.clone();
        }
        front
    };

    for depth in 0..max_depth {
        let grow_forward = depth % 2 == 0;
        let (queue, seen) = if grow_forward { (&mut fq, &mut fwd) } else { (&mut bq, &mut bwd) };
        let layer: Vec<Term> = queue.drain(..).collect();
        for t in layer {
            for (next, step) in one_step_rewrites(&t, env, rules) {
                if seen.contains_key(&next) || seen.len() > limit {
                    continue;
                }
                if grow_forward {
                    seen.insert(next.clone(), Some((t.clone(), step)));
                } else {
                    // Reverse the step: it must go from `next` to `t`.
                    let back = Step { direction: step.direction.flip(), result: t.clone(), ..step };
                    seen.insert(next.clone(), Some((t.clone(), back)));
                }
                queue.push_back(next);
            }
        }
        if let Some(m) = fwd.keys().find(|k| bwd.contains_key(*k)) {
            let m = m.clone();
            return Some(path(&m, &m, None, &fwd, &bwd));
        }
        if fwd.len() * bwd.len() <= 40_000 {
            let mut fkeys: Vec<&Term> = fwd.keys().collect();
            let mut bkeys: Vec<&Term> = bwd.keys().collect();
            fkeys.sort();
            bkeys.sort();
            for a in &fkeys {
                for b in &bkeys {
                    if let Some(s) = infer_step(a, b, env, rules) {
                        return Some(path(a, b, Some(s), &fwd, &bwd));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::apply_step;
    use crate::syntax::{parse_axiom_file, parse_term};

    fn env() -> Environment {
        Environment::from_axioms(
            &parse_axiom_file(
                "J1: x ^ y = y ^ x\nJ2: x ^ (y ^ z) = (x ^ y) ^ z\nJ4: x'' = x\nJ5: x' = (x ^ y)' ^ (x ^ y')'\n",
            )
            .unwrap(),
        )
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn infers_position_and_substitution() {
        let e = env();
        let s = infer_step(&t("a ^ (b ^ c)''"), &t("a ^ (b ^ c)"), &e, &names(&["J4"])).unwrap();
        assert_eq!(s.position, Position(vec![1]));
        assert_eq!(apply_step(&t("a ^ (b ^ c)''"), &s, &e).unwrap(), t("a ^ (b ^ c)"));
        // Variables introduced by the target side come from the next term.
        let s = infer_step(&t("x'"), &t("(x ^ z)' ^ (x ^ z')'"), &e, &names(&["J5"])).unwrap();
        assert_eq!(s.substitution.unwrap().get("y"), Some(&t("z")));
    }

    #[test]
    fn bridges_implicit_regrouping() {
        let e = env();
        let from = t("(a ^ b) ^ (c ^ d)");
        let to = t("d ^ ((b ^ c) ^ a)");
        let steps = bridge(&from, &to, &e, &names(&["J1", "J2"]), 8).unwrap();
        let mut cur = from;
        for s in &steps {
            cur = apply_step(&cur, s, &e).unwrap();
        }
        assert_eq!(cur, to);
    }
}
