//! Discrimination tree over rule left-hand sides, for retrieving candidate
//! generalizations of a subterm. Candidates still have to be matched:
//! non-linear patterns are not filtered exactly.

use super::flat::{end, Sym};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Key {
    Meet,
    Comp,
    Star,
    Const(u32),
}

fn key(s: Sym) -> Key {
    match s {
        Sym::Meet => Key::Meet,
        Sym::Comp => Key::Comp,
        Sym::Var(_) => Key::Star,
        Sym::Const(c) => Key::Const(c),
    }
}

#[derive(Default)]
struct Node {
    children: Vec<(Key, u32)>,
    leaves: Vec<u32>,
}

pub(crate) struct DiscTree {
    nodes: Vec<Node>,
}

impl DiscTree {
    pub(crate) fn new() -> Self {
        DiscTree { nodes: vec![Node::default()] }
    }

    pub(crate) fn insert(&mut self, pattern: &[Sym], value: u32) {
        let mut n = 0usize;
        for &s in pattern {
            let k = key(s);
            n = match self.nodes[n].children.iter().find(|(c, _)| *c == k) {
                Some(&(_, child)) => child as usize,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[n].children.push((k, id as u32));
                    id
                }
            };
        }
        self.nodes[n].leaves.push(value);
    }

    /// Calls `f` with every value whose pattern may match `t[at..]`. Stops
    /// early when `f` returns true.
    pub(crate) fn generalizations(&self, t: &[Sym], at: usize, f: &mut impl FnMut(u32) -> bool) -> bool {
        let stop = end(t, at);
        self.walk(0, t, at, stop, f)
    }

    fn walk(&self, n: usize, t: &[Sym], j: usize, stop: usize, f: &mut impl FnMut(u32) -> bool) -> bool {
        let node = &self.nodes[n];
        if j == stop {
            return node.leaves.iter().any(|&v| f(v));
        }
        let k = key(t[j]);
        for &(c, child) in &node.children {
            let done = if c == Key::Star {
                self.walk(child as usize, t, end(t, j), stop, f)
            } else if c == k && k != Key::Star {
                self.walk(child as usize, t, j + 1, stop, f)
            } else {
                false
            };
            if done {
                return true;
            }
        }
        false
    }
}
