//! Text formats: terms, axiom files (`.eqb`) and proof scripts (`.eqp`).
//!
//! Surface syntax is ASCII: `^` for meet and a postfix `'` for complement.
//! `∧`, `′` and `″` are accepted on input but never printed. Meet is not
//! associative in the grammar, so `x ^ y ^ z` is rejected; every nested meet
//! needs parentheses.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::term::{Identity, Position, Substitution, Term};

/// Name of the placeholder variable that stands for an abbreviation such as
/// `0` inside parsed proof scripts.
pub const ZERO_NAME: &str = "0";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}; expected {}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { name: String, line: usize },
    #[error("line {line}: lemma `{lemma}` cites undeclared rule `{rule}`")]
    UnknownRule { rule: String, lemma: String, line: usize },
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    allow_zero: bool,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, allow_zero: bool) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, allow_zero, _src: src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("found `{c}`"),
            None => "found end of input".to_string(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        let t: Vec<char> = token.chars().collect();
        if self.chars[self.pos..].starts_with(&t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    /// Eats a keyword only when it is not a prefix of a longer identifier.
    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let save = self.pos;
        if self.eat(kw) {
            match self.chars.get(self.pos) {
                Some(c) if c.is_alphanumeric() || *c == '_' => {
                    self.pos = save;
                    false
                }
                _ => true,
            }
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            let msg = self.found();
            Err(self.error(msg, &[&format!("`{token}`")]))
        }
    }

    fn variable(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_lowercase() => self.pos += 1,
            _ => return None,
        }
        while let Some(c) = self.chars.get(self.pos) {
            if c.is_ascii_lowercase() || c.is_ascii_digit() || *c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    /// Rule and lemma names: letters, digits, `_`, `.`, `-` and primes.
    fn name(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '\'' | '′') {
                if *c == '-' && self.chars.get(self.pos + 1) == Some(&'>') {
                    break;
                }
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            None
        } else {
            Some(self.chars[start..self.pos].iter().map(|c| if *c == '′' { '\'' } else { *c }).collect())
        }
    }

    fn number(&mut self) -> Option<usize> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            self.chars[start..self.pos].iter().collect::<String>().parse().ok()
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let left = self.postfix()?;
        if self.eat_meet() {
            let right = self.postfix()?;
            if matches!(self.peek(), Some('^' | '∧')) {
                return Err(self.error("ambiguous unparenthesized meet chain", &["`)`", "end of term"]));
            }
            Ok(Term::meet(left, right))
        } else {
            Ok(left)
        }
    }

    fn eat_meet(&mut self) -> bool {
        self.eat("^") || self.eat("∧")
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        loop {
            // Primes bind directly to the preceding atom; no whitespace check
            // needed since nothing else may follow an atom.
            if self.eat("'") || self.eat("′") {
                t = Term::comp(t);
            } else if self.eat("″") {
                t = Term::comp(Term::comp(t));
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        if self.eat("(") {
            let t = self.term()?;
            if !self.eat(")") {
                let msg = self.found();
                let expected: &[&str] =
                    if t.is_var() || matches!(t, Term::Comp(_)) { &["`^`", "`'`", "`)`"] } else { &["`'`", "`)`"] };
                return Err(self.error(msg, expected));
            }
            return Ok(t);
        }
        if let Some(v) = self.variable() {
            return Ok(Term::var(&v));
        }
        if self.allow_zero && self.peek() == Some('0') {
            let save = self.pos;
            if self.number() == Some(0) {
                return Ok(Term::var(ZERO_NAME));
            }
            self.pos = save;
        }
        let msg = self.found();
        if self.allow_zero {
            Err(self.error(msg, &["variable", "`0`", "`(`"]))
        } else {
            Err(self.error(msg, &["variable", "`(`"]))
        }
    }
}

fn parse_term_with(input: &str, line: usize, allow_zero: bool) -> Result<Term, ParseError> {
    let mut c = Cursor::new(input, line, allow_zero);
    let t = c.term()?;
    if !c.at_end() {
        let msg = c.found();
        let expected: &[&str] =
            if matches!(t, Term::Meet(..)) { &["`'`", "end of term"] } else { &["`^`", "`'`", "end of term"] };
        return Err(c.error(msg, expected));
    }
    Ok(t)
}

/// Parses a single term.
pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    parse_term_with(input, 1, false)
}

/// Parses `lhs = rhs` (`≈` is accepted for `=`).
pub fn parse_equation(input: &str) -> Result<(Term, Term), ParseError> {
    let mut c = Cursor::new(input, 1, false);
    let lhs = c.term()?;
    if !(c.eat("=") || c.eat("≈")) {
        let msg = c.found();
        return Err(c.error(msg, &["`=`"]));
    }
    let rhs = c.term()?;
    if !c.at_end() {
        let msg = c.found();
        return Err(c.error(msg, &["end of input"]));
    }
    Ok((lhs, rhs))
}

/// Prints a term with the fewest parentheses the grammar allows.
pub fn format_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Meet(l, r) => {
            write_operand(l, out);
            out.push_str(" ^ ");
            write_operand(r, out);
        }
        Term::Comp(a) => {
            write_operand(a, out);
            out.push('\'');
        }
    }
}

fn write_operand(t: &Term, out: &mut String) {
    if matches!(t, Term::Meet(..)) {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// An axiom file: leading comment lines and named identities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomFile {
    pub header: Vec<String>,
    pub identities: Vec<Identity>,
}

impl AxiomFile {
    pub fn get(&self, name: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.identities.iter().map(|i| i.name.as_str()).collect()
    }
}

/// Parses an axiom file: `name: term = term` per line, `#` comments.
pub fn parse_axiom_file(input: &str) -> Result<AxiomFile, SyntaxError> {
    let mut file = AxiomFile::default();
    let mut seen = HashSet::new();
    let mut in_header = true;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if in_header && trimmed.starts_with('#') {
            file.header.push(trimmed.trim_start_matches('#').trim().to_string());
            continue;
        }
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        in_header = false;
        let mut c = Cursor::new(body, line_no, false);
        let name = c.name().ok_or_else(|| c.error("missing identity name", &["name"]))?;
        c.expect(":")?;
        let lhs = c.term()?;
        if !(c.eat("=") || c.eat("≈")) {
            let msg = c.found();
            return Err(c.error(msg, &["`=`"]).into());
        }
        let rhs = c.term()?;
        if !c.at_end() {
            let msg = c.found();
            return Err(c.error(msg, &["end of line"]).into());
        }
        if !seen.insert(name.clone()) {
            return Err(SyntaxError::DuplicateName { name, line: line_no });
        }
        file.identities.push(Identity::new(name, lhs, rhs));
    }
    Ok(file)
}

pub fn format_axiom_file(file: &AxiomFile) -> String {
    let mut out = String::new();
    for h in &file.header {
        if h.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {h}");
        }
    }
    for i in &file.identities {
        let _ = writeln!(out, "{}: {} = {}", i.name, format_term(&i.lhs), format_term(&i.rhs));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Rewrite an instance of the rule's lhs into its rhs.
    Forward,
    /// Rewrite an instance of the rule's rhs into its lhs.
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        })
    }
}

/// One line `= TERM by RULE DIR at [..] with {..}` of a proof script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub term: Term,
    pub rule: String,
    pub direction: Direction,
    pub position: Position,
    /// `None` when the `with` clause is omitted and the substitution is to be
    /// inferred by matching.
    pub substitution: Option<Substitution>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaBlock {
    pub name: String,
    pub hypotheses: Vec<String>,
    /// Declared statement, if the header carries one.
    pub statement: Option<(Term, Term)>,
    pub initial: Term,
    pub steps: Vec<ScriptStep>,
    pub line: usize,
}

impl LemmaBlock {
    pub fn final_term(&self) -> &Term {
        self.steps.last().map(|s| &s.term).unwrap_or(&self.initial)
    }

    /// The proved equation: the declared statement when present, otherwise
    /// initial term = final term.
    pub fn claim(&self) -> (Term, Term) {
        match &self.statement {
            Some((l, r)) => (l.clone(), r.clone()),
            None => (self.initial.clone(), self.final_term().clone()),
        }
    }
}

/// `abbrev NAME = TERM by LEMMA`: a checked abbreviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbbrevDecl {
    pub symbol: String,
    pub body: Term,
    pub justification: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptItem {
    Lemma(LemmaBlock),
    Abbrev(AbbrevDecl),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofScriptFile {
    pub header: Vec<String>,
    pub items: Vec<ScriptItem>,
}

impl ProofScriptFile {
    pub fn lemmas(&self) -> impl Iterator<Item = &LemmaBlock> {
        self.items.iter().filter_map(|i| match i {
            ScriptItem::Lemma(l) => Some(l),
            ScriptItem::Abbrev(_) => None,
        })
    }

    pub fn step_count(&self) -> usize {
        self.lemmas().map(|l| l.steps.len()).sum()
    }
}

/// Parses a proof script. Rules cited by a step must be listed in the
/// lemma's `from` clause or be an earlier lemma of the same file.
pub fn parse_proof_script(input: &str) -> Result<ProofScriptFile, SyntaxError> {
    let mut file = ProofScriptFile::default();
    let mut lemma_names: HashSet<String> = HashSet::new();
    let mut zero_declared = false;
    let mut current: Option<LemmaBlock> = None;
    let mut in_header = true;

    // A lemma becomes citable once its block ends, never from inside itself.
    fn finish(current: &mut Option<LemmaBlock>, file: &mut ProofScriptFile, names: &mut HashSet<String>) {
        if let Some(l) = current.take() {
            names.insert(l.name.clone());
            file.items.push(ScriptItem::Lemma(l));
        }
    }

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if in_header && trimmed.starts_with('#') {
            file.header.push(trimmed.trim_start_matches('#').trim().to_string());
            continue;
        }
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        in_header = false;
        let mut c = Cursor::new(body, line_no, zero_declared);

        if c.eat_keyword("lemma") {
            finish(&mut current, &mut file, &mut lemma_names);
            let name = c.name().ok_or_else(|| c.error("missing lemma name", &["name"]))?;
            let mut hypotheses = Vec::new();
            if c.eat_keyword("from") {
                loop {
                    let h = c.name().ok_or_else(|| c.error("missing rule name", &["name"]))?;
                    hypotheses.push(h);
                    if !c.eat(",") {
                        break;
                    }
                }
            }
            c.expect(":")?;
            let statement = if c.at_end() {
                None
            } else {
                let lhs = c.term()?;
                if !(c.eat("=") || c.eat("≈")) {
                    let msg = c.found();
                    return Err(c.error(msg, &["`=`"]).into());
                }
                let rhs = c.term()?;
                if !c.at_end() {
                    let msg = c.found();
                    return Err(c.error(msg, &["end of line"]).into());
                }
                Some((lhs, rhs))
            };
            if lemma_names.contains(&name) {
                return Err(SyntaxError::DuplicateName { name, line: line_no });
            }
            current = Some(LemmaBlock {
                name,
                hypotheses,
                statement,
                initial: Term::var("_"),
                steps: Vec::new(),
                line: line_no,
            });
            continue;
        }

        if c.eat_keyword("abbrev") {
            finish(&mut current, &mut file, &mut lemma_names);
            if !c.eat("0") {
                let msg = c.found();
                return Err(c.error(msg, &["`0`"]).into());
            }
            c.expect("=")?;
            let body_term = c.term()?;
            if !c.eat_keyword("by") {
                let msg = c.found();
                return Err(c.error(msg, &["`by`"]).into());
            }
            let just = c.name().ok_or_else(|| c.error("missing lemma name", &["name"]))?;
            if !c.at_end() {
                let msg = c.found();
                return Err(c.error(msg, &["end of line"]).into());
            }
            if !lemma_names.contains(&just) {
                return Err(SyntaxError::UnknownRule { rule: just, lemma: "abbrev 0".into(), line: line_no });
            }
            if zero_declared {
                return Err(SyntaxError::DuplicateName { name: "0".into(), line: line_no });
            }
            zero_declared = true;
            file.items.push(ScriptItem::Abbrev(AbbrevDecl {
                symbol: "0".into(),
                body: body_term,
                justification: just,
                line: line_no,
            }));
            continue;
        }

        let Some(lemma) = current.as_mut() else {
            let msg = c.found();
            return Err(c.error(msg, &["`lemma`", "`abbrev`"]).into());
        };

        if c.eat("=") {
            let term = c.term()?;
            if !c.eat_keyword("by") {
                let msg = c.found();
                return Err(c.error(msg, &["`by`"]).into());
            }
            let rule = c.name().ok_or_else(|| c.error("missing rule name", &["name"]))?;
            let direction = if c.eat("->") {
                Direction::Forward
            } else if c.eat("<-") {
                Direction::Backward
            } else {
                let msg = c.found();
                return Err(c.error(msg, &["`->`", "`<-`"]).into());
            };
            if !c.eat_keyword("at") {
                let msg = c.found();
                return Err(c.error(msg, &["`at`"]).into());
            }
            c.expect("[")?;
            let mut path = Vec::new();
            if !c.eat("]") {
                loop {
                    match c.number() {
                        Some(n @ (0 | 1)) => path.push(n as u8),
                        _ => {
                            let msg = c.found();
                            return Err(c.error(msg, &["`0`", "`1`"]).into());
                        }
                    }
                    if c.eat("]") {
                        break;
                    }
                    c.expect(",")?;
                }
            }
            let substitution = if c.eat_keyword("with") {
                c.expect("{")?;
                let mut s = Substitution::new();
                if !c.eat("}") {
                    loop {
                        let v = c.variable().ok_or_else(|| c.error("missing variable", &["variable"]))?;
                        c.expect(":=")?;
                        let t = c.term()?;
                        s.insert(&v, t);
                        if c.eat("}") {
                            break;
                        }
                        c.expect(",")?;
                    }
                }
                Some(s)
            } else {
                None
            };
            if !c.at_end() {
                let msg = c.found();
                return Err(c.error(msg, &["`with`", "end of line"]).into());
            }
            if lemma.initial == Term::var("_") {
                return Err(c.error("step before the initial term", &["term"]).into());
            }
            if !lemma.hypotheses.contains(&rule) && !lemma_names.contains(&rule) {
                return Err(SyntaxError::UnknownRule { rule, lemma: lemma.name.clone(), line: line_no });
            }
            lemma.steps.push(ScriptStep {
                term,
                rule,
                direction,
                position: Position(path),
                substitution,
                line: line_no,
            });
            continue;
        }

        if lemma.initial != Term::var("_") {
            let msg = c.found();
            return Err(c.error(msg, &["`=`", "`lemma`"]).into());
        }
        let t = c.term()?;
        if !c.at_end() {
            let msg = c.found();
            return Err(c.error(msg, &["end of line"]).into());
        }
        lemma.initial = t;
    }
    finish(&mut current, &mut file, &mut lemma_names);

    for l in file.lemmas() {
        if l.initial == Term::var("_") {
            return Err(ParseError {
                line: l.line,
                column: 1,
                message: format!("lemma `{}` has no initial term", l.name),
                expected: vec!["term".into()],
            }
            .into());
        }
    }
    Ok(file)
}

/// Prints a proof script in the canonical layout.
pub fn format_proof_script(file: &ProofScriptFile) -> String {
    let mut out = String::new();
    for h in &file.header {
        if h.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {h}");
        }
    }
    for (k, item) in file.items.iter().enumerate() {
        if k > 0 || !file.header.is_empty() {
            out.push('\n');
        }
        match item {
            ScriptItem::Abbrev(a) => {
                let _ = writeln!(out, "abbrev {} = {} by {}", a.symbol, format_term(&a.body), a.justification);
            }
            ScriptItem::Lemma(l) => {
                let _ = write!(out, "lemma {}", l.name);
                if !l.hypotheses.is_empty() {
                    let _ = write!(out, " from {}", l.hypotheses.join(", "));
                }
                out.push(':');
                if let Some((lhs, rhs)) = &l.statement {
                    let _ = write!(out, " {} = {}", format_term(lhs), format_term(rhs));
                }
                out.push('\n');
                let _ = writeln!(out, "  {}", format_term(&l.initial));
                for s in &l.steps {
                    let _ = write!(out, "  = {} by {} {} at {}", format_term(&s.term), s.rule, s.direction, s.position);
                    if let Some(sub) = &s.substitution {
                        out.push_str(" with {");
                        for (i, (v, t)) in sub.iter().enumerate() {
                            if i > 0 {
                                out.push_str(", ");
                            }
                            let _ = write!(out, "{v} := {}", format_term(t));
                        }
                        out.push('}');
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_term("x ^ (y ^ z)").unwrap(), Term::meet(v("x"), Term::meet(v("y"), v("z"))));
        let j5p = parse_term("(x' ^ y)' ^ (x' ^ y')'").unwrap();
        let xp = Term::comp(v("x"));
        let expected =
            Term::meet(Term::comp(Term::meet(xp.clone(), v("y"))), Term::comp(Term::meet(xp, Term::comp(v("y")))));
        assert_eq!(j5p, expected);
        let err = parse_term("x ^ y ^ z").unwrap_err();
        assert!(err.message.contains("ambiguous"), "{err}");
        assert_eq!(err.column, 7);
    }

    #[test]
    fn parse_unicode_aliases() {
        assert_eq!(parse_term("x′ ∧ y″").unwrap(), parse_term("x' ^ y''").unwrap());
    }

    #[test]
    fn parse_errors_carry_expected_sets() {
        let e = parse_term("x ^").unwrap_err();
        assert_eq!(e.expected, vec!["variable", "`(`"]);
        let e = parse_term("(x ^ y").unwrap_err();
        assert!(e.expected.contains(&"`)`".to_string()));
        assert!(parse_term("").is_err());
        assert!(parse_term("X").is_err());
        assert!(parse_term("0").is_err());
        assert!(parse_term("x y").is_err());
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_term(&Term::meet(v("x"), Term::meet(v("y"), v("z")))), "x ^ (y ^ z)");
        assert_eq!(format_term(&Term::comp(Term::comp(v("x")))), "x''");
        assert_eq!(format_term(&Term::meet(Term::comp(Term::meet(v("x"), v("y"))), v("z"))), "(x ^ y)' ^ z");
    }

    #[test]
    fn axiom_file_parses() {
        let src = "# Johnson\nJ1: x ^ y = y ^ x\nJ5': x = (x' ^ y)' ^ (x' ^ y')'  # variant\n";
        let f = parse_axiom_file(src).unwrap();
        assert_eq!(f.header, vec!["Johnson"]);
        assert_eq!(f.names(), vec!["J1", "J5'"]);
        assert_eq!(parse_axiom_file(&format_axiom_file(&f)).unwrap(), f);
        let dup = parse_axiom_file("A: x = x\nA: y = y\n").unwrap_err();
        assert_eq!(dup, SyntaxError::DuplicateName { name: "A".into(), line: 2 });
        assert!(matches!(parse_axiom_file("A x = x\n"), Err(SyntaxError::Parse(_))));
    }

    const SCRIPT: &str = "\
lemma L1 from J4: x'' = x
  x''
  = x by J4 -> at [] with {x := x}

lemma L2 from J1: x ^ y'' = y ^ x
  x ^ y''
  = x ^ y by L1 -> at [1]
  = y ^ x by J1 -> at [] with {}
";

    #[test]
    fn script_parses_and_round_trips() {
        let f = parse_proof_script(SCRIPT).unwrap();
        assert_eq!(f.lemmas().count(), 2);
        assert_eq!(f.step_count(), 3);
        let l2 = f.lemmas().nth(1).unwrap();
        assert_eq!(l2.steps[0].position, Position(vec![1]));
        assert_eq!(l2.steps[0].substitution, None);
        assert_eq!(l2.steps[1].substitution, Some(Substitution::new()));
        let printed = format_proof_script(&f);
        assert_eq!(format_proof_script(&parse_proof_script(&printed).unwrap()), printed);
    }

    #[test]
    fn script_rejects_unknown_rule() {
        let src = "lemma L from A6, J5':\n  x\n  = x by B2 -> at []\n";
        assert_eq!(
            parse_proof_script(src).unwrap_err(),
            SyntaxError::UnknownRule { rule: "B2".into(), lemma: "L".into(), line: 3 }
        );
        // A lemma cannot cite itself.
        let src = "lemma L from J1:\n  x\n  = x by L -> at []\n";
        assert!(matches!(parse_proof_script(src), Err(SyntaxError::UnknownRule { .. })));
    }

    #[test]
    fn script_rejects_duplicates_and_orphans() {
        let src = "lemma L from J1:\n  x\nlemma L from J1:\n  y\n";
        assert!(matches!(parse_proof_script(src), Err(SyntaxError::DuplicateName { .. })));
        assert!(parse_proof_script("  = x by J1 -> at []\n").is_err());
        assert!(parse_proof_script("lemma L from J1:\n").is_err());
    }

    #[test]
    fn zero_requires_abbrev() {
        let src = "lemma P from J: x ^ x' = y ^ y'\n  x ^ x'\n  = y ^ y' by J -> at []\nlemma Q from J:\n  0\n";
        assert!(parse_proof_script(src).is_err());
        let src = "lemma P from J: x ^ x' = y ^ y'\n  x ^ x'\n  = y ^ y' by J -> at []\nabbrev 0 = x ^ x' by P\nlemma Q from J:\n  0' ^ x\n";
        let f = parse_proof_script(src).unwrap();
        assert_eq!(f.lemmas().nth(1).unwrap().initial, Term::meet(Term::comp(v("0")), v("x")));
        let printed = format_proof_script(&f);
        assert_eq!(format_proof_script(&parse_proof_script(&printed).unwrap()), printed);
    }
}
