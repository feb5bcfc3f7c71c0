//! Identity files, proof scripts and countermodels shipped with the crate.

use crate::syntax::{parse_axiom_file, parse_proof_script, AxiomFile, ProofScriptFile};

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../", $name)))),*]
    };
}

/// `(path, contents)` of every axiom file.
pub const AXIOM_FILES: &[(&str, &str)] = shipped![
    "axioms/identities.eqb",
    "axioms/johnson.eqb",
    "axioms/johnson-4.eqb",
    "axioms/a6-j5p.eqb",
    "axioms/a8-j5p.eqb",
    "axioms/a5-j5p.eqb",
    "axioms/a9-j4-j5.eqb",
    "axioms/a9-j5.eqb",
    "axioms/j1-a1-j5p.eqb",
    "axioms/a1-j5p.eqb",
    "axioms/a13-j5p.eqb",
];

pub const MODEL_FILES: &[(&str, &str)] = shipped!["models/remark7.eqm", "models/remark8.eqm"];

/// A transcribed proof script together with the axioms it is checked against.
#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub section: u8,
    pub path: &'static str,
    pub axioms: &'static str,
    pub text: &'static str,
}

macro_rules! corpus {
    ($(($sec:literal, $path:literal, $ax:literal)),* $(,)?) => {
        &[$(CorpusEntry { section: $sec, path: $path, axioms: $ax, text: include_str!(concat!("../../../", $path)) }),*]
    };
}

pub const CORPUS: &[CorpusEntry] = corpus![
    (2, "corpus/section2.eqp", "axioms/johnson.eqb"),
    (4, "corpus/section4.eqp", "axioms/a6-j5p.eqb"),
    (5, "corpus/section5.eqp", "axioms/a8-j5p.eqb"),
    (6, "corpus/section6.eqp", "axioms/a5-j5p.eqb"),
    (7, "corpus/section7.eqp", "axioms/a9-j4-j5.eqb"),
    (8, "corpus/section8.eqp", "axioms/j1-a1-j5p.eqb"),
    (9, "corpus/section9.eqp", "axioms/a13-j5p.eqb"),
];

pub fn axiom_text(path: &str) -> Option<&'static str> {
    AXIOM_FILES.iter().find(|(p, _)| *p == path).map(|(_, t)| *t)
}

/// Parses a shipped axiom file; shipped files are known to be well formed.
pub fn axioms(path: &str) -> AxiomFile {
    let text = axiom_text(path).unwrap_or_else(|| panic!("no shipped axiom file {path}"));
    parse_axiom_file(text).expect("shipped axiom file parses")
}

/// The catalogue of every named identity.
pub fn catalog() -> AxiomFile {
    axioms("axioms/identities.eqb")
}

impl CorpusEntry {
    pub fn script(&self) -> ProofScriptFile {
        parse_proof_script(self.text).expect("shipped proof script parses")
    }

    pub fn axiom_file(&self) -> AxiomFile {
        axioms(self.axioms)
    }
}

pub fn corpus_entry(section: u8) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|c| c.section == section)
}
