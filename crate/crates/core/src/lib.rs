//! Equational logic workbench for Boolean algebras in the signature ⟨∧, ′⟩.

pub mod assoc;
pub mod data;
pub mod elaborate;
pub mod harness;
pub mod kernel;
pub mod models;
pub mod prover;
pub mod syntax;
pub mod term;
