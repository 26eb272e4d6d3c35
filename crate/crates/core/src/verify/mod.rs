//! Property language for gadgets, manifest checking, replay of multi-step
//! arguments and bounded search for small gadgets.

mod check;
mod formula;
mod manifest;
mod replay;
mod search;

pub use check::{pattern_holds, verify_claim, verify_manifest, verify_property, Outcome, VerifyError};
pub use formula::{parse_formula, Atom, Formula, FormulaError};
pub use manifest::{parse_manifest, parse_property, Claim, Manifest, ManifestError, Property};
pub use replay::{
    parse_replay, replay_proof, GadgetRef, ReplayError, ReplayOutcome, ReplayParseError, ReplayScript, Restriction,
    Step, StepKind,
};
pub use search::{search_gadget, search_gadget_with, SearchError, SearchOptions, MAX_SEARCH_VERTICES};
