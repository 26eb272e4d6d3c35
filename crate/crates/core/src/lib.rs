//! Exact workbench for `(d1,…,dl)`-defective graph coloring: a propagating
//! exact solver, constructors for forcing gadgets, a small property
//! language for verifying them, and colorability reductions built on top.

pub mod analysis;
pub mod cli;
pub mod gadgets;
pub mod graph;
pub mod reductions;
pub mod solver;
pub mod verify;
