//! Structural analytics on [`Graph`](crate::graph::Graph) values.

mod degeneracy;
mod discharge;
mod flow;
mod girth;
mod mad;
mod order;
mod planarity;

pub use degeneracy::{degeneracy, Degeneracy};
pub use discharge::{discharge_audit, AuditError, DischargeReport};
pub use girth::{girth, Girth};
pub use mad::{average_degree, mad, mad_brute_force, MadResult};
pub use order::{compare_order, n3, OrderVerdict};
pub use planarity::{is_kuratowski_subdivision, is_planar, Embedding, Planarity};

/// Exact rational numbers used for densities and charges.
pub type Rational = num_rational::Ratio<i64>;
