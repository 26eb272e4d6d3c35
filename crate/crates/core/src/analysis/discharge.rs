//! Charge-transfer audit: every vertex starts with its degree as charge and
//! each vertex of degree at least 5 sends 1/3 to every adjacent 3-vertex.

use thiserror::Error;

use super::Rational;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("vertex {vertex} has degree {degree} <= 2")]
    LowDegree { vertex: Vertex, degree: usize },
    #[error("3-vertex {vertex} has all neighbors of degree <= 4")]
    WeakThreeVertex { vertex: Vertex },
    #[error("graph has no vertices")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DischargeReport {
    pub min_charge: Rational,
    pub argmin: Vertex,
}

/// Minimum final charge, or the first vertex violating the precondition
/// (no 2^- vertex, no 3-vertex with three neighbors of degree at most 4).
pub fn discharge_audit(g: &Graph) -> Result<DischargeReport, AuditError> {
    if g.is_empty() {
        return Err(AuditError::Empty);
    }
    for v in g.vertices() {
        let degree = g.degree(v);
        if degree <= 2 {
            return Err(AuditError::LowDegree { vertex: v, degree });
        }
        if degree == 3 && g.neighbors(v).all(|u| g.degree(u) <= 4) {
            return Err(AuditError::WeakThreeVertex { vertex: v });
        }
    }
    let third = Rational::new(1, 3);
    let mut best: Option<(Rational, Vertex)> = None;
    for v in g.vertices() {
        let d = g.degree(v);
        let mut charge = Rational::from_integer(d as i64);
        for u in g.neighbors(v) {
            let du = g.degree(u);
            if d >= 5 && du == 3 {
                charge -= third;
            }
            if d == 3 && du >= 5 {
                charge += third;
            }
        }
        if best.is_none_or(|(c, _)| charge < c) {
            best = Some((charge, v));
        }
    }
    let (min_charge, argmin) = best.unwrap();
    assert!(
        min_charge >= Rational::new(10, 3),
        "final charge {min_charge} below 10/3 at vertex {argmin}"
    );
    Ok(DischargeReport { min_charge, argmin })
}
