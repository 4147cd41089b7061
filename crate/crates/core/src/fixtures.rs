//! Example graphs used by the test suite and bundled with the CLI.

use crate::graph::{FundamentalEdge, PeriodicGraphSpec, VertexClass};
use crate::scalar::Scalar;

fn class<T: Scalar>(id: &str, potential: T) -> VertexClass<T> {
    VertexClass {
        id: id.to_string(),
        potential,
    }
}

/// Square lattice: one class, two unit self edges. Single band `[q, q+8]`.
pub fn square_lattice<T: Scalar>(potential: T) -> PeriodicGraphSpec<T> {
    PeriodicGraphSpec::new(
        2,
        vec![class("v1", potential)],
        vec![
            FundamentalEdge::new(0, 0, vec![1, 0]),
            FundamentalEdge::new(0, 0, vec![0, 1]),
        ],
    )
}

/// Two-dimensional graph with three classes and six edges, degrees (6, 4, 2).
///
/// With zero potential its spectrum has three bands separated by two gaps;
/// the bracketing certificate detects exactly the second gap. The edge order
/// fixes the exterior-vertex numbering of the derived finite graph.
pub fn fig1_graph<T: Scalar>() -> PeriodicGraphSpec<T> {
    let zero = T::zero();
    PeriodicGraphSpec::new(
        2,
        vec![class("v1", zero), class("v2", zero), class("v3", zero)],
        vec![
            FundamentalEdge::new(0, 1, vec![0, 0]),
            FundamentalEdge::new(0, 1, vec![1, 0]),
            FundamentalEdge::new(0, 1, vec![0, -1]),
            FundamentalEdge::new(0, 2, vec![0, 0]),
            FundamentalEdge::new(0, 2, vec![0, -1]),
            FundamentalEdge::new(0, 1, vec![1, -1]),
        ],
    )
}

/// Square lattice decorated with pendant vertices inside the cell: a hub
/// carrying the lattice edges plus `decorations` pendant classes attached to
/// it. All pendant classes are inner vertices of the derived finite graph,
/// so the inner count reaches its maximum `nu - 1`.
pub fn star_lattice<T: Scalar>(decorations: usize) -> PeriodicGraphSpec<T> {
    let zero = T::zero();
    let mut classes: Vec<VertexClass<T>> = (0..decorations)
        .map(|i| class(&format!("p{}", i + 1), zero))
        .collect();
    classes.push(class("hub", zero));
    let hub = decorations;
    let mut edges: Vec<FundamentalEdge> = (0..decorations)
        .map(|i| FundamentalEdge::new(hub, i, vec![0, 0]))
        .collect();
    edges.push(FundamentalEdge::new(hub, hub, vec![1, 0]));
    edges.push(FundamentalEdge::new(hub, hub, vec![0, 1]));
    PeriodicGraphSpec::new(2, classes, edges)
}
