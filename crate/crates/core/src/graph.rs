//! Fundamental graphs of `Z^d`-periodic graphs.
//!
//! A periodic graph is described by its quotient: a finite multigraph whose
//! vertices are translation classes and whose edges carry an integer index
//! vector recording which cell translation the edge crosses. The index of an
//! edge traversed backwards is negated. This quotient is the only input the
//! spectral machinery consumes; no geometric embedding is ever materialized.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::snf;

/// A translation class of vertices, carrying the value of the periodic
/// potential on that class.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexClass<T> {
    pub id: String,
    pub potential: T,
}

/// An unoriented edge of the fundamental graph, stored with an orientation.
///
/// The stored orientation runs `from_class -> to_class` with index `index`;
/// the reversed orientation carries the negated index. An edge with
/// `from_class == to_class` and zero index is a genuine loop; with a nonzero
/// index it joins a vertex to its translate in a neighboring cell and is not
/// a loop of the periodic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalEdge {
    pub from_class: usize,
    pub to_class: usize,
    pub index: Vec<i64>,
}

impl FundamentalEdge {
    pub fn new(from_class: usize, to_class: usize, index: Vec<i64>) -> Self {
        Self {
            from_class,
            to_class,
            index,
        }
    }

    pub fn is_self_class(&self) -> bool {
        self.from_class == self.to_class
    }

    pub fn is_loop(&self) -> bool {
        self.is_self_class() && self.index.iter().all(|&x| x == 0)
    }
}

/// Quotient description of a `Z^d`-periodic graph: vertex classes with
/// potentials plus indexed edges. Immutable after construction; all
/// operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGraphSpec<T> {
    pub dimension: usize,
    pub classes: Vec<VertexClass<T>>,
    pub edges: Vec<FundamentalEdge>,
}

/// Per-class degree data of the fundamental graph.
///
/// `kappa[j]` counts incident edges of class `j` with every self-class edge
/// (any index) contributing both of its oriented lifts, so loops count twice.
/// `loops2[j]` is twice the number of zero-index self edges at class `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub kappa: Vec<usize>,
    pub kappa_plus: usize,
    pub loops2: Vec<usize>,
}

/// The sublattice of `Z^d` generated by cycle indices of the fundamental
/// multigraph, presented by one generator per non-tree edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleLattice {
    pub generators: Vec<Vec<i64>>,
    /// Diagonal of the Smith normal form of the generator matrix, padded to
    /// `dimension` entries. The periodic graph is connected exactly when the
    /// fundamental multigraph is connected and all entries equal 1.
    pub invariant_factors: Vec<i64>,
}

/// Outcome of the connectivity checks on a structurally well-formed spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub dimension_positive: bool,
    pub multigraph_connected: bool,
    pub lattice_spans: bool,
    /// Always true here: a finite edge list yields finite degrees.
    pub degrees_finite: bool,
    pub invariant_factors: Vec<i64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.dimension_positive
            && self.multigraph_connected
            && self.lattice_spans
            && self.degrees_finite
    }

    /// One-line reason for the first failed check, if any.
    pub fn failure_reason(&self) -> Option<String> {
        if !self.dimension_positive {
            return Some("dimension must be at least 1".into());
        }
        if !self.multigraph_connected {
            return Some("fundamental multigraph is disconnected".into());
        }
        if !self.lattice_spans {
            let f = self
                .invariant_factors
                .iter()
                .find(|&&f| f != 1)
                .copied()
                .unwrap_or(0);
            return Some(format!(
                "cycle lattice index {f}: edge indices generate a proper sublattice of Z^d \
                 (invariant factors {:?})",
                self.invariant_factors
            ));
        }
        None
    }
}

impl<T: Scalar> PeriodicGraphSpec<T> {
    pub fn new(
        dimension: usize,
        classes: Vec<VertexClass<T>>,
        edges: Vec<FundamentalEdge>,
    ) -> Self {
        Self {
            dimension,
            classes,
            edges,
        }
    }

    /// Number of vertex classes.
    pub fn nu(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.id == id)
    }

    fn class_label(&self, j: usize) -> String {
        self.classes
            .get(j)
            .map(|c| c.id.clone())
            .unwrap_or_else(|| format!("#{j}"))
    }

    /// Structural well-formedness: nonempty classes, edge endpoints in
    /// range, index vectors of length `dimension`, finite potentials.
    pub fn check_structure(&self) -> Result<()> {
        if self.classes.is_empty() {
            return Err(Error::EmptyClasses);
        }
        for class in &self.classes {
            if !class.potential.is_finite() {
                return Err(Error::NonFinitePotential {
                    id: class.id.clone(),
                });
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            for &endpoint in &[e.from_class, e.to_class] {
                if endpoint >= self.classes.len() {
                    return Err(Error::UnknownClass {
                        edge: i,
                        id: format!("#{endpoint}"),
                    });
                }
            }
            if e.index.len() != self.dimension {
                return Err(Error::IndexLength {
                    edge: i,
                    from: self.class_label(e.from_class),
                    to: self.class_label(e.to_class),
                    got: e.index.len(),
                    expected: self.dimension,
                });
            }
        }
        Ok(())
    }

    /// Checks that the spec describes a connected periodic graph.
    ///
    /// Structural defects are errors; the connectivity verdict comes back in
    /// the report. The graph is connected exactly when the fundamental
    /// multigraph is connected and the cycle indices generate all of `Z^d`.
    pub fn validate(&self) -> Result<ValidationReport> {
        self.check_structure()?;
        let (components, lattice) = self.forest_and_lattice();
        let lattice_spans = self.dimension >= 1
            && lattice.invariant_factors.iter().all(|&f| f == 1);
        Ok(ValidationReport {
            dimension_positive: self.dimension >= 1,
            multigraph_connected: components == 1,
            lattice_spans,
            degrees_finite: true,
            invariant_factors: lattice.invariant_factors,
        })
    }

    /// Validates and returns an error carrying the failure reason.
    pub fn require_valid(&self) -> Result<ValidationReport> {
        let report = self.validate()?;
        match report.failure_reason() {
            Some(reason) => Err(Error::InvalidSpec(reason)),
            None => Ok(report),
        }
    }

    /// Degrees of the fundamental graph. Assumes a structurally well-formed
    /// spec.
    pub fn degrees(&self) -> DegreeProfile {
        let nu = self.nu();
        let mut kappa = vec![0usize; nu];
        let mut loops2 = vec![0usize; nu];
        for e in &self.edges {
            if e.is_self_class() {
                kappa[e.from_class] += 2;
                if e.is_loop() {
                    loops2[e.from_class] += 2;
                }
            } else {
                kappa[e.from_class] += 1;
                kappa[e.to_class] += 1;
            }
        }
        let kappa_plus = kappa.iter().copied().max().unwrap_or(0);
        DegreeProfile {
            kappa,
            kappa_plus,
            loops2,
        }
    }

    /// Re-anchors each class representative by an integer offset, rewriting
    /// every stored edge `(j, k, tau)` to `(j, k, tau + m_k - m_j)`.
    ///
    /// The periodic graph is unchanged up to relabeling of cell
    /// representatives; fiber spectra are invariant.
    pub fn shift_gauge(&self, offsets: &[Vec<i64>]) -> Result<Self> {
        if offsets.len() != self.nu() {
            return Err(Error::OffsetCount {
                got: offsets.len(),
                expected: self.nu(),
            });
        }
        for (i, m) in offsets.iter().enumerate() {
            if m.len() != self.dimension {
                return Err(Error::OffsetLength {
                    index: i,
                    got: m.len(),
                    expected: self.dimension,
                });
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let index = e
                    .index
                    .iter()
                    .zip(&offsets[e.to_class])
                    .zip(&offsets[e.from_class])
                    .map(|((&tau, &mk), &mj)| tau + mk - mj)
                    .collect();
                FundamentalEdge::new(e.from_class, e.to_class, index)
            })
            .collect();
        Ok(Self {
            dimension: self.dimension,
            classes: self.classes.clone(),
            edges,
        })
    }

    /// Class potentials in nondecreasing order (stable).
    pub fn sorted_potentials(&self) -> Vec<T> {
        let mut q: Vec<T> = self.classes.iter().map(|c| c.potential).collect();
        q.sort_by(|a, b| a.partial_cmp(b).expect("potentials are finite"));
        q
    }

    /// Cycle-index lattice of the fundamental multigraph.
    pub fn cycle_lattice(&self) -> CycleLattice {
        self.forest_and_lattice().1
    }

    /// Spanning forest walk: returns the component count and the cycle
    /// lattice read off the non-tree edges.
    fn forest_and_lattice(&self) -> (usize, CycleLattice) {
        let nu = self.nu();
        let d = self.dimension;
        // Tree potential p with p(root) = 0 per component and
        // p(v) = p(u) + tau along a tree edge traversed u -> v.
        let mut potential: Vec<Option<Vec<i64>>> = vec![None; nu];
        let mut in_tree = vec![false; self.edges.len()];
        let mut adjacency: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); nu];
        for (ei, e) in self.edges.iter().enumerate() {
            if !e.is_self_class() {
                adjacency[e.from_class].push((ei, e.to_class, 1));
                adjacency[e.to_class].push((ei, e.from_class, -1));
            }
        }

        let mut components = 0usize;
        for root in 0..nu {
            if potential[root].is_some() {
                continue;
            }
            components += 1;
            potential[root] = Some(vec![0; d]);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(ei, v, sign) in &adjacency[u] {
                    if potential[v].is_none() {
                        in_tree[ei] = true;
                        let pv: Vec<i64> = potential[u]
                            .as_ref()
                            .unwrap()
                            .iter()
                            .zip(&self.edges[ei].index)
                            .map(|(&pu, &tau)| pu + sign * tau)
                            .collect();
                        potential[v] = Some(pv);
                        queue.push_back(v);
                    }
                }
            }
        }

        let generators: Vec<Vec<i64>> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(ei, _)| !in_tree[ei])
            .map(|(_, e)| {
                let pu = potential[e.from_class].as_ref().unwrap();
                let pv = potential[e.to_class].as_ref().unwrap();
                pu.iter()
                    .zip(&e.index)
                    .zip(pv)
                    .map(|((&pu, &tau), &pv)| pu + tau - pv)
                    .collect()
            })
            .collect();
        let invariant_factors = snf::invariant_factors(&generators, d);
        (
            components,
            CycleLattice {
                generators,
                invariant_factors,
            },
        )
    }
}
