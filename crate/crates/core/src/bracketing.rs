//! Finite-graph bracketing of spectral bands.
//!
//! From the quotient graph we build a finite graph: all zero-index edges
//! between the cell representatives, plus one chosen bridge for each
//! nonzero-index stored edge, ending in an exterior vertex keyed by the
//! target class and the index. Neumann and Dirichlet operators on this graph
//! yield, per band, two intervals whose intersection is guaranteed to
//! contain the band; intervals missing from the union of those
//! intersections are certified spectral gaps. Two trace-based bounds on the
//! total band length come from the same eigenvalue lists.

use crate::error::{Error, Result};
use crate::floquet::BandIntervals;
use crate::graph::PeriodicGraphSpec;
use crate::hermitian::{eigen, HermitianMatrix};
use crate::interval::{gaps_in_union, Interval};
use crate::scalar::Scalar;

/// Vertex of the finite graph: a cell representative of a class, or an
/// exterior vertex reached by a bridge, keyed by (target class, index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeumannVertex {
    Representative(usize),
    Exterior(usize, Vec<i64>),
}

impl NeumannVertex {
    pub fn class(&self) -> usize {
        match self {
            NeumannVertex::Representative(c) => *c,
            NeumannVertex::Exterior(c, _) => *c,
        }
    }
}

/// The finite graph derived from the fundamental cell, with the inner /
/// boundary split and the multiplicities needed by the operators on it.
///
/// Vertex order: the class representatives first (inner classes before
/// boundary classes, stably), then exterior vertices in order of first
/// appearance in the stored edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeumannGraph {
    /// `interior_order[position] = original class index`.
    pub interior_order: Vec<usize>,
    /// Inverse of `interior_order`: representative position of each class.
    pub class_position: Vec<usize>,
    pub vertices: Vec<NeumannVertex>,
    /// Edge list as vertex-position pairs; parallel edges repeat, loops are
    /// `(v, v)`.
    pub edges: Vec<(usize, usize)>,
    /// Number of vertices equivalent to each vertex under translations;
    /// equal across a class.
    pub rho: Vec<usize>,
    /// Degree on the finite graph, loops counted twice.
    pub kappa_n: Vec<usize>,
    /// Bridge count of the periodic graph for this gauge: two per
    /// nonzero-index stored edge.
    pub beta: usize,
    pub nu_d: usize,
    pub nu_n: usize,
}

impl NeumannGraph {
    /// Builds the finite graph. Assumes a structurally well-formed spec.
    ///
    /// A class is inner exactly when its representative keeps its full
    /// degree, i.e. no stored nonzero-index edge points into it; the chosen
    /// bridge for a stored edge `(j, k, tau)` runs from the representative
    /// of `j` to the exterior vertex `(k, tau)`.
    pub fn build<T: Scalar>(spec: &PeriodicGraphSpec<T>) -> Self {
        let nu = spec.nu();
        let degrees = spec.degrees();

        // Exterior vertices in first-appearance order, de-duplicated by key.
        let mut exterior: Vec<(usize, Vec<i64>)> = Vec::new();
        let mut bridges = 0usize;
        for e in &spec.edges {
            if e.index.iter().all(|&x| x == 0) {
                continue;
            }
            bridges += 1;
            let key = (e.to_class, e.index.clone());
            if !exterior.contains(&key) {
                exterior.push(key);
            }
        }

        // Degrees of the representatives on the finite graph.
        let mut kappa_rep = vec![0usize; nu];
        for e in &spec.edges {
            if e.index.iter().all(|&x| x == 0) {
                if e.from_class == e.to_class {
                    kappa_rep[e.from_class] += 2;
                } else {
                    kappa_rep[e.from_class] += 1;
                    kappa_rep[e.to_class] += 1;
                }
            } else {
                kappa_rep[e.from_class] += 1;
            }
        }

        let inner: Vec<bool> = (0..nu)
            .map(|c| kappa_rep[c] == degrees.kappa[c])
            .collect();
        let mut interior_order: Vec<usize> = (0..nu).filter(|&c| inner[c]).collect();
        let nu_d = interior_order.len();
        interior_order.extend((0..nu).filter(|&c| !inner[c]));
        let mut class_position = vec![0usize; nu];
        for (pos, &c) in interior_order.iter().enumerate() {
            class_position[c] = pos;
        }

        let mut vertices: Vec<NeumannVertex> = interior_order
            .iter()
            .map(|&c| NeumannVertex::Representative(c))
            .collect();
        vertices.extend(
            exterior
                .iter()
                .map(|(c, tau)| NeumannVertex::Exterior(*c, tau.clone())),
        );
        let nu_n = vertices.len();

        let mut rho_class = vec![1usize; nu];
        for (c, _) in &exterior {
            rho_class[*c] += 1;
        }
        let rho: Vec<usize> = vertices.iter().map(|v| rho_class[v.class()]).collect();

        let exterior_position = |class: usize, tau: &[i64]| -> usize {
            nu + exterior
                .iter()
                .position(|(c, t)| *c == class && t == tau)
                .expect("exterior key was registered")
        };
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(spec.edges.len());
        for e in &spec.edges {
            if e.index.iter().all(|&x| x == 0) {
                edges.push((class_position[e.from_class], class_position[e.to_class]));
            } else {
                edges.push((
                    class_position[e.from_class],
                    exterior_position(e.to_class, &e.index),
                ));
            }
        }

        let mut kappa_n = vec![0usize; nu_n];
        for &(a, b) in &edges {
            if a == b {
                kappa_n[a] += 2;
            } else {
                kappa_n[a] += 1;
                kappa_n[b] += 1;
            }
        }
        debug_assert!((0..nu)
            .all(|pos| kappa_n[pos] == kappa_rep[interior_order[pos]]));
        debug_assert!((0..nu_d).all(|pos| rho[pos] == 1));

        NeumannGraph {
            interior_order,
            class_position,
            vertices,
            edges,
            rho,
            kappa_n,
            beta: 2 * bridges,
            nu_d,
            nu_n,
        }
    }
}

/// Neumann operator on the finite graph, as a real symmetric matrix:
/// `sqrt(rho_j rho_k) (kappa_j delta_jk - multiplicity_jk)` plus the class
/// potential on the diagonal. Loops count twice in both the degree and the
/// diagonal multiplicity, so they cancel.
pub fn neumann_matrix<T: Scalar>(
    ng: &NeumannGraph,
    spec: &PeriodicGraphSpec<T>,
) -> HermitianMatrix<T> {
    let n = ng.nu_n;
    let mut mult = vec![0usize; n * n];
    for &(a, b) in &ng.edges {
        if a == b {
            mult[a * n + a] += 2;
        } else {
            mult[a * n + b] += 1;
            mult[b * n + a] += 1;
        }
    }
    let mut m = HermitianMatrix::zeros(n);
    for j in 0..n {
        let rho_j = T::from_usizec(ng.rho[j]);
        let q_j = spec.classes[ng.vertices[j].class()].potential;
        let diag = rho_j * T::from_usizec(ng.kappa_n[j] - mult[j * n + j]) + q_j;
        m.set_diag(j, diag);
        for k in j + 1..n {
            if mult[j * n + k] > 0 {
                let w = T::from_usizec(ng.rho[j] * ng.rho[k]).sqrt();
                let entry = -w * T::from_usizec(mult[j * n + k]);
                m.set_upper(j, k, num_complex::Complex::new(entry, T::zero()));
            }
        }
    }
    m
}

/// Dirichlet operator: the top-left inner block of the Neumann matrix.
/// Order zero (empty spectrum) when there are no inner vertices.
pub fn dirichlet_matrix<T: Scalar>(
    ng: &NeumannGraph,
    spec: &PeriodicGraphSpec<T>,
) -> HermitianMatrix<T> {
    let full = neumann_matrix(ng, spec);
    let rows: Vec<Vec<num_complex::Complex<T>>> = (0..ng.nu_d)
        .map(|j| (0..ng.nu_d).map(|k| full.get(j, k)).collect())
        .collect();
    HermitianMatrix::from_rows(&rows).expect("square block")
}

/// Sorted eigenvalue lists of the Neumann and Dirichlet operators.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketSpectra<T> {
    pub lambda_n: Vec<T>,
    pub lambda_d: Vec<T>,
}

pub fn bracket_spectra<T: Scalar>(
    ng: &NeumannGraph,
    spec: &PeriodicGraphSpec<T>,
) -> Result<BracketSpectra<T>> {
    let lambda_n = eigen(&neumann_matrix(ng, spec), false)?.values;
    let lambda_d = eigen(&dirichlet_matrix(ng, spec), false)?.values;
    Ok(BracketSpectra { lambda_n, lambda_d })
}

/// Interval from endpoints that are equal in exact arithmetic but may invert
/// by rounding; inversions beyond `tol` are construction bugs.
fn ordered_interval<T: Scalar>(lo: T, hi: T, tol: T, what: &str) -> Result<Interval<T>> {
    if lo > hi + tol {
        return Err(Error::Inconsistent(format!(
            "{what}: lower end {lo} exceeds upper end {hi}"
        )));
    }
    Ok(Interval::new(lo, hi.max(lo)))
}

/// The two per-band interval families bracketing the spectral bands.
///
/// For band `n` (1-based): the first family is `[lambda_n^N, lambda_n^D]`
/// for inner indices and `[lambda_n^N, qsorted_n + 2 kappa_plus]` beyond;
/// the second is `[qsorted_n, lambda_(n+nu_N-nu)^N]` up to `nu - nu_D` and
/// `[lambda_(n-nu+nu_D)^D, lambda_(n+nu_N-nu)^N]` beyond.
pub fn bracket_intervals<T: Scalar>(
    spectra: &BracketSpectra<T>,
    qsorted: &[T],
    kappa_plus: usize,
) -> Result<(Vec<Interval<T>>, Vec<Interval<T>>)> {
    let nu = qsorted.len();
    let nu_d = spectra.lambda_d.len();
    let nu_n = spectra.lambda_n.len();
    if nu_d > nu || nu > nu_n {
        return Err(Error::Inconsistent(format!(
            "count ordering violated: nu_D = {nu_d}, nu = {nu}, nu_N = {nu_n}"
        )));
    }
    let tol = T::INCLUSION_TOL;
    let envelope = |i: usize| qsorted[i] + T::from_usizec(2 * kappa_plus);

    let mut j = Vec::with_capacity(nu);
    let mut j_tilde = Vec::with_capacity(nu);
    for i in 0..nu {
        let ji = if i < nu_d {
            ordered_interval(spectra.lambda_n[i], spectra.lambda_d[i], tol, "J")?
        } else {
            ordered_interval(spectra.lambda_n[i], envelope(i), tol, "J")?
        };
        j.push(ji);
        let hi = spectra.lambda_n[i + nu_n - nu];
        let jti = if i < nu - nu_d {
            ordered_interval(qsorted[i], hi, tol, "J~")?
        } else {
            ordered_interval(spectra.lambda_d[i - (nu - nu_d)], hi, tol, "J~")?
        };
        j_tilde.push(jti);
    }
    Ok((j, j_tilde))
}

/// Upper bounds on the total band length.
///
/// The first bound combines the envelope of the boundary-class terms with
/// the tail of the Neumann eigenvalues; `h` for a boundary class is
/// `rho (kappa - loops2 + q)`, with the sorted potentials entering by sorted
/// position. The second bound is a plain difference of Neumann eigenvalue
/// windows and is invariant under potential shifts.
pub fn band_length_bounds<T: Scalar>(
    ng: &NeumannGraph,
    spectra: &BracketSpectra<T>,
    spec: &PeriodicGraphSpec<T>,
) -> (T, T) {
    let nu = spec.nu();
    let degrees = spec.degrees();
    let qsorted = spec.sorted_potentials();
    let two_kappa_plus = T::from_usizec(2 * degrees.kappa_plus);

    let mut est1 = T::zero();
    for i in ng.nu_d..nu {
        let class = ng.interior_order[i];
        let rho = T::from_usizec(ng.rho[i]);
        let h = rho
            * (T::from_usizec(degrees.kappa[class])
                - T::from_usizec(degrees.loops2[class])
                + spec.classes[class].potential);
        est1 = est1 + qsorted[i] + two_kappa_plus - h;
    }
    for i in nu..ng.nu_n {
        est1 = est1 + spectra.lambda_n[i];
    }

    let window = nu - ng.nu_d;
    let mut est2 = T::zero();
    for i in 0..window {
        est2 = est2 + spectra.lambda_n[ng.nu_n - window + i] - spectra.lambda_n[i];
    }
    (est1, est2)
}

/// Bracketing certificate for one gauge: the interval families, their
/// intersections, per-band inclusion verdicts for the sampled bands,
/// certified gaps, and the total-band-length bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport<T> {
    pub j: Vec<Interval<T>>,
    pub j_tilde: Vec<Interval<T>>,
    pub j_cap: Vec<Option<Interval<T>>>,
    pub inclusion: Vec<bool>,
    /// All sampled bands lie inside their interval intersections. A `false`
    /// here is an internal inconsistency, never a property of the input.
    pub inclusion_ok: bool,
    /// Open intervals disjoint from every intersection, hence provably free
    /// of spectrum.
    pub certified_gaps: Vec<Interval<T>>,
    pub est1: T,
    pub est2: T,
    pub total_band_length: T,
}

impl<T: Scalar> BracketReport<T> {
    pub fn certified_gap_length(&self) -> T {
        self.certified_gaps
            .iter()
            .fold(T::zero(), |acc, g| acc + g.length())
    }
}

/// Intersects the interval families, checks the sampled bands against them,
/// and extracts certified gaps.
pub fn certify<T: Scalar>(
    bands: &BandIntervals<T>,
    j: &[Interval<T>],
    j_tilde: &[Interval<T>],
    bounds: (T, T),
) -> Result<BracketReport<T>> {
    let nu = bands.bands.len();
    if j.len() != nu || j_tilde.len() != nu {
        return Err(Error::BandCountMismatch(j.len(), nu));
    }
    let tol = T::INCLUSION_TOL;
    let two = T::one() + T::one();

    let mut j_cap = Vec::with_capacity(nu);
    let mut inclusion = Vec::with_capacity(nu);
    for i in 0..nu {
        let lo = j[i].lo.max(j_tilde[i].lo);
        let hi = j[i].hi.min(j_tilde[i].hi);
        let cap = if lo <= hi {
            Some(Interval::new(lo, hi))
        } else if lo - hi <= tol {
            // Endpoints that coincide in exact arithmetic may invert by
            // rounding; collapse to the midpoint.
            let mid = (lo + hi) / two;
            Some(Interval::new(mid, mid))
        } else {
            None
        };
        inclusion.push(
            cap.as_ref()
                .map_or(false, |c| c.contains_interval(&bands.bands[i], tol)),
        );
        j_cap.push(cap);
    }
    let inclusion_ok = inclusion.iter().all(|&ok| ok);
    let nonempty: Vec<Interval<T>> = j_cap.iter().flatten().copied().collect();
    // Gaps narrower than the comparison tolerance are rounding artifacts of
    // degenerate interval endpoints, not certificates.
    let certified_gaps: Vec<Interval<T>> = gaps_in_union(&nonempty)
        .into_iter()
        .filter(|g| g.length() > tol)
        .collect();
    Ok(BracketReport {
        j: j.to_vec(),
        j_tilde: j_tilde.to_vec(),
        j_cap,
        inclusion,
        inclusion_ok,
        certified_gaps,
        est1: bounds.0,
        est2: bounds.1,
        total_band_length: bands.total_length(),
    })
}

/// Full bracketing pass at a fixed gauge.
pub fn bracket_report<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    bands: &BandIntervals<T>,
) -> Result<BracketReport<T>> {
    let ng = NeumannGraph::build(spec);
    let spectra = bracket_spectra(&ng, spec)?;
    let (j, j_tilde) = bracket_intervals(
        &spectra,
        &spec.sorted_potentials(),
        spec.degrees().kappa_plus,
    )?;
    let bounds = band_length_bounds(&ng, &spectra, spec);
    certify(bands, &j, &j_tilde, bounds)
}

/// Best gauge found by exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSearchResult<T> {
    /// Per-class offsets of the winning gauge.
    pub offsets: Vec<Vec<i64>>,
    pub report: BracketReport<T>,
    pub gauges_examined: usize,
}

const GAUGE_BUDGET: u128 = 100_000;

/// Enumerates all per-class offsets with components in `[-radius, radius]`
/// (lexicographically over the flattened offset tuple), brackets each
/// gauge against the fixed sampled bands, and returns the gauge with the
/// largest total certified-gap length. Ties keep the lexicographically
/// smallest offsets. Radius 0 reproduces the identity gauge.
pub fn search_gauges<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    radius: i64,
    bands: &BandIntervals<T>,
) -> Result<GaugeSearchResult<T>> {
    let slots = spec.nu() * spec.dimension;
    let choices = 2u128 * radius as u128 + 1;
    let count = choices
        .checked_pow(u32::try_from(slots).unwrap_or(u32::MAX))
        .unwrap_or(u128::MAX);
    if count > GAUGE_BUDGET {
        return Err(Error::GaugeBudget {
            count,
            budget: GAUGE_BUDGET,
        });
    }

    let mut digits = vec![-radius; slots];
    let mut best: Option<(T, Vec<Vec<i64>>, BracketReport<T>)> = None;
    let mut examined = 0usize;
    loop {
        let offsets: Vec<Vec<i64>> = digits
            .chunks(spec.dimension)
            .map(|chunk| chunk.to_vec())
            .collect();
        let shifted = spec.shift_gauge(&offsets)?;
        let report = bracket_report(&shifted, bands)?;
        let score = report.certified_gap_length();
        examined += 1;
        let better = match &best {
            None => true,
            Some((best_score, _, _)) => score > *best_score,
        };
        if better {
            best = Some((score, offsets, report));
        }

        // Odometer step in lexicographic order.
        let mut pos = slots;
        loop {
            if pos == 0 {
                let (_, offsets, report) = best.expect("at least one gauge examined");
                return Ok(GaugeSearchResult {
                    offsets,
                    report,
                    gauges_examined: examined,
                });
            }
            pos -= 1;
            if digits[pos] < radius {
                digits[pos] += 1;
                break;
            }
            digits[pos] = -radius;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::floquet::{band_intervals, sample_bands, TorusGrid};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn fig1_bands() -> BandIntervals<f64> {
        let spec = fixtures::fig1_graph::<f64>();
        let grid = TorusGrid::new(2, 64).unwrap();
        band_intervals(&sample_bands(&spec, &grid).unwrap(), 1e-8)
    }

    #[test]
    fn fig1_neumann_graph_shape() {
        let spec = fixtures::fig1_graph::<f64>();
        let ng = NeumannGraph::build(&spec);
        assert_eq!(ng.nu_n, 7);
        assert_eq!(ng.nu_d, 1);
        assert_eq!(ng.beta, 8);
        assert_eq!(ng.interior_order, vec![0, 1, 2]);
        assert_eq!(
            ng.vertices[3..],
            [
                NeumannVertex::Exterior(1, vec![1, 0]),
                NeumannVertex::Exterior(1, vec![0, -1]),
                NeumannVertex::Exterior(2, vec![0, -1]),
                NeumannVertex::Exterior(1, vec![1, -1]),
            ]
        );
        assert_eq!(ng.rho, vec![1, 4, 2, 4, 4, 2, 4]);
        assert_eq!(ng.kappa_n, vec![6, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn square_lattice_neumann_graph_is_tight() {
        let spec = fixtures::square_lattice(0.0f64);
        let ng = NeumannGraph::build(&spec);
        assert_eq!(ng.nu_d, 0);
        assert_eq!(ng.nu_n, 3);
        assert_eq!(ng.beta, 4);
        assert_eq!(ng.rho, vec![3, 3, 3]);
        // nu + d == nu + beta/2 == nu_N: both counting bounds are attained.
        assert_eq!(spec.nu() + 2, ng.nu_n);
        assert_eq!(spec.nu() + ng.beta / 2, ng.nu_n);
    }

    #[test]
    fn class_with_incoming_shifted_edge_is_boundary() {
        // d=1 chain: an edge with nonzero index into class 1 forces it to
        // the boundary even though a zero-index edge also reaches it.
        let spec = PeriodicGraphSpec::new(
            1,
            vec![
                crate::graph::VertexClass {
                    id: "a".into(),
                    potential: 0.0,
                },
                crate::graph::VertexClass {
                    id: "b".into(),
                    potential: 0.0,
                },
            ],
            vec![
                crate::graph::FundamentalEdge::new(0, 1, vec![0]),
                crate::graph::FundamentalEdge::new(0, 1, vec![1]),
            ],
        );
        assert!(spec.validate().unwrap().is_valid());
        let ng = NeumannGraph::build(&spec);
        // Class 1 receives the shifted edge and is boundary; class 0 anchors
        // the chosen bridge and keeps its full degree.
        assert_eq!(ng.nu_d, 1);
        assert_eq!(ng.interior_order, vec![0, 1]);
    }

    #[test]
    fn fig1_neumann_matrix_is_the_printed_arrow_matrix() {
        let spec = fixtures::fig1_graph::<f64>();
        let ng = NeumannGraph::build(&spec);
        let m = neumann_matrix(&ng, &spec);
        let expected = [
            [6.0, -2.0, -SQRT2, -2.0, -2.0, -SQRT2, -2.0],
            [-2.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [-SQRT2, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0],
            [-2.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0],
            [-2.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0],
            [-SQRT2, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0],
            [-2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0],
        ];
        for j in 0..7 {
            for k in 0..7 {
                assert_eq!(m.get(j, k).re, expected[j][k], "entry ({j}, {k})");
                assert_eq!(m.get(j, k).im, 0.0);
            }
        }
    }

    #[test]
    fn fig1_dirichlet_matrix_and_spectra() {
        let spec = fixtures::fig1_graph::<f64>();
        let ng = NeumannGraph::build(&spec);
        let hd = dirichlet_matrix(&ng, &spec);
        assert_eq!(hd.order(), 1);
        assert_eq!(hd.get(0, 0).re, 6.0);

        let spectra = bracket_spectra(&ng, &spec).unwrap();
        assert_eq!(spectra.lambda_d, vec![6.0]);
        let s3 = 3.0f64.sqrt();
        let expected = [0.0, 2.0, 6.0 - 2.0 * s3, 4.0, 4.0, 4.0, 6.0 + 2.0 * s3];
        for (got, want) in spectra.lambda_n.iter().zip(expected) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn square_lattice_matrices() {
        let spec = fixtures::square_lattice(0.0f64);
        let ng = NeumannGraph::build(&spec);
        let m = neumann_matrix(&ng, &spec);
        let expected = [[6.0, -3.0, -3.0], [-3.0, 3.0, 0.0], [-3.0, 0.0, 3.0]];
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(m.get(j, k).re, expected[j][k]);
            }
        }
        assert_eq!(dirichlet_matrix(&ng, &spec).order(), 0);
        let spectra = bracket_spectra(&ng, &spec).unwrap();
        assert!(spectra.lambda_d.is_empty());
        for (got, want) in spectra.lambda_n.iter().zip([0.0, 3.0, 9.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn star_lattice_has_maximal_inner_count() {
        let spec = fixtures::star_lattice::<f64>(3);
        let ng = NeumannGraph::build(&spec);
        assert_eq!(ng.nu_d, spec.nu() - 1);
        assert_eq!(ng.nu_n, 6);
        let hd = dirichlet_matrix(&ng, &spec);
        assert_eq!(hd.order(), 3);
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert_eq!(hd.get(j, k).re, want);
            }
        }
    }

    #[test]
    fn constant_potential_shifts_neumann_matrix() {
        let spec = fixtures::fig1_graph::<f64>();
        let mut shifted = spec.clone();
        for c in &mut shifted.classes {
            c.potential = 2.5;
        }
        let ng = NeumannGraph::build(&spec);
        let a = neumann_matrix(&ng, &spec);
        let b = neumann_matrix(&NeumannGraph::build(&shifted), &shifted);
        for j in 0..ng.nu_n {
            for k in 0..ng.nu_n {
                let want = a.get(j, k).re + if j == k { 2.5 } else { 0.0 };
                assert_eq!(b.get(j, k).re, want);
            }
        }
    }

    #[test]
    fn fig1_bracket_intervals_match_closed_forms() {
        let spec = fixtures::fig1_graph::<f64>();
        let ng = NeumannGraph::build(&spec);
        let spectra = bracket_spectra(&ng, &spec).unwrap();
        let (j, jt) = bracket_intervals(&spectra, &spec.sorted_potentials(), 6).unwrap();
        let s3 = 3.0f64.sqrt();
        let expect_j = [(0.0, 6.0), (2.0, 12.0), (6.0 - 2.0 * s3, 12.0)];
        let expect_jt = [(0.0, 4.0), (0.0, 4.0), (6.0, 6.0 + 2.0 * s3)];
        for i in 0..3 {
            assert!((j[i].lo - expect_j[i].0).abs() < 1e-9);
            assert!((j[i].hi - expect_j[i].1).abs() < 1e-9);
            assert!((jt[i].lo - expect_jt[i].0).abs() < 1e-9);
            assert!((jt[i].hi - expect_jt[i].1).abs() < 1e-9);
        }
    }

    #[test]
    fn square_bracket_intervals() {
        let spec = fixtures::square_lattice(0.0f64);
        let ng = NeumannGraph::build(&spec);
        let spectra = bracket_spectra(&ng, &spec).unwrap();
        let (j, jt) = bracket_intervals(&spectra, &spec.sorted_potentials(), 4).unwrap();
        assert!((j[0].lo).abs() < 1e-12 && (j[0].hi - 8.0).abs() < 1e-12);
        assert!((jt[0].lo).abs() < 1e-12 && (jt[0].hi - 9.0).abs() < 1e-12);
    }

    #[test]
    fn potential_shift_moves_every_interval_endpoint() {
        let c = -1.75;
        let spec = fixtures::fig1_graph::<f64>();
        let mut shifted = spec.clone();
        for cl in &mut shifted.classes {
            cl.potential = c;
        }
        let build = |s: &PeriodicGraphSpec<f64>| {
            let ng = NeumannGraph::build(s);
            let spectra = bracket_spectra(&ng, s).unwrap();
            bracket_intervals(&spectra, &s.sorted_potentials(), 6).unwrap()
        };
        let (j0, jt0) = build(&spec);
        let (j1, jt1) = build(&shifted);
        for i in 0..3 {
            assert!((j1[i].lo - (j0[i].lo + c)).abs() < 1e-9);
            assert!((j1[i].hi - (j0[i].hi + c)).abs() < 1e-9);
            assert!((jt1[i].lo - (jt0[i].lo + c)).abs() < 1e-9);
            assert!((jt1[i].hi - (jt0[i].hi + c)).abs() < 1e-9);
        }
    }

    #[test]
    fn fig1_certificate_finds_exactly_the_second_gap() {
        let spec = fixtures::fig1_graph::<f64>();
        let report = bracket_report(&spec, &fig1_bands()).unwrap();
        assert!(report.inclusion_ok);
        assert_eq!(report.certified_gaps.len(), 1);
        assert!((report.certified_gaps[0].lo - 4.0).abs() < 1e-9);
        assert!((report.certified_gaps[0].hi - 6.0).abs() < 1e-9);
        // The true first gap is not certified: the intersections overlap it.
        let s3 = 3.0f64.sqrt();
        let first_gap = Interval::new(2.0, 6.0 - 2.0 * s3);
        assert!(report
            .certified_gaps
            .iter()
            .all(|g| (g.lo - first_gap.lo).abs() > 1e-6));
        let s3cap = report.j_cap[2].unwrap();
        assert!((s3cap.lo - 6.0).abs() < 1e-9);
        assert!((s3cap.hi - (6.0 + 2.0 * s3)).abs() < 1e-9);
    }

    #[test]
    fn square_lattice_certifies_nothing() {
        let spec = fixtures::square_lattice(0.0f64);
        let grid = TorusGrid::new(2, 32).unwrap();
        let bands = band_intervals(&sample_bands(&spec, &grid).unwrap(), 1e-8);
        let report = bracket_report(&spec, &bands).unwrap();
        assert!(report.inclusion_ok);
        assert!(report.certified_gaps.is_empty());
        let cap = report.j_cap[0].unwrap();
        assert!((cap.lo).abs() < 1e-12 && (cap.hi - 8.0).abs() < 1e-12);
    }

    #[test]
    fn fig1_band_length_bounds() {
        let spec = fixtures::fig1_graph::<f64>();
        let ng = NeumannGraph::build(&spec);
        let spectra = bracket_spectra(&ng, &spec).unwrap();
        let (est1, est2) = band_length_bounds(&ng, &spectra, &spec);
        let s3 = 3.0f64.sqrt();
        assert!((est1 - (22.0 + 2.0 * s3)).abs() < 1e-9);
        assert!((est2 - (8.0 + 2.0 * s3)).abs() < 1e-9);
        let total = fig1_bands().total_length();
        assert!((total - 4.0 * s3).abs() < 1e-9);
        assert!(total <= est1.min(est2) + 1e-9);
    }

    #[test]
    fn square_lattice_first_bound_is_tight() {
        let spec = fixtures::square_lattice(0.0f64);
        let ng = NeumannGraph::build(&spec);
        let spectra = bracket_spectra(&ng, &spec).unwrap();
        let (est1, est2) = band_length_bounds(&ng, &spectra, &spec);
        assert!((est1 - 8.0).abs() < 1e-12);
        assert!((est2 - 9.0).abs() < 1e-12);
    }

    #[test]
    fn band_length_bounds_are_shift_invariant() {
        let c = 3.25;
        let spec = fixtures::fig1_graph::<f64>();
        let mut shifted = spec.clone();
        for cl in &mut shifted.classes {
            cl.potential = c;
        }
        let bounds = |s: &PeriodicGraphSpec<f64>| {
            let ng = NeumannGraph::build(s);
            let spectra = bracket_spectra(&ng, s).unwrap();
            band_length_bounds(&ng, &spectra, s)
        };
        let (a1, a2) = bounds(&spec);
        let (b1, b2) = bounds(&shifted);
        assert!((a1 - b1).abs() < 1e-9);
        assert!((a2 - b2).abs() < 1e-9);
    }

    #[test]
    fn neumann_laplacian_is_psd_with_known_kernel() {
        for spec in [
            fixtures::fig1_graph::<f64>(),
            fixtures::square_lattice(0.0f64),
            fixtures::star_lattice::<f64>(3),
        ] {
            let ng = NeumannGraph::build(&spec);
            let m = neumann_matrix(&ng, &spec);
            let values = eigen(&m, false).unwrap().values;
            assert!(values[0] > -1e-9, "not positive semidefinite");
            assert!(values[0].abs() < 1e-9, "kernel missing");
            // x_v = rho_v^{-1/2} is annihilated.
            let x: Vec<num_complex::Complex<f64>> = ng
                .rho
                .iter()
                .map(|&r| num_complex::Complex::new(1.0 / (r as f64).sqrt(), 0.0))
                .collect();
            let mx = m.apply(&x);
            assert!(mx.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn cauchy_ordering_between_operator_spectra() {
        let spec = fixtures::star_lattice::<f64>(4);
        let ng = NeumannGraph::build(&spec);
        let spectra = bracket_spectra(&ng, &spec).unwrap();
        for i in 0..ng.nu_d {
            assert!(spectra.lambda_n[i] <= spectra.lambda_d[i] + 1e-9);
        }
    }

    #[test]
    fn gauge_search_radius_zero_is_identity() {
        let spec = fixtures::fig1_graph::<f64>();
        let bands = fig1_bands();
        let found = search_gauges(&spec, 0, &bands).unwrap();
        assert_eq!(found.gauges_examined, 1);
        assert_eq!(found.offsets, vec![vec![0, 0]; 3]);
        assert_eq!(found.report, bracket_report(&spec, &bands).unwrap());
    }

    #[test]
    fn gauge_search_fig1_radius_one() {
        let spec = fixtures::fig1_graph::<f64>();
        let bands = fig1_bands();
        let found = search_gauges(&spec, 1, &bands).unwrap();
        assert_eq!(found.gauges_examined, 3usize.pow(6));
        assert!(found.report.inclusion_ok);
        assert!(found.report.certified_gap_length() >= 2.0 - 1e-9);
        let has_second_gap = found
            .report
            .certified_gaps
            .iter()
            .any(|g| g.lo <= 4.0 + 1e-9 && g.hi >= 6.0 - 1e-9);
        assert!(has_second_gap);
    }

    #[test]
    fn gauge_search_square_lattice_all_equivalent() {
        // One class: tau + m - m leaves every index unchanged.
        let spec = fixtures::square_lattice(0.0f64);
        let grid = TorusGrid::new(2, 8).unwrap();
        let bands = band_intervals(&sample_bands(&spec, &grid).unwrap(), 1e-8);
        let found = search_gauges(&spec, 1, &bands).unwrap();
        assert_eq!(found.gauges_examined, 9);
        assert_eq!(found.offsets, vec![vec![-1, -1]]);
        assert_eq!(found.report, bracket_report(&spec, &bands).unwrap());
    }

    #[test]
    fn gauge_search_budget_is_enforced() {
        let spec = fixtures::star_lattice::<f64>(4);
        let grid = TorusGrid::new(2, 4).unwrap();
        let bands = band_intervals(&sample_bands(&spec, &grid).unwrap(), 1e-8);
        assert!(matches!(
            search_gauges(&spec, 2, &bands),
            Err(Error::GaugeBudget { .. })
        ));
    }
}
