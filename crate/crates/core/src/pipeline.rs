//! End-to-end analysis of one spec: sample the bands, build the finite
//! graph, bracket, certify, and estimate.

use crate::bracketing::{
    bracket_spectra, search_gauges, BracketReport, BracketSpectra, NeumannGraph,
};
use crate::error::Result;
use crate::floquet::{band_intervals, refine_band_edges, sample_bands, BandIntervals, TorusGrid};
use crate::graph::PeriodicGraphSpec;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions<T> {
    /// Grid resolution per torus dimension (even, at least 2).
    pub grid: usize,
    /// Relative flat-band flag tolerance.
    pub flat_tol: T,
    /// Re-scan a neighborhood of each band extremum at 8x resolution.
    pub refine: bool,
    /// Enumerate per-class gauge offsets in `[-radius, radius]` and keep the
    /// gauge certifying the most gap length. Zero examines the identity
    /// gauge only.
    pub gauge_radius: i64,
}

impl<T: Scalar> Default for AnalysisOptions<T> {
    fn default() -> Self {
        Self {
            grid: 32,
            flat_tol: T::FLAT_TOL,
            refine: false,
            gauge_radius: 0,
        }
    }
}

/// Everything one pass computes. The finite-graph data describes the
/// winning gauge; the bands are gauge-invariant and sampled once.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis<T> {
    pub nu: usize,
    pub kappa_plus: usize,
    pub grid_n: usize,
    pub bands: BandIntervals<T>,
    pub neumann: NeumannGraph,
    pub spectra: BracketSpectra<T>,
    pub report: BracketReport<T>,
    /// Per-class offsets of the gauge the report was computed at.
    pub gauge_offsets: Vec<Vec<i64>>,
}

pub fn analyze<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    options: &AnalysisOptions<T>,
) -> Result<Analysis<T>> {
    spec.require_valid()?;
    let degrees = spec.degrees();
    let grid = TorusGrid::new(spec.dimension, options.grid)?;
    let table = sample_bands(spec, &grid)?;
    let bands = if options.refine {
        refine_band_edges(spec, &table, options.flat_tol)?
    } else {
        band_intervals(&table, options.flat_tol)
    };

    let found = search_gauges(spec, options.gauge_radius, &bands)?;
    let gauged = spec.shift_gauge(&found.offsets)?;
    let neumann = NeumannGraph::build(&gauged);
    let spectra = bracket_spectra(&neumann, &gauged)?;

    Ok(Analysis {
        nu: spec.nu(),
        kappa_plus: degrees.kappa_plus,
        grid_n: options.grid,
        bands,
        neumann,
        spectra,
        report: found.report,
        gauge_offsets: found.offsets,
    })
}
