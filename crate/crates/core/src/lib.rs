//! Band structure of discrete Schrodinger operators `H = Delta + Q` on
//! `Z^d`-periodic graphs, and certified localization of the spectral bands
//! and gaps.
//!
//! The input is the quotient (fundamental) graph: vertex classes with a
//! periodic potential and edges carrying integer index vectors. From it this
//! crate
//!
//! - assembles the Hermitian fiber matrices over the quasimomentum torus and
//!   samples their eigenvalue surfaces into spectral bands ([`floquet`]),
//! - builds a finite graph from the fundamental cell and brackets every band
//!   between Neumann and Dirichlet eigenvalues of operators on it, which
//!   certifies spectral gaps and bounds the total band length
//!   ([`bracketing`]),
//! - parses and emits the JSON spec/report formats used by the `bandcert`
//!   command-line tool ([`io`]).
//!
//! Numerical routines are generic over the scalar precision via
//! [`scalar::Scalar`]; the aliases at the crate root fix `f64`, which is
//! what the file formats and the CLI use.

pub mod bracketing;
pub mod error;
pub mod fixtures;
pub mod floquet;
pub mod graph;
pub mod hermitian;
pub mod interval;
pub mod io;
pub mod pipeline;
pub mod scalar;
pub mod snf;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Quotient graph with double-precision potentials.
pub type GraphSpec = graph::PeriodicGraphSpec<f64>;
/// Fiber matrix `H(theta)` (and the finite-graph operators).
pub type FiberMatrix = hermitian::HermitianMatrix<f64>;
pub type FiberSpectrum = hermitian::Spectrum<f64>;
pub type BandSamples = floquet::BandTable<f64>;
pub type Bands = floquet::BandIntervals<f64>;
pub type Brackets = bracketing::BracketReport<f64>;
pub type Analysis = pipeline::Analysis<f64>;
pub type AnalysisOptions = pipeline::AnalysisOptions<f64>;

/// Caps the global worker pool used for torus sampling. Call once, before
/// any parallel work; later calls fail.
pub fn configure_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))
}
