//! Fiber matrices over the quasimomentum torus and the spectral bands they
//! sweep out.
//!
//! For a quotient graph with `nu` classes, each quasimomentum `theta` on the
//! torus yields a Hermitian `nu x nu` fiber matrix whose eigenvalues, as
//! `theta` runs over the torus, trace out the spectral bands of the periodic
//! operator. Sampling happens on a uniform even grid so that all corner
//! points with components in `{0, pi}` are hit; many band extrema of small
//! graphs sit exactly there. Sampled band endpoints are approximations from
//! below of the true bands.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::PeriodicGraphSpec;
use crate::hermitian::{eigen, HermitianMatrix};
use crate::interval::{gaps_in_union, Interval};
use crate::scalar::Scalar;

/// Uniform sampling grid on the torus: `resolution` points per dimension at
/// `theta_m = 2 pi m / resolution`. The resolution must be even and at least
/// 2 so that 0 and pi are grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    dimension: usize,
    resolution: usize,
    points: usize,
}

impl TorusGrid {
    pub fn new(dimension: usize, resolution: usize) -> Result<Self> {
        if resolution < 2 || resolution % 2 != 0 {
            return Err(Error::BadGridResolution(resolution));
        }
        let points = resolution
            .checked_pow(u32::try_from(dimension).unwrap_or(u32::MAX))
            .ok_or(Error::GridTooLarge {
                resolution,
                dimension,
            })?;
        Ok(Self {
            dimension,
            resolution,
            points,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    /// Multi-index of a flat point index (first dimension slowest).
    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.resolution;
            flat /= self.resolution;
        }
    }

    pub fn theta<T: Scalar>(&self, flat: usize) -> Vec<T> {
        let mut m = vec![0usize; self.dimension];
        self.multi_index(flat, &mut m);
        let n = T::from_usizec(self.resolution);
        m.iter()
            .map(|&mi| T::tau() * T::from_usizec(mi) / n)
            .collect()
    }
}

/// Fiber Laplacian at quasimomentum `theta`.
///
/// Entry `(j, k)` is `kappa_j delta_jk` minus the sum of `exp(i <tau, theta>)`
/// over oriented edges from class `j` to class `k`; every stored edge
/// contributes its index to `(from, to)` and the negated index to
/// `(to, from)`, so self-class edges add `2 cos <tau, theta>` on the
/// diagonal and genuine loops cancel entirely.
pub fn laplacian_matrix<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    theta: &[T],
) -> Result<HermitianMatrix<T>> {
    if theta.len() != spec.dimension {
        return Err(Error::ThetaLength {
            got: theta.len(),
            expected: spec.dimension,
        });
    }
    let nu = spec.nu();
    let degrees = spec.degrees();
    let mut adjacency = vec![Complex::new(T::zero(), T::zero()); nu * nu];
    let mut diagonal = vec![T::zero(); nu];
    for e in &spec.edges {
        let phase = e
            .index
            .iter()
            .zip(theta)
            .fold(T::zero(), |acc, (&tau, &th)| acc + T::from_i64c(tau) * th);
        if e.from_class == e.to_class {
            let two = T::one() + T::one();
            diagonal[e.from_class] = diagonal[e.from_class] + two * phase.cos();
        } else {
            let (a, b) = (e.from_class.min(e.to_class), e.from_class.max(e.to_class));
            // Store the (a, b) upper-triangle contribution; orientation
            // from the smaller index fixes the phase sign.
            let z = if e.from_class == a {
                Complex::cis(phase)
            } else {
                Complex::cis(-phase)
            };
            adjacency[a * nu + b] = adjacency[a * nu + b] + z;
        }
    }
    let mut m = HermitianMatrix::zeros(nu);
    for j in 0..nu {
        m.set_diag(j, T::from_usizec(degrees.kappa[j]) - diagonal[j]);
        for k in j + 1..nu {
            m.set_upper(j, k, -adjacency[j * nu + k]);
        }
    }
    Ok(m)
}

/// Fiber matrix: Laplacian plus the diagonal potential.
pub fn fiber_matrix<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    theta: &[T],
) -> Result<HermitianMatrix<T>> {
    let mut m = laplacian_matrix(spec, theta)?;
    let q: Vec<T> = spec.classes.iter().map(|c| c.potential).collect();
    m.add_diagonal(&q);
    Ok(m)
}

/// Sorted fiber eigenvalues over a full torus grid, with running band
/// extrema and the grid points attaining them.
#[derive(Debug, Clone, PartialEq)]
pub struct BandTable<T> {
    pub nu: usize,
    pub grid: TorusGrid,
    /// `point_count * nu` values, row per grid point, nondecreasing in the
    /// band index.
    values: Vec<T>,
    band_min: Vec<T>,
    band_max: Vec<T>,
    argmin: Vec<usize>,
    argmax: Vec<usize>,
}

impl<T: Scalar> BandTable<T> {
    pub fn point(&self, flat: usize) -> &[T] {
        &self.values[flat * self.nu..(flat + 1) * self.nu]
    }

    pub fn band_min(&self, band: usize) -> T {
        self.band_min[band]
    }

    pub fn band_max(&self, band: usize) -> T {
        self.band_max[band]
    }
}

fn theta_display<T: Scalar>(theta: &[T]) -> String {
    let parts: Vec<String> = theta.iter().map(|t| format!("{t}")).collect();
    format!("({})", parts.join(", "))
}

/// Eigendecomposes the fiber matrix at every grid point. Grid points are
/// independent work items evaluated in parallel; the table layout and the
/// min/max reduction do not depend on completion order.
pub fn sample_bands<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    grid: &TorusGrid,
) -> Result<BandTable<T>> {
    let nu = spec.nu();
    let rows: Vec<Vec<T>> = (0..grid.point_count())
        .into_par_iter()
        .map(|flat| -> Result<Vec<T>> {
            let theta = grid.theta::<T>(flat);
            let matrix = fiber_matrix(spec, &theta)?;
            let spectrum = eigen(&matrix, false).map_err(|e| Error::FiberEigen {
                theta: theta_display(&theta),
                source: Box::new(e),
            })?;
            Ok(spectrum.values)
        })
        .collect::<Result<_>>()?;

    let mut values = Vec::with_capacity(grid.point_count() * nu);
    let mut band_min = vec![T::infinity(); nu];
    let mut band_max = vec![T::neg_infinity(); nu];
    let mut argmin = vec![0usize; nu];
    let mut argmax = vec![0usize; nu];
    for (flat, row) in rows.iter().enumerate() {
        for (band, &value) in row.iter().enumerate() {
            if value < band_min[band] {
                band_min[band] = value;
                argmin[band] = flat;
            }
            if value > band_max[band] {
                band_max[band] = value;
                argmax[band] = flat;
            }
        }
        values.extend_from_slice(row);
    }
    Ok(BandTable {
        nu,
        grid: *grid,
        values,
        band_min,
        band_max,
        argmin,
        argmax,
    })
}

/// Sampled spectral bands, flat-band candidates, and the open gaps between
/// the bands.
#[derive(Debug, Clone, PartialEq)]
pub struct BandIntervals<T> {
    pub bands: Vec<Interval<T>>,
    /// A finite sample can only suggest flatness, never prove it.
    pub flat_candidate: Vec<bool>,
    pub gaps: Vec<Interval<T>>,
}

impl<T: Scalar> BandIntervals<T> {
    fn from_extrema(band_min: &[T], band_max: &[T], flat_tol: T) -> Self {
        let bands: Vec<Interval<T>> = band_min
            .iter()
            .zip(band_max)
            .map(|(&lo, &hi)| Interval::new(lo, hi))
            .collect();
        let flat_candidate = bands
            .iter()
            .map(|b| b.length() <= flat_tol * T::one().max(b.hi.abs()))
            .collect();
        let gaps = gaps_in_union(&bands);
        Self {
            bands,
            flat_candidate,
            gaps,
        }
    }

    pub fn total_length(&self) -> T {
        self.bands
            .iter()
            .fold(T::zero(), |acc, b| acc + b.length())
    }
}

/// Collapses a band table to per-band intervals. A band is flagged as a
/// flat candidate when its sampled width is below `flat_tol` relative to
/// `max(1, |upper edge|)`; the gap list consists of the maximal open
/// intervals missing from the union of the closed bands.
pub fn band_intervals<T: Scalar>(table: &BandTable<T>, flat_tol: T) -> BandIntervals<T> {
    BandIntervals::from_extrema(&table.band_min, &table.band_max, flat_tol)
}

/// Re-scans a neighborhood of each band's extremal grid points at eight
/// times the grid resolution and widens the band intervals accordingly.
pub fn refine_band_edges<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    table: &BandTable<T>,
    flat_tol: T,
) -> Result<BandIntervals<T>> {
    let grid = &table.grid;
    let d = grid.dimension();
    let subdivisions = 8i64;
    let step = T::tau()
        / (T::from_usizec(grid.resolution()) * T::from_i64c(subdivisions));
    let mut band_min = table.band_min.clone();
    let mut band_max = table.band_max.clone();

    let mut scan = |band: usize, center_flat: usize, minimize: bool| -> Result<()> {
        let center = grid.theta::<T>(center_flat);
        let offsets = offset_grid(d, subdivisions);
        for offset in offsets {
            let theta: Vec<T> = center
                .iter()
                .zip(&offset)
                .map(|(&c, &o)| c + T::from_i64c(o) * step)
                .collect();
            let spectrum = eigen(&fiber_matrix(spec, &theta)?, false).map_err(|e| {
                Error::FiberEigen {
                    theta: theta_display(&theta),
                    source: Box::new(e),
                }
            })?;
            let value = spectrum.values[band];
            if minimize {
                band_min[band] = band_min[band].min(value);
            } else {
                band_max[band] = band_max[band].max(value);
            }
        }
        Ok(())
    };

    for band in 0..table.nu {
        scan(band, table.argmin[band], true)?;
        scan(band, table.argmax[band], false)?;
    }
    Ok(BandIntervals::from_extrema(&band_min, &band_max, flat_tol))
}

/// Offsets covering one grid cell on each side of the center at `1/sub`
/// spacing: `(2 sub + 1)^d` points.
fn offset_grid(d: usize, sub: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-sub..=sub).map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o);
                    next
                })
            })
            .collect();
    }
    out
}

/// One sampled point of a band path: arclength from the start of the path,
/// the quasimomentum, and the sorted fiber eigenvalues there.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPathRow<T> {
    pub arclength: T,
    pub theta: Vec<T>,
    pub values: Vec<T>,
}

/// Samples the fiber eigenvalues along a piecewise-linear quasimomentum
/// path, each segment subdivided into `steps` equal parts. Produces
/// `steps * (waypoints - 1) + 1` rows.
pub fn band_path<T: Scalar>(
    spec: &PeriodicGraphSpec<T>,
    waypoints: &[Vec<T>],
    steps: usize,
) -> Result<Vec<BandPathRow<T>>> {
    if waypoints.len() < 2 {
        return Err(Error::TooFewWaypoints);
    }
    if steps < 1 {
        return Err(Error::ZeroSteps);
    }
    for w in waypoints {
        if w.len() != spec.dimension {
            return Err(Error::ThetaLength {
                got: w.len(),
                expected: spec.dimension,
            });
        }
    }

    let mut thetas: Vec<Vec<T>> = vec![waypoints[0].clone()];
    for segment in waypoints.windows(2) {
        let (a, b) = (&segment[0], &segment[1]);
        for j in 1..=steps {
            let t = T::from_usizec(j) / T::from_usizec(steps);
            thetas.push(
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| x + (y - x) * t)
                    .collect(),
            );
        }
    }

    let mut rows = Vec::with_capacity(thetas.len());
    let mut arclength = T::zero();
    let mut previous: Option<Vec<T>> = None;
    for theta in thetas {
        if let Some(prev) = &previous {
            let seg = prev
                .iter()
                .zip(&theta)
                .fold(T::zero(), |acc, (&a, &b)| acc + (b - a) * (b - a))
                .sqrt();
            arclength = arclength + seg;
        }
        let spectrum = eigen(&fiber_matrix(spec, &theta)?, false).map_err(|e| {
            Error::FiberEigen {
                theta: theta_display(&theta),
                source: Box::new(e),
            }
        })?;
        rows.push(BandPathRow {
            arclength,
            theta: theta.clone(),
            values: spectrum.values,
        });
        previous = Some(theta);
    }
    Ok(rows)
}
