use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Real scalar type the spectral routines are generic over: `f32` or `f64`.
///
/// The associated constants are the default numerical thresholds; they scale
/// with the precision of the type, so the `f32` instantiation converges to a
/// correspondingly looser accuracy.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Eigensolver sweep convergence: stop once the off-diagonal Frobenius
    /// norm drops below this factor times the Frobenius norm of the input.
    const SWEEP_TOL: Self;
    /// Certified residual bound of the eigensolver, relative to
    /// `max(1, frobenius_norm)`.
    const RESIDUAL_TOL: Self;
    /// Default relative width under which a sampled band is flagged as a
    /// flat-band candidate.
    const FLAT_TOL: Self;
    /// Slack used when comparing sampled spectra against interval bounds
    /// that hold exactly in real arithmetic.
    const INCLUSION_TOL: Self;

    fn from_f64c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant converts to scalar")
    }

    fn from_usizec(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts to scalar")
    }

    fn from_i64c(x: i64) -> Self {
        Self::from_i64(x).expect("i64 converts to scalar")
    }

    /// 2π in this scalar type.
    fn tau() -> Self {
        Self::from_f64c(std::f64::consts::TAU)
    }
}

impl Scalar for f64 {
    const SWEEP_TOL: f64 = 1e-14;
    const RESIDUAL_TOL: f64 = 1e-10;
    const FLAT_TOL: f64 = 1e-8;
    const INCLUSION_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const SWEEP_TOL: f32 = 1e-6;
    const RESIDUAL_TOL: f32 = 1e-4;
    const FLAT_TOL: f32 = 1e-4;
    const INCLUSION_TOL: f32 = 1e-4;
}
