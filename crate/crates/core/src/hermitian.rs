//! Dense complex Hermitian matrices and a deterministic full-spectrum
//! eigensolver (cyclic Jacobi with complex plane rotations).
//!
//! Matrices here are small (fiber matrices and finite-graph operators, order
//! up to a few hundred), so robustness and determinism are worth more than
//! speed: the same input produces bit-identical output on one platform.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hermitian matrix stored explicitly; construction mirrors the upper
/// triangle so `a[j][k] == conj(a[k][j])` holds exactly as stored and the
/// diagonal is exactly real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    n: usize,
    a: Vec<Complex<T>>,
}

impl<T: Scalar> HermitianMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    /// Builds from arbitrary square data: the upper triangle (and the real
    /// part of the diagonal) is kept, the lower triangle is overwritten with
    /// the conjugate mirror.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Inconsistent("matrix rows are not square".into()));
        }
        let mut m = Self::zeros(n);
        for j in 0..n {
            m.set_diag(j, rows[j][j].re);
            for k in j + 1..n {
                m.set_upper(j, k, rows[j][k]);
            }
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let complex: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (j, &v) in values.iter().enumerate() {
            m.set_diag(j, v);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> Complex<T> {
        self.a[j * self.n + k]
    }

    /// Sets entry `(j, k)` with `j < k` and its conjugate mirror.
    pub fn set_upper(&mut self, j: usize, k: usize, value: Complex<T>) {
        assert!(j < k, "set_upper expects a strict upper-triangle entry");
        self.a[j * self.n + k] = value;
        self.a[k * self.n + j] = value.conj();
    }

    pub fn set_diag(&mut self, j: usize, value: T) {
        self.a[j * self.n + j] = Complex::new(value, T::zero());
    }

    /// Adds `shift[j]` to the diagonal.
    pub fn add_diagonal(&mut self, shift: &[T]) {
        assert_eq!(shift.len(), self.n);
        for (j, &s) in shift.iter().enumerate() {
            let d = self.a[j * self.n + j].re + s;
            self.set_diag(j, d);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::OrderMismatch(self.n, other.n));
        }
        let mut sum = Self::zeros(self.n);
        for j in 0..self.n {
            sum.set_diag(j, self.get(j, j).re + other.get(j, j).re);
            for k in j + 1..self.n {
                sum.set_upper(j, k, self.get(j, k) + other.get(j, k));
            }
        }
        Ok(sum)
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, j| acc + self.get(j, j).re)
    }

    pub fn frobenius_norm(&self) -> T {
        self.a
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    fn check_finite(&self) -> Result<()> {
        for j in 0..self.n {
            for k in 0..self.n {
                let z = self.get(j, k);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row: j, col: k });
                }
            }
        }
        Ok(())
    }

    /// Matrix-vector product, used for residual checks.
    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|j| {
                (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                    acc + self.get(j, k) * x[k]
                })
            })
            .collect()
    }
}

/// Full spectrum of a Hermitian matrix: eigenvalues in nondecreasing order,
/// repeated according to multiplicity, with optional orthonormal
/// eigenvectors (one inner vector per eigenvalue, matching order).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<Vec<Complex<T>>>>,
}

const MAX_SWEEPS: usize = 50;

/// Full eigendecomposition by cyclic Jacobi with complex rotations.
///
/// Converges when the off-diagonal Frobenius norm falls below
/// `T::SWEEP_TOL` times the Frobenius norm of the input; more than
/// [`MAX_SWEEPS`] sweeps is an error, never a silent return.
pub fn eigen<T: Scalar>(matrix: &HermitianMatrix<T>, want_vectors: bool) -> Result<Spectrum<T>> {
    matrix.check_finite()?;
    let n = matrix.order();
    let norm = matrix.frobenius_norm();
    let tol = T::SWEEP_TOL * norm;

    let mut a: Vec<Complex<T>> = matrix.a.clone();
    let idx = |j: usize, k: usize| j * n + k;
    let mut vecs: Option<Vec<Complex<T>>> = want_vectors.then(|| {
        let mut q = vec![Complex::new(T::zero(), T::zero()); n * n];
        for j in 0..n {
            q[idx(j, j)] = Complex::new(T::one(), T::zero());
        }
        q
    });

    let off_norm = |a: &[Complex<T>]| -> T {
        let mut s = T::zero();
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    s = s + a[idx(j, k)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                order: n,
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let g = a[idx(p, q)];
                let abs_g = g.norm();
                if abs_g == T::zero() {
                    continue;
                }
                let u = g / abs_g; // phase of the pivot entry
                let two = T::one() + T::one();
                let theta = (a[idx(q, q)].re - a[idx(p, p)].re) / (two * abs_g);
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // A <- V* A V with the rotation acting on the (p, q) plane,
                // V_pp = c, V_pq = s*u, V_qp = -s*conj(u), V_qq = c.
                for j in 0..n {
                    let ajp = a[idx(j, p)];
                    let ajq = a[idx(j, q)];
                    a[idx(j, p)] = ajp * c - ajq * u.conj() * s;
                    a[idx(j, q)] = ajp * u * s + ajq * c;
                }
                for j in 0..n {
                    let apj = a[idx(p, j)];
                    let aqj = a[idx(q, j)];
                    a[idx(p, j)] = apj * c - aqj * u * s;
                    a[idx(q, j)] = apj * u.conj() * s + aqj * c;
                }
                a[idx(p, q)] = Complex::new(T::zero(), T::zero());
                a[idx(q, p)] = Complex::new(T::zero(), T::zero());
                a[idx(p, p)].im = T::zero();
                a[idx(q, q)].im = T::zero();

                if let Some(qmat) = vecs.as_mut() {
                    for j in 0..n {
                        let qjp = qmat[idx(j, p)];
                        let qjq = qmat[idx(j, q)];
                        qmat[idx(j, p)] = qjp * c - qjq * u.conj() * s;
                        qmat[idx(j, q)] = qjp * u * s + qjq * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[idx(i, i)]
            .re
            .partial_cmp(&a[idx(j, j)].re)
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| a[idx(i, i)].re).collect();
    let vectors = vecs.map(|q| {
        order
            .iter()
            .map(|&col| (0..n).map(|j| q[idx(j, col)]).collect())
            .collect()
    });
    Ok(Spectrum { values, vectors })
}

/// Outcome of a Weyl-inequality self check on a pair of matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylCheck<T> {
    pub holds: bool,
    /// Largest amount by which either bound was exceeded; nonpositive when
    /// the inequalities hold exactly.
    pub max_violation: T,
}

/// Checks `lambda_n(A) + lambda_1(B) <= lambda_n(A+B) <= lambda_n(A) +
/// lambda_n_max(B)` for every `n`, within `tol`.
pub fn weyl_check<T: Scalar>(
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
    tol: T,
) -> Result<WeylCheck<T>> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(a.order(), b.order()));
    }
    let la = eigen(a, false)?.values;
    let lb = eigen(b, false)?.values;
    let lab = eigen(&a.add(b)?, false)?.values;
    let n = la.len();
    let mut violation = T::neg_infinity();
    if n == 0 {
        violation = T::zero();
    }
    for i in 0..n {
        let lower = la[i] + lb[0] - lab[i];
        let upper = lab[i] - (la[i] + lb[n - 1]);
        violation = violation.max(lower).max(upper);
    }
    Ok(WeylCheck {
        holds: violation <= tol,
        max_violation: violation,
    })
}
