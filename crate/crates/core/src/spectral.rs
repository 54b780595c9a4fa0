//! Dense real-symmetric eigendecomposition and spectral time evolution.
//!
//! The solver is Householder reduction to tridiagonal form followed by
//! implicit-shift QL with eigenvector accumulation (EISPACK tred2/tql2
//! lineage). Sector dimensions stay near 10^3, where this is entirely
//! adequate and keeps the crate free of external linear-algebra backends.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::basis::{BasisState, SectorBasis};
use crate::error::{Error, Result};
use crate::float::{real, Real};

/// Maximum QL iterations per eigenvalue before reporting failure.
const MAX_QL_ITERATIONS: usize = 50;

/// Relative gap under which neighboring eigenvalues are flagged degenerate.
/// Eigenvector choice inside such a cluster is solver-dependent, which
/// matters to anything (like a concurrence scan) that inspects vectors.
const DEGENERACY_RTOL: f64 = 1e-8;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    values: Vec<T>,
    vectors: Array2<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Column matrix of eigenvectors, same order as `values`.
    pub fn vectors(&self) -> &Array2<T> {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> ndarray::ArrayView1<'_, T> {
        self.vectors.column(k)
    }

    /// Marks eigenvalues whose neighbor sits closer than the degeneracy
    /// threshold; both members of a near-coincident pair are flagged.
    pub fn degenerate_flags(&self) -> Vec<bool> {
        let tol = real::<T>(DEGENERACY_RTOL);
        let mut flags = vec![false; self.values.len()];
        for i in 1..self.values.len() {
            let scale = T::one().max(self.values[i].abs()).max(self.values[i - 1].abs());
            if (self.values[i] - self.values[i - 1]).abs() < tol * scale {
                flags[i] = true;
                flags[i - 1] = true;
            }
        }
        flags
    }
}

fn max_abs<T: Real>(m: &Array2<T>) -> T {
    m.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

/// Eigendecomposition of a dense symmetric matrix.
///
/// The input must be symmetric to within 1e-12 (absolute, on entries);
/// failure to converge reports which eigenvalue stalled.
pub fn eigh<T: Real>(matrix: &Array2<T>) -> Result<EigenDecomposition<T>> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix must be square and nonempty, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let sym_tol = real::<T>(1e-12);
    for i in 0..n {
        for j in (i + 1)..n {
            if (matrix[(i, j)] - matrix[(j, i)]).abs() > sym_tol {
                return Err(Error::InvalidArgument(format!(
                    "matrix not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let mut a = matrix.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut a, &mut d, &mut e);
    tql2(&mut a, &mut d, &mut e)?;

    // Ascending eigenvalue order with matching column permutation.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("eigenvalues are finite"));
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&a.column(src));
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Householder reduction of `a` to tridiagonal form; on exit `a` holds the
/// accumulated orthogonal transformation, `d` the diagonal, `e` the
/// subdiagonal (e[0] = 0).
fn tred2<T: Real>(a: &mut Array2<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let mut scale = T::zero();
            for k in 0..=l {
                scale += a[(i, k)].abs();
            }
            if scale == T::zero() {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f_acc = T::zero();
                for j in 0..=l {
                    a[(j, i)] = a[(i, j)] / h;
                    let mut g_acc = T::zero();
                    for k in 0..=j {
                        g_acc += a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let delta = f * e[k] + g * a[(i, k)];
                        a[(j, k)] -= delta;
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    d[0] = T::zero();
    e[0] = T::zero();
    for i in 0..n {
        if d[i] != T::zero() {
            for j in 0..i {
                let mut g = T::zero();
                for k in 0..i {
                    g += a[(i, k)] * a[(k, j)];
                }
                for k in 0..i {
                    let delta = g * a[(k, i)];
                    a[(k, j)] -= delta;
                }
            }
        }
        d[i] = a[(i, i)];
        a[(i, i)] = T::one();
        for j in 0..i {
            a[(j, i)] = T::zero();
            a[(i, j)] = T::zero();
        }
    }
}

/// Implicit-shift QL on the tridiagonal (d, e), rotations accumulated into
/// the columns of `z`.
fn tql2<T: Real>(z: &mut Array2<T>, d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = real::<T>(2.0);

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Numeric(format!(
                    "QL failed to converge for eigenvalue {l} after {MAX_QL_ITERATIONS} iterations (subdiagonal {:e})",
                    e[l].to_f64().unwrap_or(f64::NAN)
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut broke_early = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    broke_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if broke_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Normalized state in one magnetization sector, complex amplitudes in the
/// sector's basis order.
#[derive(Clone, Debug)]
pub struct SectorState<T> {
    basis: Arc<SectorBasis>,
    amplitudes: Array1<Complex<T>>,
}

impl<T: Real> SectorState<T> {
    /// Wrap amplitudes; they must be unit-normalized.
    pub fn new(basis: Arc<SectorBasis>, amplitudes: Array1<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for sector of dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        let norm2: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let tol = real::<T>(1e-12).max(T::epsilon() * real(64.0));
        if (norm2 - T::one()).abs() > tol {
            return Err(Error::InvalidArgument(format!(
                "state norm^2 deviates from 1 by {:e}",
                (norm2 - T::one()).abs().to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(SectorState { basis, amplitudes })
    }

    pub(crate) fn new_unchecked(basis: Arc<SectorBasis>, amplitudes: Array1<Complex<T>>) -> Self {
        SectorState { basis, amplitudes }
    }

    /// The register `state` as a sector basis vector.
    pub fn from_register(basis: Arc<SectorBasis>, state: BasisState) -> Result<Self> {
        let idx = basis.rank(state)?;
        let mut amplitudes = Array1::zeros(basis.dim());
        amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(SectorState { basis, amplitudes })
    }

    /// Real eigenvector column `k` of `decomp` as a sector state.
    pub fn from_eigenvector(
        basis: Arc<SectorBasis>,
        decomp: &EigenDecomposition<T>,
        k: usize,
    ) -> Result<Self> {
        if decomp.dim() != basis.dim() {
            return Err(Error::InvalidArgument(format!(
                "decomposition dimension {} does not match sector dimension {}",
                decomp.dim(),
                basis.dim()
            )));
        }
        if k >= decomp.dim() {
            return Err(Error::NotFound(format!("eigenvector index {k} out of range")));
        }
        let amplitudes = decomp
            .vector(k)
            .iter()
            .map(|&x| Complex::new(x, T::zero()))
            .collect();
        Ok(SectorState { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<Complex<T>> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Evolve `initial` for time `t` (units of 1/J, hbar = 1) through the
/// spectral decomposition: amplitudes(t) = sum_k e^{-i l_k t} <v_k|psi> v_k.
pub fn evolve_state<T: Real>(
    decomp: &EigenDecomposition<T>,
    initial: &SectorState<T>,
    t: T,
) -> Result<SectorState<T>> {
    let n = decomp.dim();
    if initial.amplitudes.len() != n {
        return Err(Error::InvalidArgument(format!(
            "state dimension {} does not match decomposition dimension {n}",
            initial.amplitudes.len()
        )));
    }
    let v = decomp.vectors();
    // overlaps c_k = <v_k|psi> (eigenvectors are real)
    let mut coeff = vec![Complex::new(T::zero(), T::zero()); n];
    for k in 0..n {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            acc = acc + initial.amplitudes[i] * v[(i, k)];
        }
        coeff[k] = acc;
    }
    for (k, c) in coeff.iter_mut().enumerate() {
        let phase = -decomp.values()[k] * t;
        *c = *c * Complex::new(phase.cos(), phase.sin());
    }
    let mut out = Array1::from_elem(n, Complex::new(T::zero(), T::zero()));
    for k in 0..n {
        if coeff[k].norm_sqr() == T::zero() {
            continue;
        }
        for i in 0..n {
            out[i] = out[i] + coeff[k] * v[(i, k)];
        }
    }
    Ok(SectorState {
        basis: initial.basis.clone(),
        amplitudes: out,
    })
}

/// Probability of finding the system in `register`.
pub fn register_probability<T: Real>(state: &SectorState<T>, register: BasisState) -> Result<T> {
    let idx = state.basis.rank(register)?;
    Ok(state.amplitudes[idx].norm_sqr())
}

/// Residual norms used by callers validating a decomposition.
pub fn reconstruction_residual<T: Real>(
    matrix: &Array2<T>,
    decomp: &EigenDecomposition<T>,
) -> T {
    let n = decomp.dim();
    let v = decomp.vectors();
    let mut worst = T::zero();
    for k in 0..n {
        for i in 0..n {
            let mut hv = T::zero();
            for j in 0..n {
                hv += matrix[(i, j)] * v[(j, k)];
            }
            worst = worst.max((hv - decomp.values()[k] * v[(i, k)]).abs());
        }
    }
    let _ = max_abs(matrix);
    worst
}

/// Largest deviation of V^T V from the identity.
pub fn orthonormality_residual<T: Real>(decomp: &EigenDecomposition<T>) -> T {
    let n = decomp.dim();
    let v = decomp.vectors();
    let mut worst = T::zero();
    for a in 0..n {
        for b in a..n {
            let mut dot = T::zero();
            for i in 0..n {
                dot += v[(i, a)] * v[(i, b)];
            }
            let target = if a == b { T::one() } else { T::zero() };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}
