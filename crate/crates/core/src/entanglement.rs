//! Two-qubit reduced density matrices and the Wootters concurrence.
//!
//! Densities are 4x4 Hermitian in the basis |11>, |10>, |01>, |00> with the
//! first slot belonging to the first site of the pair. The concurrence is
//! C = max{l1 - l2 - l3 - l4, 0}, the l_i being the descending square roots
//! of the eigenvalues of rho * rho_tilde with
//! rho_tilde = (sigma_y x sigma_y) rho^* (sigma_y x sigma_y).
//!
//! Those eigenvalues are evaluated through the Hermitian similarity
//! sqrt(rho_tilde) rho sqrt(rho_tilde), which shares the spectrum of the
//! plain product but keeps it real and stable: spurious eigenvalue mass of
//! order machine-epsilon would otherwise enter the square roots amplified to
//! ~1e-8 and dominate the concurrence of weakly entangled states.

use std::collections::HashMap;

use ndarray::{Array1, Array2};
use num_complex::Complex;
use rayon::prelude::*;

use crate::chain::{sector_hamiltonian, ChainSpec};
use crate::error::{Error, Result};
use crate::float::{real, Real};
use crate::spectral::{eigh, SectorState};

/// Signs of the sigma_y x sigma_y antidiagonal in the declared basis order.
const SPIN_FLIP_SIGNS: [i8; 4] = [-1, 1, 1, -1];

/// Eigenvalues of rho*rho_tilde below this (relative) floor are treated as
/// exact zeros before the square root; see module docs.
const EIGENVALUE_SNAP_RTOL: f64 = 1e-14;

/// Reduced density matrix of a site pair.
#[derive(Clone, Debug)]
pub struct TwoQubitDensity<T> {
    matrix: Array2<Complex<T>>,
}

impl<T: Real> TwoQubitDensity<T> {
    /// Validate and wrap a 4x4 density matrix: Hermitian to 1e-12, unit trace
    /// to 1e-10, eigenvalues above -1e-10.
    pub fn from_matrix(matrix: Array2<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != 4 || matrix.ncols() != 4 {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_tol = real::<T>(1e-12).max(T::epsilon() * real(64.0));
        for i in 0..4 {
            for j in i..4 {
                let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if dev > herm_tol {
                    return Err(Error::InvalidArgument(format!(
                        "density matrix not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        let trace: Complex<T> = (0..4).map(|i| matrix[(i, i)]).fold(
            Complex::new(T::zero(), T::zero()),
            |acc, x| acc + x,
        );
        let trace_tol = real::<T>(1e-10).max(T::epsilon() * real(256.0));
        if (trace - Complex::new(T::one(), T::zero())).norm() > trace_tol {
            return Err(Error::InvalidArgument("density matrix trace is not 1".into()));
        }
        let (values, _) = hermitian_eigh(&matrix);
        let psd_floor = -real::<T>(1e-10);
        if values.iter().any(|&v| v < psd_floor) {
            return Err(Error::InvalidArgument(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(TwoQubitDensity { matrix })
    }

    pub(crate) fn new_unchecked(matrix: Array2<Complex<T>>) -> Self {
        TwoQubitDensity { matrix }
    }

    pub fn matrix(&self) -> &Array2<Complex<T>> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4)
            .map(|i| self.matrix[(i, i)])
            .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
    }
}

/// Reduced density matrix of the (distinct, 1-based) `pair` in `state`,
/// tracing out every other site.
pub fn reduced_density<T: Real>(
    state: &SectorState<T>,
    pair: (usize, usize),
) -> Result<TwoQubitDensity<T>> {
    let length = state.basis().length();
    let (a, b) = pair;
    for site in [a, b] {
        if site < 1 || site > length {
            return Err(Error::InvalidArgument(format!(
                "site {site} outside 1..={length}"
            )));
        }
    }
    if a == b {
        return Err(Error::InvalidArgument("pair sites must be distinct".into()));
    }
    let mask_a = 1u32 << (a - 1);
    let mask_b = 1u32 << (b - 1);
    let zero = Complex::new(T::zero(), T::zero());

    // Group amplitudes by environment configuration; only states sharing an
    // environment interfere. Slots are kept in first-seen order so the
    // accumulation is deterministic.
    let mut slot_of: HashMap<u32, usize> = HashMap::new();
    let mut groups: Vec<[Complex<T>; 4]> = Vec::new();
    for (i, s) in state.basis().states().iter().enumerate() {
        let bits = s.bits();
        let env = bits & !(mask_a | mask_b);
        let occ_a = (bits & mask_a != 0) as usize;
        let occ_b = (bits & mask_b != 0) as usize;
        let row = (1 - occ_a) * 2 + (1 - occ_b);
        let slot = *slot_of.entry(env).or_insert_with(|| {
            groups.push([zero; 4]);
            groups.len() - 1
        });
        groups[slot][row] = state.amplitudes()[i];
    }

    let mut rho = Array2::from_elem((4, 4), zero);
    for v in &groups {
        for r in 0..4 {
            if v[r] == zero {
                continue;
            }
            for c in 0..4 {
                rho[(r, c)] = rho[(r, c)] + v[r] * v[c].conj();
            }
        }
    }
    Ok(TwoQubitDensity::new_unchecked(rho))
}

/// The time-reversed matrix: complex conjugation followed by the
/// sigma_y x sigma_y sandwich. An exact signed index reversal.
pub fn spin_flip<T: Real>(rho: &TwoQubitDensity<T>) -> TwoQubitDensity<T> {
    let m = &rho.matrix;
    let mut out = Array2::from_elem((4, 4), Complex::new(T::zero(), T::zero()));
    for i in 0..4 {
        for j in 0..4 {
            let sign = SPIN_FLIP_SIGNS[i] * SPIN_FLIP_SIGNS[j];
            let v = m[(3 - i, 3 - j)].conj();
            out[(i, j)] = if sign > 0 { v } else { -v };
        }
    }
    TwoQubitDensity::new_unchecked(out)
}

/// Wootters concurrence of `rho`, clamped to [0, 1].
pub fn concurrence<T: Real>(rho: &TwoQubitDensity<T>) -> Result<T> {
    let flipped = spin_flip(rho);

    // sqrt(rho_tilde) from its eigendecomposition
    let (mu, u) = hermitian_eigh(&flipped.matrix);
    validate_spectrum(&mu)?;
    let mut w = Array2::from_elem((4, 4), Complex::new(T::zero(), T::zero()));
    for k in 0..4 {
        let root = mu[k].max(T::zero()).sqrt();
        if root == T::zero() {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                w[(i, j)] = w[(i, j)] + u[(i, k)] * u[(j, k)].conj() * root;
            }
        }
    }

    // sqrt(rho_tilde) rho sqrt(rho_tilde): Hermitian, spectrum of rho*rho_tilde
    let m = w.dot(&rho.matrix).dot(&w);
    let (nu, _) = hermitian_eigh(&m);
    validate_spectrum(&nu)?;

    let top = nu.iter().fold(T::zero(), |acc, &v| acc.max(v));
    let snap = real::<T>(EIGENVALUE_SNAP_RTOL) * T::one().max(top);
    let mut lambdas: Vec<T> = nu
        .iter()
        .map(|&v| if v < snap { T::zero() } else { v.sqrt() })
        .collect();
    lambdas.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()).min(T::one()))
}

fn validate_spectrum<T: Real>(values: &[T]) -> Result<()> {
    let hard_floor = -real::<T>(1e-8);
    for &v in values {
        if v < hard_floor {
            return Err(Error::Numeric(format!(
                "density product eigenvalue {:e} below tolerance; malformed density matrix",
                v.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    Ok(())
}

/// Entanglement of formation from the concurrence:
/// E_F = h((1 + sqrt(1 - C^2))/2) with h the binary entropy.
pub fn entanglement_of_formation<T: Real>(concurrence: T) -> Result<T> {
    if !(concurrence >= T::zero() && concurrence <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "concurrence {concurrence} outside [0, 1]"
        )));
    }
    let half = real::<T>(0.5);
    let x = half * (T::one() + (T::one() - concurrence * concurrence).sqrt());
    Ok(binary_entropy(x))
}

fn binary_entropy<T: Real>(x: T) -> T {
    let ln2 = T::LN_2();
    let term = |p: T| {
        if p <= T::zero() {
            T::zero()
        } else {
            -p * p.ln() / ln2
        }
    };
    term(x) + term(T::one() - x)
}

/// Result of scanning all eigenstates of one sector for the largest
/// defect-pair concurrence.
#[derive(Clone, Debug)]
pub struct MaxConcurrence<T> {
    /// The largest concurrence found.
    pub concurrence: T,
    /// Index of the maximizing eigenstate (ascending-energy order).
    pub eigenstate_index: usize,
    /// Its eigenvalue.
    pub energy: T,
    /// True when the maximizer sits in a near-degenerate cluster, where the
    /// eigenvector (and hence this value) is solver-dependent.
    pub degenerate: bool,
}

/// Evaluate the concurrence of `pair` in every eigenstate of the sector with
/// `excitations` spins up and return the maximum. Exact ties resolve toward
/// the lower-energy state.
pub fn max_concurrence_over_eigenstates<T: Real>(
    spec: &ChainSpec<T>,
    excitations: usize,
    pair: (usize, usize),
) -> Result<MaxConcurrence<T>> {
    let h = sector_hamiltonian(spec, excitations)?;
    let decomp = eigh(h.matrix())?;
    let basis = h.basis();
    let dim = decomp.dim();

    let concurrences: Vec<T> = (0..dim)
        .into_par_iter()
        .map(|k| {
            let amplitudes: Array1<Complex<T>> = decomp
                .vector(k)
                .iter()
                .map(|&x| Complex::new(x, T::zero()))
                .collect();
            let state = SectorState::new_unchecked(basis.clone(), amplitudes);
            let rho = reduced_density(&state, pair)?;
            concurrence(&rho)
        })
        .collect::<Result<Vec<T>>>()?;

    let mut best = 0usize;
    for k in 1..dim {
        if concurrences[k] > concurrences[best] {
            best = k;
        }
    }
    let flags = decomp.degenerate_flags();
    Ok(MaxConcurrence {
        concurrence: concurrences[best],
        eigenstate_index: best,
        energy: decomp.values()[best],
        degenerate: flags[best],
    })
}

/// Eigendecomposition of an n x n complex Hermitian matrix by cyclic Jacobi
/// with unitary plane rotations. Returns ascending eigenvalues and the
/// unitary of column eigenvectors. Intended for the 4x4 matrices here; cost
/// grows as n^4.
pub(crate) fn hermitian_eigh<T: Real>(
    matrix: &Array2<Complex<T>>,
) -> (Vec<T>, Array2<Complex<T>>) {
    let n = matrix.nrows();
    let mut a = matrix.clone();
    let mut v = Array2::from_elem((n, n), Complex::new(T::zero(), T::zero()));
    for i in 0..n {
        v[(i, i)] = Complex::new(T::one(), T::zero());
    }

    let scale = matrix
        .iter()
        .fold(T::zero(), |acc, x| acc.max(x.norm()))
        .max(T::min_positive_value());
    let stop = T::epsilon() * scale * real::<T>(n as f64);

    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= stop * real::<T>(1e-3) {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (real::<T>(2.0) * mag);
                let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // unitary R: R[p,p]=c, R[p,q]=s, R[q,p]=-s*conj(phase), R[q,q]=c*conj(phase)
                let sp = phase.conj() * s;
                let cp = phase.conj() * c;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * sp;
                    a[(i, q)] = aip * s + aiq * cp;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * sp.conj();
                    a[(q, j)] = apj * s + aqj * cp.conj();
                }
                // rounding can leave a residual in the zeroed entry
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * sp;
                    v[(i, q)] = vip * s + viq * cp;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite"));
    let values: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Array2::from_elem((n, n), Complex::new(T::zero(), T::zero()));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&v.column(src));
    }
    (values, vectors)
}
