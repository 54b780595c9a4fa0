//! Closed-form and semi-analytic solutions in the strong-defect limit.
//!
//! With the defect shift d much larger than the hopping J, the periodic
//! chain decouples into the two-site defect segment and an open chain of
//! L-2 ordinary qubits. That makes the one-excitation defect doublet, the
//! two-excitation defect band (exactly at Delta = 0, approximately via a
//! boundary-value problem for 0 < Delta < d/J), the cluster Bell states at
//! large Delta, and the perturbative two-level register dynamics all
//! solvable in closed form.

use std::sync::Arc;

use ndarray::Array1;
use num_complex::Complex;

use crate::basis::{enumerate_sector, register_from_sites};
use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::float::{real, Real};
use crate::spectral::SectorState;

/// Bisection refinement target for roots of the beta equation.
const BETA_RESIDUAL_TOL: f64 = 1e-10;

/// Parameters of the nearest-neighbor defect-pair problem.
#[derive(Clone, Debug)]
pub struct DBandModel<T> {
    /// Chain length L >= 6; the analytic forms need a nontrivial open chain.
    pub length: usize,
    /// First defect site n0; the pair is (n0, n0+1) with periodic wrap.
    pub first_defect: usize,
    /// Hopping integral J.
    pub hopping: T,
    /// Anisotropy Delta.
    pub anisotropy: T,
    /// Ordinary level spacing.
    pub level_spacing: T,
    /// Defect shift d.
    pub defect_shift: T,
}

impl<T: Real> DBandModel<T> {
    pub fn new(
        length: usize,
        first_defect: usize,
        hopping: T,
        anisotropy: T,
        level_spacing: T,
        defect_shift: T,
    ) -> Result<Self> {
        if length < 6 {
            return Err(Error::InvalidArgument(format!(
                "defect-band analytics require L >= 6, got {length}"
            )));
        }
        if first_defect < 1 || first_defect > length {
            return Err(Error::InvalidArgument(format!(
                "defect site {first_defect} outside 1..={length}"
            )));
        }
        if !(hopping > T::zero()) {
            return Err(Error::InvalidArgument("hopping J must be positive".into()));
        }
        if anisotropy < T::zero() || defect_shift < T::zero() {
            return Err(Error::InvalidArgument(
                "anisotropy and defect shift must be nonnegative".into(),
            ));
        }
        Ok(DBandModel {
            length,
            first_defect,
            hopping,
            anisotropy,
            level_spacing,
            defect_shift,
        })
    }

    /// Model for a chain spec whose defects are periodic nearest neighbors.
    pub fn from_chain(spec: &ChainSpec<T>) -> Result<Self> {
        let (a, b) = spec.defect_sites;
        let wraps = |x: usize| x % spec.length + 1;
        let n0 = if wraps(a) == b {
            a
        } else if wraps(b) == a {
            b
        } else {
            return Err(Error::InvalidArgument(format!(
                "defect sites ({a},{b}) are not nearest neighbors"
            )));
        };
        Self::new(
            spec.length,
            n0,
            spec.hopping,
            spec.anisotropy,
            spec.level_spacing,
            spec.defect_shift,
        )
    }

    /// 1-based site for a possibly-wrapped position.
    fn site(&self, pos: usize) -> usize {
        (pos - 1) % self.length + 1
    }

    /// Second defect site.
    pub fn second_defect(&self) -> usize {
        self.site(self.first_defect + 1)
    }

    /// The equivalent chain parameters, defects on (n0, n0+1).
    pub fn chain_spec(&self) -> ChainSpec<T> {
        ChainSpec::new(
            self.length,
            self.hopping,
            self.anisotropy,
            self.level_spacing,
            self.defect_shift,
            (self.first_defect, self.second_defect()),
        )
        .expect("model invariants imply a valid spec")
    }

    /// One-excitation band center eps1 = eps - J*Delta.
    pub fn eps1(&self) -> T {
        self.level_spacing - self.hopping * self.anisotropy
    }

    /// Two-excitation band base eps2 = 2 eps - 2 J*Delta.
    pub fn eps2(&self) -> T {
        real::<T>(2.0) * (self.level_spacing - self.hopping * self.anisotropy)
    }
}

/// The two one-excitation defect states [phi(n0) +/- phi(n0+1)]/sqrt(2) with
/// energies eps1 + d +/- J/2; the symmetric combination carries +J/2.
pub fn one_excitation_defect_states<T: Real>(
    model: &DBandModel<T>,
) -> Result<[(SectorState<T>, T); 2]> {
    let basis = Arc::new(enumerate_sector(model.length, 1)?);
    let site_a = model.first_defect;
    let site_b = model.second_defect();
    let idx_a = basis.rank(register_from_sites(model.length, &[site_a])?)?;
    let idx_b = basis.rank(register_from_sites(model.length, &[site_b])?)?;
    let inv_sqrt2 = T::one() / real::<T>(2.0).sqrt();
    let zero = Complex::new(T::zero(), T::zero());
    let base = model.eps1() + model.defect_shift;
    let half_j = model.hopping / real(2.0);

    let build = |sign: T| {
        let mut amps = Array1::from_elem(basis.dim(), zero);
        amps[idx_a] = Complex::new(inv_sqrt2, T::zero());
        amps[idx_b] = Complex::new(sign * inv_sqrt2, T::zero());
        SectorState::new_unchecked(basis.clone(), amps)
    };
    Ok([
        (build(T::one()), base + half_j),
        (build(-T::one()), base - half_j),
    ])
}

/// Build a normalized two-excitation sector state from weights on the
/// registers phi(n0, m) and phi(n0+1, m), m = n0+2 .. n0+L-1.
fn dband_state_from_weights<T: Real>(
    model: &DBandModel<T>,
    weight_first: &[T],
    weight_second: &[T],
) -> Result<SectorState<T>> {
    let basis = Arc::new(enumerate_sector(model.length, 2)?);
    let mut amps = Array1::from_elem(basis.dim(), Complex::new(T::zero(), T::zero()));
    let mut norm2 = T::zero();
    for (offset, (&wa, &wb)) in weight_first.iter().zip(weight_second).enumerate() {
        let m_site = model.site(model.first_defect + 2 + offset);
        let reg_a = register_from_sites(model.length, &[model.first_defect, m_site])?;
        let reg_b = register_from_sites(model.length, &[model.second_defect(), m_site])?;
        amps[basis.rank(reg_a)?] = Complex::new(wa, T::zero());
        amps[basis.rank(reg_b)?] = Complex::new(wb, T::zero());
        norm2 += wa * wa + wb * wb;
    }
    let inv = T::one() / norm2.sqrt();
    let amps = amps.mapv(|a| a * inv);
    Ok(SectorState::new_unchecked(basis, amps))
}

/// The 2(L-2) exact defect-band states at Delta = 0 with their energies
/// eps2 + d + J cos(pi k1/3) + J cos(pi k2/(L-1)).
pub fn dband_states_delta0<T: Real>(
    model: &DBandModel<T>,
) -> Result<Vec<(SectorState<T>, T)>> {
    if model.anisotropy != T::zero() {
        return Err(Error::InvalidArgument(format!(
            "exact defect-band states require Delta = 0, got {}",
            model.anisotropy
        )));
    }
    let l = model.length;
    let base = model.eps2() + model.defect_shift;
    let mut out = Vec::with_capacity(2 * (l - 2));
    for k1 in [1usize, 2] {
        let parity = if k1 % 2 == 1 { T::one() } else { -T::one() };
        let e_alpha = model.hopping * real::<T>((std::f64::consts::PI * k1 as f64 / 3.0).cos());
        for k2 in 1..=(l - 2) {
            let mut wa = Vec::with_capacity(l - 2);
            let mut wb = Vec::with_capacity(l - 2);
            for j in 1..=(l - 2) {
                // envelope sin[pi k2 (m - n0 - 1)/(L-1)] with m - n0 - 1 = j
                let env = real::<T>(
                    (std::f64::consts::PI * (k2 * j) as f64 / (l as f64 - 1.0)).sin(),
                );
                wa.push(env);
                wb.push(parity * env);
            }
            let e_beta = model.hopping
                * real::<T>((std::f64::consts::PI * k2 as f64 / (l as f64 - 1.0)).cos());
            let state = dband_state_from_weights(model, &wa, &wb)?;
            out.push((state, base + e_alpha + e_beta));
        }
    }
    Ok(out)
}

/// A solution of 2 Delta sin[beta (L-2)] = sin[beta (L-1)] in (0, pi).
#[derive(Clone, Copy, Debug)]
pub struct BetaRoot<T> {
    pub beta: T,
    /// Value of the defining equation at `beta`; at most 1e-10 in magnitude.
    pub residual: T,
}

fn beta_equation<T: Real>(length: usize, delta: T, beta: T) -> T {
    let lm2 = real::<T>((length - 2) as f64);
    let lm1 = real::<T>((length - 1) as f64);
    real::<T>(2.0) * delta * (beta * lm2).sin() - (beta * lm1).sin()
}

/// All real roots of the boundary-condition equation in the open interval
/// (0, pi), located by sign-change scanning on a 100*L grid and refined by
/// bisection. Fewer than L-2 roots is a legal outcome (bound-state roots
/// leave the real interval); the caller sees the count.
pub fn solve_beta<T: Real>(length: usize, delta: T) -> Result<Vec<BetaRoot<T>>> {
    if length < 6 {
        return Err(Error::InvalidArgument(format!(
            "beta equation needs L >= 6, got {length}"
        )));
    }
    if !(delta > T::zero()) {
        return Err(Error::InvalidArgument(
            "beta equation applies for Delta > 0".into(),
        ));
    }
    let f = |beta: T| beta_equation(length, delta, beta);
    let n_grid = 100 * length;
    let pi = T::PI();
    let h = pi / real::<T>(n_grid as f64);
    let tol = real::<T>(BETA_RESIDUAL_TOL);

    let mut roots = Vec::new();
    let mut x0 = h;
    let mut f0 = f(x0);
    for i in 2..n_grid {
        let x1 = h * real::<T>(i as f64);
        let f1 = f(x1);
        if f0 == T::zero() {
            roots.push(BetaRoot { beta: x0, residual: f0 });
        } else if f0 * f1 < T::zero() {
            let (mut a, mut b) = (x0, x1);
            let (mut fa, _fb) = (f0, f1);
            let mut mid = (a + b) / real(2.0);
            for _ in 0..200 {
                mid = (a + b) / real(2.0);
                let fm = f(mid);
                if fm.abs() <= tol {
                    break;
                }
                if fa * fm <= T::zero() {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            let residual = f(mid);
            if residual.abs() <= tol {
                roots.push(BetaRoot { beta: mid, residual });
            }
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

/// The scattering-shape amplitude S(x) = 2 Delta sin[beta (x-1)] - sin[beta x].
pub fn shape_s<T: Real>(x: i64, beta: T, delta: T) -> T {
    let xm1 = real::<T>((x - 1) as f64);
    let x = real::<T>(x as f64);
    real::<T>(2.0) * delta * (beta * xm1).sin() - (beta * x).sin()
}

/// Approximate lowest defect-band state for 0 < Delta < d/J.
#[derive(Clone, Debug)]
pub struct DBandGround<T> {
    /// The approximate eigenstate built from S(x) weights.
    pub state: SectorState<T>,
    /// Analytic energy eps2 + d + J cos(2 pi/3) + J cos(beta).
    pub energy: T,
    /// Closed-form maximum-concurrence estimate, at most 1, equal to 1 only
    /// in the Delta -> 0 limit.
    pub concurrence_estimate: T,
    /// The beta root used (largest real root, smallest cos beta).
    pub beta: BetaRoot<T>,
    /// Number of real roots found.
    pub root_count: usize,
}

/// Solve the boundary-value problem for the lowest defect-band state and its
/// concurrence estimate. Uses k1 = 2 (smallest cos alpha) and the real beta
/// root minimizing cos beta.
pub fn dband_ground_state<T: Real>(model: &DBandModel<T>) -> Result<DBandGround<T>> {
    let d_over_j = model.defect_shift / model.hopping;
    if !(model.anisotropy > T::zero() && model.anisotropy < d_over_j) {
        return Err(Error::InvalidArgument(format!(
            "S(x) branch requires 0 < Delta < d/J, got Delta={} d/J={}",
            model.anisotropy, d_over_j
        )));
    }
    let roots = solve_beta(model.length, model.anisotropy)?;
    let root = *roots
        .iter()
        .max_by(|a, b| a.beta.partial_cmp(&b.beta).expect("finite"))
        .ok_or_else(|| {
            Error::Degraded(format!(
                "no real beta root in (0, pi) for L={} Delta={}; cannot build the S(x) state",
                model.length, model.anisotropy
            ))
        })?;
    let l = model.length;
    let beta = root.beta;

    // weights S(n0+L-m) on phi(n0, m) and S(m-n0-1) on phi(n0+1, m)
    let mut wa = Vec::with_capacity(l - 2);
    let mut wb = Vec::with_capacity(l - 2);
    let mut norm2 = T::zero();
    let mut overlap = T::zero();
    for j in 1..=(l - 2) as i64 {
        // j = m - n0 - 1 runs 1..L-2; n0 + L - m = L - 1 - j
        let sa = shape_s(l as i64 - 1 - j, beta, model.anisotropy);
        let sb = shape_s(j, beta, model.anisotropy);
        norm2 += sa * sa + sb * sb;
        overlap += sa * sb;
        wa.push(sa);
        wb.push(sb);
    }
    let w = (overlap / norm2).abs(); // |A|^2 |s| with A^2 = 1/norm2
    let quarter = real::<T>(0.25);
    let concurrence_estimate =
        (w * w + w + quarter).sqrt() - (w * w - w + quarter).sqrt();

    let e_alpha = model.hopping * real::<T>((2.0 * std::f64::consts::PI / 3.0).cos());
    let energy = model.eps2() + model.defect_shift + e_alpha + model.hopping * beta.cos();
    let state = dband_state_from_weights(model, &wa, &wb)?;
    Ok(DBandGround {
        state,
        energy,
        concurrence_estimate,
        beta: root,
        root_count: roots.len(),
    })
}

/// Bell-type state with one excitation shared between the defects and a
/// bound cluster of N-1 excitations at least two sites away:
/// sum_m1 A sin[pi k2 (m1-n0-3)/(L-N-3)] (phi(n0, cluster) +/- phi(n0+1, cluster))/sqrt(2).
pub fn cluster_bell_state<T: Real>(
    length: usize,
    excitations: usize,
    first_defect: usize,
    k1: usize,
    k2: usize,
) -> Result<SectorState<T>> {
    if length < 6 || first_defect < 1 || first_defect > length {
        return Err(Error::InvalidArgument(format!(
            "need L >= 6 and 1 <= n0 <= L, got L={length}, n0={first_defect}"
        )));
    }
    if excitations < 2 {
        return Err(Error::InvalidArgument(
            "cluster states need at least two excitations".into(),
        ));
    }
    if k1 != 1 && k1 != 2 {
        return Err(Error::InvalidArgument(format!("k1 must be 1 or 2, got {k1}")));
    }
    if excitations - 1 > length - 6 {
        return Err(Error::InvalidArgument(format!(
            "cluster does not fit: N-1 <= L-6 violated (N-1={}, L-6={})",
            excitations - 1,
            length as i64 - 6
        )));
    }
    let k2_max = length - excitations - 4;
    if k2 < 1 || k2 > k2_max {
        return Err(Error::InvalidArgument(format!(
            "k2 must lie in 1..={k2_max}, got {k2}"
        )));
    }

    let basis = Arc::new(enumerate_sector(length, excitations)?);
    let site = |pos: usize| (pos - 1) % length + 1;
    let second_defect = site(first_defect + 1);
    let parity = if k1 % 2 == 1 { T::one() } else { -T::one() };
    let mut amps = Array1::from_elem(basis.dim(), Complex::new(T::zero(), T::zero()));
    let mut norm2 = T::zero();
    let span = length - excitations - 3;
    for m1 in (first_defect + 4)..=(first_defect + length - excitations - 1) {
        let env = real::<T>(
            (std::f64::consts::PI * (k2 * (m1 - first_defect - 3)) as f64 / span as f64).sin(),
        );
        let cluster: Vec<usize> = (0..excitations - 1).map(|j| site(m1 + j)).collect();
        let mut sites_a = vec![first_defect];
        sites_a.extend_from_slice(&cluster);
        let mut sites_b = vec![second_defect];
        sites_b.extend_from_slice(&cluster);
        let reg_a = register_from_sites(length, &sites_a)?;
        let reg_b = register_from_sites(length, &sites_b)?;
        amps[basis.rank(reg_a)?] = Complex::new(env, T::zero());
        amps[basis.rank(reg_b)?] = Complex::new(parity * env, T::zero());
        norm2 += real::<T>(2.0) * env * env;
    }
    let inv = T::one() / norm2.sqrt();
    Ok(SectorState::new_unchecked(basis, amps.mapv(|a| a * inv)))
}

/// Closed-form two-level dynamics of a register with one excitation on a
/// defect and the rest frozen in a cluster.
#[derive(Clone, Debug)]
pub struct RabiDynamics<T> {
    pub times: Vec<T>,
    /// Probability of the register with the excitation on the first defect.
    pub p_first: Vec<T>,
    /// Probability of the register with the excitation on the second defect.
    pub p_second: Vec<T>,
    /// Doublet energies E+- = E_register +/- J/2.
    pub energy_plus: T,
    pub energy_minus: T,
}

/// First-order perturbation theory reduces the dynamics of
/// phi(n0, cluster) to a 2x2 block with off-diagonal J/2: the excitation
/// oscillates between the defects with period 2 pi/J and Bell states appear
/// at every odd multiple of pi/(2J).
pub fn rabi_dynamics<T: Real>(
    model: &DBandModel<T>,
    cluster: &[usize],
    times: &[T],
) -> Result<RabiDynamics<T>> {
    if cluster.is_empty() {
        return Err(Error::InvalidArgument("cluster must be nonempty".into()));
    }
    let site = |pos: usize| (pos - 1) % model.length + 1;
    // one-site buffers around both defects
    let forbidden = [
        site(model.first_defect + model.length - 1),
        model.first_defect,
        model.second_defect(),
        site(model.first_defect + 2),
    ];
    for &s in cluster {
        if s < 1 || s > model.length {
            return Err(Error::InvalidArgument(format!(
                "cluster site {s} outside 1..={}",
                model.length
            )));
        }
        if forbidden.contains(&s) {
            return Err(Error::InvalidArgument(format!(
                "cluster site {s} touches the defect pair or its one-site buffer"
            )));
        }
    }
    let spec = model.chain_spec();
    let mut sites_a = vec![model.first_defect];
    sites_a.extend_from_slice(cluster);
    let reg = register_from_sites(model.length, &sites_a)?;
    let e_register = spec.diagonal_energy(reg);
    let half_j = model.hopping / real(2.0);
    let energy_plus = e_register + half_j;
    let energy_minus = e_register - half_j;
    let rabi = energy_plus - energy_minus;

    let half = real::<T>(0.5);
    let mut p_first = Vec::with_capacity(times.len());
    let mut p_second = Vec::with_capacity(times.len());
    for &t in times {
        let c = (rabi * t).cos();
        p_first.push(half * (T::one() + c));
        p_second.push(half * (T::one() - c));
    }
    Ok(RabiDynamics {
        times: times.to_vec(),
        p_first,
        p_second,
        energy_plus,
        energy_minus,
    })
}

/// Probability that exactly one excitation sits on the pair. The defect band
/// is identified numerically by this probability exceeding 1/2.
pub fn single_occupancy_probability<T: Real>(
    state: &SectorState<T>,
    pair: (usize, usize),
) -> T {
    let mut p = T::zero();
    for (i, s) in state.basis().states().iter().enumerate() {
        let occ = s.is_occupied(pair.0) as usize + s.is_occupied(pair.1) as usize;
        if occ == 1 {
            p += state.amplitudes()[i].norm_sqr();
        }
    }
    p
}

/// Overlap magnitude |<a|b>| between two states of the same sector.
pub fn overlap<T: Real>(a: &SectorState<T>, b: &SectorState<T>) -> Result<T> {
    if a.basis().dim() != b.basis().dim() {
        return Err(Error::InvalidArgument(
            "overlap requires states from the same sector".into(),
        ));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes().iter()) {
        acc = acc + x.conj() * *y;
    }
    Ok(acc.norm())
}
