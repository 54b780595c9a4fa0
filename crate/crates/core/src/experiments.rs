//! Reproduction drivers: concurrence-vs-anisotropy sweeps, register
//! dynamics with Bell-instant detection, numeric-vs-analytic comparison
//! tables, and the full-space spectral oracle.

use rayon::prelude::*;

use crate::basis::{register_from_sites, register_label, BasisState};
use crate::bethe::{dband_ground_state, dband_states_delta0, overlap, single_occupancy_probability, DBandModel};
use crate::chain::{full_hamiltonian, sector_hamiltonian, ChainSpec};
use crate::entanglement::{concurrence, max_concurrence_over_eigenstates, reduced_density};
use crate::error::{Error, Result};
use crate::float::{real, Real};
use crate::spectral::{eigh, evolve_state, register_probability, SectorState};

/// One point of a maximum-concurrence sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub delta: T,
    pub length: usize,
    pub excitations: usize,
    pub defect_first: usize,
    pub defect_second: usize,
    pub c_max: T,
    /// Energy of the maximizing eigenstate.
    pub energy: T,
    /// Its index in ascending-energy order.
    pub eig_index: usize,
    /// Maximizer sits in a near-degenerate cluster (value solver-dependent).
    pub degenerate: bool,
}

/// One (time, register) sample of an evolution run.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsRow<T> {
    /// Time in units of 1/J.
    pub time: T,
    /// Register label, `phi(...)` form.
    pub register: String,
    pub probability: T,
    /// Defect-pair concurrence of the evolved state at this time.
    pub concurrence: T,
}

/// One anisotropy point of the numeric-vs-analytic comparison (N = 2).
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow<T> {
    pub delta: T,
    pub length: usize,
    /// Largest concurrence over all numeric eigenstates.
    pub numeric_cmax: T,
    /// Closed-form estimate from the lowest defect-band state.
    pub analytic_cmax: T,
    /// Energy of the numeric defect-band ground state.
    pub numeric_energy: T,
    /// Analytic defect-band ground energy.
    pub analytic_energy: T,
    /// Overlap magnitude between the analytic state and its numeric partner.
    pub overlap: T,
}

/// Maximum-concurrence sweep over an anisotropy grid and excitation list.
///
/// `pair` places the defects and is the measured pair. Rows are emitted in
/// grid order (outer delta, inner excitation count) regardless of how the
/// parallel work completes.
pub fn sweep_cmax<T: Real>(
    template: &ChainSpec<T>,
    delta_grid: &[T],
    excitation_list: &[usize],
    pair: (usize, usize),
) -> Result<Vec<SweepRow<T>>> {
    if delta_grid.is_empty() || excitation_list.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs a nonempty delta grid and excitation list".into(),
        ));
    }
    let mut jobs = Vec::with_capacity(delta_grid.len() * excitation_list.len());
    for &delta in delta_grid {
        for &n in excitation_list {
            jobs.push((delta, n));
        }
    }
    jobs.par_iter()
        .map(|&(delta, n)| {
            let spec = ChainSpec::new(
                template.length,
                template.hopping,
                delta,
                template.level_spacing,
                template.defect_shift,
                pair,
            )?;
            let best = max_concurrence_over_eigenstates(&spec, n, pair)?;
            Ok(SweepRow {
                delta,
                length: spec.length,
                excitations: n,
                defect_first: pair.0,
                defect_second: pair.1,
                c_max: best.concurrence,
                energy: best.energy,
                eig_index: best.eigenstate_index,
                degenerate: best.degenerate,
            })
        })
        .collect()
}

/// Evolve `initial` (a register given by its occupied sites) and record the
/// probability of each tracked register plus the defect-pair concurrence on
/// the time grid. Rows appear time-major in grid order.
pub fn evolve_registers<T: Real>(
    spec: &ChainSpec<T>,
    initial_sites: &[usize],
    time_grid: &[T],
    tracked: &[Vec<usize>],
) -> Result<Vec<DynamicsRow<T>>> {
    if time_grid.is_empty() {
        return Err(Error::InvalidArgument("time grid must be nonempty".into()));
    }
    let initial = register_from_sites(spec.length, initial_sites)?;
    let h = sector_hamiltonian(spec, initial.excitations())?;
    let basis = h.basis().clone();
    let psi0 = SectorState::from_register(basis.clone(), initial)?;
    let decomp = eigh(h.matrix())?;

    let tracked_regs: Vec<(String, BasisState)> = tracked
        .iter()
        .map(|sites| {
            let reg = register_from_sites(spec.length, sites)?;
            basis.rank(reg)?; // membership check up front
            Ok((register_label(reg), reg))
        })
        .collect::<Result<_>>()?;

    let per_time: Vec<Vec<DynamicsRow<T>>> = time_grid
        .par_iter()
        .map(|&t| {
            let psi = evolve_state(&decomp, &psi0, t)?;
            let rho = reduced_density(&psi, spec.defect_sites)?;
            let c = concurrence(&rho)?;
            tracked_regs
                .iter()
                .map(|(label, reg)| {
                    Ok(DynamicsRow {
                        time: t,
                        register: label.clone(),
                        probability: register_probability(&psi, *reg)?,
                        concurrence: c,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_time.into_iter().flatten().collect())
}

/// Times at which the defect-pair concurrence peaks above `threshold`:
/// strict local maxima over three consecutive samples. Constant plateaus
/// and stationary states produce no instants.
pub fn find_bell_instants<T: Real>(rows: &[DynamicsRow<T>], threshold: T) -> Vec<T> {
    // one concurrence sample per time, in row order
    let mut series: Vec<(T, T)> = Vec::new();
    for row in rows {
        match series.last() {
            Some(&(t, _)) if t == row.time => {}
            _ => series.push((row.time, row.concurrence)),
        }
    }
    let mut instants = Vec::new();
    for w in series.windows(3) {
        let (_, prev) = w[0];
        let (t, here) = w[1];
        let (_, next) = w[2];
        if here >= threshold && here > prev && here > next {
            instants.push(t);
        }
    }
    instants
}

/// Per-anisotropy comparison of numerics against the defect-band analytics
/// for two excitations. Requires Delta < d/J on the positive-Delta branch;
/// Delta = 0 uses the exact band states.
pub fn compare_numeric_analytic<T: Real>(
    length: usize,
    deltas: &[T],
    defect_shift: T,
) -> Result<Vec<ComparisonRow<T>>> {
    deltas
        .par_iter()
        .map(|&delta| {
            let spec = ChainSpec::new(length, T::one(), delta, T::zero(), defect_shift, (1, 2))?;
            let model = DBandModel::from_chain(&spec)?;
            if !(delta < defect_shift / spec.hopping) {
                return Err(Error::InvalidArgument(format!(
                    "comparison requires Delta < d/J, got Delta={delta}"
                )));
            }

            let (analytic_state, analytic_energy, analytic_cmax) = if delta == T::zero() {
                // exact band: ground state is k1=2 (smallest cos alpha) with
                // the largest k2 (smallest cos beta); concurrence exactly 1
                let states = dband_states_delta0(&model)?;
                let (state, energy) = states
                    .into_iter()
                    .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
                    .expect("band is nonempty");
                (state, energy, T::one())
            } else {
                let g = dband_ground_state(&model)?;
                (g.state, g.energy, g.concurrence_estimate)
            };

            let h = sector_hamiltonian(&spec, 2)?;
            let decomp = eigh(h.matrix())?;
            let numeric_cmax = max_concurrence_over_eigenstates(&spec, 2, (1, 2))?.concurrence;

            // numeric defect-band ground state: lowest eigenstate with more
            // than half its weight on single defect occupancy
            let mut numeric_energy = T::nan();
            let mut ov = T::zero();
            let half = real::<T>(0.5);
            for k in 0..decomp.dim() {
                let state = SectorState::from_eigenvector(h.basis().clone(), &decomp, k)?;
                if single_occupancy_probability(&state, spec.defect_sites) > half {
                    numeric_energy = decomp.values()[k];
                    ov = overlap(&analytic_state, &state)?;
                    break;
                }
            }
            if numeric_energy.is_nan() {
                return Err(Error::Degraded(format!(
                    "no numeric defect-band state found at Delta={delta}"
                )));
            }
            Ok(ComparisonRow {
                delta,
                length,
                numeric_cmax,
                analytic_cmax,
                numeric_energy,
                analytic_energy,
                overlap: ov,
            })
        })
        .collect()
}

/// Compare the eigenvalue multiset of the full 2^L Hamiltonian against the
/// union of all sector spectra; returns the largest absolute mismatch after
/// sorted pairing.
pub fn oracle_full_vs_sector<T: Real>(spec: &ChainSpec<T>) -> Result<T> {
    if spec.length > 10 {
        return Err(Error::Resource(format!(
            "oracle limited to L <= 10, got {}",
            spec.length
        )));
    }
    let full = full_hamiltonian(spec)?;
    let full_decomp = eigh(&full)?;

    let mut sector_values: Vec<T> = Vec::with_capacity(1 << spec.length);
    for n in 0..=spec.length {
        let h = sector_hamiltonian(spec, n)?;
        let decomp = eigh(h.matrix())?;
        sector_values.extend_from_slice(decomp.values());
    }
    assert_eq!(sector_values.len(), 1 << spec.length);
    sector_values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    let worst = full_decomp
        .values()
        .iter()
        .zip(&sector_values)
        .map(|(a, &b)| (*a - b).abs())
        .fold(T::zero(), |acc, x| acc.max(x));
    Ok(worst)
}
