//! Exact diagonalization and analytic solutions for a periodic XXZ spin-1/2
//! chain with two elevated "defect" qubits, measuring the entanglement
//! (Wootters concurrence) between the defects.

pub mod basis;
pub mod bethe;
pub mod chain;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod float;
pub mod spectral;

pub use basis::{
    binomial, enumerate_sector, occupied_sites, register_from_sites, register_label, BasisState,
    SectorBasis,
};
pub use bethe::{
    cluster_bell_state, dband_ground_state, dband_states_delta0, one_excitation_defect_states,
    rabi_dynamics, shape_s, solve_beta, BetaRoot, DBandGround, DBandModel, RabiDynamics,
};
pub use chain::{build_sector_hamiltonian, full_hamiltonian, sector_hamiltonian, ChainSpec,
    SectorHamiltonian};
pub use entanglement::{
    concurrence, entanglement_of_formation, max_concurrence_over_eigenstates, reduced_density,
    spin_flip, MaxConcurrence, TwoQubitDensity,
};
pub use error::{Error, Result};
pub use experiments::{
    compare_numeric_analytic, evolve_registers, find_bell_instants, oracle_full_vs_sector,
    sweep_cmax, ComparisonRow, DynamicsRow, SweepRow,
};
pub use float::Real;
pub use spectral::{eigh, evolve_state, register_probability, EigenDecomposition, SectorState};

/// Concrete `f64` aliases for the common case.
pub type ChainSpec64 = ChainSpec<f64>;
pub type SectorHamiltonian64 = SectorHamiltonian<f64>;
pub type EigenDecomposition64 = EigenDecomposition<f64>;
pub type SectorState64 = SectorState<f64>;
