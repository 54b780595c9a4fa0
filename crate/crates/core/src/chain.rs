//! XXZ chain parameters and sector Hamiltonian assembly.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = sum_n  eps_n/2 sigma_n^z
//!   + J*Delta/4 sum_n sigma_n^z sigma_{n+1}^z
//!   + J/2 sum_n (exchange of up/down on bond n,n+1)
//! ```
//!
//! on a periodic chain (site L+1 = site 1), shifted by the all-down ground
//! state energy `E0 = -(L*eps + 2d)/2 + L*J*Delta/4` so the vacuum sits at
//! zero. Two defect sites carry level spacing `eps + d`; the hopping matrix
//! element between exchange-related configurations is `J/2`.

use std::sync::Arc;

use ndarray::Array2;

use crate::basis::{enumerate_sector, BasisState, SectorBasis};
use crate::error::{Error, Result};
use crate::float::{real, Real};

/// Largest dense sector the builder will materialize (924 is the largest
/// dimension used in practice, at L=12, N=6).
pub const MAX_SECTOR_DIM: usize = 2048;

/// Largest chain for which the full 2^L Hamiltonian may be built.
pub const MAX_FULL_SITES: usize = 12;

/// Physical parameters of a periodic chain with two elevated defect sites.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec<T> {
    /// Number of sites L.
    pub length: usize,
    /// Hopping integral J > 0; the energy unit.
    pub hopping: T,
    /// Dimensionless anisotropy Delta >= 0.
    pub anisotropy: T,
    /// Level spacing of ordinary qubits.
    pub level_spacing: T,
    /// Defect level shift d >= 0.
    pub defect_shift: T,
    /// The two defect sites, 1-based, distinct.
    pub defect_sites: (usize, usize),
}

impl<T: Real> ChainSpec<T> {
    pub fn new(
        length: usize,
        hopping: T,
        anisotropy: T,
        level_spacing: T,
        defect_shift: T,
        defect_sites: (usize, usize),
    ) -> Result<Self> {
        if length == 0 || length > crate::basis::MAX_SITES {
            return Err(Error::InvalidArgument(format!(
                "chain length {length} outside 1..={}",
                crate::basis::MAX_SITES
            )));
        }
        if !(hopping > T::zero()) {
            return Err(Error::InvalidArgument("hopping J must be positive".into()));
        }
        if anisotropy < T::zero() {
            return Err(Error::InvalidArgument(
                "anisotropy Delta must be nonnegative".into(),
            ));
        }
        if defect_shift < T::zero() {
            return Err(Error::InvalidArgument(
                "defect shift d must be nonnegative".into(),
            ));
        }
        let (a, b) = defect_sites;
        for site in [a, b] {
            if site < 1 || site > length {
                return Err(Error::InvalidArgument(format!(
                    "defect site {site} outside 1..={length}"
                )));
            }
        }
        if a == b {
            return Err(Error::InvalidArgument("defect sites must be distinct".into()));
        }
        Ok(ChainSpec {
            length,
            hopping,
            anisotropy,
            level_spacing,
            defect_shift,
            defect_sites,
        })
    }

    /// Defaults used throughout: J = 1, eps = 0, d = 10, defects (1,2).
    pub fn with_defaults(length: usize, anisotropy: T) -> Result<Self> {
        Self::new(
            length,
            T::one(),
            anisotropy,
            T::zero(),
            real(10.0),
            (1, 2),
        )
    }

    pub fn is_defect(&self, site: usize) -> bool {
        site == self.defect_sites.0 || site == self.defect_sites.1
    }

    /// Per-site level spacings: `eps` everywhere, `eps + d` on the defects.
    pub fn site_fields(&self) -> Vec<T> {
        (1..=self.length)
            .map(|site| {
                if self.is_defect(site) {
                    self.level_spacing + self.defect_shift
                } else {
                    self.level_spacing
                }
            })
            .collect()
    }

    /// Ground-state offset E0 for the all-down configuration.
    fn ground_energy(&self) -> T {
        let l = real::<T>(self.length as f64);
        let two = real::<T>(2.0);
        let four = real::<T>(4.0);
        -(l * self.level_spacing + two * self.defect_shift) / two
            + l * self.hopping * self.anisotropy / four
    }

    /// Classical (diagonal) energy of a configuration, ground-state shifted.
    pub fn diagonal_energy(&self, state: BasisState) -> T {
        let fields = self.site_fields();
        let two = real::<T>(2.0);
        let four = real::<T>(4.0);
        let mut field_sum = T::zero();
        let mut ising_sum = T::zero();
        for site in 1..=self.length {
            let s = if state.is_occupied(site) { T::one() } else { -T::one() };
            field_sum += fields[site - 1] / two * s;
            let next = site % self.length + 1;
            let sn = if state.is_occupied(next) { T::one() } else { -T::one() };
            ising_sum += self.hopping * self.anisotropy / four * s * sn;
        }
        field_sum + ising_sum - self.ground_energy()
    }
}

/// Dense real-symmetric Hamiltonian block of one magnetization sector.
#[derive(Clone, Debug)]
pub struct SectorHamiltonian<T> {
    basis: Arc<SectorBasis>,
    matrix: Array2<T>,
}

impl<T: Real> SectorHamiltonian<T> {
    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Assemble the sector Hamiltonian: diagonal from [`ChainSpec::diagonal_energy`],
/// `J/2` between configurations related by one periodic-bond exchange.
pub fn build_sector_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    basis: Arc<SectorBasis>,
) -> Result<SectorHamiltonian<T>> {
    if basis.length() != spec.length {
        return Err(Error::InvalidArgument(format!(
            "basis built for L={} but spec has L={}",
            basis.length(),
            spec.length
        )));
    }
    let dim = basis.dim();
    if dim > MAX_SECTOR_DIM {
        return Err(Error::Resource(format!(
            "sector dimension {dim} exceeds cap {MAX_SECTOR_DIM}"
        )));
    }
    let half_hop = spec.hopping / real(2.0);
    let mut matrix = Array2::zeros((dim, dim));
    for (i, &state) in basis.states().iter().enumerate() {
        matrix[(i, i)] = spec.diagonal_energy(state);
        for site in 1..=spec.length {
            let next = site % spec.length + 1;
            if state.is_occupied(site) != state.is_occupied(next) {
                let partner = state.swapped(site, next);
                let j = basis.rank(partner).expect("exchange stays in sector");
                if j > i {
                    matrix[(i, j)] = half_hop;
                    matrix[(j, i)] = half_hop;
                }
            }
        }
    }
    Ok(SectorHamiltonian { basis, matrix })
}

/// Brute-force 2^L Hamiltonian over the unrestricted configuration space,
/// basis ordered by bitmask value. Oracle for sector-block consistency.
pub fn full_hamiltonian<T: Real>(spec: &ChainSpec<T>) -> Result<Array2<T>> {
    if spec.length > MAX_FULL_SITES {
        return Err(Error::Resource(format!(
            "full Hamiltonian limited to L<={MAX_FULL_SITES}, got {}",
            spec.length
        )));
    }
    let dim = 1usize << spec.length;
    let half_hop = spec.hopping / real(2.0);
    let mut matrix = Array2::zeros((dim, dim));
    for bits in 0..dim as u32 {
        let state = BasisState::from_bits(bits);
        let i = bits as usize;
        matrix[(i, i)] = spec.diagonal_energy(state);
        for site in 1..=spec.length {
            let next = site % spec.length + 1;
            if state.is_occupied(site) != state.is_occupied(next) {
                let j = state.swapped(site, next).bits() as usize;
                if j > i {
                    matrix[(i, j)] = half_hop;
                    matrix[(j, i)] = half_hop;
                }
            }
        }
    }
    Ok(matrix)
}

/// Convenience: enumerate the sector and build its Hamiltonian.
pub fn sector_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    excitations: usize,
) -> Result<SectorHamiltonian<T>> {
    let basis = Arc::new(enumerate_sector(spec.length, excitations)?);
    build_sector_hamiltonian(spec, basis)
}
