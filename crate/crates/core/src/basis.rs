//! Spin configurations and fixed-magnetization sector bases.
//!
//! A configuration of `L` spins is a bitmask: bit `n-1` set means site `n`
//! (1-based) carries an excitation (spin up). All public interfaces speak
//! 1-based site labels; bit positions are an internal detail.

use crate::error::{Error, Result};

/// Practical upper bound on the chain length. Dense sector matrices become
/// unusable long before the bitmask does, but `u32` storage pins this anyway.
pub const MAX_SITES: usize = 24;

/// One classical spin configuration (a quantum register when used as a ket).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisState(u32);

impl BasisState {
    /// All spins down.
    pub const VACUUM: BasisState = BasisState(0);

    pub fn from_bits(bits: u32) -> Self {
        BasisState(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Number of excitations.
    pub fn excitations(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Whether 1-based `site` carries an excitation.
    pub fn is_occupied(self, site: usize) -> bool {
        debug_assert!(site >= 1);
        self.0 >> (site - 1) & 1 == 1
    }

    /// Configuration with the spins on 1-based sites `a` and `b` exchanged.
    pub fn swapped(self, a: usize, b: usize) -> Self {
        let (ba, bb) = (self.is_occupied(a), self.is_occupied(b));
        if ba == bb {
            return self;
        }
        BasisState(self.0 ^ (1 << (a - 1)) ^ (1 << (b - 1)))
    }
}

/// Register with excitations pinned to the listed 1-based sites.
pub fn register_from_sites(length: usize, sites: &[usize]) -> Result<BasisState> {
    check_length(length)?;
    let mut bits = 0u32;
    for &site in sites {
        if site < 1 || site > length {
            return Err(Error::InvalidArgument(format!(
                "site {site} outside 1..={length}"
            )));
        }
        let mask = 1 << (site - 1);
        if bits & mask != 0 {
            return Err(Error::InvalidArgument(format!("duplicate site {site}")));
        }
        bits |= mask;
    }
    Ok(BasisState(bits))
}

/// Occupied 1-based sites, ascending. Inverse of [`register_from_sites`].
pub fn occupied_sites(state: BasisState) -> Vec<usize> {
    let mut bits = state.bits();
    let mut sites = Vec::with_capacity(state.excitations());
    while bits != 0 {
        sites.push(bits.trailing_zeros() as usize + 1);
        bits &= bits - 1;
    }
    sites
}

/// Text label `phi(1,6,7,8)` used for registers in all file output.
pub fn register_label(state: BasisState) -> String {
    let sites: Vec<String> = occupied_sites(state).iter().map(usize::to_string).collect();
    format!("phi({})", sites.join(","))
}

/// Parse a `phi(...)` label back into its 1-based site list.
pub fn parse_register_label(label: &str) -> Result<Vec<usize>> {
    let inner = label
        .strip_prefix("phi(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidArgument(format!("malformed register label {label:?}")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad site {tok:?} in label {label:?}")))
        })
        .collect()
}

/// Binomial coefficient; saturating is unnecessary within [`MAX_SITES`].
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 1..=k {
        acc = acc * (n - (k - i)) / i;
    }
    acc
}

/// All configurations of `length` sites with a fixed excitation count,
/// sorted ascending by bitmask value.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    length: usize,
    excitations: usize,
    states: Vec<BasisState>,
}

impl SectorBasis {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn excitations(&self) -> usize {
        self.excitations
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    /// Position of `state` in the sector. The sorted layout makes a binary
    /// search the index map.
    pub fn rank(&self, state: BasisState) -> Result<usize> {
        self.states.binary_search(&state).map_err(|_| {
            Error::NotFound(format!(
                "{} not in sector (L={}, N={})",
                register_label(state),
                self.length,
                self.excitations
            ))
        })
    }

    pub fn unrank(&self, index: usize) -> Result<BasisState> {
        self.states.get(index).copied().ok_or_else(|| {
            Error::NotFound(format!(
                "index {index} outside sector of dimension {}",
                self.dim()
            ))
        })
    }

    pub fn contains(&self, state: BasisState) -> bool {
        self.states.binary_search(&state).is_ok()
    }
}

fn check_length(length: usize) -> Result<()> {
    if length == 0 {
        return Err(Error::InvalidArgument("chain length must be positive".into()));
    }
    if length > MAX_SITES {
        return Err(Error::InvalidArgument(format!(
            "chain length {length} exceeds supported maximum {MAX_SITES}"
        )));
    }
    Ok(())
}

/// Enumerate the sector with `excitations` spins up among `length` sites.
pub fn enumerate_sector(length: usize, excitations: usize) -> Result<SectorBasis> {
    check_length(length)?;
    if excitations > length {
        return Err(Error::InvalidArgument(format!(
            "excitation count {excitations} exceeds chain length {length}"
        )));
    }
    let dim = binomial(length, excitations);
    let mut states = Vec::with_capacity(dim);
    if excitations == 0 {
        states.push(BasisState::VACUUM);
    } else {
        // Gosper's hack walks same-popcount masks in ascending order.
        let limit = 1u64 << length;
        let mut v: u64 = (1 << excitations) - 1;
        while v < limit {
            states.push(BasisState(v as u32));
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }
    debug_assert_eq!(states.len(), dim);
    Ok(SectorBasis {
        length,
        excitations,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sector_l4_n2_matches_hand_enumeration() {
        let basis = enumerate_sector(4, 2).unwrap();
        let bits: Vec<u32> = basis.states().iter().map(|s| s.bits()).collect();
        assert_eq!(bits, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn sector_l12_n6_has_binomial_dimension() {
        let basis = enumerate_sector(12, 6).unwrap();
        assert_eq!(basis.dim(), 924);
    }

    #[test]
    fn vacuum_sector_is_single_empty_state() {
        let basis = enumerate_sector(8, 0).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.states()[0], BasisState::VACUUM);
    }

    #[test]
    fn bad_sector_arguments_are_rejected() {
        assert!(matches!(enumerate_sector(4, 5), Err(Error::InvalidArgument(_))));
        assert!(matches!(enumerate_sector(0, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(enumerate_sector(25, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sector_sizes_sum_to_full_space() {
        for length in 1..=12 {
            let total: usize = (0..=length)
                .map(|n| enumerate_sector(length, n).unwrap().dim())
                .sum();
            assert_eq!(total, 1 << length);
        }
    }

    #[test]
    fn register_from_sites_sets_requested_bits() {
        let state = register_from_sites(12, &[1, 6, 7, 8]).unwrap();
        assert_eq!(occupied_sites(state), vec![1, 6, 7, 8]);
        assert_eq!(register_from_sites(4, &[]).unwrap(), BasisState::VACUUM);
        assert_eq!(register_from_sites(8, &[1, 2]).unwrap().bits(), 0b0000_0011);
    }

    #[test]
    fn register_from_sites_rejects_duplicates_and_range() {
        assert!(register_from_sites(8, &[3, 3]).is_err());
        assert!(register_from_sites(8, &[0]).is_err());
        assert!(register_from_sites(8, &[9]).is_err());
    }

    #[test]
    fn occupied_sites_of_vacuum_is_empty() {
        assert!(occupied_sites(BasisState::VACUUM).is_empty());
        assert_eq!(occupied_sites(BasisState::from_bits(0b11)), vec![1, 2]);
    }

    #[test]
    fn labels_round_trip() {
        let state = register_from_sites(12, &[1, 6, 7, 8]).unwrap();
        let label = register_label(state);
        assert_eq!(label, "phi(1,6,7,8)");
        assert_eq!(parse_register_label(&label).unwrap(), vec![1, 6, 7, 8]);
        assert_eq!(register_label(BasisState::VACUUM), "phi()");
        assert_eq!(parse_register_label("phi()").unwrap(), Vec::<usize>::new());
        assert!(parse_register_label("psi(1)").is_err());
    }

    #[test]
    fn rank_unrank_are_mutually_inverse_exhaustively() {
        let basis = enumerate_sector(6, 3).unwrap();
        assert_eq!(basis.dim(), 20);
        for idx in 0..basis.dim() {
            let state = basis.unrank(idx).unwrap();
            assert_eq!(basis.rank(state).unwrap(), idx);
        }
        assert_eq!(basis.rank(basis.states()[0]).unwrap(), 0);
        assert_eq!(
            basis.rank(*basis.states().last().unwrap()).unwrap(),
            basis.dim() - 1
        );
    }

    #[test]
    fn rank_of_foreign_state_is_not_found() {
        let basis = enumerate_sector(6, 3).unwrap();
        let foreign = register_from_sites(6, &[1, 2]).unwrap();
        assert!(matches!(basis.rank(foreign), Err(Error::NotFound(_))));
        assert!(matches!(basis.unrank(20), Err(Error::NotFound(_))));
    }

    #[test]
    fn rank_unrank_bijective_for_all_small_sectors() {
        for length in 1..=10 {
            for excitations in 0..=length {
                let basis = enumerate_sector(length, excitations).unwrap();
                for idx in 0..basis.dim() {
                    assert_eq!(basis.rank(basis.unrank(idx).unwrap()).unwrap(), idx);
                }
                for w in basis.states().windows(2) {
                    assert!(w[0] < w[1], "states must strictly increase");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn sites_round_trip_through_register(sites in proptest::collection::btree_set(1usize..=16, 0..=8)) {
            let sites: Vec<usize> = sites.into_iter().collect();
            let state = register_from_sites(16, &sites).unwrap();
            prop_assert_eq!(occupied_sites(state), sites);
        }

        #[test]
        fn enumeration_rank_agrees_with_position(length in 1usize..=10, seed in 0usize..1000) {
            let excitations = seed % (length + 1);
            let basis = enumerate_sector(length, excitations).unwrap();
            let idx = seed % basis.dim().max(1);
            let state = basis.unrank(idx).unwrap();
            prop_assert_eq!(state.excitations(), excitations);
            prop_assert_eq!(basis.rank(state).unwrap(), idx);
        }
    }
}
