//! Ladder geometry and symmetry-resolved basis enumeration.
//!
//! Site ordering convention: qubit `u_k` (top row, rung `k`, zero-based) lives
//! on digit `2k`, qubit `d_k` (bottom row) on digit `2k + 1`, so one rung
//! occupies two adjacent digits of the packed configuration code. Codes are
//! base-2 for qubits and base-3 for the bosonic (transmon) model.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Ladder geometry: `rungs` = M, so the system has N = 2M sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderSpec {
    pub rungs: usize,
    /// 2 for qubits, 3 for the two-photon truncated transmon model.
    pub local_dim: u8,
}

impl LadderSpec {
    pub fn new(rungs: usize, local_dim: u8) -> Self {
        assert!(rungs >= 1, "need at least one rung");
        assert!(
            local_dim == 2 || local_dim == 3,
            "local dimension must be 2 or 3"
        );
        Self { rungs, local_dim }
    }

    /// Qubit ladder with M rungs.
    pub fn qubits(rungs: usize) -> Self {
        Self::new(rungs, 2)
    }

    /// Bosonic ladder truncated at two photons per site.
    pub fn transmons(rungs: usize) -> Self {
        Self::new(rungs, 3)
    }

    pub fn sites(&self) -> usize {
        2 * self.rungs
    }

    /// Site index of the top-row qubit on rung `k` (zero-based).
    pub fn top(&self, k: usize) -> usize {
        2 * k
    }

    /// Site index of the bottom-row qubit on rung `k` (zero-based).
    pub fn bottom(&self, k: usize) -> usize {
        2 * k + 1
    }

    pub fn max_excitations(&self) -> usize {
        (self.local_dim as usize - 1) * self.sites()
    }
}

/// Ordered basis of one U(1) sector (fixed total excitation number), or of the
/// full space when `excitations` is `None`.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub spec: LadderSpec,
    pub excitations: Option<usize>,
    states: Vec<u64>,
    rank: HashMap<u64, u32>,
}

impl SectorBasis {
    /// Enumerate all configurations with the given excitation count, sorted
    /// ascending by packed code.
    pub fn enumerate(spec: LadderSpec, excitations: usize) -> Result<Self> {
        if excitations > spec.max_excitations() {
            return Err(Error::ExcitationsOutOfRange {
                excitations,
                sites: spec.sites(),
                local_dim: spec.local_dim,
            });
        }
        let states = match spec.local_dim {
            2 => enumerate_bits(spec.sites(), excitations),
            _ => enumerate_base3(spec.sites(), excitations),
        };
        Ok(Self::from_states(spec, Some(excitations), states))
    }

    /// Half filling: one excitation per rung on average. Both scar families
    /// live in this sector.
    pub fn half_filling(spec: LadderSpec) -> Self {
        Self::enumerate(spec, spec.rungs).expect("half filling is always in range")
    }

    /// The full 4^M-dimensional space of the qubit ladder. Used for models
    /// that do not conserve magnetization (the range-2 generalization).
    pub fn full(spec: LadderSpec) -> Result<Self> {
        if spec.local_dim != 2 {
            return Err(Error::LocalDimMismatch {
                required: 2,
                actual: spec.local_dim,
            });
        }
        let states: Vec<u64> = (0..1u64 << spec.sites()).collect();
        Ok(Self::from_states(spec, None, states))
    }

    fn from_states(spec: LadderSpec, excitations: Option<usize>, states: Vec<u64>) -> Self {
        let rank = states
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        Self {
            spec,
            excitations,
            states,
            rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn code(&self, index: usize) -> u64 {
        self.states[index]
    }

    pub fn index_of(&self, code: u64) -> Option<usize> {
        self.rank.get(&code).map(|&i| i as usize)
    }

    /// Occupation of `site` in `code` (0 or 1 for qubits, 0..=2 for bosons).
    pub fn occupation(&self, code: u64, site: usize) -> u8 {
        match self.spec.local_dim {
            2 => ((code >> site) & 1) as u8,
            _ => ((code / 3u64.pow(site as u32)) % 3) as u8,
        }
    }

    /// Code with the occupation of `site` replaced by `value`.
    pub fn with_occupation(&self, code: u64, site: usize, value: u8) -> u64 {
        match self.spec.local_dim {
            2 => (code & !(1 << site)) | ((value as u64) << site),
            _ => {
                let p = 3u64.pow(site as u32);
                code - ((code / p) % 3) * p + value as u64 * p
            }
        }
    }
}

fn enumerate_bits(sites: usize, excitations: usize) -> Vec<u64> {
    if excitations == 0 {
        return vec![0];
    }
    let mut states = Vec::new();
    // Gosper's hack walks codes in increasing order.
    let mut c: u64 = (1 << excitations) - 1;
    let limit: u64 = if sites == 64 { u64::MAX } else { 1 << sites };
    while c < limit {
        states.push(c);
        let t = c | (c - 1);
        let next = (t.wrapping_add(1)) | (((!t & t.wrapping_add(1)) - 1) >> (c.trailing_zeros() + 1));
        if next <= c {
            break;
        }
        c = next;
    }
    states
}

fn enumerate_base3(sites: usize, excitations: usize) -> Vec<u64> {
    let mut states = Vec::new();
    let mut digits = vec![0u8; sites];
    fn rec(digits: &mut [u8], pos: usize, rem: usize, code: u64, scale: u64, out: &mut Vec<u64>) {
        if pos == digits.len() {
            if rem == 0 {
                out.push(code);
            }
            return;
        }
        let left = 2 * (digits.len() - pos);
        if rem > left {
            return;
        }
        for v in 0..=2u8.min(rem as u8) {
            rec(
                digits,
                pos + 1,
                rem - v as usize,
                code + v as u64 * scale,
                scale * 3,
                out,
            );
        }
    }
    rec(&mut digits, 0, excitations, 0, 1, &mut states);
    states.sort_unstable();
    states
}

/// A bipartition of the ladder, resolved to an ordered set of site indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Partition {
    /// The whole top row `{u_1, ..., u_M}`.
    Parallel,
    /// The first `j` rungs `{u_1, d_1, ..., u_j, d_j}`.
    Perpendicular(usize),
    /// An explicit set of rungs (zero-based).
    Rungs(Vec<usize>),
    /// An explicit set of sites (zero-based, interleaved order).
    Sites(Vec<usize>),
}

impl Partition {
    /// Resolve to a sorted list of site indices; validates ranges and
    /// duplicates.
    pub fn resolve(&self, spec: &LadderSpec) -> Result<Vec<usize>> {
        let sites = spec.sites();
        let mut out = match self {
            Partition::Parallel => (0..spec.rungs).map(|k| spec.top(k)).collect::<Vec<_>>(),
            Partition::Perpendicular(j) => {
                if *j > spec.rungs {
                    return Err(Error::QubitOutOfRange {
                        index: 2 * j,
                        sites,
                    });
                }
                (0..2 * j).collect()
            }
            Partition::Rungs(rungs) => {
                let mut v = Vec::with_capacity(2 * rungs.len());
                for &k in rungs {
                    if k >= spec.rungs {
                        return Err(Error::QubitOutOfRange {
                            index: spec.top(k),
                            sites,
                        });
                    }
                    v.push(spec.top(k));
                    v.push(spec.bottom(k));
                }
                v
            }
            Partition::Sites(list) => list.clone(),
        };
        out.sort_unstable();
        for w in out.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateQubit { index: w[0] });
            }
        }
        if let Some(&max) = out.last() {
            if max >= sites {
                return Err(Error::QubitOutOfRange { index: max, sites });
            }
        }
        Ok(out)
    }

    /// The complement partition, as explicit sites.
    pub fn complement(&self, spec: &LadderSpec) -> Result<Vec<usize>> {
        let inside = self.resolve(spec)?;
        Ok((0..spec.sites()).filter(|s| !inside.contains(s)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rung_one_excitation() {
        let basis = SectorBasis::enumerate(LadderSpec::qubits(1), 1).unwrap();
        assert_eq!(basis.dim(), 2);
        assert_eq!(basis.states(), &[0b01, 0b10]);
    }

    #[test]
    fn two_rungs_half_filling() {
        let basis = SectorBasis::half_filling(LadderSpec::qubits(2));
        assert_eq!(basis.dim(), 6); // C(4,2)
    }

    #[test]
    fn n18_half_filling_dimension() {
        let basis = SectorBasis::half_filling(LadderSpec::qubits(9));
        assert_eq!(basis.dim(), 48620); // C(18,9)
    }

    #[test]
    fn sector_dims_sum_to_full_space() {
        let spec = LadderSpec::qubits(3);
        let total: usize = (0..=spec.max_excitations())
            .map(|e| SectorBasis::enumerate(spec, e).unwrap().dim())
            .sum();
        assert_eq!(total, 1 << spec.sites());

        let spec3 = LadderSpec::transmons(2);
        let total3: usize = (0..=spec3.max_excitations())
            .map(|e| SectorBasis::enumerate(spec3, e).unwrap().dim())
            .sum();
        assert_eq!(total3, 3usize.pow(4));
    }

    #[test]
    fn rank_is_bijective() {
        let basis = SectorBasis::half_filling(LadderSpec::qubits(4));
        for (i, &c) in basis.states().iter().enumerate() {
            assert_eq!(basis.index_of(c), Some(i));
        }
        assert!(basis.states().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn excitations_out_of_range_rejected() {
        let err = SectorBasis::enumerate(LadderSpec::qubits(2), 5).unwrap_err();
        assert!(matches!(err, Error::ExcitationsOutOfRange { .. }));
    }

    #[test]
    fn qutrit_occupation_roundtrip() {
        let basis = SectorBasis::enumerate(LadderSpec::transmons(2), 4).unwrap();
        for &c in basis.states() {
            let total: u8 = (0..4).map(|s| basis.occupation(c, s)).sum();
            assert_eq!(total, 4);
            let c2 = basis.with_occupation(c, 2, basis.occupation(c, 2));
            assert_eq!(c, c2);
        }
    }

    #[test]
    fn partitions_resolve() {
        let spec = LadderSpec::qubits(8);
        assert_eq!(
            Partition::Parallel.resolve(&spec).unwrap(),
            vec![0, 2, 4, 6, 8, 10, 12, 14]
        );
        assert_eq!(
            Partition::Perpendicular(4).resolve(&spec).unwrap(),
            (0..8).collect::<Vec<_>>()
        );
        assert_eq!(
            Partition::Rungs(vec![1, 2]).resolve(&spec).unwrap(),
            vec![2, 3, 4, 5]
        );
        let comp = Partition::Perpendicular(4).complement(&spec).unwrap();
        assert_eq!(comp, (8..16).collect::<Vec<_>>());
    }

    #[test]
    fn partition_errors() {
        let spec = LadderSpec::qubits(2);
        assert!(Partition::Sites(vec![0, 0]).resolve(&spec).is_err());
        assert!(Partition::Sites(vec![7]).resolve(&spec).is_err());
        assert!(Partition::Rungs(vec![3]).resolve(&spec).is_err());
    }
}
