//! Sparse Hamiltonian assembly.
//!
//! Units: all couplings and frequencies are plain MHz (the conventional
//! 2-pi-divided values); the propagator in [`crate::dynamics`] supplies the
//! matching phase exp(-i 2 pi E t) with t in microseconds.
//!
//! Sign structure: the caller always supplies positive-convention rail
//! couplings `j_rail[k]`; the builders negate the bottom row internally, which
//! is what makes the two rows mirror images with opposite spectra.

use crate::basis::SectorBasis;
use crate::dimer::{rung_symbol, with_rung_symbol, ChargeSector};
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

/// Couplings of the ideal ladder: one vertical coupling `j_vertical` (J_a,
/// uniform), M-1 rail couplings `j_rail` (J_{e,k}) and M on-site frequencies
/// `omega` (MHz).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingConfig {
    pub j_vertical: f64,
    pub j_rail: Vec<f64>,
    pub omega: Vec<f64>,
}

impl CouplingConfig {
    pub fn uniform(rungs: usize, j_vertical: f64, j_rail: f64, omega: f64) -> Self {
        Self {
            j_vertical,
            j_rail: vec![j_rail; rungs.saturating_sub(1)],
            omega: vec![omega; rungs],
        }
    }

    pub fn validate(&self, rungs: usize) -> Result<()> {
        if self.j_rail.len() != rungs - 1 {
            return Err(Error::CouplingLength {
                name: "j_rail",
                actual: self.j_rail.len(),
                expected: rungs - 1,
            });
        }
        if self.omega.len() != rungs {
            return Err(Error::CouplingLength {
                name: "omega",
                actual: self.omega.len(),
                expected: rungs,
            });
        }
        if !self
            .j_rail
            .iter()
            .chain(self.omega.iter())
            .chain([self.j_vertical].iter())
            .all(|v| v.is_finite())
        {
            return Err(Error::CouplingLength {
                name: "non-finite coupling",
                actual: 0,
                expected: 0,
            });
        }
        Ok(())
    }

    /// Frequencies with the mean removed; these control the triplet/singlet
    /// component of the disorder-dependent scar family. Accumulated with
    /// Kahan compensation so the residual sum stays below 1e-13.
    pub fn omega_bar(&self) -> Vec<f64> {
        let mean = kahan_sum(&self.omega) / self.omega.len() as f64;
        self.omega.iter().map(|w| w - mean).collect()
    }
}

fn kahan_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for &x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Experimental imperfections: diagonal cross couplings (2(M-1) values,
/// ordered `u_k - d_{k+1}`, `d_k - u_{k+1}` for k = 1..M-1) and the transmon
/// anharmonicity (MHz), used with the three-level model only.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationConfig {
    pub j_cross: Vec<f64>,
    pub anharmonicity: f64,
}

impl PerturbationConfig {
    pub fn validate(&self, rungs: usize) -> Result<()> {
        if self.j_cross.len() != 2 * (rungs - 1) {
            return Err(Error::CouplingLength {
                name: "j_cross",
                actual: self.j_cross.len(),
                expected: 2 * (rungs - 1),
            });
        }
        Ok(())
    }
}

/// Couplings of the range-2 XY ladder: nearest-neighbour (`j1x`, `j1y`, M-1
/// each) and next-nearest-neighbour (`j2x`, `j2y`, M-2 each) terms, top row;
/// the bottom row gets the opposite sign and the rung coupling is fixed at
/// amplitude 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Range2Config {
    pub j1x: Vec<f64>,
    pub j1y: Vec<f64>,
    pub j2x: Vec<f64>,
    pub j2y: Vec<f64>,
}

impl Range2Config {
    pub fn validate(&self, rungs: usize) -> Result<()> {
        for (name, v, expected) in [
            ("j1x", &self.j1x, rungs - 1),
            ("j1y", &self.j1y, rungs - 1),
            ("j2x", &self.j2x, rungs.saturating_sub(2)),
            ("j2y", &self.j2y, rungs.saturating_sub(2)),
        ] {
            if v.len() != expected {
                return Err(Error::CouplingLength {
                    name: match name {
                        "j1x" => "j1x",
                        "j1y" => "j1y",
                        "j2x" => "j2x",
                        _ => "j2y",
                    },
                    actual: v.len(),
                    expected,
                });
            }
        }
        Ok(())
    }
}

/// XY hop list of the ideal ladder: (site a, site b, amplitude). The
/// amplitude is the off-diagonal matrix element between the two flipped
/// configurations, i.e. J for a (J/2)(xx + yy) term.
fn ideal_hops(rungs: usize, couplings: &CouplingConfig) -> Vec<(usize, usize, f64)> {
    let mut hops = Vec::with_capacity(3 * rungs);
    for k in 0..rungs - 1 {
        hops.push((2 * k, 2 * (k + 1), couplings.j_rail[k])); // top rail
        hops.push((2 * k + 1, 2 * (k + 1) + 1, -couplings.j_rail[k])); // bottom rail, negated
    }
    for k in 0..rungs {
        hops.push((2 * k, 2 * k + 1, couplings.j_vertical)); // rung
    }
    hops
}

/// The ideal disordered XY ladder in a fixed-magnetization qubit sector.
pub fn build_ideal(basis: &SectorBasis, couplings: &CouplingConfig) -> Result<SparseOperator> {
    if basis.spec.local_dim != 2 {
        return Err(Error::LocalDimMismatch {
            required: 2,
            actual: basis.spec.local_dim,
        });
    }
    couplings.validate(basis.spec.rungs)?;
    let hops = ideal_hops(basis.spec.rungs, couplings);
    let mut entries = Vec::with_capacity(basis.dim() * (hops.len() / 2 + 1));
    for (i, &code) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for k in 0..basis.spec.rungs {
            let sz_u = 2.0 * ((code >> (2 * k)) & 1) as f64 - 1.0;
            let sz_d = 2.0 * ((code >> (2 * k + 1)) & 1) as f64 - 1.0;
            diag += couplings.omega[k] * (sz_u + sz_d);
        }
        entries.push((i as u32, i as u32, diag));
        for &(a, b, amp) in &hops {
            if (code >> a) & 1 != (code >> b) & 1 {
                let flipped = code ^ (1 << a) ^ (1 << b);
                let j = basis
                    .index_of(flipped)
                    .expect("XY hop conserves the excitation number");
                entries.push((j as u32, i as u32, amp));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// Only the top-row part of the ideal Hamiltonian (rail hops on `u` sites and
/// the on-site frequencies of the top row). This is the generator of the
/// disorder-dependent scar family.
pub fn build_top_row(basis: &SectorBasis, couplings: &CouplingConfig) -> Result<SparseOperator> {
    if basis.spec.local_dim != 2 {
        return Err(Error::LocalDimMismatch {
            required: 2,
            actual: basis.spec.local_dim,
        });
    }
    couplings.validate(basis.spec.rungs)?;
    let mut entries = Vec::new();
    for (i, &code) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for k in 0..basis.spec.rungs {
            let sz_u = 2.0 * ((code >> (2 * k)) & 1) as f64 - 1.0;
            diag += couplings.omega[k] * sz_u;
        }
        entries.push((i as u32, i as u32, diag));
        for k in 0..basis.spec.rungs - 1 {
            let (a, b) = (2 * k, 2 * (k + 1));
            if (code >> a) & 1 != (code >> b) & 1 {
                let j = basis.index_of(code ^ (1 << a) ^ (1 << b)).unwrap();
                entries.push((j as u32, i as u32, couplings.j_rail[k]));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// The magnetization operator of the top row, Z = sum_k sz(u_k). Diagonal.
pub fn build_top_row_magnetization(basis: &SectorBasis) -> Result<SparseOperator> {
    if basis.spec.local_dim != 2 {
        return Err(Error::LocalDimMismatch {
            required: 2,
            actual: basis.spec.local_dim,
        });
    }
    let entries = basis
        .states()
        .iter()
        .enumerate()
        .map(|(i, &code)| {
            let z: f64 = (0..basis.spec.rungs)
                .map(|k| 2.0 * ((code >> (2 * k)) & 1) as f64 - 1.0)
                .sum();
            (i as u32, i as u32, z)
        })
        .collect();
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// The experimentally calibrated model: the ideal ladder rewritten for
/// three-level bosons (hops carry the truncated sqrt factors, on-site
/// frequencies become 2 omega_k n), plus diagonal cross couplings and the
/// on-site nonlinearity (eta/2) n (n - 1).
///
/// On the subspace with at most one photon per site this reproduces
/// `build_ideal` up to the constant 2 sum(omega) from the spin-to-boson
/// rewrite of the frequency term.
pub fn build_experimental(
    basis: &SectorBasis,
    couplings: &CouplingConfig,
    perturbations: &PerturbationConfig,
) -> Result<SparseOperator> {
    if basis.spec.local_dim != 3 {
        return Err(Error::LocalDimMismatch {
            required: 3,
            actual: basis.spec.local_dim,
        });
    }
    let rungs = basis.spec.rungs;
    couplings.validate(rungs)?;
    perturbations.validate(rungs)?;
    let mut hops = ideal_hops(rungs, couplings);
    for k in 0..rungs - 1 {
        hops.push((2 * k, 2 * (k + 1) + 1, perturbations.j_cross[2 * k])); // u_k - d_{k+1}
        hops.push((2 * k + 1, 2 * (k + 1), perturbations.j_cross[2 * k + 1])); // d_k - u_{k+1}
    }
    let eta = perturbations.anharmonicity;
    let mut entries = Vec::new();
    for (i, &code) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for site in 0..basis.spec.sites() {
            let n = basis.occupation(code, site) as f64;
            diag += eta / 2.0 * n * (n - 1.0);
        }
        for k in 0..rungs {
            let n_u = basis.occupation(code, 2 * k) as f64;
            let n_d = basis.occupation(code, 2 * k + 1) as f64;
            diag += 2.0 * couplings.omega[k] * (n_u + n_d);
        }
        entries.push((i as u32, i as u32, diag));
        for &(a, b, amp) in &hops {
            let na = basis.occupation(code, a);
            let nb = basis.occupation(code, b);
            // raising on a, lowering on b
            if nb >= 1 && na < 2 {
                let target = basis.with_occupation(
                    basis.with_occupation(code, a, na + 1),
                    b,
                    nb - 1,
                );
                let j = basis.index_of(target).expect("hop conserves excitations");
                let element = amp * ((na as f64 + 1.0) * nb as f64).sqrt();
                entries.push((j as u32, i as u32, element));
            }
            // raising on b, lowering on a
            if na >= 1 && nb < 2 {
                let target = basis.with_occupation(
                    basis.with_occupation(code, b, nb + 1),
                    a,
                    na - 1,
                );
                let j = basis.index_of(target).expect("hop conserves excitations");
                let element = amp * ((nb as f64 + 1.0) * na as f64).sqrt();
                entries.push((j as u32, i as u32, element));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// Range-2 XY ladder with anisotropic xx and yy couplings. Magnetization is
/// not conserved (xx - yy terms create and annihilate pairs), so this builds
/// over the full 4^M space; only parity is conserved structurally.
///
/// Matrix elements per bond: (jx + jy) between configurations related by a
/// 01 <-> 10 flip and (jx - jy) for 00 <-> 11.
pub fn build_range2(basis: &SectorBasis, config: &Range2Config) -> Result<SparseOperator> {
    if basis.spec.local_dim != 2 || basis.excitations.is_some() {
        return Err(Error::LocalDimMismatch {
            required: 2,
            actual: basis.spec.local_dim,
        });
    }
    let rungs = basis.spec.rungs;
    config.validate(rungs)?;
    // (a, b, jx, jy) with the bottom-row sign already applied
    let mut bonds = Vec::new();
    for k in 0..rungs - 1 {
        bonds.push((2 * k, 2 * (k + 1), config.j1x[k], config.j1y[k]));
        bonds.push((2 * k + 1, 2 * (k + 1) + 1, -config.j1x[k], -config.j1y[k]));
    }
    for k in 0..rungs.saturating_sub(2) {
        bonds.push((2 * k, 2 * (k + 2), config.j2x[k], config.j2y[k]));
        bonds.push((2 * k + 1, 2 * (k + 2) + 1, -config.j2x[k], -config.j2y[k]));
    }
    let mut entries = Vec::new();
    for (i, &code) in basis.states().iter().enumerate() {
        for &(a, b, jx, jy) in &bonds {
            let flipped = code ^ (1 << a) ^ (1 << b);
            let j = basis.index_of(flipped).expect("full space is closed");
            let amp = if (code >> a) & 1 != (code >> b) & 1 {
                jx + jy
            } else {
                jx - jy
            };
            entries.push((j as u32, i as u32, amp));
        }
        // rung coupling at fixed amplitude 1
        for k in 0..rungs {
            let (a, b) = (2 * k, 2 * k + 1);
            if (code >> a) & 1 != (code >> b) & 1 {
                let j = basis.index_of(code ^ (1 << a) ^ (1 << b)).unwrap();
                entries.push((j as u32, i as u32, 1.0));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// Top-row part of the range-2 model (used to generate its disordered scars).
pub fn build_range2_top_row(basis: &SectorBasis, config: &Range2Config) -> Result<SparseOperator> {
    if basis.spec.local_dim != 2 || basis.excitations.is_some() {
        return Err(Error::LocalDimMismatch {
            required: 2,
            actual: basis.spec.local_dim,
        });
    }
    let rungs = basis.spec.rungs;
    config.validate(rungs)?;
    let mut bonds = Vec::new();
    for k in 0..rungs - 1 {
        bonds.push((2 * k, 2 * (k + 1), config.j1x[k], config.j1y[k]));
    }
    for k in 0..rungs.saturating_sub(2) {
        bonds.push((2 * k, 2 * (k + 2), config.j2x[k], config.j2y[k]));
    }
    let mut entries = Vec::new();
    for (i, &code) in basis.states().iter().enumerate() {
        for &(a, b, jx, jy) in &bonds {
            let flipped = code ^ (1 << a) ^ (1 << b);
            let j = basis.index_of(flipped).unwrap();
            let amp = if (code >> a) & 1 != (code >> b) & 1 {
                jx + jy
            } else {
                jx - jy
            };
            entries.push((j as u32, i as u32, amp));
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// The ideal Hamiltonian restricted to one charge sector, assembled directly
/// in the dimer basis where the charge is diagonal. The matrix elements are
/// the local dimer rules: the rung part is diagonal (T: +J_a, S: -J_a,
/// D: +2 omega_k, H: -2 omega_k) and the rail part hops neighbouring dimer
/// pairs with amplitude +/- J_{e,k}.
pub fn build_ideal_charge_sector(
    sector: &ChargeSector,
    couplings: &CouplingConfig,
) -> Result<SparseOperator> {
    let rungs = sector.basis.spec.rungs;
    couplings.validate(rungs)?;
    let ja = couplings.j_vertical;
    // (in_k, in_k1) -> [(out_k, out_k1, coefficient)], coefficient in units of J_e
    // H=0, T=1, S=2, D=3
    const NO_RULE: &[(u8, u8, f64)] = &[];
    let rules = |s1: u8, s2: u8| -> &'static [(u8, u8, f64)] {
        match (s1, s2) {
            (1, 2) => &[(0, 3, 1.0), (3, 0, -1.0)], // TS -> HD - DH
            (2, 1) => &[(3, 0, 1.0), (0, 3, -1.0)], // ST -> DH - HD
            (1, 0) => &[(0, 2, -1.0)],              // TH -> -HS
            (0, 1) => &[(2, 0, -1.0)],              // HT -> -SH
            (2, 0) => &[(0, 1, -1.0)],              // SH -> -HT
            (0, 2) => &[(1, 0, -1.0)],              // HS -> -TH
            (1, 3) => &[(3, 2, 1.0)],               // TD -> DS
            (3, 1) => &[(2, 3, 1.0)],               // DT -> SD
            (2, 3) => &[(3, 1, 1.0)],               // SD -> DT
            (3, 2) => &[(1, 3, 1.0)],               // DS -> TD
            (0, 3) => &[(1, 2, 1.0), (2, 1, -1.0)], // HD -> TS - ST
            (3, 0) => &[(2, 1, 1.0), (1, 2, -1.0)], // DH -> ST - TS
            _ => NO_RULE,
        }
    };
    let mut local_rank = std::collections::HashMap::with_capacity(sector.dim() * 2);
    for (slot, &i) in sector.members.iter().enumerate() {
        local_rank.insert(sector.basis.code(i as usize), slot as u32);
    }
    let mut entries = Vec::new();
    for (slot, &i) in sector.members.iter().enumerate() {
        let code = sector.basis.code(i as usize);
        let mut diag = 0.0;
        for k in 0..rungs {
            diag += match rung_symbol(code, k) {
                1 => ja,
                2 => -ja,
                3 => 2.0 * couplings.omega[k],
                _ => -2.0 * couplings.omega[k],
            };
        }
        entries.push((slot as u32, slot as u32, diag));
        for k in 0..rungs - 1 {
            let (s1, s2) = (rung_symbol(code, k), rung_symbol(code, k + 1));
            for &(t1, t2, coef) in rules(s1, s2) {
                let target = with_rung_symbol(with_rung_symbol(code, k, t1), k + 1, t2);
                let j = *local_rank
                    .get(&target)
                    .expect("dimer rules preserve the charge");
                entries.push((j, slot as u32, coef * couplings.j_rail[k]));
            }
        }
    }
    Ok(SparseOperator::from_triplets(sector.dim(), entries))
}
