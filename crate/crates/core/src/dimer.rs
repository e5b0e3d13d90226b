//! The per-rung dimer basis {holon, triplet, singlet, doublon} and the
//! symmetry operators built on it.
//!
//! Per rung the two qubits `(u, d)` pack into `v = u + 2d`:
//! `v = 0` is the holon (both empty), `v = 3` the doublon (both occupied),
//! and the singly occupied states `v = 1` (`u` occupied) and `v = 2`
//! (`d` occupied) combine into the triplet `(|v2> + |v1>)/sqrt(2)` and the
//! singlet `(|v2> - |v1>)/sqrt(2)`.
//!
//! Dimer-basis configurations reuse the same packed codes with the symbol
//! assignment `H = 0, T = 1, S = 2, D = 3`. Symbol excitation counts match the
//! qubit ones (0, 1, 1, 2), so a fixed-excitation sector has the *same* code
//! set in both bases and the change of basis is a per-rung butterfly acting
//! within the sector.

use num_complex::Complex64;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::sparse::{SparseOperator, State};

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimerSymbol {
    Holon = 0,
    Triplet = 1,
    Singlet = 2,
    Doublon = 3,
}

impl DimerSymbol {
    pub fn from_code(v: u8) -> Self {
        match v {
            0 => DimerSymbol::Holon,
            1 => DimerSymbol::Triplet,
            2 => DimerSymbol::Singlet,
            _ => DimerSymbol::Doublon,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            DimerSymbol::Holon => 'H',
            DimerSymbol::Triplet => 'T',
            DimerSymbol::Singlet => 'S',
            DimerSymbol::Doublon => 'D',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'H' => Some(DimerSymbol::Holon),
            'T' => Some(DimerSymbol::Triplet),
            'S' => Some(DimerSymbol::Singlet),
            'D' => Some(DimerSymbol::Doublon),
            _ => None,
        }
    }
}

/// A length-M dimer configuration, e.g. "TSDH".
pub fn dimer_code_from_str(s: &str) -> Option<u64> {
    let mut code = 0u64;
    for (k, ch) in s.chars().enumerate() {
        code |= (DimerSymbol::from_char(ch)? as u64) << (2 * k);
    }
    Some(code)
}

pub fn dimer_code_to_string(code: u64, rungs: usize) -> String {
    (0..rungs)
        .map(|k| DimerSymbol::from_code(((code >> (2 * k)) & 3) as u8).to_char())
        .collect()
}

pub fn rung_symbol(code: u64, k: usize) -> u8 {
    ((code >> (2 * k)) & 3) as u8
}

pub fn with_rung_symbol(code: u64, k: usize, v: u8) -> u64 {
    (code & !(3 << (2 * k))) | ((v as u64) << (2 * k))
}

fn require_qubits(basis: &SectorBasis) -> Result<()> {
    if basis.spec.local_dim != 2 {
        return Err(Error::LocalDimMismatch {
            required: 2,
            actual: basis.spec.local_dim,
        });
    }
    Ok(())
}

/// In-place change of basis, dimer amplitudes -> computational amplitudes.
///
/// Round trip with [`computational_to_dimer`] is the identity to machine
/// precision; both are O(dim * M).
pub fn dimer_to_computational(basis: &SectorBasis, amps: &mut [Complex64]) -> Result<()> {
    require_qubits(basis)?;
    for k in 0..basis.spec.rungs {
        for (i, &code) in basis.states().iter().enumerate() {
            if rung_symbol(code, k) == 1 {
                let j = basis
                    .index_of(code ^ (3 << (2 * k)))
                    .expect("partner configuration is in the same sector");
                let t = amps[i]; // triplet amplitude
                let s = amps[j]; // singlet amplitude
                amps[i] = (t - s) * SQRT_HALF; // v = 1
                amps[j] = (t + s) * SQRT_HALF; // v = 2
            }
        }
    }
    Ok(())
}

/// In-place change of basis, computational amplitudes -> dimer amplitudes.
pub fn computational_to_dimer(basis: &SectorBasis, amps: &mut [Complex64]) -> Result<()> {
    require_qubits(basis)?;
    for k in 0..basis.spec.rungs {
        for (i, &code) in basis.states().iter().enumerate() {
            if rung_symbol(code, k) == 1 {
                let j = basis
                    .index_of(code ^ (3 << (2 * k)))
                    .expect("partner configuration is in the same sector");
                let a = amps[i]; // v = 1
                let b = amps[j]; // v = 2
                amps[i] = (b + a) * SQRT_HALF; // triplet
                amps[j] = (b - a) * SQRT_HALF; // singlet
            }
        }
    }
    Ok(())
}

/// Charge of a dimer configuration: triplets count +1 and singlets -1, each
/// multiplied by (-1) for every holon or doublon strictly to its left.
pub fn charge_of_dimer_code(code: u64, rungs: usize) -> i32 {
    let mut q = 0i32;
    let mut phase = 1i32;
    for k in 0..rungs {
        match rung_symbol(code, k) {
            1 => q += phase,
            2 => q -= phase,
            _ => phase = -phase,
        }
    }
    q
}

/// The conserved charge as a sparse matrix in the computational basis.
///
/// In the dimer basis the charge is diagonal; conjugating with the per-rung
/// butterflies turns each triplet/singlet slot into a swap of the two singly
/// occupied states, so the matrix has at most M entries per row.
pub fn build_charge_operator(basis: &SectorBasis) -> Result<SparseOperator> {
    require_qubits(basis)?;
    let mut entries = Vec::new();
    for (i, &code) in basis.states().iter().enumerate() {
        let mut phase = 1.0f64;
        for k in 0..basis.spec.rungs {
            match rung_symbol(code, k) {
                1 | 2 => {
                    let j = basis
                        .index_of(code ^ (3 << (2 * k)))
                        .expect("swap partner stays in the sector");
                    entries.push((j as u32, i as u32, phase));
                }
                _ => phase = -phase,
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// The operator that anticommutes with the ideal Hamiltonian at half filling:
/// a particle-hole flip of both rows followed by a row swap, with a (-1)
/// phase per rung whose bottom qubit was empty. In the dimer picture it
/// switches T with S and D with H, with a (-1) per doublon created.
pub fn build_chiral_operator(basis: &SectorBasis) -> Result<SparseOperator> {
    require_qubits(basis)?;
    let mut entries = Vec::new();
    for (i, &code) in basis.states().iter().enumerate() {
        let mut target = 0u64;
        let mut phase = 1.0f64;
        for k in 0..basis.spec.rungs {
            let u = (code >> (2 * k)) & 1;
            let d = (code >> (2 * k + 1)) & 1;
            if d == 0 {
                phase = -phase;
            }
            target |= ((1 - d) << (2 * k)) | ((1 - u) << (2 * k + 1));
        }
        if let Some(j) = basis.index_of(target) {
            entries.push((j as u32, i as u32, phase));
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries))
}

/// Result of a charge projection: the (unnormalized) component and whether
/// the requested charge labels an existing sector of this basis.
pub struct ChargeProjection {
    pub state: State,
    pub valid_sector: bool,
}

/// Project onto the charge-q eigenspace. Idempotent; orthogonal projections
/// for distinct q. Charges outside the admissible set return a flagged zero
/// vector rather than an error.
pub fn project_charge(basis: &SectorBasis, state: &[Complex64], q: i32) -> Result<ChargeProjection> {
    require_qubits(basis)?;
    if state.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            operator: basis.dim(),
            state: state.len(),
        });
    }
    let m = basis.spec.rungs as i32;
    let valid = q.abs() <= m && (q - m).rem_euclid(2) == 0;
    let mut amps = state.to_vec();
    computational_to_dimer(basis, &mut amps)?;
    for (i, &code) in basis.states().iter().enumerate() {
        if charge_of_dimer_code(code, basis.spec.rungs) != q {
            amps[i] = Complex64::new(0.0, 0.0);
        }
    }
    dimer_to_computational(basis, &mut amps)?;
    Ok(ChargeProjection {
        state: amps,
        valid_sector: valid,
    })
}

/// The dimer-basis configurations of one charge sector at fixed filling.
/// Spectra are computed here: the Hamiltonian is block-diagonal over these
/// sectors and its dimer-basis matrix elements are local.
#[derive(Debug, Clone)]
pub struct ChargeSector {
    pub basis: SectorBasis,
    pub q: i32,
    /// Indices into `basis.states()` whose dimer code has charge q.
    pub members: Vec<u32>,
}

impl ChargeSector {
    pub fn new(basis: &SectorBasis, q: i32) -> Result<Self> {
        require_qubits(basis)?;
        let members = basis
            .states()
            .iter()
            .enumerate()
            .filter(|(_, &c)| charge_of_dimer_code(c, basis.spec.rungs) == q)
            .map(|(i, _)| i as u32)
            .collect();
        Ok(Self {
            basis: basis.clone(),
            q,
            members,
        })
    }

    /// All charge sectors of a basis, ordered by q.
    pub fn split(basis: &SectorBasis) -> Result<Vec<Self>> {
        require_qubits(basis)?;
        let m = basis.spec.rungs as i32;
        let mut out = Vec::new();
        for q in (-m..=m).filter(|q| (q - m).rem_euclid(2) == 0) {
            let sector = Self::new(basis, q)?;
            if !sector.members.is_empty() {
                out.push(sector);
            }
        }
        Ok(out)
    }

    /// The largest sector (ties broken toward positive q).
    pub fn largest(basis: &SectorBasis) -> Result<Self> {
        let mut sectors = Self::split(basis)?;
        sectors.sort_by_key(|s| (s.dim(), s.q >= 0));
        Ok(sectors.pop().expect("at least one sector exists"))
    }

    pub fn dim(&self) -> usize {
        self.members.len()
    }

    /// Embed a sector-local dimer vector into the computational basis of the
    /// enclosing sector.
    pub fn embed_to_computational(&self, local: &[f64]) -> Result<State> {
        assert_eq!(local.len(), self.dim());
        let mut amps = vec![Complex64::new(0.0, 0.0); self.basis.dim()];
        for (slot, &i) in self.members.iter().enumerate() {
            amps[i as usize] = Complex64::new(local[slot], 0.0);
        }
        dimer_to_computational(&self.basis, &mut amps)?;
        Ok(amps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::LadderSpec;
    use crate::sparse;
    use approx::assert_abs_diff_eq;

    fn basis(m: usize) -> SectorBasis {
        SectorBasis::half_filling(LadderSpec::qubits(m))
    }

    #[test]
    fn single_rung_dimer_map() {
        // |u occupied> = (T - S)/sqrt(2)
        let b = basis(1);
        let mut amps = vec![Complex64::new(0.0, 0.0); 2];
        let i_t = b.index_of(dimer_code_from_str("T").unwrap()).unwrap();
        amps[i_t] = Complex64::new(1.0, 0.0);
        dimer_to_computational(&b, &mut amps).unwrap();
        let i_v1 = b.index_of(0b01).unwrap();
        let i_v2 = b.index_of(0b10).unwrap();
        assert_abs_diff_eq!(amps[i_v1].re, SQRT_HALF, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[i_v2].re, SQRT_HALF, epsilon = 1e-15);

        // and the doublon is a computational state
        let b2 = SectorBasis::enumerate(LadderSpec::qubits(1), 2).unwrap();
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        dimer_to_computational(&b2, &mut amps).unwrap();
        assert_abs_diff_eq!(amps[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn round_trip_identity() {
        let b = basis(4);
        let mut amps: Vec<Complex64> = (0..b.dim())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        sparse::normalize(&mut amps);
        let orig = amps.clone();
        computational_to_dimer(&b, &mut amps).unwrap();
        dimer_to_computational(&b, &mut amps).unwrap();
        let err: f64 = amps
            .iter()
            .zip(&orig)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn charge_examples() {
        // all singlets -> q = -M
        assert_eq!(
            charge_of_dimer_code(dimer_code_from_str("SSS").unwrap(), 3),
            -3
        );
        // TSDH: +1, -1, 0, 0
        assert_eq!(
            charge_of_dimer_code(dimer_code_from_str("TSDH").unwrap(), 4),
            0
        );
        // phases flip across a holon: T after H counts -1
        assert_eq!(
            charge_of_dimer_code(dimer_code_from_str("HTD").unwrap(), 3),
            -1
        );
    }

    #[test]
    fn charge_operator_is_integer_and_in_range() {
        let b = basis(3);
        let q = build_charge_operator(&b).unwrap();
        assert!(q.hermiticity_error() < 1e-15);
        // Q on a dimer basis state reproduces the diagonal charge
        for code_str in ["TSS", "DHT", "SDH"] {
            let code = dimer_code_from_str(code_str).unwrap();
            let mut amps = vec![Complex64::new(0.0, 0.0); b.dim()];
            amps[b.index_of(code).unwrap()] = Complex64::new(1.0, 0.0);
            dimer_to_computational(&b, &mut amps).unwrap();
            let qa = q.apply(&amps).unwrap();
            let expect = charge_of_dimer_code(code, 3) as f64;
            for (x, y) in qa.iter().zip(&amps) {
                assert!((x - y * expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projector_idempotent_and_orthogonal() {
        let b = basis(3);
        let mut v: Vec<Complex64> = (0..b.dim())
            .map(|i| Complex64::new((i as f64).sin() + 0.2, (i as f64 * 0.7).cos()))
            .collect();
        sparse::normalize(&mut v);
        let p1 = project_charge(&b, &v, 1).unwrap();
        assert!(p1.valid_sector);
        let p11 = project_charge(&b, &p1.state, 1).unwrap();
        let err: f64 = p11
            .state
            .iter()
            .zip(&p1.state)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
        let p3 = project_charge(&b, &p1.state, 3).unwrap();
        assert!(sparse::norm(&p3.state) < 1e-14);
        // invalid q: flagged, zero
        let bad = project_charge(&b, &v, 2).unwrap();
        assert!(!bad.valid_sector);
        assert!(sparse::norm(&bad.state) < 1e-14);
    }

    #[test]
    fn charge_sectors_partition_the_basis() {
        for m in 2..=5 {
            let b = basis(m);
            let sectors = ChargeSector::split(&b).unwrap();
            let total: usize = sectors.iter().map(|s| s.dim()).sum();
            assert_eq!(total, b.dim());
        }
        // N = 18: the largest sector has q = 1 and dimension 15876
        let b = basis(9);
        let largest = ChargeSector::largest(&b).unwrap();
        assert_eq!(largest.q, 1);
        assert_eq!(largest.dim(), 15876);
    }

    #[test]
    fn chiral_squares_to_identity() {
        let b = basis(3);
        let c = build_chiral_operator(&b).unwrap();
        assert!(c.hermiticity_error() < 1e-15);
        let mut v: Vec<Complex64> = (0..b.dim())
            .map(|i| Complex64::new((i as f64 * 1.3).sin(), (i as f64 * 0.5).sin()))
            .collect();
        sparse::normalize(&mut v);
        let cc = c.apply(&c.apply(&v).unwrap()).unwrap();
        let err: f64 = cc.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn chiral_switches_triplets_and_singlets() {
        let b = basis(3);
        let c = build_chiral_operator(&b).unwrap();
        let mut t = vec![Complex64::new(0.0, 0.0); b.dim()];
        t[b.index_of(dimer_code_from_str("TTT").unwrap()).unwrap()] = Complex64::new(1.0, 0.0);
        dimer_to_computational(&b, &mut t).unwrap();
        let mut s = vec![Complex64::new(0.0, 0.0); b.dim()];
        s[b.index_of(dimer_code_from_str("SSS").unwrap()).unwrap()] = Complex64::new(1.0, 0.0);
        dimer_to_computational(&b, &mut s).unwrap();
        let ct = c.apply(&t).unwrap();
        let olap = sparse::inner(&s, &ct);
        assert!((olap.norm() - 1.0).abs() < 1e-12);
    }
}
