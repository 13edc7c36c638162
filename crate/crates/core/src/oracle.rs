//! Brute-force exact diagonalization of the full Dicke Hamiltonian
//!
//! ```text
//! H = ω a†a + ω₀ J_z + (λ/√N)(a† + a)(J₊ + J₋)
//! ```
//!
//! with a truncated photon mode. Two atomic bases are supported: the maximal-spin
//! (symmetric) sector, where the ground state lives, and the full 2^N product space,
//! needed for Gibbs states. States are flattened as `m * atom_dim + s`.
//!
//! Overlap convention. In the symmetric sector the reference state is used in its
//! collective form Σₙ C(N,n)aⁿ(1−a)^{N−n}|n⟩⟨n|, the same form the effective-model
//! overlap uses. In the product space it is ρ₁^{⊗N} itself, so Tr[ρ_atoms ρ^s] is the
//! literal trace.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{lowest_eigenpair, symmetric_eigen};
use crate::separable::SeparableState;
use crate::witness::MomentSet;

/// Largest atom number for the product basis.
pub const FULL_PRODUCT_MAX_ATOMS: usize = 6;
/// Largest vector length allowed in the symmetric sector.
pub const SYMMETRIC_MAX_DIMENSION: usize = 200_000;
/// Largest side of a dense matrix the oracle will assemble.
pub const DENSE_MAX_DIMENSION: usize = 8_000;
/// Largest ground-energy shift tolerated when the cutoff grows by half.
pub const CUTOFF_SHIFT_LIMIT: f64 = 1e-8;
/// Largest disagreement between the two overlap evaluations.
pub const OVERLAP_PATH_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// |m⟩ ⊗ |j = N/2, n − N/2⟩, n = number of excited atoms.
    SymmetricSector,
    /// |m⟩ ⊗ {↑,↓}^N; bit i of s set means atom i is up.
    FullProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeBasis {
    pub kind: BasisKind,
    pub n_atoms: usize,
    /// Photon levels 0..cutoff.
    pub cutoff: usize,
}

impl DickeBasis {
    pub fn symmetric(n_atoms: usize, cutoff: usize) -> Result<Self> {
        let b = Self { kind: BasisKind::SymmetricSector, n_atoms, cutoff };
        b.validate()?;
        Ok(b)
    }

    pub fn full_product(n_atoms: usize, cutoff: usize) -> Result<Self> {
        let b = Self { kind: BasisKind::FullProduct, n_atoms, cutoff };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 || self.cutoff < 2 {
            return Err(Error::InvalidParameter(format!(
                "oracle basis needs N >= 1 and cutoff >= 2, got N={} cutoff={}",
                self.n_atoms, self.cutoff
            )));
        }
        match self.kind {
            BasisKind::FullProduct if self.n_atoms > FULL_PRODUCT_MAX_ATOMS => Err(Error::Capacity(format!(
                "full product basis allows N <= {FULL_PRODUCT_MAX_ATOMS}, got N={}",
                self.n_atoms
            ))),
            BasisKind::SymmetricSector if self.cutoff.saturating_mul(self.n_atoms + 1) > SYMMETRIC_MAX_DIMENSION => {
                Err(Error::Capacity(format!(
                    "symmetric sector needs cutoff*(N+1) <= {SYMMETRIC_MAX_DIMENSION}, got {}*{}",
                    self.cutoff,
                    self.n_atoms + 1
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn atom_dimension(&self) -> usize {
        match self.kind {
            BasisKind::SymmetricSector => self.n_atoms + 1,
            BasisKind::FullProduct => 1 << self.n_atoms,
        }
    }

    pub fn dimension(&self) -> usize {
        self.cutoff * self.atom_dimension()
    }

    /// Number of up spins in atomic state `s`.
    pub fn excitations(&self, s: usize) -> usize {
        match self.kind {
            BasisKind::SymmetricSector => s,
            BasisKind::FullProduct => s.count_ones() as usize,
        }
    }

    /// Eigenvalue ±1 of Π = exp[iπ(a†a + J_z + N/2)] on basis state `index`.
    pub fn parity(&self, index: usize) -> i32 {
        let d = self.atom_dimension();
        if (index / d + self.excitations(index % d)) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Nonzero entries (row, col, value) of J₊ on the atomic space.
    fn raising(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n_atoms;
        match self.kind {
            BasisKind::SymmetricSector => (0..n).map(|k| (k + 1, k, (((k + 1) * (n - k)) as f64).sqrt())).collect(),
            BasisKind::FullProduct => (0..1usize << n)
                .flat_map(|s| (0..n).filter(move |i| s & (1 << i) == 0).map(move |i| (s | (1 << i), s, 1.0)))
                .collect(),
        }
    }

    fn jz(&self, s: usize) -> f64 {
        self.excitations(s) as f64 - self.n_atoms as f64 / 2.0
    }
}

/// Dense H in `basis`.
pub fn build_hamiltonian(params: &ModelParams, basis: &DickeBasis) -> Result<DMatrix<f64>> {
    check_params(params, basis)?;
    let dim = basis.dimension();
    if dim > DENSE_MAX_DIMENSION {
        return Err(Error::Capacity(format!(
            "dense oracle matrix would be {dim}x{dim}, limit {DENSE_MAX_DIMENSION}"
        )));
    }
    let all: Vec<usize> = (0..dim).collect();
    Ok(assemble(params, basis, &all))
}

/// H restricted to the basis states in `indices` (ascending).
fn assemble(params: &ModelParams, basis: &DickeBasis, indices: &[usize]) -> DMatrix<f64> {
    let d = basis.atom_dimension();
    let mut position = vec![usize::MAX; basis.dimension()];
    for (k, &i) in indices.iter().enumerate() {
        position[i] = k;
    }
    let g = params.lambda / (params.n_atoms as f64).sqrt();
    let raising = basis.raising();
    let mut h = DMatrix::zeros(indices.len(), indices.len());
    for (k, &i) in indices.iter().enumerate() {
        let (m, s) = (i / d, i % d);
        h[(k, k)] = params.omega * m as f64 + params.omega0 * basis.jz(s);
    }
    // (a† + a)(J₊ + J₋): every J₊ entry couples (m, s) to (m ± 1, s'), and J₋ = J₊ᵀ.
    for m in 0..basis.cutoff - 1 {
        let photon = g * ((m + 1) as f64).sqrt();
        for &(hi, lo, v) in &raising {
            for (r, c) in [((m + 1) * d + hi, m * d + lo), ((m + 1) * d + lo, m * d + hi)] {
                let (pr, pc) = (position[r], position[c]);
                if pr != usize::MAX && pc != usize::MAX {
                    h[(pr, pc)] += photon * v;
                    h[(pc, pr)] += photon * v;
                }
            }
        }
    }
    h
}

fn check_params(params: &ModelParams, basis: &DickeBasis) -> Result<()> {
    params.validate()?;
    basis.validate()?;
    if params.n_atoms != basis.n_atoms {
        return Err(Error::InvalidParameter(format!(
            "params have N={} but the basis has N={}",
            params.n_atoms, basis.n_atoms
        )));
    }
    Ok(())
}

/// max |HΠ − ΠH|.
pub fn parity_commutator(h: &DMatrix<f64>, basis: &DickeBasis) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..h.ncols() {
        for i in 0..h.nrows() {
            if basis.parity(i) != basis.parity(j) {
                worst = worst.max(2.0 * h[(i, j)].abs());
            }
        }
    }
    worst
}

/// max |H − Hᵀ|.
pub fn asymmetry(h: &DMatrix<f64>) -> f64 {
    (h - h.transpose()).amax()
}

/// Photon cutoff that holds the ground state comfortably: mean photon number
/// λ²N(1 − μ²)/ω² above λ_c (μ = λ_c²/λ²), plus seven standard deviations and a margin.
pub fn suggested_cutoff(params: &ModelParams) -> usize {
    let lc2 = params.critical_coupling().powi(2);
    let l2 = params.lambda * params.lambda;
    let mean = if l2 > lc2 {
        let mu = lc2 / l2;
        l2 * params.n_atoms as f64 * (1.0 - mu * mu) / (params.omega * params.omega)
    } else {
        0.0
    };
    (mean + 7.0 * (mean + 1.0).sqrt() + 20.0).ceil() as usize
}

#[derive(Debug, Clone)]
pub enum Representation {
    Pure {
        energy: f64,
        /// Amplitudes over the full basis.
        vector: Vec<f64>,
        /// Parity of the block the state came from.
        parity: i32,
    },
    Thermal {
        beta: f64,
        /// Ascending eigenvalues.
        energies: Vec<f64>,
        /// e^{−βE_k}/Z.
        weights: Vec<f64>,
    },
}

/// An exact state together with its reduced atomic density matrix.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub params: ModelParams,
    pub basis: DickeBasis,
    pub representation: Representation,
    /// Photon-traced ρ_atoms over the atomic basis.
    pub rho_atoms: DMatrix<f64>,
    /// For ground states: |E(cutoff) − E(1.5 cutoff)|.
    pub cutoff_shift: Option<f64>,
}

impl OracleState {
    /// Tr ρ_atoms.
    pub fn trace(&self) -> f64 {
        self.rho_atoms.trace()
    }

    /// Probability of n up spins, n ∈ 0..=N.
    pub fn excitation_probabilities(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.basis.n_atoms + 1];
        for s in 0..self.basis.atom_dimension() {
            p[self.basis.excitations(s)] += self.rho_atoms[(s, s)];
        }
        p
    }

    pub fn ground_energy(&self) -> Option<f64> {
        match self.representation {
            Representation::Pure { energy, .. } => Some(energy),
            Representation::Thermal { .. } => None,
        }
    }
}

/// ρ_atoms = Σ_m Bₘ Bₘᵀ where Bₘ holds the rows of `columns` belonging to photon level m.
fn trace_photon(basis: &DickeBasis, columns: &DMatrix<f64>) -> DMatrix<f64> {
    let d = basis.atom_dimension();
    let mut rho = DMatrix::zeros(d, d);
    for m in 0..basis.cutoff {
        let b = columns.rows(m * d, d);
        rho.gemm(1.0, &b, &b.transpose(), 1.0);
    }
    rho
}

/// Lowest state of one parity block: (energy, full-length vector).
fn block_ground(params: &ModelParams, basis: &DickeBasis, parity: i32) -> Result<(f64, Vec<f64>)> {
    let indices: Vec<usize> = (0..basis.dimension()).filter(|&i| basis.parity(i) == parity).collect();
    if indices.len() > DENSE_MAX_DIMENSION {
        return Err(Error::Capacity(format!(
            "parity block of {} states exceeds the dense limit {DENSE_MAX_DIMENSION}",
            indices.len()
        )));
    }
    let h = assemble(params, basis, &indices);
    let (e, v) = lowest_eigenpair(&h)?;
    let mut full = vec![0.0; basis.dimension()];
    for (k, &i) in indices.iter().enumerate() {
        full[i] = v[k];
    }
    Ok((e, full))
}

/// Symmetric-sector ground state at photon cutoff `cutoff`, refused unless the energy moves
/// by less than [`CUTOFF_SHIFT_LIMIT`] at 1.5 × `cutoff`. The two parity blocks are
/// diagonalized separately; the returned state is a parity eigenstate.
pub fn exact_ground_state(params: &ModelParams, cutoff: usize) -> Result<OracleState> {
    let basis = DickeBasis::symmetric(params.n_atoms, cutoff)?;
    check_params(params, &basis)?;
    let (e_even, v_even) = block_ground(params, &basis, 1)?;
    let (e_odd, v_odd) = block_ground(params, &basis, -1)?;
    let (energy, vector, parity) = if e_even <= e_odd { (e_even, v_even, 1) } else { (e_odd, v_odd, -1) };

    let bigger = DickeBasis::symmetric(params.n_atoms, (cutoff * 3).div_ceil(2))?;
    let (e_big, _) = block_ground(params, &bigger, parity)?;
    let shift = (energy - e_big).abs();
    if shift >= CUTOFF_SHIFT_LIMIT {
        return Err(Error::CutoffNotConverged { shift, from: cutoff, to: bigger.cutoff });
    }

    let column = DMatrix::from_column_slice(vector.len(), 1, &vector);
    let rho_atoms = trace_photon(&basis, &column);
    Ok(OracleState {
        params: *params,
        basis,
        representation: Representation::Pure { energy, vector, parity },
        rho_atoms,
        cutoff_shift: Some(shift),
    })
}

/// Gibbs state e^{−βH}/Z in the product basis from the full eigendecomposition.
pub fn exact_thermal_state(params: &ModelParams, cutoff: usize, beta: f64) -> Result<OracleState> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be positive and finite, got {beta}")));
    }
    let basis = DickeBasis::full_product(params.n_atoms, cutoff)?;
    let h = build_hamiltonian(params, &basis)?;
    let eig = symmetric_eigen(&h)?;
    let e0 = eig.eigenvalues[0];
    let boltzmann: Vec<f64> = eig.eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = boltzmann.iter().sum();
    let weights: Vec<f64> = boltzmann.iter().map(|w| w / z).collect();

    let mut scaled = eig.eigenvectors;
    for (k, w) in weights.iter().enumerate() {
        scaled.column_mut(k).scale_mut(w.sqrt());
    }
    let rho_atoms = trace_photon(&basis, &scaled);
    Ok(OracleState {
        params: *params,
        basis,
        representation: Representation::Thermal { beta, energies: eig.eigenvalues, weights },
        rho_atoms,
        cutoff_shift: None,
    })
}

/// ln Tr[e^{−βH₀} e^{−βH_I}] in the product basis, with H₀ = ω a†a and
/// H_I = ω₀J_z + (λ/√N)(a† + a)(J₊ + J₋).
///
/// H_I is diagonal in the eigenbasis {|x_k⟩} of the truncated quadrature a + a†, so the
/// trace is Σ_k ⟨x_k|e^{−βωa†a}|x_k⟩ Tr_atoms e^{−β(ω₀J_z + (λx_k/√N)(J₊ + J₋))}; each atomic
/// trace comes from a dense diagonalization on the 2^N space.
pub fn split_log_trace(params: &ModelParams, cutoff: usize, beta: f64) -> Result<f64> {
    let basis = DickeBasis::full_product(params.n_atoms, cutoff)?;
    check_params(params, &basis)?;
    let mut x = DMatrix::zeros(cutoff, cutoff);
    for m in 0..cutoff - 1 {
        let v = ((m + 1) as f64).sqrt();
        x[(m, m + 1)] = v;
        x[(m + 1, m)] = v;
    }
    let quad = symmetric_eigen(&x)?;
    let d = basis.atom_dimension();
    let raising = basis.raising();
    let g = params.lambda / (params.n_atoms as f64).sqrt();

    let mut terms = Vec::with_capacity(cutoff);
    for (k, &xk) in quad.eigenvalues.iter().enumerate() {
        let photon: f64 = (0..cutoff)
            .map(|m| (-beta * params.omega * m as f64).exp() * quad.eigenvectors[(m, k)].powi(2))
            .sum();
        let mut a = DMatrix::zeros(d, d);
        for s in 0..d {
            a[(s, s)] = params.omega0 * basis.jz(s);
        }
        for &(hi, lo, v) in &raising {
            a[(hi, lo)] += g * xk * v;
            a[(lo, hi)] += g * xk * v;
        }
        let levels = symmetric_eigen(&a)?.eigenvalues;
        let e_min = levels[0];
        let atoms: f64 = levels.iter().map(|e| (-beta * (e - e_min)).exp()).sum();
        terms.push(photon.ln() + atoms.ln() - beta * e_min);
    }
    Ok(crate::numerics::log_sum_exp(&terms))
}

/// Tr[ρ_atoms ρ^s] evaluated along two independent paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOverlap {
    /// Excitation distribution times the reference weights.
    pub from_diagonal: f64,
    /// Full matrix trace against the explicitly assembled reference state.
    pub from_trace: f64,
}

impl OracleOverlap {
    pub fn value(&self) -> f64 {
        self.from_diagonal
    }

    pub fn discrepancy(&self) -> f64 {
        (self.from_diagonal - self.from_trace).abs()
    }
}

/// Δ = Tr[ρ_atoms ρ^s] (see the module notes for the convention in each basis).
/// Fails if the two evaluation paths differ by more than [`OVERLAP_PATH_LIMIT`].
pub fn exact_overlap(state: &OracleState, sep: &SeparableState) -> Result<OracleOverlap> {
    let basis = &state.basis;
    if sep.n_atoms() != basis.n_atoms {
        return Err(Error::InvalidParameter(format!(
            "reference state has N={} but the oracle state has N={}",
            sep.n_atoms(),
            basis.n_atoms
        )));
    }
    let p = state.excitation_probabilities();
    let reference = reference_matrix(basis, sep.a());
    let from_diagonal = match basis.kind {
        BasisKind::SymmetricSector => p.iter().zip(sep.weights()).map(|(p, w)| p * w).sum(),
        BasisKind::FullProduct => {
            let mut acc = 0.0;
            for (n, pn) in p.iter().enumerate() {
                acc += pn * sep.log_config_weight(n)?.exp();
            }
            acc
        }
    };
    let from_trace = state.rho_atoms.component_mul(&reference.transpose()).sum();
    let out = OracleOverlap { from_diagonal, from_trace };
    if out.discrepancy() > OVERLAP_PATH_LIMIT {
        return Err(Error::InternalConsistency(format!(
            "overlap paths disagree: {from_diagonal} vs {from_trace}"
        )));
    }
    Ok(out)
}

/// ρ^s as a matrix over the atomic basis.
fn reference_matrix(basis: &DickeBasis, a: f64) -> DMatrix<f64> {
    let n = basis.n_atoms;
    match basis.kind {
        BasisKind::FullProduct => {
            // Atom i is bit i; the Kronecker product puts the last factor on bit 0.
            let single = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 - a, a]));
            (1..n).fold(single.clone(), |acc, _| single.kronecker(&acc))
        }
        BasisKind::SymmetricSector => {
            // C(N,n) ⟨D_n|ρ₁^{⊗N}|D_n⟩ with the binomial built multiplicatively.
            let mut c = 1.0;
            let mut diag = Vec::with_capacity(n + 1);
            for k in 0..=n {
                if k > 0 {
                    c = c * (n + 1 - k) as f64 / k as f64;
                }
                diag.push(c * a.powi(k as i32) * (1.0 - a).powi((n - k) as i32));
            }
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
        }
    }
}

/// ⟨J_α⟩/N and ⟨J_α²⟩/N² by applying the collective operators to ρ_atoms.
pub fn exact_moments(state: &OracleState) -> Result<MomentSet> {
    let basis = &state.basis;
    let d = basis.atom_dimension();
    let mut jp = DMatrix::zeros(d, d);
    for (hi, lo, v) in basis.raising() {
        jp[(hi, lo)] += v;
    }
    let jm = jp.transpose();
    let jz = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, (0..d).map(|s| basis.jz(s))));
    let jx = (&jp + &jm) * 0.5;
    // J_y = −iK with K = (J₊ − J₋)/2 real, so J_y² = −K² and ⟨J_y⟩ = −i Tr[ρK] = 0 for real ρ.
    let k = (&jp - &jm) * 0.5;
    let jy2 = -(&k * &k);
    let rho = &state.rho_atoms;
    let expect = |op: &DMatrix<f64>| rho.component_mul(&op.transpose()).sum();
    let n = basis.n_atoms as f64;
    let n2 = n * n;
    MomentSet::new(
        basis.n_atoms,
        [expect(&jx) / n, 0.0, expect(&jz) / n],
        [expect(&(&jx * &jx)) / n2, expect(&jy2) / n2, expect(&(&jz * &jz)) / n2],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: f64, n: usize) -> ModelParams {
        ModelParams::resonant(l, n).unwrap()
    }

    #[test]
    fn decoupled_symmetric_matrix_is_diagonal() {
        let basis = DickeBasis::symmetric(3, 5).unwrap();
        let h = build_hamiltonian(&p(0.0, 3), &basis).unwrap();
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                let (m, n) = (i / 4, i % 4);
                let want = if i == j { m as f64 + n as f64 - 1.5 } else { 0.0 };
                assert_eq!(h[(i, j)], want);
            }
        }
    }

    #[test]
    fn rabi_limit() {
        let basis = DickeBasis::symmetric(1, 30).unwrap();
        let e = lowest_eigenpair(&build_hamiltonian(&p(0.0, 1), &basis).unwrap()).unwrap().0;
        assert!((e + 0.5).abs() < 1e-14);
        // One atom: both bases coincide.
        let full = DickeBasis::full_product(1, 30).unwrap();
        let a = build_hamiltonian(&p(0.7, 1), &basis).unwrap();
        let b = build_hamiltonian(&p(0.7, 1), &full).unwrap();
        assert!((a - b).amax() < 1e-15);
    }

    #[test]
    fn parity_and_symmetry() {
        for basis in [DickeBasis::symmetric(6, 12).unwrap(), DickeBasis::full_product(4, 12).unwrap()] {
            let h = build_hamiltonian(&p(0.9, basis.n_atoms), &basis).unwrap();
            assert!(parity_commutator(&h, &basis) < 1e-12);
            assert!(asymmetry(&h) < 1e-13);
        }
    }

    #[test]
    fn capacity_bounds() {
        assert!(matches!(DickeBasis::full_product(7, 10), Err(Error::Capacity(_))));
        assert!(matches!(DickeBasis::symmetric(999, 201), Err(Error::Capacity(_))));
        assert!(DickeBasis::symmetric(999, 200).is_ok());
        assert!(matches!(
            build_hamiltonian(&p(0.3, 100), &DickeBasis::symmetric(100, 100).unwrap()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn decoupled_ground_state() {
        let s = exact_ground_state(&p(0.0, 10), 10).unwrap();
        let Representation::Pure { energy, vector, parity } = &s.representation else { panic!() };
        assert!((energy + 5.0).abs() < 1e-12);
        assert_eq!(*parity, 1);
        assert!((vector[0].abs() - 1.0).abs() < 1e-14);
        let sep = SeparableState::new(0.0, 10).unwrap();
        let o = exact_overlap(&s, &sep).unwrap();
        assert!((o.value() - 1.0).abs() < 1e-12);
        let m = exact_moments(&s).unwrap();
        assert!((m.first[2] + 0.5).abs() < 1e-14);
        assert!((m.second[0] - 0.025).abs() < 1e-14);
        assert!((m.variance(crate::witness::Axis::Z)).abs() < 1e-14);
    }

    #[test]
    fn bases_agree_on_ground_energy() {
        for n in 1..=4 {
            let params = p(0.8, n);
            let sym = exact_ground_state(&params, 40).unwrap().ground_energy().unwrap();
            let full = build_hamiltonian(&params, &DickeBasis::full_product(n, 40).unwrap()).unwrap();
            let e = lowest_eigenpair(&full).unwrap().0;
            assert!((sym - e).abs() < 1e-9, "N={n}: {sym} vs {e}");
        }
    }

    #[test]
    fn ground_state_is_parity_eigenstate() {
        let s = exact_ground_state(&p(0.4, 20), 40).unwrap();
        let Representation::Pure { vector, parity, .. } = &s.representation else { panic!() };
        let wrong: f64 = vector.iter().enumerate().filter(|(i, _)| s.basis.parity(*i) != *parity).map(|(_, v)| v * v).sum();
        assert_eq!(wrong, 0.0);
        assert!((s.trace() - 1.0).abs() < 1e-12);
        // Weak coupling stays near the all-down state.
        let m = exact_moments(&s).unwrap();
        assert!((m.first[2] + 0.5).abs() < 2.0 / 20.0);
        assert_eq!(m.first[0], 0.0);
    }

    #[test]
    fn unconverged_cutoff_is_refused() {
        assert!(matches!(exact_ground_state(&p(1.0, 10), 8), Err(Error::CutoffNotConverged { .. })));
    }

    #[test]
    fn infinite_temperature_limit() {
        let s = exact_thermal_state(&p(1.0, 3), 10, 1e-6).unwrap();
        let d = s.basis.atom_dimension();
        let uniform = 1.0 / d as f64;
        // Trace distance to the maximally mixed state.
        let diff = &s.rho_atoms - DMatrix::<f64>::identity(d, d) * uniform;
        let dist = 0.5 * symmetric_eigen(&diff).unwrap().eigenvalues.iter().map(|e| e.abs()).sum::<f64>();
        assert!(dist < 1e-5, "{dist}");
        for a in [0.0, 0.3, 0.5] {
            let o = exact_overlap(&s, &SeparableState::new(a, 3).unwrap()).unwrap();
            assert!((o.value() - 0.125).abs() < 1e-6);
        }
    }

    #[test]
    fn decoupled_thermal_state_is_free_spins() {
        let beta = 0.7;
        let s = exact_thermal_state(&p(0.0, 3), 30, beta).unwrap();
        // Single-atom up probability e^{−βω₀/2}/(2cosh(βω₀/2)).
        let up = (-beta / 2.0f64).exp() / (2.0 * (beta / 2.0f64).cosh());
        for sa in 0..8usize {
            for sb in 0..8usize {
                let k = sa.count_ones() as i32;
                let want = if sa == sb { up.powi(k) * (1.0 - up).powi(3 - k) } else { 0.0 };
                assert!((s.rho_atoms[(sa, sb)] - want).abs() < 1e-10);
            }
        }
        let m = exact_moments(&s).unwrap();
        assert!((m.first[2] + 0.5 * (beta / 2.0f64).tanh()).abs() < 1e-10);
        // Independent spins: ⟨J_x²⟩ = N/4.
        assert!((m.second[0] - 0.75 / 9.0).abs() < 1e-10);
        assert!((m.second[1] - 0.75 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn thermal_overlap_paths_agree() {
        let s = exact_thermal_state(&p(1.0, 4), 30, 0.2).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-12);
        let Representation::Thermal { weights, .. } = &s.representation else { panic!() };
        assert!(weights.iter().all(|w| *w >= 0.0));
        for a in [0.1, 0.37, 0.5, 0.9] {
            let o = exact_overlap(&s, &SeparableState::new(a, 4).unwrap()).unwrap();
            assert!(o.discrepancy() < 1e-12);
            assert!((0.0..=1.0).contains(&o.value()));
        }
    }

    #[test]
    fn split_trace_decoupled() {
        // λ = 0: the split is exact, Z = Z_photon(truncated) · (2cosh(βω₀/2))^N.
        let beta = 0.3;
        let cutoff = 50;
        let photon: f64 = (0..cutoff).map(|m| (-beta * m as f64).exp()).sum();
        let want = photon.ln() + 3.0 * (2.0 * (beta / 2.0f64).cosh()).ln();
        let got = split_log_trace(&p(0.0, 3), cutoff, beta).unwrap();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn suggested_cutoff_grows_with_photons() {
        assert_eq!(suggested_cutoff(&p(0.2, 40)), 27);
        assert!(suggested_cutoff(&p(1.0, 40)) > 80);
    }
}
