//! Effective two-mode Hamiltonians from the Holstein–Primakoff expansion.
//!
//! Normal phase (λ < λ_c):
//!     H⁽¹⁾ = ω a†a + ω₀ b†b + λ(a† + a)(b† + b) − Nω₀/2
//! Superradiant phase (λ > λ_c), in the frame where b is shifted by its mean field:
//!     H⁽²⁾ = ω a†a + Ω b†b + κ(b + b†)² + g(a† + a)(b† + b) + E_mf
//! with Ω = ω₀ + 2(λ² − λ_c²)/ω, κ = (λ² − λ_c²)(3λ² + λ_c²)/(2ω(λ² + λ_c²)),
//! g = √2 λ_c²/√(λ² + λ_c²) and the mean-field energy E_mf = −N(λ²/ω + λ_c⁴/(λ²ω)).

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseLabel};

/// Fock-space truncation of the photon (a) and atom (b) modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoffs {
    pub photon: usize,
    pub atom: usize,
}

impl Cutoffs {
    pub const MIN: usize = 8;
    /// Used by the test suite.
    pub const TEST: Cutoffs = Cutoffs { photon: 30, atom: 30 };
    /// Used for plotted sweeps.
    pub const PLOT: Cutoffs = Cutoffs { photon: 60, atom: 60 };

    pub fn new(photon: usize, atom: usize) -> Result<Self> {
        let c = Self { photon, atom };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.photon < Self::MIN || self.atom < Self::MIN {
            return Err(Error::InvalidParameter(format!(
                "cutoffs must be at least {}, got photon={} atom={}",
                Self::MIN,
                self.photon,
                self.atom
            )));
        }
        Ok(())
    }

    /// Both cutoffs grown by `factor`, rounded up.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            photon: (self.photon as f64 * factor).ceil() as usize,
            atom: (self.atom as f64 * factor).ceil() as usize,
        }
    }

    pub fn dimension(&self) -> usize {
        self.photon * self.atom
    }
}

impl Default for Cutoffs {
    fn default() -> Self {
        Self::TEST
    }
}

/// Coefficients of H = ω a†a + Ω b†b + κ(b + b†)² + g(a† + a)(b† + b) + offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    pub phase: PhaseLabel,
    pub photon: f64,
    pub atom: f64,
    pub squeeze: f64,
    pub coupling: f64,
    pub offset: f64,
    /// √α: the physical atom mode is b_phys = b + √α. Zero in the normal phase.
    pub displacement_atom: f64,
}

impl EffectiveCoefficients {
    pub fn new(params: &ModelParams, phase: PhaseLabel) -> Result<Self> {
        params.validate()?;
        let lc = params.critical_coupling();
        let (w, w0, l, n) = (params.omega, params.omega0, params.lambda, params.n_atoms as f64);
        match phase {
            PhaseLabel::Normal => {
                if l > lc {
                    return Err(Error::InvalidParameter(format!(
                        "normal-phase Hamiltonian requested at lambda={l} above lambda_c={lc}"
                    )));
                }
                Ok(Self {
                    phase,
                    photon: w,
                    atom: w0,
                    squeeze: 0.0,
                    coupling: l,
                    offset: -n * w0 / 2.0,
                    displacement_atom: 0.0,
                })
            }
            PhaseLabel::Superradiant => {
                if l <= lc {
                    return Err(Error::InvalidParameter(format!(
                        "superradiant Hamiltonian requested at lambda={l} not above lambda_c={lc}"
                    )));
                }
                let (l2, lc2) = (l * l, lc * lc);
                let mu = lc2 / l2;
                Ok(Self {
                    phase,
                    photon: w,
                    atom: w0 + 2.0 * (l2 - lc2) / w,
                    squeeze: (l2 - lc2) * (3.0 * l2 + lc2) / (2.0 * w * (l2 + lc2)),
                    coupling: 2f64.sqrt() * lc2 / (l2 + lc2).sqrt(),
                    offset: -n * (l2 / w + lc2 * lc2 / (l2 * w)),
                    displacement_atom: (n * (1.0 - mu) / 2.0).sqrt(),
                })
            }
        }
    }

    /// Coefficients for the ground-state phase of `params`.
    pub fn for_params(params: &ModelParams) -> Result<Self> {
        Self::new(params, params.phase())
    }

    /// Position-quadrature form H = ½pᵀKp + ½xᵀVx + const with x = (c + c†)/√2,
    /// ordered (photon, atom).
    pub fn quadratic_form(&self) -> (Matrix2<f64>, Matrix2<f64>) {
        let k = Matrix2::new(self.photon, 0.0, 0.0, self.atom);
        let v = Matrix2::new(
            self.photon,
            2.0 * self.coupling,
            2.0 * self.coupling,
            self.atom + 4.0 * self.squeeze,
        );
        (k, v)
    }

    /// Squared normal-mode frequencies: eigenvalues of K^{1/2} V K^{1/2}, ascending.
    pub fn squared_frequencies(&self) -> [f64; 2] {
        let (k, v) = self.quadratic_form();
        let ks = k.map(f64::sqrt);
        let w = ks * v * ks;
        let tr = w[(0, 0)] + w[(1, 1)];
        let det = w[(0, 0)] * w[(1, 1)] - w[(0, 1)] * w[(1, 0)];
        let disc = ((w[(0, 0)] - w[(1, 1)]).powi(2) + 4.0 * w[(0, 1)] * w[(1, 0)]).sqrt();
        let hi = 0.5 * (tr + disc);
        // det/hi avoids cancellation in the soft mode.
        let lo = if hi > 0.0 { det / hi } else { 0.5 * (tr - disc) };
        [lo, hi]
    }

    /// Exact ground energy of the quadratic Hamiltonian, ½(ω₋ + ω₊) − ½(ω + Ω) + offset.
    pub fn gaussian_ground_energy(&self) -> Result<f64> {
        let [lo, hi] = self.squared_frequencies();
        if !(lo > 0.0) {
            return Err(Error::CriticalPoint(format!("soft mode frequency squared is {lo}")));
        }
        Ok(0.5 * (lo.sqrt() + hi.sqrt()) - 0.5 * (self.photon + self.atom) + self.offset)
    }

    /// Ground-state covariances of (x, p) for both modes: (⟨x xᵀ⟩, ⟨p pᵀ⟩).
    /// The x–p cross block vanishes for this real Hamiltonian.
    pub fn ground_covariances(&self) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
        let (k, v) = self.quadratic_form();
        let ks = k.map(f64::sqrt);
        let ks_inv = Matrix2::new(1.0 / ks[(0, 0)], 0.0, 0.0, 1.0 / ks[(1, 1)]);
        let w = ks * v * ks;
        let eig = SymmetricEigen::new(w);
        if eig.eigenvalues.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::CriticalPoint(format!(
                "quadratic form is not positive definite (eigenvalues {:?})",
                eig.eigenvalues.as_slice()
            )));
        }
        let q = eig.eigenvectors;
        let w_half = q * Matrix2::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * q.transpose();
        let w_mhalf = q * Matrix2::from_diagonal(&eig.eigenvalues.map(|e| 1.0 / e.sqrt())) * q.transpose();
        let xx = 0.5 * ks * w_mhalf * ks;
        let pp = 0.5 * ks_inv * w_half * ks_inv;
        Ok((xx, pp))
    }
}

/// Dense matrix of the effective Hamiltonian for `phase` in the basis |m⟩_a ⊗ |n⟩_b,
/// flattened as `m * cutoffs.atom + n`.
pub fn effective_hamiltonian(params: &ModelParams, phase: PhaseLabel, cutoffs: Cutoffs) -> Result<DMatrix<f64>> {
    cutoffs.validate()?;
    let coeffs = EffectiveCoefficients::new(params, phase)?;
    Ok(hamiltonian_matrix(&coeffs, cutoffs))
}

pub(crate) fn hamiltonian_matrix(c: &EffectiveCoefficients, cutoffs: Cutoffs) -> DMatrix<f64> {
    let (cp, ca) = (cutoffs.photon, cutoffs.atom);
    let dim = cp * ca;
    let idx = |m: usize, n: usize| m * ca + n;
    let mut h = DMatrix::zeros(dim, dim);
    for m in 0..cp {
        for n in 0..ca {
            let i = idx(m, n);
            // (b + b†)² = b² + b†² + 2b†b + 1
            h[(i, i)] = c.photon * m as f64 + c.atom * n as f64 + c.squeeze * (2.0 * n as f64 + 1.0) + c.offset;
            if n + 2 < ca {
                let v = c.squeeze * (((n + 1) * (n + 2)) as f64).sqrt();
                let j = idx(m, n + 2);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
            if m + 1 < cp {
                let am = ((m + 1) as f64).sqrt();
                if n + 1 < ca {
                    let v = c.coupling * am * ((n + 1) as f64).sqrt();
                    let j = idx(m + 1, n + 1);
                    h[(i, j)] = v;
                    h[(j, i)] = v;
                }
                if n >= 1 {
                    let v = c.coupling * am * (n as f64).sqrt();
                    let j = idx(m + 1, n - 1);
                    h[(i, j)] = v;
                    h[(j, i)] = v;
                }
            }
        }
    }
    h
}

/// Normal-mode excitation energies of the effective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonFrequencies {
    pub omega_minus: f64,
    pub omega_plus: f64,
}

pub fn polariton_frequencies(params: &ModelParams) -> Result<PolaritonFrequencies> {
    params.validate()?;
    if params.lambda == params.critical_coupling() {
        return Err(Error::CriticalPoint(format!(
            "lambda = lambda_c = {}: the soft mode vanishes",
            params.lambda
        )));
    }
    let [lo, hi] = EffectiveCoefficients::for_params(params)?.squared_frequencies();
    Ok(PolaritonFrequencies { omega_minus: lo.max(0.0).sqrt(), omega_plus: hi.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: f64) -> ModelParams {
        ModelParams::resonant(l, 20).unwrap()
    }

    #[test]
    fn decoupled_matrix_is_diagonal() {
        let params = ModelParams::new(1.3, 0.7, 0.0, 10).unwrap();
        let c = Cutoffs::new(9, 8).unwrap();
        let h = effective_hamiltonian(&params, PhaseLabel::Normal, c).unwrap();
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                let (m, n) = (i / 8, i % 8);
                let expected = if i == j { 1.3 * m as f64 + 0.7 * n as f64 - 10.0 * 0.7 / 2.0 } else { 0.0 };
                assert!((h[(i, j)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coupling_has_ladder_structure() {
        let c = Cutoffs::new(20, 20).unwrap();
        let h = effective_hamiltonian(&p(0.3), PhaseLabel::Normal, c).unwrap();
        assert_eq!(h, h.transpose());
        // ⟨1,1|λ(a†+a)(b†+b)|0,0⟩ = λ and ⟨2,0|…|1,1⟩ = λ√2.
        assert!((h[(20 + 1, 0)] - 0.3).abs() < 1e-15);
        assert!((h[(2 * 20, 20 + 1)] - 0.3 * 2f64.sqrt()).abs() < 1e-15);
        // No element connects states whose total excitation parity differs.
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                if (i / 20 + i % 20 + j / 20 + j % 20) % 2 == 1 {
                    assert_eq!(h[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn superradiant_coefficients() {
        let c = EffectiveCoefficients::new(&p(0.8), PhaseLabel::Superradiant).unwrap();
        assert!((c.atom - 1.78).abs() < 1e-14);
        let (l2, lc2) = (0.64, 0.25);
        assert!((c.squeeze - (l2 - lc2) * (3.0 * l2 + lc2) / (2.0 * (l2 + lc2))).abs() < 1e-14);
        assert!((c.coupling - 2f64.sqrt() * lc2 / (l2 + lc2).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn phase_mismatch_rejected() {
        assert!(EffectiveCoefficients::new(&p(0.8), PhaseLabel::Normal).is_err());
        assert!(EffectiveCoefficients::new(&p(0.3), PhaseLabel::Superradiant).is_err());
        assert!(Cutoffs::new(7, 30).is_err());
    }

    #[test]
    fn mean_field_energy_is_continuous() {
        let below = EffectiveCoefficients::new(&p(0.5), PhaseLabel::Normal).unwrap().offset;
        let above = EffectiveCoefficients::new(&p(0.5 + 1e-9), PhaseLabel::Superradiant).unwrap().offset;
        assert!((below - above).abs() < 1e-6);
    }

    #[test]
    fn frequencies_decoupled() {
        let f = polariton_frequencies(&ModelParams::new(2.0, 0.5, 0.0, 4).unwrap()).unwrap();
        assert!((f.omega_minus - 0.5).abs() < 1e-14);
        assert!((f.omega_plus - 2.0).abs() < 1e-14);
    }

    #[test]
    fn soft_mode_closes_at_critical_point() {
        assert!(matches!(polariton_frequencies(&p(0.5)), Err(Error::CriticalPoint(_))));
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let l = 0.3 + 0.2 * i as f64 / 50.0 + 0.0039;
            let f = polariton_frequencies(&p(l)).unwrap();
            assert!(f.omega_minus < prev && f.omega_minus <= f.omega_plus);
            prev = f.omega_minus;
        }
        assert!(polariton_frequencies(&p(0.49999)).unwrap().omega_minus < 0.01);
        assert!(polariton_frequencies(&p(0.50001)).unwrap().omega_minus < 0.01);
    }

    #[test]
    fn vacuum_covariances_when_decoupled() {
        let c = EffectiveCoefficients::for_params(&p(0.0)).unwrap();
        let (xx, pp) = c.ground_covariances().unwrap();
        assert!((xx - Matrix2::identity() * 0.5).norm() < 1e-15);
        assert!((pp - Matrix2::identity() * 0.5).norm() < 1e-15);
    }
}
