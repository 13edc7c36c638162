//! Exact Gaussian-state evaluation of the effective ground state.
//!
//! The ground state of a quadratic Hamiltonian is Gaussian, so the reduced atom state is
//! fixed by its covariance σ_b = diag(⟨x_b²⟩, ⟨p_b²⟩) and mean d = (√(2α), 0). The
//! occupation distribution follows from the generating function
//!
//! G(s) = Tr[ρ_b s^{b†b}] = exp(−½ dᵀ(σ_b + cI)⁻¹ d) / ((1 − s) √det(σ_b + cI)),
//! c = (1 + s)/(2(1 − s)),
//!
//! sampled on the unit circle and inverted by a discrete Fourier sum. This path has no
//! Fock truncation, so it stays accurate arbitrarily close to λ_c where the dense
//! diagonalization would need very large cutoffs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseLabel};

use super::hamiltonian::EffectiveCoefficients;

/// Reduced atom-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianAtomState {
    pub params: ModelParams,
    pub phase: PhaseLabel,
    /// ⟨x_b²⟩ − ⟨x_b⟩², with x = (b + b†)/√2 (vacuum: ½).
    pub var_x: f64,
    /// ⟨p_b²⟩ (vacuum: ½).
    pub var_p: f64,
    /// ⟨x_b⟩ = √(2α).
    pub mean_x: f64,
    pub ground_energy: f64,
}

/// Fourier samples used to invert the generating function.
const MIN_SAMPLES: usize = 8192;

impl GaussianAtomState {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        if params.lambda == params.critical_coupling() {
            return Err(Error::CriticalPoint("the Gaussian ground state does not exist at lambda_c".into()));
        }
        let c = EffectiveCoefficients::for_params(params)?;
        let (xx, pp) = c.ground_covariances()?;
        Ok(Self {
            params: *params,
            phase: c.phase,
            var_x: xx[(1, 1)],
            var_p: pp[(1, 1)],
            mean_x: 2f64.sqrt() * c.displacement_atom,
            ground_energy: c.gaussian_ground_energy()?,
        })
    }

    /// Tr ρ_b² = 1/(2√det σ_b).
    pub fn purity(&self) -> f64 {
        0.5 / (self.var_x * self.var_p).sqrt()
    }

    /// ⟨b†b⟩ in the physical frame.
    pub fn mean_occupation(&self) -> f64 {
        0.5 * (self.var_x + self.var_p - 1.0) + 0.5 * self.mean_x * self.mean_x
    }

    /// P(0) = exp(−½ dᵀ(σ + ½I)⁻¹ d)/√det(σ + ½I).
    pub fn vacuum_probability(&self) -> f64 {
        let (a, b) = (self.var_x + 0.5, self.var_p + 0.5);
        (-0.5 * self.mean_x * self.mean_x / a).exp() / (a * b).sqrt()
    }

    fn generating_function(&self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let c = (one + s) / (2.0 * (one - s));
        let (a, b) = (c + self.var_x, c + self.var_p);
        let exponent = -0.5 * self.mean_x * self.mean_x / a;
        exponent.exp() / ((one - s) * a.sqrt() * b.sqrt())
    }

    /// P(n) for n ∈ 0..=N.
    pub fn occupation_probabilities(&self) -> Vec<f64> {
        let n_max = self.params.n_atoms;
        let samples = MIN_SAMPLES.max((8 * (n_max + 1)).next_power_of_two());
        let g: Vec<(Complex64, f64)> = (0..samples)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / samples as f64;
                (self.generating_function(Complex64::from_polar(1.0, theta)), theta)
            })
            .collect();
        (0..=n_max)
            .map(|n| {
                let sum: f64 = g
                    .iter()
                    .map(|(gk, theta)| (gk * Complex64::from_polar(1.0, -(n as f64) * theta)).re)
                    .sum();
                (sum / samples as f64).max(0.0)
            })
            .collect()
    }
}

/// Exact normal-phase P(0) for ω = ω₀ = 1:
/// 4√(uv)/√((u + v + 2uv)(u + v + 2)), u = √(1 + 2λ), v = √(1 − 2λ).
///
/// This equals 1 at λ = 0 and vanishes like (1 − 4λ²)^{1/4} at λ_c.
pub fn normal_phase_vacuum_probability(lambda: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&lambda) {
        return Err(Error::Domain(format!("needs 0 <= lambda < 1/2, got {lambda}")));
    }
    let u = (1.0 + 2.0 * lambda).sqrt();
    let v = (1.0 - 2.0 * lambda).sqrt();
    Ok(4.0 * (u * v).sqrt() / ((u + v + 2.0 * u * v) * (u + v + 2.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerotemp::{atom_diagonal_probabilities, ground_state, reduced_atom_purity, Cutoffs};

    #[test]
    fn vacuum_distribution() {
        let g = GaussianAtomState::new(&ModelParams::resonant(0.0, 10).unwrap()).unwrap();
        let p = g.occupation_probabilities();
        assert!((p[0] - 1.0).abs() < 1e-12);
        assert!(p[1..].iter().all(|x| x.abs() < 1e-12));
        assert!((g.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_vacuum_probability() {
        assert!((normal_phase_vacuum_probability(0.0).unwrap() - 1.0).abs() < 1e-15);
        for l in [0.1, 0.3, 0.4, 0.49] {
            let g = GaussianAtomState::new(&ModelParams::resonant(l, 10).unwrap()).unwrap();
            let exact = normal_phase_vacuum_probability(l).unwrap();
            assert!((g.vacuum_probability() - exact).abs() < 1e-12);
            assert!((g.occupation_probabilities()[0] - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn agrees_with_truncated_diagonalization() {
        for (l, n) in [(0.3, 20), (0.45, 20), (0.7, 40), (1.0, 40), (1.4, 60)] {
            let params = ModelParams::resonant(l, n).unwrap();
            let g = GaussianAtomState::new(&params).unwrap();
            let s = ground_state(&params, Cutoffs::TEST).unwrap();
            assert!((g.ground_energy - s.ground_energy).abs() < 1e-8, "lambda={l}");
            assert!((g.purity() - reduced_atom_purity(&s)).abs() < 1e-8, "lambda={l}");
            let pe = atom_diagonal_probabilities(&s);
            let pg = g.occupation_probabilities();
            for (a, b) in pe.iter().zip(&pg) {
                assert!((a - b).abs() < 1e-9, "lambda={l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn occupation_mean_matches_moments() {
        let g = GaussianAtomState::new(&ModelParams::resonant(0.9, 60).unwrap()).unwrap();
        let p = g.occupation_probabilities();
        let mean: f64 = p.iter().enumerate().map(|(n, x)| n as f64 * x).sum();
        assert!((mean - g.mean_occupation()).abs() < 1e-8);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}
