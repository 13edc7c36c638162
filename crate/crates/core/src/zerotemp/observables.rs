use nalgebra::DMatrix;

use crate::error::{Error, Mode, Result};
use crate::model::PhaseLabel;
use crate::numerics::symmetric_eigen;
use crate::separable::SeparableState;
use crate::witness::MomentSet;

use super::state::TwoModeState;

/// Largest norm the HP constraint n ≤ N may cut from a state before results are refused.
pub const HP_LEAK_LIMIT: f64 = 1e-10;
/// Binomial mass that must lie inside the represented occupation range.
pub const WEIGHT_MASS_LIMIT: f64 = 1e-12;

fn checked_physical(state: &TwoModeState) -> Result<DMatrix<f64>> {
    let psi = state.physical_amplitudes();
    let leak = (1.0 - psi.iter().map(|a| a * a).sum::<f64>()).max(0.0);
    if leak > HP_LEAK_LIMIT {
        return Err(Error::CutoffTooSmall { mode: Mode::Atom, tail: leak, limit: HP_LEAK_LIMIT });
    }
    Ok(psi)
}

/// P(n) for the physical atom occupation n = J_z + N/2 (photon traced out).
pub fn atom_diagonal_probabilities(state: &TwoModeState) -> Vec<f64> {
    let psi = state.physical_amplitudes();
    psi.column_iter().map(|c| c.norm_squared()).collect()
}

/// ρ_b in the physical frame, indexed by n = J_z + N/2.
pub fn reduced_atom_matrix(state: &TwoModeState) -> DMatrix<f64> {
    let psi = state.physical_amplitudes();
    psi.transpose() * psi
}

/// Tr ρ_b². The displacement is unitary, so the stored frame gives the same value.
pub fn reduced_atom_purity(state: &TwoModeState) -> f64 {
    let c = state.amplitude_matrix();
    let rho = c.transpose() * c;
    rho.iter().map(|x| x * x).sum()
}

/// Purity computed as Σ μ² over the eigenvalues μ of ρ_b, an independent path to
/// [`reduced_atom_purity`].
pub fn reduced_atom_purity_spectral(state: &TwoModeState) -> Result<f64> {
    let c = state.amplitude_matrix();
    let rho = c.transpose() * c;
    Ok(symmetric_eigen(&rho)?.eigenvalues.iter().map(|m| m * m).sum())
}

/// Δ = Σₙ wₙ P(n) with wₙ the binomial weights of `sep`.
pub fn overlap_zero_t(state: &TwoModeState, sep: &SeparableState) -> Result<f64> {
    if sep.n_atoms() != state.params.n_atoms {
        return Err(Error::InvalidParameter(format!(
            "reference state has N={} but the ground state has N={}",
            sep.n_atoms(),
            state.params.n_atoms
        )));
    }
    let p = atom_diagonal_probabilities(state);
    overlap_from_diagonal(&p, sep)
}

/// Σₙ wₙ pₙ over the represented range, refusing when the weights put more than
/// [`WEIGHT_MASS_LIMIT`] beyond it.
pub fn overlap_from_diagonal(p: &[f64], sep: &SeparableState) -> Result<f64> {
    let w = sep.weights();
    let outside: f64 = w.iter().skip(p.len()).sum();
    if outside > WEIGHT_MASS_LIMIT {
        return Err(Error::CutoffTooSmall { mode: Mode::Atom, tail: outside, limit: WEIGHT_MASS_LIMIT });
    }
    Ok(p.iter().zip(&w).map(|(a, b)| a * b).sum())
}

/// Closed form for ω = ω₀ = 1 and λ < ½:
///
/// 2^{3/2}(1 − 4λ²)^{1/4} / [1 + 3√(1 − 4λ²) + ½(√(1 + 2λ) + √(1 − 2λ))³].
///
/// Evaluates to 2^{3/2}/8 ≈ 0.354 at λ = 0, where the true overlap is 1; it is kept for
/// comparison only. [`super::gaussian::normal_phase_vacuum_probability`] is the exact
/// normal-phase value.
pub fn closed_form_overlap_normal(lambda: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&lambda) {
        return Err(Error::Domain(format!("closed form needs 0 <= lambda < 1/2, got {lambda}")));
    }
    let s = (1.0 - 4.0 * lambda * lambda).sqrt();
    let u = (1.0 + 2.0 * lambda).sqrt() + (1.0 - 2.0 * lambda).sqrt();
    Ok(2f64.powf(1.5) * s.sqrt() / (1.0 + 3.0 * s + 0.5 * u * u * u))
}

/// Least-squares fit of −ln Δ against −ln(1 − λ/λ_c).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    /// Observed minus fitted −ln Δ, in input order.
    pub residuals: Vec<f64>,
}

pub fn scaling_fit(lambda_grid: &[f64], delta_values: &[f64], lambda_c: f64) -> Result<ScalingFit> {
    if lambda_grid.len() != delta_values.len() {
        return Err(Error::InvalidInput(format!(
            "{} couplings but {} overlaps",
            lambda_grid.len(),
            delta_values.len()
        )));
    }
    if lambda_grid.len() < 4 {
        return Err(Error::InsufficientData { need: 4, got: lambda_grid.len() });
    }
    if let Some(l) = lambda_grid.iter().find(|&&l| !(l < lambda_c) || l < 0.0) {
        return Err(Error::Domain(format!("coupling {l} is not in [0, lambda_c={lambda_c})")));
    }
    if let Some(d) = delta_values.iter().find(|&&d| !(d > 0.0)) {
        return Err(Error::Domain(format!("overlap {d} is not positive")));
    }
    let x: Vec<f64> = lambda_grid.iter().map(|l| -(1.0 - l / lambda_c).ln()).collect();
    let y: Vec<f64> = delta_values.iter().map(|d| -d.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData { need: 2, got: 1 });
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - (intercept + slope * a)).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let slope_std_error = (rss / (n - 2.0) / sxx).sqrt();
    Ok(ScalingFit { slope, intercept, slope_std_error, residuals })
}

/// Per-atom collective moments from the Holstein–Primakoff forms
/// J_z = n − N/2, J₊ = b†√(N − b†b), applied to the physical-frame amplitudes.
///
/// Above λ_c the effective state describes one of the two mean-field branches; the
/// parity-symmetric ground state is their equal mixture, so ⟨J_x⟩ is reported as 0 while
/// second moments (identical on both branches) come from the computed branch.
pub fn collective_moments_zero_t(state: &TwoModeState) -> Result<MomentSet> {
    let psi = checked_physical(state)?;
    let n_atoms = state.params.n_atoms;
    let nf = n_atoms as f64;
    let dim = psi.ncols();
    // ⟨n+1|J₊|n⟩ = √((n+1)(N−n)).
    let ladder: Vec<f64> = (0..dim).map(|n| (((n + 1) * (n_atoms - n)) as f64).sqrt()).collect();

    let (mut jz, mut jz2, mut jx, mut jx2, mut jy2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut plus = vec![0.0; dim + 1];
    let mut minus = vec![0.0; dim + 1];
    for row in psi.row_iter() {
        plus.iter_mut().for_each(|v| *v = 0.0);
        minus.iter_mut().for_each(|v| *v = 0.0);
        for n in 0..dim {
            let a = row[n];
            let z = n as f64 - nf / 2.0;
            jz += z * a * a;
            jz2 += z * z * a * a;
            if n < n_atoms {
                // J₊|n⟩ lands on n + 1; J₋|n+1⟩ lands on n with the same coefficient.
                plus[n + 1] += ladder[n] * a;
            }
            if n >= 1 {
                minus[n - 1] += ladder[n - 1] * a;
            }
        }
        for n in 0..=dim {
            let s = plus[n] + minus[n];
            let d = plus[n] - minus[n];
            jx2 += 0.25 * s * s;
            jy2 += 0.25 * d * d;
            if n < dim {
                jx += 0.5 * row[n] * s;
            }
        }
    }
    if state.phase == PhaseLabel::Superradiant {
        jx = 0.0;
    }
    MomentSet::new(n_atoms, [jx / nf, 0.0, jz / nf], [jx2 / (nf * nf), jy2 / (nf * nf), jz2 / (nf * nf)])
}
