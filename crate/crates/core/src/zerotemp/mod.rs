//! Zero-temperature ground state of the effective two-mode Hamiltonians and everything
//! derived from it: reduced atomic diagonal, purity, overlap Δ, scaling fit and
//! collective spin moments.
//!
//! Finite-N overlaps combine the N → ∞ effective ground state with the finite-N binomial
//! weights of the reference state.

mod gaussian;
mod hamiltonian;
mod observables;
mod state;

pub use gaussian::{normal_phase_vacuum_probability, GaussianAtomState};
pub use hamiltonian::{
    effective_hamiltonian, polariton_frequencies, Cutoffs, EffectiveCoefficients, PolaritonFrequencies,
};
pub use observables::{
    atom_diagonal_probabilities, closed_form_overlap_normal, collective_moments_zero_t, overlap_from_diagonal,
    overlap_zero_t, reduced_atom_matrix, reduced_atom_purity, reduced_atom_purity_spectral, scaling_fit, ScalingFit,
    HP_LEAK_LIMIT, WEIGHT_MASS_LIMIT,
};
pub use state::{
    displacement_matrix, ground_state, ground_state_escalating, ground_state_from_matrix, TwoModeState, TAIL_LIMIT,
};

use crate::error::{Error, Result};
use crate::model::{order_parameter_zero_t, ModelParams, PhaseLabel};
use crate::separable::SeparableState;
use crate::witness::MomentSet;

/// How a [`ZeroTPoint`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Dense diagonalization in the truncated Fock space.
    Diagonalization,
    /// Closed-form Gaussian state, used when the truncation cannot hold the state.
    Gaussian,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Diagonalization => "diagonalization",
            Route::Gaussian => "gaussian",
        }
    }
}

/// Everything reported for one ground-state grid point.
#[derive(Debug, Clone)]
pub struct ZeroTPoint {
    pub params: ModelParams,
    pub phase: PhaseLabel,
    pub route: Route,
    /// Order parameter used to fix the reference state.
    pub jz_per_atom: f64,
    pub a: f64,
    pub delta: f64,
    pub purity: f64,
    pub ground_energy: f64,
    /// (Σ n P(n) − N/2)/N from the computed state.
    pub jz_from_state: f64,
    /// Only available on the diagonalization route.
    pub moments: Option<MomentSet>,
}

/// Δ, purity and moments at one coupling. Tries the truncated diagonalization (with one
/// automatic cutoff escalation) and falls back to the Gaussian route when the truncation
/// tail stays too heavy, which happens close to λ_c.
pub fn evaluate_point(params: &ModelParams, cutoffs: Cutoffs) -> Result<ZeroTPoint> {
    let jz = order_parameter_zero_t(params)?;
    let sep = SeparableState::from_jz(jz, params.n_atoms)?;
    let n = params.n_atoms as f64;
    let mean_jz = |p: &[f64]| (p.iter().enumerate().map(|(k, x)| k as f64 * x).sum::<f64>() - n / 2.0) / n;
    match ground_state_escalating(params, cutoffs) {
        Ok(state) => {
            let p = atom_diagonal_probabilities(&state);
            Ok(ZeroTPoint {
                params: *params,
                phase: state.phase,
                route: Route::Diagonalization,
                jz_per_atom: jz,
                a: sep.a(),
                delta: overlap_from_diagonal(&p, &sep)?,
                purity: reduced_atom_purity(&state),
                ground_energy: state.ground_energy,
                jz_from_state: mean_jz(&p),
                moments: collective_moments_zero_t(&state).ok(),
            })
        }
        Err(Error::CutoffTooSmall { .. }) => {
            let g = GaussianAtomState::new(params)?;
            let p = g.occupation_probabilities();
            Ok(ZeroTPoint {
                params: *params,
                phase: g.phase,
                route: Route::Gaussian,
                jz_per_atom: jz,
                a: sep.a(),
                delta: overlap_from_diagonal(&p, &sep)?,
                purity: g.purity(),
                ground_energy: g.ground_energy,
                jz_from_state: mean_jz(&p),
                moments: None,
            })
        }
        Err(e) => Err(e),
    }
}
