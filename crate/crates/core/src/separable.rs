//! The permutation- and parity-symmetric product reference state ρ^s = ρ₁^{⊗N},
//! ρ₁ = diag(a, 1 − a) in the σ_z basis (spin up first).
//!
//! Only the binomial law of the number of up spins is stored; every overlap in this
//! crate reduces to a diagonal sum in the J_z basis.

use crate::error::{Error, Result};
use crate::numerics::{golden_section_max, ln_binomial};

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableState {
    a: f64,
    n_atoms: usize,
    log_weights: Vec<f64>,
}

impl SeparableState {
    /// Product state with single-atom up probability `a`.
    pub fn new(a: f64, n_atoms: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameter(format!("a must lie in [0, 1], got {a}")));
        }
        if n_atoms == 0 {
            return Err(Error::InvalidParameter("n_atoms must be at least 1".into()));
        }
        let log_weights = (0..=n_atoms).map(|n| binomial_log_weight(a, n_atoms, n)).collect();
        Ok(Self { a, n_atoms, log_weights })
    }

    /// Matches ⟨J_z⟩: a = ½ + ⟨J_z⟩/N.
    pub fn from_jz(jz_per_atom: f64, n_atoms: usize) -> Result<Self> {
        if !(-0.5..=0.5).contains(&jz_per_atom) {
            return Err(Error::InvalidParameter(format!("jz per atom must lie in [-1/2, 1/2], got {jz_per_atom}")));
        }
        Self::new(0.5 + jz_per_atom, n_atoms)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// ln[C(N,n) aⁿ (1−a)^{N−n}], the probability of n up spins.
    pub fn log_weight(&self, n: usize) -> Result<f64> {
        self.log_weights
            .get(n)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: n, max: self.n_atoms })
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    /// ln[aⁿ (1−a)^{N−n}]: the diagonal element of ρ^s on one product configuration
    /// with n up spins (no binomial multiplicity).
    pub fn log_config_weight(&self, n: usize) -> Result<f64> {
        if n > self.n_atoms {
            return Err(Error::IndexOutOfRange { index: n, max: self.n_atoms });
        }
        Ok(self.log_weights[n] - ln_binomial(self.n_atoms, n))
    }

    /// ⟨J_z⟩/N under ρ^s.
    pub fn jz_per_atom(&self) -> f64 {
        self.a - 0.5
    }

    /// Smallest index range [lo, hi] outside of which the weights sum to at most `mass`.
    pub fn support(&self, mass: f64) -> (usize, usize) {
        let w = self.weights();
        let mut lo = 0;
        let mut acc = 0.0;
        while lo < self.n_atoms && acc + w[lo] <= mass / 2.0 {
            acc += w[lo];
            lo += 1;
        }
        let mut hi = self.n_atoms;
        acc = 0.0;
        while hi > lo && acc + w[hi] <= mass / 2.0 {
            acc += w[hi];
            hi -= 1;
        }
        (lo, hi)
    }
}

fn binomial_log_weight(a: f64, n_atoms: usize, n: usize) -> f64 {
    let up = if n == 0 { 0.0 } else { n as f64 * a.ln() };
    let down = if n == n_atoms { 0.0 } else { (n_atoms - n) as f64 * (1.0 - a).ln() };
    ln_binomial(n_atoms, n) + up + down
}

/// The two candidate reference states for an atomic J_z-diagonal `p` (length N + 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestA {
    /// ⟨J_z⟩-matched: ½ + (Σ n pₙ − N/2)/N.
    pub jz_matched: f64,
    /// Maximizer of Σ wₙ(a) pₙ over a ∈ [0, 1].
    pub argmax: f64,
    /// The overlap attained at `argmax`.
    pub max_overlap: f64,
}

const ARGMAX_TOL: f64 = 1e-8;

pub fn nearest_a(diagonal_probs: &[f64]) -> Result<NearestA> {
    if diagonal_probs.len() < 2 {
        return Err(Error::InvalidDistribution("need at least two entries (N >= 1)".into()));
    }
    if diagonal_probs.iter().any(|p| !(*p >= -1e-12) || !p.is_finite()) {
        return Err(Error::InvalidDistribution("entries must be finite and non-negative".into()));
    }
    let total: f64 = diagonal_probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
    }
    let n_atoms = diagonal_probs.len() - 1;
    let mean: f64 = diagonal_probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let jz_matched = (0.5 + (mean - n_atoms as f64 / 2.0) / n_atoms as f64).clamp(0.0, 1.0);

    let overlap = |a: f64| -> f64 {
        diagonal_probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(n, p)| binomial_log_weight(a, n_atoms, n).exp() * p)
            .sum()
    };
    // The objective can be multimodal; bracket the global maximum on a scan first.
    let scan: usize = 400;
    let (best, _) = (0..=scan)
        .map(|i| (i, overlap(i as f64 / scan as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let lo = best.saturating_sub(1) as f64 / scan as f64;
    let hi = (best + 1).min(scan) as f64 / scan as f64;
    let argmax = golden_section_max(overlap, lo, hi, ARGMAX_TOL);
    let argmax = [lo, argmax, hi].into_iter().fold(argmax, |b, x| if overlap(x) > overlap(b) { x } else { b });
    Ok(NearestA { jz_matched, argmax, max_overlap: overlap(argmax) })
}
