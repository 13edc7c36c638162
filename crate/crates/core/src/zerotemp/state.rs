use nalgebra::DMatrix;

use crate::error::{Error, Mode, Result};
use crate::model::{ModelParams, PhaseLabel};
use crate::numerics::{ln_gamma, lowest_eigenpair};

use super::hamiltonian::{hamiltonian_matrix, Cutoffs, EffectiveCoefficients};

/// Probability allowed in the top 10% of either mode's levels.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Truncated ground state of an effective Hamiltonian.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    pub params: ModelParams,
    pub cutoff_photon: usize,
    pub cutoff_atom: usize,
    /// Amplitudes over |m⟩_a ⊗ |n⟩_b, flattened as `m * cutoff_atom + n`.
    pub amplitudes: Vec<f64>,
    pub ground_energy: f64,
    /// √α with b_phys = b + √α; zero in the normal phase.
    pub displacement_atom: f64,
    pub phase: PhaseLabel,
}

impl TwoModeState {
    pub fn cutoffs(&self) -> Cutoffs {
        Cutoffs { photon: self.cutoff_photon, atom: self.cutoff_atom }
    }

    pub fn amplitude(&self, m: usize, n: usize) -> f64 {
        self.amplitudes[m * self.cutoff_atom + n]
    }

    /// Amplitudes as a photon × atom matrix.
    pub fn amplitude_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.cutoff_photon, self.cutoff_atom, &self.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Probability carried by the top 10% of levels of `mode`.
    pub fn tail(&self, mode: Mode) -> f64 {
        tail_mass(&self.amplitudes, self.cutoffs(), mode)
    }

    /// Occupation distribution of the atom mode in the frame the state is stored in.
    pub fn frame_atom_marginal(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.cutoff_atom];
        for m in 0..self.cutoff_photon {
            for (n, pn) in p.iter_mut().enumerate() {
                let a = self.amplitude(m, n);
                *pn += a * a;
            }
        }
        p
    }

    /// Amplitudes ψ(m, n) with n the physical atom occupation = J_z + N/2, n ∈ 0..=n_max.
    /// In the superradiant phase this applies the displacement D(√α) to the atom mode;
    /// `n_max` is N there and min(cutoff_atom − 1, N) in the normal phase.
    pub fn physical_amplitudes(&self) -> DMatrix<f64> {
        let c = self.amplitude_matrix();
        let n_atoms = self.params.n_atoms;
        if self.displacement_atom == 0.0 {
            let rows = self.cutoff_atom.min(n_atoms + 1);
            return c.columns(0, rows).into_owned();
        }
        let d = displacement_matrix(self.displacement_atom, n_atoms + 1, self.cutoff_atom);
        c * d.transpose()
    }

    /// Squared norm of the physical amplitudes that falls outside 0..=N.
    pub fn physical_leak(&self) -> f64 {
        let psi = self.physical_amplitudes();
        (1.0 - psi.iter().map(|a| a * a).sum::<f64>()).max(0.0)
    }
}

/// ⟨n|D(β)|k⟩ for real β, n < rows, k < cols, where D(β) = exp(β(b† − b)).
///
/// Uses ⟨n|D|k⟩ = √(k!/n!) βⁿ⁻ᵏ e^{−β²/2} L_k^{(n−k)}(β²) for n ≥ k and
/// ⟨n|D|k⟩ = (−1)^{k−n} ⟨k|D|n⟩ otherwise. The ladder recurrence in n is unstable once
/// n ≫ β², which is exactly the range the HP constraint n ≤ N needs.
pub fn displacement_matrix(beta: f64, rows: usize, cols: usize) -> DMatrix<f64> {
    if beta == 0.0 {
        return DMatrix::identity(rows, cols);
    }
    let x = beta * beta;
    let ln_beta = beta.abs().ln();
    let element = |n: usize, k: usize| -> f64 {
        // n >= k here.
        let a = (n - k) as f64;
        let (mut l_prev, mut l) = (0.0, 1.0);
        for j in 0..k {
            let next = ((2.0 * j as f64 + 1.0 + a - x) * l - (j as f64 + a) * l_prev) / (j as f64 + 1.0);
            l_prev = l;
            l = next;
        }
        let ln_mag = 0.5 * (ln_gamma(k as f64 + 1.0) - ln_gamma(n as f64 + 1.0)) + a * ln_beta - 0.5 * x;
        let sign = if beta < 0.0 && (n - k) % 2 == 1 { -1.0 } else { 1.0 };
        sign * ln_mag.exp() * l
    };
    DMatrix::from_fn(rows, cols, |n, k| {
        if n >= k {
            element(n, k)
        } else {
            let v = element(k, n);
            if (k - n) % 2 == 1 { -v } else { v }
        }
    })
}

fn tail_mass(amplitudes: &[f64], cutoffs: Cutoffs, mode: Mode) -> f64 {
    let (cp, ca) = (cutoffs.photon, cutoffs.atom);
    let top = |c: usize| c - c.div_ceil(10);
    let mut mass = 0.0;
    for m in 0..cp {
        for n in 0..ca {
            let in_tail = match mode {
                Mode::Photon => m >= top(cp),
                Mode::Atom => n >= top(ca),
            };
            if in_tail {
                let a = amplitudes[m * ca + n];
                mass += a * a;
            }
        }
    }
    mass
}

/// Ground state of the effective Hamiltonian for `params`, by dense diagonalization of the
/// two excitation-parity blocks. Fails when the truncation tail exceeds [`TAIL_LIMIT`].
pub fn ground_state(params: &ModelParams, cutoffs: Cutoffs) -> Result<TwoModeState> {
    cutoffs.validate()?;
    let coeffs = EffectiveCoefficients::for_params(params)?;
    let h = hamiltonian_matrix(&coeffs, cutoffs);
    let (cp, ca) = (cutoffs.photon, cutoffs.atom);

    let mut best: Option<(f64, Vec<f64>)> = None;
    for parity in 0..2 {
        let block: Vec<usize> = (0..cp * ca).filter(|i| (i / ca + i % ca) % 2 == parity).collect();
        let sub = DMatrix::from_fn(block.len(), block.len(), |r, c| h[(block[r], block[c])]);
        let (e, v) = lowest_eigenpair(&sub)?;
        if best.as_ref().is_none_or(|(eb, _)| e < *eb) {
            let mut full = vec![0.0; cp * ca];
            for (k, &i) in block.iter().enumerate() {
                full[i] = v[k];
            }
            best = Some((e, full));
        }
    }
    let (energy, amplitudes) = best.expect("two parity blocks");
    finish(params, &coeffs, cutoffs, energy, amplitudes)
}

/// Lowest eigenpair of an already assembled effective Hamiltonian, without the parity split.
pub fn ground_state_from_matrix(
    params: &ModelParams,
    matrix: &DMatrix<f64>,
    cutoffs: Cutoffs,
) -> Result<TwoModeState> {
    cutoffs.validate()?;
    if matrix.nrows() != cutoffs.dimension() {
        return Err(Error::InvalidParameter(format!(
            "matrix dimension {} does not match cutoffs {}x{}",
            matrix.nrows(),
            cutoffs.photon,
            cutoffs.atom
        )));
    }
    let coeffs = EffectiveCoefficients::for_params(params)?;
    let (energy, amplitudes) = lowest_eigenpair(matrix)?;
    finish(params, &coeffs, cutoffs, energy, amplitudes)
}

fn finish(
    params: &ModelParams,
    coeffs: &EffectiveCoefficients,
    cutoffs: Cutoffs,
    energy: f64,
    mut amplitudes: Vec<f64>,
) -> Result<TwoModeState> {
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    let scale = amplitudes.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let lead = amplitudes.iter().find(|a| a.abs() > 1e-8 * scale).copied().unwrap_or(1.0);
    let sign = if lead < 0.0 { -1.0 } else { 1.0 };
    for a in amplitudes.iter_mut() {
        *a *= sign / norm;
    }
    for mode in [Mode::Photon, Mode::Atom] {
        let tail = tail_mass(&amplitudes, cutoffs, mode);
        if !(tail < TAIL_LIMIT) {
            return Err(Error::CutoffTooSmall { mode, tail, limit: TAIL_LIMIT });
        }
    }
    Ok(TwoModeState {
        params: *params,
        cutoff_photon: cutoffs.photon,
        cutoff_atom: cutoffs.atom,
        amplitudes,
        ground_energy: energy,
        displacement_atom: coeffs.displacement_atom,
        phase: coeffs.phase,
    })
}

/// [`ground_state`], retried once with both cutoffs grown by 50% if the tail check fails.
pub fn ground_state_escalating(params: &ModelParams, cutoffs: Cutoffs) -> Result<TwoModeState> {
    match ground_state(params, cutoffs) {
        Err(Error::CutoffTooSmall { .. }) => ground_state(params, cutoffs.scaled(1.5)),
        other => other,
    }
}
