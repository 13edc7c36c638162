//! Dicke Hamiltonian parameters and the critical quantities derived from them.
//!
//! Units are ħ = k_B = 1 throughout.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::find_root;

/// ω a†a + ω₀ J_z + (λ/√N)(a† + a)(J₊ + J₋).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub omega0: f64,
    pub lambda: f64,
    pub n_atoms: usize,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, lambda: f64, n_atoms: usize) -> Result<Self> {
        let p = Self { omega, omega0, lambda, n_atoms };
        p.validate()?;
        Ok(p)
    }

    /// The resonant case ω = ω₀ = 1 used throughout the examples and tests.
    pub fn resonant(lambda: f64, n_atoms: usize) -> Result<Self> {
        Self::new(1.0, 1.0, lambda, n_atoms)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega must be positive and finite, got {}", self.omega)));
        }
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(Error::InvalidParameter(format!("omega0 must be positive and finite, got {}", self.omega0)));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be non-negative and finite, got {}", self.lambda)));
        }
        if self.n_atoms == 0 {
            return Err(Error::InvalidParameter("n_atoms must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.omega, self.omega0, lambda, self.n_atoms)
    }

    pub fn with_n_atoms(&self, n_atoms: usize) -> Result<Self> {
        Self::new(self.omega, self.omega0, self.lambda, n_atoms)
    }

    pub fn critical_coupling(&self) -> f64 {
        (self.omega * self.omega0).sqrt() / 2.0
    }

    /// Ground-state phase.
    pub fn phase(&self) -> PhaseLabel {
        if self.lambda > self.critical_coupling() {
            PhaseLabel::Superradiant
        } else {
            PhaseLabel::Normal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Normal,
    Superradiant,
}

impl PhaseLabel {
    /// Phase at temperature `t` (`t == 0` for the ground state). Above zero temperature the
    /// system is superradiant only when λ > λ_c and T < T_c(λ).
    pub fn classify(params: &ModelParams, temperature: f64) -> Result<Self> {
        params.validate()?;
        if temperature <= 0.0 {
            return Ok(params.phase());
        }
        if params.lambda <= params.critical_coupling() {
            return Ok(PhaseLabel::Normal);
        }
        Ok(match critical_temperature(params)? {
            Some(tc) if temperature < tc => PhaseLabel::Superradiant,
            _ => PhaseLabel::Normal,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::Normal => "normal",
            PhaseLabel::Superradiant => "superradiant",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// λ_c = √(ω ω₀)/2.
pub fn critical_coupling(omega: f64, omega0: f64) -> Result<f64> {
    if !(omega > 0.0) || !(omega0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequencies must be positive, got omega={omega}, omega0={omega0}"
        )));
    }
    Ok((omega * omega0).sqrt() / 2.0)
}

/// Bracket searched for β_c.
pub const BETA_C_BRACKET: (f64, f64) = (1e-6, 1e3);

/// β − (ω₀/2λ²)·tanh(βω/2)/tanh(βω₀/2). Its zero is β_c.
pub fn critical_relation_residual(params: &ModelParams, beta: f64) -> f64 {
    let l2 = params.lambda * params.lambda;
    beta - params.omega0 / (2.0 * l2) * (beta * params.omega / 2.0).tanh() / (beta * params.omega0 / 2.0).tanh()
}

/// T_c from the self-consistency relation
///
/// β_c = (ω₀/2λ²)·tanh(β_c ω/2)/tanh(β_c ω₀/2),
///
/// solved by bisection on β ∈ [1e−6, 1e3]. `None` when λ = 0 or the residual has no sign
/// change on the bracket.
///
/// Note that for ω = ω₀ this is T_c = 2λ²/ω₀, which is finite (ω₀/2) at λ = λ_c rather
/// than zero. The alternative line tanh(β ω₀/2) = λ_c²/λ² is [`critical_temperature_standard`].
pub fn critical_temperature(params: &ModelParams) -> Result<Option<f64>> {
    params.validate()?;
    if params.lambda == 0.0 {
        return Ok(None);
    }
    let f = |b: f64| critical_relation_residual(params, b);
    let (lo, hi) = BETA_C_BRACKET;
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Ok(None);
    }
    find_root(f, BETA_C_BRACKET).map(|b| Some(1.0 / b))
}

/// The ω = ω₀ reduction T_c = 2λ²/ω₀ (overlay line for the Δ(λ, T) surface).
pub fn reduced_critical_temperature(params: &ModelParams) -> f64 {
    2.0 * params.lambda * params.lambda / params.omega0
}

/// Mean-field critical line tanh(β_c ω₀/2) = λ_c²/λ², defined only for λ > λ_c.
pub fn critical_temperature_standard(params: &ModelParams) -> Result<Option<f64>> {
    params.validate()?;
    let lc = params.critical_coupling();
    if params.lambda <= lc {
        return Ok(None);
    }
    let ratio = lc * lc / (params.lambda * params.lambda);
    Ok(Some(params.omega0 / (2.0 * ratio.atanh())))
}

/// ⟨J_z⟩/N in the ground state for N → ∞: −½ up to λ_c, −λ_c²/(2λ²) beyond.
pub fn order_parameter_zero_t(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let lc = params.critical_coupling();
    if params.lambda <= lc {
        Ok(-0.5)
    } else {
        Ok(-lc * lc / (2.0 * params.lambda * params.lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_coupling_values() {
        assert_eq!(critical_coupling(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(critical_coupling(4.0, 1.0).unwrap(), 1.0);
        assert_eq!(critical_coupling(2.0, 2.0).unwrap(), 1.0);
        assert!(critical_coupling(0.0, 1.0).is_err());
        assert!(critical_coupling(1.0, -2.0).is_err());
    }

    #[test]
    fn critical_coupling_symmetric() {
        for &(a, b) in &[(0.3, 1.7), (2.0, 5.0), (1e-3, 9.0)] {
            assert_eq!(critical_coupling(a, b).unwrap(), critical_coupling(b, a).unwrap());
        }
    }

    #[test]
    fn resonant_critical_temperature() {
        let tc = critical_temperature(&ModelParams::resonant(1.0, 10).unwrap()).unwrap().unwrap();
        assert!((tc - 2.0).abs() < 1e-10);
        let tc = critical_temperature(&ModelParams::resonant(0.7, 10).unwrap()).unwrap().unwrap();
        assert!((tc - 0.98).abs() < 1e-10);
    }

    #[test]
    fn off_resonant_root_has_small_residual() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 10).unwrap();
        let tc = critical_temperature(&p).unwrap().unwrap();
        assert!(critical_relation_residual(&p, 1.0 / tc).abs() < 1e-10);
        // Independent check: the residual changes sign between neighbouring grid points.
        let grid: Vec<f64> = (1..=2000).map(|i| i as f64 * 0.01).collect();
        let crossing = grid
            .windows(2)
            .find(|w| critical_relation_residual(&p, w[0]).signum() != critical_relation_residual(&p, w[1]).signum())
            .unwrap();
        assert!(crossing[0] <= 1.0 / tc && 1.0 / tc <= crossing[1]);
    }

    #[test]
    fn zero_coupling_has_no_transition() {
        assert_eq!(critical_temperature(&ModelParams::resonant(0.0, 10).unwrap()).unwrap(), None);
    }

    #[test]
    fn standard_line_lies_below_reduced_line() {
        let p = ModelParams::resonant(1.0, 10).unwrap();
        let t_std = critical_temperature_standard(&p).unwrap().unwrap();
        assert!(t_std < reduced_critical_temperature(&p));
        assert_eq!(critical_temperature_standard(&ModelParams::resonant(0.4, 10).unwrap()).unwrap(), None);
    }

    #[test]
    fn order_parameter_branches() {
        let op = |l| order_parameter_zero_t(&ModelParams::resonant(l, 10).unwrap()).unwrap();
        assert_eq!(op(0.4), -0.5);
        assert_eq!(op(0.5), -0.5);
        assert_eq!(op(1.0), -0.125);
        assert!((op(0.5 + 1e-12) + 0.5).abs() < 1e-10);
        let mut prev = -0.5;
        for i in 0..300 {
            let v = op(i as f64 * 0.01);
            assert!(v >= prev && (-0.5..0.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn phase_classification() {
        let p = ModelParams::resonant(1.0, 10).unwrap();
        assert_eq!(PhaseLabel::classify(&p, 0.0).unwrap(), PhaseLabel::Superradiant);
        assert_eq!(PhaseLabel::classify(&p, 1.5).unwrap(), PhaseLabel::Superradiant);
        assert_eq!(PhaseLabel::classify(&p, 2.5).unwrap(), PhaseLabel::Normal);
        let q = ModelParams::resonant(0.45, 10).unwrap();
        assert_eq!(PhaseLabel::classify(&q, 0.1).unwrap(), PhaseLabel::Normal);
    }
}
