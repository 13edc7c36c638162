//! Finite temperature through the split e^{−βH} ≈ e^{−βH₀} e^{−βH_I}, valid for small β.
//!
//! After the split the photon quadrature x decouples the atoms: given x, every atom sees
//! the field h(x) = (ω₀/2)σ_z + (λx/√N)√coth(βω/2) σ_x with splitting ε(x), where
//!
//! ```text
//! ε(x) = √(ω₀²/4 + x²λ² coth(βω/2)/N).
//! ```
//!
//! Averages over x carry the weight e^{−x²/2}(2 cosh βε)^N, which for N ~ 100 is far
//! outside double range, so everything stays in log space until a final ratio.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{expectations, ln_two_cosh, log_integral, QuadratureSpec};
use crate::witness::MomentSet;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Temperature below which the split approximation is flagged as outside its validity.
pub const VALIDITY_MIN_TEMPERATURE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    pub params: ModelParams,
    pub beta: f64,
}

impl ThermalPoint {
    pub fn new(params: ModelParams, beta: f64) -> Result<Self> {
        params.validate()?;
        if !(beta > 0.0) || !(beta * params.omega.max(params.omega0)).is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be positive and finite, got {beta}")));
        }
        Ok(Self { params, beta })
    }

    pub fn from_temperature(params: ModelParams, temperature: f64) -> Result<Self> {
        Self::new(params, 1.0 / temperature)
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    /// ε(x).
    pub fn epsilon(&self, x: f64) -> f64 {
        let p = &self.params;
        let coth = 1.0 / (self.beta * p.omega / 2.0).tanh();
        (p.omega0 * p.omega0 / 4.0 + x * x * p.lambda * p.lambda * coth / p.n_atoms as f64).sqrt()
    }

    /// ⟨σ_z⟩ and ⟨σ_x⟩ of one atom in the field h(x).
    pub fn single_atom_polarization(&self, x: f64) -> (f64, f64) {
        let p = &self.params;
        let eps = self.epsilon(x);
        let th = (self.beta * eps).tanh();
        let coth = 1.0 / (self.beta * p.omega / 2.0).tanh();
        let sz = -(p.omega0 / (2.0 * eps)) * th;
        let sx = -(p.lambda * x * coth.sqrt() / ((p.n_atoms as f64).sqrt() * eps)) * th;
        (sz, sx)
    }

    /// Whether T is below [`VALIDITY_MIN_TEMPERATURE`].
    pub fn outside_validity(&self) -> bool {
        self.temperature() < VALIDITY_MIN_TEMPERATURE
    }

    /// ln of the weight e^{−x²/2}(2 cosh βε(x))^N.
    fn log_weight(&self, x: f64) -> f64 {
        -0.5 * x * x + self.params.n_atoms as f64 * ln_two_cosh(self.beta * self.epsilon(x))
    }

    /// −ln(1 − e^{−βω}) − ln√(2π): the x-independent prefactor of z.
    fn log_prefactor(&self) -> f64 {
        -(-(-self.beta * self.params.omega).exp_m1()).ln() - LN_SQRT_2PI
    }
}

/// ln z with z = (1/(1 − e^{−βω}))(2π)^{−1/2} ∫dx e^{−x²/2} (2 cosh βε(x))^N.
pub fn log_partition(point: &ThermalPoint, quad: &QuadratureSpec) -> Result<f64> {
    Ok(point.log_prefactor() + log_integral(|x| point.log_weight(x), quad)?)
}

/// ⟨J_z⟩/N = ½ E_w[−(ω₀/2ε) tanh βε].
pub fn thermal_jz(point: &ThermalPoint, quad: &QuadratureSpec) -> Result<f64> {
    let e = expectations(|x| point.log_weight(x), 1, |x, out| out[0] = point.single_atom_polarization(x).0, quad)?;
    Ok(0.5 * e.means[0])
}

/// Which per-atom factor to use in the overlap integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapFactor {
    /// cosh βε + (1 − 2a)(ω₀/2ε) sinh βε. Reproduces Δ = [e^{βω₀/2}/(2cosh(βω₀/2))]^N at
    /// λ = 0, a = 0 and Δ → 2^{−N} as β → 0.
    #[default]
    Corrected,
    /// 2cosh βε + (1 − 2a)(ω₀/2ε) sinh βε with the cosh term doubled. Gives Δ = 1 at a = ½ for every β.
    Doubled,
}

impl OverlapFactor {
    pub fn as_str(&self) -> &'static str {
        match self {
            OverlapFactor::Corrected => "corrected",
            OverlapFactor::Doubled => "doubled",
        }
    }
}

/// ln of the per-atom factor at `x`.
fn log_factor(point: &ThermalPoint, a: f64, x: f64, factor: OverlapFactor) -> Result<f64> {
    let eps = point.epsilon(x);
    let be = point.beta * eps;
    let c = (1.0 - 2.0 * a) * point.params.omega0 / (2.0 * eps);
    let e2 = (-2.0 * be).exp();
    let bracket = match factor {
        OverlapFactor::Corrected => 0.5 * ((1.0 + c) + (1.0 - c) * e2),
        OverlapFactor::Doubled => 1.0 + e2 + 0.5 * c * (1.0 - e2),
    };
    if bracket < 0.0 || bracket.is_nan() {
        return Err(Error::InternalConsistency(format!(
            "per-atom overlap factor is {bracket} at x={x} (a={a})"
        )));
    }
    Ok(be + bracket.ln())
}

/// Δ = Tr[ρ ρ^s] = (1/z)(prefactor)∫dx e^{−x²/2} f(x)^N for the product state with
/// single-atom up probability `a`.
pub fn overlap_finite_t(point: &ThermalPoint, a: f64, quad: &QuadratureSpec, factor: OverlapFactor) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!("a must lie in [0, 1], got {a}")));
    }
    let n = point.params.n_atoms as f64;
    // Check the factor where the weight concentrates before integrating; the quadrature
    // closure cannot propagate errors.
    for x in [0.0, 1.0, 10.0, 100.0] {
        log_factor(point, a, x, factor)?;
    }
    let num = log_integral(
        |x| -0.5 * x * x + n * log_factor(point, a, x, factor).unwrap_or(f64::NAN),
        quad,
    )?;
    if num.is_nan() {
        return Err(Error::InternalConsistency("overlap integrand produced NaN".into()));
    }
    let den = log_integral(|x| point.log_weight(x), quad)?;
    Ok((num - den).exp())
}

/// Δ with a fixed by a = ½ + thermal ⟨J_z⟩/N, returned together with that a.
pub fn overlap_finite_t_matched(point: &ThermalPoint, quad: &QuadratureSpec, factor: OverlapFactor) -> Result<(f64, f64)> {
    let a = (0.5 + thermal_jz(point, quad)?).clamp(0.0, 1.0);
    Ok((overlap_finite_t(point, a, quad, factor)?, a))
}

/// Collective moments from conditional independence: given x the atoms are independent,
/// so ⟨J_α⟩ = (N/2)E[⟨σ_α⟩_x] and ⟨J_α²⟩ = N/4 + N(N − 1)/4 · E[⟨σ_α⟩_x²].
///
/// ⟨J_x⟩ vanishes identically because ⟨σ_x⟩_x is odd in x and the weight is even, and
/// ⟨σ_y⟩_x = 0 for a field in the x–z plane.
pub fn thermal_moments(point: &ThermalPoint, quad: &QuadratureSpec) -> Result<MomentSet> {
    let e = expectations(
        |x| point.log_weight(x),
        3,
        |x, out| {
            let (sz, sx) = point.single_atom_polarization(x);
            out[0] = sz;
            out[1] = sz * sz;
            out[2] = sx * sx;
        },
        quad,
    )?;
    let n = point.params.n_atoms as f64;
    let second = |mean_sq: f64| (n / 4.0 + n * (n - 1.0) / 4.0 * mean_sq) / (n * n);
    MomentSet::new(
        point.params.n_atoms,
        [0.0, 0.0, 0.5 * e.means[0]],
        [second(e.means[2]), second(0.0), second(e.means[1])],
    )
}

/// E_w[⟨σ_x⟩_x] evaluated numerically; zero up to quadrature error.
pub fn odd_polarization_check(point: &ThermalPoint, quad: &QuadratureSpec) -> Result<f64> {
    let e = expectations(|x| point.log_weight(x), 1, |x, out| out[0] = point.single_atom_polarization(x).1, quad)?;
    Ok(e.means[0])
}
