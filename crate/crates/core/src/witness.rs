//! Spin-squeezing inequalities for collective spins (Tóth et al.).
//!
//! With `first = ⟨J_α⟩/N`, `second = ⟨J_α²⟩/N²` and `var = second − first²`, the
//! large-N forms evaluated by [`evaluate`] are
//!
//! ```text
//! (a)  1/4 − Σ second                                  ≥ 0   sanity bound, holds for every state
//! (b)  Σ var − 1/(2N)                                  ≥ 0
//! (c)  N var_γ − (second_α + second_β) + 1/(2N)        ≥ 0
//! (d)  N (var_α + var_β) − second_γ − 1/4              ≥ 0
//! ```
//!
//! for every permutation (α, β, γ) of (x, y, z). A violation of (b), (c) or (d) certifies
//! entanglement. [`evaluate_finite_n`] evaluates the exact finite-N forms instead, divided
//! by N² so they are on the same scale.

use std::fmt;

use crate::error::{Error, Result};

/// Entries below `-WITNESS_TOL` count as violations.
pub const WITNESS_TOL: f64 = 1e-9;
const MOMENT_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Per-atom collective moments, ordered (x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub n_atoms: usize,
    /// ⟨J_α⟩/N.
    pub first: [f64; 3],
    /// ⟨J_α²⟩/N².
    pub second: [f64; 3],
}

impl MomentSet {
    pub fn new(n_atoms: usize, first: [f64; 3], second: [f64; 3]) -> Result<Self> {
        let m = Self { n_atoms, first, second };
        m.validate()?;
        Ok(m)
    }

    /// Δ²J_α/N².
    pub fn variance(&self, axis: Axis) -> f64 {
        let i = axis.index();
        self.second[i] - self.first[i] * self.first[i]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::InvalidInput("moment set with zero atoms".into()));
        }
        if self.first.iter().chain(&self.second).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite moment".into()));
        }
        for axis in Axis::ALL {
            if self.variance(axis) < -MOMENT_SLACK {
                return Err(Error::InvalidInput(format!(
                    "negative variance along {}: {}",
                    axis.as_char(),
                    self.variance(axis)
                )));
            }
        }
        let n = self.n_atoms as f64;
        let casimir = n * (n + 2.0) / 4.0 / (n * n);
        let total: f64 = self.second.iter().sum();
        if total > casimir + MOMENT_SLACK {
            return Err(Error::InvalidInput(format!(
                "second moments sum to {total}, above the collective-spin bound {casimir}"
            )));
        }
        Ok(())
    }
}

/// One inequality instance: `lhs` is the quantity required to be non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessEntry {
    /// (α, β, γ) for (c) and (d); `None` for (b).
    pub axes: Option<(Axis, Axis, Axis)>,
    pub lhs: f64,
    pub violated: bool,
}

impl WitnessEntry {
    fn new(axes: Option<(Axis, Axis, Axis)>, lhs: f64) -> Self {
        Self { axes, lhs, violated: lhs < -WITNESS_TOL }
    }

    /// `"z-x-y"` style label, `"-"` for (b).
    pub fn label(&self) -> String {
        match self.axes {
            Some((a, b, c)) => format!("{}-{}-{}", a.as_char(), b.as_char(), c.as_char()),
            None => "-".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    /// Sanity bound (a); never a witness.
    pub sum_bound: f64,
    pub b: WitnessEntry,
    pub c: Vec<WitnessEntry>,
    pub d: Vec<WitnessEntry>,
    pub any_violation: bool,
}

impl WitnessReport {
    pub fn entries(&self) -> impl Iterator<Item = (&'static str, &WitnessEntry)> {
        std::iter::once(("b", &self.b))
            .chain(self.c.iter().map(|e| ("c", e)))
            .chain(self.d.iter().map(|e| ("d", e)))
    }

    pub fn violations(&self) -> usize {
        self.entries().filter(|(_, e)| e.violated).count()
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (kind, e) in self.entries() {
            writeln!(f, "({kind}) {:>5}  {:+.6e}{}", e.label(), e.lhs, if e.violated { "  violated" } else { "" })?;
        }
        Ok(())
    }
}

/// The six permutations (α, β, γ) of (x, y, z).
pub fn permutations() -> [(Axis, Axis, Axis); 6] {
    use Axis::*;
    [(X, Y, Z), (X, Z, Y), (Y, X, Z), (Y, Z, X), (Z, X, Y), (Z, Y, X)]
}

/// Large-N inequalities.
pub fn evaluate(moments: &MomentSet) -> Result<WitnessReport> {
    moments.validate()?;
    let n = moments.n_atoms as f64;
    let var = |a: Axis| moments.variance(a);
    let sec = |a: Axis| moments.second[a.index()];
    let b = Axis::ALL.iter().map(|&a| var(a)).sum::<f64>() - 1.0 / (2.0 * n);
    let c = permutations()
        .iter()
        .map(|&(a, bb, g)| WitnessEntry::new(Some((a, bb, g)), n * var(g) - (sec(a) + sec(bb)) + 1.0 / (2.0 * n)))
        .collect();
    let d = permutations()
        .iter()
        .map(|&(a, bb, g)| WitnessEntry::new(Some((a, bb, g)), n * (var(a) + var(bb)) - sec(g) - 0.25))
        .collect();
    Ok(finish(0.25 - moments.second.iter().sum::<f64>(), WitnessEntry::new(None, b), c, d))
}

/// Exact finite-N inequalities, each divided by N².
pub fn evaluate_finite_n(moments: &MomentSet) -> Result<WitnessReport> {
    moments.validate()?;
    let n = moments.n_atoms as f64;
    let n2 = n * n;
    // Unnormalized moments.
    let var = |a: Axis| moments.variance(a) * n2;
    let sec = |a: Axis| moments.second[a.index()] * n2;
    let b = (Axis::ALL.iter().map(|&a| var(a)).sum::<f64>() - n / 2.0) / n2;
    let c = permutations()
        .iter()
        .map(|&(a, bb, g)| WitnessEntry::new(Some((a, bb, g)), ((n - 1.0) * var(g) - sec(a) - sec(bb) + n / 2.0) / n2))
        .collect();
    let d = permutations()
        .iter()
        .map(|&(a, bb, g)| {
            WitnessEntry::new(Some((a, bb, g)), ((n - 1.0) * (var(a) + var(bb)) - sec(g) - n * (n - 2.0) / 4.0) / n2)
        })
        .collect();
    let sum_bound = (n * (n + 2.0) / 4.0 - Axis::ALL.iter().map(|&a| sec(a)).sum::<f64>()) / n2;
    Ok(finish(sum_bound, WitnessEntry::new(None, b), c, d))
}

fn finish(sum_bound: f64, b: WitnessEntry, c: Vec<WitnessEntry>, d: Vec<WitnessEntry>) -> WitnessReport {
    let any_violation = b.violated || c.iter().chain(&d).any(|e| e.violated);
    WitnessReport { sum_bound, b, c, d, any_violation }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All spins down: ⟨J_z⟩ = −N/2, Δ²J_x = Δ²J_y = N/4.
    fn coherent_down(n: usize) -> MomentSet {
        let nf = n as f64;
        MomentSet::new(n, [0.0, 0.0, -0.5], [0.25 / nf, 0.25 / nf, 0.25]).unwrap()
    }

    /// |j = N/2, m = 0⟩.
    fn dicke_half(n: usize) -> MomentSet {
        let nf = n as f64;
        let perp = (nf / 2.0) * (nf / 2.0 + 1.0) / 2.0 / (nf * nf);
        MomentSet::new(n, [0.0; 3], [perp, perp, 0.0]).unwrap()
    }

    #[test]
    fn coherent_state_sits_on_the_boundary() {
        for n in [2, 10, 100, 1000] {
            let r = evaluate(&coherent_down(n)).unwrap();
            assert!(r.b.lhs.abs() < 1e-12);
            assert!(!r.b.violated);
            // The large-N (d) form is short by 1/(4N) on this state; the exact form is not.
            let d = r.d.iter().find(|e| e.label() == "x-z-y").unwrap();
            assert!((d.lhs + 0.25 / n as f64).abs() < 1e-12);
            assert!(!evaluate_finite_n(&coherent_down(n)).unwrap().any_violation);
        }
    }

    #[test]
    fn half_excited_dicke_state_violates_c() {
        for n in [4, 10, 100] {
            let r = evaluate(&dicke_half(n)).unwrap();
            let e = r.c.iter().find(|e| e.axes.unwrap().2 == Axis::Z).unwrap();
            assert!((e.lhs + 0.25).abs() < 1e-12, "{}", e.lhs);
            assert!(e.violated);
            assert!(r.any_violation);
        }
    }

    #[test]
    fn report_shape() {
        let r = evaluate(&coherent_down(10)).unwrap();
        assert_eq!(r.c.len(), 6);
        assert_eq!(r.d.len(), 6);
        assert_eq!(r.entries().count(), 13);
        let labels: std::collections::HashSet<_> = r.c.iter().map(|e| e.label()).collect();
        assert_eq!(labels.len(), 6);
    }

    #[test]
    fn finite_n_forms_on_dicke_state() {
        // Finite-N (c) for γ = z: [−N(N+2)/4 + N/2]/N² = −1/4 exactly.
        let r = evaluate_finite_n(&dicke_half(10)).unwrap();
        let e = r.c.iter().find(|e| e.axes.unwrap().2 == Axis::Z).unwrap();
        assert!((e.lhs + 0.25).abs() < 1e-12);
        assert!(r.sum_bound.abs() < 1e-12);
        let r = evaluate_finite_n(&coherent_down(10)).unwrap();
        assert!(r.b.lhs.abs() < 1e-12 && !r.any_violation);
    }

    #[test]
    fn invalid_moments_rejected() {
        assert!(MomentSet::new(10, [0.0, 0.0, -0.5], [0.0, 0.0, 0.1]).is_err());
        assert!(MomentSet::new(10, [0.0; 3], [0.3, 0.3, 0.3]).is_err());
        let bad = MomentSet { n_atoms: 10, first: [0.0; 3], second: [0.3, 0.3, 0.3] };
        assert!(matches!(evaluate(&bad), Err(Error::InvalidInput(_))));
    }
}
