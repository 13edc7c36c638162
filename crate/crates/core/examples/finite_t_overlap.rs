//! Thermal overlap Δ(λ, T) with a fixed by the thermal ⟨J_z⟩, and where it changes fastest.
use dicke_overlap::thermal::{overlap_finite_t_matched, OverlapFactor, ThermalPoint};
use dicke_overlap::{critical_temperature, ModelParams, QuadratureSpec};

fn main() -> dicke_overlap::Result<()> {
    let quad = QuadratureSpec::default();
    for l in [0.5, 1.0] {
        let p = ModelParams::resonant(l, 100)?;
        let ts: Vec<f64> = (0..=56).map(|i| 0.2 + 0.05 * i as f64).collect();
        let mut deltas = vec![];
        for &t in &ts {
            deltas.push(overlap_finite_t_matched(&ThermalPoint::from_temperature(p, t)?, &quad, OverlapFactor::Corrected)?.0);
        }
        let (i, _) = deltas
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .enumerate()
            .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
        println!(
            "lambda={l}: delta(T=0.2)={:.3e} delta(T=3)={:.3e}  steepest at T={:.3}  T_c={:.3}",
            deltas[0],
            deltas[deltas.len() - 1],
            0.5 * (ts[i] + ts[i + 1]),
            critical_temperature(&p)?.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
