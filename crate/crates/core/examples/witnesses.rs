//! Spin-squeezing inequalities on the ground state (violations above λ_c) and on the
//! thermal state (none).
use dicke_overlap::thermal::{thermal_moments, ThermalPoint};
use dicke_overlap::witness::evaluate;
use dicke_overlap::zerotemp::{evaluate_point, Cutoffs};
use dicke_overlap::{ModelParams, QuadratureSpec};

fn main() -> dicke_overlap::Result<()> {
    for l in [0.3, 0.7, 1.0, 1.5] {
        let p = evaluate_point(&ModelParams::resonant(l, 100)?, Cutoffs::TEST)?;
        if let Some(m) = p.moments {
            let r = evaluate(&m)?;
            let worst = r.entries().min_by(|a, b| a.1.lhs.total_cmp(&b.1.lhs)).unwrap();
            println!("T=0 lambda={l}: {} violations, lowest ({}) {} = {:.3e}", r.violations(), worst.0, worst.1.label(), worst.1.lhs);
        }
    }
    let quad = QuadratureSpec::default();
    let r = evaluate(&thermal_moments(&ThermalPoint::from_temperature(ModelParams::resonant(1.0, 100)?, 1.0)?, &quad)?)?;
    println!("T=1 lambda=1:\n{r}");
    Ok(())
}
