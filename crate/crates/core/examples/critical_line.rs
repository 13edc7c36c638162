//! λ_c and the finite-temperature critical line T_c(λ).
use dicke_overlap::model::{critical_temperature_standard, reduced_critical_temperature};
use dicke_overlap::{critical_coupling, critical_temperature, ModelParams};

fn main() -> dicke_overlap::Result<()> {
    println!("lambda_c(1, 1) = {}", critical_coupling(1.0, 1.0)?);
    println!("{:>6} {:>10} {:>10} {:>10}", "lambda", "T_c", "2l^2/w0", "standard");
    for i in 1..=6 {
        let p = ModelParams::resonant(0.25 * i as f64, 100)?;
        let tc = critical_temperature(&p)?.unwrap_or(f64::NAN);
        let std = critical_temperature_standard(&p)?.unwrap_or(f64::NAN);
        println!("{:>6.2} {tc:>10.6} {:>10.6} {std:>10.6}", p.lambda, reduced_critical_temperature(&p));
    }
    Ok(())
}
