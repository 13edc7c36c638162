//! Approaching λ_c: truncated diagonalization hands over to the exact Gaussian route, and
//! the overlap follows the (1 − 4λ²)^{1/4} law.
use dicke_overlap::zerotemp::{closed_form_overlap_normal, evaluate_point, normal_phase_vacuum_probability, Cutoffs};
use dicke_overlap::ModelParams;

fn main() -> dicke_overlap::Result<()> {
    for eps in [1e-1, 3e-2, 1e-2, 1e-3, 1e-4] {
        let l = 0.5 - eps;
        let p = evaluate_point(&ModelParams::resonant(l, 100)?, Cutoffs::TEST)?;
        println!(
            "lambda={l:.4}  delta={:.6}  exact P(0)={:.6}  closed form={:.6}  ({})",
            p.delta,
            normal_phase_vacuum_probability(l)?,
            closed_form_overlap_normal(l)?,
            p.route.as_str()
        );
    }
    Ok(())
}
