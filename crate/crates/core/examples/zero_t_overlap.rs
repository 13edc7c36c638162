//! Ground-state overlap Δ(λ) and reduced-atom purity for several N.
use dicke_overlap::zerotemp::{evaluate_point, Cutoffs};
use dicke_overlap::ModelParams;

fn main() -> dicke_overlap::Result<()> {
    println!("{:>7} {:>4} {:>10} {:>10} {:>16}", "lambda", "N", "delta", "purity", "route");
    for n in [8, 16, 32] {
        for i in 0..=12 {
            let l = 0.01 + 0.125 * i as f64;
            let p = evaluate_point(&ModelParams::resonant(l, n)?, Cutoffs::TEST)?;
            println!("{l:>7.3} {n:>4} {:>10.6} {:>10.6} {:>16}", p.delta, p.purity, p.route.as_str());
        }
    }
    Ok(())
}
