//! Effective-model ground-state Δ against exact diagonalization in the symmetric sector.
use dicke_overlap::oracle::{exact_ground_state, exact_moments, exact_overlap, suggested_cutoff};
use dicke_overlap::zerotemp::{evaluate_point, Cutoffs};
use dicke_overlap::{ModelParams, SeparableState};

fn main() -> dicke_overlap::Result<()> {
    for n in [10, 20] {
        for l in [0.2, 0.4, 0.6, 1.0] {
            let params = ModelParams::resonant(l, n)?;
            let eff = evaluate_point(&params, Cutoffs::TEST)?;
            let exact = exact_ground_state(&params, suggested_cutoff(&params))?;
            let o = exact_overlap(&exact, &SeparableState::new(eff.a, n)?)?;
            let jz = exact_moments(&exact)?.first[2];
            println!(
                "N={n:>2} lambda={l}: delta eff {:.5} exact {:.5} (rel {:.1e})   <J_z>/N exact {jz:.5}",
                eff.delta,
                o.value(),
                (eff.delta - o.value()).abs() / o.value()
            );
        }
    }
    Ok(())
}
