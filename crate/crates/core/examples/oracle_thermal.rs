//! Split-operator thermal pipeline against the exact Gibbs state of N = 4 atoms.
use dicke_overlap::oracle::{exact_moments, exact_overlap, exact_thermal_state, split_log_trace};
use dicke_overlap::thermal::{log_partition, overlap_finite_t_matched, thermal_moments, OverlapFactor, ThermalPoint};
use dicke_overlap::{ModelParams, QuadratureSpec, SeparableState};

fn main() -> dicke_overlap::Result<()> {
    let quad = QuadratureSpec::default();
    let params = ModelParams::resonant(1.0, 4)?;
    for beta in [0.1, 0.2, 0.4] {
        let pt = ThermalPoint::new(params, beta)?;
        let (delta, a) = overlap_finite_t_matched(&pt, &quad, OverlapFactor::Corrected)?;
        let exact = exact_thermal_state(&params, 60, beta)?;
        let o = exact_overlap(&exact, &SeparableState::new(a, 4)?)?.value();
        let (mq, me) = (thermal_moments(&pt, &quad)?, exact_moments(&exact)?);
        println!(
            "beta={beta}: delta {delta:.6e} vs {o:.6e} (rel {:.1e}); <J_z^2>/N^2 {:.5} vs {:.5}; ln z {:.8} vs split trace {:.8}",
            (delta - o).abs() / o,
            mq.second[2],
            me.second[2],
            log_partition(&pt, &quad)?,
            split_log_trace(&params, 200, beta)?
        );
    }
    Ok(())
}
