//! Slope of −ln Δ against −ln(1 − λ/λ_c) below λ_c, over the standard window and closer in.
use dicke_overlap::zerotemp::{closed_form_overlap_normal, normal_phase_vacuum_probability, scaling_fit};

fn main() -> dicke_overlap::Result<()> {
    for (lo, hi) in [(0.45, 0.4999), (0.499, 0.49999)] {
        let grid: Vec<f64> = (0..40).map(|i| lo + (hi - lo) * i as f64 / 39.0).collect();
        let exact: Vec<f64> = grid.iter().map(|&l| normal_phase_vacuum_probability(l)).collect::<Result<_, _>>()?;
        let closed: Vec<f64> = grid.iter().map(|&l| closed_form_overlap_normal(l)).collect::<Result<_, _>>()?;
        let a = scaling_fit(&grid, &exact, 0.5)?;
        let b = scaling_fit(&grid, &closed, 0.5)?;
        println!("[{lo}, {hi}]  numerical slope {:.4} ± {:.4}   closed form {:.4} ± {:.4}", a.slope, a.slope_std_error, b.slope, b.slope_std_error);
    }
    Ok(())
}
