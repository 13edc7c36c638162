//! Integrals of exp(g) with g far outside double range, including a bimodal case.
use dicke_overlap::numerics::{expectations, ln_two_cosh, log_integral};
use dicke_overlap::QuadratureSpec;

fn main() -> dicke_overlap::Result<()> {
    let quad = QuadratureSpec::default();
    // ∫ e^{−x²/2} (2cosh 3x)^{400} dx: peaks near ±1200, value ~ e^{720000}.
    let g = |x: f64| -0.5 * x * x + 400.0 * ln_two_cosh(3.0 * x);
    // Observables must stay O(1): |x|/1200 and tanh²(3x).
    let e = expectations(g, 2, |x, out| {
        out[0] = x.abs() / 1200.0;
        out[1] = (3.0 * x).tanh().powi(2);
    }, &quad)?;
    println!("ln I = {:.6}  <|x|>/1200 = {:.9}  <tanh²> = {:.3}  nodes = {}", e.log_integral, e.means[0], e.means[1], e.nodes);
    // A Gaussian for reference: ln √(2π).
    println!("ln ∫e^(-x²/2) = {:.15}", log_integral(|x| -0.5 * x * x, &quad)?);
    Ok(())
}
