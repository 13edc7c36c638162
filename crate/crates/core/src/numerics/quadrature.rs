//! Windowed adaptive quadrature for integrands known only through their logarithm.
//!
//! The integrand `exp(g(x))` may overflow (`g` ~ N ln cosh(...) for N ~ 100) and may be
//! bimodal with peaks far from the origin. We locate the local maxima of `g` on a coarse
//! grid, refine each with a golden-section search, open a window around each peak that
//! extends until `g` has dropped by `s²/2` (exactly ±s standard deviations for a
//! Gaussian), merge overlapping windows, and run adaptive Gauss–Kronrod (7, 15) on the
//! union. All values are accumulated as `exp(g - g_peak)` so nothing overflows.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numerics::roots::golden_section_max;

/// Integration policy shared by the thermal computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Budget of integrand evaluations for the adaptive stage.
    pub max_nodes: usize,
    /// Target relative error of every integral.
    pub rel_tol: f64,
    /// Window half-width around each located maximum, in effective standard deviations.
    pub window_halfwidth_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { max_nodes: 20_000, rel_tol: 1e-10, window_halfwidth_sigmas: 8.0 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_nodes < 64 {
            return Err(Error::InvalidParameter(format!("max_nodes must be >= 64, got {}", self.max_nodes)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::InvalidParameter(format!("rel_tol must lie in (0, 1e-3], got {}", self.rel_tol)));
        }
        if !(self.window_halfwidth_sigmas > 0.0) || !self.window_halfwidth_sigmas.is_finite() {
            return Err(Error::InvalidParameter("window_halfwidth_sigmas must be positive".into()));
        }
        Ok(())
    }
}

/// Result of [`expectations`]: `ln ∫ e^g` and the normalized means `∫ h e^g / ∫ e^g`.
#[derive(Debug, Clone)]
pub struct Expectations {
    pub log_integral: f64,
    pub means: Vec<f64>,
    pub nodes: usize,
    pub rel_error: f64,
}

/// `ln ∫ exp(g(x)) dx` over the real line.
pub fn log_integral<G: Fn(f64) -> f64>(log_f: G, quad: &QuadratureSpec) -> Result<f64> {
    Ok(expectations(log_f, 0, |_, _| {}, quad)?.log_integral)
}

/// Integrates `exp(g)` together with `observable_count` bounded observables `h_j(x)`
/// written by `observables(x, out)`, returning `ln ∫ e^g` and `∫ h_j e^g / ∫ e^g`.
pub fn expectations<G, H>(log_f: G, observable_count: usize, observables: H, quad: &QuadratureSpec) -> Result<Expectations>
where
    G: Fn(f64) -> f64,
    H: Fn(f64, &mut [f64]),
{
    quad.validate()?;
    let peaks = locate_peaks(&log_f)?;
    let g_ref = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let windows = build_windows(&log_f, &peaks, quad.window_halfwidth_sigmas);

    let dim = observable_count + 1;
    let eval = |a: f64, b: f64| -> Panel {
        let mut out = vec![0.0; observable_count];
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut kronrod = vec![0.0; dim];
        let mut gauss = vec![0.0; dim];
        for (i, &x) in XGK.iter().enumerate() {
            let points: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
            for &s in points {
                let xx = center + s * half * x;
                let w = (log_f(xx) - g_ref).exp();
                if w == 0.0 || !w.is_finite() {
                    continue;
                }
                observables(xx, &mut out);
                kronrod[0] += WGK[i] * w;
                for j in 0..observable_count {
                    kronrod[j + 1] += WGK[i] * w * out[j];
                }
                if i % 2 == 1 {
                    let wg = WG[i / 2];
                    gauss[0] += wg * w;
                    for j in 0..observable_count {
                        gauss[j + 1] += wg * w * out[j];
                    }
                }
            }
        }
        let mut err = 0.0;
        for j in 0..dim {
            kronrod[j] *= half;
            gauss[j] *= half;
            err += (kronrod[j] - gauss[j]).abs();
        }
        Panel { a, b, values: kronrod, err }
    };

    let mut heap = BinaryHeap::new();
    let mut nodes = 0usize;
    for &(a, b) in &windows {
        let pieces = 4;
        let step = (b - a) / pieces as f64;
        for k in 0..pieces {
            let lo = a + step * k as f64;
            let hi = if k + 1 == pieces { b } else { lo + step };
            heap.push(eval(lo, hi));
            nodes += 15;
        }
    }

    loop {
        let (total, err) = totals(&heap, dim);
        let scale = total[0];
        if !(scale > 0.0) {
            return Err(Error::Quadrature { requested: quad.rel_tol, achieved: f64::INFINITY, nodes });
        }
        let rel = err / scale;
        if rel <= quad.rel_tol {
            let means = total[1..].iter().map(|v| v / scale).collect();
            return Ok(Expectations { log_integral: g_ref + scale.ln(), means, nodes, rel_error: rel });
        }
        if nodes + 30 > quad.max_nodes {
            return Err(Error::Quadrature { requested: quad.rel_tol, achieved: rel, nodes });
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(eval(worst.a, mid));
        heap.push(eval(mid, worst.b));
        nodes += 30;
    }
}

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn totals(heap: &BinaryHeap<Panel>, dim: usize) -> (Vec<f64>, f64) {
    let mut total = vec![0.0; dim];
    let mut err = 0.0;
    for p in heap.iter() {
        for j in 0..dim {
            total[j] += p.values[j];
        }
        err += p.err;
    }
    (total, err)
}

const GRID_POINTS: usize = 4097;
const MAX_HALF_RANGE: f64 = 1e6;
/// Peaks this far (in nats) below the highest one carry no representable mass.
const PEAK_CUTOFF: f64 = 60.0;

/// Local maxima `(x, g(x))` of `g`, refined, keeping only those that matter.
fn locate_peaks<G: Fn(f64) -> f64>(g: &G) -> Result<Vec<(f64, f64)>> {
    let mut half = 16.0;
    let (xs, gs) = loop {
        let step = 2.0 * half / (GRID_POINTS - 1) as f64;
        let xs: Vec<f64> = (0..GRID_POINTS).map(|i| -half + step * i as f64).collect();
        let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        let g_max = gs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !g_max.is_finite() {
            if half >= MAX_HALF_RANGE {
                return Err(Error::InvalidInput("log-integrand is -inf or NaN everywhere on the search grid".into()));
            }
            half *= 4.0;
            continue;
        }
        let edge_low = gs[0] < g_max - PEAK_CUTOFF && gs[0] < gs[1];
        let edge_high = gs[GRID_POINTS - 1] < g_max - PEAK_CUTOFF && gs[GRID_POINTS - 1] < gs[GRID_POINTS - 2];
        if (edge_low && edge_high) || half >= MAX_HALF_RANGE {
            break (xs, gs);
        }
        half *= 4.0;
    };
    let g_max = gs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut peaks = Vec::new();
    let n = xs.len();
    let mut i = 0;
    while i < n {
        let left = if i == 0 { f64::NEG_INFINITY } else { gs[i - 1] };
        // Plateaus: advance to the last equal value before deciding.
        let mut j = i;
        while j + 1 < n && gs[j + 1] == gs[i] {
            j += 1;
        }
        let right = if j + 1 == n { f64::NEG_INFINITY } else { gs[j + 1] };
        if gs[i] > left && gs[i] > right && gs[i] > g_max - PEAK_CUTOFF {
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(j + 1).min(n - 1)];
            let tol = 1e-10 * (1.0 + lo.abs().max(hi.abs()));
            let x = golden_section_max(|x| g(x), lo, hi, tol);
            let gx = g(x);
            let (x, gx) = if gx >= gs[i] { (x, gx) } else { (xs[i], gs[i]) };
            peaks.push((x, gx));
        }
        i = j + 1;
    }
    if peaks.is_empty() {
        return Err(Error::InvalidInput("no maximum of the log-integrand found".into()));
    }
    Ok(peaks)
}

fn build_windows<G: Fn(f64) -> f64>(g: &G, peaks: &[(f64, f64)], sigmas: f64) -> Vec<(f64, f64)> {
    let drop = 0.5 * sigmas * sigmas;
    let mut windows: Vec<(f64, f64)> = peaks
        .iter()
        .map(|&(x0, g0)| {
            let edge = |dir: f64| {
                let mut step = 0.125;
                let mut x = x0;
                loop {
                    let next = x + dir * step;
                    let gn = g(next);
                    if !(gn >= g0 - drop) {
                        return next;
                    }
                    x = next;
                    step *= 1.25;
                    if (x - x0).abs() > MAX_HALF_RANGE {
                        return x;
                    }
                }
            };
            (edge(-1.0), edge(1.0))
        })
        .collect();
    windows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(windows.len());
    for w in windows {
        match merged.last_mut() {
            Some(last) if w.0 <= last.1 => last.1 = last.1.max(w.1),
            _ => merged.push(w),
        }
    }
    merged
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[cfg(test)]
mod tests {
    use super::*;

    const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

    fn tight() -> QuadratureSpec {
        QuadratureSpec { rel_tol: 1e-13, ..Default::default() }
    }

    #[test]
    fn unit_gaussian() {
        let v = log_integral(|x| -0.5 * x * x, &tight()).unwrap();
        assert!((v - LN_SQRT_2PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn shifted_and_scaled_gaussians() {
        for &(mu, sigma) in &[(3.0, 0.5), (-40.0, 2.0), (120.0, 7.0), (0.0, 30.0)] {
            let v = log_integral(|x: f64| -0.5 * ((x - mu) / sigma).powi(2), &tight()).unwrap();
            let exact = LN_SQRT_2PI + f64::ln(sigma);
            assert!((v - exact).abs() < 1e-12, "mu={mu} sigma={sigma}: {v} vs {exact}");
        }
    }

    #[test]
    fn far_bimodal() {
        let g = |x: f64| {
            let a = -0.5 * (x - 50.0) * (x - 50.0);
            let b = -0.5 * (x + 50.0) * (x + 50.0);
            let m = a.max(b);
            m + ((a - m).exp() + (b - m).exp()).ln()
        };
        let v = log_integral(g, &tight()).unwrap();
        assert!((v - (2.0f64.ln() + LN_SQRT_2PI)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn huge_log_values_do_not_overflow() {
        let v = log_integral(|x| 5000.0 - 0.5 * x * x, &tight()).unwrap();
        assert!((v - 5000.0 - LN_SQRT_2PI).abs() < 1e-10);
    }

    #[test]
    fn gaussian_moments() {
        let e = expectations(
            |x: f64| -0.5 * (x - 1.5).powi(2),
            2,
            |x, out| {
                out[0] = x;
                out[1] = x * x;
            },
            &tight(),
        )
        .unwrap();
        assert!((e.means[0] - 1.5).abs() < 1e-11);
        assert!((e.means[1] - (1.0 + 2.25)).abs() < 1e-11);
    }

    #[test]
    fn too_small_budget_reports_achieved_tolerance() {
        let quad = QuadratureSpec { max_nodes: 64, rel_tol: 1e-15, window_halfwidth_sigmas: 8.0 };
        let err = log_integral(|x| -0.5 * x * x - (3.0 * x).cos(), &quad).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec { max_nodes: 10, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { rel_tol: 0.01, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec::default().validate().is_ok());
    }
}
