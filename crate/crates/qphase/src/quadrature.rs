//! Adaptive Simpson quadrature.

/// Panels the interval is cut into before adapting, so a peak hidden
/// between the first few samples is not missed.
const START_PANELS: usize = 16;

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let h = (b - a) / START_PANELS as f64;
    let panel_tol = tol / START_PANELS as f64;
    (0..START_PANELS)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (flo, fhi) = (f(lo), f(hi));
            let m = 0.5 * (lo + hi);
            let fm = f(m);
            refine(f, lo, hi, flo, fm, fhi, simpson(lo, hi, flo, fm, fhi), panel_tol, 40)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mass() {
        let f = |x: f64| (-x * x).exp() / std::f64::consts::PI.sqrt();
        assert!((adaptive_simpson(&f, -10.0, 10.0, 1e-12) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn narrow_peak_far_from_coarse_samples() {
        let f = |x: f64| x * x * (-x * x).exp();
        let want = std::f64::consts::PI.sqrt() / 2.0;
        assert!((adaptive_simpson(&f, -12.0, 12.0, 1e-12) - want).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_integrand() {
        let f = |x: f64| (10.0 * x).cos();
        let want = 2.0 * (2.0f64).sin() / 10.0;
        assert!((adaptive_simpson(&f, -0.2, 0.2, 1e-13) - want).abs() < 1e-12);
    }
}
