//! Adaptive Simpson quadrature with interval halving.

use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-9;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to relative tolerance `eps`.
///
/// The absolute budget is `eps` times a coarse estimate of `∫|f|`; each
/// accepted panel receives Richardson's `(S2 - S1)/15` correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64, max_depth: u32) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let scale = {
        let panels = 16;
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let x0 = a + k as f64 * h;
                let x1 = x0 + h;
                simpson(x0, x1, f(x0).abs(), f(0.5 * (x0 + x1)).abs(), f(x1).abs())
            })
            .sum::<f64>()
            .abs()
    };
    let tol = eps * scale.max(f64::MIN_POSITIVE);
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, max_depth).ok_or(Error::QuadratureBudget { a, b, eps, max_depth })
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

/// Sums [`adaptive_simpson`] over consecutive segments between sorted
/// `breakpoints`, so kinks at the breakpoints never fall inside a panel.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], eps: f64, max_depth: u32) -> Result<f64> {
    breakpoints
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], eps, max_depth))
        .sum()
}
