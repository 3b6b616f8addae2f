//! Adaptive Simpson quadrature with Richardson error control.

const MAX_DEPTH: u32 = 48;

/// `int_a^b f` with estimated absolute error at most `tol`.
///
/// The integrand should be smooth on `[a, b]`; callers split at kinks.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Start from a few panels so a symmetric integrand cannot fool the first estimate.
    const PANELS: usize = 4;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let whole = simpson(lo, hi, flo, fmid, fhi);
            recurse(
                f,
                lo,
                hi,
                flo,
                fmid,
                fhi,
                whole,
                tol / PANELS as f64,
                MAX_DEPTH,
            )
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Roots of `f` on `[a, b]` found by scanning `steps` cells for sign changes
/// and bisecting each bracket to width `xtol`.
pub fn bracketed_roots(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    steps: usize,
    xtol: f64,
) -> Vec<f64> {
    let h = (b - a) / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=steps {
        let x1 = if i == steps { b } else { a + i as f64 * h };
        let f1 = f(x1);
        if f0 == 0.0 {
            if x0 > a {
                roots.push(x0);
            }
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(f, x0, x1, f0, xtol));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Root of `f` in `[lo, hi]` given opposite signs at the ends; `flo = f(lo)`.
pub fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64, xtol: f64) -> f64 {
    let negative_at_lo = flo < 0.0;
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == negative_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
