//! Quadrature rules shared by the field constructors and the reduction.

use crate::jet::Real;

/// Composite Simpson with panel doubling until two successive estimates
/// differ by less than `tol` (absolute). Stops at `2^max_levels` panels.
pub fn simpson_doubling(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const MAX_LEVELS: u32 = 22;
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let mut n: usize = 2;
    let h = (b - a) / 2.0;
    // Sums of endpoint, even-interior and odd-interior samples.
    let ends = fa + fb;
    let mut even = 0.0;
    let mut odd = f(a + h);
    let mut prev = h / 3.0 * (ends + 4.0 * odd);
    for _ in 0..MAX_LEVELS {
        n *= 2;
        let h = (b - a) / n as f64;
        even += odd;
        odd = (0..n / 2).map(|k| f(a + (2 * k + 1) as f64 * h)).sum();
        let est = h / 3.0 * (ends + 2.0 * even + 4.0 * odd);
        if (est - prev).abs() < tol {
            return est;
        }
        prev = est;
    }
    prev
}

/// Recursive adaptive Simpson with a relative tolerance (absolute floor
/// `1e-300` so zero integrals terminate).
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Scale estimate from a coarse sweep, used to turn the relative tolerance
    // into an absolute one for the recursion.
    let scale = {
        let n = 16;
        let h = (b - a) / n as f64;
        (0..=n).map(|k| f(a + k as f64 * h).abs()).fold(0.0, f64::max) * (b - a).abs()
    };
    let tol = (rel_tol * scale).max(1e-300);
    adaptive_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rec(
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
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Four-point Gauss–Legendre nodes and weights on `[0, 1]`.
pub const GL4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// Composite four-point Gauss–Legendre over `[a, b]` with `panels` equal
/// panels. Generic so that `a`, `b` may carry derivatives; the result is the
/// exact derivative of the discrete rule.
pub fn gauss_legendre<S: Real>(f: impl Fn(S) -> S, a: S, b: S, panels: usize) -> S {
    let len = b - a;
    let mut acc = S::zero();
    for k in 0..panels {
        for &(node, w) in &GL4 {
            let r = (k as f64 + node) / panels as f64;
            acc += f(a + len * r) * (w / panels as f64);
        }
    }
    acc * len
}

/// Cubic Hermite interpolation on one interval `[t0, t1]` given values and
/// slopes at both ends.
pub fn hermite<S: Real>(t: S, t0: f64, t1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> S {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = s3 * 2.0 - s2 * 3.0 + 1.0;
    let h10 = s3 - s2 * 2.0 + s;
    let h01 = s2 * 3.0 - s3 * 2.0;
    let h11 = s3 - s2;
    h00 * y0 + h10 * (h * d0) + h01 * y1 + h11 * (h * d1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Dual;

    #[test]
    fn simpson_doubling_log_integral() {
        // ∫_{0.2}^{1} 1/s ds = ln 5
        let v = simpson_doubling(|s| 1.0 / s, 0.2, 1.0, 1e-12);
        assert!((v - 5f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn adaptive_simpson_polynomial_is_exact() {
        let v = adaptive_simpson(&|t| t, 0.0, 3.0, 1e-12);
        assert!((v - 4.5).abs() < 1e-12);
        let w = adaptive_simpson(&|t| (3.0 * t).sin(), 0.0, 2.0, 1e-12);
        assert!((w - (1.0 - 6f64.cos()) / 3.0).abs() < 1e-11);
    }

    #[test]
    fn gauss_legendre_derivative_of_upper_limit() {
        // d/db ∫_0^b e^s ds = e^b
        let b = Dual::<1>::var(0.8, 0);
        let v = gauss_legendre(|s: Dual<1>| s.exp(), Dual::constant(0.0), b, 4);
        assert!((v.v - (0.8f64.exp() - 1.0)).abs() < 1e-13);
        assert!((v.d[0] - 0.8f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |t: f64| t * t * t - 2.0 * t + 1.0;
        let df = |t: f64| 3.0 * t * t - 2.0;
        let v: f64 = hermite(0.37, 0.2, 0.9, f(0.2), f(0.9), df(0.2), df(0.9));
        assert!((v - f(0.37)).abs() < 1e-14);
    }
}
