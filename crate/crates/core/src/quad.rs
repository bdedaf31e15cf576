//! One-dimensional quadrature used across the crate.

const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Ten-point Gauss-Legendre rule on `[a, b]`. Never evaluates the endpoints.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL10_X.iter().zip(GL10_W.iter()) {
        s += w * (f(m - r * x) + f(m + r * x));
    }
    s * r
}

/// Composite ten-point Gauss-Legendre with `panels` equal panels.
pub fn gauss_legendre_composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| gauss_legendre(f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}

/// Adaptive bisection driven by the ten-point Gauss rule. Suitable for
/// integrable endpoint singularities since endpoints are never sampled.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = gauss_legendre(f, a, m);
        let right = gauss_legendre(f, m, b);
        let both = left + right;
        // below this the difference is rounding noise
        let floor = 16.0 * f64::EPSILON * (left.abs() + right.abs());
        if depth == 0 || (both - whole).abs() <= tol.max(floor) || m <= a || m >= b {
            return both;
        }
        rec(f, a, m, left, 0.5 * tol, depth - 1) + rec(f, m, b, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = gauss_legendre(f, a, b);
    rec(f, a, b, whole, abs_tol, 48)
}

/// Adaptive Gauss over `[a, b]` split at the given interior breakpoints.
pub fn adaptive_gauss_split<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
) -> f64 {
    let mut knots = vec![a];
    knots.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    knots.push(b);
    knots.sort_by(f64::total_cmp);
    let share = abs_tol / (knots.len() - 1) as f64;
    knots
        .windows(2)
        .map(|w| adaptive_gauss(f, w[0], w[1], share))
        .sum()
}

/// Adaptive Simpson. Panels are split until the refined estimate changes by
/// less than `rel_tol` relative to the panel value (or `abs_floor`).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol, abs_floor, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    rel_tol: f64,
    abs_floor: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let both = left + right;
    let diff = both - whole;
    if depth == 0 || diff.abs() <= (rel_tol * both.abs()).max(abs_floor) {
        return both + diff / 15.0;
    }
    simpson_rec(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        left,
        rel_tol,
        0.5 * abs_floor,
        depth - 1,
    ) + simpson_rec(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        right,
        rel_tol,
        0.5 * abs_floor,
        depth - 1,
    )
}

/// Integral over `[a, inf)` via the map `u = a + v / (1 - v)`.
pub fn semi_infinite<F: Fn(f64) -> f64>(f: &F, a: f64, abs_tol: f64) -> f64 {
    let g = |v: f64| {
        let w = 1.0 - v;
        let val = f(a + v / w) / (w * w);
        if val.is_finite() {
            val
        } else {
            0.0
        }
    };
    adaptive_gauss(&g, 0.0, 1.0, abs_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_is_exact_for_degree_19() {
        let f = |x: f64| x.powi(19) + 3.0 * x.powi(18) - x;
        // integral over [0, 1] = 1/20 + 3/19 - 1/2
        let exact = 1.0 / 20.0 + 3.0 / 19.0 - 0.5;
        assert!((gauss_legendre(&f, 0.0, 1.0) - exact).abs() < 1e-14);
        // weights sum to 2
        let w: f64 = GL10_W.iter().sum::<f64>() * 2.0;
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let f = |x: f64| 1.0 / x.sqrt();
        let v = adaptive_gauss(&f, 0.0, 1.0, 1e-10);
        assert!((v - 2.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn simpson_log() {
        let v = adaptive_simpson(&|t: f64| 1.0 / t, 1.0, 4.0, 1e-10, 0.0);
        assert!((v - 4f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_tail() {
        let v = semi_infinite(&|u: f64| (-0.5 * u).exp(), 0.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        let v = semi_infinite(&|u: f64| 1.0 / ((1.0 + u) * (1.0 + u)), 0.0, 1e-12);
        assert!((v - 1.0).abs() < 1e-10);
    }
}
