//! One-dimensional searches shared by the orthogonality test and the solvers.

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Runs at most `iterations` interval reductions and stops early once the
/// bracket no longer shrinks in floating point. Returns `(x_min, f_min)`;
/// the endpoints are evaluated too, so a minimum sitting on the boundary is
/// reported exactly.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    let (fa0, fb0) = (f(a), f(b));
    let (a0, b0) = (a, b);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for _ in 0..iterations {
        if !(x1 > a && x2 < b && x1 < x2) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }

    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fa0 < best.1 {
        best = (a0, fa0);
    }
    if fb0 < best.1 {
        best = (b0, fb0);
    }
    best
}

/// Bisection for a sign change of `g` on `[lo, hi]` where `g(lo)` and `g(hi)`
/// have opposite signs (or one is zero). Returns the final midpoint.
pub fn bisect_sign_change(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iterations: usize) -> f64 {
    let glo = g(lo);
    if glo == 0.0 {
        return lo;
    }
    let lo_positive = glo > 0.0;
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
