//! Bracketing bisection on a boolean predicate.

/// Shrinks `[lo, hi]` around the point where `inside` switches from true
/// (at `lo`) to false (at `hi`). Stops once the bracket is no wider than
/// `tol`; with `tol = 0` it runs to floating-point resolution.
///
/// The returned pair keeps the invariant `inside(lo) && !inside(hi)`
/// provided it held on entry.
pub fn bisect<F>(mut inside: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> bool,
{
    // 1100 halvings exhaust any f64 interval.
    for _ in 0..1100 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
