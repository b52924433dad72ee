//! Success-rate statistics.

use libm::sqrt;

/// 95% two-sided z quantile.
const Z95: f64 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
///
/// Returns `(rate, ci_low, ci_high)` with the interval clamped to `[0, 1]`.
/// The Wilson interval stays well behaved at rates near 0, which the scan
/// experiments routinely hit.
pub fn wilson_interval(successes: u64, total: u64) -> (f64, f64, f64) {
    assert!(total > 0, "wilson interval of an empty sample");
    assert!(successes <= total);
    let n = total as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z95 / denom) * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // at the boundaries the exact bound is p itself; avoid rounding residue
    let lo = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, 1.0) };
    let hi = if successes == total { 1.0 } else { (center + half).clamp(0.0, 1.0) };
    (p, lo, hi)
}
