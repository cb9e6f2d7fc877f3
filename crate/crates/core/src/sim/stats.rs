//! Binomial confidence intervals and BLER-curve interpolation.

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// `true` unless rate `a` is significantly above rate `b` at 95%: the
/// intervals overlap or `a`'s interval lies below `b`'s.
pub fn not_significantly_greater(a: (u64, u64), b: (u64, u64)) -> bool {
    let (a_lo, _) = wilson_interval(a.0, a.1, Z95);
    let (_, b_hi) = wilson_interval(b.0, b.1, Z95);
    a_lo <= b_hi
}

/// SNR at which a BLER curve crosses `target`, interpolating `log10(BLER)`
/// linearly in dB between the bracketing points. `curve` is `(snr_db, bler)`
/// sorted by SNR. Returns `None` when the curve never crosses the target.
pub fn snr_at_bler(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let log_target = target.log10();
    curve.windows(2).find_map(|w| {
        let ((s0, b0), (s1, b1)) = (w[0], w[1]);
        if b0 >= target && b1 <= target && b0 > 0.0 && b1 > 0.0 {
            let (l0, l1) = (b0.log10(), b1.log10());
            if l0 == l1 {
                return Some(s0);
            }
            Some(s0 + (s1 - s0) * (l0 - log_target) / (l0 - l1))
        } else {
            None
        }
    })
}
