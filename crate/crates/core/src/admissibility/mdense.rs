use crate::{Error, Result};

/// Odd-root power `sign(y) |y|^e`, the real branch of `y^e` when `e` has
/// odd numerator and denominator.
fn signed_pow(y: f64, e: f64) -> f64 {
    y.signum() * y.abs().powf(e)
}

/// Sampled lower estimate of the `epsilon` in
/// `a (a+b)^{p-1} >= epsilon |a|^p - |b|^p`, `p = 2 + 2s/(2k+1)`.
///
/// The inequality is homogeneous of degree `p`, so it suffices to take
/// `b = ±1` and sweep `a` over a symmetric log grid `|a| in [1e-6, 1e6]`
/// of `resolution` points per sign. The infimum of
/// `(a (a+b)^{p-1} + |b|^p) / |a|^p` is floored at zero and scaled by 0.99.
pub fn mdense_epsilon(k: u64, s: u64, resolution: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    if resolution < 1000 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} < 1000")));
    }
    let p = 2.0 + 2.0 * s as f64 / (2 * k + 1) as f64;
    let (log_lo, log_hi) = (-6.0f64, 6.0f64);
    let mut inf = f64::INFINITY;
    for i in 0..resolution {
        let magnitude = 10f64.powf(log_lo + (log_hi - log_lo) * i as f64 / (resolution - 1) as f64);
        for a in [magnitude, -magnitude] {
            for b in [1.0f64, -1.0] {
                let ratio = (a * signed_pow(a + b, p - 1.0) + b.abs().powf(p)) / a.abs().powf(p);
                inf = inf.min(ratio);
            }
        }
    }
    if !(inf > 0.0) {
        return Err(Error::NonPositiveEpsilon(inf));
    }
    Ok(0.99 * inf)
}
