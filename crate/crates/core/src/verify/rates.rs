use crate::error::VerifyError;

/// The two quotients of last-iterate bounds at `x = γL_F`: the new bound
/// against Cai et al. and against Tran-Dinh.
pub fn rate_quotients(x: f64) -> Result<(f64, f64), VerifyError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(VerifyError::Domain(x));
    }
    let root = (5.0 - 4.0 * x * x).sqrt() - 1.0;
    let q1 = (2.0 * (1.0 - x * x) / root).sqrt() / 3.0;
    let q2 = (2.0 * (1.0 - x) / (root * (3.0 + 2.0 * x * x))).sqrt();
    Ok((q1, q2))
}

/// `(x, q₁, q₂)` at the `points` interior nodes `i / (points + 1)`.
pub fn rate_curve(points: usize) -> Vec<(f64, f64, f64)> {
    (1..=points)
        .map(|i| {
            let x = i as f64 / (points + 1) as f64;
            let (a, b) = rate_quotients(x).expect("interior node");
            (x, a, b)
        })
        .collect()
}
