use super::StatsError;

/// Absolute difference as a percentage of the midpoint of `a` and `b`.
pub fn percentage_gap(a: f64, b: f64) -> Result<f64, StatsError> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(StatsError::NonPositiveInput);
    }
    Ok(100.0 * (a - b).abs() / ((a + b) / 2.0))
}
