//! Circular (mod 360) angle arithmetic used by beam sweeping and bearing
//! estimation.

/// Wraps an angle in degrees into `[0, 360)`.
pub fn wrap_deg(angle_deg: f64) -> f64 {
    let wrapped = angle_deg.rem_euclid(360.0);
    // rem_euclid can return 360.0 when the input is a tiny negative number.
    if wrapped >= 360.0 {
        wrapped - 360.0
    } else {
        wrapped
    }
}

/// Smallest absolute angular difference between two bearings, in `[0, 180]`.
pub fn circular_diff_deg(a_deg: f64, b_deg: f64) -> f64 {
    let d = (a_deg - b_deg).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Circular mean of a set of bearings, in `[0, 360)`.
///
/// Returns `None` for an empty input. A perfectly balanced set (zero
/// resultant vector) degenerates to `atan2(0, 0) = 0`.
pub fn circular_mean_deg<I>(angles_deg: I) -> Option<f64>
where
    I: IntoIterator<Item = f64>,
{
    let mut sin_sum = 0.0;
    let mut cos_sum = 0.0;
    let mut count = 0usize;
    for a in angles_deg {
        let r = a.to_radians();
        sin_sum += r.sin();
        cos_sum += r.cos();
        count += 1;
    }
    if count == 0 {
        return None;
    }
    Some(wrap_deg(sin_sum.atan2(cos_sum).to_degrees()))
}
