/// Writes `x` with 17 significant digits, enough for an exact `f64` round trip.
pub(crate) fn f64_17(x: f64) -> String {
    format!("{x:.16e}")
}
