//! Small numerical helpers shared between modules.

#[allow(unused_imports)] // unused once std is linked
use num_traits::Float;

/// `floor(ratio)`, except that ratios within a relative 1e-9 of an integer
/// snap to it, so that `floor(0.3 / 0.1)` is 3 and scaling both operands by
/// the same factor cannot move the result across an integer.
pub(crate) fn snapped_floor(ratio: f64) -> f64 {
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * ratio.abs().max(1.0) {
        nearest
    } else {
        ratio.floor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snaps_rounding_noise() {
        assert_eq!(snapped_floor(0.3 / 0.1), 3.0);
        assert_eq!(snapped_floor(2.999), 2.0);
        assert_eq!(snapped_floor(0.0), 0.0);
        assert_eq!(snapped_floor(7.5), 7.0);
    }
}
