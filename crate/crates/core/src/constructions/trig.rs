//! Deterministic rational approximations of points on the unit circle.
//!
//! Platform libm sin/cos differ in the last ulp across targets, which
//! would break bit-identical recipe replay. Angles here are always
//! rational multiples of a full turn, so the quadrant walk is exact
//! integer arithmetic and the residual angle is evaluated by a fixed
//! Taylor loop in plain IEEE ops.


use crate::scalar::{ratio, Scalar};

const TAU: f64 = std::f64::consts::TAU;

/// (sin, cos) of 2*pi*(num/den), deterministic across platforms.
pub fn sincos_turn(num: i64, den: i64) -> (f64, f64) {
    assert!(den > 0);
    let num = num.rem_euclid(den);
    // quarter-turn reduction, exact in integers
    let quadrant = (4 * num) / den;
    let rem_num = 4 * num - quadrant * den; // angle remainder = rem/den quarter turns
    let t = (rem_num as f64 / den as f64) * (TAU / 4.0);
    let (s, c) = taylor_sincos(t);
    match quadrant {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

fn taylor_sincos(t: f64) -> (f64, f64) {
    // |t| <= pi/2; 12 terms put the truncation error far below 1 ulp
    let t2 = t * t;
    let mut sin = 0.0;
    let mut cos = 0.0;
    let mut term_s = t;
    let mut term_c = 1.0;
    for k in 0..12 {
        sin += term_s;
        cos += term_c;
        let ks = (2 * k + 2) as f64 * (2 * k + 3) as f64;
        let kc = (2 * k + 1) as f64 * (2 * k + 2) as f64;
        term_s *= -t2 / ks;
        term_c *= -t2 / kc;
    }
    (sin, cos)
}

/// Denominator used when freezing trigonometric values into rationals.
pub const SNAP_DENOM: i64 = 10_000_000;

/// Rational (sin, cos) of 2*pi*(num/den), each within 1e-7 of the true
/// value.
pub fn rational_sincos_turn(num: i64, den: i64) -> (Scalar, Scalar) {
    let (s, c) = sincos_turn(num, den);
    (snap(s), snap(c))
}

fn snap(x: f64) -> Scalar {
    let scaled = (x * SNAP_DENOM as f64).round();
    ratio(scaled as i64, SNAP_DENOM)
}

/// Rational approximation of 1/cos(2*pi*(num/den))^power, within 1e-6
/// relative; used for the spiral radii.
pub fn rational_sec_power(num: i64, den: i64, power: u32) -> Scalar {
    let (_, c) = sincos_turn(num, den);
    let val = 1.0 / c.powi(power as i32);
    let scaled = (val * SNAP_DENOM as f64).round();
    ratio(scaled as i64, SNAP_DENOM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::to_f64;

    #[test]
    fn matches_libm_closely() {
        for den in [5i64, 7, 9, 16, 17, 36] {
            for num in 0..den {
                let (s, c) = sincos_turn(num, den);
                let angle = TAU * num as f64 / den as f64;
                assert!((s - angle.sin()).abs() < 1e-14, "sin {num}/{den}");
                assert!((c - angle.cos()).abs() < 1e-14, "cos {num}/{den}");
            }
        }
    }

    #[test]
    fn exact_axes() {
        assert_eq!(sincos_turn(0, 4), (0.0, 1.0));
        let (s, c) = sincos_turn(1, 4);
        assert_eq!((s, c), (1.0, 0.0));
        let (s, c) = sincos_turn(2, 4);
        assert_eq!((s, c), (0.0, -1.0));
    }

    #[test]
    fn rational_snap_is_close() {
        let (s, c) = rational_sincos_turn(1, 7);
        let angle = TAU / 7.0;
        assert!((to_f64(&s) - angle.sin()).abs() < 2e-7);
        assert!((to_f64(&c) - angle.cos()).abs() < 2e-7);
    }
}
