//! Exact rational scalars and parsing/formatting helpers.
//!
//! All geometry in this crate runs on [`Scalar`], an arbitrary-precision
//! rational. Comparisons are exact; there is no tolerance anywhere in the
//! exact backend. Decimal literals are parsed as the rational they denote
//! ("3.2" is 16/5, not the nearest double).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Scalar = BigRational;

/// Scalar from an integer.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar p/q. Panics if q == 0.
pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_zero(x: &Scalar) -> bool {
    x.is_zero()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses a decimal ("-3.25"), integer ("7") or fraction ("16/5") literal.
pub fn parse(text: &str) -> Result<Scalar, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty numeric literal".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let sign = if ip.trim_start().starts_with('-') { -1 } else { 1 };
        let ip_val: BigInt = if ip.is_empty() || ip == "-" || ip == "+" {
            BigInt::zero()
        } else {
            ip.parse().map_err(|e| format!("bad integer part {ip:?}: {e}"))?
        };
        if fp.is_empty() {
            return Ok(BigRational::from_integer(ip_val));
        }
        if !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad fractional part {fp:?}"));
        }
        let frac_num: BigInt = fp.parse().map_err(|e| format!("bad fraction {fp:?}: {e}"))?;
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let frac = BigRational::new(frac_num, den);
        let whole = BigRational::from_integer(ip_val);
        Ok(if sign < 0 { whole - frac } else { whole + frac })
    } else {
        let n: BigInt = s.parse().map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Canonical lowest-terms rendering: "p" or "p/q".
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Nearest rational with the given denominator.
pub fn snap_to_denom(x: f64, denom: i64) -> Scalar {
    let scaled = (x * denom as f64).round();
    BigRational::new(
        BigInt::from(scaled as i128),
        BigInt::from(denom),
    )
}

/// Best rational approximation of `x` whose denominator stays at or below
/// `max_denom`, via the continued-fraction convergent/semiconvergent walk.
/// Exact inputs with small denominators come back unchanged.
pub fn limit_denominator(x: &Scalar, max_denom: u64) -> Scalar {
    let limit = BigInt::from(max_denom);
    if *x.denom() <= limit {
        return x.clone();
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.clone() / d.clone();
        let q2 = &q0 + &a * &q1;
        if q2 > limit {
            // take the best semiconvergent that still fits
            let k = (&limit - &q0) / &q1;
            let p_semi = &p0 + &k * &p1;
            let q_semi = &q0 + &k * &q1;
            let cand1 = BigRational::new(p_semi, q_semi);
            let cand2 = BigRational::new(p1, q1);
            let e1 = (&cand1 - x).abs();
            let e2 = (&cand2 - x).abs();
            return if e1 < e2 { cand1 } else { cand2 };
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0) = (p1.clone(), q1.clone());
        (p1, q1) = (p2, q2);
        let r = n - a * &d;
        if r.is_zero() {
            return BigRational::new(p1, q1);
        }
        n = d;
        d = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("3.2").unwrap(), ratio(16, 5));
        assert_eq!(parse("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse("16/5").unwrap(), ratio(16, 5));
        assert_eq!(parse("-2.2").unwrap(), ratio(-11, 5));
        assert_eq!(parse("7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("a.b").is_err());
    }

    #[test]
    fn limit_denominator_small_inputs_unchanged() {
        let x = ratio(16, 5);
        assert_eq!(limit_denominator(&x, 100), x);
    }

    #[test]
    fn limit_denominator_approximates() {
        // pi-ish convergent check: 355/113 is the best under 1000
        let x = parse("3.14159265358979").unwrap();
        let y = limit_denominator(&x, 1000);
        assert_eq!(y, ratio(355, 113));
    }

    proptest! {
        #[test]
        fn format_parse_roundtrip(p in -10_000i64..10_000, q in 1i64..10_000) {
            let x = ratio(p, q);
            let back = parse(&format(&x)).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn limit_denominator_bounds_and_error(p in -100_000i64..100_000, q in 1i64..100_000) {
            let x = ratio(p, q);
            let y = limit_denominator(&x, 64);
            prop_assert!(*y.denom() <= num_bigint::BigInt::from(64));
            let err = (&y - &x).abs();
            // classic best-approximation guarantee: |x - p/q| <= 1/(q*limit)
            let bound = Scalar::new(num_bigint::BigInt::from(1), y.denom() * 64);
            prop_assert!(err <= bound);
        }
    }
}
