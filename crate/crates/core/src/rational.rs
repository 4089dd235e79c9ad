//! Exact rational arithmetic helpers.
//!
//! Densities, expansion factors and all loop thresholds are compared
//! exactly; floating point never enters a control-flow decision.

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

/// Builds `p/q`, panicking on a zero denominator.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Largest `k` with `2^k <= n`. Requires `n >= 1`.
pub fn floor_log2(n: usize) -> u32 {
    assert!(n >= 1);
    (usize::BITS - 1) - n.leading_zeros()
}

/// Smallest `k` with `2^k >= n`. Requires `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1);
    let f = floor_log2(n);
    if n == (1usize << f) {
        f
    } else {
        f + 1
    }
}

/// Parses "3/4", "0.75" or "2" as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: i64 = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if q == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| format!("bad number {s:?}"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad number {s:?}"));
        }
        if frac.len() > 15 {
            return Err(format!("too many decimal digits in {s:?}"));
        }
        let num: i64 = frac.parse().map_err(|_| format!("bad number {s:?}"))?;
        let den = 10i64.pow(frac.len() as u32);
        let frac_part = Rational::new(num, den);
        let int_part = Rational::from_integer(int);
        return Ok(if neg {
            int_part - frac_part
        } else {
            int_part + frac_part
        });
    }
    let n: i64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
    Ok(Rational::from_integer(n))
}

/// Canonical text form: `p/q`, or just `p` for integers.
pub fn display_rational(r: Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_bounds() {
        assert_eq!(floor_log2(1), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(floor_log2(9), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(floor_log2(1000), 9);
        assert_eq!(ceil_log2(1000), 10);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("0.75").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("2").unwrap(), from_int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn display_roundtrip() {
        assert_eq!(display_rational(ratio(8, 3)), "8/3");
        assert_eq!(display_rational(ratio(4, 2)), "2");
    }
}
