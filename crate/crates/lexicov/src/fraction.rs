//! Exact rational fractions for coverage arithmetic.
//!
//! Coverage values are ratios of token counts and must stay exact: the
//! self-coverage guarantee and the "coverages sum to one" invariant are
//! integer identities, not floating-point approximations. Fractions are
//! reduced on construction so structural equality is value equality.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A non-negative rational number with a positive denominator, always reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "fraction denominator must be positive");
        if num == 0 {
            return Fraction { num: 0, den: 1 };
        }
        let g = gcd(num, den);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact sum; panics only if the reduced result overflows u64, which does
    /// not happen for in-range corpus sizes.
    pub fn add(&self, other: &Fraction) -> Fraction {
        let g = gcd(self.den, other.den);
        let lcm = (self.den / g) as u128 * other.den as u128;
        let num =
            self.num as u128 * (lcm / self.den as u128) + other.num as u128 * (lcm / other.den as u128);
        let g2 = gcd128(num, lcm);
        let (num, den) = (num / g2, lcm / g2);
        assert!(num <= u64::MAX as u128 && den <= u64::MAX as u128);
        Fraction {
            num: num as u64,
            den: den as u64,
        }
    }

    /// Decimal rendering with `places` digits, rounding half away from zero.
    pub fn to_decimal_string(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let scaled = self.num as u128 * scale;
        let q = (scaled + self.den as u128 / 2) / self.den as u128;
        let int = q / scale;
        let frac = q % scale;
        if places == 0 {
            format!("{int}")
        } else {
            format!("{int}.{frac:0width$}", width = places as usize)
        }
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parse error for threshold-style fraction strings.
#[derive(Debug, thiserror::Error)]
#[error("invalid fraction: {0}")]
pub struct ParseFractionError(String);

impl FromStr for Fraction {
    type Err = ParseFractionError;

    /// Accepts a decimal (`0.95`), a percent (`95%`), or `num/den`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseFractionError(s.to_string());
        if let Some(pct) = s.strip_suffix('%') {
            let f: Fraction = pct.parse().map_err(|_| bad())?;
            return Ok(Fraction::new(f.num, f.den.checked_mul(100).ok_or_else(bad)?));
        }
        if let Some((n, d)) = s.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| bad())?;
            let den: u64 = d.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            return Ok(Fraction::new(num, den));
        }
        match s.split_once('.') {
            None => {
                let num: u64 = s.parse().map_err(|_| bad())?;
                Ok(Fraction::new(num, 1))
            }
            Some((int, frac)) => {
                if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                if frac.len() > 18 {
                    return Err(bad());
                }
                let int: u64 = if int.is_empty() {
                    0
                } else {
                    int.parse().map_err(|_| bad())?
                };
                let den = 10u64.pow(frac.len() as u32);
                let frac: u64 = frac.parse().map_err(|_| bad())?;
                let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
                Ok(Fraction::new(num, den))
            }
        }
    }
}
