//! Fixed-point reals with 256 fractional bits, enough for the logarithmic
//! factors of the mixing bounds. Values are `mantissa / 2^256`, rounded to
//! nearest after every operation.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const FRAC_BITS: u64 = 256;
/// Extra bits carried through series evaluation.
const GUARD: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Real {
    mantissa: BigInt,
}

/// `num / den` rounded half away from zero.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if (r.abs() << 1u8) >= den.abs() {
        if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

impl Real {
    pub fn zero() -> Self {
        Real { mantissa: BigInt::zero() }
    }

    pub fn from_integer(v: &BigInt) -> Self {
        Real { mantissa: v << FRAC_BITS }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Real {
            mantissa: div_round(&(r.numer() << FRAC_BITS), r.denom()),
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn add(&self, other: &Real) -> Real {
        Real {
            mantissa: &self.mantissa + &other.mantissa,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        Real {
            mantissa: div_round(&(&self.mantissa * &other.mantissa), &(BigInt::one() << FRAC_BITS)),
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Real {
        Real {
            mantissa: div_round(&(&self.mantissa * r.numer()), r.denom()),
        }
    }

    /// Exact rational value of the stored mantissa.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << FRAC_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Natural logarithm of a positive rational.
    pub fn ln(x: &BigRational) -> Result<Real> {
        if !x.is_positive() {
            return Err(Error::InvalidArgument(format!("logarithm of non-positive value {x}")));
        }
        let prec = FRAC_BITS + GUARD;
        // x = y * 2^k with y in [1/2, 2).
        let k = x.numer().bits() as i64 - x.denom().bits() as i64;
        let y = if k >= 0 {
            BigRational::new(x.numer().clone(), x.denom() << k as u64)
        } else {
            BigRational::new(x.numer() << (-k) as u64, x.denom().clone())
        };
        let ln_y = ln_near_one(&y, prec);
        let ln2 = ln_near_one(&BigRational::from_integer(BigInt::from(2)), prec);
        let total = ln_y + ln2 * BigInt::from(k);
        Ok(Real {
            mantissa: div_round(&total, &(BigInt::one() << GUARD)),
        })
    }

    /// Natural logarithm of this value.
    pub fn ln_of(&self) -> Result<Real> {
        Real::ln(&self.to_rational())
    }

    /// Base-10 logarithm as a float.
    pub fn log10(&self) -> Result<f64> {
        let ln10 = Real::ln(&BigRational::from_integer(BigInt::from(10)))?;
        let l = self.ln_of()?;
        Ok((l.to_rational() / ln10.to_rational()).to_f64().unwrap_or(f64::NAN))
    }

    /// Scientific notation with `digits` significant digits, e.g. `1.2345e67`.
    pub fn to_scientific(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.mantissa.is_zero() {
            return "0".to_string();
        }
        let neg = self.mantissa.is_negative();
        let abs = self.to_rational().abs();
        let ten = BigInt::from(10);
        // Decimal exponent estimate, corrected below.
        let mut e = (abs.numer().to_string().len() as i64) - (abs.denom().to_string().len() as i64);
        let scaled = |e: i64| -> BigInt {
            let shift = digits as i64 - 1 - e;
            let r = if shift >= 0 {
                &abs * BigRational::from_integer(ten.pow(shift as u32))
            } else {
                &abs / BigRational::from_integer(ten.pow((-shift) as u32))
            };
            div_round(r.numer(), r.denom())
        };
        let mut s = scaled(e);
        let lo = ten.pow(digits as u32 - 1);
        let hi = &lo * &ten;
        while s >= hi {
            e += 1;
            s = scaled(e);
        }
        while s < lo {
            e -= 1;
            s = scaled(e);
        }
        let text = s.to_string();
        let (head, tail) = text.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        }
    }
}

/// `ln(y) * 2^prec` for `y` in `[1/2, 2]` via `2 atanh((y-1)/(y+1))`.
fn ln_near_one(y: &BigRational, prec: u64) -> BigInt {
    let one = BigRational::one();
    let z = (y - &one) / (y + &one);
    let scale = BigInt::one() << prec;
    let zf = div_round(&(z.numer() * &scale), z.denom());
    let z2 = div_round(&(&zf * &zf), &scale);
    let mut power = zf;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = div_round(&(&power * &z2), &scale);
        k += 2;
    }
    sum << 1u8
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(f.precision().unwrap_or(30)))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_scientific(30))
    }
}
