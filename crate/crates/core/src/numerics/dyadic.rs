use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact dyadic rational `mantissa / 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic {
    pub mantissa: BigInt,
    pub exp: u32,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exp: u32) -> Self {
        Self { mantissa, exp }
    }

    pub fn zero(exp: u32) -> Self {
        Self::new(BigInt::zero(), exp)
    }

    /// Exact dyadic value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero(0));
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exp2) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), exponent - 1075)
        };
        let mut m = BigInt::from(mantissa);
        if negative {
            m = -m;
        }
        if exp2 >= 0 {
            Some(Self::new(m << (exp2 as usize), 0))
        } else {
            Some(Self::new(m, (-exp2) as u32))
        }
    }

    /// Nearest `f64` (correct to within one rounding of the mantissa conversion).
    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits before converting so huge mantissas do not overflow.
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let m = &self.mantissa >> (drop as usize);
        let mf = m.to_f64().unwrap_or(0.0);
        mf * pow2(drop - self.exp as i64)
    }

    /// Value rescaled to denominator `2^exp`, rounding to nearest (ties toward +inf).
    pub fn rescale(&self, exp: u32) -> Self {
        if exp >= self.exp {
            Self::new(&self.mantissa << ((exp - self.exp) as usize), exp)
        } else {
            let shift = (self.exp - exp) as usize;
            let half = BigInt::one() << (shift - 1);
            Self::new(floor_shr(&(&self.mantissa + half), shift), exp)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.exp)
    }
}

fn pow2(e: i64) -> f64 {
    libm::scalbn(1.0, e.clamp(-2000, 2000) as i32)
}

/// `floor(x / 2^shift)`.
pub(crate) fn floor_shr(x: &BigInt, shift: usize) -> BigInt {
    // BigInt's `>>` rounds toward negative infinity.
    x >> shift
}

/// `ceil(x / 2^shift)`.
pub(crate) fn ceil_shr(x: &BigInt, shift: usize) -> BigInt {
    -((-x) >> shift)
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

pub(crate) fn isqrt_floor(x: &BigInt) -> BigInt {
    if x.sign() != Sign::Plus {
        return BigInt::zero();
    }
    x.sqrt()
}

pub(crate) fn isqrt_ceil(x: &BigInt) -> BigInt {
    if x.sign() != Sign::Plus {
        return BigInt::zero();
    }
    let s = x.sqrt();
    if &(&s * &s) < x {
        s + 1
    } else {
        s
    }
}

pub(crate) fn abs_big(x: &BigInt) -> BigInt {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        for &x in &[0.5, -3.25, 1e-300, 123456.789, -0.0, 2f64.powi(60)] {
            let d = Dyadic::from_f64(x).unwrap();
            assert_eq!(d.to_f64(), x);
        }
    }

    #[test]
    fn rescale_rounds_to_nearest() {
        let d = Dyadic::new(BigInt::from(7), 3); // 0.875
        assert_eq!(d.rescale(1).mantissa, BigInt::from(2)); // 1.0
        assert_eq!(d.rescale(5).mantissa, BigInt::from(28));
        let neg = Dyadic::new(BigInt::from(-5), 3); // -0.625
        assert_eq!(neg.rescale(2).mantissa, BigInt::from(-2)); // -0.5
    }

    #[test]
    fn shifts_floor_and_ceil() {
        let x = BigInt::from(-5);
        assert_eq!(floor_shr(&x, 1), BigInt::from(-3));
        assert_eq!(ceil_shr(&x, 1), BigInt::from(-2));
        assert_eq!(isqrt_ceil(&BigInt::from(10)), BigInt::from(4));
        assert_eq!(isqrt_floor(&BigInt::from(10)), BigInt::from(3));
    }
}
