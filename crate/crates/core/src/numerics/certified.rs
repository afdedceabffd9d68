//! Precision-certified real numbers.
//!
//! A [`CertifiedReal`] is an expression DAG over exact dyadic/rational leaves and
//! the closure operations needed by the decomposition (field operations, square
//! root, sine, cosine, arctangent, arccosine). Evaluation encloses the value in a
//! dyadic interval at a working precision and raises the precision until the
//! interval is narrow enough to honour the `2^-n` contract of [`CertifiedReal::approx`].

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::{
    abs_big, ceil_div, ceil_shr, floor_div, floor_shr, isqrt_ceil, isqrt_floor, Dyadic,
};
use super::NumericsError;

/// Default precision cap (bits) used when searching for sign/zero witnesses.
pub const DEFAULT_PRECISION_CAP: u32 = 256;

const MAX_GUARD_BITS: u32 = 1 << 16;

/// Operations accepted by [`cr_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Sin,
    Cos,
    Arccos,
    Arctan,
}

#[derive(Debug)]
enum Node {
    Dyadic(Dyadic),
    Rational(BigInt, BigInt),
    Pi,
    Add(CertifiedReal, CertifiedReal),
    Sub(CertifiedReal, CertifiedReal),
    Neg(CertifiedReal),
    Mul(CertifiedReal, CertifiedReal),
    Div(CertifiedReal, CertifiedReal),
    Shift(CertifiedReal, i32),
    Sqrt(CertifiedReal),
    Sin(CertifiedReal),
    Cos(CertifiedReal),
    Atan(CertifiedReal),
}

/// A real number together with an evaluator meeting `|approx(n) - x| <= 2^-n`.
#[derive(Clone, Debug)]
pub struct CertifiedReal(Arc<Node>);

/// Closed dyadic interval `[lo, hi] / 2^prec`.
#[derive(Clone, Debug)]
struct Enclosure {
    lo: BigInt,
    hi: BigInt,
}

struct Undecided;

type Memo = BTreeMap<usize, Enclosure>;

impl CertifiedReal {
    fn node(n: Node) -> Self {
        Self(Arc::new(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::node(Node::Dyadic(Dyadic::new(BigInt::from(v), 0)))
    }

    pub fn from_dyadic(d: Dyadic) -> Self {
        Self::node(Node::Dyadic(d))
    }

    /// Exact value of a finite `f64`; `None` for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        Dyadic::from_f64(x).map(Self::from_dyadic)
    }

    /// Exact rational `num / den`; `None` if `den == 0`.
    pub fn from_ratio(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num, den)
        };
        Some(Self::node(Node::Rational(num, den)))
    }

    /// Parses a decimal literal such as `-0.75`, `3`, `1.5e-3` into an exact rational.
    pub fn from_decimal_str(s: &str) -> Option<Self> {
        let s = s.trim();
        let (body, exp10) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (negative, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(pos) => (&body[..pos], &body[pos + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let mut digits = alloc::string::String::from(int_part);
        digits.push_str(frac_part);
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        if negative {
            num = -num;
        }
        let scale = exp10 - frac_part.len() as i32;
        let ten = BigInt::from(10);
        if scale >= 0 {
            Self::from_ratio(num * num_traits::pow(ten, scale as usize), BigInt::one())
        } else {
            Self::from_ratio(num, num_traits::pow(ten, (-scale) as usize))
        }
    }

    pub fn pi() -> Self {
        Self::node(Node::Pi)
    }

    /// `self * 2^k`, exact.
    pub fn shift(&self, k: i32) -> Self {
        if k == 0 {
            return self.clone();
        }
        Self::node(Node::Shift(self.clone(), k))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::node(Node::Add(self.clone(), other.clone()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::node(Node::Sub(self.clone(), other.clone()))
    }

    pub fn neg(&self) -> Self {
        Self::node(Node::Neg(self.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::node(Node::Mul(self.clone(), other.clone()))
    }

    pub fn sin(&self) -> Self {
        Self::node(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        Self::node(Node::Cos(self.clone()))
    }

    pub fn atan(&self) -> Self {
        Self::node(Node::Atan(self.clone()))
    }

    /// Division, requiring a precision `<= cap` at which the divisor's enclosure excludes zero.
    pub fn div_with_cap(&self, other: &Self, cap: u32) -> Result<Self, NumericsError> {
        if other.sign_witness(cap).is_none() {
            return Err(NumericsError::ZeroDivisorUndecided { cap });
        }
        Ok(Self::node(Node::Div(self.clone(), other.clone())))
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumericsError> {
        self.div_with_cap(other, DEFAULT_PRECISION_CAP)
    }

    /// Square root. Arguments that stay within `2^-cap` of zero are accepted and
    /// evaluated as if clamped at zero; provably negative inputs are rejected.
    pub fn sqrt_with_cap(&self, cap: u32) -> Result<Self, NumericsError> {
        let mut p = 8;
        loop {
            if let Ok(e) = self.enclose_fresh(p) {
                if e.hi.is_negative() {
                    return Err(NumericsError::DomainError("sqrt of a negative number"));
                }
                if !e.lo.is_negative() {
                    break;
                }
            }
            if p >= cap {
                break;
            }
            p = (p * 2).min(cap);
        }
        Ok(Self::node(Node::Sqrt(self.clone())))
    }

    pub fn sqrt(&self) -> Result<Self, NumericsError> {
        self.sqrt_with_cap(DEFAULT_PRECISION_CAP)
    }

    /// `arccos(x) = pi/2 - 2 atan(x / (1 + sqrt(1 - x^2)))`, valid on all of `[-1, 1]`.
    pub fn acos_with_cap(&self, cap: u32) -> Result<Self, NumericsError> {
        let one = Self::one();
        let root = one.sub(&self.mul(self)).sqrt_with_cap(cap)?;
        let ratio = self.div_with_cap(&one.add(&root), cap)?;
        Ok(Self::pi().shift(-1).sub(&ratio.atan().shift(1)))
    }

    pub fn acos(&self) -> Result<Self, NumericsError> {
        self.acos_with_cap(DEFAULT_PRECISION_CAP)
    }

    /// Returns `Some(sign)` (`-1` or `+1`) if some precision up to `cap` separates `self` from 0.
    pub fn sign_witness(&self, cap: u32) -> Option<i8> {
        let mut p = 8;
        loop {
            if let Ok(e) = self.enclose_fresh(p) {
                if e.lo.is_positive() {
                    return Some(1);
                }
                if e.hi.is_negative() {
                    return Some(-1);
                }
            }
            if p >= cap {
                return None;
            }
            p = (p * 2).min(cap);
        }
    }

    /// Dyadic `d` with denominator `2^n` and `|d - self| <= 2^-n`.
    pub fn approx(&self, n: u32) -> Dyadic {
        let mut guard = 16u32;
        loop {
            let p = n + guard;
            if let Ok(e) = self.enclose_fresh(p) {
                let width = &e.hi - &e.lo;
                if width <= (BigInt::one() << ((p - n - 1) as usize)) {
                    let sum = &e.lo + &e.hi;
                    // round((lo + hi) / 2 / 2^(p - n)) to nearest
                    let shift = (p - n + 1) as usize;
                    let half = BigInt::one() << (shift - 1);
                    return Dyadic::new(floor_shr(&(sum + half), shift), n);
                }
            }
            assert!(
                guard < MAX_GUARD_BITS,
                "certified evaluation failed to converge"
            );
            guard *= 2;
        }
    }

    /// Nearest `f64` to a 64-bit approximation.
    pub fn to_f64(&self) -> f64 {
        self.approx(64).to_f64()
    }

    /// Reduces an angle into `[0, 2pi)` by subtracting an exactly determined
    /// multiple of `2pi`. Values within `2^-cap` of a multiple of `2pi` map to zero.
    pub fn normalize_angle(&self, cap: u32) -> Self {
        let two_pi = Self::pi().shift(1);
        let mut p = 64u32;
        loop {
            let q = self
                .div_with_cap(&two_pi, cap)
                .expect("2pi is separated from zero")
                .approx(p + 8);
            // k = floor(q) is decided when q is not within 2^-p of an integer.
            let unit = BigInt::one() << ((p + 8) as usize);
            let k = floor_div(&q.mantissa, &unit);
            let frac = &q.mantissa - &k * &unit;
            let margin = BigInt::one() << 9;
            if frac > margin && frac < &unit - &margin {
                return if k.is_zero() {
                    self.clone()
                } else {
                    self.sub(&two_pi.mul(&Self::from_ratio(k, BigInt::one()).expect("unit")))
                };
            }
            if p >= cap {
                // Within 2^-cap of k' * 2pi for k' the nearest integer.
                return Self::zero();
            }
            p = (p * 2).min(cap);
        }
    }

    fn enclose_fresh(&self, p: u32) -> Result<Enclosure, Undecided> {
        let mut memo = Memo::new();
        self.enclose(p, &mut memo)
    }

    /// Identity of the underlying expression node; equal for clones.
    pub fn node_key(&self) -> usize {
        self.key()
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn enclose(&self, p: u32, memo: &mut Memo) -> Result<Enclosure, Undecided> {
        if let Some(e) = memo.get(&self.key()) {
            return Ok(e.clone());
        }
        let out = match &*self.0 {
            Node::Dyadic(d) => {
                if p >= d.exp {
                    let v = &d.mantissa << ((p - d.exp) as usize);
                    Enclosure {
                        lo: v.clone(),
                        hi: v,
                    }
                } else {
                    let s = (d.exp - p) as usize;
                    Enclosure {
                        lo: floor_shr(&d.mantissa, s),
                        hi: ceil_shr(&d.mantissa, s),
                    }
                }
            }
            Node::Rational(num, den) => {
                let scaled = num << (p as usize);
                Enclosure {
                    lo: floor_div(&scaled, den),
                    hi: ceil_div(&scaled, den),
                }
            }
            Node::Pi => {
                let v = pi_fixed(p);
                Enclosure {
                    lo: &v - 2,
                    hi: v + 2,
                }
            }
            Node::Add(a, b) => {
                let (x, y) = (a.enclose(p, memo)?, b.enclose(p, memo)?);
                Enclosure {
                    lo: x.lo + y.lo,
                    hi: x.hi + y.hi,
                }
            }
            Node::Sub(a, b) => {
                let (x, y) = (a.enclose(p, memo)?, b.enclose(p, memo)?);
                Enclosure {
                    lo: x.lo - y.hi,
                    hi: x.hi - y.lo,
                }
            }
            Node::Neg(a) => {
                let x = a.enclose(p, memo)?;
                Enclosure {
                    lo: -x.hi,
                    hi: -x.lo,
                }
            }
            Node::Mul(a, b) => {
                let (x, y) = (a.enclose(p, memo)?, b.enclose(p, memo)?);
                let prods = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
                let min = prods.iter().min().expect("nonempty");
                let max = prods.iter().max().expect("nonempty");
                Enclosure {
                    lo: floor_shr(min, p as usize),
                    hi: ceil_shr(max, p as usize),
                }
            }
            Node::Div(a, b) => {
                let (x, y) = (a.enclose(p, memo)?, b.enclose(p, memo)?);
                if !y.lo.is_positive() && !y.hi.is_negative() {
                    return Err(Undecided);
                }
                let mut lo: Option<BigInt> = None;
                let mut hi: Option<BigInt> = None;
                for num in [&x.lo, &x.hi] {
                    let scaled = num << (p as usize);
                    for den in [&y.lo, &y.hi] {
                        let f = floor_div(&scaled, den);
                        let c = ceil_div(&scaled, den);
                        lo = Some(match lo {
                            Some(l) if l <= f => l,
                            _ => f,
                        });
                        hi = Some(match hi {
                            Some(h) if h >= c => h,
                            _ => c,
                        });
                    }
                }
                Enclosure {
                    lo: lo.expect("four candidates"),
                    hi: hi.expect("four candidates"),
                }
            }
            Node::Shift(a, k) => {
                let x = a.enclose(p, memo)?;
                if *k >= 0 {
                    let s = *k as usize;
                    Enclosure {
                        lo: x.lo << s,
                        hi: x.hi << s,
                    }
                } else {
                    let s = k.unsigned_abs() as usize;
                    Enclosure {
                        lo: floor_shr(&x.lo, s),
                        hi: ceil_shr(&x.hi, s),
                    }
                }
            }
            Node::Sqrt(a) => {
                let x = a.enclose(p, memo)?;
                let lo = if x.lo.is_negative() {
                    BigInt::zero()
                } else {
                    x.lo
                };
                let hi = if x.hi.is_negative() {
                    BigInt::zero()
                } else {
                    x.hi
                };
                Enclosure {
                    lo: isqrt_floor(&(lo << (p as usize))),
                    hi: isqrt_ceil(&(hi << (p as usize))),
                }
            }
            Node::Sin(a) => lipschitz_image(&a.enclose(p, memo)?, p, |x, w| sin_cos_fixed(x, w).0),
            Node::Cos(a) => lipschitz_image(&a.enclose(p, memo)?, p, |x, w| sin_cos_fixed(x, w).1),
            Node::Atan(a) => lipschitz_image(&a.enclose(p, memo)?, p, atan_fixed),
        };
        memo.insert(self.key(), out.clone());
        Ok(out)
    }
}

/// Combines certified reals with one of the supported closure operations.
pub fn cr_combine(op: CrOp, args: &[CertifiedReal]) -> Result<CertifiedReal, NumericsError> {
    cr_combine_with_cap(op, args, DEFAULT_PRECISION_CAP)
}

pub fn cr_combine_with_cap(
    op: CrOp,
    args: &[CertifiedReal],
    cap: u32,
) -> Result<CertifiedReal, NumericsError> {
    let expected = match op {
        CrOp::Add | CrOp::Sub | CrOp::Mul | CrOp::Div => 2,
        _ => 1,
    };
    if args.len() != expected {
        return Err(NumericsError::Arity {
            op,
            expected,
            got: args.len(),
        });
    }
    let a = &args[0];
    Ok(match op {
        CrOp::Add => a.add(&args[1]),
        CrOp::Sub => a.sub(&args[1]),
        CrOp::Mul => a.mul(&args[1]),
        CrOp::Div => a.div_with_cap(&args[1], cap)?,
        CrOp::Sqrt => a.sqrt_with_cap(cap)?,
        CrOp::Sin => a.sin(),
        CrOp::Cos => a.cos(),
        CrOp::Arccos => a.acos_with_cap(cap)?,
        CrOp::Arctan => a.atan(),
    })
}

/// Image of an enclosure under a 1-Lipschitz function whose value at a dyadic
/// point is computed by `point(x, w) -> (value, error)` at fixed-point scale `w`.
fn lipschitz_image<F>(x: &Enclosure, p: u32, point: F) -> Enclosure
where
    F: Fn(&BigInt, u32) -> (BigInt, BigInt),
{
    let mid = floor_shr(&(&x.lo + &x.hi), 1);
    let radius = &x.hi - &mid;
    let guard = 40 + bits_of(p);
    let w = p + guard;
    let (value, err) = point(&(mid << (guard as usize)), w);
    // The series bounds are loose by construction; never trust fewer than 2^20 ulps.
    let err = err.max(BigInt::one() << 20usize);
    let lo = floor_shr(&(&value - &err), guard as usize) - &radius;
    let hi = ceil_shr(&(&value + &err), guard as usize) + &radius;
    Enclosure { lo, hi }
}

fn bits_of(v: u32) -> u32 {
    32 - v.leading_zeros()
}

/// `atan(1/n)` at scale `w` with the error bound in ulps.
fn atan_inv_fixed(n: u64, w: u32) -> (BigInt, BigInt) {
    let nn = BigInt::from(n) * BigInt::from(n);
    let mut power = (BigInt::one() << (w as usize)) / BigInt::from(n);
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power = &power / &nn;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    (sum, BigInt::from(2 * k + 2))
}

/// `pi * 2^w`, accurate to within 2 ulps.
fn pi_fixed(w: u32) -> BigInt {
    let ext = 24 + 2 * bits_of(w);
    let we = w + ext;
    let (a5, _) = atan_inv_fixed(5, we);
    let (a239, _) = atan_inv_fixed(239, we);
    let v = a5 * 16 - a239 * 4;
    floor_shr(&v, ext as usize)
}

/// Fixed-point `(sin x, cos x)` at scale `w` for `x = xw / 2^w`, each with error
/// at most the returned bound (in ulps of `2^-w`).
fn sin_cos_fixed(xw: &BigInt, w: u32) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let one = BigInt::one() << (w as usize);
    // Reduce by the nearest multiple of pi/2.
    let kbits = abs_big(xw).bits() as u32 + 2;
    let ext = kbits + 8;
    let half_pi_ext = pi_fixed(w + ext) >> 1usize; // (pi/2) * 2^(w+ext), error <= 2
    let half_pi = floor_shr(&half_pi_ext, ext as usize);
    let k = floor_div(&(xw * 2 + &half_pi), &(&half_pi * 2));
    let y = xw - floor_shr(&(&k * &half_pi_ext), ext as usize);
    let y2 = floor_shr(&(&y * &y), w as usize);

    let mut s_term = y.clone();
    let mut s_sum = y.clone();
    let mut c_term = one.clone();
    let mut c_sum = one.clone();
    let mut i: u64 = 1;
    let mut terms: u64 = 1;
    loop {
        s_term = -floor_shr(&(&s_term * &y2), w as usize) / BigInt::from((2 * i) * (2 * i + 1));
        c_term = -floor_shr(&(&c_term * &y2), w as usize) / BigInt::from((2 * i - 1) * (2 * i));
        if s_term.is_zero() && c_term.is_zero() {
            break;
        }
        s_sum += &s_term;
        c_sum += &c_term;
        i += 1;
        terms += 1;
    }
    let err = BigInt::from(3 * terms + 8);
    let q = num_integer::Integer::mod_floor(&k, &BigInt::from(4))
        .to_u8()
        .expect("residue below 4");
    let (s, c) = match q {
        0 => (s_sum, c_sum),
        1 => (c_sum, -s_sum),
        2 => (-s_sum, -c_sum),
        _ => (-c_sum, s_sum),
    };
    ((s, err.clone()), (c, err))
}

/// Fixed-point `atan(x)` at scale `w` with error bound.
fn atan_fixed(xw: &BigInt, w: u32) -> (BigInt, BigInt) {
    if xw.is_negative() {
        let (v, e) = atan_fixed(&-xw, w);
        return (-v, e);
    }
    let one = BigInt::one() << (w as usize);
    if xw > &one {
        // atan(x) = pi/2 - atan(1/x)
        let inv = (BigInt::one() << (2 * w as usize)) / xw;
        let (v, e) = atan_reduced(&inv, w);
        let half_pi = pi_fixed(w) >> 1usize;
        return (half_pi - v, e + 4);
    }
    atan_reduced(xw, w)
}

/// `atan(x)` for `0 <= x <= 1` using two half-angle reductions then the Taylor series.
fn atan_reduced(xw: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << (w as usize);
    let mut x = xw.clone();
    for _ in 0..2 {
        let x2 = floor_shr(&(&x * &x), w as usize);
        let root = isqrt_floor(&((&one + x2) << (w as usize)));
        x = (&x << (w as usize)) / (&one + root);
    }
    let x2 = floor_shr(&(&x * &x), w as usize);
    let mut power = x.clone();
    let mut sum = x.clone();
    let mut k: u64 = 1;
    loop {
        power = -floor_shr(&(&power * &x2), w as usize);
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    (sum << 2usize, BigInt::from(4 * (3 * k + 16)))
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.approx(64))
    }
}

/// Values of several certified reals at one precision.
pub fn approx_all(values: &[CertifiedReal], n: u32) -> Vec<Dyadic> {
    values.iter().map(|v| v.approx(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(r: &CertifiedReal, expected: f64, tol: f64) {
        let v = r.to_f64();
        assert!((v - expected).abs() <= tol, "got {v}, expected {expected}");
    }

    #[test]
    fn exact_dyadic_approximation() {
        let half = CertifiedReal::from_ratio(1.into(), 2.into()).unwrap();
        assert_eq!(half.approx(3), Dyadic::new(BigInt::from(4), 3));
        for n in [0, 1, 7, 40] {
            assert!(CertifiedReal::zero().approx(n).is_zero());
        }
    }

    #[test]
    fn sqrt_of_four_is_two_at_every_precision() {
        let r = CertifiedReal::from_int(4).sqrt().unwrap();
        for n in [0u32, 1, 5, 30, 100] {
            let d = r.approx(n);
            assert_eq!(d.mantissa, BigInt::from(2) << (n as usize));
        }
    }

    #[test]
    fn cos_of_zero_is_one() {
        let r = CertifiedReal::zero().cos();
        for n in [0u32, 3, 20, 64] {
            assert_eq!(r.approx(n).mantissa, BigInt::one() << (n as usize));
        }
    }

    #[test]
    fn pi_digits() {
        close(&CertifiedReal::pi(), core::f64::consts::PI, 1e-15);
        // 30 hex digits of pi's fraction: 243F6A8885A308D313198A2E0370734
        let d = CertifiedReal::pi().approx(120);
        let expected = BigInt::parse_bytes(b"3243F6A8885A308D313198A2E037073", 16).unwrap();
        assert!((&d.mantissa - expected).abs() <= BigInt::one());
    }

    #[test]
    fn trig_values() {
        let x = CertifiedReal::from_f64(0.7).unwrap();
        close(&x.sin(), 0.644_217_687_237_691, 1e-15);
        close(&x.cos(), 0.764_842_187_284_488_5, 1e-15);
        let big = CertifiedReal::from_int(100);
        close(&big.sin(), -0.506_365_641_109_758_8, 1e-14);
        close(
            &CertifiedReal::from_int(3).atan(),
            1.249_045_772_398_254_4,
            1e-15,
        );
        close(
            &CertifiedReal::from_f64(-0.25).unwrap().atan(),
            -0.244_978_663_126_864_14,
            1e-15,
        );
    }

    #[test]
    fn arccos_endpoints() {
        close(
            &CertifiedReal::from_int(-1).acos().unwrap(),
            core::f64::consts::PI,
            1e-15,
        );
        close(&CertifiedReal::one().acos().unwrap(), 0.0, 1e-15);
        close(
            &CertifiedReal::zero().acos().unwrap(),
            core::f64::consts::FRAC_PI_2,
            1e-15,
        );
    }

    #[test]
    fn division_requires_witness() {
        let zero = CertifiedReal::one().sub(&CertifiedReal::one());
        assert_eq!(
            CertifiedReal::one().div(&zero).unwrap_err(),
            NumericsError::ZeroDivisorUndecided {
                cap: DEFAULT_PRECISION_CAP
            }
        );
        let neg = CertifiedReal::from_int(-2);
        assert!(matches!(neg.sqrt(), Err(NumericsError::DomainError(_))));
        assert!(matches!(
            cr_combine(CrOp::Add, &[neg]),
            Err(NumericsError::Arity { .. })
        ));
    }

    #[test]
    fn decimal_parsing_is_exact() {
        let r = CertifiedReal::from_decimal_str("-0.125").unwrap();
        assert_eq!(r.approx(3).mantissa, BigInt::from(-1));
        let e = CertifiedReal::from_decimal_str("25e-2").unwrap();
        assert_eq!(e.approx(2).mantissa, BigInt::from(1));
        assert!(CertifiedReal::from_decimal_str("abc").is_none());
        assert!(CertifiedReal::from_decimal_str("").is_none());
    }

    #[test]
    fn angle_normalization() {
        let two_pi = CertifiedReal::pi().shift(1);
        let a = CertifiedReal::from_f64(-0.5)
            .unwrap()
            .normalize_angle(DEFAULT_PRECISION_CAP);
        close(&a, 2.0 * core::f64::consts::PI - 0.5, 1e-14);
        let b = two_pi.normalize_angle(DEFAULT_PRECISION_CAP);
        close(&b, 0.0, 1e-15);
        let c = CertifiedReal::from_int(7).normalize_angle(DEFAULT_PRECISION_CAP);
        close(&c, 7.0 - 2.0 * core::f64::consts::PI, 1e-14);
    }
}
