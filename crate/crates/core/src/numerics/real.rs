use core::cmp::Ordering;
use core::fmt::Debug;

use num_complex::Complex64;

use super::{CertifiedReal, NumericsError, DEFAULT_PRECISION_CAP};

/// Largest `f64` magnitude treated as an exact zero in fast mode.
const F64_ZERO: f64 = 1e-13;
/// Below this magnitude a tracked value's sign is decided by its certified part.
const TRACKED_UNSURE: f64 = 1e-9;

/// Scalar field used by the generic decomposition and completion code.
///
/// `f64` is the fast mode. [`Tracked`] runs the same arithmetic in `f64` while
/// recording a [`CertifiedReal`] expression for every value.
pub trait Real: Clone + Debug {
    fn from_f64(x: f64) -> Self;
    /// Lifts a certified value; fast mode keeps only its `f64` image.
    fn from_certified(exact: &CertifiedReal) -> Self;
    fn pi() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self * 2^k`.
    fn shift(&self, k: i32) -> Self;
    fn div(&self, other: &Self) -> Result<Self, NumericsError>;
    fn sqrt(&self) -> Result<Self, NumericsError>;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan(&self) -> Self;
    fn acos(&self) -> Result<Self, NumericsError>;
    fn to_f64(&self) -> f64;
    /// Sign, with values indistinguishable from zero reported as `Equal`.
    fn sign(&self) -> Ordering;
    fn certified(&self) -> Option<CertifiedReal>;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_certified(exact: &CertifiedReal) -> Self {
        exact.to_f64()
    }
    fn pi() -> Self {
        core::f64::consts::PI
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn shift(&self, k: i32) -> Self {
        libm::scalbn(*self, k)
    }
    fn div(&self, other: &Self) -> Result<Self, NumericsError> {
        if *other == 0.0 {
            return Err(NumericsError::ZeroDivisorUndecided { cap: 0 });
        }
        Ok(self / other)
    }
    fn sqrt(&self) -> Result<Self, NumericsError> {
        if *self < -F64_ZERO {
            return Err(NumericsError::DomainError("sqrt of a negative number"));
        }
        Ok(libm::sqrt(self.max(0.0)))
    }
    fn sin(&self) -> Self {
        libm::sin(*self)
    }
    fn cos(&self) -> Self {
        libm::cos(*self)
    }
    fn atan(&self) -> Self {
        libm::atan(*self)
    }
    fn acos(&self) -> Result<Self, NumericsError> {
        if self.abs() > 1.0 + F64_ZERO {
            return Err(NumericsError::DomainError("arccos outside [-1, 1]"));
        }
        Ok(libm::acos(self.clamp(-1.0, 1.0)))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sign(&self) -> Ordering {
        if self.abs() <= F64_ZERO {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn certified(&self) -> Option<CertifiedReal> {
        None
    }
}

/// A fast `f64` value paired with its certified counterpart.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub fast: f64,
    pub exact: CertifiedReal,
}

impl Tracked {
    pub fn lift(exact: CertifiedReal) -> Self {
        Self {
            fast: exact.to_f64(),
            exact,
        }
    }

    fn pair(fast: f64, exact: CertifiedReal) -> Self {
        Self { fast, exact }
    }
}

impl Real for Tracked {
    fn from_f64(x: f64) -> Self {
        Self::pair(x, CertifiedReal::from_f64(x).expect("finite input"))
    }
    fn from_certified(exact: &CertifiedReal) -> Self {
        Self::lift(exact.clone())
    }
    fn pi() -> Self {
        Self::pair(core::f64::consts::PI, CertifiedReal::pi())
    }
    fn add(&self, other: &Self) -> Self {
        Self::pair(self.fast + other.fast, self.exact.add(&other.exact))
    }
    fn sub(&self, other: &Self) -> Self {
        Self::pair(self.fast - other.fast, self.exact.sub(&other.exact))
    }
    fn mul(&self, other: &Self) -> Self {
        Self::pair(self.fast * other.fast, self.exact.mul(&other.exact))
    }
    fn neg(&self) -> Self {
        Self::pair(-self.fast, self.exact.neg())
    }
    fn shift(&self, k: i32) -> Self {
        Self::pair(libm::scalbn(self.fast, k), self.exact.shift(k))
    }
    fn div(&self, other: &Self) -> Result<Self, NumericsError> {
        let exact = self.exact.div(&other.exact)?;
        Ok(Self::pair(self.fast / other.fast, exact))
    }
    fn sqrt(&self) -> Result<Self, NumericsError> {
        let exact = self.exact.sqrt()?;
        Ok(Self::pair(libm::sqrt(self.fast.max(0.0)), exact))
    }
    fn sin(&self) -> Self {
        Self::pair(libm::sin(self.fast), self.exact.sin())
    }
    fn cos(&self) -> Self {
        Self::pair(libm::cos(self.fast), self.exact.cos())
    }
    fn atan(&self) -> Self {
        Self::pair(libm::atan(self.fast), self.exact.atan())
    }
    fn acos(&self) -> Result<Self, NumericsError> {
        let exact = self.exact.acos()?;
        Ok(Self::pair(libm::acos(self.fast.clamp(-1.0, 1.0)), exact))
    }
    fn to_f64(&self) -> f64 {
        self.fast
    }
    fn sign(&self) -> Ordering {
        if self.fast.abs() > TRACKED_UNSURE {
            return if self.fast > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        match self.exact.sign_witness(DEFAULT_PRECISION_CAP) {
            Some(s) if s > 0 => Ordering::Greater,
            Some(_) => Ordering::Less,
            None => Ordering::Equal,
        }
    }
    fn certified(&self) -> Option<CertifiedReal> {
        Some(self.exact.clone())
    }
}

/// Complex number over a [`Real`] field.
#[derive(Clone, Debug)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(R::zero(), R::zero())
    }

    pub fn one() -> Self {
        Self::new(R::one(), R::zero())
    }

    pub fn real(re: R) -> Self {
        Self::new(re, R::zero())
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::new(R::from_f64(z.re), R::from_f64(z.im))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn scale(&self, k: &R) -> Self {
        Self::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn norm_sqr(&self) -> R {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracked_detects_cancellation() {
        let h = Tracked::from_f64(0.5).sqrt().unwrap();
        let d = h.mul(&h).sub(&Tracked::from_f64(0.5));
        assert!(d.is_zero());
        assert!(!Tracked::from_f64(1e-30).is_zero());
    }

    #[test]
    fn complex_product() {
        let a = Cx::<f64>::new(1.0, 2.0);
        let b = Cx::<f64>::new(3.0, -1.0);
        let c = a.mul(&b).to_c64();
        assert_eq!(c, Complex64::new(5.0, 5.0));
        assert_eq!(a.norm_sqr(), 5.0);
    }
}
