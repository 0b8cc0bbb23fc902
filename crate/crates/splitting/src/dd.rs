//! Double-double arithmetic: an unevaluated sum `hi + lo` of two doubles,
//! about 106 bits of significand. Used to polish roots beyond double
//! precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use splitting_core::eval::Scalar;
use splitting_core::freealg::Rational;

use crate::linalg::Field;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    pub fn from_i128(n: i128) -> DD {
        let hi = n as f64;
        let rest = n.checked_sub(hi as i128).unwrap_or(0);
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        DD { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> DD {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let x = DD::new(self.hi.sqrt());
        // one Newton step doubles the accurate digits
        x + (self - x * x) / (x + x)
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b * DD::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DD::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

impl fmt::Display for DD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub fn new(re: DD, im: DD) -> CDD {
        CDD { re, im }
    }

    pub fn from_c64(z: Complex64) -> CDD {
        CDD::new(DD::new(z.re), DD::new(z.im))
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> DD {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> CDD {
        CDD::new(self.re, -self.im)
    }
}

impl Add for CDD {
    type Output = CDD;
    fn add(self, b: CDD) -> CDD {
        CDD::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for CDD {
    type Output = CDD;
    fn sub(self, b: CDD) -> CDD {
        CDD::new(self.re - b.re, self.im - b.im)
    }
}

impl Neg for CDD {
    type Output = CDD;
    fn neg(self) -> CDD {
        CDD::new(-self.re, -self.im)
    }
}

impl Mul for CDD {
    type Output = CDD;
    fn mul(self, b: CDD) -> CDD {
        CDD::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for CDD {
    type Output = CDD;
    fn div(self, b: CDD) -> CDD {
        let d = b.norm_sqr();
        let n = self * b.conj();
        CDD::new(n.re / d, n.im / d)
    }
}

impl Scalar for DD {
    fn zero() -> Self {
        DD::ZERO
    }
    fn one() -> Self {
        DD::ONE
    }
    fn from_rational(r: &Rational) -> Self {
        DD::from_i128(*r.numer()) / DD::from_i128(*r.denom())
    }
    fn from_complex(c: Complex64) -> Option<Self> {
        (c.im == 0.0).then(|| DD::new(c.re))
    }
}

impl Scalar for CDD {
    fn zero() -> Self {
        CDD::default()
    }
    fn one() -> Self {
        CDD::new(DD::ONE, DD::ZERO)
    }
    fn from_rational(r: &Rational) -> Self {
        CDD::new(DD::from_rational(r), DD::ZERO)
    }
    fn from_complex(c: Complex64) -> Option<Self> {
        Some(CDD::from_c64(c))
    }
}

impl Field for DD {
    fn magnitude(&self) -> f64 {
        self.hi.abs()
    }
    fn conj(&self) -> Self {
        *self
    }
}

impl Field for CDD {
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn conj(&self) -> Self {
        CDD::conj(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_accurate_beyond_double() {
        let third = DD::ONE / DD::new(3.0);
        let back = third * DD::new(3.0) - DD::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        assert!(third.lo != 0.0);
    }

    #[test]
    fn sqrt_two() {
        let r = DD::new(2.0).sqrt();
        assert!((r * r - DD::new(2.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn large_integers_are_exact() {
        let n: i128 = (1 << 80) + 12345;
        let d = DD::from_i128(n);
        assert_eq!(d.hi as i128 + d.lo as i128, n);
    }

    #[test]
    fn complex_division() {
        let a = CDD::from_c64(Complex64::new(1.0, 2.0));
        let b = CDD::from_c64(Complex64::new(3.0, -1.0));
        let q = a / b;
        let back = q * b - a;
        assert!(back.to_c64().norm() < 1e-30);
    }
}
