//! Fixed-precision complex arithmetic on binary big floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_base::BitTest;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use super::rational::Rational;

pub type BigFloat = FBig<HalfEven, 2>;

/// Bits needed to carry `digits` decimal digits.
pub fn digits_to_bits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8
}

pub fn float_from_rational(q: &Rational, bits: usize) -> BigFloat {
    let n = BigFloat::from(q.numerator().clone()).with_precision(bits).value();
    let d = BigFloat::from(IBig::from(q.denominator().clone())).with_precision(bits).value();
    n / d
}

pub fn float_from_f64(x: f64, bits: usize) -> BigFloat {
    BigFloat::try_from(x).expect("finite float").with_precision(bits).value()
}

pub fn float_zero(bits: usize) -> BigFloat {
    BigFloat::ZERO.with_precision(bits).value()
}

pub fn float_to_f64(x: &BigFloat) -> f64 {
    x.to_f64().value()
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    float_to_f64(&float_from_rational(q, 64))
}

/// log10 of |x|, or `-inf` for zero; accurate for values far outside the f64 range.
pub fn float_log10(x: &BigFloat) -> f64 {
    if *x == BigFloat::ZERO {
        return f64::NEG_INFINITY;
    }
    let repr = x.repr();
    let sig = repr.significand();
    let bits = sig.bit_len() as isize;
    let shift = (bits - 53).max(0);
    let top: f64 = (sig >> (shift as usize)).to_f64().value().abs();
    (top.log2() + (shift + repr.exponent()) as f64) * std::f64::consts::LOG10_2
}

/// Decimal rendering with the given number of significant digits.
pub fn float_to_decimal(x: &BigFloat, digits: usize) -> String {
    x.to_decimal().value().with_precision(digits).value().to_string()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        BigComplex::new(float_zero(bits), float_zero(bits))
    }

    pub fn one(bits: usize) -> Self {
        BigComplex::new(BigFloat::ONE.with_precision(bits).value(), float_zero(bits))
    }

    pub fn from_rational(q: &Rational, bits: usize) -> Self {
        BigComplex::new(float_from_rational(q, bits), float_zero(bits))
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        BigComplex::new(float_from_f64(re, bits), float_from_f64(im, bits))
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        BigComplex::new(self.re.clone().with_precision(bits).value(), self.im.clone().with_precision(bits).value())
    }

    pub fn is_zero(&self) -> bool {
        self.re == BigFloat::ZERO && self.im == BigFloat::ZERO
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// log10 |z| without leaving big-float range.
    pub fn log10_abs(&self) -> f64 {
        float_log10(&self.norm_sqr()) / 2.0
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        BigComplex::new(&self.re * s, &self.im * s)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn powu(&self, n: usize) -> Self {
        let mut acc = BigComplex::one(self.precision());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let bits = self.precision();
        if self.is_zero() {
            return BigComplex::zero(bits);
        }
        let r = self.abs();
        let half = BigFloat::ONE.with_precision(bits).value() / BigFloat::from(2);
        let a = ((&r + &self.re) * &half).sqrt();
        let b = ((&r - &self.re) * &half).sqrt();
        let b = if self.im < BigFloat::ZERO { -b } else { b };
        BigComplex::new(a, b)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{} + {}i", float_to_decimal(&self.re, digits), float_to_decimal(&self.im, digits))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "{re:e}{:+e}i", im)
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let n = o.norm_sqr();
        let re = (&self.re * &o.re + &self.im * &o.im) / &n;
        let im = (&self.im * &o.re - &self.re * &o.im) / &n;
        BigComplex::new(re, im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// |a - b| / max(|a|, |b|); zero when both vanish.
pub fn relative_difference(a: &BigComplex, b: &BigComplex) -> f64 {
    let diff = (a - b).log10_abs();
    let scale = a.log10_abs().max(b.log10_abs());
    if diff == f64::NEG_INFINITY {
        return 0.0;
    }
    if scale == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    10f64.powf(diff - scale)
}

/// Same as [`relative_difference`] but reported as log10, so tiny values do not underflow.
pub fn log10_relative_difference(a: &BigComplex, b: &BigComplex) -> f64 {
    let diff = (a - b).log10_abs();
    let scale = a.log10_abs().max(b.log10_abs());
    if diff == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    diff - scale
}
