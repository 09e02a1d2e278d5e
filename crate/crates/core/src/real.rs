//! Binary floating point numbers carrying their own precision, and a small
//! complex type built on top of them.
//!
//! Every arithmetic operation rounds to the larger of the two operand
//! precisions, so small integer or `f64` constants can be mixed freely with
//! working-precision values without dragging the result down.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter::{Product, Sum};
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, RoundingMode, Sign};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Precision used for exact small constants.
const CONST_BITS: usize = 64;

const LOG10_2: f64 = 0.301_029_995_663_981_2;

/// An arbitrary-precision real number.
#[derive(Clone)]
pub struct Real(pub(crate) BigFloat);

impl Real {
    pub fn zero(bits: usize) -> Self {
        Real(BigFloat::new(bits))
    }

    pub fn one(bits: usize) -> Self {
        Real(BigFloat::from_i64(1, bits))
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Real(BigFloat::from_i64(v, bits))
    }

    /// Exact conversion of a binary `f64`.
    pub fn from_f64(v: f64, bits: usize) -> Self {
        Real(BigFloat::from_f64(v, bits))
    }

    /// `num / den` rounded at `bits`.
    pub fn ratio(num: i64, den: i64, bits: usize) -> Self {
        Real::from_i64(num, bits) / Real::from_i64(den, bits)
    }

    /// `2^k` at the given precision.
    pub fn pow2(k: i32, bits: usize) -> Self {
        let mut v = BigFloat::from_i64(1, bits);
        v.set_exponent(1 + k);
        Real(v)
    }

    pub fn bits(&self) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(CONST_BITS)
    }

    /// Copy rounded (or widened) to `bits`.
    pub fn with_bits(&self, bits: usize) -> Self {
        let mut v = self.0.clone();
        // Widening never fails; narrowing only rounds.
        let _ = v.set_precision(bits, RM);
        Real(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(self.bits(), RM))
    }

    pub fn recip(&self) -> Self {
        Real(self.0.reciprocal(self.bits(), RM))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: u32) -> Self {
        Real(self.0.powi(n as usize, self.bits(), RM))
    }

    pub fn floor(&self) -> Self {
        Real(self.0.floor())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero and
    /// non-finite values.
    pub fn exponent(&self) -> Option<i32> {
        if self.is_zero() || !self.is_finite() {
            None
        } else {
            self.0.exponent()
        }
    }

    /// Nearest `f64`; values outside the `f64` range saturate to zero or
    /// infinity.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf() {
            return if self.0.is_inf_pos() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, e, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        let top = words.last().copied().unwrap_or(0) as u64;
        let mag = libm::ldexp(top as f64, e - 64);
        if matches!(sign, Sign::Neg) {
            -mag
        } else {
            mag
        }
    }

    /// Decimal base-10 logarithm of `|x|` as an `f64` (for reports and step
    /// heuristics, never for the numerics themselves).
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, _, e, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        let top = words.last().copied().unwrap_or(0) as u64;
        let frac = top as f64 / 18_446_744_073_709_551_616.0;
        libm::log10(frac) + e as f64 * LOG10_2
    }

    /// Scientific notation with `digits` significant digits, e.g.
    /// `-1.2500e-3`. Deterministic for a given value and digit count.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let mut out = String::new();
        if !self.is_finite() {
            out.push_str(if self.0.is_nan() {
                "nan"
            } else if self.0.is_inf_pos() {
                "inf"
            } else {
                "-inf"
            });
            return out;
        }
        if self.is_zero() {
            out.push('0');
            if digits > 1 {
                out.push('.');
                out.extend(core::iter::repeat('0').take(digits - 1));
            }
            out.push_str("e+0");
            return out;
        }
        if self.is_negative() {
            out.push('-');
        }
        let p = self.bits() + 64;
        let ten = Real::from_i64(10, p);
        let mut y = self.abs().with_bits(p);
        let e2 = self.exponent().unwrap_or(1) as f64;
        let mut e10 = libm::floor((e2 - 1.0) * LOG10_2) as i64;
        let scale = ten.powi(e10.unsigned_abs() as u32);
        if e10 >= 0 {
            y = y / scale;
        } else {
            y = y * scale;
        }
        while y >= ten {
            y = y / &ten;
            e10 += 1;
        }
        let one = Real::one(p);
        while y < one {
            y = y * &ten;
            e10 -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = y.floor();
            let dv = d.to_f64() as u8;
            ds.push(dv.min(9));
            y = (y - d) * &ten;
        }
        let round_up = ds.pop().unwrap_or(0) >= 5;
        if round_up {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        out.push((b'0' + ds[0]) as char);
        if digits > 1 {
            out.push('.');
            for d in &ds[1..] {
                out.push((b'0' + d) as char);
            }
        }
        out.push('e');
        if e10 >= 0 {
            out.push('+');
        }
        out.push_str(&alloc::format!("{e10}"));
        out
    }

    /// Parses a plain decimal literal (`1`, `-0.25`, `1.5e-3`) rounded once
    /// to `bits`.
    pub fn parse_decimal(s: &str, bits: usize) -> Result<Self, ParseRealError> {
        let s = s.trim();
        let err = || ParseRealError(String::from(s));
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = body[i + 1..].parse().map_err(|_| err())?;
                (&body[..i], e)
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let wide = bits + 64 + 4 * (int_part.len() + frac_part.len());
        let ten = Real::from_i64(10, wide);
        let mut m = Real::zero(wide);
        for c in int_part.chars().chain(frac_part.chars()) {
            let d = c.to_digit(10).ok_or_else(err)?;
            m = m * &ten + d as i64;
        }
        let e = exp - frac_part.len() as i64;
        if e.unsigned_abs() > u32::MAX as u64 {
            return Err(err());
        }
        let scale = ten.powi(e.unsigned_abs() as u32);
        let v = if e >= 0 { m * scale } else { m / scale };
        let v = v.with_bits(bits);
        Ok(if neg { -v } else { v })
    }
}

/// Rejected decimal literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a decimal number: {0:?}")]
pub struct ParseRealError(pub String);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(24))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.clone().neg())
    }
}

#[inline]
fn prec(a: &Real, b: &Real) -> usize {
    a.bits().max(b.bits())
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: &Real) -> Real {
                Real(self.0.$op(&rhs.0, prec(self, rhs), RM))
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $atr<&Real> for Real {
            #[inline]
            fn $amethod(&mut self, rhs: &Real) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $atr<Real> for Real {
            #[inline]
            fn $amethod(&mut self, rhs: Real) {
                *self = (&*self).$method(&rhs);
            }
        }
        real_binop!(@scalar $tr, $method, $atr, $amethod, i64, from_i64);
        real_binop!(@scalar $tr, $method, $atr, $amethod, f64, from_f64);
    };
    (@scalar $tr:ident, $method:ident, $atr:ident, $amethod:ident, $s:ty, $ctor:ident) => {
        impl $tr<$s> for &Real {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: $s) -> Real {
                self.$method(&Real::$ctor(rhs, CONST_BITS))
            }
        }
        impl $tr<$s> for Real {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: $s) -> Real {
                (&self).$method(&Real::$ctor(rhs, CONST_BITS))
            }
        }
        impl $tr<&Real> for $s {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: &Real) -> Real {
                Real::$ctor(self, CONST_BITS).$method(rhs)
            }
        }
        impl $tr<Real> for $s {
            type Output = Real;
            #[inline]
            fn $method(self, rhs: Real) -> Real {
                Real::$ctor(self, CONST_BITS).$method(&rhs)
            }
        }
        impl $atr<$s> for Real {
            #[inline]
            fn $amethod(&mut self, rhs: $s) {
                *self = (&*self).$method(&Real::$ctor(rhs, CONST_BITS));
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign, add);
real_binop!(Sub, sub, SubAssign, sub_assign, sub);
real_binop!(Mul, mul, MulAssign, mul_assign, mul);
real_binop!(Div, div, DivAssign, div_assign, div);

impl Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(CONST_BITS), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Real> for Real {
    fn sum<I: Iterator<Item = &'a Real>>(iter: I) -> Real {
        iter.fold(Real::zero(CONST_BITS), |acc, x| acc + x)
    }
}

impl Product for Real {
    fn product<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::one(CONST_BITS), |acc, x| acc * x)
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::zero(re.bits());
        Complex { re, im }
    }

    pub fn bits(&self) -> usize {
        self.re.bits().max(self.im.bits())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn scale(&self, k: &Real) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        write!(
            f,
            "({}, {})",
            self.re.to_sci_string(digits),
            self.im.to_sci_string(digits)
        )
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        self * &o.recip()
    }
}

impl Add<&Real> for &Complex {
    type Output = Complex;
    fn add(self, o: &Real) -> Complex {
        Complex::new(&self.re + o, self.im.clone())
    }
}

impl Sub<&Real> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Real) -> Complex {
        Complex::new(&self.re - o, self.im.clone())
    }
}

impl Mul<&Real> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Real) -> Complex {
        self.scale(o)
    }
}

impl Div<&Real> for &Complex {
    type Output = Complex;
    fn div(self, o: &Real) -> Complex {
        Complex::new(&self.re / o, &self.im / o)
    }
}

macro_rules! complex_owned {
    ($tr:ident, $method:ident, $rhs:ty) => {
        impl $tr<$rhs> for Complex {
            type Output = Complex;
            fn $method(self, o: $rhs) -> Complex {
                (&self).$method(&o)
            }
        }
        impl $tr<&$rhs> for Complex {
            type Output = Complex;
            fn $method(self, o: &$rhs) -> Complex {
                (&self).$method(o)
            }
        }
        impl $tr<$rhs> for &Complex {
            type Output = Complex;
            fn $method(self, o: $rhs) -> Complex {
                self.$method(&o)
            }
        }
    };
}

complex_owned!(Add, add, Complex);
complex_owned!(Sub, sub, Complex);
complex_owned!(Mul, mul, Complex);
complex_owned!(Div, div, Complex);
complex_owned!(Add, add, Real);
complex_owned!(Sub, sub, Real);
complex_owned!(Mul, mul, Real);
complex_owned!(Div, div, Real);

impl Sum for Complex {
    fn sum<I: Iterator<Item = Complex>>(iter: I) -> Complex {
        iter.fold(Complex::from_real(Real::zero(CONST_BITS)), |acc, x| {
            acc + x
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_precision_promotes() {
        let a = Real::ratio(1, 3, 256);
        let b = &a * 3;
        assert!(b.bits() >= 256);
        let err = (b - 1).abs();
        assert!(err < Real::pow2(-250, 256));
    }

    #[test]
    fn sci_string_rounding() {
        let x = Real::from_f64(1.25, 128);
        assert_eq!(x.to_sci_string(3), "1.25e+0");
        assert_eq!(x.to_sci_string(2), "1.3e+0");
        let y = Real::from_f64(-9.996, 128);
        assert_eq!(y.to_sci_string(3), "-1.00e+1");
        let z = Real::ratio(1, 1000, 128);
        assert_eq!(z.to_sci_string(4), "1.000e-3");
        assert_eq!(Real::zero(64).to_sci_string(3), "0.00e+0");
    }

    #[test]
    fn parse_decimal_values() {
        let x = Real::parse_decimal("0.1", 256).unwrap();
        let tenth = Real::ratio(1, 10, 256);
        assert!((x - tenth).abs() < Real::pow2(-255, 256));
        let y = Real::parse_decimal("-1.5e-3", 128).unwrap();
        assert_eq!(y.to_sci_string(5), "-1.5000e-3");
        assert_eq!(Real::parse_decimal("12", 64).unwrap().to_f64(), 12.0);
        assert!(Real::parse_decimal("1.2.3", 64).is_err());
        assert!(Real::parse_decimal("", 64).is_err());
        assert!(Real::parse_decimal("e5", 64).is_err());
    }

    #[test]
    fn f64_roundtrip_and_log10() {
        for v in [1.0, -3.5, 1e-300, 7.25e200, 0.1] {
            assert_eq!(Real::from_f64(v, 128).to_f64(), v);
        }
        let x = Real::ratio(1, 1000, 128);
        assert!((x.log10_abs() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let z = Complex::new(Real::from_f64(2.0, 192), Real::from_f64(-1.0, 192));
        let w = Complex::new(Real::ratio(1, 3, 192), Real::from_f64(0.5, 192));
        let back = &(&z * &w) / &w;
        assert!((&back - &z).abs() < Real::pow2(-180, 192));
    }
}
