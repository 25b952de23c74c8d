//! Multiprecision real and complex numbers.
//!
//! [`Real`] is a thin value type over `astro_float::BigFloat` that carries its
//! working precision (in bits) and rounds to nearest-even everywhere. Rounding
//! to nearest-even is symmetric under negation, so conjugate inputs produce
//! exactly conjugate outputs through every arithmetic operation in this module.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocation"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Requested decimal precision plus internal guard digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    pub digits: u32,
    pub guard: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 16;
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Precision(format!(
                "requested precision {digits} is below the minimum of {} digits",
                Self::MIN_DIGITS
            )));
        }
        if guard < Self::DEFAULT_GUARD {
            return Err(Error::Precision(format!("guard digits {guard} below {}", Self::DEFAULT_GUARD)));
        }
        Ok(PrecisionContext { digits, guard })
    }

    /// Working precision in bits, covering `digits + guard` decimal digits.
    pub fn bits(&self) -> usize {
        (((self.digits + self.guard) as f64) * BITS_PER_DIGIT).ceil() as usize + 8
    }

    /// `10^-digits` at working precision.
    pub fn tolerance(&self) -> Real {
        Real::pow10(-(self.digits as i64), self.bits())
    }

    /// `10^(-digits + guard)`, the looser bound used for accumulated results.
    pub fn loose_tolerance(&self) -> Real {
        Real::pow10(-(self.digits as i64) + self.guard as i64, self.bits())
    }

    /// Total working digits `digits + guard`.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }
}

/// A real number at a fixed binary precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    fn wrap(v: BigFloat, p: usize) -> Self {
        Real { v, p }
    }

    pub fn zero(p: usize) -> Self {
        Real::wrap(BigFloat::from_word(0, p), p)
    }

    pub fn one(p: usize) -> Self {
        Real::wrap(BigFloat::from_word(1, p), p)
    }

    pub fn from_i64(x: i64, p: usize) -> Self {
        Real::wrap(BigFloat::from_i64(x, p), p)
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        Real::wrap(BigFloat::from_f64(x, p), p)
    }

    /// Exact when `p` covers the bit length of `x`, otherwise correctly rounded.
    pub fn from_bigint(x: &BigInt, p: usize) -> Self {
        if x.is_zero() {
            return Real::zero(p);
        }
        let (sign, mag) = x.clone().into_parts();
        let words: Vec<Word> = mag.to_u64_digits().into_iter().map(|w| w as Word).collect();
        let bits = words.len() * WORD_BIT_SIZE;
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let mut v = BigFloat::from_words(&words, s, bits as astro_float::Exponent);
        v.set_precision(p.max(WORD_BIT_SIZE), RM).expect("precision");
        Real::wrap(v, p)
    }

    pub fn from_rational(x: &BigRational, p: usize) -> Self {
        if x.denom().is_one() {
            return Real::from_bigint(x.numer(), p);
        }
        let q = p + 2 * WORD_BIT_SIZE;
        let n = Real::from_bigint(x.numer(), q);
        let d = Real::from_bigint(x.denom(), q);
        let mut r = n.div_p(&d, p);
        r.p = p;
        r
    }

    /// `10^e` for any integer `e`.
    pub fn pow10(e: i64, p: usize) -> Self {
        let ten = BigInt::from(10u32);
        let mag = num_traits::pow(ten, e.unsigned_abs() as usize);
        if e >= 0 {
            Real::from_bigint(&mag, p)
        } else {
            Real::from_rational(&BigRational::new(BigInt::one(), mag), p)
        }
    }

    pub fn pi(p: usize) -> Self {
        Real::wrap(with_consts(|cc| cc.pi(p, RM)), p)
    }

    pub fn ln2(p: usize) -> Self {
        Real::wrap(with_consts(|cc| cc.ln_2(p, RM)), p)
    }

    pub fn prec(&self) -> usize {
        self.p
    }

    pub fn with_prec(&self, p: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(p.max(WORD_BIT_SIZE), RM).expect("precision");
        Real::wrap(v, p)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.v.is_positive()
    }

    fn div_p(&self, o: &Real, p: usize) -> Real {
        Real::wrap(self.v.div(&o.v, p, RM), p)
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.p)
    }

    pub fn square(&self) -> Real {
        self * self
    }

    pub fn sqrt(&self) -> Real {
        if self.is_zero() {
            return Real::zero(self.p);
        }
        Real::wrap(self.v.sqrt(self.p, RM), self.p)
    }

    /// Natural logarithm; NaN for non-positive input.
    pub fn ln(&self) -> Real {
        let p = self.p;
        Real::wrap(with_consts(|cc| self.v.ln(p, RM, cc)), p)
    }

    pub fn exp(&self) -> Real {
        let p = self.p;
        Real::wrap(with_consts(|cc| self.v.exp(p, RM, cc)), p)
    }

    pub fn atan(&self) -> Real {
        let p = self.p;
        Real::wrap(with_consts(|cc| self.v.atan(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Real {
        let p = self.p;
        Real::wrap(with_consts(|cc| self.v.sin(p, RM, cc)), p)
    }

    pub fn cos(&self) -> Real {
        let p = self.p;
        Real::wrap(with_consts(|cc| self.v.cos(p, RM, cc)), p)
    }

    /// Angle of the point `(x, y)` in `(-pi, pi]`; zero at the origin.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let p = y.p.max(x.p);
        if x.is_zero() {
            return match y.signum() {
                0 => Real::zero(p),
                s => {
                    let mut h = Real::pi(p).half();
                    if s < 0 {
                        h = -h;
                    }
                    h
                }
            };
        }
        let base = (y / x).atan();
        if x.is_positive() {
            base
        } else if y.is_negative() {
            base - Real::pi(p)
        } else {
            base + Real::pi(p)
        }
    }

    pub fn half(&self) -> Real {
        let mut v = self.v.clone();
        if let Some(e) = v.exponent() {
            if !v.is_zero() {
                v.set_exponent(e - 1);
            }
        }
        Real::wrap(v, self.p)
    }

    pub fn powi(&self, n: u32) -> Real {
        Real::wrap(self.v.powi(n as usize, self.p, RM), self.p)
    }

    pub fn recip(&self) -> Real {
        Real::one(self.p) / self
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn max(self, o: Real) -> Real {
        if self >= o {
            self
        } else {
            o
        }
    }

    /// Nearby `f64`; saturates to 0 or infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let Some((m, _n, s, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let top = *m.last().unwrap_or(&0) as f64;
        let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
        let frac = (top + next / 2f64.powi(64)) / 2f64.powi(64);
        let mag = frac * 2f64.powi(e.clamp(-1100, 1100));
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// The exact dyadic value `mantissa * 2^shift`.
    fn to_dyadic(&self) -> (BigInt, i64) {
        if self.is_zero() {
            return (BigInt::zero(), 0);
        }
        let (m, _n, s, e, _) = self.v.as_raw_parts().expect("finite value");
        let mut digits: Vec<u32> = Vec::with_capacity(m.len() * 2);
        for w in m {
            let w = *w;
            digits.push(w as u32);
            digits.push((w >> 32) as u32);
        }
        let mag = BigUint::from_slice(&digits);
        let sign = if s == Sign::Neg { BigSign::Minus } else { BigSign::Plus };
        let shift = e as i64 - (m.len() * WORD_BIT_SIZE) as i64;
        (BigInt::from_biguint(sign, mag), shift)
    }

    /// Exact rational value of this binary float.
    pub fn to_rational(&self) -> BigRational {
        let (m, shift) = self.to_dyadic();
        if shift >= 0 {
            BigRational::from_integer(m << shift as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-shift) as usize)
        }
    }

    /// Nearest integer, ties to even.
    pub fn round_to_bigint(&self) -> BigInt {
        let (m, shift) = self.to_dyadic();
        if shift >= 0 {
            return m << shift as usize;
        }
        let d = BigInt::one() << (-shift) as usize;
        round_div(&m, &d)
    }

    /// Fixed-point decimal string with exactly `frac_digits` digits after the point.
    pub fn to_fixed(&self, frac_digits: usize) -> String {
        let scaled = self.to_rational() * BigRational::from_integer(num_traits::pow(BigInt::from(10u32), frac_digits));
        let n = round_div(scaled.numer(), scaled.denom());
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= frac_digits {
            format!("{}{}", "0".repeat(frac_digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - frac_digits);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(int);
        if frac_digits > 0 {
            out.push('.');
            out.push_str(frac);
        }
        out
    }
}

/// `round(n / d)` with ties to even, `d > 0`.
pub(crate) fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    let twice: BigInt = &r * 2u32;
    match twice.cmp(d) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.p as f64) / BITS_PER_DIGIT) as usize;
        write!(f, "{}", self.to_fixed(digits.min(80)))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.p as f64) / BITS_PER_DIGIT) as usize);
        write!(f, "{}", self.to_fixed(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real::wrap(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.p)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.clone().neg(), self.p)
    }
}

/// A complex number with [`Real`] parts.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Complex::new(Real::zero(p), Real::zero(p))
    }

    pub fn one(p: usize) -> Self {
        Complex::new(Real::one(p), Real::zero(p))
    }

    pub fn i(p: usize) -> Self {
        Complex::new(Real::zero(p), Real::one(p))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex::new(re, Real::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        Complex::new(Real::from_f64(re, p), Real::from_f64(im, p))
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, p: usize) -> Self {
        Complex::new(self.re.with_prec(p), self.im.with_prec(p))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr().sqrt()
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    /// `log|z|`, computed without the square root.
    pub fn ln_abs(&self) -> Real {
        if self.im.is_zero() {
            return self.re.abs().ln();
        }
        if self.re.is_zero() {
            return self.im.abs().ln();
        }
        self.norm_sqr().ln().half()
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex::new(self.ln_abs(), self.arg())
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn scale(&self, r: &Real) -> Self {
        Complex::new(&self.re * r, &self.im * r)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
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
        if self.im.is_zero() && o.im.is_zero() {
            let p = self.prec().max(o.prec());
            return Complex::new(&self.re * &o.re, Real::zero(p));
        }
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        if o.im.is_zero() {
            return Complex::new(&self.re / &o.re, &self.im / &o.re);
        }
        let d = o.norm_sqr();
        Complex::new(
            (&self.re * &o.re + &self.im * &o.im) / &d,
            (&self.im * &o.re - &self.re * &o.im) / &d,
        )
    }
}

macro_rules! complex_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &Complex) -> Complex {
                (&self).$method(rhs)
            }
        }
        impl $trait<Complex> for &Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                self.$method(&rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

/// Parses `"a"`, `"a+bi"`, `"a-bi"`, `"bi"` with decimal or rational parts.
pub fn parse_complex(s: &str, p: usize) -> Result<Complex> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Format("empty complex number".into()));
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent or leading
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im_s = match im_s {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re = parse_rational(re_s)?;
        let im = parse_rational(im_s.trim_start_matches('+'))?;
        Ok(Complex::new(Real::from_rational(&re, p), Real::from_rational(&im, p)))
    } else {
        let re = parse_rational(&t)?;
        Ok(Complex::from_real(Real::from_rational(&re, p)))
    }
}

/// Parses an exact rational from `"p"`, `"p/q"` or a decimal such as `"-1.25e-3"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Format(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Format(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 256;

    fn close(a: &Real, b: &Real, digits: i64) -> bool {
        (a - b).abs() < Real::pow10(-digits, P)
    }

    #[test]
    fn constants_match_reference_digits() {
        let pi = Real::parse_ref("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899");
        assert!(close(&Real::pi(P), &pi, 70));
        let ln2 = Real::parse_ref("0.69314718055994530941723212145817656807550013436025525412068000949339362196969471");
        assert!(close(&Real::ln2(P), &ln2, 70));
        assert!(close(&Real::from_i64(2, P).ln(), &ln2, 70));
        // atan(1) = pi/4
        assert!(close(&Real::one(P).atan(), &(pi.half().half()), 70));
    }

    impl Real {
        fn parse_ref(s: &str) -> Real {
            Real::from_rational(&parse_rational(s).unwrap(), P)
        }
    }

    #[test]
    fn bigint_roundtrip() {
        for s in ["0", "1", "-1", "18446744073709551616", "-340282366920938463463374607431768211457", "12345"] {
            let n: BigInt = s.parse().unwrap();
            let r = Real::from_bigint(&n, P);
            assert_eq!(r.round_to_bigint(), n, "{s}");
            assert_eq!(r.to_rational(), BigRational::from_integer(n));
        }
    }

    #[test]
    fn rational_conversion_and_fixed_format() {
        let r = Real::from_rational(&BigRational::new(1.into(), 3.into()), P);
        assert_eq!(r.to_fixed(10), "0.3333333333");
        assert_eq!((-r).to_fixed(3), "-0.333");
        assert_eq!(Real::from_i64(-42, P).to_fixed(2), "-42.00");
        assert_eq!(Real::zero(P).to_fixed(0), "0");
        assert!((Real::from_f64(0.1, P).to_f64() - 0.1).abs() < 1e-17);
    }

    #[test]
    fn atan2_quadrants() {
        let pi = Real::pi(P);
        let one = Real::one(P);
        let m1 = -Real::one(P);
        let z = Real::zero(P);
        assert!(close(&Real::atan2(&one, &m1), &(&pi - pi.half().half()), 70));
        assert!(close(&Real::atan2(&m1, &m1), &(-(&pi - pi.half().half())), 70));
        assert!(close(&Real::atan2(&z, &m1), &pi, 70));
        assert!(Real::atan2(&z, &one).is_zero());
        assert!(close(&Real::atan2(&m1, &z), &(-pi.half()), 70));
    }

    #[test]
    fn complex_log_exp_consistency() {
        let z = parse_complex("0.3-0.4i", P).unwrap();
        let l = z.ln();
        let back = Complex::new(l.re.exp() * l.im.cos(), l.re.exp() * l.im.sin());
        assert!(close(&back.re, &z.re, 70) && close(&back.im, &z.im, 70));
        assert!(close(&z.abs(), &Real::parse_ref("0.5"), 70));
    }

    #[test]
    fn conjugation_is_exact_through_arithmetic() {
        let a = parse_complex("0.123+4.5i", P).unwrap();
        let b = parse_complex("-7/3+2/9i", P).unwrap();
        let x = (&a * &b + &a / &b) * &a;
        let y = (&a.conj() * &b.conj() + &a.conj() / &b.conj()) * &a.conj();
        assert!(x.conj() == y);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-1.25e-2").unwrap(), BigRational::new((-1).into(), 80.into()));
        assert_eq!(parse_rational("7/14").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        let z = parse_complex("0.5+0i", P).unwrap();
        assert!(z.im.is_zero());
        let w = parse_complex("-i", P).unwrap();
        assert_eq!(w.im, -Real::one(P));
        let v = parse_complex("1e-3-2e+1i", P).unwrap();
        assert_eq!(v.im, Real::from_i64(-20, P));
    }

    #[test]
    fn precision_context_bounds() {
        assert!(PrecisionContext::new(15).is_err());
        let c = PrecisionContext::new(50).unwrap();
        assert!(c.bits() >= 200);
        assert!(c.tolerance() < c.loose_tolerance());
    }
}
