//! Exact scalars: Gaussian rationals a + b·i with arbitrary-precision
//! rational parts.
//!
//! `Scalar` is the computational stand-in for the complex field: every
//! operation is exact, so any identity checked by the verifier holds as a
//! statement about actual complex numbers at the sampled points.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactNumError;

/// An element of ℚ(i).  Both parts are kept in lowest terms with positive
/// denominator (num-rational maintains that on every operation), so equality
/// is plain structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real scalar.  Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = re² + im², a rational that vanishes only at zero.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Scalar, ExactNumError> {
        if self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        let n = self.norm_sq();
        let c = self.conj();
        Ok(Scalar::new(c.re / &n, c.im / n))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ExactNumError> {
        Ok(self * &rhs.inv()?)
    }

    /// Exact k-th root, if one exists in ℚ(i).  Only real inputs are
    /// supported (all roots appearing in the catalog are real); even roots
    /// of negatives and inexact radicands return `None`.
    pub fn nth_root_exact(&self, k: u32) -> Option<Scalar> {
        assert!(k >= 1);
        if !self.is_real() {
            return None;
        }
        if self.re.is_zero() {
            return Some(Scalar::zero());
        }
        let negative = self.re.is_negative();
        if negative && k % 2 == 0 {
            return None;
        }
        let mag = self.re.abs();
        let num = exact_int_root(mag.numer(), k)?;
        let den = exact_int_root(mag.denom(), k)?;
        let mut root = BigRational::new(num, den);
        if negative {
            root = -root;
        }
        Some(Scalar::from_rational(root))
    }

    /// Integer power with negative exponents allowed for invertible scalars.
    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}
forward_binop!(Add, add);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}
forward_binop!(Sub, sub);

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}
forward_binop!(Mul, mul);

/// Exact division; panics on a zero divisor (use [`Scalar::checked_div`]
/// when the divisor is not known to be nonzero).
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}
forward_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders in the text syntax used by all file formats and the CLI:
/// `p`, `p/q`, `p/q+r/s*i`, `p/q-r/s*i`, or a bare imaginary `r/s*i`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_part = format!("{}*i", fmt_rational(&self.im.abs()));
        if self.re.is_zero() {
            if self.im.is_negative() {
                return write!(f, "-{im_part}");
            }
            return write!(f, "{im_part}");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}", fmt_rational(&self.re), sign, im_part)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses the scalar syntax: an optional real rational followed by an
/// optional signed `r/s*i` tail (no spaces), e.g. `-3/2`, `1+1/2*i`, `2*i`.
impl FromStr for Scalar {
    type Err = ExactNumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactNumError::BadScalar(s.to_string());
        if s.is_empty() || s.contains(char::is_whitespace) {
            return Err(bad());
        }
        // split into at most two signed terms
        let bytes = s.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[idx - 1] != b'+' && bytes[idx - 1] != b'-' {
                if split.is_some() {
                    return Err(bad());
                }
                split = Some(idx);
            }
        }
        let (first, second) = match split {
            Some(idx) => (&s[..idx], Some(&s[idx..])),
            None => (&s[..], None),
        };
        let parse_term = |t: &str| -> Result<(BigRational, bool), ExactNumError> {
            // returns (value, is_imaginary)
            let (neg, body) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let (body, imag) = match body.strip_suffix("*i") {
                Some(rest) => (rest, true),
                None => match body.strip_suffix('i') {
                    // bare `i` / `-i`
                    Some("") => ("1", true),
                    _ => (body, false),
                },
            };
            let r: BigRational = parse_plain_rational(body).ok_or_else(bad)?;
            Ok((if neg { -r } else { r }, imag))
        };
        match second {
            None => {
                let (v, imag) = parse_term(first)?;
                Ok(if imag {
                    Scalar::new(BigRational::zero(), v)
                } else {
                    Scalar::from_rational(v)
                })
            }
            Some(snd) => {
                let (re, re_imag) = parse_term(first)?;
                let (im, im_imag) = parse_term(snd)?;
                if re_imag || !im_imag {
                    return Err(bad());
                }
                Ok(Scalar::new(re, im))
            }
        }
    }
}

fn parse_plain_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !den.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        // (1/2 + i)(1/2 - i) = 1/4 + 1 = 5/4
        let z = Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::one());
        assert_eq!(&z * &z.conj(), s("5/4"));
    }

    #[test]
    fn addition_normalizes() {
        // 2/4 + 1/2 = 1, stored as 1 (not 2/2)
        let a = Scalar::from_ratio(2, 4);
        let b = Scalar::from_ratio(1, 2);
        let sum = &a + &b;
        assert_eq!(sum, Scalar::one());
        assert_eq!(sum.to_string(), "1");
    }

    #[test]
    fn division_multiplies_by_conjugate() {
        // (1+i)/(1-i) = i, by hand: (1+i)² / |1-i|² = 2i/2
        let a = Scalar::new(BigRational::one(), BigRational::one());
        let b = Scalar::new(BigRational::one(), -BigRational::one());
        assert_eq!(a.checked_div(&b).unwrap(), Scalar::i());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(ExactNumError::DivisionByZero)
        ));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["0", "3", "-3/2", "1+1/2*i", "1-1/2*i", "1/2*i", "-2*i", "7/3"] {
            let v = s(text);
            assert_eq!(v.to_string(), text, "round trip of {text}");
        }
        // non-canonical inputs parse but re-render normalized
        assert_eq!(s("2/4").to_string(), "1/2");
        assert_eq!(s("i").to_string(), "1*i");
    }

    #[test]
    fn parse_rejects_garbage() {
        for text in ["", "1/0", "1 + i", "++2", "a", "1+2", "1*i+2", "--3"] {
            assert!(text.parse::<Scalar>().is_err(), "{text} should not parse");
        }
    }

    #[test]
    fn exact_roots() {
        assert_eq!(s("8").nth_root_exact(3), Some(s("2")));
        assert_eq!(s("-8").nth_root_exact(3), Some(s("-2")));
        assert_eq!(s("64").nth_root_exact(3), Some(s("4")));
        assert_eq!(s("1/8").nth_root_exact(3), Some(s("1/2")));
        assert_eq!(s("2").nth_root_exact(3), None);
        assert_eq!(s("-4").nth_root_exact(2), None);
        assert_eq!(s("9/4").nth_root_exact(2), Some(s("3/2")));
    }

    #[test]
    fn field_inverses_cancel() {
        let samples = ["3", "-3/2", "1+1/2*i", "-2*i", "7/3"];
        for a in samples {
            for b in samples {
                let (a, b) = (s(a), s(b));
                assert_eq!(&(&a + &b) - &b, a);
                assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
            }
        }
    }
}
