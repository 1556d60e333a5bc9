//! Reduced rational functions in `s`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::poly::{write_laurent, Poly};
use super::{parse_laurent, Rational};
use crate::error::{Error, Result};

/// An element `s^shift * num(s) / den(s)` of `Q(s)`.
///
/// Canonical form: `num` and `den` are coprime, neither is divisible by `s`,
/// and `den` is monic. Zero is `num = 0, den = 1, shift = 0`. Derived
/// equality is therefore equality in `Q(s)`. Laurent polynomials have
/// `den = 1`, so their sums and products never touch a gcd.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            shift: 0,
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar {
            shift: 0,
            num: Poly::constant(r),
            den: Poly::one(),
        }
    }

    /// Build `s^shift * num / den` and bring it to canonical form.
    pub fn from_parts(shift: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (a, b) = (num.trailing_zeros(), den.trailing_zeros());
        let (mut num, mut den) = (num.shift_down(a), den.shift_down(b));
        let shift = shift + a as i64 - b as i64;
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        Self::canonical_unchecked(shift, num, den)
    }

    /// Like `from_parts` when `num` and `den` are already coprime and `den`
    /// has no factor of `s`.
    fn from_coprime(shift: i64, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let a = num.trailing_zeros();
        let num = num.shift_down(a);
        Self::canonical_unchecked(shift + a as i64, num, den)
    }

    fn canonical_unchecked(shift: i64, num: Poly, den: Poly) -> Self {
        let lead = den.lead().expect("nonzero denominator").clone();
        if lead.is_one() {
            return Scalar { shift, num, den };
        }
        let inv = lead.recip();
        Scalar {
            shift,
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> Poly {
        self.num.shift_up(self.shift.max(0) as usize)
    }

    pub fn denominator(&self) -> Poly {
        self.den.shift_up((-self.shift).max(0) as usize)
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Evaluate at `s = s0`; `None` at a pole.
    pub fn eval(&self, s0: &Rational) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        let d = self.den.eval(s0);
        if d.is_zero() || (s0.is_zero() && self.shift < 0) {
            return None;
        }
        let sp = if s0.is_zero() {
            Rational::zero()
        } else {
            <Rational as super::Field>::s_pow(s0, self.shift)
        };
        Some(self.num.eval(s0) * sp / d)
    }

    fn add_ref(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.shift <= o.shift { (self, o) } else { (o, self) };
        let d = (hi.shift - lo.shift) as usize;
        let hi_num = hi.num.shift_up(d);
        if lo.den == hi.den {
            let num = lo.num.add(&hi_num);
            if lo.den.is_one() {
                return Self::from_coprime(lo.shift, num, Poly::one());
            }
            return Self::from_parts(lo.shift, num, lo.den.clone());
        }
        // Henrici: with g = gcd(b, d), only gcd(t, g) can cancel.
        let g = lo.den.gcd(&hi.den);
        if g.is_one() {
            let num = lo.num.mul(&hi.den).add(&hi_num.mul(&lo.den));
            return Self::from_coprime(lo.shift, num, lo.den.mul(&hi.den));
        }
        let b_g = lo.den.div_exact(&g);
        let d_g = hi.den.div_exact(&g);
        let t = lo.num.mul(&d_g).add(&hi_num.mul(&b_g));
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = t.gcd(&g);
        let (t, dd) = if g2.is_one() {
            (t, hi.den.clone())
        } else {
            (t.div_exact(&g2), hi.den.div_exact(&g2))
        };
        Self::from_coprime(lo.shift, t, b_g.mul(&dd))
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        let shift = self.shift + o.shift;
        if self.den.is_one() && o.den.is_one() {
            return Scalar {
                shift,
                num: self.num.mul(&o.num),
                den: Poly::one(),
            };
        }
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        Self::canonical_unchecked(shift, n1.mul(&n2), d1.mul(&d2))
    }

    fn neg_ref(&self) -> Self {
        Scalar {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = n.gcd(d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g), d.div_exact(&g))
    }
}

impl fmt::Display for Scalar {
    /// `p(s)` for Laurent polynomials, `(p(s))/(r(s))` otherwise, with every
    /// term written `c*s^e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write_laurent(f, &self.num, self.shift);
        }
        f.write_str("(")?;
        write_laurent(f, &self.num, self.shift.max(0))?;
        f.write_str(")/(")?;
        write_laurent(f, &self.den, (-self.shift).max(0))?;
        f.write_str(")")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let src = src.trim();
        if let Some(body) = src.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            if let Some((n, d)) = body.split_once(")/(") {
                let (np, ns) = parse_laurent(n)?;
                let (dp, ds) = parse_laurent(d)?;
                if dp.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{src}`")));
                }
                return Ok(Self::from_parts(ns - ds, np, dp));
            }
        }
        let (p, sh) = parse_laurent(src)?;
        Ok(Self::from_parts(sh, p, Poly::one()))
    }
}

impl super::Field for Scalar {
    type Point = ();

    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        Self::canonical_unchecked(-self.shift, self.den.clone(), self.num.clone())
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(n.into()))
    }
    fn from_rational(r: &Rational) -> Self {
        Scalar::from_rational(r.clone())
    }
    fn s_pow(_: &(), e: i64) -> Self {
        Scalar {
            shift: e,
            num: Poly::one(),
            den: Poly::one(),
        }
    }
    fn mode_label(_: &()) -> String {
        "symbolic".to_string()
    }
    fn from_wire(s: &str) -> Result<Self> {
        s.parse()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$imp(o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$imp(o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$imp(&o)
            }
        }
        impl $atr<&Scalar> for Scalar {
            fn $am(&mut self, o: &Scalar) {
                *self = (&*self).$imp(o);
            }
        }
    };
}

impl Scalar {
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
}

forward_binop!(Add, add, AddAssign, add_assign, add_ref);
forward_binop!(Sub, sub, SubAssign, sub_assign, sub_ref);
forward_binop!(Mul, mul, MulAssign, mul_assign, mul_ref);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn s(e: i64) -> Scalar {
        Scalar::s_pow(&(), e)
    }

    #[test]
    fn canonical_cancellation() {
        // (s^2 - 1)/(s - 1) = s + 1
        let x = (s(2) - Scalar::one()) * &(s(1) - Scalar::one()).inv();
        assert_eq!(x, s(1) + Scalar::one());
        assert!(x.is_laurent());
    }

    #[test]
    fn fractions_add_to_zero() {
        let a = (s(1) + Scalar::one()).inv();
        let b = (s(2) - Scalar::one()).inv() * &(s(1) - Scalar::one());
        assert!((a - b).is_zero());
    }

    #[test]
    fn wire_round_trip() {
        let x = (s(-3) * &Scalar::from_i64(7) + s(2)) * &(s(4) + s(1) * &Scalar::from_i64(3)).inv();
        let txt = x.to_wire();
        assert_eq!(Scalar::from_wire(&txt).unwrap(), x);
        assert_eq!(Scalar::zero().to_wire(), "0");
    }
}
