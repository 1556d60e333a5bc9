//! Exact scalars.
//!
//! All quantities live in `Q(s)` with `s = q^{1/L}`, where `L` clears the
//! denominators of the weight-lattice form of the chosen root system. The
//! symbolic field is [`Scalar`]; specialization to a rational point uses
//! [`Rational`] directly. Both implement [`Field`], and the engine is generic
//! over it.

mod poly;
mod ratfunc;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;
pub use poly::Poly;
pub use ratfunc::Scalar;

use crate::error::{Error, Result};

/// An exponent of `q` measured in units of `1/L`, so `q^{e/L} = s^e`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct QExponent(pub i64);

/// A commutative field with exact arithmetic and a distinguished element `s`.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Data fixing the value of `s` (nothing for the symbolic field).
    type Point: Clone + Debug + PartialEq + Send + Sync + 'static;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `s^e` at the given point.
    fn s_pow(point: &Self::Point, e: i64) -> Self;
    /// Stable label of the point, used in cache keys and reports.
    fn mode_label(point: &Self::Point) -> String;
    /// Stable textual encoding used in JSON output.
    fn to_wire(&self) -> String {
        self.to_string()
    }
    fn from_wire(s: &str) -> Result<Self>;

    fn div(&self, o: &Self) -> Self {
        self.clone() * &o.inv()
    }
}

impl Field for Rational {
    type Point = Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn s_pow(point: &Rational, e: i64) -> Self {
        let p = point.pow(e.unsigned_abs() as i32);
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }
    fn mode_label(point: &Rational) -> String {
        format!("s={point}")
    }
    fn from_wire(s: &str) -> Result<Self> {
        s.trim()
            .parse::<Rational>()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
    }
}

/// The field together with `L` and the evaluation point of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct QParams<F: Field> {
    pub l: u32,
    pub point: F::Point,
}

impl QParams<Scalar> {
    pub fn symbolic(l: u32) -> Self {
        QParams { l, point: () }
    }
}

impl QParams<Rational> {
    /// Specialize at `s = s0`. Values of `s0` in `{-1, 0, 1}` are rejected.
    pub fn at_s(l: u32, s0: Rational) -> Result<Self> {
        let bad = Zero::is_zero(&s0) || One::is_one(&s0.abs());
        if bad {
            return Err(Error::InvalidInput(format!(
                "specialization point s = {s0} is degenerate"
            )));
        }
        Ok(QParams { l, point: s0 })
    }

    /// Specialize at `q = q0`, which must have an exact rational `L`-th root.
    pub fn at_q(l: u32, q0: &Rational) -> Result<Self> {
        let s0 = rational_root(q0, l).ok_or_else(|| {
            Error::InvalidInput(format!("q = {q0} has no rational {l}-th root"))
        })?;
        Self::at_s(l, s0)
    }
}

impl<F: Field> QParams<F> {
    /// `q^{e/L}`.
    pub fn q_frac(&self, e: QExponent) -> F {
        F::s_pow(&self.point, e.0)
    }

    /// `q^n` for integer `n`.
    pub fn q_pow(&self, n: i64) -> F {
        F::s_pow(&self.point, n * self.l as i64)
    }

    /// The balanced quantum integer `[n]` in base `q^d`.
    pub fn qint(&self, n: i64, d: i64) -> F {
        let m = n.abs();
        let mut acc = F::zero();
        for t in 0..m {
            acc += &self.q_pow(d * (-m + 1 + 2 * t));
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }

    /// `[n]!` in base `q^d`.
    pub fn qfact(&self, n: i64, d: i64) -> F {
        let mut acc = F::one();
        for k in 1..=n {
            acc *= &self.qint(k, d);
        }
        acc
    }

    /// Gaussian binomial `[n choose k]` in base `q^d`.
    pub fn qbinom(&self, n: i64, k: i64, d: i64) -> F {
        if k < 0 || k > n {
            return F::zero();
        }
        self.qfact(n, d)
            .div(&(self.qfact(k, d) * &self.qfact(n - k, d)))
    }

    pub fn mode_label(&self) -> String {
        F::mode_label(&self.point)
    }
}

/// The quantum integer `[m]_q` as an element of `Q(s)` with `s = q^{1/L}`.
pub fn qint(m: i64, l: u32) -> Scalar {
    QParams::<Scalar>::symbolic(l).qint(m, 1)
}

/// `[m]_q!` as an element of `Q(s)`.
pub fn qfact(m: i64, l: u32) -> Scalar {
    QParams::<Scalar>::symbolic(l).qfact(m, 1)
}

/// Evaluate a symbolic scalar at `s = s0`; fails at a pole.
pub fn eval_at(x: &Scalar, s0: &Rational) -> Result<Rational> {
    x.eval(s0)
        .ok_or_else(|| Error::InvalidInput(format!("pole at s = {s0}")))
}

/// Exact `n`-th root of a rational, if it exists.
pub fn rational_root(x: &Rational, n: u32) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if x.is_negative() && n % 2 == 0 {
        return None;
    }
    let root = |v: &BigInt| -> Option<BigInt> {
        let r = v.nth_root(n);
        (r.pow(n) == *v).then_some(r)
    };
    Some(Rational::new(root(x.numer())?, root(x.denom())?))
}

/// Parse a Laurent polynomial written as `c*s^e` terms joined by ` + ` / ` - `.
pub(crate) fn parse_laurent(src: &str) -> Result<(Poly, i64)> {
    let bad = || Error::Parse(format!("bad polynomial `{src}`"));
    let src = src.trim();
    if src == "0" {
        return Ok((Poly::zero(), 0));
    }
    let mut terms: Vec<(Rational, i64)> = Vec::new();
    let one = Rational::from_integer(1.into());
    let mut sign = one.clone();
    let mut expect_term = true;
    for tok in src.split_whitespace() {
        if !expect_term {
            sign = match tok {
                "+" => one.clone(),
                "-" => -one.clone(),
                _ => return Err(bad()),
            };
            expect_term = true;
            continue;
        }
        let (neg, body) = match tok.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, tok),
        };
        let (c, e) = body.split_once("*s^").ok_or_else(bad)?;
        let mut c: Rational = c.parse().map_err(|_| bad())?;
        if neg {
            c = -c;
        }
        let e: i64 = e.parse().map_err(|_| bad())?;
        terms.push((c * &sign, e));
        expect_term = false;
    }
    if expect_term {
        return Err(bad());
    }
    let lo = terms.iter().map(|t| t.1).min().unwrap_or(0);
    let hi = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut c = vec![Rational::from_integer(0.into()); (hi - lo + 1) as usize];
    for (a, e) in terms {
        c[(e - lo) as usize] += a;
    }
    Ok((Poly::from_coeffs(c), lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn quantum_integers_at_points() {
        assert_eq!(eval_at(&qint(3, 1), &rat(2, 1)).unwrap(), rat(21, 4));
        assert_eq!(eval_at(&qint(2, 1), &rat(2, 1)).unwrap(), rat(5, 2));
        assert_eq!(qint(1, 3), Scalar::one());
        assert!(qint(0, 2).is_zero());
        // [2] = s^-2 + s^2 when L = 2
        assert_eq!(qint(2, 2), Scalar::s_pow(&(), -2) + Scalar::s_pow(&(), 2));
    }

    #[test]
    fn specialized_matches_symbolic() {
        let p = QParams::at_q(2, &rat(9, 4)).unwrap();
        assert_eq!(p.point, rat(3, 2));
        let x = eval_at(&qfact(4, 2), &rat(3, 2)).unwrap();
        assert_eq!(p.qfact(4, 1), x);
    }

    #[test]
    fn degenerate_points_rejected() {
        assert!(QParams::at_s(1, rat(1, 1)).is_err());
        assert!(QParams::at_s(1, rat(-1, 1)).is_err());
        assert!(QParams::at_q(2, &rat(2, 1)).is_err());
    }

    #[test]
    fn laurent_parse_round_trip() {
        let (p, sh) = parse_laurent("-1/2*s^-3 + 4*s^0 - 1*s^2").unwrap();
        assert_eq!(sh, -3);
        assert_eq!(p.coeffs().len(), 6);
        assert!(parse_laurent("1*s^2 +").is_err());
    }
}
