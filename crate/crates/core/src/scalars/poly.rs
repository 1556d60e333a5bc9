//! Dense univariate polynomials in `s` over the rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::Rational;

/// Polynomial `c[0] + c[1] s + ...`; no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            c: vec![Rational::one()],
        }
    }

    pub fn constant(a: Rational) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn monomial(a: Rational, deg: usize) -> Self {
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = a;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.c.last()
    }

    /// Largest `k` with `s^k` dividing `self` (zero for the zero polynomial).
    pub fn trailing_zeros(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    /// Divide by `s^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.c.iter().take(k).all(|x| x.is_zero()));
        Poly {
            c: self.c[k.min(self.c.len())..].to_vec(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (long, short) = if self.c.len() >= o.c.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut c = long.c.clone();
        for (x, y) in c.iter_mut().zip(&short.c) {
            *x += y;
        }
        Self::from_coeffs(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        Poly {
            c: self.c.iter().map(|x| x * a).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.c[dd].recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    r[k + j] -= &t * b;
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = if self.c.len() >= o.c.len() {
            (self.monic(), o.monic())
        } else {
            (o.monic(), self.monic())
        };
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Self::one();
            }
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Terms `(coefficient, degree)` in ascending degree.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, usize)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| (a, i))
    }
}

/// Writes `sum c * s^e` with exponents offset by `shift`; reads back with
/// [`super::parse_laurent`].
pub(crate) fn write_laurent(f: &mut fmt::Formatter<'_>, p: &Poly, shift: i64) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (k, (a, e)) in p.terms().enumerate() {
        let e = e as i64 + shift;
        if k == 0 {
            if a.is_negative() {
                f.write_str("-")?;
            }
        } else if a.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        write!(f, "{}*s^{}", a.abs(), e)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (s+1)(s-2) and (s+1)(s+3)
        let a = p(&[-2, -1, 1]);
        let b = p(&[3, 4, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(a.gcd(&p(&[5])), Poly::one());
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[1, 0, 3, 4, 7]);
        let d = p(&[2, 1, 1]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
