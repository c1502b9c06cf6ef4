//! Laurent polynomials in the equivariant parameter `x`, with exact rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{show, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(degree: i32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c);
        p
    }

    /// The variable `x` scaled by `c`.
    pub fn x(c: Rational) -> Self {
        Self::monomial(1, c)
    }

    fn add_term(&mut self, degree: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(degree).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&degree);
        }
    }

    pub fn coefficient(&self, degree: i32) -> Rational {
        self.terms.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero();
        for (d, a) in &self.terms {
            p.add_term(*d, a * c);
        }
        p
    }

    /// `Some((degree, coefficient))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(i32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(d, c)| (*d, c))
        } else {
            None
        }
    }

    /// Inverse of a nonzero monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (d, c) = self.as_monomial()?;
        Some(Self::monomial(-d, Rational::one() / c))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (d, c) in &rhs.terms {
            p.add_term(*d, c.clone());
        }
        p
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                p.add_term(d1 + d2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            match d {
                0 => write!(f, "{}", show(&mag))?,
                1 => write!(f, "{}x", show(&mag))?,
                _ => write!(f, "{}x^{d}", show(&mag))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn arithmetic_drops_zero_terms() {
        let a = &LaurentPoly::monomial(1, q(2)) + &LaurentPoly::constant(q(3));
        let b = &LaurentPoly::monomial(1, q(-2)) + &LaurentPoly::constant(q(1));
        let s = &a + &b;
        assert_eq!(s, LaurentPoly::constant(q(4)));
        let p = &a * &b;
        assert_eq!(p.coefficient(2), q(-4));
        assert_eq!(p.coefficient(1), q(-4));
        assert_eq!(p.coefficient(0), q(3));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn monomial_inverse_and_display() {
        let m = LaurentPoly::monomial(3, q(-2));
        let inv = m.monomial_inverse().unwrap();
        assert_eq!(inv, LaurentPoly::monomial(-3, frac(-1, 2)));
        assert_eq!(&m * &inv, LaurentPoly::constant(q(1)));
        let p = &LaurentPoly::constant(q(27)) + &LaurentPoly::monomial(-2, q(-3));
        assert_eq!(p.to_string(), "27 - 3x^-2");
    }
}
