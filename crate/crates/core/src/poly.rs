//! Exact multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a sparse map from exponent vectors to nonzero
//! [`Rational`] coefficients. Exponent vectors are stored with trailing
//! zeros trimmed, so polynomials carry no fixed number of variables and
//! equality is structural. Variables are indexed from zero internally; the
//! text form uses `x1, x2, ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector `[e0, e1, ...]` for `x1^e0 * x2^e1 * ...`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of variables this monomial mentions (highest index + 1).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut exps = long.clone();
        for (e, s) in exps.iter_mut().zip(short) {
            *e += s;
        }
        Monomial(exps)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut exps = self.0.clone();
        for (e, o) in exps.iter_mut().zip(&other.0) {
            *e = e.checked_sub(*o)?;
        }
        Some(Monomial::new(exps))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// All monomials dividing this one.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Vec::new()];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=e).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Monomial::new).collect()
    }

    /// Display order: higher total degree first, then lexicographically larger exponents.
    pub fn display_cmp(&self, other: &Monomial) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match other.exponent(i).cmp(&self.exponent(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Polynomial::constant(rat(n))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial::term(Rational::one(), m)
    }

    /// The variable `x_{index+1}`.
    pub fn var(index: usize) -> Self {
        Polynomial::monomial(Monomial::var(index))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Number of variables mentioned (highest index + 1).
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_{index+1}`.
    pub fn partial(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(index);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c * rat(e as i64));
        }
        out
    }

    /// Iterated partial derivative `∂^alpha`.
    pub fn partial_multi(&self, alpha: &Monomial) -> Polynomial {
        let mut p = self.clone();
        for (i, &e) in alpha.exponents().iter().enumerate() {
            for _ in 0..e {
                if p.is_zero() {
                    return p;
                }
                p = p.partial(i);
            }
        }
        p
    }

    /// Exact quotient by a nonzero constant.
    pub fn div_constant(&self, c: &Rational) -> Result<Polynomial> {
        if c.is_zero() {
            return Err(Error::Division);
        }
        Ok(self.scale(&(Rational::one() / c)))
    }

    /// Exact division by a monomial; `None` unless every term is divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut out = Polynomial::zero();
        for (k, c) in &self.terms {
            out.add_term(k.div(m)?, c.clone());
        }
        Some(out)
    }

    /// Monomial gcd of all terms; `None` for the zero polynomial.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                for _ in 0..e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Terms in display order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(b.0));
        v
    }

    /// True when the rendered form needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, c: &Rational, m: &Monomial) -> fmt::Result {
    if m.is_one() {
        write!(f, "{c}")
    } else if c.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{c}*{m}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_coeff_term(f, &c.abs(), m)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &'a Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &'a Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Mul<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl From<i64> for Polynomial {
    fn from(n: i64) -> Self {
        Polynomial::from_int(n)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i - 1)
    }

    #[test]
    fn partial_of_square() {
        let p = x(1).pow(2);
        assert_eq!(p.partial(0), x(1).scale(&rat(2)));
    }

    #[test]
    fn partial_of_product() {
        assert_eq!((&x(1) * &x(2)).partial(1), x(1));
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&x(1) + &x(2)) * &(&x(1) - &x(2));
        let rhs = &x(1).pow(2) - &x(2).pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &x(1) - &x(1);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn display_rational_coefficients() {
        let p = &x(1).pow(3).scale(&ratio(-1, 6)) + &Polynomial::one();
        assert_eq!(p.to_string(), "-1/6*x1^3 + 1");
        assert_eq!((&x(1) * &x(2)).to_string(), "x1*x2");
    }

    #[test]
    fn monomial_trims_trailing_zeros() {
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::var(0));
        assert_eq!(Monomial::new(vec![0, 0]), Monomial::one());
    }

    #[test]
    fn monomial_divisors() {
        let m = Monomial::new(vec![1, 2]);
        let d = m.divisors();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|k| k.divides(&m)));
    }

    #[test]
    fn content_and_division() {
        let p = &(&x(1) * &x(2)) + &(&x(1).pow(2) * &x(3));
        let g = p.monomial_content().unwrap();
        assert_eq!(g, Monomial::var(0));
        assert_eq!(p.div_monomial(&g).unwrap(), &x(2) + &(&x(1) * &x(3)));
        assert!(p.div_monomial(&Monomial::var(1)).is_none());
    }
}
