//! Polynomial vector fields `Σ r_μ ∂/∂x_μ` and the node labels built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational};

/// A derivation of `Q[x1..xN]`, stored in the free basis `∂1..∂N`.
///
/// Only nonzero coefficients are kept, keyed by zero-based basis index, so two
/// derivations are equal exactly when they act identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Derivation {
    coeffs: BTreeMap<usize, Polynomial>,
}

impl Derivation {
    pub fn zero() -> Self {
        Derivation::default()
    }

    /// The basis partial `∂/∂x_{index+1}`.
    pub fn partial(index: usize) -> Self {
        Derivation::term(Polynomial::one(), index)
    }

    pub fn term(coeff: Polynomial, index: usize) -> Self {
        let mut d = Derivation::zero();
        d.add_term(index, coeff);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Polynomial)>) -> Self {
        let mut d = Derivation::zero();
        for (i, p) in terms {
            d.add_term(i, p);
        }
        d
    }

    pub fn add_term(&mut self, index: usize, coeff: Polynomial) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(index).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Polynomial {
        self.coeffs.get(&index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.coeffs.iter().map(|(i, p)| (*i, p))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// True for a bare basis partial `∂i` with coefficient one.
    pub fn basis_index(&self) -> Option<usize> {
        match self.coeffs.iter().next() {
            Some((i, p)) if self.coeffs.len() == 1 && p.is_one() => Some(*i),
            _ => None,
        }
    }

    /// Smallest ring dimension in which this derivation lives.
    pub fn width(&self) -> usize {
        self.coeffs
            .iter()
            .map(|(i, p)| (i + 1).max(p.width()))
            .max()
            .unwrap_or(0)
    }

    /// `Σ_μ r_μ ∂p/∂x_μ`.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, c) in &self.coeffs {
            let dp = p.partial(*i);
            if !dp.is_zero() {
                out += &(c * &dp);
            }
        }
        out
    }

    /// Left multiplication by a ring element.
    pub fn scale(&self, r: &Polynomial) -> Derivation {
        Derivation::from_terms(self.coeffs.iter().map(|(i, p)| (*i, r * p)))
    }

    pub fn scale_rational(&self, c: &Rational) -> Derivation {
        if c.is_zero() {
            return Derivation::zero();
        }
        Derivation {
            coeffs: self.coeffs.iter().map(|(i, p)| (*i, p.scale(c))).collect(),
        }
    }

    /// The Lie bracket `[self, other]`: coefficient μ is `self(other_μ) - other(self_μ)`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let mut out = Derivation::zero();
        for (i, c) in &other.coeffs {
            out.add_term(*i, self.apply(c));
        }
        for (i, c) in &self.coeffs {
            out.add_term(*i, -other.apply(c));
        }
        out
    }
}

/// Lie bracket of two derivations checked against a ring dimension.
pub fn lie_bracket(ring: Ring, d: &Derivation, e: &Derivation) -> Result<Derivation> {
    ring.check_derivation(d)?;
    ring.check_derivation(e)?;
    Ok(d.bracket(e))
}

/// `D(p)` checked against a ring dimension.
pub fn deriv_apply(ring: Ring, d: &Derivation, p: &Polynomial) -> Result<Polynomial> {
    ring.check_derivation(d)?;
    ring.check_poly(p)?;
    Ok(d.apply(p))
}

impl<'a> Add<&'a Derivation> for &Derivation {
    type Output = Derivation;
    fn add(self, rhs: &'a Derivation) -> Derivation {
        let mut out = self.clone();
        for (i, p) in &rhs.coeffs {
            out.add_term(*i, p.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Derivation> for &Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &'a Derivation) -> Derivation {
        self + &(-rhs)
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|(i, p)| (*i, -p)).collect(),
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (i, p)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if p.is_one() {
                write!(f, "d{}", i + 1)?;
            } else {
                write!(f, "({p})*d{}", i + 1)?;
            }
        }
        Ok(())
    }
}

/// A nonzero derivation used as a tree node label.
///
/// Cheap to clone; comparison is by value.
#[derive(Clone, Eq, Hash)]
pub struct Label(Arc<Derivation>);

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return std::cmp::Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Label {
    pub fn new(d: Derivation) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroLabel);
        }
        Ok(Label(Arc::new(d)))
    }

    pub fn partial(index: usize) -> Self {
        Label(Arc::new(Derivation::partial(index)))
    }

    pub fn derivation(&self) -> &Derivation {
        &self.0
    }

    pub fn is_basis(&self) -> bool {
        self.0.basis_index().is_some()
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<Derivation> for Label {
    type Error = Error;
    fn try_from(d: Derivation) -> Result<Self> {
        Label::new(d)
    }
}

/// Dimension of the coefficient ring `Q[x1..xN]`; used to validate inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ring {
    pub nvars: usize,
}

impl Ring {
    pub fn new(nvars: usize) -> Self {
        Ring { nvars }
    }

    /// Rejects objects mentioning a variable or partial beyond `x_N`.
    pub fn check_width(&self, width: usize) -> Result<()> {
        if width > self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: width,
            });
        }
        Ok(())
    }

    pub fn check_poly(&self, p: &Polynomial) -> Result<()> {
        self.check_width(p.width())
    }

    pub fn check_derivation(&self, d: &Derivation) -> Result<()> {
        self.check_width(d.width())
    }

    /// `∂p/∂x_{index+1}` with the index checked against the ring.
    pub fn partial(&self, p: &Polynomial, index: usize) -> Result<Polynomial> {
        if index >= self.nvars {
            return Err(Error::IndexOutOfRange(index + 1));
        }
        Ok(p.partial(index))
    }
}

/// The Hall vector fields `E1`, `E2` on an eight-dimensional ring.
pub fn hall_fields() -> (Derivation, Derivation) {
    use crate::poly::ratio;
    let x = Polynomial::var;
    let e1 = Derivation::partial(0);
    let mut e2 = Derivation::partial(1);
    e2.add_term(2, -x(0));
    e2.add_term(3, x(0).pow(2).scale(&ratio(1, 2)));
    e2.add_term(4, &x(0) * &x(1));
    e2.add_term(5, x(0).pow(3).scale(&ratio(-1, 6)));
    e2.add_term(6, (&x(0).pow(2) * &x(1)).scale(&ratio(-1, 2)));
    e2.add_term(7, (&x(0) * &x(1).pow(2)).scale(&ratio(-1, 2)));
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i - 1)
    }

    fn d(i: usize) -> Derivation {
        Derivation::partial(i - 1)
    }

    #[test]
    fn apply_basic() {
        assert_eq!(d(1).apply(&x(1).pow(2)), x(1).scale(&rat(2)));
        assert_eq!(Derivation::term(x(1), 1).apply(&x(2)), x(1));
    }

    #[test]
    fn hall_e2_on_x3() {
        let (_, e2) = hall_fields();
        assert_eq!(e2.apply(&x(3)), -x(1));
    }

    #[test]
    fn bracket_self_is_zero() {
        let (_, e2) = hall_fields();
        assert!(e2.bracket(&e2).is_zero());
    }

    #[test]
    fn hall_bracket_matches_displayed_field() {
        let (e1, e2) = hall_fields();
        let b = e2.bracket(&e1);
        let expected = Derivation::from_terms([
            (2, Polynomial::one()),
            (3, -x(1)),
            (4, -x(2)),
            (5, x(1).pow(2).scale(&ratio(1, 2))),
            (6, &x(1) * &x(2)),
            (7, x(2).pow(2).scale(&ratio(1, 2))),
        ]);
        assert_eq!(b, expected);
        assert_eq!(b.bracket(&e1).apply(&x(4)), Polynomial::one());
    }

    #[test]
    fn zero_label_rejected() {
        assert_eq!(Label::new(Derivation::zero()), Err(Error::ZeroLabel));
    }

    #[test]
    fn ring_checks() {
        let ring = Ring::new(2);
        assert!(ring.check_poly(&x(3)).is_err());
        assert!(ring.partial(&x(1), 2).is_err());
        assert!(deriv_apply(ring, &d(3), &x(1)).is_err());
        assert_eq!(deriv_apply(ring, &d(1), &x(1)).unwrap(), Polynomial::one());
    }

    #[test]
    fn display() {
        let e = &d(2) + &Derivation::term(-x(1), 2);
        assert_eq!(e.to_string(), "d2 + (-x1)*d3");
    }
}
