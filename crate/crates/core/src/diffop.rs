//! Higher-order differential operators in the normal form `Σ r_α ∂^α`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::derivation::{Derivation, Ring};
use crate::error::Result;
use crate::poly::{rat, Monomial, Polynomial, Rational};

/// A differential operator with polynomial coefficients on the left of
/// commuting partials. The multi-index `α` reuses [`Monomial`] as an
/// exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffOperator {
    terms: BTreeMap<Monomial, Polynomial>,
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k);
    (0..k as u64).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator::default()
    }

    pub fn identity() -> Self {
        DiffOperator::term(Polynomial::one(), Monomial::one())
    }

    pub fn term(coeff: Polynomial, alpha: Monomial) -> Self {
        let mut op = DiffOperator::zero();
        op.add_term(alpha, coeff);
        op
    }

    /// Multiplication by a ring element (order zero).
    pub fn multiplication(r: Polynomial) -> Self {
        DiffOperator::term(r, Monomial::one())
    }

    pub fn from_derivation(d: &Derivation) -> Self {
        let mut op = DiffOperator::zero();
        for (i, c) in d.terms() {
            op.add_term(Monomial::var(i), c.clone());
        }
        op
    }

    pub fn add_term(&mut self, alpha: Monomial, coeff: Polynomial) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(alpha.clone()).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> {
        self.terms.iter()
    }

    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn width(&self) -> usize {
        self.terms
            .iter()
            .map(|(a, p)| a.width().max(p.width()))
            .max()
            .unwrap_or(0)
    }

    /// The first-order part as a derivation, if the operator has order ≤ 1
    /// and no order-zero term.
    pub fn as_derivation(&self) -> Option<Derivation> {
        let mut d = Derivation::zero();
        for (alpha, c) in &self.terms {
            if alpha.degree() != 1 {
                return None;
            }
            let i = alpha.exponents().iter().position(|&e| e == 1)?;
            d.add_term(i, c.clone());
        }
        Some(d)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (alpha, c) in &self.terms {
            let dp = p.partial_multi(alpha);
            if !dp.is_zero() {
                out += &(c * &dp);
            }
        }
        out
    }

    /// `self ∘ other`, renormalized with the Leibniz rule
    /// `∂^α s = Σ_{γ≤α} C(α,γ) (∂^γ s) ∂^{α-γ}`.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (alpha, r) in &self.terms {
            let gammas = alpha.divisors();
            for (beta, s) in &other.terms {
                for gamma in &gammas {
                    let ds = s.partial_multi(gamma);
                    if ds.is_zero() {
                        continue;
                    }
                    let mut mult = 1u64;
                    for (i, &a) in alpha.exponents().iter().enumerate() {
                        mult *= binomial(a, gamma.exponent(i));
                    }
                    let rest = alpha.div(gamma).expect("gamma divides alpha").mul(beta);
                    let coeff = (r * &ds).scale(&rat(mult as i64));
                    out.add_term(rest, coeff);
                }
            }
        }
        out
    }

    /// Left multiplication by a ring element.
    pub fn lmul(&self, r: &Polynomial) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), r * c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (alpha, p) in &self.terms {
            out.add_term(alpha.clone(), p.scale(c));
        }
        out
    }
}

/// Checked composition.
pub fn diffop_compose(ring: Ring, a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator> {
    ring.check_width(a.width())?;
    ring.check_width(b.width())?;
    Ok(a.compose(b))
}

/// Checked application.
pub fn diffop_apply(ring: Ring, a: &DiffOperator, p: &Polynomial) -> Result<Polynomial> {
    ring.check_poly(p)?;
    ring.check_width(a.width())?;
    Ok(a.apply(p))
}

impl<'a> Add<&'a DiffOperator> for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &'a DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DiffOperator> for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &'a DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        DiffOperator::zero().sub(self)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.display_cmp(b.0));
        for (k, (alpha, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let partials: Vec<String> = alpha
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("d{}", i + 1)
                    } else {
                        format!("d{}^{e}", i + 1)
                    }
                })
                .collect();
            match (c.is_one(), partials.is_empty()) {
                (_, true) => write!(f, "({c})")?,
                (true, false) => write!(f, "{}", partials.join("*"))?,
                (false, false) => write!(f, "({c})*{}", partials.join("*"))?,
            }
        }
        Ok(())
    }
}
