//! Text input for polynomials, derivations, trees, tree sums and smash
//! elements. The grammar matches the `Display` output of each type:
//!
//! ```text
//! poly     := ['+'|'-'] product (('+'|'-') product)*
//! product  := power (('*'|'/') power)*          division by constants only
//! power    := atom ['^' int]
//! atom     := int | 'x'<k> | '(' poly ')'
//! deriv    := ['-'] dterm (('+'|'-') dterm)*     dterm: a product with one 'd'<k> factor
//! tree     := '*' ['[' [node (',' node)*] ']']
//! node     := deriv '[' [node (',' node)*] ']'
//! treesum  := ['-'] [rational '*'] tree (('+'|'-') [rational '*'] tree)*
//! smash    := ['-'] product '#' tree (('+'|'-') product '#' tree)*
//! ```
//!
//! Variable and partial indices are one-based.

use num_traits::{One, Zero};

use crate::derivation::{Derivation, Label, Ring};
use crate::error::{Error, Result};
use crate::hopf::TreeSum;
use crate::poly::{Polynomial, Rational};
use crate::smash::SmashElement;
use crate::tree::{LabeledTree, Tree};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: Option<Ring>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, ring: Option<Ring>) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            ring,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn error(&mut self, msg: impl Into<String>) -> Error {
        self.skip_ws();
        Error::parse(self.pos, msg)
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "number too large"))
    }

    fn big_uint(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let n: num_bigint::BigInt = digits.parse().expect("digits parse");
        Ok(Rational::from_integer(n))
    }

    /// One-based index after `x` or `d`, returned zero-based.
    fn index(&mut self) -> Result<usize> {
        let start = self.pos;
        let k = self.uint()? as usize;
        if k == 0 {
            return Err(Error::parse(start, "indices are one-based"));
        }
        if let Some(ring) = self.ring {
            if k > ring.nvars {
                return Err(Error::DimensionMismatch {
                    expected: ring.nvars,
                    found: k,
                });
            }
        }
        Ok(k - 1)
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let first = self.product()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc += &self.product()?;
            } else if self.eat(b'-') {
                acc -= &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let (p, d) = self.product_with_partial(false)?;
        debug_assert!(d.is_none());
        Ok(p)
    }

    /// A product of factors; with `partials` set, exactly one factor may be
    /// a partial `d<k>`, whose index is returned.
    fn product_with_partial(&mut self, partials: bool) -> Result<(Polynomial, Option<usize>)> {
        let mut partial = None;
        let mut acc = Polynomial::one();
        let mut divide = false;
        loop {
            let at = {
                self.skip_ws();
                self.pos
            };
            if partials && self.peek() == Some(b'd') {
                if divide {
                    return Err(Error::parse(at, "cannot divide by a partial"));
                }
                if partial.is_some() {
                    return Err(Error::parse(at, "more than one partial in a term"));
                }
                self.pos += 1;
                partial = Some(self.index()?);
            } else {
                let f = self.power()?;
                if divide {
                    let c = f.as_constant().filter(|c| !c.is_zero()).ok_or(Error::Division)?;
                    acc = acc.div_constant(&c)?;
                } else {
                    acc = &acc * &f;
                }
            }
            if self.eat(b'*') {
                divide = false;
            } else if self.eat(b'/') {
                divide = true;
            } else {
                return Ok((acc, partial));
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(b')')?;
                Ok(p)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Polynomial::var(self.index()?))
            }
            Some(c) if c.is_ascii_digit() => Ok(Polynomial::constant(self.big_uint()?)),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn derivation(&mut self) -> Result<Derivation> {
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        let mut acc = Derivation::zero();
        loop {
            let at = {
                self.skip_ws();
                self.pos
            };
            let (c, d) = self.product_with_partial(true)?;
            let i = d.ok_or_else(|| Error::parse(at, "term has no partial d<k>"))?;
            acc.add_term(i, if sign < 0 { -c } else { c });
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn label(&mut self) -> Result<Label> {
        let at = {
            self.skip_ws();
            self.pos
        };
        Label::new(self.derivation()?).map_err(|_| Error::parse(at, "zero label"))
    }

    fn tree(&mut self) -> Result<LabeledTree> {
        self.expect(b'*')?;
        if self.peek() != Some(b'[') {
            return Ok(Tree::unit());
        }
        let kids = self.children()?;
        Ok(Tree::t(&kids))
    }

    /// `[ node, node, … ]`, each node returned as a single-child tree.
    fn children(&mut self) -> Result<Vec<LabeledTree>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            let label = self.label()?;
            let below = self.children()?;
            out.push(Tree::u(label, &below));
            if self.eat(b',') {
                continue;
            }
            self.expect(b']')?;
            return Ok(out);
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.big_uint()?;
        if self.eat(b'/') {
            let at = self.pos;
            let d = self.big_uint()?;
            if d.is_zero() {
                return Err(Error::parse(at, "zero denominator"));
            }
            return Ok(n / d);
        }
        Ok(n)
    }

    fn tree_sum(&mut self) -> Result<TreeSum<Label>> {
        let mut out = TreeSum::zero();
        let mut negate = self.eat(b'-');
        loop {
            let c = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let c = self.rational()?;
                self.expect(b'*')?;
                c
            } else {
                Rational::one()
            };
            let t = self.tree()?;
            out.add_term(t, if negate { -c } else { c });
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn smash(&mut self) -> Result<SmashElement> {
        let mut out = SmashElement::zero();
        let mut negate = self.eat(b'-');
        loop {
            let r = self.product()?;
            self.expect(b'#')?;
            let t = self.tree()?;
            out.add_term(t, if negate { -r } else { r });
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(out);
            }
        }
    }
}

fn run<T>(src: &str, ring: Option<Ring>, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(src, ring);
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_polynomial(src: &str, ring: Option<Ring>) -> Result<Polynomial> {
    run(src, ring, |p| p.poly())
}

pub fn parse_derivation(src: &str, ring: Option<Ring>) -> Result<Derivation> {
    run(src, ring, |p| p.derivation())
}

pub fn parse_label(src: &str, ring: Option<Ring>) -> Result<Label> {
    run(src, ring, |p| p.label())
}

pub fn parse_tree(src: &str, ring: Option<Ring>) -> Result<LabeledTree> {
    run(src, ring, |p| p.tree())
}

pub fn parse_tree_sum(src: &str, ring: Option<Ring>) -> Result<TreeSum<Label>> {
    run(src, ring, |p| p.tree_sum())
}

pub fn parse_smash(src: &str, ring: Option<Ring>) -> Result<SmashElement> {
    run(src, ring, |p| p.smash())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use proptest::prelude::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i - 1)
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_polynomial("x1^2", None).unwrap(), x(1).pow(2));
        assert_eq!(
            parse_polynomial("-1/6*x1^3 + 1", None).unwrap(),
            &x(1).pow(3).scale(&ratio(-1, 6)) + &Polynomial::one()
        );
        assert_eq!(parse_polynomial("(x1 + x2)*(x1 - x2)", None).unwrap().to_string(), "x1^2 - x2^2");
        assert_eq!(parse_polynomial("0", None).unwrap(), Polynomial::zero());
    }

    #[test]
    fn polynomial_errors() {
        assert!(matches!(parse_polynomial("x1 +", None), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_polynomial("x0", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x1 / x2", None), Err(Error::Division)));
        assert!(matches!(
            parse_polynomial("x3", Some(Ring::new(2))),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(matches!(parse_polynomial("x1 )", None), Err(Error::Parse { pos: 3, .. })));
    }

    #[test]
    fn derivations() {
        let d = parse_derivation("d2 + (-x1)*d3", None).unwrap();
        assert_eq!(d.to_string(), "d2 + (-x1)*d3");
        assert_eq!(parse_derivation("x1*d2 - d1", None).unwrap().to_string(), "(-1)*d1 + (x1)*d2");
        assert!(parse_derivation("x1", None).is_err());
        assert!(parse_derivation("d1*d2", None).is_err());
    }

    #[test]
    fn trees() {
        for s in ["*", "*[ d1[] ]", "*[ d1[], d2[ (x1)*d1[] ] ]", "*[ d1 + (x2)*d2[ d1[] ] ]"] {
            assert_eq!(parse_tree(s, None).unwrap().to_string(), s);
        }
        assert!(parse_tree("*[]", None).unwrap().is_unit());
        assert!(parse_tree("*[ d1[ ]", None).is_err());
        assert!(matches!(parse_tree("*[ 0*d1[] ]", None), Err(Error::Parse { .. })));
    }

    #[test]
    fn tree_sums_round_trip() {
        let s = "1 * *[ d1[], d2[] ] + 1 * *[ d2[ d1[] ] ]";
        assert_eq!(parse_tree_sum(s, None).unwrap().to_string(), s);
        let s = "-1/2 * *[ d1[] ] + 3 * *";
        let parsed = parse_tree_sum(s, None).unwrap();
        assert_eq!(parse_tree_sum(&parsed.to_string(), None).unwrap(), parsed);
        assert_eq!(parse_tree_sum("*[ d1[] ]", None).unwrap().len(), 1);
    }

    #[test]
    fn smash_elements() {
        let z = parse_smash("1 # *[ (x1)*d2[] ] - (x1 + 1) # *", None).unwrap();
        assert_eq!(parse_smash(&z.to_string(), None).unwrap(), z);
        assert!(parse_smash("x1 + 1 # *", None).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-5i64..5, 0u32..3, 0u32..3), 0..4).prop_map(|ts| {
            let mut p = Polynomial::zero();
            for (c, a, b) in ts {
                p += &(&x(1).pow(a) * &x(2).pow(b)).scale(&crate::poly::rat(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn polynomial_round_trip(p in arb_poly()) {
            prop_assert_eq!(parse_polynomial(&p.to_string(), None).unwrap(), p);
        }

        #[test]
        fn derivation_round_trip(a in arb_poly(), b in arb_poly()) {
            let d = Derivation::from_terms([(0, a), (2, b)]);
            prop_assume!(!d.is_zero());
            prop_assert_eq!(parse_derivation(&d.to_string(), None).unwrap(), d);
        }
    }
}
