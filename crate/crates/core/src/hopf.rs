//! The Hopf algebra of labeled ordered trees.
//!
//! Product: for trees `T1`, `T2`, the sum over every way of linking the root
//! children of `T1` to nodes of `T2`. A linked subtree is placed before the
//! existing children of its new parent; subtrees linked to the same node keep
//! the order they had under the root of `T1`.
//!
//! Coproduct: the sum over subsets of root-child positions, `T_X ⊗ T_{F\X}`.
//! Coinciding sibling subtrees therefore collect binomial multiplicities.
//!
//! The antipode follows from the graded connected recursion
//! `S(T) = -T - Σ S(T_X)·T_{F\X}` over proper nonempty `X`.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::poly::{rat, Rational};
use crate::tree::Tree;

/// A finite linear combination with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K) -> Self {
        Self::term(key, Rational::one())
    }

    pub fn term(key: K, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(key, c);
        s
    }

    pub fn add_term(&mut self, key: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                add_assign(o.get_mut(), &c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<K>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), mul_rational(v, c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Apply a linear map defined on basis elements.
    pub fn map_linear<M: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<M>) -> LinComb<M> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }
}

// Tree coefficients are almost always integers; skip the gcd for them.
fn add_assign(a: &mut Rational, b: &Rational) {
    if a.is_integer() && b.is_integer() {
        *a = Rational::from_integer(a.numer() + b.numer());
    } else {
        *a += b;
    }
}

fn mul_rational(a: &Rational, b: &Rational) -> Rational {
    if b.is_one() {
        a.clone()
    } else if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + Clone> Add<&LinComb<K>> for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<K: Ord + Clone> Sub<&LinComb<K>> for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<K: Ord + Clone> Neg for &LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        self.scale(&-Rational::one())
    }
}

/// Element of the tree algebra `kLT(S)`.
pub type TreeSum<L> = LinComb<Tree<L>>;

/// Element of `kLT(S) ⊗ kLT(S)`.
pub type TreeTensorSum<L> = LinComb<(Tree<L>, Tree<L>)>;

/// Element of the triple tensor power, for coassociativity checks.
pub type TreeTensor3<L> = LinComb<(Tree<L>, Tree<L>, Tree<L>)>;

/// Rendering of a basis element inside a linear combination.
pub trait RenderTerm {
    fn render(&self) -> String;
}

impl<L: fmt::Display> RenderTerm for Tree<L> {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl<L: fmt::Display> RenderTerm for (Tree<L>, Tree<L>) {
    fn render(&self) -> String {
        format!("({} ⊗ {})", self.0, self.1)
    }
}

impl<K: Ord + RenderTerm> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, " - {}", c.abs())?,
                (_, false) => write!(f, " + {c}")?,
            }
            write!(f, " * {}", k.render())?;
        }
        Ok(())
    }
}

/// Product of two basis trees.
pub fn gl_mul<L: Clone + Ord>(t1: &Tree<L>, t2: &Tree<L>) -> TreeSum<L> {
    let one = Rational::one();
    collect_products(&[(t1, t2, &one)])
}

/// Bilinear extension of [`gl_mul`].
pub fn mul<L: Clone + Ord>(a: &TreeSum<L>, b: &TreeSum<L>) -> TreeSum<L> {
    let coeffs: Vec<Rational> = a
        .iter()
        .flat_map(|(_, ca)| b.iter().map(move |(_, cb)| mul_rational(ca, cb)))
        .collect();
    let mut pairs = Vec::with_capacity(coeffs.len());
    let mut c = coeffs.iter();
    for (ta, _) in a.iter() {
        for (tb, _) in b.iter() {
            pairs.push((ta, tb, c.next().expect("one coefficient per pair")));
        }
    }
    collect_products(&pairs)
}

/// Sum of `c · t1·t2` over the given pairs: all attachments are gathered,
/// sorted once and merged.
fn collect_products<L: Clone + Ord>(pairs: &[(&Tree<L>, &Tree<L>, &Rational)]) -> TreeSum<L> {
    let mut all: Vec<(Tree<L>, usize)> = Vec::new();
    for (k, (t1, t2, _)) in pairs.iter().enumerate() {
        all.extend(t1.attachments(t2).into_iter().map(|t| (t, k)));
    }
    all.sort_unstable();
    let mut merged: Vec<(Tree<L>, Rational)> = Vec::with_capacity(all.len());
    for (t, k) in all {
        let c = pairs[k].2;
        match merged.last_mut() {
            Some((last, sum)) if *last == t => add_assign(sum, c),
            _ => merged.push((t, c.clone())),
        }
    }
    LinComb {
        terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

/// Coproduct of a basis tree.
pub fn coproduct<L: Clone + Ord>(t: &Tree<L>) -> TreeTensorSum<L> {
    let k = t.root_arity();
    assert!(k < usize::BITS as usize, "too many root children");
    let one = Rational::one();
    let mut out = TreeTensorSum::zero();
    for mask in 0..(1usize << k) {
        let left = t.select_branches(|i| mask >> i & 1 == 1);
        let right = t.select_branches(|i| mask >> i & 1 == 0);
        out.add_term((left, right), one.clone());
    }
    out
}

/// Linear extension of [`coproduct`].
pub fn coproduct_sum<L: Clone + Ord>(a: &TreeSum<L>) -> TreeTensorSum<L> {
    a.map_linear(coproduct)
}

/// Coefficient of the unit tree.
pub fn counit<L: Clone + Ord>(a: &TreeSum<L>) -> Rational {
    a.iter()
        .filter(|(t, _)| t.is_unit())
        .map(|(_, c)| c.clone())
        .next()
        .unwrap_or_else(Rational::zero)
}

pub fn counit_tree<L: Clone>(t: &Tree<L>) -> Rational {
    if t.degree() == 0 {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Antipode with a memo table shared across calls.
#[derive(Debug, Default)]
pub struct Antipode<L: Ord> {
    memo: HashMap<Tree<L>, TreeSum<L>>,
}

impl<L: Clone + Ord + std::hash::Hash> Antipode<L> {
    pub fn new() -> Self {
        Antipode {
            memo: HashMap::new(),
        }
    }

    pub fn of_tree(&mut self, t: &Tree<L>) -> TreeSum<L> {
        if let Some(s) = self.memo.get(t) {
            return s.clone();
        }
        let result = if t.is_unit() {
            TreeSum::single(t.clone())
        } else {
            let k = t.root_arity();
            let mut acc = TreeSum::term(t.clone(), -Rational::one());
            let full = (1usize << k) - 1;
            for mask in 1..full {
                let left = t.select_branches(|i| mask >> i & 1 == 1);
                let right = t.select_branches(|i| mask >> i & 1 == 0);
                let s_left = self.of_tree(&left);
                let prod = mul(&s_left, &TreeSum::single(right));
                acc.add_scaled(&prod, &-Rational::one());
            }
            acc
        };
        self.memo.insert(t.clone(), result.clone());
        result
    }

    pub fn of_sum(&mut self, a: &TreeSum<L>) -> TreeSum<L> {
        a.map_linear(|t| self.of_tree(t))
    }
}

pub fn antipode<L: Clone + Ord + std::hash::Hash>(t: &Tree<L>) -> TreeSum<L> {
    Antipode::new().of_tree(t)
}

/// `m ∘ (f ⊗ g)` applied to a tensor.
pub fn convolve<L: Clone + Ord>(
    x: &TreeTensorSum<L>,
    mut f: impl FnMut(&Tree<L>) -> TreeSum<L>,
    mut g: impl FnMut(&Tree<L>) -> TreeSum<L>,
) -> TreeSum<L> {
    let mut out = TreeSum::zero();
    for ((a, b), c) in x.iter() {
        out.add_scaled(&mul(&f(a), &g(b)), c);
    }
    out
}

/// Componentwise product in `H ⊗ H`.
pub fn tensor_mul<L: Clone + Ord>(x: &TreeTensorSum<L>, y: &TreeTensorSum<L>) -> TreeTensorSum<L> {
    let mut out = TreeTensorSum::zero();
    for ((a1, b1), c1) in x.iter() {
        for ((a2, b2), c2) in y.iter() {
            let left = gl_mul(a1, a2);
            let right = gl_mul(b1, b2);
            let c = c1 * c2;
            for (l, cl) in left.iter() {
                for (r, cr) in right.iter() {
                    out.add_term((l.clone(), r.clone()), &c * cl * cr);
                }
            }
        }
    }
    out
}

/// `(Δ ⊗ id) Δ(t)`.
pub fn coproduct_left<L: Clone + Ord>(t: &Tree<L>) -> TreeTensor3<L> {
    let mut out = TreeTensor3::zero();
    for ((a, b), c) in coproduct(t).iter() {
        for ((a1, a2), c2) in coproduct(a).iter() {
            out.add_term((a1.clone(), a2.clone(), b.clone()), c * c2);
        }
    }
    out
}

/// `(id ⊗ Δ) Δ(t)`.
pub fn coproduct_right<L: Clone + Ord>(t: &Tree<L>) -> TreeTensor3<L> {
    let mut out = TreeTensor3::zero();
    for ((a, b), c) in coproduct(t).iter() {
        for ((b1, b2), c2) in coproduct(b).iter() {
            out.add_term((a.clone(), b1.clone(), b2.clone()), c * c2);
        }
    }
    out
}

pub fn swap_factors<L: Clone + Ord>(x: &TreeTensorSum<L>) -> TreeTensorSum<L> {
    x.iter().map(|((a, b), c)| ((b.clone(), a.clone()), c.clone())).collect()
}

/// Integer multiple of a tree, for convenience in tests and fixtures.
pub fn times<L: Clone + Ord>(n: i64, t: Tree<L>) -> TreeSum<L> {
    TreeSum::term(t, rat(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = Tree<char>;

    fn v(c: char) -> T {
        Tree::v(c)
    }

    #[test]
    fn pair_product() {
        let got = gl_mul(&v('e'), &v('f'));
        let expected = &TreeSum::single(Tree::t(&[v('e'), v('f')]))
            + &TreeSum::single(Tree::u('f', &[v('e')]));
        assert_eq!(got, expected);
    }

    #[test]
    fn unit_laws() {
        let t = Tree::t(&[Tree::u('a', &[v('b')]), v('c')]);
        assert_eq!(gl_mul(&T::unit(), &t), TreeSum::single(t.clone()));
        assert_eq!(gl_mul(&t, &T::unit()), TreeSum::single(t));
    }

    #[test]
    fn scalar_linearity() {
        let a = times(2, v('e'));
        assert_eq!(mul(&a, &TreeSum::single(v('f'))), gl_mul(&v('e'), &v('f')).scale(&rat(2)));
        assert!(mul(&TreeSum::zero(), &a).is_zero());
    }

    #[test]
    fn coproduct_examples() {
        let u = T::unit();
        assert_eq!(coproduct(&u), TreeTensorSum::single((u.clone(), u.clone())));
        let expected = &TreeTensorSum::single((v('e'), u.clone())) + &TreeTensorSum::single((u.clone(), v('e')));
        assert_eq!(coproduct(&v('e')), expected);

        // Enumerating four position subsets of t(v(E), v(E)): the two
        // singletons coincide.
        let tt = Tree::t(&[v('e'), v('e')]);
        let mut expected = TreeTensorSum::zero();
        expected.add_term((tt.clone(), u.clone()), rat(1));
        expected.add_term((v('e'), v('e')), rat(2));
        expected.add_term((u.clone(), tt.clone()), rat(1));
        assert_eq!(coproduct(&tt), expected);
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit(&TreeSum::single(T::unit())), rat(1));
        assert_eq!(counit(&TreeSum::single(v('e'))), rat(0));
        let a = &times(3, T::unit()) + &times(5, v('e'));
        assert_eq!(counit(&a), rat(3));
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(&T::unit()), TreeSum::single(T::unit()));
        assert_eq!(antipode(&v('e')), times(-1, v('e')));
        let t = Tree::t(&[v('e'), v('f')]);
        let conv = convolve(&coproduct(&t), antipode, |x| TreeSum::single(x.clone()));
        assert!(conv.is_zero());
    }

    #[test]
    fn display_sums() {
        let s = gl_mul(&v('a'), &v('b'));
        assert_eq!(s.to_string(), "1 * *[ a[], b[] ] + 1 * *[ b[ a[] ] ]");
        assert_eq!(antipode(&v('a')).to_string(), "-1 * *[ a[] ]");
        let c = coproduct(&T::unit());
        assert_eq!(c.to_string(), "1 * (* ⊗ *)");
    }

    #[test]
    fn grading_of_product_terms() {
        let t1 = Tree::t(&[v('a'), Tree::u('b', &[v('a')])]);
        let t2 = Tree::u('b', &[v('b')]);
        for (t, _) in gl_mul(&t1, &t2).iter() {
            assert_eq!(t.degree(), t1.degree() + t2.degree());
        }
        for ((l, r), _) in coproduct(&t1).iter() {
            assert_eq!(l.degree() + r.degree(), t1.degree());
        }
    }
}
