//! The smash product `R # kLT(D)` and its `R/k`-Hopf structure.
//!
//! Elements are finite sums `Σ r_T # T`. Multiplication uses the tree
//! action: `(r#T)(s#K) = Σ_{(T)} r (T(1)·s) # T(2)K`.
//!
//! Two tensor squares appear. In `B ⊗_R B` scalars pass between the left
//! factors, `(rb) ⊗ c = b ⊗ (rc)`, so every element is `Σ r (1#J) ⊗ (1#K)`.
//! In `B ⊗_r B` the relation is `br ⊗ c = b ⊗ rc`, so right factors are
//! reduced to bare trees `1#K` by pushing their coefficients into the left
//! factor with a smash product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;

use crate::action::Action;
use crate::derivation::{Derivation, Label};
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::hopf::{antipode, coproduct, counit_tree, gl_mul, TreeSum};
use crate::poly::{Polynomial, Rational};
use crate::tree::{LabeledTree, NodePath, Tree};

/// `Σ r_T # T` with nonzero polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SmashElement {
    terms: BTreeMap<LabeledTree, Polynomial>,
}

impl SmashElement {
    pub fn zero() -> Self {
        SmashElement::default()
    }

    /// `1 # 1`.
    pub fn one() -> Self {
        SmashElement::single(Polynomial::one(), Tree::unit())
    }

    pub fn single(r: Polynomial, t: LabeledTree) -> Self {
        let mut z = SmashElement::zero();
        z.add_term(t, r);
        z
    }

    /// `1 # T`.
    pub fn tree(t: LabeledTree) -> Self {
        SmashElement::single(Polynomial::one(), t)
    }

    /// `r # 1`.
    pub fn scalar(r: Polynomial) -> Self {
        SmashElement::single(r, Tree::unit())
    }

    /// `1 # a` for a tree combination.
    pub fn from_tree_sum(a: &TreeSum<Label>) -> Self {
        let mut z = SmashElement::zero();
        for (t, c) in a.iter() {
            z.add_term(t.clone(), Polynomial::constant(c.clone()));
        }
        z
    }

    pub fn add_term(&mut self, t: LabeledTree, r: Polynomial) {
        if r.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(slot) => {
                *slot += &r;
                if slot.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, r);
            }
        }
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

    pub fn iter(&self) -> impl Iterator<Item = (&LabeledTree, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &LabeledTree) -> Polynomial {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    /// Left multiplication by `r`.
    pub fn lmul(&self, r: &Polynomial) -> SmashElement {
        let mut z = SmashElement::zero();
        for (t, p) in &self.terms {
            z.add_term(t.clone(), r * p);
        }
        z
    }

    pub fn scale(&self, c: &Rational) -> SmashElement {
        self.lmul(&Polynomial::constant(c.clone()))
    }

    /// True when every label is a bare basis partial.
    pub fn is_basis_labeled(&self) -> bool {
        self.terms.keys().all(|t| t.labels().all(Label::is_basis))
    }

    pub fn width(&self) -> usize {
        self.terms
            .iter()
            .map(|(t, p)| t.labels().map(|l| l.derivation().width()).fold(p.width(), usize::max))
            .max()
            .unwrap_or(0)
    }
}

impl Add<&SmashElement> for &SmashElement {
    type Output = SmashElement;
    fn add(self, rhs: &SmashElement) -> SmashElement {
        let mut z = self.clone();
        for (t, p) in &rhs.terms {
            z.add_term(t.clone(), p.clone());
        }
        z
    }
}

impl Sub<&SmashElement> for &SmashElement {
    type Output = SmashElement;
    fn sub(self, rhs: &SmashElement) -> SmashElement {
        let mut z = self.clone();
        for (t, p) in &rhs.terms {
            z.add_term(t.clone(), -p);
        }
        z
    }
}

impl Neg for &SmashElement {
    type Output = SmashElement;
    fn neg(self) -> SmashElement {
        &SmashElement::zero() - self
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, first: bool, p: &Polynomial) -> fmt::Result {
    let single_negative = !p.is_compound() && p.terms().next().is_some_and(|(_, c)| c < &Rational::from_integer(0.into()));
    match (first, single_negative) {
        (true, true) => write!(f, "-{}", -p),
        (true, false) if p.is_compound() => write!(f, "({p})"),
        (true, false) => write!(f, "{p}"),
        (false, true) => write!(f, " - {}", -p),
        (false, false) if p.is_compound() => write!(f, " + ({p})"),
        (false, false) => write!(f, " + {p}"),
    }
}

impl fmt::Display for SmashElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (t, p)) in self.terms.iter().enumerate() {
            write_coeff(f, k == 0, p)?;
            write!(f, " # {t}")?;
        }
        Ok(())
    }
}

/// An element of `B ⊗_R B` as `Σ r (1#J) ⊗ (1#K)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmashTensorLeft {
    terms: BTreeMap<(LabeledTree, LabeledTree), Polynomial>,
}

impl SmashTensorLeft {
    pub fn zero() -> Self {
        SmashTensorLeft::default()
    }

    pub fn add_term(&mut self, j: LabeledTree, k: LabeledTree, r: Polynomial) {
        if r.is_zero() {
            return;
        }
        let key = (j, k);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += &r;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `b ⊗ c` brought to normal form: `(r#J) ⊗ (s#K) = rs (1#J) ⊗ (1#K)`.
    pub fn add_pair(&mut self, b: &SmashElement, c: &SmashElement) {
        for (j, r) in b.iter() {
            for (k, s) in c.iter() {
                self.add_term(j.clone(), k.clone(), r * s);
            }
        }
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a SmashElement, &'a SmashElement)>) -> Self {
        let mut out = SmashTensorLeft::zero();
        for (b, c) in pairs {
            out.add_pair(b, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(LabeledTree, LabeledTree), &Polynomial)> {
        self.terms.iter()
    }

    /// The factors `(r#J, 1#K)` of each term.
    pub fn factors(&self) -> impl Iterator<Item = (SmashElement, SmashElement)> + '_ {
        self.terms
            .iter()
            .map(|((j, k), r)| (SmashElement::single(r.clone(), j.clone()), SmashElement::tree(k.clone())))
    }

    /// Componentwise product `Σ b_i c_j ⊗ b'_i c'_j`.
    pub fn mul(&self, action: &Action, other: &SmashTensorLeft) -> SmashTensorLeft {
        let mut out = SmashTensorLeft::zero();
        for (b, b2) in self.factors() {
            for (c, c2) in other.factors() {
                out.add_pair(&smash_mul(action, &b, &c), &smash_mul(action, &b2, &c2));
            }
        }
        out
    }
}

impl fmt::Display for SmashTensorLeft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((a, b), p)) in self.terms.iter().enumerate() {
            write_coeff(f, k == 0, p)?;
            write!(f, " * ({a} ⊗ {b})")?;
        }
        Ok(())
    }
}

/// An element of `B ⊗_r B` as `Σ_K b_K ⊗ (1#K)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmashTensorBi {
    terms: BTreeMap<LabeledTree, SmashElement>,
}

impl SmashTensorBi {
    pub fn zero() -> Self {
        SmashTensorBi::default()
    }

    /// Adds `b ⊗ (1#K)`.
    pub fn add_term(&mut self, k: LabeledTree, b: &SmashElement) {
        if b.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_default();
        *slot = &*slot + b;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Adds `b ⊗ c`, moving each coefficient of `c` across as `b·(s#1)`.
    pub fn add_pair(&mut self, action: &Action, b: &SmashElement, c: &SmashElement) {
        for (k, s) in c.iter() {
            let moved = if s.is_one() {
                b.clone()
            } else {
                smash_mul(action, b, &SmashElement::scalar(s.clone()))
            };
            self.add_term(k.clone(), &moved);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LabeledTree, &SmashElement)> {
        self.terms.iter()
    }

    /// `r · x`.
    pub fn lmul(&self, r: &Polynomial) -> SmashTensorBi {
        let mut out = SmashTensorBi::zero();
        for (k, b) in &self.terms {
            out.add_term(k.clone(), &b.lmul(r));
        }
        out
    }

    /// `x · c`, multiplying the right factors.
    pub fn rmul(&self, action: &Action, c: &SmashElement) -> SmashTensorBi {
        let mut out = SmashTensorBi::zero();
        for (k, b) in &self.terms {
            let right = smash_mul(action, &SmashElement::tree(k.clone()), c);
            out.add_pair(action, b, &right);
        }
        out
    }

    /// The multiplication map `B ⊗_r B → B`.
    pub fn mu(&self, action: &Action) -> SmashElement {
        let mut out = SmashElement::zero();
        for (k, b) in &self.terms {
            out = &out + &smash_mul(action, b, &SmashElement::tree(k.clone()));
        }
        out
    }
}

impl fmt::Display for SmashTensorBi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (t, b)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({b}) ⊗ {t}")?;
        }
        Ok(())
    }
}

/// An element of `B ⊗_R B ⊗_r B` as `Σ r (1#J) ⊗ (1#K) ⊗ (1#L)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmashTensor3 {
    terms: BTreeMap<(LabeledTree, LabeledTree, LabeledTree), Polynomial>,
}

impl SmashTensor3 {
    pub fn zero() -> Self {
        SmashTensor3::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (LabeledTree, LabeledTree, LabeledTree), r: Polynomial) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += &r;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `x ⊗ y ⊗ z`: the coefficients of `z` are pushed into `y`
    /// through a smash product, then those of `y` move to `x`.
    pub fn add_triple(&mut self, action: &Action, x: &SmashElement, y: &SmashElement, z: &SmashElement) {
        for (l, s) in z.iter() {
            let y2 = if s.is_one() {
                y.clone()
            } else {
                smash_mul(action, y, &SmashElement::scalar(s.clone()))
            };
            for (k, p) in y2.iter() {
                for (j, q) in x.iter() {
                    self.add_term((j.clone(), k.clone(), l.clone()), q * p);
                }
            }
        }
    }
}

/// `(r#T)(s#K) = Σ_{(T)} r (T(1)·s) # T(2)K`, extended bilinearly.
pub fn smash_mul(action: &Action, a: &SmashElement, b: &SmashElement) -> SmashElement {
    let mut out = SmashElement::zero();
    for (t, r) in a.iter() {
        let delta = coproduct(t);
        for (k, s) in b.iter() {
            for ((t1, t2), c) in delta.iter() {
                let acted = action.act(t1, s);
                if acted.is_zero() {
                    continue;
                }
                let coeff = (r * &acted).scale(c);
                for (w, c2) in gl_mul(t2, k).iter() {
                    out.add_term(w.clone(), coeff.scale(c2));
                }
            }
        }
    }
    out
}

/// `Δ(r#T) = Σ (r#T(1)) ⊗ (1#T(2))`.
pub fn smash_delta(a: &SmashElement) -> SmashTensorLeft {
    let mut out = SmashTensorLeft::zero();
    for (t, r) in a.iter() {
        for ((t1, t2), c) in coproduct(t).iter() {
            out.add_term(t1.clone(), t2.clone(), r.scale(c));
        }
    }
    out
}

/// `ε(r#T) = r ε(T)`.
pub fn smash_counit(a: &SmashElement) -> Polynomial {
    let mut out = Polynomial::zero();
    for (t, r) in a.iter() {
        out += &r.scale(&counit_tree(t));
    }
    out
}

/// `E(r#T) = Σ_{(T)} (r#T(1)) ⊗ (1#S(T(2)))`.
pub fn antiproduct(a: &SmashElement) -> SmashTensorBi {
    let mut out = SmashTensorBi::zero();
    for (t, r) in a.iter() {
        for ((t1, t2), c) in coproduct(t).iter() {
            let left = SmashElement::single(r.scale(c), t1.clone());
            for (k, ck) in antipode(t2).iter() {
                out.add_term(k.clone(), &left.scale(ck));
            }
        }
    }
    out
}

/// The action of `Σ r_T # T` on `s`: `Σ r_T (T·s)`.
pub fn smash_act(action: &Action, z: &SmashElement, s: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (t, r) in z.iter() {
        out += &(r * &action.act(t, s));
    }
    out
}

/// The differential operator `Σ r_T ψ(T)`.
pub fn smash_psi(action: &Action, z: &SmashElement) -> DiffOperator {
    let mut out = DiffOperator::zero();
    for (t, r) in z.iter() {
        out = &out + &action.psi(t).lmul(r);
    }
    out
}

/// One application of the substitution rule at the node `path` of `r#T`,
/// whose label is `Σ_u r_u ∂u`:
/// `Σ_u Σ_{(T_i)} r (T_i(1)·r_u) # T(i, ∂u, T_i(2))`.
fn substitute(
    action: &Action,
    t: &LabeledTree,
    r: &Polynomial,
    path: &NodePath,
    out: &mut Vec<(LabeledTree, Polynomial)>,
) {
    let label = t.label_at(path).expect("path from paths()").derivation().clone();
    let below = t.subtree_at(path).expect("non-root path");
    let delta = coproduct(&below);
    for (index, r_u) in label.terms() {
        let basis = Label::partial(index);
        for ((a, b), c) in delta.iter() {
            let acted = action.act(a, r_u);
            if acted.is_zero() {
                continue;
            }
            let grafted = t.graft(path, basis.clone(), b).expect("non-root path");
            out.push((grafted, (r * &acted).scale(c)));
        }
    }
}

fn non_basis_paths(t: &LabeledTree) -> Vec<NodePath> {
    t.paths()
        .into_iter()
        .filter(|p| !t.label_at(p).expect("own path").is_basis())
        .collect()
}

/// Rewrite every label into the basis `∂1..∂N`, choosing the node to
/// substitute next with `choose` among the remaining non-basis nodes
/// (listed in preorder).
pub fn alpha_b_by(
    action: &Action,
    z: &SmashElement,
    mut choose: impl FnMut(&[NodePath]) -> usize,
) -> SmashElement {
    let mut out = SmashElement::zero();
    let mut work: Vec<(LabeledTree, Polynomial)> = z.iter().map(|(t, r)| (t.clone(), r.clone())).collect();
    while let Some((t, r)) = work.pop() {
        let paths = non_basis_paths(&t);
        if paths.is_empty() {
            out.add_term(t, r);
            continue;
        }
        let k = choose(&paths);
        substitute(action, &t, &r, &paths[k], &mut work);
    }
    out
}

/// Substitution at the first non-basis node in preorder.
pub fn alpha_b(action: &Action, z: &SmashElement) -> SmashElement {
    alpha_b_by(action, z, |_| 0)
}

/// Substitution at uniformly random non-basis nodes.
pub fn alpha_b_random<R: Rng>(action: &Action, z: &SmashElement, rng: &mut R) -> SmashElement {
    alpha_b_by(action, z, |paths| rng.gen_range(0..paths.len()))
}

/// The inclusion of basis-labeled elements.
pub fn beta_b(z: &SmashElement) -> SmashElement {
    debug_assert!(z.is_basis_labeled());
    z.clone()
}

/// Membership in the ideal spanned by the substitution relations, decided
/// as `α_B(z) = 0`.
pub fn ideal_member(action: &Action, z: &SmashElement) -> bool {
    alpha_b(action, z).is_zero()
}

/// `1#T − Σ_{(T_i)} (T_i(1)·r) # T(i, E, T_i(2))` for a node labeled `r·E`.
pub fn i0_generator(
    action: &Action,
    t: &LabeledTree,
    path: &NodePath,
    r: &Polynomial,
    e: &Derivation,
) -> Result<SmashElement> {
    let label = t.label_at(path)?;
    if *label.derivation() != e.scale(r) {
        return Err(Error::LabelMismatch);
    }
    let e_label = Label::new(e.clone())?;
    let below = t.subtree_at(path)?;
    let mut z = SmashElement::tree(t.clone());
    for ((a, b), c) in coproduct(&below).iter() {
        let acted = action.act(a, r);
        z.add_term(t.graft(path, e_label.clone(), b)?, -acted.scale(c));
    }
    Ok(z)
}

/// `1 # v(E1)·…·v(En)` and the composite operator `E1∘…∘En`.
pub fn word_maps(word: &[Derivation]) -> Result<(SmashElement, DiffOperator)> {
    let mut trees = TreeSum::single(Tree::unit());
    let mut op = DiffOperator::identity();
    for e in word {
        let leaf = TreeSum::single(Tree::v(Label::new(e.clone())?));
        trees = crate::hopf::mul(&trees, &leaf);
        op = op.compose(&DiffOperator::from_derivation(e));
    }
    Ok((SmashElement::from_tree_sum(&trees), op))
}

/// Failed axioms, by name, for one element.
pub type AxiomFailures = Vec<&'static str>;

/// `R/k`-bialgebra axioms for `b`, `c`: coassociativity and counit,
/// `Δ(1) = 1⊗1`, `Δ(bc) = Δ(b)Δ(c)`, `ε(1) = 1`, `ε(bc) = ε(b ε(c))`, and the
/// middle-scalar relation of the normal form.
pub fn bialgebra_failures(action: &Action, b: &SmashElement, c: &SmashElement, r: &Polynomial) -> AxiomFailures {
    let mut fails = Vec::new();
    let db = smash_delta(b);

    // coassociativity in (B ⊗_R B) ⊗_R B
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    let bump = |m: &mut BTreeMap<(LabeledTree, LabeledTree, LabeledTree), Polynomial>, k, p: Polynomial| {
        let slot = m.entry(k).or_insert_with(Polynomial::zero);
        *slot += &p;
    };
    for ((j, k), p) in db.iter() {
        for ((j1, j2), c1) in coproduct(j).iter() {
            bump(&mut left, (j1.clone(), j2.clone(), k.clone()), p.scale(c1));
        }
        for ((k1, k2), c1) in coproduct(k).iter() {
            bump(&mut right, (j.clone(), k1.clone(), k2.clone()), p.scale(c1));
        }
    }
    left.retain(|_, p| !p.is_zero());
    right.retain(|_, p| !p.is_zero());
    if left != right {
        fails.push("coassociativity");
    }

    // counit on either side
    let mut via_left = SmashElement::zero();
    let mut via_right = SmashElement::zero();
    for ((j, k), p) in db.iter() {
        via_left = &via_left + &SmashElement::single(p * &smash_counit(&SmashElement::tree(j.clone())), k.clone());
        via_right = &via_right + &SmashElement::single(p * &smash_counit(&SmashElement::tree(k.clone())), j.clone());
    }
    if via_left != *b || via_right != *b {
        fails.push("counit");
    }

    let mut one_one = SmashTensorLeft::zero();
    one_one.add_term(Tree::unit(), Tree::unit(), Polynomial::one());
    if smash_delta(&SmashElement::one()) != one_one {
        fails.push("delta of unit");
    }

    let bc = smash_mul(action, b, c);
    if smash_delta(&bc) != db.mul(action, &smash_delta(c)) {
        fails.push("delta multiplicative");
    }

    if !smash_counit(&SmashElement::one()).is_one() {
        fails.push("counit of unit");
    }

    let inner = SmashElement::scalar(smash_counit(c));
    if smash_counit(&bc) != smash_counit(&smash_mul(action, b, &inner)) {
        fails.push("counit multiplicative");
    }

    // (r b) ⊗ c and b ⊗ (r c) have one normal form
    let mut x = SmashTensorLeft::zero();
    x.add_pair(&b.lmul(r), c);
    let mut y = SmashTensorLeft::zero();
    y.add_pair(b, &c.lmul(r));
    if x != y {
        fails.push("middle scalar");
    }
    fails
}

/// Antiproduct axioms for `b` and a ring element `r`.
pub fn antiproduct_failures(action: &Action, b: &SmashElement, r: &Polynomial) -> AxiomFailures {
    let mut fails = Vec::new();
    let eb = antiproduct(b);

    let r_b = antiproduct(&b.lmul(r));
    let b_r = {
        let mut x = SmashTensorBi::zero();
        for (k, bk) in eb.iter() {
            x.add_pair(action, bk, &smash_mul(action, &SmashElement::tree(k.clone()), &SmashElement::scalar(r.clone())));
        }
        x
    };
    if r_b != eb.lmul(r) || r_b != b_r {
        fails.push("R-linearity");
    }

    let mut sum = SmashTensorBi::zero();
    for (b1, b2) in smash_delta(b).factors() {
        for (k, x) in antiproduct(&b1).rmul(action, &b2).iter() {
            sum.add_term(k.clone(), x);
        }
    }
    let mut expected = SmashTensorBi::zero();
    expected.add_term(Tree::unit(), b);
    if sum != expected {
        fails.push("antiproduct against coproduct");
    }

    let mut lhs = SmashTensor3::zero();
    for (b1, b2) in smash_delta(b).factors() {
        for (l, y) in antiproduct(&b2).iter() {
            lhs.add_triple(action, &b1, y, &SmashElement::tree(l.clone()));
        }
    }
    let mut rhs = SmashTensor3::zero();
    for (l, y) in eb.iter() {
        for (y1, y2) in smash_delta(y).factors() {
            rhs.add_triple(action, &y1, &y2, &SmashElement::tree(l.clone()));
        }
    }
    if lhs != rhs {
        fails.push("coproduct compatibility");
    }

    if eb.mu(action) != SmashElement::scalar(smash_counit(b)) {
        fails.push("multiplication to counit");
    }
    fails
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::Connection;
    use crate::derivation::hall_fields;
    use crate::parse::parse_smash;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i - 1)
    }

    fn d(i: usize) -> Derivation {
        Derivation::partial(i - 1)
    }

    fn v(e: Derivation) -> LabeledTree {
        Tree::v(Label::new(e).unwrap())
    }

    fn table() -> Connection {
        Connection::from_table(2, [((0, 1), Derivation::term(x(2), 0)), ((1, 1), d(1))]).unwrap()
    }

    #[test]
    fn unit_and_primitive_products() {
        let flat = Connection::flat(2);
        let a = Action::new(&flat);
        let sk = SmashElement::single(&x(1) * &x(2), v(d(2)));
        assert_eq!(smash_mul(&a, &SmashElement::one(), &sk), sk);
        let e = Derivation::term(x(1), 1);
        let s = x(2).pow(2);
        let got = smash_mul(&a, &SmashElement::tree(v(e.clone())), &SmashElement::scalar(s.clone()));
        let expected = &SmashElement::scalar(e.apply(&s)) + &SmashElement::single(s, v(e));
        assert_eq!(got, expected);
    }

    #[test]
    fn associativity_sample() {
        let conn = table();
        let a = Action::new(&conn);
        let p = SmashElement::single(x(1), v(d(2)));
        let q = &SmashElement::single(x(2), v(Derivation::term(x(1), 0))) + &SmashElement::scalar(x(1));
        let r = SmashElement::single(Polynomial::one(), Tree::u(Label::partial(0), &[v(d(2))]));
        let left = smash_mul(&a, &smash_mul(&a, &p, &q), &r);
        let right = smash_mul(&a, &p, &smash_mul(&a, &q, &r));
        assert_eq!(left, right);
    }

    #[test]
    fn delta_examples() {
        let mut one_one = SmashTensorLeft::zero();
        one_one.add_term(Tree::unit(), Tree::unit(), Polynomial::one());
        assert_eq!(smash_delta(&SmashElement::one()), one_one);
        let e = v(d(1));
        let z = SmashElement::single(x(2), e.clone());
        let mut expected = SmashTensorLeft::zero();
        expected.add_term(e.clone(), Tree::unit(), x(2));
        expected.add_term(Tree::unit(), e, x(2));
        assert_eq!(smash_delta(&z), expected);
    }

    #[test]
    fn counit_examples() {
        let flat = Connection::flat(2);
        let a = Action::new(&flat);
        assert!(smash_counit(&SmashElement::one()).is_one());
        assert!(smash_counit(&SmashElement::single(x(1), v(d(1)))).is_zero());
        let e = Derivation::term(x(2), 0);
        let prod = smash_mul(&a, &SmashElement::tree(v(e.clone())), &SmashElement::scalar(x(1).pow(2)));
        assert_eq!(smash_counit(&prod), e.apply(&x(1).pow(2)));
    }

    #[test]
    fn antiproduct_examples() {
        let flat = Connection::flat(2);
        let a = Action::new(&flat);
        let mut unit = SmashTensorBi::zero();
        unit.add_term(Tree::unit(), &SmashElement::one());
        assert_eq!(antiproduct(&SmashElement::one()), unit);
        let t = v(d(2));
        let mut expected = SmashTensorBi::zero();
        expected.add_term(Tree::unit(), &SmashElement::tree(t.clone()));
        expected.add_term(t.clone(), &(-&SmashElement::one()));
        let e = antiproduct(&SmashElement::tree(t));
        assert_eq!(e, expected);
        assert!(e.mu(&a).is_zero());
    }

    #[test]
    fn axioms_on_samples() {
        let conn = table();
        let a = Action::new(&conn);
        let b = SmashElement::single(x(1), Tree::t(&[v(d(1)), v(Derivation::term(x(2), 1))]));
        let c = &SmashElement::single(x(2), v(d(2))) + &SmashElement::scalar(x(1));
        assert!(bialgebra_failures(&a, &b, &c, &x(2)).is_empty());
        assert!(antiproduct_failures(&a, &b, &x(2)).is_empty());
        assert!(antiproduct_failures(&a, &c, &x(1)).is_empty());
    }

    #[test]
    fn alpha_examples() {
        let flat = Connection::flat(2);
        let a = Action::new(&flat);
        let z = parse_smash("1 # *[ (x1)*d2[] ]", None).unwrap();
        assert_eq!(alpha_b(&a, &z).to_string(), "x1 # *[ d2[] ]");
        let basis = parse_smash("x2 # *[ d1[ d2[] ], d2[] ] - 3 # *[ d1[] ]", None).unwrap();
        assert_eq!(alpha_b(&a, &beta_b(&basis)), basis);
        let chain = parse_smash("1 # *[ (x1)*d1[ d2[] ] ]", None).unwrap();
        assert_eq!(alpha_b(&a, &chain).to_string(), "x1 # *[ d1[ d2[] ] ]");
    }

    #[test]
    fn ideal_membership() {
        let flat = Connection::flat(2);
        let a = Action::new(&flat);
        let t = v(Derivation::term(x(1), 0));
        let g = i0_generator(&a, &t, &NodePath::from([0]), &x(1), &d(1)).unwrap();
        assert!(ideal_member(&a, &g));
        assert!(!ideal_member(&a, &SmashElement::tree(v(d(1)))));
        let t2 = Tree::u(Label::new(Derivation::term(&x(1) * &x(2), 1)).unwrap(), &[v(d(1))]);
        let g2 = i0_generator(&a, &t2, &NodePath::from([0]), &x(2), &Derivation::term(x(1), 1)).unwrap();
        assert!(ideal_member(&a, &(&g + &g2)));
    }

    #[test]
    fn words() {
        let flat = Connection::flat(8);
        let a = Action::new(&flat);
        let (t, op) = word_maps(&[d(1)]).unwrap();
        assert_eq!(t, SmashElement::tree(v(d(1))));
        assert_eq!(op, DiffOperator::from_derivation(&d(1)));
        let (t, op) = word_maps(&[d(1), d(2)]).unwrap();
        assert_eq!(smash_psi(&a, &t), op);
        let (e1, e2) = hall_fields();
        let (t21, _) = word_maps(&[e2.clone(), e1.clone()]).unwrap();
        let (t12, _) = word_maps(&[e1, e2]).unwrap();
        assert_eq!(smash_act(&a, &(&t21 - &t12), &x(3)), Polynomial::one());
    }

    #[test]
    fn display() {
        let z = &SmashElement::single(-x(1), v(d(1))) + &SmashElement::single(&x(1) + &x(2), Tree::unit());
        assert_eq!(z.to_string(), "(x1 + x2) # * - x1 # *[ d1[] ]");
    }
}
