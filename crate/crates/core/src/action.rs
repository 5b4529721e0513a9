//! The action of labeled trees on `Q[x1..xN]` driven by a connection.
//!
//! A tree whose root has one child acts as a derivation. For
//! `u(E; T1,…,Tk)` the children are first collapsed to `v(F_i)` with
//! `F_i` their own derivations, then
//!
//! ```text
//! u(E; v(F1))            ↦ ∇_{F1} E
//! u(E; v(F1),…,v(Fk))    ↦ ∇_{F1} G − Σ_{i≥2} u(E; v(F2),…,v(∇_{F1} F_i),…,v(Fk))
//! ```
//!
//! where `G` is the derivation of `u(E; v(F2),…,v(Fk))`. A general tree
//! `t(T1,…,Tm)` is peeled one branch at a time using
//! `T1 · t(T2,…,Tm) = T + Σ_j V_j`.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::connection::CovariantDerivative;
use crate::derivation::{Derivation, Label};
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::hopf::{coproduct, gl_mul, TreeSum};
use crate::poly::{Monomial, Polynomial};
use crate::tree::{LabeledTree, NodePath, Tree};

/// Tree action for a fixed connection, with memo tables for the
/// derivations and operators of visited trees.
pub struct Action<'c> {
    conn: &'c dyn CovariantDerivative,
    derivations: RefCell<HashMap<LabeledTree, Derivation>>,
    operators: RefCell<HashMap<LabeledTree, DiffOperator>>,
}

impl<'c> Action<'c> {
    pub fn new(conn: &'c dyn CovariantDerivative) -> Self {
        Action {
            conn,
            derivations: RefCell::new(HashMap::new()),
            operators: RefCell::new(HashMap::new()),
        }
    }

    pub fn connection(&self) -> &dyn CovariantDerivative {
        self.conn
    }

    pub fn nabla(&self, e: &Derivation, f: &Derivation) -> Derivation {
        self.conn.nabla(e, f)
    }

    /// The derivation by which a tree with a single root child acts.
    pub fn as_derivation(&self, t: &LabeledTree) -> Result<Derivation> {
        if t.root_arity() != 1 {
            return Err(Error::NotSingleChild(t.root_arity()));
        }
        Ok(self.derivation_of(t))
    }

    fn derivation_of(&self, t: &LabeledTree) -> Derivation {
        if let Some(d) = self.derivations.borrow().get(t) {
            return d.clone();
        }
        let label = t.label_at(&NodePath::from([0])).expect("single child").clone();
        let below = t.subtree_at(&NodePath::from([0])).expect("single child");
        let mut fs = Vec::with_capacity(below.root_arity());
        for b in below.branches() {
            fs.push(self.derivation_of(&b));
        }
        let d = self.brush(&label, &fs);
        self.derivations.borrow_mut().insert(t.clone(), d.clone());
        d
    }

    /// Derivation of `u(label; v(F1),…,v(Fk))`, through the tree memo.
    fn brush(&self, label: &Label, fs: &[Derivation]) -> Derivation {
        if fs.is_empty() {
            return label.derivation().clone();
        }
        // Multilinear in the F slots: a zero field kills the tree.
        let Some(leaves) = fs
            .iter()
            .map(|f| Label::new(f.clone()).ok().map(Tree::v))
            .collect::<Option<Vec<_>>>()
        else {
            return Derivation::zero();
        };
        let key = Tree::u(label.clone(), &leaves);
        if let Some(d) = self.derivations.borrow().get(&key) {
            return d.clone();
        }
        let f1 = &fs[0];
        let rest = &fs[1..];
        let d = if rest.is_empty() {
            self.conn.nabla(f1, label.derivation())
        } else {
            let g = self.brush(label, rest);
            let mut d = self.conn.nabla(f1, &g);
            for i in 0..rest.len() {
                let mut swapped = rest.to_vec();
                swapped[i] = self.conn.nabla(f1, &rest[i]);
                d = &d - &self.brush(label, &swapped);
            }
            d
        };
        self.derivations.borrow_mut().insert(key, d.clone());
        d
    }

    pub fn act(&self, t: &LabeledTree, s: &Polynomial) -> Polynomial {
        let mut memo = HashMap::new();
        self.act_memo(t, s, &mut memo)
    }

    fn act_memo(
        &self,
        t: &LabeledTree,
        s: &Polynomial,
        memo: &mut HashMap<LabeledTree, Polynomial>,
    ) -> Polynomial {
        if t.is_unit() {
            return s.clone();
        }
        if let Some(p) = memo.get(t) {
            return p.clone();
        }
        let out = if t.root_arity() == 1 {
            self.derivation_of(t).apply(s)
        } else {
            let (first, rest, others) = peel(t);
            let inner = self.act_memo(&rest, s, memo);
            let mut out = self.derivation_of(&first).apply(&inner);
            for (v, c) in others.iter() {
                out -= &self.act_memo(v, s, memo).scale(c);
            }
            out
        };
        memo.insert(t.clone(), out.clone());
        out
    }

    pub fn act_sum(&self, a: &TreeSum<Label>, s: &Polynomial) -> Polynomial {
        let mut memo = HashMap::new();
        let mut out = Polynomial::zero();
        for (t, c) in a.iter() {
            out += &self.act_memo(t, s, &mut memo).scale(c);
        }
        out
    }

    /// The differential operator by which a tree acts.
    pub fn psi(&self, t: &LabeledTree) -> DiffOperator {
        if t.is_unit() {
            return DiffOperator::identity();
        }
        if let Some(op) = self.operators.borrow().get(t) {
            return op.clone();
        }
        let op = if t.root_arity() == 1 {
            DiffOperator::from_derivation(&self.derivation_of(t))
        } else {
            let (first, rest, others) = peel(t);
            let f1 = DiffOperator::from_derivation(&self.derivation_of(&first));
            let mut op = f1.compose(&self.psi(&rest));
            for (v, c) in others.iter() {
                op = &op - &self.psi(v).scale(c);
            }
            op
        };
        self.operators.borrow_mut().insert(t.clone(), op.clone());
        op
    }

    pub fn psi_sum(&self, a: &TreeSum<Label>) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (t, c) in a.iter() {
            out = &out + &self.psi(t).scale(c);
        }
        out
    }

    /// Both sides of the Leibnitz identity at the node `path`, whose label
    /// must equal `r·E`:
    /// `T·s` and `Σ_{(T_i)} (T_i(1)·r)(T(i, E, T_i(2))·s)`.
    pub fn leibnitz_identity(
        &self,
        t: &LabeledTree,
        path: &NodePath,
        r: &Polynomial,
        e: &Derivation,
        s: &Polynomial,
    ) -> Result<(Polynomial, Polynomial)> {
        let label = t.label_at(path)?;
        if *label.derivation() != e.scale(r) {
            return Err(Error::LabelMismatch);
        }
        let e_label = Label::new(e.clone())?;
        let below = t.subtree_at(path)?;
        let lhs = self.act(t, s);
        let mut rhs = Polynomial::zero();
        for ((a, b), c) in coproduct(&below).iter() {
            let left = self.act(a, r);
            if left.is_zero() {
                continue;
            }
            let grafted = t.graft(path, e_label.clone(), b)?;
            rhs += &(&left * &self.act(&grafted, s)).scale(c);
        }
        Ok((lhs, rhs))
    }

    /// `T·s` and `T(U|v(E_U))·s`, where `U` is the single-child tree formed
    /// by the node at `path` and everything below it. A zero `E_U` makes
    /// the replaced tree act as zero.
    pub fn coherence_identity(
        &self,
        t: &LabeledTree,
        path: &NodePath,
        s: &Polynomial,
    ) -> Result<(Polynomial, Polynomial)> {
        let label = t.label_at(path)?.clone();
        let below = t.subtree_at(path)?;
        let u = Tree::u(label, &[below]);
        let e_u = self.derivation_of(&u);
        let lhs = self.act(t, s);
        let rhs = match Label::new(e_u) {
            Ok(l) => self.act(&t.graft(path, l, &Tree::unit())?, s),
            Err(_) => Polynomial::zero(),
        };
        Ok((lhs, rhs))
    }

    /// `T·s` evaluated only from labels and `∇`: every branch is collapsed
    /// to its derivation and the resulting `t(v(F1),…,v(Fm))` is expanded
    /// through `v(F1)·t(v(F2),…) = t(v(F1),…) + Σ_k t(…, u(F_k; v(F1)), …)`.
    pub fn act_determined(&self, t: &LabeledTree, s: &Polynomial) -> Polynomial {
        let fs: Vec<Derivation> = t.branches().iter().map(|b| determined_field(self.conn, b)).collect();
        act_fields(self.conn, &fs, s)
    }
}

/// `(T1, t(T2,…,Tm), T1·t(T2,…,Tm) − T)`.
fn peel(t: &LabeledTree) -> (LabeledTree, LabeledTree, TreeSum<Label>) {
    let first = t.select_branches(|k| k == 0);
    let rest = t.select_branches(|k| k > 0);
    let mut prod = gl_mul(&first, &rest);
    let own = prod.coeff(t);
    debug_assert!(own == crate::poly::rat(1));
    prod.add_term(t.clone(), -own);
    (first, rest, prod)
}

fn determined_field(conn: &dyn CovariantDerivative, t: &LabeledTree) -> Derivation {
    let label = t.label_at(&NodePath::from([0])).expect("branch").derivation().clone();
    let below = t.subtree_at(&NodePath::from([0])).expect("branch");
    let fs: Vec<Derivation> = below.branches().iter().map(|b| determined_field(conn, b)).collect();
    brush_fields(conn, &label, &fs)
}

fn brush_fields(conn: &dyn CovariantDerivative, e: &Derivation, fs: &[Derivation]) -> Derivation {
    match fs {
        [] => e.clone(),
        [f1] => conn.nabla(f1, e),
        [f1, rest @ ..] => {
            let mut d = conn.nabla(f1, &brush_fields(conn, e, rest));
            for i in 0..rest.len() {
                let mut swapped = rest.to_vec();
                swapped[i] = conn.nabla(f1, &rest[i]);
                d = &d - &brush_fields(conn, e, &swapped);
            }
            d
        }
    }
}

fn act_fields(conn: &dyn CovariantDerivative, fs: &[Derivation], s: &Polynomial) -> Polynomial {
    match fs {
        [] => s.clone(),
        [f1, rest @ ..] => {
            let mut out = f1.apply(&act_fields(conn, rest, s));
            for k in 0..rest.len() {
                let mut swapped = rest.to_vec();
                swapped[k] = conn.nabla(f1, &rest[k]);
                out -= &act_fields(conn, &swapped, s);
            }
            out
        }
    }
}

/// Children of each non-root node and of the root, by preorder index.
fn child_lists(t: &LabeledTree) -> (Vec<usize>, Vec<Vec<usize>>) {
    let nodes = t.nodes();
    let mut children = vec![Vec::new(); nodes.len()];
    let mut root = Vec::new();
    // stack of (node, remaining child slots); None is the root
    let mut stack: Vec<(Option<usize>, usize)> = vec![(None, t.root_arity())];
    for (i, n) in nodes.iter().enumerate() {
        while stack.last().is_some_and(|(_, left)| *left == 0) {
            stack.pop();
        }
        let top = stack.last_mut().expect("well-formed preorder");
        top.1 -= 1;
        match top.0 {
            None => root.push(i),
            Some(p) => children[p].push(i),
        }
        stack.push((Some(i), n.arity));
    }
    (root, children)
}

/// The explicit multi-index formula for the action when `∇` is induced by
/// the labels: sum over an index `μ_i` for every non-root node of the
/// product of each node's `μ_i`-coefficient (the root contributes `s`),
/// differentiated by the indices of its children.
pub fn act_closed_form(t: &LabeledTree, s: &Polynomial) -> Polynomial {
    let (root, children) = child_lists(t);
    let labels: Vec<Vec<(usize, &Polynomial)>> =
        t.nodes().iter().map(|n| n.label.derivation().terms().collect()).collect();
    let mut choice = vec![0usize; labels.len()];
    let mut out = Polynomial::zero();
    closed_form_rec(0, &labels, &root, &children, s, &mut choice, &mut out);
    out
}

fn closed_form_rec(
    i: usize,
    labels: &[Vec<(usize, &Polynomial)>],
    root: &[usize],
    children: &[Vec<usize>],
    s: &Polynomial,
    choice: &mut Vec<usize>,
    out: &mut Polynomial,
) {
    if i < labels.len() {
        for k in 0..labels[i].len() {
            choice[i] = k;
            closed_form_rec(i + 1, labels, root, children, s, choice, out);
        }
        return;
    }
    let index_of = |c: &usize| labels[*c][choice[*c]].0;
    let multi = |cs: &[usize]| {
        let mut exps = Vec::new();
        for c in cs {
            let mu = index_of(c);
            if exps.len() <= mu {
                exps.resize(mu + 1, 0);
            }
            exps[mu] += 1;
        }
        Monomial::new(exps)
    };
    let mut prod = s.partial_multi(&multi(root));
    for (node, cs) in children.iter().enumerate() {
        if prod.is_zero() {
            return;
        }
        let coeff = labels[node][choice[node]].1;
        prod = &prod * &coeff.partial_multi(&multi(cs));
    }
    *out += &prod;
}

/// Every way to write `d = m·E` with `m` a monomial dividing all
/// coefficients, starting with `m = 1`.
pub fn monomial_factorizations(d: &Derivation) -> Vec<(Polynomial, Derivation)> {
    let content = d
        .terms()
        .filter_map(|(_, p)| p.monomial_content())
        .reduce(|a, b| a.gcd(&b))
        .unwrap_or_else(Monomial::one);
    content
        .divisors()
        .into_iter()
        .map(|m| {
            let e = Derivation::from_terms(
                d.terms().map(|(i, p)| (i, p.div_monomial(&m).expect("m divides content"))),
            );
            (Polynomial::monomial(m), e)
        })
        .collect()
}

pub fn as_derivation(t: &LabeledTree, conn: &dyn CovariantDerivative) -> Result<Derivation> {
    Action::new(conn).as_derivation(t)
}

pub fn act(t: &LabeledTree, s: &Polynomial, conn: &dyn CovariantDerivative) -> Polynomial {
    Action::new(conn).act(t, s)
}

pub fn act_sum(a: &TreeSum<Label>, s: &Polynomial, conn: &dyn CovariantDerivative) -> Polynomial {
    Action::new(conn).act_sum(a, s)
}

pub fn psi(t: &LabeledTree, conn: &dyn CovariantDerivative) -> DiffOperator {
    Action::new(conn).psi(t)
}
