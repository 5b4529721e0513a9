//! Seeded invariant sweeps behind `lotree verify`.
//!
//! Each suite runs a fixed family of identity checks and counts the cases
//! that fail. The sweeps here are sized to finish in seconds; the
//! acceptance tests run the exhaustive versions.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::{act_closed_form, monomial_factorizations, Action};
use crate::connection::{axiom_check, AxiomSample, Connection, CovariantDerivative, Faulty};
use crate::derivation::{Derivation, Label};
use crate::hopf::{
    antipode, convolve, coproduct, coproduct_left, coproduct_right, coproduct_sum, counit_tree, gl_mul, mul,
    swap_factors, tensor_mul, TreeSum,
};
use crate::poly::{rat, Monomial, Polynomial};
use crate::smash::{
    alpha_b, alpha_b_random, antiproduct_failures, bialgebra_failures, beta_b, i0_generator, smash_act,
    smash_mul, smash_psi, SmashElement,
};
use crate::tree::{enumerate_trees, shapes, LabeledTree, Node, Tree};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAIL" };
            write!(f, "{}: {} ... {} cases, {} failed: {status}", self.suite, c.name, c.cases, c.failures)?;
            if let Some(w) = &c.first_failure {
                write!(f, " (first: {w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hopf,
    Connection,
    Action,
    Smash,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Hopf, Suite::Connection, Suite::Action, Suite::Smash];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Connection => "connection",
            Suite::Action => "action",
            Suite::Smash => "smash",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub seed: u64,
    /// Replace the connection by one that adds `E` to every `∇_E F`.
    pub inject_fault: bool,
}

pub fn run(suite: Suite, opts: Options) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let checks = match suite {
        Suite::Hopf => hopf_suite(),
        Suite::Connection => connection_suite(&mut rng, opts.inject_fault),
        Suite::Action => action_suite(&mut rng, opts.inject_fault),
        Suite::Smash => smash_suite(&mut rng),
    };
    Report {
        suite: suite.name().to_string(),
        checks,
    }
}

/// Random inputs shared by the suites and the acceptance tests.
pub mod gen {
    use super::*;

    /// Polynomial in `x1..x_nvars` with small integer coefficients and total
    /// degree at most `max_degree`.
    pub fn poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, max_terms: usize) -> Polynomial {
        let mut p = Polynomial::zero();
        for _ in 0..rng.gen_range(1..=max_terms) {
            let mut exps = vec![0u32; nvars];
            let deg = rng.gen_range(0..=max_degree);
            for _ in 0..deg {
                exps[rng.gen_range(0..nvars)] += 1;
            }
            let c = rng.gen_range(-3i64..=3);
            p += &Polynomial::term(rat(c), Monomial::new(exps));
        }
        p
    }

    /// Nonzero derivation with coefficients from [`poly`].
    pub fn derivation<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32) -> Derivation {
        loop {
            let mut d = Derivation::zero();
            for i in 0..nvars {
                if rng.gen_bool(0.6) {
                    d.add_term(i, poly(rng, nvars, max_degree, 2));
                }
            }
            if !d.is_zero() {
                return d;
            }
        }
    }

    /// The labels `∂i` and `xj ∂i`.
    pub fn simple_labels(nvars: usize) -> Vec<Label> {
        let mut out: Vec<Label> = (0..nvars).map(Label::partial).collect();
        for i in 0..nvars {
            for j in 0..nvars {
                out.push(Label::new(Derivation::term(Polynomial::var(j), i)).expect("nonzero"));
            }
        }
        out
    }

    /// Uniform shape with `1..=max_nodes` nodes, then uniform labels.
    pub fn tree<R: Rng>(rng: &mut R, max_nodes: usize, labels: &[Label]) -> LabeledTree {
        let n = rng.gen_range(1..=max_nodes);
        let all = shapes(n);
        let (root_arity, arities) = all.choose(rng).expect("shapes exist").clone();
        let nodes = arities
            .into_iter()
            .map(|arity| Node {
                label: labels.choose(rng).expect("labels").clone(),
                arity,
            })
            .collect();
        Tree::from_preorder(root_arity, nodes).expect("valid shape")
    }

    /// Christoffel table with every entry nonzero and of degree ≤ 1.
    pub fn table<R: Rng>(rng: &mut R, nvars: usize) -> Connection {
        let mut entries = Vec::new();
        for i in 0..nvars {
            for j in 0..nvars {
                entries.push(((i, j), derivation(rng, nvars, 1)));
            }
        }
        Connection::from_table(nvars, entries).expect("in range")
    }

    pub fn smash_element<R: Rng>(rng: &mut R, nvars: usize, max_nodes: usize, labels: &[Label]) -> SmashElement {
        let mut z = SmashElement::zero();
        for _ in 0..rng.gen_range(1..=2) {
            z.add_term(tree(rng, max_nodes, labels), poly(rng, nvars, 1, 2));
        }
        z
    }
}

fn hopf_suite() -> Vec<Check> {
    let alphabet = [Label::partial(0), Label::partial(1)];
    let small = enumerate_trees(3, &alphabet);
    let all = enumerate_trees(4, &alphabet);
    let single = |t: &LabeledTree| TreeSum::single(t.clone());

    let mut assoc = Check::new("associativity");
    for a in &small {
        for b in &small {
            let ab = gl_mul(a, b);
            for c in &small {
                let left = mul(&ab, &single(c));
                let right = mul(&single(a), &gl_mul(b, c));
                assoc.record(left == right, || format!("{a} {b} {c}"));
            }
        }
    }

    let mut coassoc = Check::new("coassociativity");
    let mut cocomm = Check::new("cocommutativity");
    let mut counit = Check::new("counit");
    let mut anti = Check::new("antipode");
    for t in &all {
        coassoc.record(coproduct_left(t) == coproduct_right(t), || t.to_string());
        let d = coproduct(t);
        cocomm.record(swap_factors(&d) == d, || t.to_string());
        let mut left = TreeSum::zero();
        let mut right = TreeSum::zero();
        for ((a, b), c) in d.iter() {
            left.add_term(b.clone(), c * counit_tree(a));
            right.add_term(a.clone(), c * counit_tree(b));
        }
        counit.record(left == single(t) && right == single(t), || t.to_string());
        let eps = TreeSum::term(Tree::unit(), counit_tree(t));
        let s_id = convolve(&d, |x| antipode(x), |x| single(x));
        let id_s = convolve(&d, |x| single(x), |x| antipode(x));
        anti.record(s_id == eps && id_s == eps, || t.to_string());
    }

    let mut compat = Check::new("bialgebra compatibility");
    for a in &small {
        for b in &small {
            let lhs = coproduct_sum(&gl_mul(a, b));
            let rhs = tensor_mul(&coproduct(a), &coproduct(b));
            compat.record(lhs == rhs, || format!("{a} {b}"));
        }
    }
    vec![assoc, coassoc, cocomm, counit, compat, anti]
}

fn connection_suite(rng: &mut ChaCha8Rng, inject_fault: bool) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, nvars) in [("flat", 2usize), ("table", 2), ("table", 3)] {
        let conn = if name == "flat" {
            Connection::flat(nvars)
        } else {
            gen::table(rng, nvars)
        };
        let samples: Vec<AxiomSample> = (0..100)
            .map(|_| AxiomSample {
                e1: gen::derivation(rng, nvars, 2),
                e2: gen::derivation(rng, nvars, 2),
                f1: gen::derivation(rng, nvars, 2),
                f2: gen::derivation(rng, nvars, 2),
                r: gen::poly(rng, nvars, 2, 3),
            })
            .collect();
        let report = if inject_fault {
            axiom_check(&Faulty(conn), &samples)
        } else {
            axiom_check(&conn, &samples)
        };
        let mut check = Check::new(&format!("axioms ({name}, N={nvars})"));
        for k in 0..report.checked {
            let bad: Vec<_> = report.violations.iter().filter(|(i, _)| *i == k).collect();
            check.record(bad.is_empty(), || format!("sample {k}: {:?}", bad[0].1));
        }
        out.push(check);
    }
    out
}

fn action_suite(rng: &mut ChaCha8Rng, inject_fault: bool) -> Vec<Check> {
    let nvars = 2;
    let labels = gen::simple_labels(nvars);
    let table = gen::table(rng, nvars);
    let faulty = Faulty(table.clone());
    let conn: &dyn CovariantDerivative = if inject_fault { &faulty } else { &table };
    let a = Action::new(conn);

    let mut module = Check::new("module axiom");
    let mut psi_agree = Check::new("psi agrees with action");
    let mut module_alg = Check::new("module algebra");
    let mut leib = Check::new("leibnitz");
    let mut coh = Check::new("coherence");
    let mut det = Check::new("determination");
    for _ in 0..60 {
        let t1 = gen::tree(rng, 3, &labels);
        let t2 = gen::tree(rng, 3, &labels);
        let s = gen::poly(rng, nvars, 3, 3);
        let prod = gl_mul(&t1, &t2);
        module.record(a.act_sum(&prod, &s) == a.act(&t1, &a.act(&t2, &s)), || format!("{t1} {t2} {s}"));
        psi_agree.record(a.psi(&t1).apply(&s) == a.act(&t1, &s), || format!("{t1} {s}"));

        let p = gen::poly(rng, nvars, 2, 2);
        let q = gen::poly(rng, nvars, 2, 2);
        let mut rhs = Polynomial::zero();
        for ((l, r), c) in coproduct(&t1).iter() {
            rhs += &(&a.act(l, &p) * &a.act(r, &q)).scale(c);
        }
        module_alg.record(a.act(&t1, &(&p * &q)) == rhs, || format!("{t1} {p} {q}"));

        for path in t1.paths() {
            let label = t1.label_at(&path).expect("own path").derivation().clone();
            for (r, e) in monomial_factorizations(&label) {
                let (l, rr) = a.leibnitz_identity(&t1, &path, &r, &e, &s).expect("valid factorization");
                leib.record(l == rr, || format!("{t1} at {:?} with {r}", path.0));
            }
            let (l, rr) = a.coherence_identity(&t1, &path, &s).expect("own path");
            coh.record(l == rr, || format!("{t1} at {:?}", path.0));
        }
        det.record(a.act_determined(&t1, &s) == a.act(&t1, &s), || format!("{t1} {s}"));
    }

    let mut closed = Check::new("closed form under induced connection");
    let flat = Connection::flat(nvars);
    let fa = Action::new(&flat);
    for _ in 0..40 {
        let t = gen::tree(rng, 4, &labels);
        let s = gen::poly(rng, nvars, 3, 3);
        closed.record(act_closed_form(&t, &s) == fa.act(&t, &s), || format!("{t} {s}"));
    }
    vec![module, psi_agree, module_alg, leib, coh, det, closed]
}

fn smash_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let nvars = 2;
    let labels = gen::simple_labels(nvars);
    let table = gen::table(rng, nvars);
    let a = Action::new(&table);

    let mut assoc = Check::new("associativity and unit");
    let mut hom = Check::new("psi is multiplicative");
    let mut bialg = Check::new("R/k-bialgebra axioms");
    let mut anti = Check::new("antiproduct axioms");
    for _ in 0..25 {
        let b = gen::smash_element(rng, nvars, 3, &labels);
        let c = gen::smash_element(rng, nvars, 3, &labels);
        let d = gen::smash_element(rng, nvars, 2, &labels);
        let bc = smash_mul(&a, &b, &c);
        let ok = smash_mul(&a, &bc, &d) == smash_mul(&a, &b, &smash_mul(&a, &c, &d))
            && smash_mul(&a, &SmashElement::one(), &b) == b
            && smash_mul(&a, &b, &SmashElement::one()) == b;
        assoc.record(ok, || format!("{b} | {c} | {d}"));
        hom.record(smash_psi(&a, &bc) == smash_psi(&a, &b).compose(&smash_psi(&a, &c)), || format!("{b} | {c}"));
        let r = gen::poly(rng, nvars, 1, 2);
        let f = bialgebra_failures(&a, &b, &c, &r);
        bialg.record(f.is_empty(), || format!("{b} | {c}: {f:?}"));
        let f = antiproduct_failures(&a, &b, &r);
        anti.record(f.is_empty(), || format!("{b}: {f:?}"));
    }

    let mut order = Check::new("alpha order independence");
    let mut factor = Check::new("action factors through alpha");
    let mut inverse = Check::new("alpha after beta");
    let mut kernel = Check::new("generators in kernel");
    for _ in 0..25 {
        let z = gen::smash_element(rng, nvars, 4, &labels);
        let base = alpha_b(&a, &z);
        let shuffled = alpha_b_random(&a, &z, rng);
        order.record(base == shuffled, || z.to_string());
        let s = gen::poly(rng, nvars, 3, 3);
        factor.record(smash_act(&a, &z, &s) == smash_act(&a, &base, &s), || format!("{z} on {s}"));
        inverse.record(alpha_b(&a, &beta_b(&base)) == base, || base.to_string());

        let t = gen::tree(rng, 4, &labels);
        let paths = t.paths();
        if let Some(path) = paths.choose(rng) {
            let label = t.label_at(path).expect("own path").derivation().clone();
            for (r, e) in monomial_factorizations(&label) {
                let g = i0_generator(&a, &t, path, &r, &e).expect("valid factorization");
                kernel.record(alpha_b(&a, &g).is_zero(), || format!("{t} at {:?}", path.0));
            }
        }
    }
    vec![assoc, hom, bialg, anti, order, factor, inverse, kernel]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for suite in Suite::ALL {
            let report = run(suite, Options::default());
            assert!(report.passed(), "{report}");
            assert!(report.checks.iter().all(|c| c.cases > 0), "{report}");
        }
    }

    #[test]
    fn fault_is_reported() {
        let opts = Options {
            seed: 3,
            inject_fault: true,
        };
        assert!(!run(Suite::Connection, opts).passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let opts = Options {
            seed: 7,
            inject_fault: false,
        };
        let a = run(Suite::Smash, opts).to_string();
        let b = run(Suite::Smash, opts).to_string();
        assert_eq!(a, b);
    }
}
