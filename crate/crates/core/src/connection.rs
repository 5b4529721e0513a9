//! Connections on the module of polynomial derivations.
//!
//! A [`Connection`] is given by its Christoffel table `∇_{∂i} ∂j` and
//! extended to arbitrary fields `E = Σ e_i ∂i`, `F = Σ f_j ∂j` by
//!
//! ```text
//! ∇_E F = Σ_j E(f_j) ∂j + Σ_{i,j} e_i f_j ∇_{∂i} ∂j
//! ```
//!
//! which is additive in both slots, `R`-linear in `E` and Leibniz in `F`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::derivation::{Derivation, Ring};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Anything that evaluates `∇_E F`.
pub trait CovariantDerivative {
    fn nabla(&self, e: &Derivation, f: &Derivation) -> Derivation;
}

impl<C: CovariantDerivative + ?Sized> CovariantDerivative for &C {
    fn nabla(&self, e: &Derivation, f: &Derivation) -> Derivation {
        (**self).nabla(e, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    nvars: usize,
    gamma: BTreeMap<(usize, usize), Derivation>,
}

impl Connection {
    /// The flat connection, `∇_{∂i} ∂j = 0`.
    pub fn flat(nvars: usize) -> Self {
        Connection {
            nvars,
            gamma: BTreeMap::new(),
        }
    }

    /// Build from zero-based table entries `((i, j), ∇_{∂i} ∂j)`.
    pub fn from_table(
        nvars: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Derivation)>,
    ) -> Result<Self> {
        let ring = Ring::new(nvars);
        let mut gamma = BTreeMap::new();
        for ((i, j), d) in entries {
            ring.check_width(i.max(j) + 1)?;
            ring.check_derivation(&d)?;
            if !d.is_zero() {
                gamma.insert((i, j), d);
            }
        }
        Ok(Connection { nvars, gamma })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn gamma(&self, i: usize, j: usize) -> Derivation {
        self.gamma.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Derivation)> {
        self.gamma.iter().map(|(k, d)| (*k, d))
    }

    /// `∇_E F` with both fields checked against the ring dimension.
    pub fn checked_nabla(&self, e: &Derivation, f: &Derivation) -> Result<Derivation> {
        let ring = Ring::new(self.nvars);
        ring.check_derivation(e)?;
        ring.check_derivation(f)?;
        Ok(self.nabla(e, f))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConnectionFile =
            serde_json::from_str(text).map_err(|e| Error::ConnectionFile(e.to_string()))?;
        file.into_connection()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConnectionFile(format!("{}: {e}", path.display())))?;
        Connection::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = ConnectionFile {
            vars: self.nvars,
            entries: self
                .gamma
                .iter()
                .map(|((i, j), d)| ConnectionEntry {
                    i: i + 1,
                    j: j + 1,
                    derivation: d.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("connection serializes")
    }
}

impl CovariantDerivative for Connection {
    fn nabla(&self, e: &Derivation, f: &Derivation) -> Derivation {
        let mut out = Derivation::zero();
        for (j, fj) in f.terms() {
            out.add_term(j, e.apply(fj));
        }
        if self.gamma.is_empty() {
            return out;
        }
        for (i, ei) in e.terms() {
            for (j, fj) in f.terms() {
                if let Some(g) = self.gamma.get(&(i, j)) {
                    out = &out + &g.scale(&(ei * fj));
                }
            }
        }
        out
    }
}

/// On-disk connection: ring dimension and one-based table entries.
/// Omitted pairs are zero; the flat connection is the empty table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionFile {
    pub vars: usize,
    #[serde(default)]
    pub entries: Vec<ConnectionEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionEntry {
    pub i: usize,
    pub j: usize,
    pub derivation: String,
}

impl ConnectionFile {
    pub fn into_connection(self) -> Result<Connection> {
        let ring = Ring::new(self.vars);
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            if e.i == 0 || e.j == 0 {
                return Err(Error::ConnectionFile("indices are one-based".into()));
            }
            let d = crate::parse::parse_derivation(&e.derivation, Some(ring))?;
            entries.push(((e.i - 1, e.j - 1), d));
        }
        Connection::from_table(self.vars, entries)
    }
}

/// The connection under which tree actions reduce to iterated partial
/// derivatives of label coefficients:
/// `∇_E F = Σ_{μ,ν} e_μ (∂f_ν/∂x_μ) ∂ν`.
///
/// Evaluated directly from that formula rather than through a table.
#[derive(Debug, Clone, Default)]
pub struct InducedConnection {
    labels: Vec<Derivation>,
}

impl InducedConnection {
    pub fn labels(&self) -> &[Derivation] {
        &self.labels
    }

    /// `∇_{E_i} E_j` for the stored labels.
    pub fn pair(&self, i: usize, j: usize) -> Derivation {
        self.nabla(&self.labels[i], &self.labels[j])
    }
}

pub fn induced_connection(labels: &[Derivation]) -> InducedConnection {
    InducedConnection {
        labels: labels.to_vec(),
    }
}

impl CovariantDerivative for InducedConnection {
    fn nabla(&self, e: &Derivation, f: &Derivation) -> Derivation {
        let mut out = Derivation::zero();
        for (mu, r_mu) in e.terms() {
            for (nu, r_nu) in f.terms() {
                let d = r_nu.partial(mu);
                if !d.is_zero() {
                    out.add_term(nu, r_mu * &d);
                }
            }
        }
        out
    }
}

/// One sampled instance for [`axiom_check`]: fields `E1, E2, F1, F2` and a
/// ring element `f`.
#[derive(Debug, Clone)]
pub struct AxiomSample {
    pub e1: Derivation,
    pub e2: Derivation,
    pub f1: Derivation,
    pub f2: Derivation,
    pub r: Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionAxiom {
    AdditiveFirst,
    AdditiveSecond,
    LinearFirst,
    LeibnizSecond,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<(usize, ConnectionAxiom)>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the four connection axioms on each sample; violations are listed by
/// sample index.
pub fn axiom_check<C: CovariantDerivative + ?Sized>(conn: &C, samples: &[AxiomSample]) -> AxiomReport {
    let mut report = AxiomReport::default();
    for (k, s) in samples.iter().enumerate() {
        let lhs = conn.nabla(&(&s.e1 + &s.e2), &s.f1);
        let rhs = &conn.nabla(&s.e1, &s.f1) + &conn.nabla(&s.e2, &s.f1);
        if lhs != rhs {
            report.violations.push((k, ConnectionAxiom::AdditiveFirst));
        }
        let lhs = conn.nabla(&s.e1, &(&s.f1 + &s.f2));
        let rhs = &conn.nabla(&s.e1, &s.f1) + &conn.nabla(&s.e1, &s.f2);
        if lhs != rhs {
            report.violations.push((k, ConnectionAxiom::AdditiveSecond));
        }
        let lhs = conn.nabla(&s.e1.scale(&s.r), &s.f1);
        let rhs = conn.nabla(&s.e1, &s.f1).scale(&s.r);
        if lhs != rhs {
            report.violations.push((k, ConnectionAxiom::LinearFirst));
        }
        let lhs = conn.nabla(&s.e1, &s.f1.scale(&s.r));
        let rhs = &conn.nabla(&s.e1, &s.f1).scale(&s.r) + &s.f1.scale(&s.e1.apply(&s.r));
        if lhs != rhs {
            report.violations.push((k, ConnectionAxiom::LeibnizSecond));
        }
        report.checked += 1;
    }
    report
}

/// Wraps a connection and adds `E` to every `∇_E F`, which breaks
/// additivity in the second slot. Used as a negative control.
#[derive(Debug, Clone)]
pub struct Faulty<C>(pub C);

impl<C: CovariantDerivative> CovariantDerivative for Faulty<C> {
    fn nabla(&self, e: &Derivation, f: &Derivation) -> Derivation {
        &self.0.nabla(e, f) + e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::hall_fields;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i - 1)
    }

    fn d(i: usize) -> Derivation {
        Derivation::partial(i - 1)
    }

    fn samples() -> Vec<AxiomSample> {
        vec![
            AxiomSample {
                e1: &d(1) + &Derivation::term(x(2), 1),
                e2: Derivation::term(x(1).pow(2), 0),
                f1: Derivation::term(&x(1) * &x(2), 1),
                f2: &d(2) + &Derivation::term(x(1), 0),
                r: &x(1) + &x(2).pow(2),
            },
            AxiomSample {
                e1: d(2),
                e2: Derivation::term(x(1), 1),
                f1: Derivation::term(x(2), 0),
                f2: d(1),
                r: x(1),
            },
        ]
    }

    #[test]
    fn flat_on_partials_is_zero() {
        let c = Connection::flat(3);
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(c.nabla(&d(i), &d(j)).is_zero());
            }
        }
    }

    #[test]
    fn flat_leibniz_example() {
        let c = Connection::flat(2);
        assert_eq!(c.nabla(&d(1), &Derivation::term(x(1), 1)), d(2));
    }

    #[test]
    fn table_lookup() {
        let c = Connection::from_table(2, [((0, 0), d(2))]).unwrap();
        assert_eq!(c.nabla(&d(1), &d(1)), d(2));
        assert!(c.nabla(&d(2), &d(1)).is_zero());
    }

    #[test]
    fn dimension_checks() {
        assert!(Connection::from_table(2, [((0, 2), d(1))]).is_err());
        let c = Connection::flat(2);
        assert!(c.checked_nabla(&d(3), &d(1)).is_err());
    }

    #[test]
    fn induced_agrees_with_flat() {
        let ind = induced_connection(&[d(1), d(2)]);
        assert!(ind.pair(0, 1).is_zero());
        assert_eq!(ind.nabla(&d(1), &Derivation::term(x(1), 1)), d(2));
        let (e1, e2) = hall_fields();
        let flat = Connection::flat(8);
        let ind = induced_connection(&[e1.clone(), e2.clone()]);
        for (a, b) in [(&e1, &e2), (&e2, &e1), (&e2, &e2)] {
            assert_eq!(ind.nabla(a, b), flat.nabla(a, b));
        }
    }

    #[test]
    fn axioms_hold_for_tables() {
        assert!(axiom_check(&Connection::flat(2), &samples()).is_ok());
        let c = Connection::from_table(
            2,
            [((0, 0), d(2)), ((0, 1), Derivation::term(x(1), 0)), ((1, 1), &d(1) + &d(2))],
        )
        .unwrap();
        let rep = axiom_check(&c, &samples());
        assert_eq!(rep.checked, 2);
        assert!(rep.is_ok());
    }

    #[test]
    fn faulty_evaluator_is_caught() {
        let rep = axiom_check(&Faulty(Connection::flat(2)), &samples());
        assert!(!rep.is_ok());
        assert!(rep.violations.iter().any(|(_, a)| *a == ConnectionAxiom::AdditiveSecond));
    }

    #[test]
    fn json_round_trip() {
        let c = Connection::from_table(2, [((0, 1), Derivation::term(x(1), 0))]).unwrap();
        let back = Connection::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let flat = Connection::from_json(r#"{"vars": 3}"#).unwrap();
        assert!(flat.is_flat());
        assert!(Connection::from_json(r#"{"vars": 1, "entries": [{"i": 0, "j": 1, "derivation": "d1"}]}"#).is_err());
    }
}
