//! Command-line front end. Every subcommand parses its inputs, makes one
//! library call and renders the result.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::Action;
use crate::connection::Connection;
use crate::derivation::{Derivation, Label, Ring};
use crate::error::{Error, Result};
use crate::hopf::{coproduct_sum, mul, Antipode, TreeSum, TreeTensorSum};
use crate::parse::{parse_derivation, parse_polynomial, parse_smash, parse_tree_sum};
use crate::poly::Polynomial;
use crate::smash::{alpha_b, SmashElement};
use crate::verify::{self, Report, Suite};

#[derive(Debug, Parser)]
#[command(name = "lotree", version, about = "Labeled ordered trees acting on polynomial rings")]
pub struct Cli {
    /// Number of ring variables; inferred from the inputs when omitted.
    #[arg(long, global = true)]
    pub vars: Option<usize>,

    /// `flat` or a path to a connection file.
    #[arg(long, global = true, default_value = "flat")]
    pub connection: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Corrupt the connection used by `verify` (negative control).
    #[arg(long, global = true, hide = true)]
    pub inject_fault: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "json-like")]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Hopf,
    Connection,
    Action,
    Smash,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product of two tree combinations.
    Mul { left: String, right: String },
    /// Coproduct of a tree combination.
    Comul { tree: String },
    /// Antipode of a tree combination.
    Antipode { tree: String },
    /// Action of a tree combination on a polynomial.
    Act { tree: String, poly: String },
    /// Lie bracket of two derivations.
    Bracket { left: String, right: String },
    /// Rewrite a smash element into basis labels.
    Rewrite { element: String },
    /// Decide membership in the kernel of the rewrite.
    Member { element: String },
    /// Run the invariant sweeps.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

/// Result of a run: text for stdout and the exit code.
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

#[derive(Serialize)]
struct TreeRecord {
    coefficient: String,
    tree: String,
}

#[derive(Serialize)]
struct TensorRecord {
    coefficient: String,
    left: String,
    right: String,
}

#[derive(Serialize)]
struct MonomialRecord {
    coefficient: String,
    monomial: String,
}

#[derive(Serialize)]
struct PartialRecord {
    index: usize,
    coefficient: String,
}

fn tree_sum_json(a: &TreeSum<Label>) -> Value {
    let terms: Vec<TreeRecord> = a
        .iter()
        .map(|(t, c)| TreeRecord {
            coefficient: c.to_string(),
            tree: t.to_string(),
        })
        .collect();
    json!({ "terms": terms })
}

fn tensor_json(a: &TreeSum<Label>) -> Value {
    let d: TreeTensorSum<Label> = coproduct_sum(a);
    let terms: Vec<TensorRecord> = d
        .iter()
        .map(|((l, r), c)| TensorRecord {
            coefficient: c.to_string(),
            left: l.to_string(),
            right: r.to_string(),
        })
        .collect();
    json!({ "terms": terms })
}

fn poly_json(p: &Polynomial) -> Value {
    let terms: Vec<MonomialRecord> = p
        .sorted_terms()
        .into_iter()
        .map(|(m, c)| MonomialRecord {
            coefficient: c.to_string(),
            monomial: m.to_string(),
        })
        .collect();
    json!({ "terms": terms })
}

fn derivation_json(d: &Derivation) -> Value {
    let terms: Vec<PartialRecord> = d
        .terms()
        .map(|(i, p)| PartialRecord {
            index: i + 1,
            coefficient: p.to_string(),
        })
        .collect();
    json!({ "terms": terms })
}

fn smash_json(z: &SmashElement) -> Value {
    let terms: Vec<TreeRecord> = z
        .iter()
        .map(|(t, p)| TreeRecord {
            coefficient: p.to_string(),
            tree: t.to_string(),
        })
        .collect();
    json!({ "terms": terms })
}

fn render(format: Format, text: String, value: impl FnOnce() -> Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value()).expect("json serializes"),
    }
}

fn tree_sum_width(a: &TreeSum<Label>) -> usize {
    a.keys()
        .flat_map(|t| t.labels().map(|l| l.derivation().width()).collect::<Vec<_>>())
        .max()
        .unwrap_or(0)
}

impl Cli {
    fn ring(&self) -> Option<Ring> {
        self.vars.map(Ring::new)
    }

    /// The connection named by `--connection`, checked against `--vars` and
    /// the width of the inputs.
    fn connection_for(&self, width: usize) -> Result<Connection> {
        let nvars = self.vars.unwrap_or(width);
        if self.connection == "flat" {
            return Ok(Connection::flat(nvars));
        }
        let conn = Connection::load(&PathBuf::from(&self.connection))?;
        if let Some(n) = self.vars {
            if n != conn.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: conn.nvars(),
                    found: n,
                });
            }
        }
        Ring::new(conn.nvars()).check_width(width)?;
        Ok(conn)
    }

    pub fn execute(&self) -> Result<Outcome> {
        let ring = self.ring();
        let ok = |output: String| Ok(Outcome { output, code: 0 });
        match &self.command {
            Command::Mul { left, right } => {
                let a = parse_tree_sum(left, ring)?;
                let b = parse_tree_sum(right, ring)?;
                let p = mul(&a, &b);
                ok(render(self.format, p.to_string(), || tree_sum_json(&p)))
            }
            Command::Comul { tree } => {
                let a = parse_tree_sum(tree, ring)?;
                ok(render(self.format, coproduct_sum(&a).to_string(), || tensor_json(&a)))
            }
            Command::Antipode { tree } => {
                let a = parse_tree_sum(tree, ring)?;
                let s = Antipode::new().of_sum(&a);
                ok(render(self.format, s.to_string(), || tree_sum_json(&s)))
            }
            Command::Act { tree, poly } => {
                let a = parse_tree_sum(tree, ring)?;
                let s = parse_polynomial(poly, ring)?;
                let conn = self.connection_for(tree_sum_width(&a).max(s.width()))?;
                let result = Action::new(&conn).act_sum(&a, &s);
                ok(render(self.format, result.to_string(), || poly_json(&result)))
            }
            Command::Bracket { left, right } => {
                let d = parse_derivation(left, ring)?;
                let e = parse_derivation(right, ring)?;
                let b = d.bracket(&e);
                ok(render(self.format, b.to_string(), || derivation_json(&b)))
            }
            Command::Rewrite { element } | Command::Member { element } => {
                let z = parse_smash(element, ring)?;
                let conn = self.connection_for(z.width())?;
                let rewritten = alpha_b(&Action::new(&conn), &z);
                if matches!(self.command, Command::Rewrite { .. }) {
                    ok(render(self.format, rewritten.to_string(), || smash_json(&rewritten)))
                } else {
                    let member = rewritten.is_zero();
                    ok(render(self.format, member.to_string(), || json!({ "member": member })))
                }
            }
            Command::Verify { suite } => {
                let suites: Vec<Suite> = match suite {
                    SuiteArg::Hopf => vec![Suite::Hopf],
                    SuiteArg::Connection => vec![Suite::Connection],
                    SuiteArg::Action => vec![Suite::Action],
                    SuiteArg::Smash => vec![Suite::Smash],
                    SuiteArg::All => Suite::ALL.to_vec(),
                };
                let opts = verify::Options {
                    seed: self.seed,
                    inject_fault: self.inject_fault,
                };
                let reports: Vec<Report> = suites.into_iter().map(|s| verify::run(s, opts)).collect();
                let passed = reports.iter().all(Report::passed);
                let text = reports.iter().map(ToString::to_string).collect::<String>();
                let text = format!("{}{}", text, if passed { "all checks passed" } else { "some checks FAILED" });
                let output = render(self.format, text, || json!({ "passed": passed, "suites": reports }));
                Ok(Outcome {
                    output,
                    code: if passed { 0 } else { 1 },
                })
            }
        }
    }
}

/// Parse arguments, run, print; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.execute() {
        Ok(out) => {
            println!("{}", out.output);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Convenience for tests: run and capture stdout text or the error.
pub fn run_to_string<I, T>(args: I) -> std::result::Result<Outcome, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    cli.execute().map_err(|e: Error| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> String {
        let mut full = vec!["lotree"];
        full.extend_from_slice(args);
        run_to_string(full).unwrap_or_else(|e| panic!("{e}")).output
    }

    #[test]
    fn hopf_commands() {
        assert_eq!(run(&["mul", "*[ d1[] ]", "*[ d2[] ]"]), "1 * *[ d1[], d2[] ] + 1 * *[ d2[ d1[] ] ]");
        assert_eq!(run(&["comul", "*"]), "1 * (* ⊗ *)");
        assert_eq!(run(&["antipode", "*[ d1[] ]"]), "-1 * *[ d1[] ]");
    }

    #[test]
    fn act_commands() {
        assert_eq!(run(&["act", "*[ d1[] ]", "x1^2"]), "2*x1");
        assert_eq!(run(&["act", "*[ d1[ d1[] ] ]", "x1^3", "--connection", "flat"]), "0");
    }

    #[test]
    fn rewrite_and_member() {
        assert_eq!(run(&["rewrite", "1 # *[ (x1)*d2[] ]"]), "x1 # *[ d2[] ]");
        assert_eq!(run(&["member", "1 # *[ d1[] ]"]), "false");
        assert_eq!(run(&["member", "1 # *[ (x1)*d1[] ] - x1 # *[ d1[] ]"]), "true");
    }

    #[test]
    fn bracket_command() {
        assert_eq!(run(&["bracket", "d1", "(x1)*d2"]), "d2");
    }

    #[test]
    fn json_output() {
        let out = run(&["--format", "json-like", "mul", "*[ d1[] ]", "*"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"][0]["tree"], "*[ d1[] ]");
        assert_eq!(v["terms"][0]["coefficient"], "1");
    }

    #[test]
    fn errors() {
        assert!(run_to_string(["lotree", "mul", "*[ d1[ ]", "*"]).is_err());
        assert!(run_to_string(["lotree", "--vars", "1", "act", "*[ d2[] ]", "x1"]).is_err());
    }
}
