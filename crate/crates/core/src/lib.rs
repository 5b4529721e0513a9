//! Hopf algebra of labeled ordered trees and its action on polynomial rings.

pub mod action;
pub mod cli;
pub mod connection;
pub mod derivation;
pub mod diffop;
pub mod error;
pub mod hopf;
pub mod parse;
pub mod poly;
pub mod smash;
pub mod tree;
pub mod verify;

pub use action::{act_closed_form, Action};
pub use connection::{induced_connection, Connection, CovariantDerivative, InducedConnection};
pub use derivation::{hall_fields, Derivation, Label, Ring};
pub use diffop::DiffOperator;
pub use error::{Error, Result};
pub use hopf::{antipode, coproduct, counit, gl_mul, mul, LinComb, TreeSum, TreeTensorSum};
pub use poly::{Monomial, Polynomial, Rational};
pub use smash::{SmashElement, SmashTensorBi, SmashTensorLeft};
pub use tree::{canonical_key, LabeledTree, NodePath, Tree};
