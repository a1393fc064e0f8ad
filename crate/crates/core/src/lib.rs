//! Exact symbolic calculus in noncommutative worlds.
//!
//! Elements live in a free associative algebra over named generators with
//! exact scalar coefficients. A [`World`] adds commutation relations,
//! oriented as terminating rewrite rules, so equality of elements is decided
//! by comparing normal forms.

pub mod catalog;
pub mod coefficient;
pub mod discrete;
pub mod eval;
pub mod forms;
pub mod geometry;
pub mod oracle;
pub mod poly;
pub mod render;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod symbol;
pub mod syntax;
pub mod world;
pub mod world_file;

pub use coefficient::Coefficient;
pub use report::{CheckResult, Report};
pub use poly::{Poly, Word};
pub use rewrite::{RewriteError, RewriteSystem, Strategy};
pub use scalar::{Gaussian, Param, Scalar, ScalarError};
pub use symbol::{GeneratorId, Letter};
pub use syntax::{parse_expr, Expr, SyntaxError};
pub use world::{World, WorldError};
pub use world_file::{parse_world_file, render_world, WorldFileError};

/// Elements with exact Laurent-polynomial scalar coefficients.
pub type Element = Poly<Scalar>;

/// Elements with plain rational coefficients.
pub type RationalElement = Poly<num_rational::BigRational>;
