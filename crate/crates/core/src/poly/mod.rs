//! Exact arithmetic: rationals, sparse polynomials, dense matrices.

pub mod jet;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod rational;
pub mod roots;

pub use jet::{arc_derivatives, ArcDerivatives, ArcEvaluator, Jet};
pub use matrix::RatMatrix;
pub use mpoly::{deglex_desc, monomials_of_degree, monomials_of_weighted_degree, MPoly, Monomial};
pub use parse::{parse_poly, parse_poly_owned, print_poly};
pub use rational::{int, parse_rational, rat, Rational};
pub use roots::{univariate_common_roots, CommonRoots};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("zero denominator at byte {pos}")]
    ZeroDenominator { pos: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    VarIndex { index: usize, arity: usize },
    #[error("expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable {0} was expected not to occur")]
    UnexpectedVariable(String),
    #[error("polynomials involve more than one variable")]
    NotUnivariate,
    #[error("all polynomials are zero: the solution set is not finite")]
    AllZero,
    #[error("base point is not in chart {chart}: its coordinate there must be 1")]
    NotInChart { chart: usize },
    #[error("arc moves the chart coordinate {chart}")]
    ArcMovesChart { chart: usize },
    #[error("arc direction is zero")]
    ZeroDirection,
}
