//! Sharp constants in multivariate Markov–Bernstein–Nikolskii type inequalities
//! on polars of centrally symmetric convex bodies.

pub mod error;
pub mod exponent;
pub mod constants;
pub mod entire;
pub mod geometry;
mod lp;
pub mod poly;
pub mod quadrature;
pub mod runner;
pub mod verify;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use geometry::{ConvexBody, Direction, Shape};
pub use constants::{
    different_metrics_constant, estimate_limit, polynomial_constant, trigonometric_constant, ConstantKind,
    ExtremalProblem, NikolskiiProblem, SharpConstantResult, TrigProblem,
};
pub use poly::{DiffOperator, MultiIndex, Polynomial};
pub use runner::{run, RunConfig, RunReport};
