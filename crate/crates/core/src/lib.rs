pub mod error;
pub mod experiment;
mod family;
pub mod generate;
pub mod io;
mod graph;
pub mod matrix;
pub mod mpg;
pub mod outcome;
pub mod pseudolinear;
pub mod pseudoquadratic;
pub mod rounding;
pub mod scalar;

pub use error::{Error, Result};
pub use matrix::{TropMatrix, Typing};
pub use outcome::{Mode, NewtonMode, SolveOptions, SolveOutcome, Status, TraceEntry};
pub use scalar::{ExtScalar, Rational};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/semiring.md")]
    mod semiring {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/pseudolinear.md")]
    mod pseudolinear {}
    #[doc = include_str!("../../../book/src/newton.md")]
    mod newton {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/pseudoquadratic.md")]
    mod pseudoquadratic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
