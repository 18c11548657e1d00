//! Exact multivariate polynomial arithmetic over Gaussian rationals and the
//! elimination / numeric-evaluation primitives built on it.

pub mod dd;
pub mod elim;
pub mod mpoly;
pub mod numeric;
pub mod parse;
mod print;
pub mod roots;
pub mod scalar;

pub use elim::{
    discriminant_in, divide_out_maximal, divides, exact_div, gcd, gcd_many, is_squarefree,
    resultant, split_variable_blocks, squarefree_part, ElimError,
};
pub use mpoly::{MPoly, Mono, VarSet};
pub use numeric::{eval_complex, CPoint, CPoly, Certified};
pub use parse::{parse_poly, ParseError};
pub use scalar::{rat, rat_int, GaussRat, Rat};
