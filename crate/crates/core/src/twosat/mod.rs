//! Fixed-parameter search in the number of new elements plus pages: guess
//! the pages of the new edges and the order of the new vertices, then solve
//! the remaining placement problem as 2-SAT.

mod encode;
mod fpt;
mod sat;

pub use encode::{decode_spine, encode_instance, Encoding, EndpointOrder, OrderVariableMap};
pub use fpt::solve_fpt_kappa_ell;
pub use sat::{solve_2sat, Lit, TwoSatFormula};
