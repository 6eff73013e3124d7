//! Exact multivariate polynomials and rational functions over `Q` in a fixed
//! alphabet of named variables — the coefficient field of everything else.

mod mpoly;
mod parse;
mod rf;
mod var;

pub use mpoly::{linear, mpoly_arith, MPoly, Mono, PolyOp};
pub use parse::parse_ratfunc;
pub use rf::{ratfunc_arith, ratfunc_is_zero, RatFunc, RatOp, RfSum};
pub use var::{Var, VarContext};
