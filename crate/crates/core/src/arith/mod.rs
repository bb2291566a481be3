//! Exact arithmetic: rationals, multivariate polynomials over the fixed
//! symbol universe, and the quadratic extension adjoining `A`.

mod ext;
mod poly;
mod rational;
mod scalar;
mod symbol;

pub use ext::{
    ext_arith, norm_poly, reduce_A, substitute, trace_poly, ArithOp, Bindings, ExtScalar,
};
pub use poly::{Monomial, MultiPoly};
pub use rational::{
    format_rational, from_f64, parse_rational, rat, ratio, rational_sqrt, to_f64, Rational,
};
pub use scalar::Scalar;
pub use symbol::{Symbol, NSYM};
