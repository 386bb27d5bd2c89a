//! Exact computer-algebra kernel: scalars, polynomials, differential forms
//! and the expression parser.

mod forms;
mod parse;
mod polynomial;
mod scalar;
mod variable;

pub use forms::{exterior_derivative, radial_integrate, wedge, wedge_trunc, OneForm, TwoForm};
pub use parse::{parse_polynomial, parse_variable, ParseContext};
pub use polynomial::{Monomial, Polynomial};
pub use scalar::GaussianRational;
pub use variable::Variable;
