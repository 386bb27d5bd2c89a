//! Exact coupled contact systems, horizontal germs and dimension bounds for
//! period domains.
//!
//! Everything is computed over the Gaussian rationals; there is no floating
//! point anywhere. Germs are polynomial jets of a configurable truncation
//! degree.

pub mod bounds;
pub mod contact;
mod error;
pub mod germs;
pub mod hodgedomain;
pub mod linalg;
pub mod nilalgebra;
pub mod par;
pub mod rigidity;
pub mod scalarforms;

pub use error::{Error, Result};
pub use hodgedomain::HodgeNumbers;
pub use par::Exec;
pub use scalarforms::{GaussianRational, OneForm, Polynomial, TwoForm, Variable};

/// Default truncation degree for germ charts and jet probes.
pub const DEFAULT_TRUNCATION: u32 = 4;
