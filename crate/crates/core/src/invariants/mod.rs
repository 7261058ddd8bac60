//! The bigraded chain complex, its homology and the 2-factor polynomial.

mod complex;
mod euler;
mod homology;
mod laurent;
pub mod linalg;

pub use complex::{build_complex, build_complex_from, cube_sign, label_string, BigradedComplex, Generator, QBlock, Ring};
pub use euler::{euler_check, two_factor_polynomial, EulerReport};
pub use homology::{homology, BigradedGroups, HomologyGroup};
pub use laurent::LaurentPoly;
