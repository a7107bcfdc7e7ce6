//! Exact arithmetic in cyclotomic fields, the decomposition-group model of
//! ℚ_l-rationality, and the function field in the central variable T.

mod galois;
mod number;
mod poly;

pub use galois::{decomposition_group, galois_apply, trace_to_fixed, DecompGroup, GaloisAut};
pub use number::{as_i64, cyclotomic_coeffs, cyclotomic_polynomial, ratio, CycNumber};
pub use poly::{Poly, RationalFunction};
