//! Character tables (Dixon's method) and the γ/Galois orbit invariants of
//! irreducible characters of H.

mod orbits;
mod table;

pub use orbits::{
    conj_action, galois_conjugate, galois_orbits, galois_permutation, gamma_permutation, orbit_invariants,
    LDescriptor, OrbitContext, OrbitInvariants,
};
pub use table::{dixon_prime, Character, CharacterTable};

use crate::error::Result;
use crate::groups::FiniteGroup;

/// Irreducible characters of `h`, with exact values.
pub fn character_table(h: &FiniteGroup) -> Result<CharacterTable> {
    CharacterTable::new(h)
}
