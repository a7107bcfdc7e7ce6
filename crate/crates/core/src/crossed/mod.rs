//! The truncated crossed product A = K(T)[H ⋊ ⟨γ⟩ : γ^{l^m} = T], its
//! central idempotents, two-sided ideals and centres.

mod element;
mod ideal;
mod idempotents;

pub use element::{alg_mul, AlgebraElement, CrossedAlgebra};
pub use ideal::{center_of, center_of_general, ideal_of, ideal_of_general, Center, Ideal};
pub use idempotents::{
    cyclic_orbit_representatives, idempotent_e_chi, idempotent_e_eta, idempotent_e_i, is_central, is_idempotent,
    rational_idempotents, CyclicCharacter,
};

pub(crate) use element::group_ring_mul;
pub(crate) use ideal::{echelon_cyc, layer_element};
pub(crate) use idempotents::e_eta_coeffs;
