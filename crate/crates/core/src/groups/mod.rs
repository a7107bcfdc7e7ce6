//! Finite groups as multiplication tables, automorphisms, the truncation
//! G_fin = H ⋊ ℤ/l^m and elementary-group detection.

mod elementary;
mod finite;
mod spec;

pub use elementary::{is_q_elementary, verify_product, ElementaryData, QType};
pub use finite::{abelian, cyclic, heisenberg, permutation_group, semidirect, FiniteGroup};
pub use spec::{semidirect_truncation, GSpec, GroupAut, SubSpec};
