use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chars::{CharacterTable, LDescriptor, OrbitContext, OrbitInvariants};
use crate::crossed::{
    center_of, group_ring_mul, ideal_of, idempotent_e_chi, is_central, is_idempotent, AlgebraElement, CrossedAlgebra,
};
use crate::cyclo::{decomposition_group, CycNumber, GaloisAut};
use crate::error::Result;
use crate::groups::GSpec;
use crate::wedderburn::{failure, Check, VerificationResult};

pub const PAPER_ASSERTED: &str = "paper-asserted, not surrogate-verified";

/// A value read off the structure formulas rather than recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperAsserted<T> {
    pub value: T,
    pub status: &'static str,
}

impl<T> PaperAsserted<T> {
    fn new(value: T) -> Self {
        PaperAsserted {
            value,
            status: PAPER_ASSERTED,
        }
    }
}

/// Z(ε_χA) = L ⊗ 𝒬Γ^{w_χ}.
#[derive(Clone, Debug, Serialize)]
pub struct CenterDescriptor {
    pub field: LDescriptor,
    pub gamma_power: usize,
}

/// ℚ_l(η) ⊗ 𝒬Γ^{w_χ}.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingField {
    pub conductor: usize,
    pub gamma_power: usize,
}

/// The skew field as (ℚ_l(η)⊗𝒬Γ^{w_χ} / L⊗𝒬Γ^{w_χ}, σ, γ^{w_χ}).
#[derive(Clone, Debug, Serialize)]
pub struct CyclicPresentation {
    pub field_conductor: usize,
    pub field_degree: usize,
    pub fixed_field_degree: usize,
    pub generator: GaloisAut,
    pub gamma_power: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub orbit: OrbitInvariants,
    pub dim: usize,
    pub center: CenterDescriptor,
    pub center_dim: usize,
    pub chi_degree: usize,
    pub dim_over_center: usize,
    pub splitting_field: SplittingField,
    pub schur_index: Option<PaperAsserted<usize>>,
    pub matrix_degree: Option<PaperAsserted<usize>>,
    pub cyclic_presentation: Option<PaperAsserted<CyclicPresentation>>,
    pub form: String,
    pub provenance: Vec<String>,
    pub verified: Vec<Check>,
}

/// Structure report for the component of the γ-orbit `gamma_orbit`.
pub fn component_report(alg: &Arc<CrossedAlgebra>, ctx: &OrbitContext, gamma_orbit: &[usize]) -> Result<ComponentReport> {
    let e = idempotent_e_chi(alg, ctx, gamma_orbit)?;
    report_for(alg, ctx, gamma_orbit[0], &e)
}

fn report_for(alg: &Arc<CrossedAlgebra>, ctx: &OrbitContext, eta: usize, e: &AlgebraElement) -> Result<ComponentReport> {
    let spec = alg.spec();
    let inv = ctx.invariants(eta)?;
    let (w, v, fd, eta1) = (inv.w_chi, inv.v_chi, inv.field_degree, inv.eta_degree);
    let layers = spec.layers();
    let chi1 = w * eta1;

    let mut checks = VerificationResult::default();
    checks.push(Check::holds("ε_χ·ε_χ = ε_χ", is_idempotent(e)?));
    checks.push(Check::holds("ε_χ is central", is_central(e)?));
    if let Some(c) = checks.checks.iter().find(|c| !c.passed) {
        return Err(failure(c));
    }
    let ideal = ideal_of(e)?;
    let center = center_of(&ideal)?;
    checks.push(Check::equal(
        "dim ε_χA = l^m·v_χ·[ℚ_l(η):ℚ_l]·η(1)²",
        layers * v * fd * eta1 * eta1,
        ideal.dim,
    ));
    checks.push(Check::equal(
        "dim Z(ε_χA) = [L:ℚ_l]·l^m/w_χ",
        inv.l_descriptor.degree * layers / w,
        center.dim,
    ));
    checks.push(Check::equal(
        "dim ε_χA = χ(1)²·dim Z(ε_χA)",
        chi1 * chi1 * center.dim,
        ideal.dim,
    ));
    let stab_d = ctx.galois.iter().filter(|p| p[eta] == eta).count();
    checks.push(Check::equal(
        "|G₀| = w_χ/v_χ",
        (w / v) * stab_d,
        inv.l_descriptor.fixing_subgroup.len(),
    ));
    let checks = checks.into_result()?;

    let mut provenance = Vec::new();
    let (schur, degree, presentation, form) = if spec.is_pro_l() {
        let s = w / v;
        let p = CyclicPresentation {
            field_conductor: inv.eta_conductor,
            field_degree: fd,
            fixed_field_degree: inv.l_descriptor.degree,
            generator: inv.g0_generator,
            gamma_power: w,
        };
        let form = if s == 1 {
            "matrix ring over a field"
        } else {
            "matrix ring over a cyclic skew field"
        };
        (Some(s), Some(chi1 / s), Some(p), form)
    } else if spec.alpha().inner_witness(spec.h()).is_some() {
        (Some(1), Some(chi1), None, "matrix ring over a field")
    } else {
        (None, None, None, "undetermined")
    };
    if degree.is_some_and(|d| d > 1) {
        provenance.push("SK_1(A)=SK_1(D)".to_string());
    }
    if schur == Some(1) {
        provenance.push("SK_1(F)=1".to_string());
    }

    Ok(ComponentReport {
        dim: ideal.dim,
        center: CenterDescriptor {
            field: inv.l_descriptor.clone(),
            gamma_power: w,
        },
        center_dim: center.dim,
        chi_degree: chi1,
        dim_over_center: chi1 * chi1,
        splitting_field: SplittingField {
            conductor: inv.eta_conductor,
            gamma_power: w,
        },
        schur_index: schur.map(PaperAsserted::new),
        matrix_degree: degree.map(PaperAsserted::new),
        cyclic_presentation: presentation.map(PaperAsserted::new),
        form: form.to_string(),
        provenance,
        verified: checks.checks,
        orbit: inv,
    })
}

/// All components of A with the family laws of their idempotents.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub dim: usize,
    pub degrees: Vec<usize>,
    pub components: Vec<ComponentReport>,
    pub family: Vec<Check>,
}

/// Reports for every ⟨γ⟩ × D-orbit on Irr(H), in orbit order.
pub fn decompose(spec: &GSpec) -> Result<Decomposition> {
    let table = CharacterTable::new(spec.h())?;
    let d = decomposition_group(table.exponent, spec.l())?;
    let ctx = OrbitContext::new(&table, spec, &d)?;
    let alg = CrossedAlgebra::new(spec.clone());
    let h = spec.h();
    let idems = crate::crossed::rational_idempotents(&alg, &ctx)?;

    let mut family = VerificationResult::default();
    family.push(Check::holds("character table orthogonality", table.check_orthogonality().is_ok()));
    let coeffs: Vec<Vec<CycNumber>> = idems
        .iter()
        .map(|(_, e)| e.group_ring_coeffs().expect("ε_χ lies in K[H]"))
        .collect();
    let mut sum = vec![CycNumber::zero(); h.order()];
    for c in &coeffs {
        for (acc, x) in sum.iter_mut().zip(c) {
            *acc = &*acc + x;
        }
    }
    let mut one = vec![CycNumber::zero(); h.order()];
    one[h.identity()] = CycNumber::one();
    family.push(Check::holds("Σ ε_χ = 1", sum == one));
    let orthogonal = (0..coeffs.len()).all(|a| {
        (a + 1..coeffs.len()).all(|b| group_ring_mul(h, &coeffs[a], &coeffs[b]).iter().all(Zero::is_zero))
    });
    family.push(Check::holds("ε_χ·ε_χ′ = 0 for χ ≠ χ′", orthogonal));
    let family = family.into_result()?;

    let components = idems
        .iter()
        .map(|(orbit, e)| report_for(&alg, &ctx, orbit[0], e))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = components.iter().map(|c| c.dim).sum();
    let last = Check::equal("Σ dim ε_χA = dim A", alg.dim(), total);
    if !last.passed {
        return Err(failure(&last));
    }
    let mut family = family.checks;
    family.push(last);
    Ok(Decomposition {
        dim: alg.dim(),
        degrees: table.degrees(),
        components,
        family,
    })
}
