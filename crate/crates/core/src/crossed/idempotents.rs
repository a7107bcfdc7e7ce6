use std::sync::Arc;

use num_traits::Zero;

use crate::arith::gcd;
use crate::chars::{CharacterTable, OrbitContext};
use crate::crossed::element::{alg_mul, AlgebraElement, CrossedAlgebra};
use crate::cyclo::{galois_apply, trace_to_fixed, CycNumber, DecompGroup};
use crate::error::{inconsistent, malformed, Result};
use crate::groups::FiniteGroup;
use crate::Rational;

/// (η(1)/|H|)·η(h⁻¹) for every h ∈ H.
pub(crate) fn e_eta_coeffs(h: &FiniteGroup, table: &CharacterTable, eta: usize) -> Vec<CycNumber> {
    let chi = &table.chars[eta];
    let scale = Rational::new(chi.degree.into(), h.order().into());
    (0..h.order())
        .map(|x| table.value(eta, h.inv(x)).scale(&scale))
        .collect()
}

/// e(η) = (η(1)/|H|) Σ_h η(h⁻¹)·h.
pub fn idempotent_e_eta(alg: &Arc<CrossedAlgebra>, table: &CharacterTable, eta: usize) -> AlgebraElement {
    AlgebraElement::from_group_ring(alg, &e_eta_coeffs(alg.spec().h(), table, eta))
}

/// True when a ∈ K[H] is a class function fixed by α, i.e. central in A.
pub(crate) fn group_ring_is_central(alg: &CrossedAlgebra, a: &[CycNumber]) -> bool {
    let h = alg.spec().h();
    (0..h.order()).all(|x| {
        a[x] == a[alg.twist(1, x)] && h.generators().iter().all(|&g| a[h.conj(g, x)] == a[x])
    })
}

/// Commutes with every generator of H and with γ.
pub fn is_central(e: &AlgebraElement) -> Result<bool> {
    let alg = e.algebra();
    if let Some(v) = e.group_ring_coeffs() {
        return Ok(group_ring_is_central(alg, &v));
    }
    let mut gens: Vec<AlgebraElement> = alg
        .spec()
        .h()
        .generators()
        .iter()
        .map(|&g| AlgebraElement::basis(alg, g, 0))
        .collect();
    gens.push(AlgebraElement::gamma(alg));
    for g in &gens {
        if !e.commutator(g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_idempotent(e: &AlgebraElement) -> Result<bool> {
    Ok(alg_mul(e, e)? == *e)
}

/// ε_χ: the sum of e(η′) over the D-closure of the γ-orbit `orbit`.
pub fn idempotent_e_chi(alg: &Arc<CrossedAlgebra>, ctx: &OrbitContext, orbit: &[usize]) -> Result<AlgebraElement> {
    let Some(&first) = orbit.first() else {
        return malformed("empty character orbit");
    };
    let mut sorted = orbit.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut full = ctx.gamma_orbit(first);
    full.sort_unstable();
    if sorted != full {
        return malformed("character list is not a single orbit under γ");
    }
    let mut closure: Vec<usize> = orbit.iter().flat_map(|&x| ctx.d_orbit(x)).collect();
    closure.sort_unstable();
    closure.dedup();
    let h = alg.spec().h();
    let mut coeffs = vec![CycNumber::zero(); h.order()];
    for &c in &closure {
        for (acc, x) in coeffs.iter_mut().zip(e_eta_coeffs(h, ctx.table, c)) {
            *acc = &*acc + &x;
        }
    }
    check_fixed(&coeffs, ctx.d)?;
    if !group_ring_is_central(alg, &coeffs) {
        return inconsistent("ε_χ is not central");
    }
    Ok(AlgebraElement::from_group_ring(alg, &coeffs))
}

fn check_fixed(coeffs: &[CycNumber], d: &DecompGroup) -> Result<()> {
    for sigma in d.automorphisms() {
        for c in coeffs {
            if c.to_rational().is_none() && galois_apply(&sigma, c)? != *c {
                return inconsistent("idempotent coefficient not fixed by the decomposition group");
            }
        }
    }
    Ok(())
}

/// Central idempotents ε_χ for all ⟨γ⟩ × D-orbits on Irr(H), in orbit order.
/// Each entry carries the γ-orbit of the minimal character of the orbit.
pub fn rational_idempotents(alg: &Arc<CrossedAlgebra>, ctx: &OrbitContext) -> Result<Vec<(Vec<usize>, AlgebraElement)>> {
    ctx.rational_orbits()
        .into_iter()
        .map(|o| {
            let gamma_orbit = ctx.gamma_orbit(o[0]);
            let e = idempotent_e_chi(alg, ctx, &gamma_orbit)?;
            Ok((gamma_orbit, e))
        })
        .collect()
}

/// The linear character of ⟨s⟩ with β(s) = ζ_{|s|}^j.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicCharacter {
    pub s: usize,
    pub s_order: usize,
    pub j: usize,
}

impl CyclicCharacter {
    /// β(s^k).
    pub fn value(&self, k: i64) -> CycNumber {
        CycNumber::zeta_pow(self.s_order, k * self.j as i64)
    }

    /// Conductor of ℚ(β): the order of β.
    pub fn conductor(&self) -> usize {
        self.s_order / gcd(self.j, self.s_order)
    }

    /// Exponents of the D-orbit of β, sorted.
    pub fn d_orbit(&self, d: &DecompGroup) -> Vec<usize> {
        let mut o: Vec<usize> = d
            .members
            .iter()
            .map(|&a| (a * self.j) % self.s_order.max(1))
            .collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// D-orbit representatives (minimal exponents) of the characters of ⟨s⟩.
pub fn cyclic_orbit_representatives(s: usize, s_order: usize, d: &DecompGroup) -> Vec<CyclicCharacter> {
    let mut seen = vec![false; s_order.max(1)];
    let mut reps = Vec::new();
    for j in 0..s_order.max(1) {
        if seen[j] {
            continue;
        }
        let beta = CyclicCharacter { s, s_order, j };
        for k in beta.d_orbit(d) {
            seen[k] = true;
        }
        reps.push(beta);
    }
    reps
}

/// e_i = (1/|s|) Σ_ν tr(β(s^{−ν}))·s^ν, the trace taken over the D-orbit of β
/// (the full D-trace divided by the order of the stabiliser of β).
pub fn idempotent_e_i(alg: &Arc<CrossedAlgebra>, beta: &CyclicCharacter, d: &DecompGroup) -> Result<AlgebraElement> {
    let h = alg.spec().h();
    let n = beta.s_order.max(1);
    if beta.s >= h.order() || h.element_order(beta.s) != n {
        return malformed("s does not have the stated order");
    }
    let stab = d
        .members
        .iter()
        .filter(|&&a| (a * beta.j) % n == beta.j % n)
        .count();
    let mut coeffs = vec![CycNumber::zero(); h.order()];
    let mut x = h.identity();
    for nu in 0..n {
        let tr = trace_to_fixed(&beta.value(-(nu as i64)), d)?;
        coeffs[x] = tr.scale(&Rational::new(1.into(), (n * stab).into()));
        x = h.mul(x, beta.s);
    }
    Ok(AlgebraElement::from_group_ring(alg, &coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::CharacterTable;
    use crate::cyclo::decomposition_group;
    use crate::groups::{abelian, cyclic, heisenberg, semidirect, GSpec, GroupAut};
    use crate::RatFunc;

    fn alg_of(spec: GSpec) -> Arc<CrossedAlgebra> {
        CrossedAlgebra::new(spec)
    }

    fn trivial_spec(g: FiniteGroup) -> GSpec {
        let a = GroupAut::identity(&g);
        GSpec::new(g, a, 3).unwrap()
    }

    #[test]
    fn e_eta_examples() {
        let alg = alg_of(trivial_spec(cyclic(3).unwrap()));
        let t = CharacterTable::new(alg.spec().h()).unwrap();
        let third = CycNumber::rational(Rational::new(1.into(), 3.into()));
        let triv = idempotent_e_eta(&alg, &t, 0);
        assert_eq!(triv.group_ring_coeffs().unwrap(), vec![third.clone(); 3]);
        let eta = (0..3).find(|&c| *t.value(c, 1) == CycNumber::zeta(3)).unwrap();
        let e = idempotent_e_eta(&alg, &t, eta);
        let want = vec![
            third.clone(),
            CycNumber::zeta_pow(3, 2) * third.clone(),
            CycNumber::zeta(3) * third,
        ];
        assert_eq!(e.group_ring_coeffs().unwrap(), want);
        assert!(is_idempotent(&e).unwrap());

        let alg = alg_of(trivial_spec(heisenberg(3).unwrap()));
        let t = CharacterTable::new(alg.spec().h()).unwrap();
        let big = (0..t.len()).find(|&c| t.chars[c].degree == 3).unwrap();
        let e = idempotent_e_eta(&alg, &t, big);
        assert_eq!(
            e.coeff(0, 0),
            RatFunc::constant(CycNumber::rational(Rational::new(1.into(), 3.into())))
        );
        assert!(is_idempotent(&e).unwrap());
    }

    #[test]
    fn e_i_examples() {
        let g = cyclic(7).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1], &[2]).unwrap();
        let alg = alg_of(GSpec::new(g, a, 3).unwrap());
        let d = decomposition_group(7, 3).unwrap();
        let seventh = CycNumber::rational(Rational::new(1.into(), 7.into()));
        let e0 = idempotent_e_i(&alg, &CyclicCharacter { s: 1, s_order: 7, j: 0 }, &d).unwrap();
        assert_eq!(e0.group_ring_coeffs().unwrap(), vec![seventh.clone(); 7]);
        let e1 = idempotent_e_i(&alg, &CyclicCharacter { s: 1, s_order: 7, j: 1 }, &d).unwrap();
        let one_minus = AlgebraElement::one(&alg).try_sub(&e0).unwrap();
        assert_eq!(e1, one_minus);

        let g = cyclic(9).unwrap();
        let alg = alg_of(trivial_spec(g));
        let d = decomposition_group(9, 3).unwrap();
        let e = idempotent_e_i(&alg, &CyclicCharacter { s: 1, s_order: 9, j: 1 }, &d).unwrap();
        let c = e.group_ring_coeffs().unwrap();
        for nu in 0..9 {
            let want = match nu {
                0 => 6,
                3 | 6 => -3,
                _ => 0,
            };
            assert_eq!(c[nu], CycNumber::rational(Rational::new(want.into(), 9.into())));
        }
    }

    #[test]
    fn e_i_family_is_complete() {
        // ℤ/7 × (ℤ/3)², γ acting through s ↦ s² on the first factor
        let g = semidirect(&[7], &[3, 3], &[vec![vec![2]], vec![vec![1]]]).unwrap();
        let spec = trivial_spec(g);
        let alg = alg_of(spec);
        let d = decomposition_group(7, 3).unwrap();
        let reps = cyclic_orbit_representatives(1, 7, &d);
        assert_eq!(reps.len(), 2);
        let es: Vec<AlgebraElement> = reps.iter().map(|b| idempotent_e_i(&alg, b, &d).unwrap()).collect();
        let mut sum = AlgebraElement::zero(&alg);
        for (i, e) in es.iter().enumerate() {
            assert!(is_idempotent(e).unwrap());
            assert!(is_central(e).unwrap());
            for f in &es[i + 1..] {
                assert!(alg_mul(e, f).unwrap().is_zero());
            }
            sum = sum.try_add(e).unwrap();
        }
        assert_eq!(sum, AlgebraElement::one(&alg));
    }

    #[test]
    fn e_chi_family_is_complete() {
        let g = abelian(&[3, 3]).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1, 3], &[1, 4]).unwrap();
        let spec = GSpec::new(g, a, 3).unwrap();
        let alg = alg_of(spec.clone());
        let t = CharacterTable::new(spec.h()).unwrap();
        let d = decomposition_group(3, 3).unwrap();
        let ctx = OrbitContext::new(&t, &spec, &d).unwrap();
        let fam = rational_idempotents(&alg, &ctx).unwrap();
        assert_eq!(fam.len(), 3);
        let mut sum = AlgebraElement::zero(&alg);
        for (i, (_, e)) in fam.iter().enumerate() {
            assert!(is_idempotent(e).unwrap());
            assert!(is_central(e).unwrap());
            for (_, f) in &fam[i + 1..] {
                assert!(alg_mul(e, f).unwrap().is_zero());
            }
            sum = sum.try_add(e).unwrap();
        }
        assert_eq!(sum, AlgebraElement::one(&alg));
        assert!(matches!(
            idempotent_e_chi(&alg, &ctx, &fam[2].0[..1]),
            Err(crate::Error::MalformedInput(_))
        ));
    }

    #[test]
    fn non_central_detected() {
        let alg = alg_of(GSpec::new(
            cyclic(9).unwrap(),
            GroupAut::from_generator_images(&cyclic(9).unwrap(), &[1], &[4]).unwrap(),
            3,
        )
        .unwrap());
        let h = AlgebraElement::basis(&alg, 1, 0);
        assert!(!is_central(&h).unwrap());
        let t = AlgebraElement::term(&alg, 0, 0, RatFunc::t_pow(1));
        assert!(is_central(&t).unwrap());
        assert!(is_central(&AlgebraElement::one(&alg)).unwrap());
    }
}
