use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{log_exact, mult_order};
use crate::chars::{galois_permutation, CharacterTable};
use crate::crossed::{
    cyclic_orbit_representatives, e_eta_coeffs, group_ring_mul, ideal_of, idempotent_e_i, is_central, is_idempotent,
    AlgebraElement, CrossedAlgebra, CyclicCharacter,
};
use crate::cyclo::{decomposition_group, CycNumber, GaloisAut};
use crate::error::{inconsistent, Error, Result};
use crate::groups::{semidirect_truncation, ElementaryData, FiniteGroup, GSpec, QType, SubSpec};
use crate::wedderburn::subalg::{conjugate_group_ring, fixed_dim, span_center, span_dim};
use crate::wedderburn::{failure, Check, VerificationResult};

/// The twisting element x of (ℚ_l(ζ_i)⊗𝒬U_i) ⋆ ⟨x⟩.
#[derive(Clone, Debug, Serialize)]
pub struct XDescriptor {
    /// x as an element of the truncation.
    pub element: usize,
    pub label: String,
    /// Image of x̄ in G(ℚ_l(ζ_i)/ℚ_l).
    pub tau: GaloisAut,
    pub n: u32,
    pub ln: usize,
}

/// A simple component W of ℚ_l(ζ_i)⊗𝒬U_i, realised as e_W·span(G_i).
#[derive(Clone, Debug, Serialize)]
pub struct BaseComponent {
    /// The ⟨G_i⟩ × D-orbit on Irr(N_i), N_i = H ∩ G_i.
    pub characters: Vec<usize>,
    #[serde(skip)]
    pub idempotent: Vec<CycNumber>,
    pub dim: usize,
    pub center_dim: usize,
}

/// The summand e_i·A ≅ (ℚ_l(ζ_i)⊗𝒬U_i) ⋆ ⟨x⟩ of an l-elementary spec.
#[derive(Clone, Debug)]
pub struct StarAlgebra {
    pub alg: Arc<CrossedAlgebra>,
    pub g_fin: Arc<FiniteGroup>,
    pub beta: CyclicCharacter,
    /// [ℚ_l(ζ_i):ℚ_l].
    pub zeta_degree: usize,
    pub e_i: AlgebraElement,
    pub dim: usize,
    pub u_fin: Vec<usize>,
    pub u_i_fin: Vec<usize>,
    /// G_i = ⟨s⟩ ⋊ U_i inside the truncation.
    pub g_i_fin: Vec<usize>,
    pub x: XDescriptor,
    pub components: Vec<BaseComponent>,
    pub u_i: SubSpec,
    pub verified: Vec<Check>,
}

impl StarAlgebra {
    pub fn l(&self) -> usize {
        self.alg.spec().l()
    }
}

/// Splits e_i·A for every D-orbit of characters β_i of ⟨s⟩.
pub fn elementary_decomposition(spec: &GSpec, data: &ElementaryData) -> Result<Vec<StarAlgebra>> {
    if data.q != QType::L {
        return Err(Error::PreconditionViolation("elementary data is not of type q = l".into()));
    }
    let l = spec.l();
    let g_fin = Arc::new(semidirect_truncation(spec)?);
    let alg = CrossedAlgebra::new(spec.clone());
    let h = spec.h();
    let ns = data.s_order.max(1);
    let d = decomposition_group(ns, l)?;

    let mut pos = vec![usize::MAX; g_fin.order()];
    let mut s_pow = Vec::with_capacity(ns);
    let mut x = h.identity();
    for k in 0..ns {
        pos[x] = k;
        s_pow.push(x);
        x = h.mul(x, data.s);
    }
    let k_of = |u: usize| -> Result<usize> {
        match pos[g_fin.conj(u, data.s)] {
            usize::MAX => inconsistent("⟨s⟩ is not normal in the truncation"),
            k => Ok(k),
        }
    };
    let mut u_fin = data.complement.clone();
    u_fin.sort_unstable();
    let ks: Vec<usize> = u_fin.iter().map(|&u| k_of(u)).collect::<Result<_>>()?;

    let mut out = Vec::new();
    for beta in cyclic_orbit_representatives(data.s, ns, &d) {
        let c = beta.conductor();
        let u_i: Vec<usize> = u_fin
            .iter()
            .zip(&ks)
            .filter(|(_, &k)| (k * beta.j) % ns == beta.j % ns)
            .map(|(&u, _)| u)
            .collect();
        let index = u_fin.len() / u_i.len();
        let n = match log_exact(index, l) {
            Some(n) if index * u_i.len() == u_fin.len() => n,
            _ => return inconsistent(format!("[U:U_i] = {index} is not a power of {l}")),
        };
        let x = if index == 1 {
            g_fin.identity()
        } else {
            match u_fin.iter().zip(&ks).find(|(_, &k)| mult_order(k % c, c) == index) {
                Some((&u, _)) => u,
                None => return inconsistent("U/U_i is not cyclic"),
            }
        };
        let tau = GaloisAut::new(c, if c == 1 { 1 } else { k_of(x)? })?;
        let mut verified = VerificationResult::default();
        verified.push(Check::holds("x^{l^n} ∈ U_i", u_i.contains(&g_fin.pow(x, index))));

        let e_i = idempotent_e_i(&alg, &beta, &d)?;
        let zeta_degree = beta.d_orbit(&d).len();
        let dim = ideal_of(&e_i)?.dim;
        verified.push(Check::equal(
            "dim e_i·A = l^n·[ℚ_l(ζ_i):ℚ_l]·dim 𝒬U_i",
            index * zeta_degree * u_i.len(),
            dim,
        ));

        let mut g_i: Vec<usize> = s_pow
            .iter()
            .flat_map(|&a| u_i.iter().map(move |&u| (a, u)))
            .map(|(a, u)| g_fin.mul(a, u))
            .collect();
        g_i.sort_unstable();
        g_i.dedup();
        verified.push(Check::equal("|G_i| = |s|·|U_i|", ns * u_i.len(), g_i.len()));
        verified.push(Check::holds("G_i is a subgroup", g_fin.is_subgroup(&g_i)));
        let verified = verified.into_result()?;

        let e_coeffs = e_i.group_ring_coeffs().expect("e_i lies in K[H]");
        let components = base_components(&alg, &g_fin, &g_i, &e_coeffs)?;
        let u_i_spec = spec.sub_spec(spec.m(), &g_fin, &u_i)?;
        out.push(StarAlgebra {
            alg: alg.clone(),
            beta,
            zeta_degree,
            e_i,
            dim,
            u_fin: u_fin.clone(),
            u_i_fin: u_i,
            g_i_fin: g_i,
            x: XDescriptor {
                element: x,
                label: g_fin.label(x),
                tau,
                n,
                ln: index,
            },
            components,
            u_i: u_i_spec,
            verified: verified.checks,
            g_fin: g_fin.clone(),
        });
    }
    Ok(out)
}

/// Components of e_i·span(G_i): orbits of G_i-conjugation and D on Irr(N_i)
/// whose idempotent lies under e_i.
fn base_components(
    alg: &Arc<CrossedAlgebra>,
    g_fin: &FiniteGroup,
    g_i: &[usize],
    e_i: &[CycNumber],
) -> Result<Vec<BaseComponent>> {
    let h = alg.spec().h();
    let nh = h.order();
    let n_elems: Vec<usize> = g_i.iter().copied().filter(|&g| g < nh).collect();
    let (n_grp, emb) = h.subgroup(&n_elems)?;
    let mut loc = vec![usize::MAX; nh];
    for (i, &x) in emb.iter().enumerate() {
        loc[x] = i;
    }
    let table = CharacterTable::new(&n_grp)?;
    let d = decomposition_group(table.exponent, alg.spec().l())?;

    let mut perms: Vec<Vec<usize>> = Vec::new();
    for g in g_fin.generators_of(g_i) {
        let classes = table.class_map(|x| loc[g_fin.conj(g, emb[x])]);
        let p = table
            .chars
            .iter()
            .map(|c| {
                table
                    .index_of(&c.pulled_back(&classes))
                    .ok_or_else(|| Error::InternalConsistency("conjugate character not irreducible".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        perms.push(p);
    }
    for &a in &d.members {
        perms.push(galois_permutation(&table, &n_grp, a)?);
    }

    let mut seen = vec![false; table.len()];
    let mut out = Vec::new();
    let mut total = vec![CycNumber::zero(); nh];
    for start in 0..table.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            for p in &perms {
                let y = p[orbit[k]];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        let mut eps = vec![CycNumber::zero(); nh];
        for &c in &orbit {
            for (x, v) in e_eta_coeffs(&n_grp, &table, c).into_iter().enumerate() {
                eps[emb[x]] = &eps[emb[x]] + &v;
            }
        }
        if group_ring_mul(h, &eps, e_i) != eps {
            continue;
        }
        for (acc, v) in total.iter_mut().zip(&eps) {
            *acc = &*acc + v;
        }
        out.push(BaseComponent {
            dim: span_dim(alg, g_i, &eps),
            center_dim: span_center(alg, g_fin, g_i, &eps).len(),
            characters: orbit,
            idempotent: eps,
        });
    }
    if total != e_i {
        return inconsistent("base component idempotents do not sum to e_i");
    }
    Ok(out)
}

/// An ⟨x⟩-orbit of base components: W, W^x, …, W^{x^{l^d−1}}.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitGroup {
    pub members: Vec<usize>,
    pub d: u32,
    /// y = x^{l^d}, which fixes every member.
    pub y: usize,
    #[serde(skip)]
    pub idempotent: Vec<CycNumber>,
}

/// Groups the base components into ⟨x⟩-orbits by conjugating idempotents.
pub fn orbit_analysis(s: &StarAlgebra) -> Result<Vec<OrbitGroup>> {
    let h = s.alg.spec().h();
    let x = s.x.element;
    let image = s
        .components
        .iter()
        .map(|c| {
            let conj = conjugate_group_ring(h, &c.idempotent, &s.g_fin, x);
            s.components
                .iter()
                .position(|o| o.idempotent == conj)
                .ok_or_else(|| Error::InternalConsistency("x-conjugate of a component idempotent is not a component".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; image.len()];
    let mut out = Vec::new();
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut k = image[start];
        while k != start {
            if seen[k] {
                return inconsistent("conjugation by x does not permute the components");
            }
            seen[k] = true;
            members.push(k);
            k = image[k];
        }
        let len = members.len();
        let d = match log_exact(len, s.l()) {
            Some(d) if d <= s.x.n => d,
            _ => return inconsistent(format!("orbit length {len} is not a power of l dividing l^n")),
        };
        let y = s.g_fin.pow(x, len);
        let first = &s.components[start].idempotent;
        if conjugate_group_ring(h, first, &s.g_fin, y) != *first {
            return inconsistent("x^{l^d} does not fix the component idempotent");
        }
        let mut idem = vec![CycNumber::zero(); h.order()];
        for &m in &members {
            for (acc, v) in idem.iter_mut().zip(&s.components[m].idempotent) {
                *acc = &*acc + v;
            }
        }
        out.push(OrbitGroup {
            members,
            d,
            y,
            idempotent: idem,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropStReport {
    pub d: u32,
    pub n: u32,
    pub dim_w: usize,
    pub dim_f: usize,
    pub dim_f_fixed: usize,
    pub dim_v: usize,
    pub dim_w_tilde: usize,
    pub center_dim: usize,
    pub checks: Vec<Check>,
}

/// Z(W̃) = F^{⟨x^{l^d}⟩} and dim W̃ = l^{2d}·dim V for one orbit group.
pub fn verify_prop_st(s: &StarAlgebra, group: &OrbitGroup) -> Result<PropStReport> {
    let alg = &s.alg;
    let l = s.l();
    let w = &s.components[group.members[0]];
    let w_tilde = crate::crossed::ideal_of(&AlgebraElement::from_group_ring(alg, &group.idempotent))
        .map_err(|e| Error::InternalConsistency(format!("W̃ idempotent: {e}")))?;
    let center_dim = crate::crossed::center_of(&w_tilde)?.dim;
    let f = span_center(alg, &s.g_fin, &s.g_i_fin, &w.idempotent);
    let dim_f_fixed = fixed_dim(&f, &s.g_fin, group.y);
    let mut gens = s.g_fin.generators_of(&s.g_i_fin);
    gens.push(group.y);
    let v_elems = s.g_fin.generated(&gens);
    let dim_v = span_dim(alg, &v_elems, &w.idempotent);

    let (d, n) = (group.d, s.x.n);
    let mut checks = VerificationResult::default();
    checks.push(Check::equal("dim Z(W̃) = dim F^⟨x^{l^d}⟩", dim_f_fixed, center_dim));
    checks.push(Check::equal("dim W̃ = l^{2d}·dim V", l.pow(2 * d) * dim_v, w_tilde.dim));
    checks.push(Check::equal("dim V = l^{n-d}·dim W", l.pow(n - d) * w.dim, dim_v));
    checks.push(Check::equal("dim W̃ = l^{d+n}·dim W", l.pow(d + n) * w.dim, w_tilde.dim));
    if let Some(c) = checks.checks.iter().find(|c| !c.passed) {
        return Err(failure(c));
    }
    Ok(PropStReport {
        d,
        n,
        dim_w: w.dim,
        dim_f: f.len(),
        dim_f_fixed,
        dim_v,
        dim_w_tilde: w_tilde.dim,
        center_dim,
        checks: checks.checks,
    })
}

/// Family laws of the e_i: idempotent, central, pairwise orthogonal, Σ e_i = 1.
pub fn e_i_family(stars: &[StarAlgebra]) -> Result<VerificationResult> {
    let mut r = VerificationResult::default();
    let Some(first) = stars.first() else {
        return Ok(r);
    };
    let h = first.alg.spec().h();
    let mut idem = true;
    let mut central = true;
    for s in stars {
        idem &= is_idempotent(&s.e_i)?;
        central &= is_central(&s.e_i)?;
    }
    r.push(Check::holds("e_i·e_i = e_i", idem));
    r.push(Check::holds("e_i is central", central));
    let coeffs: Vec<Vec<CycNumber>> = stars
        .iter()
        .map(|s| s.e_i.group_ring_coeffs().expect("e_i lies in K[H]"))
        .collect();
    let orthogonal = (0..coeffs.len()).all(|a| {
        (a + 1..coeffs.len()).all(|b| group_ring_mul(h, &coeffs[a], &coeffs[b]).iter().all(Zero::is_zero))
    });
    r.push(Check::holds("e_i·e_j = 0 for i ≠ j", orthogonal));
    let mut sum = vec![CycNumber::zero(); h.order()];
    for c in &coeffs {
        for (acc, x) in sum.iter_mut().zip(c) {
            *acc = &*acc + x;
        }
    }
    let mut one = vec![CycNumber::zero(); h.order()];
    one[h.identity()] = CycNumber::one();
    r.push(Check::holds("Σ e_i = 1", sum == one));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{abelian, cyclic, is_q_elementary, semidirect, GroupAut};

    pub(crate) fn z7() -> GSpec {
        let g = cyclic(7).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1], &[2]).unwrap();
        GSpec::new(g, a, 3).unwrap()
    }

    /// ℤ/7 × (ℤ/3)² with γ: s ↦ s², a ↦ a, b ↦ ab.
    pub(crate) fn wrapped_transvection() -> GSpec {
        let g = abelian(&[7, 3, 3]).unwrap();
        let gens = g.generators().to_vec();
        let (s, a, b) = (gens[0], gens[1], gens[2]);
        let imgs = [g.mul(s, s), a, g.mul(a, b)];
        let alpha = GroupAut::from_generator_images(&g, &gens, &imgs).unwrap();
        GSpec::new(g, alpha, 3).unwrap()
    }

    fn decomposition(spec: &GSpec) -> Vec<StarAlgebra> {
        let data = is_q_elementary(spec, QType::L, None).unwrap().unwrap();
        elementary_decomposition(spec, &data).unwrap()
    }

    #[test]
    fn order_21() {
        let parts = decomposition(&z7());
        assert_eq!(parts.len(), 2);
        let (p0, p1) = (&parts[0], &parts[1]);
        assert_eq!((p0.dim, p0.x.n, p0.u_i_fin.len()), (3, 0, 3));
        assert_eq!((p1.dim, p1.x.n, p1.u_i_fin.len(), p1.zeta_degree), (18, 1, 1, 6));
        assert_eq!(p1.x.tau.conductor, 7);
        assert_eq!(p1.components.len(), 1);
        assert_eq!((p1.components[0].dim, p1.components[0].center_dim), (6, 6));
        let groups = orbit_analysis(p1).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].d, 0);
        let r = verify_prop_st(p1, &groups[0]).unwrap();
        assert_eq!((r.dim_f, r.dim_f_fixed, r.center_dim, r.dim_v, r.dim_w_tilde), (6, 2, 2, 18, 18));
        let g0 = orbit_analysis(p0).unwrap();
        let r0 = verify_prop_st(p0, &g0[0]).unwrap();
        assert_eq!((r0.d, r0.n, r0.dim_w_tilde), (0, 0, 3));
        let fam = e_i_family(&parts).unwrap();
        assert_eq!(fam.checks.len(), 4);
        assert!(fam.passed());
    }

    #[test]
    fn free_orbit_case() {
        let parts = decomposition(&wrapped_transvection());
        assert_eq!(parts.iter().map(|p| p.dim).sum::<usize>(), 189);
        let p1 = parts.iter().find(|p| p.beta.j != 0).unwrap();
        assert_eq!((p1.x.n, p1.u_i_fin.len()), (1, 9));
        let mut dims: Vec<usize> = p1.components.iter().map(|c| c.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![6, 12, 12, 12, 12]);
        let groups = orbit_analysis(p1).unwrap();
        let mut ds: Vec<(usize, u32)> = groups.iter().map(|g| (g.members.len(), g.d)).collect();
        ds.sort_unstable();
        assert_eq!(ds, vec![(1, 0), (1, 0), (3, 1)]);
        for g in &groups {
            let r = verify_prop_st(p1, g).unwrap();
            if g.d == 1 {
                assert_eq!((r.dim_w, r.dim_v, r.dim_w_tilde), (12, 12, 108));
            }
        }
    }

    #[test]
    fn trivial_s() {
        let g = cyclic(9).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1], &[4]).unwrap();
        let parts = decomposition(&GSpec::new(g, a, 3).unwrap());
        assert_eq!(parts.len(), 1);
        assert_eq!((parts[0].dim, parts[0].x.n), (27, 0));
        assert!(parts[0].e_i == AlgebraElement::one(&parts[0].alg));
    }

    #[test]
    fn kernel_of_action_through_quotient() {
        // ℤ/7 ⋊ (ℤ/9 × ℤ/3), the ℤ/3 factor acting; γ: h ↦ h⁴
        let g = semidirect(&[7], &[9, 3], &[vec![vec![1]], vec![vec![2]]]).unwrap();
        let gens = g.generators().to_vec();
        let imgs = [gens[0], g.pow(gens[1], 4), gens[2]];
        let alpha = GroupAut::from_generator_images(&g, &gens, &imgs).unwrap();
        let parts = decomposition(&GSpec::new(g, alpha, 3).unwrap());
        let p1 = parts.iter().find(|p| p.beta.j != 0).unwrap();
        assert_eq!((p1.x.n, p1.u_i_fin.len()), (1, 27));
        assert_eq!(p1.u_i.spec.h().order(), 9);
        assert_eq!(p1.u_i.spec.m(), 1);
        for g in orbit_analysis(p1).unwrap() {
            verify_prop_st(p1, &g).unwrap();
        }
    }
}
