use serde::Serialize;

use crate::arith::{gcd, is_power_of};
use crate::cyclo::decomposition_group;
use crate::error::Result;
use crate::groups::{semidirect_truncation, FiniteGroup, GSpec};

/// Which elementary type is being tested: q = l, or a prime q ≠ l.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QType {
    L,
    Prime(usize),
}

/// A witness that G is ℚ_l-q-elementary.
///
/// For q = l: G_fin = ⟨s⟩ ⋊ U_fin with U_fin an l-group (given as elements of
/// G_fin). For q ≠ l: α = conj_g for `central_twist = g`, so g⁻¹γ is central,
/// and H = ⟨s⟩ ⋊ H_q (H_q given as elements of H).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryData {
    pub q: QType,
    /// Generator of ⟨s⟩, as an element of H.
    pub s: usize,
    pub s_order: usize,
    pub complement: Vec<usize>,
    /// (complement generator, k) with generator·s·generator⁻¹ = s^k.
    pub action_exponents: Vec<(usize, usize)>,
    pub central_twist: Option<usize>,
}

/// k with g s g⁻¹ = s^k.
fn conj_exponent(g_fin: &FiniteGroup, g: usize, s: usize, s_order: usize) -> Option<usize> {
    let c = g_fin.conj(g, s);
    let mut x = g_fin.identity();
    for k in 0..s_order.max(1) {
        if x == c {
            return Some(k);
        }
        x = g_fin.mul(x, s);
    }
    None
}

/// Elements of H whose order is prime to p; `Some(generator)` when they form
/// a cyclic subgroup.
fn cyclic_prime_to(h: &FiniteGroup, p: usize) -> Option<(usize, usize)> {
    let elems: Vec<usize> = (0..h.order())
        .filter(|&x| gcd(h.element_order(x), p) == 1)
        .collect();
    let gen = *elems.iter().max_by_key(|&&x| h.element_order(x))?;
    let ord = h.element_order(gen);
    (ord == elems.len()).then_some((gen, ord))
}

fn cyclic_witness(h: &FiniteGroup, p: usize, designated: Option<usize>) -> Option<(usize, usize)> {
    let (gen, ord) = cyclic_prime_to(h, p)?;
    match designated {
        None => Some((gen, ord)),
        Some(d) if d < h.order() && h.generated(&[d]) == h.generated(&[gen]) => Some((d, ord)),
        Some(_) => None,
    }
}

/// Tests whether H ⋊ Γ is ℚ_l-q-elementary. The cyclic part ⟨s⟩ is forced
/// to be the set of q′-elements of H (for q = l, the l′-elements).
pub fn is_q_elementary(spec: &GSpec, q: QType, designated_s: Option<usize>) -> Result<Option<ElementaryData>> {
    let l = spec.l();
    let h = spec.h();
    match q {
        QType::L => {
            let Some((s, s_order)) = cyclic_witness(h, l, designated_s) else {
                return Ok(None);
            };
            if !is_power_of(h.order() / s_order, l) {
                return Ok(None);
            }
            let g_fin = semidirect_truncation(spec)?;
            let s_elems = g_fin.generated(&[s]);
            if !g_fin.is_normal(&s_elems) {
                return Ok(None);
            }
            let u = g_fin.sylow_containing(l, &[]);
            if u.len() * s_order != g_fin.order() {
                return Ok(None);
            }
            let d = decomposition_group(s_order, l)?;
            let gens = g_fin.generators_of(&u);
            let mut action = Vec::new();
            for &g in &gens {
                match conj_exponent(&g_fin, g, s, s_order) {
                    Some(k) if d.contains(k) => action.push((g, k)),
                    _ => return Ok(None),
                }
            }
            let data = ElementaryData {
                q,
                s,
                s_order,
                complement: u,
                action_exponents: action,
                central_twist: None,
            };
            verify_product(&g_fin, &s_elems, &data.complement).then_some(data).map_or(Ok(None), |d| Ok(Some(d)))
        }
        QType::Prime(qp) => {
            if qp == l {
                return is_q_elementary(spec, QType::L, designated_s);
            }
            let Some(g) = spec.alpha().inner_witness(h) else {
                return Ok(None);
            };
            let Some((s, s_order)) = cyclic_witness(h, qp, designated_s) else {
                return Ok(None);
            };
            if !is_power_of(h.order() / s_order, qp) {
                return Ok(None);
            }
            let hq = h.sylow_containing(qp, &[]);
            let s_elems = h.generated(&[s]);
            if hq.len() * s_order != h.order() || !h.is_normal(&s_elems) {
                return Ok(None);
            }
            let d = decomposition_group(s_order, l)?;
            let mut action = Vec::new();
            for &x in &h.generators_of(&hq) {
                match conj_exponent(h, x, s, s_order) {
                    Some(k) if d.contains(k) => action.push((x, k)),
                    _ => return Ok(None),
                }
            }
            if !verify_product(h, &s_elems, &hq) {
                return Ok(None);
            }
            Ok(Some(ElementaryData {
                q,
                s,
                s_order,
                complement: hq,
                action_exponents: action,
                central_twist: Some(g),
            }))
        }
    }
}

/// The multiplication map N × C → G is a bijection with N normal, so G is
/// the internal semidirect product N ⋊ C.
pub fn verify_product(g: &FiniteGroup, normal: &[usize], complement: &[usize]) -> bool {
    if normal.len() * complement.len() != g.order() || !g.is_normal(normal) || !g.is_subgroup(complement) {
        return false;
    }
    let mut hit = vec![false; g.order()];
    for &a in normal {
        for &b in complement {
            let x = g.mul(a, b);
            if hit[x] {
                return false;
            }
            hit[x] = true;
        }
    }
    true
}
