//! Linear algebra on K(T)-spans of subgroups of the truncation inside A.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::crossed::{echelon_cyc, layer_element, AlgebraElement, CrossedAlgebra};
use crate::cyclo::CycNumber;
use crate::groups::FiniteGroup;
use crate::linalg::rank;
use crate::RatFunc;

/// Elements of a subgroup of the truncation, split by γ-layer into their
/// H-parts.
fn by_layer(alg: &CrossedAlgebra, elems: &[usize]) -> Vec<Vec<usize>> {
    let spec = alg.spec();
    let mut out = vec![Vec::new(); alg.layers()];
    for &g in elems {
        let (h, i) = spec.fin_parts(g);
        out[i].push(h);
    }
    out
}

/// e·h as a vector on H: (e·h)[g] = e[g h⁻¹].
fn right_shift(h: &FiniteGroup, e: &[CycNumber], x: usize) -> Vec<CycNumber> {
    let xi = h.inv(x);
    (0..h.order()).map(|g| e[h.mul(g, xi)].clone()).collect()
}

/// Basis over K(T) of e·span(S) for e ∈ K[H] and S a subgroup of the
/// truncation containing the support of e.
pub(crate) fn span_basis(alg: &Arc<CrossedAlgebra>, elems: &[usize], e: &[CycNumber]) -> Vec<AlgebraElement> {
    let h = alg.spec().h();
    let mut out = Vec::new();
    for (i, hs) in by_layer(alg, elems).iter().enumerate() {
        if hs.is_empty() {
            continue;
        }
        let rows: Vec<Vec<CycNumber>> = hs.iter().map(|&x| right_shift(h, e, x)).collect();
        let (ech, _) = echelon_cyc(&rows, h.order());
        out.extend(ech.iter().map(|r| layer_element(alg, r, i)));
    }
    out
}

pub(crate) fn span_dim(alg: &Arc<CrossedAlgebra>, elems: &[usize], e: &[CycNumber]) -> usize {
    let h = alg.spec().h();
    by_layer(alg, elems)
        .iter()
        .filter(|hs| !hs.is_empty())
        .map(|hs| {
            let rows: Vec<Vec<CycNumber>> = hs.iter().map(|&x| right_shift(h, e, x)).collect();
            echelon_cyc(&rows, h.order()).0.len()
        })
        .sum()
}

/// Conjugacy classes of S under conjugation by S.
fn classes(g_fin: &FiniteGroup, elems: &[usize]) -> Vec<Vec<usize>> {
    let gens = g_fin.generators_of(elems);
    let mut seen = vec![false; g_fin.order()];
    let mut out = Vec::new();
    for &x in elems {
        if seen[x] {
            continue;
        }
        seen[x] = true;
        let mut class = vec![x];
        let mut k = 0;
        while k < class.len() {
            for &g in &gens {
                let y = g_fin.conj(g, class[k]);
                if !seen[y] {
                    seen[y] = true;
                    class.push(y);
                }
            }
            k += 1;
        }
        out.push(class);
    }
    out
}

/// Basis of the centre of e·span(S), for e a central idempotent of span(S)
/// supported on S ∩ H: e times the S-class sums.
pub(crate) fn span_center(
    alg: &Arc<CrossedAlgebra>,
    g_fin: &FiniteGroup,
    elems: &[usize],
    e: &[CycNumber],
) -> Vec<AlgebraElement> {
    let spec = alg.spec();
    let h = spec.h();
    let n = h.order();
    let mut per_layer: Vec<Vec<Vec<CycNumber>>> = vec![Vec::new(); alg.layers()];
    for class in classes(g_fin, elems) {
        let i = spec.fin_parts(class[0]).1;
        let mut sum = vec![CycNumber::zero(); n];
        for &g in &class {
            sum[spec.fin_parts(g).0] = CycNumber::one();
        }
        per_layer[i].push(crate::crossed::group_ring_mul(h, e, &sum));
    }
    let mut out = Vec::new();
    for (i, rows) in per_layer.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let (ech, _) = echelon_cyc(rows, n);
        out.extend(ech.iter().map(|r| layer_element(alg, r, i)));
    }
    out
}

/// g·a·g⁻¹ for g in the truncation. Conjugation permutes the basis h·γ^i
/// without producing powers of T.
pub(crate) fn conjugate(a: &AlgebraElement, g_fin: &FiniteGroup, g: usize) -> AlgebraElement {
    let alg = a.algebra();
    let spec = alg.spec();
    let mut out = AlgebraElement::zero(alg);
    for (&(h, i), c) in a.terms() {
        let (h2, i2) = spec.fin_parts(g_fin.conj(g, spec.fin_index(h, i)));
        out = out
            .try_add(&AlgebraElement::term(alg, h2, i2, c.clone()))
            .expect("same algebra");
    }
    out
}

/// g·a·g⁻¹ on a vector of K[H].
pub(crate) fn conjugate_group_ring(h: &FiniteGroup, a: &[CycNumber], g_fin: &FiniteGroup, g: usize) -> Vec<CycNumber> {
    let mut out = vec![CycNumber::zero(); a.len()];
    for (x, c) in a.iter().enumerate() {
        if !c.is_zero() {
            let y = g_fin.conj(g, x);
            debug_assert!(y < h.order());
            out[y] = c.clone();
        }
    }
    out
}

/// Rank over K(T) of a family of elements.
pub(crate) fn rank_of(elems: &[AlgebraElement]) -> usize {
    let Some(first) = elems.first() else {
        return 0;
    };
    let ncols = first.algebra().dim();
    let rows: Vec<Vec<RatFunc>> = elems.iter().map(|e| e.to_vector()).collect();
    let constant: Option<Vec<Vec<CycNumber>>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.as_constant()).collect())
        .collect();
    match constant {
        Some(rows) => echelon_cyc(&rows, ncols).0.len(),
        None => rank(&rows, ncols),
    }
}

/// Dimension of the subspace of span(basis) fixed by conjugation with g.
pub(crate) fn fixed_dim(basis: &[AlgebraElement], g_fin: &FiniteGroup, g: usize) -> usize {
    let moved: Vec<AlgebraElement> = basis
        .iter()
        .map(|b| conjugate(b, g_fin, g).try_sub(b).expect("same algebra"))
        .collect();
    basis.len() - rank_of(&moved)
}

/// Keeps only the terms whose group element lies in S.
pub(crate) fn project(a: &AlgebraElement, in_s: &[bool]) -> AlgebraElement {
    let alg = a.algebra();
    let spec = alg.spec();
    let mut out = AlgebraElement::zero(alg);
    for (&(h, i), c) in a.terms() {
        if in_s[spec.fin_index(h, i)] {
            out = out
                .try_add(&AlgebraElement::term(alg, h, i, c.clone()))
                .expect("same algebra");
        }
    }
    out
}
