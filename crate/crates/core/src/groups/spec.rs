use std::collections::VecDeque;
use std::sync::Arc;

use crate::arith::{inv_mod, is_prime, log_exact, split_prime_power};
use crate::error::{malformed, Error, Result};
use crate::groups::FiniteGroup;

/// An automorphism of a finite group, as a permutation of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAut {
    images: Vec<usize>,
}

impl GroupAut {
    pub fn new(group: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if images.len() != n {
            return malformed(format!("automorphism has {} images for {n} elements", images.len()));
        }
        let mut hit = vec![false; n];
        for &x in &images {
            if x >= n || hit[x] {
                return malformed("automorphism is not a bijection");
            }
            hit[x] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if images[group.mul(a, b)] != group.mul(images[a], images[b]) {
                    return malformed(format!("automorphism is not multiplicative at ({a}, {b})"));
                }
            }
        }
        Ok(GroupAut { images })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupAut {
            images: (0..group.order()).collect(),
        }
    }

    /// Extends generator images to a homomorphism, then validates it.
    pub fn from_generator_images(group: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Result<Self> {
        if gens.len() != imgs.len() {
            return malformed(format!("{} generator images for {} generators", imgs.len(), gens.len()));
        }
        let n = group.order();
        if imgs.iter().any(|&x| x >= n) {
            return malformed("generator image out of range");
        }
        let mut img = vec![usize::MAX; n];
        img[group.identity()] = group.identity();
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (&g, &ig) in gens.iter().zip(imgs) {
                let y = group.mul(x, g);
                let iy = group.mul(img[x], ig);
                if img[y] == usize::MAX {
                    img[y] = iy;
                    queue.push_back(y);
                } else if img[y] != iy {
                    return malformed("generator images do not define a homomorphism");
                }
            }
        }
        if img.contains(&usize::MAX) {
            return malformed("listed generators do not generate the group");
        }
        GroupAut::new(group, img)
    }

    /// Conjugation h ↦ g h g⁻¹.
    pub fn inner(group: &FiniteGroup, g: usize) -> Self {
        GroupAut {
            images: (0..group.order()).map(|h| group.conj(g, h)).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, h: usize) -> usize {
        self.images[h]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupAut) -> GroupAut {
        GroupAut {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> GroupAut {
        let mut r = GroupAut {
            images: (0..self.images.len()).collect(),
        };
        for _ in 0..k {
            r = self.compose(&r);
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn order(&self) -> usize {
        let mut cur = self.clone();
        let mut k = 1;
        while !cur.is_identity() {
            cur = self.compose(&cur);
            k += 1;
        }
        k
    }

    /// An element g with α = conj_g, if α is inner.
    pub fn inner_witness(&self, group: &FiniteGroup) -> Option<usize> {
        (0..group.order()).find(|&g| {
            group
                .generators()
                .iter()
                .all(|&h| group.conj(g, h) == self.images[h])
        })
    }
}

/// G = H ⋊ Γ with γ acting on H by `alpha` (γ h γ⁻¹ = α(h)); the truncation
/// exponent `m` is the minimal one with α^{l^m} = id.
#[derive(Clone, Debug)]
pub struct GSpec {
    h: Arc<FiniteGroup>,
    alpha: GroupAut,
    l: usize,
    m: u32,
}

impl GSpec {
    pub fn new(h: FiniteGroup, alpha: GroupAut, l: usize) -> Result<Self> {
        Self::with_m(h, alpha, l, None)
    }

    /// As [`GSpec::new`]; a declared `m` must be the minimal one.
    pub fn with_m(h: FiniteGroup, alpha: GroupAut, l: usize, m: Option<u32>) -> Result<Self> {
        if !is_prime(l) || l == 2 {
            return malformed(format!("l = {l} is not an odd prime"));
        }
        if alpha.images.len() != h.order() {
            return malformed("automorphism does not match the group");
        }
        let ord = alpha.order();
        let min_m = log_exact(ord, l).ok_or_else(|| {
            Error::MalformedInput(format!("automorphism has order {ord}, not a power of {l}"))
        })?;
        if let Some(m) = m {
            if m != min_m {
                return malformed(format!(
                    "declared m = {m} but the minimal truncation exponent is {min_m}"
                ));
            }
        }
        Ok(GSpec {
            h: Arc::new(h),
            alpha,
            l,
            m: min_m,
        })
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn alpha(&self) -> &GroupAut {
        &self.alpha
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// l^m, the number of γ-layers of the truncated algebra.
    pub fn layers(&self) -> usize {
        self.l.pow(self.m)
    }

    pub fn fin_order(&self) -> usize {
        self.h.order() * self.layers()
    }

    pub fn is_pro_l(&self) -> bool {
        split_prime_power(self.h.order(), self.l).1 == 1
    }

    /// Index of (h, i) in the truncation.
    #[inline]
    pub fn fin_index(&self, h: usize, i: usize) -> usize {
        h + self.h.order() * i
    }

    #[inline]
    pub fn fin_parts(&self, g: usize) -> (usize, usize) {
        (g % self.h.order(), g / self.h.order())
    }

    /// α^i.
    pub fn alpha_pow(&self, i: usize) -> GroupAut {
        self.alpha.pow(i % self.layers().max(1))
    }

    /// H ⋊ ℤ/l^level with γ^{l^level} set aside; `level` must be ≥ m.
    pub fn truncation_at(&self, level: u32) -> Result<FiniteGroup> {
        if level < self.m {
            return malformed(format!("quotient level {level} below the truncation exponent {}", self.m));
        }
        let layers = self.l.pow(level);
        let nh = self.h.order();
        let powers: Vec<GroupAut> = (0..layers).map(|i| self.alpha.pow(i % self.layers())).collect();
        let table = (0..nh * layers)
            .map(|a| {
                let (ha, ia) = (a % nh, a / nh);
                (0..nh * layers)
                    .map(|b| {
                        let (hb, ib) = (b % nh, b / nh);
                        let h = self.h.mul(ha, powers[ia].apply(hb));
                        h + nh * ((ia + ib) % layers)
                    })
                    .collect()
            })
            .collect();
        let mut gens: Vec<usize> = self.h.generators().to_vec();
        if layers > 1 {
            gens.push(self.h.identity() + nh);
        }
        let g = FiniteGroup::from_table(table)?;
        if layers > 1 || nh > 1 {
            g.with_generators(gens)
        } else {
            Ok(g)
        }
    }

    /// The open subgroup of G whose image in the truncation at `level` is
    /// `elems`: H' = elems ∩ H, with y ∈ elems mapping to the generator
    /// l^a of the image in ℤ/l^level (y = γ^{l^level} when that image is
    /// trivial) and α' = conjugation by y.
    pub fn sub_spec(&self, level: u32, g_fin: &FiniteGroup, elems: &[usize]) -> Result<SubSpec> {
        let nh = self.h.order();
        let h_part: Vec<usize> = elems.iter().copied().filter(|&g| g < nh).collect();
        let (h_sub, emb) = self.h.subgroup(&h_part)?;
        let min_layer = elems
            .iter()
            .map(|&g| g / nh)
            .filter(|&i| i != 0)
            .map(|i| split_prime_power(i, self.l).0)
            .min();
        let (y, a) = match min_layer {
            None => (None, level),
            Some(a) => {
                let target = self.l.pow(a);
                let y = *elems
                    .iter()
                    .find(|&&g| g / nh == target)
                    .ok_or_else(|| Error::InternalConsistency("image of subgroup is not cyclic".into()))?;
                // the l-part of y lies in the same layer and acts with l-power order
                let (e, rest) = split_prime_power(g_fin.element_order(y), self.l);
                let pl = self.l.pow(e);
                let y = match inv_mod((rest % pl) as u64, pl as u64) {
                    Some(inv) if pl > 1 => g_fin.pow(y, (rest * inv as usize) % (pl * rest)),
                    _ => y,
                };
                (Some(y), a)
            }
        };
        let mut index = vec![usize::MAX; nh];
        for (i, &x) in emb.iter().enumerate() {
            index[x] = i;
        }
        let alpha = match y {
            None => GroupAut::identity(&h_sub),
            Some(y) => {
                let images = emb
                    .iter()
                    .map(|&x| {
                        let c = g_fin.conj(y, x);
                        if c >= nh || index[c] == usize::MAX {
                            Err(Error::InternalConsistency("y does not normalize H'".into()))
                        } else {
                            Ok(index[c])
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupAut::new(&h_sub, images)?
            }
        };
        let spec = GSpec::new(h_sub, alpha, self.l)?;
        Ok(SubSpec {
            spec,
            embedding: emb,
            y,
            gamma_exponent: a,
        })
    }
}

/// An open subgroup H' ⋊ ⟨y⟩ of a spec, with y mapping to γ^{l^a}.
#[derive(Clone, Debug)]
pub struct SubSpec {
    pub spec: GSpec,
    /// H' index → H index.
    pub embedding: Vec<usize>,
    /// y as an element of the truncation it was cut from; `None` when y is a
    /// power of γ^{l^level}.
    pub y: Option<usize>,
    pub gamma_exponent: u32,
}

/// G_fin = H ⋊ ℤ/l^m with elements (h, i) ↦ h + |H|·i.
pub fn semidirect_truncation(spec: &GSpec) -> Result<FiniteGroup> {
    spec.truncation_at(spec.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, heisenberg};

    fn power_map(g: &FiniteGroup, k: usize) -> GroupAut {
        GroupAut::new(g, (0..g.order()).map(|h| g.pow(h, k)).collect()).unwrap()
    }

    #[test]
    fn truncations() {
        let z9 = cyclic(9).unwrap();
        let alpha = GroupAut::from_generator_images(&z9, &[1], &[4]).unwrap();
        assert_eq!(alpha, power_map(&z9, 4));
        let spec = GSpec::new(z9, alpha, 3).unwrap();
        assert_eq!(spec.m(), 1);
        let g = semidirect_truncation(&spec).unwrap();
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());

        let z3 = cyclic(3).unwrap();
        let id = GroupAut::identity(&z3);
        let spec = GSpec::new(z3, id, 3).unwrap();
        assert_eq!(spec.m(), 0);
        assert_eq!(semidirect_truncation(&spec).unwrap().order(), 3);

        let h = heisenberg(3).unwrap();
        let spec = GSpec::new(h.clone(), GroupAut::identity(&h), 3).unwrap();
        assert_eq!(semidirect_truncation(&spec).unwrap().order(), 27);
    }

    #[test]
    fn invalid_specs() {
        let z7 = cyclic(7).unwrap();
        // s ↦ s³ has order 6
        assert!(GSpec::new(z7.clone(), power_map(&z7, 3), 3).is_err());
        assert!(GSpec::new(z7.clone(), power_map(&z7, 2), 2).is_err());
        assert!(GSpec::with_m(z7.clone(), power_map(&z7, 2), 3, Some(2)).is_err());
        assert!(GSpec::with_m(z7.clone(), power_map(&z7, 2), 3, Some(1)).is_ok());
        assert!(GroupAut::new(&z7, vec![0, 1, 2, 3, 4, 5, 5]).is_err());
        assert!(GroupAut::from_generator_images(&z7, &[1], &[0]).is_err());
    }

    #[test]
    fn sub_specs() {
        // ℤ/9 ⋊ Γ: the subgroup ⟨h³, γ⟩ gives H' = ℤ/3 with trivial action
        let z9 = cyclic(9).unwrap();
        let spec = GSpec::new(z9.clone(), power_map(&z9, 4), 3).unwrap();
        let g = semidirect_truncation(&spec).unwrap();
        let sub = g.generated(&[3, 9]);
        let s = spec.sub_spec(1, &g, &sub).unwrap();
        assert_eq!(s.spec.h().order(), 3);
        assert!(s.spec.alpha().is_identity());
        assert_eq!(s.gamma_exponent, 0);
        // ⟨h⟩ alone: y is the central γ^3
        let s = spec.sub_spec(1, &g, &g.generated(&[1])).unwrap();
        assert_eq!(s.spec.h().order(), 9);
        assert!(s.y.is_none());
        // the whole group recovers the original GSpec
        let s = spec.sub_spec(1, &g, &(0..27).collect::<Vec<_>>()).unwrap();
        assert_eq!(s.spec.m(), 1);
    }
}
