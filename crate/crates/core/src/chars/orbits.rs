use serde::Serialize;

use crate::chars::{Character, CharacterTable};
use crate::cyclo::{DecompGroup, GaloisAut};
use crate::error::{inconsistent, Result};
use crate::groups::GSpec;

/// η^g with η^g(h) = η(g h g⁻¹), for g = (h₀, i) in the truncation.
pub fn conj_action(table: &CharacterTable, eta: &Character, spec: &GSpec, g: usize) -> Character {
    let (h0, i) = spec.fin_parts(g);
    let a = spec.alpha_pow(i);
    let h = spec.h();
    let perm = table.class_map(|x| h.conj(h0, a.apply(x)));
    eta.pulled_back(&perm)
}

/// σ_a(η), computed through the power map: σ_a(η)(g) = η(g^a).
pub fn galois_conjugate(table: &CharacterTable, eta: &Character, h: &crate::groups::FiniteGroup, a: usize) -> Character {
    let perm = table.class_map(|x| h.pow(x, a % table.exponent.max(1)));
    eta.pulled_back(&perm)
}

/// Permutation of Irr(H) induced by γ: χ ↦ χ^γ.
pub fn gamma_permutation(table: &CharacterTable, spec: &GSpec) -> Result<Vec<usize>> {
    let gamma = spec.fin_index(spec.h().identity(), 1 % spec.layers().max(1));
    permutation_of(table, |c| conj_action(table, c, spec, gamma))
}

/// Permutation of Irr(H) induced by σ_a.
pub fn galois_permutation(table: &CharacterTable, h: &crate::groups::FiniteGroup, a: usize) -> Result<Vec<usize>> {
    permutation_of(table, |c| galois_conjugate(table, c, h, a))
}

fn permutation_of(table: &CharacterTable, f: impl Fn(&Character) -> Character) -> Result<Vec<usize>> {
    table
        .chars
        .iter()
        .map(|c| match table.index_of(&f(c)) {
            Some(i) => Ok(i),
            None => inconsistent("image of an irreducible character is not irreducible"),
        })
        .collect()
}

/// Partition of `chars` (indices into the table) into D-orbits. Each orbit is
/// sorted; orbits are ordered by representative (the minimal index).
pub fn galois_orbits(table: &CharacterTable, h: &crate::groups::FiniteGroup, chars: &[usize], d: &DecompGroup) -> Result<Vec<Vec<usize>>> {
    let perms: Vec<Vec<usize>> = d
        .members
        .iter()
        .map(|&a| galois_permutation(table, h, a))
        .collect::<Result<_>>()?;
    let mut seen = vec![false; table.len()];
    let mut orbits = Vec::new();
    let mut sorted = chars.to_vec();
    sorted.sort_unstable();
    for &c in &sorted {
        if seen[c] {
            continue;
        }
        let mut orbit: Vec<usize> = perms.iter().map(|p| p[c]).collect();
        orbit.push(c);
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            seen[x] = true;
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LDescriptor {
    pub conductor: usize,
    /// The subgroup of D fixing L inside ℚ_l(ζ_N); it is G₀.
    pub fixing_subgroup: Vec<usize>,
    /// [L : ℚ_l] = |D| / |fixing subgroup|.
    pub degree: usize,
}

/// Orbit data of an irreducible η of H under ⟨γ⟩ and the decomposition group.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitInvariants {
    pub eta: usize,
    pub eta_degree: usize,
    /// St(η) as elements of the truncation: all (h, i) with w_χ | i.
    pub stabilizer: Vec<usize>,
    pub w_chi: usize,
    pub v_chi: usize,
    pub g0_generator: GaloisAut,
    pub g0_order: usize,
    /// [ℚ_l(η) : ℚ_l], the size of the D-orbit of η.
    pub field_degree: usize,
    /// Conductor of ℚ(η): the least N with all values in ℚ(ζ_N).
    pub eta_conductor: usize,
    pub l_descriptor: LDescriptor,
    /// The γ-orbit η, η^γ, …, η^{γ^{w−1}}.
    pub gamma_orbit: Vec<usize>,
    /// Union of the D-orbits of the γ-orbit, sorted.
    pub rational_orbit: Vec<usize>,
}

/// Precomputed permutations shared by all orbit computations on one spec.
pub struct OrbitContext<'a> {
    pub table: &'a CharacterTable,
    pub spec: &'a GSpec,
    pub d: &'a DecompGroup,
    pub gamma: Vec<usize>,
    pub galois: Vec<Vec<usize>>,
}

impl<'a> OrbitContext<'a> {
    pub fn new(table: &'a CharacterTable, spec: &'a GSpec, d: &'a DecompGroup) -> Result<Self> {
        let gamma = gamma_permutation(table, spec)?;
        let galois = d
            .members
            .iter()
            .map(|&a| galois_permutation(table, spec.h(), a))
            .collect::<Result<_>>()?;
        Ok(OrbitContext {
            table,
            spec,
            d,
            gamma,
            galois,
        })
    }

    pub fn gamma_orbit(&self, eta: usize) -> Vec<usize> {
        let mut orbit = vec![eta];
        let mut x = self.gamma[eta];
        while x != eta {
            orbit.push(x);
            x = self.gamma[x];
        }
        orbit
    }

    pub fn d_orbit(&self, eta: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.galois.iter().map(|p| p[eta]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Orbits of ⟨γ⟩ × D on Irr(H), each sorted, ordered by minimal index.
    pub fn rational_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.table.len()];
        let mut out = Vec::new();
        for c in 0..self.table.len() {
            if seen[c] {
                continue;
            }
            let mut orbit: Vec<usize> = self
                .gamma_orbit(c)
                .into_iter()
                .flat_map(|x| self.d_orbit(x))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn invariants(&self, eta: usize) -> Result<OrbitInvariants> {
        let spec = self.spec;
        let gamma_orbit = self.gamma_orbit(eta);
        let w = gamma_orbit.len();
        let l = spec.l();
        if !crate::arith::is_power_of(w, l) || spec.layers() % w != 0 {
            return inconsistent(format!("γ-orbit length {w} does not divide l^m"));
        }
        let d_orbit = self.d_orbit(eta);
        let v = (1..=w)
            .find(|&j| d_orbit.contains(&gamma_orbit[j % w]))
            .expect("j = w always qualifies");
        if w % v != 0 {
            return inconsistent(format!("v_χ = {v} does not divide w_χ = {w}"));
        }
        let g0: Vec<usize> = self
            .d
            .members
            .iter()
            .zip(&self.galois)
            .filter(|(_, p)| gamma_orbit.contains(&p[eta]))
            .map(|(&a, _)| a)
            .collect();
        let stab_d = self
            .galois
            .iter()
            .filter(|p| p[eta] == eta)
            .count();
        if g0.len() % stab_d != 0 || g0.len() / stab_d != w / v {
            return inconsistent(format!(
                "|G₀| = {} / {stab_d} disagrees with w_χ / v_χ = {}",
                g0.len(),
                w / v
            ));
        }
        let target = gamma_orbit[v % w];
        let gen = self
            .d
            .members
            .iter()
            .zip(&self.galois)
            .find(|(_, p)| p[eta] == target)
            .map(|(&a, _)| a)
            .expect("v_χ is realised by some σ");
        let nh = spec.h().order();
        let stabilizer = (0..spec.fin_order())
            .filter(|&g| (g / nh) % w == 0)
            .collect();
        let eta_conductor = self.table.chars[eta]
            .values
            .iter()
            .map(|z| z.conductor())
            .fold(1, crate::arith::lcm);
        let mut rational_orbit: Vec<usize> = gamma_orbit.iter().flat_map(|&x| self.d_orbit(x)).collect();
        rational_orbit.sort_unstable();
        rational_orbit.dedup();
        Ok(OrbitInvariants {
            eta,
            eta_degree: self.table.chars[eta].degree,
            stabilizer,
            w_chi: w,
            v_chi: v,
            g0_generator: GaloisAut {
                conductor: self.d.conductor,
                exponent: gen,
            },
            g0_order: w / v,
            field_degree: d_orbit.len(),
            eta_conductor,
            l_descriptor: LDescriptor {
                conductor: self.d.conductor,
                degree: self.d.order() / g0.len(),
                fixing_subgroup: g0,
            },
            gamma_orbit,
            rational_orbit,
        })
    }
}

/// Orbit invariants of a single character (see [`OrbitContext`]).
pub fn orbit_invariants(table: &CharacterTable, eta: usize, spec: &GSpec, d: &DecompGroup) -> Result<OrbitInvariants> {
    OrbitContext::new(table, spec, d)?.invariants(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{decomposition_group, galois_apply, CycNumber};
    use crate::groups::{abelian, cyclic, GroupAut};
    use proptest::prelude::*;

    fn z9_spec() -> GSpec {
        let g = cyclic(9).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1], &[4]).unwrap();
        GSpec::new(g, a, 3).unwrap()
    }

    fn transvection_spec() -> GSpec {
        let g = abelian(&[3, 3]).unwrap();
        // (a, b) ↦ (a + b, b): generator a = 1 ↦ a, b = 3 ↦ a + b
        let a = GroupAut::from_generator_images(&g, &[1, 3], &[1, 4]).unwrap();
        GSpec::new(g, a, 3).unwrap()
    }

    fn faithful(table: &CharacterTable, gen: usize, n: usize) -> usize {
        (0..table.len())
            .find(|&c| *table.value(c, gen) == CycNumber::zeta(n))
            .unwrap()
    }

    #[test]
    fn conjugation_examples() {
        let spec = z9_spec();
        let t = CharacterTable::new(spec.h()).unwrap();
        let eta = faithful(&t, 1, 9);
        let same = conj_action(&t, &t.chars[eta], &spec, 0);
        assert_eq!(same, t.chars[eta]);
        let twisted = conj_action(&t, &t.chars[eta], &spec, 9);
        for k in 0..9 {
            assert_eq!(twisted.values[t.class_of[k]], CycNumber::zeta_pow(9, 4 * k as i64));
        }

        let spec = transvection_spec();
        let t = CharacterTable::new(spec.h()).unwrap();
        // χ_{1,0}: a ↦ ζ, b ↦ 1; its γ-twist is χ_{1,1}
        let chi10 = (0..t.len())
            .find(|&c| *t.value(c, 1) == CycNumber::zeta(3) && t.value(c, 3).is_one())
            .unwrap();
        let img = conj_action(&t, &t.chars[chi10], &spec, 9);
        assert_eq!(img.values[t.class_of[1]], CycNumber::zeta(3));
        assert_eq!(img.values[t.class_of[3]], CycNumber::zeta(3));
    }

    use num_traits::One;

    #[test]
    fn invariant_examples() {
        let spec = z9_spec();
        let t = CharacterTable::new(spec.h()).unwrap();
        let d = decomposition_group(9, 3).unwrap();
        let triv = orbit_invariants(&t, 0, &spec, &d).unwrap();
        assert_eq!((triv.w_chi, triv.v_chi, triv.g0_order, triv.l_descriptor.degree), (1, 1, 1, 1));
        let eta = faithful(&t, 1, 9);
        let inv = orbit_invariants(&t, eta, &spec, &d).unwrap();
        assert_eq!((inv.w_chi, inv.v_chi, inv.g0_order), (3, 1, 3));
        assert_eq!(inv.l_descriptor.fixing_subgroup, vec![1, 4, 7]);
        assert_eq!(inv.l_descriptor.degree, 2);
        assert_eq!(inv.g0_generator.exponent, 4);
        assert_eq!(inv.field_degree, 6);

        let spec = transvection_spec();
        let t = CharacterTable::new(spec.h()).unwrap();
        let d = decomposition_group(3, 3).unwrap();
        let chi10 = (0..t.len())
            .find(|&c| *t.value(c, 1) == CycNumber::zeta(3) && t.value(c, 3).is_one())
            .unwrap();
        let inv = orbit_invariants(&t, chi10, &spec, &d).unwrap();
        assert_eq!((inv.w_chi, inv.v_chi, inv.g0_order), (3, 3, 1));
        assert_eq!(inv.l_descriptor.degree, 2);
        assert!(inv.g0_generator.is_identity());
    }

    #[test]
    fn orbit_sizes() {
        let t = CharacterTable::new(&cyclic(9).unwrap()).unwrap();
        let all: Vec<usize> = (0..9).collect();
        let g = cyclic(9).unwrap();
        let mut sizes: Vec<usize> = galois_orbits(&t, &g, &all, &decomposition_group(9, 3).unwrap())
            .unwrap()
            .iter()
            .map(Vec::len)
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 6]);

        let g7 = cyclic(7).unwrap();
        let t = CharacterTable::new(&g7).unwrap();
        let all: Vec<usize> = (0..7).collect();
        let mut sizes: Vec<usize> = galois_orbits(&t, &g7, &all, &decomposition_group(7, 3).unwrap())
            .unwrap()
            .iter()
            .map(Vec::len)
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 6]);
        let trivial_d = DecompGroup {
            conductor: 7,
            members: vec![1],
        };
        assert_eq!(galois_orbits(&t, &g7, &all, &trivial_d).unwrap().len(), 7);
    }

    #[test]
    fn power_map_matches_value_action() {
        let spec = z9_spec();
        let t = CharacterTable::new(spec.h()).unwrap();
        for a in [2usize, 4, 5, 7, 8] {
            let s = GaloisAut::new(9, a).unwrap();
            for c in &t.chars {
                let by_power = galois_conjugate(&t, c, spec.h(), a);
                let by_values: Vec<CycNumber> = c.values.iter().map(|z| galois_apply(&s, z).unwrap()).collect();
                assert_eq!(by_power.values, by_values);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn conj_action_is_an_action(g in 0usize..27, g2 in 0usize..27, eta in 0usize..9) {
            let spec = z9_spec();
            let t = CharacterTable::new(spec.h()).unwrap();
            let gf = crate::groups::semidirect_truncation(&spec).unwrap();
            let e = &t.chars[eta];
            // (η^g)^{g'}(h) = η^g(g' h g'⁻¹) = η(g g' h (g g')⁻¹)
            let lhs = conj_action(&t, &conj_action(&t, e, &spec, g), &spec, g2);
            let rhs = conj_action(&t, e, &spec, gf.mul(g, g2));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn galois_commutes_with_conjugation(g in 0usize..27, a in prop::sample::select(vec![2usize, 4, 5, 7, 8]), eta in 0usize..9) {
            let spec = z9_spec();
            let t = CharacterTable::new(spec.h()).unwrap();
            let e = &t.chars[eta];
            let lhs = galois_conjugate(&t, &conj_action(&t, e, &spec, g), spec.h(), a);
            let rhs = conj_action(&t, &galois_conjugate(&t, e, spec.h(), a), &spec, g);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
