use serde::Serialize;

use crate::arith::{gcd, is_prime, lcm, split_prime_power};
use crate::cyclo::CycNumber;
use crate::error::{inconsistent, malformed, Result};

/// σ_a : ζ_N ↦ ζ_N^a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GaloisAut {
    pub conductor: usize,
    pub exponent: usize,
}

impl GaloisAut {
    pub fn new(conductor: usize, exponent: usize) -> Result<Self> {
        if conductor == 0 {
            return malformed("Galois automorphism with conductor 0");
        }
        let a = exponent % conductor;
        if conductor != 1 && gcd(a, conductor) != 1 {
            return malformed(format!("{exponent} is not a unit modulo {conductor}"));
        }
        Ok(GaloisAut {
            conductor,
            exponent: if conductor == 1 { 1 } else { a },
        })
    }

    pub fn identity(conductor: usize) -> Self {
        GaloisAut {
            conductor,
            exponent: 1,
        }
    }

    /// σ_a ∘ σ_b = σ_{ab}.
    pub fn compose(&self, other: &GaloisAut) -> Result<GaloisAut> {
        let n = lcm(self.conductor, other.conductor);
        let a = self.lift_exponent(n)?;
        let b = other.lift_exponent(n)?;
        GaloisAut::new(n, a * b % n.max(1))
    }

    pub fn is_identity(&self) -> bool {
        self.conductor == 1 || self.exponent == 1
    }

    /// An exponent modulo `m` (a multiple of the conductor) restricting to
    /// this automorphism.
    fn lift_exponent(&self, m: usize) -> Result<usize> {
        if m % self.conductor != 0 {
            return malformed(format!(
                "cannot lift σ mod {} to conductor {m}",
                self.conductor
            ));
        }
        if m == 1 {
            return Ok(1);
        }
        let mut a = self.exponent;
        while gcd(a, m) != 1 {
            a += self.conductor;
        }
        Ok(a % m)
    }

    /// Restriction to ℚ(ζ_d) for a divisor `d` of the conductor.
    pub fn restrict(&self, d: usize) -> GaloisAut {
        debug_assert_eq!(self.conductor % d, 0);
        GaloisAut {
            conductor: d,
            exponent: if d == 1 { 1 } else { self.exponent % d },
        }
    }
}

/// Image of `z` under `sigma`. The two conductors are reconciled by lifting.
pub fn galois_apply(sigma: &GaloisAut, z: &CycNumber) -> Result<CycNumber> {
    let n = z.conductor();
    if n == 1 {
        return Ok(z.clone());
    }
    if sigma.conductor % n == 0 {
        return Ok(z.apply_exponent(sigma.exponent % n));
    }
    let m = lcm(n, sigma.conductor);
    let a = sigma.lift_exponent(m)?;
    let lifted = CycNumber::from_coeffs(m, z.lift(m));
    Ok(lifted.apply_exponent(a))
}

/// Surrogate for G(ℚ_l(ζ_N)/ℚ_l): the units `a` mod N whose prime-to-l part
/// lies in the cyclic group generated by l.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompGroup {
    pub conductor: usize,
    pub members: Vec<usize>,
}

pub fn decomposition_group(n: usize, l: usize) -> Result<DecompGroup> {
    if n == 0 {
        return malformed("decomposition group of conductor 0");
    }
    if !is_prime(l) {
        return malformed(format!("{l} is not prime"));
    }
    if n == 1 {
        return Ok(DecompGroup {
            conductor: 1,
            members: vec![1],
        });
    }
    let (_, m) = split_prime_power(n, l);
    let mut frob = vec![false; m];
    let mut x = 1 % m;
    loop {
        frob[x] = true;
        x = x * l % m;
        if frob[x] {
            break;
        }
    }
    let members = (1..n)
        .filter(|&a| gcd(a, n) == 1 && frob[a % m])
        .collect();
    Ok(DecompGroup {
        conductor: n,
        members,
    })
}

impl DecompGroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.conductor == 1 || self.members.binary_search(&(a % self.conductor)).is_ok()
    }

    pub fn automorphisms(&self) -> impl Iterator<Item = GaloisAut> + '_ {
        self.members.iter().map(move |&a| GaloisAut {
            conductor: self.conductor,
            exponent: a,
        })
    }

    /// The image of the group under restriction to ℚ(ζ_d).
    pub fn restrict(&self, d: usize) -> DecompGroup {
        assert_eq!(self.conductor % d, 0);
        if d == 1 {
            return DecompGroup {
                conductor: 1,
                members: vec![1],
            };
        }
        let mut members: Vec<usize> = self.members.iter().map(|&a| a % d).collect();
        members.sort_unstable();
        members.dedup();
        DecompGroup {
            conductor: d,
            members,
        }
    }

    pub fn is_subgroup(&self) -> bool {
        let n = self.conductor;
        if n == 1 {
            return self.members == [1];
        }
        self.contains(1)
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(a * b % n)))
    }
}

/// Σ_{σ∈D} σ(z).
pub fn trace_to_fixed(z: &CycNumber, d: &DecompGroup) -> Result<CycNumber> {
    if d.conductor % z.conductor() != 0 {
        return malformed(format!(
            "conductor {} does not divide {}",
            z.conductor(),
            d.conductor
        ));
    }
    let mut acc = CycNumber::from_int(0);
    for s in d.automorphisms() {
        acc = acc + galois_apply(&s, z)?;
    }
    for s in d.automorphisms() {
        if galois_apply(&s, &acc)? != acc {
            return inconsistent("trace is not fixed by the decomposition group");
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    #[test]
    fn galois_examples() {
        let s2 = GaloisAut::new(3, 2).unwrap();
        let z3 = CycNumber::zeta(3);
        assert_eq!(
            galois_apply(&s2, &z3).unwrap(),
            CycNumber::from_int(-1) - z3.clone()
        );
        assert_eq!(galois_apply(&GaloisAut::identity(3), &z3).unwrap(), z3);
        let s4 = GaloisAut::new(9, 4).unwrap();
        let z = CycNumber::zeta(9) + CycNumber::zeta_pow(9, 2);
        // ζ⁴ + ζ⁸ with ζ⁸ = −ζ⁵ − ζ² reduced by hand from ζ⁶ = −ζ³ − 1
        let expected = CycNumber::zeta_pow(9, 4)
            - CycNumber::zeta_pow(9, 5)
            - CycNumber::zeta_pow(9, 2);
        assert_eq!(galois_apply(&s4, &z).unwrap(), expected);
    }

    #[test]
    fn decomposition_groups() {
        assert_eq!(decomposition_group(9, 3).unwrap().members, vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(decomposition_group(7, 3).unwrap().members, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(decomposition_group(7, 2).unwrap().members, vec![1, 2, 4]);
        assert_eq!(decomposition_group(7, 11).unwrap().members, vec![1, 2, 4]);
        assert_eq!(decomposition_group(7, 13).unwrap().members, vec![1, 6]);
        assert!(decomposition_group(0, 3).is_err());
        assert_eq!(decomposition_group(63, 3).unwrap().order(), 36);
        assert!(decomposition_group(21, 5).unwrap().is_subgroup());
    }

    #[test]
    fn traces() {
        let d7 = decomposition_group(7, 3).unwrap();
        assert_eq!(
            trace_to_fixed(&CycNumber::zeta(7), &d7).unwrap(),
            CycNumber::from_int(-1)
        );
        assert_eq!(
            trace_to_fixed(&CycNumber::one(), &d7).unwrap(),
            CycNumber::from_int(6)
        );
        let d9 = decomposition_group(9, 3).unwrap();
        assert!(trace_to_fixed(&CycNumber::zeta(9), &d9).unwrap().is_zero());
        assert_eq!(
            trace_to_fixed(&CycNumber::zeta(3), &d9).unwrap(),
            CycNumber::from_int(-3)
        );
        // a proper subgroup leaves an irrational trace
        let d = decomposition_group(7, 2).unwrap();
        let t = trace_to_fixed(&CycNumber::zeta(7), &d).unwrap();
        assert_eq!(t.conductor(), 7);
    }

    fn unit(n: usize) -> impl Strategy<Value = usize> {
        (1..n).prop_filter("unit", move |a| gcd(*a, n) == 1)
    }

    proptest! {
        #[test]
        fn composition_law(a in unit(63), b in unit(63), c in prop::collection::vec(-3i64..4, 36)) {
            let z = CycNumber::from_coeffs(
                63,
                c.iter().map(|&x| num_rational::BigRational::from_integer(x.into())).collect(),
            );
            let sa = GaloisAut::new(63, a).unwrap();
            let sb = GaloisAut::new(63, b).unwrap();
            let lhs = galois_apply(&sa, &galois_apply(&sb, &z).unwrap()).unwrap();
            let rhs = galois_apply(&sa.compose(&sb).unwrap(), &z).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn trace_is_fixed(l in prop::sample::select(vec![3usize, 5, 7, 11, 13]), k in 0i64..63) {
            let d = decomposition_group(63, l).unwrap();
            let z = CycNumber::zeta_pow(63, k) + CycNumber::zeta_pow(9, 2 * k);
            let t = trace_to_fixed(&z, &d).unwrap();
            for s in d.automorphisms() {
                prop_assert_eq!(galois_apply(&s, &t).unwrap(), t.clone());
            }
        }

        #[test]
        fn galois_is_multiplicative(a in unit(21), x in 0i64..21, y in 0i64..21) {
            let s = GaloisAut::new(21, a).unwrap();
            let u = CycNumber::zeta_pow(21, x) + CycNumber::from_int(2);
            let v = CycNumber::zeta_pow(21, y) - CycNumber::zeta_pow(3, 1);
            let lhs = galois_apply(&s, &(u.clone() * v.clone())).unwrap();
            let rhs = galois_apply(&s, &u).unwrap() * galois_apply(&s, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
