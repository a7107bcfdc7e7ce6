use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::crossed::element::{alg_mul, group_ring_mul, AlgebraElement, CrossedAlgebra};
use crate::crossed::idempotents::{group_ring_is_central, is_central};
use crate::cyclo::CycNumber;
use crate::error::{Error, Result};
use crate::linalg::{bareiss_echelon, nullspace, rref};
use crate::scalar::Field;
use crate::{CycPoly, RatFunc, Rational};

#[derive(Clone, Debug)]
enum Basis {
    /// e ∈ K[H]: the ideal is ⊕_i (e·K[H])·γ^i; rows span e·K[H] over K.
    Layered(Vec<Vec<CycNumber>>),
    /// Rows of an echelon basis over K(T), indexed by h + |H|·i.
    General(Vec<Vec<RatFunc>>),
}

/// The two-sided ideal e·A of a central idempotent e.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub generator: AlgebraElement,
    pub dim: usize,
    pivots: Vec<usize>,
    basis: Basis,
}

impl Ideal {
    pub fn algebra(&self) -> &Arc<CrossedAlgebra> {
        self.generator.algebra()
    }

    /// Echelon basis over K(T).
    pub fn basis(&self) -> Vec<AlgebraElement> {
        let alg = self.algebra();
        match &self.basis {
            Basis::General(rows) => rows.iter().map(|r| AlgebraElement::from_vector(alg, r)).collect(),
            Basis::Layered(rows) => (0..alg.layers())
                .flat_map(|i| rows.iter().map(move |r| layer_element(alg, r, i)))
                .collect(),
        }
    }

    /// Pivot coordinates of the echelon basis (h + |H|·i).
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// dim over K of e·K[H] when e lies in K[H].
    pub fn layer_rank(&self) -> Option<usize> {
        match &self.basis {
            Basis::Layered(rows) => Some(rows.len()),
            Basis::General(_) => None,
        }
    }

    pub fn contains(&self, x: &AlgebraElement) -> Result<bool> {
        Ok(alg_mul(&self.generator, x)? == *x)
    }
}

pub(crate) fn layer_element(alg: &Arc<CrossedAlgebra>, row: &[CycNumber], i: usize) -> AlgebraElement {
    let mut e = AlgebraElement::zero(alg);
    for (h, c) in row.iter().enumerate() {
        if !c.is_zero() {
            e = e
                .try_add(&AlgebraElement::term(alg, h, i, RatFunc::constant(c.clone())))
                .expect("same algebra");
        }
    }
    e
}

fn precondition(msg: &str) -> Error {
    Error::PreconditionViolation(msg.to_string())
}

/// Echelon form of rows over K by fraction-free elimination, pivots scaled
/// to one at the end. Rational input is cleared to integers first.
pub(crate) fn echelon_cyc(rows: &[Vec<CycNumber>], ncols: usize) -> (Vec<Vec<CycNumber>>, Vec<usize>) {
    let rational: Option<Vec<Vec<Rational>>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.to_rational()).collect())
        .collect();
    if let Some(q) = rational {
        let ints: Vec<Vec<BigInt>> = q
            .iter()
            .map(|r| {
                let den = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                r.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect()
            })
            .collect();
        let (ech, pivots) = bareiss_echelon(&ints, ncols);
        let out = ech
            .iter()
            .zip(&pivots)
            .map(|(r, &p)| {
                let piv = r[p].clone();
                r.iter()
                    .map(|x| CycNumber::rational(Rational::new(x.clone(), piv.clone())))
                    .collect()
            })
            .collect();
        return (out, pivots);
    }
    let (ech, pivots) = bareiss_echelon(rows, ncols);
    let out = ech
        .iter()
        .zip(&pivots)
        .map(|(r, &p)| {
            let inv = r[p].inverse().expect("pivot is nonzero");
            r.iter().map(|x| x * &inv).collect()
        })
        .collect();
    (out, pivots)
}

/// e·A for a central idempotent e (both properties are checked). When e lies
/// in K[H] the computation splits over the γ-layers and happens over K.
pub fn ideal_of(e: &AlgebraElement) -> Result<Ideal> {
    let Some(v) = e.group_ring_coeffs() else {
        return ideal_of_general(e);
    };
    let alg = e.algebra();
    let h = alg.spec().h();
    if group_ring_mul(h, &v, &v) != v {
        return Err(precondition("e·e ≠ e"));
    }
    if !group_ring_is_central(alg, &v) {
        return Err(precondition("e·g ≠ g·e for some generator g"));
    }
    let n = h.order();
    // (e·x)[g] = e[g x⁻¹]
    let rows: Vec<Vec<CycNumber>> = (0..n)
        .map(|x| {
            let xi = h.inv(x);
            (0..n).map(|g| v[h.mul(g, xi)].clone()).collect()
        })
        .collect();
    let (rows, layer_pivots) = echelon_cyc(&rows, n);
    let pivots = (0..alg.layers())
        .flat_map(|i| layer_pivots.iter().map(move |&p| p + n * i))
        .collect();
    Ok(Ideal {
        generator: e.clone(),
        dim: rows.len() * alg.layers(),
        pivots,
        basis: Basis::Layered(rows),
    })
}

/// e·A by fraction-free elimination over K[T] on all of {e·(h, i)}.
pub fn ideal_of_general(e: &AlgebraElement) -> Result<Ideal> {
    if alg_mul(e, e)? != *e {
        return Err(precondition("e·e ≠ e"));
    }
    if !is_central(e)? {
        return Err(precondition("e·g ≠ g·e for some generator g"));
    }
    let alg = e.algebra();
    let dim = alg.dim();
    let rows: Vec<Vec<CycPoly>> = (0..dim)
        .map(|idx| {
            let (h, i) = alg.key(idx);
            let row = alg_mul(e, &AlgebraElement::basis(alg, h, i))?.to_vector();
            Ok(clear_denominators(&row))
        })
        .collect::<Result<_>>()?;
    let (ech, pivots) = bareiss_echelon(&rows, dim);
    let basis = ech
        .iter()
        .zip(&pivots)
        .map(|(r, &p)| {
            r.iter()
                .map(|x| RatFunc::new(x.clone(), r[p].clone()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal {
        generator: e.clone(),
        dim: basis.len(),
        pivots,
        basis: Basis::General(basis),
    })
}

fn clear_denominators(row: &[RatFunc]) -> Vec<CycPoly> {
    let mut den = CycPoly::one();
    for x in row {
        let d = x.denominator();
        if !d.is_one() {
            let g = den.gcd(d);
            den = den.clone() * d.div_rem(&g).expect("gcd divides").0;
        }
    }
    row.iter()
        .map(|x| {
            let (q, _) = (den.clone() * x.numerator().clone())
                .div_rem(x.denominator())
                .expect("nonzero denominator");
            q
        })
        .collect()
}

/// A basis of Z(I) over K(T).
#[derive(Clone, Debug)]
pub struct Center {
    pub basis: Vec<AlgebraElement>,
    pub dim: usize,
}

/// The centre of e·A.
///
/// z = Σ z_i γ^i is central iff every z_i satisfies h·z_i·α^i(h)⁻¹ = z_i and
/// α(z_i) = z_i. For e ∈ K[H] these conditions carry no T, so each layer's
/// solutions are e times the orbit sums of the permutation action they define.
pub fn center_of(ideal: &Ideal) -> Result<Center> {
    let Basis::Layered(_) = &ideal.basis else {
        return center_of_general(ideal);
    };
    let alg = ideal.algebra();
    let h = alg.spec().h();
    let n = h.order();
    let e = ideal.generator.group_ring_coeffs().expect("layered ideal");
    let mut basis = Vec::new();
    for i in 0..alg.layers() {
        let orbits = twisted_orbits(alg, i);
        let rows: Vec<Vec<CycNumber>> = orbits
            .iter()
            .map(|o| {
                let mut ind = vec![CycNumber::zero(); n];
                for &x in o {
                    ind[x] = CycNumber::one();
                }
                group_ring_mul(h, &e, &ind)
            })
            .collect();
        let (ech, _) = echelon_cyc(&rows, n);
        basis.extend(ech.iter().map(|r| layer_element(alg, r, i)));
    }
    Ok(Center {
        dim: basis.len(),
        basis,
    })
}

/// Orbits on H of the maps x ↦ h·x·α^i(h)⁻¹ (h a generator) and x ↦ α(x).
fn twisted_orbits(alg: &CrossedAlgebra, i: usize) -> Vec<Vec<usize>> {
    let h = alg.spec().h();
    let n = h.order();
    let mut maps: Vec<Vec<usize>> = h
        .generators()
        .iter()
        .map(|&g| {
            let right = h.inv(alg.twist(i, g));
            (0..n).map(|x| h.mul(h.mul(g, x), right)).collect()
        })
        .collect();
    maps.push((0..n).map(|x| alg.twist(1, x)).collect());
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for m in &maps {
                if !seen[m[x]] {
                    seen[m[x]] = true;
                    orbit.push(m[x]);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// The centre by solving z·g = g·z (g running over generators of A) for z in
/// the span of the ideal's basis, over K(T).
pub fn center_of_general(ideal: &Ideal) -> Result<Center> {
    let alg = ideal.algebra();
    let basis = ideal.basis();
    let mut gens: Vec<AlgebraElement> = alg
        .spec()
        .h()
        .generators()
        .iter()
        .map(|&g| AlgebraElement::basis(alg, g, 0))
        .collect();
    gens.push(AlgebraElement::gamma(alg));
    let cols: Vec<Vec<RatFunc>> = basis
        .iter()
        .map(|b| {
            let mut col = Vec::with_capacity(gens.len() * alg.dim());
            for g in &gens {
                col.extend(b.commutator(g)?.to_vector());
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let nrows = gens.len() * alg.dim();
    let rows: Vec<Vec<RatFunc>> = (0..nrows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .filter(|r: &Vec<RatFunc>| r.iter().any(|x| !x.is_zero()))
        .collect();
    let kernel = if rows.is_empty() {
        (0..basis.len())
            .map(|k| (0..basis.len()).map(|j| if j == k { RatFunc::one() } else { RatFunc::zero() }).collect())
            .collect()
    } else {
        nullspace(&rows, basis.len())
    };
    let mut center = Vec::new();
    for c in &kernel {
        let mut z = AlgebraElement::zero(alg);
        for (ck, b) in c.iter().zip(&basis) {
            if !ck.is_zero() {
                z = z.try_add(&b.scale(ck))?;
            }
        }
        center.push(z);
    }
    let vecs: Vec<Vec<RatFunc>> = center.iter().map(|z| z.to_vector()).collect();
    let (ech, _) = rref(&vecs, alg.dim());
    let basis = ech.iter().map(|r| AlgebraElement::from_vector(alg, r)).collect::<Vec<_>>();
    Ok(Center {
        dim: basis.len(),
        basis,
    })
}
