use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{inv_mod, is_prime, pow_mod};
use crate::cyclo::{cyclotomic_coeffs, ratio, CycNumber};
use crate::error::{inconsistent, Error, Result};
use crate::groups::FiniteGroup;

/// An irreducible character, stored by conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<CycNumber>,
    pub degree: usize,
    /// Reduction of the values modulo the Dixon prime; injective on Irr.
    modp: Vec<u64>,
}

impl Character {
    /// The same character with classes renumbered: value at class k becomes
    /// the old value at class `perm[k]`.
    pub(crate) fn pulled_back(&self, perm: &[usize]) -> Character {
        Character {
            values: perm.iter().map(|&k| self.values[k].clone()).collect(),
            degree: self.degree,
            modp: perm.iter().map(|&k| self.modp[k]).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(One::is_one)
    }
}

/// Complete character table of a finite group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub chars: Vec<Character>,
    /// exp(H); every value lies in ℚ(ζ_exponent).
    pub exponent: usize,
    pub prime: u64,
    order: usize,
    index: HashMap<Vec<u64>, usize>,
}

fn reduce_rows(rows: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pr) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn nullspace_mod(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a = rows.to_vec();
    let pivots = reduce_rows(&mut a, ncols, p);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

fn det_mod(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = inv_mod(a[c][c], p).unwrap();
        for i in c + 1..n {
            if a[i][c] == 0 {
                continue;
            }
            let f = a[i][c] * inv % p;
            for j in c..n {
                a[i][j] = (a[i][j] + p - f * a[c][j] % p) % p;
            }
        }
    }
    det
}

/// Smallest p ≡ 1 (mod e) with p > 2√n.
pub fn dixon_prime(e: usize, n: usize) -> Result<u64> {
    let mut p = e + 1;
    while (p as u128) * (p as u128) <= 4 * n as u128 || !is_prime(p) {
        p += e;
        if p > 1_000_000 {
            return Err(Error::ResourceLimit {
                what: "no suitable Dixon prime".into(),
                cap: 1_000_000,
            });
        }
    }
    Ok(p as u64)
}

fn primitive_root_of_unity(e: u64, p: u64) -> u64 {
    // an element of exact order e in 𝔽_p^×
    let factors = crate::arith::prime_divisors(e as usize);
    (2..p)
        .map(|g| pow_mod(g, (p - 1) / e, p))
        .find(|&z| factors.iter().all(|&q| pow_mod(z, e / q as u64, p) != 1))
        .unwrap_or(1)
}

impl CharacterTable {
    /// Dixon's method: common eigenvectors of the class multiplication
    /// matrices over 𝔽_p, then lifting of the values to ℚ(ζ_e) from the
    /// eigenvalue multiplicities of each element.
    pub fn new(h: &FiniteGroup) -> Result<Self> {
        let n = h.order();
        let classes = h.conjugacy_classes();
        let r = classes.len();
        let mut class_of = vec![0usize; n];
        for (k, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = k;
            }
        }
        let e = h.exponent();
        let p = dixon_prime(e, n)?;
        let id_class = class_of[h.identity()];
        let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();

        // c[j][i][k] = #{(x, y) ∈ C_j × C_i : xy = g_k}
        let mut coef = vec![vec![vec![0u64; r]; r]; r];
        for (j, cj) in classes.iter().enumerate() {
            for (i, ci) in classes.iter().enumerate() {
                let mut counts = vec![0u64; r];
                for &x in cj {
                    for &y in ci {
                        counts[class_of[h.mul(x, y)]] += 1;
                    }
                }
                for k in 0..r {
                    debug_assert_eq!(counts[k] % sizes[k], 0);
                    coef[j][i][k] = (counts[k] / sizes[k]) % p;
                }
            }
        }

        // split 𝔽_p^r into common eigenspaces of the A_j = (c[j][i][k])_{ik}
        let identity_basis: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..r).map(|k| u64::from(i == k)).collect())
            .collect();
        let mut spaces = vec![identity_basis];
        for j in 0..r {
            if spaces.iter().all(|s| s.len() == 1) {
                break;
            }
            let mut next = Vec::new();
            for basis in spaces {
                if basis.len() == 1 {
                    next.push(basis);
                    continue;
                }
                next.extend(split_space(&basis, &coef[j], p)?);
            }
            spaces = next;
        }
        if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
            return inconsistent("class algebra did not split into one-dimensional eigenspaces");
        }

        let inverse_class: Vec<usize> = classes.iter().map(|c| class_of[h.inv(c[0])]).collect();
        let z = primitive_root_of_unity(e as u64, p);
        let mut chars = Vec::with_capacity(r);
        for space in spaces {
            let v = &space[0];
            let lead = v[id_class];
            if lead == 0 {
                return inconsistent("eigenvector vanishes at the identity class");
            }
            let inv = inv_mod(lead, p).unwrap();
            let omega: Vec<u64> = v.iter().map(|&x| x * inv % p).collect();
            // χ(1)² = |H| / Σ_k ω_k ω_{k*} / |C_k|
            let mut s = 0u64;
            for k in 0..r {
                let t = omega[k] * omega[inverse_class[k]] % p * inv_mod(sizes[k] % p, p).unwrap() % p;
                s = (s + t) % p;
            }
            let d2 = (n as u64 % p) * inv_mod(s, p).ok_or(Error::InternalConsistency(
                "degenerate norm in Dixon lifting".into(),
            ))? % p;
            let d = (1..=n as u64)
                .take_while(|d| d * d <= n as u64)
                .find(|d| d * d % p == d2)
                .ok_or_else(|| Error::InternalConsistency("no integral character degree".into()))?;
            let modp: Vec<u64> = (0..r)
                .map(|k| omega[k] * (d % p) % p * inv_mod(sizes[k] % p, p).unwrap() % p)
                .collect();
            let mut values = Vec::with_capacity(r);
            for (k, c) in classes.iter().enumerate() {
                values.push(lift_value(h, c[0], &class_of, &modp, d, e, z, p).map_err(|msg| {
                    Error::InternalConsistency(format!("lifting class {k}: {msg}"))
                })?);
            }
            chars.push(Character {
                values,
                degree: d as usize,
                modp,
            });
        }
        chars.sort_by(|a, b| {
            b.is_trivial()
                .cmp(&a.is_trivial())
                .then(a.degree.cmp(&b.degree))
                .then_with(|| a.modp.cmp(&b.modp))
        });
        let index = chars.iter().enumerate().map(|(i, c)| (c.modp.clone(), i)).collect();
        let table = CharacterTable {
            classes,
            class_of,
            chars,
            exponent: e,
            prime: p,
            order: n,
            index,
        };
        table.check_orthogonality()?;
        Ok(table)
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.chars.iter().map(|c| c.degree).collect()
    }

    /// χ(h) for an element h.
    pub fn value(&self, chi: usize, h: usize) -> &CycNumber {
        &self.chars[chi].values[self.class_of[h]]
    }

    /// Position of a character in the table.
    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        self.index.get(&chi.modp).copied()
    }

    /// Class permutation induced by an element map f: class k ↦ class of f(g_k).
    pub fn class_map(&self, f: impl Fn(usize) -> usize) -> Vec<usize> {
        self.classes.iter().map(|c| self.class_of[f(c[0])]).collect()
    }

    /// Exact row and column orthogonality and Σχ(1)² = |H|.
    pub fn check_orthogonality(&self) -> Result<()> {
        let n = self.order as i128;
        let e = self.exponent.max(1);
        let phi_poly = cyclotomic_coeffs(e);
        let sizes: Vec<i128> = self.classes.iter().map(|c| c.len() as i128).collect();
        // values as integer vectors in the power basis of ℤ[ζ_e]
        let ints = |z: &CycNumber| -> Result<Vec<i128>> {
            z.lift(e)
                .iter()
                .map(|c| {
                    Some(c)
                        .filter(|c| c.is_integer())
                        .and_then(|c| c.to_integer().to_i128())
                        .ok_or_else(|| Error::InternalConsistency("character value is not an algebraic integer".into()))
                })
                .collect()
        };
        let vals: Vec<Vec<Vec<i128>>> = self
            .chars
            .iter()
            .map(|c| c.values.iter().map(ints).collect())
            .collect::<Result<_>>()?;
        let conj: Vec<Vec<Vec<i128>>> = self
            .chars
            .iter()
            .map(|c| c.values.iter().map(|z| ints(&z.conj())).collect())
            .collect::<Result<_>>()?;
        let deg = phi_poly.len() - 1;
        let is_int = |mut acc: Vec<i128>, expected: i128| {
            reduce_mod(&mut acc, &phi_poly);
            acc[0] == expected && acc[1..deg.max(1)].iter().all(|&x| x == 0)
        };
        for a in 0..self.chars.len() {
            for b in a..self.chars.len() {
                let mut acc = vec![0i128; 2 * deg.max(1)];
                for k in 0..self.classes.len() {
                    mul_acc(&mut acc, &vals[a][k], &conj[b][k], sizes[k]);
                }
                if !is_int(acc, if a == b { n } else { 0 }) {
                    return inconsistent(format!("row orthogonality fails for characters {a}, {b}"));
                }
            }
        }
        for k in 0..self.classes.len() {
            for k2 in k..self.classes.len() {
                let mut acc = vec![0i128; 2 * deg.max(1)];
                for c in 0..self.chars.len() {
                    mul_acc(&mut acc, &vals[c][k], &conj[c][k2], 1);
                }
                if !is_int(acc, if k == k2 { n / sizes[k] } else { 0 }) {
                    return inconsistent(format!("column orthogonality fails for classes {k}, {k2}"));
                }
            }
        }
        let total: usize = self.chars.iter().map(|c| c.degree * c.degree).sum();
        if total != self.order {
            return inconsistent(format!("Σχ(1)² = {total} ≠ |H| = {}", self.order));
        }
        Ok(())
    }
}

/// acc += scale·a·b as polynomials in ζ.
fn mul_acc(acc: &mut [i128], a: &[i128], b: &[i128], scale: i128) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += scale * x * y;
        }
    }
}

/// Remainder modulo the monic integer polynomial `m` (constant term first).
fn reduce_mod(v: &mut [i128], m: &[i64]) {
    let deg = m.len() - 1;
    for top in (deg..v.len()).rev() {
        let c = v[top];
        if c == 0 {
            continue;
        }
        for (j, &mj) in m.iter().enumerate() {
            v[top - deg + j] -= c * mj as i128;
        }
    }
}

/// Splits an eigen-stable subspace (rows of `basis`, in reduced echelon
/// form) into eigenspaces of the matrix (a[i][k]) acting by v ↦ A v.
fn split_space(basis: &[Vec<u64>], a: &[Vec<u64>], p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let r = a.len();
    let dim = basis.len();
    let mut b = basis.to_vec();
    let pivots = reduce_rows(&mut b, r, p);
    // restricted matrix: column t = coordinates of A·b_t
    let images: Vec<Vec<u64>> = b
        .iter()
        .map(|v| {
            (0..r)
                .map(|i| (0..r).fold(0u64, |acc, k| (acc + a[i][k] * v[k]) % p))
                .collect()
        })
        .collect();
    let restricted: Vec<Vec<u64>> = (0..dim)
        .map(|s| (0..dim).map(|t| images[t][pivots[s]]).collect())
        .collect();
    let mut out = Vec::new();
    let mut found = 0;
    for lambda in 0..p {
        let shifted: Vec<Vec<u64>> = restricted
            .iter()
            .enumerate()
            .map(|(s, row)| {
                row.iter()
                    .enumerate()
                    .map(|(t, &x)| if s == t { (x + p - lambda) % p } else { x })
                    .collect()
            })
            .collect();
        if det_mod(&shifted, p) != 0 {
            continue;
        }
        let kernel = nullspace_mod(&shifted, dim, p);
        found += kernel.len();
        let mut vecs: Vec<Vec<u64>> = kernel
            .iter()
            .map(|c| {
                (0..r)
                    .map(|i| (0..dim).fold(0u64, |acc, t| (acc + c[t] * b[t][i]) % p))
                    .collect()
            })
            .collect();
        reduce_rows(&mut vecs, r, p);
        out.push(vecs);
        if found == dim {
            break;
        }
    }
    if found != dim {
        return inconsistent("class multiplication matrix is not diagonalisable over 𝔽_p");
    }
    Ok(out)
}

/// χ(g) = Σ_t m_t ζ_o^t with m_t = (1/o) Σ_j χ̂(g^j) z_o^{−jt}, each m_t ∈ [0, d].
#[allow(clippy::too_many_arguments)]
fn lift_value(
    h: &FiniteGroup,
    g: usize,
    class_of: &[usize],
    modp: &[u64],
    d: u64,
    e: usize,
    z: u64,
    p: u64,
) -> std::result::Result<CycNumber, String> {
    let o = h.element_order(g);
    let zo = pow_mod(z, (e / o) as u64, p);
    let inv_o = inv_mod(o as u64 % p, p).unwrap();
    let mut powers = Vec::with_capacity(o);
    let mut x = h.identity();
    for _ in 0..o {
        powers.push(modp[class_of[x]]);
        x = h.mul(x, g);
    }
    let mut value = CycNumber::zero();
    let mut total = 0u64;
    for t in 0..o {
        let mut s = 0u64;
        for (j, &chi) in powers.iter().enumerate() {
            let w = pow_mod(zo, ((o - (j * t) % o) % o) as u64, p);
            s = (s + chi * w) % p;
        }
        let m = s * inv_o % p;
        if m > d {
            return Err(format!("eigenvalue multiplicity {m} exceeds the degree {d}"));
        }
        total += m;
        if m > 0 {
            value = value + CycNumber::zeta_pow(e, (t * (e / o)) as i64).scale(&ratio(m as i64, 1));
        }
    }
    if total != d {
        return Err(format!("multiplicities sum to {total}, not {d}"));
    }
    Ok(value)
}
