use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::crossed::{alg_mul, AlgebraElement, CrossedAlgebra};
use crate::cyclo::CycNumber;
use crate::error::{inconsistent, Error, Result};
use crate::linalg::{nullspace, rank, Matrix};
use crate::wedderburn::star::{OrbitGroup, StarAlgebra};
use crate::wedderburn::subalg::{fixed_dim, project, rank_of, span_basis, span_center};
use crate::wedderburn::{failure, Check, VerificationResult};
use crate::{CycPoly, RatFunc};

/// M₀^{l^n} = 1 for the l^n × l^n matrix with x⁻¹ on the superdiagonal and
/// x^{l^n−1} in the lower-left corner, x an indeterminate. `corner_twist`
/// multiplies the corner entry.
pub fn ll1_matrix_check(ln: usize, corner_twist: Option<&CycNumber>) -> Result<VerificationResult> {
    if ln == 0 {
        return Err(Error::PreconditionViolation("l^n must be at least 1".into()));
    }
    let x_inv = RatFunc::new(CycPoly::one(), CycPoly::t())?;
    let mut corner = RatFunc::t_pow(ln - 1);
    if let Some(z) = corner_twist {
        corner = corner * RatFunc::constant(z.clone());
    }
    let mut m: Matrix<RatFunc> = Matrix::zeros(ln, ln);
    for k in 0..ln - 1 {
        m[(k, k + 1)] = x_inv.clone();
    }
    m[(ln - 1, 0)] = corner;
    let p = m.pow(ln as u64);
    let mut r = VerificationResult::default();
    r.push(Check::holds(format!("M₀^{ln} = 1"), p.is_identity()));
    r.into_result()
}

type AMatrix = Vec<Vec<AlgebraElement>>;

fn mat_mul(a: &AMatrix, b: &AMatrix) -> Result<AMatrix> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = AlgebraElement::zero(a[0][0].algebra());
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.try_add(&alg_mul(&a[i][k], &b[k][j])?)?;
                        }
                    }
                    Ok(acc)
                })
                .collect()
        })
        .collect()
}

/// (h·γ^i)⁻¹ = α^{−i}(h⁻¹)·γ^{l^m−i}·T⁻¹.
fn basis_inverse(alg: &Arc<CrossedAlgebra>, h: usize, i: usize) -> Result<AlgebraElement> {
    let hinv = alg.spec().h().inv(h);
    if i == 0 {
        return Ok(AlgebraElement::basis(alg, hinv, 0));
    }
    let layers = alg.layers();
    let t_inv = RatFunc::new(CycPoly::one(), CycPoly::t())?;
    Ok(AlgebraElement::term(alg, alg.twist(layers - i, hinv), layers - i, t_inv))
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerReport {
    pub ln: usize,
    pub dim_w: usize,
    pub dim_f: usize,
    pub dim_e: usize,
    pub dim_v: usize,
    pub dim_centralizer: usize,
    pub dim_fixed: usize,
    /// The corner entry of w: the W-component of x^{l^n}.
    pub x_ln_component: String,
    pub checks: Vec<Check>,
}

struct Setup<'a> {
    alg: &'a Arc<CrossedAlgebra>,
    in_s: Vec<bool>,
    /// ε·y^j for j ≤ l^n.
    y_pow: Vec<AlgebraElement>,
    /// y^{−j} for j < l^n.
    y_inv_pow: Vec<AlgebraElement>,
    ln: usize,
}

impl Setup<'_> {
    /// (c_0, …, c_{l^n−1}) ∈ W^{l^n} with u = Σ c_j·y^j.
    fn coords(&self, u: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
        let c: Vec<AlgebraElement> = (0..self.ln)
            .map(|j| Ok(project(&alg_mul(u, &self.y_inv_pow[j])?, &self.in_s)))
            .collect::<Result<_>>()?;
        let mut back = AlgebraElement::zero(self.alg);
        for (j, cj) in c.iter().enumerate() {
            back = back.try_add(&alg_mul(cj, &self.y_pow[j])?)?;
        }
        if back != *u {
            return inconsistent("element is not in ⊕_j W·x^j");
        }
        Ok(c)
    }

    /// The matrix of a ↦ f·a·v on V in the basis ε·y^k, rows acting from
    /// the right.
    fn phi(&self, f: &AlgebraElement, v: &AlgebraElement) -> Result<AMatrix> {
        (0..self.ln)
            .map(|k| self.coords(&alg_mul(&alg_mul(f, &self.y_pow[k])?, v)?))
            .collect()
    }

    fn scalar_matrix(&self, a: &AlgebraElement) -> AMatrix {
        (0..self.ln)
            .map(|i| {
                (0..self.ln)
                    .map(|j| if i == j { a.clone() } else { AlgebraElement::zero(self.alg) })
                    .collect()
            })
            .collect()
    }
}

/// Flattened solutions X (entries in span(basis)) of M·X = X·M.
fn commutant(alg: &Arc<CrossedAlgebra>, basis: &[AlgebraElement], m: &AMatrix) -> Result<Vec<Vec<RatFunc>>> {
    let ln = m.len();
    let nb = basis.len();
    let dim = alg.dim();
    let nvars = ln * ln * nb;
    let var = |i: usize, j: usize, k: usize| (i * ln + j) * nb + k;
    let mut left = vec![vec![Vec::new(); ln]; ln];
    let mut right = vec![vec![Vec::new(); ln]; ln];
    for p in 0..ln {
        for i in 0..ln {
            for b in basis {
                left[p][i].push(alg_mul(&m[p][i], b)?.to_vector());
                right[p][i].push(alg_mul(b, &m[p][i])?.to_vector());
            }
        }
    }
    let mut rows = Vec::new();
    for p in 0..ln {
        for q in 0..ln {
            for c in 0..dim {
                let mut row = vec![RatFunc::zero(); nvars];
                for i in 0..ln {
                    for k in 0..nb {
                        let a = &left[p][i][k][c];
                        if !a.is_zero() {
                            row[var(i, q, k)] = row[var(i, q, k)].clone() + a.clone();
                        }
                        let b = &right[i][q][k][c];
                        if !b.is_zero() {
                            row[var(p, i, k)] = row[var(p, i, k)].clone() - b.clone();
                        }
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let sols = nullspace(&rows, nvars);
    let vecs: Vec<Vec<RatFunc>> = basis.iter().map(|b| b.to_vector()).collect();
    Ok(sols
        .iter()
        .map(|s| {
            let mut out = vec![RatFunc::zero(); ln * ln * dim];
            for i in 0..ln {
                for j in 0..ln {
                    for k in 0..nb {
                        let a = &s[var(i, j, k)];
                        if a.is_zero() {
                            continue;
                        }
                        for c in 0..dim {
                            let x = &vecs[k][c];
                            if !x.is_zero() {
                                let slot = (i * ln + j) * dim + c;
                                out[slot] = out[slot].clone() + a.clone() * x.clone();
                            }
                        }
                    }
                }
            }
            out
        })
        .collect())
}

/// Materialises V_{l^n×l^n} for one orbit group and checks that the
/// centraliser of A = ⊕_j F·(w⁻¹x)^j equals the ⟨w⁻¹x⟩-fixed matrices over
/// W, together with (w⁻¹x)^{l^n} = 1, the f⊗v ↦ l_f∘r_v homomorphism and the
/// dimension counts. `perturb` replaces w by w·ζ.
pub fn centralizer_check(s: &StarAlgebra, group: &OrbitGroup, perturb: Option<&CycNumber>) -> Result<CentralizerReport> {
    let alg = &s.alg;
    let spec = alg.spec();
    let ln = s.l().pow(s.x.n - group.d);
    let comp = &s.components[group.members[0]];
    if ln > 3 {
        return Err(Error::ResourceLimit {
            what: format!("centralizer check with l^n = {ln}"),
            cap: 3,
        });
    }
    if comp.dim > 8 {
        return Err(Error::ResourceLimit {
            what: format!("centralizer check with dim W = {}", comp.dim),
            cap: 8,
        });
    }
    let g_fin = &s.g_fin;
    let eps = AlgebraElement::from_group_ring(alg, &comp.idempotent);
    let (yh, yi) = spec.fin_parts(group.y);
    let y = AlgebraElement::basis(alg, yh, yi);
    let y_inv = basis_inverse(alg, yh, yi)?;
    let mut checks = VerificationResult::default();
    checks.push(Check::holds("x·x⁻¹ = 1", alg_mul(&y, &y_inv)? == AlgebraElement::one(alg)));

    let mut in_s = vec![false; g_fin.order()];
    for &g in &s.g_i_fin {
        in_s[g] = true;
    }
    let mut y_pow = vec![eps.clone()];
    for j in 0..ln {
        y_pow.push(alg_mul(&y_pow[j], &y)?);
    }
    let mut y_inv_pow = vec![AlgebraElement::one(alg)];
    for j in 1..ln {
        y_inv_pow.push(alg_mul(&y_inv_pow[j - 1], &y_inv)?);
    }
    let st = Setup {
        alg,
        in_s,
        y_pow,
        y_inv_pow,
        ln,
    };

    let w_basis = span_basis(alg, &s.g_i_fin, &comp.idempotent);
    let mut gens = g_fin.generators_of(&s.g_i_fin);
    gens.push(group.y);
    let v_basis = span_basis(alg, &g_fin.generated(&gens), &comp.idempotent);
    let f_basis = span_center(alg, g_fin, &s.g_i_fin, &comp.idempotent);
    let dim_e = fixed_dim(&f_basis, g_fin, group.y);

    // x^{l^n} has its component ε·x^{l^n} in W
    let corner = st.y_pow[ln].clone();
    checks.push(Check::holds("ε·x^{l^n} ∈ W", project(&corner, &st.in_s) == corner));

    // w = 1⊗x = r_x; then M₀ = x⁻¹·w
    let r_x = st.phi(&eps, &alg_mul(&eps, &y)?)?;
    let w: AMatrix = match perturb {
        None => r_x.clone(),
        Some(z) => {
            let z = RatFunc::constant(z.clone());
            r_x.iter().map(|row| row.iter().map(|e| e.scale(&z)).collect()).collect()
        }
    };
    let x_inv = alg_mul(&eps, &y_inv)?;
    let m0 = mat_mul(&st.scalar_matrix(&x_inv), &w)?;
    let mut p = st.scalar_matrix(&eps);
    for _ in 0..ln {
        p = mat_mul(&p, &m0)?;
    }
    checks.push(Check::holds("(w⁻¹x)^{l^n} = 1", p == st.scalar_matrix(&eps)));
    checks.push(Check::holds("1⊗x = w", w == r_x));
    if let Some(c) = checks.checks.iter().find(|c| !c.passed) {
        return Err(failure(c));
    }

    // f⊗v ↦ l_f∘r_v is multiplicative
    let fs: Vec<&AlgebraElement> = std::iter::once(&eps).chain(f_basis.iter().take(2)).collect();
    let vs: Vec<AlgebraElement> = [Some(alg_mul(&eps, &y)?), v_basis.first().cloned(), v_basis.last().cloned()]
        .into_iter()
        .flatten()
        .collect();
    let mut hom = true;
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        let (f1, f2) = (fs[a % fs.len()], fs[b % fs.len()]);
        let (v1, v2) = (&vs[a % vs.len()], &vs[b % vs.len()]);
        let lhs = mat_mul(&st.phi(f1, v1)?, &st.phi(f2, v2)?)?;
        let rhs = st.phi(&alg_mul(f2, f1)?, &alg_mul(v1, v2)?)?;
        hom &= lhs == rhs;
    }
    checks.push(Check::holds("φ(f⊗v)·φ(f′⊗v′) = φ(ff′⊗vv′)", hom));

    // Z_V(F) = W
    let dim_v = v_basis.len();
    let mut rows: Vec<Vec<RatFunc>> = Vec::new();
    for f in &f_basis {
        let comms: Vec<Vec<RatFunc>> = v_basis
            .iter()
            .map(|v| Ok(alg_mul(f, v)?.try_sub(&alg_mul(v, f)?)?.to_vector()))
            .collect::<Result<_>>()?;
        for c in 0..alg.dim() {
            let row: Vec<RatFunc> = comms.iter().map(|col| col[c].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let z_basis: Vec<AlgebraElement> = nullspace(&rows, dim_v)
        .iter()
        .map(|sol| {
            sol.iter().zip(&v_basis).try_fold(AlgebraElement::zero(alg), |acc, (a, v)| acc.try_add(&v.scale(a)))
        })
        .collect::<Result<_>>()?;
    let mut union = z_basis.clone();
    union.extend(w_basis.iter().cloned());
    checks.push(Check::equal("dim Z_V(F) = dim W", w_basis.len(), z_basis.len()));
    checks.push(Check::equal("Z_V(F) = W", w_basis.len(), rank_of(&union)));

    // centraliser of A versus fixed matrices over W
    let centralizer = commutant(alg, &z_basis, &m0)?;
    let mut w_inv_x = st.scalar_matrix(&eps);
    for _ in 0..ln - 1 {
        w_inv_x = mat_mul(&w_inv_x, &m0)?;
    }
    let fixed = commutant(alg, &w_basis, &w_inv_x)?;
    let ncols = ln * ln * alg.dim();
    let r_c = rank(&centralizer, ncols);
    let r_f = rank(&fixed, ncols);
    let mut both = centralizer.clone();
    both.extend(fixed.iter().cloned());
    let r_both = rank(&both, ncols);
    checks.push(Check::holds(
        "Z(A) = (W_{l^n×l^n})^⟨w⁻¹x⟩",
        r_c == r_f && r_f == r_both,
    ));

    let dim_f = f_basis.len();
    let dim_w = w_basis.len();
    checks.push(Check::equal(
        "[V_{l^n×l^n}:E] = [A:E]·[Z(A):E]",
        ln * ln * dim_v * dim_e,
        ln * dim_f * r_c,
    ));
    checks.push(Check::equal("[V:E] = l^{2n}·[W:F]", ln * ln * dim_w * dim_e, dim_f * dim_v));
    let checks = checks.into_result()?;

    Ok(CentralizerReport {
        ln,
        dim_w,
        dim_f,
        dim_e,
        dim_v,
        dim_centralizer: r_c,
        dim_fixed: r_f,
        x_ln_component: corner.to_string(),
        checks: checks.checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, is_q_elementary, GSpec, GroupAut, QType};
    use crate::wedderburn::{elementary_decomposition, orbit_analysis};

    #[test]
    fn ll1_identity() {
        for ln in [1, 3, 9, 27] {
            ll1_matrix_check(ln, None).unwrap();
        }
        let z = CycNumber::zeta(3);
        assert!(matches!(ll1_matrix_check(3, Some(&z)), Err(Error::InternalConsistency(_))));
        assert!(ll1_matrix_check(0, None).is_err());
    }

    fn order_21() -> Vec<StarAlgebra> {
        let g = cyclic(7).unwrap();
        let a = GroupAut::from_generator_images(&g, &[1], &[2]).unwrap();
        let spec = GSpec::new(g, a, 3).unwrap();
        let data = is_q_elementary(&spec, QType::L, None).unwrap().unwrap();
        elementary_decomposition(&spec, &data).unwrap()
    }

    #[test]
    fn centralizer_order_21() {
        let parts = order_21();
        let p1 = &parts[1];
        let g = &orbit_analysis(p1).unwrap()[0];
        let r = centralizer_check(p1, g, None).unwrap();
        assert_eq!((r.ln, r.dim_w, r.dim_f, r.dim_e, r.dim_v), (3, 6, 6, 2, 18));
        assert_eq!((r.dim_centralizer, r.dim_fixed), (18, 18));
        assert_eq!(r.ln * r.ln * r.dim_v * r.dim_e, 324);
        let z = CycNumber::zeta(7);
        let err = centralizer_check(p1, g, Some(&z)).unwrap_err();
        assert!(matches!(err, Error::InternalConsistency(ref m) if m.contains("(w⁻¹x)^{l^n} = 1")));
    }

    #[test]
    fn centralizer_trivial_layer() {
        let parts = order_21();
        let p0 = &parts[0];
        let g = &orbit_analysis(p0).unwrap()[0];
        let r = centralizer_check(p0, g, None).unwrap();
        assert_eq!(r.ln, 1);
        assert_eq!(r.dim_centralizer, r.dim_w);
    }
}
