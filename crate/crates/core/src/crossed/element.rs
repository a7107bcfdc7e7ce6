use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cyclo::CycNumber;
use crate::error::{malformed, Result};
use crate::groups::GSpec;
use crate::RatFunc;

/// A = K(T)-span of h·γ^i (h ∈ H, 0 ≤ i < l^m) with γh = α(h)γ and γ^{l^m} = T.
#[derive(Debug)]
pub struct CrossedAlgebra {
    spec: GSpec,
    /// twist[i][h] = α^i(h).
    twist: Vec<Vec<usize>>,
}

impl CrossedAlgebra {
    pub fn new(spec: GSpec) -> Arc<Self> {
        let twist = (0..spec.layers())
            .map(|i| spec.alpha_pow(i).images().to_vec())
            .collect();
        Arc::new(CrossedAlgebra { spec, twist })
    }

    pub fn spec(&self) -> &GSpec {
        &self.spec
    }

    pub fn layers(&self) -> usize {
        self.twist.len()
    }

    pub fn group_order(&self) -> usize {
        self.spec.h().order()
    }

    /// Dimension over K(T): |H|·l^m.
    pub fn dim(&self) -> usize {
        self.group_order() * self.layers()
    }

    /// α^i(h).
    #[inline]
    pub fn twist(&self, i: usize, h: usize) -> usize {
        self.twist[i % self.layers()][h]
    }

    #[inline]
    pub(crate) fn index(&self, h: usize, i: usize) -> usize {
        h + self.group_order() * i
    }

    #[inline]
    pub(crate) fn key(&self, idx: usize) -> (usize, usize) {
        (idx % self.group_order(), idx / self.group_order())
    }
}

/// An element Σ c_{h,i}·h·γ^i of a [`CrossedAlgebra`]; zero coefficients are
/// never stored.
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Arc<CrossedAlgebra>,
    coeffs: BTreeMap<(usize, usize), RatFunc>,
}

impl AlgebraElement {
    pub fn zero(alg: &Arc<CrossedAlgebra>) -> Self {
        AlgebraElement {
            alg: alg.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<CrossedAlgebra>) -> Self {
        Self::basis(alg, alg.spec.h().identity(), 0)
    }

    /// h·γ^i.
    pub fn basis(alg: &Arc<CrossedAlgebra>, h: usize, i: usize) -> Self {
        Self::term(alg, h, i, RatFunc::one())
    }

    pub fn term(alg: &Arc<CrossedAlgebra>, h: usize, i: usize, c: RatFunc) -> Self {
        let mut e = Self::zero(alg);
        assert!(h < alg.group_order() && i < alg.layers(), "basis index out of range");
        if !c.is_zero() {
            e.coeffs.insert((h, i), c);
        }
        e
    }

    pub fn gamma(alg: &Arc<CrossedAlgebra>) -> Self {
        if alg.layers() == 1 {
            Self::term(alg, alg.spec.h().identity(), 0, RatFunc::t_pow(1))
        } else {
            Self::basis(alg, alg.spec.h().identity(), 1)
        }
    }

    /// Σ c_h·h from a dense vector indexed by H.
    pub fn from_group_ring(alg: &Arc<CrossedAlgebra>, coeffs: &[CycNumber]) -> Self {
        let mut e = Self::zero(alg);
        for (h, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                e.coeffs.insert((h, 0), RatFunc::constant(c.clone()));
            }
        }
        e
    }

    /// The dense vector of coefficients, indexed by h + |H|·i.
    pub fn from_vector(alg: &Arc<CrossedAlgebra>, v: &[RatFunc]) -> Self {
        let mut e = Self::zero(alg);
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.coeffs.insert(alg.key(idx), c.clone());
            }
        }
        e
    }

    pub fn to_vector(&self) -> Vec<RatFunc> {
        let mut v = vec![RatFunc::zero(); self.alg.dim()];
        for (&(h, i), c) in &self.coeffs {
            v[self.alg.index(h, i)] = c.clone();
        }
        v
    }

    pub fn algebra(&self) -> &Arc<CrossedAlgebra> {
        &self.alg
    }

    pub fn coeff(&self, h: usize, i: usize) -> RatFunc {
        self.coeffs.get(&(h, i)).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients on H when the element lies in K[H] (layer 0, constant
    /// coefficients).
    pub fn group_ring_coeffs(&self) -> Option<Vec<CycNumber>> {
        let mut v = vec![CycNumber::zero(); self.alg.group_order()];
        for (&(h, i), c) in &self.coeffs {
            if i != 0 {
                return None;
            }
            v[h] = c.as_constant()?;
        }
        Some(v)
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            malformed("operands belong to different algebras")
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            accumulate(&mut out.coeffs, *k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, r: &RatFunc) -> Self {
        if r.is_zero() {
            return Self::zero(&self.alg);
        }
        self.map(|c| c.clone() * r.clone())
    }

    fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        AlgebraElement {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// a·b − b·a.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        alg_mul(self, other)?.try_sub(&alg_mul(other, self)?)
    }
}

fn accumulate(map: &mut BTreeMap<(usize, usize), RatFunc>, k: (usize, usize), c: RatFunc) {
    match map.remove(&k) {
        None => {
            if !c.is_zero() {
                map.insert(k, c);
            }
        }
        Some(old) => {
            let s = old + c;
            if !s.is_zero() {
                map.insert(k, s);
            }
        }
    }
}

/// Product in A: (h, i)·(h′, i′) = (h·α^i(h′), i + i′), with γ^{l^m} = T.
pub fn alg_mul(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.same_algebra(b)?;
    let alg = &a.alg;
    let h = alg.spec.h();
    let layers = alg.layers();
    let mut out = BTreeMap::new();
    for (&(ha, ia), ca) in &a.coeffs {
        for (&(hb, ib), cb) in &b.coeffs {
            let g = h.mul(ha, alg.twist(ia, hb));
            let s = ia + ib;
            let mut c = ca.clone() * cb.clone();
            if s >= layers {
                c = c * RatFunc::t_pow(s / layers);
            }
            accumulate(&mut out, (g, s % layers), c);
        }
    }
    Ok(AlgebraElement {
        alg: alg.clone(),
        coeffs: out,
    })
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let h = self.alg.spec.h();
        for (n, (&(g, i), c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{}", h.label(g))?;
            match i {
                0 => {}
                1 => write!(f, "γ")?,
                _ => write!(f, "γ^{i}")?,
            }
        }
        Ok(())
    }
}

/// Group-ring product in K[H] on dense vectors.
pub(crate) fn group_ring_mul(h: &crate::groups::FiniteGroup, a: &[CycNumber], b: &[CycNumber]) -> Vec<CycNumber> {
    let mut out = vec![CycNumber::zero(); a.len()];
    let bs: Vec<(usize, &CycNumber)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    for (x, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for &(y, cb) in &bs {
            let g = h.mul(x, y);
            out[g] = &out[g] + &(ca * cb);
        }
    }
    out
}
