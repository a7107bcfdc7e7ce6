use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{divisors, euler_phi, lcm, mobius};
use crate::linalg::rref;
use crate::scalar::Field;

/// Reduction data for one conductor: the power basis image of every ζ_N^k.
#[derive(Debug)]
struct Ctx {
    phi: usize,
    /// `red[k]` is ζ_N^k written in the basis ζ_N^0 … ζ_N^{φ(N)−1}.
    red: Vec<Vec<i64>>,
    poly: Vec<i64>,
}

fn int_poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by the monic `x^d − 1`.
fn div_x_d_minus_one(p: &[i64], d: usize) -> Vec<i64> {
    let deg = p.len() - 1;
    let mut rem = p.to_vec();
    let mut q = vec![0i64; deg + 1 - d];
    for i in (d..=deg).rev() {
        let c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] += c;
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Φ_N from Φ_N = ∏_{d | N} (x^d − 1)^{μ(N/d)}.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n > 0);
    let mut num = vec![1i64];
    let mut dens = Vec::new();
    for d in divisors(n) {
        let mut f = vec![0i64; d + 1];
        f[0] = -1;
        f[d] = 1;
        match mobius(n / d) {
            1 => num = int_poly_mul(&num, &f),
            -1 => dens.push(d),
            _ => {}
        }
    }
    for d in dens {
        num = div_x_d_minus_one(&num, d);
    }
    num
}

fn build_ctx(n: usize) -> Ctx {
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    debug_assert_eq!(phi, euler_phi(n));
    let mut red = Vec::with_capacity(n);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        red.push(cur.clone());
        // multiply by x, folding the overflow coefficient through Φ_N
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for j in 0..phi {
                next[j] = next[j]
                    .checked_sub(top.checked_mul(poly[j]).expect("cyclotomic reduction overflow"))
                    .expect("cyclotomic reduction overflow");
            }
        }
        cur = next;
    }
    Ctx { phi, red, poly }
}

fn ctx(n: usize) -> Arc<Ctx> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Ctx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(build_ctx(n)))
        .clone()
}

/// An element of ℚ(ζ_N) in the power basis modulo Φ_N.
///
/// Values that happen to be rational are always stored with conductor 1, so
/// the common rational case never touches the reduction tables. Mixed
/// conductors are combined in ℚ(ζ_lcm).
#[derive(Clone)]
pub struct CycNumber {
    conductor: usize,
    coeffs: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycNumber {
    pub fn from_coeffs(conductor: usize, coeffs: Vec<BigRational>) -> Self {
        assert!(conductor > 0, "conductor must be positive");
        let phi = ctx(conductor).phi;
        assert_eq!(coeffs.len(), phi, "coefficient vector must have length φ(N)");
        CycNumber { conductor, coeffs }.normalized()
    }

    pub fn rational(r: BigRational) -> Self {
        CycNumber {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(q(n))
    }

    /// ζ_N^k.
    pub fn zeta_pow(n: usize, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let c = ctx(n);
        CycNumber {
            conductor: n,
            coeffs: c.red[e].iter().map(|&x| q(x)).collect(),
        }
        .normalized()
    }

    pub fn zeta(n: usize) -> Self {
        Self::zeta_pow(n, 1)
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (self.conductor == 1).then(|| self.coeffs[0].clone())
    }

    /// The value as a rational integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn normalized(mut self) -> Self {
        if self.conductor != 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            let c = std::mem::take(&mut self.coeffs[0]);
            return Self::rational(c);
        }
        self
    }

    /// Reduces a vector indexed by exponents mod N into the power basis.
    fn fold_exponents(n: usize, by_exp: Vec<BigRational>) -> Self {
        let c = ctx(n);
        let mut out = vec![BigRational::zero(); c.phi];
        for (k, v) in by_exp.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (j, &r) in c.red[k].iter().enumerate() {
                if r != 0 {
                    out[j] += &v * q(r);
                }
            }
        }
        CycNumber {
            conductor: n,
            coeffs: out,
        }
        .normalized()
    }

    /// Coefficient vector of `self` viewed in ℚ(ζ_M); `M` must be a multiple
    /// of the conductor.
    pub fn lift(&self, m: usize) -> Vec<BigRational> {
        assert_eq!(m % self.conductor, 0, "lift target must be a multiple of the conductor");
        let phi = ctx(m).phi;
        if self.conductor == m {
            return self.coeffs.clone();
        }
        if self.conductor == 1 {
            let mut v = vec![BigRational::zero(); phi];
            v[0] = self.coeffs[0].clone();
            return v;
        }
        let step = m / self.conductor;
        let mut by_exp = vec![BigRational::zero(); m];
        for (j, c) in self.coeffs.iter().enumerate() {
            by_exp[j * step] = c.clone();
        }
        let c = ctx(m);
        let mut out = vec![BigRational::zero(); phi];
        for (k, v) in by_exp.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (j, &r) in c.red[k].iter().enumerate() {
                if r != 0 {
                    out[j] += &v * q(r);
                }
            }
        }
        out
    }

    /// Expresses `self` inside ℚ(ζ_d) when it lies there.
    pub fn reduce_to(&self, d: usize) -> Option<CycNumber> {
        if self.conductor == 1 || d == self.conductor {
            return Some(self.clone());
        }
        let m = lcm(d, self.conductor);
        let target = self.lift(m);
        let pd = ctx(d).phi;
        let pm = ctx(m).phi;
        // columns: lifted basis ζ_d^j; augmented with the target
        let cols: Vec<Vec<BigRational>> = (0..pd)
            .map(|j| {
                let mut v = vec![BigRational::zero(); pd];
                v[j] = BigRational::one();
                CycNumber {
                    conductor: d,
                    coeffs: v,
                }
                .lift(m)
            })
            .collect();
        let rows: Vec<Vec<BigRational>> = (0..pm)
            .map(|i| {
                let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                r.push(target[i].clone());
                r
            })
            .collect();
        let (red, piv) = rref(&rows, pd + 1);
        if piv.contains(&pd) {
            return None;
        }
        let mut sol = vec![BigRational::zero(); pd];
        for (row, &p) in red.iter().zip(&piv) {
            sol[p] = row[pd].clone();
        }
        Some(CycNumber::from_coeffs(d, sol))
    }

    /// Image under ζ_N ↦ ζ_N^a, with `a` read modulo the conductor.
    pub(crate) fn apply_exponent(&self, a: usize) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor;
        let mut by_exp = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                by_exp[(a % n) * j % n] += c;
            }
        }
        Self::fold_exponents(n, by_exp)
    }

    /// Complex conjugate, i.e. ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        self.apply_exponent(self.conductor - 1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn common(a: &Self, b: &Self) -> (usize, Vec<BigRational>, Vec<BigRational>) {
        if a.conductor == b.conductor {
            return (a.conductor, a.coeffs.clone(), b.coeffs.clone());
        }
        let m = lcm(a.conductor, b.conductor);
        (m, a.lift(m), b.lift(m))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (n, a, b) = Self::common(self, rhs);
        let mut by_exp = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    by_exp[(i + j) % n] += x * y;
                }
            }
        }
        Self::fold_exponents(n, by_exp)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if self.conductor == 1 && rhs.conductor == 1 {
            return Self::rational(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (n, mut a, b) = Self::common(self, rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        CycNumber {
            conductor: n,
            coeffs: a,
        }
        .normalized()
    }

    /// Multiplication matrix of `self` on the power basis (columns are images).
    fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.conductor;
        let phi = self.coeffs.len();
        let cols: Vec<Vec<BigRational>> = (0..phi)
            .map(|j| self.mul_ref(&Self::zeta_pow(n, j as i64)).lift(n))
            .collect();
        (0..phi)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        if self.conductor == 1 || other.conductor == 1 {
            // a normalised non-rational value never equals a rational one
            return false;
        }
        let (_, a, b) = Self::common(self, other);
        a == b
    }
}

impl Eq for CycNumber {}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let z = match k {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{}", self.conductor, k),
            };
            if k == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{z}")?;
            } else {
                write!(f, "{abs}*{z}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Zero for CycNumber {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for CycNumber {
    fn one() -> Self {
        Self::from_int(1)
    }
    fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }
}

impl Add for CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.add_ref(rhs)
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> Self {
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}

impl Mul for CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.mul_ref(rhs)
    }
}

impl Field for CycNumber {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.conductor == 1 {
            return Some(Self::rational(self.coeffs[0].recip()));
        }
        // solve (mult by self) · y = 1 over ℚ
        let phi = self.coeffs.len();
        let mut rows = self.mult_matrix();
        for (i, r) in rows.iter_mut().enumerate() {
            r.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
        }
        let (red, piv) = rref(&rows, phi + 1);
        if piv.len() != phi {
            return None;
        }
        let sol: Vec<BigRational> = red.iter().map(|r| r[phi].clone()).collect();
        Some(Self::from_coeffs(self.conductor, sol))
    }
}

crate::field_exact_div!(CycNumber);

impl From<i64> for CycNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for CycNumber {
    fn from(r: BigRational) -> Self {
        Self::rational(r)
    }
}

/// Coefficients of Φ_N, constant term first.
pub fn cyclotomic_coeffs(n: usize) -> Vec<i64> {
    ctx(n).poly.clone()
}

/// Rational number from a pair of small integers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Best-effort conversion of an integer-valued cyclotomic to `i64`.
pub fn as_i64(z: &CycNumber) -> Option<i64> {
    z.to_integer().and_then(|n| n.to_i64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(63).len() - 1, 36);
    }

    #[test]
    fn zeta_reduction() {
        // ζ_3² = −1 − ζ_3
        let z = CycNumber::zeta(3);
        assert_eq!(&z * &z, CycNumber::from_int(-1) - z.clone());
        // ζ_9⁶ = −ζ_9³ − 1
        let z9 = CycNumber::zeta_pow(9, 6);
        assert_eq!(
            z9,
            -CycNumber::zeta_pow(9, 3) - CycNumber::one()
        );
        // ζ_2 is rational
        assert_eq!(CycNumber::zeta(2), CycNumber::from_int(-1));
    }

    #[test]
    fn mixed_conductors() {
        let a = CycNumber::zeta(3);
        let b = CycNumber::zeta_pow(9, 3);
        assert_eq!(a, b);
        let c = CycNumber::zeta(7) * CycNumber::zeta(3);
        assert_eq!(c, CycNumber::zeta_pow(21, 10));
        assert_eq!(c.conductor(), 21);
    }

    #[test]
    fn inverse_and_reduce() {
        let z = CycNumber::zeta(9) + CycNumber::from_int(2);
        let inv = z.inverse().unwrap();
        assert!((z * inv).is_one());
        let w = CycNumber::zeta_pow(21, 7);
        assert_eq!(w.reduce_to(3), Some(CycNumber::zeta(3)));
        assert_eq!(CycNumber::zeta(21).reduce_to(7), None);
    }

    fn arb_cyc() -> impl Strategy<Value = CycNumber> {
        (
            prop::sample::select(vec![1usize, 3, 7, 9, 21]),
            prop::collection::vec(-5i64..5, 12),
        )
            .prop_map(|(n, v)| {
                let phi = euler_phi(n);
                CycNumber::from_coeffs(n, v[..phi].iter().map(|&x| q(x)).collect())
            })
    }

    proptest! {
        #[test]
        fn lift_is_a_ring_homomorphism(a in arb_cyc(), b in arb_cyc()) {
            let m = 63;
            let prod = &a * &b;
            let la = CycNumber::from_coeffs(m, a.lift(m));
            let lb = CycNumber::from_coeffs(m, b.lift(m));
            prop_assert_eq!(prod.lift(m), (la * lb).lift(m));
        }

        #[test]
        fn lift_then_reduce_is_identity(a in arb_cyc()) {
            let lifted = CycNumber::from_coeffs(63, a.lift(63));
            let back = lifted.reduce_to(a.conductor()).unwrap();
            prop_assert_eq!(back.coeffs(), a.coeffs());
        }

        #[test]
        fn reduction_is_idempotent(a in arb_cyc()) {
            let again = CycNumber::from_coeffs(a.conductor(), a.coeffs().to_vec());
            prop_assert_eq!(again.coeffs(), a.coeffs());
        }

        #[test]
        fn nonzero_elements_are_invertible(a in arb_cyc()) {
            prop_assume!(!a.is_zero());
            let inv = a.inverse().unwrap();
            prop_assert!((a * inv).is_one());
        }
    }
}
