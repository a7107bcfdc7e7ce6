use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{ExactDiv, Field, Ring};

/// Dense univariate polynomial in T, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// c·T^k.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// The variable T.
    pub fn t() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let cur = std::mem::replace(&mut out[i + j], F::zero());
                    out[i + j] = cur + a.clone() * b.clone();
                }
            }
        }
        Self::new(out)
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division: `(q, r)` with `self = q·rhs + r`, deg r < deg rhs.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        let d = rhs.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = rhs.coeffs[d].inverse().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = rem[k].clone() * lc_inv.clone();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let cur = std::mem::replace(&mut rem[k - d + j], F::zero());
                    rem[k - d + j] = cur - c.clone() * b.clone();
                }
            }
            quot[k - d] = c;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inverse().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<F: Ring> Zero for Poly<F> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Ring> One for Poly<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Ring> Add for Poly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<F: Ring> Sub for Poly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}

impl<F: Ring> Neg for Poly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<F: Ring> Mul for Poly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<F: Field> ExactDiv for Poly<F> {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(rhs).ok()?;
        r.is_zero().then_some(q)
    }
}

impl<F: Ring + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{k}")?,
            }
        }
        Ok(())
    }
}

/// Element of F(T): a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.is_constant() {
            let inv = den.coeffs[0].inverse().ok_or(Error::DivisionByZero)?;
            return Ok(RationalFunction {
                num: num.scale(&inv),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g)?;
        let (mut d, _) = den.div_rem(&g)?;
        let lc_inv = d.leading().cloned().unwrap().inverse().unwrap();
        n = n.scale(&lc_inv);
        d = d.scale(&lc_inv);
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// T^k.
    pub fn t_pow(k: usize) -> Self {
        Self::from_poly(Poly::monomial(F::one(), k))
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, when the function is constant.
    pub fn as_constant(&self) -> Option<F> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Result<Self> {
        Self::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn try_inverse(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.add_ref(&rhs.num));
        }
        if self.den == rhs.den {
            return Self::new(self.num.add_ref(&rhs.num), self.den.clone()).expect("nonzero denominator");
        }
        let n = self.num.mul_ref(&rhs.den).add_ref(&rhs.num.mul_ref(&self.den));
        Self::new(n, self.den.mul_ref(&rhs.den)).expect("nonzero denominator")
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul_ref(&rhs.num));
        }
        Self::new(self.num.mul_ref(&rhs.num), self.den.mul_ref(&rhs.den)).expect("nonzero denominator")
    }
}

impl<F: Field> Zero for RationalFunction<F> {
    fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RationalFunction<F> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<F: Field> Add for RationalFunction<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<F: Field> Sub for RationalFunction<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}

impl<F: Field> Neg for RationalFunction<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<F: Field> Mul for RationalFunction<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<F: Field> Field for RationalFunction<F> {
    fn inverse(&self) -> Option<Self> {
        self.try_inverse().ok()
    }
}

impl<F: Field> ExactDiv for RationalFunction<F> {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.div(rhs)
    }
}

impl<F: Field + fmt::Display> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}
