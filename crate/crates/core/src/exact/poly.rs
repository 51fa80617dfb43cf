use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, Ring};

/// Dense univariate polynomial, lowest degree first.
///
/// The zero polynomial is the empty coefficient list; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    /// `c * x^d`.
    pub fn monomial(c: R, d: usize) -> Self {
        let mut v = vec![R::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    /// `x + h`.
    pub fn shifted_var(h: R) -> Self {
        Self::new(vec![h, R::one()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &UniPoly<R>) -> UniPoly<R> {
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| {
            acc * inner.clone() + UniPoly::constant(c.clone())
        })
    }

    /// `p(x + h)`.
    pub fn shift(&self, h: &R) -> Self {
        if h.is_zero() {
            return self.clone();
        }
        self.compose(&Self::shifted_var(h.clone()))
    }

    /// `p(x) * x^k`.
    pub fn mul_var_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`; ring operations only.
    pub fn prem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-remainder by zero polynomial");
        let db = b.deg();
        let da = self.deg();
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut steps = 0i64;
        while !r.is_zero() && r.deg() >= db {
            let shift = (r.deg() - db) as usize;
            let t = b.scale(&r.lc()).mul_var_pow(shift);
            r = r.scale(&lb) - t;
            steps += 1;
        }
        let missing = (da - db + 1) - steps;
        if missing > 0 {
            r = r.scale(&lb.pow(missing as u32));
        }
        r
    }

    /// Resultant by the subresultant polynomial remainder sequence.
    ///
    /// Works over any ring with exact division, so it applies to polynomials
    /// whose coefficients are themselves polynomials.
    pub fn resultant(&self, other: &Self) -> R {
        if self.is_zero() || other.is_zero() {
            return R::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut sign_negative = false;
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign_negative = true;
            }
        }
        let signed = |v: R, neg: bool| if neg { -v } else { v };
        if b.deg() == 0 {
            return signed(b.lc().pow(a.deg() as u32), sign_negative);
        }
        let mut g = R::one();
        let mut h = R::one();
        loop {
            let delta = (a.deg() - b.deg()) as u32;
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign_negative = !sign_negative;
            }
            let r = a.prem(&b);
            a = b;
            let divisor = g.clone() * h.pow(delta);
            b = r.map(|c| c.exact_div(&divisor));
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).exact_div(&h.pow(delta - 1))
            };
            if b.is_zero() {
                return R::zero();
            }
            if b.deg() == 0 {
                let da = a.deg() as u32;
                let res = b.lc().pow(da).exact_div(&h.pow(da - 1));
                return signed(res, sign_negative);
            }
        }
    }
}

impl<F: Field> UniPoly<F> {
    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let db = b.deg();
        if self.deg() < db {
            return (Self::zero(), self.clone());
        }
        let inv_lb = b.lc().inv();
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero(); (self.deg() - db + 1) as usize];
        let db = db as usize;
        for i in (0..q.len()).rev() {
            let c = r[i + db].clone() * inv_lb.clone();
            if !c.is_zero() {
                for (j, bj) in b.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * bj.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        F::poly_gcd(self, other).monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self.clone() * other.div_rem(&g).0).monic()
    }

    /// Evaluate at an integer after specializing coefficients.
    pub fn specialize(&self, at: &BigInt) -> Option<BigRational> {
        let x = BigRational::from_integer(at.clone());
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.specialize(at)?;
        }
        Some(acc)
    }

    /// Specialize every coefficient, keeping the polynomial variable.
    pub fn specialize_coeffs(&self, at: &BigInt) -> Option<UniPoly<BigRational>> {
        let v: Option<Vec<_>> = self.coeffs.iter().map(|c| c.specialize(at)).collect();
        Some(UniPoly::new(v?))
    }

    pub fn display<'a>(&'a self, var: &'a str) -> PolyDisplay<'a, F> {
        PolyDisplay { poly: self, var }
    }
}

pub(crate) fn euclid_gcd<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>) -> UniPoly<F> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r;
    }
    a
}

impl<F: Field> Ring for UniPoly<F> {
    fn exact_div(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl<R: Ring> Zero for UniPoly<R> {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for UniPoly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for UniPoly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::new(long)
    }
}

impl<R: Ring> Neg for UniPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        UniPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<R: Ring> Sub for UniPoly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for UniPoly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

pub struct PolyDisplay<'a, F> {
    poly: &'a UniPoly<F>,
    var: &'a str,
}

impl<F: Field> fmt::Display for PolyDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let text = c.to_string();
            let atomic = !text[1..].contains(['+', '-', '/', ' ']);
            let shown = if atomic { text } else { format!("({text})") };
            match i {
                0 => write!(f, "{shown}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{shown}*")?;
                    }
                    if i == 1 {
                        write!(f, "{}", self.var)?;
                    } else {
                        write!(f, "{}^{}", self.var, i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("n"))
    }
}
