use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, Ring, UniPoly};

/// Reduced quotient of two polynomials over a field.
///
/// Canonical form: `gcd(num, den) = 1`, `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: UniPoly<F>,
    den: UniPoly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: UniPoly<F>, den: UniPoly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.lc();
        if !lc.is_one() {
            let inv = lc.inv();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    /// Like [`RatFunc::new`] but skips the gcd; the caller guarantees that
    /// `num` and `den` are coprime.
    pub fn new_coprime(num: UniPoly<F>, den: UniPoly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let inv = den.lc().inv();
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: UniPoly<F>) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(UniPoly::var())
    }

    pub fn num(&self) -> &UniPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<F> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// Value at a field element, `None` at a pole.
    pub fn eval(&self, at: &F) -> Option<F> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }

    /// `r(x + h)`.
    pub fn shift(&self, h: &F) -> Self {
        RatFunc::new(self.num.shift(h), self.den.shift(h))
    }

    /// Apply a coefficient map to numerator and denominator and renormalize.
    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative();
        RatFunc::new(n, self.den.clone() * self.den.clone())
    }

    pub fn display<'a>(&'a self, var: &'a str) -> RatFuncDisplay<'a, F> {
        RatFuncDisplay { r: self, var }
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        if self.den == rhs.den {
            return RatFunc::new(self.num + rhs.num, self.den);
        }
        let g = self.den.gcd(&rhs.den);
        let left = rhs.den.div_rem(&g).0;
        let right = self.den.div_rem(&g).0;
        let num = self.num * left.clone() + rhs.num * right;
        RatFunc::new(num, self.den * left)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.is_poly() && rhs.is_poly() && self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(self.num * rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (a, d) = (self.num.div_rem(&g1).0, rhs.den.div_rem(&g1).0);
        let (c, b) = (rhs.num.div_rem(&g2).0, self.den.div_rem(&g2).0);
        let num = a * c;
        let den = b * d;
        let lc = den.lc();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<F: Field> Ring for RatFunc<F> {
    fn exact_div(&self, other: &Self) -> Self {
        self.clone() / other.clone()
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::constant(F::from_bigint(v))
    }

    fn specialize(&self, at: &BigInt) -> Option<BigRational> {
        let d = self.den.specialize(at)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.specialize(at)? / d)
    }

    fn as_integer(&self) -> Option<BigInt> {
        if self.is_poly() && self.num.deg() <= 0 {
            self.num.coeff(0).as_integer()
        } else {
            None
        }
    }

    const DEPTH: usize = F::DEPTH + 1;

    /// Primitive remainder sequence over the polynomial ring `F[t]`.
    fn poly_gcd(a: &UniPoly<Self>, b: &UniPoly<Self>) -> UniPoly<Self> {
        let (pa, pb) = (primitive(&clear(a)), primitive(&clear(b)));
        let (mut x, mut y) = if pa.deg() >= pb.deg() { (pa, pb) } else { (pb, pa) };
        while !y.is_zero() {
            let r = x.prem(&y);
            x = y;
            y = if r.is_zero() { r } else { primitive(&r) };
        }
        x.map(|c| RatFunc::from_poly(c.clone()))
    }
}

/// Scale by the lcm of the coefficient denominators.
fn clear<F: Field>(p: &UniPoly<RatFunc<F>>) -> UniPoly<UniPoly<F>> {
    let l = p
        .coeffs()
        .iter()
        .fold(UniPoly::<F>::one(), |acc, c| acc.lcm(&c.den));
    p.map(|c| c.num.clone() * l.div_rem(&c.den).0)
}

fn primitive<F: Field>(p: &UniPoly<UniPoly<F>>) -> UniPoly<UniPoly<F>> {
    let content = p
        .coeffs()
        .iter()
        .fold(UniPoly::<F>::zero(), |acc, c| acc.gcd(c));
    if content.is_one() {
        p.clone()
    } else {
        p.map(|c| c.div_rem(&content).0)
    }
}

/// Default variable name by tower depth.
fn var_name(depth: usize) -> &'static str {
    ["n", "k", "t"][depth.min(2)]
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(var_name(F::DEPTH)))
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(var_name(F::DEPTH)))
    }
}

pub struct RatFuncDisplay<'a, F> {
    r: &'a RatFunc<F>,
    var: &'a str,
}

impl<F: Field> fmt::Display for RatFuncDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.den.is_one() {
            write!(f, "{}", self.r.num.display(self.var))
        } else {
            write!(
                f,
                "({})/({})",
                self.r.num.display(self.var),
                self.r.den.display(self.var)
            )
        }
    }
}
