//! Proper hypergeometric terms `F(n, k)` and hyperexponential integrands
//! `c(x) f(x)^n`.

mod hyperexp;
mod support;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{integer_roots_rational, rat, Field, Ring, UniPoly};
use crate::ore::HyperTermN;
use crate::{QPoly, Qn, QnPoly, Qnk};

pub use hyperexp::HyperexpTerm;
pub use support::{certify_vanishing, support_analysis, LineWindow, Lower, SumRange, VanishInfo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("term undefined at (n, k) = ({n}, {k}): {reason}")]
    Undefined { n: i64, k: i64, reason: &'static str },
    #[error("term has a pole on the line k = {beta}*n + {gamma} at n = {n}")]
    PoleOnLine { beta: i64, gamma: i64, n: i64 },
}

/// Integer-linear form `n*N + k*K + c` in the variables `n`, `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinForm {
    pub n: i64,
    pub k: i64,
    pub c: i64,
}

pub const fn lin(n: i64, k: i64, c: i64) -> LinForm {
    LinForm { n, k, c }
}

impl LinForm {
    pub fn eval(&self, n: i64, k: i64) -> i64 {
        self.n * n + self.k * k + self.c
    }

    /// Restriction to the line `k = beta*n + gamma`, as a form in `n` only.
    pub fn on_line(&self, beta: i64, gamma: i64) -> LinForm {
        lin(self.n + self.k * beta, 0, self.c + self.k * gamma)
    }

    pub fn shift_n(&self, s: i64) -> LinForm {
        lin(self.n, self.k, self.c + self.n * s)
    }

    pub fn is_constant(&self) -> bool {
        self.n == 0 && self.k == 0
    }

    /// As a polynomial in `k` over `Q(n)`.
    pub fn to_poly(&self) -> QnPoly {
        let c = Qn::from_poly(QPoly::from_ints(&[self.c, self.n]));
        UniPoly::new(vec![c, Qn::from_i64(self.k)])
    }

    fn minus(&self, other: &LinForm) -> LinForm {
        lin(self.n - other.n, self.k - other.k, self.c - other.c)
    }

    /// Coefficient of the given variable.
    fn coeff(&self, var: Var) -> i64 {
        match var {
            Var::N => self.n,
            Var::K => self.k,
        }
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (coef, name) in [(self.n, "n"), (self.k, "k")] {
            if coef == 0 {
                continue;
            }
            if coef < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if coef.abs() != 1 {
                s.push_str(&format!("{}*", coef.abs()));
            }
            s.push_str(name);
        }
        if self.c != 0 || s.is_empty() {
            if self.c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            s.push_str(&self.c.abs().to_string());
        }
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    N,
    K,
}

/// Constant-base power `base^exp`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Power {
    pub exp: LinForm,
    pub base: BigRational,
}

/// Bivariate polynomial: outer variable `k`, coefficients polynomials in `n`.
pub type BiPoly = UniPoly<QPoly>;

/// Proper hypergeometric term
/// `constant * prod base^exp * prod C(top, bottom)^m * prod (arg)!^m * poly(n, k)`,
/// with signed multiplicities (negative means the factor sits in the denominator).
#[derive(Clone, Debug, PartialEq)]
pub struct ProperTerm {
    pub constant: BigRational,
    pub powers: Vec<Power>,
    /// `(top, bottom) -> multiplicity`
    pub binomials: BTreeMap<(LinForm, LinForm), i32>,
    /// `arg -> multiplicity`
    pub factorials: BTreeMap<LinForm, i32>,
    pub poly: BiPoly,
}

impl Default for ProperTerm {
    fn default() -> Self {
        Self::one()
    }
}

impl ProperTerm {
    pub fn one() -> Self {
        ProperTerm {
            constant: BigRational::one(),
            powers: Vec::new(),
            binomials: BTreeMap::new(),
            factorials: BTreeMap::new(),
            poly: BiPoly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        ProperTerm {
            constant: c,
            ..Self::one()
        }
    }

    pub fn times_const(mut self, c: BigRational) -> Self {
        self.constant *= c;
        self
    }

    pub fn times_power(mut self, base: BigRational, exp: LinForm) -> Self {
        assert!(!base.is_zero(), "zero base in power factor");
        self.powers.push(Power { exp, base });
        self.normalized()
    }

    pub fn times_binomial(self, top: LinForm, bottom: LinForm) -> Self {
        self.binomial_pow(top, bottom, 1)
    }

    pub fn over_binomial(self, top: LinForm, bottom: LinForm) -> Self {
        self.binomial_pow(top, bottom, -1)
    }

    pub fn binomial_pow(mut self, top: LinForm, bottom: LinForm, m: i32) -> Self {
        *self.binomials.entry((top, bottom)).or_insert(0) += m;
        self.normalized()
    }

    pub fn times_factorial(self, arg: LinForm) -> Self {
        self.factorial_pow(arg, 1)
    }

    pub fn over_factorial(self, arg: LinForm) -> Self {
        self.factorial_pow(arg, -1)
    }

    pub fn factorial_pow(mut self, arg: LinForm, m: i32) -> Self {
        *self.factorials.entry(arg).or_insert(0) += m;
        self.normalized()
    }

    pub fn times_poly(mut self, p: BiPoly) -> Self {
        self.poly = self.poly * p;
        self.normalized()
    }

    pub fn mul(&self, other: &ProperTerm) -> ProperTerm {
        let mut t = self.clone();
        t.constant *= &other.constant;
        t.powers.extend(other.powers.iter().cloned());
        for (key, m) in &other.binomials {
            *t.binomials.entry(*key).or_insert(0) += m;
        }
        for (key, m) in &other.factorials {
            *t.factorials.entry(*key).or_insert(0) += m;
        }
        t.poly = t.poly * other.poly.clone();
        t.normalized()
    }

    /// Merge powers with equal exponents, fold constant powers into the
    /// constant, drop zero multiplicities, and make the polynomial factor's
    /// leading coefficient 1.
    pub fn normalized(mut self) -> Self {
        let mut merged: BTreeMap<LinForm, BigRational> = BTreeMap::new();
        for p in self.powers.drain(..) {
            if p.exp.is_constant() {
                self.constant *= rat_pow(&p.base, p.exp.c);
                continue;
            }
            let e = merged.entry(p.exp).or_insert_with(BigRational::one);
            *e *= p.base;
        }
        self.powers = merged
            .into_iter()
            .filter(|(_, b)| !b.is_one())
            .map(|(exp, base)| Power { exp, base })
            .collect();
        self.binomials.retain(|_, m| *m != 0);
        self.factorials.retain(|_, m| *m != 0);
        if self.poly.is_zero() {
            self.constant = BigRational::zero();
            self.poly = BiPoly::one();
        } else {
            let lc = self.poly.lc().lc();
            if !lc.is_one() {
                self.constant *= &lc;
                let inv = QPoly::constant(lc.recip());
                self.poly = self.poly.scale(&inv);
            }
        }
        self
    }

    /// True when no factor depends on `k`.
    pub fn is_k_free(&self) -> bool {
        self.powers.iter().all(|p| p.exp.k == 0)
            && self.binomials.keys().all(|(t, b)| t.k == 0 && b.k == 0)
            && self.factorials.keys().all(|a| a.k == 0)
            && self.poly.deg() <= 0
    }

    /// Every linear form that appears as a binomial entry, a factorial
    /// argument, or an implied factorial argument `top - bottom`.
    pub fn linear_forms(&self) -> Vec<LinForm> {
        let mut out = Vec::new();
        for (t, b) in self.binomials.keys() {
            out.extend([*t, *b, t.minus(b)]);
        }
        out.extend(self.factorials.keys().copied());
        out
    }

    /// Exact value at `(n, k)` under the falling-factorial binomial convention.
    pub fn eval(&self, n: i64, k: i64) -> Result<BigRational, TermError> {
        eval_term(self, n, k)
    }

    /// `F(n, k+1) / F(n, k)` or `F(n+1, k) / F(n, k)` as a reduced element of `Q(n)(k)`.
    pub fn shift_quotient(&self, var: Var) -> Qnk {
        shift_quotient(self, var)
    }

    /// Restriction to the line `k = beta*n + gamma`.
    pub fn on_line(&self, beta: i64, gamma: i64) -> ProperTerm {
        let mut t = ProperTerm::constant(self.constant.clone());
        for p in &self.powers {
            t.powers.push(Power {
                exp: p.exp.on_line(beta, gamma),
                base: p.base.clone(),
            });
        }
        for ((top, bot), m) in &self.binomials {
            *t.binomials
                .entry((top.on_line(beta, gamma), bot.on_line(beta, gamma)))
                .or_insert(0) += m;
        }
        for (a, m) in &self.factorials {
            *t.factorials.entry(a.on_line(beta, gamma)).or_insert(0) += m;
        }
        let line = QPoly::from_ints(&[gamma, beta]);
        let p_n = self
            .poly
            .coeffs()
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, c| acc * line.clone() + c.clone());
        t.poly = BiPoly::constant(p_n);
        t.normalized()
    }
}

fn rat_pow(base: &BigRational, e: i64) -> BigRational {
    let p = Ring::pow(base, e.unsigned_abs() as u32);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Generalized binomial coefficient: `m (m-1) ... (m-r+1) / r!` for `r >= 0`,
/// zero for `r < 0`.
pub fn binomial(m: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    if m >= 0 && m < r {
        return BigInt::zero();
    }
    // symmetric shortcut keeps the product short for large nonnegative m
    let r = if m >= 0 && r > m - r { m - r } else { r };
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= m - i;
        den *= i + 1;
    }
    num / den
}

pub fn factorial(m: i64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// Memo table for binomial coefficients, shared across evaluations.
#[derive(Debug, Default)]
pub struct BinomialCache {
    table: std::collections::HashMap<(i64, i64), BigInt>,
}

impl BinomialCache {
    pub fn get(&mut self, m: i64, r: i64) -> BigInt {
        self.table
            .entry((m, r))
            .or_insert_with(|| binomial(m, r))
            .clone()
    }
}

pub fn eval_term(t: &ProperTerm, n: i64, k: i64) -> Result<BigRational, TermError> {
    eval_term_cached(t, n, k, &mut BinomialCache::default())
}

pub fn eval_term_cached(
    t: &ProperTerm,
    n: i64,
    k: i64,
    cache: &mut BinomialCache,
) -> Result<BigRational, TermError> {
    let mut v = t.constant.clone();
    for p in &t.powers {
        v *= rat_pow(&p.base, p.exp.eval(n, k));
    }
    for ((top, bot), m) in &t.binomials {
        let b = BigRational::from_integer(cache.get(top.eval(n, k), bot.eval(n, k)));
        if *m < 0 && b.is_zero() {
            return Err(TermError::Undefined {
                n,
                k,
                reason: "zero binomial in denominator",
            });
        }
        v *= rat_pow(&b, *m as i64);
    }
    for (a, m) in &t.factorials {
        let x = a.eval(n, k);
        if x < 0 {
            return Err(TermError::Undefined {
                n,
                k,
                reason: "factorial of a negative integer",
            });
        }
        v *= rat_pow(&BigRational::from_integer(factorial(x)), *m as i64);
    }
    let pv = t
        .poly
        .coeffs()
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * rat(k) + c.eval(&rat(n)));
    Ok(v * pv)
}

/// Product of linear factors with integer exponents, kept unexpanded so that
/// cancellation is a matter of bookkeeping rather than a polynomial gcd.
#[derive(Default)]
struct LinearFactors {
    scalar: BigRational,
    exps: BTreeMap<LinForm, i64>,
}

impl LinearFactors {
    fn new() -> Self {
        LinearFactors {
            scalar: BigRational::one(),
            exps: BTreeMap::new(),
        }
    }

    /// Multiply by `form^e`, storing `form` primitive with its first
    /// nonzero coefficient among `(k, n, c)` positive.
    fn push(&mut self, form: LinForm, e: i64) {
        if e == 0 {
            return;
        }
        if form.is_constant() {
            self.scalar *= rat_pow(&rat(form.c), e);
            return;
        }
        let g = num_integer::gcd(num_integer::gcd(form.n, form.k), form.c);
        let lead = if form.k != 0 { form.k } else { form.n };
        let unit = if lead < 0 { -g } else { g };
        self.scalar *= rat_pow(&rat(unit), e);
        let f = lin(form.n / unit, form.k / unit, form.c / unit);
        *self.exps.entry(f).or_insert(0) += e;
    }

    /// `(L + s)! / L!`, raised to `m`.
    fn push_factorial_shift(&mut self, arg: &LinForm, s: i64, m: i32) {
        let m = m as i64;
        if s > 0 {
            for i in 1..=s {
                self.push(lin(arg.n, arg.k, arg.c + i), m);
            }
        } else {
            for i in 0..-s {
                self.push(lin(arg.n, arg.k, arg.c - i), -m);
            }
        }
    }

    fn into_ratfunc(self) -> Qnk {
        let mut num = QnPoly::constant(Qn::constant(self.scalar));
        let mut den = QnPoly::one();
        for (f, e) in self.exps {
            let p = f.to_poly();
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    num = num * p.clone();
                } else {
                    den = den * p.clone();
                }
            }
        }
        // distinct primitive linear forms are pairwise coprime
        Qnk::new_coprime(num, den)
    }
}

pub fn shift_quotient(t: &ProperTerm, var: Var) -> Qnk {
    let mut fs = LinearFactors::new();
    for p in &t.powers {
        fs.scalar *= rat_pow(&p.base, p.exp.coeff(var));
    }
    for ((top, bot), m) in &t.binomials {
        let diff = top.minus(bot);
        fs.push_factorial_shift(top, top.coeff(var), *m);
        fs.push_factorial_shift(bot, bot.coeff(var), -*m);
        fs.push_factorial_shift(&diff, diff.coeff(var), -*m);
    }
    for (a, m) in &t.factorials {
        fs.push_factorial_shift(a, a.coeff(var), *m);
    }
    let q = fs.into_ratfunc();
    if t.poly.is_constant() {
        return q;
    }
    let p = bipoly_to_qnpoly(&t.poly);
    let shifted = match var {
        Var::K => p.shift(&Qn::one()),
        Var::N => p.map(|c| c.shift(&rat(1))),
    };
    q * Qnk::new(shifted, p)
}

pub fn bipoly_to_qnpoly(p: &BiPoly) -> QnPoly {
    p.map(|c| Qn::from_poly(c.clone()))
}

/// The `k`-free value of a quotient, as an element of `Q(n)`.
pub(crate) fn k_free(q: &Qnk) -> Qn {
    assert!(
        q.num().deg() <= 0 && q.den().deg() <= 0,
        "quotient still depends on k"
    );
    q.num().coeff(0) / q.den().coeff(0)
}

/// Smallest `n0 >= 0` past every integer root of the given polynomials and
/// every real root of the given `k`-free linear forms.
pub(crate) fn past_roots(forms: &[LinForm], polys: &[&QPoly]) -> i64 {
    let mut n0 = 0i64;
    for f in forms {
        debug_assert_eq!(f.k, 0);
        if f.n != 0 {
            // root -c/n; need n0 > root
            let root = BigRational::new((-f.c).into(), f.n.into());
            let next = root.floor().to_integer() + 1;
            n0 = n0.max(i64::try_from(next).unwrap_or(0));
        }
    }
    for p in polys {
        if p.is_zero() {
            continue;
        }
        if let Some(r) = integer_roots_rational(p).last() {
            n0 = n0.max(i64::try_from(r + 1).unwrap_or(0));
        }
    }
    n0
}

/// The univariate sequence `g(n) = F(n, beta*n + gamma)`.
///
/// The quotient is the formal `n`-shift quotient of the restricted term;
/// `start` is pushed past every root of the restricted linear forms and of
/// the quotient so the recursion is valid from there on, and the values on
/// `0..start` are stored explicitly.
pub fn specialize_line(t: &ProperTerm, beta: i64, gamma: i64) -> Result<HyperTermN, TermError> {
    let line = t.on_line(beta, gamma);
    let q = k_free(&line.shift_quotient(Var::N));
    let poly_n = line.poly.coeff(0);
    let start = past_roots(&line.linear_forms(), &[q.num(), q.den(), &poly_n]);
    let at_line = |n: i64| {
        t.eval(n, beta * n + gamma)
            .map_err(|_| TermError::PoleOnLine { beta, gamma, n })
    };
    let value = at_line(start)?;
    let mut exceptions = Vec::new();
    for n in 0..start {
        exceptions.push((n, at_line(n)?));
    }
    Ok(HyperTermN::new(start, value, q).with_exceptions(exceptions))
}

impl fmt::Display for ProperTerm {
    /// Text in the input grammar; parses back to an equal term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let c = &self.constant;
        if !c.is_one() || (self.powers.is_empty() && self.binomials.is_empty() && self.factorials.is_empty() && self.poly.is_one()) {
            num.push(paren_rational(c));
        }
        for p in &self.powers {
            num.push(format!("{}^({})", paren_rational(&p.base), p.exp));
        }
        for ((top, bot), m) in &self.binomials {
            let s = format!("binomial({top},{bot})");
            let dest = if *m > 0 { &mut num } else { &mut den };
            for _ in 0..m.unsigned_abs() {
                dest.push(s.clone());
            }
        }
        for (a, m) in &self.factorials {
            let s = format!("factorial({a})");
            let dest = if *m > 0 { &mut num } else { &mut den };
            for _ in 0..m.unsigned_abs() {
                dest.push(s.clone());
            }
        }
        if !self.poly.is_one() {
            num.push(format!("({})", bipoly_text(&self.poly)));
        }
        if num.is_empty() {
            num.push("1".into());
        }
        write!(f, "{}", num.join("*"))?;
        for d in den {
            write!(f, "/{d}")?;
        }
        Ok(())
    }
}

fn paren_rational(q: &BigRational) -> String {
    let s = crate::exact::rational_text(q);
    if q.is_negative() || !q.denom().is_one() {
        format!("({s})")
    } else {
        s
    }
}

/// Expanded text of a polynomial in `n` and `k`.
pub fn bipoly_text(p: &BiPoly) -> String {
    let mut s = String::new();
    for (j, cj) in p.coeffs().iter().enumerate().rev() {
        for (i, c) in cj.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(crate::exact::rational_text(&mag));
            }
            for (var, e) in [("n", i), ("k", j)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            s.push_str(&parts.join("*"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// 3^k C(3n-k, 2n)
    pub(crate) fn s1() -> ProperTerm {
        ProperTerm::one()
            .times_power(rat(3), lin(0, 1, 0))
            .times_binomial(lin(3, -1, 0), lin(2, 0, 0))
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(3, 1), 3.into());
        assert_eq!(binomial(-1, 2), 1.into());
        assert_eq!(binomial(-1, 3), (-1).into());
        assert_eq!(binomial(4, 5), 0.into());
        assert_eq!(binomial(5, -1), 0.into());
        assert_eq!(binomial(-3, -1), 0.into());
        assert_eq!(binomial(10, 7), 120.into());
    }

    #[test]
    fn simple_quotients() {
        let t = ProperTerm::one().times_power(rat(2), lin(0, 1, 0));
        assert_eq!(t.shift_quotient(Var::K), Qnk::constant(Qn::from_i64(2)));
        let t = ProperTerm::one().times_factorial(lin(0, 1, 0));
        let k_plus_1 = Qnk::from_poly(QnPoly::from_ints(&[1, 1]));
        assert_eq!(t.shift_quotient(Var::K), k_plus_1);
    }

    #[test]
    fn summand_quotient_in_k() {
        // 3(n-k)/(3n-k)
        let qk = s1().shift_quotient(Var::K);
        let expected = lin(1, -1, 0).to_poly().scale(&Qn::from_i64(3));
        let expected = Qnk::new(expected, lin(3, -1, 0).to_poly());
        assert_eq!(qk, expected);
        assert_eq!(s1().eval(2, 1).unwrap(), rat(15));
        assert_eq!(s1().eval(2, 2).unwrap(), rat(9));
        assert_eq!(s1().eval(1, 0).unwrap(), rat(3));
    }

    #[test]
    fn undefined_points() {
        let t = ProperTerm::one().times_factorial(lin(1, -1, 0));
        assert!(matches!(t.eval(1, 2), Err(TermError::Undefined { .. })));
        let t = ProperTerm::one().over_binomial(lin(1, 0, 0), lin(0, 1, 0));
        assert!(matches!(t.eval(1, 2), Err(TermError::Undefined { .. })));
        assert_eq!(t.eval(4, 2).unwrap(), q(1, 6));
    }

    #[test]
    fn lines() {
        // k = 0: C(3n, 2n) = 1, 3, 15, ...
        let g = specialize_line(&s1(), 0, 0).unwrap();
        assert_eq!(g.values(0, 3), vec![Some(rat(1)), Some(rat(3)), Some(rat(15)), Some(rat(84))]);
        // k = 3n+1: 3^(3n+1) C(-1, 2n) = 3*27^n
        let g = specialize_line(&s1(), 3, 1).unwrap();
        assert_eq!(g.quotient, Qn::from_i64(27));
        assert_eq!(g.eval(0), Some(rat(3)));
        assert_eq!(g.eval(2), Some(rat(3 * 729)));
        // k = n: 3^n
        let g = specialize_line(&s1(), 1, 0).unwrap();
        assert_eq!(g.quotient, Qn::from_i64(3));
        for n in 0..=20 {
            assert_eq!(g.eval(n).unwrap(), s1().eval(n, n).unwrap());
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(s1().to_string(), "3^(k)*binomial(3*n-k,2*n)");
        assert_eq!(lin(0, 0, -3).to_string(), "-3");
        let t = ProperTerm::constant(q(-1, 2)).times_poly(BiPoly::new(vec![QPoly::from_ints(&[2, 2])]));
        assert_eq!(t.to_string(), "(-1)*(n+1)");
    }
}
