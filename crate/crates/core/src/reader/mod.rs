//! Text input and output: summands, integrands and operators.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := '-' unary | power`, `power := atom [('^'|'**') unary]`,
//! `atom := number | name | call | '(' expr ')'`, with calls `binomial(a, b)`
//! and `factorial(a)`. Names are `n`, `k` (or `j`) and `x`.

mod expr;
mod print;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use expr::{parse_expr, Expr, Func};
pub use print::{operator_text, print_operator, rhs_text, Style};

use crate::exact::Ring;
use crate::ore::OreOp;
use crate::termlib::{BiPoly, HyperexpTerm, LinForm, ProperTerm};
use crate::{QPoly, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not a proper hypergeometric term: {0}")]
    NotProper(String),
    #[error("not of the form c(x)*f(x)^n: {0}")]
    NotHyperexponential(String),
    #[error("not an operator in n and N: {0}")]
    NotOperator(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedTerm {
    Proper(ProperTerm),
    Hyperexp(HyperexpTerm),
}

/// Parse a summand in `n, k` or an integrand in `n, x`.
pub fn parse_term(text: &str) -> Result<ParsedTerm, ReadError> {
    let e = parse_expr(text, &['n', 'k', 'x'])?;
    if e.mentions('x') {
        if e.mentions('k') {
            return Err(ReadError::NotHyperexponential("mixes k and x".into()));
        }
        return hyperexp(&e).map(ParsedTerm::Hyperexp);
    }
    proper(&e).map(ParsedTerm::Proper)
}

pub fn parse_proper(text: &str) -> Result<ProperTerm, ReadError> {
    match parse_term(text)? {
        ParsedTerm::Proper(t) => Ok(t),
        ParsedTerm::Hyperexp(_) => Err(ReadError::NotProper("the term involves x".into())),
    }
}

pub fn parse_hyperexp(text: &str) -> Result<HyperexpTerm, ReadError> {
    match parse_term(text)? {
        ParsedTerm::Hyperexp(t) => Ok(t),
        ParsedTerm::Proper(t) if t.is_k_free() && t.binomials.is_empty() && t.factorials.is_empty() => {
            // an x-free integrand: c * b^n with rational constants
            hyperexp(&parse_expr(text, &['n'])?)
        }
        ParsedTerm::Proper(_) => Err(ReadError::NotHyperexponential("no x-dependence".into())),
    }
}

/// Polynomial in `inner` with an optional `outer` variable; the outer power
/// indexes the returned coefficients.
fn bipoly(e: &Expr, inner: char, outer: Option<char>) -> Result<BiPoly, String> {
    let rec = |a: &Expr| bipoly(a, inner, outer);
    Ok(match e {
        Expr::Num(v) => BiPoly::constant(QPoly::constant(Rational::from_integer(v.clone()))),
        Expr::Var(c) if *c == inner => BiPoly::constant(QPoly::var()),
        Expr::Var(c) if Some(*c) == outer => BiPoly::var(),
        Expr::Var(c) => return Err(format!("unexpected variable {c}")),
        Expr::Neg(a) => -rec(a)?,
        Expr::Add(a, b) => rec(a)? + rec(b)?,
        Expr::Sub(a, b) => rec(a)? - rec(b)?,
        Expr::Mul(a, b) => rec(a)? * rec(b)?,
        Expr::Div(a, b) => {
            let d = constant_of(&rec(b)?).ok_or_else(|| format!("division by non-constant {b}"))?;
            if d.is_zero() {
                return Err("division by zero".into());
            }
            rec(a)?.scale(&QPoly::constant(d.recip()))
        }
        Expr::Pow(a, b) => {
            let m = small_natural(&rec(b)?).ok_or_else(|| format!("exponent {b} is not a nonnegative integer"))?;
            let base = rec(a)?;
            (0..m).fold(BiPoly::one(), |acc, _| acc * base.clone())
        }
        Expr::Call(..) => return Err(format!("{e} is not polynomial")),
    })
}

fn constant_of(p: &BiPoly) -> Option<Rational> {
    match p.deg() {
        -1 => Some(Rational::zero()),
        0 if p.coeff(0).deg() <= 0 => Some(p.coeff(0).coeff(0)),
        _ => None,
    }
}

fn small_natural(p: &BiPoly) -> Option<u32> {
    let c = constant_of(p)?;
    if !c.is_integer() || c.is_negative() {
        return None;
    }
    c.to_integer().to_u32().filter(|m| *m <= 1000)
}

fn small_integer(p: &BiPoly) -> Option<i64> {
    let c = constant_of(p)?;
    c.is_integer().then(|| c.to_integer().to_i64()).flatten()
}

fn linform(e: &Expr) -> Result<LinForm, ReadError> {
    let p = bipoly(e, 'n', Some('k')).map_err(ReadError::NotProper)?;
    let not_linear = || ReadError::NotProper(format!("{e} is not integer-linear in n and k"));
    if p.deg() > 1 || p.coeff(0).deg() > 1 || p.coeff(1).deg() > 0 {
        return Err(not_linear());
    }
    let int = |q: Rational| -> Result<i64, ReadError> {
        if q.is_integer() {
            q.to_integer().to_i64().ok_or_else(not_linear)
        } else {
            Err(not_linear())
        }
    };
    Ok(LinForm {
        n: int(p.coeff(0).coeff(1))?,
        k: int(p.coeff(1).coeff(0))?,
        c: int(p.coeff(0).coeff(0))?,
    })
}

fn negate(l: &LinForm) -> LinForm {
    LinForm {
        n: -l.n,
        k: -l.k,
        c: -l.c,
    }
}

fn invert(t: &ProperTerm) -> Result<ProperTerm, ReadError> {
    if t.poly.deg() > 0 || t.poly.coeff(0).deg() > 0 {
        return Err(ReadError::NotProper("division by a non-constant polynomial".into()));
    }
    if t.constant.is_zero() {
        return Err(ReadError::NotProper("division by zero".into()));
    }
    let mut out = ProperTerm::constant(t.constant.recip());
    for p in &t.powers {
        out = out.times_power(p.base.clone(), negate(&p.exp));
    }
    for ((top, bot), m) in &t.binomials {
        out = out.binomial_pow(*top, *bot, -m);
    }
    for (a, m) in &t.factorials {
        out = out.factorial_pow(*a, -m);
    }
    Ok(out)
}

fn proper(e: &Expr) -> Result<ProperTerm, ReadError> {
    let is_poly = |e: &Expr| !e.has_call() && bipoly(e, 'n', Some('k')).is_ok();
    if is_poly(e) {
        let p = bipoly(e, 'n', Some('k')).map_err(ReadError::NotProper)?;
        return Ok(ProperTerm::one().times_poly(p));
    }
    match e {
        Expr::Mul(a, b) => Ok(proper(a)?.mul(&proper(b)?)),
        Expr::Div(a, b) => Ok(proper(a)?.mul(&invert(&proper(b)?)?)),
        Expr::Neg(a) => Ok(proper(a)?.times_const(-Rational::one())),
        Expr::Pow(a, b) => {
            let exp = bipoly(b, 'n', Some('k')).map_err(ReadError::NotProper)?;
            if let Some(m) = small_integer(&exp) {
                let base = proper(a)?;
                let base = if m < 0 { invert(&base)? } else { base };
                return Ok((0..m.unsigned_abs()).fold(ProperTerm::one(), |acc, _| acc.mul(&base)));
            }
            let base = bipoly(a, 'n', Some('k'))
                .ok()
                .and_then(|p| constant_of(&p))
                .ok_or_else(|| ReadError::NotProper(format!("power {e} needs a constant base")))?;
            if base.is_zero() {
                return Err(ReadError::NotProper("zero base with symbolic exponent".into()));
            }
            Ok(ProperTerm::one().times_power(base, linform(b)?))
        }
        Expr::Call(Func::Binomial, args) => Ok(ProperTerm::one().times_binomial(linform(&args[0])?, linform(&args[1])?)),
        Expr::Call(Func::Factorial, args) => Ok(ProperTerm::one().times_factorial(linform(&args[0])?)),
        _ => Err(ReadError::NotProper(format!(
            "{e} combines factorial-type factors additively"
        ))),
    }
}

type QxFunc = RatFunc<Rational>;

/// Rational function of `x` with rational coefficients.
fn xrat(e: &Expr) -> Result<QxFunc, ReadError> {
    let bad = |msg: String| ReadError::NotHyperexponential(msg);
    Ok(match e {
        Expr::Num(v) => QxFunc::constant(Rational::from_integer(v.clone())),
        Expr::Var('x') => QxFunc::var(),
        Expr::Var(c) => return Err(bad(format!("{c} outside an exponent"))),
        Expr::Neg(a) => -xrat(a)?,
        Expr::Add(a, b) => xrat(a)? + xrat(b)?,
        Expr::Sub(a, b) => xrat(a)? - xrat(b)?,
        Expr::Mul(a, b) => xrat(a)? * xrat(b)?,
        Expr::Div(a, b) => {
            let d = xrat(b)?;
            if d.is_zero() {
                return Err(bad("division by zero".into()));
            }
            xrat(a)? / d
        }
        Expr::Pow(a, b) => {
            let m = bipoly(b, 'n', None)
                .ok()
                .and_then(|p| small_integer(&p))
                .ok_or_else(|| bad(format!("exponent {b} is not an integer")))?;
            let base = xrat(a)?;
            if m < 0 {
                if base.is_zero() {
                    return Err(bad("division by zero".into()));
                }
                Ring::pow(&(QxFunc::one() / base), m.unsigned_abs() as u32)
            } else {
                Ring::pow(&base, m as u32)
            }
        }
        Expr::Call(..) => return Err(bad(format!("{e} in an integrand"))),
    })
}

/// `(c, f)` with `e = c(x) f(x)^n`.
fn hyperexp_parts(e: &Expr) -> Result<(QxFunc, QPoly), ReadError> {
    if !e.mentions('n') {
        return Ok((xrat(e)?, QPoly::one()));
    }
    let bad = |msg: String| ReadError::NotHyperexponential(msg);
    match e {
        Expr::Mul(a, b) => {
            let (ca, fa) = hyperexp_parts(a)?;
            let (cb, fb) = hyperexp_parts(b)?;
            Ok((ca * cb, fa * fb))
        }
        Expr::Div(a, b) if !b.mentions('n') => {
            let (ca, fa) = hyperexp_parts(a)?;
            let d = xrat(b)?;
            if d.is_zero() {
                return Err(bad("division by zero".into()));
            }
            Ok((ca / d, fa))
        }
        Expr::Neg(a) => {
            let (c, f) = hyperexp_parts(a)?;
            Ok((-c, f))
        }
        Expr::Pow(a, b) if **b == Expr::Var('n') && !a.mentions('n') => {
            let base = xrat(a)?;
            if !base.is_poly() || base.is_zero() {
                return Err(bad(format!("base {a} is not a nonzero polynomial in x")));
            }
            Ok((QxFunc::one(), base.num().clone()))
        }
        _ => Err(bad(format!("{e}"))),
    }
}

fn hyperexp(e: &Expr) -> Result<HyperexpTerm, ReadError> {
    let (c, f) = hyperexp_parts(e)?;
    if c.is_zero() {
        return Err(ReadError::NotHyperexponential("zero integrand".into()));
    }
    Ok(HyperexpTerm::new(c, f))
}

/// Operator text in `n` and `N`, bare or as the first entry of `[L, rhs]`;
/// returned in canonical normalization.
pub fn parse_operator(text: &str) -> Result<OreOp, ReadError> {
    let (op, _) = split_pair(text);
    let e = parse_expr(op, &['n', 'N'])?;
    let p = bipoly(&e, 'n', Some('N')).map_err(ReadError::NotOperator)?;
    let op = OreOp::new(p.coeffs().to_vec());
    if op.is_zero() {
        return Err(ReadError::NotOperator("zero operator".into()));
    }
    Ok(op.canonical())
}

/// `[L, rhs]` split at its top-level comma; plain text is returned whole.
pub fn split_pair(text: &str) -> (&str, Option<&str>) {
    let t = text.trim();
    let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
        return (t, None);
    };
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return (inner[..i].trim(), Some(inner[i + 1..].trim())),
            _ => {}
        }
    }
    (inner.trim(), None)
}

/// Direct evaluation of an expression at integer `n`, `k`; `None` where a
/// division by zero or a negative factorial occurs.
pub fn eval_expr(e: &Expr, n: i64, k: i64) -> Option<Rational> {
    let rec = |a: &Expr| eval_expr(a, n, k);
    Some(match e {
        Expr::Num(v) => Rational::from_integer(v.clone()),
        Expr::Var('n') => Rational::from_integer(BigInt::from(n)),
        Expr::Var('k') => Rational::from_integer(BigInt::from(k)),
        Expr::Var(_) => return None,
        Expr::Neg(a) => -rec(a)?,
        Expr::Add(a, b) => rec(a)? + rec(b)?,
        Expr::Sub(a, b) => rec(a)? - rec(b)?,
        Expr::Mul(a, b) => rec(a)? * rec(b)?,
        Expr::Div(a, b) => {
            let d = rec(b)?;
            if d.is_zero() {
                return None;
            }
            rec(a)? / d
        }
        Expr::Pow(a, b) => {
            let m = rec(b)?;
            if !m.is_integer() {
                return None;
            }
            let m = m.to_integer().to_i64()?;
            let base = rec(a)?;
            if m < 0 {
                if base.is_zero() {
                    return None;
                }
                Ring::pow(&base.recip(), m.unsigned_abs() as u32)
            } else {
                Ring::pow(&base, m as u32)
            }
        }
        Expr::Call(func, args) => {
            let vals: Vec<i64> = args
                .iter()
                .map(|a| rec(a).filter(|v| v.is_integer()).and_then(|v| v.to_integer().to_i64()))
                .collect::<Option<_>>()?;
            match func {
                Func::Binomial => Rational::from_integer(crate::termlib::binomial(vals[0], vals[1])),
                Func::Factorial if vals[0] >= 0 => Rational::from_integer(crate::termlib::factorial(vals[0])),
                Func::Factorial => return None,
            }
        }
    })
}
