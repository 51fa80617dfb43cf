//! Operator and right-hand-side printers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::rational_text;
use crate::ore::{expanded_text, ClosedForm, OreOp};
use crate::{QPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Expanded integer coefficients, highest shift first:
    /// `(4)*N^1 + (-27)*N^0`.
    Canonical,
    /// Coefficients split into integer linear factors where possible, lowest
    /// shift first, first coefficient positive: `9*(n+1)*(2*n+1) - 2*(3*n+4)*(3*n+2)*N`.
    Factored,
}

/// Sign making the first nonzero coefficient's leading coefficient positive.
fn factored_sign(l: &OreOp) -> Rational {
    match l.coeffs().iter().find(|p| !p.is_zero()) {
        Some(p) if p.lc().is_negative() => -Rational::one(),
        _ => Rational::one(),
    }
}

pub fn operator_text(l: &OreOp, style: Style) -> String {
    match style {
        Style::Canonical => l.canonical_text(),
        Style::Factored => factored_text(&l.scale(&QPoly::constant(factored_sign(l)))),
    }
}

pub fn rhs_text(rhs: &ClosedForm) -> String {
    match rhs.as_constant() {
        Some(c) => rational_text(&c),
        None => rhs.to_text(),
    }
}

/// `[L, rhs]`. The factored style may flip the sign of `L`, and flips the
/// right-hand side with it.
pub fn print_operator(l: &OreOp, rhs: &ClosedForm, style: Style) -> String {
    let rhs = match style {
        Style::Canonical => rhs.simplified(),
        Style::Factored => rhs.scale(&factored_sign(l)),
    };
    format!("[{}, {}]", operator_text(l, style), rhs_text(&rhs))
}

fn factored_text(l: &OreOp) -> String {
    let mut out = String::new();
    for (j, p) in l.coeffs().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let (neg, mut parts) = coefficient_parts(p);
        match j {
            0 => {}
            1 => parts.push("N".into()),
            _ => parts.push(format!("N^{j}")),
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let body = parts.join("*");
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Sign and multiplicative parts of a coefficient; a single expanded part
/// when it does not split into linear factors over `Q`.
fn coefficient_parts(p: &QPoly) -> (bool, Vec<String>) {
    let ints = integer_coeffs(p);
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let neg = ints.last().expect("nonzero").is_negative();
    let prim: Vec<BigInt> = ints.iter().map(|c| c / &content * if neg { -1 } else { 1 }).collect();
    let Some(mut factors) = linear_factors(prim) else {
        let abs = if neg { -p.clone() } else { p.clone() };
        return (neg, vec![format!("({})", expanded_text(&abs))]);
    };
    // ascending roots -b/a
    factors.sort_by(|(a1, b1), (a2, b2)| (-b1 * a2).cmp(&(-b2 * a1)));
    let mut parts = Vec::new();
    // a rational content only arises from rational input coefficients
    let scale = p.lc().abs() / Rational::from_integer(ints.last().unwrap().abs()) * Rational::from_integer(content);
    if !scale.is_one() {
        parts.push(rational_text(&scale));
    }
    let mut i = 0;
    while i < factors.len() {
        let mut m = 1;
        while i + m < factors.len() && factors[i + m] == factors[i] {
            m += 1;
        }
        let text = linear_text(&factors[i]);
        parts.push(if m == 1 { text } else { format!("{text}^{m}") });
        i += m;
    }
    (neg, parts)
}

fn linear_text((a, b): &(BigInt, BigInt)) -> String {
    let lead = if a.is_one() { "n".to_string() } else { format!("{a}*n") };
    if b.is_zero() {
        lead
    } else if b.is_negative() {
        format!("({lead}-{})", b.abs())
    } else {
        format!("({lead}+{b})")
    }
}

fn integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let l = Rational::from_integer(l);
    p.coeffs().iter().map(|c| (c * &l).to_integer()).collect()
}

fn divisors(m: &BigInt) -> Vec<BigInt> {
    let m = m.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            out.push(d.clone());
            let other = &m / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Factors `(a, b)` meaning `a*n + b` with `a > 0`, when the primitive
/// integer polynomial (ascending coefficients) splits completely.
fn linear_factors(mut c: Vec<BigInt>) -> Option<Vec<(BigInt, BigInt)>> {
    let mut out = Vec::new();
    while c.len() > 1 {
        if c[0].is_zero() {
            c.remove(0);
            out.push((BigInt::one(), BigInt::zero()));
            continue;
        }
        let lead = c.last().unwrap().clone();
        let mut found = None;
        'search: for q in divisors(&lead) {
            for p in divisors(&c[0]) {
                for p in [p.clone(), -p] {
                    // root p/q  <=>  factor q*n - p
                    if p.gcd(&q).is_one() && eval_scaled(&c, &p, &q).is_zero() {
                        found = Some((q.clone(), p));
                        break 'search;
                    }
                }
            }
        }
        let (q, p) = found?;
        c = divide_linear(&c, &q, &p);
        out.push((q, -p));
    }
    Some(out)
}

/// `q^deg * c(p/q)`.
fn eval_scaled(c: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    let d = c.len() - 1;
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    let mut ppow: Vec<BigInt> = vec![BigInt::one()];
    for _ in 0..d {
        let next = ppow.last().unwrap() * p;
        ppow.push(next);
    }
    for i in (0..=d).rev() {
        acc += &c[i] * &ppow[i] * &qpow;
        qpow *= q;
    }
    acc
}

/// Exact quotient of `c` by `q*n - p`.
fn divide_linear(c: &[BigInt], q: &BigInt, p: &BigInt) -> Vec<BigInt> {
    let d = c.len() - 1;
    let mut out = vec![BigInt::zero(); d];
    let mut rem = c.to_vec();
    for i in (1..=d).rev() {
        let coef = &rem[i] / q;
        rem[i - 1] += &coef * p;
        out[i - 1] = coef;
    }
    out
}
