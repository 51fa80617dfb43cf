//! `prove sum` and `prove int`: parse, discover, verify, package.

use std::time::Instant;

use telescope_core::azint::{az_definite, telescope_integral, verify_az, AzError, ContCTPair};
use telescope_core::exact::parse_rational;
use telescope_core::oracle::{check_recurrence, integrate_poly, sum_values, SumSpec};
use telescope_core::ore::{ClosedForm, OreOp};
use telescope_core::reader::{eval_expr, parse_expr, parse_hyperexp, parse_proper, print_operator, rhs_text, Style};
use telescope_core::telescope::{boundary_rhs, telescope_sum, verify_ct, CTPair, SumRange, TelescopeError};
use telescope_core::termlib::{HyperexpTerm, ProperTerm};
use telescope_core::{QPoly, Rational};

use crate::artifact::{
    certificate_json, operator_json, rhs_json, Artifact, Kind, Verification, SCHEMA,
};

/// Last index of the oracle window for sums and for integrals.
pub const SUM_WINDOW: i64 = 30;
pub const INTEGRAL_WINDOW: i64 = 20;

#[derive(Debug, thiserror::Error)]
pub enum ProveError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Discovery(String),
}

/// `LO..UP` with `UP` one of `n`, `2n`, `beta*n+gamma`.
pub fn parse_range(text: &str) -> Result<SumRange, ProveError> {
    let usage = |m: &str| ProveError::Usage(format!("range '{text}': {m}"));
    let (lo, up) = text.split_once("..").ok_or_else(|| usage("expected LO..UP"))?;
    let lower: i64 = lo.trim().parse().map_err(|_| usage("lower end must be an integer"))?;
    // allow "2n" for "2*n"
    let mut up_text = String::new();
    let mut prev_digit = false;
    for ch in up.trim().chars() {
        if ch == 'n' && prev_digit {
            up_text.push('*');
        }
        prev_digit = ch.is_ascii_digit();
        up_text.push(ch);
    }
    let e = parse_expr(&up_text, &['n']).map_err(|e| usage(&e.to_string()))?;
    let at = |n: i64| -> Result<i64, ProveError> {
        let v = eval_expr(&e, n, 0).ok_or_else(|| usage("upper end is undefined"))?;
        if !v.is_integer() {
            return Err(usage("upper end must be integer-linear in n"));
        }
        i64::try_from(v.to_integer()).map_err(|_| usage("upper end too large"))
    };
    let (gamma, beta) = (at(0)?, at(1)? - at(0)?);
    if (2..=4).any(|n| at(n).ok() != Some(beta * n + gamma)) {
        return Err(usage("upper end must be integer-linear in n"));
    }
    Ok(SumRange::new(lower, beta, gamma))
}

/// `A..B` with rational ends.
pub fn parse_bounds(text: &str) -> Result<(Rational, Rational), ProveError> {
    let usage = || ProveError::Usage(format!("bounds '{text}': expected A..B with rational ends"));
    let (a, b) = text.split_once("..").ok_or_else(usage)?;
    Ok((parse_rational(a).ok_or_else(usage)?, parse_rational(b).ok_or_else(usage)?))
}

fn operator_strings(l: &OreOp, rhs: &ClosedForm) -> (String, String) {
    (
        print_operator(l, rhs, Style::Canonical),
        print_operator(l, rhs, Style::Factored),
    )
}

/// Sum pair with its right-hand side, before packaging.
pub struct SumProof {
    pub term: ProperTerm,
    pub range: SumRange,
    pub pair: CTPair,
    pub rhs: Option<ClosedForm>,
}

pub fn discover_sum(text: &str, range: &str, max_order: usize) -> Result<SumProof, ProveError> {
    let term = parse_proper(text).map_err(|e| ProveError::Usage(e.to_string()))?;
    let range = parse_range(range)?;
    let pair = telescope_sum(&term, max_order).map_err(|e| ProveError::Discovery(e.to_string()))?;
    let rhs = match boundary_rhs(&term, &pair, &range) {
        Ok(rhs) => Some(rhs),
        Err(TelescopeError::VerificationFailed { .. }) => None,
        Err(e) => return Err(ProveError::Discovery(e.to_string())),
    };
    Ok(SumProof { term, range, pair, rhs })
}

/// Oracle agreement of a sum recurrence on `first..=SUM_WINDOW`.
pub fn sum_oracle(term: &ProperTerm, range: &SumRange, l: &OreOp, rhs: &ClosedForm) -> (Option<(i64, i64)>, bool) {
    let first = range.start();
    let hi = SUM_WINDOW.max(first);
    let spec = SumSpec {
        term: term.clone(),
        range: *range,
    };
    let order = l.order().unwrap_or(0) as i64;
    let ok = sum_values(&spec, first, hi + order)
        .ok()
        .and_then(|v| check_recurrence(&v, l, rhs, first, hi).ok())
        .unwrap_or(false);
    (Some((first, hi)), ok)
}

pub fn prove_sum(text: &str, range_text: &str, max_order: usize) -> Result<Artifact, ProveError> {
    let clock = Instant::now();
    let proof = discover_sum(text, range_text, max_order)?;
    let l = proof.pair.operator();
    let certificate_ok = verify_ct(&proof.term, &proof.pair);
    let rhs = proof.rhs.clone().unwrap_or_else(ClosedForm::zero);
    let (window, oracle_ok) = match &proof.rhs {
        Some(rhs) => sum_oracle(&proof.term, &proof.range, &l, rhs),
        None => (None, false),
    };
    let (canonical, factored) = operator_strings(&l, &rhs);
    Ok(Artifact {
        schema: SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        kind: Kind::Sum,
        input: text.into(),
        domain: range_text.into(),
        operator: operator_json(&l, canonical, factored),
        rhs: rhs_json(&rhs, rhs_text(&rhs)),
        certificate: certificate_json(&proof.pair.certificate, "k"),
        verification: Verification {
            certificate_ok,
            oracle_window: window,
            oracle_ok,
        },
        timing_ms: clock.elapsed().as_millis() as u64,
    })
}

/// `c(x) f(x)^n` integrated exactly, for a polynomial prefactor.
pub fn integral_oracle_values(t: &HyperexpTerm, a: &Rational, b: &Rational, hi: i64) -> Option<Vec<(i64, Rational)>> {
    if !t.prefactor.is_poly() {
        return None;
    }
    let c = t.prefactor.num().clone();
    let mut power = QPoly::constant(Rational::from_integer(1.into()));
    let mut out = Vec::new();
    for n in 0..=hi {
        out.push((n, integrate_poly(&(c.clone() * power.clone()), a, b)));
        power = power * t.base.clone();
    }
    Some(out)
}

pub fn integral_oracle(t: &HyperexpTerm, a: &Rational, b: &Rational, l: &OreOp, rhs: &ClosedForm) -> (Option<(i64, i64)>, bool) {
    let order = l.order().unwrap_or(0) as i64;
    match integral_oracle_values(t, a, b, INTEGRAL_WINDOW + order) {
        Some(values) => {
            let values = values.into_iter().collect();
            let ok = check_recurrence(&values, l, rhs, 0, INTEGRAL_WINDOW).unwrap_or(false);
            (Some((0, INTEGRAL_WINDOW)), ok)
        }
        // no exact integrator for rational prefactors
        None => (None, true),
    }
}

pub struct IntegralProof {
    pub term: HyperexpTerm,
    pub bounds: (Rational, Rational),
    pub pair: ContCTPair,
    pub rhs: ClosedForm,
}

pub fn discover_integral(text: &str, bounds: &str, max_order: usize) -> Result<IntegralProof, ProveError> {
    let term = parse_hyperexp(text).map_err(|e| ProveError::Usage(e.to_string()))?;
    let (a, b) = parse_bounds(bounds)?;
    let pair = telescope_integral(&term, max_order).map_err(|e| ProveError::Discovery(e.to_string()))?;
    let rhs = az_definite(&term, &pair, &a, &b).map_err(|e: AzError| ProveError::Discovery(e.to_string()))?;
    Ok(IntegralProof {
        term,
        bounds: (a, b),
        pair,
        rhs,
    })
}

pub fn prove_integral(text: &str, bounds_text: &str, max_order: usize) -> Result<Artifact, ProveError> {
    let clock = Instant::now();
    let proof = discover_integral(text, bounds_text, max_order)?;
    let l = proof.pair.operator();
    let certificate_ok = verify_az(&proof.term, &proof.pair);
    let (a, b) = &proof.bounds;
    let (window, oracle_ok) = integral_oracle(&proof.term, a, b, &l, &proof.rhs);
    let (canonical, factored) = operator_strings(&l, &proof.rhs);
    Ok(Artifact {
        schema: SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        kind: Kind::Integral,
        input: text.into(),
        domain: bounds_text.into(),
        operator: operator_json(&l, canonical, factored),
        rhs: rhs_json(&proof.rhs, rhs_text(&proof.rhs)),
        certificate: certificate_json(&proof.pair.certificate, "x"),
        verification: Verification {
            certificate_ok,
            oracle_window: window,
            oracle_ok,
        },
        timing_ms: clock.elapsed().as_millis() as u64,
    })
}

/// Both checks passed.
pub fn verified(a: &Artifact) -> bool {
    a.verification.certificate_ok && a.verification.oracle_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..n").unwrap(), SumRange::new(0, 1, 0));
        assert_eq!(parse_range("0..2n").unwrap(), SumRange::new(0, 2, 0));
        assert_eq!(parse_range("1..3*n+2").unwrap(), SumRange::new(1, 3, 2));
        assert!(parse_range("0..n^2").is_err());
        assert!(parse_range("0..n/2").is_err());
        assert!(parse_range("n").is_err());
    }

    #[test]
    fn bounds() {
        let (a, b) = parse_bounds("-1/2..3/2").unwrap();
        assert_eq!(a, Rational::new((-1).into(), 2.into()));
        assert_eq!(b, Rational::new(3.into(), 2.into()));
        assert!(parse_bounds("0..x").is_err());
    }
}
