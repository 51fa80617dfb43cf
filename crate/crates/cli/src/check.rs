//! Re-verification of artifacts and the built-in regression suite.
//!
//! Artifact checks rebuild the term, operator, certificate and right-hand
//! side from the JSON alone and use only the certificate identities and the
//! brute-force oracle; no discovery code runs.

use std::collections::BTreeMap;

use telescope_core::azint::{verify_az, ContCTPair};
use telescope_core::exact::rat;
use telescope_core::oracle::standard::{a6256, cubic_integrals, four_sums};
use telescope_core::oracle::{check_recurrence, eval_integral, integral_values, sum_values, Strategy};
use telescope_core::ore::{closed_form_equal, equal_up_to_unit, homogenize, ClosedForm, HyperTermN, OreOp};
use telescope_core::reader::{parse_hyperexp, parse_proper, print_operator, Style};
use telescope_core::telescope::{verify_ct, CTPair};
use telescope_core::{QPoly, Qn, Rational};

use crate::artifact::{certificate_from, operator_from, rhs_from, Artifact, Kind, SCHEMA};
use crate::prove::{
    discover_integral, discover_sum, integral_oracle_values, parse_bounds, parse_range, prove_integral,
};

/// Every failed check, empty when the artifact verifies.
pub fn check_artifact(a: &Artifact) -> Vec<String> {
    let mut failures = Vec::new();
    if a.schema != SCHEMA {
        failures.push(format!("unknown schema '{}'", a.schema));
        return failures;
    }
    let parts = (|| -> Result<_, String> {
        let l = operator_from(&a.operator).map_err(|e| e.to_string())?;
        let r = certificate_from(&a.certificate).map_err(|e| e.to_string())?;
        let rhs = rhs_from(&a.rhs).map_err(|e| e.to_string())?;
        Ok((l, r, rhs))
    })();
    let (l, r, rhs) = match parts {
        Ok(p) => p,
        Err(e) => {
            failures.push(e);
            return failures;
        }
    };
    if l.is_zero() {
        failures.push("zero operator".into());
        return failures;
    }
    if print_operator(&l, &rhs, Style::Canonical) != a.operator.canonical
        || print_operator(&l, &rhs, Style::Factored) != a.operator.factored
    {
        failures.push("operator text does not match its coefficients".into());
    }
    match a.kind {
        Kind::Sum => check_sum(a, &l, r, &rhs, &mut failures),
        Kind::Integral => check_integral(a, &l, r, &rhs, &mut failures),
    }
    failures
}

fn check_sum(a: &Artifact, l: &OreOp, r: telescope_core::Qnk, rhs: &ClosedForm, failures: &mut Vec<String>) {
    let term = match parse_proper(&a.input) {
        Ok(t) => t,
        Err(e) => return failures.push(format!("input: {e}")),
    };
    let range = match parse_range(&a.domain) {
        Ok(r) => r,
        Err(e) => return failures.push(format!("range: {e}")),
    };
    let pair = CTPair {
        sigma: l.coeffs().to_vec(),
        certificate: r,
    };
    if !verify_ct(&term, &pair) {
        failures.push("certificate identity fails".into());
    }
    let Some((lo, hi)) = a.verification.oracle_window else {
        return failures.push("sum artifact without an oracle window".into());
    };
    let spec = telescope_core::oracle::SumSpec { term, range };
    let order = l.order().unwrap_or(0) as i64;
    let ok = sum_values(&spec, lo, hi + order)
        .ok()
        .and_then(|v| check_recurrence(&v, l, rhs, lo, hi).ok())
        .unwrap_or(false);
    if !ok {
        failures.push(format!("recurrence disagrees with direct summation on {lo}..={hi}"));
    }
}

fn check_integral(a: &Artifact, l: &OreOp, r: telescope_core::Qnk, rhs: &ClosedForm, failures: &mut Vec<String>) {
    let term = match parse_hyperexp(&a.input) {
        Ok(t) => t,
        Err(e) => return failures.push(format!("input: {e}")),
    };
    let (lo_b, hi_b) = match parse_bounds(&a.domain) {
        Ok(b) => b,
        Err(e) => return failures.push(format!("bounds: {e}")),
    };
    let pair = ContCTPair {
        sigma: l.coeffs().to_vec(),
        certificate: r,
    };
    if !verify_az(&term, &pair) {
        failures.push("certificate identity fails".into());
    }
    let Some((lo, hi)) = a.verification.oracle_window else { return };
    let order = l.order().unwrap_or(0) as i64;
    let ok = integral_oracle_values(&term, &lo_b, &hi_b, hi + order)
        .map(|v| v.into_iter().collect::<BTreeMap<_, _>>())
        .and_then(|v| check_recurrence(&v, l, rhs, lo, hi).ok())
        .unwrap_or(false);
    if !ok {
        failures.push(format!("recurrence disagrees with exact integration on {lo}..={hi}"));
    }
}

/// One named claim of the built-in suite.
pub struct Claim {
    pub id: u32,
    pub name: &'static str,
    pub run: fn() -> Result<(), String>,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

pub const CUBIC_PAIR: &str = "[9*(n+1)*(2*n+1) - 2*(3*n+4)*(3*n+2)*N, 2]";
pub const CUBIC_INPUTS: [(&str, &str); 2] = [("(3*x^2-2*x^3)^n", "-1/2..3/2"), ("2*(3*x^2-2*x^3)^n", "0..1")];
pub const SUM_INPUTS: [(&str, &str); 4] = [
    ("3^k*binomial(3*n-k,2*n)", "0..n"),
    ("(-3)^k*binomial(3*n-k,n)", "0..2n"),
    ("2^k*binomial(3*n+1,n-k)", "0..n"),
    ("(-4)^k*binomial(3*n+1,n+k+1)", "0..2n"),
];
pub const A6256_INPUT: (&str, &str) = ("binomial(3*k,k)*binomial(3*n-3*k,n-k)", "0..n");

/// `-3 (3n+1)! / ((2n+1)! (n+1)!)`.
pub fn four_sum_rhs() -> HyperTermN {
    let num = QPoly::from_ints(&[8, 18, 9]).scale(&rat(3));
    let den = QPoly::from_ints(&[6, 7, 2]).scale(&rat(2));
    HyperTermN::new(0, rat(-3), Qn::new(num, den))
}

pub fn a6256_operator() -> OreOp {
    OreOp::new(vec![
        QPoly::from_ints(&[-648, -1458, -729]),
        QPoly::from_ints(&[420, 594, 216]),
        QPoly::from_ints(&[-48, -56, -16]),
    ])
}

fn claim_integrals() -> Result<(), String> {
    for (text, bounds) in CUBIC_INPUTS {
        let a = prove_integral(text, bounds, 6).map_err(|e| e.to_string())?;
        ensure(a.operator.factored == CUBIC_PAIR, format!("{text}: got {}", a.operator.factored))?;
        ensure(a.verification.certificate_ok, format!("{text}: certificate"))?;
        ensure(a.verification.oracle_ok, format!("{text}: oracle"))?;
    }
    Ok(())
}

fn claim_four_sums() -> Result<(), String> {
    let target = ClosedForm::from_term(four_sum_rhs());
    for (text, range) in SUM_INPUTS {
        let p = discover_sum(text, range, 6).map_err(|e| e.to_string())?;
        let l = p.pair.operator();
        ensure(l == OreOp::from_int_coeffs(&[&[-27], &[4]]), format!("{text}: operator {}", l.canonical_text()))?;
        let rhs = p.rhs.ok_or(format!("{text}: no verified right-hand side"))?;
        ensure(closed_form_equal(&rhs, &target), format!("{text}: rhs {}", rhs.to_text()))?;
    }
    Ok(())
}

fn claim_a6256() -> Result<(), String> {
    let p = discover_sum(A6256_INPUT.0, A6256_INPUT.1, 6).map_err(|e| e.to_string())?;
    ensure(p.pair.order() == 2, format!("order {}", p.pair.order()))?;
    ensure(equal_up_to_unit(&p.pair.operator(), &a6256_operator()), "operator differs")?;
    ensure(p.rhs.is_some_and(|r| r.is_zero()), "not homogeneous")
}

fn claim_equivalence() -> Result<(), String> {
    let l = OreOp::from_int_coeffs(&[&[-27], &[4]]);
    let h = homogenize(&l, &four_sum_rhs()).map_err(|e| e.to_string())?;
    ensure(equal_up_to_unit(&h, &a6256_operator()), format!("homogenized: {}", h.canonical_text()))
}

fn claim_oracle() -> Result<(), String> {
    let reference = sum_values(&a6256(), 0, 50).map_err(|e| e.to_string())?;
    ensure(
        (0..3).map(|n| reference[&n].clone()).collect::<Vec<_>>() == vec![rat(1), rat(6), rat(39)],
        "first values",
    )?;
    for spec in four_sums() {
        let v = sum_values(&spec, 0, 50).map_err(|e| e.to_string())?;
        ensure(v == reference, "a sum differs from the A006256 defining sum")?;
    }
    let [left, right] = cubic_integrals();
    let lv = integral_values(&left, 0, 30);
    ensure(lv == integral_values(&right, 0, 30), "the two integrals differ")?;
    ensure(lv[&0] == rat(2) && lv[&1] == rat(1), "I(0), I(1)")?;
    ensure(lv[&2] == Rational::new(26.into(), 35.into()), "I(2)")?;
    for n in 0..=30 {
        let b = eval_integral(&right, n, Strategy::Binomial).map_err(|e| e.to_string())?;
        ensure(b == lv[&(n as i64)], format!("strategies differ at n = {n}"))?;
    }
    Ok(())
}

fn claim_certificates() -> Result<(), String> {
    for (text, range) in SUM_INPUTS.iter().chain([&A6256_INPUT]) {
        let p = discover_sum(text, range, 6).map_err(|e| e.to_string())?;
        ensure(verify_ct(&p.term, &p.pair), format!("{text}: certificate"))?;
    }
    for (text, bounds) in CUBIC_INPUTS {
        let p = discover_integral(text, bounds, 6).map_err(|e| e.to_string())?;
        ensure(verify_az(&p.term, &p.pair), format!("{text}: certificate"))?;
    }
    Ok(())
}

fn claim_recurrences() -> Result<(), String> {
    for (text, range) in SUM_INPUTS.iter().chain([&A6256_INPUT]) {
        let p = discover_sum(text, range, 6).map_err(|e| e.to_string())?;
        let rhs = p.rhs.ok_or(format!("{text}: no right-hand side"))?;
        let spec = telescope_core::oracle::SumSpec { term: p.term, range: p.range };
        let v = sum_values(&spec, 0, 32).map_err(|e| e.to_string())?;
        let ok = check_recurrence(&v, &p.pair.operator(), &rhs, 0, 30).map_err(|e| e.to_string())?;
        ensure(ok, format!("{text}: recurrence on 0..=30"))?;
    }
    for ((text, bounds), spec) in CUBIC_INPUTS.iter().zip(cubic_integrals()) {
        let p = discover_integral(text, bounds, 6).map_err(|e| e.to_string())?;
        let v = integral_values(&spec, 0, 21);
        let ok = check_recurrence(&v, &p.pair.operator(), &p.rhs, 0, 20).map_err(|e| e.to_string())?;
        ensure(ok, format!("{text}: recurrence on 0..=20"))?;
    }
    Ok(())
}

/// The claims checked by `check --builtin-suite`.
pub fn claims() -> Vec<Claim> {
    vec![
        Claim { id: 1, name: "integral recurrence", run: claim_integrals },
        Claim { id: 2, name: "four-sum recurrence", run: claim_four_sums },
        Claim { id: 3, name: "A006256 recurrence", run: claim_a6256 },
        Claim { id: 4, name: "inhomogeneous and homogeneous recurrences equivalent", run: claim_equivalence },
        Claim { id: 5, name: "oracle identities", run: claim_oracle },
        Claim { id: 6, name: "certificate soundness", run: claim_certificates },
        Claim { id: 7, name: "recurrences against the oracle", run: claim_recurrences },
    ]
}
