//! Proof artifacts: JSON with rationals as `"p/q"` strings and polynomials as
//! ascending coefficient arrays.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use telescope_core::exact::{parse_rational, rational_text};
use telescope_core::ore::{ClosedForm, HyperTermN, OreOp};
use telescope_core::{QPoly, Qn, QnPoly, Qnk, Rational};

pub const SCHEMA: &str = "telescope-proof/1";

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sum,
    Integral,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Artifact {
    pub schema: String,
    pub tool_version: String,
    pub kind: Kind,
    pub input: String,
    /// `LO..UP` for sums, `A..B` for integrals.
    pub domain: String,
    pub operator: OperatorJson,
    pub rhs: RhsJson,
    pub certificate: CertificateJson,
    pub verification: Verification,
    pub timing_ms: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct OperatorJson {
    pub canonical: String,
    pub factored: String,
    /// `coefficients[j]` multiplies `N^j`.
    pub coefficients: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RhsJson {
    pub text: String,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub start: i64,
    pub value: String,
    pub quotient: RatJson,
    pub exceptions: Vec<(i64, String)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RatJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

/// Rational function in the summation or integration variable over `Q(n)`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CertificateJson {
    pub text: String,
    pub num: Vec<RatJson>,
    pub den: Vec<RatJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Verification {
    pub certificate_ok: bool,
    pub oracle_window: Option<(i64, i64)>,
    pub oracle_ok: bool,
}

#[derive(Debug, thiserror::Error)]
#[error("malformed artifact: {0}")]
pub struct Malformed(pub String);

fn poly_json(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(rational_text).collect()
}

fn poly_from(v: &[String]) -> Result<QPoly, Malformed> {
    v.iter()
        .map(|s| parse_rational(s).ok_or_else(|| Malformed(format!("bad rational '{s}'"))))
        .collect::<Result<Vec<_>, _>>()
        .map(QPoly::new)
}

fn qn_json(q: &Qn) -> RatJson {
    RatJson {
        num: poly_json(q.num()),
        den: poly_json(q.den()),
    }
}

fn qn_from(r: &RatJson) -> Result<Qn, Malformed> {
    let den = poly_from(&r.den)?;
    if den.is_zero() {
        return Err(Malformed("zero denominator".into()));
    }
    Ok(Qn::new(poly_from(&r.num)?, den))
}

pub fn operator_json(l: &OreOp, canonical: String, factored: String) -> OperatorJson {
    OperatorJson {
        canonical,
        factored,
        coefficients: l.coeffs().iter().map(poly_json).collect(),
    }
}

pub fn operator_from(o: &OperatorJson) -> Result<OreOp, Malformed> {
    let coeffs = o.coefficients.iter().map(|c| poly_from(c)).collect::<Result<Vec<_>, _>>()?;
    Ok(OreOp::new(coeffs))
}

pub fn rhs_json(rhs: &ClosedForm, text: String) -> RhsJson {
    RhsJson {
        text,
        terms: rhs
            .terms
            .iter()
            .map(|t| TermJson {
                start: t.start,
                value: rational_text(&t.value),
                quotient: qn_json(&t.quotient),
                exceptions: t.exceptions.iter().map(|(i, v)| (*i, rational_text(v))).collect(),
            })
            .collect(),
    }
}

pub fn rhs_from(r: &RhsJson) -> Result<ClosedForm, Malformed> {
    let rat = |s: &str| parse_rational(s).ok_or_else(|| Malformed(format!("bad rational '{s}'")));
    let terms = r
        .terms
        .iter()
        .map(|t| {
            let ex = t
                .exceptions
                .iter()
                .map(|(i, v)| Ok((*i, rat(v)?)))
                .collect::<Result<Vec<(i64, Rational)>, Malformed>>()?;
            Ok(HyperTermN::new(t.start, rat(&t.value)?, qn_from(&t.quotient)?).with_exceptions(ex))
        })
        .collect::<Result<Vec<_>, Malformed>>()?;
    Ok(ClosedForm { terms })
}

pub fn certificate_json(r: &Qnk, var: &str) -> CertificateJson {
    CertificateJson {
        text: r.display(var).to_string(),
        num: r.num().coeffs().iter().map(qn_json).collect(),
        den: r.den().coeffs().iter().map(qn_json).collect(),
    }
}

pub fn certificate_from(c: &CertificateJson) -> Result<Qnk, Malformed> {
    let poly = |v: &[RatJson]| v.iter().map(qn_from).collect::<Result<Vec<_>, _>>().map(QnPoly::new);
    let den = poly(&c.den)?;
    if den.is_zero() {
        return Err(Malformed("zero certificate denominator".into()));
    }
    Ok(Qnk::new(poly(&c.num)?, den))
}
