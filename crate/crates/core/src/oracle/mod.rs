//! Brute-force ground truth: exact sums, exact polynomial integrals, and
//! pointwise recurrence checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{rat, Ring};
use crate::ore::{ClosedForm, OreError, OreOp};
use crate::termlib::{eval_term_cached, lin, BinomialCache, ProperTerm, SumRange, TermError};
use crate::{QPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("strategy unavailable: the base is not of the form x^2 * (linear)")]
    StrategyUnavailable,
    #[error("values missing at n = {0}")]
    MissingValues(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumSpec {
    pub term: ProperTerm,
    pub range: SumRange,
}

/// `scale * integral_a^b f(x)^n dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyIntegralSpec {
    pub scale: Rational,
    pub base: QPoly,
    pub a: Rational,
    pub b: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Expand `f^n` and integrate monomials.
    Expand,
    /// `f^n = x^(2n) (alpha + beta x)^n` expanded by the binomial theorem.
    Binomial,
}

pub fn eval_sum(spec: &SumSpec, n: i64) -> Result<Rational, OracleError> {
    eval_sum_cached(spec, n, &mut BinomialCache::default())
}

fn eval_sum_cached(spec: &SumSpec, n: i64, cache: &mut BinomialCache) -> Result<Rational, OracleError> {
    let mut s = Rational::zero();
    for k in spec.range.lower..=spec.range.upper_at(n) {
        s += eval_term_cached(&spec.term, n, k, cache)?;
    }
    Ok(s)
}

/// `S(n)` for `n` in `lo..=hi`, sharing one binomial table.
pub fn sum_values(spec: &SumSpec, lo: i64, hi: i64) -> Result<BTreeMap<i64, Rational>, OracleError> {
    let mut cache = BinomialCache::default();
    (lo..=hi)
        .map(|n| Ok((n, eval_sum_cached(spec, n, &mut cache)?)))
        .collect()
}

/// `int_a^b p(x) dx` for a polynomial `p`.
pub fn integrate_poly(p: &QPoly, a: &Rational, b: &Rational) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = (i + 1) as u32;
            c * (Ring::pow(b, e) - Ring::pow(a, e)) / rat(e as i64)
        })
        .fold(Rational::zero(), |acc, v| acc + v)
}

pub fn eval_integral(spec: &PolyIntegralSpec, n: u32, strategy: Strategy) -> Result<Rational, OracleError> {
    let value = match strategy {
        Strategy::Expand => integrate_poly(&Ring::pow(&spec.base, n), &spec.a, &spec.b),
        Strategy::Binomial => {
            let c = spec.base.coeffs();
            if c.len() != 4 || !c[0].is_zero() || !c[1].is_zero() {
                return Err(OracleError::StrategyUnavailable);
            }
            let (alpha, beta) = (&c[2], &c[3]);
            let mut acc = Rational::zero();
            let mut binom = Rational::one();
            for j in 0..=n {
                let e = 2 * n + j + 1;
                let coeff = &binom * Ring::pow(alpha, n - j) * Ring::pow(beta, j);
                acc += coeff * (Ring::pow(&spec.b, e) - Ring::pow(&spec.a, e)) / rat(e as i64);
                binom = binom * rat((n - j) as i64) / rat(j as i64 + 1);
            }
            acc
        }
    };
    Ok(&spec.scale * value)
}

pub fn integral_values(spec: &PolyIntegralSpec, lo: u32, hi: u32) -> BTreeMap<i64, Rational> {
    (lo..=hi)
        .map(|n| {
            let v = eval_integral(spec, n, Strategy::Expand).expect("expansion always applies");
            (n as i64, v)
        })
        .collect()
}

/// `L S(n) = rhs(n)` for every `n` in `lo..=hi`.
pub fn check_recurrence(
    values: &BTreeMap<i64, Rational>,
    l: &OreOp,
    rhs: &ClosedForm,
    lo: i64,
    hi: i64,
) -> Result<bool, OracleError> {
    for n in lo..=hi {
        let lhs = l.apply(values, n).map_err(|e| match e {
            OreError::MissingValues(m) => OracleError::MissingValues(m),
            OreError::ZeroRhs => OracleError::MissingValues(n),
        })?;
        let r = rhs.eval(n).ok_or(OracleError::MissingValues(n))?;
        if lhs != r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The four binomial sums with their ranges, and the defining sum of A006256.
pub mod standard {
    use super::*;

    fn power(b: i64) -> ProperTerm {
        ProperTerm::one().times_power(rat(b), lin(0, 1, 0))
    }

    /// `sum_{k=0}^{n} 3^k C(3n-k, 2n)`, `sum_{k=0}^{2n} (-3)^k C(3n-k, n)`,
    /// `sum_{k=0}^{n} 2^k C(3n+1, n-k)`, `sum_{k=0}^{2n} (-4)^k C(3n+1, n+k+1)`.
    pub fn four_sums() -> Vec<SumSpec> {
        vec![
            SumSpec {
                term: power(3).times_binomial(lin(3, -1, 0), lin(2, 0, 0)),
                range: SumRange::new(0, 1, 0),
            },
            SumSpec {
                term: power(-3).times_binomial(lin(3, -1, 0), lin(1, 0, 0)),
                range: SumRange::new(0, 2, 0),
            },
            SumSpec {
                term: power(2).times_binomial(lin(3, 0, 1), lin(1, -1, 0)),
                range: SumRange::new(0, 1, 0),
            },
            SumSpec {
                term: power(-4).times_binomial(lin(3, 0, 1), lin(1, 1, 1)),
                range: SumRange::new(0, 2, 0),
            },
        ]
    }

    /// `sum_{k=0}^{n} C(3k, k) C(3n-3k, n-k)`.
    pub fn a6256() -> SumSpec {
        SumSpec {
            term: ProperTerm::one()
                .times_binomial(lin(0, 3, 0), lin(0, 1, 0))
                .times_binomial(lin(3, -3, 0), lin(1, -1, 0)),
            range: SumRange::new(0, 1, 0),
        }
    }

    pub fn cubic() -> QPoly {
        QPoly::from_ints(&[0, 0, 3, -2])
    }

    /// `int_{-1/2}^{3/2} (3x^2 - 2x^3)^n dx` and `2 int_0^1 (3x^2 - 2x^3)^n dx`.
    pub fn cubic_integrals() -> [PolyIntegralSpec; 2] {
        [
            PolyIntegralSpec {
                scale: rat(1),
                base: cubic(),
                a: Rational::new((-1).into(), 2.into()),
                b: Rational::new(3.into(), 2.into()),
            },
            PolyIntegralSpec {
                scale: rat(2),
                base: cubic(),
                a: rat(0),
                b: rat(1),
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn sum_examples() {
        let sums = four_sums();
        let first: Vec<_> = (0..=2).map(|n| eval_sum(&sums[0], n).unwrap()).collect();
        assert_eq!(first, vec![rat(1), rat(6), rat(39)]);
        assert_eq!(eval_sum(&sums[3], 1).unwrap(), rat(6));
        assert_eq!(eval_sum(&a6256(), 0).unwrap(), rat(1));
    }

    #[test]
    fn integral_examples() {
        let [left, right] = cubic_integrals();
        assert_eq!(eval_integral(&left, 0, Strategy::Expand).unwrap(), rat(2));
        assert_eq!(eval_integral(&right, 1, Strategy::Expand).unwrap(), rat(1));
        assert_eq!(
            eval_integral(&right, 2, Strategy::Binomial).unwrap(),
            Rational::new(26.into(), 35.into())
        );
        let other = PolyIntegralSpec {
            base: QPoly::from_ints(&[1, 1]),
            ..right
        };
        assert_eq!(
            eval_integral(&other, 2, Strategy::Binomial),
            Err(OracleError::StrategyUnavailable)
        );
    }

    #[test]
    fn recurrence_checks() {
        // S(n) = 2^n satisfies (N - 2) S = 0 but not (N - 3) S = 0
        let values: BTreeMap<i64, Rational> = (0..=10).map(|n| (n, Ring::pow(&rat(2), n as u32))).collect();
        let good = OreOp::from_int_coeffs(&[&[-2], &[1]]);
        let bad = OreOp::from_int_coeffs(&[&[-3], &[1]]);
        assert!(check_recurrence(&values, &good, &ClosedForm::zero(), 0, 9).unwrap());
        assert!(!check_recurrence(&values, &bad, &ClosedForm::zero(), 0, 9).unwrap());
        assert_eq!(
            check_recurrence(&values, &good, &ClosedForm::zero(), 0, 10),
            Err(OracleError::MissingValues(11))
        );
    }
}
