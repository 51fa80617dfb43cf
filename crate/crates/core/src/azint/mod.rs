//! Continuous creative telescoping for `F(n, x) = c(x) f(x)^n`:
//! `sum_j sigma_j(n) F(n+j, x) = D_x (R(n, x) F(n, x))`, and the definite
//! integral recurrences obtained by evaluating `R F` at the bounds.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{rat, solve_linear, Ring};
use crate::oracle::{integral_values, PolyIntegralSpec};
use crate::ore::{ClosedForm, HyperTermN, OreOp};
use crate::telescope::normalize_sigma;
use crate::termlib::{past_roots, HyperexpTerm};
use crate::{QPoly, Qn, QnPoly, Qnk, Rational};

/// Extra numerator degrees tried at each order before moving on.
pub const DEGREE_STEPS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AzError {
    #[error("no operator of order <= {max_order} found")]
    NoOperatorFound { max_order: usize },
    #[error("certificate or integrand is infinite at the endpoint {0}")]
    PoleAtEndpoint(Rational),
    #[error("boundary term has a pole at n = {0} that cannot be filled in")]
    PoleAtInteger(i64),
}

/// Telescoper and certificate, `R` a rational function of `x` over `Q(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContCTPair {
    pub sigma: Vec<QPoly>,
    pub certificate: Qnk,
}

impl ContCTPair {
    pub fn order(&self) -> usize {
        self.sigma.len() - 1
    }

    pub fn operator(&self) -> OreOp {
        OreOp::new(self.sigma.clone())
    }
}

fn lift_x(p: &QPoly) -> QnPoly {
    p.map(|c| Qn::constant(c.clone()))
}

/// Coefficient columns of the linear system at a given order, numerator
/// degree `d` and denominator power `m`.
///
/// With `c = C/D` and `R = X / (f^m D)`, multiplying the certificate identity
/// by `f^(m+1) D^2 C` gives
/// `sum_j sigma_j f^(j+m+1) D^2 C = X' f D C + X ((n-m) f' D C + f (C' D - 2 D' C))`.
fn try_shape(t: &HyperexpTerm, order: usize, d: usize, m: usize) -> Option<ContCTPair> {
    let f = &t.base;
    let (cn, cd) = (t.prefactor.num(), t.prefactor.den());
    let df = f.derivative();
    let base_sigma = Ring::pow(cd, 2) * cn.clone() * Ring::pow(f, m as u32 + 1);
    let mut cols: Vec<QnPoly> = Vec::new();
    let mut fj = QPoly::one();
    for _ in 0..=order {
        cols.push(lift_x(&(base_sigma.clone() * fj.clone())));
        fj = fj * f.clone();
    }
    let n_minus_m = Qn::var() - Qn::constant(rat(m as i64));
    let fdc = lift_x(&(f.clone() * cd.clone() * cn.clone()));
    let mult = lift_x(&(df * cd.clone() * cn.clone())).scale(&n_minus_m)
        + lift_x(&(f.clone() * (cn.derivative() * cd.clone() - cd.derivative() * cn.clone() * QPoly::constant(rat(2)))));
    for i in 0..=d {
        let x = QnPoly::monomial(Qn::one(), i);
        let contribution = x.derivative() * fdc.clone() + x * mult.clone();
        cols.push(-contribution);
    }
    let rows = cols.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
    let matrix: Vec<Vec<Qn>> = (0..rows)
        .map(|r| cols.iter().map(|c| c.coeff(r)).collect())
        .collect();
    let sol = solve_linear(&matrix, &vec![Qn::zero(); rows]).ok()?;
    let v = sol
        .nullspace
        .into_iter()
        .find(|v| v[..=order].iter().any(|s| !s.is_zero()))?;
    let (sigma, x) = v.split_at(order + 1);
    let (sigma, scale) = normalize_sigma(sigma);
    let den = Ring::pow(f, m as u32) * cd.clone();
    let cert = Qnk::new(QnPoly::new(x.to_vec()), lift_x(&den)) * Qnk::constant(scale);
    Some(ContCTPair { sigma, certificate: cert })
}

/// Minimal-order continuous telescoper of order at most `max_order`.
pub fn telescope_integral(t: &HyperexpTerm, max_order: usize) -> Result<ContCTPair, AzError> {
    let deg_f = t.base.deg().max(0) as usize;
    for order in 0..=max_order {
        let natural = deg_f * (order + 1) + t.prefactor.den().deg().max(0) as usize;
        for d in natural..=natural + DEGREE_STEPS {
            if let Some(pair) = try_shape(t, order, d, order) {
                assert!(verify_az(t, &pair), "telescoper failed its certificate identity");
                return Ok(pair);
            }
        }
    }
    Err(AzError::NoOperatorFound { max_order })
}

/// `sum_j sigma_j f^j = R' + R (c'/c + n f'/f)`, compared after clearing
/// denominators.
pub fn verify_az(t: &HyperexpTerm, pair: &ContCTPair) -> bool {
    if pair.sigma.iter().all(|s| s.is_zero()) {
        return false;
    }
    let f = Qnk::from_poly(lift_x(&t.base));
    let mut lhs = Qnk::zero();
    let mut fj = Qnk::one();
    for s in &pair.sigma {
        lhs = lhs + Qnk::constant(Qn::from_poly(s.clone())) * fj.clone();
        fj = fj * f.clone();
    }
    let r = &pair.certificate;
    let rhs = r.derivative() + r.clone() * t.log_derivative_qn();
    lhs.num().clone() * rhs.den().clone() == rhs.num().clone() * lhs.den().clone()
}

/// `R(n, e) c(e) f(e)^n` as a sequence in `n`, with any indices below its
/// symbolic start that cannot be evaluated directly returned separately.
fn endpoint_term(t: &HyperexpTerm, r: &Qnk, e: &Rational) -> Result<(HyperTermN, Vec<i64>), AzError> {
    let at = Qn::constant(e.clone());
    let den = r.den().eval(&at);
    let c = t.prefactor.eval(e).ok_or_else(|| AzError::PoleAtEndpoint(e.clone()))?;
    if den.is_zero() {
        return Err(AzError::PoleAtEndpoint(e.clone()));
    }
    let rho = r.num().eval(&at) / den;
    if rho.is_zero() || c.is_zero() {
        return Ok((HyperTermN::new(0, Rational::zero(), Qn::one()), Vec::new()));
    }
    let phi = t.base.eval(e);
    let direct = |n: i64| -> Option<Rational> {
        let rv = rho.eval(&rat(n))?;
        Some(rv * &c * Ring::pow(&phi, n as u32))
    };
    let mut start = past_roots(&[], &[rho.num(), rho.den()]);
    if phi.is_zero() {
        // 0^0 = 1: only n = 0 survives
        start = start.max(1);
    }
    let quotient = rho.shift(&rat(1)) / rho.clone() * Qn::constant(phi.clone());
    let value = direct(start).expect("past the poles");
    let mut exceptions = Vec::new();
    let mut missing = Vec::new();
    for n in 0..start {
        match direct(n) {
            Some(v) => exceptions.push((n, v)),
            None => missing.push(n),
        }
    }
    Ok((HyperTermN::new(start, value, quotient).with_exceptions(exceptions), missing))
}

/// Right-hand side of `L I(n) = RHS(n)` for `I(n) = int_a^b c(x) f(x)^n dx`.
pub fn az_definite(t: &HyperexpTerm, pair: &ContCTPair, a: &Rational, b: &Rational) -> Result<ClosedForm, AzError> {
    let (upper, miss_b) = endpoint_term(t, &pair.certificate, b)?;
    let (lower, miss_a) = endpoint_term(t, &pair.certificate, a)?;
    let lower = lower.scale(&rat(-1));
    let mut missing: Vec<i64> = miss_a.into_iter().chain(miss_b).collect();
    missing.sort();
    missing.dedup();
    if missing.is_empty() {
        return Ok(ClosedForm { terms: vec![upper, lower] }.simplified());
    }
    // fill the gaps from exact integration, possible for a constant prefactor
    let scale = t
        .prefactor
        .num()
        .is_constant()
        .then(|| t.prefactor.eval(&Rational::zero()))
        .flatten()
        .filter(|_| t.prefactor.den().is_constant())
        .ok_or(AzError::PoleAtInteger(missing[0]))?;
    let spec = PolyIntegralSpec {
        scale,
        base: t.base.clone(),
        a: a.clone(),
        b: b.clone(),
    };
    let hi = *missing.last().unwrap();
    let values = integral_values(&spec, 0, (hi + pair.order() as i64) as u32);
    let op = pair.operator();
    let valid = hi + 1;
    let prefix: Vec<(i64, Rational)> = (0..valid)
        .map(|n| (n, op.apply(&values, n).expect("values cover the window")))
        .collect();
    let zeros: Vec<(i64, Rational)> = (0..valid).map(|n| (n, Rational::zero())).collect();
    let restart = |h: HyperTermN, ex| {
        let h = h.restart_at(valid);
        HyperTermN::new(valid, h.value, h.quotient).with_exceptions(ex)
    };
    let terms = vec![restart(upper, prefix), restart(lower, zeros)];
    Ok(ClosedForm { terms }.simplified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::standard::cubic;
    use crate::ore::equal_up_to_unit;
    use crate::RatFunc;

    fn half(p: i64) -> Rational {
        Rational::new(p.into(), 2.into())
    }

    #[test]
    fn cubic_operator() {
        let t = HyperexpTerm::power(cubic());
        let pair = telescope_integral(&t, 3).unwrap();
        let expected = OreOp::new(vec![
            QPoly::from_ints(&[9, 27, 18]),
            QPoly::from_ints(&[-16, -36, -18]),
        ]);
        assert!(equal_up_to_unit(&pair.operator(), &expected));
        let rhs = az_definite(&t, &pair, &half(-1), &half(3)).unwrap();
        assert_eq!(rhs.as_constant(), Some(rat(-2)));
        let t2 = HyperexpTerm::new(RatFunc::constant(rat(2)), cubic());
        let pair2 = telescope_integral(&t2, 3).unwrap();
        assert_eq!(pair2.sigma, pair.sigma);
        let rhs2 = az_definite(&t2, &pair2, &rat(0), &rat(1)).unwrap();
        assert_eq!(rhs2.as_constant(), Some(rat(-2)));
    }

    #[test]
    fn monomial_is_order_zero() {
        let t = HyperexpTerm::power(QPoly::from_ints(&[0, 1]));
        let pair = telescope_integral(&t, 2).unwrap();
        // (n+1) F = D_x(x F), normalized by the unit 1/(n+1)
        assert_eq!(pair.sigma, vec![QPoly::one()]);
        let x_over = Qnk::new(QnPoly::monomial(Qn::one(), 1), QnPoly::constant(Qn::var() + Qn::one()));
        assert_eq!(pair.certificate, x_over);
        let rhs = az_definite(&t, &pair, &rat(0), &rat(1)).unwrap();
        // int_0^1 x^n dx = 1/(n+1)
        for n in 0..6 {
            assert_eq!(rhs.eval(n), Some(Rational::new(1.into(), (n + 1).into())));
        }
    }

    #[test]
    fn constant_base() {
        let t = HyperexpTerm::power(QPoly::one());
        // F = D_x(x F) already at order 0; N - 1 with R = 0 is also a pair
        let pair = telescope_integral(&t, 2).unwrap();
        assert_eq!(pair.sigma, vec![QPoly::one()]);
        assert_eq!(pair.certificate, Qnk::from_poly(QnPoly::monomial(Qn::one(), 1)));
        let shift = ContCTPair {
            sigma: vec![QPoly::from_ints(&[-1]), QPoly::one()],
            certificate: Qnk::zero(),
        };
        assert!(verify_az(&t, &shift));
    }

    #[test]
    fn hand_built_and_perturbed() {
        let t = HyperexpTerm::power(QPoly::from_ints(&[0, 1]));
        let mut pair = ContCTPair {
            sigma: vec![QPoly::from_ints(&[1, 1])],
            certificate: Qnk::from_poly(QnPoly::monomial(Qn::one(), 1)),
        };
        assert!(verify_az(&t, &pair));
        pair.certificate = pair.certificate + Qnk::one();
        assert!(!verify_az(&t, &pair));
    }
}
