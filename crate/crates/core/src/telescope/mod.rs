//! Discrete creative telescoping: operators `L = sum_j sigma_j(n) N^j` and
//! certificates `R(n, k)` with `L F = R(n, k+1) F(n, k+1) - R(n, k) F(n, k)`,
//! and the boundary terms that turn them into recurrences for definite sums.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::rat;
use crate::gosper::{gosper_form, solve_parametrized};
use crate::oracle::{check_recurrence, sum_values, OracleError, SumSpec};
use crate::ore::{ClosedForm, HyperTermN, OreOp};
use crate::termlib::{past_roots, specialize_line, support_analysis, ProperTerm, TermError, Var};
use crate::{QPoly, Qn, QnPoly, Qnk, Rational};

pub use crate::termlib::SumRange;

/// Extra indices checked past the symbolic validity point.
pub const VERIFY_WINDOW: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TelescopeError {
    #[error("no operator of order <= {max_order} found")]
    NoOperatorFound { max_order: usize },
    #[error("no certified extension line above the summation range")]
    UnsupportedRange,
    #[error("certificate has a pole on the boundary line k = {beta}*n + {gamma}")]
    PoleOnBoundary { beta: i64, gamma: i64 },
    #[error("recurrence fails against direct summation at n = {n}")]
    VerificationFailed { n: i64 },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Telescoper and certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct CTPair {
    /// `sigma[j]` multiplies `N^j`; integer coefficients, content 1,
    /// top coefficient with positive leading coefficient.
    pub sigma: Vec<QPoly>,
    pub certificate: Qnk,
}

impl CTPair {
    pub fn order(&self) -> usize {
        self.sigma.len() - 1
    }

    pub fn operator(&self) -> OreOp {
        OreOp::new(self.sigma.clone())
    }
}

/// `q(n + i, k)`.
fn shift_n(q: &Qnk, i: i64) -> Qnk {
    let h = rat(i);
    Qnk::new(q.num().map(|c| c.shift(&h)), q.den().map(|c| c.shift(&h)))
}

/// `F(n+j, k) / F(n, k)` for `j = 0..=order`.
fn n_ratios(t: &ProperTerm, order: usize) -> Vec<Qnk> {
    let qn = t.shift_quotient(Var::N);
    let mut u = vec![Qnk::one()];
    for j in 1..=order {
        let next = u[j - 1].clone() * shift_n(&qn, j as i64 - 1);
        u.push(next);
    }
    u
}

fn lift(c: &Qn) -> Qnk {
    Qnk::constant(c.clone())
}

/// Clear denominators of `sigma` and normalize; returns the integer
/// coefficients and the unit `lambda` with `coeffs = lambda * sigma`.
pub(crate) fn normalize_sigma(sigma: &[Qn]) -> (Vec<QPoly>, Qn) {
    let l = sigma.iter().fold(QPoly::one(), |acc, s| acc.lcm(s.den()));
    let polys: Vec<QPoly> = sigma
        .iter()
        .map(|s| s.num().clone() * l.div_rem(s.den()).0)
        .collect();
    let canon = OreOp::new(polys.clone()).canonical();
    let j = polys.iter().position(|p| !p.is_zero()).expect("nonzero telescoper");
    let unit = Qn::new(canon.coeffs()[j].clone(), polys[j].clone());
    (canon.coeffs().to_vec(), unit * Qn::from_poly(l))
}

fn normalize(sigma: Vec<Qn>, cert: Qnk) -> CTPair {
    let (sigma, scale) = normalize_sigma(&sigma);
    CTPair {
        sigma,
        certificate: cert * lift(&scale),
    }
}

fn try_order(q: &Qnk, u: &[Qnk]) -> Option<CTPair> {
    // F(n+j,k) = u_j F = (v_j / w) F with polynomial v_j
    let w = u.iter().fold(QnPoly::one(), |acc, r| acc.lcm(r.den()));
    let v: Vec<QnPoly> = u.iter().map(|r| r.num().clone() * w.div_rem(r.den()).0).collect();
    let one = Qn::one();
    let rbar = q.clone() * Qnk::new(w.clone(), w.shift(&one));
    let form = gosper_form(&rbar);
    let rhs: Vec<QnPoly> = v.iter().map(|vj| form.c.clone() * vj.clone()).collect();
    let (x, sigma) = solve_parametrized(&form.a, &form.b, &rhs)?;
    let cert = Qnk::new(form.b.shift(&-one) * x, form.c * w);
    Some(normalize(sigma, cert))
}

/// Minimal-order telescoper of order at most `max_order`.
pub fn telescope_sum(t: &ProperTerm, max_order: usize) -> Result<CTPair, TelescopeError> {
    let q = t.shift_quotient(Var::K);
    let u = n_ratios(t, max_order);
    for order in 0..=max_order {
        if let Some(pair) = try_order(&q, &u[..=order]) {
            assert!(verify_ct(t, &pair), "telescoper failed its certificate identity");
            return Ok(pair);
        }
    }
    Err(TelescopeError::NoOperatorFound { max_order })
}

/// `sum_j sigma_j F(n+j,k)/F(n,k) = R(n,k+1) q(n,k) - R(n,k)`, as an exact
/// identity of reduced rational functions.
pub fn verify_ct(t: &ProperTerm, pair: &CTPair) -> bool {
    if pair.sigma.iter().all(|s| s.is_zero()) {
        return false;
    }
    let q = t.shift_quotient(Var::K);
    let u = n_ratios(t, pair.order());
    let lhs = pair
        .sigma
        .iter()
        .zip(&u)
        .fold(Qnk::zero(), |acc, (s, uj)| acc + lift(&Qn::from_poly(s.clone())) * uj.clone());
    let r = &pair.certificate;
    let rhs = r.shift(&Qn::one()) * q - r.clone();
    // compare cleared of denominators
    lhs.num().clone() * rhs.den().clone() == rhs.num().clone() * lhs.den().clone()
}

/// `G(n, beta*n + gamma) = R F` on a line, for `n` past every pole and zero
/// of the restricted certificate.
fn boundary_term(t: &ProperTerm, r: &Qnk, beta: i64, gamma: i64) -> Result<HyperTermN, TelescopeError> {
    let line = Qn::from_poly(QPoly::from_ints(&[gamma, beta]));
    let den = r.den().eval(&line);
    if den.is_zero() {
        return Err(TelescopeError::PoleOnBoundary { beta, gamma });
    }
    let rho = r.num().eval(&line) / den;
    if rho.is_zero() {
        return Ok(HyperTermN::new(0, Rational::zero(), Qn::one()));
    }
    let g = specialize_line(t, beta, gamma).map_err(|e| match e {
        TermError::PoleOnLine { .. } => TelescopeError::PoleOnBoundary { beta, gamma },
        other => TelescopeError::Term(other),
    })?;
    let start = g.start.max(past_roots(&[], &[rho.num(), rho.den()]));
    let g = g.restart_at(start);
    let quotient = g.quotient.clone() * rho.shift(&rat(1)) / rho.clone();
    let value = rho.eval(&rat(start)).expect("past the poles") * g.value;
    Ok(HyperTermN::new(start, value, quotient))
}

/// Right-hand side of `L S(n) = RHS(n)` for `S(n) = sum_{k=lower}^{b(n)} F(n, k)`.
///
/// The telescoped sum runs up to the extension line `K(n) = b(n + J)`, over
/// which every shifted summand vanishes beyond its own range; the two
/// boundary terms `G(n, K(n)+1)` and `G(n, lower)` are evaluated along their
/// lines. Below the point from which this construction is valid the values
/// are recorded explicitly from direct summation, and the result is checked
/// against direct summation on a window past that point.
pub fn boundary_rhs(t: &ProperTerm, pair: &CTPair, range: &SumRange) -> Result<ClosedForm, TelescopeError> {
    let order = pair.order();
    let info = support_analysis(t, order, range);
    let (beta, gamma) = info.upper_line.ok_or(TelescopeError::UnsupportedRange)?;
    let upper = boundary_term(t, &pair.certificate, beta, gamma + 1)?;
    let lower = boundary_term(t, &pair.certificate, 0, range.lower)?.scale(&rat(-1));

    let first = range.start();
    let valid = [upper.start, lower.start, info.upper_from, first]
        .into_iter()
        .max()
        .unwrap_or(0);
    let j = order as i64;
    let spec = SumSpec {
        term: t.clone(),
        range: *range,
    };
    let values = sum_values(&spec, first, valid + VERIFY_WINDOW + 2 * j)?;
    let op = pair.operator();
    let exact_prefix: Vec<(i64, Rational)> = (first..valid)
        .map(|n| Ok((n, op.apply(&values, n).map_err(|_| TelescopeError::VerificationFailed { n })?)))
        .collect::<Result<_, TelescopeError>>()?;
    let zeros: Vec<(i64, Rational)> = (first..valid).map(|n| (n, Rational::zero())).collect();
    let upper = upper.restart_at(valid);
    let upper = HyperTermN::new(valid, upper.value, upper.quotient).with_exceptions(exact_prefix);
    let lower = lower.restart_at(valid);
    let lower = HyperTermN::new(valid, lower.value, lower.quotient).with_exceptions(zeros);
    let rhs = ClosedForm { terms: vec![upper, lower] }.simplified();

    let hi = valid + j + VERIFY_WINDOW;
    if !check_recurrence(&values, &op, &rhs, first, hi)? {
        let n = (first..=hi)
            .find(|&n| op.apply(&values, n).ok() != rhs.eval(n))
            .unwrap_or(first);
        return Err(TelescopeError::VerificationFailed { n });
    }
    Ok(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::standard::{a6256, four_sums};
    use crate::ore::closed_form_equal;
    use crate::termlib::lin;

    fn four_sum_rhs() -> ClosedForm {
        // -3 (3n+1)! / ((2n+1)! (n+1)!)
        let num = QPoly::from_ints(&[8, 18, 9]).scale(&rat(3));
        let den = QPoly::from_ints(&[6, 7, 2]).scale(&rat(2));
        ClosedForm::from_term(HyperTermN::new(0, rat(-3), Qn::new(num, den)))
    }

    #[test]
    fn binomial_row_sum() {
        let t = ProperTerm::one().times_binomial(lin(1, 0, 0), lin(0, 1, 0));
        let pair = telescope_sum(&t, 3).unwrap();
        assert_eq!(pair.operator(), OreOp::from_int_coeffs(&[&[-2], &[1]]));
        assert!(verify_ct(&t, &pair));
        let rhs = boundary_rhs(&t, &pair, &SumRange::new(0, 1, 0)).unwrap();
        assert!(rhs.is_zero());
    }

    #[test]
    fn perturbed_certificate_fails() {
        let t = ProperTerm::one().times_binomial(lin(1, 0, 0), lin(0, 1, 0));
        let mut pair = telescope_sum(&t, 3).unwrap();
        pair.certificate = pair.certificate + Qnk::one();
        assert!(!verify_ct(&t, &pair));
    }

    #[test]
    fn hand_built_pair() {
        // C(n+1,k) - 2 C(n,k) = G(k+1) - G(k) with G = -C(n,k-1) = R C(n,k), R = -k/(n-k+1)
        let t = ProperTerm::one().times_binomial(lin(1, 0, 0), lin(0, 1, 0));
        let n = Qn::var();
        let num = QnPoly::new(vec![Qn::zero(), -Qn::one()]);
        let den = QnPoly::new(vec![n + Qn::one(), -Qn::one()]);
        let pair = CTPair {
            sigma: vec![QPoly::from_ints(&[-2]), QPoly::from_ints(&[1])],
            certificate: Qnk::new(num, den),
        };
        assert!(verify_ct(&t, &pair));
    }

    #[test]
    fn four_sums_share_one_recurrence() {
        for spec in four_sums() {
            let pair = telescope_sum(&spec.term, 6).unwrap();
            assert_eq!(pair.operator(), OreOp::from_int_coeffs(&[&[-27], &[4]]));
            let rhs = boundary_rhs(&spec.term, &pair, &spec.range).unwrap();
            assert_eq!(rhs.eval(0), Some(rat(-3)));
            assert!(closed_form_equal(&rhs, &four_sum_rhs()), "{}", rhs.to_text());
        }
    }

    #[test]
    fn a6256_is_second_order_homogeneous() {
        let spec = a6256();
        let pair = telescope_sum(&spec.term, 6).unwrap();
        assert_eq!(pair.order(), 2);
        let expected = OreOp::new(vec![
            QPoly::from_ints(&[-648, -1458, -729]),
            QPoly::from_ints(&[420, 594, 216]),
            QPoly::from_ints(&[-48, -56, -16]),
        ]);
        assert!(crate::ore::equal_up_to_unit(&pair.operator(), &expected));
        assert!(boundary_rhs(&spec.term, &pair, &spec.range).unwrap().is_zero());
        assert_eq!(
            telescope_sum(&spec.term, 1),
            Err(TelescopeError::NoOperatorFound { max_order: 1 })
        );
    }
}
