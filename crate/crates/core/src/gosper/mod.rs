//! Gosper's algorithm for indefinite hypergeometric summation over any field
//! in the coefficient tower.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{integer_roots, solve_linear, Field, RatFunc, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GosperError {
    #[error("term is not Gosper-summable")]
    NotSummable,
}

/// `r(k) = a(k)/b(k) * c(k+1)/c(k)` with `gcd(a(k), b(k+h)) = 1` for all `h >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GosperForm<F: Field> {
    pub a: UniPoly<F>,
    pub b: UniPoly<F>,
    pub c: UniPoly<F>,
}

/// Rational `y(k)` with `y(k+1) r(k) - y(k) = 1`, so `T = y t` is an
/// antidifference of any term `t` with ratio `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct GosperCertificate<F: Field> {
    pub y: RatFunc<F>,
}

/// Nonnegative integers `h` with `gcd(f(k), g(k+h)) != 1`, ascending.
pub fn dispersion_set<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Vec<BigInt> {
    if f.is_constant() || g.is_constant() {
        return Vec::new();
    }
    // Res_k(f(k), g(k+h)) as a polynomial in h
    let lift = |p: &UniPoly<F>| p.map(|c| UniPoly::constant(c.clone()));
    let k_plus_h = UniPoly::new(vec![UniPoly::var(), UniPoly::one()]);
    let g_shifted = lift(g).compose(&k_plus_h);
    let res = lift(f).resultant(&g_shifted);
    if res.is_zero() {
        // f and g share a factor for every h; only possible for degenerate input
        panic!("dispersion of polynomials with a common factor in every shift");
    }
    integer_roots(&res)
        .into_iter()
        .filter(|h| !h.is_negative())
        .collect()
}

fn shift_by<F: Field>(p: &UniPoly<F>, h: i64) -> UniPoly<F> {
    p.shift(&F::from_i64(h))
}

pub fn gosper_form<F: Field>(r: &RatFunc<F>) -> GosperForm<F> {
    assert!(!r.is_zero(), "Gosper form of the zero ratio");
    let mut a = r.num().clone();
    let mut b = r.den().clone();
    let mut c = UniPoly::one();
    let hs = dispersion_set(&a, &b);
    for h in &hs {
        let h: i64 = h.try_into().expect("dispersion fits in i64");
        let s = a.gcd(&shift_by(&b, h));
        if s.is_constant() {
            continue;
        }
        a = a.div_rem(&s).0;
        b = b.div_rem(&shift_by(&s, -h)).0;
        for i in 1..=h {
            c = c * shift_by(&s, -i);
        }
    }
    for h in &hs {
        let h: i64 = h.try_into().expect("dispersion fits in i64");
        assert!(
            a.gcd(&shift_by(&b, h)).is_constant(),
            "Gosper form invariant violated at h = {h}"
        );
    }
    GosperForm { a, b, c }
}

/// Candidate degree for `x` in `a x(k+1) - b(k-1) x(k) = rhs` with
/// `deg rhs <= rhs_deg`; `None` when no nonnegative degree is possible.
pub fn degree_bound<F: Field>(a: &UniPoly<F>, bm1: &UniPoly<F>, rhs_deg: i64) -> Option<i64> {
    if rhs_deg < 0 {
        return None;
    }
    let p0 = a.clone() - bm1.clone();
    let p1 = a.clone() + bm1.clone();
    let d = if p0.deg() >= p1.deg() {
        rhs_deg - p0.deg()
    } else {
        let l = p1.deg();
        let mut d = rhs_deg - l + 1;
        let d0 = (F::from_i64(-2) * p0.coeff((l - 1) as usize)) / p1.lc();
        if let Some(d0) = d0.as_integer() {
            if let Ok(d0) = i64::try_from(d0) {
                d = d.max(d0);
            }
        }
        d
    };
    (d >= 0).then_some(d)
}

/// `a x(k+1) - b(k-1) x(k)` for `x = k^i`, `i = 0..=d`.
fn operator_columns<F: Field>(a: &UniPoly<F>, bm1: &UniPoly<F>, d: i64) -> Vec<UniPoly<F>> {
    (0..=d)
        .map(|i| {
            let xi = UniPoly::monomial(F::one(), i as usize);
            a.clone() * xi.shift(&F::one()) - bm1.clone() * xi
        })
        .collect()
}

fn system<F: Field>(cols: &[UniPoly<F>]) -> Vec<Vec<F>> {
    let rows = cols.iter().map(|c| c.deg() + 1).max().unwrap_or(0).max(0) as usize;
    (0..rows)
        .map(|t| cols.iter().map(|c| c.coeff(t)).collect())
        .collect()
}

/// Polynomial solution of `a x(k+1) - b(k-1) x(k) = c`.
pub fn solve_gosper_equation<F: Field>(form: &GosperForm<F>) -> Option<UniPoly<F>> {
    let bm1 = shift_by(&form.b, -1);
    let d = degree_bound(&form.a, &bm1, form.c.deg())?;
    let cols = operator_columns(&form.a, &bm1, d);
    let rows = cols
        .iter()
        .map(|c| c.deg())
        .chain([form.c.deg()])
        .max()
        .unwrap_or(0)
        + 1;
    let m: Vec<Vec<F>> = (0..rows as usize)
        .map(|t| cols.iter().map(|c| c.coeff(t)).collect())
        .collect();
    let rhs: Vec<F> = (0..rows as usize).map(|t| form.c.coeff(t)).collect();
    let sol = solve_linear(&m, &rhs).ok()?;
    Some(UniPoly::new(sol.particular))
}

/// Solution `(x, sigma)` with some `sigma_j != 0` of
/// `a x(k+1) - b(k-1) x(k) = sum_j sigma_j rhs_j`, all unknowns solved jointly.
pub fn solve_parametrized<F: Field>(
    a: &UniPoly<F>,
    b: &UniPoly<F>,
    rhs: &[UniPoly<F>],
) -> Option<(UniPoly<F>, Vec<F>)> {
    let bm1 = shift_by(b, -1);
    let rhs_deg = rhs.iter().map(UniPoly::deg).max().unwrap_or(-1);
    let d = degree_bound(a, &bm1, rhs_deg).unwrap_or(-1);
    let mut cols = operator_columns(a, &bm1, d);
    let nx = cols.len();
    cols.extend(rhs.iter().map(|r| -r.clone()));
    let m = system(&cols);
    let zeros = vec![F::zero(); m.len()];
    let sol = solve_linear(&m, &zeros).ok()?;
    let v = sol.nullspace.into_iter().find(|v| v[nx..].iter().any(|s| !s.is_zero()))?;
    Some((UniPoly::new(v[..nx].to_vec()), v[nx..].to_vec()))
}

/// `y(k+1) r(k) - y(k) = 1`, checked exactly.
pub fn verify_certificate<F: Field>(r: &RatFunc<F>, y: &RatFunc<F>) -> bool {
    let lhs = y.shift(&F::one()) * r.clone() - y.clone();
    lhs.is_one()
}

pub fn gosper<F: Field>(r: &RatFunc<F>) -> Result<GosperCertificate<F>, GosperError> {
    let form = gosper_form(r);
    let x = solve_gosper_equation(&form).ok_or(GosperError::NotSummable)?;
    let y = RatFunc::new(shift_by(&form.b, -1) * x, form.c.clone());
    assert!(verify_certificate(r, &y), "Gosper certificate failed its identity");
    Ok(GosperCertificate { y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::{QPoly, Qn, QnPoly, Rational};

    type Qk = RatFunc<Rational>;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> Qk {
        Qk::new(p(n), p(d))
    }

    #[test]
    fn forms() {
        let f = gosper_form(&rf(&[1, 1], &[0, 1]));
        assert_eq!((f.a, f.b, f.c), (p(&[1]), p(&[1]), p(&[0, 1])));
        let f = gosper_form(&rf(&[2], &[1]));
        assert_eq!((f.a, f.b, f.c), (p(&[2]), p(&[1]), p(&[1])));
        let f = gosper_form(&rf(&[1, 1], &[1]));
        assert_eq!((f.a, f.b, f.c), (p(&[1, 1]), p(&[1]), p(&[1])));
    }

    #[test]
    fn certificates() {
        let y = gosper(&rf(&[1, 1], &[0, 1])).unwrap().y;
        assert_eq!(y, Qk::new(p(&[-1, 1]), p(&[2])));
        let y = gosper(&rf(&[2], &[1])).unwrap().y;
        assert!(y.is_one());
        assert_eq!(gosper(&rf(&[1, 1], &[1])), Err(GosperError::NotSummable));
    }

    #[test]
    fn factorial_has_no_rational_antidifference() {
        // y(k+1)(k+1) - y(k) = 1 with y = u(k)/q(k) for fixed small q is linear in u
        let dens = [p(&[1]), p(&[0, 1]), p(&[1, 1]), p(&[0, 1, 1]), p(&[2, 3, 1])];
        for q in dens {
            for deg in 0..=5usize {
                let cols: Vec<QPoly> = (0..=deg)
                    .map(|i| {
                        let u = QPoly::monomial(rat(1), i);
                        // clear by q(k) q(k+1)
                        u.shift(&rat(1)) * p(&[1, 1]) * q.clone() - u * q.shift(&rat(1))
                    })
                    .collect();
                let rhs = q.clone() * q.shift(&rat(1));
                let rows = cols.iter().map(|c| c.deg()).chain([rhs.deg()]).max().unwrap() + 1;
                let m: Vec<Vec<Rational>> = (0..rows as usize)
                    .map(|t| cols.iter().map(|c| c.coeff(t)).collect())
                    .collect();
                let b: Vec<Rational> = (0..rows as usize).map(|t| rhs.coeff(t)).collect();
                assert!(solve_linear(&m, &b).is_err(), "q = {q}, deg = {deg}");
            }
        }
    }

    #[test]
    fn parametric_field() {
        // t = n + k: T = k(k + 2n - 1)/2 = y t with y = k(k+2n-1)/(2(n+k))
        let n = Qn::var();
        let lin_k = |c: Qn| QnPoly::new(vec![c, Qn::one()]);
        let r = RatFunc::new(lin_k(n.clone() + Qn::one()), lin_k(n.clone()));
        let y = gosper(&r).unwrap().y;
        let num = QnPoly::new(vec![Qn::zero(), n.clone() * Qn::from_i64(2) - Qn::one(), Qn::one()]);
        let den = lin_k(n).scale(&Qn::from_i64(2));
        assert_eq!(y, RatFunc::new(num, den));
    }

    #[test]
    fn binomial_is_not_indefinitely_summable() {
        // C(n, k): r = (n - k)/(k + 1)
        let n = Qn::var();
        let r = RatFunc::new(
            QnPoly::new(vec![n, -Qn::one()]),
            QnPoly::new(vec![Qn::one(), Qn::one()]),
        );
        assert_eq!(gosper(&r), Err(GosperError::NotSummable));
    }

    #[test]
    fn parametrized_solver_finds_sigma() {
        // x(k+1) - x(k) = s0 * 1 + s1 * (2k + 1): x = k^2 with s0 = 0, s1 = 1
        let (x, s) = solve_parametrized(&p(&[1]), &p(&[1]), &[p(&[1]), p(&[1, 2])]).unwrap();
        let lhs = x.shift(&rat(1)) - x;
        assert_eq!(lhs, p(&[1]).scale(&s[0]) + p(&[1, 2]).scale(&s[1]));
        assert!(s.iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn degree_bounds() {
        // a = 1, b(k-1) = 1: p0 = 0, p1 = 2 -> d = deg c + 1
        assert_eq!(degree_bound(&p(&[1]), &p(&[1]), 2), Some(3));
        // k! : a = k+1, b = 1
        assert_eq!(degree_bound(&p(&[1, 1]), &p(&[1]), 0), None);
    }
}
