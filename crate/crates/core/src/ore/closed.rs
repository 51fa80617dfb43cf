use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{integer_roots, solve_linear, Field};
use crate::{QPoly, Qn, Rational};

/// Anything that yields exact values at integer indices.
pub trait Sequence {
    fn at(&self, n: i64) -> Option<Rational>;
}

impl Sequence for BTreeMap<i64, Rational> {
    fn at(&self, n: i64) -> Option<Rational> {
        self.get(&n).cloned()
    }
}

impl<F: Fn(i64) -> Option<Rational>> Sequence for F {
    fn at(&self, n: i64) -> Option<Rational> {
        self(n)
    }
}

/// A first-order hypergeometric sequence in `n`.
///
/// Defined on the explicit prefix `exceptions` (contiguous indices just below
/// `start`) and on every `n >= start` through `value(n+1) = quotient(n) * value(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperTermN {
    pub start: i64,
    pub value: Rational,
    pub quotient: Qn,
    pub exceptions: Vec<(i64, Rational)>,
}

impl HyperTermN {
    pub fn new(start: i64, value: Rational, quotient: Qn) -> Self {
        HyperTermN {
            start,
            value,
            quotient,
            exceptions: Vec::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(0, c, Qn::one())
    }

    pub fn with_exceptions(mut self, mut exceptions: Vec<(i64, Rational)>) -> Self {
        exceptions.sort_by_key(|e| e.0);
        self.exceptions = exceptions;
        self
    }

    /// Lowest index at which the term has a value.
    pub fn domain_start(&self) -> i64 {
        self.exceptions.first().map_or(self.start, |e| e.0.min(self.start))
    }

    /// True when the value at `start` is zero and every exception is zero.
    pub fn is_zero(&self) -> bool {
        self.value.is_zero() && self.exceptions.iter().all(|e| e.1.is_zero())
    }

    /// Values on `from..=to`; `None` entries lie outside the domain.
    pub fn values(&self, from: i64, to: i64) -> Vec<Option<Rational>> {
        let mut out = Vec::new();
        let mut cur = self.value.clone();
        let mut idx = self.start;
        for n in from..=to {
            if n < self.start {
                out.push(self.exceptions.iter().find(|e| e.0 == n).map(|e| e.1.clone()));
                continue;
            }
            while idx < n {
                if cur.is_zero() {
                    idx = n;
                    break;
                }
                let q = self
                    .quotient
                    .specialize(&BigInt::from(idx))
                    .expect("quotient pole past start index");
                cur *= q;
                idx += 1;
            }
            out.push(Some(cur.clone()));
        }
        out
    }

    pub fn eval(&self, n: i64) -> Option<Rational> {
        self.values(n, n).pop().flatten()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HyperTermN {
            start: self.start,
            value: &self.value * c,
            quotient: self.quotient.clone(),
            exceptions: self.exceptions.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// Same sequence with `start` moved up to `new_start`, earlier values
    /// becoming exceptions.
    pub fn restart_at(&self, new_start: i64) -> Self {
        if new_start <= self.start {
            return self.clone();
        }
        let lo = self.domain_start();
        let vals = self.values(lo, new_start);
        let mut exceptions = Vec::new();
        for (i, v) in (lo..new_start).zip(&vals) {
            if let Some(v) = v {
                exceptions.push((i, v.clone()));
            }
        }
        HyperTermN {
            start: new_start,
            value: vals.last().cloned().flatten().expect("value at new start"),
            quotient: self.quotient.clone(),
            exceptions,
        }
    }
}

impl Sequence for HyperTermN {
    fn at(&self, n: i64) -> Option<Rational> {
        self.eval(n)
    }
}

/// A finite sum of [`HyperTermN`]; the empty sum is zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ClosedForm {
    pub terms: Vec<HyperTermN>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm { terms: Vec::new() }
    }

    pub fn from_term(t: HyperTermN) -> Self {
        ClosedForm { terms: vec![t] }.simplified()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_term(HyperTermN::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn domain_start(&self) -> i64 {
        self.terms.iter().map(HyperTermN::domain_start).max().unwrap_or(i64::MIN)
    }

    pub fn eval(&self, n: i64) -> Option<Rational> {
        self.terms
            .iter()
            .try_fold(Rational::zero(), |acc, t| Some(acc + t.eval(n)?))
    }

    pub fn values(&self, from: i64, to: i64) -> Vec<Option<Rational>> {
        let mut acc: Vec<Option<Rational>> = vec![Some(Rational::zero()); (to - from + 1).max(0) as usize];
        for t in &self.terms {
            for (slot, v) in acc.iter_mut().zip(t.values(from, to)) {
                *slot = match (slot.take(), v) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            }
        }
        acc
    }

    pub fn add(&self, other: &ClosedForm) -> ClosedForm {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ClosedForm { terms }.simplified()
    }

    pub fn negate(&self) -> ClosedForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> ClosedForm {
        ClosedForm {
            terms: self.terms.iter().map(|t| t.scale(c)).collect(),
        }
        .simplified()
    }

    /// Merge terms with identical quotients, fold terms that vanish past
    /// their start into a neighbour, pull starts down where the prefix
    /// follows the quotient, and drop zero terms.
    pub fn simplified(&self) -> ClosedForm {
        let mut groups: Vec<HyperTermN> = Vec::new();
        for t in &self.terms {
            if let Some(g) = groups.iter_mut().find(|g| g.quotient == t.quotient) {
                *g = merge_same_quotient(g, t);
            } else {
                groups.push(t.clone());
            }
        }
        groups.retain(|t| !t.is_zero());
        // a zero value at `start` stays zero, so only the prefix matters
        while groups.len() > 1 {
            let Some(i) = groups.iter().position(|t| t.value.is_zero()) else { break };
            let t = groups.remove(i);
            let j = groups.iter().position(|g| !g.value.is_zero()).unwrap_or(0);
            groups[j] = merge_same_quotient(&groups[j], &t);
        }
        groups.iter_mut().for_each(lower_start);
        groups.retain(|t| !t.is_zero());
        ClosedForm { terms: groups }
    }
}

impl Sequence for ClosedForm {
    fn at(&self, n: i64) -> Option<Rational> {
        self.eval(n)
    }
}

fn merge_same_quotient(a: &HyperTermN, b: &HyperTermN) -> HyperTermN {
    let start = a.start.max(b.start);
    let lo = a.domain_start().max(b.domain_start());
    let (a, b) = (a.restart_at(start), b.restart_at(start));
    let exceptions = (lo..start)
        .filter_map(|i| Some((i, a.eval(i)? + b.eval(i)?)))
        .collect();
    HyperTermN {
        start,
        value: a.value + b.value,
        quotient: a.quotient,
        exceptions,
    }
}

/// Absorb trailing exceptions that the quotient already predicts.
fn lower_start(t: &mut HyperTermN) {
    while let Some(&(i, ref e)) = t.exceptions.last() {
        if i != t.start - 1 || e.is_zero() {
            break;
        }
        let Some(q) = t.quotient.specialize(&BigInt::from(i)) else { break };
        if q.is_zero() || e * q != t.value {
            break;
        }
        t.value = e.clone();
        t.start = i;
        t.exceptions.pop();
    }
}

/// Exact equality of two closed forms on their common domain.
///
/// The difference `D` (after merging equal quotients) has `m` terms; an
/// order-`m` recurrence `sum_j a_j(n) D(n+j) = 0` valid for `n >= s` is found
/// by linear algebra over `Q(n)`. Vanishing of `D` on the initial window and
/// at every index where the leading coefficient `a_m` has an integer root
/// then forces `D = 0` everywhere.
pub fn closed_form_equal(a: &ClosedForm, b: &ClosedForm) -> bool {
    let diff = a.add(&b.negate());
    let lo = a.domain_start().max(b.domain_start());
    let lo = if lo == i64::MIN { 0 } else { lo };
    if diff.terms.is_empty() {
        return true;
    }
    let s = diff.terms.iter().map(|t| t.start).max().unwrap().max(lo);
    let ann = annihilator(&diff.terms);
    let r = ann.len() as i64 - 1;
    let mut checks: Vec<i64> = (lo..s + r).collect();
    let lead = &ann[ann.len() - 1];
    for root in integer_roots(lead) {
        let root = i64::try_from(root).unwrap_or(i64::MAX);
        if root >= s && root < i64::MAX - r {
            checks.push(root + r);
        }
    }
    checks.into_iter().all(|n| diff.eval(n).is_some_and(|v| v.is_zero()))
}

/// Polynomial coefficients `a_0..a_r` with `a_r != 0` annihilating every
/// linear combination of the given terms past their start indices.
fn annihilator(terms: &[HyperTermN]) -> Vec<QPoly> {
    let m = terms.len();
    // column j: products q_i(n) q_i(n+1) ... q_i(n+j-1) for each term i
    let mut cols: Vec<Vec<Qn>> = Vec::with_capacity(m + 1);
    let mut cur: Vec<Qn> = vec![Qn::one(); m];
    for j in 0..=m {
        cols.push(cur.clone());
        if j < m {
            for (c, t) in cur.iter_mut().zip(terms) {
                let shifted = t.quotient.shift(&Rational::from_integer(BigInt::from(j as i64)));
                *c = c.clone() * shifted;
            }
        }
    }
    let matrix: Vec<Vec<Qn>> = (0..m)
        .map(|i| (0..=m).map(|j| cols[j][i].clone()).collect())
        .collect();
    let sol = solve_linear(&matrix, &vec![Qn::zero(); m]).expect("homogeneous system");
    let v = sol
        .nullspace
        .into_iter()
        .next()
        .expect("m equations in m+1 unknowns have a nonzero solution");
    let den = v
        .iter()
        .fold(QPoly::one(), |acc, c| acc.lcm(c.den()));
    let mut polys: Vec<QPoly> = v
        .iter()
        .map(|c| c.num().clone() * den.div_rem(c.den()).0)
        .collect();
    while polys.last().is_some_and(|p| p.is_zero()) {
        polys.pop();
    }
    polys
}

impl ClosedForm {
    /// Plain text, one `H[...]` per term; used in artifacts and summaries.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|t| t.to_text())
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The constant value when the form is a single constant sequence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.quotient.is_one() && t.exceptions.iter().all(|e| e.1 == t.value) => {
                Some(t.value.clone())
            }
            _ => None,
        }
    }
}

impl HyperTermN {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "H[start={}, value={}, ratio={}",
            self.start,
            crate::exact::rational_text(&self.value),
            self.quotient.display("n")
        );
        if !self.exceptions.is_empty() {
            let ex: Vec<String> = self
                .exceptions
                .iter()
                .map(|(i, v)| format!("{}:{}", i, crate::exact::rational_text(v)))
                .collect();
            s.push_str(&format!(", prefix={{{}}}", ex.join(", ")));
        }
        s.push(']');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, UniPoly};

    fn qpoly_from_ints(v: &[i64]) -> QPoly {
        UniPoly::from_ints(v)
    }

    fn four_sum_rhs() -> HyperTermN {
        // 3(3n+2)(3n+4) / (2(2n+3)(n+2))
        let num = qpoly_from_ints(&[2, 3]) * qpoly_from_ints(&[4, 3]) * qpoly_from_ints(&[3]);
        let den = qpoly_from_ints(&[3, 2]) * qpoly_from_ints(&[2, 1]) * qpoly_from_ints(&[2]);
        HyperTermN::new(0, rat(-3), Qn::new(num, den))
    }

    #[test]
    fn hyper_values() {
        let t = four_sum_rhs();
        // -3 (3n+1)! / ((2n+1)! (n+1)!) : n=0 -> -3, n=1 -> -3*24/(6*2) = -6
        assert_eq!(t.eval(0), Some(rat(-3)));
        assert_eq!(t.eval(1), Some(rat(-6)));
        assert_eq!(t.eval(-1), None);
        let r = t.restart_at(3);
        assert_eq!(r.values(0, 5), t.values(0, 5));
    }

    #[test]
    fn constant_forms() {
        let two = ClosedForm::constant(rat(2));
        assert!(closed_form_equal(&two, &two));
        assert!(!closed_form_equal(&two, &ClosedForm::zero()));
        assert!(closed_form_equal(&ClosedForm::zero(), &ClosedForm::zero()));
        assert_eq!(two.as_constant(), Some(rat(2)));
    }

    #[test]
    fn split_terms_merge() {
        let t = four_sum_rhs();
        let half = ClosedForm::from_term(t.scale(&Rational::new(1.into(), 2.into())));
        let doubled = half.add(&half);
        assert!(closed_form_equal(&doubled, &ClosedForm::from_term(t.clone())));
        assert_eq!(doubled.terms.len(), 1);
        // a different start value breaks equality
        let other = ClosedForm::from_term(HyperTermN { value: rat(-4), ..t });
        assert!(!closed_form_equal(&doubled, &other));
    }

    #[test]
    fn two_distinct_quotients() {
        // 2^n + 3^n vs the same built with shifted starts
        let a = ClosedForm {
            terms: vec![
                HyperTermN::new(0, rat(1), Qn::constant(rat(2))),
                HyperTermN::new(0, rat(1), Qn::constant(rat(3))),
            ],
        };
        let b = ClosedForm {
            terms: vec![
                HyperTermN::new(2, rat(9), Qn::constant(rat(3))).with_exceptions(vec![(0, rat(1)), (1, rat(3))]),
                HyperTermN::new(1, rat(2), Qn::constant(rat(2))).with_exceptions(vec![(0, rat(1))]),
            ],
        };
        assert!(closed_form_equal(&a, &b));
        assert!(closed_form_equal(&b, &a));
        let c = ClosedForm {
            terms: vec![HyperTermN::new(0, rat(2), Qn::constant(rat(2)))],
        };
        assert!(!closed_form_equal(&a, &c));
    }

    #[test]
    fn single_prefix_disagreement_is_caught() {
        let q = Qn::new(qpoly_from_ints(&[-5, 1]), qpoly_from_ints(&[1, 1]));
        let a = ClosedForm::from_term(HyperTermN::new(1, rat(1), q.clone()).with_exceptions(vec![(0, rat(5))]));
        let b = ClosedForm::from_term(HyperTermN::new(1, rat(1), q).with_exceptions(vec![(0, rat(6))]));
        assert!(closed_form_equal(&a, &a));
        assert!(!closed_form_equal(&a, &b));
    }

    #[test]
    fn boundary_shaped_sum_collapses() {
        let t = four_sum_rhs();
        let tail = t.restart_at(2);
        let zeros = HyperTermN { exceptions: vec![(0, rat(0)), (1, rat(0))], ..tail.clone() };
        let vanishing = HyperTermN::new(2, rat(0), Qn::constant(rat(5))).with_exceptions(vec![(0, rat(-3)), (1, rat(-6))]);
        let s = ClosedForm { terms: vec![vanishing, zeros] }.simplified();
        assert_eq!(s.terms, vec![t]);
    }
}
