//! Shift operators `sum_i a_i(n) N^i` with `N a(n) = a(n+1) N`, and the
//! closed-form sequences used as inhomogeneous right-hand sides.

mod closed;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::rat;
use crate::{QPoly, Qn, Rational};

pub use closed::{closed_form_equal, ClosedForm, HyperTermN, Sequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OreError {
    #[error("zero right-hand side: the operator is already homogeneous")]
    ZeroRhs,
    #[error("missing value at index {0}")]
    MissingValues(i64),
}

/// Linear recurrence operator with polynomial coefficients; `coeffs[i]`
/// multiplies `N^i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OreOp {
    coeffs: Vec<QPoly>,
}

impl OreOp {
    pub fn new(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOp { coeffs }
    }

    pub fn zero() -> Self {
        OreOp { coeffs: Vec::new() }
    }

    /// Multiplication by a polynomial in `n`.
    pub fn scalar(p: QPoly) -> Self {
        Self::new(vec![p])
    }

    /// The shift `N`.
    pub fn shift() -> Self {
        Self::new(vec![QPoly::zero(), QPoly::one()])
    }

    /// From integer coefficient lists, lowest power of `n` first.
    pub fn from_int_coeffs(c: &[&[i64]]) -> Self {
        Self::new(c.iter().map(|v| QPoly::from_ints(v)).collect())
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `N`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &OreOp) -> OreOp {
        let len = self.coeffs.len().max(other.coeffs.len());
        OreOp::new(
            (0..len)
                .map(|i| coeff_or_zero(&self.coeffs, i) + coeff_or_zero(&other.coeffs, i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &OreOp) -> OreOp {
        self.add(&other.scale(&QPoly::constant(rat(-1))))
    }

    /// Left multiplication by a polynomial in `n`.
    pub fn scale(&self, p: &QPoly) -> OreOp {
        OreOp::new(self.coeffs.iter().map(|c| p.clone() * c.clone()).collect())
    }

    /// Composition `self ∘ other`, using `N^i a(n) = a(n+i) N^i`.
    pub fn mul(&self, other: &OreOp) -> OreOp {
        if self.is_zero() || other.is_zero() {
            return OreOp::zero();
        }
        let mut out = vec![QPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let h = rat(i as i64);
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.shift(&h);
            }
        }
        OreOp::new(out)
    }

    /// Canonical representative of `{u * self : u in Q(n)*}`: integer
    /// coefficients, no common polynomial factor, content 1, and the top-order
    /// coefficient with positive leading coefficient.
    pub fn canonical(&self) -> OreOp {
        if self.is_zero() {
            return self.clone();
        }
        let g = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .fold(QPoly::zero(), |acc, c| acc.gcd(c));
        let reduced: Vec<QPoly> = self.coeffs.iter().map(|c| c.div_rem(&g).0).collect();
        let den = reduced
            .iter()
            .flat_map(|c| c.coeffs())
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<Vec<BigInt>> = reduced
            .iter()
            .map(|c| {
                c.coeffs()
                    .iter()
                    .map(|q| (q * Rational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let content = ints
            .iter()
            .flatten()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let top_lc = ints.last().and_then(|c| c.last()).expect("nonzero top coefficient");
        let unit = if top_lc.is_negative() { -content } else { content };
        OreOp::new(
            ints.into_iter()
                .map(|c| {
                    QPoly::new(
                        c.into_iter()
                            .map(|v| Rational::from_integer(v / &unit))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Multiply by a nonzero rational function and clear denominators.
    pub fn scale_rational(&self, u: &Qn) -> OreOp {
        let scaled: Vec<Qn> = self
            .coeffs
            .iter()
            .map(|c| Qn::from_poly(c.clone()) * u.clone())
            .collect();
        from_rational_coeffs(&scaled)
    }

    /// `sum_i a_i(n) * values(n + i)`.
    pub fn apply(&self, values: &impl Sequence, n: i64) -> Result<Rational, OreError> {
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = n + i as i64;
            let v = values.at(idx).ok_or(OreError::MissingValues(idx))?;
            if !c.is_zero() && !v.is_zero() {
                acc += c.eval(&rat(n)) * v;
            }
        }
        Ok(acc)
    }

    /// Canonical text `(c_r(n))*N^r + ... + (c_0(n))*N^0`, zero coefficients omitted.
    pub fn canonical_text(&self) -> String {
        let c = self.canonical();
        if c.is_zero() {
            return "0".to_string();
        }
        c.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| format!("({})*N^{}", expanded_text(p), i))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn coeff_or_zero(c: &[QPoly], i: usize) -> QPoly {
    c.get(i).cloned().unwrap_or_else(QPoly::zero)
}

/// Clear denominators of rational coefficients into a polynomial operator.
pub(crate) fn from_rational_coeffs(c: &[Qn]) -> OreOp {
    let den = c.iter().fold(QPoly::one(), |acc, x| acc.lcm(x.den()));
    OreOp::new(
        c.iter()
            .map(|x| x.num().clone() * den.div_rem(x.den()).0)
            .collect(),
    )
}

/// Expanded polynomial in `n`, highest power first, no spaces: `216*n^2+594*n+420`.
pub fn expanded_text(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let mag_text = crate::exact::rational_text(&mag);
        match i {
            0 => s.push_str(&mag_text),
            _ => {
                if !mag.is_one() {
                    s.push_str(&mag_text);
                    s.push('*');
                }
                s.push('n');
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
        }
    }
    s
}

impl fmt::Debug for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(i, p)| format!("({})*N^{}", expanded_text(p), i))
            .collect();
        write!(f, "OreOp[{}]", parts.join(" + "))
    }
}

impl fmt::Display for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

/// Homogeneous annihilator of every solution of `l f = rhs`:
/// `N∘l - q(n) l`, where `q` is the quotient of `rhs`.
pub fn homogenize(l: &OreOp, rhs: &HyperTermN) -> Result<OreOp, OreError> {
    if rhs.is_zero() {
        return Err(OreError::ZeroRhs);
    }
    let q = &rhs.quotient;
    let shifted = OreOp::shift().mul(l).scale(q.den());
    let h = shifted.sub(&l.scale(q.num()));
    Ok(h.canonical())
}

/// `equal_up_to_unit(a, b)`: `a = u b` for some nonzero `u` in `Q(n)`.
pub fn equal_up_to_unit(a: &OreOp, b: &OreOp) -> bool {
    a.canonical() == b.canonical()
}

/// Operator with coefficients in `Q(n)`, used by right division.
type RatOp = Vec<Qn>;

fn rat_op(a: &OreOp) -> RatOp {
    a.coeffs.iter().map(|c| Qn::from_poly(c.clone())).collect()
}

fn trim(mut a: RatOp) -> RatOp {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Remainder of right division `a = q∘b + r` with `order(r) < order(b)`.
fn right_rem(a: &RatOp, b: &RatOp) -> RatOp {
    let s = b.len() - 1;
    let lb = &b[s];
    let mut r = trim(a.clone());
    while r.len() > s {
        let d = r.len() - 1 - s;
        let h = rat(d as i64);
        let t = r[r.len() - 1].clone() / lb.shift(&h);
        // subtract t N^d ∘ b
        for (j, bj) in b.iter().enumerate() {
            r[d + j] = r[d + j].clone() - t.clone() * bj.shift(&h);
        }
        r = trim(r);
    }
    r
}

/// Greatest common right divisor in `Q(n)<N>`, canonicalized.
pub fn gcrd(a: &OreOp, b: &OreOp) -> OreOp {
    assert!(!a.is_zero() && !b.is_zero(), "gcrd of zero operator");
    let (mut x, mut y) = (rat_op(a), rat_op(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = right_rem(&x, &y);
        x = y;
        y = r;
    }
    from_rational_coeffs(&x).canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::UniPoly;
    use proptest::prelude::*;

    fn op(c: &[&[i64]]) -> OreOp {
        OreOp::from_int_coeffs(c)
    }

    fn a6256() -> OreOp {
        // -81(3n+2)(3n+4) + (216n^2+594n+420) N - 8(2n+3)(n+2) N^2
        let c0 = QPoly::from_ints(&[2, 3]) * QPoly::from_ints(&[4, 3]) * QPoly::from_ints(&[-81]);
        let c1 = QPoly::from_ints(&[420, 594, 216]);
        let c2 = QPoly::from_ints(&[3, 2]) * QPoly::from_ints(&[2, 1]) * QPoly::from_ints(&[-8]);
        OreOp::new(vec![c0, c1, c2])
    }

    fn four_sum_rhs() -> HyperTermN {
        let num = QPoly::from_ints(&[2, 3]) * QPoly::from_ints(&[4, 3]) * QPoly::from_ints(&[3]);
        let den = QPoly::from_ints(&[3, 2]) * QPoly::from_ints(&[2, 1]) * QPoly::from_ints(&[2]);
        HyperTermN::new(0, rat(-3), Qn::new(num, den))
    }

    #[test]
    fn commutation_rule() {
        let n = OreOp::scalar(QPoly::var());
        assert_eq!(OreOp::shift().mul(&n), op(&[&[], &[1, 1]]));
        let m = OreOp::scalar(QPoly::from_ints(&[1, 3]));
        assert_eq!(OreOp::shift().mul(&m), op(&[&[], &[4, 3]]));
        let p = op(&[&[-1], &[1]]).mul(&op(&[&[1], &[1]]));
        assert_eq!(p, op(&[&[-1], &[], &[1]]));
    }

    #[test]
    fn homogenize_examples() {
        let h = homogenize(&op(&[&[-1], &[1]]), &HyperTermN::constant(rat(1))).unwrap();
        assert_eq!(h, op(&[&[1], &[-2], &[1]]));
        let pow2 = HyperTermN::new(0, rat(1), Qn::constant(rat(2)));
        let h = homogenize(&op(&[&[-2], &[1]]), &pow2).unwrap();
        assert_eq!(h, op(&[&[4], &[-4], &[1]]));
        let h = homogenize(&op(&[&[-27], &[4]]), &four_sum_rhs()).unwrap();
        assert!(equal_up_to_unit(&h, &a6256()));
        assert_eq!(h, a6256().canonical());
        assert_eq!(
            homogenize(&op(&[&[1]]), &HyperTermN::constant(rat(0))),
            Err(OreError::ZeroRhs)
        );
    }

    #[test]
    fn unit_equivalence() {
        let a = op(&[&[-27], &[4]]);
        let b = a.scale(&QPoly::from_ints(&[1, 1]));
        assert!(equal_up_to_unit(&a, &b));
        assert!(!equal_up_to_unit(&a, &op(&[&[-2], &[1]])));
        assert_eq!(b.canonical_text(), "(4)*N^1 + (-27)*N^0");
        assert_eq!(
            a6256().canonical_text(),
            "(16*n^2+56*n+48)*N^2 + (-216*n^2-594*n-420)*N^1 + (729*n^2+1458*n+648)*N^0"
        );
    }

    #[test]
    fn gcrd_examples() {
        let a = a6256();
        assert_eq!(gcrd(&a, &a), a.canonical());
        let l = op(&[&[-27], &[4]]);
        let h = homogenize(&l, &four_sum_rhs()).unwrap();
        assert!(equal_up_to_unit(&gcrd(&h, &l), &l));
        assert_eq!(gcrd(&op(&[&[-1], &[1]]), &op(&[&[-2], &[1]])), op(&[&[1]]));
    }

    #[test]
    fn apply_examples() {
        let five = |_: i64| Some(rat(5));
        assert_eq!(op(&[&[-1], &[1]]).apply(&five, 7).unwrap(), rat(0));
        let sums = |n: i64| [rat(1), rat(6), rat(39)].get(n as usize).cloned();
        assert_eq!(op(&[&[-27], &[4]]).apply(&sums, 0).unwrap(), rat(-3));
        assert_eq!(a6256().apply(&sums, 0).unwrap(), rat(0));
        assert_eq!(a6256().apply(&sums, 1), Err(OreError::MissingValues(3)));
    }

    fn arb_op() -> impl Strategy<Value = OreOp> {
        prop::collection::vec(prop::collection::vec(-5i64..=5, 0..=3), 1..=3)
            .prop_map(|c| OreOp::new(c.iter().map(|v| UniPoly::from_ints(v)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn composition_is_associative(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn action_is_compatible(a in arb_op(), b in arb_op(), seq in prop::collection::vec(-50i64..50, 12), n in 0i64..4) {
            let s = |i: i64| seq.get(i as usize).map(|&v| rat(v));
            let bs = |i: i64| b.apply(&s, i).ok();
            prop_assert_eq!(a.mul(&b).apply(&s, n).unwrap(), a.apply(&bs, n).unwrap());
        }
    }
}
