use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Field, UniPoly};

const SPECIALIZATION_ATTEMPTS: usize = 64;

/// Integers `j` with `p(j) = 0` identically in the parameters of `F`, ascending.
///
/// Candidates come from a specialization of the parameters at a pseudo-random
/// integer point that keeps the degree; each is then confirmed by exact
/// substitution into `p` itself.
pub fn integer_roots<F: Field>(p: &UniPoly<F>) -> Vec<BigInt> {
    assert!(!p.is_zero(), "integer roots of the zero polynomial");
    if p.is_constant() {
        return Vec::new();
    }
    // fixed seed: results must not depend on the run
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e_ed0f_7e1e);
    let mut tries = 0;
    let specialized = loop {
        let at = BigInt::from(rng.gen_range(3i64..=103));
        if let Some(s) = p.specialize_coeffs(&at) {
            if s.deg() == p.deg() {
                break Some(s);
            }
        }
        tries += 1;
        if tries >= SPECIALIZATION_ATTEMPTS {
            break None;
        }
    };
    let candidates = match specialized {
        Some(s) => integer_roots_rational(&s),
        None => {
            // every sampled point was degenerate; fall back to two points and intersect
            return integer_roots_by_sweep(p);
        }
    };
    candidates
        .into_iter()
        .filter(|r| p.eval(&F::from_bigint(r)).is_zero())
        .collect()
}

fn integer_roots_by_sweep<F: Field>(p: &UniPoly<F>) -> Vec<BigInt> {
    // all coefficients vanish at a common point only for degenerate inputs;
    // a linear scan over more points finds one that keeps at least one coefficient
    for at in 104i64..10_000 {
        let at = BigInt::from(at);
        if let Some(s) = p.specialize_coeffs(&at) {
            if !s.is_zero() && s.deg() >= 1 {
                return integer_roots_rational(&s)
                    .into_iter()
                    .filter(|r| p.eval(&F::from_bigint(r)).is_zero())
                    .collect();
            }
        }
    }
    Vec::new()
}

/// Integer roots of a polynomial over `Q`, ascending.
pub fn integer_roots_rational(p: &UniPoly<BigRational>) -> Vec<BigInt> {
    if p.is_zero() || p.is_constant() {
        return Vec::new();
    }
    let ints = clear_denominators(p);
    let zero_mult = ints.iter().take_while(|c| c.is_zero()).count();
    let ints = &ints[zero_mult..];
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(BigInt::zero());
    }
    if ints.len() > 1 {
        let a0 = ints[0].abs();
        let bound = fujiwara_bound(ints).min(a0.clone());
        let mut d = BigInt::one();
        while d <= bound {
            if a0.is_multiple_of(&d) {
                for cand in [-d.clone(), d.clone()] {
                    if horner(ints, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
            d += 1;
        }
    }
    roots.sort();
    roots
}

fn clear_denominators(p: &UniPoly<BigRational>) -> Vec<BigInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

fn horner(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

/// `2 * max_i ceil(|a_{d-i} / a_d|^(1/i))`, an upper bound on root moduli.
fn fujiwara_bound(c: &[BigInt]) -> BigInt {
    let d = c.len() - 1;
    let lead = c[d].abs();
    let mut best = BigInt::one();
    for i in 1..=d {
        let a = c[d - i].abs();
        if a.is_zero() {
            continue;
        }
        let ratio = (&a + &lead - 1u32) / &lead;
        let root = ratio.nth_root(i as u32) + 1u32;
        if root > best {
            best = root;
        }
    }
    best * 2u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatFunc;

    type Qn = RatFunc<BigRational>;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn qn_poly(c: Vec<Qn>) -> UniPoly<Qn> {
        UniPoly::new(c)
    }

    #[test]
    fn rational_roots() {
        let p = UniPoly::<BigRational>::from_ints(&[-1, 1]);
        assert_eq!(integer_roots_rational(&p), ints(&[1]));
        let p = UniPoly::<BigRational>::from_ints(&[-2, 1]) * UniPoly::from_ints(&[3, 1]);
        assert_eq!(integer_roots_rational(&p), ints(&[-3, 2]));
        // 2x^2 - x = x(2x - 1): only 0 is integral
        let p = UniPoly::<BigRational>::from_ints(&[0, -1, 2]);
        assert_eq!(integer_roots_rational(&p), ints(&[0]));
        let p = UniPoly::<BigRational>::from_ints(&[-1000, 0, 0, 1]);
        assert_eq!(integer_roots_rational(&p), ints(&[10]));
    }

    #[test]
    fn parametric_roots() {
        let n = Qn::var();
        let one = Qn::one();
        // j - 1
        let p = qn_poly(vec![-one.clone(), one.clone()]);
        assert_eq!(integer_roots(&p), ints(&[1]));
        // (j - 2)(j + 3)
        let p = qn_poly(vec![Qn::from_i64(-6), one.clone(), one.clone()]);
        assert_eq!(integer_roots(&p), ints(&[-3, 2]));
        // j^2 - n: no root identically in n
        let p = qn_poly(vec![-n.clone(), Qn::zero(), one.clone()]);
        assert!(integer_roots(&p).is_empty());
        // (j - n)(j - 4): only 4 is a root for every n
        let p = qn_poly(vec![-n.clone(), one.clone()]) * qn_poly(vec![Qn::from_i64(-4), one]);
        assert_eq!(integer_roots(&p), ints(&[4]));
    }
}
