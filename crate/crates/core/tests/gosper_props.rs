use num_traits::{One, Zero};
use proptest::prelude::*;
use telescope_core::gosper::{gosper, verify_certificate};
use telescope_core::{QPoly, RatFunc, Rational, Ring};

type Qk = RatFunc<Rational>;

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// `T(k) = b^k ((k+s)!)^e p(k)`.
#[derive(Debug, Clone)]
struct Term {
    b: Rational,
    s: i64,
    e: i32,
    p: Vec<i64>,
}

impl Term {
    fn value(&self, k: i64) -> Rational {
        let fact: Rational = (1..=k + self.s).fold(Rational::one(), |acc, i| acc * r(i));
        let f = match self.e {
            1 => fact,
            -1 => fact.recip(),
            _ => Rational::one(),
        };
        let pk = QPoly::from_ints(&self.p).eval(&r(k));
        Ring::pow(&self.b, k as u32) * f * pk
    }

    fn ratio(&self) -> Qk {
        let p = QPoly::from_ints(&self.p);
        let lin = QPoly::from_ints(&[self.s + 1, 1]);
        let (fnum, fden) = match self.e {
            1 => (lin, QPoly::one()),
            -1 => (QPoly::one(), lin),
            _ => (QPoly::one(), QPoly::one()),
        };
        Qk::new(fnum * p.shift(&r(1)).scale(&self.b), fden * p)
    }
}

fn term() -> impl Strategy<Value = Term> {
    (
        prop::sample::select(vec![(1, 1), (2, 1), (3, 1), (-2, 1), (1, 2), (-1, 3)]),
        0i64..=3,
        -1i32..=1,
        prop::collection::vec(1i64..=4, 1..=3),
    )
        .prop_map(|((bn, bd), s, e, p)| Term {
            b: Rational::new(bn.into(), bd.into()),
            s,
            e,
            p,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn differences_of_terms_are_summable(t in term()) {
        let rt = t.ratio();
        prop_assume!(!rt.is_one());
        let one = Qk::one();
        let rt1 = rt.shift(&r(1));
        let ratio = (rt1 - one.clone()) * rt.clone() / (rt - one);
        let y = gosper(&ratio).expect("difference of a hypergeometric term is summable").y;
        prop_assert!(verify_certificate(&ratio, &y));
        let diff = |k: i64| t.value(k + 1) - t.value(k);
        let Some(y0) = y.eval(&r(0)) else { return Ok(()) };
        let base = y0 * diff(0);
        let mut partial = Rational::zero();
        for k in 0..=25 {
            if let Some(yk) = y.eval(&r(k)) {
                prop_assert_eq!(yk * diff(k) - base.clone(), partial.clone(), "k = {}", k);
            }
            partial += diff(k);
        }
    }
}
