use std::fmt;

use num_traits::{One, Zero};

use crate::exact::Ring;
use crate::{QPoly, Qn, Rational};

type QxFunc = crate::RatFunc<Rational>;

/// `F(n, x) = c(x) * f(x)^n` with `c` rational and `f` polynomial in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperexpTerm {
    pub prefactor: QxFunc,
    pub base: QPoly,
}

impl HyperexpTerm {
    pub fn new(prefactor: QxFunc, base: QPoly) -> Self {
        assert!(!base.is_zero(), "zero base");
        assert!(!prefactor.is_zero(), "zero prefactor");
        HyperexpTerm { prefactor, base }
    }

    pub fn power(base: QPoly) -> Self {
        Self::new(QxFunc::one(), base)
    }

    /// `F(n+1, x) / F(n, x)`.
    pub fn n_quotient(&self) -> QPoly {
        self.base.clone()
    }

    /// `D_x F / F = c'/c + n f'/f`, returned as the pair `(c'/c, f'/f)`.
    pub fn log_derivative(&self) -> (QxFunc, QxFunc) {
        let c = &self.prefactor;
        let f = QxFunc::from_poly(self.base.clone());
        (c.derivative() / c.clone(), f.derivative() / f)
    }

    /// `D_x F / F` as a rational function in `x` over `Q(n)`.
    pub fn log_derivative_qn(&self) -> crate::Qnk {
        let (lc, lf) = self.log_derivative();
        let lift = |r: &QxFunc| {
            let up = |c: &Rational| Qn::constant(c.clone());
            crate::Qnk::new(r.num().map(up), r.den().map(up))
        };
        lift(&lc) + lift(&lf) * crate::Qnk::constant(Qn::var())
    }

    /// Exact value at integer `n >= 0` and rational `x`; `None` at a pole of `c`.
    pub fn eval(&self, n: u32, x: &Rational) -> Option<Rational> {
        let c = self.prefactor.eval(x)?;
        Some(c * Ring::pow(&self.base.eval(x), n))
    }
}

impl fmt::Display for HyperexpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.base.display("x");
        if self.prefactor.is_one() {
            write!(f, "({base})^n")
        } else {
            write!(f, "({})*({base})^n", self.prefactor.display("x"))
        }
    }
}
