//! Certified vanishing regions of proper terms.
//!
//! A numerator binomial `C(top, bot)` is zero when `bot < 0`, or when
//! `0 <= top < bot`. Both conditions are affine in `n` at the endpoints of a
//! `k`-interval bounded by integer lines, so they reduce to finitely many
//! sign conditions on affine functions of `n`.

use super::{LinForm, ProperTerm};

/// Summation range `lower <= k <= beta*n + gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumRange {
    pub lower: i64,
    pub upper: (i64, i64),
}

impl SumRange {
    pub fn new(lower: i64, beta: i64, gamma: i64) -> Self {
        assert!(beta >= 0, "upper line slope must be nonnegative");
        SumRange {
            lower,
            upper: (beta, gamma),
        }
    }

    pub fn upper_at(&self, n: i64) -> i64 {
        self.upper.0 * n + self.upper.1
    }

    /// Smallest `n >= 0` with a nonempty range from there on.
    pub fn start(&self) -> i64 {
        let (b, g) = self.upper;
        (0..).find(|&n| b * n + g >= self.lower && (b > 0 || g >= self.lower)).unwrap_or(0)
    }
}

/// Lower end of a `k`-window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lower {
    NegInf,
    /// inclusive line `k = beta*n + gamma`
    Line(i64, i64),
}

/// `k`-window `lower <= k <= upper` for the term shifted by `shift` in `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineWindow {
    pub shift: i64,
    pub lower: Lower,
    pub upper: (i64, i64),
}

impl LineWindow {
    pub fn is_empty_at(&self, n: i64) -> bool {
        match self.lower {
            Lower::NegInf => false,
            Lower::Line(b, g) => b * n + g > self.upper.0 * n + self.upper.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishInfo {
    /// `F(n+i, k) = 0` for all `k < lower`, `0 <= i <= J`, `n >= lower_from`.
    pub lower_natural: bool,
    pub lower_from: i64,
    /// Extension line `K(n)`: `F(n+i, k) = 0` for `b(n+i) < k <= K(n)`,
    /// `0 <= i <= J`, `n >= upper_from`.
    pub upper_line: Option<(i64, i64)>,
    pub upper_from: i64,
}

/// Smallest `n1 >= 0` with `a*n + c < 0` for all `n >= n1`.
fn negative_from(a: i64, c: i64) -> Option<i64> {
    match a.signum() {
        1 => None,
        0 => (c < 0).then_some(0),
        _ => {
            // a n + c < 0  <=>  n > c / (-a)
            let q = c.div_euclid(-a);
            Some((q + 1).max(0))
        }
    }
}

/// Smallest `n1 >= 0` with `a*n + c >= 0` for all `n >= n1`.
fn nonnegative_from(a: i64, c: i64) -> Option<i64> {
    // a n + c >= 0  <=>  -a n - c - 1 < 0
    negative_from(-a, -c - 1)
}

/// Value of `form` at `(n + shift, beta*n + gamma)` as an affine function of `n`.
fn on(form: &LinForm, shift: i64, line: (i64, i64)) -> (i64, i64) {
    let (beta, gamma) = line;
    (form.n + form.k * beta, form.n * shift + form.k * gamma + form.c)
}

#[derive(Clone, Copy)]
enum Sign {
    Negative,
    NonNegative,
}

/// Smallest `n1` such that `form` has the given sign on the whole window for
/// every `n >= n1`; a linear form attains its extremes at the window's ends.
fn sign_on(form: &LinForm, w: &LineWindow, sign: Sign) -> Option<i64> {
    let test = |(a, c): (i64, i64)| match sign {
        Sign::Negative => negative_from(a, c),
        Sign::NonNegative => nonnegative_from(a, c),
    };
    let hi = test(on(form, w.shift, w.upper))?;
    let lo = match w.lower {
        Lower::Line(b, g) => test(on(form, w.shift, (b, g)))?,
        Lower::NegInf => {
            // k -> -infinity must not flip the sign
            let ok = match sign {
                Sign::Negative => form.k >= 0,
                Sign::NonNegative => form.k <= 0,
            };
            if !ok {
                return None;
            }
            0
        }
    };
    Some(hi.max(lo))
}

fn diff(a: &LinForm, b: &LinForm) -> LinForm {
    LinForm {
        n: a.n - b.n,
        k: a.k - b.k,
        c: a.c - b.c,
    }
}

/// Smallest `n1` from which `T(n + shift, k) = 0` is certified on the whole
/// window, or `None` if no single numerator binomial certifies it.
///
/// Certificates also require every other factor to stay defined on the window,
/// so that the vanishing is a genuine zero of the evaluator.
pub fn certify_vanishing(t: &ProperTerm, w: &LineWindow) -> Option<i64> {
    if t.binomials.values().any(|&m| m < 0) {
        return None;
    }
    let mut defined_from = 0;
    for a in t.factorials.keys() {
        defined_from = defined_from.max(sign_on(a, w, Sign::NonNegative)?);
    }
    let best = t
        .binomials
        .keys()
        .filter_map(|(top, bot)| {
            let by_bottom = sign_on(bot, w, Sign::Negative);
            let by_top = sign_on(top, w, Sign::NonNegative)
                .zip(sign_on(&diff(top, bot), w, Sign::Negative))
                .map(|(x, y)| x.max(y));
            match (by_bottom, by_top) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            }
        })
        .min()?;
    let mut from = best.max(defined_from);
    // an empty window is vacuously certified
    while from > 0 && w.is_empty_at(from - 1) {
        from -= 1;
    }
    Some(from)
}

pub fn support_analysis(t: &ProperTerm, max_shift: usize, range: &SumRange) -> VanishInfo {
    let j = max_shift as i64;
    let (beta, gamma) = range.upper;
    let mut lower_from = Some(0);
    for i in 0..=j {
        let w = LineWindow {
            shift: i,
            lower: Lower::NegInf,
            upper: (0, range.lower - 1),
        };
        lower_from = lower_from.zip(certify_vanishing(t, &w)).map(|(a, b)| a.max(b));
    }
    // K(n) = b(n+J): the smallest line covering every shifted range
    let ext = (beta, beta * j + gamma);
    let mut upper_from = Some(0);
    for i in 0..j {
        let w = LineWindow {
            shift: i,
            lower: Lower::Line(beta, beta * i + gamma + 1),
            upper: ext,
        };
        upper_from = upper_from.zip(certify_vanishing(t, &w)).map(|(a, b)| a.max(b));
    }
    VanishInfo {
        lower_natural: lower_from.is_some(),
        lower_from: lower_from.unwrap_or(0),
        upper_line: upper_from.map(|_| ext),
        upper_from: upper_from.unwrap_or(0),
    }
}
