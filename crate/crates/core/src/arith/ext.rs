//! The coefficient field: rational functions in the parameters, extended by
//! the algebraic constant `A`.
//!
//! `A = 2α + β + √((2α+β)² − 40γω)` is a root of
//! `A² − 2(2α+β)·A + 40γω = 0`, so every element is kept as
//! `num / den` with `num` of `A`-degree at most one and `den` free of `A`.
//! Under that representation an element is zero exactly when its numerator
//! is the zero polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly};
use super::rational::Rational;
use super::scalar::Scalar;
use super::symbol::Symbol;
use crate::error::ArithError;

/// Partial assignment of symbols to field elements.
pub type Bindings = BTreeMap<Symbol, ExtScalar>;

/// `A + A'`, the trace `2(2α + β)`.
pub fn trace_poly() -> MultiPoly {
    &MultiPoly::var(Symbol::Alpha).scale(&Rational::from_integer(4.into()))
        + &MultiPoly::var(Symbol::Beta).scale(&Rational::from_integer(2.into()))
}

/// `A · A'`, the norm `40γω`.
pub fn norm_poly() -> MultiPoly {
    MultiPoly::term(
        Rational::from_integer(40.into()),
        Monomial::one()
            .with(Symbol::Gamma, 1)
            .with(Symbol::Omega, 1),
    )
}

/// Rewrites `A² → 2(2α+β)A − 40γω` until the `A`-degree is at most one.
#[allow(non_snake_case)]
pub fn reduce_A(p: &MultiPoly) -> MultiPoly {
    let rule = &(&trace_poly() * &MultiPoly::var(Symbol::A)) - &norm_poly();
    let mut cur = p.clone();
    // Each pass lowers the A-degree by one.
    while cur.degree_in(Symbol::A) >= 2 {
        let mut next = MultiPoly::zero();
        let mut low = Vec::new();
        for (m, c) in cur.terms() {
            let e = m.exponent(Symbol::A);
            if e >= 2 {
                let base = MultiPoly::term(c.clone(), m.with(Symbol::A, e - 2));
                next = &next + &(&base * &rule);
            } else {
                low.push((*m, c.clone()));
            }
        }
        cur = &MultiPoly::from_terms(low) + &next;
    }
    cur
}

/// Splits an `A`-reduced polynomial into `(p0, p1)` with `p = p0 + p1·A`.
fn split_a(p: &MultiPoly) -> (MultiPoly, MultiPoly) {
    debug_assert!(p.degree_in(Symbol::A) <= 1);
    (
        p.coefficient_of(Symbol::A, 0),
        p.coefficient_of(Symbol::A, 1),
    )
}

/// Replaces `A` by its conjugate `A' = 2(2α+β) − A` in a reduced polynomial.
fn conjugate_poly(p: &MultiPoly) -> MultiPoly {
    let (p0, p1) = split_a(p);
    &(&p0 + &(&p1 * &trace_poly())) - &(&p1 * &MultiPoly::var(Symbol::A))
}

#[derive(Clone)]
pub struct ExtScalar {
    num: MultiPoly,
    den: MultiPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic dispatched on `op`; only division can fail.
pub fn ext_arith(lhs: &ExtScalar, rhs: &ExtScalar, op: ArithOp) -> Result<ExtScalar, ArithError> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.checked_div(rhs)?,
    })
}

impl ExtScalar {
    /// `num / den`; any `A` in the denominator is rationalized away.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ArithError> {
        let mut num = reduce_A(&num);
        let mut den = reduce_A(&den);
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if den.contains(Symbol::A) {
            let conj = conjugate_poly(&den);
            num = reduce_A(&(&num * &conj));
            den = reduce_A(&(&den * &conj));
            debug_assert!(!den.contains(Symbol::A));
            if den.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
        }
        Ok(Self::normalized(num, den))
    }

    /// Both parts already satisfy the representation invariants.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return ExtScalar {
                num,
                den: MultiPoly::one(),
            };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g).unwrap(), den.div_monomial(&g).unwrap())
        };
        let mut c = den.content();
        if den.leading_sign_negative() {
            c = -c;
        }
        if !c.is_one() {
            let inv = c.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ExtScalar { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::normalized(reduce_A(&p), MultiPoly::one())
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::from_poly(MultiPoly::var(s))
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(MultiPoly::int(n))
    }

    pub fn rational(r: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(r))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_div(&self, rhs: &ExtScalar) -> Result<ExtScalar, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        ExtScalar::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn inv(&self) -> Result<ExtScalar, ArithError> {
        ExtScalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> ExtScalar {
        (0..e).fold(ExtScalar::one(), |acc, _| &acc * self)
    }

    /// The image under `A ↦ 2(2α+β) − A`.
    pub fn conjugate(&self) -> ExtScalar {
        Self::normalized(conjugate_poly(&self.num), self.den.clone())
    }

    /// Homomorphic substitution of bound symbols.
    pub fn substitute(&self, bindings: &Bindings) -> ExtScalar {
        let n = substitute(&self.num, bindings);
        let d = substitute(&self.den, bindings);
        n.checked_div(&d)
            .expect("substitution annihilated a denominator")
    }

    /// Replaces parameters by rational values. The numerator stays `A`-linear,
    /// so no further reduction is needed; `A`'s minimal polynomial is
    /// specialized implicitly.
    pub fn specialize(&self, values: &[(Symbol, Rational)]) -> Result<ExtScalar, ArithError> {
        let lookup = |s: Symbol| values.iter().find(|(t, _)| *t == s).map(|(_, v)| v.clone());
        debug_assert!(values.iter().all(|(s, _)| *s != Symbol::A));
        let num = self.num.substitute_rational(lookup);
        let den = self.den.substitute_rational(lookup);
        if den.is_zero() {
            return Err(ArithError::DegenerateSpecialization);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// The polynomial `num / den` when the denominator is constant.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let d = self.den.as_constant()?;
        Some(self.num.scale(&d.recip()))
    }

    /// `c` with `self = c · other`, if such a rational exists.
    pub fn ratio_to(&self, other: &ExtScalar) -> Option<Rational> {
        if other.is_zero() {
            return None;
        }
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        let (_, lc) = lhs
            .leading()
            .map(|(m, c)| (*m, c.clone()))
            .unwrap_or((Monomial::one(), Rational::zero()));
        let (_, rc) = rhs.leading()?;
        let c = lc / rc;
        (&lhs - &rhs.scale(&c)).is_zero().then_some(c)
    }

    pub fn eval<T: Scalar>(&self, value: impl Fn(Symbol) -> Option<T>) -> Result<T, ArithError> {
        let n = self.num.eval(&value)?;
        let d = self.den.eval(&value)?;
        n.checked_div(&d).ok_or(ArithError::DivisionByZero)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }
}

/// Homomorphic evaluation of `p` under a partial binding, followed by
/// `A`-reduction. Unbound symbols stay symbolic.
pub fn substitute(p: &MultiPoly, bindings: &Bindings) -> ExtScalar {
    struct Bound {
        sym: Symbol,
        deg: u16,
        num_pows: Vec<MultiPoly>,
        den_pows: Vec<MultiPoly>,
    }
    let mut bound = Vec::new();
    for (s, v) in bindings {
        let deg = p.degree_in(*s);
        if deg == 0 {
            continue;
        }
        let mut num_pows = vec![MultiPoly::one()];
        let mut den_pows = vec![MultiPoly::one()];
        for i in 1..=deg as usize {
            num_pows.push(reduce_A(&(&num_pows[i - 1] * &v.num)));
            den_pows.push(&den_pows[i - 1] * &v.den);
        }
        bound.push(Bound {
            sym: *s,
            deg,
            num_pows,
            den_pows,
        });
    }
    if bound.is_empty() {
        return ExtScalar::from_poly(p.clone());
    }
    let mut num = MultiPoly::zero();
    for (m, c) in p.terms() {
        let mut rest = *m;
        for b in &bound {
            rest = rest.with(b.sym, 0);
        }
        let mut t = MultiPoly::term(c.clone(), rest);
        for b in &bound {
            let e = m.exponent(b.sym) as usize;
            if e > 0 {
                t = &t * &b.num_pows[e];
            }
            let rem = b.deg as usize - e;
            if rem > 0 {
                t = &t * &b.den_pows[rem];
            }
            if t.degree_in(Symbol::A) >= 2 {
                t = reduce_A(&t);
            }
        }
        num = &num + &t;
    }
    let den = bound.iter().fold(MultiPoly::one(), |acc, b| {
        &acc * &b.den_pows[b.deg as usize]
    });
    ExtScalar::new(num, den).expect("bound values have nonzero denominators")
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for ExtScalar {}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &MultiPoly| {
            if p.nterms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtScalar({self})")
    }
}

impl<'a> Add<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: &ExtScalar) -> ExtScalar {
        if self.den == rhs.den {
            return ExtScalar::normalized(&self.num + &rhs.num, self.den.clone());
        }
        ExtScalar::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: &ExtScalar) -> ExtScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: &ExtScalar) -> ExtScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExtScalar::zero();
        }
        ExtScalar::normalized(reduce_A(&(&self.num * &rhs.num)), &self.den * &rhs.den)
    }
}

impl Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<ExtScalar> for ExtScalar {
            type Output = ExtScalar;
            fn $f(self, rhs: ExtScalar) -> ExtScalar {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Zero for ExtScalar {
    fn zero() -> Self {
        ExtScalar {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ExtScalar {
    fn one() -> Self {
        ExtScalar {
            num: MultiPoly::one(),
            den: MultiPoly::one(),
        }
    }
}

impl Scalar for ExtScalar {
    fn from_rational(r: &Rational) -> Self {
        ExtScalar::rational(r.clone())
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        ExtScalar::checked_div(self, rhs).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};
    use Symbol::*;

    fn s(sym: Symbol) -> ExtScalar {
        ExtScalar::symbol(sym)
    }

    fn n(v: i64) -> ExtScalar {
        ExtScalar::int(v)
    }

    fn p(sym: Symbol) -> MultiPoly {
        MultiPoly::var(sym)
    }

    fn sk_values() -> Vec<(Symbol, Rational)> {
        vec![
            (Alpha, rat(5)),
            (Beta, rat(5)),
            (Gamma, rat(5)),
            (Omega, rat(1)),
        ]
    }

    #[test]
    fn a_squared_reduces_by_minimal_polynomial() {
        let expected = &(&trace_poly() * &p(A)) - &norm_poly();
        assert_eq!(reduce_A(&p(A).pow(2)), expected);
    }

    #[test]
    fn a_free_input_is_unchanged() {
        let q = &(&p(Alpha) * &p(Beta)) + &MultiPoly::int(3).mul_monomial(&Monomial::var(K));
        assert_eq!(reduce_A(&q), q);
    }

    #[test]
    fn a_cubed_matches_double_application() {
        // (4(2α+β)² − 40γω)A − 80γω(2α+β)
        let two_a_b = &p(Alpha).scale(&rat(2)) + &p(Beta);
        let gw = &p(Gamma) * &p(Omega);
        let expected = &(&(&two_a_b.pow(2).scale(&rat(4)) - &gw.scale(&rat(40))) * &p(A))
            - &(&gw * &two_a_b).scale(&rat(80));
        let cube = reduce_A(&p(A).pow(3));
        assert_eq!(cube, expected);
        // SK: A = 20 satisfies the specialized identity, both sides exact.
        let at_sk = |q: &MultiPoly| -> Rational {
            q.eval(|sym| match sym {
                Alpha | Beta | Gamma => Some(rat(5)),
                Omega => Some(rat(1)),
                A => Some(rat(20)),
                _ => None,
            })
            .unwrap()
        };
        assert_eq!(at_sk(&cube), rat(8000));
    }

    #[test]
    fn inverse_of_a_is_conjugate_over_norm() {
        let inv = s(A).inv().unwrap();
        let expected = ExtScalar::new(&trace_poly() - &p(A), norm_poly()).unwrap();
        assert_eq!(inv, expected);
        assert!(!inv.den().contains(A));
        assert_eq!(&inv * &s(A), ExtScalar::one());
    }

    #[test]
    fn additive_identity() {
        let x = ExtScalar::new(&p(A) + &p(K), p(Gamma)).unwrap();
        assert_eq!(&x + &ExtScalar::zero(), x);
    }

    #[test]
    fn product_of_the_two_a2_family_values() {
        let g = s(Gamma);
        let first = (&n(-3) * &s(A)).checked_div(&g).unwrap();
        let second = (&n(-120) * &s(Omega)).checked_div(&s(A)).unwrap();
        let prod = &first * &second;
        let expected = (&n(360) * &s(Omega)).checked_div(&g).unwrap();
        assert_eq!(prod, expected);
        assert_eq!(prod.to_string(), "360*omega/gamma");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            s(A).checked_div(&ExtScalar::zero()),
            Err(ArithError::DivisionByZero)
        );
        assert_eq!(
            ext_arith(&n(1), &(&s(K) - &s(K)), ArithOp::Div),
            Err(ArithError::DivisionByZero)
        );
        assert_eq!(ext_arith(&n(1), &n(2), ArithOp::Add).unwrap(), n(3));
    }

    #[test]
    fn substitution_cancels() {
        let bind = |sym, v: ExtScalar| Bindings::from([(sym, v)]);
        let q = &p(A2) + &MultiPoly::int(3);
        assert!(substitute(&q, &bind(A2, n(-3))).is_zero());

        let a2 = (&n(-3) * &s(A)).checked_div(&s(Gamma)).unwrap();
        let q = &(&p(Gamma) * &p(A2)) + &p(A).scale(&rat(3));
        assert!(substitute(&q, &bind(A2, a2)).is_zero());

        // 2γa₂³ + 24αa₂² + 12βa₂² + 720ωa₂ at a₂ = −120ω/A
        let a2 = (&n(-120) * &s(Omega)).checked_div(&s(A)).unwrap();
        let top = &(&(&p(Gamma) * &p(A2).pow(3)).scale(&rat(2))
            + &(&p(Alpha) * &p(A2).pow(2)).scale(&rat(24)))
            + &(&(&p(Beta) * &p(A2).pow(2)).scale(&rat(12))
                + &(&p(Omega) * &p(A2)).scale(&rat(720)));
        assert!(substitute(&top, &bind(A2, a2)).is_zero());
    }

    #[test]
    fn conjugation_is_an_involution_and_swaps_roots() {
        let x = ExtScalar::new(&p(A) + &p(K), p(Gamma)).unwrap();
        assert_eq!(x.conjugate().conjugate(), x);
        assert_eq!(
            &s(A) + &s(A).conjugate(),
            ExtScalar::from_poly(trace_poly())
        );
        assert_eq!(&s(A) * &s(A).conjugate(), ExtScalar::from_poly(norm_poly()));
    }

    #[test]
    fn specialization_evaluates_parameters() {
        // B = (12γω − Aβ)/(8γ) at SK with A = 20 is −1.
        let b = (&(&n(12) * &(&s(Gamma) * &s(Omega))) - &(&s(A) * &s(Beta)))
            .checked_div(&(&n(8) * &s(Gamma)))
            .unwrap();
        let sk = b.specialize(&sk_values()).unwrap();
        assert!(!sk.contains(Alpha));
        let val: Rational = sk.eval(|sym| (sym == A).then(|| rat(20))).unwrap();
        assert_eq!(val, rat(-1));
        let bad = s(K).inv().unwrap().specialize(&[(K, rat(0))]);
        assert_eq!(bad, Err(ArithError::DegenerateSpecialization));
    }

    #[test]
    fn ratio_detection() {
        let x = (&n(16) * &s(K)).checked_div(&s(A)).unwrap();
        let y = s(K).checked_div(&s(A)).unwrap();
        assert_eq!(x.ratio_to(&y), Some(rat(16)));
        assert_eq!(x.ratio_to(&s(K)), None);
        assert_eq!(n(3).as_rational(), Some(rat(3)));
        assert_eq!(
            ExtScalar::rational(ratio(1, 4)).as_rational(),
            Some(ratio(1, 4))
        );
    }
}
