//! Laurent polynomials in the Riccati variable `φ`, closed under
//! differentiation by `φ' = k + φ²`, and the traveling-wave ODE residual
//! `γ v² v' + α v v''' + λ v' + β v' v'' + ω v⁽⁵⁾`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{ExtScalar, Scalar, Symbol};
use crate::error::{Error, Result};
use crate::params::FkdvParams;

/// Finite Laurent polynomial `Σ cₙ φⁿ` (negative `n` allowed). Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<T> {
    terms: BTreeMap<i32, T>,
}

/// The symbolic universe of the derivation.
pub type PhiPoly = LaurentPoly<ExtScalar>;

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, power: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(power, c);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i32, T)>) -> Self {
        let mut p = Self::zero();
        for (n, c) in it {
            p.add_term(n, c);
        }
        p
    }

    fn add_term(&mut self, power: i32, c: T) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&power) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(power, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(power, coefficient)` in ascending power.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &T)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn coeff(&self, power: i32) -> Option<&T> {
        self.terms.get(&power)
    }

    pub fn min_power(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.add_term(*n, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (na, ca) in &self.terms {
            for (nb, cb) in &rhs.terms {
                out.add_term(na + nb, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(n, v)| (*n, v.clone() * c.clone())))
    }

    /// Applies `f` to every coefficient.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LaurentPoly<U> {
        LaurentPoly::from_terms(self.terms.iter().map(|(n, c)| (*n, f(c))))
    }
}

impl LaurentPoly<f64> {
    /// Evaluates at a nonzero `φ` (zero is allowed when there are no negative
    /// powers).
    pub fn eval(&self, phi: f64) -> f64 {
        self.terms.iter().map(|(n, c)| c * phi.powi(*n)).sum()
    }
}

/// `d/dξ` under `φ' = k + φ²`: `d(φⁿ) = n k φⁿ⁻¹ + n φⁿ⁺¹`.
pub fn riccati_derive<T: Scalar>(p: &LaurentPoly<T>, k: &T) -> LaurentPoly<T> {
    let mut out = LaurentPoly::zero();
    for (n, c) in p.terms() {
        if n == 0 {
            continue;
        }
        let nc = T::from_i64(n.into()) * c.clone();
        out.add_term(n - 1, nc.clone() * k.clone());
        out.add_term(n + 1, nc);
    }
    out
}

/// `[v, v', v'', v''', v⁗, v⁽⁵⁾]` by iterating [`riccati_derive`].
pub fn derivatives<T: Scalar>(v: &LaurentPoly<T>, k: &T) -> [LaurentPoly<T>; 6] {
    let mut out: [LaurentPoly<T>; 6] = Default::default();
    out[0] = v.clone();
    for i in 1..6 {
        out[i] = riccati_derive(&out[i - 1], k);
    }
    out
}

impl<T> Default for LaurentPoly<T> {
    fn default() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }
}

/// `a₀ + Σᵢ (aᵢ φⁱ + bᵢ φ⁻ⁱ)` with symbolic coefficients for `general`,
/// otherwise the restricted `a₀ + a₂ φ² + b₂ φ⁻²`.
pub fn build_ansatz(m: u32, general: bool) -> Result<PhiPoly> {
    if !(1..=2).contains(&m) {
        return Err(Error::UnsupportedOrder(m));
    }
    let sym = ExtScalar::symbol;
    if !general {
        // a₁ = b₁ = 0 stratum
        let mut terms = vec![(0, sym(Symbol::A0))];
        if m == 2 {
            terms.extend([(2, sym(Symbol::A2)), (-2, sym(Symbol::B2))]);
        }
        return Ok(PhiPoly::from_terms(terms));
    }
    let pos = [Symbol::A1, Symbol::A2];
    let neg = [Symbol::B1, Symbol::B2];
    let mut terms = vec![(0, sym(Symbol::A0))];
    for i in 1..=m as usize {
        terms.push((i as i32, sym(pos[i - 1])));
        terms.push((-(i as i32), sym(neg[i - 1])));
    }
    Ok(PhiPoly::from_terms(terms))
}

/// The five terms of the reduced ODE, kept apart so callers can measure
/// their magnitudes.
pub struct OdeTerms<T> {
    /// `λ v'`
    pub wave: LaurentPoly<T>,
    /// `ω v⁽⁵⁾`
    pub dispersive: LaurentPoly<T>,
    /// `α v v'''`
    pub alpha_term: LaurentPoly<T>,
    /// `β v' v''`
    pub beta_term: LaurentPoly<T>,
    /// `γ v² v'`
    pub gamma_term: LaurentPoly<T>,
}

impl<T: Scalar> OdeTerms<T> {
    pub fn new(v: &LaurentPoly<T>, coeffs: [&T; 4], k: &T, lambda: &T) -> Self {
        let [alpha, beta, gamma, omega] = coeffs;
        let d = derivatives(v, k);
        OdeTerms {
            wave: d[1].scale(lambda),
            dispersive: d[5].scale(omega),
            alpha_term: v.mul(&d[3]).scale(alpha),
            beta_term: d[1].mul(&d[2]).scale(beta),
            gamma_term: v.mul(v).mul(&d[1]).scale(gamma),
        }
    }

    pub fn all(&self) -> [&LaurentPoly<T>; 5] {
        [
            &self.wave,
            &self.dispersive,
            &self.alpha_term,
            &self.beta_term,
            &self.gamma_term,
        ]
    }

    pub fn sum(&self) -> LaurentPoly<T> {
        self.all()
            .iter()
            .fold(LaurentPoly::zero(), |acc, t| acc.add(t))
    }
}

/// Residual of the traveling-wave ODE with `k` and `λ` left symbolic.
pub fn ode_residual(v: &PhiPoly, params: &FkdvParams) -> PhiPoly {
    let k = ExtScalar::symbol(Symbol::K);
    let lambda = ExtScalar::symbol(Symbol::Lambda);
    OdeTerms::new(
        v,
        [&params.alpha, &params.beta, &params.gamma, &params.omega],
        &k,
        &lambda,
    )
    .sum()
}

impl<T: fmt::Display> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*phi")?,
                _ => write!(f, "({c})*phi^{n}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
