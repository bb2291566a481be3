//! Equation coefficients `(α, β, γ, ω)` of
//! `u_t + ω u_xxxxx + α u u_xxx + β u_x u_xx + γ u² u_x = 0`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::arith::{rat, rational_sqrt, to_f64, ExtScalar, Rational, Symbol};
use crate::error::{Error, ParseError, Result};

/// Named special cases with their published coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// Kaup–Kupershmidt.
    Kk,
    /// Sawada–Kotera.
    Sk,
    /// Caudrey–Dodd–Gibbon.
    Cdg,
    Lax,
    Ito,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Kk,
        Preset::Sk,
        Preset::Cdg,
        Preset::Lax,
        Preset::Ito,
    ];

    /// `(α, β, γ, ω)`.
    pub fn coefficients(self) -> [i64; 4] {
        match self {
            Preset::Kk => [10, 25, 20, 1],
            Preset::Sk => [5, 5, 5, 1],
            Preset::Cdg => [30, 30, 180, 1],
            Preset::Lax => [10, 20, 30, 1],
            Preset::Ito => [3, 6, 2, 1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Kk => "kk",
            Preset::Sk => "sk",
            Preset::Cdg => "cdg",
            Preset::Lax => "lax",
            Preset::Ito => "ito",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ParseError::Preset(s.to_string()))
    }
}

/// Coefficients as field elements: either the free symbols or exact numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct FkdvParams {
    pub alpha: ExtScalar,
    pub beta: ExtScalar,
    pub gamma: ExtScalar,
    pub omega: ExtScalar,
    /// `None` for custom or symbolic coefficients.
    pub preset: Option<Preset>,
}

impl FkdvParams {
    pub fn symbolic() -> Self {
        FkdvParams {
            alpha: ExtScalar::symbol(Symbol::Alpha),
            beta: ExtScalar::symbol(Symbol::Beta),
            gamma: ExtScalar::symbol(Symbol::Gamma),
            omega: ExtScalar::symbol(Symbol::Omega),
            preset: None,
        }
    }

    pub fn preset(p: Preset) -> Self {
        let mut out = RationalParams::preset(p).to_params();
        out.preset = Some(p);
        out
    }

    pub fn new(
        alpha: ExtScalar,
        beta: ExtScalar,
        gamma: ExtScalar,
        omega: ExtScalar,
    ) -> Result<Self> {
        if gamma.is_zero() || omega.is_zero() {
            return Err(Error::InvalidParams(
                "gamma and omega must be nonzero".into(),
            ));
        }
        Ok(FkdvParams {
            alpha,
            beta,
            gamma,
            omega,
            preset: None,
        })
    }

    /// Exact values when all four coefficients are rational constants.
    pub fn rational_values(&self) -> Option<RationalParams> {
        Some(RationalParams {
            alpha: self.alpha.as_rational()?,
            beta: self.beta.as_rational()?,
            gamma: self.gamma.as_rational()?,
            omega: self.omega.as_rational()?,
            preset: self.preset,
        })
    }
}

/// Exact rational coefficients, as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub omega: Rational,
    pub preset: Option<Preset>,
}

impl RationalParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, omega: Rational) -> Result<Self> {
        if gamma.is_zero() || omega.is_zero() {
            return Err(Error::InvalidParams(
                "gamma and omega must be nonzero".into(),
            ));
        }
        Ok(RationalParams {
            alpha,
            beta,
            gamma,
            omega,
            preset: None,
        })
    }

    pub fn preset(p: Preset) -> Self {
        let [a, b, g, w] = p.coefficients();
        RationalParams {
            alpha: rat(a),
            beta: rat(b),
            gamma: rat(g),
            omega: rat(w),
            preset: Some(p),
        }
    }

    pub fn to_params(&self) -> FkdvParams {
        FkdvParams {
            alpha: ExtScalar::rational(self.alpha.clone()),
            beta: ExtScalar::rational(self.beta.clone()),
            gamma: ExtScalar::rational(self.gamma.clone()),
            omega: ExtScalar::rational(self.omega.clone()),
            preset: self.preset,
        }
    }

    pub fn to_f64(&self) -> ParamValues {
        ParamValues {
            alpha: to_f64(&self.alpha),
            beta: to_f64(&self.beta),
            gamma: to_f64(&self.gamma),
            omega: to_f64(&self.omega),
        }
    }

    /// `(symbol, value)` pairs for specialization.
    pub fn assignments(&self) -> [(Symbol, Rational); 4] {
        [
            (Symbol::Alpha, self.alpha.clone()),
            (Symbol::Beta, self.beta.clone()),
            (Symbol::Gamma, self.gamma.clone()),
            (Symbol::Omega, self.omega.clone()),
        ]
    }

    pub fn value(&self, s: Symbol) -> Option<Rational> {
        self.assignments()
            .into_iter()
            .find(|(t, _)| *t == s)
            .map(|(_, v)| v)
    }

    /// `(2α+β)² − 40γω`.
    pub fn discriminant(&self) -> Rational {
        let s = rat(2) * &self.alpha + &self.beta;
        &s * &s - rat(40) * &self.gamma * &self.omega
    }

    /// Both roots `2α+β ± √disc` when the discriminant is a rational square,
    /// principal root first.
    pub fn exact_roots(&self) -> Option<(Rational, Rational)> {
        let r = rational_sqrt(&self.discriminant())?;
        let s = rat(2) * &self.alpha + &self.beta;
        Some((&s + &r, s - r))
    }

    pub fn label(&self) -> String {
        match self.preset {
            Some(p) => p.to_string(),
            None => "custom".to_string(),
        }
    }

    pub fn has_negative_discriminant(&self) -> bool {
        self.discriminant().is_negative()
    }
}

/// Floating-point coefficients for numeric evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamValues {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub omega: f64,
}

impl ParamValues {
    pub fn discriminant(&self) -> f64 {
        let s = 2.0 * self.alpha + self.beta;
        s * s - 40.0 * self.gamma * self.omega
    }

    /// Principal and conjugate `A`.
    pub fn roots(&self) -> Result<(f64, f64)> {
        let d = self.discriminant();
        if d < 0.0 {
            return Err(Error::NegativeDiscriminant(d));
        }
        let s = 2.0 * self.alpha + self.beta;
        Ok((s + d.sqrt(), s - d.sqrt()))
    }

    pub fn value(&self, s: Symbol) -> Option<f64> {
        match s {
            Symbol::Alpha => Some(self.alpha),
            Symbol::Beta => Some(self.beta),
            Symbol::Gamma => Some(self.gamma),
            Symbol::Omega => Some(self.omega),
            _ => None,
        }
    }
}
