//! Degree balancing for the ansatz order and extraction of the algebraic
//! system obtained by equating every `φ`-power of the residual to zero.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::arith::{Bindings, ExtScalar, MultiPoly, Symbol};
use crate::params::FkdvParams;
use crate::riccati::{build_ansatz, ode_residual, PhiPoly};

/// Highest `φ`-degrees `(3m+1, 2m+3, m+5)` of the nonlinear terms
/// `γv²v'`, `αvv'''`/`βv'v''` and the linear term `ωv⁽⁵⁾`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub m: u32,
    pub degrees: (i64, i64, i64),
}

pub fn degrees_at(m: u32) -> (i64, i64, i64) {
    let m = i64::from(m);
    (3 * m + 1, 2 * m + 3, m + 5)
}

fn coincide((a, b, c): (i64, i64, i64)) -> bool {
    a == b || a == c || b == c
}

/// Searches `m = 1, 2, …` for the order at which two leading degrees meet.
/// Each pairwise equation is linear in `m`, so a match beyond `m = 4` is
/// impossible and the search is exhaustive.
pub fn balance() -> BalanceReport {
    let hits: Vec<u32> = (1..=16).filter(|&m| coincide(degrees_at(m))).collect();
    assert_eq!(hits.len(), 1, "balancing must have a unique solution");
    let m = hits[0];
    BalanceReport {
        m,
        degrees: degrees_at(m),
    }
}

/// `(power, equation)` pairs in descending power; each equation is a nonzero
/// polynomial that must vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationSystem {
    entries: Vec<(i32, MultiPoly)>,
}

impl EquationSystem {
    pub fn entries(&self) -> &[(i32, MultiPoly)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, power: i32) -> Option<&MultiPoly> {
        self.entries
            .iter()
            .find(|(p, _)| *p == power)
            .map(|(_, e)| e)
    }

    pub fn powers(&self) -> Vec<i32> {
        self.entries.iter().map(|(p, _)| *p).collect()
    }

    /// `Σ equation · φ^power`.
    pub fn reassemble(&self) -> PhiPoly {
        PhiPoly::from_terms(
            self.entries
                .iter()
                .map(|(p, e)| (*p, ExtScalar::from_poly(e.clone()))),
        )
    }

    /// Substitutes into every equation, keeping the power labels.
    pub fn substitute(&self, bindings: &Bindings) -> Vec<(i32, ExtScalar)> {
        self.entries
            .iter()
            .map(|(p, e)| (*p, crate::arith::substitute(e, bindings)))
            .collect()
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, e) in &self.entries {
            writeln!(f, "phi^{p}: {e} = 0")?;
        }
        Ok(())
    }
}

/// One equation per nonzero coefficient of the residual, highest power
/// first. A coefficient with a nonconstant denominator contributes its
/// numerator, which has the same zero set.
pub fn extract_system(residual: &PhiPoly) -> EquationSystem {
    let entries = residual
        .terms()
        .rev()
        .map(|(p, c)| (p, c.as_poly().unwrap_or_else(|| c.num().clone())))
        .collect();
    EquationSystem { entries }
}

/// System for the order-`m` ansatz under the given coefficients.
pub fn derive_system(params: &FkdvParams, m: u32, general: bool) -> crate::Result<EquationSystem> {
    let v = build_ansatz(m, general)?;
    Ok(extract_system(&ode_residual(&v, params)))
}

/// The general `m = 2` system with fully symbolic `α, β, γ, ω, k, λ`.
pub fn symbolic_system() -> &'static EquationSystem {
    static SYSTEM: OnceLock<EquationSystem> = OnceLock::new();
    SYSTEM.get_or_init(|| {
        derive_system(&FkdvParams::symbolic(), 2, true).expect("m = 2 is supported")
    })
}

/// Bindings for the `a₁ = b₁ = 0` stratum.
pub fn restriction() -> Bindings {
    Bindings::from([
        (Symbol::A1, ExtScalar::zero()),
        (Symbol::B1, ExtScalar::zero()),
    ])
}
