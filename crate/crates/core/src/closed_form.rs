//! Closed-form profiles `u(x,t) = v(x + λt)` obtained by composing a family
//! with an explicit solution of `φ' = k + φ²`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::families::{family, AbcValues, LambdaForm, SolutionFamily, SpeedConstant};
use crate::params::ParamValues;
use crate::riccati::LaurentPoly;

/// Explicit Riccati solutions. `CschForm` is the `tanh` branch written with
/// `coth² = 1 + csch²`, which is how the `b₂`-only profiles are usually quoted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Tan,
    Cot,
    Tanh,
    Coth,
    CschForm,
    Rational,
}

impl Branch {
    pub const ALL: [Branch; 6] = [
        Branch::Tan,
        Branch::Cot,
        Branch::Tanh,
        Branch::Coth,
        Branch::CschForm,
        Branch::Rational,
    ];

    /// Distinct functions of `ξ`.
    pub const FUNCTIONS: [Branch; 5] = [
        Branch::Tan,
        Branch::Cot,
        Branch::Tanh,
        Branch::Coth,
        Branch::Rational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Branch::Tan => "tan",
            Branch::Cot => "cot",
            Branch::Tanh => "tanh",
            Branch::Coth => "coth",
            Branch::CschForm => "csch",
            Branch::Rational => "rational",
        }
    }

    pub fn admits(self, k: f64) -> bool {
        match self {
            Branch::Tan | Branch::Cot => k > 0.0,
            Branch::Tanh | Branch::Coth | Branch::CschForm => k < 0.0,
            Branch::Rational => k == 0.0,
        }
    }

    pub fn check(self, k: f64) -> Result<()> {
        if self.admits(k) {
            Ok(())
        } else {
            Err(Error::BranchMismatch {
                branch: self.name(),
                k,
            })
        }
    }

    /// `φ(ξ)`; the caller guarantees `self.admits(k)`.
    pub fn phi(self, k: f64, xi: f64) -> f64 {
        match self {
            Branch::Tan => {
                let s = k.sqrt();
                s * (s * xi).tan()
            }
            Branch::Cot => {
                let s = k.sqrt();
                -s / (s * xi).tan()
            }
            Branch::Tanh | Branch::CschForm => {
                let s = (-k).sqrt();
                -s * (s * xi).tanh()
            }
            Branch::Coth => {
                let s = (-k).sqrt();
                -s / (s * xi).tanh()
            }
            Branch::Rational => -1.0 / xi,
        }
    }

    /// Real poles of `φ` itself.
    pub fn phi_poles(self, k: f64) -> PoleSet {
        self.singular_sets(k).0
    }

    /// Poles of `φ` (where `a₂φ²` blows up) and zeros of `φ` (where
    /// `b₂φ⁻²` does).
    fn singular_sets(self, k: f64) -> (PoleSet, PoleSet) {
        let half = |s: f64| PI / (2.0 * s);
        match self {
            Branch::Tan => {
                let s = k.sqrt();
                (
                    PoleSet::Lattice {
                        offset: half(s),
                        spacing: PI / s,
                    },
                    PoleSet::Lattice {
                        offset: 0.0,
                        spacing: PI / s,
                    },
                )
            }
            Branch::Cot => {
                let s = k.sqrt();
                (
                    PoleSet::Lattice {
                        offset: 0.0,
                        spacing: PI / s,
                    },
                    PoleSet::Lattice {
                        offset: half(s),
                        spacing: PI / s,
                    },
                )
            }
            Branch::Tanh | Branch::CschForm => (PoleSet::Empty, PoleSet::Single(0.0)),
            Branch::Coth | Branch::Rational => (PoleSet::Single(0.0), PoleSet::Empty),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Branch {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Branch::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ParseError::Branch(s.to_string()))
    }
}

/// Real singularities of a profile in `ξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PoleSet {
    Empty,
    Single(f64),
    /// `offset + n·spacing`, `n ∈ ℤ`.
    Lattice {
        offset: f64,
        spacing: f64,
    },
}

impl PoleSet {
    pub fn distance(&self, xi: f64) -> f64 {
        match *self {
            PoleSet::Empty => f64::INFINITY,
            PoleSet::Single(p) => (xi - p).abs(),
            PoleSet::Lattice { offset, spacing } => {
                let r = (xi - offset).rem_euclid(spacing);
                r.min(spacing - r)
            }
        }
    }

    fn union(self, other: PoleSet) -> PoleSet {
        match (self, other) {
            (PoleSet::Empty, x) | (x, PoleSet::Empty) => x,
            (
                PoleSet::Lattice {
                    offset: o1,
                    spacing,
                },
                PoleSet::Lattice { offset: o2, .. },
            ) => {
                // The two lattices of a trigonometric branch interleave at
                // half spacing.
                PoleSet::Lattice {
                    offset: o1.min(o2),
                    spacing: spacing / 2.0,
                }
            }
            (PoleSet::Single(p), PoleSet::Single(q)) if p == q => PoleSet::Single(p),
            (a, b) => unreachable!("no branch produces {a:?} together with {b:?}"),
        }
    }
}

/// A family instantiated at concrete parameters on one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormSolution {
    pub family: u8,
    pub branch: Branch,
    pub k: f64,
    pub params: ParamValues,
    /// The root of `A`'s minimal polynomial used.
    pub a: f64,
    pub a0: f64,
    pub a2: f64,
    pub b2: f64,
    pub lambda: f64,
    pub poles: PoleSet,
}

impl ClosedFormSolution {
    fn build(
        f: &SolutionFamily,
        branch: Branch,
        k: f64,
        params: &ParamValues,
        a: f64,
    ) -> Result<Self> {
        let [a0, a2, b2, lambda] = f.evaluate_f64(params, a, k)?;
        let (phi_poles, phi_zeros) = branch.singular_sets(k);
        let mut poles = PoleSet::Empty;
        if a2 != 0.0 {
            poles = poles.union(phi_poles);
        }
        if b2 != 0.0 {
            poles = poles.union(phi_zeros);
        }
        Ok(ClosedFormSolution {
            family: f.id,
            branch,
            k,
            params: *params,
            a,
            a0,
            a2,
            b2,
            lambda,
            poles,
        })
    }

    /// `v(ξ) = a₀ + a₂φ² + b₂φ⁻²` with `ξ = x + λt`.
    pub fn profile(&self, xi: f64) -> f64 {
        let phi = self.phi(xi);
        let p2 = phi * phi;
        let mut v = self.a0;
        if self.a2 != 0.0 {
            v += self.a2 * p2;
        }
        if self.b2 != 0.0 {
            v += self.b2 / p2;
        }
        v
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.profile(self.xi(x, t))
    }

    pub fn xi(&self, x: f64, t: f64) -> f64 {
        x + self.lambda * t
    }

    pub fn phi(&self, xi: f64) -> f64 {
        self.branch.phi(self.k, xi)
    }

    pub fn laurent(&self) -> LaurentPoly<f64> {
        LaurentPoly::from_terms([(0, self.a0), (2, self.a2), (-2, self.b2)])
    }

    /// Spacing between neighbouring singularities, or `π/√|k|` when there
    /// are fewer than two.
    pub fn pole_spacing(&self) -> f64 {
        match self.poles {
            PoleSet::Lattice { spacing, .. } => spacing,
            _ if self.k == 0.0 => 1.0,
            _ => PI / self.k.abs().sqrt(),
        }
    }

    pub fn default_epsilon(&self) -> f64 {
        1e-2 * self.pole_spacing()
    }

    pub fn pole_distance(&self, xi: f64) -> f64 {
        self.poles.distance(xi)
    }

    /// Same profile travelling at a different speed.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        ClosedFormSolution {
            lambda,
            ..self.clone()
        }
    }

    /// A constant profile `u = c`, useful as a trivial probe.
    pub fn constant(c: f64, lambda: f64, params: ParamValues) -> Self {
        ClosedFormSolution {
            family: 0,
            branch: Branch::Tanh,
            k: -1.0,
            params,
            a: f64::NAN,
            a0: c,
            a2: 0.0,
            b2: 0.0,
            lambda,
            poles: PoleSet::Empty,
        }
    }
}

/// Family `f` on `branch` at the principal root of `A`.
pub fn closed_form(
    f: &SolutionFamily,
    branch: Branch,
    k: f64,
    params: &ParamValues,
) -> Result<ClosedFormSolution> {
    let (a, _) = params.roots()?;
    closed_form_at_root(f, branch, k, params, a)
}

pub fn closed_form_at_root(
    f: &SolutionFamily,
    branch: Branch,
    k: f64,
    params: &ParamValues,
    a: f64,
) -> Result<ClosedFormSolution> {
    if branch == Branch::Rational {
        return Err(Error::RationalLimitNotRequested);
    }
    branch.check(k)?;
    ClosedFormSolution::build(f, branch, k, params, a)
}

/// The `k → 0` limit `u = a₂/ξ²` on `φ = −1/ξ`. Every family coefficient other
/// than `a₂` carries a factor of `k`, so families 1 and 2 collapse to zero.
pub fn rational_limit(f: &SolutionFamily, params: &ParamValues) -> Result<ClosedFormSolution> {
    let (a, _) = params.roots()?;
    ClosedFormSolution::build(f, Branch::Rational, 0.0, params, a)
}

/// One of the twelve quoted closed forms, tied to the family and branch that
/// reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedSolution {
    pub index: u8,
    pub family: u8,
    pub branch: Branch,
    /// The speed appearing inside the quoted formula.
    pub speed: LambdaForm,
}

pub fn printed_catalogue() -> Vec<PrintedSolution> {
    (1..=12)
        .map(|i| printed(i).expect("index in range"))
        .collect()
}

pub fn printed(index: u8) -> Result<PrintedSolution> {
    if !(1..=12).contains(&index) {
        return Err(Error::UnknownPrinted(index));
    }
    let family = index.div_ceil(2);
    let trig = index % 2 == 1;
    let branch = match (family, trig) {
        (_, true) => Branch::Tan,
        (1 | 2, false) => Branch::CschForm,
        (_, false) => Branch::Tanh,
    };
    let constant = if family % 2 == 1 {
        SpeedConstant::B
    } else {
        SpeedConstant::C
    };
    let multiplier = if family == 1 || family == 3 { 16 } else { 256 };
    let speed = LambdaForm {
        multiplier: crate::arith::rat(multiplier),
        constant,
    };
    Ok(PrintedSolution {
        index,
        family,
        branch,
        speed,
    })
}

impl PrintedSolution {
    /// The certified solution this formula corresponds to.
    pub fn solution(&self, k: f64, params: &ParamValues) -> Result<ClosedFormSolution> {
        closed_form(family(self.family)?, self.branch, k, params)
    }

    /// The quoted formula evaluated literally, including its quoted speed.
    pub fn literal(
        &self,
        abc: &AbcValues<f64>,
        params: &ParamValues,
        k: f64,
        x: f64,
        t: f64,
    ) -> f64 {
        let c = match self.speed.constant {
            SpeedConstant::B => abc.b,
            SpeedConstant::C => abc.c,
        };
        let m = crate::arith::to_f64(&self.speed.multiplier);
        let xi = x + m * c * k * k * t;
        let scale = if self.family % 2 == 1 {
            abc.a * k / params.gamma
        } else {
            40.0 * k * params.omega / abc.a
        };
        let sq = |f: fn(f64) -> f64, s: f64| f(s * xi).powi(2);
        let cot = |y: f64| 1.0 / y.tan();
        let coth = |y: f64| 1.0 / y.tanh();
        let csch = |y: f64| 1.0 / y.sinh();
        if self.branch == Branch::Tan {
            let s = k.sqrt();
            match self.family {
                1 | 2 => -scale * (2.0 + 3.0 * sq(cot, s)),
                3 | 4 => -scale * (2.0 + 3.0 * sq(f64::tan, s)),
                _ => -scale * (2.0 + 3.0 * sq(f64::tan, s) + 3.0 * sq(cot, s)),
            }
        } else {
            let s = (-k).sqrt();
            match self.family {
                1 | 2 => scale * (1.0 + 3.0 * sq(csch, s)),
                3 | 4 => -scale * (2.0 - 3.0 * sq(f64::tanh, s)),
                _ => -scale * (2.0 - 3.0 * sq(f64::tanh, s) - 3.0 * sq(coth, s)),
            }
        }
    }
}
