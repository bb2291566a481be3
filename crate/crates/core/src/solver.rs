//! Cascade solver for the `a₁ = b₁ = 0` system at concrete parameters.
//!
//! The top and bottom equations are univariate in `a₂` and `b₂`; the
//! `φ^±5` equations are then linear in `a₀` and the first equation carrying
//! `λ` is linear in `λ`. Every candidate is substituted back into all fifteen
//! equations and discarded unless it satisfies them.
//!
//! When the `a₀`-coefficient vanishes on a root (this happens whenever
//! `α(α+β) = 10γω`, e.g. for SK, CDG and Lax) the `φ^±5` equation
//! degenerates to `0 = 0` and the system admits a curve of solutions. The
//! solver then picks the point on the curve reached by continuity from
//! nearby parameters: both coefficients vanish along the moving root, so
//! `a₀ = −(dc₀/dq)/(dc₁/dq)` for a parameter direction `q` with
//! `dc₁/dq ≠ 0`.

use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::arith::{rational_sqrt, to_f64, MultiPoly, Rational, Scalar, Symbol};
use crate::balance::symbolic_system;
use crate::error::{Error, Result};
use crate::families::{family_table, ExactTuple};
use crate::params::{ParamValues, RationalParams};

/// Relative residual below which a floating-point candidate is accepted.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Componentwise tolerance for merging duplicate tuples.
pub const DEDUP_TOLERANCE: f64 = 1e-10;

/// Scalars the cascade can run over.
pub trait CascadeField: Scalar + PartialEq {
    fn sqrt(&self) -> Option<Self>;
    fn magnitude(&self) -> Self;
    /// Whether `value` is zero given the size `scale` of the terms that
    /// produced it.
    fn negligible(value: &Self, scale: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl CascadeField for f64 {
    fn sqrt(&self) -> Option<f64> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn negligible(value: &f64, scale: &f64) -> bool {
        value.abs() <= RESIDUAL_TOLERANCE * scale
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl CascadeField for Rational {
    fn sqrt(&self) -> Option<Rational> {
        rational_sqrt(self)
    }

    fn magnitude(&self) -> Rational {
        self.abs()
    }

    fn negligible(value: &Rational, _: &Rational) -> bool {
        value.is_zero()
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

/// Value together with the largest absolute monomial contribution.
#[derive(Clone, Debug)]
struct Sized<T> {
    value: T,
    scale: T,
}

impl<T: CascadeField> Sized<T> {
    fn is_negligible(&self) -> bool {
        T::negligible(&self.value, &self.scale)
    }
}

#[derive(Clone, Debug)]
struct Point<T> {
    params: [T; 4],
    k: T,
    unknowns: [Option<T>; 4],
}

impl<T: CascadeField> Point<T> {
    fn get(&self, s: Symbol) -> Option<T> {
        match s {
            Symbol::Alpha => Some(self.params[0].clone()),
            Symbol::Beta => Some(self.params[1].clone()),
            Symbol::Gamma => Some(self.params[2].clone()),
            Symbol::Omega => Some(self.params[3].clone()),
            Symbol::K => Some(self.k.clone()),
            Symbol::A0 => self.unknowns[0].clone(),
            Symbol::A2 => self.unknowns[1].clone(),
            Symbol::B2 => self.unknowns[2].clone(),
            Symbol::Lambda => self.unknowns[3].clone(),
            Symbol::A1 | Symbol::B1 => Some(T::zero()),
            Symbol::A => None,
        }
    }

    fn eval(&self, p: &MultiPoly) -> Result<Sized<T>> {
        let mut value = T::zero();
        let mut scale = T::zero();
        for (m, c) in p.terms() {
            let mut t = T::from_rational(c);
            for (s, e) in m.symbols() {
                let x = self
                    .get(s)
                    .ok_or(crate::error::ArithError::Unbound(s.name()))?;
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            let mag = t.magnitude();
            if less(&scale, &mag) {
                scale = mag;
            }
            value = value + t;
        }
        Ok(Sized { value, scale })
    }

    fn with(&self, s: Symbol, v: T) -> Self {
        let mut p = self.clone();
        let i = match s {
            Symbol::A0 => 0,
            Symbol::A2 => 1,
            Symbol::B2 => 2,
            Symbol::Lambda => 3,
            _ => unreachable!("only unknowns are assigned"),
        };
        p.unknowns[i] = Some(v);
        p
    }
}

fn less<T: CascadeField>(a: &T, b: &T) -> bool {
    a.to_f64() < b.to_f64()
}

struct Cached {
    restricted: Vec<(i32, MultiPoly)>,
    top: MultiPoly,
    bottom: MultiPoly,
}

fn cached() -> &'static Cached {
    static C: OnceLock<Cached> = OnceLock::new();
    C.get_or_init(|| {
        let zero = |s: Symbol| matches!(s, Symbol::A1 | Symbol::B1).then(Rational::zero);
        let restricted: Vec<(i32, MultiPoly)> = symbolic_system()
            .entries()
            .iter()
            .map(|(p, e)| (*p, e.substitute_rational(zero)))
            .collect();
        let get = |power: i32, s: Symbol| {
            let e = &restricted
                .iter()
                .find(|(p, _)| *p == power)
                .expect("power present")
                .1;
            e.div_monomial(&crate::arith::Monomial::var(s))
                .expect("divisible by the leading unknown")
        };
        Cached {
            top: get(7, Symbol::A2),
            bottom: get(-7, Symbol::B2),
            restricted,
        }
    })
}

fn restricted(power: i32) -> &'static MultiPoly {
    &cached()
        .restricted
        .iter()
        .find(|(p, _)| *p == power)
        .expect("power present")
        .1
}

/// Roots of a quadratic in `var` whose coefficients are evaluated at `pt`.
/// `Ok(None)` means the roots exist but are not representable in `T`.
fn quadratic_roots<T: CascadeField>(
    q: &MultiPoly,
    var: Symbol,
    pt: &Point<T>,
) -> Result<Option<Vec<T>>> {
    let a = pt.eval(&q.coefficient_of(var, 2))?.value;
    let b = pt.eval(&q.coefficient_of(var, 1))?.value;
    let c = pt.eval(&q.coefficient_of(var, 0))?.value;
    let four = T::from_i64(4);
    let two_a = T::from_i64(2) * a.clone();
    let disc = b.clone() * b.clone() - four * a * c;
    if disc.to_f64() < 0.0 {
        return Err(Error::NegativeDiscriminant(disc.to_f64()));
    }
    let Some(r) = disc.sqrt() else {
        return Ok(None);
    };
    let root = |s: T| {
        (-b.clone() + s)
            .checked_div(&two_a)
            .ok_or(crate::error::ArithError::DivisionByZero)
    };
    let mut roots = vec![root(r.clone())?];
    if !T::negligible(&r, &b.magnitude()) {
        roots.push(root(-r)?);
    }
    Ok(Some(roots))
}

/// `a₀` from the equation `c₁a₀ + c₀ = 0`, where `var` is a root of `quad`.
/// Returns the value and whether continuity was needed.
fn solve_a0<T: CascadeField>(
    eq: &MultiPoly,
    quad: &MultiPoly,
    var: Symbol,
    pt: &Point<T>,
) -> Result<Option<(T, bool)>> {
    let c1 = eq.coefficient_of(Symbol::A0, 1);
    let c0 = eq.coefficient_of(Symbol::A0, 0);
    let v1 = pt.eval(&c1)?;
    if !v1.is_negligible() {
        let v0 = pt.eval(&c0)?.value;
        return Ok((-v0).checked_div(&v1.value).map(|x| (x, false)));
    }
    let qv = pt.eval(&quad.derivative(var))?;
    if qv.is_negligible() {
        return Ok(None);
    }
    for q in [Symbol::Omega, Symbol::Gamma, Symbol::Alpha, Symbol::Beta] {
        let qq = pt.eval(&quad.derivative(q))?;
        let Some(dr) = (-qq.value).checked_div(&qv.value) else {
            continue;
        };
        let total = |c: &MultiPoly| -> Result<Sized<T>> {
            let dq = pt.eval(&c.derivative(q))?;
            let dv = pt.eval(&c.derivative(var))?;
            Ok(Sized {
                value: dq.value + dv.value * dr.clone(),
                scale: dq.scale + dv.scale * dr.magnitude(),
            })
        };
        let d1 = total(&c1)?;
        if d1.is_negligible() {
            continue;
        }
        let d0 = total(&c0)?;
        return Ok((-d0.value).checked_div(&d1.value).map(|x| (x, true)));
    }
    Ok(None)
}

fn solve_lambda<T: CascadeField>(pt: &Point<T>) -> Result<Option<T>> {
    for (_, e) in &cached().restricted {
        let c1 = pt.eval(&e.coefficient_of(Symbol::Lambda, 1))?;
        if c1.is_negligible() {
            continue;
        }
        let c0 = pt.eval(&e.coefficient_of(Symbol::Lambda, 0))?.value;
        return Ok((-c0).checked_div(&c1.value));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<T> {
    pub a0: T,
    pub a2: T,
    pub b2: T,
    pub lambda: T,
    /// Max over the fifteen equations of `|value|`.
    pub residual_norm: f64,
    /// Max over the equations of `|value| / (largest monomial)`.
    pub relative_residual: f64,
    pub a0_by_continuity: bool,
}

/// Runs the cascade in `T`. `Ok(None)` means a square root left `T`.
fn cascade<T: CascadeField>(params: [T; 4], k: T) -> Result<Option<Vec<Candidate<T>>>> {
    let base = Point {
        params,
        k,
        unknowns: [None, None, None, None],
    };
    let c = cached();
    let Some(a2_roots) = quadratic_roots(&c.top, Symbol::A2, &base)? else {
        return Ok(None);
    };
    let Some(b2_roots) = quadratic_roots(&c.bottom, Symbol::B2, &base)? else {
        return Ok(None);
    };
    let a2s: Vec<T> = std::iter::once(T::zero()).chain(a2_roots).collect();
    let b2s: Vec<T> = std::iter::once(T::zero()).chain(b2_roots).collect();

    let mut out = Vec::new();
    for (i, a2) in a2s.iter().enumerate() {
        for (j, b2) in b2s.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            let pt = base
                .with(Symbol::A2, a2.clone())
                .with(Symbol::B2, b2.clone());
            let a0 = if i > 0 {
                solve_a0(restricted(5), &c.top, Symbol::A2, &pt)?
            } else {
                solve_a0(restricted(-5), &c.bottom, Symbol::B2, &pt)?
            };
            let Some((a0, by_continuity)) = a0 else {
                continue;
            };
            let pt = pt.with(Symbol::A0, a0.clone());
            let Some(lambda) = solve_lambda(&pt)? else {
                continue;
            };
            let pt = pt.with(Symbol::Lambda, lambda.clone());
            let mut ok = true;
            let (mut norm, mut rel) = (0.0f64, 0.0f64);
            for (_, e) in symbolic_system().entries() {
                let r = pt.eval(e)?;
                ok &= r.is_negligible();
                let v = r.value.to_f64().abs();
                norm = norm.max(v);
                let s = r.scale.to_f64();
                rel = rel.max(if s > 0.0 { v / s } else { v });
            }
            if ok {
                out.push(Candidate {
                    a0,
                    a2: a2.clone(),
                    b2: b2.clone(),
                    lambda,
                    residual_norm: norm,
                    relative_residual: rel,
                    a0_by_continuity: by_continuity,
                });
            }
        }
    }
    Ok(Some(out))
}

fn components<T: CascadeField>(c: &Candidate<T>) -> [f64; 4] {
    [
        c.a0.to_f64(),
        c.a2.to_f64(),
        c.b2.to_f64(),
        c.lambda.to_f64(),
    ]
}

fn same(x: &[f64; 4], y: &[f64; 4], tol: f64) -> bool {
    x.iter()
        .zip(y)
        .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0))
}

fn dedup<T: CascadeField>(cands: Vec<Candidate<T>>) -> Vec<Candidate<T>> {
    let mut out: Vec<Candidate<T>> = Vec::new();
    for c in cands {
        if !out
            .iter()
            .any(|o| same(&components(o), &components(&c), DEDUP_TOLERANCE))
        {
            out.push(c);
        }
    }
    out
}

/// Which root of `A` a matched family was evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    Principal,
    Conjugate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attribution {
    pub family: u8,
    pub root: Root,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionTuple {
    pub a0: f64,
    pub a2: f64,
    pub b2: f64,
    pub lambda: f64,
    pub residual_norm: f64,
    pub relative_residual: f64,
    /// Present when the cascade could be repeated in exact arithmetic.
    pub exact: Option<ExactTuple>,
    pub family: Option<Attribution>,
    pub a0_by_continuity: bool,
}

impl SolutionTuple {
    pub fn values(&self) -> [f64; 4] {
        [self.a0, self.a2, self.b2, self.lambda]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub tuples: Vec<SolutionTuple>,
    /// `(2α+β)² = 40γω`: the two roots of `A` coincide.
    pub double_root: bool,
}

fn attribute(values: &[f64; 4], params: &ParamValues, k: f64) -> Option<Attribution> {
    let (ap, am) = params.roots().ok()?;
    [(Root::Principal, ap), (Root::Conjugate, am)]
        .into_iter()
        .find_map(|(root, a)| {
            family_table().iter().find_map(|f| {
                let v = f.evaluate_f64(params, a, k).ok()?;
                same(&v, values, 1e-8).then_some(Attribution { family: f.id, root })
            })
        })
}

fn check_inputs(gamma_zero: bool, omega_zero: bool, k_zero: bool) -> Result<()> {
    if gamma_zero || omega_zero {
        return Err(Error::InvalidParams(
            "gamma and omega must be nonzero".into(),
        ));
    }
    if k_zero {
        return Err(Error::InvalidParams("k must be nonzero".into()));
    }
    Ok(())
}

/// Floating-point cascade.
pub fn solve_restricted(params: &ParamValues, k: f64) -> Result<SolveReport> {
    check_inputs(params.gamma == 0.0, params.omega == 0.0, k == 0.0)?;
    let p = [params.alpha, params.beta, params.gamma, params.omega];
    let cands = dedup(cascade(p, k)?.unwrap_or_default());
    let tuples = cands
        .into_iter()
        .map(|c| {
            let values = components(&c);
            SolutionTuple {
                a0: c.a0,
                a2: c.a2,
                b2: c.b2,
                lambda: c.lambda,
                residual_norm: c.residual_norm,
                relative_residual: c.relative_residual,
                exact: None,
                family: attribute(&values, params, k),
                a0_by_continuity: c.a0_by_continuity,
            }
        })
        .collect();
    let d = params.discriminant();
    let s = 2.0 * params.alpha + params.beta;
    Ok(SolveReport {
        tuples,
        double_root: d.abs() <= 1e-12 * s * s,
    })
}

/// Exact cascade; `Ok(None)` when the discriminant is not a rational square.
pub fn solve_restricted_exact(
    params: &RationalParams,
    k: &Rational,
) -> Result<Option<Vec<ExactTuple>>> {
    check_inputs(params.gamma.is_zero(), params.omega.is_zero(), k.is_zero())?;
    let p = [
        params.alpha.clone(),
        params.beta.clone(),
        params.gamma.clone(),
        params.omega.clone(),
    ];
    Ok(cascade(p, k.clone())?.map(|cands| {
        let mut out: Vec<ExactTuple> = Vec::new();
        for c in cands {
            let t = ExactTuple {
                a0: c.a0,
                a2: c.a2,
                b2: c.b2,
                lambda: c.lambda,
            };
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }))
}

/// Floating-point cascade refined by the exact one when possible; exact
/// tuples replace their floating counterparts.
pub fn solve(params: &RationalParams, k: &Rational) -> Result<SolveReport> {
    let pv = params.to_f64();
    let kf = to_f64(k);
    let mut report = solve_restricted(&pv, kf)?;
    report.double_root = params.discriminant().is_zero();
    if let Some(exact) = solve_restricted_exact(params, k)? {
        for t in &mut report.tuples {
            let v = t.values();
            if let Some(e) = exact.iter().find(|e| same(&e.to_f64(), &v, 1e-8)) {
                [t.a0, t.a2, t.b2, t.lambda] = e.to_f64();
                t.exact = Some(e.clone());
            }
        }
    }
    Ok(report)
}
