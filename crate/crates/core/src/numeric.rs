//! Double-precision evaluation of closed-form solutions and two independent
//! PDE residuals: the analytic Riccati chain and central finite differences.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::arith::{rat, to_f64, Rational};
use crate::closed_form::{Branch, ClosedFormSolution, PoleSet};
use crate::riccati::derivatives;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_values: Vec<f64>,
    /// Pole-exclusion radius; `None` uses the solution's default.
    pub epsilon: Option<f64>,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_values: Vec<f64>) -> Self {
        GridSpec {
            x_min,
            x_max,
            nx,
            t_values,
            epsilon: None,
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.nx.max(1);
        let dx = if n > 1 {
            (self.x_max - self.x_min) / (n - 1) as f64
        } else {
            0.0
        };
        (0..n).map(move |i| self.x_min + dx * i as f64)
    }

    /// `(x, t)` in row-major order, `t` outermost.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t_values
            .iter()
            .flat_map(move |&t| self.xs().map(move |x| (x, t)))
    }

    pub fn epsilon_for(&self, sol: &ClosedFormSolution) -> f64 {
        self.epsilon.unwrap_or_else(|| sol.default_epsilon())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub t: f64,
    /// `None` when masked.
    pub u: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub samples: Vec<Sample>,
}

impl Field {
    pub fn masked_fraction(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().filter(|s| s.u.is_none()).count() as f64 / self.samples.len() as f64
    }
}

fn masked(sol: &ClosedFormSolution, xi: f64, eps: f64) -> bool {
    sol.pole_distance(xi) < eps
}

pub fn eval_solution(sol: &ClosedFormSolution, grid: &GridSpec) -> Field {
    let eps = grid.epsilon_for(sol);
    let samples = grid
        .points()
        .map(|(x, t)| {
            let xi = sol.xi(x, t);
            Sample {
                x,
                t,
                u: (!masked(sol, xi, eps)).then(|| sol.profile(xi)),
            }
        })
        .collect();
    Field { samples }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualMethod {
    RiccatiChain,
    FiniteDifference,
}

impl fmt::Display for ResidualMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidualMethod::RiccatiChain => "riccati-chain",
            ResidualMethod::FiniteDifference => "finite-difference",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub method: ResidualMethod,
    pub max_abs_residual: f64,
    pub masked_fraction: f64,
    /// Largest magnitude among the five PDE terms over unmasked points.
    pub max_term: f64,
    /// Max over points of `|residual| / (largest term at that point)`.
    pub max_relative: f64,
    /// Per-point residuals in grid order; `None` when masked.
    pub residuals: Vec<Option<f64>>,
}

impl ResidualReport {
    fn from_points(method: ResidualMethod, pts: Vec<Option<(f64, f64)>>) -> Self {
        let n = pts.len();
        let mut report = ResidualReport {
            method,
            max_abs_residual: 0.0,
            masked_fraction: 0.0,
            max_term: 0.0,
            max_relative: 0.0,
            residuals: Vec::with_capacity(n),
        };
        let mut masked = 0usize;
        for p in pts {
            match p {
                None => {
                    masked += 1;
                    report.residuals.push(None);
                }
                Some((r, term)) => {
                    report.max_abs_residual = report.max_abs_residual.max(r.abs());
                    report.max_term = report.max_term.max(term);
                    if term > 0.0 {
                        report.max_relative = report.max_relative.max(r.abs() / term);
                    } else if r != 0.0 {
                        report.max_relative = f64::INFINITY;
                    }
                    report.residuals.push(Some(r));
                }
            }
        }
        report.masked_fraction = if n == 0 {
            0.0
        } else {
            masked as f64 / n as f64
        };
        report
    }

    /// `max_abs_residual / max_term`, zero for an identically vanishing field.
    pub fn scaled(&self) -> f64 {
        if self.max_term > 0.0 {
            self.max_abs_residual / self.max_term
        } else {
            self.max_abs_residual
        }
    }
}

/// Residual and largest term of `u_t + ωu₅ + αuu₃ + βu₁u₂ + γu²u₁` given
/// `u, u_t` and `u₁ … u₅`.
fn pde(sol: &ClosedFormSolution, u: f64, ut: f64, d: [f64; 5]) -> (f64, f64) {
    let p = &sol.params;
    let terms = [
        ut,
        p.omega * d[4],
        p.alpha * u * d[2],
        p.beta * d[0] * d[1],
        p.gamma * u * u * d[0],
    ];
    let r = terms.iter().sum();
    let m = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    (r, m)
}

/// `x`-derivatives from the Riccati chain evaluated at `φ(ξ)`; `u_t = λv'`.
pub fn pde_residual_riccati(sol: &ClosedFormSolution, grid: &GridSpec) -> ResidualReport {
    let eps = grid.epsilon_for(sol);
    let chain = derivatives(&sol.laurent(), &sol.k);
    let pts = grid
        .points()
        .map(|(x, t)| {
            let xi = sol.xi(x, t);
            if masked(sol, xi, eps) {
                return None;
            }
            let phi = sol.phi(xi);
            let v: Vec<f64> = chain.iter().map(|p| p.eval(phi)).collect();
            Some(pde(
                sol,
                v[0],
                sol.lambda * v[1],
                [v[1], v[2], v[3], v[4], v[5]],
            ))
        })
        .collect();
    ResidualReport::from_points(ResidualMethod::RiccatiChain, pts)
}

/// Central finite-difference weights for the `m`-th derivative on integer
/// offsets `−p..=p`, by Fornberg's recursion in exact arithmetic.
pub fn central_weights(m: usize, p: i64) -> Vec<Rational> {
    let xs: Vec<Rational> = (-p..=p).map(rat).collect();
    let n = xs.len();
    // c[j][d]: weight of node j for derivative d, expanded about 0.
    let mut c = vec![vec![Rational::zero(); m + 1]; n];
    c[0][0] = Rational::one();
    let mut c1 = Rational::one();
    let mut c4 = xs[0].clone();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = Rational::one();
        let c5 = c4;
        c4 = xs[i].clone();
        for j in 0..i {
            let c3 = &xs[i] - &xs[j];
            c2 = &c2 * &c3;
            if j == i - 1 {
                for d in (1..=mn).rev() {
                    c[i][d] = &c1 * (rat(d as i64) * &c[i - 1][d - 1] - &c5 * &c[i - 1][d]) / &c2;
                }
                c[i][0] = -(&c1 * &c5 * &c[i - 1][0]) / &c2;
            }
            for d in (1..=mn).rev() {
                c[j][d] = (&c4 * &c[j][d] - rat(d as i64) * &c[j][d - 1]) / &c3;
            }
            c[j][0] = &c4 * &c[j][0] / &c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m].clone()).collect()
}

/// Half-widths giving eighth-order accuracy for derivatives 1 to 5.
const HALF_WIDTH: [i64; 5] = [4, 4, 5, 5, 6];

fn stencils() -> &'static [Vec<f64>; 5] {
    static S: OnceLock<[Vec<f64>; 5]> = OnceLock::new();
    S.get_or_init(|| {
        std::array::from_fn(|i| {
            central_weights(i + 1, HALF_WIDTH[i])
                .iter()
                .map(to_f64)
                .collect()
        })
    })
}

fn apply(weights: &[f64], f: impl Fn(i64) -> f64, h: f64, order: i32) -> f64 {
    let p = (weights.len() / 2) as i64;
    let s: f64 = weights.iter().zip(-p..=p).map(|(w, j)| w * f(j)).sum();
    s / h.powi(order)
}

/// Time step used for `u_t`; shrinks with the speed so the `t`-stencil spans
/// at most the `x`-stencil in `ξ`.
pub fn time_step(h: f64, lambda: f64) -> f64 {
    h / lambda.abs().max(1.0)
}

/// Residual from eighth-order central differences of the closed form alone.
pub fn pde_residual_fd(sol: &ClosedFormSolution, grid: &GridSpec, h: f64) -> ResidualReport {
    let eps = grid.epsilon_for(sol);
    let w = stencils();
    let ht = time_step(h, sol.lambda);
    let reach = HALF_WIDTH[4] as f64 * h;
    let pts = grid
        .points()
        .map(|(x, t)| {
            let xi = sol.xi(x, t);
            let t_reach = 4.0 * ht * sol.lambda.abs();
            if sol.pole_distance(xi) < eps + reach.max(t_reach) {
                return None;
            }
            let u = sol.u(x, t);
            let fx = |j: i64| sol.u(x + j as f64 * h, t);
            let ft = |j: i64| sol.u(x, t + j as f64 * ht);
            let d: [f64; 5] = std::array::from_fn(|i| apply(&w[i], fx, h, i as i32 + 1));
            let ut = apply(&w[0], ft, ht, 1);
            Some(pde(sol, u, ut, d))
        })
        .collect();
    ResidualReport::from_points(ResidualMethod::FiniteDifference, pts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Agreement {
    pub max_abs_difference: f64,
    /// Fraction of points masked by either method.
    pub masked_fraction: f64,
    pub riccati: ResidualReport,
    pub fd: ResidualReport,
}

pub fn compare_residuals(sol: &ClosedFormSolution, grid: &GridSpec, h: f64) -> Agreement {
    let riccati = pde_residual_riccati(sol, grid);
    let fd = pde_residual_fd(sol, grid, h);
    let mut diff = 0.0f64;
    let mut masked = 0usize;
    for (a, b) in riccati.residuals.iter().zip(&fd.residuals) {
        match (a, b) {
            (Some(a), Some(b)) => diff = diff.max((a - b).abs()),
            _ => masked += 1,
        }
    }
    let n = riccati.residuals.len().max(1);
    Agreement {
        max_abs_difference: diff,
        masked_fraction: masked as f64 / n as f64,
        riccati,
        fd,
    }
}

/// `a + b` as an unevaluated pair `(sum, error)`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `a·b` as `(product, error)`.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `x + λ·s₁ + λ·s₂` rounded once, independent of the order of `s₁, s₂`.
fn shifted_xi(x: f64, lambda: f64, s1: f64, s2: f64) -> f64 {
    let (p1, e1) = two_prod(lambda, s1);
    let (p2, e2) = two_prod(lambda, s2);
    let mut parts = [x, p1, e1, p2, e2];
    parts.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(a.total_cmp(b)));
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for v in parts {
        let (s, e) = two_sum(hi, v);
        hi = s;
        lo += e;
    }
    hi + lo
}

/// `max |u(x, t+δ) − u(x+λδ, t)|`. Errors if any evaluation point lies
/// within `eps` of a pole.
pub fn traveling_wave_check(
    sol: &ClosedFormSolution,
    delta: f64,
    points: &[(f64, f64)],
    eps: f64,
) -> crate::Result<f64> {
    traveling_wave_check_with_speed(sol, sol.lambda, delta, points, eps)
}

/// As [`traveling_wave_check`] but shifting `x` by `speed·δ`, which need not
/// be the speed the solution travels at. Both sides are evaluated at their
/// exact arguments: `t + δ` and `x + speed·δ` are never rounded on their own.
pub fn traveling_wave_check_with_speed(
    sol: &ClosedFormSolution,
    speed: f64,
    delta: f64,
    points: &[(f64, f64)],
    eps: f64,
) -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for &(x, t) in points {
        // u(x, t+δ) = v(x + λt + λδ)
        let left = shifted_xi(x, sol.lambda, t, delta);
        // u(x + speed·δ, t) = v(x + speed·δ + λt)
        let right = if speed == sol.lambda {
            shifted_xi(x, sol.lambda, delta, t)
        } else {
            let (p, e) = two_prod(speed, delta);
            let (xs, xe) = two_sum(x, p);
            shifted_xi(xs, sol.lambda, t, 0.0) + (xe + e)
        };
        if masked(sol, left, eps) || masked(sol, right, eps) {
            return Err(crate::Error::Numeric(format!(
                "sample ({x}, {t}) is within {eps} of a pole"
            )));
        }
        worst = worst.max((sol.profile(left) - sol.profile(right)).abs());
    }
    Ok(worst)
}

/// Sixth-order central difference step for the branch check.
pub const BRANCH_STEP: f64 = 1e-2;

/// `max |φ'(ξ) − (k + φ(ξ)²)|` with `φ'` from a sixth-order central
/// difference. Errors on a sample whose stencil touches a pole of `φ`.
pub fn branch_check(branch: Branch, k: f64, xis: &[f64]) -> crate::Result<f64> {
    branch.check(k)?;
    let poles = branch.phi_poles(k);
    let w: Vec<f64> = central_weights(1, 3).iter().map(to_f64).collect();
    let mut worst = 0.0f64;
    for &xi in xis {
        if poles.distance(xi) <= 3.0 * BRANCH_STEP {
            return Err(crate::Error::Numeric(format!(
                "{xi} is at a pole of the {branch} branch"
            )));
        }
        let d = apply(
            &w,
            |j| branch.phi(k, xi + j as f64 * BRANCH_STEP),
            BRANCH_STEP,
            1,
        );
        let phi = branch.phi(k, xi);
        worst = worst.max((d - (k + phi * phi)).abs());
    }
    Ok(worst)
}

/// Minimum distance from `φ`'s poles at which the branch check is
/// meaningful: `1/√|k|`, or `1` when `k = 0`.
pub fn branch_clearance(k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        1.0 / k.abs().sqrt()
    }
}

/// Whether `xi` is at least `clearance` from every pole in `set`.
pub fn clear_of(set: &PoleSet, xi: f64, clearance: f64) -> bool {
    set.distance(xi) >= clearance
}
