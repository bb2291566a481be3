use std::fmt::Write as _;

use anyhow::{bail, Result};
use fkdv_core::arith::{format_rational, Rational};
use fkdv_core::balance::{balance, derive_system, symbolic_system, EquationSystem};
use fkdv_core::closed_form::{
    closed_form_at_root, printed, printed_catalogue, rational_limit, Branch, ClosedFormSolution,
};
use fkdv_core::families::{
    family, family_table, speed_report, verify_family, AbcConstants, Certificate,
};
use fkdv_core::numeric::{compare_residuals, eval_solution, GridSpec, ResidualReport};
use fkdv_core::params::{FkdvParams, ParamValues, Preset, RationalParams};
use fkdv_core::solver::{solve, Root, SolveReport};
use serde_json::{json, Value};

use crate::args::{exact_number, RootChoice, SolutionArgs, UsageError};
use crate::json::{self, float, floats, rational};

/// A finished command: the same result in every supported format.
pub struct Output {
    pub command: &'static str,
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub verification_failed: bool,
}

impl Output {
    fn new(command: &'static str, body: Value, text: String) -> Self {
        Output {
            command,
            json: json::document(command, body),
            text,
            csv: None,
            verification_failed: false,
        }
    }
}

/// Principal and conjugate `A`, exactly when possible.
enum Roots {
    Exact(Rational, Rational),
    Float(f64, f64),
}

impl Roots {
    fn of(p: &RationalParams) -> Result<Self> {
        if let Some((a, b)) = p.exact_roots() {
            return Ok(Roots::Exact(a, b));
        }
        let (a, b) = p.to_f64().roots()?;
        Ok(Roots::Float(a, b))
    }

    fn floats(&self) -> (f64, f64) {
        match self {
            Roots::Exact(a, b) => (fkdv_core::arith::to_f64(a), fkdv_core::arith::to_f64(b)),
            Roots::Float(a, b) => (*a, *b),
        }
    }

    /// `{A, B, C}` for each root.
    fn table(&self, p: &RationalParams) -> Result<Vec<Value>> {
        match self {
            Roots::Exact(ap, am) => [ap, am]
                .into_iter()
                .map(|a| {
                    let v = AbcConstants::exact_at(p, a.clone())?;
                    Ok(json!({"A": rational(&v.a), "B": rational(&v.b), "C": rational(&v.c)}))
                })
                .collect(),
            Roots::Float(ap, am) => [*ap, *am]
                .into_iter()
                .map(|a| {
                    let v = AbcConstants::numeric_at(&p.to_f64(), a)?;
                    Ok(json!({"A": float(v.a), "B": float(v.b), "C": float(v.c)}))
                })
                .collect(),
        }
    }
}

fn equations_json(sys: &EquationSystem) -> Value {
    sys.entries()
        .iter()
        .map(|(p, e)| json!({"power": p, "equation": e.to_string()}))
        .collect()
}

pub fn derive(params: Option<RationalParams>, restricted: bool) -> Result<Output> {
    let bal = balance();
    let sys = match &params {
        None if !restricted => symbolic_system().clone(),
        None => derive_system(&FkdvParams::symbolic(), bal.m, false)?,
        Some(p) => {
            let mut fp = p.to_params();
            fp.preset = p.preset;
            derive_system(&fp, bal.m, !restricted)?
        }
    };
    let body = json!({
        "params": params.as_ref().map_or(Value::String("symbolic".into()), json::params),
        "m": bal.m,
        "degrees": [bal.degrees.0, bal.degrees.1, bal.degrees.2],
        "restricted": restricted,
        "count": sys.len(),
        "equations": equations_json(&sys),
    });
    let mut text = format!(
        "m = {} (degrees {:?}), {} equations{}\n",
        bal.m,
        bal.degrees,
        sys.len(),
        params
            .as_ref()
            .map_or(String::new(), |p| format!(" for {}", p.label()))
    );
    text.push_str(&sys.to_string());
    Ok(Output::new("derive", body, text))
}

fn certificate_json(c: &Certificate) -> Value {
    let f = family(c.family).expect("certificates come from the table");
    json!({
        "id": c.family,
        "status": if c.verified() { "verified" } else { "failed" },
        "failing_powers": c.failing_powers(),
        "equations_checked": c.equations.len(),
        "a0": f.a0.to_string(),
        "a2": f.a2.to_string(),
        "b2": f.b2.to_string(),
        "lambda": c.lambda.to_string(),
        "lambda_form": c.lambda_form.as_ref().map(ToString::to_string),
    })
}

pub fn verify(params: Option<RationalParams>, only: Option<u8>) -> Result<Output> {
    let ids: Vec<u8> = match only {
        Some(id) => vec![family(id)?.id],
        None => family_table().iter().map(|f| f.id).collect(),
    };
    let certs: Vec<Certificate> = ids
        .iter()
        .map(|&id| verify_family(family(id).expect("checked")))
        .collect();
    let failed = certs.iter().any(|c| !c.verified());
    let mut body = json!({
        "families": certs.iter().map(certificate_json).collect::<Vec<_>>(),
        "all_verified": !failed,
    });
    let mut text = String::new();
    if let Some(p) = &params {
        let roots = Roots::of(p)?;
        let table = roots.table(p)?;
        writeln!(
            text,
            "{}: A = {} (conjugate {})",
            p.label(),
            plain(&table[0]["A"]),
            plain(&table[1]["A"])
        )?;
        body["params"] = json::params(p);
        body["abc"] = Value::Array(table);
        body["A"] = table_a(&roots);
    }
    for c in &certs {
        writeln!(
            text,
            "family {}: {} ({} equations), lambda = {}",
            c.family,
            if c.verified() { "verified" } else { "FAILED" },
            c.equations.len(),
            c.lambda_form
                .as_ref()
                .map_or_else(|| c.lambda.to_string(), ToString::to_string)
        )?;
    }
    let mut out = Output::new("verify", body, text);
    out.verification_failed = failed;
    Ok(out)
}

/// A scalar JSON value without string quotes.
fn plain(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn table_a(roots: &Roots) -> Value {
    match roots {
        Roots::Exact(a, _) => rational(a),
        Roots::Float(a, _) => float(*a),
    }
}

pub fn solve_cmd(params: RationalParams, k_text: &str) -> Result<Output> {
    let k = exact_number(k_text)?;
    if params.has_negative_discriminant() {
        return Err(
            fkdv_core::Error::NegativeDiscriminant(fkdv_core::arith::to_f64(
                &params.discriminant(),
            ))
            .into(),
        );
    }
    let report = solve(&params, &k)?;
    let body = json!({
        "params": json::params(&params),
        "k": rational(&k),
        "double_root": report.double_root,
        "count": report.tuples.len(),
        "tuples": tuples_json(&report),
    });
    let mut text = format!(
        "{} k = {}: {} tuples\n",
        params.label(),
        format_rational(&k),
        report.tuples.len()
    );
    let mut csv = String::from("a0,a2,b2,lambda,family,root,residual_norm\n");
    for t in &report.tuples {
        let (fam, root) = attribution(t.family);
        let shown =
            |x: f64, e: Option<&Rational>| e.map_or_else(|| json::format_float(x), format_rational);
        let e = t.exact.as_ref();
        writeln!(
            text,
            "  a0 = {}, a2 = {}, b2 = {}, lambda = {}  [family {}, {} root, residual {:.1e}]",
            shown(t.a0, e.map(|e| &e.a0)),
            shown(t.a2, e.map(|e| &e.a2)),
            shown(t.b2, e.map(|e| &e.b2)),
            shown(t.lambda, e.map(|e| &e.lambda)),
            fam.map_or("-".into(), |f| f.to_string()),
            root,
            t.residual_norm
        )?;
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            json::format_float(t.a0),
            json::format_float(t.a2),
            json::format_float(t.b2),
            json::format_float(t.lambda),
            fam.map_or(String::new(), |f| f.to_string()),
            root,
            json::format_float(t.residual_norm)
        )?;
    }
    let mut out = Output::new("solve", body, text);
    out.csv = Some(csv);
    Ok(out)
}

fn attribution(a: Option<fkdv_core::solver::Attribution>) -> (Option<u8>, &'static str) {
    match a {
        Some(a) => (
            Some(a.family),
            if a.root == Root::Principal {
                "principal"
            } else {
                "conjugate"
            },
        ),
        None => (None, "none"),
    }
}

fn tuples_json(report: &SolveReport) -> Vec<Value> {
    report
        .tuples
        .iter()
        .map(|t| {
            let (fam, root) = attribution(t.family);
            json!({
                "a0": float(t.a0),
                "a2": float(t.a2),
                "b2": float(t.b2),
                "lambda": float(t.lambda),
                "exact": t.exact.as_ref().map(|e| json!({
                    "a0": rational(&e.a0),
                    "a2": rational(&e.a2),
                    "b2": rational(&e.b2),
                    "lambda": rational(&e.lambda),
                })),
                "family": fam,
                "root": root,
                "residual_norm": float(t.residual_norm),
                "relative_residual": float(t.relative_residual),
                "a0_by_continuity": t.a0_by_continuity,
            })
        })
        .collect()
}

fn default_k(branch: Branch) -> f64 {
    match branch {
        Branch::Tan | Branch::Cot => 1.0,
        Branch::Rational => 0.0,
        _ => -1.0,
    }
}

pub fn build_solution(params: &RationalParams, sel: &SolutionArgs) -> Result<ClosedFormSolution> {
    let (fam, branch) = match (sel.printed, sel.family, sel.branch) {
        (Some(i), _, _) => {
            let p = printed(i)?;
            (p.family, p.branch)
        }
        (None, Some(f), Some(b)) => (f, b),
        _ => bail!(UsageError(
            "give --printed N or both --family and --branch".into()
        )),
    };
    let f = family(fam)?;
    let pv = params.to_f64();
    if branch == Branch::Rational {
        return Ok(rational_limit(f, &pv)?);
    }
    let (ap, am) = pv.roots()?;
    let a = if sel.root == RootChoice::Principal {
        ap
    } else {
        am
    };
    let k = sel.k.unwrap_or_else(|| default_k(branch));
    Ok(closed_form_at_root(f, branch, k, &pv, a)?)
}

fn solution_json(s: &ClosedFormSolution) -> Value {
    json!({
        "family": s.family,
        "branch": s.branch.name(),
        "k": float(s.k),
        "A": float(s.a),
        "a0": float(s.a0),
        "a2": float(s.a2),
        "b2": float(s.b2),
        "lambda": float(s.lambda),
    })
}

pub fn eval(params: &RationalParams, sol: &ClosedFormSolution, grid: &GridSpec) -> Result<Output> {
    let field = eval_solution(sol, grid);
    let mut csv = String::from("x,t,u,mask\n");
    for s in &field.samples {
        let u = s.u.map_or(String::new(), json::format_float);
        writeln!(
            csv,
            "{},{},{},{}",
            json::format_float(s.x),
            json::format_float(s.t),
            u,
            u8::from(s.u.is_none())
        )?;
    }
    let body = json!({
        "params": json::params(params),
        "solution": solution_json(sol),
        "epsilon": float(grid.epsilon_for(sol)),
        "masked_fraction": float(field.masked_fraction()),
        "x": floats(&field.samples.iter().map(|s| s.x).collect::<Vec<_>>()),
        "t": floats(&field.samples.iter().map(|s| s.t).collect::<Vec<_>>()),
        "u": field.samples.iter().map(|s| s.u.map_or(Value::Null, float)).collect::<Vec<_>>(),
    });
    let text = format!(
        "family {} on {} at k = {}: {} samples, masked fraction {:.4}\n",
        sol.family,
        sol.branch,
        sol.k,
        field.samples.len(),
        field.masked_fraction()
    );
    let mut out = Output::new("eval", body, text);
    out.csv = Some(csv);
    Ok(out)
}

fn residual_json(r: &ResidualReport) -> Value {
    json!({
        "method": r.method.to_string(),
        "max_abs_residual": float(r.max_abs_residual),
        "max_term": float(r.max_term),
        "scaled": float(r.scaled()),
        "masked_fraction": float(r.masked_fraction),
    })
}

pub fn residual(
    params: &RationalParams,
    sol: &ClosedFormSolution,
    grid: &GridSpec,
    h: f64,
) -> Result<Output> {
    if h <= 0.0 {
        bail!(UsageError("h must be positive".into()));
    }
    let a = compare_residuals(sol, grid, h);
    let body = json!({
        "params": json::params(params),
        "solution": solution_json(sol),
        "h": float(h),
        "reports": [residual_json(&a.riccati), residual_json(&a.fd)],
        "agreement": {
            "max_abs_difference": float(a.max_abs_difference),
            "masked_fraction": float(a.masked_fraction),
        },
    });
    let mut text = String::new();
    for r in [&a.riccati, &a.fd] {
        writeln!(
            text,
            "{:<18} max |residual| {:.3e}  scaled {:.3e}  masked {:.4}",
            r.method.to_string(),
            r.max_abs_residual,
            r.scaled(),
            r.masked_fraction
        )?;
    }
    writeln!(
        text,
        "agreement          max |difference| {:.3e}",
        a.max_abs_difference
    )?;
    Ok(Output::new("residual", body, text))
}

fn preset_report(p: Preset, grid: &GridSpec, h: f64, text: &mut String) -> Result<Value> {
    let params = RationalParams::preset(p);
    let roots = Roots::of(&params)?;
    let abc = roots.table(&params)?;
    let (_, am) = roots.floats();
    let pv: ParamValues = params.to_f64();
    writeln!(
        text,
        "{p}: A = {}, B = {}, C = {}",
        plain(&abc[0]["A"]),
        plain(&abc[0]["B"]),
        plain(&abc[0]["C"])
    )?;

    let mut families = Vec::new();
    for f in family_table() {
        let speeds = speed_report(f.id, &params)?;
        let lam = |a: f64| f.evaluate_f64(&pv, a, 1.0).map(|v| v[3]);
        let cert = verify_family(f);
        writeln!(
            text,
            "  family {}: lambda = {} = {} k^2{}",
            f.id,
            cert.lambda_form
                .as_ref()
                .map_or_else(|| "?".into(), ToString::to_string),
            format_rational(&speeds.certified),
            if speeds.supports_closed_form() {
                ""
            } else {
                " (quoted closed form disagrees)"
            }
        )?;
        families.push(json!({
            "id": f.id,
            "lambda_form": cert.lambda_form.as_ref().map(ToString::to_string),
            "lambda_over_k2": rational(&speeds.certified),
            "lambda_over_k2_conjugate": float(lam(am)?),
            "listed_lambda_over_k2": rational(&speeds.listed),
            "closed_form_lambda_over_k2": rational(&speeds.in_closed_form),
            "supports_listed": speeds.supports_listed(),
            "supports_closed_form": speeds.supports_closed_form(),
        }));
    }

    let mut residuals = Vec::new();
    let (mut worst_scaled, mut worst_fd) = (0.0f64, 0.0f64);
    for entry in printed_catalogue() {
        let sol = entry.solution(default_k(entry.branch), &pv)?;
        let a = compare_residuals(&sol, grid, h);
        worst_scaled = worst_scaled.max(a.riccati.scaled());
        worst_fd = worst_fd.max(a.max_abs_difference);
        residuals.push(json!({
            "printed": entry.index,
            "family": entry.family,
            "branch": entry.branch.name(),
            "k": float(sol.k),
            "riccati_scaled": float(a.riccati.scaled()),
            "riccati_max_abs": float(a.riccati.max_abs_residual),
            "riccati_masked_fraction": float(a.riccati.masked_fraction),
            "fd_max_abs_difference": float(a.max_abs_difference),
            "fd_masked_fraction": float(a.masked_fraction),
        }));
    }
    writeln!(
        text,
        "  max scaled residual {worst_scaled:.3e}, max FD difference {worst_fd:.3e}"
    )?;
    Ok(json!({
        "params": json::params(&params),
        "abc": abc,
        "families": families,
        "residuals": residuals,
        "max_riccati_scaled": float(worst_scaled),
        "max_fd_difference": float(worst_fd),
    }))
}

pub fn report(grid: &GridSpec, h: f64) -> Result<Output> {
    let mut text = String::new();
    let presets = Preset::ALL
        .into_iter()
        .map(|p| preset_report(p, grid, h, &mut text))
        .collect::<Result<Vec<_>>>()?;
    let certs: Vec<Value> = family_table()
        .iter()
        .map(|f| certificate_json(&verify_family(f)))
        .collect();
    let failed = certs.iter().any(|c| c["status"] != "verified");
    let body = json!({
        "grid": {
            "x_min": float(grid.x_min),
            "x_max": float(grid.x_max),
            "nx": grid.nx,
            "t": floats(&grid.t_values),
            "h": float(h),
        },
        "certificates": certs,
        "presets": presets,
    });
    let mut out = Output::new("report", body, text);
    out.verification_failed = failed;
    Ok(out)
}
