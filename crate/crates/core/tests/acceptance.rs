//! Acceptance runner. Prints one `PASS`/`FAIL` line per criterion.
//!
//! Criteria listed in `EXPECTED_FAIL` are known to be unattainable as stated;
//! they are still evaluated in full and reported as `FAIL`. The process exits
//! nonzero when any other criterion fails, or when an expected failure starts
//! passing (so the list cannot go stale).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fkdv_core::arith::{rat, ratio, Rational};
use fkdv_core::balance::{balance, symbolic_system};
use fkdv_core::closed_form::{
    closed_form_at_root, printed_catalogue, rational_limit, Branch, ClosedFormSolution,
};
use fkdv_core::families::{family, family_table, verify_family, AbcConstants};
use fkdv_core::numeric::{
    branch_check, branch_clearance, clear_of, compare_residuals, pde_residual_riccati,
    traveling_wave_check, GridSpec,
};
use fkdv_core::params::{Preset, RationalParams};
use fkdv_core::solver::solve;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FLOAT_TUPLE_TOLERANCE: f64 = 1e-12;
const SET_TOLERANCE: f64 = 1e-12;
const RICCATI_SCALED_TOLERANCE: f64 = 1e-8;
const FD_AGREEMENT_TOLERANCE: f64 = 1e-2;
const FD_STEP: f64 = 0.05;
const MAX_MASKED_FRACTION: f64 = 0.5;
const TRAVELING_WAVE_TOLERANCE: f64 = 1e-10;
const TRAVELING_WAVE_DELTA: f64 = 0.3;
const TRAVELING_WAVE_SAMPLES: usize = 100;
const BRANCH_TOLERANCE: f64 = 1e-10;
const PERTURBED_RESIDUAL_FLOOR: f64 = 1.0;
const VERIFY_BUDGET: Duration = Duration::from_secs(30);
const NUMERIC_BUDGET: Duration = Duration::from_secs(60);
const GRID_POINTS: usize = 2001;
const SEED: u64 = 0x5eed;

const EXPECTED_FAIL: &[u8] = &[6, 7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn grid() -> GridSpec {
    GridSpec::new(-10.0, 10.0, GRID_POINTS, vec![0.0, 1.0])
}

/// `k` at which each branch is exercised.
fn branch_k(branch: Branch) -> f64 {
    match branch {
        Branch::Tan | Branch::Cot => 1.0,
        Branch::Tanh | Branch::Coth | Branch::CschForm => -1.0,
        Branch::Rational => 0.0,
    }
}

fn criterion_1() -> Outcome {
    let r = balance();
    outcome(
        r.m == 2 && r.degrees == (7, 7, 7),
        format!("m = {}, degrees = {:?}", r.m, r.degrees),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let sys = symbolic_system();
    let top = sys.get(7).map(ToString::to_string).unwrap_or_default();
    let elapsed = start.elapsed();
    let expected = "2*gamma*a2^3 + 24*alpha*a2^2 + 12*beta*a2^2 + 720*omega*a2";
    outcome(
        sys.len() == 15 && top == expected && elapsed < Duration::from_secs(1),
        format!("{} equations, power 7: {top}, {elapsed:.2?}", sys.len()),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let failing: Vec<u8> = family_table()
        .iter()
        .filter(|f| !verify_family(f).verified())
        .map(|f| f.id)
        .collect();
    let elapsed = start.elapsed();
    outcome(
        failing.is_empty() && elapsed < VERIFY_BUDGET,
        format!("6 families, unverified {failing:?}, {elapsed:.2?}"),
    )
}

fn criterion_4() -> Outcome {
    let expected = [
        (Preset::Kk, 80),
        (Preset::Sk, 20),
        (Preset::Cdg, 120),
        (Preset::Lax, 60),
        (Preset::Ito, 20),
    ];
    let mut found = Vec::new();
    let mut pass = true;
    for (preset, a) in expected {
        let got = AbcConstants::exact(&RationalParams::preset(preset)).map(|v| v.a);
        pass &= got.as_ref() == Some(&rat(a));
        found.push(format!(
            "{}={}",
            preset.name(),
            got.map_or("none".into(), |v| v.to_string())
        ));
    }
    outcome(pass, format!("A: {}", found.join(", ")))
}

fn criterion_5() -> Outcome {
    let params = RationalParams::preset(Preset::Sk);
    let k = rat(-1);
    let target = [rat(8), rat(-12), rat(0), rat(-16)];
    let Ok(report) = solve(&params, &k) else {
        return outcome(false, "solver error");
    };
    let exact_hit = report.tuples.iter().any(|t| {
        t.exact.as_ref().is_some_and(|e| {
            [&e.a0, &e.a2, &e.b2, &e.lambda]
                .into_iter()
                .eq(target.iter())
        })
    });
    let float_target = [8.0, -12.0, 0.0, -16.0];
    let float_hit = fkdv_core::solver::solve_restricted(&params.to_f64(), -1.0).is_ok_and(|r| {
        r.tuples.iter().any(|t| {
            t.values()
                .iter()
                .zip(float_target)
                .all(|(a, b)| (a - b).abs() <= FLOAT_TUPLE_TOLERANCE)
        })
    });
    let table = family(3)
        .and_then(|f| f.evaluate_exact(&params, &rat(20), &k))
        .is_ok_and(|e| {
            [&e.a0, &e.a2, &e.b2, &e.lambda]
                .into_iter()
                .eq(target.iter())
        });
    outcome(
        exact_hit && float_hit && table,
        format!("exact path {exact_hit}, float path {float_hit}, family 3 table {table}"),
    )
}

fn sorted(mut v: Vec<[f64; 4]>) -> Vec<[f64; 4]> {
    v.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    v.dedup_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .all(|(x, y)| (x - y).abs() <= SET_TOLERANCE)
    });
    v
}

fn criterion_6() -> Outcome {
    let ks: [Rational; 5] = [rat(-2), rat(-1), ratio(-1, 4), ratio(1, 4), rat(1)];
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for preset in Preset::ALL {
        let params = RationalParams::preset(preset);
        let pv = params.to_f64();
        let Ok((ap, am)) = pv.roots() else {
            mismatches.push(format!("{}: no real A", preset.name()));
            continue;
        };
        for k in &ks {
            cases += 1;
            let kf = fkdv_core::arith::to_f64(k);
            let solver = sorted(
                solve(&params, k)
                    .map(|r| r.tuples.iter().map(|t| t.values()).collect())
                    .unwrap_or_default(),
            );
            let table = sorted(
                [ap, am]
                    .iter()
                    .flat_map(|&a| {
                        family_table()
                            .iter()
                            .filter_map(move |f| f.evaluate_f64(&pv, a, kf).ok())
                    })
                    .collect(),
            );
            let equal = solver.len() == table.len()
                && solver
                    .iter()
                    .zip(&table)
                    .all(|(s, t)| s.iter().zip(t).all(|(x, y)| (x - y).abs() <= SET_TOLERANCE));
            if !equal {
                let extra: Vec<_> = solver
                    .iter()
                    .filter(|s| {
                        !table
                            .iter()
                            .any(|t| s.iter().zip(t).all(|(x, y)| (x - y).abs() <= SET_TOLERANCE))
                    })
                    .collect();
                mismatches.push(format!(
                    "{} k={k}: solver {} vs table {}, unmatched {extra:?}",
                    preset.name(),
                    solver.len(),
                    table.len()
                ));
            }
        }
    }
    let detail = if mismatches.is_empty() {
        format!("{cases} cases equal")
    } else {
        format!(
            "{}/{cases} cases differ; {}",
            mismatches.len(),
            mismatches.join("; ")
        )
    };
    outcome(mismatches.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let grid = grid();
    let mut worst_scaled = 0.0f64;
    let mut worst_mask = 0.0f64;
    let mut riccati_fail = Vec::new();
    let mut fd_fail = Vec::new();
    let mut worst_fd = 0.0f64;
    let mut count = 0;
    for preset in Preset::ALL {
        let pv = RationalParams::preset(preset).to_f64();
        for p in printed_catalogue() {
            count += 1;
            let label = format!("{}:u{}", preset.name(), p.index);
            let Ok(sol) = p.solution(branch_k(p.branch), &pv) else {
                riccati_fail.push(label);
                continue;
            };
            let agreement = compare_residuals(&sol, &grid, FD_STEP);
            let scaled = agreement.riccati.scaled();
            worst_scaled = worst_scaled.max(scaled);
            worst_mask = worst_mask.max(agreement.riccati.masked_fraction);
            if scaled >= RICCATI_SCALED_TOLERANCE
                || agreement.riccati.masked_fraction >= MAX_MASKED_FRACTION
            {
                riccati_fail.push(label.clone());
            }
            worst_fd = worst_fd.max(agreement.max_abs_difference);
            if agreement.max_abs_difference > FD_AGREEMENT_TOLERANCE
                || agreement.masked_fraction >= MAX_MASKED_FRACTION
            {
                fd_fail.push(label);
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = riccati_fail.is_empty() && fd_fail.is_empty() && elapsed < NUMERIC_BUDGET;
    outcome(
        pass,
        format!(
            "{count} solutions; riccati worst scaled {worst_scaled:.2e} (mask {worst_mask:.3}), failing {riccati_fail:?}; \
             fd worst |diff| {worst_fd:.2e}, failing {}/{count} {fd_fail:?}; {elapsed:.2?}",
            fd_fail.len()
        ),
    )
}

/// Every family on every branch at both roots of `A`, for every preset.
fn certified_solutions() -> Vec<(String, ClosedFormSolution)> {
    let mut out = Vec::new();
    for preset in Preset::ALL {
        let pv = RationalParams::preset(preset).to_f64();
        let Ok((ap, am)) = pv.roots() else { continue };
        for f in family_table() {
            for branch in Branch::ALL {
                if branch == Branch::Rational {
                    if let Ok(sol) = rational_limit(f, &pv) {
                        out.push((format!("{}:f{}:{branch}", preset.name(), f.id), sol));
                    }
                    continue;
                }
                for (tag, a) in [("+", ap), ("-", am)] {
                    if let Ok(sol) = closed_form_at_root(f, branch, branch_k(branch), &pv, a) {
                        out.push((format!("{}:f{}{tag}:{branch}", preset.name(), f.id), sol));
                    }
                }
            }
        }
    }
    out
}

fn unmasked_points(sol: &ClosedFormSolution, eps: f64, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(TRAVELING_WAVE_SAMPLES);
    while pts.len() < TRAVELING_WAVE_SAMPLES {
        let x = rng.gen_range(-10.0..=10.0);
        let t = rng.gen_range(0.0..=1.0);
        let clear = |xi: f64| sol.pole_distance(xi) > 2.0 * eps;
        if clear(sol.xi(x, t + TRAVELING_WAVE_DELTA))
            && clear(sol.xi(x + sol.lambda * TRAVELING_WAVE_DELTA, t))
        {
            pts.push((x, t));
        }
    }
    pts
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = (0.0f64, String::new());
    let mut failures = Vec::new();
    let sols = certified_solutions();
    for (label, sol) in &sols {
        let eps = sol.default_epsilon();
        let pts = unmasked_points(sol, eps, &mut rng);
        match traveling_wave_check(sol, TRAVELING_WAVE_DELTA, &pts, eps) {
            Ok(d) => {
                if d > worst.0 {
                    worst = (d, label.clone());
                }
                if d > TRAVELING_WAVE_TOLERANCE {
                    failures.push(label.clone());
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} solutions x {TRAVELING_WAVE_SAMPLES} points, worst {:.2e} {}, failing {failures:?}",
            sols.len(),
            worst.0,
            worst.1
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for branch in Branch::FUNCTIONS {
        let ks: &[f64] = match branch {
            Branch::Tan | Branch::Cot => &[0.25, 0.5, 1.0],
            Branch::Rational => &[0.0],
            _ => &[-0.25, -0.5, -1.0],
        };
        for &k in ks {
            let poles = branch.phi_poles(k);
            let clearance = branch_clearance(k);
            let xis: Vec<f64> = std::iter::repeat_with(|| rng.gen_range(-10.0..=10.0))
                .filter(|&xi| clear_of(&poles, xi, clearance))
                .take(1000)
                .collect();
            match branch_check(branch, k, &xis) {
                Ok(d) => {
                    worst = worst.max(d);
                    if d > BRANCH_TOLERANCE {
                        failures.push(format!("{branch} k={k}: {d:.2e}"));
                    }
                }
                Err(e) => failures.push(format!("{branch} k={k}: {e}")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("5 branches, worst {worst:.2e}, failing {failures:?}"),
    )
}

fn criterion_10() -> Outcome {
    let grid = grid();
    let u6 = fkdv_core::closed_form::printed(6).expect("u6 is catalogued");
    let mut min_perturbed = f64::INFINITY;
    for preset in Preset::ALL {
        let pv = RationalParams::preset(preset).to_f64();
        let Ok(sol) = u6.solution(branch_k(u6.branch), &pv) else {
            return outcome(false, format!("{}:u6 unavailable", preset.name()));
        };
        let r = pde_residual_riccati(&sol.with_lambda(sol.lambda + 1.0), &grid).max_abs_residual;
        min_perturbed = min_perturbed.min(r);
    }
    let mut swapped = family(1).expect("family 1").clone();
    std::mem::swap(&mut swapped.a2, &mut swapped.b2);
    let cert = verify_family(&swapped);
    let swap_breaks = !cert.verified();
    outcome(
        min_perturbed > PERTURBED_RESIDUAL_FLOOR && swap_breaks,
        format!(
            "u6 lambda+1 smallest residual {min_perturbed:.2e}; a2/b2 swap fails at powers {:?}",
            cert.failing_powers()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u8, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut unexpected = 0;
    for (id, run) in criteria {
        let o = run();
        let expected_fail = EXPECTED_FAIL.contains(&id);
        let note = match (o.pass, expected_fail) {
            (false, true) => " [expected failure]",
            (true, true) => " [expected failure now passes]",
            _ => "",
        };
        if o.pass == expected_fail {
            unexpected += 1;
        }
        println!(
            "criterion {id:>2}: {}{note}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria deviate from the expected outcome");
        ExitCode::FAILURE
    }
}
