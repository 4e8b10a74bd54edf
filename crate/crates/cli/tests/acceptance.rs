//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use nonlocal_cast::cloning::{bell_diagonal, local_sd_map, werner, ClonerFamily, ClonerSpec};
use nonlocal_cast::criteria::{
    chsh_value, correlation_spectrum, f_n_closed, f_n_direct, lhs_margin, m_value, optimize_f_n, report,
};
use nonlocal_cast::oracle::{build_si_isometry, clone_fidelity, crosscheck_reduced_maps};
use nonlocal_cast::sampling::{random_qubit, random_settings, seeded, StateSampler};
use nonlocal_cast::verify::{linear_grid, sample_hypothesis_states, verify_theorem, Theorem, VerifyConfig};
use nonlocal_cast::{Bloch2Q, Error};

type Outcome = Result<String, String>;

/// Name, check and optional time budget.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// `{0.01, 0.02, …}` below `cap`, then `cap`.
fn fine_mu_grid(cap: f64) -> Vec<f64> {
    let mut g: Vec<f64> = linear_grid(0.01, cap, 0.01).unwrap().into_iter().filter(|m| *m < cap - 1e-12).collect();
    g.push(cap);
    g
}

fn horodecki() -> Outcome {
    let s = chsh_value(&Bloch2Q::singlet());
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if m_value(&werner(mid).unwrap()) > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    check(
        (s - 2.0 * SQRT_2).abs() <= 1e-10 && (p - FRAC_1_SQRT_2).abs() <= 1e-9,
        format!("S(singlet) = {s:.15}, Werner threshold p = {p:.12}"),
    )
}

/// Post-cloning eigenvalue sums checked directly from the maps, independent
/// of the bound-report bookkeeping.
fn scaling_suite(theorem: Theorem, count: usize, grid: &[f64], cap: f64, upper_post: f64) -> Outcome {
    let family = theorem.family();
    let (power, terms) = match theorem {
        Theorem::T1 => (4, 2),
        Theorem::T2 => (2, 2),
        Theorem::T3 => (4, 3),
        _ => (2, 3),
    };
    let cfg = VerifyConfig { count, seed: 2024, mu_grid: Some(grid.to_vec()), mu_cap: Some(cap), ..Default::default() };
    let suite = verify_theorem(theorem, &cfg).map_err(|e| e.to_string())?;
    let (states, _) = sample_hypothesis_states(theorem, &cfg).map_err(|e| e.to_string())?;
    let mut bad = 0usize;
    let mut worst_residual = 0.0f64;
    let mut max_post = 0.0f64;
    let mut checks = 0usize;
    for s in &states {
        let pre: f64 = correlation_spectrum(s)[..terms].iter().sum();
        for &mu in grid {
            let spec = match ClonerSpec::from_mu(family, mu, Some(cap)) {
                Ok(spec) => spec,
                Err(Error::InvalidSpec(m)) if m.contains("restricted") => continue,
                Err(e) => return Err(e.to_string()),
            };
            checks += 1;
            // the map by hand: {μx, μy, μ²T} (local) or {μx, μy, μT} (nonlocal)
            let mu = spec.mu();
            let t_factor = if power == 4 { mu * mu } else { mu };
            let post: f64 = correlation_spectrum(&Bloch2Q::new(s.x * mu, s.y * mu, s.t * t_factor))[..terms].iter().sum();
            let k = mu.powi(power);
            let residual = (post - k * pre).abs();
            worst_residual = worst_residual.max(residual);
            let value = if terms == 2 { post } else { post.sqrt() };
            max_post = max_post.max(value);
            if residual > 1e-12
                || post < k - 1e-12
                || post > terms as f64 * k + 1e-12
                || value > upper_post + 1e-12
                || value > 1.0
            {
                bad += 1;
            }
        }
    }
    check(
        bad == 0 && suite.passed() && suite.states == count,
        format!(
            "{} states x {} mu: {checks} checks, {bad} counterexamples (suite {}), max post {max_post:.12}, max scaling residual {worst_residual:.1e}",
            states.len(),
            grid.len(),
            suite.counterexamples
        ),
    )
}

fn theorem1() -> Outcome {
    scaling_suite(Theorem::T1, 10_000, &fine_mu_grid(FRAC_1_SQRT_2), FRAC_1_SQRT_2, 0.5)
}

fn theorem2() -> Outcome {
    scaling_suite(Theorem::T2, 10_000, &fine_mu_grid(FRAC_1_SQRT_2), FRAC_1_SQRT_2, 1.0)
}

fn theorems3_4() -> Outcome {
    let cap4 = 1.0 / 6f64.sqrt();
    let local = scaling_suite(Theorem::T3, 10_000, &[FRAC_1_SQRT_2], FRAC_1_SQRT_2, 3f64.sqrt() / 2.0);
    let nonlocal = scaling_suite(Theorem::T4, 10_000, &[cap4], cap4, FRAC_1_SQRT_2);
    // lower ends of the F₃ intervals: √(μ⁴) = 1/2 and √(μ²) = 1/√6
    match (local, nonlocal) {
        (Ok(a), Ok(b)) => Ok(format!("local mu=1/sqrt2: {a}; nonlocal mu=1/sqrt6: {b}")),
        (a, b) => Err(format!("local: {a:?}; nonlocal: {b:?}")),
    }
}

fn theorem5() -> Outcome {
    let grid = fine_mu_grid(FRAC_1_SQRT_2);
    let mut worst = f64::INFINITY;
    let mut n = 0;
    for p in linear_grid(0.0, 1.0, 1e-3).unwrap() {
        let s = werner(p).unwrap();
        for &mu in &grid {
            let spec = ClonerSpec::from_mu(ClonerFamily::LocalSd, mu, None).unwrap();
            worst = worst.min(lhs_margin(&local_sd_map(&s, &spec).unwrap()));
            n += 1;
        }
    }
    check(worst >= -1e-12, format!("{n} cloned Werner states, min 1 - (|x|^2 + 2 sqrt(eta_max)) = {worst:.2e}"))
}

fn theorem6() -> Outcome {
    let grid = fine_mu_grid(FRAC_1_SQRT_2);
    let axis = linear_grid(-1.0, 1.0, 0.05).unwrap();
    let (mut physical, mut skipped, mut violations, mut n) = (0, 0, 0, 0);
    let mut worst = f64::INFINITY;
    for &c1 in &axis {
        for &c2 in &axis {
            for &c3 in &axis {
                let Ok(s) = bell_diagonal(c1, c2, c3) else {
                    skipped += 1;
                    continue;
                };
                physical += 1;
                for &mu in &grid {
                    let spec = ClonerSpec::from_mu(ClonerFamily::LocalSd, mu, None).unwrap();
                    let m = lhs_margin(&local_sd_map(&s, &spec).unwrap());
                    worst = worst.min(m);
                    n += 1;
                    if m < -1e-12 {
                        violations += 1;
                    }
                }
            }
        }
    }
    check(
        violations == 0,
        format!("{physical} physical triples ({skipped} skipped), {n} checks, {violations} violations, min margin {worst:.2e}"),
    )
}

fn oracle_agreement() -> Outcome {
    let v = build_si_isometry(2).map_err(|e| e.to_string())?;
    let spec = ClonerSpec::local_si();
    let mut rng = seeded(7);
    let mut worst_dev = 0.0f64;
    let mut worst_fit = 0.0f64;
    let mut unmatched = 0;
    for _ in 0..100 {
        let s = StateSampler::default().bloch(&mut rng);
        let r = crosscheck_reduced_maps(&s, &spec).map_err(|e| e.to_string())?;
        let best = r
            .pairs
            .iter()
            .filter(|p| p.matches)
            .map(|p| {
                let fit = p.vector_shrink.map_or(0.0, |a| (a - 2.0 / 3.0).abs());
                (p.deviation, fit)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((dev, fit)) => {
                worst_dev = worst_dev.max(dev);
                worst_fit = worst_fit.max(fit);
            }
            None => unmatched += 1,
        }
    }
    let mut worst_fid = 0.0f64;
    for _ in 0..1000 {
        let (f0, f1) = clone_fidelity(&random_qubit(&mut rng), &v).map_err(|e| e.to_string())?;
        worst_fid = worst_fid.max((f0 - 5.0 / 6.0).abs()).max((f1 - 5.0 / 6.0).abs());
    }
    check(
        unmatched == 0 && worst_dev <= 1e-8 && worst_fit <= 1e-8 && worst_fid <= 1e-9 && v.residual <= 1e-10,
        format!(
            "100 states: {unmatched} without a matching pair, max deviation {worst_dev:.1e}, |eta - 2/3| <= {worst_fit:.1e}; fidelity error {worst_fid:.1e}; isometry residual {:.1e}",
            v.residual
        ),
    )
}

fn steering_consistency() -> Outcome {
    let mut rng = seeded(8);
    let sampler = StateSampler::default();
    let (mut exceed, mut opt_fail, mut optimized) = (0, 0, 0);
    let mut worst_gap = 0.0f64;
    for _ in 0..1000 {
        let s = sampler.bloch(&mut rng);
        let eta = correlation_spectrum(&s);
        for n in [2usize, 3] {
            let closed = f_n_closed(&s, n).unwrap();
            for _ in 0..1000 {
                if f_n_direct(&s, &random_settings(n, &mut rng)).unwrap() > closed + 1e-9 {
                    exceed += 1;
                }
            }
            let nondegenerate = if n == 2 { eta[1] - eta[2] > 1e-9 } else { eta[2] > 1e-9 };
            if nondegenerate {
                optimized += 1;
                let gap = (optimize_f_n(&s, n).unwrap().value - closed).abs();
                worst_gap = worst_gap.max(gap);
                if gap > 1e-6 {
                    opt_fail += 1;
                }
            }
        }
    }
    check(
        exceed == 0 && opt_fail == 0,
        format!("{exceed} random settings above closed form; optimizer gap <= {worst_gap:.1e} on {optimized} non-degenerate cases"),
    )
}

fn ordering() -> Outcome {
    let mut rng = seeded(9);
    let sampler = StateSampler::default();
    let (mut chain, mut lhs, mut bell, mut steer) = (0, 0, 0, 0);
    for _ in 0..10_000 {
        let r = report(&sampler.bloch(&mut rng)).unwrap();
        bell += r.bell_nonlocal as usize;
        steer += r.steerable3 as usize;
        if (r.bell_nonlocal && !r.steerable3) || (r.steerable3 && !r.entangled) {
            chain += 1;
        }
        if r.lhs_unsteerable && r.steerable3 {
            lhs += 1;
        }
    }
    check(
        chain == 0 && lhs == 0,
        format!("10000 states ({bell} CHSH-violating, {steer} 3-steerable): {chain} chain violations, {lhs} LHS/steering clashes"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str, threads: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_nonlocal-cast"))
            .args(["verify-theorems", "--count", "300", "--seed", "42", "--out"])
            .arg(&path)
            .env("NONLOCAL_CAST_THREADS", threads)
            .stdout(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("exit status {status}"));
        }
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let a = run("a.csv", "1")?;
    let b = run("b.csv", "4")?;
    check(a == b && !a.is_empty(), format!("two runs, {} bytes each, identical = {}", a.len(), a == b))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("horodecki criterion", horodecki, Some(Duration::from_secs(1))),
        ("theorem 1 local CHSH", theorem1, Some(Duration::from_secs(10))),
        ("theorem 2 nonlocal CHSH", theorem2, None),
        ("theorems 3-4 F3", theorems3_4, None),
        ("theorem 5 Werner LHS", theorem5, Some(Duration::from_secs(5))),
        ("theorem 6 Bell-diagonal LHS", theorem6, None),
        ("oracle agreement (SI)", oracle_agreement, Some(Duration::from_secs(30))),
        ("steering functional consistency", steering_consistency, None),
        ("criteria ordering", ordering, None),
        ("determinism", determinism, None),
    ];
    let mut failures = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > b);
        let (tag, detail) = match &outcome {
            Ok(d) if !over => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over time budget {:?}", budget.unwrap())),
            Err(d) => ("FAIL", d.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {tag} [{name}] {detail} ({:.2}s)", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
