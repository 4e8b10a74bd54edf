
use nonlocal_cast::cloning::{apply, bell_diagonal, broadcast_pipeline, werner, Criterion};
use nonlocal_cast::criteria::{lhs_margin, report, NonlocalityReport};
use nonlocal_cast::oracle::{crosscheck_with_convention, DiscrepancyReport, GramConvention};
use nonlocal_cast::sampling::{seeded, StateSampler};
use nonlocal_cast::state_file::{read_state, write_state, StateFile};
use nonlocal_cast::verify::{verify_theorem, Theorem, TheoremResult, VerifyConfig};
use nonlocal_cast::{Bloch2Q, ClonerFamily, ClonerSpec, Error};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{
    CloneArgs, Cli, Command, ConventionArg, CriterionArg, EvalArgs, Format, Grid, OracleArgs, ScanArgs, StateFamily,
    VerifyArgs,
};
use crate::output::{emit, write_json, Cell, Table};
use crate::CliError;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs one subcommand. `Ok(1)` means the command ran but a check failed.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Clone(a) => clone_cmd(a),
        Command::VerifyTheorems(a) => verify(a),
        Command::Scan(a) => scan(a),
        Command::OracleCheck(a) => oracle_check(a),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Group {
    Chsh,
    F3,
    Lhs,
    Entanglement,
}

const REPORT_FIELDS: [(&str, Group); 10] = [
    ("m_value", Group::Chsh),
    ("chsh_s", Group::Chsh),
    ("bell_nonlocal", Group::Chsh),
    ("f2", Group::F3),
    ("f3", Group::F3),
    ("steerable3", Group::F3),
    ("lhs_margin", Group::Lhs),
    ("lhs_unsteerable", Group::Lhs),
    ("negativity", Group::Entanglement),
    ("entangled", Group::Entanglement),
];

fn shows(c: CriterionArg, g: Group) -> bool {
    match c {
        CriterionArg::All => true,
        CriterionArg::Chsh => g == Group::Chsh,
        CriterionArg::F3 => g == Group::F3,
        CriterionArg::Lhs => g == Group::Lhs,
    }
}

fn report_columns(c: CriterionArg, prefix: &str) -> Vec<String> {
    REPORT_FIELDS.iter().filter(|(_, g)| shows(c, *g)).map(|(n, _)| format!("{prefix}{n}")).collect()
}

fn report_cells(c: CriterionArg, s: &Bloch2Q, r: &NonlocalityReport) -> Vec<Cell> {
    REPORT_FIELDS
        .iter()
        .filter(|(_, g)| shows(c, *g))
        .map(|(name, _)| match *name {
            "m_value" => r.m_value.into(),
            "chsh_s" => r.chsh_s.into(),
            "bell_nonlocal" => r.bell_nonlocal.into(),
            "f2" => r.f2.into(),
            "f3" => r.f3.into(),
            "steerable3" => r.steerable3.into(),
            "lhs_margin" => lhs_margin(s).into(),
            "lhs_unsteerable" => r.lhs_unsteerable.into(),
            "negativity" => r.negativity.into(),
            _ => r.entangled.into(),
        })
        .collect()
}

fn make_spec(family: ClonerFamily, lambda: Option<f64>, mu_cap: Option<f64>) -> Result<ClonerSpec, CliError> {
    if family.is_state_dependent() {
        let lambda = lambda.ok_or_else(|| CliError::Usage(format!("--lambda is required for {family}")))?;
        Ok(ClonerSpec::new(family, lambda, mu_cap)?)
    } else if lambda.is_some() {
        Err(CliError::Usage(format!("--lambda does not apply to {family}")))
    } else {
        Ok(ClonerSpec::new(family, f64::NAN, mu_cap)?)
    }
}

fn spec_json(spec: &ClonerSpec) -> String {
    serde_json::to_string(spec).expect("spec serializes")
}

fn eval(a: &EvalArgs) -> Result<u8, CliError> {
    let s = read_state(&a.state)?;
    let r = report(&s)?;
    let mut table = Table::new(report_columns(a.criterion, ""));
    table.push(report_cells(a.criterion, &s, &r));
    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json => write_json(&table.to_json()[0], w),
        f => table.write(f, w),
    })?;
    Ok(0)
}

fn clone_cmd(a: &CloneArgs) -> Result<u8, CliError> {
    let criteria = match a.criterion {
        CriterionArg::Chsh => vec![Criterion::Chsh],
        CriterionArg::F3 => vec![Criterion::F3],
        CriterionArg::All => vec![Criterion::Chsh, Criterion::F3, Criterion::Entanglement],
        CriterionArg::Lhs => {
            return Err(CliError::Usage(
                "the LHS criterion certifies unsteerability and is not a broadcast target; use chsh, f3 or all".into(),
            ))
        }
    };
    let s = read_state(&a.state)?;
    let spec = make_spec(a.cloner.family, a.cloner.lambda, a.cloner.mu_cap)?;
    let outcomes = criteria
        .iter()
        .map(|c| broadcast_pipeline(&s, &spec, *c, a.oracle))
        .collect::<Result<Vec<_>, _>>()?;
    let post = outcomes[0].nonlocal_pair_state;
    if let Some(path) = &a.save_state {
        write_state(path, &post)?;
    }

    let mut table = Table::new([
        "criterion",
        "broadcast_achieved",
        "optimal_broadcast_achieved",
        "in_m_value",
        "in_f3",
        "in_negativity",
        "out_m_value",
        "out_f3",
        "out_negativity",
        "pair13_holds",
        "pair24_holds",
        "oracle_deviation",
    ]);
    table.comments.push(format!("nonlocal-cast {VERSION} cloner={}", spec_json(&spec)));
    for o in &outcomes {
        let local = o.local_pair_reports.map(|(p13, p24)| (o.criterion.holds(&p13), o.criterion.holds(&p24)));
        table.push(vec![
            serde_json::to_value(o.criterion).expect("criterion serializes").as_str().unwrap_or("").into(),
            o.broadcast_achieved.into(),
            o.optimal_broadcast_achieved.into(),
            o.input_report.m_value.into(),
            o.input_report.f3.into(),
            o.input_report.negativity.into(),
            o.nonlocal_pair_report.m_value.into(),
            o.nonlocal_pair_report.f3.into(),
            o.nonlocal_pair_report.negativity.into(),
            local.map(|l| l.0).into(),
            local.map(|l| l.1).into(),
            o.oracle_deviation.into(),
        ]);
    }
    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json => write_json(
            &json!({
                "spec": spec,
                "post_state": StateFile::from(&post),
                "outcomes": outcomes,
            }),
            w,
        ),
        f => table.write(f, w),
    })?;
    Ok(0)
}

fn sampler(ancilla_dim: usize) -> Result<StateSampler, CliError> {
    if ancilla_dim == 0 {
        return Err(CliError::Usage("--ancilla-dim must be positive".into()));
    }
    Ok(StateSampler::new(ancilla_dim))
}

fn grid_text(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let mut theorems: Vec<Theorem> = if a.theorems.is_empty() {
        Theorem::ALL.to_vec()
    } else {
        a.theorems.iter().map(|n| Theorem::from_number(*n)).collect::<Result<_, _>>()?
    };
    theorems.sort();
    theorems.dedup();
    let cfg = VerifyConfig {
        count: a.count,
        seed: a.seed,
        mu_grid: a.grid.map(|g| g.values()),
        mu_cap: a.mu_cap,
        werner_step: a.werner_step,
        bell_step: a.bell_step,
        sampler: sampler(a.ancilla_dim)?,
    };
    let results = theorems
        .par_iter()
        .map(|t| verify_theorem(*t, &cfg))
        .collect::<Result<Vec<TheoremResult>, _>>()?;

    let mut summary = Table::new([
        "theorem",
        "passed",
        "checks",
        "counterexamples",
        "states",
        "acceptance_rate",
        "skipped_states",
        "skipped_mu",
        "mu_cap",
        "max_post_value",
        "max_scaling_residual",
        "description",
    ]);
    for r in &results {
        summary.push(vec![
            r.theorem.to_string().into(),
            r.passed().into(),
            r.checks.into(),
            r.counterexamples.into(),
            r.states.into(),
            (r.draws > 0).then(|| r.acceptance_rate()).into(),
            r.skipped_states.into(),
            grid_text(&r.skipped_mu).into(),
            r.mu_cap.into(),
            r.max_post_value.into(),
            r.max_scaling_residual.into(),
            r.description.into(),
        ]);
    }
    emit(None, |w| match a.format {
        Format::Json => write_json(&serde_json::to_value(&results).map_err(std::io::Error::from)?, w),
        f => summary.write(f, w),
    })?;

    if let Some(path) = &a.out {
        worst_case_table(a, &results).write_csv_to(path)?;
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed()).map(|r| r.theorem.to_string()).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("verification failed: {}", failed.join(", "));
        Ok(1)
    }
}

fn worst_case_table(a: &VerifyArgs, results: &[TheoremResult]) -> Table {
    let mut t = Table::new([
        "theorem",
        "family",
        "case",
        "params",
        "mu",
        "lambda",
        "pre_value",
        "post_value",
        "lower",
        "upper",
        "scaling_residual",
        "margin",
        "passed",
    ]);
    t.comments.push(format!("nonlocal-cast {VERSION} verify-theorems"));
    t.comments.push(format!(
        "seed={} count={} ancilla_dim={} werner_step={} bell_step={}",
        a.seed, a.count, a.ancilla_dim, a.werner_step, a.bell_step
    ));
    for r in results {
        let cloner = json!({"family": r.theorem.family(), "mu_cap": r.mu_cap});
        t.comments.push(format!("{} cloner={cloner} mu_grid=[{}]", r.theorem, grid_text(&r.mu_grid)));
        for row in &r.worst {
            t.push(vec![
                row.theorem.to_string().into(),
                r.theorem.family().as_str().into(),
                row.case.into(),
                row.params.clone().into(),
                row.mu.into(),
                row.lambda.into(),
                row.pre_value.into(),
                row.post_value.into(),
                row.lower.into(),
                row.upper.into(),
                row.scaling_residual.into(),
                row.margin.into(),
                row.passed.into(),
            ]);
        }
    }
    t
}

impl Table {
    fn write_csv_to(&self, path: &std::path::Path) -> Result<(), CliError> {
        emit(Some(path), |w| self.write_csv(w))
    }
}

enum ScanPoint {
    Werner(f64),
    Bell(f64, f64, f64),
    Random(usize),
}

impl ScanPoint {
    fn cells(&self) -> Vec<Cell> {
        match *self {
            ScanPoint::Werner(p) => vec![p.into()],
            ScanPoint::Bell(a, b, c) => vec![a.into(), b.into(), c.into()],
            ScanPoint::Random(i) => vec![i.into()],
        }
    }
}

fn scan(a: &ScanArgs) -> Result<u8, CliError> {
    let spec = match a.cloner {
        Some(f) => Some(make_spec(f, a.lambda, a.mu_cap)?),
        None if a.lambda.is_some() || a.mu_cap.is_some() => {
            return Err(CliError::Usage("--lambda and --mu-cap need --cloner".into()));
        }
        None => None,
    };
    let default_grid = |start, stop, step| Grid { start, stop, step };
    let mut comments = vec![format!("nonlocal-cast {VERSION} scan")];
    let (param_columns, points): (Vec<&str>, Vec<(ScanPoint, Bloch2Q)>) = match a.family {
        StateFamily::Werner => {
            let grid = a.grid.unwrap_or(default_grid(0.0, 1.0, 0.01));
            comments.push(format!("family=werner grid={grid}"));
            let pts = grid
                .values()
                .into_iter()
                .map(|p| Ok((ScanPoint::Werner(p), werner(p)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            (vec!["p"], pts)
        }
        StateFamily::BellDiagonal => {
            let grid = a.grid.unwrap_or(default_grid(-1.0, 1.0, 0.1));
            let axis = grid.values();
            let mut pts = Vec::new();
            let mut skipped = 0usize;
            for &c1 in &axis {
                for &c2 in &axis {
                    for &c3 in &axis {
                        match bell_diagonal(c1, c2, c3) {
                            Ok(s) => pts.push((ScanPoint::Bell(c1, c2, c3), s)),
                            Err(Error::UnphysicalTriple { .. }) => skipped += 1,
                            Err(e) => return Err(e.into()),
                        }
                    }
                }
            }
            eprintln!("skipped {skipped} unphysical triples of {}", axis.len().pow(3));
            comments.push(format!("family=bell_diagonal grid={grid} skipped_unphysical={skipped}"));
            (vec!["c1", "c2", "c3"], pts)
        }
        StateFamily::Random => {
            let sampler = sampler(a.ancilla_dim)?;
            let mut rng = seeded(a.seed);
            comments.push(format!("family=random seed={} count={} ancilla_dim={}", a.seed, a.count, a.ancilla_dim));
            let pts = (0..a.count).map(|i| (ScanPoint::Random(i), sampler.bloch(&mut rng))).collect();
            (vec!["sample"], pts)
        }
    };
    comments.push(match &spec {
        Some(spec) => format!("cloner={}", spec_json(spec)),
        None => "cloner=none".into(),
    });

    let mut columns: Vec<String> = param_columns.iter().map(|s| s.to_string()).collect();
    columns.extend(report_columns(a.criterion, ""));
    if spec.is_some() {
        columns.extend(report_columns(a.criterion, "post_"));
    }
    let rows = points
        .par_iter()
        .map(|(point, s)| -> Result<Vec<Cell>, CliError> {
            let mut row = point.cells();
            row.extend(report_cells(a.criterion, s, &report(s)?));
            if let Some(spec) = &spec {
                let post = apply(s, spec)?;
                row.extend(report_cells(a.criterion, &post, &report(&post)?));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table = Table { comments, columns, rows };
    emit(a.out.as_deref(), |w| table.write(a.format, w))?;
    Ok(0)
}

struct OraclePoint {
    convention: Option<GramConvention>,
    lambda: Option<f64>,
}

fn oracle_check(a: &OracleArgs) -> Result<u8, CliError> {
    let family = a.family;
    let sampler = sampler(a.ancilla_dim)?;
    let mut rng = seeded(a.seed);
    let states: Vec<Bloch2Q> = (0..a.count).map(|_| sampler.bloch(&mut rng)).collect();
    let primary = if family.is_local() { "14" } else { "12" };

    let points: Vec<OraclePoint> = if family.is_state_dependent() {
        let conventions = match a.convention {
            ConventionArg::BhStandard => vec![GramConvention::BhStandard],
            ConventionArg::PaperLiteral => vec![GramConvention::PaperLiteral],
            ConventionArg::Both => vec![GramConvention::BhStandard, GramConvention::PaperLiteral],
        };
        let grid = a.grid.unwrap_or(if family.is_local() {
            Grid { start: 0.0, stop: 0.5, step: 0.05 }
        } else {
            Grid { start: 0.0, stop: 0.25, step: 0.025 }
        });
        let lambdas = grid.values();
        conventions
            .iter()
            .flat_map(|c| lambdas.iter().map(|l| OraclePoint { convention: Some(*c), lambda: Some(*l) }))
            .collect()
    } else {
        if a.grid.is_some() {
            return Err(CliError::Usage(format!("{family} has no λ grid")));
        }
        vec![OraclePoint { convention: None, lambda: None }]
    };

    let rows = points
        .par_iter()
        .map(|pt| oracle_row(family, a.mu_cap, pt, &states, primary))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new([
        "convention",
        "lambda",
        "mu",
        "status",
        "gram_min_eigenvalue",
        "machine_dim",
        "isometry_residual",
        "matching_pairs",
        "max_deviation_primary",
        "max_cross_symmetry",
    ]);
    table.comments.push(format!(
        "nonlocal-cast {VERSION} oracle-check family={family} seed={} count={} primary_pair={primary}",
        a.seed, a.count
    ));
    let mut failed = false;
    for (row, ok) in rows {
        failed |= !ok;
        table.push(row);
    }
    emit(a.output.out.as_deref(), |w| table.write(a.output.format, w))?;
    // state-dependent agreement is informational; universal cloners must match
    if failed && !family.is_state_dependent() {
        eprintln!("oracle disagrees with the closed-form {family} map");
        return Ok(1);
    }
    Ok(0)
}

fn oracle_row(
    family: ClonerFamily,
    mu_cap: f64,
    pt: &OraclePoint,
    states: &[Bloch2Q],
    primary: &str,
) -> Result<(Vec<Cell>, bool), CliError> {
    let conv_cell: Cell = pt.convention.map(|c| c.as_str()).into();
    let spec = match pt.lambda {
        Some(l) => ClonerSpec::new(family, l, Some(mu_cap)),
        None => ClonerSpec::new(family, f64::NAN, None),
    };
    let status_row = |mu: Cell, status: &str, min: Cell| {
        vec![
            conv_cell.clone(),
            pt.lambda.into(),
            mu,
            status.into(),
            min,
            Cell::Missing,
            Cell::Missing,
            Cell::Missing,
            Cell::Missing,
            Cell::Missing,
        ]
    };
    let spec = match spec {
        Ok(s) => s,
        Err(Error::InvalidSpec(msg)) if msg.contains("restricted") => {
            return Ok((status_row(Cell::Missing, "excluded", Cell::Missing), true));
        }
        Err(Error::InvalidSpec(msg)) if msg.contains("mu_cap") && msg.starts_with('μ') => {
            return Ok((status_row(Cell::Missing, "over_cap", Cell::Missing), true));
        }
        Err(e) => return Err(e.into()),
    };
    let convention = pt.convention.unwrap_or(GramConvention::BhStandard);
    let mut reports: Vec<DiscrepancyReport> = Vec::with_capacity(states.len());
    for s in states {
        match crosscheck_with_convention(s, &spec, convention) {
            Ok(r) => reports.push(r),
            Err(Error::Unrealizable(min)) => {
                return Ok((status_row(spec.mu().into(), "unrealizable", min.into()), false));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut matching: Option<Vec<String>> = None;
    for r in &reports {
        matching = Some(match matching {
            None => r.matching_pairs.clone(),
            Some(m) => m.into_iter().filter(|p| r.matching_pairs.contains(p)).collect(),
        });
    }
    let max = |f: &dyn Fn(&DiscrepancyReport) -> f64| reports.iter().map(f).fold(None, |a: Option<f64>, v| Some(a.map_or(v, |a| a.max(v))));
    let primary_dev = max(&|r| r.pair(primary).map_or(f64::NAN, |p| p.deviation));
    let residual = max(&|r| r.isometry_residual);
    let ok = reports.iter().all(|r| r.pair(primary).is_some_and(|p| p.matches) && r.isometry_residual <= 1e-10);
    let row = vec![
        conv_cell,
        pt.lambda.into(),
        spec.mu().into(),
        "ok".into(),
        Cell::Missing,
        reports.first().map(|r| r.machine_dim).into(),
        residual.into(),
        matching.map(|m| m.join(" ")).into(),
        primary_dev.into(),
        max(&|r| r.cross_symmetry).into(),
    ];
    Ok((row, ok))
}

