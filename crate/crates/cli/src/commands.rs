use std::path::Path;

use kummer_core::distributions::{Beta, BetaParams, GammaParams, KummerParams, RngStream};
use kummer_core::transform::constants_from_params;
use kummer_core::verify::{
    check_confluent_ode, check_gamma_ode, check_growth_dichotomy, check_kummer_ode,
    check_regression_identities, check_transform_identities, fit_from_sample, linspace,
    run_independence, run_regression, sample_chunked, sample_x, ConfluentBranch,
    EquationResiduals, GrowthReport, MonteCarlo, ResidualReport, XLaw, DEFAULT_K_BINS,
    DEFAULT_MIN_BIN_COUNT, DEFAULT_Q_BINS,
};
use serde::Serialize;

use crate::args::{Command, FitArgs, GridArgs, ParamArgs, SampleArgs, SampleLaw, StatArgs, XLawArg};
use crate::config::{
    check_common, path_string, reject_constants, resolve_ab, resolve_abc, CliError, CliResult,
    RunConfig,
};
use crate::output::{to_value, Cell, Outcome, Table};

const S_GRID: (f64, f64) = (-5.0, -0.1);
const TRICOMI_GRID: (f64, f64) = (0.5, 20.0);
const KUMMER_M_GRID: (f64, f64) = (0.1, 10.0);
const GROWTH_GRID: (f64, f64, usize) = (5.0, 60.0, 12);

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Sample(a) => sample(a),
        Command::CheckIndependence(a) => check_independence(a),
        Command::CheckRegression(a) => check_regression(a),
        Command::CheckIdentities(a) => check_identities(a),
        Command::CheckOde(a) => check_ode(a),
        Command::Fit(a) => fit(a),
    }
}

fn required(v: Option<f64>, flag: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}

/// `(X law, Y law)` for the statistical commands, validated before sampling.
fn pair_laws(law: XLawArg, p: &ParamArgs, cfg: &mut RunConfig) -> CliResult<(XLaw, GammaParams)> {
    match law {
        XLawArg::Kummer => {
            cfg.law = Some("kummer".into());
            let (a, b, c) = resolve_abc(p, cfg)?;
            let x = KummerParams::new(a, b, c)?;
            Ok((XLaw::Kummer(x), GammaParams::new(b, c)?))
        }
        XLawArg::Gamma => {
            cfg.law = Some("gamma".into());
            reject_constants(p, "gamma")?;
            let (a, b, c) = (required(p.a, "--a")?, required(p.b, "--b")?, required(p.c, "--c")?);
            (cfg.a, cfg.b, cfg.c) = (Some(a), Some(b), Some(c));
            Ok((XLaw::Gamma(GammaParams::new(a, c)?), GammaParams::new(b, c)?))
        }
    }
}

fn monte_carlo(cfg: &RunConfig) -> MonteCarlo {
    MonteCarlo::new(cfg.seed).with_streams(cfg.streams)
}

#[derive(Serialize)]
struct SampleReport<'a> {
    law: &'a str,
    n: usize,
    columns: Vec<Column<'a>>,
}

#[derive(Serialize)]
struct Column<'a> {
    name: &'static str,
    values: &'a [f64],
}

fn sample(args: &SampleArgs) -> CliResult<Outcome> {
    check_common(&args.common, Some(args.n))?;
    let mut cfg = RunConfig::new("sample", &args.common);
    cfg.n = Some(args.n);
    let p = &args.params;
    let stream = RngStream::new(cfg.seed, 0);
    let (law, cols): (&str, Vec<(&'static str, Vec<f64>)>) = match args.law {
        SampleLaw::Kummer => {
            let (a, b, c) = resolve_abc(p, &mut cfg)?;
            let x = XLaw::Kummer(KummerParams::new(a, b, c)?);
            ("kummer", vec![("x", sample_x(&x, args.n, &stream, cfg.streams)?)])
        }
        SampleLaw::Gamma => {
            reject_constants(p, "gamma")?;
            let (a, c) = (required(p.a, "--a")?, required(p.c, "--c")?);
            (cfg.a, cfg.c) = (Some(a), Some(c));
            let x = XLaw::Gamma(GammaParams::new(a, c)?);
            ("gamma", vec![("x", sample_x(&x, args.n, &stream, cfg.streams)?)])
        }
        SampleLaw::Beta => {
            let (a, b) = resolve_ab(p, &mut cfg)?;
            let law = Beta::new(BetaParams::new(a, b)?);
            let u = sample_chunked(args.n, &stream, cfg.streams, |len, s| law.sample(len, s))?;
            ("beta", vec![("u", u)])
        }
        SampleLaw::Pair => {
            let (x, y) = pair_laws(XLawArg::Kummer, p, &mut cfg)?;
            let s = monte_carlo(&cfg).sample(&x, &y, args.n)?;
            ("pair", vec![("x", s.x), ("y", s.y), ("u", s.u), ("v", s.v)])
        }
    };
    cfg.law = Some(law.into());

    let mut table = Table::new(cols.iter().map(|c| c.0).collect());
    for i in 0..args.n {
        table.push(cols.iter().map(|c| Cell::F(c.1[i])).collect());
    }
    let report = to_value(&SampleReport {
        law,
        n: args.n,
        columns: cols.iter().map(|(name, v)| Column { name, values: v }).collect(),
    })?;
    Ok(Outcome {
        config: cfg,
        report,
        passed: None,
        table,
    })
}

fn check_independence(args: &StatArgs) -> CliResult<Outcome> {
    check_common(&args.common, Some(args.n))?;
    let mut cfg = RunConfig::new("check-independence", &args.common);
    let bins = args.bins.unwrap_or(DEFAULT_K_BINS);
    (cfg.n, cfg.bins) = (Some(args.n), Some(bins));
    let (x, y) = pair_laws(args.law, &args.params, &mut cfg)?;
    let r = run_independence(&x, &y, args.n, &monte_carlo(&cfg), bins)?;

    let mut table = Table::new(vec!["test", "statistic", "dof", "p_value"]);
    table.push(vec!["chi2_independence".into(), r.chi2_stat.into(), r.dof.into(), r.p_value.into()]);
    for (name, ks) in [("ks_u", r.ks_u), ("ks_v", r.ks_v)] {
        if let Some(ks) = ks {
            table.push(vec![name.into(), ks.stat.into(), Cell::Empty, ks.p_value.into()]);
        }
    }
    Ok(Outcome {
        config: cfg,
        report: to_value(&r)?,
        passed: Some(r.passed),
        table,
    })
}

fn check_regression(args: &StatArgs) -> CliResult<Outcome> {
    check_common(&args.common, Some(args.n))?;
    let mut cfg = RunConfig::new("check-regression", &args.common);
    let bins = args.bins.unwrap_or(DEFAULT_Q_BINS);
    (cfg.n, cfg.bins) = (Some(args.n), Some(bins));
    let (x, y) = pair_laws(args.law, &args.params, &mut cfg)?;
    let r = run_regression(&x, &y, args.n, &monte_carlo(&cfg), bins, DEFAULT_MIN_BIN_COUNT)?;

    let mut table = Table::new(vec![
        "bin", "count", "v_lo", "v_hi", "v_center", "u_mean", "u_se", "z_u", "inv_u_mean",
        "inv_u_se", "z_inv_u", "one_minus_u_mean", "one_minus_u_se", "one_minus_u_sq_mean",
        "one_minus_u_sq_se",
    ]);
    for b in &r.bins {
        table.push(vec![
            b.index.into(),
            b.count.into(),
            b.v_lo.into(),
            b.v_hi.into(),
            b.v_center.into(),
            b.u.mean.into(),
            b.u.se.into(),
            b.z_u.into(),
            b.inv_u.mean.into(),
            b.inv_u.se.into(),
            b.z_inv_u.into(),
            b.one_minus_u.mean.into(),
            b.one_minus_u.se.into(),
            b.one_minus_u_sq.mean.into(),
            b.one_minus_u_sq.se.into(),
        ]);
    }
    Ok(Outcome {
        config: cfg,
        report: to_value(&r)?,
        passed: Some(r.passed),
        table,
    })
}

fn s_grid(points: usize) -> CliResult<Vec<f64>> {
    if points < 2 {
        return Err(CliError::Usage(format!("--bins must be at least 2 grid points, got {points}")));
    }
    Ok(linspace(S_GRID.0, S_GRID.1, points))
}

fn residual_table() -> Table {
    Table::new(vec!["group", "equation", "point", "lhs", "rhs", "residual", "tolerance"])
}

fn push_equation(table: &mut Table, group: &str, e: &EquationResiduals) {
    for r in &e.rows {
        table.push(vec![
            group.into(),
            e.name.as_str().into(),
            r.s.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.residual.into(),
            e.tolerance.into(),
        ]);
    }
}

fn push_report(table: &mut Table, group: &str, r: &ResidualReport) {
    for e in &r.equations {
        push_equation(table, group, e);
    }
}

#[derive(Serialize)]
struct IdentitiesReport {
    regression_identities: ResidualReport,
    transform_identities: ResidualReport,
    passed: bool,
}

fn check_identities(args: &GridArgs) -> CliResult<Outcome> {
    check_common(&args.common, None)?;
    let mut cfg = RunConfig::new("check-identities", &args.common);
    cfg.law = Some("kummer".into());
    cfg.bins = Some(args.bins);
    let (a, b, c) = resolve_abc(&args.params, &mut cfg)?;
    let p = KummerParams::new(a, b, c)?;
    let grid = s_grid(args.bins)?;
    let reg = check_regression_identities(&p, &grid)?;
    let tr = check_transform_identities(&p, &grid)?;

    let mut table = residual_table();
    push_report(&mut table, "regression_identities", &reg);
    push_report(&mut table, "transform_identities", &tr);
    let passed = reg.passed && tr.passed;
    let report = IdentitiesReport {
        regression_identities: reg,
        transform_identities: tr,
        passed,
    };
    Ok(Outcome {
        config: cfg,
        report: to_value(&report)?,
        passed: Some(passed),
        table,
    })
}

#[derive(Serialize)]
struct OdeReport {
    kummer_ode: ResidualReport,
    /// Absent when `a <= 1`, where the regression constants are undefined.
    gamma_ode: Option<ResidualReport>,
    /// `U(a, 1-b, t)` and `M(a, 1-b, t)`, the functions behind the Kummer
    /// Laplace transform.
    confluent: Vec<EquationResiduals>,
    /// Reported, not gated.
    growth: GrowthReport,
    passed: bool,
}

fn check_ode(args: &GridArgs) -> CliResult<Outcome> {
    check_common(&args.common, None)?;
    let mut cfg = RunConfig::new("check-ode", &args.common);
    cfg.law = Some("kummer".into());
    cfg.bins = Some(args.bins);
    let (a, b, c) = resolve_abc(&args.params, &mut cfg)?;
    let p = KummerParams::new(a, b, c)?;
    let grid = s_grid(args.bins)?;

    let mut with_zero = grid.clone();
    with_zero.push(0.0);
    let kummer_ode = check_kummer_ode(&p, &with_zero)?;
    let gamma_ode = if a > 1.0 && b > 0.0 {
        let rc = constants_from_params(a, b)?;
        Some(check_gamma_ode(&GammaParams::new(b, c)?, &grid, &rc)?)
    } else {
        None
    };
    let bc = 1.0 - b;
    let confluent = vec![
        check_confluent_ode(
            ConfluentBranch::Tricomi,
            a,
            bc,
            &linspace(TRICOMI_GRID.0, TRICOMI_GRID.1, args.bins),
        )?,
        check_confluent_ode(
            ConfluentBranch::Kummer,
            a,
            bc,
            &linspace(KUMMER_M_GRID.0, KUMMER_M_GRID.1, args.bins),
        )?,
    ];
    let growth = check_growth_dichotomy(a, bc, &linspace(GROWTH_GRID.0, GROWTH_GRID.1, GROWTH_GRID.2))?;

    let mut table = residual_table();
    push_report(&mut table, "kummer_ode", &kummer_ode);
    if let Some(g) = &gamma_ode {
        push_report(&mut table, "gamma_ode", g);
    }
    for e in &confluent {
        push_equation(&mut table, "confluent", e);
    }
    let passed = kummer_ode.passed
        && gamma_ode.as_ref().is_none_or(|g| g.passed)
        && confluent.iter().all(|e| e.passed);
    let report = OdeReport {
        kummer_ode,
        gamma_ode,
        confluent,
        growth,
        passed,
    };
    Ok(Outcome {
        config: cfg,
        report: to_value(&report)?,
        passed: Some(passed),
        table,
    })
}

fn any_params(p: &ParamArgs) -> bool {
    [p.a, p.b, p.c, p.alpha, p.beta].iter().any(Option::is_some)
}

fn fit(args: &FitArgs) -> CliResult<Outcome> {
    let generated = args.input.is_none();
    check_common(&args.common, generated.then_some(args.n))?;
    let mut cfg = RunConfig::new("fit", &args.common);
    cfg.law = Some("kummer".into());
    let truth = if generated || any_params(&args.params) {
        let (a, b, c) = resolve_abc(&args.params, &mut cfg)?;
        Some(KummerParams::new(a, b, c)?)
    } else {
        None
    };
    let (u, v) = match &args.input {
        Some(path) => {
            cfg.input_path = Some(path_string(path));
            read_uv(path)?
        }
        None => {
            cfg.n = Some(args.n);
            let p = truth.expect("a generated sample has parameters");
            let y = GammaParams::new(p.b(), p.c())?;
            let s = monte_carlo(&cfg).sample(&XLaw::Kummer(p), &y, args.n)?;
            (s.u, s.v)
        }
    };
    let mut r = fit_from_sample(&u, &v)?;
    if let Some(t) = &truth {
        r = r.against(t);
    }

    let mut table = Table::new(vec!["quantity", "value", "se", "truth", "z"]);
    for (name, e) in [("a", r.a), ("b", r.b), ("c", r.c)] {
        table.push(vec![name.into(), e.value.into(), e.se.into(), e.truth.into(), e.z.into()]);
    }
    let m = &r.map_resolution;
    let truth_a = truth.map(|t| t.a());
    let truth_b = truth.map(|t| t.b());
    table.push(vec!["a_unshifted".into(), m.unshifted_a.into(), m.unshifted_a_se.into(), truth_a.into(), Cell::Empty]);
    table.push(vec!["b_unshifted".into(), m.unshifted_b.into(), m.unshifted_b_se.into(), truth_b.into(), Cell::Empty]);
    for (name, x) in [("alpha_hat", r.alpha_hat), ("beta_hat", r.beta_hat), ("mean_v", r.mean_v)] {
        table.push(vec![name.into(), x.into(), Cell::Empty, Cell::Empty, Cell::Empty]);
    }
    Ok(Outcome {
        config: cfg,
        passed: r.within_4_se,
        report: to_value(&r)?,
        table,
    })
}

/// The `u` and `v` columns of a CSV file; `#` lines are skipped.
fn read_uv(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let shown = path.display();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {shown}: {e}")))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Io(format!("{shown}: {e}")))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Usage(format!("{shown} has no `{name}` column")))
    };
    let (iu, iv) = (col("u")?, col("v")?);
    let (mut u, mut v) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
        let parse = |i: usize| -> CliResult<f64> {
            let field = rec.get(i).unwrap_or("").trim();
            field.parse().map_err(|_| {
                CliError::Usage(format!("{shown}: data row {}: `{field}` is not a number", line + 1))
            })
        };
        u.push(parse(iu)?);
        v.push(parse(iv)?);
    }
    Ok((u, v))
}
