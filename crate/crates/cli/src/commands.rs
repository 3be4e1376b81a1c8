//! Subcommand implementations. Each writes one `#` metadata line and then CSV
//! (or, for `verify`, the check report).

use std::io::Write;

use rayon::prelude::*;

use spherecap::channel::{self, ChannelSpec};
use spherecap::expect::{ExpectationEngine, RNG_ALGORITHM};
use spherecap::thresholds::{self, RootSpec, ThresholdResult};
use spherecap::verify::{self, Level};

use crate::format::{g, sink};
use crate::{check_n, engines, usage, Cli, CliError, CliResult, Command, Common, Kind, LevelArg, MethodArg};

/// Seed of the verification oracles when `--seed` is absent.
pub const DEFAULT_VERIFY_SEED: u64 = 20_240_917;

pub fn run(cli: &Cli) -> CliResult<()> {
    let c = &cli.common;
    match &cli.command {
        Command::Solve { n, kind } => solve(c, check_n(*n)?, *kind),
        Command::Table { dims } => table(c, dims.range()?.collect()),
        Command::MmseTable { dims } => mmse_table(c, dims.range()?.collect()),
        Command::Profile { n, radius, grid } => profile(c, check_n(*n)?, *radius, *grid),
        Command::MmseCurve { n, radius, grid } => mmse_curve(c, check_n(*n)?, radius, *grid),
        Command::Verify { level } => run_verify(c, *level),
        Command::Asymptotic => asymptotic(c),
    }
}

fn metadata(command: &str, common: &Common, engines: &[(&str, ExpectationEngine)], seed: Option<u64>) -> String {
    let engines = engines
        .iter()
        .map(|(label, e)| format!("{label}={e}"))
        .collect::<Vec<_>>()
        .join("; ");
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    format!(
        "# spherecap {} command={command} engines=[{engines}] seed={seed} rng={RNG_ALGORITHM} base={}\n",
        env!("CARGO_PKG_VERSION"),
        common.base.name()
    )
}

/// Write the metadata line, a header and the rows.
fn emit(common: &Common, meta: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut out = sink(common.out.as_deref())?;
    out.write_all(meta.as_bytes())?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

fn single_engine(common: &Common, command: &str) -> CliResult<Vec<(&'static str, ExpectationEngine)>> {
    if common.method == MethodArg::Both {
        return usage(format!(
            "`{command}` takes --method quad or mc; only `table` and `solve` accept both"
        ));
    }
    engines(common)
}

/// Numeric failures are reported per row; the run then exits 1.
fn finish(rows: &[Vec<String>], what: &str) -> CliResult<()> {
    let failed = rows.iter().filter(|r| !r.last().is_none_or(String::is_empty)).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{failed} {what} row(s) failed; see the error column"
        )))
    }
}

fn solve(common: &Common, n: usize, kind: Kind) -> CliResult<()> {
    if kind == Kind::Tanh && n != 1 {
        return usage("--kind tanh applies to n = 1 only");
    }
    let engines = engines(common)?;
    let spec = RootSpec::default();
    let rows: Vec<Vec<String>> = engines
        .iter()
        .map(|(label, e)| {
            let r = match kind {
                Kind::Capacity => thresholds::solve_rbar(n, &spec, e),
                Kind::Boxcar => thresholds::solve_rbar_alt(n, &spec, e),
                Kind::Tanh => thresholds::solve_rbar_n1_tanh(&spec),
                Kind::Mmse => thresholds::solve_rbar_mmse(n, &spec, e),
            };
            let kind = format!("{kind:?}").to_lowercase();
            match r {
                Ok(r) => vec![
                    n.to_string(),
                    kind,
                    g(r.value),
                    g(r.value / (n as f64).sqrt()),
                    g(r.residual),
                    g(r.bracket.0),
                    g(r.bracket.1),
                    r.iterations.to_string(),
                    label.to_string(),
                    String::new(),
                ],
                Err(err) => {
                    let mut row = vec![n.to_string(), kind];
                    row.extend(std::iter::repeat_n(String::new(), 6));
                    row.extend([label.to_string(), err.to_string()]);
                    row
                }
            }
        })
        .collect();
    emit(
        common,
        &metadata("solve", common, &engines, common.seed),
        &[
            "n",
            "kind",
            "value",
            "value_over_sqrt_n",
            "residual",
            "bracket_lo",
            "bracket_hi",
            "iterations",
            "method",
            "error",
        ],
        &rows,
    )?;
    finish(&rows, "solve")
}

fn rbar_row(n: usize, label: &str, r: spherecap::Result<ThresholdResult>) -> Vec<String> {
    let sqrt_n = (n as f64).sqrt();
    match r {
        Ok(r) => vec![
            n.to_string(),
            g(r.value),
            g(r.value / sqrt_n),
            g(sqrt_n),
            g(r.residual),
            label.to_string(),
            r.iterations.to_string(),
            String::new(),
        ],
        Err(e) => vec![
            n.to_string(),
            String::new(),
            String::new(),
            g(sqrt_n),
            String::new(),
            label.to_string(),
            String::new(),
            e.to_string(),
        ],
    }
}

fn table(common: &Common, ns: Vec<usize>) -> CliResult<()> {
    let engines = engines(common)?;
    let spec = RootSpec::default();
    let jobs: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..engines.len()).map(move |k| (n, k)))
        .collect();
    // rows are solved concurrently and collected back in (n, method) order
    let rows: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|&(n, k)| {
            let (label, e) = &engines[k];
            rbar_row(n, label, thresholds::solve_rbar(n, &spec, e))
        })
        .collect();
    emit(
        common,
        &metadata("table", common, &engines, common.seed),
        &[
            "n",
            "rbar",
            "rbar_over_sqrt_n",
            "sqrt_n",
            "residual",
            "method",
            "iterations",
            "error",
        ],
        &rows,
    )?;
    finish(&rows, "table")
}

fn mmse_table(common: &Common, ns: Vec<usize>) -> CliResult<()> {
    let engines = single_engine(common, "mmse-table")?;
    let e = &engines[0].1;
    let spec = RootSpec::default();
    let rows: Vec<Vec<String>> = ns
        .par_iter()
        .map(|&n| {
            let sqrt_n = (n as f64).sqrt();
            let both =
                thresholds::solve_rbar(n, &spec, e).and_then(|a| Ok((a, thresholds::solve_rbar_mmse(n, &spec, e)?)));
            match both {
                Ok((cap, mmse)) => {
                    let error = if mmse.value < cap.value {
                        String::new()
                    } else {
                        format!(
                            "ordering violated: rbar_mmse {} >= rbar {}",
                            g(mmse.value),
                            g(cap.value)
                        )
                    };
                    vec![n.to_string(), g(cap.value), g(mmse.value), g(sqrt_n), error]
                }
                Err(err) => vec![n.to_string(), String::new(), String::new(), g(sqrt_n), err.to_string()],
            }
        })
        .collect();
    emit(
        common,
        &metadata("mmse-table", common, &engines, common.seed),
        &["n", "rbar", "rbar_mmse", "sqrt_n", "error"],
        &rows,
    )?;
    finish(&rows, "mmse-table")
}

fn channel_spec(n: usize, radius: f64) -> CliResult<ChannelSpec> {
    if !(radius > 0.0 && radius.is_finite()) {
        return usage(format!("radius must be positive and finite, got {radius}"));
    }
    ChannelSpec::new(n, radius).map_err(|e| CliError::Usage(e.to_string()))
}

fn profile(common: &Common, n: usize, radius: f64, grid: usize) -> CliResult<()> {
    let spec = channel_spec(n, radius)?;
    if grid < 16 {
        return usage(format!("--grid must be at least 16, got {grid}"));
    }
    let engines = single_engine(common, "profile")?;
    let p = channel::info_density_profile(&spec, grid, &engines[0].1)?;
    let scale = common.base.scale();
    let at_r = *p.values.last().expect("non-empty grid");
    let rows: Vec<Vec<String>> = p
        .xnorm_grid
        .iter()
        .zip(&p.values)
        .map(|(x, i)| vec![g(*x), g(i / scale), g((at_r - i) / scale)])
        .collect();
    emit(
        common,
        &metadata("profile", common, &engines, common.seed),
        &["xnorm", "i_x", "i_R_minus_i_x"],
        &rows,
    )
}

fn mmse_curve(common: &Common, n: usize, radii: &[f64], grid: usize) -> CliResult<()> {
    let radii: Vec<f64> = if radii.is_empty() {
        if grid < 2 {
            return usage(format!("--grid must be at least 2, got {grid}"));
        }
        let top = 3.0 * (n as f64).sqrt();
        (1..=grid).map(|k| top * k as f64 / grid as f64).collect()
    } else {
        radii.to_vec()
    };
    let specs = radii
        .iter()
        .map(|&r| channel_spec(n, r))
        .collect::<CliResult<Vec<_>>>()?;
    let engines = single_engine(common, "mmse-curve")?;
    let e = &engines[0].1;
    let rows: Vec<Vec<String>> = specs
        .par_iter()
        .map(|spec| {
            let r = spec.radius();
            let gauss = channel::mmse_gaussian_reference(n, r);
            match channel::mmse_at_snr(spec, channel::SnrFraction::ONE, e) {
                Ok(m) => {
                    // the power-matched Gaussian input is the hardest to estimate
                    let error = if m > gauss * (1.0 + 1e-9) + 1e-12 || gauss > r * r {
                        format!(
                            "ordering violated: mmse_sphere {} mmse_gaussian {} R^2 {}",
                            g(m),
                            g(gauss),
                            g(r * r)
                        )
                    } else {
                        String::new()
                    };
                    vec![g(r), g(m), g(gauss), error]
                }
                Err(err) => vec![g(r), String::new(), g(gauss), err.to_string()],
            }
        })
        .collect();
    emit(
        common,
        &metadata("mmse-curve", common, &engines, common.seed),
        &["R", "mmse_sphere", "mmse_gaussian", "error"],
        &rows,
    )?;
    finish(&rows, "mmse-curve")
}

fn run_verify(common: &Common, level: LevelArg) -> CliResult<()> {
    if common.method != MethodArg::Quad {
        return usage("verify checks the quadrature engine against Monte Carlo itself; use --method quad");
    }
    let engines = engines(common)?;
    let seed = common.seed.unwrap_or(DEFAULT_VERIFY_SEED);
    let level = match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let report = verify::run(level, &engines[0].1, seed);
    let mut out = sink(common.out.as_deref())?;
    let meta = metadata("verify", common, &engines, Some(seed));
    out.write_all(meta.as_bytes())?;
    writeln!(out, "{report}")?;
    out.flush()?;
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
        Err(CliError::Failed(format!("verification failed: {}", names.join(", "))))
    }
}

fn asymptotic(common: &Common) -> CliResult<()> {
    let spec = RootSpec::default();
    let c = thresholds::solve_c(&spec)?;
    let a = thresholds::solve_sufficiency_a(&spec)?;
    let rows = vec![
        vec!["c".to_string(), g(c.value), g(c.residual)],
        vec!["a".to_string(), g(a.value), g(a.residual)],
        vec![
            "n_sufficient".to_string(),
            g(thresholds::sufficiency_dimension(a.value)),
            String::new(),
        ],
        vec![
            "mmse_limit".to_string(),
            g(thresholds::mmse_limit_constant()),
            String::new(),
        ],
    ];
    emit(
        common,
        &metadata("asymptotic", common, &[], common.seed),
        &["quantity", "value", "residual"],
        &rows,
    )
}
