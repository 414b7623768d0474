//! Command line front end: configuration ingestion, subcommand dispatch
//! and artifact output.
//!
//! Exit codes: 0 success, 1 run failure (non-convergence or solver error),
//! 2 malformed configuration or invalid input, 3 hypothesis refusal
//! (admissibility hard-fail without `--force`).

mod config;
mod expr;
mod io;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use double_phase_core::hypotheses::{
    check_f_hypotheses, check_h1, check_h3_structure, default_t_grid, default_x_samples,
    h3_samples, log_holder_diagnostic,
};
use double_phase_core::solver::{default_bump, mountain_pass_geometry};
use double_phase_core::*;

use config::{apply_override, parse_config, FieldFormat, RunConfig};
use io::fmt_f;

const EXIT_RUN_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "double-phase",
    about = "Variable-exponent double phase Dirichlet problems: hypothesis checks, Nehari-manifold solves and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the INI-style run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the configured random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Concurrent sweep points.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Solve even when the admissibility checks hard-fail.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the hypothesis checkers and write the verdict report.
    Check,
    /// Compute the three solutions with diagnostics and field exports.
    Solve,
    /// Sample the mountain geometry (sphere infima and ray decay).
    Geometry,
    /// Export the fibering profile t, k(t), k'(t) of the initial guess.
    Fibering,
    /// Re-run `solve` over a list of parameter values.
    Sweep,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::new(EXIT_CONFIG, "--config PATH is required"))?;
    let text = fs::read_to_string(config_path).map_err(|e| {
        Failure::new(
            EXIT_CONFIG,
            format!("cannot read {}: {e}", config_path.display()),
        )
    })?;
    let rc = parse_config(&text, cli.seed)
        .map_err(|e| Failure::new(EXIT_CONFIG, format!("{}:{e}", config_path.display())))?;

    fs::create_dir_all(&cli.out).map_err(|e| {
        Failure::new(
            EXIT_CONFIG,
            format!("cannot create {}: {e}", cli.out.display()),
        )
    })?;

    match cli.command {
        Command::Check => cmd_check(cli, config_path, &rc),
        Command::Solve => cmd_solve(cli, config_path, &rc, &cli.out),
        Command::Geometry => cmd_geometry(cli, config_path, &rc),
        Command::Fibering => cmd_fibering(cli, config_path, &rc),
        Command::Sweep => cmd_sweep(cli, config_path, &rc, &text),
    }
}

fn write_echo(dir: &Path, rc: &RunConfig) -> Result<(), Failure> {
    fs::write(dir.join("config.ini"), &rc.echo)
        .map_err(|e| Failure::new(EXIT_RUN_FAILED, format!("write config echo: {e}")))
}

fn write_report(dir: &Path, content: &str) -> Result<(), Failure> {
    fs::write(dir.join("report.txt"), content)
        .map_err(|e| Failure::new(EXIT_RUN_FAILED, format!("write report: {e}")))
}

fn core_failure(e: Error) -> Failure {
    let code = match e {
        Error::ZeroField | Error::Invalid { .. } => EXIT_CONFIG,
        _ => EXIT_RUN_FAILED,
    };
    Failure::new(code, format!("{e}"))
}

/// All hypothesis checkers on one configuration.
fn full_hypotheses(rc: &RunConfig) -> Result<HypothesisReport, Failure> {
    let cfg = &rc.problem;
    let mut report = check_h1(cfg);
    report.merge(
        check_f_hypotheses(
            &cfg.nonlinearity,
            cfg,
            &default_t_grid(),
            &default_x_samples(&cfg.grid, 3),
        )
        .map_err(core_failure)?,
    );
    report.merge(
        check_h3_structure(cfg, &h3_samples(cfg, 200, rc.solver.seed)).map_err(core_failure)?,
    );
    Ok(report)
}

fn render_diagnostics(rc: &RunConfig) -> Result<String, Failure> {
    let cfg = &rc.problem;
    let mut out = String::from("[diagnostics]\n");
    out.push_str(&format!("p_minus={}\n", fmt_f(cfg.p_minus())));
    out.push_str(&format!("p_plus={}\n", fmt_f(cfg.p_plus())));
    out.push_str(&format!("q_minus={}\n", fmt_f(cfg.q_minus())));
    out.push_str(&format!("q_plus={}\n", fmt_f(cfg.q_plus())));
    out.push_str(&format!("p_star_minus={}\n", fmt_f(cfg.p_star_minus())));
    out.push_str(&format!("mu_sup={}\n", fmt_f(cfg.mu.max())));
    out.push_str(&format!(
        "log_holder_p={}\n",
        fmt_f(log_holder_diagnostic(&cfg.p))
    ));
    out.push_str(&format!(
        "log_holder_q={}\n",
        fmt_f(log_holder_diagnostic(&cfg.q))
    ));
    let growth = cfg.nonlinearity.growth_exponent().map_err(core_failure)?;
    out.push_str(&format!("growth_r_plus={}\n", fmt_f(growth.max())));
    out.push_str(&format!(
        "log_holder_growth={}\n",
        fmt_f(log_holder_diagnostic(&growth))
    ));
    Ok(out)
}

fn cmd_check(cli: &Cli, config_path: &Path, rc: &RunConfig) -> Result<(), Failure> {
    let hypotheses = full_hypotheses(rc)?;
    let mut content = report::render_header("check", &config_path.display().to_string(), rc.solver.seed);
    content.push('\n');
    content.push_str(&report::render_hypotheses(&hypotheses));
    content.push('\n');
    content.push_str(&render_diagnostics(rc)?);
    write_echo(&cli.out, rc)?;
    write_report(&cli.out, &content)?;
    print!("{content}");
    if hypotheses.hard_fail() {
        return Err(Failure::new(
            EXIT_RUN_FAILED,
            "one or more hypotheses failed; see report.txt",
        ));
    }
    Ok(())
}

fn solve_into(cli: &Cli, config_path: &Path, rc: &RunConfig, dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::new(EXIT_RUN_FAILED, format!("cannot create {}: {e}", dir.display())))?;
    write_echo(dir, rc)?;

    // refuse on a hard admissibility failure unless forced
    let hypotheses = full_hypotheses(rc)?;
    let h1_failed = hypotheses
        .findings
        .iter()
        .any(|f| f.key.starts_with("h1") && f.verdict == Verdict::Fail);
    if h1_failed && !cli.force {
        let mut content =
            report::render_header("solve", &config_path.display().to_string(), rc.solver.seed);
        content.push('\n');
        content.push_str(&report::render_hypotheses(&hypotheses));
        write_report(dir, &content)?;
        return Err(Failure::new(
            EXIT_HYPOTHESIS,
            "admissibility checks hard-failed; pass --force to solve anyway",
        ));
    }

    let three = solve_three(&rc.problem, &rc.solver).map_err(core_failure)?;

    let mut content = report::render_header("solve", &config_path.display().to_string(), rc.solver.seed);
    content.push('\n');
    content.push_str(&report::render_hypotheses(&three.hypotheses));
    content.push('\n');
    content.push_str(&report::render_geometry(&three.geometry));
    content.push('\n');
    content.push_str(&report::render_solution("u0", &three.positive));
    content.push('\n');
    content.push_str(&report::render_solution("v0", &three.negative));
    content.push('\n');
    content.push_str(&report::render_solution("w0", &three.sign_changing));
    write_report(dir, &content)?;

    let fields = [
        ("u0", &three.positive.field),
        ("v0", &three.negative.field),
        ("w0", &three.sign_changing.field),
    ];
    match rc.output.fields {
        FieldFormat::None => {}
        FieldFormat::Csv | FieldFormat::CsvVtk => {
            for (name, field) in &fields {
                io::write_field_csv(&dir.join(format!("{name}.csv")), field)
                    .map_err(|e| Failure::new(EXIT_RUN_FAILED, format!("write {name}.csv: {e}")))?;
            }
            if rc.output.fields == FieldFormat::CsvVtk {
                for (name, field) in &fields {
                    io::write_field_vtk(&dir.join(format!("{name}.vtk")), field, name).map_err(
                        |e| Failure::new(EXIT_RUN_FAILED, format!("write {name}.vtk: {e}")),
                    )?;
                }
            }
        }
    }

    let all_converged =
        three.positive.converged && three.negative.converged && three.sign_changing.converged;
    if !all_converged {
        return Err(Failure::new(
            EXIT_RUN_FAILED,
            format!(
                "solves did not converge (u0: {}, v0: {}, w0: {})",
                three.positive.converged, three.negative.converged, three.sign_changing.converged
            ),
        ));
    }
    Ok(())
}

fn cmd_solve(cli: &Cli, config_path: &Path, rc: &RunConfig, dir: &Path) -> Result<(), Failure> {
    solve_into(cli, config_path, rc, dir)
}

fn cmd_geometry(cli: &Cli, config_path: &Path, rc: &RunConfig) -> Result<(), Failure> {
    let u_far = rc
        .solver
        .guess
        .clone()
        .unwrap_or_else(|| default_bump(&rc.problem.grid));
    let geometry = mountain_pass_geometry(
        &rc.problem,
        &u_far,
        &rc.geometry.deltas,
        rc.geometry.samples,
        rc.solver.seed,
    )
    .map_err(core_failure)?;

    let mut content =
        report::render_header("geometry", &config_path.display().to_string(), rc.solver.seed);
    content.push('\n');
    content.push_str(&report::render_geometry(&geometry));
    write_echo(&cli.out, rc)?;
    write_report(&cli.out, &content)?;
    io::write_ray_csv(&cli.out.join("ray.csv"), &geometry)
        .map_err(|e| Failure::new(EXIT_RUN_FAILED, format!("write ray.csv: {e}")))?;
    print!("{content}");
    Ok(())
}

fn cmd_fibering(cli: &Cli, config_path: &Path, rc: &RunConfig) -> Result<(), Failure> {
    let u = rc
        .solver
        .guess
        .clone()
        .unwrap_or_else(|| default_bump(&rc.problem.grid));
    let fnl = Functional::new(&rc.problem);
    let n = rc.fibering.points.max(2);
    let log_min = rc.fibering.t_min.ln();
    let log_max = rc.fibering.t_max.ln();
    let grid: Vec<f64> = (0..n)
        .map(|i| (log_min + (log_max - log_min) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let profile = fibering_profile(&fnl, &u, &grid).map_err(core_failure)?;

    let mut content =
        report::render_header("fibering", &config_path.display().to_string(), rc.solver.seed);
    content.push_str(&format!("t_min={}\n", fmt_f(rc.fibering.t_min)));
    content.push_str(&format!("t_max={}\n", fmt_f(rc.fibering.t_max)));
    content.push_str(&format!("points={n}\n"));
    match project_ray(&fnl, &u, Truncation::None) {
        Ok(t_u) => content.push_str(&format!("ray_scaling={}\n", fmt_f(t_u))),
        Err(e) => content.push_str(&format!("ray_scaling_error={e}\n")),
    }
    write_echo(&cli.out, rc)?;
    write_report(&cli.out, &content)?;
    io::write_fibering_csv(&cli.out.join("fibering.csv"), &profile)
        .map_err(|e| Failure::new(EXIT_RUN_FAILED, format!("write fibering.csv: {e}")))?;
    print!("{content}");
    Ok(())
}

fn cmd_sweep(cli: &Cli, config_path: &Path, rc: &RunConfig, text: &str) -> Result<(), Failure> {
    let sweep = rc
        .sweep
        .clone()
        .ok_or_else(|| Failure::new(EXIT_CONFIG, "sweep requires a [sweep] section"))?;
    if sweep.values.is_empty() {
        return Err(Failure::new(EXIT_CONFIG, "sweep values list is empty"));
    }

    // parse every point configuration up front so config errors surface
    // before any solve starts
    let mut points = Vec::new();
    for (idx, &value) in sweep.values.iter().enumerate() {
        let rewritten = apply_override(text, &sweep.parameter, value)
            .map_err(|e| Failure::new(EXIT_CONFIG, format!("{}:{e}", config_path.display())))?;
        let point_rc = parse_config(&rewritten, cli.seed).map_err(|e| {
            Failure::new(
                EXIT_CONFIG,
                format!("{} (sweep {} = {value}): {e}", config_path.display(), sweep.parameter),
            )
        })?;
        points.push((idx, value, point_rc));
    }

    let jobs = cli.jobs.max(1);
    let results: Vec<(usize, f64, Result<(), Failure>)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in points.chunks((points.len() + jobs - 1) / jobs.max(1)) {
            let chunk: Vec<_> = chunk.to_vec();
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|(idx, value, point_rc)| {
                        let dir = cli.out.join(format!("point_{idx:03}"));
                        let outcome = solve_into(cli, config_path, &point_rc, &dir);
                        (idx, value, outcome)
                    })
                    .collect::<Vec<_>>()
            }));
        }
        let mut all = Vec::new();
        for handle in handles {
            all.extend(handle.join().expect("sweep worker panicked"));
        }
        all
    });

    let mut summary = report::render_header("sweep", &config_path.display().to_string(), rc.solver.seed);
    summary.push_str(&format!("parameter={}\n", sweep.parameter));
    let mut failures = 0usize;
    let mut ordered = results;
    ordered.sort_by_key(|(idx, _, _)| *idx);
    for (idx, value, outcome) in &ordered {
        match outcome {
            Ok(()) => summary.push_str(&format!("point_{idx:03} value={value} status=ok\n")),
            Err(f) => {
                failures += 1;
                summary.push_str(&format!(
                    "point_{idx:03} value={value} status=failed message=\"{}\"\n",
                    f.message
                ));
            }
        }
    }
    write_report(&cli.out, &summary)?;
    print!("{summary}");
    if failures > 0 {
        return Err(Failure::new(
            EXIT_RUN_FAILED,
            format!("{failures} sweep point(s) failed"),
        ));
    }
    Ok(())
}
