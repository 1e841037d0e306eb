//! Command-line front end: `polymin`, `lyapunov`, `sos`, `solve-sdpa`, `bench`.
//!
//! Every run prints its JSON report on stdout. Exit codes: 0 when all runs
//! are solved, 2 when any run stops at the iteration limit, 1 on input errors.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::admm::{solve, write_log_csv, SolverOptions, Status};
use crate::bench::{
    full_quadratic_template, gen_random_polymin, gen_random_stable_system, run_lyapunov,
    run_parallel, run_polymin, run_sos, Dims, Run, RunReport,
};
use crate::error::{Error, Result};
use crate::poly::{parse_polynomial, Polynomial};
use crate::sdpa::parse_sdpa;
use crate::sos::{
    compile_lyapunov, compile_polymin, quadratic_template, RationalField, SosProgram,
    DEFAULT_LYAPUNOV_EPS,
};

#[derive(Debug, Parser)]
#[command(name = "sos-admm", version, about = "SOS programming with a row-sparse ADMM solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Termination tolerance on the relative residuals.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    /// Initial penalty parameter.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Keep the penalty fixed instead of balancing residuals.
    #[arg(long)]
    pub fixed_rho: bool,
    /// Write the JSON report(s) here as well as to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the CSV iteration log here.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub log_every: usize,
}

impl Common {
    fn options(&self) -> SolverOptions {
        let mut o = SolverOptions {
            rho_init: self.rho,
            tol: self.tol,
            max_iter: self.max_iter,
            log_every: if self.log.is_some() { self.log_every.max(1) } else { 0 },
            ..SolverOptions::default()
        };
        if self.fixed_rho {
            o.adapt = None;
        }
        o
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower-bound a polynomial: maximize γ such that p − γ is SOS.
    Polymin {
        /// Polynomial text, e.g. "x1^4 - 3*x1^2 + 2".
        #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
        poly: Option<String>,
        /// File holding the polynomial text.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Number of variables (inferred from the text when omitted).
        #[arg(long)]
        nvars: Option<usize>,
        /// Write the compiled SOS program as JSON.
        #[arg(long)]
        emit_program: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a Lyapunov function of ẋ = num/den.
    Lyapunov {
        /// Numerators, one per state, separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        /// Denominators separated by ';' (default all 1).
        #[arg(long, allow_hyphen_values = true)]
        den: Option<String>,
        /// Quadratic template: "diag" (x_i² only) or "full".
        #[arg(long, default_value = "full")]
        template: String,
        /// Ball radius squared for a local certificate; omit for global.
        #[arg(long)]
        radius_sq: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_LYAPUNOV_EPS)]
        eps: f64,
        /// Sample points for the post-check of V and V̇.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        emit_program: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve an SOS program given as JSON.
    Sos {
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Solve an SDPA sparse (.dat-s) problem.
    SolveSdpa {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Random benchmark instances.
    Bench {
        #[arg(long, conflicts_with = "lyapunov")]
        polymin: bool,
        #[arg(long)]
        lyapunov: bool,
        #[arg(long)]
        n: usize,
        /// Half degree for polymin instances.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, default_value_t = 0.1)]
        radius_sq: f64,
        /// Write a CSV summary table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Reports from one command invocation.
#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub reports: Vec<RunReport>,
}

impl CommandOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().all(|r| r.status == Status::Solved) {
            0
        } else {
            2
        }
    }
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Parse {
        line: 0,
        msg: format!("{}: {e}", path.display()),
    }
}

fn read(path: &std::path::Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write(path: &std::path::Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn split_polys(text: &str, n: usize) -> Result<Vec<Polynomial>> {
    text.split(';')
        .enumerate()
        .map(|(k, s)| {
            parse_polynomial(s, Some(n)).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: k + 1, msg },
                other => other,
            })
        })
        .collect()
}

fn finish_single(run: Run, common: &Common) -> Result<CommandOutcome> {
    if let Some(path) = &common.log {
        let mut buf = Vec::new();
        write_log_csv(&run.solution.history, &mut buf).map_err(|e| io_err(path, e))?;
        write(path, &String::from_utf8_lossy(&buf))?;
    }
    if let Some(path) = &common.report {
        write(path, &run.report.to_json())?;
    }
    Ok(CommandOutcome {
        reports: vec![run.report],
    })
}

/// Parses `args` (including the program name) and executes the command.
pub fn run_command<I, T>(args: I) -> std::result::Result<CommandOutcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    execute(cli.command).map_err(CliError::Input)
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Input(Error),
}

pub fn execute(command: Command) -> Result<CommandOutcome> {
    match command {
        Command::Polymin {
            poly,
            file,
            nvars,
            emit_program,
            common,
        } => {
            let text = match (poly, file) {
                (Some(t), _) => t,
                (None, Some(f)) => read(&f)?,
                (None, None) => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: "polymin needs --poly or --file".into(),
                    })
                }
            };
            let p = parse_polynomial(text.trim(), nvars)?;
            if let Some(path) = emit_program {
                write(&path, &compile_polymin(&p)?.to_json())?;
            }
            let run = run_polymin(&format!("polymin: {p}"), &p, &common.options())?;
            finish_single(run, &common)
        }
        Command::Lyapunov {
            field,
            den,
            template,
            radius_sq,
            eps,
            samples,
            seed,
            emit_program,
            common,
        } => {
            let n = field.split(';').count();
            let nums = split_polys(&field, n)?;
            let dens = match den {
                Some(d) => split_polys(&d, n)?,
                None => vec![Polynomial::constant(n, 1.0); n],
            };
            let rf = RationalField::new(nums, dens)?;
            let tmpl = match template.as_str() {
                "diag" => quadratic_template(n, true),
                "full" => quadratic_template(n, false),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unknown template '{other}' (use diag or full)"),
                    })
                }
            };
            let radius = radius_sq.unwrap_or(f64::INFINITY);
            if let Some(path) = emit_program {
                write(&path, &compile_lyapunov(&rf, &tmpl, radius, eps)?.program.to_json())?;
            }
            let check_radius = radius_sq.unwrap_or(1.0);
            let lr = run_lyapunov(
                "lyapunov",
                &rf,
                &tmpl,
                radius,
                eps,
                check_radius,
                samples,
                seed,
                &common.options(),
            )?;
            finish_single(lr.run, &common)
        }
        Command::Sos { program, common } => {
            let prog = SosProgram::from_json(&read(&program)?)?;
            let run = run_sos(&program.display().to_string(), &prog, &common.options())?;
            finish_single(run, &common)
        }
        Command::SolveSdpa { file, common } => {
            let conic = parse_sdpa(&read(&file)?)?;
            let start = Instant::now();
            let solution = solve(&conic, &common.options())?;
            let time_s = start.elapsed().as_secs_f64();
            let report = RunReport {
                problem: file.display().to_string(),
                dims: Dims::of(&conic),
                status: solution.status,
                iters: solution.iterations,
                residuals: solution.residuals(),
                objective: solution.objective,
                time_s,
                certificate: None,
                verification: None,
            };
            finish_single(
                Run {
                    report,
                    conic,
                    solution,
                    certificate: None,
                },
                &common,
            )
        }
        Command::Bench {
            polymin,
            lyapunov,
            n,
            d,
            seeds,
            first_seed,
            radius_sq,
            table,
            common,
        } => {
            if polymin == lyapunov {
                return Err(Error::Parse {
                    line: 0,
                    msg: "bench needs exactly one of --polymin or --lyapunov".into(),
                });
            }
            let opts = common.options();
            let runs: Vec<Result<RunReport>> = run_parallel(seeds as usize, |k| {
                let seed = first_seed + k as u64;
                if polymin {
                    let p = gen_random_polymin(n, d, seed)?;
                    Ok(run_polymin(&format!("polymin n={n} d={d} seed={seed}"), &p, &opts)?.report)
                } else {
                    let f = RationalField::polynomial(gen_random_stable_system(n, seed)?);
                    let tmpl = full_quadratic_template(n);
                    Ok(run_lyapunov(
                        &format!("lyapunov n={n} seed={seed}"),
                        &f,
                        &tmpl,
                        radius_sq,
                        DEFAULT_LYAPUNOV_EPS,
                        radius_sq,
                        10_000,
                        seed,
                        &opts,
                    )?
                    .run
                    .report)
                }
            });
            let reports = runs.into_iter().collect::<Result<Vec<_>>>()?;
            if let Some(path) = &table {
                write(path, &bench_table(&reports))?;
            }
            if let Some(path) = &common.report {
                let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
                write(path, &json)?;
            }
            Ok(CommandOutcome { reports })
        }
    }
}

/// CSV summary with one row per run.
pub fn bench_table(reports: &[RunReport]) -> String {
    let mut out = String::from("problem,N,m,nvars,status,iters,objective,time_s\n");
    for r in reports {
        let sides: Vec<String> = r.dims.psd_sides.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!(
            "\"{}\",{},{},{},{:?},{},{:.6},{:.3}\n",
            r.problem,
            sides.join(";"),
            r.dims.m,
            r.dims.nvars,
            r.status,
            r.iters,
            r.objective,
            r.time_s
        ));
    }
    out
}
