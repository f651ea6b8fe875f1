//! `xcorr`: correlation measures, channel trajectories and seeded sweeps
//! for two-qubit X states.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use xcorr_core::channels::{
    decoherence_schedule, evolve_c, schedule_time, ChannelKind, ChannelSpec,
};
use xcorr_core::experiments::{
    bound_curves, hierarchy_sweep, invariance_scan, sudden_death_sweep, write_hierarchy_datasets,
    write_invariance_datasets, write_sudden_death_dataset, CurveFamily, QMode, SweepReport,
    CURVE_TOL,
};
use xcorr_core::format::fmt_g17;
use xcorr_core::measures::{all_measures, MeasureRecord, QParameter};
use xcorr_core::oracle::{
    chsh_max_oracle, concurrence_oracle, nonlocality_from_chsh, q_discord_oracle,
    steering_f_oracle, steering_g_oracle,
};
use xcorr_core::states::density_matrix;
use xcorr_core::{CVector, Error};

const EXIT_INPUT: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "xcorr",
    version,
    about = "Quantum correlation measures for two-qubit X states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every measure for one state.
    Measure(MeasureArgs),
    /// Tabulate measures along a decoherence trajectory.
    Evolve(EvolveArgs),
    /// Run a seeded Monte-Carlo sweep and write its datasets.
    Sweep(SweepArgs),
    /// Tabulate a boundary family and check it against its closed form.
    Curves(CurvesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct MeasureArgs {
    /// Correlation vector `c1,c2,c3`.
    #[arg(long, allow_hyphen_values = true)]
    c: CVector,
    #[arg(long, default_value = "1")]
    q: f64,
    /// Also evaluate the matrix-level oracles and print the differences.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1,1,-1")]
    c: CVector,
    /// bf | bpf | pf | dp | gad
    #[arg(long)]
    channel: ChannelKind,
    /// Final dimensionless time.
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    t: Option<f64>,
    /// Final channel parameter in [0, 1].
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    #[arg(long, default_value = "1")]
    q: f64,
    /// Write the trajectory here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Hierarchy,
    Invariance,
    SuddenDeath,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(value_enum)]
    kind: SweepKind,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// A positive number, or `random` for uniform draws on [1, 4].
    #[arg(long, default_value = "random")]
    q: QMode,
    /// Channel for the sudden-death sweep.
    #[arg(long, default_value = "pf")]
    channel: ChannelKind,
    /// Directory for datasets and the JSON report.
    #[arg(long, env = "XCORR_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Worker threads; defaults to the available cores.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Omit the elapsed time so reports are byte-comparable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Lower,
    Werner,
}

#[derive(Args)]
struct CurvesArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 101)]
    resolution: usize,
    #[arg(long, default_value = "1")]
    q: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => EXIT_IO,
            Error::Numerical(_) => 1,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Curves(a) => cmd_curves(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

/// `(name, closed form, oracle)` for every measure of `c`.
fn oracle_rows(
    c: &CVector,
    q: QParameter,
    r: &MeasureRecord,
) -> Result<Vec<(&'static str, f64, f64)>, Error> {
    let rho = density_matrix(c);
    let pairs: [&[usize]; 3] = [&[1, 2], &[1, 3], &[2, 3]];
    let f2 = pairs
        .iter()
        .map(|a| steering_f_oracle(&rho, a))
        .collect::<Result<Vec<_>, _>>()?;
    let g2 = pairs
        .iter()
        .map(|a| steering_g_oracle(&rho, a))
        .collect::<Result<Vec<_>, _>>()?;
    let f2 = f2.into_iter().fold(0.0, f64::max);
    let g2 = g2.into_iter().fold(f64::INFINITY, f64::min);
    let f3 = steering_f_oracle(&rho, &[1, 2, 3])?;
    let g3 = steering_g_oracle(&rho, &[1, 2, 3])?;
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    Ok(vec![
        ("Dq", r.d_q, q_discord_oracle(&rho, q)?),
        ("E", r.e, concurrence_oracle(&rho)?),
        ("S2v", r.s2v, ((f2 - r2) / (2.0 - r2)).max(0.0)),
        ("S3v", r.s3v, ((f3 - r3) / (3.0 - r3)).max(0.0)),
        ("S2e", r.s2e, (1.0 - g2).max(0.0)),
        ("S3e", r.s3e, (1.0 - g3 / 2.0).max(0.0)),
        ("N", r.n_bell, nonlocality_from_chsh(chsh_max_oracle(&rho)?)),
    ])
}

fn cmd_measure(a: MeasureArgs) -> CmdResult {
    let q = QParameter::new(a.q)?;
    let record = all_measures(&a.c, q)?;
    let oracle = if a.oracle {
        Some(oracle_rows(&a.c, q, &record)?)
    } else {
        None
    };
    let text = match a.format {
        Format::Csv => {
            let mut s = format!("{}\n{}\n", MeasureRecord::CSV_HEADER, record.csv_row(&a.c));
            if let Some(rows) = &oracle {
                s.push_str("\nmeasure,closed,oracle,delta\n");
                for (name, closed, orc) in rows {
                    s.push_str(&format!(
                        "{name},{},{},{}\n",
                        fmt_g17(*closed),
                        fmt_g17(*orc),
                        fmt_g17(closed - orc)
                    ));
                }
            }
            s
        }
        Format::Json => {
            let mut v = json!({ "c": a.c.as_array(), "record": record });
            if let Some(rows) = &oracle {
                v["oracle"] = rows
                    .iter()
                    .map(|(name, closed, orc)| {
                        (
                            name.to_string(),
                            json!({ "closed": closed, "oracle": orc, "delta": closed - orc }),
                        )
                    })
                    .collect::<serde_json::Map<_, _>>()
                    .into();
            }
            format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("json values serialize")
            )
        }
    };
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}

const TRAJECTORY_HEADER: &str = "t,p,c1,c2,c3,Dq,E,S2v,S3v,S2e,S3e,N";

fn cmd_evolve(a: EvolveArgs) -> CmdResult {
    let q = QParameter::new(a.q)?;
    xcorr_core::states::ensure_physical(&a.c)?;
    // Validate the endpoint before building the grid.
    let (end, by_time) = match (a.t, a.p) {
        (Some(t), _) => (decoherence_schedule(t).map(|_| t)?, true),
        (None, Some(p)) => (ChannelSpec::new(a.channel, p)?.parameter(), false),
        (None, None) => unreachable!("clap requires --t or --p"),
    };
    let steps = if end == 0.0 { 0 } else { a.steps };
    let mut text = format!("{TRAJECTORY_HEADER}\n");
    for i in 0..=steps {
        let x = if steps == 0 {
            0.0
        } else {
            end * f64::from(i) / f64::from(steps)
        };
        let (t, p) = if by_time {
            (x, decoherence_schedule(x)?)
        } else {
            (schedule_time(x)?, x)
        };
        let c = evolve_c(&a.c, &ChannelSpec::new(a.channel, p)?);
        let record = all_measures(&c, q)?;
        let measures = [
            record.d_q,
            record.e,
            record.s2v,
            record.s3v,
            record.s2e,
            record.s3e,
            record.n_bell,
        ]
        .map(fmt_g17)
        .join(",");
        text.push_str(&format!("{},{},{c},{measures}\n", fmt_g17(t), fmt_g17(p)));
    }
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn finish_report(mut report: SweepReport, no_timing: bool, dir: &Path, name: &str) -> CmdResult {
    if no_timing {
        report.elapsed_s = None;
    }
    let json = format!("{}\n", report.to_json());
    let path = dir.join(name);
    fs::write(&path, &json).map_err(|e| io_failure(&path, e))?;
    emit(None, &json)?;
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} violation(s) found", report.total_violations());
        Ok(ExitCode::from(EXIT_VIOLATION))
    }
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    fs::create_dir_all(&a.out).map_err(|e| io_failure(&a.out, e))?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = a.workers {
        pool = pool.num_threads(w as usize);
    }
    let pool = pool.build().map_err(|e| Failure {
        code: 1,
        message: format!("cannot start worker threads: {e}"),
    })?;
    let n = a.n as usize;
    pool.install(|| match a.kind {
        SweepKind::Hierarchy => {
            let sweep = hierarchy_sweep(n, a.seed, a.q)?;
            write_hierarchy_datasets(&a.out, &sweep.points)?;
            finish_report(sweep.report, a.no_timing, &a.out, "hierarchy_report.json")
        }
        SweepKind::Invariance => {
            let scan = invariance_scan(n, a.seed, a.q)?;
            write_invariance_datasets(&a.out, &scan.points)?;
            finish_report(scan.report, a.no_timing, &a.out, "invariance_report.json")
        }
        SweepKind::SuddenDeath => {
            let sweep = sudden_death_sweep(n, a.seed, a.channel, a.q)?;
            write_sudden_death_dataset(&a.out, &sweep)?;
            finish_report(
                sweep.report,
                a.no_timing,
                &a.out,
                "sudden_death_report.json",
            )
        }
    })
}

fn cmd_curves(a: CurvesArgs) -> CmdResult {
    let family = match a.family {
        Family::Lower => CurveFamily::LowerA,
        Family::Werner => CurveFamily::Werner,
    };
    let curves = bound_curves(family, a.resolution, QParameter::new(a.q)?)?;
    emit(a.out.as_deref(), &curves.csv())?;
    for (name, dev) in &curves.max_deviation {
        eprintln!("{name}: max deviation {}", fmt_g17(*dev));
    }
    if curves.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("deviation above {CURVE_TOL}");
        Ok(ExitCode::from(EXIT_VIOLATION))
    }
}
