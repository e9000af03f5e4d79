use clap::{Parser, Subcommand, ValueEnum};
use qpkit::harness::{self, Config, VerificationReport};
use qpkit::pathalg::{mutate_qp, quiver_from_matrix, Potential, QPData, Quiver};
use qpkit::repeng::{build_cluster_rep, rep_g_vector, rep_h_vector};
use qpkit::seedeng::{invariants_along, parse_matrix, TreeWord};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "qpkit", version, about = "Seed recurrences and quivers with potentials, in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exchange matrices and their invariants.
    Seed {
        #[command(subcommand)]
        cmd: SeedCmd,
    },
    /// Quivers with potentials.
    Qp {
        #[command(subcommand)]
        cmd: QpCmd,
    },
    /// Decorated representations.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Randomized verification campaigns.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum SeedCmd {
    /// g-vectors, F-polynomials and h-vectors along a walk from the initial seed.
    Walk {
        #[arg(long)]
        matrix: PathBuf,
        /// Mutation directions, 1-based and comma separated.
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// The type A2 table at t0, ..., t5.
    TableA2,
}

#[derive(Subcommand)]
enum QpCmd {
    /// Mutation at one vertex, printed as a quiver file and a potential file.
    Mutate {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        at: usize,
        #[arg(long)]
        truncation: usize,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// The cluster representation attached to a walk and an index.
    Build {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        truncation: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every campaign; the config file is JSON and may omit fields.
    All {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Tsv => "tsv",
        }
    }
}

enum Failure {
    Input(String),
    Check(String),
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn write_out(bytes: &[u8], output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e))),
        None => std::io::stdout().write_all(bytes).map_err(input),
    }
}

fn checked(report: &VerificationReport) -> Result<(), Failure> {
    let failures = report.failures();
    if failures.is_empty() {
        return Ok(());
    }
    for f in failures.iter().take(20) {
        eprintln!("FAIL {} [{}] {}", f.name, f.instance, f.witness);
    }
    Err(Failure::Check(format!("{} of {} checks failed", failures.len(), report.checks.len())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Seed { cmd: SeedCmd::Walk { matrix, word, format } } => {
            let b = parse_matrix(&read(&matrix)?).map_err(input)?;
            let w = TreeWord::parse(&word, b.len()).map_err(input)?;
            let report = harness::walk_report(&b, &w).map_err(input)?;
            write_out(&harness::emit(&report, format.name()).map_err(input)?, None)
        }
        Cmd::Seed { cmd: SeedCmd::TableA2 } => {
            write_out(harness::table_a2_tsv().as_bytes(), None)?;
            checked(&harness::reproduce_a2())
        }
        Cmd::Qp { cmd: QpCmd::Mutate { quiver, potential, at, truncation } } => {
            let qv = Quiver::parse(&read(&quiver)?).map_err(input)?;
            if at == 0 || at > qv.n {
                return Err(Failure::Input(format!("vertex {} out of range 1..={}", at, qv.n)));
            }
            let s = Potential::parse(&read(&potential)?, &qv).map_err(input)?;
            let qp = QPData::new(qv, s, truncation);
            let (out, _) = mutate_qp(&qp, at - 1).map_err(input)?;
            let text = format!("# quiver\n{}# potential\n{}", out.quiver.to_text(), out.potential.to_text(&out.quiver));
            write_out(text.as_bytes(), None)
        }
        Cmd::Rep { cmd: RepCmd::Build { matrix, potential, word, ell, seed, truncation } } => {
            let b = parse_matrix(&read(&matrix)?).map_err(input)?;
            let w = TreeWord::parse(&word, b.len()).map_err(input)?;
            if ell == 0 || ell > b.len() {
                return Err(Failure::Input(format!("ell {} out of range 1..={}", ell, b.len())));
            }
            let qv = quiver_from_matrix(&b).map_err(input)?;
            let s = Potential::parse(&read(&potential)?, &qv).map_err(input)?;
            let m = build_cluster_rep(Arc::new(QPData::new(qv, s, truncation)), &w, ell - 1, seed).map_err(input)?;
            let g = rep_g_vector(&m);
            let h = rep_h_vector(&m);
            let (_, inv) = invariants_along(&b, &w).map_err(input)?.pop().expect("root");
            let text = format!("# g {:?}\n# h {:?}\n{}", g, h, m.to_text());
            write_out(text.as_bytes(), None)?;
            if g != inv.g[ell - 1] {
                return Err(Failure::Check(format!("g-vector {:?} differs from the recurrence {:?}", g, inv.g[ell - 1])));
            }
            Ok(())
        }
        Cmd::Verify { cmd: VerifyCmd::All { config, format, output } } => {
            let cfg: Config = match config {
                Some(p) => serde_json::from_str(&read(&p)?).map_err(input)?,
                None => Config::default(),
            };
            let report = harness::verify_theorems(&cfg);
            write_out(&harness::emit(&report, format.name()).map_err(input)?, output.as_deref())?;
            eprintln!("{} checks, {} skipped instances", report.checks.len(), report.skipped.len());
            checked(&report)
        }
    }
}

fn main() -> ExitCode {
    harness::init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("qpkit: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("qpkit: {}", msg);
            ExitCode::from(2)
        }
    }
}
