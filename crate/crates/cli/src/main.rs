use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use framecheck_core::einv::GroupKind;
use framecheck_core::numeric::MapKind;
use framecheck_core::su::IdentityTag;
use framecheck_core::{parse_range, run_suite, Command, OutputFormat, SuiteConfig};

#[derive(Parser)]
#[command(name = "framecheck", version, about = "Verify SU(m) cell identities, bundle maps and e-invariant values")]
struct Cli {
    /// Include wall-clock durations in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Symbolic identity suite.
    Verify {
        #[arg(long, default_value = "2..4")]
        m: String,
        #[arg(long, value_delimiter = ',')]
        identity: Vec<IdentityTag>,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        unit_norm: Switch,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo collision search for the cell maps.
    Sample {
        #[arg(long, default_value = "4")]
        m: String,
        #[arg(long, value_enum, default_value_t = MapArg::Phi)]
        map: MapArg,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate then recover cell coordinates.
    Roundtrip {
        #[arg(long, default_value = "5")]
        m: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// e-invariant table.
    Einv {
        #[arg(long, default_value = "2..5")]
        n: String,
        #[arg(long, value_enum, default_value_t = GroupArg::Even)]
        group: GroupArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bernoulli numbers and image-of-J orders.
    Bernoulli {
        #[arg(long, default_value_t = 12)]
        upto: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Every suite with default parameters.
    Report {
        #[arg(long, value_enum, default_value_t = Switch::On)]
        unit_norm: Switch,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Phi,
    Psi,
    PsiModC,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Even,
    OddQuotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Markdown,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn build(cli: Cli) -> Result<(SuiteConfig, OutArgs), String> {
    let (mut cfg, out) = match cli.command {
        Cmd::Verify { m, identity, unit_norm, out } => {
            let mut c = SuiteConfig::new(Command::Verify);
            c.m_range = parse_range(&m).map_err(|e| e.to_string())?;
            c.identities = identity;
            c.unit_norm = matches!(unit_norm, Switch::On);
            (c, out)
        }
        Cmd::Sample { m, map, trials, out } => {
            let mut c = SuiteConfig::new(Command::Sample);
            c.m_range = parse_range(&m).map_err(|e| e.to_string())?;
            c.map = match map {
                MapArg::Phi => MapKind::Phi,
                MapArg::Psi => MapKind::Psi,
                MapArg::PsiModC => MapKind::PsiModC,
            };
            c.trials = Some(trials);
            (c, out)
        }
        Cmd::Roundtrip { m, trials, tol, out } => {
            let mut c = SuiteConfig::new(Command::Roundtrip);
            c.m_range = parse_range(&m).map_err(|e| e.to_string())?;
            c.trials = Some(trials);
            c.tol = Some(tol);
            (c, out)
        }
        Cmd::Einv { n, group, out } => {
            let mut c = SuiteConfig::new(Command::Einv);
            c.n_range = parse_range(&n).map_err(|e| e.to_string())?;
            c.group = match group {
                GroupArg::Even => GroupKind::Even,
                GroupArg::OddQuotient => GroupKind::OddQuotient,
            };
            (c, out)
        }
        Cmd::Bernoulli { upto, out } => {
            let mut c = SuiteConfig::new(Command::Bernoulli);
            c.upto = upto;
            (c, out)
        }
        Cmd::Report { unit_norm, out } => {
            let mut c = SuiteConfig::new(Command::Report);
            c.unit_norm = matches!(unit_norm, Switch::On);
            (c, out)
        }
    };
    cfg.seed = cli.seed;
    cfg.timing = cli.timing;
    cfg.format = match out.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Markdown => OutputFormat::Markdown,
    };
    Ok((cfg, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, out) = match build(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let text = report.render();
    match &out.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
            eprintln!("{}: {} ({} checks)", path.display(), report.overall.as_str(), report.checks.len());
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
