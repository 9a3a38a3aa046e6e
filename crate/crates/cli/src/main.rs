use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bellframe::entanglement::{BellFlavor, CorrelationSource, Message};
use bellframe::qkd::ProtocolVariant;
use bellframe_cli::config::{default_trials, Command, ExperimentConfig, OutputFormat};
use bellframe_cli::{replay, run, Report};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bellframe", version, about = "Entanglement, gate-group and QKD experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the eight-element multiplication table.
    GroupTable(Common),
    /// Imperfect entangler fidelity and detection signal.
    Entangler {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        theta1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta2: Option<f64>,
        /// Sampling window for θ, as LO,HI in radians.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        theta_range: Option<[f64; 2]>,
        /// Evenly spaced θ₁ grid with this many points.
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long)]
        parallel: bool,
    },
    /// Prepare-measure key distribution session.
    Bb84 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "standard_zx")]
        variant: ProtocolVariant,
        /// Insert an intercept-resend eavesdropper.
        #[arg(long)]
        eve: bool,
        #[arg(long, default_value_t = 0.0)]
        flip_prob: f64,
        /// Fix Alice's state by name, e.g. 0, 1, +, -, +45, -45, +90.
        #[arg(long, allow_hyphen_values = true)]
        alice_state: Option<String>,
        #[arg(long)]
        log_rounds: bool,
    },
    /// Extended dense coding with matched and mismatched decoders.
    DenseCode {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "standard")]
        flavor: BellFlavor,
        #[arg(long, default_value = "00")]
        message: Message,
    },
    /// Purity and rotated-basis correlation of a Bell source.
    Mixedness {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "pure-bell")]
        source: CorrelationSource,
    },
    /// The nine qutrit directions and six frames.
    Directions(Common),
    /// Post-selected pair throughput of a down-conversion source.
    SourceRate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pair_prob: Option<f64>,
        #[arg(long)]
        double_pair_prob: Option<f64>,
    },
    /// Re-run the config echoed in a JSON report.
    Replay {
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, visible_aliases = ["shots", "rounds"])]
    trials: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t}: {e}"));
    Ok([num(lo)?, num(hi)?])
}

impl Common {
    fn config(&self, command: Command) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(command);
        c.seed = self.seed;
        c.trials = self.trials.unwrap_or(default_trials(command));
        c.format = self.format;
        c
    }
}

fn build(cmd: Cmd) -> anyhow::Result<(ExperimentConfig, Option<PathBuf>)> {
    Ok(match cmd {
        Cmd::GroupTable(common) => (common.config(Command::GroupTable), common.out),
        Cmd::Directions(common) => (common.config(Command::Directions), common.out),
        Cmd::Entangler { common, theta1, theta2, theta_range, grid, parallel } => {
            let mut c = common.config(Command::Entangler);
            c.theta1 = theta1;
            c.theta2 = theta2;
            c.theta_range = theta_range;
            c.grid = grid;
            c.parallel = parallel;
            (c, common.out)
        }
        Cmd::Bb84 { common, variant, eve, flip_prob, alice_state, log_rounds } => {
            let mut c = common.config(Command::Bb84);
            c.variant = Some(variant);
            c.eve = eve;
            c.flip_prob = flip_prob;
            c.alice_state = alice_state;
            c.log_rounds = log_rounds;
            (c, common.out)
        }
        Cmd::DenseCode { common, flavor, message } => {
            let mut c = common.config(Command::DenseCode);
            c.flavor = Some(flavor);
            c.message = Some(message);
            (c, common.out)
        }
        Cmd::Mixedness { common, source } => {
            let mut c = common.config(Command::Mixedness);
            c.source = Some(source);
            (c, common.out)
        }
        Cmd::SourceRate { common, pair_prob, double_pair_prob } => {
            let mut c = common.config(Command::SourceRate);
            c.pair_prob = pair_prob;
            c.double_pair_prob = double_pair_prob;
            (c, common.out)
        }
        Cmd::Replay { .. } => unreachable!("handled in main"),
    })
}

fn emit(report: &Report, format: OutputFormat, out: Option<PathBuf>) -> anyhow::Result<()> {
    let text = report.render(format)?;
    match out {
        Some(path) => std::fs::write(&path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn real_main(cli: Cli) -> anyhow::Result<bool> {
    let report = match cli.cmd {
        Cmd::Replay { report, out } => {
            let text = std::fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))?;
            let r = replay(&text)?;
            emit(&r, OutputFormat::Json, out)?;
            return Ok(r.verified);
        }
        cmd => {
            let (config, out) = build(cmd)?;
            let r = run(&config)?;
            emit(&r, config.format, out)?;
            r
        }
    };
    Ok(report.verified)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
