//! Command-line interface: loads a session (from a file or the bundled
//! corpus), runs one command, and prints a mixed human/JSONL report.
//!
//! Exit codes: 0 all verdicts positive and complete, 1 a negative verdict,
//! 2 truncation-limited, 3 input error.

use std::time::Instant;

use tmf_cli::{commands, corpus, report, session};

use clap::{Args, Parser as ClapParser, Subcommand};

use commands::Command;
use report::Report;
use session::Session;

#[derive(ClapParser)]
#[command(name = "tmf", about = "Twisted matrix factorizations over graded algebras", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SessionSource {
    /// Path to a session file
    #[arg(long, global = true)]
    session: Option<std::path::PathBuf>,
    /// Name of a bundled example session
    #[arg(long, global = true)]
    example: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check normality and regularity of a named element
    CheckNormal {
        f: String,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Solve for and display the normalizing automorphism
    NormalizingAuto {
        f: String,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Verify the two product identities of a declared factorization
    VerifyTmf {
        name: String,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Unroll the induced free resolution over the hypersurface quotient
    Unroll {
        name: String,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Minimal free resolution of a module over the quotient
    Resolve {
        module: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long, default_value_t = 5)]
        hmax: usize,
        #[arg(long, default_value_t = 8)]
        tmax: i64,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Betti table of a module resolution
    Betti {
        module: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long, default_value_t = 5)]
        hmax: usize,
        #[arg(long, default_value_t = 8)]
        tmax: i64,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Smallest period of the unrolled resolution, with its internal shift
    DetectPeriod {
        name: String,
        #[arg(long, default_value_t = 8)]
        pmax: u32,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Lift a module of ambient projective dimension ≤ 1 to a factorization
    ExtractTmf {
        module: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long, default_value_t = 8)]
        tmax: i64,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Resolve until a syzygy lifts to a reduced factorization
    Pipeline {
        module: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        tmax: i64,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Twisting-system analysis and factorization transport
    Zhang {
        #[arg(long)]
        auto: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long)]
        transport: Option<String>,
        #[arg(long, default_value_t = 8)]
        pmax: u32,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Mapping cone of a declared morphism
    Cone {
        psi: String,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Solve the null-homotopy equations for a declared morphism
    Homotopy {
        psi: String,
        #[command(flatten)]
        src: SessionSource,
    },
    /// Parse, serialize and re-parse the session; verify stability
    Roundtrip {
        #[command(flatten)]
        src: SessionSource,
    },
    /// Bundled example sessions
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
}

#[derive(Subcommand)]
enum ExampleAction {
    /// List bundled session names
    List,
    /// Run every verify directive embedded in a bundled session
    Run { name: String },
}

fn load(src: &SessionSource) -> anyhow::Result<(Session, String)> {
    let text = match (&src.session, &src.example) {
        (Some(path), None) => std::fs::read_to_string(path)?,
        (None, Some(name)) => corpus::lookup(name)
            .ok_or_else(|| anyhow::anyhow!("unknown example `{name}`"))?
            .to_string(),
        _ => anyhow::bail!("provide exactly one of --session <path> or --example <name>"),
    };
    let s = Session::parse(&text)?;
    Ok((s, text))
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let mut report = Report::new();
    let outcome: anyhow::Result<()> = (|| {
        let (cmd, src) = match &cli.cmd {
            Cmd::CheckNormal { f, src } => (Command::CheckNormal { f: f.clone() }, src.clone()),
            Cmd::NormalizingAuto { f, src } => {
                (Command::NormalizingAuto { f: f.clone() }, src.clone())
            }
            Cmd::VerifyTmf { name, src } => (Command::VerifyTmf { name: name.clone() }, src.clone()),
            Cmd::Unroll { name, steps, src } => {
                (Command::Unroll { name: name.clone(), steps: *steps }, src.clone())
            }
            Cmd::Resolve { module, f, hmax, tmax, src } => (
                Command::Resolve {
                    module: module.clone(),
                    f: f.clone(),
                    hmax: *hmax,
                    tmax: *tmax,
                },
                src.clone(),
            ),
            Cmd::Betti { module, f, hmax, tmax, src } => (
                Command::Betti { module: module.clone(), f: f.clone(), hmax: *hmax, tmax: *tmax },
                src.clone(),
            ),
            Cmd::DetectPeriod { name, pmax, src } => {
                (Command::DetectPeriod { name: name.clone(), pmax: *pmax }, src.clone())
            }
            Cmd::ExtractTmf { module, f, tmax, src } => (
                Command::ExtractTmf { module: module.clone(), f: f.clone(), tmax: *tmax },
                src.clone(),
            ),
            Cmd::Pipeline { module, f, dim, tmax, src } => (
                Command::Pipeline {
                    module: module.clone(),
                    f: f.clone(),
                    dim: *dim,
                    tmax: *tmax,
                },
                src.clone(),
            ),
            Cmd::Zhang { auto, f, transport, pmax, src } => (
                Command::Zhang {
                    auto: auto.clone(),
                    f: f.clone(),
                    transport: transport.clone(),
                    pmax: *pmax,
                },
                src.clone(),
            ),
            Cmd::Cone { psi, src } => (Command::Cone { psi: psi.clone() }, src.clone()),
            Cmd::Homotopy { psi, src } => (Command::Homotopy { psi: psi.clone() }, src.clone()),
            Cmd::Roundtrip { src } => (Command::Roundtrip, src.clone()),
            Cmd::Example { action } => match action {
                ExampleAction::List => {
                    for n in corpus::names() {
                        println!("{n}");
                    }
                    return Ok(());
                }
                ExampleAction::Run { name } => (
                    Command::RunVerifies,
                    SessionSource { session: None, example: Some(name.clone()) },
                ),
            },
        };
        let (session, text) = load(&src)?;
        report.meta(cmd.name(), &session::digest(&session.serialize()), session.bound);
        report.human(format!(
            "{} over {} (bound {}) — digest {}",
            cmd.name(),
            match session.field {
                tmf_core::FieldSpec::Rationals => "Q".to_string(),
                tmf_core::FieldSpec::Prime(p) => format!("F{p}"),
            },
            session.bound,
            session::digest(&text),
        ));
        commands::run_command(&session, &cmd, &mut report)
    })();
    report.timing(started.elapsed().as_millis());
    report.print();
    match outcome {
        Ok(()) => report.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            3
        }
    }
}
