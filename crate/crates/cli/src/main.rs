use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qloop::runner::{self, RunConfig, EXIT_CONFIG};
use qloop::Error;

#[derive(Parser)]
#[command(name = "qloop", version, about = "Exact checks of higher-order Serre relations on spin chains at roots of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites and write a JSON report.
    Run(RunArgs),
    /// Describe a check id.
    Explain {
        id: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key=value file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// spin_half, highest_weight or cyclic
    #[arg(long)]
    backend: Option<String>,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long = "L")]
    l: Option<usize>,
    /// charge sector; repeatable (default: all of 0..N)
    #[arg(long = "Q")]
    q: Vec<u32>,
    /// laurent, cyclotomic, phi-adic or float
    #[arg(long)]
    ring: Option<String>,
    /// qcomb, rep-gate, barred, divpow, id1, id2, site, lemmas, serre-nested or all; repeatable
    #[arg(long)]
    suite: Vec<String>,
    #[arg(long)]
    jobs: Option<usize>,
    /// defaults to $QLOOP_CACHE_DIR
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// where to write the JSON report (default: stdout only gets the summary)
    #[arg(long)]
    report: Option<PathBuf>,
    /// rerun with rescaled operators and compare statuses
    #[arg(long)]
    rescale_audit: bool,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_kv(&text)?;
        }
        if let Some(b) = &self.backend {
            cfg.set("backend", b)?;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(l) = self.l {
            cfg.l = l;
        }
        if !self.q.is_empty() {
            cfg.q = self.q;
        }
        if let Some(r) = &self.ring {
            cfg.set("ring", r)?;
        }
        if !self.suite.is_empty() {
            cfg.set("suite", &self.suite.join(","))?;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        if self.cache_dir.is_some() {
            cfg.cache_dir = self.cache_dir;
        }
        if self.report.is_some() {
            cfg.report = self.report;
        }
        if self.rescale_audit {
            cfg.rescale_audit = true;
        }
        Ok(cfg)
    }
}

fn run(args: RunArgs) -> i32 {
    let cfg = match args.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return runner::error_exit_code(&e);
        }
    };
    let report = match runner::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return runner::error_exit_code(&e);
        }
    };
    if let Some(path) = &cfg.report {
        if let Err(e) = fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return runner::EXIT_RESOURCE;
        }
    }
    print!("{}", report.summary_text());
    report.exit_code()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => run(args),
        Command::Explain { id } => match qloop::explain::explain(&id) {
            Ok(e) => {
                println!("{e}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}
