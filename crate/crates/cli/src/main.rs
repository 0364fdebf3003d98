//! `cartier-kit`: analyze single covers, run scans and verification campaigns.
//!
//! Exit codes: 0 pass, 1 usage or parse error, 2 invariant violation, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cartier_kit::harness::{
    char2_verify, cross_check, lemma_rank_exhaustive, lemma_rank_random, run_scan,
    superspecial_search, LemmaConfig, OutFormat, ScanConfig,
};
use cartier_kit::{
    analyze, check_bounds, CurveError, CurveInstance, HarnessError, OracleError, Violation,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "cartier-kit",
    version,
    about = "Cartier operator and a-number of cyclic covers of the projective line"
)]
struct Cli {
    /// Characteristic.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Extension degree of the sampling field (default: smallest with room for the branch points).
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Cover order.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Branch multiplicities, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    mults: Option<Vec<u32>>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run the independent oracles as well.
    #[arg(long, global = true)]
    verify: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one instance, e.g. `3^1:0,1|2|1,1,1|0;1;2`.
    Analyze { instance: String },
    /// Sample random branch points for one type.
    Scan,
    /// Check that the a-number in characteristic 2 depends only on the type.
    Char2Verify,
    /// Look for superspecial covers among all small types.
    SuperspecialSearch {
        #[arg(long, default_value_t = 7)]
        n_max: u32,
        #[arg(long, default_value_t = 5)]
        r_max: usize,
    },
    /// Test the span-dimension lemma on random or all coprime tuples.
    LemmaRank {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        deg_max: usize,
        #[arg(long, default_value_t = 5)]
        m_max: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Every coprime pair instead of random tuples (ignores --r and --trials).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Compare the block formula with the rational-differential recomputation over a scan.
    OracleCheck,
}

enum Failure {
    Usage(String),
    Violation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Violation(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Violation(m) | Failure::Io(m) => m,
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Io(e) => Failure::Io(e.to_string()),
            HarnessError::Curve(CurveError::Invariant(v))
            | HarnessError::Oracle(OracleError::Curve(CurveError::Invariant(v))) => {
                Failure::Violation(json(&v))
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Failure> {
    v.clone()
        .ok_or_else(|| Failure::Usage(format!("--{flag} is required for this command")))
}

fn scan_config(cli: &Cli, p: u32, verify: bool) -> Result<ScanConfig, Failure> {
    let mut cfg = ScanConfig::new(
        p,
        require(&cli.n, "n")?,
        &require(&cli.mults, "mults")?,
        cli.samples.unwrap_or(100),
        cli.seed,
    );
    cfg.k = cli.k;
    cfg.verify = verify;
    cfg.out_format = match cli.format {
        Format::Json => OutFormat::Json,
        Format::Csv => OutFormat::Csv,
    };
    cfg.out_path = cli.out.clone();
    Ok(cfg)
}

fn verdict(passed: bool, what: &str) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{what}: see report for violations"
        )))
    }
}

fn cmd_analyze(cli: &Cli, instance: &str) -> Result<(), Failure> {
    let c = CurveInstance::parse(instance).map_err(|e| match e {
        CurveError::Invariant(v) => Failure::Violation(json(&v)),
        other => Failure::Usage(other.to_string()),
    })?;
    let mut report = analyze(&c).map_err(|e| Failure::from(HarnessError::from(e)))?;
    if cli.verify {
        let v = cross_check(&c, &report).map_err(|e| Failure::from(HarnessError::from(e)))?;
        report.verification = Some(v);
    }
    emit(&report.to_json(), cli.out.as_deref())?;
    let mut violations = check_bounds(&report).violations(&report);
    if report.verification.as_ref().is_some_and(|v| !v.all_agree()) {
        violations.push(
            Violation::new("oracle-disagreement", "see verification").on(report.instance.clone()),
        );
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(json(&violations)))
    }
}

fn cmd_scan(cli: &Cli, verify: bool) -> Result<(), Failure> {
    let cfg = scan_config(cli, require(&cli.p, "p")?, verify)?;
    let summary = run_scan(&cfg)?;
    emit(&summary.render(cfg.out_format)?, cfg.out_path.as_deref())?;
    if !summary.passed() {
        return Err(Failure::Violation(json(&summary.violations)));
    }
    if verify && summary.records.iter().any(|r| r.verified != Some(true)) {
        return Err(Failure::Violation("oracle disagreement".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Analyze { instance } => cmd_analyze(cli, instance),
        Command::Scan => cmd_scan(cli, cli.verify),
        Command::OracleCheck => cmd_scan(cli, true),
        Command::Char2Verify => {
            if cli.p.is_some_and(|p| p != 2) {
                return Err(Failure::Usage(
                    "char2-verify always works with p = 2".into(),
                ));
            }
            let rep = char2_verify(
                require(&cli.n, "n")?,
                &require(&cli.mults, "mults")?,
                cli.samples.unwrap_or(20),
                cli.seed,
                cli.k,
            )?;
            emit(&json(&rep), out)?;
            if rep.uncorrected_differs {
                eprintln!(
                    "note: the uncorrected formula sum min(d_i, d_sigma(i)) gives {}; the a-number is g - sum min = {}",
                    rep.uncorrected_value, rep.corrected_value
                );
            }
            verdict(rep.passed(), "a-number is not g - sum min(d_i, d_sigma(i))")
        }
        Command::SuperspecialSearch { n_max, r_max } => {
            let rep = superspecial_search(
                require(&cli.p, "p")?,
                *n_max,
                *r_max,
                cli.samples.unwrap_or(5),
                cli.seed,
            )?;
            emit(&json(&rep), out)?;
            verdict(rep.passed(), "superspecial search")
        }
        Command::LemmaRank {
            r,
            deg_max,
            m_max,
            trials,
            exhaustive,
        } => {
            let p = require(&cli.p, "p")?;
            let k = cli.k.unwrap_or(1);
            let rep = if *exhaustive {
                lemma_rank_exhaustive(p, k, *deg_max, *m_max)?
            } else {
                lemma_rank_random(&LemmaConfig {
                    p,
                    k,
                    r: *r,
                    deg_max: *deg_max,
                    m_max: *m_max,
                    trials: *trials,
                    seed: cli.seed,
                })?
            };
            emit(&json(&rep), out)?;
            verdict(rep.passed(), "span dimension lemma")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match f {
                // already machine-readable
                Failure::Violation(_) => eprintln!("{}", f.message()),
                _ => eprintln!("error: {}", f.message()),
            }
            ExitCode::from(f.code())
        }
    }
}
