//! Command-line front end. The `qshift` binary is a thin wrapper over [`main`].

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, crossover_point, predict_cx, scaling_table, SizeRange};
use crate::builders::{build_shift, verify_shift, ShiftVariant};
use crate::circuit::{Circuit, GateCensus};
use crate::error::{Error, Result};
use crate::passes::{run_pipeline, PassPipeline};
use crate::qasm::{export_text_with, import_text, ExportOptions, NegativeControlStyle};
use crate::walk::{compare_variants, run_walk, CoinKind, CoinState, WalkConfig};

pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "qshift", version, about = "Basis-state shift circuits: build, lower, count, verify")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a shift circuit and write it as OpenQASM 3.0.
    Build {
        #[command(flatten)]
        shift: ShiftArgs,
        #[command(flatten)]
        export: ExportArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a pass pipeline over a circuit and write the result.
    Lower {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        pipeline: PipelineArg,
        #[command(flatten)]
        export: ExportArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gate census of a circuit, optionally after a pipeline.
    Count {
        #[command(flatten)]
        source: SourceArgs,
        /// Pipeline config to apply before counting.
        #[arg(long)]
        pipeline: Option<PathBuf>,
        /// Apply the shipped reference pipeline before counting.
        #[arg(long, conflicts_with = "pipeline")]
        reference: bool,
        #[arg(long, value_enum, default_value_t = Format::Aligned)]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the shift action on every working basis state.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        /// Amplitude tolerance for circuits with non-X gates.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Predicted and measured CX counts over a range of working sizes.
    Table {
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Variants to include (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        variants: Vec<ShiftVariant>,
        #[command(flatten)]
        pipeline: PipelineArg,
        #[arg(long, value_enum, default_value_t = Format::Aligned)]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Discrete-time quantum walk; writes the position distribution.
    Walk {
        #[arg(long, value_enum, default_value_t = ShiftVariant::Parallel)]
        variant: ShiftVariant,
        /// Position qubits (2^m sites).
        #[arg(short, long)]
        m: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "hadamard")]
        coin: String,
        #[arg(long, default_value_t = 0)]
        site: usize,
        /// Initial coin state: 0, 1 or symmetric.
        #[arg(long, default_value = "0")]
        coin_state: String,
        /// Also report the deviation of every variant from the dense oracle.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Working size at which the parallel prediction drops below QFT.
    Crossover,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    #[arg(long, value_enum)]
    pub variant: ShiftVariant,
    /// Position qubits (2^m sites).
    #[arg(short, long)]
    pub m: usize,
}

/// Either a circuit file or a variant and size to build.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// OpenQASM 3.0 circuit file.
    #[arg(long, conflicts_with_all = ["variant", "m"], required_unless_present_all = ["variant", "m"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, requires = "m")]
    pub variant: Option<ShiftVariant>,
    #[arg(short, long, requires = "variant")]
    pub m: Option<usize>,
}

impl SourceArgs {
    fn load(&self) -> Result<Circuit> {
        match (&self.input, self.variant, self.m) {
            (Some(path), _, _) => import_text(&fs::read_to_string(path)?),
            (None, Some(v), Some(m)) => build_shift(v, m),
            _ => Err(Error::InvalidArgument("need --input or --variant with -m".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct PipelineArg {
    /// Pipeline config (TOML); defaults to the shipped reference pipeline.
    #[arg(long)]
    pub pipeline: Option<PathBuf>,
}

impl PipelineArg {
    fn load(&self) -> Result<PassPipeline> {
        self.pipeline.as_ref().map_or_else(|| Ok(PassPipeline::reference()), PassPipeline::load)
    }
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum, default_value_t = NegCtrl::Modifier)]
    pub negctrl: NegCtrl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NegCtrl {
    Modifier,
    XConjugate,
}

impl ExportArgs {
    fn options(&self) -> ExportOptions {
        let negative_controls = match self.negctrl {
            NegCtrl::Modifier => NegativeControlStyle::Modifier,
            NegCtrl::XConjugate => NegativeControlStyle::XConjugate,
        };
        ExportOptions { negative_controls }
    }
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

impl OutArg {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    Ok(fs::write(path, text)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Aligned,
    Csv,
}

fn census_text(qubits: usize, census: &GateCensus, format: Format) -> String {
    match format {
        Format::Aligned => format!("{:<8}{:>8}\n{census}\n", "qubits", qubits),
        Format::Csv => {
            let mut out = format!("gate,controls,count\nqubits,,{qubits}\n");
            for ((tag, k), n) in census.counts() {
                out.push_str(&format!("{tag},{k},{n}\n"));
            }
            out.push_str(&format!("cx_total,,{}\ntwo_qubit_total,,{}\n", census.cx_total(), census.two_qubit_total()));
            out
        }
    }
}

/// Outcome of a successful command: text for stderr and the exit code.
pub struct Report {
    pub message: String,
    pub code: u8,
}

impl Report {
    fn ok() -> Self {
        Report { message: String::new(), code: 0 }
    }
}

pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Build { shift, export, out } => {
            let circuit = build_shift(shift.variant, shift.m)?;
            out.write(&export_text_with(&circuit, export.options())?)?;
            Ok(Report::ok())
        }
        Command::Lower { source, pipeline, export, out } => {
            let run = run_pipeline(&source.load()?, &pipeline.load()?)?;
            out.write(&export_text_with(&run.circuit, export.options())?)?;
            let log: Vec<String> = run
                .log
                .iter()
                .map(|r| format!("{:<24} qubits {:>3}  gates {:>6}  cx {:>6}", r.stage, r.qubits, r.census.total(), r.census.cx_total()))
                .collect();
            Ok(Report { message: log.join("\n"), code: 0 })
        }
        Command::Count { source, pipeline, reference, format, out } => {
            let mut circuit = source.load()?;
            let pipeline = match (pipeline, reference) {
                (Some(path), _) => Some(PassPipeline::load(path)?),
                (None, true) => Some(PassPipeline::reference()),
                (None, false) => None,
            };
            if let Some(p) = pipeline {
                circuit = run_pipeline(&circuit, &p)?.circuit;
            }
            out.write(&census_text(circuit.qubit_count(), &circuit.census(), *format))?;
            Ok(Report::ok())
        }
        Command::Verify { source, tol } => {
            let circuit = source.load()?;
            let m = circuit.layout().position_count();
            let failures = verify_shift(&circuit, *tol)?;
            let states = 2usize << m;
            if failures.is_empty() {
                println!("PASS: all {states} working basis states shift correctly (m = {m})");
                Ok(Report::ok())
            } else {
                let mut message = format!("FAIL: {} of {states} working basis states wrong (m = {m})", failures.len());
                for f in &failures {
                    message.push_str(&format!("\n  {f}"));
                }
                Ok(Report { message, code: EXIT_VERIFY })
            }
        }
        Command::Table { n_min, n_max, step, variants, pipeline, format, out } => {
            let range = SizeRange::new(*n_min, *n_max, *step)?;
            let variants = if variants.is_empty() { ShiftVariant::ALL.to_vec() } else { variants.clone() };
            let rows = scaling_table(range, &variants, &pipeline.load()?)?;
            let text = match format {
                Format::Aligned => analysis::format_aligned(&rows),
                Format::Csv => analysis::format_csv(&rows),
            };
            out.write(&text)?;
            Ok(Report::ok())
        }
        Command::Walk { variant, m, steps, coin, site, coin_state, compare, out } => {
            let config = WalkConfig {
                m: *m,
                steps: *steps,
                coin: coin.parse::<CoinKind>()?,
                initial_site: *site,
                initial_coin: coin_state.parse::<CoinState>()?,
                variant: *variant,
            };
            let walk = run_walk(&config)?;
            out.write(&walk.distribution.to_csv())?;
            if *compare {
                let cmp = compare_variants(&config)?;
                let lines: Vec<String> =
                    cmp.deviations.iter().map(|(v, d)| format!("deviation {v} {d:.3e}")).collect();
                return Ok(Report { message: lines.join("\n"), code: 0 });
            }
            Ok(Report::ok())
        }
        Command::Crossover => {
            let n = crossover_point();
            let parallel = predict_cx(ShiftVariant::Parallel, n)?;
            let qft = predict_cx(ShiftVariant::Qft, n)?;
            println!("crossover n = {n} (parallel {parallel} < qft {qft})");
            Ok(Report::ok())
        }
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if !report.message.is_empty() {
                eprintln!("{}", report.message);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
