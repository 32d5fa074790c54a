//! Command-line front end. Every verb is a thin wrapper over library calls;
//! results are written as CSV.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{BaselineConfig, BaselineMethod, HilbertOrder};
use crate::cycles::{average_waveform, segment_cycles};
use crate::error::{Error, Result};
use crate::extract::{extract_envelope, extract_frontiers, Anchor};
use crate::metrics::{compare, ComparisonRecord, Method};
use crate::signal_io::{
    read_signal, render_csv, write_csv, write_signal_csv, write_wav16, Column, SignalFormat,
    SynthSpec, DEFAULT_CSV_FPS,
};
use crate::wave::Wave;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INGEST: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "envelope", version, about = "Temporal envelope extraction with a rolling circle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Envelope of a signal, plus its anchors.
    Extract(ExtractArgs),
    /// Superior and inferior frontiers (same as `extract --mode frontiers`).
    Frontiers(FrontiersArgs),
    /// Pseudo-cycle bounds and the average waveform.
    Cycles(CyclesArgs),
    /// Error and timing of the rolling-circle method against the baselines.
    Compare(CompareArgs),
    /// Write a synthetic AM test signal to a WAV or CSV file.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input signal (.wav, 16-bit PCM, or .csv with a `sample` column).
    pub input: Option<PathBuf>,
    /// Synthetic input instead of a file, e.g. "am:cycles=20,coeffs=0.2,1,0.5".
    #[arg(long, conflicts_with = "input")]
    pub synth: Option<String>,
    /// Frame rate assumed for CSV input.
    #[arg(long, default_value_t = DEFAULT_CSV_FPS)]
    pub fps: u32,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub sg_window: Option<usize>,
    #[arg(long)]
    pub sg_degree: Option<usize>,
    /// Overrides the cutoff of both the low-pass and the analytic-signal
    /// pre-filter.
    #[arg(long)]
    pub cutoff_hz: Option<f64>,
    #[arg(long, value_enum, default_value_t = HilbertOrderArg::RectifyFirst)]
    pub hilbert_order: HilbertOrderArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Single,
    Frontiers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Present,
    Smoothing,
    Lowpass,
    Hilbert,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HilbertOrderArg {
    /// Rectify the filtered wave before the transform.
    RectifyFirst,
    /// Modulus of the analytic signal of the filtered wave.
    TransformFirst,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Mode::Single)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = MethodArg::Present)]
    pub method: MethodArg,
    #[command(flatten)]
    pub baseline: BaselineArgs,
    /// Envelope CSV; anchors go to `<stem>.anchors.csv` alongside.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FrontiersArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Cycle bounds CSV; the average waveform goes to
    /// `<stem>.mean_cycle.csv` and frontier positions to `<stem>.midline.csv`.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
    #[command(flatten)]
    pub baseline: BaselineArgs,
    /// Results CSV; printed to stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub synth: String,
    /// Destination, `.wav` (16-bit PCM) or `.csv`.
    #[arg(long, short)]
    pub output: PathBuf,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) => EXIT_USAGE,
        Error::Io { .. } | Error::Wav { .. } | Error::Csv(_) => EXIT_INGEST,
        _ => EXIT_DEGENERATE,
    }
}

impl InputArgs {
    /// The input wave and a name for it.
    pub fn load(&self) -> Result<(Wave, String)> {
        match (&self.input, &self.synth) {
            (Some(path), None) => {
                let (w, _) = read_signal(path, self.fps)?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                Ok((w, name))
            }
            (None, Some(spec)) => Ok((spec.parse::<SynthSpec>()?.generate()?, "synth".into())),
            _ => Err(Error::InvalidConfig("give an input file or --synth".into())),
        }
    }
}

impl BaselineArgs {
    pub fn config(&self, method: BaselineMethod) -> BaselineConfig {
        let mut cfg = BaselineConfig::for_method(method);
        if let Some(w) = self.sg_window {
            cfg.sg_window = w;
        }
        if let Some(d) = self.sg_degree {
            cfg.sg_degree = d;
        }
        if let Some(c) = self.cutoff_hz {
            cfg.butter_cutoff_hz = c;
        }
        cfg.hilbert_order = match self.hilbert_order {
            HilbertOrderArg::RectifyFirst => HilbertOrder::RectifyThenTransform,
            HilbertOrderArg::TransformFirst => HilbertOrder::TransformThenModulus,
        };
        cfg
    }

    pub fn methods(&self, m: MethodArg) -> Vec<Method> {
        let baseline = |b| Method::Baseline(self.config(b));
        match m {
            MethodArg::Present => vec![Method::Present],
            MethodArg::Smoothing => vec![baseline(BaselineMethod::Smoothing)],
            MethodArg::Lowpass => vec![baseline(BaselineMethod::Lowpass)],
            MethodArg::Hilbert => vec![baseline(BaselineMethod::Hilbert)],
            MethodArg::All => std::iter::once(Method::Present)
                .chain(BaselineMethod::ALL.into_iter().map(baseline))
                .collect(),
        }
    }
}

/// `dir/name.csv` → `dir/name.<suffix>.csv`.
pub fn sibling_path(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn anchor_columns(anchors: &[Anchor]) -> [Column; 2] {
    [
        Column::integer("index", anchors.iter().map(|a| a.index).collect()),
        Column::real("amplitude", anchors.iter().map(|a| a.amplitude).collect()),
    ]
}

fn base_columns(w: &Wave) -> Vec<Column> {
    vec![
        Column::integer("index", (0..w.len()).collect()),
        Column::real("sample", w.samples().to_vec()),
    ]
}

fn run_extract_mode(w: &Wave, mode: Mode, method: &Method, output: &Path) -> Result<()> {
    let mut columns = base_columns(w);
    match (mode, method) {
        (Mode::Single, Method::Present) => {
            let r = extract_envelope(w)?;
            columns.push(Column::real("envelope", r.envelope));
            write_csv(output, &columns)?;
            write_csv(&sibling_path(output, "anchors"), &anchor_columns(&r.anchors))
        }
        (Mode::Single, Method::Baseline(cfg)) => {
            columns.push(Column::real("envelope", cfg.envelope(w)?));
            write_csv(output, &columns)
        }
        (Mode::Frontiers, Method::Present) => {
            let f = extract_frontiers(w)?;
            columns.push(Column::real("envelope", f.superior.envelope));
            columns.push(Column::real("inferior", f.inferior.envelope));
            write_csv(output, &columns)?;
            let mut anchors = f.superior.anchors;
            anchors.extend(f.inferior.anchors);
            anchors.sort_by_key(|a| a.index);
            write_csv(&sibling_path(output, "anchors"), &anchor_columns(&anchors))
        }
        (Mode::Frontiers, Method::Baseline(_)) => Err(Error::InvalidConfig(
            "frontiers mode is only available for the present method".into(),
        )),
    }
}

fn run_cycles(w: &Wave, output: &Path) -> Result<()> {
    let f = extract_frontiers(w)?;
    let seg = segment_cycles(w, &f)?;
    let avg = average_waveform(w, &seg)?;
    let (starts, ends): (Vec<usize>, Vec<usize>) = seg.cycle_bounds().unzip();
    write_csv(
        output,
        &[
            Column::integer("cycle", (0..starts.len()).collect()),
            Column::integer("start", starts),
            Column::integer("end", ends),
        ],
    )?;
    write_csv(
        &sibling_path(output, "mean_cycle"),
        &[
            Column::integer("index", (0..avg.length).collect()),
            Column::real("value", avg.mean_cycle),
        ],
    )?;
    let k = seg.midline.len();
    write_csv(
        &sibling_path(output, "midline"),
        &[
            Column::integer("pair", (0..k).collect()),
            Column::integer("positive", seg.positive_positions[..k].to_vec()),
            Column::integer("negative", seg.negative_positions[..k].to_vec()),
            Column::real("midline", seg.midline),
        ],
    )
}

/// Comparison rows as CSV columns.
pub fn comparison_columns(records: &[ComparisonRecord]) -> Vec<Column> {
    // Signal and method names are text; keep them out of the numeric writer.
    vec![
        Column::real("error_per_frame", records.iter().map(|r| r.error_per_frame).collect()),
        Column::real("elapsed_seconds", records.iter().map(|r| r.elapsed_seconds).collect()),
    ]
}

/// Renders comparison records with the header
/// `signal_name,method,error_per_frame,elapsed_seconds`.
pub fn render_comparison(records: &[ComparisonRecord]) -> Result<String> {
    let numeric = render_csv(&comparison_columns(records))?;
    let mut lines = numeric.lines();
    let header = lines.next().unwrap_or_default();
    let mut out = format!("signal_name,method,{header}\n");
    for (r, line) in records.iter().zip(lines) {
        if r.signal_name.contains(',') {
            return Err(Error::Csv(format!("signal name {:?} contains a comma", r.signal_name)));
        }
        out.push_str(&format!("{},{},{line}\n", r.signal_name, r.method));
    }
    Ok(out)
}

fn run_compare(args: &CompareArgs) -> Result<()> {
    let (w, name) = args.input.load()?;
    let methods = args.baseline.methods(args.method);
    for m in &methods {
        if let Method::Baseline(cfg) = m {
            cfg.validate(w.fps())?;
        }
    }
    let records = compare(&w, &name, &methods)?;
    let text = render_comparison(&records)?;
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn run_synth(args: &SynthArgs) -> Result<()> {
    let w = args.synth.parse::<SynthSpec>()?.generate()?;
    match SignalFormat::from_path(&args.output)? {
        SignalFormat::Wav16 => write_wav16(&args.output, &w),
        SignalFormat::Csv => write_signal_csv(&args.output, &w),
    }
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Extract(a) => {
            let (w, _) = a.input.load()?;
            let method = match a.method {
                MethodArg::All => {
                    return Err(Error::InvalidConfig("extract takes a single method".into()))
                }
                m => a.baseline.methods(m).remove(0),
            };
            if let Method::Baseline(cfg) = &method {
                cfg.validate(w.fps())?;
            }
            run_extract_mode(&w, a.mode, &method, &a.output)
        }
        Command::Frontiers(a) => {
            let (w, _) = a.input.load()?;
            run_extract_mode(&w, Mode::Frontiers, &Method::Present, &a.output)
        }
        Command::Cycles(a) => {
            let (w, _) = a.input.load()?;
            run_cycles(&w, &a.output)
        }
        Command::Compare(a) => run_compare(a),
        Command::Synth(a) => run_synth(a),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
