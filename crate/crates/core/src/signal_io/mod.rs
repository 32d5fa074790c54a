//! Reading and writing signals and result tables.

mod csv;
mod wav;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use self::csv::{
    format_significant, parse_csv, read_csv, render_csv, write_csv, Column, ColumnData, CsvTable,
    SIGNIFICANT_DIGITS,
};
pub use self::wav::{decode_wav, encode_wav_pcm16, quantize_pcm16, WavError, WavFormat};

use crate::error::{Error, Result};
use crate::wave::{add_gaussian_noise, synth_am_sinusoid, Wave};

/// Frame rate assumed for CSV input, which carries no header metadata.
pub const DEFAULT_CSV_FPS: u32 = 44_100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalFormat {
    Wav16,
    Csv,
}

impl SignalFormat {
    /// Format implied by the file extension (case-insensitive).
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("wav") => Ok(SignalFormat::Wav16),
            Some("csv") => Ok(SignalFormat::Csv),
            _ => Err(Error::InvalidConfig(format!(
                "{}: unrecognized signal format (expected .wav or .csv)",
                path.display()
            ))),
        }
    }
}

impl fmt::Display for SignalFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalFormat::Wav16 => "wav16",
            SignalFormat::Csv => "csv",
        })
    }
}

/// Description of a signal read from disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalFile {
    pub path: PathBuf,
    pub format: SignalFormat,
    pub channels: u16,
    pub fps: u32,
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a 16-bit PCM WAV file as a mono wave scaled to `[-1, 1)`.
pub fn read_wav(path: &Path) -> Result<Wave> {
    read_wav_with_format(path).map(|(w, _)| w)
}

fn read_wav_with_format(path: &Path) -> Result<(Wave, WavFormat)> {
    let bytes = read_bytes(path)?;
    decode_wav(&bytes).map_err(|source| Error::Wav {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a mono 16-bit PCM WAV file, saturating samples outside `[-1, 1]`.
pub fn write_wav16(path: &Path, w: &Wave) -> Result<()> {
    let pcm: Vec<i16> = w.samples().iter().map(|&s| quantize_pcm16(s)).collect();
    fs::write(path, encode_wav_pcm16(&pcm, 1, w.fps())).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a signal from a CSV file: the `sample` column if present, else the
/// last column.
pub fn read_csv_signal(path: &Path, fps: u32) -> Result<Wave> {
    let table = read_csv(path)?;
    let samples = match table.column("sample") {
        Some(c) => c.to_vec(),
        None => table
            .columns
            .last()
            .cloned()
            .ok_or_else(|| Error::Csv(format!("{}: no columns", path.display())))?,
    };
    Wave::new(samples, fps).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
}

/// Reads a WAV or CSV signal, dispatching on the extension. `csv_fps` is used
/// only for CSV input.
pub fn read_signal(path: &Path, csv_fps: u32) -> Result<(Wave, SignalFile)> {
    let format = SignalFormat::from_path(path)?;
    let (wave, channels) = match format {
        SignalFormat::Wav16 => {
            let (w, fmt) = read_wav_with_format(path)?;
            (w, fmt.channels)
        }
        SignalFormat::Csv => (read_csv_signal(path, csv_fps)?, 1),
    };
    let file = SignalFile {
        path: path.to_path_buf(),
        format,
        channels,
        fps: wave.fps(),
    };
    Ok((wave, file))
}

/// Writes `w` as a two-column CSV (`index`, `sample`).
pub fn write_signal_csv(path: &Path, w: &Wave) -> Result<()> {
    write_csv(
        path,
        &[
            Column::integer("index", (0..w.len()).collect()),
            Column::real("sample", w.samples().to_vec()),
        ],
    )
}

/// A synthetic amplitude-modulated test signal, parsed from text such as
/// `am:cycles=20,coeffs=0.2,1,0.5,n=4000,fps=44100,noise=0.1,seed=7`.
///
/// Bare numbers after `coeffs=` extend the coefficient list. Defaults:
/// 20 cycles, constant envelope 1, 44100 samples at 44100 fps, no noise,
/// seed 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub cycles: f64,
    pub coeffs: Vec<f64>,
    pub n: usize,
    pub fps: u32,
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            cycles: 20.0,
            coeffs: vec![1.0],
            n: 44_100,
            fps: 44_100,
            noise: 0.0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn generate(&self) -> Result<Wave> {
        let w = synth_am_sinusoid(self.cycles, &self.coeffs, self.n, self.fps)?;
        if self.noise > 0.0 {
            add_gaussian_noise(&w, self.noise, self.seed)
        } else {
            Ok(w)
        }
    }
}

fn parse_number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("synth: bad value {value:?} for {key}")))
}

impl FromStr for SynthSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("am:")
            .or_else(|| (s == "am").then_some(""))
            .ok_or_else(|| Error::InvalidConfig(format!("synth: unknown kind in {s:?} (expected am:...)")))?;
        let mut spec = SynthSpec::default();
        let mut coeffs: Option<Vec<f64>> = None;
        let mut in_coeffs = false;
        for token in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let Some((key, value)) = token.split_once('=') else {
                if in_coeffs {
                    coeffs.get_or_insert_with(Vec::new).push(parse_number("coeffs", token)?);
                    continue;
                }
                return Err(Error::InvalidConfig(format!("synth: expected key=value, got {token:?}")));
            };
            in_coeffs = false;
            match key.trim() {
                "cycles" => spec.cycles = parse_number(key, value)?,
                "coeffs" => {
                    in_coeffs = true;
                    coeffs.get_or_insert_with(Vec::new).push(parse_number(key, value)?);
                }
                "n" => spec.n = parse_number(key, value)?,
                "fps" => spec.fps = parse_number(key, value)?,
                "noise" => spec.noise = parse_number(key, value)?,
                "seed" => spec.seed = parse_number(key, value)?,
                other => return Err(Error::InvalidConfig(format!("synth: unknown key {other:?}"))),
            }
        }
        if let Some(c) = coeffs {
            spec.coeffs = c;
        }
        if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
            return Err(Error::InvalidConfig(format!("synth: noise must be ≥ 0, got {}", spec.noise)));
        }
        Ok(spec)
    }
}
