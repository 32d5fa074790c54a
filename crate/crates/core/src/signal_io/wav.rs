//! RIFF/WAVE PCM 16-bit reader and writer.

use std::io::Write;

use thiserror::Error;

use crate::wave::Wave;

const PCM_FORMAT: u16 = 1;
const EXTENSIBLE_FORMAT: u16 = 0xFFFE;
const PCM_SCALE: f64 = 32768.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WavError {
    #[error("malformed header: file shorter than the 12-byte RIFF header")]
    TooShort,
    #[error("malformed header: missing RIFF signature")]
    NotRiff,
    #[error("malformed header: RIFF form type is not WAVE")]
    NotWave,
    #[error("malformed header: no fmt chunk before data")]
    MissingFmt,
    #[error("malformed header: fmt chunk is {0} bytes, need at least 16")]
    ShortFmt(u32),
    #[error("malformed header: no data chunk")]
    MissingData,
    #[error("truncated file: {chunk} chunk declares {declared} bytes but only {available} remain")]
    Truncated {
        chunk: String,
        declared: u32,
        available: usize,
    },
    #[error("unsupported codec: format tag {0:#06x} (only PCM is supported)")]
    UnsupportedFormat(u16),
    #[error("unsupported codec: {0}-bit samples (only 16-bit PCM is supported)")]
    UnsupportedBitDepth(u16),
    #[error("malformed header: zero channels")]
    NoChannels,
    #[error("malformed header: zero sample rate")]
    ZeroSampleRate,
    #[error("malformed header: block alignment {align} does not match {channels} channels of 16-bit samples")]
    BadBlockAlign { align: u16, channels: u16 },
    #[error("empty data chunk")]
    NoSamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WavFormat {
    pub channels: u16,
    pub sample_rate: u32,
    pub bits_per_sample: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Parses a complete WAV file image. Channels are mixed down by their mean
/// and samples scaled by 1/32768.
pub fn decode_wav(bytes: &[u8]) -> Result<(Wave, WavFormat), WavError> {
    if bytes.len() < 12 {
        return Err(WavError::TooShort);
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(WavError::NotRiff);
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotWave);
    }

    let mut format: Option<WavFormat> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4);
        let body_start = pos + 8;
        let available = bytes.len() - body_start;
        let body_len = size as usize;
        let chunk_name = || String::from_utf8_lossy(id).trim_end().to_string();

        if id == b"fmt " {
            if body_len > available {
                return Err(WavError::Truncated {
                    chunk: chunk_name(),
                    declared: size,
                    available,
                });
            }
            if size < 16 {
                return Err(WavError::ShortFmt(size));
            }
            let body = &bytes[body_start..body_start + body_len];
            let mut tag = u16_at(body, 0);
            let channels = u16_at(body, 2);
            let sample_rate = u32_at(body, 4);
            let block_align = u16_at(body, 12);
            let bits_per_sample = u16_at(body, 14);
            if tag == EXTENSIBLE_FORMAT && body.len() >= 26 {
                tag = u16_at(body, 24);
            }
            if tag != PCM_FORMAT {
                return Err(WavError::UnsupportedFormat(tag));
            }
            if bits_per_sample != 16 {
                return Err(WavError::UnsupportedBitDepth(bits_per_sample));
            }
            if channels == 0 {
                return Err(WavError::NoChannels);
            }
            if sample_rate == 0 {
                return Err(WavError::ZeroSampleRate);
            }
            if block_align as u32 != 2 * channels as u32 {
                return Err(WavError::BadBlockAlign {
                    align: block_align,
                    channels,
                });
            }
            format = Some(WavFormat {
                channels,
                sample_rate,
                bits_per_sample,
            });
        } else if id == b"data" {
            let fmt = format.ok_or(WavError::MissingFmt)?;
            if body_len > available {
                return Err(WavError::Truncated {
                    chunk: chunk_name(),
                    declared: size,
                    available,
                });
            }
            let data = &bytes[body_start..body_start + body_len];
            let frame_bytes = 2 * fmt.channels as usize;
            if data.len() < frame_bytes {
                return Err(WavError::NoSamples);
            }
            let samples = data
                .chunks_exact(frame_bytes)
                .map(|frame| {
                    let sum: f64 = frame
                        .chunks_exact(2)
                        .map(|s| i16::from_le_bytes([s[0], s[1]]) as f64 / PCM_SCALE)
                        .sum();
                    sum / fmt.channels as f64
                })
                .collect();
            let wave = Wave::new(samples, fmt.sample_rate).map_err(|_| WavError::NoSamples)?;
            return Ok((wave, fmt));
        }
        // Chunks are word aligned.
        pos = body_start.saturating_add(body_len).saturating_add(body_len & 1);
    }
    Err(if format.is_none() {
        WavError::MissingFmt
    } else {
        WavError::MissingData
    })
}

/// Quantizes a sample in `[-1, 1]` to 16-bit PCM, saturating outside.
pub fn quantize_pcm16(x: f64) -> i16 {
    (x * PCM_SCALE).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16
}

/// Serializes interleaved 16-bit PCM frames.
pub fn encode_wav_pcm16(interleaved: &[i16], channels: u16, sample_rate: u32) -> Vec<u8> {
    let data_len = (interleaved.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2 * channels as u32).to_le_bytes());
    out.extend_from_slice(&(2 * channels).to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in interleaved {
        out.write_all(&s.to_le_bytes()).expect("writing to a Vec cannot fail");
    }
    out
}
