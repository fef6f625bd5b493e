//! Monte-Carlo FER/BER estimation with sequential stopping.
//!
//! Frames are grouped into fixed-size chunks. Chunks are decoded in parallel
//! but folded into the running totals strictly in frame order, and the stop
//! rule is evaluated after every chunk, so a point's statistics depend only
//! on the seed and the chunk size, never on the worker count.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{all_zero_frame, ebno_to_sigma, frame_seed, LlrFrame};
use crate::decoder::DecoderConfig;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::setup::CodeSetup;

/// Frames decoded by one work unit.
pub const CHUNK_FRAMES: u64 = 32;

/// When to stop collecting frames at one SNR.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_frame_errors: 100, max_frames: 10_000_000 }
    }
}

/// Statistics collected at one Eb/N0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub ebno_db: f64,
    /// Seed stream of this point; frame `i` uses `frame_seed(base, stream, i)`.
    pub stream: u64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    /// Frames that satisfied the syndrome but differ from the sent codeword.
    pub undetected_errors: u64,
    /// Number of information bits compared per frame.
    pub info_bits: u64,
    /// iterations used → frames.
    pub iteration_histogram: BTreeMap<usize, u64>,
    pub wall_seconds: f64,
    /// `max_frames` was reached before `min_frame_errors`.
    pub ceiling_reached: bool,
    /// No error was observed at all, so the FER is only bounded above.
    pub upper_bound_only: bool,
}

impl SimPoint {
    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.frames as f64
        }
    }

    pub fn ber(&self) -> f64 {
        let bits = self.frames * self.info_bits;
        if bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / bits as f64
        }
    }

    /// Binomial standard error of [`SimPoint::fer`].
    pub fn fer_sigma(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        let p = self.fer();
        (p * (1.0 - p) / self.frames as f64).sqrt()
    }

    pub fn mean_iterations(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        let total: u64 = self.iteration_histogram.iter().map(|(&t, &c)| t as u64 * c).sum();
        total as f64 / self.frames as f64
    }

    /// `3/frames` when no error was seen (the usual 95% bound), else the FER.
    pub fn fer_upper_bound(&self) -> f64 {
        if self.upper_bound_only && self.frames > 0 {
            3.0 / self.frames as f64
        } else {
            self.fer()
        }
    }
}

/// A list of Eb/N0 points decoded with one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub decoder: DecoderConfig,
    pub snr_db: Vec<f64>,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
    /// Print progress lines to standard error.
    pub progress: bool,
}

impl SweepConfig {
    pub fn new(decoder: DecoderConfig, snr_db: Vec<f64>) -> Self {
        Self { decoder, snr_db, stop: StopRule::default(), seed: 1, workers: 0, progress: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stop.min_frame_errors == 0 {
            return Err(Error::InvalidConfig("min_frame_errors must be at least 1".into()));
        }
        if self.stop.max_frames == 0 {
            return Err(Error::InvalidConfig("max_frames must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::InvalidConfig("empty SNR list".into()));
        }
        if self.snr_db.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfig("SNR list must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Default)]
struct ChunkStats {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
    undetected: u64,
    iterations: Vec<usize>,
}

fn decode_chunk<T: Real>(
    setup: &CodeSetup,
    decoder: &mut dyn crate::decoder::Decoder<T>,
    sigma: f64,
    seed: u64,
    stream: u64,
    frames: std::ops::Range<u64>,
) -> ChunkStats {
    let mut stats = ChunkStats::default();
    for index in frames {
        let frame: LlrFrame<T> = all_zero_frame(setup.n, sigma, frame_seed(seed, stream, index));
        let r = decoder.decode(&frame.values);
        stats.frames += 1;
        stats.iterations.push(r.iterations_used);
        if !r.is_all_zero() {
            stats.frame_errors += 1;
            stats.bit_errors += r.c_hat[setup.info_positions.clone()].iter().map(|&b| b as u64).sum::<u64>();
            if r.converged {
                stats.undetected += 1;
            }
        }
    }
    stats
}

/// Decodes all-zero frames at one Eb/N0 until the stop rule fires.
///
/// Runs on the current rayon pool. `stream` separates the seed ranges of
/// different points of a sweep.
pub fn run_point<T: Real>(
    setup: &CodeSetup,
    config: &DecoderConfig,
    ebno_db: f64,
    stop: StopRule,
    seed: u64,
    stream: u64,
) -> Result<SimPoint> {
    run_point_with_progress::<T>(setup, config, ebno_db, stop, seed, stream, false)
}

fn run_point_with_progress<T: Real>(
    setup: &CodeSetup,
    config: &DecoderConfig,
    ebno_db: f64,
    stop: StopRule,
    seed: u64,
    stream: u64,
    progress: bool,
) -> Result<SimPoint> {
    // fail fast on a bad configuration
    setup.decoder::<T>(config)?;
    let sigma = ebno_to_sigma(ebno_db, setup.rate());
    let start = Instant::now();
    let mut last_report = Instant::now();
    let mut point = SimPoint {
        ebno_db,
        stream,
        frames: 0,
        frame_errors: 0,
        bit_errors: 0,
        undetected_errors: 0,
        info_bits: setup.info_positions.len() as u64,
        iteration_histogram: BTreeMap::new(),
        wall_seconds: 0.0,
        ceiling_reached: false,
        upper_bound_only: false,
    };
    let per_batch = (rayon::current_num_threads() as u64 * 4).max(1);
    let mut next_chunk = 0u64;
    'outer: while point.frames < stop.max_frames {
        let chunks: Vec<std::ops::Range<u64>> = (next_chunk..next_chunk + per_batch)
            .map(|c| c * CHUNK_FRAMES..((c + 1) * CHUNK_FRAMES).min(stop.max_frames))
            .filter(|r| !r.is_empty())
            .collect();
        next_chunk += per_batch;
        let results: Vec<ChunkStats> = chunks
            .into_par_iter()
            .map_init(
                || setup.decoder::<T>(config).expect("validated above"),
                |dec, frames| decode_chunk(setup, dec.as_mut(), sigma, seed, stream, frames),
            )
            .collect();
        for chunk in results {
            point.frames += chunk.frames;
            point.frame_errors += chunk.frame_errors;
            point.bit_errors += chunk.bit_errors;
            point.undetected_errors += chunk.undetected;
            for t in chunk.iterations {
                *point.iteration_histogram.entry(t).or_insert(0) += 1;
            }
            if point.frame_errors >= stop.min_frame_errors {
                break 'outer;
            }
        }
        if progress && last_report.elapsed().as_secs() >= 30 {
            eprintln!(
                "  {:.2} dB: {} frames, {} errors, fer={:.3e} ({:.0}s)",
                ebno_db,
                point.frames,
                point.frame_errors,
                point.fer(),
                start.elapsed().as_secs_f64()
            );
            last_report = Instant::now();
        }
    }
    point.wall_seconds = start.elapsed().as_secs_f64();
    point.ceiling_reached = point.frame_errors < stop.min_frame_errors;
    point.upper_bound_only = point.frame_errors == 0;
    Ok(point)
}

/// Runs every point of the sweep, calling `on_point` as each completes.
pub fn run_sweep_with<T: Real, F: FnMut(&SimPoint) + Send>(
    setup: &CodeSetup,
    cfg: &SweepConfig,
    mut on_point: F,
) -> Result<Vec<SimPoint>> {
    cfg.validate()?;
    let body = |on_point: &mut F| -> Result<Vec<SimPoint>> {
        let mut out = Vec::with_capacity(cfg.snr_db.len());
        for (i, &snr) in cfg.snr_db.iter().enumerate() {
            let p = run_point_with_progress::<T>(setup, &cfg.decoder, snr, cfg.stop, cfg.seed, i as u64, cfg.progress)?;
            if cfg.progress {
                eprintln!(
                    "{:.2} dB: fer={:.4e} ber={:.4e} frames={} errors={} mean_iters={:.2}{}",
                    p.ebno_db,
                    p.fer(),
                    p.ber(),
                    p.frames,
                    p.frame_errors,
                    p.mean_iterations(),
                    if p.ceiling_reached { " (frame ceiling reached)" } else { "" }
                );
            }
            on_point(&p);
            out.push(p);
        }
        Ok(out)
    };
    if cfg.workers == 0 {
        body(&mut on_point)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start {} workers: {e}", cfg.workers)))?;
        pool.install(|| body(&mut on_point))
    }
}

pub fn run_sweep<T: Real>(setup: &CodeSetup, cfg: &SweepConfig) -> Result<Vec<SimPoint>> {
    run_sweep_with::<T, _>(setup, cfg, |_| {})
}

/// Counted FER next to an MI-threshold estimate at one SNR.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiFerComparison {
    pub ebno_db: f64,
    pub counted_fer: f64,
    pub mi_fer: f64,
    /// `(mi − counted) / counted`; 0 when both are 0, infinite when only the count is 0.
    pub relative_deviation: f64,
}

impl MiFerComparison {
    /// `max(a, b) / min(a, b)`; 1 when both are 0.
    pub fn ratio(&self) -> f64 {
        let (lo, hi) = (self.counted_fer.min(self.mi_fer), self.counted_fer.max(self.mi_fer));
        if hi == 0.0 {
            1.0
        } else {
            hi / lo
        }
    }
}

pub fn relative_deviation(reference: f64, estimate: f64) -> f64 {
    if reference == 0.0 {
        if estimate == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (estimate - reference) / reference
    }
}

/// Pairs sweep points with `(ebno_db, estimated_fer)` entries at the same SNR.
pub fn compare_mi_fer(points: &[SimPoint], estimates: &[(f64, f64)]) -> Vec<MiFerComparison> {
    points
        .iter()
        .filter_map(|p| {
            let &(_, mi_fer) = estimates.iter().find(|(snr, _)| (snr - p.ebno_db).abs() < 1e-9)?;
            Some(MiFerComparison {
                ebno_db: p.ebno_db,
                counted_fer: p.fer(),
                mi_fer,
                relative_deviation: relative_deviation(p.fer(), mi_fer),
            })
        })
        .collect()
}

/// Version of the CSV/JSON layouts written by this module and the CLI.
pub const SCHEMA_VERSION: u32 = 1;

/// `# schema=N` followed by one `# key=value` line per entry.
pub fn write_header<W: Write>(w: &mut W, header: &[(String, String)]) -> io::Result<()> {
    writeln!(w, "# schema={SCHEMA_VERSION}")?;
    for (k, v) in header {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

/// Writes the header lines followed by one row per point.
pub fn write_points_csv<W: Write>(points: &[SimPoint], header: &[(String, String)], mut w: W) -> io::Result<()> {
    write_header(&mut w, header)?;
    writeln!(w, "snr_db,frames,frame_errors,fer,ber,mean_iters,undetected_errors,ceiling_reached")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{:.6e},{:.6e},{:.4},{},{}",
            p.ebno_db,
            p.frames,
            p.frame_errors,
            p.fer(),
            p.ber(),
            p.mean_iterations(),
            p.undetected_errors,
            p.ceiling_reached
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepReport<'a> {
    schema: u32,
    config: BTreeMap<&'a str, &'a str>,
    points: &'a [SimPoint],
}

/// JSON document with the header and full per-point histograms.
pub fn write_points_json<W: Write>(points: &[SimPoint], header: &[(String, String)], w: W) -> io::Result<()> {
    let report = SweepReport {
        schema: SCHEMA_VERSION,
        config: header.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
        points,
    };
    serde_json::to_writer_pretty(w, &report).map_err(io::Error::other)
}
