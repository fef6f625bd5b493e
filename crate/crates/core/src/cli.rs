//! Command-line front end: `code-info`, `simulate`, `exit` and `tune`.
//!
//! Every setting can come from a flag, from a flat `key = value` file given
//! with `--config`, or from the defaults, in that order of precedence. Keys in
//! the file are the long flag names, e.g. `frames-max = 100000`. The resolved
//! settings are echoed into the header of every output file.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decoder::{Algorithm, DecoderConfig, DEFAULT_BETA, DEFAULT_NMS_WEIGHT};
use crate::error::{Error, Result};
use crate::exit::{
    optimize_beta, run_pilot, select_lmax, write_cloud_csv, write_curves_csv, write_probe_csv, LineSearch, MessageSide,
    MiCurves, PilotRun,
};
use crate::gf2::{code_by_key, load_alist, save_alist};
use crate::montecarlo::{run_sweep_with, write_points_csv, write_points_json, StopRule, SweepConfig, SCHEMA_VERSION};
use crate::scalar::Real;
use crate::setup::CodeSetup;

/// Smallest pilot set `exit` accepts.
pub const MIN_PILOT: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "quasi-bp", version, about = "Quasi-BP decoding of BCH codes: FER simulation and S-EXIT analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print code parameters and the parity-check matrix shape; `--out` writes the matrix as alist.
    CodeInfo(Flags),
    /// Monte-Carlo FER/BER sweep; writes CSV to `--out` and JSON next to it.
    Simulate(Flags),
    /// MI evolution curves, S-EXIT clouds and MI-threshold FER estimates from pilot frames.
    Exit(Flags),
    /// Select l_max from the MI curves at the anchor SNR and tune β for it.
    Tune(Flags),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    F64,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Flat `key = value` settings file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in code, e.g. bch_127_64.
    #[arg(long)]
    pub code: Option<String>,
    /// Parity-check matrix in alist format (instead of --code).
    #[arg(long)]
    pub alist: Option<PathBuf>,
    /// bp, ms, nms, oms, quasi_bp or quasi_ms.
    #[arg(long)]
    pub alg: Option<String>,
    /// Iteration limit (horizon for `exit` and `tune`).
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Redundancy factor of the decoding matrix.
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Dilation factor of the quasi decoders.
    #[arg(long)]
    pub delta2: Option<usize>,
    /// Merging weight of the quasi decoders.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Normalization weight of NMS / quasi-MS.
    #[arg(long)]
    pub nms_weight: Option<f64>,
    /// Offset of OMS.
    #[arg(long)]
    pub oms_offset: Option<f64>,
    /// Eb/N0 points in dB: `3,3.5,4` or `start:step:stop`.
    #[arg(long)]
    pub snr: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub frames_max: Option<u64>,
    #[arg(long)]
    pub min_errors: Option<u64>,
    /// Pilot frames per SNR for `exit` and `tune`.
    #[arg(long)]
    pub pilot: Option<usize>,
    /// Threshold of the MI-based FER estimate.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Scalar type of the decoder.
    #[arg(long, value_enum)]
    pub precision: Option<Precision>,
    /// Lower end of the β search interval.
    #[arg(long)]
    pub beta_min: Option<f64>,
    /// Upper end of the β search interval.
    #[arg(long)]
    pub beta_max: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| invalid(format!("bad value `{value}` for `{key}`")))
}

impl Flags {
    /// Reads a settings file: one `key = value` (or `key=value`) per line,
    /// `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut f = Flags::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| invalid(format!("config line {}: expected key = value", no + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "code" => f.code = Some(value.into()),
                "alist" => f.alist = Some(value.into()),
                "alg" => f.alg = Some(value.into()),
                "lmax" => f.lmax = Some(parse_value(&key, value)?),
                "delta1" => f.delta1 = Some(parse_value(&key, value)?),
                "delta2" => f.delta2 = Some(parse_value(&key, value)?),
                "beta" => f.beta = Some(parse_value(&key, value)?),
                "nms-weight" => f.nms_weight = Some(parse_value(&key, value)?),
                "oms-offset" => f.oms_offset = Some(parse_value(&key, value)?),
                "snr" => f.snr = Some(value.into()),
                "seed" => f.seed = Some(parse_value(&key, value)?),
                "frames-max" => f.frames_max = Some(parse_value(&key, value)?),
                "min-errors" => f.min_errors = Some(parse_value(&key, value)?),
                "pilot" => f.pilot = Some(parse_value(&key, value)?),
                "tau" => f.tau = Some(parse_value(&key, value)?),
                "workers" => f.workers = Some(parse_value(&key, value)?),
                "out" => f.out = Some(value.into()),
                "precision" => {
                    f.precision = Some(Precision::from_str(value, true).map_err(|_| invalid(format!("bad precision `{value}`")))?)
                }
                "beta-min" => f.beta_min = Some(parse_value(&key, value)?),
                "beta-max" => f.beta_max = Some(parse_value(&key, value)?),
                other => return Err(invalid(format!("config line {}: unknown key `{other}`", no + 1))),
            }
        }
        Ok(f)
    }

    /// Fields set here win; the rest come from `other`.
    pub fn or(self, other: Flags) -> Flags {
        Flags {
            config: self.config.or(other.config),
            code: self.code.or(other.code),
            alist: self.alist.or(other.alist),
            alg: self.alg.or(other.alg),
            lmax: self.lmax.or(other.lmax),
            delta1: self.delta1.or(other.delta1),
            delta2: self.delta2.or(other.delta2),
            beta: self.beta.or(other.beta),
            nms_weight: self.nms_weight.or(other.nms_weight),
            oms_offset: self.oms_offset.or(other.oms_offset),
            snr: self.snr.or(other.snr),
            seed: self.seed.or(other.seed),
            frames_max: self.frames_max.or(other.frames_max),
            min_errors: self.min_errors.or(other.min_errors),
            pilot: self.pilot.or(other.pilot),
            tau: self.tau.or(other.tau),
            workers: self.workers.or(other.workers),
            out: self.out.or(other.out),
            precision: self.precision.or(other.precision),
            beta_min: self.beta_min.or(other.beta_min),
            beta_max: self.beta_max.or(other.beta_max),
        }
    }
}

/// `3,3.5,4` or `start:step:stop` (inclusive, tolerant to rounding).
pub fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(invalid("empty SNR list"));
    }
    if text.contains(':') {
        let parts: Vec<f64> = text.split(':').map(|p| parse_value("snr", p)).collect::<Result<_>>()?;
        let [start, step, stop] = parts[..] else {
            return Err(invalid(format!("SNR range `{text}` must be start:step:stop")));
        };
        if !(step > 0.0) || stop < start {
            return Err(invalid(format!("SNR range `{text}` is empty")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // round to micro-dB so grids print cleanly
        return Ok((0..count).map(|i| ((start + i as f64 * step) * 1e6).round() / 1e6).collect());
    }
    text.split(',').map(|p| parse_value("snr", p)).collect()
}

/// Where the code comes from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeSource {
    Key(String),
    Alist(PathBuf),
}

/// Fully resolved settings of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub code: CodeSource,
    pub alg: Algorithm,
    pub lmax: usize,
    pub delta1: f64,
    pub delta2: usize,
    pub beta: f64,
    pub nms_weight: f64,
    pub oms_offset: f64,
    pub snr: Vec<f64>,
    pub seed: u64,
    pub frames_max: u64,
    pub min_errors: u64,
    pub pilot: Option<usize>,
    pub tau: f64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub precision: Precision,
    pub beta_range: (f64, f64),
}

impl RunConfig {
    /// Applies `--config` (if any) under the flags, then the defaults.
    pub fn resolve(flags: Flags) -> Result<Self> {
        let flags = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
                flags.or(Flags::from_config_text(&text)?)
            }
            None => flags,
        };
        let code = match (flags.code, flags.alist) {
            (Some(_), Some(_)) => return Err(invalid("give either --code or --alist, not both")),
            (Some(key), None) => CodeSource::Key(key),
            (None, Some(path)) => CodeSource::Alist(path),
            (None, None) => return Err(invalid("no code given (use --code or --alist)")),
        };
        let tau = flags.tau.unwrap_or(0.7);
        if !(tau > 0.0 && tau < 1.0) {
            return Err(invalid(format!("tau must lie in (0, 1), got {tau}")));
        }
        Ok(Self {
            code,
            alg: flags.alg.as_deref().unwrap_or("quasi_bp").parse()?,
            lmax: flags.lmax.unwrap_or(30),
            delta1: flags.delta1.unwrap_or(2.0),
            delta2: flags.delta2.unwrap_or(15),
            beta: flags.beta.unwrap_or(DEFAULT_BETA),
            nms_weight: flags.nms_weight.unwrap_or(DEFAULT_NMS_WEIGHT),
            oms_offset: flags.oms_offset.unwrap_or(0.0),
            snr: flags.snr.as_deref().map(parse_snr_grid).transpose()?.unwrap_or_default(),
            seed: flags.seed.unwrap_or(1),
            frames_max: flags.frames_max.unwrap_or(StopRule::default().max_frames),
            min_errors: flags.min_errors.unwrap_or(StopRule::default().min_frame_errors),
            pilot: flags.pilot,
            tau,
            workers: flags.workers.unwrap_or(0),
            out: flags.out,
            precision: flags.precision.unwrap_or(Precision::F64),
            beta_range: (flags.beta_min.unwrap_or(0.01), flags.beta_max.unwrap_or(1.0)),
        })
    }

    pub fn setup(&self) -> Result<CodeSetup> {
        match &self.code {
            CodeSource::Key(key) => CodeSetup::from_key(key, self.delta1),
            CodeSource::Alist(path) => {
                let text = std::fs::read_to_string(path)?;
                let name = path.file_stem().map_or("alist".into(), |s| s.to_string_lossy().into_owned());
                CodeSetup::from_matrix(name, load_alist(&text)?)
            }
        }
    }

    pub fn decoder_config(&self, setup: &CodeSetup) -> DecoderConfig {
        let mut cfg = if self.alg.is_quasi() {
            DecoderConfig::quasi(self.alg, self.lmax, setup.n, self.delta2).with_beta(self.beta)
        } else {
            DecoderConfig::flooding(self.alg, self.lmax)
        };
        cfg.nms_weight = self.nms_weight;
        cfg.oms_offset = self.oms_offset;
        cfg
    }

    /// `key=value` pairs in config-file syntax, for output headers.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| h.push((k.to_string(), v));
        match &self.code {
            CodeSource::Key(key) => put("code", key.clone()),
            CodeSource::Alist(path) => put("alist", path.display().to_string()),
        }
        put("alg", self.alg.name().into());
        put("lmax", self.lmax.to_string());
        put("delta1", self.delta1.to_string());
        if self.alg.is_quasi() {
            put("delta2", self.delta2.to_string());
            put("beta", self.beta.to_string());
        }
        if matches!(self.alg, Algorithm::Nms | Algorithm::QuasiMs) {
            put("nms-weight", self.nms_weight.to_string());
        }
        if self.alg == Algorithm::Oms {
            put("oms-offset", self.oms_offset.to_string());
        }
        put("snr", self.snr.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
        put("seed", self.seed.to_string());
        put("frames-max", self.frames_max.to_string());
        put("min-errors", self.min_errors.to_string());
        if let Some(p) = self.pilot {
            put("pilot", p.to_string());
        }
        put("tau", self.tau.to_string());
        put("precision", format!("{:?}", self.precision).to_lowercase());
        h
    }

    fn require_snr(&self) -> Result<&[f64]> {
        if self.snr.is_empty() {
            return Err(invalid("no SNR points given (use --snr)"));
        }
        Ok(&self.snr)
    }

    fn require_out(&self) -> Result<&Path> {
        self.out.as_deref().ok_or_else(|| invalid("no output path given (use --out)"))
    }
}

/// `base` with its extension replaced by `suffix` (e.g. `.cloud.csv`).
fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    base.with_file_name(format!("{stem}{suffix}"))
}

/// Opens every output before any work starts, so a bad path fails fast.
fn create_outputs(paths: &[PathBuf]) -> Result<Vec<BufWriter<File>>> {
    paths
        .iter()
        .map(|p| {
            File::create(p)
                .map(BufWriter::new)
                .map_err(|e| invalid(format!("cannot write {}: {e}", p.display())))
        })
        .collect()
}

/// Parses `args` and runs the command, printing a summary to `stdout`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            write!(stdout, "{}", e.render())?;
            return Ok(());
        }
        Err(e) => return Err(Error::Usage(e.render().to_string())),
    };
    match cli.command {
        Command::CodeInfo(f) => code_info(&RunConfig::resolve(f)?, stdout),
        Command::Simulate(f) => dispatch(&RunConfig::resolve(f)?, stdout, simulate::<f32>, simulate::<f64>),
        Command::Exit(f) => dispatch(&RunConfig::resolve(f)?, stdout, exit::<f32>, exit::<f64>),
        Command::Tune(f) => dispatch(&RunConfig::resolve(f)?, stdout, tune::<f32>, tune::<f64>),
    }
}

type Handler = fn(&RunConfig, &mut dyn Write) -> Result<()>;

fn dispatch(cfg: &RunConfig, stdout: &mut dyn Write, single: Handler, double: Handler) -> Result<()> {
    match cfg.precision {
        Precision::F32 => single(cfg, stdout),
        Precision::F64 => double(cfg, stdout),
    }
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

fn code_info(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let setup = cfg.setup()?;
    let g = &setup.graph;
    writeln!(out, "code      {}", setup.name)?;
    writeln!(out, "n         {}", setup.n)?;
    writeln!(out, "k         {}", setup.k)?;
    writeln!(out, "rate      {:.6}", setup.rate())?;
    if let CodeSource::Key(key) = &cfg.code {
        let spec = code_by_key(key)?;
        writeln!(out, "deg g     {}", spec.generator.degree().unwrap_or(0))?;
        writeln!(out, "t         {}", spec.designed_t)?;
    }
    writeln!(out, "H         {} x {} (delta1 = {})", g.rows(), g.cols(), cfg.delta1)?;
    writeln!(out, "rank H    {}", g.rank())?;
    writeln!(out, "row deg   {:.2} mean, {} max", g.mean_row_degree(), g.max_row_degree())?;
    writeln!(out, "col deg   {} max", g.max_col_degree())?;
    if let Some(path) = &cfg.out {
        std::fs::write(path, save_alist(g)).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
        writeln!(out, "wrote     {}", path.display())?;
    }
    Ok(())
}

fn simulate<T: Real>(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let snr = cfg.require_snr()?.to_vec();
    let csv_path = cfg.require_out()?.to_path_buf();
    let json_path = csv_path.with_extension("json");
    let mut files = create_outputs(&[csv_path.clone(), json_path.clone()])?;
    let setup = cfg.setup()?;
    let mut sweep = SweepConfig::new(cfg.decoder_config(&setup), snr);
    sweep.stop = StopRule { min_frame_errors: cfg.min_errors, max_frames: cfg.frames_max };
    sweep.seed = cfg.seed;
    sweep.workers = cfg.workers;
    sweep.progress = true;
    let points = run_sweep_with::<T, _>(&setup, &sweep, |p| {
        eprintln!(
            "{:.2} dB: fer={:.4e} ber={:.4e} ({} errors / {} frames{})",
            p.ebno_db,
            p.fer(),
            p.ber(),
            p.frame_errors,
            p.frames,
            if p.ceiling_reached { ", frame ceiling reached" } else { "" }
        );
    })?;
    let header = cfg.header();
    write_points_csv(&points, &header, &mut files[0])?;
    write_points_json(&points, &header, &mut files[1])?;
    for f in &mut files {
        f.flush()?;
    }
    writeln!(out, "snr_db  frames      errors  fer         ber         mean_iters")?;
    for p in &points {
        writeln!(
            out,
            "{:<7} {:<11} {:<7} {:<11.4e} {:<11.4e} {:.3}",
            p.ebno_db,
            p.frames,
            p.frame_errors,
            p.fer(),
            p.ber(),
            p.mean_iterations()
        )?;
    }
    writeln!(out, "wrote {} and {}", csv_path.display(), json_path.display())?;
    Ok(())
}

fn exit<T: Real>(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let pilot = cfg.pilot.unwrap_or(4000);
    if pilot < MIN_PILOT {
        return Err(invalid(format!("pilot set of {pilot} frames is too small (need at least {MIN_PILOT})")));
    }
    let snr = cfg.require_snr()?.to_vec();
    let base = cfg.require_out()?.to_path_buf();
    let paths = [base.clone(), sibling(&base, ".cloud.csv"), sibling(&base, ".fer.csv")];
    let mut files = create_outputs(&paths)?;
    let setup = cfg.setup()?;
    let dec = cfg.decoder_config(&setup);
    let runs: Vec<PilotRun> = with_pool(cfg.workers, || {
        snr.iter()
            .enumerate()
            .map(|(i, &s)| {
                eprintln!("{s:.2} dB: {pilot} pilot frames x {} iterations", dec.l_max);
                run_pilot::<T>(&setup, &dec, s, pilot, cfg.seed, i as u64)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let curves: Vec<MiCurves> = runs.iter().map(PilotRun::curves).collect::<Result<_>>()?;
    let mut header = cfg.header();
    header.push(("pilot".into(), pilot.to_string()));
    header.dedup_by(|a, b| a.0 == b.0);
    write_curves_csv(&curves, &header, &mut files[0])?;
    write_cloud_csv(&runs, MessageSide::CheckToVariable, &header, &mut files[1])?;
    {
        let w = &mut files[2];
        crate::montecarlo::write_header(w, &header)?;
        writeln!(w, "snr_db,pilot,counted_fer,mi_fer,tau")?;
        for r in &runs {
            writeln!(w, "{},{},{:.6e},{:.6e},{}", r.snr_db, pilot, r.counted_fer(), r.threshold_fer(cfg.tau), cfg.tau)?;
        }
    }
    for f in &mut files {
        f.flush()?;
    }
    writeln!(out, "snr_db  counted_fer  mi_fer(tau={})  final_i_ev  final_i_ec", cfg.tau)?;
    for (r, c) in runs.iter().zip(&curves) {
        writeln!(
            out,
            "{:<7} {:<12.4e} {:<15.4e} {:<11.4} {:.4}",
            r.snr_db,
            r.counted_fer(),
            r.threshold_fer(cfg.tau),
            c.i_ev.last().copied().unwrap_or(f64::NAN),
            c.i_ec.last().copied().unwrap_or(f64::NAN)
        )?;
    }
    let shown: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
    writeln!(out, "wrote {}", shown.join(", "))?;
    Ok(())
}

#[derive(Serialize)]
struct TuneReport<'a> {
    schema: u32,
    config: std::collections::BTreeMap<&'a str, &'a str>,
    snr_db: f64,
    horizon: usize,
    /// β the MI curves were traced with.
    curve_beta: f64,
    curves: &'a MiCurves,
    l_max: usize,
    beta: f64,
    objective: f64,
    probes: &'a [crate::exit::Probe],
}

/// The `tune` procedure: MI curves over the `cfg.lmax` horizon with the
/// configured β, l_max from their crossing, then β searched for that l_max.
/// Returns `(curves, l_max, search)`.
pub fn tune_parameters<T: Real>(setup: &CodeSetup, cfg: &RunConfig, snr: f64) -> Result<(MiCurves, usize, LineSearch)> {
    let pilot = cfg.pilot.unwrap_or(crate::exit::MIN_TUNING_FRAMES);
    let dec = cfg.decoder_config(setup);
    if !dec.algorithm.is_quasi() {
        return Err(invalid(format!("{} has no merging weight to tune", dec.algorithm)));
    }
    eprintln!("tracing MI curves at beta = {}", dec.beta);
    let curves = run_pilot::<T>(setup, &dec, snr, pilot, cfg.seed, 0)?.curves()?;
    let l_max = select_lmax(&curves).map_err(|e| match e {
        Error::NoIntersection { horizon } => invalid(format!(
            "I_EV and I_EC do not cross within {horizon} iterations; rerun with a longer horizon (--lmax)"
        )),
        other => other,
    })?;
    let mut at_lmax = dec.clone();
    at_lmax.l_max = l_max;
    eprintln!("tuning beta for l_max = {l_max}");
    let search = optimize_beta::<T>(setup, &at_lmax, snr, pilot, cfg.seed, cfg.beta_range, 1e-3)?;
    Ok((curves, l_max, search))
}

fn tune<T: Real>(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let snr = match cfg.require_snr()? {
        [one] => *one,
        _ => return Err(invalid("tune takes a single anchor SNR")),
    };
    let json_path = cfg.require_out()?.to_path_buf();
    let probe_path = sibling(&json_path, ".probes.csv");
    let mut files = create_outputs(&[json_path.clone(), probe_path.clone()])?;
    let setup = cfg.setup()?;
    let (curves, l_max, search) =
        with_pool(cfg.workers, || tune_parameters::<T>(&setup, cfg, snr))??;
    let header = cfg.header();
    let report = TuneReport {
        schema: SCHEMA_VERSION,
        config: header.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
        snr_db: snr,
        horizon: cfg.lmax,
        curve_beta: cfg.beta,
        curves: &curves,
        l_max,
        beta: search.beta,
        objective: search.objective,
        probes: &search.probes,
    };
    serde_json::to_writer_pretty(&mut files[0], &report).map_err(std::io::Error::other)?;
    writeln!(files[0])?;
    write_probe_csv(&search, &header, &mut files[1])?;
    for f in &mut files {
        f.flush()?;
    }
    writeln!(out, "l_max     {l_max}")?;
    writeln!(out, "beta      {:.4}", search.beta)?;
    writeln!(out, "objective {:.6}", search.objective)?;
    writeln!(out, "probes    {}", search.probes.len())?;
    writeln!(out, "wrote {} and {}", json_path.display(), probe_path.display())?;
    Ok(())
}
