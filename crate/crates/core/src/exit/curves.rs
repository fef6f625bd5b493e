//! MI evolution curves from pilot decodes, the threshold FER estimate and
//! the choice of the iteration limit.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{all_zero_frame, ebno_to_sigma, frame_seed, LlrFrame};
use crate::decoder::{DecodeTrace, DecoderConfig, TraceMode};
use crate::error::{Error, Result};
use crate::montecarlo::write_header;
use crate::scalar::Real;
use crate::setup::CodeSetup;

use super::mi::MessageSide;

/// Edge-collapsed MI of one channel realization, per executed iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizationTrace {
    pub id: u64,
    pub i_ev: Vec<f64>,
    pub i_ec: Vec<f64>,
    /// Hard decision equals the transmitted codeword.
    pub success: bool,
}

impl RealizationTrace {
    /// Checks that the trace holds iterations `1, 2, ..` without gaps.
    pub fn from_trace<T>(id: u64, trace: &DecodeTrace<T>, success: bool) -> Result<Self> {
        for (k, it) in trace.iterations.iter().enumerate() {
            if it.t != k + 1 {
                return Err(Error::MissingIteration(k + 1));
            }
        }
        Ok(Self {
            id,
            i_ev: trace.iterations.iter().map(|it| it.i_ev).collect(),
            i_ec: trace.iterations.iter().map(|it| it.i_ec).collect(),
            success,
        })
    }

    pub fn iterations(&self) -> usize {
        self.i_ec.len()
    }

    /// Value at 1-based iteration `t`; a trace that stopped earlier keeps its
    /// last value.
    pub fn at(&self, side: MessageSide, t: usize) -> f64 {
        let v = match side {
            MessageSide::VariableToCheck => &self.i_ev,
            MessageSide::CheckToVariable => &self.i_ec,
        };
        v[t.min(v.len()) - 1]
    }
}

/// Mean I_EV and I_EC per iteration (index 0 is iteration 1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MiCurves {
    pub snr_db: f64,
    pub i_ev: Vec<f64>,
    pub i_ec: Vec<f64>,
}

impl MiCurves {
    pub fn len(&self) -> usize {
        self.i_ec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i_ec.is_empty()
    }
}

/// Averages the realizations over iterations `1..=horizon`. Realizations
/// that stopped early contribute their last values to the later iterations.
pub fn track_curves(realizations: &[RealizationTrace], snr_db: f64, horizon: usize) -> Result<MiCurves> {
    if realizations.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if let Some(r) = realizations.iter().find(|r| r.i_ec.is_empty() || r.i_ev.len() != r.i_ec.len()) {
        return Err(Error::MissingIteration(r.i_ev.len().min(r.i_ec.len()) + 1));
    }
    let count = realizations.len() as f64;
    let mean = |side, t| realizations.iter().map(|r| r.at(side, t)).sum::<f64>() / count;
    Ok(MiCurves {
        snr_db,
        i_ev: (1..=horizon).map(|t| mean(MessageSide::VariableToCheck, t)).collect(),
        i_ec: (1..=horizon).map(|t| mean(MessageSide::CheckToVariable, t)).collect(),
    })
}

/// Fraction of realizations whose edge-collapsed MI is below `tau`.
pub fn estimate_fer_by_threshold(values: &[f64], tau: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|&&v| v < tau).count() as f64 / values.len() as f64
}

/// First iteration at which `i_ec − i_ev` changes sign, plus two.
pub fn select_lmax(curves: &MiCurves) -> Result<usize> {
    let horizon = curves.len();
    let side = |t: usize| (curves.i_ec[t] - curves.i_ev[t]).signum();
    (1..horizon)
        .find(|&k| side(k) != side(k - 1))
        .map(|k| k + 1 + 2)
        .ok_or(Error::NoIntersection { horizon })
}

/// Per-realization MI traces of a pilot set at one Eb/N0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PilotRun {
    pub snr_db: f64,
    pub horizon: usize,
    pub realizations: Vec<RealizationTrace>,
}

impl PilotRun {
    pub fn curves(&self) -> Result<MiCurves> {
        track_curves(&self.realizations, self.snr_db, self.horizon)
    }

    /// Edge-collapsed check-to-variable MI at the last iteration, one value per realization.
    pub fn final_i_ec(&self) -> Vec<f64> {
        self.realizations.iter().map(|r| r.at(MessageSide::CheckToVariable, self.horizon)).collect()
    }

    pub fn threshold_fer(&self, tau: f64) -> f64 {
        estimate_fer_by_threshold(&self.final_i_ec(), tau)
    }

    /// Frame error rate counted from the hard decisions of the same frames.
    pub fn counted_fer(&self) -> f64 {
        let failures = self.realizations.iter().filter(|r| !r.success).count();
        failures as f64 / self.realizations.len().max(1) as f64
    }
}

/// The LLR frames of a pilot set; frame `i` uses `frame_seed(seed, stream, i)`.
pub fn pilot_frames<T: Real>(setup: &CodeSetup, ebno_db: f64, frames: usize, seed: u64, stream: u64) -> Vec<LlrFrame<T>> {
    let sigma = ebno_to_sigma(ebno_db, setup.rate());
    (0..frames as u64).map(|i| all_zero_frame(setup.n, sigma, frame_seed(seed, stream, i))).collect()
}

/// Decodes `frames` pilot frames for the full `config.l_max` iterations
/// (early termination off) and records the MI of every iteration.
pub fn run_pilot<T: Real>(
    setup: &CodeSetup,
    config: &DecoderConfig,
    ebno_db: f64,
    frames: usize,
    seed: u64,
    stream: u64,
) -> Result<PilotRun> {
    let mut config = config.clone();
    config.early_termination = false;
    setup.decoder::<T>(&config)?;
    let llrs = pilot_frames::<T>(setup, ebno_db, frames, seed, stream);
    let realizations = llrs
        .par_iter()
        .enumerate()
        .map_init(
            || setup.decoder::<T>(&config).expect("validated above"),
            |dec, (i, frame)| {
                let r = dec.decode_with(&frame.values, TraceMode::Mi);
                let trace = r.trace.as_ref().expect("tracing requested");
                RealizationTrace::from_trace(i as u64, trace, r.is_all_zero())
            },
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(PilotRun { snr_db: ebno_db, horizon: config.l_max, realizations })
}

/// `snr_db,t,i_ev,i_ec` rows for each set of curves.
pub fn write_curves_csv<W: Write>(curves: &[MiCurves], header: &[(String, String)], mut w: W) -> io::Result<()> {
    write_header(&mut w, header)?;
    writeln!(w, "snr_db,t,i_ev,i_ec")?;
    for c in curves {
        for (k, (ev, ec)) in c.i_ev.iter().zip(&c.i_ec).enumerate() {
            writeln!(w, "{},{},{:.6},{:.6}", c.snr_db, k + 1, ev, ec)?;
        }
    }
    Ok(())
}

/// The S-EXIT cloud: `snr_db,t,realization_id,mi` for every realization and
/// iteration up to the horizon.
pub fn write_cloud_csv<W: Write>(
    runs: &[PilotRun],
    side: MessageSide,
    header: &[(String, String)],
    mut w: W,
) -> io::Result<()> {
    write_header(&mut w, header)?;
    writeln!(w, "snr_db,t,realization_id,mi")?;
    for run in runs {
        for t in 1..=run.horizon {
            for r in &run.realizations {
                writeln!(w, "{},{},{},{:.6}", run.snr_db, t, r.id, r.at(side, t))?;
            }
        }
    }
    Ok(())
}
