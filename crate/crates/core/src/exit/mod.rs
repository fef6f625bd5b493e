//! S-EXIT analysis of decoder traces.

pub mod curves;
pub mod mi;
pub mod tune;

pub use curves::{
    estimate_fer_by_threshold, pilot_frames, run_pilot, select_lmax, track_curves, write_cloud_csv, write_curves_csv,
    MiCurves, PilotRun, RealizationTrace,
};
pub use mi::{collapse_both, collapse_edges, collapse_realizations, mi_of_llr, mi_penalty, MessageSide, MiSampleSet};
pub use tune::{final_i_ec, maximize, optimize_beta, write_probe_csv, LineSearch, Probe, MIN_TUNING_FRAMES};
