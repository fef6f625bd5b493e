//! Line search for the merging weight β.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::decoder::{DecoderConfig, TraceMode};
use crate::error::{Error, Result};
use crate::montecarlo::write_header;
use crate::scalar::Real;
use crate::setup::CodeSetup;

use super::curves::pilot_frames;

/// Fewest pilot frames accepted by [`optimize_beta`].
pub const MIN_TUNING_FRAMES: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub beta: f64,
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSearch {
    /// Best probe seen.
    pub beta: f64,
    pub objective: f64,
    /// Every evaluation in order.
    pub probes: Vec<Probe>,
}

/// Maximizes `f` on `[lo, hi]` to absolute tolerance `tol`.
///
/// Bisects on the sign of a central difference taken across the middle
/// quarter of the bracket (never narrower than `tol / 2`), which keeps the slope
/// estimate above the noise of a Monte-Carlo objective. When the difference is
/// zero or not finite the remaining bracket is searched by golden section.
/// The endpoints are always evaluated and the best probe overall is returned.
pub fn maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<LineSearch> {
    if !(lo < hi && tol > 0.0) {
        return Err(Error::InvalidConfig(format!("bad search bracket [{lo}, {hi}] with tolerance {tol}")));
    }
    let mut probes = Vec::new();
    let mut eval = |x: f64, probes: &mut Vec<Probe>| {
        let y = f(x);
        probes.push(Probe { beta: x, objective: y });
        y
    };
    eval(lo, &mut probes);
    eval(hi, &mut probes);

    let (mut a, mut b) = (lo, hi);
    let mut fallback = false;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let h = ((b - a) / 8.0).max(tol / 4.0);
        let up = eval(mid + h, &mut probes);
        let down = eval(mid - h, &mut probes);
        if !up.is_finite() || !down.is_finite() || up == down {
            fallback = true;
            break;
        }
        if up > down {
            a = mid;
        } else {
            b = mid;
        }
    }
    if fallback {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = eval(c, &mut probes);
        let mut fd = eval(d, &mut probes);
        while b - a > tol {
            // a non-finite value never wins
            if fc.is_nan() || fd > fc {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = eval(d, &mut probes);
            } else {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = eval(c, &mut probes);
            }
        }
    }

    let best = probes
        .iter()
        .filter(|p| p.objective.is_finite())
        .max_by(|x, y| x.objective.total_cmp(&y.objective))
        .copied()
        .ok_or(Error::NonFiniteObjective)?;
    Ok(LineSearch { beta: best.beta, objective: best.objective, probes })
}

/// Mean final-iteration I_EC over the frames, decoding all `l_max`
/// iterations of every frame.
pub fn final_i_ec<T: Real>(setup: &CodeSetup, config: &DecoderConfig, frames: &[Vec<T>]) -> Result<f64> {
    let mut config = config.clone();
    config.early_termination = false;
    setup.decoder::<T>(&config)?;
    let total: f64 = frames
        .par_iter()
        .map_init(
            || setup.decoder::<T>(&config).expect("validated above"),
            |dec, llr| {
                let r = dec.decode_with(llr, TraceMode::Mi);
                r.trace.and_then(|tr| tr.iterations.last().map(|it| it.i_ec)).unwrap_or(f64::NAN)
            },
        )
        .sum();
    Ok(total / frames.len().max(1) as f64)
}

/// Tunes β for `config` at one Eb/N0 by maximizing the pilot set's final
/// I_EC. Every probe decodes the same frames.
#[allow(clippy::too_many_arguments)]
pub fn optimize_beta<T: Real>(
    setup: &CodeSetup,
    config: &DecoderConfig,
    ebno_db: f64,
    pilot: usize,
    seed: u64,
    interval: (f64, f64),
    tol: f64,
) -> Result<LineSearch> {
    if pilot < MIN_TUNING_FRAMES {
        return Err(Error::InvalidConfig(format!("β search needs at least {MIN_TUNING_FRAMES} pilot frames, got {pilot}")));
    }
    let (lo, hi) = interval;
    if !(lo > 0.0 && hi <= 2.0 && lo < hi) {
        return Err(Error::InvalidConfig(format!("β interval [{lo}, {hi}] must lie in (0, 2]")));
    }
    if !config.algorithm.is_quasi() {
        return Err(Error::InvalidConfig(format!("{} has no merging weight", config.algorithm)));
    }
    let frames: Vec<Vec<T>> = pilot_frames::<T>(setup, ebno_db, pilot, seed, 0).into_iter().map(|f| f.values).collect();
    let mut failure = None;
    let search = maximize(
        |beta| {
            let mut cfg = config.clone();
            cfg.beta = beta;
            match final_i_ec(setup, &cfg, &frames) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        lo,
        hi,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => search,
    }
}

/// `beta,objective` rows in probe order.
pub fn write_probe_csv<W: Write>(search: &LineSearch, header: &[(String, String)], mut w: W) -> io::Result<()> {
    write_header(&mut w, header)?;
    writeln!(w, "beta,objective")?;
    for p in &search.probes {
        writeln!(w, "{:.6},{:.6}", p.beta, p.objective)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::Algorithm;
    use crate::gf2::bch_code;

    #[test]
    fn finds_the_peak_of_a_parabola() {
        let s = maximize(|b| -(b - 0.3) * (b - 0.3), 1e-3, 2.0, 1e-3).unwrap();
        assert!((s.beta - 0.3).abs() <= 1e-3, "{}", s.beta);
        assert!(s.probes.len() < 40);
    }

    #[test]
    fn flat_regions_fall_back_to_golden_section() {
        // zero slope at the first midpoint
        let f = |b: f64| if b < 1.2 { 0.0 } else { -(b - 1.5) * (b - 1.5) + 1.0 };
        let s = maximize(f, 0.01, 2.0, 1e-3).unwrap();
        assert!((s.beta - 1.5).abs() <= 2e-3, "{}", s.beta);
    }

    #[test]
    fn best_probe_beats_the_endpoints() {
        let f = |b: f64| (3.0 * b).sin() + 0.2 * b;
        let s = maximize(f, 0.05, 2.0, 1e-3).unwrap();
        assert!(s.objective >= f(0.05) && s.objective >= f(2.0));
    }

    #[test]
    fn all_nan_is_an_error() {
        assert!(matches!(maximize(|_| f64::NAN, 0.1, 1.0, 1e-3), Err(Error::NonFiniteObjective)));
        assert!(maximize(|b| b, 1.0, 0.5, 1e-3).is_err());
    }

    #[test]
    fn tuning_checks_its_inputs() {
        let s = CodeSetup::bch(&bch_code(4, 2).unwrap(), 1.5).unwrap();
        let cfg = DecoderConfig::quasi(Algorithm::QuasiBp, 5, s.n, 3);
        assert!(optimize_beta::<f64>(&s, &cfg, 3.0, 100, 1, (0.01, 1.0), 1e-3).is_err());
        assert!(optimize_beta::<f64>(&s, &cfg, 3.0, 500, 1, (0.0, 1.0), 1e-3).is_err());
        assert!(optimize_beta::<f64>(&s, &cfg, 3.0, 500, 1, (0.1, 2.5), 1e-3).is_err());
        let bp = DecoderConfig::flooding(Algorithm::Bp, 5);
        assert!(optimize_beta::<f64>(&s, &bp, 3.0, 500, 1, (0.1, 1.0), 1e-3).is_err());
    }

    #[test]
    fn tuned_beta_is_at_least_as_good_as_the_ends() {
        let s = CodeSetup::bch(&bch_code(4, 2).unwrap(), 1.5).unwrap();
        let cfg = DecoderConfig::quasi(Algorithm::QuasiBp, 5, s.n, 3);
        let r = optimize_beta::<f64>(&s, &cfg, 3.0, 500, 4, (0.05, 1.5), 0.02).unwrap();
        let frames: Vec<Vec<f64>> = pilot_frames(&s, 3.0, 500, 4, 0).into_iter().map(|f| f.values).collect();
        let at = |b: f64| {
            let mut c = cfg.clone();
            c.beta = b;
            final_i_ec(&s, &c, &frames).unwrap()
        };
        assert!((at(r.beta) - r.objective).abs() < 1e-12);
        assert!(r.objective >= at(0.05) && r.objective >= at(1.5));
    }
}
