//! Experiments that march the full equation: continuity in the dispersion
//! parameters, long-time decoherence, the global-existence branches and the
//! wave-operator probe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Field2D;
use crate::linear_flow::{
    boundary_fraction, critical_frequency, decoherence_pairing, propagate, PairingReport,
};
use crate::multipliers::{sobolev_norm, sobolev_norm_alpha, DispersionParams};
use crate::solver::{
    classify_global, criticality, evolve, GlobalBranch, RunRecord, SolverConfig, Stepper,
    Termination,
};

/// Marches one datum under several parameter sets with a common step and
/// calls `observe` after every `every` steps (and at `t = 0`).
fn lockstep(
    u0: &Field2D,
    params: &[DispersionParams],
    config: &SolverConfig,
    every: usize,
    mut observe: impl FnMut(f64, &[Field2D]) -> Result<()>,
) -> Result<Vec<Field2D>> {
    config.validate()?;
    let steps = (config.t_end / config.dt).round() as usize;
    if ((steps as f64) * config.dt - config.t_end).abs() > 1e-9 * config.t_end {
        return Err(Error::InvalidInput(format!(
            "t_end = {} is not a multiple of dt = {}",
            config.t_end, config.dt
        )));
    }
    let steppers: Vec<Stepper> = params
        .iter()
        .map(|p| Stepper::new(u0.grid(), p, config.dt, config.dealias))
        .collect();
    let mut us = vec![u0.physical(); params.len()];
    observe(0.0, &us)?;
    for k in 1..=steps {
        let t = k as f64 * config.dt;
        for (u, s) in us.iter_mut().zip(&steppers) {
            s.step(u)?;
            if !u.is_finite() {
                return Err(Error::NonFinite { t });
            }
        }
        if k % every == 0 || k == steps {
            observe(t, &us)?;
        }
    }
    Ok(us)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub alpha2_prime: f64,
    /// `|a1 - a1'| + |a2 - a2'|`.
    pub gap: f64,
    pub sup_difference: f64,
    /// `int_0^T ||u'||_inf^(p-1) dt`, the a posteriori uniform bound.
    pub uniform_bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub s: f64,
    pub rows: Vec<ContinuityRow>,
    pub monotone: bool,
    /// First-row difference over last-row difference.
    pub factor: f64,
    pub passed: bool,
}

/// `sup_t ||u^a(t) - u^a'(t)||_{H^s_a}` for each `a2'`, sharing the datum.
pub fn continuity(
    u0: &Field2D,
    params: &DispersionParams,
    alpha2_primes: &[f64],
    s: f64,
    config: &SolverConfig,
) -> Result<ContinuityReport> {
    let alpha = params.alpha();
    if s <= 0.5 + 1.0 / alpha {
        return Err(Error::InvalidInput(format!(
            "continuity needs s > 1/2 + 1/alpha = {:.4}, got {s}",
            0.5 + 1.0 / alpha
        )));
    }
    let mut rows = Vec::new();
    for &a2 in alpha2_primes {
        let other = params.with_alphas(params.alpha1(), a2)?;
        let mut sup_difference = 0f64;
        let mut sups = Vec::new();
        lockstep(u0, &[*params, other], config, 1, |t, us| {
            let d = us[0].sub(&us[1]);
            sup_difference = sup_difference.max(sobolev_norm_alpha(&d, alpha, s, false));
            sups.push((t, us[1].sup_norm()));
            Ok(())
        })?;
        let k = params.p() - 1.0;
        let uniform_bound = sups
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1.powf(k) + w[1].1.powf(k)))
            .sum();
        rows.push(ContinuityRow {
            alpha2_prime: a2,
            gap: (params.alpha2() - a2).abs(),
            sup_difference,
            uniform_bound,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].sup_difference < w[0].sup_difference);
    let factor = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) if b.sup_difference > 0.0 => a.sup_difference / b.sup_difference,
        _ => f64::INFINITY,
    };
    Ok(ContinuityReport {
        s,
        passed: monotone && factor >= 3.0,
        rows,
        monotone,
        factor,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlateauRow {
    pub alpha_prime: f64,
    pub critical_frequency: f64,
    pub times: Vec<f64>,
    /// `||u^a(t) - u^a'(t)||_2` at `times`.
    pub difference: Vec<f64>,
    /// Late-window RMS of the difference over `sqrt(2) ||u0||_2`.
    pub plateau: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecoherenceReport {
    pub alpha: f64,
    pub pairing: PairingReport,
    pub pairing_fit_from: f64,
    pub rows: Vec<PlateauRow>,
    /// Relative plateau change between the first and last `alpha'`.
    pub insensitivity: f64,
    pub max_boundary_fraction: f64,
    pub passed: bool,
}

/// Linear pairing decay for `(alpha, pairing_prime)` and the nonlinear `L^2`
/// difference between the `alpha2 = alpha` flow and each `alpha2'` flow.
#[allow(clippy::too_many_arguments)]
pub fn decoherence(
    u0: &Field2D,
    params: &DispersionParams,
    alpha_primes: &[f64],
    pairing_prime: f64,
    pairing_times: &[f64],
    config: &SolverConfig,
    every: usize,
) -> Result<DecoherenceReport> {
    if params.alpha1() != 2.0 {
        return Err(Error::InvalidInput("decoherence needs alpha1 = 2".into()));
    }
    if alpha_primes.is_empty() {
        return Err(Error::InvalidInput(
            "decoherence needs at least one alpha'".into(),
        ));
    }
    let alpha = params.alpha2();
    let pairing = decoherence_pairing(u0, alpha, pairing_prime, pairing_times)?;

    let mut flows = vec![*params];
    for &a in alpha_primes {
        flows.push(params.with_alphas(2.0, a)?);
    }
    let norm0 = u0.spectral_l2();
    let mut times = Vec::new();
    let mut diffs = vec![Vec::new(); alpha_primes.len()];
    let finals = lockstep(u0, &flows, config, every, |t, us| {
        times.push(t);
        for (k, d) in diffs.iter_mut().enumerate() {
            d.push(us[0].sub(&us[k + 1]).spectral_l2());
        }
        Ok(())
    })?;
    let max_boundary_fraction = finals.iter().map(boundary_fraction).fold(0.0, f64::max);
    if max_boundary_fraction > 0.02 {
        return Err(Error::Boundary(format!(
            "{:.2}% of the mass reached the outer band by t = {}; enlarge the box",
            100.0 * max_boundary_fraction,
            config.t_end
        )));
    }
    let late = 0.5 * config.t_end;
    let rows: Vec<PlateauRow> = alpha_primes
        .iter()
        .zip(diffs)
        .map(|(&a, difference)| {
            let tail: Vec<f64> = times
                .iter()
                .zip(&difference)
                .filter(|(t, _)| **t >= late)
                .map(|(_, d)| d * d)
                .collect();
            let rms = (tail.iter().sum::<f64>() / tail.len() as f64).sqrt();
            PlateauRow {
                alpha_prime: a,
                critical_frequency: critical_frequency(alpha, a),
                times: times.clone(),
                difference,
                plateau: rms / (2f64.sqrt() * norm0),
            }
        })
        .collect();
    let first = rows[0].plateau;
    let last = rows[rows.len() - 1].plateau;
    let insensitivity = (last / first - 1.0).abs();
    let passed = (pairing.exponent + 0.5).abs() <= 0.15
        && rows.iter().all(|r| (r.plateau - 1.0).abs() <= 0.1)
        && insensitivity < 0.1;
    Ok(DecoherenceReport {
        alpha,
        pairing_fit_from: pairing_times.first().copied().unwrap_or(0.0),
        pairing,
        rows,
        insensitivity,
        max_boundary_fraction,
        passed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchRun {
    pub alpha1: f64,
    pub alpha2: f64,
    pub p: f64,
    pub branch: GlobalBranch,
    pub criticality: f64,
    pub amplitude: f64,
    pub outcome: Termination,
    pub final_time: f64,
    /// `max_t hs(t) / hs(0)`.
    pub hs_growth: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdsReport {
    pub runs: Vec<BranchRun>,
    /// Bound on `hs_growth` that counts as bounded.
    pub growth_bound: f64,
    pub passed: bool,
}

/// Focusing runs at `amplitude` and `large_factor * amplitude` for each
/// parameter set. Small-data runs must complete everywhere; the subcritical
/// large-data run must complete with `hs_growth <= growth_bound`.
pub fn thresholds(
    datum: impl Fn(f64) -> Field2D,
    branches: &[(DispersionParams, f64)],
    large_factor: f64,
    growth_bound: f64,
    config: &SolverConfig,
) -> Result<(ThresholdsReport, Vec<RunRecord>)> {
    let mut runs = Vec::new();
    let mut records = Vec::new();
    let mut passed = true;
    for &(params, amp) in branches {
        if params.mu() >= 0.0 {
            return Err(Error::InvalidInput("threshold runs need mu < 0".into()));
        }
        let branch = classify_global(&params);
        for (a, large) in [(amp, false), (amp * large_factor, true)] {
            let (_, rec) = evolve(&datum(a), &params, config)?;
            let h0 = rec.hs_alpha_half[0];
            let hs_growth = rec
                .hs_alpha_half
                .iter()
                .map(|h| if h.is_finite() { h / h0 } else { f64::INFINITY })
                .fold(0.0, f64::max);
            if !large {
                passed &= rec.completed();
            } else if branch == GlobalBranch::SubcriticalGlobal {
                passed &= rec.completed() && hs_growth <= growth_bound;
            }
            runs.push(BranchRun {
                alpha1: params.alpha1(),
                alpha2: params.alpha2(),
                p: params.p(),
                branch,
                criticality: criticality(&params),
                amplitude: a,
                outcome: rec.terminated_reason,
                final_time: rec.final_time(),
                hs_growth,
            });
            records.push(rec);
        }
    }
    Ok((
        ThresholdsReport {
            runs,
            growth_bound,
            passed,
        },
        records,
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScatteringRow {
    pub amplitude: f64,
    pub checkpoints: Vec<f64>,
    /// `||v(t_{k+1}) - v(t_k)||_{H^{s_c}}` with `v(t) = U(-t) u(t)`.
    pub drift: Vec<f64>,
    pub monotone: bool,
    pub max_boundary_fraction: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub s_c: f64,
    pub rows: Vec<ScatteringRow>,
    /// First-pair drift ratio between consecutive amplitudes.
    pub amplitude_ratio: f64,
    /// `(a_1 / a_2)^p`.
    pub expected_ratio: f64,
    pub passed: bool,
}

fn drift_row(
    u0: &Field2D,
    params: &DispersionParams,
    checkpoints: &[f64],
    config: &SolverConfig,
) -> Result<(Vec<f64>, f64)> {
    let mut vs = Vec::new();
    let mut u = u0.physical();
    let mut t = 0.0;
    let mut boundary = 0f64;
    for &tc in checkpoints {
        if tc > t {
            let (next, rec) = evolve(&u, params, &config.with_t_end(tc - t))?;
            if !rec.completed() {
                return Err(Error::NonFinite {
                    t: t + rec.final_time(),
                });
            }
            u = next;
            t = tc;
        }
        boundary = boundary.max(boundary_fraction(&u));
        vs.push(propagate(&u, params, -t));
    }
    let drift = vs
        .windows(2)
        .map(|w| sobolev_norm(&w[1].sub(&w[0]), params, params.s_c(), false))
        .collect();
    Ok((drift, boundary))
}

/// Cauchy drift of the wave-operator profile at increasing checkpoints, for
/// each amplitude of a fixed datum shape.
pub fn scattering(
    datum: impl Fn(f64) -> Field2D,
    params: &DispersionParams,
    amplitudes: &[f64],
    checkpoints: &[f64],
    config: &SolverConfig,
) -> Result<ScatteringReport> {
    if checkpoints.len() < 2 || checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "checkpoints must be increasing, at least two".into(),
        ));
    }
    let mut rows = Vec::new();
    for &a in amplitudes {
        let (drift, max_boundary_fraction) = drift_row(&datum(a), params, checkpoints, config)?;
        if max_boundary_fraction > 0.02 {
            return Err(Error::Boundary(format!(
                "{:.2}% of the mass in the outer band at amplitude {a}; enlarge the box",
                100.0 * max_boundary_fraction
            )));
        }
        rows.push(ScatteringRow {
            amplitude: a,
            checkpoints: checkpoints.to_vec(),
            monotone: drift.windows(2).all(|w| w[1] < w[0]),
            drift,
            max_boundary_fraction,
        });
    }
    let (amplitude_ratio, expected_ratio) = if rows.len() >= 2 {
        (
            rows[0].drift[0] / rows[1].drift[0],
            (rows[0].amplitude / rows[1].amplitude).powf(params.p()),
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    let ratio_ok = rows.len() < 2 || (amplitude_ratio / expected_ratio - 1.0).abs() <= 0.3;
    let passed = rows.iter().all(|r| r.monotone) && ratio_ok;
    Ok(ScatteringReport {
        s_c: params.s_c(),
        rows,
        amplitude_ratio,
        expected_ratio,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ensemble::gaussian;
    use crate::grid::Grid2D;

    fn grid() -> Grid2D {
        Grid2D::new(32, 32, 8.0, 8.0).unwrap()
    }

    #[test]
    fn identical_flows_do_not_separate() {
        let p = DispersionParams::new(2.0, 1.5, 3.0, 1.0).unwrap();
        let u0 = gaussian(&grid(), 0.5, 1.5, 1.5);
        let cfg = SolverConfig::new(0.01, 0.1).unwrap();
        let r = continuity(&u0, &p, &[1.5], 1.25, &cfg).unwrap();
        assert_eq!(r.rows[0].sup_difference, 0.0);
        assert!(continuity(&u0, &p, &[1.5], 1.0, &cfg).is_err());
    }

    #[test]
    fn linear_profile_is_constant() {
        let p = DispersionParams::new(2.0, 1.5, 4.0, 1.0).unwrap();
        let cfg = SolverConfig::new(0.05, 1.0).unwrap().linear();
        let (drift, _) = drift_row(
            &gaussian(&grid(), 0.1, 1.5, 1.5),
            &p,
            &[0.5, 1.0, 2.0],
            &cfg,
        )
        .unwrap();
        assert!(drift.iter().all(|d| *d < 1e-13), "{drift:?}");
    }

    #[test]
    fn decoherence_starts_at_zero() {
        let g = Grid2D::new(16, 64, 20.0, 60.0).unwrap();
        let u0 = crate::experiments::ensemble::eta_packet(&g, 0.05, 0.2, 0.5625, 0.3);
        let p = DispersionParams::new(2.0, 2.0, 3.0, 1.0).unwrap();
        let cfg = SolverConfig::new(0.5, 1.0).unwrap();
        let r = decoherence(&u0, &p, &[1.5], 1.8, &[1.0, 2.0, 4.0], &cfg, 1).unwrap();
        assert_eq!(r.rows[0].times[0], 0.0);
        assert_eq!(r.rows[0].difference[0], 0.0);
    }
}
