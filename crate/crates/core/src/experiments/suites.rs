//! Measurements at the level of single operators: kernels, multiplier
//! bounds, dispersive decay and the short conservation and scaling runs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ensemble::{centred_from_spectrum, gaussian, random_field, white_field, Envelope};
use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D};
use crate::linear_flow::{
    kernel_k_oracle, measure_localized_decay, strichartz_quotient, strip_axis_lines,
    AdmissiblePair, DecayReport, KernelKOptions,
};
use crate::multipliers::{
    aniso_potential_alpha, bessel_kernel_positivity, dyadic_scales, gn_quotient, gn_theta,
    joint_radius, lp_kernel, lp_project_alpha, phi, sample_kernel, sobolev_norm,
    sobolev_norm_alpha, BesselKernelReport, DispersionParams, KernelGrid, LpKernelReport,
    ProjectionKind,
};
use crate::solver::{evolve, rescale_field, RunRecord, SolverConfig};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConservationRun {
    pub alpha1: f64,
    pub alpha2: f64,
    pub dt: Vec<f64>,
    pub mass_drift: Vec<f64>,
    pub dealias_loss: Vec<f64>,
    pub energy_drift: Vec<f64>,
    /// `energy_drift(dt) / energy_drift(dt / 2)`.
    pub drift_ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConservationReport {
    pub runs: Vec<ConservationRun>,
    pub passed: bool,
}

/// Runs each parameter set at `config.dt` and `config.dt / 2`.
pub fn conservation(
    params: &[DispersionParams],
    datum: &Field2D,
    config: &SolverConfig,
) -> Result<(ConservationReport, Vec<RunRecord>)> {
    let mut runs = Vec::new();
    let mut records = Vec::new();
    let mut passed = true;
    for p in params {
        let mut run = ConservationRun {
            alpha1: p.alpha1(),
            alpha2: p.alpha2(),
            dt: vec![],
            mass_drift: vec![],
            dealias_loss: vec![],
            energy_drift: vec![],
            drift_ratio: 0.0,
        };
        for dt in [config.dt, config.dt / 2.0] {
            let (_, rec) = evolve(&datum.clone(), p, &config.with_dt(dt))?;
            run.dt.push(dt);
            run.mass_drift.push(rec.mass_drift());
            run.dealias_loss.push(rec.dealias_loss / rec.mass[0]);
            run.energy_drift.push(rec.energy_drift());
            passed &= rec.completed();
            records.push(rec);
        }
        run.drift_ratio = run.energy_drift[0] / run.energy_drift[1];
        passed &= run.mass_drift.iter().all(|m| *m <= 1e-10)
            && run.energy_drift[0] <= 1e-6
            && (3.5..=4.5).contains(&run.drift_ratio);
        runs.push(run);
    }
    Ok((ConservationReport { runs, passed }, records))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormRatio {
    pub lambda: f64,
    pub s: f64,
    pub measured: f64,
    pub expected: f64,
    pub rel_err: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingReport {
    pub lambda: f64,
    /// Relative `L^2` gap between "evolve then rescale" and "rescale then evolve".
    pub diagram_error: f64,
    pub norm_ratios: Vec<NormRatio>,
    pub passed: bool,
}

/// Scaling symmetry: the commuting diagram on matched grids, and the
/// homogeneous norm ratios of a Gaussian sampled directly at both scales.
pub fn scaling(
    params: &DispersionParams,
    grid: &Grid2D,
    amp: f64,
    width: f64,
    lambda: f64,
    config: &SolverConfig,
    s_list: &[f64],
) -> Result<ScalingReport> {
    let u0 = gaussian(grid, amp, width, width);
    let (u_t, _) = evolve(&u0, params, config)?;
    let path_a = rescale_field(&u_t, params, lambda)?;
    let a1 = params.alpha1();
    let stretched = SolverConfig {
        dt: config.dt * lambda.powf(a1),
        t_end: config.t_end * lambda.powf(a1),
        ..config.clone()
    };
    let (path_b, _) = evolve(&rescale_field(&u0, params, lambda)?, params, &stretched)?;
    let diagram_error = path_a.sub(&path_b).spectral_l2() / path_a.spectral_l2();

    let ratio = a1 / params.alpha2();
    let mut norm_ratios = Vec::new();
    for &lam in &[1.0 / lambda, lambda] {
        let amp_l = amp * lam.powf(-a1 / (params.p() - 1.0));
        let (wx, wy) = (width * lam, width * lam.powf(ratio));
        let u_l = gaussian(grid, amp_l, wx, wy);
        for &s in s_list {
            let measured = sobolev_norm(&u_l, params, s, true) / sobolev_norm(&u0, params, s, true);
            let expected = lam.powf(params.s_c() - s);
            norm_ratios.push(NormRatio {
                lambda: lam,
                s,
                measured,
                expected,
                rel_err: (measured / expected - 1.0).abs(),
            });
        }
    }
    let passed = diagram_error < 0.01 && norm_ratios.iter().all(|r| r.rel_err < 0.02);
    Ok(ScalingReport {
        lambda,
        diagram_error,
        norm_ratios,
        passed,
    })
}

/// Lower bound on the fitted `y`-tail exponent of the projection kernel.
pub fn kernel_tail_floor(alpha: f64) -> f64 {
    if alpha == 2.0 {
        4.0
    } else if alpha > 1.0 {
        alpha - 0.1
    } else {
        // epsilon = 0.1 in the |y|^(1 + alpha - epsilon) law
        1.0 + alpha - 0.1 - 0.1
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelSuiteReport {
    pub report: LpKernelReport,
    pub tail_floor: f64,
    /// `(N, ||Phi_N||_1)` from rescaled sampling.
    pub n_l1: Vec<(f64, f64)>,
    pub n_spread: f64,
    pub passed: bool,
}

pub fn kernel_suite(
    alpha: f64,
    base: KernelGrid,
    levels: u32,
    line: (usize, f64),
) -> Result<KernelSuiteReport> {
    let (_, report) = lp_kernel(alpha, 1.0, base, levels, line)?;
    let mut n_l1 = Vec::new();
    for n in [0.5, 1.0, 2.0] {
        n_l1.push((n, lp_kernel_l1(alpha, n, base)?));
    }
    let (lo, hi) = n_l1.iter().fold((f64::INFINITY, 0f64), |(a, b), &(_, v)| {
        (a.min(v), b.max(v))
    });
    let n_spread = (hi - lo) / lo;
    let tail_floor = kernel_tail_floor(alpha);
    let passed = report.y_tail_exponent >= tail_floor && report.l1_drift < 0.02 && n_spread < 0.01;
    Ok(KernelSuiteReport {
        report,
        tail_floor,
        n_l1,
        n_spread,
        passed,
    })
}

/// `||Phi_N||_1` sampled on the box stretched by `(1/N, N^(-2/alpha))`.
fn lp_kernel_l1(alpha: f64, n: f64, base: KernelGrid) -> Result<f64> {
    let g = KernelGrid {
        lx: base.lx / n,
        ly: base.ly / n.powf(2.0 / alpha),
        ..base
    }
    .build()?;
    let k = sample_kernel(&g, |xi, eta| phi(joint_radius(xi, eta, alpha) / n));
    k.lp_norm(1.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BernsteinRow {
    pub p: f64,
    pub q: f64,
    pub n: f64,
    /// Largest `||P_N f||_q / (N^e ||P_N f||_p)` over the ensemble.
    pub max_ratio: f64,
    /// Young's-inequality bound from the sampled fattened kernel.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub s: f64,
    pub n: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BernsteinReport {
    pub alpha: f64,
    pub scales: Vec<f64>,
    pub rows: Vec<BernsteinRow>,
    /// Per `(p, q)`, relative spread of the kernel bound across scales.
    pub bound_spread: Vec<(f64, f64, f64)>,
    pub equivalence: Vec<EquivalenceRow>,
    pub passed: bool,
}

/// `(1 + 2/alpha)(1/p - 1/q)`.
pub fn bernstein_exponent(alpha: f64, p: f64, q: f64) -> f64 {
    (1.0 + 2.0 / alpha) * (1.0 / p - 1.0 / q)
}

/// Bernstein quotients and the two-sided multiplier equivalence over every
/// resolvable dyadic scale of `grid`.
pub fn bernstein_suite(
    alpha: f64,
    grid: &Grid2D,
    ensemble: usize,
    seed: u64,
) -> Result<BernsteinReport> {
    let scales = dyadic_scales(grid, alpha, ProjectionKind::Joint);
    if scales.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "grid resolves {} dyadic scales, need at least 4",
            scales.len()
        )));
    }
    let pairs = [(2.0, f64::INFINITY), (2.0, 4.0), (1.0, 2.0)];
    let s_list = [-1.0, 0.5, 1.0, 2.0];
    let fields: Vec<Field2D> = (0..ensemble as u64)
        .map(|k| white_field(grid, seed.wrapping_add(k), 0.9, Some(0.25)))
        .collect();
    let mut rows = Vec::new();
    let mut equivalence = Vec::new();
    let mut passed = true;
    for &n in &scales {
        let fat = sample_kernel(grid, |xi, eta| {
            let r = joint_radius(xi, eta, alpha) / n;
            phi(2.0 * r) + phi(r) + phi(r / 2.0)
        });
        let projected: Vec<Field2D> = fields
            .iter()
            .map(|f| lp_project_alpha(f, alpha, n, ProjectionKind::Joint).map(|g| g.physical()))
            .collect::<Result<_>>()?;
        for &(p, q) in &pairs {
            let e = bernstein_exponent(alpha, p, q);
            let r = 1.0 / (1.0 + 1.0 / q - 1.0 / p);
            let bound = fat.lp_norm(r)? / n.powf(e);
            let mut max_ratio = 0f64;
            for g in &projected {
                let den = g.lp_norm(p)?;
                if den > 0.0 {
                    max_ratio = max_ratio.max(g.lp_norm(q)? / (n.powf(e) * den));
                }
            }
            passed &= max_ratio <= bound * (1.0 + 1e-9);
            rows.push(BernsteinRow {
                p,
                q,
                n,
                max_ratio,
                bound,
            });
        }
        for &s in &s_list {
            let (mut lo, mut hi) = (f64::INFINITY, 0f64);
            for g in &projected {
                let den = n.powf(s) * g.spectral_l2();
                if den > 0.0 {
                    let v = sobolev_norm_alpha(g, alpha, s, true) / den;
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            let c = 2f64.powf(s.abs());
            passed &= lo >= 1.0 / c - 1e-12 && hi <= c + 1e-12;
            equivalence.push(EquivalenceRow {
                s,
                n,
                min_ratio: lo,
                max_ratio: hi,
            });
        }
    }
    let mut bound_spread = Vec::new();
    for &(p, q) in &pairs {
        let bs: Vec<f64> = rows
            .iter()
            .filter(|r| r.p == p && r.q == q)
            .map(|r| r.bound)
            .collect();
        let (lo, hi) = bs
            .iter()
            .fold((f64::INFINITY, 0f64), |(a, b), &v| (a.min(v), b.max(v)));
        let spread = (hi - lo) / lo;
        passed &= spread < 0.05;
        bound_spread.push((p, q, spread));
    }
    Ok(BernsteinReport {
        alpha,
        scales,
        rows,
        bound_spread,
        equivalence,
        passed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContractionRow {
    pub alpha: f64,
    pub s: f64,
    pub r: f64,
    /// Largest `||<grad>^(-s) f||_r / ||f||_r` over the ensemble.
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BesselReport {
    pub kernels: Vec<BesselKernelReport>,
    pub contraction: Vec<ContractionRow>,
    pub passed: bool,
}

/// Bessel kernels `G_s` on `kernel_grid` and the `L^r` contraction of
/// `<grad_alpha>^(-s)` on a seeded ensemble.
pub fn bessel_suite(
    cases: &[(f64, f64)],
    kernel_grid: &Grid2D,
    field_grid: &Grid2D,
    ensemble: usize,
    seed: u64,
) -> Result<BesselReport> {
    let mut kernels = Vec::new();
    let mut contraction = Vec::new();
    let mut passed = true;
    let env = Envelope {
        sigma_xi: 1.5,
        sigma_eta: 1.5,
        window: Some(0.25),
    };
    let fields: Vec<Field2D> = (0..ensemble as u64)
        .map(|k| random_field(field_grid, seed.wrapping_add(k), &env))
        .collect::<Result<_>>()?;
    for &(alpha, s) in cases {
        let (_, rep) = bessel_kernel_positivity(alpha, s, kernel_grid)?;
        passed &= rep.min_value >= -1e-6 && (rep.l1_norm - 1.0).abs() <= 1e-3;
        kernels.push(rep);
        for r in [1.0, 2.0, f64::INFINITY] {
            let mut max_ratio = 0f64;
            for f in &fields {
                let g = aniso_potential_alpha(f, alpha, -s, false);
                max_ratio = max_ratio.max(g.lp_norm(r)? / f.lp_norm(r)?);
            }
            passed &= max_ratio <= 1.0 + 1e-6;
            contraction.push(ContractionRow {
                alpha,
                s,
                r,
                max_ratio,
            });
        }
    }
    Ok(BesselReport {
        kernels,
        contraction,
        passed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecaySuiteReport {
    pub alpha1: f64,
    pub alpha2: f64,
    pub reports: Vec<DecayReport>,
    /// `|C(N_1) / C(N_2) - 1|` for the first two scales.
    pub constant_change: f64,
    pub passed: bool,
}

/// Decay at each `N`, with times scaled by `N^(-a1)` so every scale sees the
/// same dimensionless window.
pub fn decay_suite(
    params: &DispersionParams,
    base: &Grid2D,
    n_list: &[f64],
    t_list: &[f64],
) -> Result<DecaySuiteReport> {
    let mut reports = Vec::new();
    for &n in n_list {
        let ts: Vec<f64> = t_list
            .iter()
            .map(|t| t * n.powf(-params.alpha1()))
            .collect();
        reports.push(measure_localized_decay(params, n, &ts, base)?);
    }
    let constant_change = if reports.len() >= 2 {
        (reports[0].constant / reports[1].constant - 1.0).abs()
    } else {
        0.0
    };
    let passed = reports.iter().all(|r| (r.slope + 1.0).abs() <= 0.15) && constant_change < 0.25;
    Ok(DecaySuiteReport {
        alpha1: params.alpha1(),
        alpha2: params.alpha2(),
        reports,
        constant_change,
        passed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OscillatoryKernelReport {
    pub alpha: f64,
    pub mu: f64,
    pub ys: Vec<f64>,
    pub values: Vec<Complex64>,
    pub sup: f64,
    pub sup_doubled: f64,
    pub change: f64,
    pub passed: bool,
}

/// `sup |K(y)|` over `ys` at two hand-off radii.
pub fn oscillatory_kernel_suite(
    alpha: f64,
    mu: f64,
    ys: &[f64],
    handoff: f64,
) -> Result<OscillatoryKernelReport> {
    let beta = 1.0 - alpha / 2.0;
    let opts = KernelKOptions {
        handoff,
        ..Default::default()
    };
    let values = kernel_k_oracle(alpha, beta, mu, ys, opts)?;
    let doubled = kernel_k_oracle(
        alpha,
        beta,
        mu,
        ys,
        KernelKOptions {
            handoff: 2.0 * handoff,
            ..opts
        },
    )?;
    let sup = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sup_doubled = doubled.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let change = (sup_doubled / sup - 1.0).abs();
    Ok(OscillatoryKernelReport {
        alpha,
        mu,
        ys: ys.to_vec(),
        values,
        sup,
        sup_doubled,
        change,
        passed: sup.is_finite() && change < 0.03,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GnReport {
    pub alpha: f64,
    pub s: f64,
    pub q: f64,
    pub theta: f64,
    /// `theta` lies in `[0, 1]`, where the inequality is asserted.
    pub within_hypothesis: bool,
    pub max_quotient: f64,
    pub max_quotient_refined: f64,
    pub drift: f64,
    pub passed: bool,
}

/// Ensemble maximum of the Gagliardo-Nirenberg quotient on `grid` and on the
/// same box with twice the samples.
pub fn gn_suite(
    alpha: f64,
    s: f64,
    q: f64,
    grid: &Grid2D,
    env: &Envelope,
    ensemble: usize,
    seed: u64,
) -> Result<GnReport> {
    let refined = Grid2D::new(2 * grid.nx(), 2 * grid.ny(), grid.lx(), grid.ly())?;
    let max_q = |g: &Grid2D| -> Result<f64> {
        let mut m = 0f64;
        for k in 0..ensemble as u64 {
            let f = random_field(g, seed.wrapping_add(k), env)?;
            m = m.max(gn_quotient(&f, alpha, s, q)?);
        }
        Ok(m)
    };
    let a = max_q(grid)?;
    let b = max_q(&refined)?;
    let theta = gn_theta(alpha, s, q);
    let drift = (b / a - 1.0).abs();
    Ok(GnReport {
        alpha,
        s,
        q,
        theta,
        within_hypothesis: (0.0..=1.0).contains(&theta),
        max_quotient: a,
        max_quotient_refined: b,
        drift,
        passed: a.is_finite() && drift < 0.05,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrichartzReport {
    pub max_quotient: f64,
    pub max_quotient_refined: f64,
    pub refinement_ratio: f64,
    /// Relative change when `nt` is doubled.
    pub nt_change: f64,
    pub scaling_change: f64,
    pub passed: bool,
}

/// Strichartz quotients for a seeded ensemble, under grid refinement, `nt`
/// doubling and the anisotropic rescaling of a packet (on a box four times
/// wider at the same spacing).
#[allow(clippy::too_many_arguments)]
pub fn strichartz_suite(
    params: &DispersionParams,
    pair: AdmissiblePair,
    grid: &Grid2D,
    env: &Envelope,
    t_window: f64,
    nt: usize,
    ensemble: usize,
    seed: u64,
) -> Result<StrichartzReport> {
    let refined = Grid2D::new(2 * grid.nx(), 2 * grid.ny(), grid.lx(), grid.ly())?;
    let needs_strip = params.beta1() > 0.0 || params.beta2() > 0.0;
    let datum = |g: &Grid2D, k: u64| -> Result<Field2D> {
        let f = random_field(g, seed.wrapping_add(k), env)?;
        Ok(if needs_strip { strip_axis_lines(&f) } else { f })
    };
    let mut a = 0f64;
    let mut b = 0f64;
    let mut nt_change = 0f64;
    for k in 0..ensemble as u64 {
        let f = datum(grid, k)?;
        let qa = strichartz_quotient(&f, params, pair, t_window, nt)?;
        if k == 0 {
            let q2 = strichartz_quotient(&f, params, pair, t_window, 2 * nt - 1)?;
            nt_change = (q2 / qa - 1.0).abs();
        }
        a = a.max(qa);
        b = b.max(strichartz_quotient(
            &datum(&refined, k)?,
            params,
            pair,
            t_window,
            nt,
        )?);
    }
    let refinement_ratio = a.max(b) / a.min(b);

    let lambda = 2.0;
    let ratio = params.alpha1() / params.alpha2();
    // spectrum centred at (2, 3), negligible on the axis lines at both scales
    let wide = Grid2D::new(
        4 * grid.nx(),
        4 * grid.ny(),
        4.0 * grid.lx(),
        4.0 * grid.ly(),
    )?;
    let bump = |l: f64| {
        let (sx, sy) = (l, l.powf(ratio));
        centred_from_spectrum(&wide, move |xi, eta| {
            let (a, b) = (xi * sx - 2.0, eta * sy - 3.0);
            Complex64::new((-a * a / 0.5 - b * b / 0.5).exp(), 0.0)
        })
    };
    let (g0, gl) = (
        strip_axis_lines(&bump(1.0)),
        strip_axis_lines(&bump(lambda)),
    );
    let q0 = strichartz_quotient(&g0, params, pair, t_window, nt)?;
    let ql = strichartz_quotient(
        &gl,
        params,
        pair,
        t_window * lambda.powf(params.alpha1()),
        nt,
    )?;
    let scaling_change = (ql / q0 - 1.0).abs();
    Ok(StrichartzReport {
        max_quotient: a,
        max_quotient_refined: b,
        refinement_ratio,
        nt_change,
        scaling_change,
        passed: refinement_ratio < 1.3 && nt_change < 0.01 && scaling_change < 0.02,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub s: f64,
    pub q: f64,
    pub r: f64,
    /// `s` minus the smallest admissible regularity.
    pub margin: f64,
    pub max_quotient: f64,
    pub max_quotient_refined: f64,
    pub passed: bool,
}

/// Smallest `s` for the weighted embedding into `L^q` from `W^{s,r}`.
pub fn embedding_threshold(params: &DispersionParams, q: f64, r: f64) -> f64 {
    let (a1, a2) = (params.alpha1(), params.alpha2());
    (1.0 + a1 / a2) * (0.5 - 1.0 / q) - a1 * (0.5 - 1.0 / r)
}

/// `||u||_q / ||<grad>^s D1^e1 D2^e2 u||_r`, zero for the zero field.
pub fn embedding_quotient(
    u: &Field2D,
    params: &DispersionParams,
    s: f64,
    q: f64,
    r: f64,
) -> Result<f64> {
    let num = u.lp_norm(q)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    let (e1, e2) = crate::linear_flow::strichartz_weights(params, r);
    let w = crate::multipliers::frac_deriv(
        &crate::multipliers::frac_deriv(u, crate::multipliers::Axis::X, e1),
        crate::multipliers::Axis::Y,
        e2,
    );
    let den = aniso_potential_alpha(&w, params.alpha(), s, false).lp_norm(r)?;
    Ok(num / den)
}

pub fn embedding_suite(
    params: &DispersionParams,
    s: f64,
    q: f64,
    r: f64,
    grid: &Grid2D,
    env: &Envelope,
    ensemble: usize,
    seed: u64,
) -> Result<EmbeddingReport> {
    if !(2.0 <= r && r < q) {
        return Err(Error::InvalidInput(format!(
            "embedding needs 2 <= r < q, got r = {r}, q = {q}"
        )));
    }
    let margin = s - embedding_threshold(params, q, r);
    if margin < 0.05 {
        return Err(Error::InvalidInput(format!(
            "s = {s} is within {margin:.3} of the embedding threshold; need a margin of 0.05"
        )));
    }
    let refined = Grid2D::new(2 * grid.nx(), 2 * grid.ny(), grid.lx(), grid.ly())?;
    let strip = r > 2.0;
    let max_q = |g: &Grid2D| -> Result<f64> {
        let mut m = 0f64;
        for k in 0..ensemble as u64 {
            let f = random_field(g, seed.wrapping_add(k), env)?;
            let f = if strip { strip_axis_lines(&f) } else { f };
            m = m.max(embedding_quotient(&f, params, s, q, r)?);
        }
        Ok(m)
    };
    let a = max_q(grid)?;
    let b = max_q(&refined)?;
    Ok(EmbeddingReport {
        s,
        q,
        r,
        margin,
        max_quotient: a,
        max_quotient_refined: b,
        passed: a.is_finite() && (b / a - 1.0).abs() < 0.1,
    })
}
