//! Named, seeded experiments. An [`ExperimentSpec`] fixes everything a run
//! depends on; [`run`] turns it into an [`Outcome`] with a verdict.

pub mod ensemble;
pub mod nonlinear;
pub mod suites;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D};
use crate::linear_flow::AdmissiblePair;
use crate::multipliers::{DispersionParams, KernelGrid};
use crate::solver::{RunRecord, SolverConfig};

pub use ensemble::{eta_packet, gaussian, random_field, white_field, Envelope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Conservation,
    Scaling,
    Kernel,
    Bernstein,
    Bessel,
    Decay,
    OscillatoryKernel,
    Gn,
    Strichartz,
    Embedding,
    Continuity,
    Decoherence,
    Thresholds,
    Scattering,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 14] = [
        Self::Conservation,
        Self::Scaling,
        Self::Kernel,
        Self::Bernstein,
        Self::Bessel,
        Self::Decay,
        Self::OscillatoryKernel,
        Self::Gn,
        Self::Strichartz,
        Self::Embedding,
        Self::Continuity,
        Self::Decoherence,
        Self::Thresholds,
        Self::Scattering,
    ];
}

/// Sample counts and half-widths of the periodic box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    pub fn square(n: usize, l: f64) -> Self {
        Self {
            nx: n,
            ny: n,
            lx: l,
            ly: l,
        }
    }

    pub fn build(&self) -> Result<Grid2D> {
        Grid2D::new(self.nx, self.ny, self.lx, self.ly)
    }

    fn kernel(&self) -> KernelGrid {
        KernelGrid {
            nx: self.nx,
            ny: self.ny,
            lx: self.lx,
            ly: self.ly,
        }
    }

    /// Same box, twice the samples in each direction.
    pub fn doubled(&self) -> Self {
        Self {
            nx: 2 * self.nx,
            ny: 2 * self.ny,
            ..*self
        }
    }
}

/// Experiment-specific settings. Each kind reads the fields it needs and
/// ignores the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Knobs {
    /// Scaling factor.
    pub lambda: f64,
    /// `alpha2'` values for continuity and decoherence.
    pub alpha_primes: Vec<f64>,
    /// `alpha2'` used for the linear pairing decay.
    pub pairing_prime: f64,
    /// Dyadic scales for decay.
    pub n_list: Vec<f64>,
    /// Time samples (decay, pairing) at `N = 1`.
    pub t_list: Vec<f64>,
    /// Wave-operator checkpoints.
    pub checkpoints: Vec<f64>,
    pub ensemble: usize,
    pub envelope: Envelope,
    pub s: f64,
    pub s_list: Vec<f64>,
    pub q: f64,
    pub r: f64,
    pub amplitudes: Vec<f64>,
    pub width: f64,
    /// `(alpha1, alpha2)` pairs for conservation.
    pub alpha_pairs: Vec<(f64, f64)>,
    /// `(alpha, s)` for Bessel kernels, `(alpha, mu)` for the oscillatory kernel.
    pub cases: Vec<(f64, f64)>,
    pub ys: Vec<f64>,
    pub handoff: f64,
    pub levels: u32,
    /// `(samples, half-length)` of the 1D line used for tail fits.
    pub line: (usize, f64),
    pub kernel_grid: Option<GridSpec>,
    pub t_window: f64,
    pub nt: usize,
    /// Steps between recorded samples in long runs.
    pub every: usize,
    /// Threshold runs: `(alpha1, alpha2, p, small amplitude)` per branch.
    pub branches: Vec<(f64, f64, f64, f64)>,
    pub large_factor: f64,
    pub growth_bound: f64,
}

impl Default for Knobs {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            alpha_primes: vec![],
            pairing_prime: 1.8,
            n_list: vec![1.0, 2.0],
            t_list: vec![],
            checkpoints: vec![],
            ensemble: 20,
            envelope: Envelope::default(),
            s: 1.0,
            s_list: vec![],
            q: 4.0,
            r: 2.0,
            amplitudes: vec![],
            width: 1.5,
            alpha_pairs: vec![],
            cases: vec![],
            ys: vec![],
            handoff: 2.0,
            levels: 2,
            line: (1 << 14, 1024.0),
            kernel_grid: None,
            t_window: 1.0,
            nt: 65,
            every: 1,
            branches: vec![],
            large_factor: 10.0,
            growth_bound: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
    pub params: DispersionParams,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub knobs: Knobs,
}

impl ExperimentSpec {
    /// The resolution-stability variant: doubled samples, halved step.
    pub fn refined(&self) -> Self {
        let mut s = self.clone();
        s.name = format!("{}-refined", self.name);
        s.grid = self.grid.doubled();
        s.solver = self.solver.with_dt(self.solver.dt / 2.0);
        s.knobs.every *= 2;
        s
    }
}

/// Result of one experiment. `report` carries the kind-specific details.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub kind: ExperimentKind,
    pub passed: bool,
    /// The scalar compared by the resolution-stability gate.
    pub headline: f64,
    pub report: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<RunRecord>,
}

fn outcome<T: Serialize>(
    spec: &ExperimentSpec,
    passed: bool,
    headline: f64,
    report: &T,
    records: Vec<RunRecord>,
) -> Result<Outcome> {
    Ok(Outcome {
        name: spec.name.clone(),
        kind: spec.kind,
        passed,
        headline,
        report: serde_json::to_value(report).map_err(|e| Error::Format(e.to_string()))?,
        records,
    })
}

fn need(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "knob missing or empty: {what}"
        )))
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<Outcome> {
    let k = &spec.knobs;
    let p = &spec.params;
    match spec.kind {
        ExperimentKind::Conservation => {
            need(!k.alpha_pairs.is_empty(), "alpha_pairs")?;
            let grid = spec.grid.build()?;
            let datum = gaussian(&grid, amplitude(k), k.width, k.width);
            let params: Vec<DispersionParams> = k
                .alpha_pairs
                .iter()
                .map(|&(a1, a2)| p.with_alphas(a1, a2))
                .collect::<Result<_>>()?;
            let (r, recs) = suites::conservation(&params, &datum, &spec.solver)?;
            let headline = r.runs.last().map_or(f64::NAN, |x| x.drift_ratio);
            outcome(spec, r.passed, headline, &r, recs)
        }
        ExperimentKind::Scaling => {
            need(!k.s_list.is_empty(), "s_list")?;
            let grid = spec.grid.build()?;
            let r = suites::scaling(
                p,
                &grid,
                amplitude(k),
                k.width,
                k.lambda,
                &spec.solver,
                &k.s_list,
            )?;
            let headline = r.norm_ratios.last().map_or(f64::NAN, |x| x.measured);
            outcome(spec, r.passed, headline, &r, vec![])
        }
        ExperimentKind::Kernel => {
            let r = suites::kernel_suite(p.alpha(), spec.grid.kernel(), k.levels, k.line)?;
            outcome(spec, r.passed, r.report.y_tail_exponent, &r, vec![])
        }
        ExperimentKind::Bernstein => {
            let r = suites::bernstein_suite(p.alpha(), &spec.grid.build()?, k.ensemble, spec.seed)?;
            let headline = r
                .rows
                .iter()
                .map(|x| x.max_ratio / x.bound)
                .fold(0.0, f64::max);
            outcome(spec, r.passed, headline, &r, vec![])
        }
        ExperimentKind::Bessel => {
            need(!k.cases.is_empty(), "cases")?;
            let kg = k.kernel_grid.unwrap_or(spec.grid).build()?;
            let r =
                suites::bessel_suite(&k.cases, &kg, &spec.grid.build()?, k.ensemble, spec.seed)?;
            let headline = r.kernels.iter().map(|x| x.l1_norm).fold(0.0, f64::max);
            outcome(spec, r.passed, headline, &r, vec![])
        }
        ExperimentKind::Decay => {
            need(k.t_list.len() >= 3, "t_list (at least 3 times)")?;
            let r = suites::decay_suite(p, &spec.grid.build()?, &k.n_list, &k.t_list)?;
            let headline = r.reports.iter().map(|x| x.slope).sum::<f64>() / r.reports.len() as f64;
            outcome(spec, r.passed, headline, &r, vec![])
        }
        ExperimentKind::OscillatoryKernel => {
            need(!k.cases.is_empty() && !k.ys.is_empty(), "cases and ys")?;
            let mut reports = Vec::new();
            for &(alpha, mu) in &k.cases {
                reports.push(suites::oscillatory_kernel_suite(
                    alpha, mu, &k.ys, k.handoff,
                )?);
            }
            let passed = reports.iter().all(|r| r.passed);
            let headline = reports.iter().map(|r| r.sup).fold(0.0, f64::max);
            outcome(spec, passed, headline, &reports, vec![])
        }
        ExperimentKind::Gn => {
            let r = suites::gn_suite(
                p.alpha(),
                k.s,
                k.q,
                &spec.grid.build()?,
                &k.envelope,
                k.ensemble,
                spec.seed,
            )?;
            outcome(spec, r.passed, r.max_quotient, &r, vec![])
        }
        ExperimentKind::Strichartz => {
            let pair = AdmissiblePair::from_r(k.r)?;
            let r = suites::strichartz_suite(
                p,
                pair,
                &spec.grid.build()?,
                &k.envelope,
                k.t_window,
                k.nt,
                k.ensemble,
                spec.seed,
            )?;
            outcome(spec, r.passed, r.max_quotient, &r, vec![])
        }
        ExperimentKind::Embedding => {
            let r = suites::embedding_suite(
                p,
                k.s,
                k.q,
                k.r,
                &spec.grid.build()?,
                &k.envelope,
                k.ensemble,
                spec.seed,
            )?;
            outcome(spec, r.passed, r.max_quotient, &r, vec![])
        }
        ExperimentKind::Continuity => {
            need(!k.alpha_primes.is_empty(), "alpha_primes")?;
            let grid = spec.grid.build()?;
            let u0 = gaussian(&grid, amplitude(k), k.width, k.width);
            let r = nonlinear::continuity(&u0, p, &k.alpha_primes, k.s, &spec.solver)?;
            let headline = r.rows.last().map_or(f64::NAN, |x| x.sup_difference);
            outcome(spec, r.passed, headline, &r, vec![])
        }
        ExperimentKind::Decoherence => {
            need(
                !k.alpha_primes.is_empty() && k.t_list.len() >= 3,
                "alpha_primes and t_list",
            )?;
            let grid = spec.grid.build()?;
            let env = &k.envelope;
            let eta0 = crate::linear_flow::critical_frequency(p.alpha2(), k.alpha_primes[0]);
            let u0 = eta_packet(&grid, amplitude(k), env.sigma_xi, eta0, env.sigma_eta);
            let r = nonlinear::decoherence(
                &u0,
                p,
                &k.alpha_primes,
                k.pairing_prime,
                &k.t_list,
                &spec.solver,
                k.every,
            )?;
            outcome(spec, r.passed, r.rows[0].plateau, &r, vec![])
        }
        ExperimentKind::Thresholds => {
            need(!k.branches.is_empty(), "branches")?;
            let grid = spec.grid.build()?;
            let branches: Vec<(DispersionParams, f64)> = k
                .branches
                .iter()
                .map(|&(a1, a2, pp, amp)| DispersionParams::new(a1, a2, pp, -1.0).map(|d| (d, amp)))
                .collect::<Result<_>>()?;
            let w = k.width;
            let (r, recs) = nonlinear::thresholds(
                |a| gaussian(&grid, a, w, w),
                &branches,
                k.large_factor,
                k.growth_bound,
                &spec.solver,
            )?;
            let headline = r.runs.get(1).map_or(f64::NAN, |x| x.hs_growth);
            outcome(spec, r.passed, headline, &r, recs)
        }
        ExperimentKind::Scattering => {
            need(
                !k.amplitudes.is_empty() && k.checkpoints.len() >= 2,
                "amplitudes and checkpoints",
            )?;
            let grid = spec.grid.build()?;
            let w = k.width;
            let r = nonlinear::scattering(
                |a| gaussian(&grid, a, w, w),
                p,
                &k.amplitudes,
                &k.checkpoints,
                &spec.solver,
            )?;
            let headline = if r.amplitude_ratio.is_finite() {
                r.amplitude_ratio
            } else {
                r.rows[0].drift[0]
            };
            outcome(spec, r.passed, headline, &r, vec![])
        }
    }
}

fn amplitude(k: &Knobs) -> f64 {
    k.amplitudes.first().copied().unwrap_or(1.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateReport {
    pub base: f64,
    pub refined: f64,
    pub change: f64,
    pub passed: bool,
}

/// Re-runs `spec` at doubled resolution and halved step and compares headlines.
pub fn resolution_gate(spec: &ExperimentSpec, base: &Outcome) -> Result<GateReport> {
    let refined = run(&spec.refined())?.headline;
    let change = (refined / base.headline - 1.0).abs();
    Ok(GateReport {
        base: base.headline,
        refined,
        change,
        passed: change < 0.1,
    })
}

/// Geometric grid of `n` points from `a` to `b`.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let r = (b / a).ln() / (n - 1) as f64;
    (0..n).map(|k| a * (r * k as f64).exp()).collect()
}

fn base(
    name: &str,
    kind: ExperimentKind,
    params: DispersionParams,
    grid: GridSpec,
    solver: SolverConfig,
) -> ExperimentSpec {
    ExperimentSpec {
        name: name.into(),
        kind,
        params,
        grid,
        solver,
        seed: 20240601,
        knobs: Knobs::default(),
    }
}

fn dp(a1: f64, a2: f64, p: f64, mu: f64) -> DispersionParams {
    DispersionParams::new(a1, a2, p, mu).expect("preset parameters are valid")
}

fn cfg(dt: f64, t_end: f64) -> SolverConfig {
    SolverConfig::new(dt, t_end).expect("preset solver settings are valid")
}

/// The catalogue of named presets; each acceptance family has at least one.
pub fn presets() -> Vec<ExperimentSpec> {
    use ExperimentKind as K;
    let mut out = Vec::new();

    let mut s = base(
        "conservation",
        K::Conservation,
        dp(2.0, 2.0, 3.0, 1.0),
        GridSpec::square(256, 12.8),
        cfg(1e-3, 1.0),
    );
    s.knobs.alpha_pairs = vec![(2.0, 2.0), (2.0, 1.5)];
    s.knobs.amplitudes = vec![1.0];
    s.solver.monitor_every = 50;
    out.push(s);

    let mut s = base(
        "scaling",
        K::Scaling,
        dp(2.0, 1.5, 3.0, 1.0),
        GridSpec::square(512, 40.0),
        cfg(5e-3, 0.25),
    );
    s.knobs.s_list = vec![0.0, dp(2.0, 1.5, 3.0, 1.0).s_c(), 1.0];
    s.knobs.amplitudes = vec![1.0];
    s.solver.monitor_every = 10;
    out.push(s);

    for (a2, grid, line) in [
        (
            1.5,
            GridSpec {
                nx: 128,
                ny: 1024,
                lx: 40.0,
                ly: 400.0,
            },
            (1 << 18, 131072.0),
        ),
        (
            0.5,
            GridSpec {
                nx: 128,
                ny: 8192,
                lx: 40.0,
                ly: 400.0,
            },
            (1 << 19, 32768.0),
        ),
        (2.0, GridSpec::square(128, 40.0), (1 << 14, 1024.0)),
    ] {
        let mut s = base(
            &format!("kernel-{a2}"),
            K::Kernel,
            dp(2.0, a2, 3.0, 1.0),
            grid,
            cfg(1.0, 1.0),
        );
        s.knobs.line = line;
        s.knobs.levels = 2;
        out.push(s);
    }

    let mut s = base(
        "bernstein-2",
        K::Bernstein,
        dp(2.0, 2.0, 3.0, 1.0),
        GridSpec::square(512, 16.0 * PI),
        cfg(1.0, 1.0),
    );
    s.knobs.ensemble = 6;
    out.push(s);
    let mut s = base(
        "bernstein-1.5",
        K::Bernstein,
        dp(2.0, 1.5, 3.0, 1.0),
        GridSpec {
            nx: 512,
            ny: 4096,
            lx: 16.0 * PI,
            ly: 64.0 * PI,
        },
        cfg(1.0, 1.0),
    );
    s.knobs.ensemble = 4;
    out.push(s);

    let mut s = base(
        "bessel",
        K::Bessel,
        dp(2.0, 2.0, 3.0, 1.0),
        GridSpec::square(128, 16.0),
        cfg(1.0, 1.0),
    );
    s.knobs.cases = [2.0, 1.5, 0.5]
        .iter()
        .flat_map(|&a| [(a, 0.5), (a, 1.3)])
        .collect();
    s.knobs.kernel_grid = Some(GridSpec::square(512, 64.0));
    s.knobs.ensemble = 20;
    out.push(s);

    for (a1, a2, grid, t0, t1) in [
        (
            2.0,
            1.5,
            GridSpec {
                nx: 1876,
                ny: 1440,
                lx: 1225.0,
                ly: 733.0,
            },
            6.0,
            190.0,
        ),
        (1.5, 1.5, GridSpec::square(1350, 869.0), 8.0, 253.0),
        (
            2.0,
            0.5,
            GridSpec {
                nx: 648,
                ny: 10240,
                lx: 420.0,
                ly: 830.0,
            },
            2.0,
            64.0,
        ),
        (0.5, 0.5, GridSpec::square(4096, 3000.0), 20.0, 640.0),
    ] {
        let mut s = base(
            &format!("decay-{a1}-{a2}"),
            K::Decay,
            dp(a1, a2, 3.0, 1.0),
            grid,
            cfg(1.0, 1.0),
        );
        s.knobs.t_list = geomspace(t0, t1, 8);
        out.push(s);
    }

    let mut s = base(
        "oscillatory-kernel",
        K::OscillatoryKernel,
        dp(2.0, 2.0, 3.0, 1.0),
        GridSpec::square(16, 1.0),
        cfg(1.0, 1.0),
    );
    s.knobs.cases = vec![(1.5, 0.0), (1.5, 0.7), (0.5, 0.0), (0.5, 0.3)];
    s.knobs.ys = vec![
        0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0, 50.0, 70.0, 100.0,
    ];
    out.push(s);

    for (a2, s_, q) in [(2.0, 1.0, 4.0), (1.5, 1.0, 4.0), (0.5, 1.0, 6.0)] {
        let mut s = base(
            &format!("gn-{a2}"),
            K::Gn,
            dp(2.0, a2, 2.0, 1.0),
            GridSpec::square(64, 8.0),
            cfg(1.0, 1.0),
        );
        s.knobs.s = s_;
        s.knobs.q = q;
        s.knobs.ensemble = 100;
        out.push(s);
    }

    let mut s = base(
        "strichartz",
        K::Strichartz,
        dp(2.0, 1.5, 3.0, 1.0),
        GridSpec::square(64, 8.0),
        cfg(1.0, 1.0),
    );
    s.knobs.r = 4.0;
    s.knobs.t_window = 0.5;
    s.knobs.ensemble = 10;
    out.push(s);

    let mut s = base(
        "embedding",
        K::Embedding,
        dp(2.0, 1.5, 3.0, 1.0),
        GridSpec::square(64, 8.0),
        cfg(1.0, 1.0),
    );
    s.knobs.s = 1.25;
    s.knobs.q = f64::INFINITY;
    s.knobs.r = 2.0;
    s.knobs.ensemble = 100;
    out.push(s);

    let mut s = base(
        "continuity",
        K::Continuity,
        dp(2.0, 1.5, 3.0, 1.0),
        GridSpec::square(128, 12.8),
        cfg(2e-3, 1.0),
    );
    s.knobs.alpha_primes = vec![1.6, 1.55, 1.51];
    s.knobs.s = 1.25;
    s.knobs.amplitudes = vec![1.0];
    out.push(s);

    let mut s = base(
        "decoherence",
        K::Decoherence,
        dp(2.0, 2.0, 5.0, 1.0),
        GridSpec {
            nx: 128,
            ny: 4800,
            lx: 400.0,
            ly: 3000.0,
        },
        cfg(1.0, 1000.0),
    );
    s.knobs.alpha_primes = vec![1.5, 1.75];
    s.knobs.pairing_prime = 1.8;
    s.knobs.t_list = geomspace(170.0, 1000.0, 8);
    s.knobs.envelope = Envelope {
        sigma_xi: 0.05,
        sigma_eta: 0.3,
        window: None,
    };
    s.knobs.amplitudes = vec![0.1];
    s.knobs.every = 10;
    out.push(s);

    let mut s = base(
        "thresholds",
        K::Thresholds,
        dp(2.0, 2.0, 3.0, -1.0),
        GridSpec::square(256, 12.8),
        cfg(1e-3, 1.0),
    );
    s.knobs.branches = vec![
        (2.0, 2.0, 2.5, 0.3),
        (2.0, 2.0, 3.0, 0.3),
        (2.0, 0.5, 3.0, 0.3),
    ];
    s.solver.monitor_every = 10;
    out.push(s);

    let mut s = base(
        "scattering",
        K::Scattering,
        dp(2.0, 1.5, 4.0, 1.0),
        GridSpec::square(256, 64.0),
        cfg(0.01, 8.0),
    );
    s.knobs.amplitudes = vec![0.1, 0.05];
    s.knobs.checkpoints = vec![1.0, 2.0, 4.0, 8.0];
    s.solver.monitor_every = 100;
    out.push(s);

    out
}

pub fn preset(name: &str) -> Option<ExperimentSpec> {
    presets().into_iter().find(|s| s.name == name)
}

/// Presets of one kind, in catalogue order.
pub fn presets_of(kind: ExperimentKind) -> Vec<ExperimentSpec> {
    presets().into_iter().filter(|s| s.kind == kind).collect()
}

/// Builds the datum used by solver-driven kinds, for snapshots.
pub fn initial_datum(spec: &ExperimentSpec) -> Result<Field2D> {
    let grid = spec.grid.build()?;
    let k = &spec.knobs;
    Ok(match spec.kind {
        ExperimentKind::Decoherence => {
            let eta0 =
                crate::linear_flow::critical_frequency(spec.params.alpha2(), k.alpha_primes[0]);
            eta_packet(
                &grid,
                amplitude(k),
                k.envelope.sigma_xi,
                eta0,
                k.envelope.sigma_eta,
            )
        }
        _ => gaussian(&grid, amplitude(k), k.width, k.width),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_has_a_preset_and_names_are_unique() {
        let all = presets();
        for kind in ExperimentKind::ALL {
            assert!(all.iter().any(|s| s.kind == kind), "{kind:?}");
        }
        let mut names: Vec<_> = all.iter().map(|s| s.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
    }

    #[test]
    fn geomspace_endpoints() {
        let g = geomspace(2.0, 200.0, 3);
        assert!((g[1] - 20.0).abs() < 1e-12 && (g[2] - 200.0).abs() < 1e-12);
    }

    #[test]
    fn missing_knobs_are_input_errors() {
        let mut s = preset("continuity").unwrap();
        s.knobs.alpha_primes.clear();
        assert!(run(&s).unwrap_err().is_input_error());
    }

    #[test]
    fn runs_are_deterministic() {
        let mut s = preset("gn-2").unwrap();
        s.knobs.ensemble = 3;
        let a = serde_json::to_string(&run(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&s).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
