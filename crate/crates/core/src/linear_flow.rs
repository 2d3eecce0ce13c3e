//! The free propagator `U(t) = exp(-it(D1^a1 + D2^a2))` and measurements of
//! its dispersive and Strichartz-type behaviour.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D, Space};
use crate::multipliers::{check_order, frac_deriv, joint_radius, phi, Axis, DispersionParams};
use crate::quad::{integrate_panels, QuadOptions};

/// `U(t) f`, returned in the representation of `f`.
pub fn propagate(f: &Field2D, params: &DispersionParams, t: f64) -> Field2D {
    if t == 0.0 {
        return f.clone();
    }
    f.apply_symbol(|xi, eta| Complex64::from_polar(1.0, -t * params.omega(xi, eta)))
}

/// Precomputed `|xi|^a1 + |eta|^a2` on a grid's lattice, for repeated evolution.
pub(crate) fn omega_table(grid: &Grid2D, params: &DispersionParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let ex: Vec<f64> = grid
        .xi()
        .iter()
        .map(|x| x.abs().powf(params.alpha1()))
        .collect();
    let ey: Vec<f64> = grid
        .eta()
        .iter()
        .map(|y| y.abs().powf(params.alpha2()))
        .collect();
    for a in &ex {
        for b in &ey {
            out.push(a + b);
        }
    }
    out
}

/// Exponent pair `(q, r)` with `1/q + 1/r = 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    q: f64,
    r: f64,
}

impl AdmissiblePair {
    pub fn new(q: f64, r: f64) -> Result<Self> {
        if !(q > 2.0) || !(r >= 2.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "admissible pair needs q in (2, inf], r in [2, inf); got ({q}, {r})"
            )));
        }
        if (1.0 / q + 1.0 / r - 0.5).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "(q, r) = ({q}, {r}) violates 1/q + 1/r = 1/2"
            )));
        }
        Ok(Self { q, r })
    }

    /// The pair determined by its spatial exponent.
    pub fn from_r(r: f64) -> Result<Self> {
        let inv_q = 0.5 - 1.0 / r;
        let q = if inv_q == 0.0 {
            f64::INFINITY
        } else {
            1.0 / inv_q
        };
        Self::new(q, r)
    }

    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Grid-scale Gaussian (half a cell wide in each direction) centred at the origin.
pub fn concentrated_datum(grid: &Grid2D) -> Field2D {
    let sx = 0.5 * grid.dx();
    let sy = 0.5 * grid.dy();
    Field2D::from_fn(grid, |x, y| {
        Complex64::new(
            (-(x * x) / (2.0 * sx * sx) - (y * y) / (2.0 * sy * sy)).exp(),
            0.0,
        )
    })
}

/// Fraction of `sum |f|^2` in the outer eighth of the box on either axis.
pub fn boundary_fraction(f: &Field2D) -> f64 {
    let phys = f.physical();
    let g = phys.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let (mut band, mut total) = (0.0, 0.0);
    for i in 0..nx {
        let edge_i = i < nx / 8 || i >= nx - nx / 8;
        for j in 0..ny {
            let v = phys.data()[i * ny + j].norm_sqr();
            total += v;
            if edge_i || j < ny / 8 || j >= ny - ny / 8 {
                band += v;
            }
        }
    }
    if total > 0.0 {
        band / total
    } else {
        0.0
    }
}

/// Least-squares slope of `ln v` against `ln t`.
pub fn loglog_slope(ts: &[f64], vs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(vs)
        .filter(|(t, v)| **t > 0.0 && **v > 0.0)
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    pub n: f64,
    pub times: Vec<f64>,
    pub sup: Vec<f64>,
    pub slope: f64,
    /// `max_t t ||U(t) P_N f||_inf / (N^(1 + a1/a2 - a1) ||P_N f||_1)`.
    pub constant: f64,
    pub datum_l1: f64,
    pub max_boundary_fraction: f64,
}

/// Largest share of the wave's `L^2` mass allowed in the boundary band.
pub const BOUNDARY_TOLERANCE: f64 = 0.02;

/// Sup-norm decay of `U(t) P_N f` for the concentrated datum.
///
/// `base` is the box used at `N = 1`; for other `N` it is shrunk by `N` in
/// `x` and `N^(a1/a2)` in `y` with the same sample counts, so the datum and
/// the annulus occupy the same lattice cells at every scale.
pub fn measure_localized_decay(
    params: &DispersionParams,
    n: f64,
    t_list: &[f64],
    base: &Grid2D,
) -> Result<DecayReport> {
    if t_list.len() < 3 || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidInput(
            "need at least three positive times".into(),
        ));
    }
    let (tmin, tmax) = t_list
        .iter()
        .fold((f64::INFINITY, 0f64), |(a, b), &t| (a.min(t), b.max(t)));
    if (tmax / tmin).log10() < 1.5 - 1e-9 {
        return Err(Error::InvalidInput(format!(
            "times span {:.2} decades, need at least 1.5",
            (tmax / tmin).log10()
        )));
    }
    let a1 = params.alpha1();
    let ratio = a1 / params.alpha2();
    let alpha = params.alpha();
    let grid = base.rescaled(1.0 / n, n.powf(-ratio))?;
    if 2.0 * n > grid.nyquist_x() || (2.0 * n).powf(2.0 / alpha) > grid.nyquist_y() {
        return Err(Error::UnderResolved(format!(
            "annulus of scale {n} exceeds the grid's Nyquist frequencies"
        )));
    }
    let datum = concentrated_datum(&grid);
    let pf = datum.apply_real_symbol(|xi, eta| phi(joint_radius(xi, eta, alpha) / n));
    let datum_l1 = pf.lp_norm(1.0)?;
    let pf = pf.into_space(Space::Spectral);
    let omega = omega_table(&grid, params);
    let mut sup = Vec::with_capacity(t_list.len());
    let mut worst = 0f64;
    for &t in t_list {
        let mut w = pf.clone();
        for (z, om) in w.data_mut().iter_mut().zip(&omega) {
            *z *= Complex64::from_polar(1.0, -t * om);
        }
        w.set_space(Space::Physical);
        let frac = boundary_fraction(&w);
        worst = worst.max(frac);
        if frac > BOUNDARY_TOLERANCE {
            return Err(Error::Boundary(format!(
                "{:.2}% of the mass sits in the boundary band at t = {t}; enlarge the box",
                100.0 * frac
            )));
        }
        sup.push(w.sup_norm());
    }
    let slope = loglog_slope(t_list, &sup);
    let npow = n.powf(1.0 + ratio - a1);
    let constant = t_list
        .iter()
        .zip(&sup)
        .map(|(t, s)| t * s)
        .fold(0f64, f64::max)
        / (npow * datum_l1);
    Ok(DecayReport {
        n,
        times: t_list.to_vec(),
        sup,
        slope,
        constant,
        datum_l1,
        max_boundary_fraction: worst,
    })
}

/// Exponents of the `D1`, `D2` weights for spatial exponent `r`.
pub fn strichartz_weights(params: &DispersionParams, r: f64) -> (f64, f64) {
    let g = 0.5 - 1.0 / r;
    (-params.beta1() * g, -params.beta2() * g)
}

/// Zeroes the spectral lines `xi = 0` and `eta = 0`.
pub fn strip_axis_lines(f: &Field2D) -> Field2D {
    f.apply_real_symbol(|xi, eta| if xi == 0.0 || eta == 0.0 { 0.0 } else { 1.0 })
}

fn axis_line_mass(f: &Field2D, axis: Axis) -> f64 {
    let s = f.spectral();
    let g = s.grid();
    let ny = g.ny();
    let mut m = 0f64;
    for (i, &xi) in g.xi().iter().enumerate() {
        for (j, &eta) in g.eta().iter().enumerate() {
            let on = match axis {
                Axis::X => xi == 0.0,
                Axis::Y => eta == 0.0,
            };
            if on {
                m = m.max(s.data()[i * ny + j].norm());
            }
        }
    }
    m
}

/// `|| D1^{e1} D2^{e2} U(t) f ||_{L^q_t L^r} / ||f||_2` over `[0, t_window]`
/// with `nt` trapezoid nodes.
pub fn strichartz_quotient(
    f: &Field2D,
    params: &DispersionParams,
    pair: AdmissiblePair,
    t_window: f64,
    nt: usize,
) -> Result<f64> {
    if nt < 2 || !(t_window > 0.0) {
        return Err(Error::InvalidInput(
            "need nt >= 2 and a positive window".into(),
        ));
    }
    let l2 = f.spectral_l2();
    if l2 == 0.0 {
        return Ok(0.0);
    }
    let (e1, e2) = strichartz_weights(params, pair.r());
    let peak = f
        .spectral()
        .data()
        .iter()
        .fold(0f64, |m, z| m.max(z.norm()));
    for (e, axis) in [(e1, Axis::X), (e2, Axis::Y)] {
        if e < 0.0 && axis_line_mass(f, axis) > 1e-12 * peak {
            return Err(Error::InvalidInput(format!(
                "negative power on {axis:?} needs a spectrum vanishing on that zero-frequency line"
            )));
        }
    }
    let weighted = frac_deriv(&frac_deriv(&f.spectral(), Axis::X, e1), Axis::Y, e2);
    let dt = t_window / (nt - 1) as f64;
    let mut norms = Vec::with_capacity(nt);
    for k in 0..nt {
        let u = propagate(&weighted, params, k as f64 * dt).physical();
        norms.push(u.lp_norm(pair.r())?);
    }
    let q = pair.q();
    let time_norm = if q.is_infinite() {
        norms.iter().cloned().fold(0.0, f64::max)
    } else {
        let s: f64 = norms
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let w = if k == 0 || k == nt - 1 { 0.5 } else { 1.0 };
                w * v.powf(q)
            })
            .sum();
        (s * dt).powf(1.0 / q)
    };
    Ok(time_norm / l2)
}

#[derive(Clone, Copy, Debug)]
pub struct KernelKOptions {
    /// Real-axis segment ends at `handoff * eta_0` before turning into the
    /// complex plane.
    pub handoff: f64,
    /// `[0, eps]` is handled by the leading term of the singular amplitude.
    pub eps: f64,
    pub quad: QuadOptions,
}

impl Default for KernelKOptions {
    fn default() -> Self {
        Self {
            handoff: 2.0,
            eps: 1e-12,
            quad: QuadOptions {
                abs_tol: 1e-10,
                rel_tol: 1e-8,
                max_intervals: 2_000_000,
            },
        }
    }
}

/// Stationary point of `y eta - eta^alpha` on `eta > 0`, when it exists.
pub fn stationary_point(alpha: f64, y: f64) -> Option<f64> {
    (y > 0.0).then(|| (y / alpha).powf(1.0 / (alpha - 1.0)))
}

/// `K(y) = int e^{-i|eta|^a + i y eta} |eta|^{-beta(1 + i mu)} d eta` for each `y`.
///
/// Each half line is integrated along the real axis up to past its
/// stationary point, then along a ray into the half plane where the
/// integrand decays exponentially.
pub fn kernel_k_oracle(
    alpha: f64,
    beta: f64,
    mu: f64,
    y_list: &[f64],
    opts: KernelKOptions,
) -> Result<Vec<Complex64>> {
    check_order("alpha", alpha)?;
    if !(beta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "beta = {beta} makes K(y) divergent at 0"
        )));
    }
    let gamma = Complex64::new(beta, beta * mu);
    y_list
        .iter()
        .map(|&y| Ok(half_line(alpha, gamma, y, &opts)? + half_line(alpha, gamma, -y, &opts)?))
        .collect()
}

/// `int_0^inf e^{i(y eta - eta^a)} eta^{-gamma} d eta`.
fn half_line(alpha: f64, gamma: Complex64, y: f64, opts: &KernelKOptions) -> Result<Complex64> {
    let i = Complex64::i();
    let integrand = |eta: Complex64| -> Complex64 {
        let ln = eta.ln();
        (i * (y * eta - (alpha * ln).exp()) - gamma * ln).exp()
    };
    let one_m_g = Complex64::new(1.0, 0.0) - gamma;
    let theta = if alpha > 1.0 {
        PI / (2.0 * alpha)
    } else {
        0.45 * PI
    };
    let eps = opts.eps;

    let Some(eta0) = stationary_point(alpha, y) else {
        // no stationary point: rotate the whole half line downwards
        let d = Complex64::from_polar(1.0, -theta);
        let head = d.powc(one_m_g) * Complex64::new(eps, 0.0).powc(one_m_g) / one_m_g;
        return Ok(head + ray(&integrand, Complex64::new(0.0, 0.0), d, eps, y, alpha, opts)?);
    };

    let r = opts.handoff * eta0;
    let head = Complex64::new(eps, 0.0).powc(one_m_g) / one_m_g;
    let dphase = |eta: f64| (y - alpha * eta.powf(alpha - 1.0)).abs();
    let mut breaks = vec![eps];
    let mut eta = eps;
    let mut crossed = false;
    while eta < r {
        let h = (3.0 / (dphase(eta) + 1.0)).min(0.5 * eta.max(eps));
        let mut next = eta + h.max(eps);
        if !crossed && next >= eta0 {
            next = eta0;
            crossed = true;
        }
        eta = next.min(r);
        breaks.push(eta);
    }
    let mut real_f = |x: f64| integrand(Complex64::new(x, 0.0));
    let body = integrate_panels(&mut real_f, &breaks, opts.quad)?.value;
    // beyond the stationary point: upwards when the y eta term dominates (a < 1)
    let d = if alpha > 1.0 {
        Complex64::from_polar(1.0, -theta)
    } else {
        Complex64::from_polar(1.0, theta)
    };
    let tail = ray(&integrand, Complex64::new(r, 0.0), d, 0.0, y, alpha, opts)?;
    Ok(head + body + tail)
}

/// `int_{s0}^inf f(z0 + s d) d ds` along a ray where `f` decays.
fn ray(
    f: &dyn Fn(Complex64) -> Complex64,
    z0: Complex64,
    d: Complex64,
    s0: f64,
    y: f64,
    alpha: f64,
    opts: &KernelKOptions,
) -> Result<Complex64> {
    let mag = |s: f64| f(z0 + d * s).norm();
    let start = if s0 > 0.0 { s0 } else { 1e-3 / (y.abs() + 1.0) };
    let scale = mag(start).max(1e-300);
    let mut breaks = if s0 > 0.0 { vec![s0] } else { vec![0.0] };
    let mut s = start;
    loop {
        breaks.push(s);
        let m = mag(s);
        if m > 1e3 * scale.max(1.0) {
            return Err(Error::Quadrature(format!(
                "integrand grows along the contour at s = {s} (y = {y}, alpha = {alpha})"
            )));
        }
        if m < 1e-17 * scale.max(1.0) && s > 1.0 {
            break;
        }
        if s > 1e12 {
            return Err(Error::Quadrature(format!(
                "contour tail does not decay (y = {y})"
            )));
        }
        s *= 1.5;
    }
    let mut g = |s: f64| f(z0 + d * s) * d;
    Ok(integrate_panels(&mut g, &breaks, opts.quad)?.value)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingReport {
    pub times: Vec<f64>,
    pub pairing: Vec<Complex64>,
    /// Log-log slope of `|pairing|` over the positive times.
    pub exponent: f64,
}

fn decoherence_params(
    alpha: f64,
    alpha_prime: f64,
) -> Result<(DispersionParams, DispersionParams)> {
    if alpha == alpha_prime {
        return Err(Error::InvalidInput(
            "decoherence needs alpha != alpha'".into(),
        ));
    }
    Ok((
        DispersionParams::new(2.0, alpha, 3.0, 1.0)?,
        DispersionParams::new(2.0, alpha_prime, 3.0, 1.0)?,
    ))
}

/// `<U_a(t) g, U_a'(t) g>` with `alpha1 = 2` for both flows.
pub fn decoherence_pairing(
    g: &Field2D,
    alpha: f64,
    alpha_prime: f64,
    t_list: &[f64],
) -> Result<PairingReport> {
    decoherence_params(alpha, alpha_prime)?;
    let s = g.spectral();
    let grid = s.grid();
    let ny = grid.ny();
    // the xi^2 parts cancel; only the eta phase difference remains
    let mut weights = vec![0.0; ny];
    for i in 0..grid.nx() {
        for (j, w) in weights.iter_mut().enumerate() {
            *w += s.data()[i * ny + j].norm_sqr();
        }
    }
    let dpsi: Vec<f64> = grid
        .eta()
        .iter()
        .map(|e| e.abs().powf(alpha) - e.abs().powf(alpha_prime))
        .collect();
    let area = grid.cell_area();
    let pairing: Vec<Complex64> = t_list
        .iter()
        .map(|&t| {
            let sum: Complex64 = weights
                .iter()
                .zip(&dpsi)
                .map(|(w, p)| Complex64::from_polar(*w, -t * p))
                .sum();
            sum * area
        })
        .collect();
    let mags: Vec<f64> = pairing.iter().map(|z| z.norm()).collect();
    let exponent = loglog_slope(t_list, &mags);
    Ok(PairingReport {
        times: t_list.to_vec(),
        pairing,
        exponent,
    })
}

/// `|| U_a(t) g - U_a'(t) g ||_2^2`, computed directly from the two flows.
pub fn linear_difference_sq(g: &Field2D, alpha: f64, alpha_prime: f64, t: f64) -> Result<f64> {
    let (pa, pb) = decoherence_params(alpha, alpha_prime)?;
    let d = propagate(g, &pa, t).sub(&propagate(g, &pb, t));
    Ok(d.spectral_l2().powi(2))
}

/// Critical frequency where `|eta|^a - |eta|^a'` is stationary.
pub fn critical_frequency(alpha: f64, alpha_prime: f64) -> f64 {
    (alpha_prime / alpha).powf(1.0 / (alpha - alpha_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::{aniso_potential, lp_project_unchecked, psi, ProjectionKind};
    use crate::quad::integrate;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_smooth(grid: &Grid2D, seed: u64) -> Field2D {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Field2D::from_spectrum(grid, |xi, eta| {
            let env = (-(xi * xi + eta * eta) / 8.0).exp();
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * env
        })
        .physical()
    }

    fn params() -> DispersionParams {
        DispersionParams::new(2.0, 1.5, 3.0, 1.0).unwrap()
    }

    #[test]
    fn propagator_group_laws() {
        let g = Grid2D::new(32, 32, 8.0, 8.0).unwrap();
        let f = random_smooth(&g, 4);
        let p = params();
        assert!(propagate(&f, &p, 0.0).sub(&f).spectral_l2() == 0.0);
        let n0 = f.spectral_l2();
        let u = propagate(&f, &p, 7.3);
        assert!((u.spectral_l2() - n0).abs() < 1e-12 * n0);
        let back = propagate(&u, &p, -7.3);
        assert!(back.sub(&f).spectral_l2() < 1e-12 * n0);
        let ab = propagate(&propagate(&f, &p, 1.1), &p, 2.4);
        assert!(ab.sub(&propagate(&f, &p, 3.5)).spectral_l2() < 1e-12 * n0);
    }

    #[test]
    fn propagator_commutes_with_multipliers() {
        let g = Grid2D::new(64, 128, 40.0, 60.0).unwrap();
        let f = random_smooth(&g, 8);
        let p = params();
        let a = propagate(
            &lp_project_unchecked(&f, 1.5, 1.0, ProjectionKind::Joint),
            &p,
            2.0,
        );
        let b = lp_project_unchecked(&propagate(&f, &p, 2.0), 1.5, 1.0, ProjectionKind::Joint);
        assert!(a.sub(&b).spectral_l2() < 1e-12 * f.spectral_l2());
        let a = propagate(&aniso_potential(&f, &p, -1.2, false), &p, 2.0);
        let b = aniso_potential(&propagate(&f, &p, 2.0), &p, -1.2, false);
        assert!(a.sub(&b).spectral_l2() < 1e-12 * f.spectral_l2());
    }

    #[test]
    fn admissible_pairs() {
        assert!(AdmissiblePair::new(4.0, 4.0).is_ok());
        assert!(AdmissiblePair::new(4.0, 3.0).is_err());
        assert!(AdmissiblePair::new(2.0, f64::INFINITY).is_err());
        let p = AdmissiblePair::from_r(6.0).unwrap();
        assert!((p.q() - 3.0).abs() < 1e-12);
        assert!(AdmissiblePair::from_r(2.0).unwrap().q().is_infinite());
    }

    #[test]
    fn schrodinger_decay_rate() {
        let d = DispersionParams::cubic_defocusing();
        let base = Grid2D::new(512, 512, 400.0, 400.0).unwrap();
        let ts: Vec<f64> = (0..6)
            .map(|k| 1.0 * 10f64.powf(1.5 * k as f64 / 5.0))
            .collect();
        let r = measure_localized_decay(&d, 1.0, &ts, &base).unwrap();
        assert!((r.slope + 1.0).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn decay_rejects_short_windows_and_small_boxes() {
        let d = DispersionParams::cubic_defocusing();
        let base = Grid2D::new(64, 64, 30.0, 30.0).unwrap();
        assert!(measure_localized_decay(&d, 1.0, &[1.0, 2.0, 4.0], &base).is_err());
        let r = measure_localized_decay(&d, 1.0, &[1.0, 10.0, 100.0], &base);
        assert!(matches!(r, Err(Error::Boundary(_))), "{r:?}");
    }

    #[test]
    fn strichartz_zero_and_precondition() {
        let g = Grid2D::new(32, 32, 10.0, 10.0).unwrap();
        let p = params();
        let pair = AdmissiblePair::new(4.0, 4.0).unwrap();
        let z = Field2D::zeros(&g, Space::Physical);
        assert_eq!(strichartz_quotient(&z, &p, pair, 1.0, 8).unwrap(), 0.0);
        let f = random_smooth(&g, 2);
        assert!(strichartz_quotient(&f, &p, pair, 1.0, 8).is_err());
        assert!(strichartz_quotient(&strip_axis_lines(&f), &p, pair, 1.0, 8).is_ok());
    }

    #[test]
    fn stationary_point_formula() {
        let e = stationary_point(1.5, 3.0).unwrap();
        assert!((1.5 * e.sqrt() - 3.0).abs() < 1e-12);
        let e = stationary_point(0.5, 2.0).unwrap();
        assert!((0.5 * e.powf(-0.5) - 2.0).abs() < 1e-12);
        assert!(stationary_point(1.5, -1.0).is_none());
    }

    /// Real-axis integral with the smooth cutoff `psi(eta / lambda)`.
    fn brute_force_k(alpha: f64, mu: f64, y: f64, lambda: f64) -> Complex64 {
        let beta = 1.0 - alpha / 2.0;
        let g = Complex64::new(beta, beta * mu);
        let eps = 1e-12;
        let head = 2.0 * Complex64::new(eps, 0.0).powc(1.0 - g) / (1.0 - g);
        let f = |eta: f64| {
            let amp = (-g * eta.ln()).exp() * psi(eta / lambda);
            let ph = -eta.powf(alpha);
            amp * (Complex64::from_polar(1.0, ph + y * eta)
                + Complex64::from_polar(1.0, ph - y * eta))
        };
        let mut breaks = vec![eps];
        while *breaks.last().unwrap() < 1.0 {
            let b = breaks.last().unwrap() * 4.0;
            breaks.push(b);
        }
        let mut x = 1.0;
        while x < 2.0 * lambda {
            x += 0.25;
            breaks.push(x.min(2.0 * lambda));
        }
        let opts = QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 1_000_000,
        };
        let mut f = f;
        head + integrate_panels(&mut f, &breaks, opts).unwrap().value
    }

    #[test]
    fn contour_oracle_matches_cutoff_integral() {
        for &(alpha, mu, y) in &[
            (1.5, 0.0, 3.0),
            (1.5, 0.7, 0.0),
            (0.5, 0.3, 2.0),
            (0.5, 0.0, 0.5),
        ] {
            let beta = 1.0 - alpha / 2.0;
            let k = kernel_k_oracle(alpha, beta, mu, &[y], KernelKOptions::default()).unwrap()[0];
            let b = brute_force_k(alpha, mu, y, 150.0);
            assert!(
                (k - b).norm() < 2e-3 * k.norm().max(1.0),
                "alpha {alpha} mu {mu} y {y}: {k} vs {b}"
            );
        }
    }

    #[test]
    fn gaussian_contour_check() {
        // the same ray machinery on an integrand with a closed form
        let r = integrate(
            |x| Complex64::new((-x * x).exp(), 0.0),
            0.0,
            10.0,
            QuadOptions::default(),
        )
        .unwrap();
        assert!((r.value.re - PI.sqrt() / 2.0).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn kernel_k_is_even(y in 0.0f64..30.0, mu in 0.0f64..1.0, ai in 0usize..2) {
            let alpha = [1.5, 0.5][ai];
            let beta = 1.0 - alpha / 2.0;
            let v = kernel_k_oracle(alpha, beta, mu, &[y, -y], KernelKOptions::default()).unwrap();
            prop_assert!((v[0] - v[1]).norm() <= 1e-8 * v[0].norm().max(1.0));
        }

        #[test]
        fn polarization_identity(seed in any::<u64>(), t in 0.0f64..50.0) {
            let g = Grid2D::new(16, 64, 10.0, 40.0).unwrap();
            let f = random_smooth(&g, seed);
            let rep = decoherence_pairing(&f, 2.0, 1.5, &[t]).unwrap();
            let lhs = linear_difference_sq(&f, 2.0, 1.5, t).unwrap();
            let m = f.spectral_l2().powi(2);
            let rhs = 2.0 * m - 2.0 * rep.pairing[0].re;
            prop_assert!((lhs - rhs).abs() < 1e-10 * m);
        }
    }

    #[test]
    fn pairing_at_time_zero_is_the_mass() {
        let g = Grid2D::new(16, 32, 10.0, 20.0).unwrap();
        let f = random_smooth(&g, 1);
        let rep = decoherence_pairing(&f, 2.0, 1.8, &[0.0]).unwrap();
        let m = f.spectral_l2().powi(2);
        assert!((rep.pairing[0].re - m).abs() < 1e-12 * m);
        assert!(rep.pairing[0].im.abs() < 1e-12 * m);
        assert!((critical_frequency(2.0, 1.5) - 0.5625).abs() < 1e-12);
    }
}
