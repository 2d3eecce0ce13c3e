//! Sampled convolution kernels of Littlewood-Paley and Bessel multipliers.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::bump::phi;
use super::params::joint_radius;
use super::potential_symbol;
use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D, Space};

/// Box and sample counts for a 2D kernel evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl KernelGrid {
    pub fn build(&self) -> Result<Grid2D> {
        Grid2D::new(self.nx, self.ny, self.lx, self.ly)
    }

    /// Twice the box with twice the samples: same spacing, finer frequency lattice.
    pub fn refined(&self, level: u32) -> Self {
        let f = 1usize << level;
        Self {
            nx: self.nx * f,
            ny: self.ny * f,
            lx: self.lx * f as f64,
            ly: self.ly * f as f64,
        }
    }
}

/// Samples the (periodised) inverse transform of `symbol` on the physical grid.
pub fn sample_kernel(grid: &Grid2D, symbol: impl Fn(f64, f64) -> f64) -> Field2D {
    let norm = (grid.len() as f64).sqrt() / (4.0 * grid.lx() * grid.ly());
    let ny = grid.ny();
    let mut data = vec![Complex64::default(); grid.len()];
    for (i, &xi) in grid.xi().iter().enumerate() {
        for (j, &eta) in grid.eta().iter().enumerate() {
            // (-1)^(k+l) moves the origin from the corner to the box centre
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            data[i * ny + j] = Complex64::new(sign * norm * symbol(xi, eta), 0.0);
        }
    }
    Field2D::from_data(grid, data, Space::Spectral)
        .expect("sized from grid")
        .into_space(Space::Physical)
}

fn l1(f: &Field2D) -> f64 {
    f.lp_norm(1.0).expect("q = 1 is valid")
}

/// Least-squares slope of `log|v|` against `log y` over `window`, returned as
/// a positive decay exponent.
pub fn fit_power_tail(ys: &[f64], vals: &[f64], window: (f64, f64)) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ys
        .iter()
        .zip(vals)
        .filter(|(y, v)| **y >= window.0 && **y <= window.1 && v.abs() > 0.0)
        .map(|(y, v)| (y.ln(), v.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

/// The line `x = 0` of the kernel of `phi(sqrt(xi^2 + |eta|^alpha))`, on a long
/// one-dimensional period `[-l, l)` with `n` samples.
///
/// The `xi` integral is done by the trapezoid rule (spectrally accurate for
/// the smooth `xi` dependence), the `eta` integral by an FFT. Returns
/// `(y >= 0, values)`.
pub fn kernel_y_line(alpha: f64, n: usize, l: f64) -> (Vec<f64>, Vec<f64>) {
    let nxi = 1024;
    let dxi = 2.0 / nxi as f64;
    let eta_max = 2f64.powf(2.0 / alpha);
    let deta = PI / l;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|k| {
            let k = if k < n / 2 {
                k as f64
            } else {
                k as f64 - n as f64
            };
            let eta = k * deta;
            if eta.abs() >= eta_max {
                return Complex64::default();
            }
            // g(eta) = int phi d xi, symmetric in xi
            let mut s = 0.5 * phi(joint_radius(0.0, eta, alpha));
            for m in 1..=nxi {
                s += phi(joint_radius(m as f64 * dxi, eta, alpha));
            }
            Complex64::new(2.0 * s * dxi, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = deta / (4.0 * PI * PI);
    let dy = 2.0 * l / n as f64;
    let ys = (0..n / 2).map(|j| j as f64 * dy).collect();
    let vals = buf[..n / 2].iter().map(|z| z.re * scale).collect();
    (ys, vals)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpKernelReport {
    pub alpha: f64,
    pub n: f64,
    /// `||Phi||_1` at each refinement level.
    pub l1_norms: Vec<f64>,
    /// Largest relative spread of the `L^1` norms.
    pub l1_drift: f64,
    pub converged: bool,
    pub y_tail_exponent: f64,
    pub y_fit_window: (f64, f64),
    pub x_tail_exponent: f64,
}

/// Kernel of `P_N` for anisotropy index `alpha`, with its `L^1` norm under
/// refinement and fitted tail exponents.
///
/// The scale `n` is handled by rescaled sampling: the box shrinks by `n` in
/// `x` and `n^(2/alpha)` in `y` while sample counts stay fixed.
pub fn lp_kernel(
    alpha: f64,
    n: f64,
    base: KernelGrid,
    levels: u32,
    line: (usize, f64),
) -> Result<(Field2D, LpKernelReport)> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParams(format!(
            "alpha = {alpha} must lie in (0,2]"
        )));
    }
    let scaled = |g: KernelGrid| KernelGrid {
        lx: g.lx / n,
        ly: g.ly / n.powf(2.0 / alpha),
        ..g
    };
    let symbol = |xi: f64, eta: f64| phi(joint_radius(xi, eta, alpha) / n);
    let mut norms = Vec::new();
    let mut kernel = None;
    for level in 0..levels.max(1) {
        let g = scaled(base.refined(level)).build()?;
        let k = sample_kernel(&g, symbol);
        norms.push(l1(&k));
        if level == 0 {
            kernel = Some(k);
        }
    }
    let (lo, hi) = norms
        .iter()
        .fold((f64::INFINITY, 0f64), |(a, b), &v| (a.min(v), b.max(v)));
    let drift = (hi - lo) / lo;

    let (ys, vals) = kernel_y_line(alpha, line.0, line.1);
    let peak = vals.iter().fold(0f64, |m, v| m.max(v.abs()));
    let noise = 1e-13 * peak;
    let y_hi_cap = line.1 / 10.0;
    // last decade below the cap that stays above ten times the noise floor
    let mut y_hi = 0.0;
    for (y, v) in ys.iter().zip(&vals) {
        if *y > y_hi_cap {
            break;
        }
        if v.abs() > 10.0 * noise {
            y_hi = *y;
        }
    }
    let window = (y_hi / 10.0, y_hi);
    let y_exp = fit_power_tail(&ys, &vals, window)
        .ok_or_else(|| Error::UnderResolved("too few samples in the tail window".into()))?;

    let kernel = kernel.expect("at least one level");
    let x_exp = x_tail(&kernel);
    let report = LpKernelReport {
        alpha,
        n,
        l1_norms: norms,
        l1_drift: drift,
        converged: drift < 0.02,
        y_tail_exponent: y_exp,
        y_fit_window: window,
        x_tail_exponent: x_exp,
    };
    Ok((kernel, report))
}

/// Tail exponent along `y = 0` from the 2D samples, over the last decade above
/// the noise floor.
fn x_tail(k: &Field2D) -> f64 {
    let g = k.grid();
    let j0 = g.ny() / 2;
    let i0 = g.nx() / 2;
    let xs: Vec<f64> = (i0..g.nx()).map(|i| g.x(i)).collect();
    let vals: Vec<f64> = (i0..g.nx()).map(|i| k.at(i, j0).re).collect();
    let peak = vals.iter().fold(0f64, |m, v| m.max(v.abs()));
    let x_hi = xs
        .iter()
        .zip(&vals)
        .filter(|(x, v)| **x <= g.lx() / 2.0 && v.abs() > 1e-12 * peak)
        .map(|(x, _)| *x)
        .fold(0.0, f64::max);
    fit_power_tail(&xs, &vals, (x_hi / 10.0, x_hi)).unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BesselKernelReport {
    pub alpha: f64,
    pub s: f64,
    pub min_value: f64,
    pub max_value: f64,
    pub l1_norm: f64,
    /// Fraction of the kernel's mass in the outer eighth of the box.
    pub boundary_mass: f64,
    pub resolved: bool,
}

/// Samples `G_s = F^{-1}[(1 + xi^2 + |eta|^alpha)^(-s/2)]`.
///
/// The symbol is damped by a Gaussian that reaches `1e-16` at the Nyquist
/// frequencies, so the sample is `G_s` convolved with a positive mollifier.
pub fn bessel_kernel_positivity(
    alpha: f64,
    s: f64,
    grid: &Grid2D,
) -> Result<(Field2D, BesselKernelReport)> {
    if !(s > 0.0) {
        return Err(Error::InvalidInput(format!(
            "Bessel order s = {s} must be positive"
        )));
    }
    let damp = 16.0 * 10f64.ln();
    let ex = damp / grid.nyquist_x().powi(2);
    let ey = damp / grid.nyquist_y().powi(2);
    let k = sample_kernel(grid, |xi, eta| {
        potential_symbol(xi, eta, alpha, -s, false) * (-ex * xi * xi - ey * eta * eta).exp()
    });
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for z in k.data() {
        lo = lo.min(z.re);
        hi = hi.max(z.re);
    }
    let l1n = l1(&k);
    let boundary = band_mass_fraction(&k);
    let report = BesselKernelReport {
        alpha,
        s,
        min_value: lo,
        max_value: hi,
        l1_norm: l1n,
        boundary_mass: boundary,
        resolved: boundary < 1e-2,
    };
    Ok((k, report))
}

/// Share of `sum |f|` lying in the outer eighth of the box on either axis.
pub fn band_mass_fraction(f: &Field2D) -> f64 {
    let g = f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let (mut band, mut total) = (0.0, 0.0);
    for i in 0..nx {
        let edge_i = i < nx / 8 || i >= nx - nx / 8;
        for j in 0..ny {
            let v = f.data()[i * ny + j].norm();
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
