//! Fourier-multiplier calculus: directional fractional derivatives,
//! anisotropic Bessel/Riesz potentials and Sobolev norms, and the
//! Littlewood-Paley projections built on the joint radius
//! `sqrt(xi^2 + |eta|^alpha)`.
//!
//! Negative powers are singular at the zero frequency; there the multiplier
//! is set to zero, so they are only meaningful on inputs that vanish near the
//! singular set.

mod bump;
mod fraclap;
mod kernel;
mod params;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D};

pub use bump::{phi, psi, LPBump};
pub use fraclap::{frac_laplacian_1d_oracle, frac_laplacian_constant, OracleOptions};
pub use kernel::{
    band_mass_fraction, bessel_kernel_positivity, fit_power_tail, kernel_y_line, lp_kernel,
    sample_kernel, BesselKernelReport, KernelGrid, LpKernelReport,
};
pub use params::{check_order, joint_radius, DispersionParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    /// `phi(sqrt(xi^2 + |eta|^alpha) / N)`.
    Joint,
    /// `phi(|xi| / N)`.
    Axis1,
    /// `phi(|eta| / N)`.
    Axis2,
}

/// `|t|^s`, with zero at `t = 0` for negative `s`.
fn reg_pow(t: f64, s: f64) -> f64 {
    if s < 0.0 && t == 0.0 {
        0.0
    } else {
        t.abs().powf(s)
    }
}

/// `D^s` along one axis: the multiplier `|xi|^s` or `|eta|^s`.
pub fn frac_deriv(f: &Field2D, axis: Axis, s: f64) -> Field2D {
    if s == 0.0 {
        return f.clone();
    }
    match axis {
        Axis::X => f.apply_real_symbol(|xi, _| reg_pow(xi, s)),
        Axis::Y => f.apply_real_symbol(|_, eta| reg_pow(eta, s)),
    }
}

/// Symbol of `<grad_alpha>^s` (inhomogeneous) or `|grad_alpha|^s`.
pub fn potential_symbol(xi: f64, eta: f64, alpha: f64, s: f64, homogeneous: bool) -> f64 {
    let r2 = xi * xi + eta.abs().powf(alpha);
    if homogeneous {
        if r2 == 0.0 {
            return if s == 0.0 { 1.0 } else { 0.0 };
        }
        r2.powf(s / 2.0)
    } else {
        (1.0 + r2).powf(s / 2.0)
    }
}

pub fn aniso_potential(
    f: &Field2D,
    params: &DispersionParams,
    s: f64,
    homogeneous: bool,
) -> Field2D {
    aniso_potential_alpha(f, params.alpha(), s, homogeneous)
}

/// [`aniso_potential`] for a bare anisotropy index `alpha`.
pub fn aniso_potential_alpha(f: &Field2D, alpha: f64, s: f64, homogeneous: bool) -> Field2D {
    if s == 0.0 {
        return f.clone();
    }
    f.apply_real_symbol(|xi, eta| potential_symbol(xi, eta, alpha, s, homogeneous))
}

/// Discrete `H^s_alpha` (or homogeneous) norm, evaluated spectrally.
pub fn sobolev_norm(f: &Field2D, params: &DispersionParams, s: f64, homogeneous: bool) -> f64 {
    sobolev_norm_alpha(f, params.alpha(), s, homogeneous)
}

pub fn sobolev_norm_alpha(f: &Field2D, alpha: f64, s: f64, homogeneous: bool) -> f64 {
    let spec = f.spectral();
    let grid = spec.grid();
    let ny = grid.ny();
    let mut acc = 0.0;
    for (i, &xi) in grid.xi().iter().enumerate() {
        for (j, &eta) in grid.eta().iter().enumerate() {
            let w = potential_symbol(xi, eta, alpha, s, homogeneous);
            acc += w * w * spec.data()[i * ny + j].norm_sqr();
        }
    }
    (acc * grid.cell_area()).sqrt()
}

/// Interpolation exponent `theta` with `s theta = (1 + 2/alpha)(1/2 - 1/q)`.
pub fn gn_theta(alpha: f64, s: f64, q: f64) -> f64 {
    (1.0 + 2.0 / alpha) * (0.5 - 1.0 / q) / s
}

/// Gagliardo-Nirenberg quotient `||u||_q / (||u||_{Hdot^s}^theta ||u||_2^(1 - theta))`.
///
/// Zero for the zero field.
pub fn gn_quotient(u: &Field2D, alpha: f64, s: f64, q: f64) -> Result<f64> {
    let theta = gn_theta(alpha, s, q);
    let num = u.lp_norm(q)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    let hs = sobolev_norm_alpha(u, alpha, s, true);
    let l2 = u.spectral_l2();
    Ok(num / (hs.powf(theta) * l2.powf(1.0 - theta)))
}

/// Dyadic scales whose annulus `[N/2, 2N]` is comfortably representable:
/// `[4 * lattice spacing, Nyquist / 4]` measured in the projection's radius.
pub fn resolvable_range(grid: &Grid2D, alpha: f64, kind: ProjectionKind) -> (f64, f64) {
    let (sx, sy) = (PI / grid.lx(), PI / grid.ly());
    let (qx, qy) = (grid.nyquist_x(), grid.nyquist_y());
    match kind {
        ProjectionKind::Joint => (
            4.0 * sx.max(sy.powf(alpha / 2.0)),
            qx.min(qy.powf(alpha / 2.0)) / 4.0,
        ),
        ProjectionKind::Axis1 => (4.0 * sx, qx / 4.0),
        ProjectionKind::Axis2 => (4.0 * sy, qy / 4.0),
    }
}

/// Dyadic scales `2^k` inside the resolvable range.
pub fn dyadic_scales(grid: &Grid2D, alpha: f64, kind: ProjectionKind) -> Vec<f64> {
    let (lo, hi) = resolvable_range(grid, alpha, kind);
    let k0 = lo.log2().ceil() as i32;
    let k1 = hi.log2().floor() as i32;
    (k0..=k1).map(|k| 2f64.powi(k)).collect()
}

fn is_dyadic(n: f64) -> bool {
    n > 0.0 && n.is_finite() && n.log2().fract() == 0.0
}

pub fn lp_project(
    f: &Field2D,
    params: &DispersionParams,
    n: f64,
    kind: ProjectionKind,
) -> Result<Field2D> {
    lp_project_alpha(f, params.alpha(), n, kind)
}

/// Littlewood-Paley projection `P_N` for a bare anisotropy index.
pub fn lp_project_alpha(f: &Field2D, alpha: f64, n: f64, kind: ProjectionKind) -> Result<Field2D> {
    let (lo, hi) = resolvable_range(f.grid(), alpha, kind);
    if !is_dyadic(n) || n < lo || n > hi {
        return Err(Error::DyadicRange { n, lo, hi });
    }
    Ok(lp_project_unchecked(f, alpha, n, kind))
}

/// Applies the projection symbol without the resolvability check.
pub fn lp_project_unchecked(f: &Field2D, alpha: f64, n: f64, kind: ProjectionKind) -> Field2D {
    match kind {
        ProjectionKind::Joint => {
            f.apply_real_symbol(|xi, eta| phi(joint_radius(xi, eta, alpha) / n))
        }
        ProjectionKind::Axis1 => f.apply_real_symbol(|xi, _| phi(xi.abs() / n)),
        ProjectionKind::Axis2 => f.apply_real_symbol(|_, eta| phi(eta.abs() / n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Space;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn mode(grid: &Grid2D, kx: f64, ky: f64) -> Field2D {
        Field2D::from_fn(grid, |x, y| Complex64::new(0.0, kx * x + ky * y).exp())
    }

    fn rel_err(a: &Field2D, b: &Field2D) -> f64 {
        a.sub(b).spectral_l2() / b.spectral_l2()
    }

    /// Random spectrum confined to `|xi|, |eta| <= cut`.
    fn band_limited(grid: &Grid2D, cut: f64, seed: u64) -> Field2D {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Field2D::from_spectrum(grid, |xi, eta| {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if xi.abs() <= cut && eta.abs() <= cut {
                z
            } else {
                Complex64::default()
            }
        })
        .physical()
    }

    #[test]
    fn directional_derivative_of_a_mode() {
        let g = Grid2D::new(32, 16, PI, PI).unwrap();
        let f = mode(&g, 3.0, 0.0);
        for a in [0.5, 1.5, 2.0] {
            let d = frac_deriv(&f, Axis::X, a);
            assert!(rel_err(&d, &f.scale(Complex64::new(3f64.powf(a), 0.0))) < 1e-12);
        }
        assert!(rel_err(&frac_deriv(&f, Axis::Y, 0.0), &f) < 1e-15);
        let h = frac_deriv(&f, Axis::Y, -0.5);
        assert!(h.spectral_l2() < 1e-12);
    }

    #[test]
    fn potential_examples() {
        let g = Grid2D::new(16, 16, PI, PI).unwrap();
        let d = DispersionParams::new(2.0, 2.0, 3.0, 1.0).unwrap();
        let f = mode(&g, 1.0, 1.0);
        let out = aniso_potential(&f, &d, 2.0, false);
        assert!(rel_err(&out, &f.scale(Complex64::new(3.0, 0.0))) < 1e-12);
        assert!(rel_err(&aniso_potential(&f, &d, 0.0, true), &f) < 1e-15);
        let r = band_limited(&g, 5.0, 3);
        let d = DispersionParams::new(2.0, 0.5, 3.0, 1.0).unwrap();
        let back = aniso_potential(&aniso_potential(&r, &d, -1.7, false), &d, 1.7, false);
        assert!(rel_err(&back, &r) < 1e-10);
    }

    #[test]
    fn sobolev_norm_reductions() {
        let g = Grid2D::new(32, 32, 8.0, 8.0).unwrap();
        let d = DispersionParams::new(2.0, 2.0, 3.0, 1.0).unwrap();
        let f = band_limited(&g, 3.0, 9);
        let l2 = f.lp_norm(2.0).unwrap();
        assert!((sobolev_norm(&f, &d, 0.0, false) - l2).abs() <= 1e-12 * l2);
        // alpha = 2 is the classical H^s weight (1 + |k|^2)^(s/2)
        let s = 1.3;
        let classical = f.apply_real_symbol(|a, b| (1.0 + a * a + b * b).powf(s / 2.0));
        let n = sobolev_norm(&f, &d, s, false);
        assert!((n - classical.spectral_l2()).abs() < 1e-12 * n);
    }

    #[test]
    fn projection_of_unit_radius_mode() {
        let g = Grid2D::new(128, 256, 16.0 * PI, 16.0 * PI).unwrap();
        let d = DispersionParams::new(2.0, 1.5, 3.0, 1.0).unwrap();
        let f = mode(&g, 1.0, 0.0);
        let p = lp_project(&f, &d, 1.0, ProjectionKind::Joint).unwrap();
        assert!(rel_err(&p, &f) < 1e-14);
        assert!(lp_project(&f, &d, 64.0, ProjectionKind::Joint).is_err());
        assert!(lp_project(&f, &d, 0.75, ProjectionKind::Joint).is_err());
    }

    #[test]
    fn resolution_of_identity() {
        let g = Grid2D::new(256, 1024, 64.0, 64.0).unwrap();
        for alpha in [2.0, 1.5] {
            let scales = dyadic_scales(&g, alpha, ProjectionKind::Joint);
            assert!(scales.len() >= 2, "alpha {alpha}: {scales:?}");
            let (lo, hi) = (scales[0], *scales.last().unwrap());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            let f = Field2D::from_spectrum(&g, |xi, eta| {
                let r = joint_radius(xi, eta, alpha);
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if r >= lo && r <= hi {
                    z
                } else {
                    Complex64::default()
                }
            });
            let mut sum = Field2D::zeros(&g, Space::Spectral);
            for &n in &scales {
                sum = sum.add(&lp_project_alpha(&f, alpha, n, ProjectionKind::Joint).unwrap());
            }
            assert!(rel_err(&sum, &f) < 1e-10, "alpha {alpha}");
        }
    }

    #[test]
    fn axis_projections_select_bands() {
        let g = Grid2D::new(128, 256, 16.0 * PI, 16.0 * PI).unwrap();
        let d = DispersionParams::new(2.0, 1.5, 3.0, 1.0).unwrap();
        let f = mode(&g, 1.0, 0.25);
        let p1 = lp_project(&f, &d, 1.0, ProjectionKind::Axis1).unwrap();
        assert!(rel_err(&p1, &f) < 1e-14);
        let p2 = lp_project(&f, &d, 1.0, ProjectionKind::Axis2).unwrap();
        assert!(p2.spectral_l2() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn multiplier_equivalence(seed in any::<u64>(), si in 0usize..4, alpha_i in 0usize..3) {
            let s = [-1.0, 0.5, 1.0, 2.0][si];
            let alpha = [2.0, 1.5, 0.5][alpha_i];
            let g = Grid2D::new(64, 64, 32.0, 32.0).unwrap();
            let f = band_limited(&g, 6.0, seed);
            for n in [0.5, 1.0, 2.0] {
                let p = lp_project_unchecked(&f, alpha, n, ProjectionKind::Joint);
                let lhs = aniso_potential_alpha(&p, alpha, s, true).spectral_l2();
                let q = lhs / (n.powf(s) * p.spectral_l2());
                let b = 2f64.powf(s.abs());
                prop_assert!(q >= 1.0 / b - 1e-12 && q <= b + 1e-12, "N {} ratio {}", n, q);
            }
        }
    }
}
