//! Seeded random fields and deterministic data.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D, Space};

/// Gaussian decay of the random spectral coefficients, and an optional
/// physical-space Gaussian window given as a fraction of the half box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub sigma_xi: f64,
    pub sigma_eta: f64,
    pub window: Option<f64>,
}

impl Default for Envelope {
    fn default() -> Self {
        Self {
            sigma_xi: 1.0,
            sigma_eta: 1.0,
            window: Some(0.3),
        }
    }
}

fn normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Places coefficients `c(k, l)` of `sum c e^{i(xi x + eta y)}` on the lattice.
fn from_modes(grid: &Grid2D, modes: impl Iterator<Item = (i64, i64, Complex64)>) -> Field2D {
    let (nx, ny) = (grid.nx() as i64, grid.ny() as i64);
    let root = (grid.len() as f64).sqrt();
    let mut data = vec![Complex64::default(); grid.len()];
    for (k, l, c) in modes {
        let sign = if (k + l).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let idx = (k.rem_euclid(nx) * ny + l.rem_euclid(ny)) as usize;
        data[idx] += c * (root * sign);
    }
    Field2D::from_data(grid, data, Space::Spectral)
        .expect("sized from grid")
        .into_space(Space::Physical)
}

fn apply_window(f: &mut Field2D, window: Option<f64>) {
    let Some(w) = window else { return };
    let g = f.grid().clone();
    let (wx, wy) = (w * g.lx(), w * g.ly());
    let ny = g.ny();
    for (i, row) in f.data_mut().chunks_mut(ny).enumerate() {
        let ex = (g.x(i) / wx).powi(2);
        for (j, z) in row.iter_mut().enumerate() {
            *z *= (-ex - (g.y(j) / wy).powi(2)).exp();
        }
    }
}

fn normalise(mut f: Field2D) -> Field2D {
    let n = f.spectral_l2();
    if n > 0.0 {
        f.data_mut().iter_mut().for_each(|z| *z /= n);
    }
    f
}

/// Unit-`L^2` random field with coefficients drawn mode by mode in a fixed
/// order, so the same seed gives the same function on any grid over the same
/// box that resolves the envelope.
pub fn random_field(grid: &Grid2D, seed: u64, env: &Envelope) -> Result<Field2D> {
    let kmax = (6.0 * env.sigma_xi * grid.lx() / std::f64::consts::PI).ceil() as i64;
    let lmax = (6.0 * env.sigma_eta * grid.ly() / std::f64::consts::PI).ceil() as i64;
    if 2 * kmax >= grid.nx() as i64 || 2 * lmax >= grid.ny() as i64 {
        return Err(Error::UnderResolved(format!(
            "envelope ({}, {}) needs more than {} x {} modes",
            env.sigma_xi,
            env.sigma_eta,
            grid.nx(),
            grid.ny()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lx, ly) = (grid.lx(), grid.ly());
    let mut modes = Vec::with_capacity(((2 * kmax + 1) * (2 * lmax + 1)) as usize);
    for k in -kmax..=kmax {
        let xi = std::f64::consts::PI * k as f64 / lx;
        for l in -lmax..=lmax {
            let eta = std::f64::consts::PI * l as f64 / ly;
            let env_v =
                (-0.5 * ((xi / env.sigma_xi).powi(2) + (eta / env.sigma_eta).powi(2))).exp();
            modes.push((k, l, normal(&mut rng) * env_v));
        }
    }
    let mut f = from_modes(grid, modes.into_iter());
    apply_window(&mut f, env.window);
    Ok(normalise(f))
}

/// Unit-`L^2` field with independent standard normal coefficients on every
/// mode below `frac` of the Nyquist frequencies.
pub fn white_field(grid: &Grid2D, seed: u64, frac: f64, window: Option<f64>) -> Field2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (frac * grid.nyquist_x(), frac * grid.nyquist_y());
    let mut f = Field2D::from_spectrum(grid, |xi, eta| {
        let z = normal(&mut rng);
        if xi.abs() <= cx && eta.abs() <= cy {
            z
        } else {
            Complex64::default()
        }
    })
    .into_space(Space::Physical);
    apply_window(&mut f, window);
    normalise(f)
}

/// `amp * exp(-(x/wx)^2 - (y/wy)^2)`.
pub fn gaussian(grid: &Grid2D, amp: f64, wx: f64, wy: f64) -> Field2D {
    Field2D::from_fn(grid, |x, y| {
        Complex64::new(amp * (-(x / wx).powi(2) - (y / wy).powi(2)).exp(), 0.0)
    })
}

/// Field with spectrum `symbol`, centred in the box rather than at the corner.
pub fn centred_from_spectrum(grid: &Grid2D, symbol: impl FnMut(f64, f64) -> Complex64) -> Field2D {
    let mut f = Field2D::from_spectrum(grid, symbol);
    let ny = grid.ny();
    for (i, row) in f.data_mut().chunks_mut(ny).enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            if (i + j) % 2 == 1 {
                *z = -*z;
            }
        }
    }
    f.into_space(Space::Physical)
}

/// Real packet whose `|spectrum|^2` is concentrated near `eta = +-eta0`:
/// `exp(-xi^2 / (2 sx^2)) exp(-(|eta| - eta0)^2 / (2 sy^2))`, scaled to
/// peak physical amplitude `amp` and centred at the origin.
pub fn eta_packet(grid: &Grid2D, amp: f64, sigma_xi: f64, eta0: f64, sigma_eta: f64) -> Field2D {
    let f = centred_from_spectrum(grid, |xi, eta| {
        let e = (-(xi * xi) / (2.0 * sigma_xi * sigma_xi)
            - (eta.abs() - eta0).powi(2) / (2.0 * sigma_eta * sigma_eta))
            .exp();
        Complex64::new(e, 0.0)
    });
    let peak = f.sup_norm();
    f.scale(Complex64::new(amp / peak, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_fields_are_reproducible_and_grid_independent() {
        let env = Envelope {
            sigma_xi: 1.0,
            sigma_eta: 1.5,
            window: Some(0.3),
        };
        let g1 = Grid2D::new(64, 64, 8.0, 8.0).unwrap();
        let g2 = Grid2D::new(128, 128, 8.0, 8.0).unwrap();
        let a = random_field(&g1, 11, &env).unwrap();
        let b = random_field(&g1, 11, &env).unwrap();
        assert_eq!(a.data(), b.data());
        let c = random_field(&g2, 11, &env).unwrap();
        // same function sampled at the shared points
        for &(i, j) in &[(32, 32), (10, 50), (40, 20)] {
            assert!((a.at(i, j) - c.at(2 * i, 2 * j)).norm() < 1e-8);
        }
        assert!((a.spectral_l2() - 1.0).abs() < 1e-12);
        assert!(random_field(&Grid2D::new(16, 16, 8.0, 8.0).unwrap(), 1, &env).is_err());
    }

    #[test]
    fn packet_is_centred_and_real() {
        let g = Grid2D::new(32, 256, 40.0, 100.0).unwrap();
        let f = eta_packet(&g, 0.1, 0.2, 0.6, 0.3);
        assert!((f.at(16, 128).norm() - 0.1).abs() < 1e-12);
        assert!(f.data().iter().all(|z| z.im.abs() < 1e-12));
    }
}
