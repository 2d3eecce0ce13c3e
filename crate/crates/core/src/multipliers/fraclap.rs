use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quad::{integrate_panels, QuadOptions};
use num_complex::Complex64;

/// Normalising constant `c_{1,a}` of the singular-integral fractional Laplacian.
pub fn frac_laplacian_constant(alpha: f64) -> f64 {
    4f64.powf(alpha / 2.0) * gamma((1.0 + alpha) / 2.0)
        / (std::f64::consts::PI.sqrt() * gamma(-alpha / 2.0).abs())
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Outer radius `H` of the numerically integrated region.
    pub cutoff: f64,
    /// Largest accepted contribution of the shell `[H, 2H]`.
    pub tail_tol: f64,
    pub quad: QuadOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            cutoff: 2000.0,
            tail_tol: 1e-5,
            quad: QuadOptions {
                abs_tol: 1e-11,
                rel_tol: 1e-11,
                max_intervals: 50_000,
            },
        }
    }
}

/// `(-d^2/dx^2)^(a/2) g` at the points `xs` from the principal-value integral
/// `c_{1,a} int (g(x) - g(y)) / |x - y|^(1+a) dy`.
///
/// The symmetric integrand is integrated on `[h0, H]`, a Taylor term covers
/// `[0, h0]`, and the constant part beyond `H` is added in closed form. The
/// remaining tail is estimated from the shell `[H, 2H]`; inputs for which it
/// exceeds `tail_tol` are rejected as non-decaying.
pub fn frac_laplacian_1d_oracle(
    g: &dyn Fn(f64) -> f64,
    alpha: f64,
    xs: &[f64],
    opts: OracleOptions,
) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidInput(format!(
            "oracle needs 0 < alpha < 2, got {alpha}"
        )));
    }
    let c = frac_laplacian_constant(alpha);
    let h0 = 1e-3;
    let big_h = opts.cutoff;
    let mut breaks = vec![h0];
    let mut b = 1e-2;
    while b < big_h {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(big_h);
    xs.iter()
        .map(|&x| {
            let gx = g(x);
            let mut sym = |h: f64| {
                Complex64::new((2.0 * gx - g(x + h) - g(x - h)) / h.powf(1.0 + alpha), 0.0)
            };
            let body = integrate_panels(&mut sym, &breaks, opts.quad)?.value.re;
            let d = 1e-3;
            let g2 = (g(x + d) - 2.0 * gx + g(x - d)) / (d * d);
            let near = -g2 * h0.powf(2.0 - alpha) / (2.0 - alpha);
            let far = 2.0 * gx * big_h.powf(-alpha) / alpha;
            let mut shell_f =
                |h: f64| Complex64::new(-(g(x + h) + g(x - h)) / h.powf(1.0 + alpha), 0.0);
            let shell = integrate_panels(&mut shell_f, &[big_h, 2.0 * big_h], opts.quad)?
                .value
                .re;
            if (c * shell).abs() > opts.tail_tol {
                return Err(Error::InvalidInput(format!(
                    "input does not decay: tail contribution {:.3e} at x = {x}",
                    c * shell
                )));
            }
            Ok(c * (body + near + far + shell))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Field2D, Grid2D};
    use crate::multipliers::{frac_deriv, Axis};

    #[test]
    fn constant_matches_known_values() {
        // c_{1,1} = 1/pi
        assert!((frac_laplacian_constant(1.0) - 1.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn cosine_eigenfunction() {
        for &(k, alpha) in &[(1.0, 0.5), (2.0, 1.5), (1.5, 0.8)] {
            let g = move |x: f64| (k * x).cos();
            let xs = [0.0, 0.3, 1.1];
            let out = frac_laplacian_1d_oracle(&g, alpha, &xs, OracleOptions::default()).unwrap();
            for (x, v) in xs.iter().zip(out) {
                let want = k.powf(alpha) * (k * x).cos();
                assert!(
                    (v - want).abs() < 1e-4,
                    "k {k} alpha {alpha} x {x}: {v} vs {want}"
                );
            }
        }
    }

    #[test]
    fn zero_input() {
        let out =
            frac_laplacian_1d_oracle(&|_| 0.0, 0.7, &[0.0, 2.0], OracleOptions::default()).unwrap();
        assert!(out.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_non_decaying_input() {
        assert!(frac_laplacian_1d_oracle(&|_| 1.0, 0.5, &[0.0], OracleOptions::default()).is_err());
        assert!(
            frac_laplacian_1d_oracle(&|x| x * x, 0.5, &[0.0], OracleOptions::default()).is_err()
        );
    }

    #[test]
    fn agrees_with_spectral_multiplier() {
        // the periodic box adds images of the |y|^(-1-a) tail; a wide box keeps them below 1e-4
        let alpha = 0.5;
        let grid = Grid2D::new(8, 32768, 1.0, 2048.0).unwrap();
        let f = Field2D::from_fn(&grid, |_, y| {
            num_complex::Complex64::new((-y * y).exp(), 0.0)
        });
        let d = frac_deriv(&f, Axis::Y, alpha);
        let cols: Vec<usize> = (16384 - 32..=16384 + 32).step_by(4).collect();
        let ys: Vec<f64> = cols.iter().map(|&j| grid.y(j)).collect();
        let g = |y: f64| (-y * y).exp();
        let oracle = frac_laplacian_1d_oracle(&g, alpha, &ys, OracleOptions::default()).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for (k, &j) in cols.iter().enumerate() {
            let s = d.at(3, j).re;
            num += (s - oracle[k]).powi(2);
            den += s * s;
        }
        assert!(
            (num / den).sqrt() < 1e-4,
            "relative L2 mismatch {}",
            (num / den).sqrt()
        );
        let centre = cols.iter().position(|&j| j == 16384).unwrap();
        assert!((d.at(0, 16384).re - oracle[centre]).abs() < 1e-4);
    }
}
