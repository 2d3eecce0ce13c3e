//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// One 15-point Kronrod panel: (estimate, error), with the error scaled as in
/// QUADPACK's `qk15` so well-resolved panels report realistic errors.
pub fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [Complex64::default(); 15];
    fv[7] = f(c);
    for k in 0..7 {
        let dx = h * XGK[k];
        fv[k] = f(c - dx);
        fv[14 - k] = f(c + dx);
    }
    let mut kron = fv[7] * WGK[7];
    let mut gauss = fv[7] * WG[3];
    for k in 0..7 {
        let s = fv[k] + fv[14 - k];
        kron += s * WGK[k];
        if k % 2 == 1 {
            gauss += s * WG[k / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = (fv[7] - mean).norm() * WGK[7];
    for k in 0..7 {
        asc += ((fv[k] - mean).norm() + (fv[14 - k] - mean).norm()) * WGK[k];
    }
    let kron = kron * h;
    let resasc = asc * h.abs();
    let mut err = (kron - gauss * h).norm();
    if resasc > 0.0 && err > 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    (kron, err)
}

/// Adaptive integral of `f` over `[a, b]`, bisecting the worst panel until
/// the summed error estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    integrate_panels(&mut f, &[a, b], opts)
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Like [`integrate`], starting from the panel boundaries in `breaks`.
pub fn integrate_panels<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::default();
    let mut err = 0.0;
    for w in breaks.windows(2).filter(|w| w[1] > w[0]) {
        let (value, error) = gk15(f, w[0], w[1]);
        total += value;
        err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let mut evals = 15 * heap.len();
    let mut since_resum = 0;
    loop {
        if since_resum > 1000 {
            // refresh the running sums against accumulated rounding
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
            since_resum = 0;
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations: evals,
            });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {err:.3e} after {} panels (value {total:.6e})",
                heap.len()
            )));
        }
        let Panel { a, b, value, error } = heap.pop().expect("non-empty");
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            return Err(Error::Quadrature(format!(
                "panel [{a}, {b}] cannot be bisected further"
            )));
        }
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        evals += 30;
        since_resum += 1;
        total += v1 + v2 - value;
        err += e1 + e2 - error;
        heap.push(Panel {
            a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b,
            value: v2,
            error: e2,
        });
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, opts).map(|r| r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        let mut f = |x: f64| Complex64::new(x.powi(20), 0.0);
        let (v, _) = gk15(&mut f, -1.0, 1.0);
        assert!((v.re - 2.0 / 21.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        let r = integrate(
            |x| Complex64::new(0.0, 50.0 * x).exp(),
            0.0,
            3.0,
            QuadOptions::default(),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 150.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((r.value - exact).norm() < 1e-11);
    }

    #[test]
    fn endpoint_singularity() {
        let v = integrate_real(|x| x.powf(-0.5), 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reports_failure() {
        let opts = QuadOptions {
            max_intervals: 4,
            ..Default::default()
        };
        assert!(integrate(|x| Complex64::new((1.0 / x).sin(), 0.0), 1e-6, 1.0, opts).is_err());
    }
}
