/// `e^{-1/t}` for `t > 0`, zero otherwise.
fn theta(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth even cutoff: 1 on `[-1, 1]`, 0 outside `(-2, 2)`.
pub fn psi(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let u = theta(2.0 - a);
    let v = theta(a - 1.0);
    u / (u + v)
}

/// Dyadic annulus bump `psi(x) - psi(2x)`, supported in `1/2 <= |x| <= 2`.
pub fn phi(x: f64) -> f64 {
    psi(x) - psi(2.0 * x)
}

/// Littlewood-Paley bump pair at dyadic scale `n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LPBump;

impl LPBump {
    pub fn psi(&self, x: f64) -> f64 {
        psi(x)
    }
    pub fn phi(&self, x: f64) -> f64 {
        phi(x)
    }
    /// `phi(r / n)`.
    pub fn phi_n(&self, r: f64, n: f64) -> f64 {
        phi(r / n)
    }
    /// Sum of `phi(r / 2^k)` over `k_lo..=k_hi`.
    pub fn partial_sum(&self, r: f64, k_lo: i32, k_hi: i32) -> f64 {
        (k_lo..=k_hi).map(|k| phi(r / 2f64.powi(k))).sum()
    }
}
