use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dispersion orders, nonlinearity power and sign of the model.
///
/// Only `(alpha1, alpha2, p, mu)` are stored; every derived quantity is
/// recomputed on access.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct DispersionParams {
    alpha1: f64,
    alpha2: f64,
    p: f64,
    mu: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha1: f64,
    alpha2: f64,
    p: f64,
    mu: f64,
}

impl TryFrom<RawParams> for DispersionParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        Self::new(r.alpha1, r.alpha2, r.p, r.mu)
    }
}

impl From<DispersionParams> for RawParams {
    fn from(d: DispersionParams) -> Self {
        RawParams {
            alpha1: d.alpha1,
            alpha2: d.alpha2,
            p: d.p,
            mu: d.mu,
        }
    }
}

/// Checks membership of a dispersion order in `(0,2]\{1}`.
pub fn check_order(name: &str, a: f64) -> Result<()> {
    if !(a > 0.0 && a <= 2.0) || a == 1.0 {
        return Err(Error::InvalidParams(format!(
            "{name} = {a} violates {name} in (0,2]\\{{1}}"
        )));
    }
    Ok(())
}

impl DispersionParams {
    pub fn new(alpha1: f64, alpha2: f64, p: f64, mu: f64) -> Result<Self> {
        check_order("alpha1", alpha1)?;
        check_order("alpha2", alpha2)?;
        if alpha1 < alpha2 {
            return Err(Error::InvalidParams(format!(
                "alpha1 = {alpha1} < alpha2 = {alpha2} violates alpha1 >= alpha2"
            )));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidParams(format!("p = {p} violates p > 1")));
        }
        if mu != 1.0 && mu != -1.0 {
            return Err(Error::InvalidParams(format!(
                "mu = {mu} violates mu in {{-1, +1}}"
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            p,
            mu,
        })
    }

    /// Defocusing (`mu = +1`) cubic Schrödinger in both directions.
    pub fn cubic_defocusing() -> Self {
        Self::new(2.0, 2.0, 3.0, 1.0).expect("valid")
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Anisotropy index `2 alpha2 / alpha1`.
    pub fn alpha(&self) -> f64 {
        2.0 * self.alpha2 / self.alpha1
    }
    pub fn beta1(&self) -> f64 {
        1.0 - self.alpha1 / 2.0
    }
    pub fn beta2(&self) -> f64 {
        1.0 - self.alpha2 / 2.0
    }
    /// Scaling-critical regularity.
    pub fn s_c(&self) -> f64 {
        0.5 + self.alpha1 / (2.0 * self.alpha2) - self.alpha1 / (self.p - 1.0)
    }

    pub fn with_alphas(&self, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(alpha1, alpha2, self.p, self.mu)
    }
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.alpha1, self.alpha2, p, self.mu)
    }
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.alpha1, self.alpha2, self.p, mu)
    }

    /// Linear dispersion relation `|xi|^a1 + |eta|^a2`.
    pub fn omega(&self, xi: f64, eta: f64) -> f64 {
        xi.abs().powf(self.alpha1) + eta.abs().powf(self.alpha2)
    }

    /// Joint frequency radius `sqrt(xi^2 + |eta|^alpha)`.
    pub fn radius(&self, xi: f64, eta: f64) -> f64 {
        joint_radius(xi, eta, self.alpha())
    }
}

pub fn joint_radius(xi: f64, eta: f64, alpha: f64) -> f64 {
    (xi * xi + eta.abs().powf(alpha)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let d = DispersionParams::new(2.0, 1.5, 3.0, 1.0).unwrap();
        assert_eq!(d.alpha(), 1.5);
        assert_eq!(d.beta1(), 0.0);
        assert_eq!(d.beta2(), 0.25);
        assert!((d.s_c() - (0.5 + 2.0 / 3.0 - 1.0)).abs() < 1e-15);
        let d = DispersionParams::new(2.0, 2.0, 3.0, -1.0).unwrap();
        assert_eq!(d.s_c(), 0.0);
    }

    #[test]
    fn rule_violations_are_named() {
        let e = DispersionParams::new(1.0, 0.5, 3.0, 1.0)
            .unwrap_err()
            .to_string();
        assert!(e.contains("(0,2]\\{1}"), "{e}");
        let e = DispersionParams::new(1.5, 1.8, 3.0, 1.0)
            .unwrap_err()
            .to_string();
        assert!(e.contains("alpha1 >= alpha2"), "{e}");
        assert!(DispersionParams::new(2.0, 2.0, 1.0, 1.0).is_err());
        assert!(DispersionParams::new(2.0, 2.0, 3.0, 0.5).is_err());
        assert!(DispersionParams::new(2.5, 2.0, 3.0, 1.0).is_err());
        assert!(DispersionParams::new(2.0, 0.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: DispersionParams =
            serde_json::from_str(r#"{"alpha1":2.0,"alpha2":1.5,"p":3.0,"mu":-1.0}"#).unwrap();
        assert_eq!(ok.alpha2(), 1.5);
        let bad = serde_json::from_str::<DispersionParams>(
            r#"{"alpha1":1.0,"alpha2":0.5,"p":3.0,"mu":-1.0}"#,
        );
        assert!(bad.is_err());
    }
}
