use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::DimensionlessParams;
use crate::quadrature::adaptive;

/// Physical transport coefficients and the reference equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub lambda: f64,
    pub mu: f64,
    pub kappa: f64,
    pub cv: f64,
    pub rho_bar: f64,
    #[serde(rename = "T_bar")]
    pub t_bar: f64,
}

impl PhysicalParams {
    /// `ν = λ + 2μ`.
    pub fn nu(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("kappa", self.kappa),
            ("cv", self.cv),
            ("rho_bar", self.rho_bar),
            ("T_bar", self.t_bar),
        ];
        for (name, v) in all {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if self.mu <= 0.0 {
            return Err(Error::param(
                "mu",
                format!("shear viscosity {} must be positive", self.mu),
            ));
        }
        if self.nu() <= 0.0 {
            return Err(Error::param(
                "lambda",
                format!("lambda + 2 mu = {} must be positive", self.nu()),
            ));
        }
        for (name, v) in [
            ("kappa", self.kappa),
            ("cv", self.cv),
            ("rho_bar", self.rho_bar),
            ("T_bar", self.t_bar),
        ] {
            if v <= 0.0 {
                return Err(Error::param(name, format!("{v} must be positive")));
            }
        }
        Ok(())
    }
}

/// `P(ρ, T) = π0(ρ) + T π1(ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum PressureLaw {
    /// `π0 = 0`, `π1 = Rρ`.
    #[serde(rename = "perfect")]
    Perfect {
        #[serde(rename = "R")]
        r: f64,
    },
    /// `π0 = −αρ²`, `π1 = βρ/(δ − ρ)`.
    #[serde(rename = "vdw")]
    VanDerWaals { alpha: f64, beta: f64, delta: f64 },
    /// Polynomials with ascending coefficients.
    #[serde(rename = "poly")]
    Polynomial { pi0: Vec<f64>, pi1: Vec<f64> },
}

/// `k`-th derivative of `Σ c_m x^m`.
fn poly_eval(c: &[f64], x: f64, deriv: usize) -> f64 {
    c.iter()
        .enumerate()
        .skip(deriv)
        .map(|(m, &cm)| {
            let falling: f64 = (0..deriv).map(|i| (m - i) as f64).product();
            cm * falling * x.powi((m - deriv) as i32)
        })
        .sum()
}

impl PressureLaw {
    /// Rejects densities where the law is not smooth.
    pub fn check_smooth(&self, rho: f64) -> Result<()> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::NonSmoothPressure {
                rho,
                reason: "density must be positive".into(),
            });
        }
        if let PressureLaw::VanDerWaals { delta, .. } = self {
            if rho >= *delta {
                return Err(Error::NonSmoothPressure {
                    rho,
                    reason: format!("van der Waals pole at delta = {delta}"),
                });
            }
        }
        Ok(())
    }

    /// `π0^{(k)}(ρ)` for `k ≤ 2`.
    pub fn pi0(&self, rho: f64, k: usize) -> f64 {
        match self {
            PressureLaw::Perfect { .. } => 0.0,
            PressureLaw::VanDerWaals { alpha, .. } => match k {
                0 => -alpha * rho * rho,
                1 => -2.0 * alpha * rho,
                _ => -2.0 * alpha,
            },
            PressureLaw::Polynomial { pi0, .. } => poly_eval(pi0, rho, k),
        }
    }

    /// `π1^{(k)}(ρ)` for `k ≤ 2`.
    pub fn pi1(&self, rho: f64, k: usize) -> f64 {
        match self {
            PressureLaw::Perfect { r } => match k {
                0 => r * rho,
                1 => *r,
                _ => 0.0,
            },
            PressureLaw::VanDerWaals { beta, delta, .. } => {
                let g = delta - rho;
                match k {
                    0 => beta * rho / g,
                    1 => beta * delta / (g * g),
                    _ => 2.0 * beta * delta / (g * g * g),
                }
            }
            PressureLaw::Polynomial { pi1, .. } => poly_eval(pi1, rho, k),
        }
    }

    /// `∂_ρ P(ρ, T)`.
    pub fn dp_drho(&self, rho: f64, t: f64) -> f64 {
        self.pi0(rho, 1) + t * self.pi1(rho, 1)
    }

    /// `∂_T P(ρ, T) = π1(ρ)`.
    pub fn dp_dt(&self, rho: f64) -> f64 {
        self.pi1(rho, 0)
    }
}

/// Outcome of the linear stability test at the reference state.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub dp_drho: f64,
    pub dp_dt: f64,
    pub nu: f64,
    pub pass: bool,
}

/// Evaluates `∂_ρP` and `∂_TP` at `(ρ̄, T̄)`; both must be positive.
pub fn check_stability(phys: &PhysicalParams, pl: &PressureLaw) -> Result<StabilityReport> {
    phys.validate()?;
    pl.check_smooth(phys.rho_bar)?;
    let dp_drho = pl.dp_drho(phys.rho_bar, phys.t_bar);
    let dp_dt = pl.dp_dt(phys.rho_bar);
    Ok(StabilityReport {
        dp_drho,
        dp_dt,
        nu: phys.nu(),
        pass: dp_drho > 0.0 && dp_dt > 0.0,
    })
}

/// Everything the nonlinear terms need besides the state.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTable {
    pub chi0: f64,
    pub gamma: f64,
    pub rho_bar: f64,
    pub t_bar: f64,
    pub cv: f64,
    pub dp_drho_bar: f64,
    pub pressure: PressureLaw,
    /// `2μ/(νχ0) (T̄C_v)^{-1/2}`.
    pub q_mu: f64,
    /// `λ/(νχ0) (T̄C_v)^{-1/2}`.
    pub q_lambda: f64,
}

/// Dimensionless groups and coefficient table for a stable reference state.
pub fn nondimensionalize(
    phys: &PhysicalParams,
    pl: &PressureLaw,
) -> Result<(DimensionlessParams, CoefficientTable)> {
    let rep = check_stability(phys, pl)?;
    if !rep.pass {
        return Err(Error::param(
            "pressure",
            format!(
                "linear stability fails at the reference state: dP/drho = {}, dP/dT = {}",
                rep.dp_drho, rep.dp_dt
            ),
        ));
    }
    let nu = phys.nu();
    let chi0 = rep.dp_drho.powf(-0.5);
    let root = (phys.t_bar / phys.cv).sqrt();
    let gamma = chi0 / phys.rho_bar * root * pl.pi1(phys.rho_bar, 0);
    let dp = DimensionlessParams::new(phys.kappa / (nu * phys.cv), gamma, phys.mu / nu)?;
    let qscale = 1.0 / (nu * chi0 * (phys.t_bar * phys.cv).sqrt());
    Ok((
        dp,
        CoefficientTable {
            chi0,
            gamma,
            rho_bar: phys.rho_bar,
            t_bar: phys.t_bar,
            cv: phys.cv,
            dp_drho_bar: rep.dp_drho,
            pressure: pl.clone(),
            q_mu: 2.0 * phys.mu * qscale,
            q_lambda: phys.lambda * qscale,
        },
    ))
}

impl CoefficientTable {
    fn root(&self) -> f64 {
        (self.t_bar / self.cv).sqrt()
    }

    /// `I(a) = a/(1+a)`.
    pub fn i(&self, a: f64) -> f64 {
        a / (1.0 + a)
    }

    pub fn k1(&self, a: f64) -> f64 {
        self.pressure.dp_drho(self.rho_bar * (1.0 + a), self.t_bar) / ((1.0 + a) * self.dp_drho_bar)
            - 1.0
    }

    pub fn k2(&self, a: f64) -> f64 {
        let rb = self.rho_bar;
        self.chi0 / rb
            * self.root()
            * (self.pressure.pi1(rb * (1.0 + a), 0) / (1.0 + a) - self.pressure.pi1(rb, 0))
    }

    /// Same defining formula as [`CoefficientTable::k2`], kept separate.
    pub fn kt1(&self, a: f64) -> f64 {
        let rb = self.rho_bar;
        self.chi0 / rb
            * self.root()
            * (self.pressure.pi1(rb * (1.0 + a), 0) / (1.0 + a) - self.pressure.pi1(rb, 0))
    }

    pub fn kt2(&self, a: f64) -> f64 {
        self.pressure.pi1(self.rho_bar * (1.0 + a), 0) / (self.cv * self.rho_bar * (1.0 + a))
    }

    /// `K3(a) = χ0 √(T̄/C_v) ∫_0^a π1'(ρ̄(1+z))/(1+z) dz`.
    pub fn k3(&self, a: f64) -> f64 {
        let pref = self.chi0 * self.root();
        match &self.pressure {
            PressureLaw::Perfect { r } => pref * r * a.ln_1p(),
            pl => {
                let rb = self.rho_bar;
                pref * adaptive(
                    &|z: f64| pl.pi1(rb * (1.0 + z), 1) / (1.0 + z),
                    0.0,
                    a,
                    1e-13,
                )
            }
        }
    }

    /// `K3'(a)`.
    pub fn k3_prime(&self, a: f64) -> f64 {
        self.chi0 * self.root() * self.pressure.pi1(self.rho_bar * (1.0 + a), 1) / (1.0 + a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_phys() -> PhysicalParams {
        PhysicalParams {
            lambda: 0.0,
            mu: 1.0,
            kappa: 2.0,
            cv: 1.0,
            rho_bar: 1.0,
            t_bar: 1.0,
        }
    }

    #[test]
    fn polynomial_derivatives() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let x = 0.7;
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x.powi(3);
        let dp = |x: f64| -2.0 + x + 9.0 * x * x;
        let ddp = |x: f64| 1.0 + 18.0 * x;
        assert!((poly_eval(&c, x, 0) - p(x)).abs() < 1e-14);
        assert!((poly_eval(&c, x, 1) - dp(x)).abs() < 1e-14);
        assert!((poly_eval(&c, x, 2) - ddp(x)).abs() < 1e-14);
    }

    #[test]
    fn perfect_gas_groups() {
        let pl = PressureLaw::Perfect { r: 1.0 };
        let rep = check_stability(&unit_phys(), &pl).unwrap();
        assert!(rep.pass && rep.dp_drho == 1.0 && rep.dp_dt == 1.0);
        let (dp, _) = nondimensionalize(&unit_phys(), &pl).unwrap();
        assert_eq!(dp.gamma, 1.0);
        assert_eq!(dp.beta, 1.0);
        assert_eq!(dp.mu_tilde, 0.5);
        // γ = √(R/C_v) regardless of the reference state
        let phys = PhysicalParams {
            cv: 2.5,
            rho_bar: 3.0,
            t_bar: 0.2,
            ..unit_phys()
        };
        let (dp, _) = nondimensionalize(&phys, &PressureLaw::Perfect { r: 0.9 }).unwrap();
        assert!((dp.gamma - (0.9f64 / 2.5).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn vdw_instability_and_pole() {
        let phys = unit_phys();
        let pl = PressureLaw::VanDerWaals {
            alpha: 10.0,
            beta: 1.0,
            delta: 3.0,
        };
        let rep = check_stability(&phys, &pl).unwrap();
        // −2αρ̄ + T̄βδ/(δ−ρ̄)²
        assert!((rep.dp_drho - (-20.0 + 3.0 / 4.0)).abs() < 1e-14);
        assert!(!rep.pass);
        assert!(nondimensionalize(&phys, &pl).is_err());
        let pole = PressureLaw::VanDerWaals {
            alpha: 0.0,
            beta: 1.0,
            delta: 1.0,
        };
        assert!(matches!(
            check_stability(&phys, &pole),
            Err(Error::NonSmoothPressure { .. })
        ));
        let bad = PhysicalParams { mu: 0.0, ..phys };
        assert!(check_stability(&bad, &PressureLaw::Perfect { r: 1.0 }).is_err());
    }

    #[test]
    fn coefficients_vanish_at_zero_and_k3_quadrature() {
        let pl = PressureLaw::VanDerWaals {
            alpha: 0.1,
            beta: 1.0,
            delta: 4.0,
        };
        let (_, t) = nondimensionalize(&unit_phys(), &pl).unwrap();
        for f in [
            CoefficientTable::i,
            CoefficientTable::k1,
            CoefficientTable::k2,
            CoefficientTable::k3,
            CoefficientTable::kt1,
        ] {
            assert_eq!(f(&t, 0.0), 0.0);
        }
        // K3 against the closed form ∫ βδ/((δ−ρ̄(1+z))²(1+z)) by partial fractions
        let a = 0.3;
        let h = 1e-6;
        let fd = (t.k3(a + h) - t.k3(a - h)) / (2.0 * h);
        assert!((fd - t.k3_prime(a)).abs() < 1e-7);
    }

    #[test]
    fn pressure_toml_forms() {
        #[derive(Deserialize)]
        struct W {
            pressure: PressureLaw,
        }
        let w: W = toml::from_str("pressure = { kind = \"perfect\", R = 1.0 }").unwrap();
        assert_eq!(w.pressure, PressureLaw::Perfect { r: 1.0 });
        let w: W =
            toml::from_str("pressure = { kind = \"vdw\", alpha = 1.0, beta = 2.0, delta = 3.0 }")
                .unwrap();
        assert!(matches!(w.pressure, PressureLaw::VanDerWaals { .. }));
        let w: W =
            toml::from_str("pressure = { kind = \"poly\", pi0 = [0.0, 1.0], pi1 = [0.0, 2.0] }")
                .unwrap();
        assert_eq!(w.pressure.pi1(1.5, 0), 3.0);
    }
}
