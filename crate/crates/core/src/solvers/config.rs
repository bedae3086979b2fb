use serde::{Deserialize, Serialize};

use super::ProxStepKind;
use crate::error::{OscarError, Result};
use crate::prox::OscarParams;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FistaOptions {
    /// Lipschitz constant of the data-fit gradient; estimated from `A` when `None`.
    pub lipschitz: Option<f64>,
}

/// Two-step parameters. With `alpha`/`beta` unset they are derived from the assumed
/// eigenvalue range `[lambda_min, 1]` of `A^T A / L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistOptions {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub lambda_min: f64,
    /// Replace a two-step update that increases the objective by a plain shrinkage step.
    pub monotone: bool,
    pub lipschitz: Option<f64>,
}

impl Default for TwistOptions {
    fn default() -> Self {
        Self {
            alpha: None,
            beta: None,
            lambda_min: 1e-4,
            monotone: true,
            lipschitz: None,
        }
    }
}

impl TwistOptions {
    /// `(alpha, beta)` after applying the defaults.
    pub fn resolved(&self) -> (f64, f64) {
        let kappa = self.lambda_min;
        let rho = (1.0 - kappa) / (1.0 + kappa);
        let alpha = self
            .alpha
            .unwrap_or_else(|| 2.0 / (1.0 + (1.0 - rho * rho).sqrt()));
        let beta = self.beta.unwrap_or(2.0 * alpha / (1.0 + kappa));
        (alpha, beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsaOptions {
    pub eta: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl Default for SparsaOptions {
    fn default() -> Self {
        Self {
            eta: 2.0,
            alpha_min: 1e-30,
            alpha_max: 1e30,
        }
    }
}

/// Penalty shared by ADMM and the split Bregman method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmmOptions {
    pub mu: f64,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self { mu: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PadmmOptions {
    /// Step parameter; `1.02 * ||A||_2` when `None`.
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub params: OscarParams,
    pub prox: ProxStepKind,
    pub tol: f64,
    pub max_iter: usize,
    pub fista: FistaOptions,
    pub twist: TwistOptions,
    pub sparsa: SparsaOptions,
    pub admm: AdmmOptions,
    pub padmm: PadmmOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            params: OscarParams::new(0.1, 0.001).expect("valid defaults"),
            prox: ProxStepKind::Gpo,
            tol: 0.01,
            max_iter: 500,
            fista: FistaOptions::default(),
            twist: TwistOptions::default(),
            sparsa: SparsaOptions::default(),
            admm: AdmmOptions::default(),
            padmm: PadmmOptions::default(),
        }
    }
}

impl SolverConfig {
    pub fn new(params: OscarParams, prox: ProxStepKind) -> Self {
        Self {
            params,
            prox,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(OscarError::InvalidParameter(msg));
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if let Some(l) = self.fista.lipschitz.or(self.twist.lipschitz) {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("Lipschitz constant must be positive, got {l}"));
            }
        }
        let s = &self.sparsa;
        if !(s.eta > 1.0) {
            return bad(format!("eta must exceed 1, got {}", s.eta));
        }
        if !(s.alpha_min > 0.0 && s.alpha_min < s.alpha_max) {
            return bad(format!(
                "need 0 < alpha_min < alpha_max, got {} and {}",
                s.alpha_min, s.alpha_max
            ));
        }
        if !(self.admm.mu > 0.0 && self.admm.mu.is_finite()) {
            return bad(format!("mu must be positive, got {}", self.admm.mu));
        }
        if let Some(mu) = self.padmm.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return bad(format!("mu must be positive, got {mu}"));
            }
        }
        if !(self.twist.lambda_min > 0.0 && self.twist.lambda_min <= 1.0) {
            return bad(format!(
                "lambda_min must lie in (0, 1], got {}",
                self.twist.lambda_min
            ));
        }
        Ok(())
    }
}
