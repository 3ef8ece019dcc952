use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative width of the band around `lambda = 2W` treated as the critical point.
///
/// The regime is critical when `|4W^2 - lambda^2| < DEGENERACY_TOL * W^2`.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Coupling regime of a single atom-reservoir pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingRegime {
    /// `lambda < 2W`: oscillatory, memory-dominated decay.
    Strong,
    /// `lambda > 2W`: monotone decay.
    Weak,
    /// `lambda = 2W` within [`DEGENERACY_TOL`].
    Critical,
}

impl fmt::Display for CouplingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Strong => "strong",
            Self::Weak => "weak",
            Self::Critical => "critical",
        })
    }
}

/// Physical parameters of the two identical atom-reservoir systems and of
/// the initial state `alpha |gg> + beta |ee>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    omega0: f64,
    w: f64,
    lambda: f64,
    alpha: f64,
}

impl PhysicalParams {
    /// Builds a parameter set with `omega0 = 0`.
    pub fn new(w: f64, lambda: f64, alpha: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidParameter {
                name: "W",
                value: w,
                reason: "must be positive and finite",
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be positive and finite",
            });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self {
            omega0: 0.0,
            w,
            lambda,
            alpha,
        })
    }

    /// Parameters in units of `W = 1`.
    pub fn from_ratio(lambda_over_w: f64, alpha: f64) -> Result<Self> {
        Self::new(1.0, lambda_over_w, alpha)
    }

    /// Sets the atomic transition frequency. Only phases depend on it.
    pub fn with_omega0(mut self, omega0: f64) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega0",
                value: omega0,
                reason: "must be finite",
            });
        }
        self.omega0 = omega0;
        Ok(self)
    }

    /// Returns a copy with a different initial weight.
    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.w, self.lambda, alpha)?.with_omega0(self.omega0)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `sqrt(1 - alpha^2)`.
    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).max(0.0).sqrt()
    }

    pub fn lambda_over_w(&self) -> f64 {
        self.lambda / self.w
    }

    /// `4W^2 - lambda^2`; positive in strong coupling.
    pub fn discriminant(&self) -> f64 {
        4.0 * self.w * self.w - self.lambda * self.lambda
    }

    pub fn regime(&self) -> CouplingRegime {
        let disc = self.discriminant();
        if disc.abs() < DEGENERACY_TOL * self.w * self.w {
            CouplingRegime::Critical
        } else if disc > 0.0 {
            CouplingRegime::Strong
        } else {
            CouplingRegime::Weak
        }
    }

    /// Oscillation frequency `d = sqrt(4W^2 - lambda^2)`, defined only in
    /// strong coupling.
    pub fn d(&self) -> Option<f64> {
        match self.regime() {
            CouplingRegime::Strong => Some(self.discriminant().sqrt()),
            _ => None,
        }
    }

    /// Like [`d`](Self::d), but an error outside strong coupling.
    pub fn require_strong(&self) -> Result<f64> {
        self.d().ok_or(Error::RequiresStrongCoupling {
            lambda_over_w: self.lambda_over_w(),
        })
    }
}

/// Free-function form of [`PhysicalParams::regime`].
pub fn coupling_regime(params: &PhysicalParams) -> CouplingRegime {
    params.regime()
}
