//! Longitudinal acoustic dispersions `ω_L(q)`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::tabulated::Knots;

/// Relative width of the final bisection bracket in `q`.
const INVERT_REL_TOL: f64 = 1e-14;

/// An isotropic longitudinal branch. All built-in families are
/// nondecreasing with `ω_L(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Dispersion {
    /// `ω = c_s q`.
    Linear { c_s: f64 },
    /// `ω = min(c_s q, omega_d)`.
    DebyeCapped { c_s: f64, omega_d: f64 },
    /// `ω = omega_max sin(π q / (2 q_edge))` up to `q_edge`, flat beyond.
    SineBand { omega_max: f64, q_edge: f64 },
    /// Linear interpolation in `(q, ω)`, constant past the last knot.
    Tabulated { knots: Knots },
}

impl Dispersion {
    pub fn linear(c_s: f64) -> Result<Self> {
        ensure_positive("c_s", c_s)?;
        Ok(Self::Linear { c_s })
    }

    pub fn debye_capped(c_s: f64, omega_d: f64) -> Result<Self> {
        ensure_positive("c_s", c_s)?;
        ensure_positive("omega_d", omega_d)?;
        Ok(Self::DebyeCapped { c_s, omega_d })
    }

    pub fn sine_band(omega_max: f64, q_edge: f64) -> Result<Self> {
        ensure_positive("omega_max", omega_max)?;
        ensure_positive("q_edge", q_edge)?;
        Ok(Self::SineBand { omega_max, q_edge })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Linear { c_s } => ensure_positive("c_s", c_s),
            Self::DebyeCapped { c_s, omega_d } => {
                ensure_positive("c_s", c_s)?;
                ensure_positive("omega_d", omega_d)
            }
            Self::SineBand { omega_max, q_edge } => {
                ensure_positive("omega_max", omega_max)?;
                ensure_positive("q_edge", q_edge)
            }
            Self::Tabulated { ref knots } => {
                if knots.first_x() != 0.0 || knots.ys()[0] != 0.0 {
                    return Err(Error::Validation {
                        message: "tabulated dispersion must start at (0, 0)".into(),
                        indices: vec![0],
                    });
                }
                let bad: Vec<usize> = knots
                    .ys()
                    .windows(2)
                    .enumerate()
                    .filter(|(_, w)| w[1] < w[0])
                    .map(|(i, _)| i + 1)
                    .collect();
                if bad.is_empty() {
                    Ok(())
                } else {
                    Err(Error::Validation {
                        message: "dispersion frequencies must be nondecreasing".into(),
                        indices: bad,
                    })
                }
            }
        }
    }

    pub fn evaluate(&self, q: f64) -> Result<f64> {
        if q.is_nan() || q < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "q must be nonnegative, got {q}"
            )));
        }
        Ok(self.omega(q))
    }

    /// Unchecked evaluation for `q ≥ 0`.
    pub(crate) fn omega(&self, q: f64) -> f64 {
        match self {
            Self::Linear { c_s } => c_s * q,
            Self::DebyeCapped { c_s, omega_d } => (c_s * q).min(*omega_d),
            Self::SineBand { omega_max, q_edge } => {
                if q >= *q_edge {
                    *omega_max
                } else {
                    omega_max * (FRAC_PI_2 * q / q_edge).sin()
                }
            }
            Self::Tabulated { knots } => knots.interpolate(q).unwrap_or_else(|| knots.last_y()),
        }
    }

    /// `ω_L(|q|)` for a wave vector.
    pub fn evaluate_vector(&self, q: [f64; 3]) -> f64 {
        self.omega((q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt())
    }

    /// Least upper bound of `ω_L` (infinite for `Linear`).
    pub fn supremum(&self) -> f64 {
        match self {
            Self::Linear { .. } => f64::INFINITY,
            Self::DebyeCapped { omega_d, .. } => *omega_d,
            Self::SineBand { omega_max, .. } => *omega_max,
            Self::Tabulated { knots } => knots.last_y(),
        }
    }

    /// Wave numbers where `ω_L` has a kink.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Self::Linear { .. } => Vec::new(),
            Self::DebyeCapped { c_s, omega_d } => vec![omega_d / c_s],
            Self::SineBand { q_edge, .. } => vec![*q_edge],
            Self::Tabulated { knots } => knots.xs().iter().copied().filter(|&x| x > 0.0).collect(),
        }
    }

    /// Smallest `q` with `ω_L(q) = omega`, by bisection.
    ///
    /// Frequencies above [`supremum`](Self::supremum) give
    /// [`Error::OutOfRange`]. The returned `q` always satisfies
    /// `ω_L(q) ≥ omega`.
    pub fn invert(&self, omega: f64) -> Result<f64> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "omega must be nonnegative, got {omega}"
            )));
        }
        if omega == 0.0 {
            return Ok(0.0);
        }
        let supremum = self.supremum();
        if omega > supremum {
            return Err(Error::OutOfRange { omega, supremum });
        }

        let mut hi = match self {
            Self::Linear { c_s } | Self::DebyeCapped { c_s, .. } => omega / c_s,
            Self::SineBand { q_edge, .. } => *q_edge,
            Self::Tabulated { knots } => knots.last_x(),
        };
        let mut expansions = 0;
        while self.omega(hi) < omega {
            hi *= 2.0;
            expansions += 1;
            if expansions > 2100 || !hi.is_finite() {
                return Err(Error::InternalConsistency(format!(
                    "could not bracket omega = {omega}"
                )));
            }
        }
        let mut lo = 0.0;
        for _ in 0..2000 {
            if hi - lo <= INVERT_REL_TOL * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.omega(mid) >= omega {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// The sound speed, for families that have one.
    pub fn sound_speed(&self) -> Option<f64> {
        match self {
            Self::Linear { c_s } | Self::DebyeCapped { c_s, .. } => Some(*c_s),
            _ => None,
        }
    }

    pub fn with_sound_speed(&self, c_s: f64) -> Result<Self> {
        match *self {
            Self::Linear { .. } => Self::linear(c_s),
            Self::DebyeCapped { omega_d, .. } => Self::debye_capped(c_s, omega_d),
            _ => Err(Error::InvalidArgument(format!(
                "dispersion family '{}' has no sound speed parameter",
                self.family_name()
            ))),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::DebyeCapped { .. } => "debye_capped",
            Self::SineBand { .. } => "sine_band",
            Self::Tabulated { .. } => "tabulated",
        }
    }
}
