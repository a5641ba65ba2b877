//! Cross-section models `a(x)` feeding the geometric source term.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Duct cross-section. Only the log-derivative `a'(x)/a(x)` enters the
/// equations, so each model exposes both `a` and that ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AreaModel {
    /// Straight duct, no source.
    #[default]
    Uniform,
    /// Converging-diverging nozzle on `[0, 1]` with its throat at `x = 0.25`:
    /// `a = a_in exp(-ln(a_in) sin^2(2 pi x))` before the throat and
    /// `a = a_ex exp(-ln(a_ex) sin^2(2 pi (1 - x) / 3))` after it.
    Nozzle { a_in: f64, a_ex: f64 },
    /// Radial symmetry `a = r^dim` (`dim = 1` cylindrical, `dim = 2` spherical).
    Radial { dim: u32 },
}

impl AreaModel {
    pub fn area(&self, x: f64) -> Result<f64> {
        let a = match *self {
            AreaModel::Uniform => 1.0,
            AreaModel::Nozzle { a_in, a_ex } => {
                if x <= 0.25 {
                    let s = (2.0 * PI * x).sin();
                    a_in * (-a_in.ln() * s * s).exp()
                } else {
                    let s = (2.0 * PI * (1.0 - x) / 3.0).sin();
                    a_ex * (-a_ex.ln() * s * s).exp()
                }
            }
            AreaModel::Radial { dim } => {
                if x < 0.0 {
                    f64::NAN
                } else {
                    x.powi(dim as i32)
                }
            }
        };
        if a > 0.0 && a.is_finite() {
            Ok(a)
        } else {
            Err(Error::Geometry { x, reason: format!("non-positive area {a}") })
        }
    }

    /// `a'(x) / a(x)`.
    pub fn ratio(&self, x: f64) -> Result<f64> {
        match *self {
            AreaModel::Uniform => Ok(0.0),
            AreaModel::Nozzle { a_in, a_ex } => {
                self.area(x)?;
                if x <= 0.25 {
                    Ok(-2.0 * PI * a_in.ln() * (4.0 * PI * x).sin())
                } else {
                    Ok(2.0 * PI / 3.0 * a_ex.ln() * (4.0 * PI * (1.0 - x) / 3.0).sin())
                }
            }
            AreaModel::Radial { dim } => {
                if dim == 0 {
                    return Ok(0.0);
                }
                if x > 0.0 {
                    Ok(dim as f64 / x)
                } else {
                    Err(Error::Geometry { x, reason: "radial coordinate must be positive".into() })
                }
            }
        }
    }

    /// Like [`AreaModel::ratio`] but returns 0 at the symmetry centre `r = 0`,
    /// where the source is handled by its regular limit.
    pub fn ratio_or_center(&self, x: f64) -> Result<f64> {
        match *self {
            AreaModel::Radial { .. } if x == 0.0 => Ok(0.0),
            _ => self.ratio(x),
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, AreaModel::Uniform | AreaModel::Radial { dim: 0 })
    }

    /// Spatial dimension exponent for radial models.
    pub fn radial_dim(&self) -> Option<u32> {
        match *self {
            AreaModel::Radial { dim } if dim > 0 => Some(dim),
            _ => None,
        }
    }
}
