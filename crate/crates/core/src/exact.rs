//! Exact and reference solutions for the benchmark cases.

use crate::error::{Error, Result};
use crate::gas::{sound_speed, Eos, Prim};
use crate::geometry::AreaModel;
use serde::{Deserialize, Serialize};

/// Burgers initial-boundary value problem on `(0, 2)` with `v(x, 0) = -x` on
/// `(0, 1)`, `-1` beyond, and boundary value 0 before `t = 1`, 2 after.
/// The shock leaves the corner `(0, 1)` with speed 1/2.
pub fn burgers_exact(x: f64, t: f64) -> f64 {
    if t < 1.0 {
        if x < 1.0 - t { x / (t - 1.0) } else { -1.0 }
    } else if x < 0.5 * (t - 1.0) {
        2.0
    } else {
        -1.0
    }
}

/// The same solution with the shock path written as `x = t / 2`, which does
/// not pass through `(0, 1)`.
pub fn burgers_exact_shifted(x: f64, t: f64) -> f64 {
    if t < 1.0 {
        if x < 1.0 - t { x / (t - 1.0) } else { -1.0 }
    } else if x < 0.5 * t {
        2.0
    } else {
        -1.0
    }
}

/// Radially converging Noh flow of a cold gas with unit inflow speed.
/// `dim = 1` is cylindrical, `dim = 2` spherical. The pre-shock pressure
/// is the floor `p0` compressed adiabatically.
pub fn noh_exact(r: f64, t: f64, dim: u32, eos: &Eos, p0: f64) -> Prim {
    let g = eos.gamma();
    let s = 0.5 * (g - 1.0);
    if t > 0.0 && r < s * t {
        let rho1 = (1.0 + 1.0 / s).powi(dim as i32);
        Prim::new(rho1 * (1.0 + s) / s, 0.0, rho1 * (1.0 + s))
    } else {
        let rho = if r > 0.0 { (1.0 + t / r).powi(dim as i32) } else { 1.0 };
        Prim::new(rho, -1.0, p0 * rho.powf(g))
    }
}

/// `A / A*` as a function of Mach number.
pub fn area_mach_ratio(m: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let base = 2.0 / (g + 1.0) * (1.0 + 0.5 * (g - 1.0) * m * m);
    base.powf(0.5 * (g + 1.0) / (g - 1.0)) / m
}

/// Mach number with the given area ratio on the requested branch.
pub fn mach_from_area(ratio: f64, supersonic: bool, eos: &Eos) -> Result<f64> {
    if !(ratio >= 1.0 - 1e-12) {
        return Err(Error::NoRoot(format!("area ratio {ratio} below 1")));
    }
    if ratio <= 1.0 {
        return Ok(1.0);
    }
    // the ratio is decreasing below M = 1 and increasing above
    let (mut lo, mut hi) = if supersonic { (1.0, 2.0) } else { (1e-12, 1.0) };
    if supersonic {
        while area_mach_ratio(hi, eos) < ratio {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::NoRoot(format!("area ratio {ratio}")));
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = area_mach_ratio(mid, eos) - ratio;
        if (f > 0.0) == supersonic {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Steady isentropic state from stagnation values and Mach number.
pub fn isentropic_state(m: f64, rho0: f64, p0: f64, eos: &Eos) -> Prim {
    let g = eos.gamma();
    let f = 1.0 + 0.5 * (g - 1.0) * m * m;
    let rho = rho0 * f.powf(-1.0 / (g - 1.0));
    let p = p0 * f.powf(-g / (g - 1.0));
    Prim::new(rho, m * (g * p / rho).sqrt(), p)
}

/// Steady nozzle flow through a sonic throat of unit area, optionally with
/// a standing normal shock fixed by the exit pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NozzleFlow {
    pub area: AreaModel,
    pub rho0: f64,
    pub p0: f64,
    /// Standing-shock position, `None` for the shock-free transonic flow.
    pub shock: Option<f64>,
}

impl NozzleFlow {
    pub fn transonic(area: AreaModel, rho0: f64, p0: f64) -> Self {
        Self { area, rho0, p0, shock: None }
    }

    /// Locate the standing shock that produces exit pressure `p_exit` at
    /// `x = 1`.
    pub fn with_exit_pressure(area: AreaModel, rho0: f64, p0: f64, p_exit: f64, eos: &Eos) -> Result<Self> {
        let exit = |xs: f64| -> Result<f64> {
            let f = Self { area, rho0, p0, shock: Some(xs) };
            Ok(f.state(1.0, eos)?.p - p_exit)
        };
        let (mut lo, mut hi) = (0.25 + 1e-9, 1.0 - 1e-9);
        let (flo, fhi) = (exit(lo)?, exit(hi)?);
        if flo.signum() == fhi.signum() {
            return Err(Error::NoRoot(format!("no standing shock gives exit pressure {p_exit}")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if exit(mid)?.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self { area, rho0, p0, shock: Some(0.5 * (lo + hi)) })
    }

    pub fn mach(&self, x: f64, eos: &Eos) -> Result<f64> {
        Ok({
            let s = self.state(x, eos)?;
            s.v / sound_speed(&s, eos)?
        })
    }

    pub fn state(&self, x: f64, eos: &Eos) -> Result<Prim> {
        let a = self.area.area(x)?;
        match self.shock {
            Some(xs) if x > xs => {
                let g = eos.gamma();
                let m1 = mach_from_area(self.area.area(xs)?, true, eos)?;
                let m2 = ((1.0 + 0.5 * (g - 1.0) * m1 * m1) / (g * m1 * m1 - 0.5 * (g - 1.0))).sqrt();
                // stagnation pressure ratio across the shock
                let up = isentropic_state(m1, self.rho0, self.p0, eos);
                let down_p = up.p * (1.0 + 2.0 * g / (g + 1.0) * (m1 * m1 - 1.0));
                let p02 = down_p * (1.0 + 0.5 * (g - 1.0) * m2 * m2).powf(g / (g - 1.0));
                let ratio = p02 / self.p0;
                let rho02 = self.rho0 * ratio;
                let m = mach_from_area(a * ratio, false, eos)?;
                Ok(isentropic_state(m, rho02, p02, eos))
            }
            _ => {
                let m = mach_from_area(a, x > 0.25, eos)?;
                Ok(isentropic_state(m, self.rho0, self.p0, eos))
            }
        }
    }
}

/// Isentropic simple wave of the `v + c` family: `v - 2c/(gamma-1)` is
/// uniform and `v(x, 0) = v0 + amp sin(2 pi x)`, with `p = rho^gamma`.
/// Smooth until the characteristics cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleWave {
    pub v0: f64,
    pub c0: f64,
    pub amp: f64,
}

impl SimpleWave {
    fn state_of_v(&self, v: f64, eos: &Eos) -> Prim {
        let g = eos.gamma();
        let beta = 2.0 / (g - 1.0);
        let phi = self.v0 - beta * self.c0;
        let c = (v - phi) / beta;
        let rho = (c * c / g).powf(1.0 / (g - 1.0));
        Prim::new(rho, v, rho.powf(g))
    }

    fn v_init(&self, x: f64) -> f64 {
        self.v0 + self.amp * (2.0 * std::f64::consts::PI * x).sin()
    }

    /// Time at which the first characteristics cross.
    pub fn breaking_time(&self, eos: &Eos) -> f64 {
        let g = eos.gamma();
        let k = 1.0 + (g - 1.0) / 2.0;
        1.0 / (k * 2.0 * std::f64::consts::PI * self.amp.abs())
    }

    pub fn state(&self, x: f64, t: f64, eos: &Eos) -> Prim {
        let g = eos.gamma();
        let k = 1.0 + (g - 1.0) / 2.0;
        let phi = self.v0 - 2.0 * self.c0 / (g - 1.0);
        // v + c along the characteristic, with c = (v - phi)(gamma - 1)/2
        let lambda = |v: f64| k * v - (k - 1.0) * phi;
        let mut xi = x - lambda(self.v_init(x)) * t;
        for _ in 0..100 {
            let v = self.v_init(xi);
            let dv = self.amp * 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * xi).cos();
            let f = xi + lambda(v) * t - x;
            let df = 1.0 + k * dv * t;
            let step = f / df;
            xi -= step;
            if step.abs() < 1e-15 * (1.0 + xi.abs()) {
                break;
            }
        }
        self.state_of_v(self.v_init(xi), eos)
    }

    /// Time derivative of the primitive state by central differences.
    pub fn rate(&self, x: f64, t: f64, eos: &Eos) -> Prim {
        let h = 1e-6;
        (self.state(x, t + h, eos) - self.state(x, (t - h).max(0.0), eos)) * (1.0 / (h + h.min(t)))
    }
}
