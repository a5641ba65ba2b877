//! Generalized Riemann problem solvers: instantaneous time derivatives at an
//! interior interface and at a physical boundary.

mod one_sided;
mod wave;

pub use one_sided::{acoustic_closed_form_pressure_rate, one_sided_grp, BoundaryRate, BoundarySolution, BoundaryTimeDerivatives};
pub use wave::{fan_integral, smooth_rate, sonic_pressure_rate_literal, Branch, GrpCoefficients};

use crate::error::Result;
use crate::gas::{sound_speed_unchecked, Eos, Prim};
use crate::riemann::{sample, solve_riemann, RiemannSolution, Side, WaveKind};
use serde::{Deserialize, Serialize};
use wave::{mirror_slope, star_density_slope, wave_coefficients, WaveInput};

/// Which form of the geometric source term enters the rarefaction `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceConvention {
    /// Obtained by integrating the source along the fan characteristics.
    #[default]
    Derived,
    /// Twice the derived value for the 3-wave, with the alternative 1-wave form.
    Literal,
}

/// Acoustic one-sided boundary relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcousticForm {
    /// Linear characteristic relation along the outgoing characteristic.
    #[default]
    Characteristic,
    /// Closed-form pressure rate kept for comparison; see
    /// [`acoustic_closed_form_pressure_rate`].
    Literal,
}

/// Boundary rate when the boundary lies inside a rarefaction fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SonicForm {
    /// First-order expansion of the fan about its centre.
    #[default]
    Expansion,
    /// Velocity rate from the expansion, pressure rate from
    /// [`sonic_pressure_rate_literal`].
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GrpOptions {
    #[serde(default)]
    pub rarefaction_source: SourceConvention,
    #[serde(default)]
    pub acoustic: AcousticForm,
    #[serde(default)]
    pub sonic: SonicForm,
}

/// Limiting value and spatial slope of the primitive variables on one side.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GrpSideData {
    pub u: Prim,
    pub slope: Prim,
}

impl GrpSideData {
    pub fn new(u: Prim, slope: Prim) -> Self {
        Self { u, slope }
    }
}

/// Where the interface `x = 0` sits in the wave pattern at `t = 0+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Untouched initial data of one side.
    Smooth(Side),
    /// Constant star state adjacent to the contact; `scale = rho*_J / rho_J`.
    Star { side: Side, scale: f64 },
    /// Inside a rarefaction fan of the given side; `theta = c / c_J`.
    Fan { side: Side, theta: f64 },
}

/// Interface state and its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSolution {
    pub ustar: Prim,
    /// `(d rho/dt, dv/dt, dp/dt)` at the interface.
    pub rate: Prim,
    pub region: Region,
    pub riemann: RiemannSolution,
}

impl InterfaceSolution {
    /// Time derivative at the interface of a passively advected scalar with
    /// one-sided slopes `left`, `right` (zero source).
    pub fn passive_rate(&self, left: f64, right: f64, eos: &Eos) -> f64 {
        let k2 = 1.0 / eos.mu2();
        match self.region {
            Region::Smooth(Side::Left) => -self.riemann.left.v * left,
            Region::Smooth(Side::Right) => -self.riemann.right.v * right,
            Region::Star { side, scale } => {
                let q = if side == Side::Left { left } else { right };
                -self.ustar.v * scale * q
            }
            Region::Fan { side: Side::Right, theta } => {
                let r = &self.riemann.right;
                sound_speed_unchecked(r.rho, r.p, eos) * right * theta.powf(k2)
            }
            Region::Fan { side: Side::Left, theta } => {
                let l = &self.riemann.left;
                -sound_speed_unchecked(l.rho, l.p, eos) * left * theta.powf(k2)
            }
        }
    }
}

/// Convert material derivatives at a point with state `u` into partial time
/// derivatives of `(v, p)`.
pub fn material_to_partial(u: &Prim, dv: f64, dp: f64, ratio: f64, eos: &Eos) -> (f64, f64) {
    let rc2 = eos.gamma() * u.p;
    let vt = dv + u.v / rc2 * dp + ratio * u.v * u.v;
    let pt = dp + u.rho * u.v * dv;
    (vt, pt)
}

/// Resolve the interior GRP between `left` and `right` at an interface with
/// geometric ratio `ratio = a'/a`.
pub fn grp_interior(left: &GrpSideData, right: &GrpSideData, ratio: f64, eos: &Eos, opts: &GrpOptions) -> Result<InterfaceSolution> {
    let rs = solve_riemann(&left.u, &right.u, eos)?;
    let g = eos.gamma();
    let (l, r) = (&left.u, &right.u);
    let cl = sound_speed_unchecked(l.rho, l.p, eos);
    let cr = sound_speed_unchecked(r.rho, r.p, eos);
    let sl = rs.star_left();
    let sr = rs.star_right();
    let csl = sound_speed_unchecked(sl.rho, sl.p, eos);
    let csr = sound_speed_unchecked(sr.rho, sr.p, eos);

    // left wave entirely to the right of the interface
    let left_clear = match rs.left_wave {
        WaveKind::Shock => {
            let m = crate::riemann::right_shock_speed(&l.mirror(), rs.pstar, eos);
            -m >= 0.0
        }
        WaveKind::Rarefaction => l.v - cl >= 0.0,
    };
    if left_clear {
        let rate = smooth_rate(l, &left.slope, ratio, eos);
        return Ok(InterfaceSolution { ustar: *l, rate, region: Region::Smooth(Side::Left), riemann: rs });
    }
    let right_clear = match rs.right_wave {
        WaveKind::Shock => crate::riemann::right_shock_speed(r, rs.pstar, eos) <= 0.0,
        WaveKind::Rarefaction => r.v + cr <= 0.0,
    };
    if right_clear {
        let rate = smooth_rate(r, &right.slope, ratio, eos);
        return Ok(InterfaceSolution { ustar: *r, rate, region: Region::Smooth(Side::Right), riemann: rs });
    }
    if rs.left_wave == WaveKind::Rarefaction && sl.v - csl > 0.0 {
        let (state, rate) = wave::fan_rate(&l.mirror(), &mirror_slope(&left.slope), -ratio, eos);
        let theta = sound_speed_unchecked(state.rho, state.p, eos) / cl;
        return Ok(InterfaceSolution {
            ustar: state.mirror(),
            rate: Prim::new(rate.rho, -rate.v, rate.p),
            region: Region::Fan { side: Side::Left, theta },
            riemann: rs,
        });
    }
    if rs.right_wave == WaveKind::Rarefaction && sr.v + csr < 0.0 {
        let (state, rate) = wave::fan_rate(r, &right.slope, ratio, eos);
        let theta = sound_speed_unchecked(state.rho, state.p, eos) / cr;
        return Ok(InterfaceSolution { ustar: state, rate, region: Region::Fan { side: Side::Right, theta }, riemann: rs });
    }

    // star region: two linear relations for (Dv, Dp)
    let cfl = wave_coefficients(Side::Left, l, &left.slope, &sl, ratio, eos, opts);
    let cfr = wave_coefficients(Side::Right, r, &right.slope, &sr, ratio, eos, opts);
    let det = cfl.a * cfr.b - cfr.a * cfl.b;
    let scale = (cfl.a.abs() + cfr.a.abs()) * (cfl.b.abs() + cfr.b.abs());
    let (dv, dp) = if det.abs() > 1e-14 * scale {
        ((cfl.d * cfr.b - cfr.d * cfl.b) / det, (cfl.a * cfr.d - cfr.a * cfl.d) / det)
    } else {
        (0.0, 0.0)
    };
    let side = if rs.vstar > 0.0 { Side::Left } else { Side::Right };
    let (star, rho_x) = match side {
        Side::Left => {
            let w = WaveInput { u: *l, slope: left.slope, star: sl, ratio }.mirror();
            let mut cm = cfl;
            cm.b = -cm.b;
            cm.d = -cm.d;
            if let Some(s) = cm.sigma.as_mut() {
                *s = -*s;
            }
            (sl, -star_density_slope(&w, &cm, -dv, dp, eos))
        }
        Side::Right => {
            let w = WaveInput { u: *r, slope: right.slope, star: sr, ratio };
            (sr, star_density_slope(&w, &cfr, dv, dp, eos))
        }
    };
    let (vt, pt) = material_to_partial(&star, dv, dp, ratio, eos);
    let c2 = g * star.p / star.rho;
    let rho_t = dp / c2 - star.v * rho_x;
    let scale = match side {
        Side::Left => sl.rho / l.rho,
        Side::Right => sr.rho / r.rho,
    };
    let ustar = sample(&rs, 0.0);
    Ok(InterfaceSolution { ustar, rate: Prim::new(rho_t, vt, pt), region: Region::Star { side, scale }, riemann: rs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn air() -> Eos {
        Eos::new(1.4).unwrap()
    }

    #[test]
    fn uniform_state_has_zero_rate() {
        let eos = air();
        let s = GrpSideData::new(Prim::new(1.0, 0.3, 1.0), Prim::default());
        let sol = grp_interior(&s, &s, 0.0, &eos, &GrpOptions::default()).unwrap();
        assert_eq!(sol.rate.to_array(), [0.0, 0.0, 0.0]);
        assert_eq!(sol.ustar, s.u);
    }

    #[test]
    fn smooth_linear_data_matches_pde() {
        // equal limits and slopes: the interface rate is -A(u) u_x
        let eos = air();
        let u = Prim::new(1.1, 0.2, 0.9);
        let slope = Prim::new(0.3, -0.4, 0.5);
        let s = GrpSideData::new(u, slope);
        let sol = grp_interior(&s, &s, 0.0, &eos, &GrpOptions::default()).unwrap();
        let exact = smooth_rate(&u, &slope, 0.0, &eos);
        for (a, b) in sol.rate.to_array().iter().zip(exact.to_array()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn smooth_data_with_source_matches_pde() {
        let eos = air();
        let u = Prim::new(1.1, 0.2, 0.9);
        let slope = Prim::new(0.3, -0.4, 0.5);
        let s = GrpSideData::new(u, slope);
        let sol = grp_interior(&s, &s, 0.6, &eos, &GrpOptions::default()).unwrap();
        let exact = smooth_rate(&u, &slope, 0.6, &eos);
        for (a, b) in sol.rate.to_array().iter().zip(exact.to_array()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn supersonic_smooth_data() {
        let eos = air();
        let u = Prim::new(1.0, 3.0, 1.0);
        let slope = Prim::new(0.3, -0.4, 0.5);
        let l = GrpSideData::new(u, slope);
        let r = GrpSideData::new(Prim::new(0.9, 3.0, 0.95), Prim::default());
        let sol = grp_interior(&l, &r, 0.0, &eos, &GrpOptions::default()).unwrap();
        assert_eq!(sol.region, Region::Smooth(Side::Left));
        assert_eq!(sol.rate, smooth_rate(&u, &slope, 0.0, &eos));
    }

    #[test]
    fn sonic_fan_is_detected() {
        let eos = air();
        let c = 1.4f64.sqrt();
        let slope = Prim::new(0.2, 0.1, 0.3);
        let l = GrpSideData::new(Prim::new(1.0, -c - 0.1, 1.0), slope);
        let r = GrpSideData::new(Prim::new(1.0, -c + 0.1, 1.0), slope);
        let sol = grp_interior(&l, &r, 0.0, &eos, &GrpOptions::default()).unwrap();
        assert!(matches!(sol.region, Region::Fan { side: Side::Right, .. }), "{:?}", sol.region);
        let cs = (1.4 * sol.ustar.p / sol.ustar.rho).sqrt();
        assert!((sol.ustar.v + cs).abs() < 1e-12);
        let s = sample(&sol.riemann, 0.0);
        for (a, b) in sol.ustar.to_array().iter().zip(s.to_array()) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
