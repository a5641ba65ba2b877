//! Exact Riemann solver for the ideal-gas Euler equations and the one-sided
//! Riemann solver used at physical boundaries.
//!
//! The one-sided problem is always solved for a left boundary (fluid on the
//! right, single 3-wave). Right boundaries are reduced to it by the mirror
//! map `x -> -x`.

use crate::error::{Error, Result};
use crate::gas::{sound_speed, Eos, Prim};
use serde::{Deserialize, Serialize};

const MAX_ITER: usize = 100;
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `sgn(J)`: -1 for the left side, +1 for the right.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// A state on the wave curve of a given family through an anchor state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveCurvePoint {
    pub p: f64,
    pub v: f64,
    pub rho: f64,
    pub kind: WaveKind,
    pub family: u8,
}

/// Toro's pressure function `f_K(p)` and its derivative for the state `s`.
/// `v_* = v_R + f_R(p)` across a 3-wave, `v_* = v_L - f_L(p)` across a 1-wave.
pub fn pressure_function(p: f64, s: &Prim, c: f64, eos: &Eos) -> (f64, f64) {
    let g = eos.gamma();
    if p > s.p {
        let a = 2.0 / ((g + 1.0) * s.rho);
        let b = (g - 1.0) / (g + 1.0) * s.p;
        let q = (a / (p + b)).sqrt();
        let f = (p - s.p) * q;
        let df = q * (1.0 - 0.5 * (p - s.p) / (p + b));
        (f, df)
    } else {
        let z = (g - 1.0) / (2.0 * g);
        let r = (p / s.p).powf(z);
        let f = 2.0 * c / (g - 1.0) * (r - 1.0);
        let df = 1.0 / (s.rho * c) * (p / s.p).powf(-(g + 1.0) / (2.0 * g));
        (f, df)
    }
}

/// Density behind a wave connecting `s` to pressure `p`.
pub fn star_density(p: f64, s: &Prim, eos: &Eos) -> f64 {
    if p > s.p {
        let m2 = eos.mu2();
        let r = p / s.p;
        s.rho * (r + m2) / (r * m2 + 1.0)
    } else {
        s.rho * (p / s.p).powf(1.0 / eos.gamma())
    }
}

pub fn wave_curve_from_state(u: &Prim, family: u8, p: f64, eos: &Eos) -> Result<WaveCurvePoint> {
    u.validate()?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidState(format!("wave-curve pressure {p}")));
    }
    let c = sound_speed(u, eos)?;
    let (f, _) = pressure_function(p, u, c, eos);
    let v = match family {
        1 => u.v - f,
        3 => u.v + f,
        _ => return Err(Error::InvalidState(format!("wave family {family} has no wave curve"))),
    };
    let kind = if p > u.p { WaveKind::Shock } else { WaveKind::Rarefaction };
    Ok(WaveCurvePoint { p, v, rho: star_density(p, u, eos), kind, family })
}

/// Solve `f_K(p) = dv` for `p`. `f_K` is increasing and concave.
fn invert_pressure_function(s: &Prim, dv: f64, eos: &Eos) -> Result<f64> {
    let c = sound_speed(s, eos)?;
    let g = eos.gamma();
    if dv <= -2.0 * c / (g - 1.0) {
        return Err(Error::VacuumFormation(format!(
            "velocity jump {dv} exceeds escape speed {}",
            2.0 * c / (g - 1.0)
        )));
    }
    if dv == 0.0 {
        return Ok(s.p);
    }
    if dv < 0.0 {
        // closed form on the rarefaction branch
        let z = (g - 1.0) / (2.0 * g);
        let r = 1.0 + dv * (g - 1.0) / (2.0 * c);
        return Ok(s.p * r.powf(1.0 / z));
    }
    // shock branch: Newton from a linearised guess, safeguarded by bisection
    let mut lo = s.p;
    let mut hi = s.p + s.rho * c * dv;
    while pressure_function(hi, s, c, eos).0 < dv {
        lo = hi;
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence { iterations: 0, what: "shock pressure bracket".into() });
        }
    }
    let mut p = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let (f, df) = pressure_function(p, s, c, eos);
        let r = f - dv;
        if r > 0.0 {
            hi = p;
        } else {
            lo = p;
        }
        let mut next = p - r / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - p).abs() <= REL_TOL * next || hi - lo <= REL_TOL * hi {
            return Ok(next);
        }
        p = next;
    }
    Err(Error::NoConvergence { iterations: MAX_ITER, what: "shock pressure".into() })
}

/// Self-similar solution of the two-sided Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: Prim,
    pub right: Prim,
    pub pstar: f64,
    pub vstar: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: WaveKind,
    pub right_wave: WaveKind,
    gamma: f64,
}

impl RiemannSolution {
    pub fn contact_speed(&self) -> f64 {
        self.vstar
    }

    pub fn star_left(&self) -> Prim {
        Prim::new(self.rho_star_left, self.vstar, self.pstar)
    }

    pub fn star_right(&self) -> Prim {
        Prim::new(self.rho_star_right, self.vstar, self.pstar)
    }

    pub fn eos(&self) -> Eos {
        Eos::new(self.gamma).expect("validated at construction")
    }
}

fn two_rarefaction_guess(l: &Prim, r: &Prim, cl: f64, cr: f64, g: f64) -> f64 {
    let z = (g - 1.0) / (2.0 * g);
    let num = cl + cr - 0.5 * (g - 1.0) * (r.v - l.v);
    let den = cl / l.p.powf(z) + cr / r.p.powf(z);
    (num / den).powf(1.0 / z)
}

pub fn solve_riemann(ul: &Prim, ur: &Prim, eos: &Eos) -> Result<RiemannSolution> {
    ul.validate()?;
    ur.validate()?;
    let g = eos.gamma();
    let cl = sound_speed(ul, eos)?;
    let cr = sound_speed(ur, eos)?;
    let du = ur.v - ul.v;
    if 2.0 * (cl + cr) / (g - 1.0) <= du {
        return Err(Error::VacuumFormation(format!(
            "psi_L = {} <= phi_R = {}",
            ul.v + 2.0 * cl / (g - 1.0),
            ur.v - 2.0 * cr / (g - 1.0)
        )));
    }
    let residual = |p: f64| {
        let (fl, dfl) = pressure_function(p, ul, cl, eos);
        let (fr, dfr) = pressure_function(p, ur, cr, eos);
        (fl + fr + du, dfl + dfr)
    };

    let pstar = if ul == ur {
        ul.p
    } else {
        let mut p = two_rarefaction_guess(ul, ur, cl, cr, g);
        let mut converged = false;
        if p.is_finite() && p > 0.0 {
            for _ in 0..MAX_ITER {
                let (f, df) = residual(p);
                let mut next = p - f / df;
                if !next.is_finite() {
                    break;
                }
                if next <= 0.0 {
                    next = 0.1 * p;
                }
                let change = (next - p).abs() / (0.5 * (next + p));
                p = next;
                if change < REL_TOL {
                    converged = true;
                    break;
                }
            }
        }
        if converged {
            p
        } else {
            bisect_pressure(&residual, ul.p.max(ur.p))?
        }
    };
    let (fl, _) = pressure_function(pstar, ul, cl, eos);
    let (fr, _) = pressure_function(pstar, ur, cr, eos);
    let vstar = 0.5 * (ul.v + ur.v) + 0.5 * (fr - fl);
    Ok(RiemannSolution {
        left: *ul,
        right: *ur,
        pstar,
        vstar,
        rho_star_left: star_density(pstar, ul, eos),
        rho_star_right: star_density(pstar, ur, eos),
        left_wave: if pstar > ul.p { WaveKind::Shock } else { WaveKind::Rarefaction },
        right_wave: if pstar > ur.p { WaveKind::Shock } else { WaveKind::Rarefaction },
        gamma: g,
    })
}

fn bisect_pressure(residual: &dyn Fn(f64) -> (f64, f64), scale: f64) -> Result<f64> {
    let mut lo = 1e-14 * scale;
    let mut hi = 10.0 * scale;
    while residual(hi).0 < 0.0 {
        hi *= 10.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence { iterations: 0, what: "riemann bracket".into() });
        }
    }
    if residual(lo).0 > 0.0 {
        return Ok(lo);
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if residual(mid).0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::NoConvergence { iterations: 400, what: "riemann bisection".into() })
}

/// State at similarity coordinate `xi = x / t`.
pub fn sample(sol: &RiemannSolution, xi: f64) -> Prim {
    let eos = sol.eos();
    let g = eos.gamma();
    let (l, r) = (&sol.left, &sol.right);
    if xi <= sol.vstar {
        let cl = (g * l.p / l.rho).sqrt();
        match sol.left_wave {
            WaveKind::Shock => {
                let s = l.v - cl * ((g + 1.0) / (2.0 * g) * sol.pstar / l.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= s {
                    *l
                } else {
                    sol.star_left()
                }
            }
            WaveKind::Rarefaction => {
                let head = l.v - cl;
                let cs = cl * (sol.pstar / l.p).powf((g - 1.0) / (2.0 * g));
                let tail = sol.vstar - cs;
                if xi <= head {
                    *l
                } else if xi >= tail {
                    sol.star_left()
                } else {
                    let c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (l.v - xi));
                    let v = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * l.v + xi);
                    let rho = l.rho * (c / cl).powf(2.0 / (g - 1.0));
                    let p = l.p * (c / cl).powf(2.0 * g / (g - 1.0));
                    Prim::new(rho, v, p)
                }
            }
        }
    } else {
        let cr = (g * r.p / r.rho).sqrt();
        match sol.right_wave {
            WaveKind::Shock => {
                let s = r.v + cr * ((g + 1.0) / (2.0 * g) * sol.pstar / r.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= s {
                    *r
                } else {
                    sol.star_right()
                }
            }
            WaveKind::Rarefaction => {
                let head = r.v + cr;
                let cs = cr * (sol.pstar / r.p).powf((g - 1.0) / (2.0 * g));
                let tail = sol.vstar + cs;
                if xi >= head {
                    *r
                } else if xi <= tail {
                    sol.star_right()
                } else {
                    let c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (r.v - xi));
                    let v = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * r.v + xi);
                    let rho = r.rho * (c / cr).powf(2.0 / (g - 1.0));
                    let p = r.p * (c / cr).powf(2.0 * g / (g - 1.0));
                    Prim::new(rho, v, p)
                }
            }
        }
    }
}

/// Shock speed of a 3-shock from `s` to pressure `p`.
pub fn right_shock_speed(s: &Prim, p: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let c = (g * s.p / s.rho).sqrt();
    s.v + c * ((g + 1.0) / (2.0 * g) * p / s.p + (g - 1.0) / (2.0 * g)).sqrt()
}

/// Which closure turns a prescribed Mach number into a velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachConvention {
    /// `v / c = M_b`.
    #[default]
    Ratio,
    /// `v + c = M_b`.
    Literal,
}

/// Instantaneous boundary datum `B u = w_b`, expressed in the frame of the
/// boundary being solved (velocities signed along +x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryDatum {
    /// Prescribed normal velocity; `rho` supplements the datum when the
    /// contact enters the domain.
    Velocity { v: f64, rho: Option<f64> },
    Mach { m: f64, convention: MachConvention },
    Pressure { p: f64, rho: Option<f64> },
    /// Full state given (supersonic inflow or exact Dirichlet data).
    State(Prim),
    /// No datum: every characteristic leaves the domain.
    Free,
}

impl BoundaryDatum {
    pub fn mirror(&self) -> Self {
        match *self {
            BoundaryDatum::Velocity { v, rho } => BoundaryDatum::Velocity { v: -v, rho },
            BoundaryDatum::Mach { m, convention } => BoundaryDatum::Mach { m: -m, convention },
            BoundaryDatum::State(s) => BoundaryDatum::State(s.mirror()),
            other => other,
        }
    }

    /// Number of scalar conditions carried by the datum.
    pub fn dimension(&self) -> usize {
        match *self {
            BoundaryDatum::Velocity { rho, .. } | BoundaryDatum::Pressure { rho, .. } => 1 + rho.is_some() as usize,
            BoundaryDatum::Mach { .. } => 1,
            BoundaryDatum::State(_) => 3,
            BoundaryDatum::Free => 0,
        }
    }
}

/// How the boundary trace relates to the emitted 3-wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// The wave is degenerate; the trace equals the interior state.
    Degenerate,
    /// The boundary sits on the star side of a shock or rarefaction.
    Star(WaveKind),
    /// The boundary lies inside the rarefaction fan (choked outflow).
    Sonic,
    /// Full state imposed from data.
    Imposed,
    /// Every characteristic leaves: the trace is the interior state.
    Outflow,
}

/// Solution of the one-sided Riemann problem in the left-boundary frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedSolution {
    /// State on the boundary.
    pub ustar: Prim,
    /// State immediately behind the wave (differs from `ustar` in density
    /// when the contact carries supplemented inflow density).
    pub wave_star: Prim,
    pub wave: WaveKind,
    pub trace: TraceKind,
    pub wellposed: bool,
}

/// Eigenvalue count `#{lambda_i(u) > 0}`, with speeds within `tol * c`
/// of zero counted as non-positive.
pub fn positive_characteristics(u: &Prim, eos: &Eos) -> usize {
    let c = (eos.gamma() * u.p / u.rho).sqrt();
    let tol = 1e-12 * c;
    [u.v - c, u.v, u.v + c].iter().filter(|&&l| l > tol).count()
}

/// Solve the one-sided Riemann problem. `interior` is the fluid state next
/// to the boundary and `datum` is given in the physical frame.
pub fn solve_one_sided(interior: &Prim, datum: &BoundaryDatum, side: Side, eos: &Eos) -> Result<OneSidedSolution> {
    match side {
        Side::Left => solve_left(interior, datum, eos),
        Side::Right => {
            let mut s = solve_left(&interior.mirror(), &datum.mirror(), eos)?;
            s.ustar = s.ustar.mirror();
            s.wave_star = s.wave_star.mirror();
            Ok(s)
        }
    }
}

const DEGENERATE_TOL: f64 = 1e-9;

fn classify(p: f64, ur: &Prim) -> (WaveKind, bool) {
    let degenerate = (p - ur.p).abs() < DEGENERATE_TOL * (p + ur.p);
    (if p > ur.p { WaveKind::Shock } else { WaveKind::Rarefaction }, degenerate)
}

fn solve_left(ur: &Prim, datum: &BoundaryDatum, eos: &Eos) -> Result<OneSidedSolution> {
    ur.validate()?;
    let cr = sound_speed(ur, eos)?;
    let outflow = OneSidedSolution {
        ustar: *ur,
        wave_star: *ur,
        wave: WaveKind::Rarefaction,
        trace: TraceKind::Outflow,
        wellposed: positive_characteristics(ur, eos) == 0,
    };
    match *datum {
        BoundaryDatum::Free => Ok(outflow),
        BoundaryDatum::State(s) => {
            s.validate()?;
            Ok(OneSidedSolution {
                ustar: s,
                wave_star: s,
                wave: WaveKind::Rarefaction,
                trace: TraceKind::Imposed,
                wellposed: positive_characteristics(&s, eos) == 3,
            })
        }
        BoundaryDatum::Velocity { v, rho } => {
            let p = invert_pressure_function(ur, v - ur.v, eos)?;
            let star = Prim::new(star_density(p, ur, eos), v, p);
            let cs = sound_speed(&star, eos)?;
            if v < 0.0 && -v > cs {
                return Err(Error::IllPosedBoundary(format!(
                    "prescribed velocity {v} is a supersonic outflow (c* = {cs})"
                )));
            }
            finish(ur, star, rho, 1, eos)
        }
        BoundaryDatum::Pressure { p, rho } => {
            if !(p > 0.0) {
                return Err(Error::InvalidState(format!("boundary pressure {p}")));
            }
            if ur.v + cr <= 0.0 {
                return Ok(outflow);
            }
            let wp = wave_curve_from_state(ur, 3, p, eos)?;
            let star = Prim::new(wp.rho, wp.v, p);
            let cs = sound_speed(&star, eos)?;
            if star.v + cs < 0.0 {
                // the fan straddles the boundary: choked outflow
                let g = eos.gamma();
                let phi_r = ur.v - 2.0 * cr / (g - 1.0);
                let c = -eos.mu2() * phi_r;
                let ratio = c / cr;
                let sonic = Prim::new(
                    ur.rho * ratio.powf(2.0 / (g - 1.0)),
                    -c,
                    ur.p * ratio.powf(2.0 * g / (g - 1.0)),
                );
                return Ok(OneSidedSolution {
                    ustar: sonic,
                    wave_star: star,
                    wave: WaveKind::Rarefaction,
                    trace: TraceKind::Sonic,
                    wellposed: true,
                });
            }
            finish(ur, star, rho, 1, eos)
        }
        BoundaryDatum::Mach { m, convention } => {
            let resid = |p: f64| -> f64 {
                let v = ur.v + pressure_function(p, ur, cr, eos).0;
                let c = (eos.gamma() * p / star_density(p, ur, eos)).sqrt();
                match convention {
                    MachConvention::Ratio => v - m * c,
                    MachConvention::Literal => v + c - m,
                }
            };
            let p = bracket_and_bisect(&resid, ur.p)?;
            let star = Prim::new(star_density(p, ur, eos), ur.v + pressure_function(p, ur, cr, eos).0, p);
            finish(ur, star, None, 1, eos)
        }
    }
}

fn finish(ur: &Prim, star: Prim, rho_b: Option<f64>, base_dim: usize, eos: &Eos) -> Result<OneSidedSolution> {
    let (wave, degenerate) = classify(star.p, ur);
    let mut ustar = star;
    let count = positive_characteristics(&star, eos);
    let mut dim = base_dim;
    if star.v > 0.0 {
        if let Some(r) = rho_b {
            if !(r > 0.0) {
                return Err(Error::InvalidState(format!("boundary density {r}")));
            }
            ustar.rho = r;
            dim += 1;
        }
    }
    if count > dim {
        return Err(Error::IllPosedBoundary(format!(
            "{count} incoming characteristics at the boundary state but only {dim} datum component(s)"
        )));
    }
    let trace = if degenerate && rho_b.is_none_or(|_| star.v <= 0.0) {
        TraceKind::Degenerate
    } else {
        TraceKind::Star(wave)
    };
    Ok(OneSidedSolution { ustar, wave_star: star, wave, trace, wellposed: count == dim })
}

fn bracket_and_bisect(f: &dyn Fn(f64) -> f64, scale: f64) -> Result<f64> {
    // scan a geometric grid for a sign change, then bisect
    let mut prev_p = 1e-10 * scale;
    let mut prev = f(prev_p);
    let mut p = prev_p;
    for _ in 0..200 {
        p *= 1.25;
        let cur = f(p);
        if prev.signum() != cur.signum() {
            let (mut lo, mut hi) = (prev_p, p);
            let flo = prev;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * hi {
                    break;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev_p = p;
        prev = cur;
    }
    Err(Error::NoRoot("prescribed Mach number not reachable along the wave curve".into()))
}
