//! Coefficients of the linear relation `a Dv/Dt + b Dp/Dt = d` carried
//! across a single wave, plus the rarefaction-fan expansion used when the
//! evaluation point sits inside a fan.
//!
//! Everything here is written for a 3-wave (fluid state `u` on the right of
//! the wave, star state on the left). 1-waves are handled by mirroring the
//! data with [`WaveInput::mirror`].

use crate::gas::{sound_speed_unchecked, CharacteristicSlopes, Eos, Prim};

use super::{GrpOptions, SourceConvention};

/// Degenerate-wave threshold on the relative pressure jump.
pub(crate) const DEGENERATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Rarefaction,
    Shock,
    Sonic,
    Acoustic,
}

/// `a Dv/Dt + b Dp/Dt = d` across one wave, in the physical frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrpCoefficients {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub branch: Branch,
    /// `c* / c` for rarefactions, 1 otherwise.
    pub theta: f64,
    /// Shock speed in the frame of the wave input, when the branch is a shock.
    pub sigma: Option<f64>,
}

/// Data of a 3-wave: `u`/`slope` are the limits on the fluid side, `star`
/// the constant state behind the wave, `ratio = a'(0)/a(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct WaveInput {
    pub u: Prim,
    pub slope: Prim,
    pub star: Prim,
    pub ratio: f64,
}

pub(crate) fn mirror_slope(s: &Prim) -> Prim {
    Prim::new(-s.rho, s.v, -s.p)
}

impl WaveInput {
    /// Map `x -> -x`: velocities and the slopes of even quantities change
    /// sign, as does the geometric ratio.
    pub fn mirror(&self) -> Self {
        Self {
            u: self.u.mirror(),
            slope: mirror_slope(&self.slope),
            star: self.star.mirror(),
            ratio: -self.ratio,
        }
    }

    fn degenerate(&self) -> bool {
        (self.star.p - self.u.p).abs() < DEGENERATE_TOL * (self.star.p + self.u.p)
    }
}

/// Time derivative of a smooth state: `u_t = -A(u) u_x + h`, primitive form.
pub fn smooth_rate(u: &Prim, slope: &Prim, ratio: f64, eos: &Eos) -> Prim {
    let rc2 = eos.gamma() * u.p;
    Prim::new(
        -u.v * slope.rho - u.rho * slope.v - ratio * u.rho * u.v,
        -u.v * slope.v - slope.p / u.rho,
        -u.v * slope.p - rc2 * slope.v - ratio * rc2 * u.v,
    )
}

/// Fan source integral `Phi` as a function of the local sound speed ratio.
/// `sign` is `sgn(J)` and `eta` the Riemann invariant carried through the fan
/// (`phi_R` for a 3-wave, `psi_L` for a 1-wave).
pub fn fan_integral(theta: f64, c_local: f64, c_far: f64, eta: f64, sign: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let m2 = eos.mu2();
    if (g - 3.0).abs() < 1e-12 {
        c_far - c_local - sign * eta * theta.ln()
    } else if (g - 5.0 / 3.0).abs() < 1e-12 {
        -2.0 * (3.0 * c_local * theta.ln() - sign * eta * (1.0 - theta))
    } else {
        let e1 = (1.0 - 4.0 * m2) / (2.0 * m2);
        let e2 = (1.0 - 2.0 * m2) / (2.0 * m2);
        (m2 - 1.0) * c_local / (m2 * (4.0 * m2 - 1.0)) * (1.0 - theta.powf(e1))
            - sign * eta / (2.0 * m2 - 1.0) * (1.0 - theta.powf(e2))
    }
}

struct FanConstants {
    m2: f64,
    k: f64,
    c: f64,
    ts: f64,
    phi_r: f64,
    phi_prime: f64,
}

fn fan_constants(w: &WaveInput, eos: &Eos) -> FanConstants {
    let m2 = eos.mu2();
    let c = sound_speed_unchecked(w.u.rho, w.u.p, eos);
    let cs = CharacteristicSlopes::new(&w.u, &w.slope, eos);
    FanConstants {
        m2,
        k: 1.0 / (2.0 * m2),
        c,
        ts: cs.ts_prime,
        phi_r: w.u.v - 2.0 * c / (eos.gamma() - 1.0),
        phi_prime: cs.phi_prime,
    }
}

/// Coefficients for a 3-wave in the frame of `w`.
pub(crate) fn right_wave(w: &WaveInput, eos: &Eos, opts: &GrpOptions) -> GrpCoefficients {
    let f = fan_constants(w, eos);
    let cstar = sound_speed_unchecked(w.star.rho, w.star.p, eos);
    let rc = w.star.rho * cstar;
    if w.degenerate() {
        // acoustic limit of both branches
        let d = f.ts + f.c * f.phi_prime + w.ratio * f.c * w.u.v;
        return GrpCoefficients { a: 1.0, b: -1.0 / rc, d, branch: Branch::Acoustic, theta: 1.0, sigma: None };
    }
    if w.star.p < w.u.p {
        let theta = cstar / f.c;
        let tk = theta.powf(f.k);
        let t2 = theta.powf(2.0 * f.k + 1.0);
        let mut d = ((1.0 + f.m2) * tk + f.m2 * t2) / (1.0 + 2.0 * f.m2) * f.ts + f.c * f.phi_prime * tk;
        if w.ratio != 0.0 {
            let big_phi = fan_integral(theta, cstar, f.c, f.phi_r, 1.0, eos);
            let src = w.ratio * (f.c * w.u.v * tk + cstar * (big_phi + w.star.v));
            d += match opts.rarefaction_source {
                SourceConvention::Derived => 0.5 * src,
                SourceConvention::Literal => src,
            };
        }
        GrpCoefficients { a: 1.0, b: -1.0 / rc, d, branch: Branch::Rarefaction, theta, sigma: None }
    } else {
        let (u, s) = (&w.u, &w.slope);
        let m2 = f.m2;
        let sigma = crate::riemann::right_shock_speed(u, w.star.p, eos);
        let root = ((1.0 - m2) / (u.rho * (w.star.p + m2 * u.p))).sqrt();
        let den = w.star.p + m2 * u.p;
        let h1 = 0.5 * root * (w.star.p + (1.0 + 2.0 * m2) * u.p) / den;
        let h2 = -0.5 * root * ((2.0 + m2) * w.star.p + m2 * u.p) / den;
        let h3 = -0.5 * (w.star.p - u.p) / u.rho * root;
        let sv = sigma - w.star.v;
        let su = sigma - u.v;
        let c2 = f.c * f.c;
        let a = 1.0 + w.star.rho * sv * h1;
        let b = -sv / (w.star.rho * cstar * cstar) - h1;
        let l_rho = su * h3;
        let l_v = su - (u.rho * c2 * h2 + u.rho * h3);
        let l_p = -1.0 / u.rho + su * h2;
        let j = u.rho * u.v * (c2 * h2 + h3) - sv * w.star.v;
        let d = l_rho * s.rho + l_p * s.p + l_v * s.v - w.ratio * j;
        GrpCoefficients { a, b, d, branch: Branch::Shock, theta: 1.0, sigma: Some(sigma) }
    }
}

/// Coefficients for the wave on side `J` of an evaluation point, returned in
/// the physical frame. `star` is the state behind the wave.
pub(crate) fn wave_coefficients(
    side: crate::riemann::Side,
    u: &Prim,
    slope: &Prim,
    star: &Prim,
    ratio: f64,
    eos: &Eos,
    opts: &GrpOptions,
) -> GrpCoefficients {
    let w = WaveInput { u: *u, slope: *slope, star: *star, ratio };
    match side {
        crate::riemann::Side::Right => right_wave(&w, eos, opts),
        crate::riemann::Side::Left => {
            let mut c = right_wave(&w.mirror(), eos, opts);
            if c.branch == Branch::Rarefaction && opts.rarefaction_source == SourceConvention::Literal && ratio != 0.0 {
                // the literal 1-wave source is not the mirror image of the
                // 3-wave one; substitute it literally
                c.d -= w.mirror().ratio * literal_right_source(&w.mirror(), eos);
                c.d += -literal_left_source(&w, eos);
            }
            c.b = -c.b;
            c.d = -c.d;
            if let Some(s) = c.sigma.as_mut() {
                *s = -*s;
            }
            c
        }
    }
}

fn literal_right_source(w: &WaveInput, eos: &Eos) -> f64 {
    let f = fan_constants(w, eos);
    let cstar = sound_speed_unchecked(w.star.rho, w.star.p, eos);
    let theta = cstar / f.c;
    let big_phi = fan_integral(theta, cstar, f.c, f.phi_r, 1.0, eos);
    f.c * w.u.v * theta.powf(f.k) + cstar * (big_phi + w.star.v)
}

/// `d` source part of the literal 1-rarefaction coefficient, physical frame.
fn literal_left_source(w: &WaveInput, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let c = sound_speed_unchecked(w.u.rho, w.u.p, eos);
    let cstar = sound_speed_unchecked(w.star.rho, w.star.p, eos);
    let theta = cstar / c;
    let k = 1.0 / (2.0 * eos.mu2());
    let psi_l = w.u.v + 2.0 * c / (g - 1.0);
    let big_phi = fan_integral(theta, cstar, c, psi_l, -1.0, eos);
    w.ratio * (-c * w.u.v * theta.powf(k) + cstar * (big_phi - w.star.v))
}

/// Spatial density derivative on the star side of a 3-wave, given the
/// material derivatives `(Dv, Dp)` there (wave frame).
pub(crate) fn star_density_slope(w: &WaveInput, coeff: &GrpCoefficients, dv: f64, dp: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let cstar2 = g * w.star.p / w.star.rho;
    match coeff.sigma {
        Some(sigma) if coeff.branch == Branch::Shock => {
            let m2 = eos.mu2();
            let (u, s) = (&w.u, &w.slope);
            let rate = smooth_rate(u, s, w.ratio, eos);
            let dp_plus = rate.p + sigma * s.p;
            let drho_plus = rate.rho + sigma * s.rho;
            let px_star = -w.star.rho * dv;
            let dp_minus = dp + (sigma - w.star.v) * px_star;
            let (pm, pp) = (w.star.p, u.p);
            let den = pp + m2 * pm;
            let ratio = (pm + m2 * pp) / den;
            let d_pm = u.rho * pp * (1.0 - m2 * m2) / (den * den);
            let d_pp = u.rho * pm * (m2 * m2 - 1.0) / (den * den);
            let drho_minus = d_pm * dp_minus + d_pp * dp_plus + ratio * drho_plus;
            (drho_minus - dp / cstar2) / (sigma - w.star.v)
        }
        _ => {
            // entropy is carried by particle paths: S_x scales with rho*/rho
            let ts = CharacteristicSlopes::new(&w.u, &w.slope, eos).ts_prime;
            let t_ratio = (w.star.p / w.star.rho) / (w.u.p / w.u.rho);
            let ts_star = ts * t_ratio * w.star.rho / w.u.rho;
            let px_star = -w.star.rho * dv;
            (px_star - (g - 1.0) * w.star.rho * ts_star) / cstar2
        }
    }
}

/// Sonic state and time derivatives at `x = 0` when that point lies inside
/// the centred 3-rarefaction issuing from `u` (wave frame).
pub(crate) fn fan_rate(u: &Prim, slope: &Prim, ratio: f64, eos: &Eos) -> (Prim, Prim) {
    let g = eos.gamma();
    let w = WaveInput { u: *u, slope: *slope, star: *u, ratio };
    let f = fan_constants(&w, eos);
    let c0 = -f.m2 * f.phi_r;
    let theta = c0 / f.c;
    let tk = theta.powf(f.k);
    let t2 = theta.powf(2.0 * f.k + 1.0);
    let state = Prim::new(u.rho * theta.powf(2.0 / (g - 1.0)), -c0, u.p * theta.powf(2.0 * g / (g - 1.0)));

    let mut w_phi = tk * (2.0 * f.c * f.phi_prime + f.ts + ratio * f.c * u.v) + f.ts * (tk - t2) / (1.0 + 2.0 * f.m2);
    if ratio != 0.0 {
        w_phi += ratio * c0 * fan_integral(theta, c0, f.c, f.phi_r, 1.0, eos);
    }
    // along the fan rays v + c = 0, so -A c v = A c^2
    let r_psi = f.ts * t2 + ratio * c0 * c0;
    let beta = 2.0 / (g - 1.0);
    let q = 4.0 / (g + 1.0);
    let w_c = (r_psi - (1.0 + q) * w_phi) / (2.0 * beta + q * (beta + 1.0));
    let w_v = w_phi + beta * w_c;
    let t_r = u.p / u.rho;
    let w_s = f.c * (f.ts / t_r) * theta.powf(2.0 * f.k);
    let w_p = state.p * (2.0 * g / ((g - 1.0) * c0) * w_c - w_s);
    let w_rho = state.rho * (w_p / state.p - 2.0 * w_c / c0);
    (state, Prim::new(w_rho, w_v, w_p))
}

/// Sonic-boundary pressure rate in its literal form
/// `p_t = rho* v* [v_t - theta^(2 gamma/(gamma-1)) T S' - (a'/a) v*^2]`.
pub fn sonic_pressure_rate_literal(star: &Prim, dv_dt: f64, theta: f64, ts_prime: f64, ratio: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    star.rho * star.v * (dv_dt - theta.powf(2.0 * g / (g - 1.0)) * ts_prime - ratio * star.v * star.v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn air() -> Eos {
        Eos::new(1.4).unwrap()
    }

    #[test]
    fn fan_integral_vanishes_at_unit_ratio() {
        for g in [1.4, 5.0 / 3.0, 3.0, 1.2] {
            let eos = Eos::new(g).unwrap();
            assert!(fan_integral(1.0, 1.0, 1.0, -3.0, 1.0, &eos).abs() < 1e-14);
            let near = fan_integral(1.0 - 1e-6, 1.0, 1.0, -3.0, 1.0, &eos).abs();
            assert!(near < 1e-4, "gamma = {g}: {near}");
        }
    }

    #[test]
    fn fan_integral_branches_are_limits_of_the_general_formula() {
        // evaluate the general branch slightly off the special gammas
        for (g, eps) in [(5.0 / 3.0, 1e-6), (3.0, 1e-6)] {
            let exact = fan_integral(0.8, 0.88, 1.1, -2.0, 1.0, &Eos::new(g).unwrap());
            let near = fan_integral(0.8, 0.88, 1.1, -2.0, 1.0, &Eos::new(g + eps).unwrap());
            assert!((exact - near).abs() < 1e-4, "gamma = {g}: {exact} vs {near}");
        }
    }

    #[test]
    fn zero_slopes_no_source_gives_zero_d() {
        let eos = air();
        let u = Prim::new(1.0, 0.2, 1.0);
        let z = Prim::default();
        let opts = GrpOptions::default();
        for pstar in [0.5, 1.0, 2.0] {
            let wp = crate::riemann::wave_curve_from_state(&u, 3, pstar, &eos).unwrap();
            let star = Prim::new(wp.rho, wp.v, pstar);
            let w = WaveInput { u, slope: z, star, ratio: 0.0 };
            assert_eq!(right_wave(&w, &eos, &opts).d, 0.0);
        }
    }

    #[test]
    fn rarefaction_coefficients_a_b() {
        let eos = air();
        let u = Prim::new(1.0, 0.2, 1.0);
        let wp = crate::riemann::wave_curve_from_state(&u, 3, 0.4, &eos).unwrap();
        let star = Prim::new(wp.rho, wp.v, 0.4);
        let w = WaveInput { u, slope: Prim::new(0.1, 0.2, 0.3), star, ratio: 0.7 };
        let c = right_wave(&w, &eos, &GrpOptions::default());
        assert_eq!(c.branch, Branch::Rarefaction);
        assert_eq!(c.a, 1.0);
        let cs = (1.4 * star.p / star.rho).sqrt();
        assert!((c.b + 1.0 / (star.rho * cs)).abs() < 1e-15);
    }

    #[test]
    fn branches_meet_at_the_degenerate_point() {
        let eos = air();
        let u = Prim::new(1.2, -0.3, 0.9);
        let slope = Prim::new(0.4, -0.7, 1.3);
        let opts = GrpOptions::default();
        let coeff = |p: f64| {
            let wp = crate::riemann::wave_curve_from_state(&u, 3, p, &eos).unwrap();
            let w = WaveInput { u, slope, star: Prim::new(wp.rho, wp.v, p), ratio: 0.8 };
            let c = right_wave(&w, &eos, &opts);
            (c.d / c.a, c.b / c.a)
        };
        let eps = 1e-7;
        let (dl, bl) = coeff(u.p * (1.0 - eps));
        let (ds, bs) = coeff(u.p * (1.0 + eps));
        assert!((dl - ds).abs() < 1e-5, "{dl} vs {ds}");
        assert!((bl - bs).abs() < 1e-5, "{bl} vs {bs}");
    }

    #[test]
    fn literal_sonic_rate_trivial_case() {
        let eos = air();
        let star = Prim::new(0.8, -0.5, 0.6);
        let r = sonic_pressure_rate_literal(&star, 0.3, 0.9, 0.0, 0.0, &eos);
        assert!((r - 0.8 * -0.5 * 0.3).abs() < 1e-15);
    }
}
