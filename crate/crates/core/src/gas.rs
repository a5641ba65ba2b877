//! Ideal-gas state algebra for the 1D and 2D Euler equations.
//!
//! Primitive states are `(rho, v, p)` (2D adds `vy`), conserved states are
//! `(rho, rho v, rho E)` with `E = v^2/2 + p/((gamma-1) rho)`. Vacuum and
//! negative internal energy are reported as [`Error::InvalidState`] and never
//! clamped.

use crate::error::{Error, Result};
use crate::geometry::AreaModel;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// Polytropic ideal gas `e = p / ((gamma - 1) rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eos {
    gamma: f64,
}

impl Eos {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 1.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidEos(gamma))
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `mu^2 = (gamma - 1) / (gamma + 1)`.
    pub fn mu2(&self) -> f64 {
        (self.gamma - 1.0) / (self.gamma + 1.0)
    }
}

/// Primitive state `(rho, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prim {
    pub rho: f64,
    pub v: f64,
    pub p: f64,
}

/// Conserved state `(rho, rho v, rho E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cons {
    pub rho: f64,
    pub mom: f64,
    pub ene: f64,
}

/// Primitive 2D state `(rho, vx, vy, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prim2 {
    pub rho: f64,
    pub vx: f64,
    pub vy: f64,
    pub p: f64,
}

/// Conserved 2D state `(rho, rho vx, rho vy, rho E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cons2 {
    pub rho: f64,
    pub momx: f64,
    pub momy: f64,
    pub ene: f64,
}

impl Prim {
    pub const fn new(rho: f64, v: f64, p: f64) -> Self {
        Self { rho, v, p }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho > 0.0 && self.p > 0.0 && self.v.is_finite() && self.rho.is_finite() && self.p.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "rho = {}, v = {}, p = {}",
                self.rho, self.v, self.p
            )))
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Swap the direction of the x axis.
    pub fn mirror(&self) -> Self {
        Self { rho: self.rho, v: -self.v, p: self.p }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.rho, self.v, self.p]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self { rho: a[0], v: a[1], p: a[2] }
    }
}

impl Add for Prim {
    type Output = Prim;
    fn add(self, o: Prim) -> Prim {
        Prim::new(self.rho + o.rho, self.v + o.v, self.p + o.p)
    }
}

impl Sub for Prim {
    type Output = Prim;
    fn sub(self, o: Prim) -> Prim {
        Prim::new(self.rho - o.rho, self.v - o.v, self.p - o.p)
    }
}

impl Mul<f64> for Prim {
    type Output = Prim;
    fn mul(self, a: f64) -> Prim {
        Prim::new(self.rho * a, self.v * a, self.p * a)
    }
}

impl Cons {
    pub const fn new(rho: f64, mom: f64, ene: f64) -> Self {
        Self { rho, mom, ene }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.rho, self.mom, self.ene]
    }
}

impl Add for Cons {
    type Output = Cons;
    fn add(self, o: Cons) -> Cons {
        Cons::new(self.rho + o.rho, self.mom + o.mom, self.ene + o.ene)
    }
}

impl Sub for Cons {
    type Output = Cons;
    fn sub(self, o: Cons) -> Cons {
        Cons::new(self.rho - o.rho, self.mom - o.mom, self.ene - o.ene)
    }
}

impl Mul<f64> for Cons {
    type Output = Cons;
    fn mul(self, a: f64) -> Cons {
        Cons::new(self.rho * a, self.mom * a, self.ene * a)
    }
}

macro_rules! vector_ops {
    ($t:ident, $($f:ident),+) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                $t { $($f: self.$f + o.$f),+ }
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                $t { $($f: self.$f - o.$f),+ }
            }
        }

        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, a: f64) -> $t {
                $t { $($f: self.$f * a),+ }
            }
        }
    };
}

vector_ops!(Prim2, rho, vx, vy, p);
vector_ops!(Cons2, rho, momx, momy, ene);

impl Prim2 {
    pub const fn new(rho: f64, vx: f64, vy: f64, p: f64) -> Self {
        Self { rho, vx, vy, p }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rho > 0.0
            && self.p > 0.0
            && self.rho.is_finite()
            && self.p.is_finite()
            && self.vx.is_finite()
            && self.vy.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "rho = {}, vx = {}, vy = {}, p = {}",
                self.rho, self.vx, self.vy, self.p
            )))
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.vx, self.vy, self.p]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { rho: a[0], vx: a[1], vy: a[2], p: a[3] }
    }

    /// Exchange the roles of x and y.
    pub fn transpose(&self) -> Self {
        Self { rho: self.rho, vx: self.vy, vy: self.vx, p: self.p }
    }
}

impl Cons2 {
    pub const fn new(rho: f64, momx: f64, momy: f64, ene: f64) -> Self {
        Self { rho, momx, momy, ene }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.momx, self.momy, self.ene]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { rho: a[0], momx: a[1], momy: a[2], ene: a[3] }
    }
}

pub fn sound_speed(s: &Prim, eos: &Eos) -> Result<f64> {
    s.validate()?;
    Ok((eos.gamma * s.p / s.rho).sqrt())
}

/// Sound speed without validation, for hot loops where the state is known good.
#[inline]
pub(crate) fn sound_speed_unchecked(rho: f64, p: f64, eos: &Eos) -> f64 {
    (eos.gamma * p / rho).sqrt()
}

pub fn prim_to_cons(s: &Prim, eos: &Eos) -> Result<Cons> {
    s.validate()?;
    Ok(Cons {
        rho: s.rho,
        mom: s.rho * s.v,
        ene: s.p / (eos.gamma - 1.0) + 0.5 * s.rho * s.v * s.v,
    })
}

pub fn cons_to_prim(u: &Cons, eos: &Eos) -> Result<Prim> {
    if !(u.rho > 0.0) || !u.rho.is_finite() {
        return Err(Error::InvalidState(format!("non-positive density {}", u.rho)));
    }
    let v = u.mom / u.rho;
    let internal = u.ene - 0.5 * u.mom * v;
    if !(internal > 0.0) || !internal.is_finite() {
        return Err(Error::InvalidState(format!(
            "non-positive internal energy {} (rho = {}, mom = {}, ene = {})",
            internal, u.rho, u.mom, u.ene
        )));
    }
    Ok(Prim { rho: u.rho, v, p: (eos.gamma - 1.0) * internal })
}

pub fn prim2_to_cons2(s: &Prim2, eos: &Eos) -> Result<Cons2> {
    s.validate()?;
    Ok(Cons2 {
        rho: s.rho,
        momx: s.rho * s.vx,
        momy: s.rho * s.vy,
        ene: s.p / (eos.gamma - 1.0) + 0.5 * s.rho * (s.vx * s.vx + s.vy * s.vy),
    })
}

pub fn cons2_to_prim2(u: &Cons2, eos: &Eos) -> Result<Prim2> {
    if !(u.rho > 0.0) || !u.rho.is_finite() {
        return Err(Error::InvalidState(format!("non-positive density {}", u.rho)));
    }
    let vx = u.momx / u.rho;
    let vy = u.momy / u.rho;
    let internal = u.ene - 0.5 * (u.momx * vx + u.momy * vy);
    if !(internal > 0.0) || !internal.is_finite() {
        return Err(Error::InvalidState(format!(
            "non-positive internal energy {} (rho = {})",
            internal, u.rho
        )));
    }
    Ok(Prim2 { rho: u.rho, vx, vy, p: (eos.gamma - 1.0) * internal })
}

/// Physical flux `f(u) = (rho v, rho v^2 + p, v (rho E + p))`.
pub fn flux(u: &Cons, eos: &Eos) -> Result<Cons> {
    let s = cons_to_prim(u, eos)?;
    Ok(flux_prim(&s, eos))
}

/// Flux evaluated from a primitive state; the state is assumed valid.
pub fn flux_prim(s: &Prim, eos: &Eos) -> Cons {
    let ene = s.p / (eos.gamma - 1.0) + 0.5 * s.rho * s.v * s.v;
    Cons {
        rho: s.rho * s.v,
        mom: s.rho * s.v * s.v + s.p,
        ene: s.v * (ene + s.p),
    }
}

/// x-direction flux of the 2D system.
pub fn flux_x(s: &Prim2, eos: &Eos) -> Cons2 {
    let ene = s.p / (eos.gamma - 1.0) + 0.5 * s.rho * (s.vx * s.vx + s.vy * s.vy);
    Cons2 {
        rho: s.rho * s.vx,
        momx: s.rho * s.vx * s.vx + s.p,
        momy: s.rho * s.vx * s.vy,
        ene: s.vx * (ene + s.p),
    }
}

/// y-direction flux of the 2D system.
pub fn flux_y(s: &Prim2, eos: &Eos) -> Cons2 {
    let ene = s.p / (eos.gamma - 1.0) + 0.5 * s.rho * (s.vx * s.vx + s.vy * s.vy);
    Cons2 {
        rho: s.rho * s.vy,
        momx: s.rho * s.vx * s.vy,
        momy: s.rho * s.vy * s.vy + s.p,
        ene: s.vy * (ene + s.p),
    }
}

pub fn flux2(u: &Cons2, eos: &Eos) -> Result<(Cons2, Cons2)> {
    let s = cons2_to_prim2(u, eos)?;
    Ok((flux_x(&s, eos), flux_y(&s, eos)))
}

/// Characteristic speeds `(v - c, v, v + c)`.
pub fn eigenvalues(s: &Prim, eos: &Eos) -> Result<(f64, f64, f64)> {
    let c = sound_speed(s, eos)?;
    Ok((s.v - c, s.v, s.v + c))
}

/// Riemann invariant `psi = v + 2c/(gamma-1)`, constant across 1-rarefactions.
pub fn psi(s: &Prim, eos: &Eos) -> f64 {
    s.v + 2.0 * sound_speed_unchecked(s.rho, s.p, eos) / (eos.gamma - 1.0)
}

/// Riemann invariant `phi = v - 2c/(gamma-1)`, constant across 3-rarefactions.
pub fn phi(s: &Prim, eos: &Eos) -> f64 {
    s.v - 2.0 * sound_speed_unchecked(s.rho, s.p, eos) / (eos.gamma - 1.0)
}

/// Geometric source `h = -(a'/a) (rho v, rho v^2, v (rho E + p))` of quasi-1D
/// duct flow (and of radially symmetric flow with `a = x^d`).
pub fn nozzle_source(s: &Prim, x: f64, area: &AreaModel, eos: &Eos) -> Result<Cons> {
    s.validate()?;
    let ratio = area.ratio(x)?;
    Ok(source_terms(s, ratio, eos))
}

pub fn source_terms(s: &Prim, ratio: f64, eos: &Eos) -> Cons {
    if ratio == 0.0 {
        return Cons::default();
    }
    let ene = s.p / (eos.gamma - 1.0) + 0.5 * s.rho * s.v * s.v;
    Cons {
        rho: -ratio * s.rho * s.v,
        mom: -ratio * s.rho * s.v * s.v,
        ene: -ratio * s.v * (ene + s.p),
    }
}

/// Spatial derivatives of `(rho, v, p)` at a one-sided limit together with
/// the characteristic combinations used by the GRP coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSlopes {
    pub drho: f64,
    pub dv: f64,
    pub dp: f64,
    /// `T S'` with `T dS = dp/((gamma-1) rho) - c^2 drho/((gamma-1) rho)`.
    pub ts_prime: f64,
    pub psi_prime: f64,
    pub phi_prime: f64,
}

impl CharacteristicSlopes {
    pub fn new(s: &Prim, slope: &Prim, eos: &Eos) -> Self {
        let g = eos.gamma;
        let c = sound_speed_unchecked(s.rho, s.p, eos);
        let ts_prime = (slope.p - c * c * slope.rho) / ((g - 1.0) * s.rho);
        // 2c'/(gamma-1) = (gamma p' - c^2 rho') / ((gamma-1) rho c)
        let dc_term = (g * slope.p - c * c * slope.rho) / ((g - 1.0) * s.rho * c);
        Self {
            drho: slope.rho,
            dv: slope.v,
            dp: slope.p,
            ts_prime,
            psi_prime: slope.v + dc_term,
            phi_prime: slope.v - dc_term,
        }
    }
}
