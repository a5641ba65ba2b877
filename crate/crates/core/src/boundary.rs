//! User-facing boundary operators and their instantaneous data.

use crate::exact::{noh_exact, SimpleWave};
use crate::gas::{Eos, Prim};
use crate::grp::BoundaryRate;
use crate::riemann::{BoundaryDatum, MachConvention};
use serde::{Deserialize, Serialize};

/// Scalar boundary signal `g(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Signal {
    Constant(f64),
    /// Piecewise constant with a single jump at `at`.
    Step { before: f64, after: f64, at: f64 },
}

impl Signal {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Signal::Constant(g) => g,
            Signal::Step { before, after, at } => if t < at { before } else { after },
        }
    }

    pub fn rate(&self, _t: f64) -> f64 {
        0.0
    }

    /// Whether the signal jumps in `(t0, t1]`.
    pub fn jumps_in(&self, t0: f64, t1: f64) -> bool {
        match *self {
            Signal::Constant(_) => false,
            Signal::Step { at, .. } => t0 < at && at <= t1,
        }
    }

    /// Time of the next jump after `t`, if any.
    pub fn next_jump(&self, t: f64) -> Option<f64> {
        match *self {
            Signal::Step { at, .. } if at > t => Some(at),
            _ => None,
        }
    }
}

/// Time-dependent exact data for Dirichlet boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solution", rename_all = "kebab-case")]
pub enum StateSource {
    /// Noh inflow, sampled at the end of the step with no rate.
    Noh { dim: u32, p0: f64 },
    SimpleWave(SimpleWave),
}

impl StateSource {
    /// Datum state and its rate for the step `[t, t + dt]` at boundary `x`.
    pub fn sample(&self, x: f64, t: f64, dt: f64, eos: &Eos) -> (Prim, Prim) {
        match *self {
            StateSource::Noh { dim, p0 } => (noh_exact(x, t + dt, dim, eos, p0), Prim::new(0.0, 0.0, 0.0)),
            StateSource::SimpleWave(w) => (w.state(x, t, eos), w.rate(x, t, eos)),
        }
    }
}

/// Boundary operator attached to one end of a 1D grid or one face set of a
/// 2D grid. Velocities are signed along the outward coordinate axis, not
/// along the normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundarySpec {
    Wall,
    Velocity {
        v: Signal,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rho: Option<f64>,
    },
    Mach {
        m: Signal,
        #[serde(default)]
        convention: MachConvention,
    },
    Pressure {
        p: Signal,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rho: Option<f64>,
    },
    /// Supersonic inflow of a fixed state.
    Inflow { state: Prim },
    Dirichlet { source: StateSource },
    Free,
}

impl BoundarySpec {
    /// Datum and rate for the step `[t, t + dt]` at boundary position `x`.
    pub fn datum(&self, x: f64, t: f64, dt: f64, eos: &Eos) -> (BoundaryDatum, BoundaryRate) {
        match *self {
            BoundarySpec::Wall => (BoundaryDatum::Velocity { v: 0.0, rho: None }, BoundaryRate::zero()),
            BoundarySpec::Velocity { v, rho } => (BoundaryDatum::Velocity { v: v.value(t), rho }, BoundaryRate::of(v.rate(t))),
            BoundarySpec::Mach { m, convention } => (BoundaryDatum::Mach { m: m.value(t), convention }, BoundaryRate::of(m.rate(t))),
            BoundarySpec::Pressure { p, rho } => (BoundaryDatum::Pressure { p: p.value(t), rho }, BoundaryRate::of(p.rate(t))),
            BoundarySpec::Inflow { state } => (BoundaryDatum::State(state), BoundaryRate::zero()),
            BoundarySpec::Dirichlet { source } => {
                let (s, r) = source.sample(x, t, dt, eos);
                (BoundaryDatum::State(s), BoundaryRate { state: r, ..BoundaryRate::zero() })
            }
            BoundarySpec::Free => (BoundaryDatum::Free, BoundaryRate::zero()),
        }
    }

    /// Whether the datum jumps inside `(t0, t1]`, which forces the boundary
    /// Riemann problem to be re-initialised.
    pub fn jumps_in(&self, t0: f64, t1: f64) -> bool {
        match self {
            BoundarySpec::Velocity { v: s, .. } | BoundarySpec::Mach { m: s, .. } | BoundarySpec::Pressure { p: s, .. } => {
                s.jumps_in(t0, t1)
            }
            _ => false,
        }
    }

    pub fn next_jump(&self, t: f64) -> Option<f64> {
        match self {
            BoundarySpec::Velocity { v: s, .. } | BoundarySpec::Mach { m: s, .. } | BoundarySpec::Pressure { p: s, .. } => {
                s.next_jump(t)
            }
            _ => None,
        }
    }

    pub fn is_wall(&self) -> bool {
        matches!(self, BoundarySpec::Wall)
    }
}
