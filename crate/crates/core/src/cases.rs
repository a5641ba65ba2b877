//! Built-in benchmark definitions and their case-file form.
//!
//! Case files are TOML. A file holds the run parameters at the top level and
//! a `[problem]` table whose `kind` selects `burgers`, `euler1d` or
//! `euler2d`; boundary operators live in `[problem.left]` and
//! `[problem.right]`.

use crate::boundary::{BoundarySpec, Signal, StateSource};
use crate::error::{Error, Result};
use crate::exact::{NozzleFlow, SimpleWave};
use crate::fvm2d::Setup2D;
use crate::gas::{Eos, Prim};
use crate::geometry::AreaModel;
use serde::{Deserialize, Serialize};

/// Area ratios of the nozzle benchmark.
pub const NOZZLE_AREA: AreaModel = AreaModel::Nozzle { a_in: 4.864317646, a_ex: 4.234567901 };
/// Exit pressure of the transonic nozzle flow with unit stagnation state.
pub const NOZZLE_P_EXIT: f64 = 0.0272237;
/// Exit pressure that holds a normal shock inside the nozzle.
pub const NOZZLE_P_SHOCK: f64 = 0.4;
/// Pressure floor of the cold Noh gas.
pub const NOH_P0: f64 = 1e-6;

/// Smooth wave used for convergence studies.
pub const SMOOTH_WAVE: SimpleWave = SimpleWave { v0: 0.5, c0: 1.0, amp: 0.1 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub t_end: f64,
    /// Number of equal output intervals; 1 writes the final state only.
    #[serde(default = "one")]
    pub frames: usize,
    pub cfl: f64,
    /// Acceptance threshold on the final L1 density error against the
    /// reference, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub problem: Problem,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Problem {
    Burgers(BurgersCase),
    Euler1d(Euler1dCase),
    Euler2d(Euler2dCase),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurgersCase {
    pub domain: [f64; 2],
    pub cells: usize,
    /// Nodes `(x, v)` of the piecewise-linear initial profile, held constant
    /// outside the first and last node.
    pub initial: Vec<[f64; 2]>,
    pub left: Signal,
    pub right: Signal,
    #[serde(default)]
    pub reference: BurgersReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BurgersReference {
    #[default]
    None,
    /// The exact solution of the initial-boundary value problem with data
    /// `v(x, 0) = -x` on `[0, 1]`, `-1` beyond, left datum stepping from 0
    /// to 2 at `t = 1` and right datum `-1`.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Euler1dCase {
    pub gamma: f64,
    pub domain: [f64; 2],
    pub cells: usize,
    #[serde(default)]
    pub area: AreaModel,
    pub initial: Initial1D,
    pub left: BoundarySpec,
    pub right: BoundarySpec,
    #[serde(default)]
    pub reference: Reference1D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Euler2dCase {
    pub setup: Setup2D,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Initial1D {
    /// `states[k]` holds between `breaks[k - 1]` and `breaks[k]`.
    Piecewise { breaks: Vec<f64>, states: Vec<Prim> },
    SimpleWave(SimpleWave),
}

impl Initial1D {
    pub fn eval(&self, x: f64, eos: &Eos) -> Prim {
        match self {
            Initial1D::Piecewise { breaks, states } => states[breaks.iter().take_while(|&&b| x >= b).count()],
            Initial1D::SimpleWave(w) => w.state(x, 0.0, eos),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reference1D {
    #[default]
    None,
    /// Steady nozzle flow.
    Nozzle(NozzleFlow),
    Noh { dim: u32, p0: f64 },
    SimpleWave(SimpleWave),
    /// Same case on `factor` times as many cells, block-averaged.
    SelfConverged { factor: usize },
}

impl CaseConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Usage(format!("case `{}`: {m}", self.name)));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {}", self.t_end));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return bad(format!("cfl = {} outside (0, 1)", self.cfl));
        }
        if self.frames == 0 {
            return bad("frames must be at least 1".into());
        }
        match &self.problem {
            Problem::Burgers(b) => {
                if b.cells == 0 || !(b.domain[1] > b.domain[0]) {
                    return bad("empty grid".into());
                }
                if b.initial.is_empty() || b.initial.windows(2).any(|w| !(w[1][0] > w[0][0])) {
                    return bad("initial nodes must be non-empty and increasing".into());
                }
            }
            Problem::Euler1d(e) => {
                let eos = Eos::new(e.gamma)?;
                if e.cells == 0 || !(e.domain[1] > e.domain[0]) {
                    return bad("empty grid".into());
                }
                if let Initial1D::Piecewise { breaks, states } = &e.initial {
                    if states.len() != breaks.len() + 1 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
                        return bad("piecewise data needs increasing breaks and one more state than breaks".into());
                    }
                }
                let dx = (e.domain[1] - e.domain[0]) / e.cells as f64;
                for i in 0..e.cells {
                    e.initial.eval(e.domain[0] + (i as f64 + 0.5) * dx, &eos).validate()?;
                }
                if let Reference1D::SelfConverged { factor } = e.reference {
                    if factor < 2 {
                        return bad(format!("self-convergence factor {factor}"));
                    }
                }
            }
            Problem::Euler2d(e) => {
                if e.nx == 0 || e.ny == 0 {
                    return bad("empty grid".into());
                }
            }
        }
        Ok(())
    }

    /// Ratio of specific heats, if the case is a gas-dynamics problem.
    pub fn gamma(&self) -> Option<f64> {
        match &self.problem {
            Problem::Burgers(_) => None,
            Problem::Euler1d(e) => Some(e.gamma),
            Problem::Euler2d(_) => Some(1.4),
        }
    }

    /// Exit pressure of the nozzle cases.
    pub fn p_ex(&self) -> Option<f64> {
        match &self.problem {
            Problem::Euler1d(Euler1dCase { area: AreaModel::Nozzle { .. }, initial: Initial1D::Piecewise { states, .. }, .. }) => {
                states.last().map(|s| s.p)
            }
            _ => None,
        }
    }

    /// Output times, ending at `t_end`.
    pub fn output_times(&self) -> Vec<f64> {
        (1..=self.frames).map(|k| if k == self.frames { self.t_end } else { self.t_end * k as f64 / self.frames as f64 }).collect()
    }

    /// Replace the resolution. 2D cases keep their aspect ratio and take
    /// `cells` as the number of cells along y.
    pub fn with_cells(mut self, cells: usize) -> Self {
        match &mut self.problem {
            Problem::Burgers(b) => b.cells = cells,
            Problem::Euler1d(e) => e.cells = cells,
            Problem::Euler2d(e) => {
                e.nx = (e.nx * cells).div_ceil(e.ny);
                e.ny = cells;
            }
        }
        self
    }

    pub fn cells(&self) -> usize {
        match &self.problem {
            Problem::Burgers(b) => b.cells,
            Problem::Euler1d(e) => e.cells,
            Problem::Euler2d(e) => e.ny,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: CaseConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

pub const BUILTIN_NAMES: [&str; 11] = [
    "burgers-ibvp",
    "shock-wall",
    "woodward-colella",
    "nozzle-smooth",
    "nozzle-shock",
    "spherical-shock",
    "noh",
    "spherical-explosion",
    "double-mach",
    "forward-step",
    "smooth-wave",
];

fn euler1d(name: &str, description: &str, t_end: f64, cfl: f64, problem: Euler1dCase) -> CaseConfig {
    CaseConfig { name: name.into(), description: description.into(), t_end, frames: 1, cfl, tolerance: None, problem: Problem::Euler1d(problem) }
}

fn nozzle(name: &str, p_exit: f64, shock: bool) -> Result<CaseConfig> {
    let eos = Eos::new(1.4)?;
    let flow = if shock {
        NozzleFlow::with_exit_pressure(NOZZLE_AREA, 1.0, 1.0, p_exit, &eos)?
    } else {
        NozzleFlow::transonic(NOZZLE_AREA, 1.0, 1.0)
    };
    let inlet = flow.state(0.0, &eos)?;
    let right = if shock { BoundarySpec::Pressure { p: Signal::Constant(p_exit), rho: None } } else { BoundarySpec::Free };
    let description = if shock { "nozzle flow with a standing normal shock" } else { "smooth transonic nozzle flow" };
    Ok(euler1d(
        name,
        description,
        5.0,
        0.6,
        Euler1dCase {
            gamma: 1.4,
            domain: [0.0, 1.0],
            cells: 22,
            area: NOZZLE_AREA,
            initial: Initial1D::Piecewise {
                breaks: vec![0.25],
                states: vec![Prim::new(1.0, 0.0, 1.0), Prim::new(p_exit.powf(1.0 / 1.4), 0.0, p_exit)],
            },
            left: BoundarySpec::Pressure { p: Signal::Constant(inlet.p), rho: Some(inlet.rho) },
            right,
            reference: Reference1D::Nozzle(flow),
        },
    ))
}

/// Built-in case by name.
pub fn builtin(name: &str) -> Result<CaseConfig> {
    let wall = BoundarySpec::Wall;
    let case = match name {
        "burgers-ibvp" => CaseConfig {
            name: name.into(),
            description: "Burgers equation with boundary data that switches on a shock at t = 1".into(),
            t_end: 2.0,
            frames: 200,
            cfl: 0.6,
            tolerance: Some(2e-2),
            problem: Problem::Burgers(BurgersCase {
                domain: [0.0, 2.0],
                cells: 100,
                initial: vec![[0.0, 0.0], [1.0, -1.0]],
                left: Signal::Step { before: 0.0, after: 2.0, at: 1.0 },
                right: Signal::Constant(-1.0),
                reference: BurgersReference::Exact,
            }),
        },
        "shock-wall" => CaseConfig {
            frames: 100,
            ..euler1d(
                name,
                "shock driven into a wall and reflected",
                2.0,
                0.6,
                Euler1dCase {
                    gamma: 1.4,
                    domain: [0.0, 10.0],
                    cells: 400,
                    area: AreaModel::Uniform,
                    initial: Initial1D::Piecewise { breaks: vec![2.0], states: vec![Prim::new(1.4, 0.0, 1.0), Prim::new(8.0, -8.25, 116.5)] },
                    left: wall,
                    right: BoundarySpec::Inflow { state: Prim::new(8.0, -8.25, 116.5) },
                    reference: Reference1D::None,
                },
            )
        },
        "woodward-colella" => CaseConfig {
            tolerance: Some(0.05),
            ..euler1d(
                name,
                "interacting blast waves between two walls",
                0.038,
                0.6,
                Euler1dCase {
                    gamma: 1.4,
                    domain: [0.0, 1.0],
                    cells: 800,
                    area: AreaModel::Uniform,
                    initial: Initial1D::Piecewise {
                        breaks: vec![0.1, 0.9],
                        states: vec![Prim::new(1.0, 0.0, 1000.0), Prim::new(1.0, 0.0, 0.01), Prim::new(1.0, 0.0, 100.0)],
                    },
                    left: wall,
                    right: wall,
                    reference: Reference1D::SelfConverged { factor: 5 },
                },
            )
        },
        "nozzle-smooth" => nozzle(name, NOZZLE_P_EXIT, false)?,
        "nozzle-shock" => nozzle(name, NOZZLE_P_SHOCK, true)?,
        "spherical-shock" => euler1d(
            name,
            "converging spherical shock reflected at the centre",
            5.0,
            0.5,
            Euler1dCase {
                gamma: 1.4,
                domain: [0.0, 10.0],
                cells: 200,
                area: AreaModel::Radial { dim: 2 },
                initial: Initial1D::Piecewise { breaks: vec![9.0], states: vec![Prim::new(1.0, 0.0, 1.0), Prim::new(1.69997, -0.578906, 1.528199)] },
                left: wall,
                right: BoundarySpec::Inflow { state: Prim::new(1.69997, -0.578906, 1.528199) },
                reference: Reference1D::SelfConverged { factor: 4 },
            },
        ),
        "noh" => CaseConfig {
            tolerance: None,
            ..euler1d(
                name,
                "Noh implosion of a cold gas in spherical symmetry",
                5.0,
                0.6,
                Euler1dCase {
                    gamma: 5.0 / 3.0,
                    domain: [0.0, 10.0],
                    cells: 400,
                    area: AreaModel::Radial { dim: 2 },
                    initial: Initial1D::Piecewise { breaks: vec![], states: vec![Prim::new(1.0, -1.0, NOH_P0)] },
                    left: wall,
                    right: BoundarySpec::Dirichlet { source: StateSource::Noh { dim: 2, p0: NOH_P0 } },
                    reference: Reference1D::Noh { dim: 2, p0: NOH_P0 },
                },
            )
        },
        "spherical-explosion" => euler1d(
            name,
            "spherical explosion in a closed sphere",
            10.0,
            0.6,
            Euler1dCase {
                gamma: 1.4,
                domain: [0.0, 50.0],
                cells: 400,
                area: AreaModel::Radial { dim: 2 },
                initial: Initial1D::Piecewise { breaks: vec![5.0], states: vec![Prim::new(21.7333, 0.0, 15.514), Prim::new(2.0, 0.0, 1.0)] },
                left: wall,
                right: wall,
                reference: Reference1D::SelfConverged { factor: 4 },
            },
        ),
        "double-mach" => CaseConfig {
            name: name.into(),
            description: "Mach 10 shock reflected by a 30 degree ramp".into(),
            t_end: 0.2,
            frames: 1,
            cfl: 0.6,
            tolerance: None,
            problem: Problem::Euler2d(Euler2dCase { setup: Setup2D::DoubleMach, nx: 720, ny: 180 }),
        },
        "forward-step" => CaseConfig {
            name: name.into(),
            description: "Mach 3 wind tunnel with a forward-facing step".into(),
            t_end: 4.0,
            frames: 1,
            cfl: 0.6,
            tolerance: None,
            problem: Problem::Euler2d(Euler2dCase { setup: Setup2D::ForwardStep, nx: 900, ny: 300 }),
        },
        "smooth-wave" => CaseConfig {
            tolerance: Some(1e-3),
            ..euler1d(
                name,
                "smooth isentropic simple wave with exact boundary data",
                0.3,
                0.6,
                Euler1dCase {
                    gamma: 1.4,
                    domain: [0.0, 1.0],
                    cells: 100,
                    area: AreaModel::Uniform,
                    initial: Initial1D::SimpleWave(SMOOTH_WAVE),
                    left: BoundarySpec::Dirichlet { source: StateSource::SimpleWave(SMOOTH_WAVE) },
                    right: BoundarySpec::Dirichlet { source: StateSource::SimpleWave(SMOOTH_WAVE) },
                    reference: Reference1D::SimpleWave(SMOOTH_WAVE),
                },
            )
        },
        _ => return Err(Error::UnknownCase(name.into())),
    };
    case.validate()?;
    Ok(case)
}
