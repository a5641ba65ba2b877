//! Running cases and measuring them against their references.

use crate::burgers::{BurgersSolver, ScalarFrame};
use crate::cases::{BurgersCase, BurgersReference, CaseConfig, Euler1dCase, Problem, Reference1D};
use crate::error::{Error, Result};
use crate::exact::{burgers_exact, noh_exact};
use crate::fvm1d::{BcMode, Frame1D, Grid1D, SchemeConfig, Solver1D};
use crate::fvm2d::{Frame2D, Solver2D};
use crate::gas::{cons_to_prim, prim_to_cons, Cons, Eos, Prim};
use crate::io::{norms, Norms};

/// Output of a run: every requested frame, preceded by the initial one.
#[derive(Debug, Clone)]
pub enum Frames {
    Scalar(Vec<ScalarFrame>),
    Line(Vec<Frame1D>),
    Plane(Vec<Frame2D>),
}

pub fn burgers_solver(b: &BurgersCase, cfl: f64, bc_mode: BcMode) -> Result<BurgersSolver> {
    let grid = Grid1D::new(b.domain[0], b.domain[1], b.cells)?;
    let nodes = b.initial.clone();
    let mut s = BurgersSolver::new(grid, b.left, b.right, cfl, move |x| piecewise_linear(&nodes, x))?;
    s.bc_mode = bc_mode;
    Ok(s)
}

fn piecewise_linear(nodes: &[[f64; 2]], x: f64) -> f64 {
    match nodes.iter().position(|n| n[0] > x) {
        Some(0) => nodes[0][1],
        None => nodes[nodes.len() - 1][1],
        Some(k) => {
            let ([x0, v0], [x1, v1]) = (nodes[k - 1], nodes[k]);
            v0 + (v1 - v0) * (x - x0) / (x1 - x0)
        }
    }
}

pub fn euler1d_solver(e: &Euler1dCase, cfl: f64, bc_mode: BcMode) -> Result<Solver1D> {
    let eos = Eos::new(e.gamma)?;
    let grid = Grid1D::new(e.domain[0], e.domain[1], e.cells)?;
    let mut scheme = SchemeConfig::new(cfl)?;
    scheme.bc_mode = bc_mode;
    Solver1D::new(grid, e.area, eos, [e.left, e.right], scheme, |x| e.initial.eval(x, &eos))
}

/// Run `case` and collect the initial frame and one frame per output time.
pub fn run_case(case: &CaseConfig, bc_mode: BcMode) -> Result<Frames> {
    case.validate()?;
    let times = case.output_times();
    Ok(match &case.problem {
        Problem::Burgers(b) => {
            let mut s = burgers_solver(b, case.cfl, bc_mode)?;
            let mut frames = vec![s.frame()];
            frames.extend(s.run(&times)?);
            Frames::Scalar(frames)
        }
        Problem::Euler1d(e) => {
            let mut s = euler1d_solver(e, case.cfl, bc_mode)?;
            let mut frames = vec![s.frame()];
            frames.extend(s.run(&times)?);
            Frames::Line(frames)
        }
        Problem::Euler2d(e) => {
            let mut scheme = SchemeConfig::new(case.cfl)?;
            scheme.bc_mode = bc_mode;
            let mut s: Solver2D = e.setup.build(e.nx, e.ny, scheme)?;
            let mut frames = vec![s.frame()];
            frames.extend(s.run(&times)?);
            Frames::Plane(frames)
        }
    })
}

/// Average of `f` over each cell by 3-point Gauss rules on `sub` subcells,
/// which keeps the error at a discontinuity to a fraction of a cell.
pub fn exact_averages<T>(grid: &Grid1D, sub: usize, f: impl Fn(f64) -> T, add: impl Fn(T, T) -> T, scale: impl Fn(T, f64) -> T) -> Vec<T> {
    let h = grid.dx() / sub as f64;
    let q = 0.5 * (0.6f64).sqrt();
    (0..grid.cells)
        .map(|i| {
            let x0 = grid.face(i);
            let mut acc: Option<T> = None;
            for k in 0..sub {
                let xc = x0 + (k as f64 + 0.5) * h;
                for (o, w) in [(-q, 5.0), (0.0, 8.0), (q, 5.0)] {
                    let v = scale(f(xc + o * h), w / (18.0 * sub as f64));
                    acc = Some(match acc {
                        None => v,
                        Some(a) => add(a, v),
                    });
                }
            }
            acc.expect("at least one node")
        })
        .collect()
}

/// Exact cell averages of the primitive state, through the conserved
/// variables.
pub fn exact_prim_averages(grid: &Grid1D, eos: &Eos, f: impl Fn(f64) -> Result<Prim>) -> Result<Vec<Prim>> {
    let cons = exact_averages(
        grid,
        16,
        |x| f(x).and_then(|s| prim_to_cons(&s, eos)),
        |a, b| Ok(a? + b?),
        |a: Result<Cons>, w| a.map(|c| c * w),
    );
    cons.into_iter().map(|c| cons_to_prim(&c?, eos)).collect()
}

/// Exact cell averages of the Burgers reference at time `t`.
pub fn burgers_reference(grid: &Grid1D, t: f64, exact: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    exact_averages(grid, 16, |x| exact(x, t), |a, b| a + b, |a, w| a * w)
}

/// Reference cell averages for the final frame of a 1D Euler case.
pub fn reference_1d(case: &CaseConfig, bc_mode: BcMode) -> Result<Option<Vec<Prim>>> {
    let Problem::Euler1d(e) = &case.problem else {
        return Err(Error::Usage(format!("case `{}` is not a 1D gas-dynamics case", case.name)));
    };
    let eos = Eos::new(e.gamma)?;
    let grid = Grid1D::new(e.domain[0], e.domain[1], e.cells)?;
    let t = case.t_end;
    Ok(Some(match &e.reference {
        Reference1D::None => return Ok(None),
        Reference1D::Nozzle(flow) => exact_prim_averages(&grid, &eos, |x| flow.state(x, &eos))?,
        Reference1D::Noh { dim, p0 } => exact_prim_averages(&grid, &eos, |x| Ok(noh_exact(x, t, *dim, &eos, *p0)))?,
        Reference1D::SimpleWave(w) => exact_prim_averages(&grid, &eos, |x| Ok(w.state(x, t, &eos)))?,
        Reference1D::SelfConverged { factor } => {
            let fine = Euler1dCase { cells: e.cells * factor, ..e.clone() };
            let mut s = euler1d_solver(&fine, case.cfl, bc_mode)?;
            s.advance(t)?;
            s.cons()
                .chunks(*factor)
                .map(|c| cons_to_prim(&(c.iter().fold(Cons::default(), |a, &b| a + b) * (1.0 / *factor as f64)), &eos))
                .collect::<Result<Vec<_>>>()?
        }
    }))
}

/// Error of one variable against the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableError {
    pub name: String,
    pub norms: Norms,
}

/// Final-time errors per variable, when the case has a reference.
pub fn reference_errors(case: &CaseConfig, bc_mode: BcMode, frames: &Frames) -> Result<Option<Vec<VariableError>>> {
    match (&case.problem, frames) {
        (Problem::Burgers(b), Frames::Scalar(f)) => {
            if b.reference == BurgersReference::None {
                return Ok(None);
            }
            let last = f.last().ok_or_else(|| Error::Usage("no frames".into()))?;
            let grid = Grid1D::new(b.domain[0], b.domain[1], b.cells)?;
            let r = burgers_reference(&grid, last.t, burgers_exact);
            Ok(Some(vec![VariableError { name: "v".into(), norms: norms(&last.v, &r, grid.dx()) }]))
        }
        (Problem::Euler1d(e), Frames::Line(f)) => {
            let last = f.last().ok_or_else(|| Error::Usage("no frames".into()))?;
            let Some(r) = reference_1d(case, bc_mode)? else { return Ok(None) };
            let dx = (e.domain[1] - e.domain[0]) / e.cells as f64;
            let col = |s: &[Prim], k: usize| -> Vec<f64> { s.iter().map(|p| p.to_array()[k]).collect() };
            Ok(Some(
                ["rho", "v", "p"]
                    .iter()
                    .enumerate()
                    .map(|(k, n)| VariableError { name: n.to_string(), norms: norms(&col(&last.cells, k), &col(&r, k), dx) })
                    .collect(),
            ))
        }
        (Problem::Euler2d(_), Frames::Plane(_)) => Ok(None),
        _ => Err(Error::Usage("frames do not match the case".into())),
    }
}

/// Largest relative deviation of the density from the Noh plateau, over
/// the cells between the first `skip` cells and three cells short of the
/// exact shock.
pub fn noh_plateau_error(frame: &Frame1D, eos: &Eos, dim: u32, p0: f64, skip: usize) -> f64 {
    let plateau = noh_exact(1e-3, 1.0, dim, eos, p0).rho;
    let dx = frame.x.get(1).map_or(1.0, |x1| x1 - frame.x[0]);
    let shock = frame.t / 3.0;
    frame
        .x
        .iter()
        .zip(&frame.cells)
        .skip(skip)
        .take_while(|(&x, _)| x + 3.0 * dx < shock)
        .map(|(_, s)| (s.rho / plateau - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Largest relative Mach number error at the cell centres.
pub fn nozzle_mach_error(frame: &Frame1D, flow: &crate::exact::NozzleFlow, eos: &Eos) -> Result<f64> {
    let mut err: f64 = 0.0;
    for (&x, s) in frame.x.iter().zip(&frame.cells) {
        let m = s.v.abs() / crate::gas::sound_speed(s, eos)?;
        let me = flow.mach(x, eos)?;
        err = err.max((m - me).abs() / me);
    }
    Ok(err)
}

/// Case-specific scalar diagnostics of the final frame.
pub fn diagnostics(case: &CaseConfig, frames: &Frames) -> Result<Vec<(String, f64)>> {
    let (Problem::Euler1d(e), Frames::Line(f)) = (&case.problem, frames) else { return Ok(vec![]) };
    let Some(last) = f.last() else { return Ok(vec![]) };
    let eos = Eos::new(e.gamma)?;
    Ok(match &e.reference {
        Reference1D::Noh { dim, p0 } => vec![("plateau_density_error".into(), noh_plateau_error(last, &eos, *dim, *p0, 10))],
        Reference1D::Nozzle(flow) if flow.shock.is_none() => vec![("max_mach_error".into(), nozzle_mach_error(last, flow, &eos)?)],
        _ => vec![],
    })
}
