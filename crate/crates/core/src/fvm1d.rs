//! Second-order GRP finite-volume scheme in one space dimension.

use crate::boundary::BoundarySpec;
use crate::error::{Error, Result};
use crate::gas::{cons_to_prim, flux_prim, prim_to_cons, sound_speed, source_terms, Cons, Eos, Prim};
use crate::geometry::AreaModel;
use crate::grp::{grp_interior, one_sided_grp, GrpOptions, GrpSideData};
use crate::riemann::{BoundaryDatum, Side};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Uniform grid on `[x0, x1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x0: f64,
    pub x1: f64,
    pub cells: usize,
}

impl Grid1D {
    pub fn new(x0: f64, x1: f64, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Usage("grid needs at least one cell".into()));
        }
        if !(x1 > x0) {
            return Err(Error::Usage(format!("empty domain [{x0}, {x1}]")));
        }
        Ok(Self { x0, x1, cells })
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx()
    }

    /// Position of face `i`, between cells `i - 1` and `i`.
    pub fn face(&self, i: usize) -> f64 {
        if i == self.cells { self.x1 } else { self.x0 + i as f64 * self.dx() }
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }
}

/// How physical boundaries are discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcMode {
    #[default]
    OneSidedGrp,
    /// Mirror ghost cell at walls, copy ghost at free ends. Other boundary
    /// kinds have no ghost-cell analogue and keep the one-sided treatment.
    ReflectiveGhost,
}

impl std::str::FromStr for BcMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-sided-grp" => Ok(BcMode::OneSidedGrp),
            "reflective-ghost" => Ok(BcMode::ReflectiveGhost),
            _ => Err(Error::Usage(format!("unknown boundary mode `{s}`"))),
        }
    }
}

fn default_alpha() -> f64 {
    1.9
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub cfl: f64,
    /// Limiter parameter in `[1, 2)` applied to the cell differences.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub bc_mode: BcMode,
    #[serde(default)]
    pub grp: GrpOptions,
    /// Stop early once the density residual drops below this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady_tol: Option<f64>,
}

impl SchemeConfig {
    pub fn new(cfl: f64) -> Result<Self> {
        let s = Self { cfl, alpha: default_alpha(), bc_mode: BcMode::default(), grp: GrpOptions::default(), steady_tol: None };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Usage(format!("cfl = {} outside (0, 1)", self.cfl)));
        }
        if !(1.0..2.0).contains(&self.alpha) {
            return Err(Error::Usage(format!("limiter parameter {} outside [1, 2)", self.alpha)));
        }
        Ok(())
    }
}

pub fn minmod2(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

pub fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    minmod2(a, minmod2(b, c))
}

fn map3(a: Prim, b: Prim, c: Prim, f: impl Fn(f64, f64, f64) -> f64) -> Prim {
    Prim::new(f(a.rho, b.rho, c.rho), f(a.v, b.v, c.v), f(a.p, b.p, c.p))
}

/// Slope of the mirror image about a wall.
pub(crate) fn reflect_slope(s: &Prim) -> Prim {
    Prim::new(-s.rho, s.v, -s.p)
}

/// Snapshot of the cell-centre primitive state.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame1D {
    pub t: f64,
    pub x: Vec<f64>,
    pub cells: Vec<Prim>,
}

#[derive(Debug, Clone, Copy)]
struct FaceValues {
    mid: Prim,
    new: Prim,
    ratio: f64,
}

/// Average of `init` over each cell by three-point Gauss quadrature.
pub fn cell_averages(grid: &Grid1D, init: impl Fn(f64) -> Prim, eos: &Eos) -> Result<Vec<Cons>> {
    let dx = grid.dx();
    let q = 0.5 * (0.6f64).sqrt();
    (0..grid.cells)
        .map(|i| {
            let xc = grid.center(i);
            let mut acc = Cons::default();
            for (off, w) in [(-q, 5.0 / 18.0), (0.0, 8.0 / 18.0), (q, 5.0 / 18.0)] {
                let s = init(xc + off * dx);
                acc = acc + prim_to_cons(&s, eos).map_err(|e| at_cell(e, i, 0.0))? * w;
            }
            Ok(acc)
        })
        .collect()
}

fn at_cell(e: Error, cell: usize, time: f64) -> Error {
    match e {
        Error::Solver { .. } => e,
        other => Error::Solver { cell, time, reason: other.to_string() },
    }
}

/// Explicit GRP solver state for a 1D (or quasi-1D) problem.
#[derive(Debug, Clone)]
pub struct Solver1D {
    pub grid: Grid1D,
    pub area: AreaModel,
    pub eos: Eos,
    pub bcs: [BoundarySpec; 2],
    pub scheme: SchemeConfig,
    t: f64,
    cons: Vec<Cons>,
    prim: Vec<Prim>,
    slope: Vec<Prim>,
    residual: f64,
    steps: usize,
}

impl Solver1D {
    pub fn new(
        grid: Grid1D,
        area: AreaModel,
        eos: Eos,
        bcs: [BoundarySpec; 2],
        scheme: SchemeConfig,
        init: impl Fn(f64) -> Prim,
    ) -> Result<Self> {
        scheme.validate()?;
        let cons = cell_averages(&grid, init, &eos)?;
        Self::from_cons(grid, area, eos, bcs, scheme, cons)
    }

    pub fn from_cons(grid: Grid1D, area: AreaModel, eos: Eos, bcs: [BoundarySpec; 2], scheme: SchemeConfig, cons: Vec<Cons>) -> Result<Self> {
        if cons.len() != grid.cells {
            return Err(Error::GridMismatch(format!("{} values for {} cells", cons.len(), grid.cells)));
        }
        let prim = cons
            .iter()
            .enumerate()
            .map(|(i, u)| cons_to_prim(u, &eos).map_err(|e| at_cell(e, i, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        let slope = vec![Prim::default(); grid.cells];
        Ok(Self { grid, area, eos, bcs, scheme, t: 0.0, cons, prim, slope, residual: f64::INFINITY, steps: 0 })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn cons(&self) -> &[Cons] {
        &self.cons
    }

    pub fn prim(&self) -> &[Prim] {
        &self.prim
    }

    pub fn slopes(&self) -> &[Prim] {
        &self.slope
    }

    /// Density residual `sum |rho^{n+1} - rho^n| dx / dt` of the last
    /// CFL-limited step taken by [`Solver1D::advance`].
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn frame(&self) -> Frame1D {
        Frame1D { t: self.t, x: self.grid.centers(), cells: self.prim.clone() }
    }

    pub fn cfl_dt(&self) -> Result<f64> {
        cfl_dt(&self.grid, &self.prim, self.scheme.cfl, &self.eos)
    }

    fn side_data(&self, i: usize, side: Side) -> GrpSideData {
        let h = 0.5 * self.grid.dx() * side.sign();
        GrpSideData::new(self.prim[i] + self.slope[i] * h, self.slope[i])
    }

    fn face_values(&self, ustar: Prim, rate: Prim, ratio: f64, dt: f64) -> FaceValues {
        let mid = ustar + rate * (0.5 * dt);
        let new = ustar + rate * dt;
        // a mid-time value outside the state space falls back to the Riemann value
        let mid = if mid.is_valid() { mid } else { ustar };
        FaceValues { mid, new, ratio }
    }

    fn interior_face(&self, i: usize, dt: f64) -> Result<FaceValues> {
        let x = self.grid.face(i);
        let ratio = self.area.ratio_or_center(x)?;
        let l = self.side_data(i - 1, Side::Right);
        let r = self.side_data(i, Side::Left);
        let sol = grp_interior(&l, &r, ratio, &self.eos, &self.scheme.grp)?;
        Ok(self.face_values(sol.ustar, sol.rate, ratio, dt))
    }

    fn boundary_face(&self, side: Side, dt: f64) -> Result<FaceValues> {
        let n = self.grid.cells;
        let (x, cell, bc) = match side {
            Side::Left => (self.grid.x0, 0, &self.bcs[0]),
            Side::Right => (self.grid.x1, n - 1, &self.bcs[1]),
        };
        let ratio = self.area.ratio_or_center(x)?;
        // the data side of a left boundary is the left edge of cell 0
        let data = self.side_data(cell, if side == Side::Left { Side::Left } else { Side::Right });
        if self.scheme.bc_mode == BcMode::ReflectiveGhost {
            let ghost = match bc {
                BoundarySpec::Wall => Some(GrpSideData::new(data.u.mirror(), reflect_slope(&data.slope))),
                BoundarySpec::Free => Some(GrpSideData::new(data.u, Prim::default())),
                _ => None,
            };
            if let Some(g) = ghost {
                let sol = match side {
                    Side::Left => grp_interior(&g, &data, ratio, &self.eos, &self.scheme.grp)?,
                    Side::Right => grp_interior(&data, &g, ratio, &self.eos, &self.scheme.grp)?,
                };
                return Ok(self.face_values(sol.ustar, sol.rate, ratio, dt));
            }
        }
        let (datum, rate) = bc.datum(x, self.t, dt, &self.eos);
        let sol = match one_sided_grp(side, &data, &datum, &rate, ratio, &self.eos, &self.scheme.grp) {
            // backflow through an outlet that carries no density: the entering
            // fluid keeps the density of the adjacent cell
            Err(Error::IllPosedBoundary(_)) if matches!(datum, BoundaryDatum::Pressure { rho: None, .. } | BoundaryDatum::Velocity { rho: None, .. }) => {
                let datum = match datum {
                    BoundaryDatum::Pressure { p, .. } => BoundaryDatum::Pressure { p, rho: Some(data.u.rho) },
                    BoundaryDatum::Velocity { v, .. } => BoundaryDatum::Velocity { v, rho: Some(data.u.rho) },
                    d => d,
                };
                one_sided_grp(side, &data, &datum, &rate, ratio, &self.eos, &self.scheme.grp)?
            }
            r => r?,
        };
        if let (BoundaryDatum::State(w), BoundarySpec::Inflow { .. }, false) = (datum, bc, sol.riemann.wellposed) {
            // an inlet state at a boundary that is not a supersonic inlet is
            // enforced through a ghost holding the datum
            let g = GrpSideData::new(w, Prim::default());
            let sol = match side {
                Side::Left => grp_interior(&g, &data, ratio, &self.eos, &self.scheme.grp)?,
                Side::Right => grp_interior(&data, &g, ratio, &self.eos, &self.scheme.grp)?,
            };
            return Ok(self.face_values(sol.ustar, sol.rate, ratio, dt));
        }
        Ok(self.face_values(sol.ustar, sol.rate.to_prim(), ratio, dt))
    }

    fn faces(&self, dt: f64) -> Result<Vec<FaceValues>> {
        let n = self.grid.cells;
        let time = self.t;
        (0..=n)
            .into_par_iter()
            .map(|i| {
                let r = if i == 0 {
                    self.boundary_face(Side::Left, dt)
                } else if i == n {
                    self.boundary_face(Side::Right, dt)
                } else {
                    self.interior_face(i, dt)
                };
                r.map_err(|e| at_cell(e, i.min(n - 1), time))
            })
            .collect()
    }

    /// Geometric source at a face, with its regular limit at a symmetry centre.
    fn face_source(&self, i: usize, f: &FaceValues) -> Cons {
        let x = self.grid.face(i);
        match self.area.radial_dim() {
            Some(d) if x == 0.0 => {
                let s = &f.mid;
                let vx = self.slope[if i == 0 { 0 } else { self.grid.cells - 1 }].v;
                let e = s.p / (self.eos.gamma() - 1.0) + 0.5 * s.rho * s.v * s.v;
                Cons::new(s.rho, 0.0, e + s.p) * (-(d as f64) * vx)
            }
            _ => source_terms(&f.mid, f.ratio, &self.eos),
        }
    }

    /// Advance one step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Usage(format!("time step {dt}")));
        }
        let n = self.grid.cells;
        let dx = self.grid.dx();
        let faces = self.faces(dt)?;
        let flux: Vec<Cons> = faces.iter().map(|f| flux_prim(&f.mid, &self.eos)).collect();
        let src: Vec<Cons> = if self.area.is_uniform() {
            vec![Cons::default(); n + 1]
        } else {
            faces.iter().enumerate().map(|(i, f)| self.face_source(i, f)).collect()
        };
        let lam = dt / dx;
        let mut cons = Vec::with_capacity(n);
        let mut prim = Vec::with_capacity(n);
        for j in 0..n {
            let u = self.cons[j] - (flux[j + 1] - flux[j]) * lam + (src[j] + src[j + 1]) * (0.5 * dt);
            let w = cons_to_prim(&u, &self.eos).map_err(|e| Error::Solver { cell: j, time: self.t + dt, reason: e.to_string() })?;
            cons.push(u);
            prim.push(w);
        }
        self.residual = (0..n).map(|j| (cons[j].rho - self.cons[j].rho).abs()).sum::<f64>() * dx / dt;
        self.cons = cons;
        self.prim = prim;
        let new: Vec<Prim> = faces.iter().map(|f| f.new).collect();
        self.update_slopes(&new);
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    fn update_slopes(&mut self, face_new: &[Prim]) {
        let n = self.grid.cells;
        let dx = self.grid.dx();
        let a = self.scheme.alpha;
        let w = &self.prim;
        let ghost_mode = self.scheme.bc_mode == BcMode::ReflectiveGhost;
        let ghost = |side: usize| -> Option<Prim> {
            if !ghost_mode {
                return None;
            }
            let cell = if side == 0 { 0 } else { n - 1 };
            match self.bcs[side] {
                BoundarySpec::Wall => Some(w[cell].mirror()),
                BoundarySpec::Free => Some(w[cell]),
                _ => None,
            }
        };
        let (gl, gr) = (ghost(0), ghost(1));
        let mut slope = Vec::with_capacity(n);
        for j in 0..n {
            let inner = (face_new[j + 1] - face_new[j]) * (1.0 / dx);
            let left = if j > 0 { Some(w[j - 1]) } else { gl };
            let right = if j + 1 < n { Some(w[j + 1]) } else { gr };
            let s = match (left, right) {
                (Some(l), Some(r)) => map3((w[j] - l) * (a / dx), inner, (r - w[j]) * (a / dx), minmod3),
                (None, Some(r)) => map3(inner, (r - w[j]) * (1.0 / dx), Prim::default(), |x, y, _| minmod2(x, y)),
                (Some(l), None) => map3((w[j] - l) * (1.0 / dx), inner, Prim::default(), |x, y, _| minmod2(x, y)),
                (None, None) => Prim::default(),
            };
            let h = 0.5 * dx;
            let ok = (w[j] + s * h).is_valid() && (w[j] - s * h).is_valid();
            slope.push(if ok { s } else { Prim::default() });
        }
        self.slope = slope;
    }

    /// Largest admissible step that does not jump over `t_end` or a
    /// discontinuity of the boundary data.
    fn next_dt(&self, t_end: f64) -> Result<f64> {
        let mut dt = self.cfl_dt()?.min(t_end - self.t);
        for bc in &self.bcs {
            if let Some(tj) = bc.next_jump(self.t) {
                if tj < self.t + dt {
                    dt = tj - self.t;
                }
            }
        }
        Ok(dt)
    }

    /// Advance to `t_end`. Returns early, with `false`, if the steady
    /// tolerance is met first.
    pub fn advance(&mut self, t_end: f64) -> Result<bool> {
        while t_end - self.t > 1e-12 * t_end.abs().max(1.0) {
            let dt = self.next_dt(t_end)?;
            let full = dt >= self.cfl_dt()?;
            let last = self.residual;
            self.step(dt)?;
            // a shortened step shifts the discrete steady state, so only full
            // steps measure convergence
            if !full && last.is_finite() {
                self.residual = last;
            }
            if let Some(tol) = self.scheme.steady_tol {
                if self.residual < tol {
                    return Ok(false);
                }
            }
        }
        self.t = self.t.max(t_end);
        Ok(true)
    }

    /// Frames at each of `times` (ascending), starting from the current time.
    pub fn run(&mut self, times: &[f64]) -> Result<Vec<Frame1D>> {
        let mut frames = Vec::with_capacity(times.len());
        for &t in times {
            let reached = if t > self.t { self.advance(t)? } else { true };
            frames.push(self.frame());
            if !reached {
                break;
            }
        }
        Ok(frames)
    }
}

pub fn cfl_dt(grid: &Grid1D, prim: &[Prim], cfl: f64, eos: &Eos) -> Result<f64> {
    if prim.is_empty() {
        return Err(Error::Usage("empty grid".into()));
    }
    let mut smax: f64 = 0.0;
    for (i, s) in prim.iter().enumerate() {
        let c = sound_speed(s, eos).map_err(|e| at_cell(e, i, f64::NAN))?;
        smax = smax.max(s.v.abs() + c);
    }
    Ok(cfl * grid.dx() / smax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{sample, solve_riemann};

    #[test]
    fn minmod_examples() {
        assert_eq!(minmod2(2.0, -1.0), 0.0);
        assert_eq!(minmod2(1.0, 3.0), 1.0);
        assert_eq!(minmod2(-1.0, -3.0), -1.0);
        assert_eq!(minmod3(1.0, 0.5, 2.0), 0.5);
    }

    #[test]
    fn cfl_examples() {
        let eos = Eos::new(1.4).unwrap();
        let g = Grid1D::new(0.0, 1.0, 10).unwrap();
        let dt = cfl_dt(&g, &vec![Prim::new(1.4, 0.0, 1.0); 10], 0.5, &eos).unwrap();
        assert!((dt - 0.5 * 0.1).abs() < 1e-15);
        let mut w = vec![Prim::new(1.4, 0.0, 1.0); 10];
        w[3] = Prim::new(1.4, 10.0, 1.0);
        assert!((cfl_dt(&g, &w, 0.5, &eos).unwrap() - 0.05 / 11.0).abs() < 1e-15);
        assert!(cfl_dt(&g, &[], 0.5, &eos).is_err());
    }

    #[test]
    fn uniform_state_is_preserved() {
        let eos = Eos::new(1.4).unwrap();
        let s = Prim::new(1.4, 0.3, 1.0);
        let grid = Grid1D::new(0.0, 1.0, 50).unwrap();
        let bcs = [BoundarySpec::Inflow { state: s }, BoundarySpec::Free];
        let mut sol = Solver1D::new(grid, AreaModel::Uniform, eos, bcs, SchemeConfig::new(0.6).unwrap(), |_| s).unwrap();
        sol.advance(0.3).unwrap();
        for w in sol.prim() {
            assert!((w.rho - s.rho).abs() < 1e-14 && (w.v - s.v).abs() < 1e-14 && (w.p - s.p).abs() < 1e-14);
        }
    }

    #[test]
    fn walls_keep_the_fluid_at_rest() {
        let eos = Eos::new(1.4).unwrap();
        let s = Prim::new(1.0, 0.0, 1.0);
        let grid = Grid1D::new(0.0, 1.0, 40).unwrap();
        for mode in [BcMode::OneSidedGrp, BcMode::ReflectiveGhost] {
            let mut cfg = SchemeConfig::new(0.6).unwrap();
            cfg.bc_mode = mode;
            let mut sol = Solver1D::new(grid, AreaModel::Uniform, eos, [BoundarySpec::Wall; 2], cfg, |_| s).unwrap();
            sol.advance(0.5).unwrap();
            assert!(sol.prim().iter().all(|w| (w.rho - 1.0).abs() < 1e-14 && w.v.abs() < 1e-14));
        }
    }

    #[test]
    fn sod_against_exact() {
        let eos = Eos::new(1.4).unwrap();
        let (l, r) = (Prim::new(1.0, 0.0, 1.0), Prim::new(0.125, 0.0, 0.1));
        let grid = Grid1D::new(0.0, 1.0, 400).unwrap();
        let mut sol = Solver1D::new(grid, AreaModel::Uniform, eos, [BoundarySpec::Free; 2], SchemeConfig::new(0.6).unwrap(), |x| {
            if x < 0.5 { l } else { r }
        })
        .unwrap();
        sol.advance(0.25).unwrap();
        let rs = solve_riemann(&l, &r, &eos).unwrap();
        let dx = grid.dx();
        let err: f64 = grid
            .centers()
            .iter()
            .zip(sol.prim())
            .map(|(&x, w)| (w.rho - sample(&rs, (x - 0.5) / 0.25).rho).abs() * dx)
            .sum();
        assert!(err < 5e-3, "L1 density error {err}");
    }

    #[test]
    fn time_dependent_boundary_data_stops_at_jumps() {
        use crate::boundary::Signal;
        let eos = Eos::new(1.4).unwrap();
        let s = Prim::new(1.0, 0.0, 1.0);
        let grid = Grid1D::new(0.0, 1.0, 20).unwrap();
        let bcs = [BoundarySpec::Velocity { v: Signal::Step { before: 0.0, after: 0.1, at: 0.0123 }, rho: Some(1.0) }, BoundarySpec::Free];
        let mut sol = Solver1D::new(grid, AreaModel::Uniform, eos, bcs, SchemeConfig::new(0.5).unwrap(), |_| s).unwrap();
        sol.advance(0.0123).unwrap();
        assert!((sol.time() - 0.0123).abs() < 1e-15);
        assert!(sol.prim().iter().all(|w| w.v == 0.0));
        sol.advance(0.05).unwrap();
        assert!(sol.prim()[0].v > 0.0);
    }
}
