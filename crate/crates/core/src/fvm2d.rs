//! Unsplit GRP scheme on a uniform Cartesian grid, with an optional mask of
//! solid cells. Each face solves a GRP along its normal. The tangential
//! velocity is carried passively and the transversal flux derivative enters
//! the face rates as a frozen source.

use crate::error::{Error, Result};
use crate::fvm1d::{minmod2, minmod3, reflect_slope, BcMode, SchemeConfig};
use crate::gas::{cons2_to_prim2, flux_x, flux_y, prim2_to_cons2, sound_speed_unchecked, Cons2, Eos, Prim, Prim2};
use crate::grp::{grp_interior, one_sided_grp, BoundaryRate, GrpOptions, GrpSideData};
use crate::riemann::{BoundaryDatum, Side, TraceKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Uniform grid on `[x0, x1] x [y0, y1]`, cells stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    /// `true` for cells inside an obstacle.
    pub solid: Vec<bool>,
}

impl Grid2D {
    pub fn new(x: [f64; 2], y: [f64; 2], nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Usage("grid needs at least one cell in each direction".into()));
        }
        if !(x[1] > x[0] && y[1] > y[0]) {
            return Err(Error::Usage(format!("empty domain {x:?} x {y:?}")));
        }
        Ok(Self { x0: x[0], x1: x[1], y0: y[0], y1: y[1], nx, ny, solid: vec![false; nx * ny] })
    }

    /// Mark every cell whose centre satisfies `inside` as solid.
    pub fn with_obstacle(mut self, inside: impl Fn(f64, f64) -> bool) -> Self {
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (x, y) = self.center(i, j);
                self.solid[j * self.nx + i] = inside(x, y);
            }
        }
        self
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / self.ny as f64
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + (i as f64 + 0.5) * self.dx(), self.y0 + (j as f64 + 0.5) * self.dy())
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn is_fluid(&self, i: usize, j: usize) -> bool {
        !self.solid[self.idx(i, j)]
    }
}

/// Boundary operator on a piece of the domain boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Boundary2D {
    Wall,
    Inflow { state: Prim2 },
    Free,
    /// Exact data of a planar shock that crosses `y = 0` at `x0` when
    /// `t = 0`, inclined at `angle` to the x-axis and moving along its normal
    /// at `speed`. `post` lies behind the shock, on the side of smaller `x`.
    ObliqueShock { pre: Prim2, post: Prim2, x0: f64, angle: f64, speed: f64 },
}

impl Boundary2D {
    pub fn is_wall(&self) -> bool {
        matches!(self, Boundary2D::Wall)
    }

    /// Imposed state at `(x, y, t)`, if the operator imposes one.
    pub fn state(&self, x: f64, y: f64, t: f64) -> Option<Prim2> {
        match *self {
            Boundary2D::Inflow { state } => Some(state),
            Boundary2D::ObliqueShock { pre, post, x0, angle, speed } => {
                Some(if x < oblique_shock_x(x0, angle, speed, y, t) { post } else { pre })
            }
            _ => None,
        }
    }
}

/// Position along `y = const` of the shock described by
/// [`Boundary2D::ObliqueShock`].
pub fn oblique_shock_x(x0: f64, angle: f64, speed: f64, y: f64, t: f64) -> f64 {
    x0 + y / angle.tan() + speed * t / angle.sin()
}

/// Piece of a domain side: `bc` applies from coordinate `from` onwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: f64,
    pub bc: Boundary2D,
}

/// Boundary operators on the four sides. Each side lists its segments in
/// increasing order of the coordinate along it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sides2D {
    pub left: Vec<Segment>,
    pub right: Vec<Segment>,
    pub bottom: Vec<Segment>,
    pub top: Vec<Segment>,
}

impl Sides2D {
    pub fn uniform(bc: Boundary2D) -> Self {
        let s = vec![Segment { from: f64::NEG_INFINITY, bc }];
        Self { left: s.clone(), right: s.clone(), bottom: s.clone(), top: s }
    }

    fn pick(segments: &[Segment], s: f64) -> Boundary2D {
        segments.iter().rev().find(|g| g.from <= s).or(segments.first()).map(|g| g.bc).unwrap_or(Boundary2D::Wall)
    }
}

/// Orthonormal face frame: `n` is the face normal, `t` the tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceFrame {
    pub n: [f64; 2],
    pub t: [f64; 2],
}

impl FaceFrame {
    /// Frame of x-faces.
    pub const X: FaceFrame = FaceFrame { n: [1.0, 0.0], t: [0.0, 1.0] };
    /// Frame of y-faces, the mirror image of [`FaceFrame::X`] under `x <-> y`.
    pub const Y: FaceFrame = FaceFrame { n: [0.0, 1.0], t: [1.0, 0.0] };

    /// Right-handed frame with unit normal `n`.
    pub fn rotated(n: [f64; 2]) -> Self {
        Self { n, t: [-n[1], n[0]] }
    }

    fn dot(a: [f64; 2], vx: f64, vy: f64) -> f64 {
        vx * a[0] + vy * a[1]
    }

    /// `(rho, v.n, p)` and `v.t`.
    fn project(&self, w: &Prim2) -> (Prim, f64) {
        (Prim::new(w.rho, Self::dot(self.n, w.vx, w.vy), w.p), Self::dot(self.t, w.vx, w.vy))
    }

    fn unproject(&self, w: &Prim, vt: f64) -> Prim2 {
        Prim2::new(w.rho, w.v * self.n[0] + vt * self.t[0], w.v * self.n[1] + vt * self.t[1], w.p)
    }

    fn derivative(sx: &Prim2, sy: &Prim2, d: [f64; 2]) -> Prim2 {
        *sx * d[0] + *sy * d[1]
    }
}

/// Limiting state on one side of a face with the cell's x and y slopes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FaceSide {
    pub u: Prim2,
    pub sx: Prim2,
    pub sy: Prim2,
}

/// Face data in the face frame.
#[derive(Debug, Clone, Copy)]
struct Projected {
    u: Prim,
    vt: f64,
    /// Normal derivative of `(rho, v.n, p)` and of `v.t`.
    dn: Prim,
    dn_vt: f64,
    /// Tangential derivative of `(rho, v.n, v.t, p)`.
    dt: [f64; 4],
}

impl Projected {
    fn new(frame: &FaceFrame, s: &FaceSide) -> Self {
        let (u, vt) = frame.project(&s.u);
        let (dn, dn_vt) = frame.project(&FaceFrame::derivative(&s.sx, &s.sy, frame.n));
        let (d, d_vt) = frame.project(&FaceFrame::derivative(&s.sx, &s.sy, frame.t));
        Self { u, vt, dn, dn_vt, dt: [d.rho, d.v, d_vt, d.p] }
    }

    /// Mirror image about the face.
    fn mirror(&self) -> Self {
        let [r, vn, vt, p] = self.dt;
        Self { u: self.u.mirror(), vt: self.vt, dn: reflect_slope(&self.dn), dn_vt: -self.dn_vt, dt: [r, -vn, vt, p] }
    }

    /// Constant extension across the face.
    fn copy(&self) -> Self {
        Self { dn: Prim::default(), dn_vt: 0.0, ..*self }
    }
}

/// Frozen transversal source `-A_t W_t` at `(u, vt)`, returned as the rates
/// of `(rho, v.n, p)` and of `v.t`.
fn transversal(u: &Prim, vt: f64, d: &[f64; 4], eos: &Eos) -> (Prim, f64) {
    let [dr, dvn, dvt, dp] = *d;
    let s = Prim::new(-(vt * dr + u.rho * dvt), -vt * dvn, -(vt * dp + eos.gamma() * u.p * dvt));
    (s, -(vt * dvt + dp / u.rho))
}

/// Face state and its time derivative in the xy frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceRates {
    pub ustar: Prim2,
    pub rate: Prim2,
}

fn interior_projected(frame: &FaceFrame, l: &Projected, r: &Projected, eos: &Eos, opts: &GrpOptions) -> Result<FaceRates> {
    let sol = grp_interior(&GrpSideData::new(l.u, l.dn), &GrpSideData::new(r.u, r.dn), 0.0, eos, opts)?;
    // a stagnant contact has no upwind side; a mirror ghost then cancels
    let (vt, d) = match sol.ustar.v.partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Greater) => (l.vt, l.dt),
        Some(std::cmp::Ordering::Less) => (r.vt, r.dt),
        _ => (0.5 * (l.vt + r.vt), std::array::from_fn(|k| 0.5 * (l.dt[k] + r.dt[k]))),
    };
    let rvt = sol.passive_rate(l.dn_vt, r.dn_vt, eos);
    let (s, st) = transversal(&sol.ustar, vt, &d, eos);
    Ok(FaceRates { ustar: frame.unproject(&sol.ustar, vt), rate: frame.unproject(&(sol.rate + s), rvt + st) })
}

/// GRP at an interior face in `frame`, with `l` on the side opposite to the
/// normal.
pub fn face_grp(frame: &FaceFrame, l: &FaceSide, r: &FaceSide, eos: &Eos, opts: &GrpOptions) -> Result<FaceRates> {
    interior_projected(frame, &Projected::new(frame, l), &Projected::new(frame, r), eos, opts)
}

/// GRP at a boundary face. `frame.n` points into the fluid, `data` is the
/// fluid side and `imposed` the state a Dirichlet-type operator prescribes
/// for the step.
pub fn boundary_face_grp(
    frame: &FaceFrame,
    data: &FaceSide,
    bc: &Boundary2D,
    imposed: Option<Prim2>,
    mode: BcMode,
    eos: &Eos,
    opts: &GrpOptions,
) -> Result<FaceRates> {
    let d = Projected::new(frame, data);
    if mode == BcMode::ReflectiveGhost {
        match bc {
            Boundary2D::Wall => return interior_projected(frame, &d.mirror(), &d, eos, opts),
            Boundary2D::Free => return interior_projected(frame, &d.copy(), &d, eos, opts),
            _ => {}
        }
    }
    let (datum, imposed_vt) = match (bc, imposed) {
        (Boundary2D::Wall, _) => (BoundaryDatum::Velocity { v: 0.0, rho: None }, None),
        (Boundary2D::Free, _) => (BoundaryDatum::Free, None),
        (_, Some(s)) => {
            let (w, vt) = frame.project(&s);
            (BoundaryDatum::State(w), Some(vt))
        }
        (_, None) => return Err(Error::Usage("boundary operator without its imposed state".into())),
    };
    let sol = one_sided_grp(Side::Left, &GrpSideData::new(d.u, d.dn), &datum, &BoundaryRate::zero(), 0.0, eos, opts)?;
    if let (BoundaryDatum::State(w), Boundary2D::Inflow { .. }, false) = (datum, bc, sol.riemann.wellposed) {
        // an inlet state on a face that is not a supersonic inlet
        // over-specifies the flow; it is enforced through a ghost instead
        let ghost = Projected { u: w, vt: imposed_vt.unwrap_or(d.vt), dn: Prim::default(), dn_vt: 0.0, dt: [0.0; 4] };
        return interior_projected(frame, &ghost, &d, eos, opts);
    }
    let u = sol.ustar;
    let mut rate = sol.rate.to_prim();
    if sol.riemann.trace == TraceKind::Imposed {
        let vt = imposed_vt.unwrap_or(d.vt);
        return Ok(FaceRates { ustar: frame.unproject(&u, vt), rate: frame.unproject(&rate, 0.0) });
    }
    let vt = d.vt;
    let mut rvt = -u.v * (u.rho / d.u.rho) * d.dn_vt;
    let (s, st) = transversal(&u, vt, &d.dt, eos);
    rvt += st;
    if matches!(datum, BoundaryDatum::Velocity { .. }) {
        // the normal velocity is prescribed; the source reaches the wall
        // along the incoming acoustic characteristic and the particle path
        let c = sound_speed_unchecked(u.rho, u.p, eos);
        let dp = s.p - u.rho * c * s.v;
        rate.p += dp;
        rate.rho += s.rho - s.p / (c * c) + dp / (c * c);
    } else {
        rate = rate + s;
    }
    Ok(FaceRates { ustar: frame.unproject(&u, vt), rate: frame.unproject(&rate, rvt) })
}

/// Snapshot of the cell-centre state.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame2D {
    pub t: f64,
    pub grid: Grid2D,
    pub cells: Vec<Prim2>,
}

#[derive(Debug, Clone, Copy)]
struct Face {
    mid: Prim2,
    new: Prim2,
}

/// State used for solid cells so that every stored value stays admissible.
const SOLID: Prim2 = Prim2::new(1.0, 0.0, 0.0, 1.0);

#[derive(Debug, Clone)]
pub struct Solver2D {
    pub grid: Grid2D,
    pub eos: Eos,
    pub sides: Sides2D,
    pub scheme: SchemeConfig,
    t: f64,
    steps: usize,
    cons: Vec<Cons2>,
    prim: Vec<Prim2>,
    sx: Vec<Prim2>,
    sy: Vec<Prim2>,
}

fn cell_error(e: Error, cell: usize, time: f64) -> Error {
    match e {
        Error::Solver { .. } => e,
        e => Error::Solver { cell, time, reason: e.to_string() },
    }
}

impl Solver2D {
    /// Initialise with cell averages of `init` by 3x3 Gauss quadrature.
    pub fn new(grid: Grid2D, eos: Eos, sides: Sides2D, scheme: SchemeConfig, init: impl Fn(f64, f64) -> Prim2 + Sync) -> Result<Self> {
        scheme.validate()?;
        let (dx, dy) = (grid.dx(), grid.dy());
        let q = 0.5 * (0.6f64).sqrt();
        let nodes = [(-q, 5.0 / 18.0), (0.0, 8.0 / 18.0), (q, 5.0 / 18.0)];
        let cons = (0..grid.nx * grid.ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % grid.nx, k / grid.nx);
                if grid.solid[k] {
                    return prim2_to_cons2(&SOLID, &eos);
                }
                let (xc, yc) = grid.center(i, j);
                let mut acc = Cons2::default();
                for (ox, wx) in nodes {
                    for (oy, wy) in nodes {
                        let s = init(xc + ox * dx, yc + oy * dy);
                        acc = acc + prim2_to_cons2(&s, &eos).map_err(|e| cell_error(e, k, 0.0))? * (wx * wy);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_cons(grid, eos, sides, scheme, cons)
    }

    pub fn from_cons(grid: Grid2D, eos: Eos, sides: Sides2D, scheme: SchemeConfig, cons: Vec<Cons2>) -> Result<Self> {
        scheme.validate()?;
        if cons.len() != grid.nx * grid.ny {
            return Err(Error::GridMismatch(format!("{} states for {} cells", cons.len(), grid.nx * grid.ny)));
        }
        let prim = cons
            .iter()
            .enumerate()
            .map(|(k, u)| cons2_to_prim2(u, &eos).map_err(|e| cell_error(e, k, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        let n = cons.len();
        Ok(Self { grid, eos, sides, scheme, t: 0.0, steps: 0, cons, prim, sx: vec![Prim2::default(); n], sy: vec![Prim2::default(); n] })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn cons(&self) -> &[Cons2] {
        &self.cons
    }

    pub fn prim(&self) -> &[Prim2] {
        &self.prim
    }

    pub fn slopes(&self) -> (&[Prim2], &[Prim2]) {
        (&self.sx, &self.sy)
    }

    pub fn frame(&self) -> Frame2D {
        Frame2D { t: self.t, grid: self.grid.clone(), cells: self.prim.clone() }
    }

    /// Largest stable step for the current state.
    pub fn cfl_dt(&self) -> Result<f64> {
        let (dx, dy) = (self.grid.dx(), self.grid.dy());
        let mut rate: f64 = 0.0;
        for (k, s) in self.prim.iter().enumerate() {
            if self.grid.solid[k] {
                continue;
            }
            s.validate().map_err(|e| cell_error(e, k, self.t))?;
            let c = sound_speed_unchecked(s.rho, s.p, &self.eos);
            rate = rate.max((s.vx.abs() + c) / dx + (s.vy.abs() + c) / dy);
        }
        if rate == 0.0 {
            return Err(Error::Usage("no fluid cells".into()));
        }
        Ok(self.scheme.cfl / rate)
    }

    fn side(&self, i: usize, j: usize, offset: [f64; 2]) -> FaceSide {
        let k = self.grid.idx(i, j);
        let (sx, sy) = (self.sx[k], self.sy[k]);
        FaceSide { u: self.prim[k] + sx * offset[0] + sy * offset[1], sx, sy }
    }

    fn face_out(&self, r: FaceRates, dt: f64) -> Face {
        let mid = r.ustar + r.rate * (0.5 * dt);
        let mid = if mid.is_valid() { mid } else { r.ustar };
        Face { mid, new: r.ustar + r.rate * dt }
    }

    fn boundary(&self, frame: &FaceFrame, data: &FaceSide, bc: Boundary2D, pos: (f64, f64), dt: f64) -> Result<FaceRates> {
        let imposed = bc.state(pos.0, pos.1, self.t + 0.5 * dt);
        boundary_face_grp(frame, data, &bc, imposed, self.scheme.bc_mode, &self.eos, &self.scheme.grp)
    }

    /// Face `i` of row `j`, between cells `(i - 1, j)` and `(i, j)`.
    fn x_face(&self, i: usize, j: usize, dt: f64) -> Result<Option<Face>> {
        let g = &self.grid;
        let h = 0.5 * g.dx();
        let lf = i > 0 && g.is_fluid(i - 1, j);
        let rf = i < g.nx && g.is_fluid(i, j);
        let x = g.x0 + i as f64 * g.dx();
        let y = g.center(0, j).1;
        let r = match (lf, rf) {
            (true, true) => face_grp(&FaceFrame::X, &self.side(i - 1, j, [h, 0.0]), &self.side(i, j, [-h, 0.0]), &self.eos, &self.scheme.grp)?,
            (false, true) => {
                let bc = if i == 0 { Sides2D::pick(&self.sides.left, y) } else { Boundary2D::Wall };
                self.boundary(&FaceFrame::rotated([1.0, 0.0]), &self.side(i, j, [-h, 0.0]), bc, (x, y), dt)?
            }
            (true, false) => {
                let bc = if i == g.nx { Sides2D::pick(&self.sides.right, y) } else { Boundary2D::Wall };
                self.boundary(&FaceFrame::rotated([-1.0, 0.0]), &self.side(i - 1, j, [h, 0.0]), bc, (x, y), dt)?
            }
            (false, false) => return Ok(None),
        };
        Ok(Some(self.face_out(r, dt)))
    }

    /// Face `j` of column `i`, between cells `(i, j - 1)` and `(i, j)`.
    fn y_face(&self, i: usize, j: usize, dt: f64) -> Result<Option<Face>> {
        let g = &self.grid;
        let h = 0.5 * g.dy();
        let bf = j > 0 && g.is_fluid(i, j - 1);
        let tf = j < g.ny && g.is_fluid(i, j);
        let x = g.center(i, 0).0;
        let y = g.y0 + j as f64 * g.dy();
        let r = match (bf, tf) {
            (true, true) => face_grp(&FaceFrame::Y, &self.side(i, j - 1, [0.0, h]), &self.side(i, j, [0.0, -h]), &self.eos, &self.scheme.grp)?,
            (false, true) => {
                let bc = if j == 0 { Sides2D::pick(&self.sides.bottom, x) } else { Boundary2D::Wall };
                self.boundary(&FaceFrame::rotated([0.0, 1.0]), &self.side(i, j, [0.0, -h]), bc, (x, y), dt)?
            }
            (true, false) => {
                let bc = if j == g.ny { Sides2D::pick(&self.sides.top, x) } else { Boundary2D::Wall };
                self.boundary(&FaceFrame::rotated([0.0, -1.0]), &self.side(i, j - 1, [0.0, h]), bc, (x, y), dt)?
            }
            (false, false) => return Ok(None),
        };
        Ok(Some(self.face_out(r, dt)))
    }

    /// Boundary operator seen from fluid cell `(i, j)` across its face in
    /// direction `dir` (0: -x, 1: +x, 2: -y, 3: +y), when there is no fluid
    /// neighbour there.
    fn outer_bc(&self, i: usize, j: usize, dir: usize) -> Boundary2D {
        let g = &self.grid;
        let (x, y) = g.center(i, j);
        match dir {
            0 if i == 0 => Sides2D::pick(&self.sides.left, y),
            1 if i + 1 == g.nx => Sides2D::pick(&self.sides.right, y),
            2 if j == 0 => Sides2D::pick(&self.sides.bottom, x),
            3 if j + 1 == g.ny => Sides2D::pick(&self.sides.top, x),
            _ => Boundary2D::Wall,
        }
    }

    /// Advance one step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Usage(format!("time step {dt}")));
        }
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let time = self.t;
        let xf: Vec<Option<Face>> = (0..ny)
            .into_par_iter()
            .map(|j| (0..=nx).map(|i| self.x_face(i, j, dt).map_err(|e| cell_error(e, self.grid.idx(i.min(nx - 1), j), time))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let yf: Vec<Option<Face>> = (0..=ny)
            .into_par_iter()
            .map(|j| (0..nx).map(|i| self.y_face(i, j, dt).map_err(|e| cell_error(e, self.grid.idx(i, j.min(ny - 1)), time))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let xi = |i: usize, j: usize| j * (nx + 1) + i;
        let yi = |i: usize, j: usize| j * nx + i;
        let fx = |f: &Option<Face>| f.map(|f| flux_x(&f.mid, &self.eos)).unwrap_or_default();
        let fy = |f: &Option<Face>| f.map(|f| flux_y(&f.mid, &self.eos)).unwrap_or_default();
        let (lx, ly) = (dt / self.grid.dx(), dt / self.grid.dy());
        let updated: Vec<(Cons2, Prim2)> = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                if self.grid.solid[k] {
                    return Ok((self.cons[k], self.prim[k]));
                }
                let u = self.cons[k] - (fx(&xf[xi(i + 1, j)]) - fx(&xf[xi(i, j)])) * lx - (fy(&yf[yi(i, j + 1)]) - fy(&yf[yi(i, j)])) * ly;
                let w = cons2_to_prim2(&u, &self.eos).map_err(|e| cell_error(e, k, time + dt))?;
                Ok((u, w))
            })
            .collect::<Result<Vec<_>>>()?;
        (self.cons, self.prim) = updated.into_iter().unzip();
        self.update_slopes(&xf, &yf);
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    fn update_slopes(&mut self, xf: &[Option<Face>], yf: &[Option<Face>]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (dx, dy) = (self.grid.dx(), self.grid.dy());
        let a = self.scheme.alpha;
        let ghost_mode = self.scheme.bc_mode == BcMode::ReflectiveGhost;
        let w = &self.prim;
        // neighbour across face `dir` of fluid cell (i, j), real or ghost
        let neighbour = |i: usize, j: usize, dir: usize| -> Option<Prim2> {
            let (ni, nj) = match dir {
                0 => (i.checked_sub(1), Some(j)),
                1 => (Some(i + 1).filter(|&v| v < nx), Some(j)),
                2 => (Some(i), j.checked_sub(1)),
                _ => (Some(i), Some(j + 1).filter(|&v| v < ny)),
            };
            if let (Some(ni), Some(nj)) = (ni, nj) {
                if self.grid.is_fluid(ni, nj) {
                    return Some(w[self.grid.idx(ni, nj)]);
                }
            }
            if !ghost_mode {
                return None;
            }
            let s = w[self.grid.idx(i, j)];
            match self.outer_bc(i, j, dir) {
                Boundary2D::Wall if dir < 2 => Some(Prim2 { vx: -s.vx, ..s }),
                Boundary2D::Wall => Some(Prim2 { vy: -s.vy, ..s }),
                Boundary2D::Free => Some(s),
                _ => None,
            }
        };
        let limit = |wc: Prim2, l: Option<Prim2>, r: Option<Prim2>, inner: Prim2, d: f64| -> Prim2 {
            let f = |c: f64, l: Option<f64>, r: Option<f64>, inner: f64| match (l, r) {
                (Some(l), Some(r)) => minmod3(a * (c - l) / d, inner, a * (r - c) / d),
                (None, Some(r)) => minmod2(inner, (r - c) / d),
                (Some(l), None) => minmod2((c - l) / d, inner),
                (None, None) => 0.0,
            };
            Prim2::new(
                f(wc.rho, l.map(|s| s.rho), r.map(|s| s.rho), inner.rho),
                f(wc.vx, l.map(|s| s.vx), r.map(|s| s.vx), inner.vx),
                f(wc.vy, l.map(|s| s.vy), r.map(|s| s.vy), inner.vy),
                f(wc.p, l.map(|s| s.p), r.map(|s| s.p), inner.p),
            )
        };
        let slopes: Vec<(Prim2, Prim2)> = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                if self.grid.solid[k] {
                    return (Prim2::default(), Prim2::default());
                }
                let wc = w[k];
                let new = |f: &Option<Face>| f.map(|f| f.new).unwrap_or(wc);
                let inner_x = (new(&xf[j * (nx + 1) + i + 1]) - new(&xf[j * (nx + 1) + i])) * (1.0 / dx);
                let inner_y = (new(&yf[(j + 1) * nx + i]) - new(&yf[j * nx + i])) * (1.0 / dy);
                let mut sx = limit(wc, neighbour(i, j, 0), neighbour(i, j, 1), inner_x, dx);
                let mut sy = limit(wc, neighbour(i, j, 2), neighbour(i, j, 3), inner_y, dy);
                if !((wc + sx * (0.5 * dx)).is_valid() && (wc - sx * (0.5 * dx)).is_valid()) {
                    sx = Prim2::default();
                }
                if !((wc + sy * (0.5 * dy)).is_valid() && (wc - sy * (0.5 * dy)).is_valid()) {
                    sy = Prim2::default();
                }
                (sx, sy)
            })
            .collect();
        (self.sx, self.sy) = slopes.into_iter().unzip();
    }

    /// Advance to `t_end`.
    pub fn advance(&mut self, t_end: f64) -> Result<()> {
        while t_end - self.t > 1e-12 * t_end.abs().max(1.0) {
            let dt = self.cfl_dt()?.min(t_end - self.t);
            self.step(dt)?;
        }
        self.t = self.t.max(t_end);
        Ok(())
    }

    /// Frames at each of `times` (ascending), starting from the current time.
    pub fn run(&mut self, times: &[f64]) -> Result<Vec<Frame2D>> {
        let mut frames = Vec::with_capacity(times.len());
        for &t in times {
            if t > self.t {
                self.advance(t)?;
            }
            frames.push(self.frame());
        }
        Ok(frames)
    }
}

/// Built-in two-dimensional configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setup2D {
    /// Mach 10 shock hitting a 30 degree ramp, in the frame of the ramp.
    DoubleMach,
    /// Mach 3 flow in a channel with a forward-facing step.
    ForwardStep,
}

pub const DMR_PRE: Prim2 = Prim2::new(1.4, 0.0, 0.0, 1.0);
/// Post-shock state of the Mach 10 shock: speed 8.25 along the shock normal.
pub const DMR_POST: Prim2 = Prim2::new(8.0, 7.144_709_581_221_618, -4.125, 116.5);
pub const DMR_X0: f64 = 1.0 / 6.0;
pub const STEP_INFLOW: Prim2 = Prim2::new(1.4, 3.0, 0.0, 1.0);

impl Setup2D {
    pub fn domain(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Setup2D::DoubleMach => ([0.0, 4.0], [0.0, 1.0]),
            Setup2D::ForwardStep => ([0.0, 3.0], [0.0, 1.0]),
        }
    }

    pub fn build(&self, nx: usize, ny: usize, scheme: SchemeConfig) -> Result<Solver2D> {
        let eos = Eos::new(1.4)?;
        let (x, y) = self.domain();
        match self {
            Setup2D::DoubleMach => {
                let angle = std::f64::consts::FRAC_PI_3;
                let shock = Boundary2D::ObliqueShock { pre: DMR_PRE, post: DMR_POST, x0: DMR_X0, angle, speed: 10.0 };
                let post = Boundary2D::Inflow { state: DMR_POST };
                let sides = Sides2D {
                    left: vec![Segment { from: f64::NEG_INFINITY, bc: post }],
                    right: vec![Segment { from: f64::NEG_INFINITY, bc: Boundary2D::Free }],
                    bottom: vec![Segment { from: f64::NEG_INFINITY, bc: post }, Segment { from: DMR_X0, bc: Boundary2D::Wall }],
                    top: vec![Segment { from: f64::NEG_INFINITY, bc: shock }],
                };
                let grid = Grid2D::new(x, y, nx, ny)?;
                Solver2D::new(grid, eos, sides, scheme, move |x, y| shock.state(x, y, 0.0).unwrap_or(DMR_PRE))
            }
            Setup2D::ForwardStep => {
                let sides = Sides2D {
                    left: vec![Segment { from: f64::NEG_INFINITY, bc: Boundary2D::Inflow { state: STEP_INFLOW } }],
                    right: vec![Segment { from: f64::NEG_INFINITY, bc: Boundary2D::Free }],
                    bottom: vec![Segment { from: f64::NEG_INFINITY, bc: Boundary2D::Wall }],
                    top: vec![Segment { from: f64::NEG_INFINITY, bc: Boundary2D::Wall }],
                };
                let grid = Grid2D::new(x, y, nx, ny)?.with_obstacle(|x, y| x > 0.6 && y < 0.2);
                Solver2D::new(grid, eos, sides, scheme, |_, _| STEP_INFLOW)
            }
        }
    }
}
