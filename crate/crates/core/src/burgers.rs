//! Scalar Burgers equation `v_t + (v^2/2)_x = 0` with the same GRP scheme and
//! one-sided boundary treatment as the Euler solvers.

use crate::boundary::Signal;
use crate::error::{Error, Result};
use crate::fvm1d::{minmod2, minmod3, BcMode, Grid1D};

/// Boundary trace at a left boundary `x = 0` with datum `g` and interior
/// value `vr`, slope `slope`. Returns `(v*, dv/dt)`.
pub fn burgers_one_sided(vr: f64, slope: f64, g: f64, g_rate: f64) -> Result<(f64, f64)> {
    if !(vr.is_finite() && slope.is_finite() && g.is_finite() && g_rate.is_finite()) {
        return Err(Error::InvalidState(format!("v = {vr}, slope = {slope}, g = {g}")));
    }
    let imposed = if g <= vr {
        // rarefaction from g to vr
        if g >= 0.0 {
            true
        } else if vr <= 0.0 {
            false
        } else {
            return Err(Error::IllPosedBoundary(format!(
                "datum {g} cannot be attained: the fan from {g} to {vr} is sonic at the boundary"
            )));
        }
    } else {
        // shock of speed (g + vr)/2
        g + vr >= 0.0
    };
    Ok(if imposed { (g, g_rate) } else { (vr, -vr * slope) })
}

/// Right-boundary counterpart of [`burgers_one_sided`], using the symmetry
/// `(x, v) -> (-x, -v)`.
pub fn burgers_one_sided_right(vl: f64, slope: f64, g: f64, g_rate: f64) -> Result<(f64, f64)> {
    let (v, r) = burgers_one_sided(-vl, slope, -g, -g_rate)?;
    Ok((-v, -r))
}

/// Interior scalar GRP between linear data on both sides of `x = 0`.
pub fn burgers_grp(vl: f64, sl: f64, vr: f64, sr: f64) -> (f64, f64) {
    let left = (vl, -vl * sl);
    let right = (vr, -vr * sr);
    if vl > vr {
        if vl + vr >= 0.0 { left } else { right }
    } else if vl >= 0.0 {
        left
    } else if vr <= 0.0 {
        right
    } else {
        (0.0, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFrame {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// GRP scheme for the Burgers equation with Dirichlet-type data at both ends.
#[derive(Debug, Clone)]
pub struct BurgersSolver {
    pub grid: Grid1D,
    pub left: Signal,
    pub right: Signal,
    pub cfl: f64,
    pub alpha: f64,
    /// `ReflectiveGhost` uses a ghost cell holding the datum, with zero slope.
    pub bc_mode: BcMode,
    t: f64,
    v: Vec<f64>,
    slope: Vec<f64>,
}

impl BurgersSolver {
    pub fn new(grid: Grid1D, left: Signal, right: Signal, cfl: f64, init: impl Fn(f64) -> f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::Usage(format!("cfl = {cfl} outside (0, 1)")));
        }
        let dx = grid.dx();
        let q = 0.5 * (0.6f64).sqrt();
        let v = (0..grid.cells)
            .map(|i| {
                let xc = grid.center(i);
                (5.0 * init(xc - q * dx) + 8.0 * init(xc) + 5.0 * init(xc + q * dx)) / 18.0
            })
            .collect();
        Ok(Self { grid, left, right, cfl, alpha: 1.9, bc_mode: BcMode::OneSidedGrp, t: 0.0, v, slope: vec![0.0; grid.cells] })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn frame(&self) -> ScalarFrame {
        ScalarFrame { t: self.t, x: self.grid.centers(), v: self.v.clone() }
    }

    pub fn cfl_dt(&self) -> Result<f64> {
        let vmax = self.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let g = self.left.value(self.t).abs().max(self.right.value(self.t).abs());
        let s = vmax.max(g);
        if s == 0.0 {
            return Err(Error::Usage("no signal speed to set the time step".into()));
        }
        Ok(self.cfl * self.grid.dx() / s)
    }

    fn boundary(&self, left: bool) -> Result<(f64, f64)> {
        let n = self.grid.cells;
        let h = 0.5 * self.grid.dx();
        let (sig, cell) = if left { (&self.left, 0) } else { (&self.right, n - 1) };
        let (g, gr) = (sig.value(self.t), sig.rate(self.t));
        let s = self.slope[cell];
        if self.bc_mode == BcMode::ReflectiveGhost {
            return Ok(if left {
                burgers_grp(g, 0.0, self.v[0] - s * h, s)
            } else {
                burgers_grp(self.v[n - 1] + s * h, s, g, 0.0)
            });
        }
        if left {
            burgers_one_sided(self.v[0] - s * h, s, g, gr)
        } else {
            burgers_one_sided_right(self.v[n - 1] + s * h, s, g, gr)
        }
    }

    pub fn step(&mut self, dt: f64) -> Result<()> {
        let n = self.grid.cells;
        let dx = self.grid.dx();
        let h = 0.5 * dx;
        let time = self.t;
        let wrap = |e: Error, cell: usize| Error::Solver { cell, time, reason: e.to_string() };
        let mut faces = Vec::with_capacity(n + 1);
        faces.push(self.boundary(true).map_err(|e| wrap(e, 0))?);
        for i in 1..n {
            let (a, b) = (i - 1, i);
            faces.push(burgers_grp(self.v[a] + self.slope[a] * h, self.slope[a], self.v[b] - self.slope[b] * h, self.slope[b]));
        }
        faces.push(self.boundary(false).map_err(|e| wrap(e, n - 1))?);
        let flux: Vec<f64> = faces
            .iter()
            .map(|&(v, r)| {
                let m = v + 0.5 * dt * r;
                0.5 * m * m
            })
            .collect();
        let lam = dt / dx;
        let v: Vec<f64> = (0..n).map(|j| self.v[j] - lam * (flux[j + 1] - flux[j])).collect();
        if let Some(j) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::Solver { cell: j, time: time + dt, reason: "non-finite value".into() });
        }
        let new: Vec<f64> = faces.iter().map(|&(v, r)| v + dt * r).collect();
        let a = self.alpha;
        self.slope = (0..n)
            .map(|j| {
                let inner = (new[j + 1] - new[j]) / dx;
                match (j > 0, j + 1 < n) {
                    (true, true) => minmod3(a * (v[j] - v[j - 1]) / dx, inner, a * (v[j + 1] - v[j]) / dx),
                    (false, true) => minmod2(inner, (v[1] - v[0]) / dx),
                    (true, false) => minmod2((v[j] - v[j - 1]) / dx, inner),
                    (false, false) => 0.0,
                }
            })
            .collect();
        self.v = v;
        self.t += dt;
        Ok(())
    }

    /// Advance to `t_end`, landing exactly on jumps of the boundary data.
    pub fn advance(&mut self, t_end: f64) -> Result<()> {
        while t_end - self.t > 1e-12 * t_end.abs().max(1.0) {
            let mut dt = self.cfl_dt()?.min(t_end - self.t);
            for s in [&self.left, &self.right] {
                if let Some(tj) = s.next_jump(self.t) {
                    if tj < self.t + dt {
                        dt = tj - self.t;
                    }
                }
            }
            self.step(dt)?;
        }
        self.t = self.t.max(t_end);
        Ok(())
    }

    pub fn run(&mut self, times: &[f64]) -> Result<Vec<ScalarFrame>> {
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if t > self.t {
                self.advance(t)?;
            }
            out.push(self.frame());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::burgers_exact;

    #[test]
    fn one_sided_cases() {
        // rarefaction: datum attained
        assert_eq!(burgers_one_sided(1.0, 0.0, 0.5, 0.0).unwrap(), (0.5, 0.0));
        // shock of speed 3/2 leaves the boundary
        assert_eq!(burgers_one_sided(1.0, 0.0, 2.0, 0.3).unwrap(), (2.0, 0.3));
        assert!(matches!(burgers_one_sided(1.0, 0.0, -1.0, 0.0), Err(Error::IllPosedBoundary(_))));
        // outgoing shock: the interior value survives
        assert_eq!(burgers_one_sided(-1.0, 0.5, 0.5, 0.0).unwrap(), (-1.0, 0.5));
    }

    #[test]
    fn right_boundary_mirrors_left() {
        assert_eq!(burgers_one_sided_right(-1.0, 0.0, -0.5, 0.0).unwrap(), (-0.5, 0.0));
        assert_eq!(burgers_one_sided_right(1.0, 0.2, 0.0, 0.0).unwrap(), (1.0, -0.2));
        assert!(burgers_one_sided_right(-1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn interior_grp_matches_the_characteristic_rate() {
        let (v, r) = burgers_grp(0.5, 2.0, 0.5, 2.0);
        assert_eq!((v, r), (0.5, -1.0));
        assert_eq!(burgers_grp(-1.0, 1.0, 1.0, 1.0), (0.0, 0.0));
        assert_eq!(burgers_grp(2.0, 0.0, -1.0, 3.0), (2.0, 0.0));
    }

    #[test]
    fn example_one_before_the_shock() {
        let grid = Grid1D::new(0.0, 2.0, 100).unwrap();
        let mut s = BurgersSolver::new(
            grid,
            Signal::Step { before: 0.0, after: 2.0, at: 1.0 },
            Signal::Constant(-1.0),
            0.6,
            |x| if x < 1.0 { -x } else { -1.0 },
        )
        .unwrap();
        s.advance(0.5).unwrap();
        let err: f64 = s.frame().x.iter().zip(s.values()).map(|(&x, v)| (v - burgers_exact(x, 0.5)).abs() * grid.dx()).sum();
        assert!(err < 2e-2, "{err}");
    }
}
