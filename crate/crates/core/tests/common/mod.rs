//! Fine-grid MUSCL-Hancock reference runs used as oracles for the GRP
//! time derivatives.

#![allow(dead_code)]

use osgrp::gas::{cons_to_prim, flux_prim, prim_to_cons, source_terms, Cons, Eos, Prim};
use osgrp::riemann::{sample, solve_one_sided, solve_riemann, BoundaryDatum, Side};

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Left end of an oracle grid.
#[derive(Clone, Copy)]
pub enum LeftEnd {
    /// Zero-gradient extrapolation.
    Open,
    /// Boundary flux from the exact one-sided Riemann problem.
    Datum(BoundaryDatum),
}

/// MUSCL-Hancock with exact Riemann fluxes and a constant geometric ratio.
/// `probe` turns the cell values into the sampled quantity at each of `times`.
pub fn muscl(
    init: &[Prim],
    dx: f64,
    ratio: f64,
    left: LeftEnd,
    eos: &Eos,
    times: &[f64],
    probe: impl Fn(&[Prim]) -> Prim,
) -> Vec<Prim> {
    let n = init.len();
    let g = eos.gamma();
    let mut u: Vec<Cons> = init.iter().map(|s| prim_to_cons(s, eos).unwrap()).collect();
    let mut t = 0.0;
    let mut out = Vec::new();
    let mut next = 0;
    while next < times.len() {
        let w: Vec<Prim> = u.iter().map(|c| cons_to_prim(c, eos).unwrap()).collect();
        let smax = w.iter().map(|s| s.v.abs() + (g * s.p / s.rho).sqrt()).fold(0.0, f64::max);
        let mut dt = 0.4 * dx / smax;
        let mut hit = false;
        if t + dt >= times[next] {
            dt = times[next] - t;
            hit = true;
        }
        let mut lo = vec![Prim::default(); n];
        let mut hi = vec![Prim::default(); n];
        for i in 0..n {
            let d = if i == n - 1 {
                Prim::default()
            } else if i == 0 {
                match left {
                    LeftEnd::Open => Prim::default(),
                    // one-sided slope next to a boundary
                    LeftEnd::Datum(_) => {
                        let b = w[1] - w[0];
                        let a = w[2] - w[1];
                        Prim::new(minmod(a.rho, b.rho), minmod(a.v, b.v), minmod(a.p, b.p))
                    }
                }
            } else {
                let (a, b) = (w[i] - w[i - 1], w[i + 1] - w[i]);
                Prim::new(minmod(a.rho, b.rho), minmod(a.v, b.v), minmod(a.p, b.p))
            };
            let s = &w[i];
            let rc2 = g * s.p;
            let evo = Prim::new(
                -(s.v * d.rho + s.rho * d.v) / dx - ratio * s.rho * s.v,
                -(s.v * d.v + d.p / s.rho) / dx,
                -(s.v * d.p + rc2 * d.v) / dx - ratio * rc2 * s.v,
            ) * (0.5 * dt);
            lo[i] = *s - d * 0.5 + evo;
            hi[i] = *s + d * 0.5 + evo;
        }
        let mut fluxes = Vec::with_capacity(n + 1);
        fluxes.push(match left {
            LeftEnd::Open => flux_prim(&lo[0], eos),
            LeftEnd::Datum(b) => flux_prim(&solve_one_sided(&lo[0], &b, Side::Left, eos).unwrap().ustar, eos),
        });
        for i in 0..n - 1 {
            let rs = solve_riemann(&hi[i], &lo[i + 1], eos).unwrap();
            fluxes.push(flux_prim(&sample(&rs, 0.0), eos));
        }
        fluxes.push(flux_prim(&hi[n - 1], eos));
        for i in 0..n {
            let mid = (lo[i] + hi[i]) * 0.5;
            let h = source_terms(&mid, ratio, eos);
            u[i] = u[i] - (fluxes[i + 1] - fluxes[i]) * (dt / dx) + h * dt;
        }
        t += dt;
        if hit {
            let w: Vec<Prim> = u.iter().map(|c| cons_to_prim(c, eos).unwrap()).collect();
            out.push(probe(&w));
            next += 1;
        }
    }
    out
}

/// Slope `b` of the least-squares fit `y - y0 = b t + c t^2`.
pub fn fitted_rate(y0: f64, ts: &[f64], ys: &[f64]) -> f64 {
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(ys) {
        let d = y - y0;
        s11 += t * t;
        s12 += t * t * t;
        s22 += t * t * t * t;
        r1 += d * t;
        r2 += d * t * t;
    }
    (r1 * s22 - r2 * s12) / (s11 * s22 - s12 * s12)
}

pub const TIMES: [f64; 5] = [0.002, 0.004, 0.006, 0.008, 0.01];

/// Rates fitted at two resolutions and Richardson-extrapolated assuming
/// first-order convergence of the traced values.
pub fn extrapolated_rates(u0: &Prim, run: impl Fn(f64) -> Vec<Prim>) -> [f64; 3] {
    let coarse = run(4e-5);
    let fine = run(2e-5);
    let start = u0.to_array();
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let rate = |tr: &[Prim]| {
            let ys: Vec<f64> = tr.iter().map(|s| s.to_array()[k]).collect();
            fitted_rate(start[k], &TIMES, &ys)
        };
        *o = 2.0 * rate(&fine) - rate(&coarse);
    }
    out
}
