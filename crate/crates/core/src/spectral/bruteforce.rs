//! Derivative-free maximization of the Lagrangian, used as an independent
//! check on the solver.
//!
//! Points of the nonnegative unit p-sphere are written `x_v = w_v^{1/p}` with
//! `w` on the standard simplex. The search has two stages:
//!
//! 1. Every point of the simplex grid `w ∈ (1/N)·ℤ^n` is evaluated. For two
//!    simplex points at ℓ^∞ distance `h`, `|x_v − x'_v| ≤ h^{1/p}` and each edge
//!    term changes by at most `r·h^{1/p}`, so `|L(x) − L(x')| ≤ r!·r·m·h^{1/p}`.
//!    The best grid point is therefore within `r!·r·m·N^{−1/p}` of `ρ_p`, which
//!    locates the basin of the maximum but is far too coarse on its own.
//! 2. The best grid points are refined by a pattern search that moves mass
//!    `δ = min(h, w_j)` from `w_j` to `w_i` whenever that increases `L`, and
//!    halves `h` once no pair improves, `grid_depth` times. The differences
//!    `e_i − e_j` positively span the simplex's tangent space, so the search
//!    stops only at points where `L` is stationary up to the final step size.
//!
//! For `n ≤ 4` the coarse grid has spacing at most `1/40`, small enough that
//! on the 2- and 3-graphs exercised in the tests every basin of attraction
//! contains a grid point; at depth [`DEFAULT_GRID_DEPTH`] the refinement
//! reaches step `2^{−40}/N`, which is why the result agrees with the optimum
//! to well within `1e−4`.

use log::warn;

use super::lagrangian::lagrangian_unchecked;
use super::solver::check_p;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_GRID_DEPTH: usize = 40;

const MAX_VERTICES: usize = 8;
const MAX_GRID_POINTS: usize = 20_000;
const REFINED_SEEDS: usize = 8;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn grid_resolution(n: usize) -> usize {
    let mut resolution = 1;
    while resolution < 40 && binomial(resolution + 1 + n - 1, n - 1) <= MAX_GRID_POINTS {
        resolution += 1;
    }
    resolution
}

fn compositions(total: usize, parts: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if cur.len() + 1 == parts {
        cur.push(total);
        visit(cur);
        cur.pop();
        return;
    }
    for first in 0..=total {
        cur.push(first);
        compositions(total - first, parts, cur, visit);
        cur.pop();
    }
}

struct Objective<'a> {
    g: &'a Hypergraph,
    inv_p: f64,
    x: Vec<f64>,
}

impl Objective<'_> {
    fn eval(&mut self, w: &[f64]) -> f64 {
        for (x, &wv) in self.x.iter_mut().zip(w) {
            *x = if wv > 0.0 { wv.powf(self.inv_p) } else { 0.0 };
        }
        lagrangian_unchecked(self.g, &self.x)
    }
}

/// Grid-plus-pattern-search estimate of `ρ_p(G)`.
///
/// Errors with `TooLarge` above 8 vertices; logs a warning above 6.
pub fn rho_p_bruteforce(g: &Hypergraph, p: f64, grid_depth: usize) -> Result<f64> {
    check_p(p)?;
    let n = g.n();
    if n > MAX_VERTICES {
        return Err(Error::TooLarge(format!("brute force supports at most {MAX_VERTICES} vertices, got {n}")));
    }
    if n > 6 {
        warn!("brute-force search on {n} vertices is slow");
    }
    if g.is_empty() {
        return Ok(0.0);
    }
    let mut obj = Objective {
        g,
        inv_p: 1.0 / p,
        x: vec![0.0; n],
    };
    let resolution = grid_resolution(n);
    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    compositions(resolution, n, &mut Vec::with_capacity(n), &mut |c| {
        let w: Vec<f64> = c.iter().map(|&k| k as f64 / resolution as f64).collect();
        let value = obj.eval(&w);
        if seeds.len() < REFINED_SEEDS || value > seeds[seeds.len() - 1].0 {
            let at = seeds.partition_point(|s| s.0 >= value);
            seeds.insert(at, (value, w));
            seeds.truncate(REFINED_SEEDS);
        }
    });

    let mut best = 0.0f64;
    for (mut value, mut w) in seeds {
        let mut h = 1.0 / resolution as f64;
        for _ in 0..=grid_depth {
            let mut sweeps = 0;
            let mut improved = true;
            while improved && sweeps < 10_000 {
                improved = false;
                sweeps += 1;
                for i in 0..n {
                    for j in 0..n {
                        if i == j || w[j] <= 0.0 {
                            continue;
                        }
                        let delta = h.min(w[j]);
                        let (wi, wj) = (w[i], w[j]);
                        w[i] = wi + delta;
                        w[j] = wj - delta;
                        let trial = obj.eval(&w);
                        if trial > value {
                            value = trial;
                            improved = true;
                        } else {
                            w[i] = wi;
                            w[j] = wj;
                        }
                    }
                }
            }
            h *= 0.5;
        }
        best = best.max(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::complete_r_graph;

    #[test]
    fn symmetric_examples() {
        let e1 = complete_r_graph(3, 3).unwrap();
        assert!((rho_p_bruteforce(&e1, 3.0, DEFAULT_GRID_DEPTH).unwrap() - 2.0).abs() < 1e-4);
        let k3 = complete_r_graph(3, 2).unwrap();
        assert!((rho_p_bruteforce(&k3, 2.0, DEFAULT_GRID_DEPTH).unwrap() - 2.0).abs() < 1e-4);
        let p3 = Hypergraph::new(3, 2, [[0, 1], [1, 2]]).unwrap();
        let got = rho_p_bruteforce(&p3, 2.0, DEFAULT_GRID_DEPTH).unwrap();
        assert!((got - 2f64.sqrt()).abs() < 1e-4, "{got}");
    }

    #[test]
    fn limits() {
        let big = Hypergraph::empty(9, 2).unwrap();
        assert!(matches!(rho_p_bruteforce(&big, 2.0, 4), Err(Error::TooLarge(_))));
        assert_eq!(rho_p_bruteforce(&Hypergraph::empty(3, 2).unwrap(), 2.0, 4).unwrap(), 0.0);
        assert_eq!(grid_resolution(2), 40);
        assert!(grid_resolution(8) >= 4);
    }
}
