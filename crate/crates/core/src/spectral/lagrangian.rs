//! The Lagrangian polynomial `L_G(x) = r!·Σ_e Π_{v∈e} x_v` and its derivatives.
//!
//! Summation order is fixed everywhere: edges in stored (lexicographic)
//! order, products over each edge's vertices in ascending id order, and the
//! `r!` factor applied once at the end.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn check_dim(g: &Hypergraph, x: &[f64]) -> Result<()> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    Ok(())
}

pub(crate) fn lagrangian_unchecked(g: &Hypergraph, x: &[f64]) -> f64 {
    let mut sum = 0.0;
    for e in g.edges() {
        let mut prod = 1.0;
        for &v in e {
            prod *= x[v];
        }
        sum += prod;
    }
    factorial(g.r()) * sum
}

pub fn lagrangian(g: &Hypergraph, x: &[f64]) -> Result<f64> {
    check_dim(g, x)?;
    Ok(lagrangian_unchecked(g, x))
}

pub(crate) fn gradient_into(g: &Hypergraph, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for e in g.edges() {
        for (i, &v) in e.iter().enumerate() {
            let mut prod = 1.0;
            for (j, &w) in e.iter().enumerate() {
                if i != j {
                    prod *= x[w];
                }
            }
            out[v] += prod;
        }
    }
    let scale = factorial(g.r() - 1);
    out.iter_mut().for_each(|o| *o *= scale);
}

/// `g_v = (1/r)·∂L/∂x_v = (r−1)!·Σ_{e∋v} Π_{w∈e∖v} x_w`.
pub fn lagrangian_gradient(g: &Hypergraph, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(g, x)?;
    let mut out = vec![0.0; g.n()];
    gradient_into(g, x, &mut out);
    Ok(out)
}

/// Second derivatives `H_vw = (1/r)·∂²L/∂x_v∂x_w`, row-major `n × n`.
pub(crate) fn hessian(g: &Hypergraph, x: &[f64]) -> Vec<f64> {
    let n = g.n();
    let mut h = vec![0.0; n * n];
    for e in g.edges() {
        for (i, &v) in e.iter().enumerate() {
            for (j, &w) in e.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut prod = 1.0;
                for (k, &u) in e.iter().enumerate() {
                    if k != i && k != j {
                        prod *= x[u];
                    }
                }
                h[v * n + w] += prod;
            }
        }
    }
    let scale = factorial(g.r() - 1);
    h.iter_mut().for_each(|v| *v *= scale);
    h
}

pub(crate) fn residual_from_gradient(x: &[f64], grad: &[f64], p: f64, rho: f64) -> f64 {
    x.iter()
        .zip(grad)
        .map(|(&xv, &gv)| (rho * pow_pm1(xv, p) - gv).abs())
        .fold(0.0, f64::max)
}

/// `x^(p−1)` with `0^(p−1) = 0`.
pub(crate) fn pow_pm1(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(p - 1.0)
    }
}

/// Max-norm defect of the eigenequation `ρ·x_v^{p−1} = g_v`.
pub fn eigen_residual(g: &Hypergraph, x: &[f64], p: f64, rho: f64) -> Result<f64> {
    let grad = lagrangian_gradient(g, x)?;
    Ok(residual_from_gradient(x, &grad, p, rho))
}

/// `L_{G'}(x)` for `G' = G_{u→z}`, from the data of `G`:
///
/// `L_G(x) − r!·x_u·Σ_{e∋u} x^{e−u} + r!·x_u·Σ_{e∋z, u∉e} x^{e−z}`.
///
/// The subtracted block is exactly the set of terms of `L_G` through `u`, so it
/// is cancelled symbolically by skipping those edges. The surviving terms and
/// the added `x_u·x^{e−z}` terms are then summed in the sorted order of the
/// edges they correspond to in `G'`, each product taken over that edge in
/// ascending id order. This is the order [`lagrangian`] uses on `G'`, so the
/// two agree bit for bit.
pub fn cloning_lagrangian_delta(g: &Hypergraph, u: usize, z: usize, x: &[f64]) -> Result<f64> {
    check_dim(g, x)?;
    if u == z {
        return Err(Error::SameVertex);
    }
    for v in [u, z] {
        if v >= g.n() {
            return Err(Error::OutOfRange { vertex: v, n: g.n() });
        }
    }
    let mut terms: Vec<(Vec<usize>, f64)> = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        if e.contains(&u) {
            continue;
        }
        let mut prod = 1.0;
        for &v in e {
            prod *= x[v];
        }
        terms.push((e.clone(), prod));
        if e.contains(&z) {
            // x_u·x^{e−z}, taken in the ascending order of e − z + u
            let mut image: Vec<usize> = e.iter().map(|&w| if w == z { u } else { w }).collect();
            image.sort_unstable();
            let mut prod = 1.0;
            for &v in &image {
                prod *= x[v];
            }
            terms.push((image, prod));
        }
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut sum = 0.0;
    for (_, t) in &terms {
        sum += t;
    }
    Ok(factorial(g.r()) * sum)
}

/// The same quantity evaluated term by term as written, without cancellation.
pub fn cloning_lagrangian_delta_naive(g: &Hypergraph, u: usize, z: usize, x: &[f64]) -> Result<f64> {
    check_dim(g, x)?;
    if u == z {
        return Err(Error::SameVertex);
    }
    let rf = factorial(g.r());
    let mut through_u = 0.0;
    let mut through_z = 0.0;
    for e in g.edges() {
        let others = |skip: usize| e.iter().filter(|&&w| w != skip).map(|&w| x[w]).product::<f64>();
        if e.contains(&u) {
            through_u += others(u);
        } else if e.contains(&z) {
            through_z += others(z);
        }
    }
    Ok(lagrangian_unchecked(g, x) - rf * x[u] * through_u + rf * x[u] * through_z)
}
