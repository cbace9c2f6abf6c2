//! The p-spectral radius `ρ_p(G)`: the maximum of the Lagrangian over the
//! nonnegative part of the unit `ℓ^p` sphere, together with the closed-form
//! bounds used to sanity-check it.

mod bruteforce;
mod lagrangian;
mod solver;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub use bruteforce::{rho_p_bruteforce, DEFAULT_GRID_DEPTH};
pub use lagrangian::{
    cloning_lagrangian_delta, cloning_lagrangian_delta_naive, eigen_residual, lagrangian, lagrangian_gradient,
};
pub use solver::{
    solve_rho_p, solve_rho_p_from, SolutionFlag, SolverConfig, SpectralSolution, Strategy, AGREEMENT_TOL, ZERO_CLAMP,
};

pub(crate) use lagrangian::factorial;

/// A nonnegative vertex-indexed vector together with the exponent `p` of the
/// norm it is measured in.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightVector {
    values: Vec<f64>,
    p: f64,
}

impl WeightVector {
    pub fn new(values: Vec<f64>, p: f64) -> Result<Self> {
        solver::check_p(p)?;
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::BadConfig(format!("weights must be finite and nonnegative, got {bad}")));
        }
        Ok(WeightVector { values, p })
    }

    /// Rescales `values` to unit p-norm.
    pub fn normalized(values: Vec<f64>, p: f64) -> Result<Self> {
        let mut w = WeightVector::new(values, p)?;
        let norm = w.norm();
        if norm == 0.0 {
            return Err(Error::AllZero);
        }
        w.values.iter_mut().for_each(|v| *v /= norm);
        Ok(w)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.powf(self.p)).sum::<f64>().powf(1.0 / self.p)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

/// `ρ_∞(G) = r!·|E(G)|`, the limit of `ρ_p` as `p → ∞`.
pub fn rho_infinity(g: &Hypergraph) -> f64 {
    factorial(g.r()) * g.edge_count() as f64
}

/// `γ(x) = max_v x_v / min_v x_v`, infinite when some entry is zero.
pub fn principal_ratio(x: &[f64]) -> Result<f64> {
    let max = x.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::AllZero);
    }
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(max / min)
}

/// `(Δ/δ)^{1/(p+r−2)}`, the least principal ratio a graph with these degree
/// extremes can have.
pub fn degree_ratio_lower_bound(g: &Hypergraph, p: f64) -> Result<f64> {
    solver::check_p(p)?;
    let (max, min) = g.degree_extremes();
    if min == 0 {
        return Err(Error::IsolatedVertex);
    }
    Ok((max as f64 / min as f64).powf(1.0 / (p + g.r() as f64 - 2.0)))
}

/// `n^{r(1−1/p)}`, an upper bound on `ρ_p` of any r-graph on `n` vertices.
pub fn rho_upper_bound(n: usize, r: usize, p: f64) -> f64 {
    (n as f64).powf(r as f64 * (1.0 - 1.0 / p))
}

/// `L` at the uniform unit vector: `r!·|E|·n^{−r/p}`, a lower bound on `ρ_p`.
pub fn uniform_lower_bound(g: &Hypergraph, p: f64) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    rho_infinity(g) * (g.n() as f64).powf(-(g.r() as f64) / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::complete_r_graph;

    #[test]
    fn closed_forms() {
        let e1 = complete_r_graph(3, 3).unwrap();
        let k3 = complete_r_graph(3, 2).unwrap();
        assert_eq!(rho_infinity(&e1), 6.0);
        assert_eq!(rho_infinity(&k3), 6.0);
        assert_eq!(rho_infinity(&Hypergraph::empty(4, 3).unwrap()), 0.0);
        assert!((rho_upper_bound(4, 2, 2.0) - 4.0).abs() < 1e-12);
        assert!((rho_upper_bound(3, 3, 3.0) - 9.0).abs() < 1e-12);
        assert!((rho_upper_bound(10, 3, 1.0001) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn ratios() {
        assert_eq!(principal_ratio(&[0.5; 4]).unwrap(), 1.0);
        let s = 2f64.sqrt();
        assert!((principal_ratio(&[0.5, s / 2.0, 0.5]).unwrap() - s).abs() < 1e-15);
        assert_eq!(principal_ratio(&[0.0, 1.0]).unwrap(), f64::INFINITY);
        assert!(matches!(principal_ratio(&[0.0, 0.0]), Err(Error::AllZero)));

        let p3 = Hypergraph::new(3, 2, [[0, 1], [1, 2]]).unwrap();
        assert!((degree_ratio_lower_bound(&p3, 2.0).unwrap() - s).abs() < 1e-15);
        let k4 = complete_r_graph(4, 3).unwrap();
        assert_eq!(degree_ratio_lower_bound(&k4, 2.5).unwrap(), 1.0);
        let minus = k4.remove_edge(&[0, 1, 2]).unwrap();
        let want = 1.5f64.powf(0.25);
        assert!((degree_ratio_lower_bound(&minus, 3.0).unwrap() - want).abs() < 1e-15);
        let iso = Hypergraph::new(3, 2, [[0, 1]]).unwrap();
        assert!(matches!(degree_ratio_lower_bound(&iso, 2.0), Err(Error::IsolatedVertex)));
    }

    #[test]
    fn weight_vectors() {
        let w = WeightVector::normalized(vec![3.0, 4.0], 2.0).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-15);
        assert!(WeightVector::new(vec![-1.0], 2.0).is_err());
        assert!(matches!(WeightVector::new(vec![1.0], 1.0), Err(Error::BadP(_))));
        assert!(matches!(WeightVector::normalized(vec![0.0], 2.0), Err(Error::AllZero)));
    }
}
