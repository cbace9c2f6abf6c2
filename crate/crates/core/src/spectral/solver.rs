//! Multi-start maximization of the Lagrangian over the nonnegative unit
//! `ℓ^p` sphere.
//!
//! Two ascent schemes are available:
//!
//! * shifted power iteration (default for `p ≥ r`): `y_v = g_v(x) + α·x_v^{p−1}`
//!   with `α = r!·Δ(G)`, then `x ← y^{1/(p−1)}` rescaled to unit p-norm;
//! * projected gradient ascent (default for `1 < p < r`): move along the
//!   gradient of `L/r − (ρ/p)(‖x‖_p^p − 1)` with `ρ = L(x)`, clamp negative
//!   entries to zero and rescale, halving the step until `L` increases.
//!
//! Once the eigenequation residual is small, a Newton step on the stationarity
//! system restricted to the support of `x` is attempted to finish the solve;
//! it is accepted only if it lands on a stationary point without lowering `L`.
//! Start 0 is the uniform vector and the others are seeded positive random
//! vectors; each start keeps the best iterate it has seen.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::lagrangian::{factorial, gradient_into, hessian, lagrangian_unchecked, pow_pm1, residual_from_gradient};
use super::WeightVector;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Entries below this are reported as exact zeros.
pub const ZERO_CLAMP: f64 = 1e-14;
/// Spread of objective values across starts above which maximizers are suspected non-unique.
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Entries this far below the largest one are left out of Newton polishing.
const SUPPORT_CUTOFF: f64 = 1e-8;
const POLISH_PERIOD: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    ShiftedPower,
    ProjectedGradient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Relative residual tolerance: converged iff residual ≤ `tol·max(1, ρ̂)`.
    pub tol: f64,
    pub max_iter: usize,
    pub starts: usize,
    pub seed: u64,
    /// `None` picks shifted power iteration for `p ≥ r` and projected gradient otherwise.
    pub strategy: Option<Strategy>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iter: 100_000,
            starts: 16,
            seed: 0,
            strategy: None,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::BadConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.starts == 0 {
            return Err(Error::BadConfig("at least one start is required".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SolutionFlag {
    NonUniqueSuspected,
    ZeroEntries,
    NoConvergence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSolution {
    /// `L(x)` at the reported vector.
    pub rho_hat: f64,
    pub x: WeightVector,
    pub residual: f64,
    pub converged: bool,
    pub starts_used: usize,
    /// Iterations spent by the winning start.
    pub iterations: usize,
    pub agreement_gap: f64,
    pub flags: Vec<SolutionFlag>,
}

impl SpectralSolution {
    pub fn p(&self) -> f64 {
        self.x.p()
    }

    pub fn has_flag(&self, flag: SolutionFlag) -> bool {
        self.flags.contains(&flag)
    }
}

impl Serialize for SpectralSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectralSolution", 9)?;
        st.serialize_field("rho", &self.rho_hat)?;
        st.serialize_field("x", self.x.values())?;
        st.serialize_field("p", &self.x.p())?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("iterations", &self.iterations)?;
        st.serialize_field("starts", &self.starts_used)?;
        st.serialize_field("converged", &self.converged)?;
        st.serialize_field("agreement_gap", &self.agreement_gap)?;
        st.serialize_field("flags", &self.flags)?;
        st.end()
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadP(p));
    }
    Ok(())
}

fn p_normalize(x: &mut [f64], p: f64) {
    let norm = x.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p);
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

struct Problem<'a> {
    g: &'a Hypergraph,
    p: f64,
    tol: f64,
    max_iter: usize,
    strategy: Strategy,
    shift: f64,
}

#[derive(Clone, Debug)]
struct StartResult {
    x: Vec<f64>,
    value: f64,
    residual: f64,
    converged: bool,
    iterations: usize,
}

impl Problem<'_> {
    fn target(&self, rho: f64) -> f64 {
        self.tol * rho.max(1.0)
    }

    fn evaluate(&self, mut x: Vec<f64>, iterations: usize) -> StartResult {
        for v in x.iter_mut() {
            if *v < ZERO_CLAMP {
                *v = 0.0;
            }
        }
        p_normalize(&mut x, self.p);
        let value = lagrangian_unchecked(self.g, &x);
        let mut grad = vec![0.0; x.len()];
        gradient_into(self.g, &x, &mut grad);
        let residual = residual_from_gradient(&x, &grad, self.p, value);
        StartResult {
            converged: residual <= self.target(value),
            x,
            value,
            residual,
            iterations,
        }
    }

    /// Entries that are decaying towards zero rarely get below the clamp
    /// before the residual test passes, so a final Newton solve on the
    /// support without them is tried and kept if it is at least as good.
    fn finish(&self, x: Vec<f64>, iterations: usize) -> StartResult {
        let out = self.evaluate(x, iterations);
        let top = out.x.iter().copied().fold(0.0, f64::max);
        if !out.x.iter().any(|&v| v > 0.0 && v <= SUPPORT_CUTOFF * top) {
            return out;
        }
        match self.newton_polish(&out.x) {
            Some((xs, _)) => {
                let snapped = self.evaluate(xs, iterations);
                if snapped.converged && snapped.value >= out.value - 1e-12 * out.value.max(1.0) {
                    snapped
                } else {
                    out
                }
            }
            None => out,
        }
    }

    fn run(&self, x0: Vec<f64>) -> StartResult {
        let n = self.g.n();
        let mut x = x0;
        p_normalize(&mut x, self.p);
        let mut value = lagrangian_unchecked(self.g, &x);
        let mut best = (x.clone(), value);
        let mut grad = vec![0.0; n];
        let mut step = 1.0;
        let mut next_polish = 1e-3;
        let mut polish_attempts = 0;
        for it in 0..self.max_iter {
            gradient_into(self.g, &x, &mut grad);
            let residual = residual_from_gradient(&x, &grad, self.p, value);
            if residual <= self.target(value) {
                return self.finish(best_of(best, (x, value)), it);
            }
            let scaled = residual / value.max(1.0);
            // also retry now and then in case the residual has plateaued above the schedule
            let periodic = it > 0 && it % POLISH_PERIOD == 0;
            if (scaled <= next_polish || periodic) && polish_attempts < 60 {
                polish_attempts += 1;
                next_polish = scaled * 0.1;
                if let Some((xp, vp)) = self.newton_polish(&x) {
                    if vp >= value - 1e-12 * value.max(1.0) {
                        let done = self.finish(xp, it);
                        if done.converged && done.value >= best.1 - 1e-12 * best.1.max(1.0) {
                            return done;
                        }
                    }
                }
            }
            let stalled = match self.strategy {
                Strategy::ShiftedPower => {
                    for v in 0..n {
                        let y = grad[v] + self.shift * pow_pm1(x[v], self.p);
                        x[v] = if y > 0.0 { y.powf(1.0 / (self.p - 1.0)) } else { 0.0 };
                    }
                    p_normalize(&mut x, self.p);
                    value = lagrangian_unchecked(self.g, &x);
                    false
                }
                Strategy::ProjectedGradient => !self.gradient_step(&mut x, &mut value, &grad, &mut step),
            };
            if value > best.1 {
                best = (x.clone(), value);
            }
            if stalled {
                if let Some((xp, _)) = self.newton_polish(&x) {
                    let done = self.finish(xp, it);
                    if done.converged && done.value >= best.1 - 1e-12 * best.1.max(1.0) {
                        return done;
                    }
                }
                return self.finish(best.0, it);
            }
        }
        self.finish(best.0, self.max_iter)
    }

    /// One backtracking step; false once no step size increases `L`.
    fn gradient_step(&self, x: &mut [f64], value: &mut f64, grad: &[f64], step: &mut f64) -> bool {
        let rho = *value;
        let dir: Vec<f64> = x
            .iter()
            .zip(grad)
            .map(|(&xv, &gv)| gv - rho * pow_pm1(xv, self.p))
            .collect();
        let mut trial = vec![0.0; x.len()];
        let mut s = (*step * 2.0).min(1e6);
        while s > 1e-18 {
            for v in 0..x.len() {
                trial[v] = (x[v] + s * dir[v]).max(0.0);
            }
            p_normalize(&mut trial, self.p);
            let tv = lagrangian_unchecked(self.g, &trial);
            if tv > *value {
                x.copy_from_slice(&trial);
                *value = tv;
                *step = s;
                return true;
            }
            s *= 0.5;
        }
        false
    }

    /// Newton's method on `ρ·x_v^{p−1} = g_v (v ∈ S)`, `Σ_{v∈S} x_v^p = 1`
    /// with unknowns `x_S` and `ρ`, where `S` is the support of `x`.
    fn newton_polish(&self, x: &[f64]) -> Option<(Vec<f64>, f64)> {
        let n = x.len();
        let p = self.p;
        let top = x.iter().copied().fold(0.0, f64::max);
        if top <= 0.0 {
            return None;
        }
        let support: Vec<usize> = (0..n).filter(|&v| x[v] > SUPPORT_CUTOFF * top).collect();
        let s = support.len();
        let mut y: Vec<f64> = vec![0.0; n];
        for &v in &support {
            y[v] = x[v];
        }
        let mut rho = lagrangian_unchecked(self.g, &y);
        let mut grad = vec![0.0; n];
        let system = |y: &[f64], rho: f64, grad: &mut Vec<f64>| -> DVector<f64> {
            gradient_into(self.g, y, grad);
            let mut f = DVector::zeros(s + 1);
            for (i, &v) in support.iter().enumerate() {
                f[i] = rho * pow_pm1(y[v], p) - grad[v];
            }
            f[s] = support.iter().map(|&v| y[v].powf(p)).sum::<f64>() - 1.0;
            f
        };
        let mut f = system(&y, rho, &mut grad);
        for _ in 0..60 {
            let fnorm = f.amax();
            if fnorm <= 0.05 * self.target(rho) {
                break;
            }
            let h = hessian(self.g, &y);
            let mut jac = DMatrix::zeros(s + 1, s + 1);
            for (i, &v) in support.iter().enumerate() {
                for (j, &w) in support.iter().enumerate() {
                    jac[(i, j)] = -h[v * n + w];
                }
                jac[(i, i)] += rho * (p - 1.0) * y[v].powf(p - 2.0);
                jac[(i, s)] = pow_pm1(y[v], p);
                jac[(s, i)] = p * pow_pm1(y[v], p);
            }
            let delta = jac.lu().solve(&(-&f))?;
            if delta.iter().any(|d| !d.is_finite()) {
                return None;
            }
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let mut trial = y.clone();
                for (i, &v) in support.iter().enumerate() {
                    trial[v] = y[v] + t * delta[i];
                }
                let trial_rho = rho + t * delta[s];
                if support.iter().all(|&v| trial[v] > 0.0) {
                    let tf = system(&trial, trial_rho, &mut grad);
                    if tf.amax() < fnorm {
                        y = trial;
                        rho = trial_rho;
                        f = tf;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        p_normalize(&mut y, p);
        let value = lagrangian_unchecked(self.g, &y);
        Some((y, value))
    }
}

fn best_of(a: (Vec<f64>, f64), b: (Vec<f64>, f64)) -> Vec<f64> {
    if b.1 >= a.1 {
        b.0
    } else {
        a.0
    }
}

fn start_vector(n: usize, seed: u64, index: usize) -> Vec<f64> {
    if index == 0 {
        return vec![1.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    (0..n).map(|_| rng.gen_range(0.05..1.0)).collect()
}

/// Estimates `ρ_p(G) = max { L_G(x) : x ≥ 0, ‖x‖_p = 1 }`.
pub fn solve_rho_p(g: &Hypergraph, p: f64, config: &SolverConfig) -> Result<SpectralSolution> {
    solve_with_starts(g, p, config, None)
}

/// As [`solve_rho_p`], with `start` tried in addition to the usual starts.
pub fn solve_rho_p_from(g: &Hypergraph, p: f64, config: &SolverConfig, start: &[f64]) -> Result<SpectralSolution> {
    if start.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: start.len(),
        });
    }
    solve_with_starts(g, p, config, Some(start))
}

fn solve_with_starts(g: &Hypergraph, p: f64, config: &SolverConfig, warm: Option<&[f64]>) -> Result<SpectralSolution> {
    check_p(p)?;
    config.validate()?;
    let n = g.n();
    if g.is_empty() {
        let mut x = vec![1.0; n];
        p_normalize(&mut x, p);
        return Ok(SpectralSolution {
            rho_hat: 0.0,
            x: WeightVector::new(x, p)?,
            residual: 0.0,
            converged: true,
            starts_used: 0,
            iterations: 0,
            agreement_gap: 0.0,
            flags: Vec::new(),
        });
    }
    let strategy = config.strategy.unwrap_or(if p >= g.r() as f64 {
        Strategy::ShiftedPower
    } else {
        Strategy::ProjectedGradient
    });
    let problem = Problem {
        g,
        p,
        tol: config.tol,
        max_iter: config.max_iter,
        strategy,
        shift: factorial(g.r()) * g.degree_extremes().0 as f64,
    };
    let mut starts: Vec<Vec<f64>> = (0..config.starts).map(|i| start_vector(n, config.seed, i)).collect();
    if let Some(w) = warm {
        starts.insert(1.min(starts.len()), w.iter().map(|v| v.max(0.0)).collect());
    }
    let results: Vec<StartResult> = starts
        .into_par_iter()
        .filter(|x0| x0.iter().any(|&v| v > 0.0))
        .map(|x0| problem.run(x0))
        .collect();

    // best objective wins; exact ties go to the lexicographically largest x
    let best = results
        .iter()
        .max_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then_with(|| a.x.iter().zip(&b.x).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal))
        })
        .expect("uniform start is always present");
    let max_value = results.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let min_converged = results.iter().filter(|r| r.converged).map(|r| r.value).fold(f64::INFINITY, f64::min);
    let agreement_gap = if min_converged.is_finite() { max_value - min_converged } else { 0.0 };

    let mut flags = Vec::new();
    if agreement_gap > AGREEMENT_TOL {
        flags.push(SolutionFlag::NonUniqueSuspected);
    }
    if best.x.contains(&0.0) {
        flags.push(SolutionFlag::ZeroEntries);
    }
    if !best.converged {
        flags.push(SolutionFlag::NoConvergence);
    }
    Ok(SpectralSolution {
        rho_hat: best.value,
        x: WeightVector::new(best.x.clone(), p)?,
        residual: best.residual,
        converged: best.converged,
        starts_used: results.len(),
        iterations: best.iterations,
        agreement_gap,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::complete_r_graph;

    fn quick() -> SolverConfig {
        SolverConfig {
            starts: 4,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn single_edge_is_uniform() {
        let e1 = complete_r_graph(3, 3).unwrap();
        let sol = solve_rho_p(&e1, 3.0, &quick()).unwrap();
        assert!((sol.rho_hat - 2.0).abs() < 1e-8, "{sol:?}");
        assert!(sol.converged);
        let c = 3f64.powf(-1.0 / 3.0);
        assert!(sol.x.values().iter().all(|v| (v - c).abs() < 1e-8));
    }

    #[test]
    fn path_and_cycle() {
        let p3 = Hypergraph::new(3, 2, [[0, 1], [1, 2]]).unwrap();
        let sol = solve_rho_p(&p3, 2.0, &quick()).unwrap();
        assert!((sol.rho_hat - 2f64.sqrt()).abs() < 1e-8);
        let c4 = Hypergraph::new(4, 2, [[0, 1], [1, 2], [2, 3], [0, 3]]).unwrap();
        let sol = solve_rho_p(&c4, 2.0, &quick()).unwrap();
        assert!((sol.rho_hat - 2.0).abs() < 1e-8);
        assert!(sol.residual <= 1e-10 * 2.0);
    }

    #[test]
    fn small_p_converges() {
        let k4 = complete_r_graph(4, 3).unwrap();
        let minus = k4.remove_edge(&[0, 1, 2]).unwrap();
        for p in [1.5, 2.0, 2.5] {
            let sol = solve_rho_p(&minus, p, &quick()).unwrap();
            assert!(sol.converged, "p={p}: {sol:?}");
            assert!(sol.rho_hat >= crate::spectral::uniform_lower_bound(&minus, p) - 1e-12);
        }
    }

    #[test]
    fn empty_graph_and_errors() {
        let g = Hypergraph::empty(4, 2).unwrap();
        let sol = solve_rho_p(&g, 2.0, &quick()).unwrap();
        assert_eq!((sol.rho_hat, sol.residual), (0.0, 0.0));
        assert!(sol.x.values().iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert!(matches!(solve_rho_p(&g, 1.0, &quick()), Err(Error::BadP(_))));
        let bad = SolverConfig { starts: 0, ..quick() };
        assert!(matches!(solve_rho_p(&g, 2.0, &bad), Err(Error::BadConfig(_))));
    }

    #[test]
    fn isolated_vertices_get_zero_weight() {
        let g = Hypergraph::new(4, 2, [[0, 1]]).unwrap();
        let sol = solve_rho_p(&g, 2.0, &quick()).unwrap();
        assert!((sol.rho_hat - 1.0).abs() < 1e-8);
        assert!(sol.has_flag(SolutionFlag::ZeroEntries));
        assert_eq!(&sol.x.values()[2..], &[0.0, 0.0]);
    }

    #[test]
    fn deterministic_across_runs() {
        let g = Hypergraph::new(5, 3, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 3, 4]]).unwrap();
        let a = solve_rho_p(&g, 2.0, &quick()).unwrap();
        let b = solve_rho_p(&g, 2.0, &quick()).unwrap();
        assert_eq!(a, b);
    }
}
