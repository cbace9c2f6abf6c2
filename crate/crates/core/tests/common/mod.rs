//! Independent reference computations shared by the integration tests. None
//! of them call into the library's numerical code.

#![allow(dead_code)]

use hspex::Hypergraph;

/// Largest adjacency eigenvalue of a 2-graph by power iteration on `A + I`
/// with a Rayleigh-quotient readout. For `r = 2` this is `ρ_2`.
pub fn adjacency_spectral_radius(g: &Hypergraph) -> f64 {
    assert_eq!(g.r(), 2);
    let n = g.n();
    if g.is_empty() {
        return 0.0;
    }
    let mut adj = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        adj[e[0]][e[1]] = 1.0;
        adj[e[1]][e[0]] = 1.0;
    }
    // non-symmetric start so no component is missed by symmetry
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * i as f64).collect();
    let mut last = f64::NAN;
    for it in 0..2_000_000 {
        let mut y = x.clone();
        for i in 0..n {
            for j in 0..n {
                y[i] += adj[i][j] * x[j];
            }
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in y.iter_mut() {
            *v /= norm;
        }
        x = y;
        if it % 64 == 63 {
            let lambda = rayleigh(&adj, &x);
            if (lambda - last).abs() <= 1e-14 * lambda.max(1.0) {
                return lambda;
            }
            last = lambda;
        }
    }
    rayleigh(&adj, &x)
}

fn rayleigh(adj: &[Vec<f64>], x: &[f64]) -> f64 {
    let n = x.len();
    let mut num = 0.0;
    for i in 0..n {
        for j in 0..n {
            num += x[i] * adj[i][j] * x[j];
        }
    }
    num / x.iter().map(|v| v * v).sum::<f64>()
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `r!·Σ_e Π x`, computed edge by edge.
pub fn naive_lagrangian(g: &Hypergraph, x: &[f64]) -> f64 {
    let s: f64 = g.edges().iter().map(|e| e.iter().map(|&v| x[v]).product::<f64>()).sum();
    factorial(g.r()) * s
}

/// `g_v = (r−1)!·Σ_{e∋v} Π_{w∈e−v} x_w`.
pub fn naive_gradient(g: &Hypergraph, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.n()];
    for e in g.edges() {
        for &v in e {
            out[v] += e.iter().filter(|&&w| w != v).map(|&w| x[w]).product::<f64>();
        }
    }
    let c = factorial(g.r() - 1);
    out.iter().map(|s| c * s).collect()
}

/// `max_v |ρ·x_v^{p−1} − g_v|` over every vertex.
pub fn naive_residual(g: &Hypergraph, x: &[f64], p: f64, rho: f64) -> f64 {
    let grad = naive_gradient(g, x);
    x.iter()
        .zip(&grad)
        .map(|(&xv, &gv)| {
            let lhs = if xv > 0.0 { rho * xv.powf(p - 1.0) } else { 0.0 };
            (lhs - gv).abs()
        })
        .fold(0.0, f64::max)
}

/// Every r-graph on `n` labeled vertices, in subset-mask order.
pub fn all_graphs(n: usize, r: usize) -> Vec<Hypergraph> {
    let subsets = hspex::hypergraph::r_subsets(n, r);
    assert!(subsets.len() < 20);
    (0u32..1 << subsets.len())
        .map(|mask| {
            let edges = subsets.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e);
            Hypergraph::new(n, r, edges).unwrap()
        })
        .collect()
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Hypergraph {
    let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| [i, j]));
    Hypergraph::new(a + b, 2, edges).unwrap()
}

pub fn graph(n: usize, r: usize, edges: &[&[usize]]) -> Hypergraph {
    Hypergraph::new(n, r, edges.iter()).unwrap()
}

/// Edges `{0,1,2}, {0,1,3}, {2,4,5}`.
pub fn bowtie() -> Hypergraph {
    graph(6, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 4, 5]])
}

pub fn path(n: usize) -> Hypergraph {
    let edges: Vec<[usize; 2]> = (1..n).map(|i| [i - 1, i]).collect();
    Hypergraph::new(n, 2, edges.iter()).unwrap()
}
