mod common;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{adjacency_spectral_radius, complete_bipartite, factorial, graph, naive_lagrangian, path};
use hspex::experiments::random_connected_hypergraph;
use hspex::hypergraph::{are_isomorphic, complete_r_graph, r_subsets};
use hspex::spectral::{lagrangian, rho_p_bruteforce, DEFAULT_GRID_DEPTH};
use hspex::{solve_rho_p, Hypergraph, SolverConfig};

fn rho(g: &Hypergraph, p: f64) -> f64 {
    let sol = solve_rho_p(g, p, &SolverConfig::default()).unwrap();
    assert!(sol.converged, "{g:?} p={p}: {sol:?}");
    sol.rho_hat
}

fn cycle(n: usize) -> Hypergraph {
    let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
    Hypergraph::new(n, 2, edges.iter()).unwrap()
}

#[test]
fn named_graphs_match_adjacency_spectrum() {
    let cases = [
        (complete_r_graph(5, 2).unwrap(), 4.0),
        (cycle(7), 2.0),
        (complete_bipartite(2, 5), 10f64.sqrt()),
        (complete_bipartite(3, 3), 3.0),
        (path(4), (1.0 + 5f64.sqrt()) / 2.0),
    ];
    for (g, exact) in cases {
        let oracle = adjacency_spectral_radius(&g);
        assert!((oracle - exact).abs() < 1e-10, "oracle {oracle} vs {exact}");
        assert!((rho(&g, 2.0) - exact).abs() < 1e-9);
    }
}

#[test]
fn complete_graphs_attain_power_mean_value() {
    // Maclaurin plus the power-mean inequality put the maximum at the uniform vector.
    for (t, r) in [(4, 2), (5, 3), (5, 4), (6, 3)] {
        let g = complete_r_graph(t, r).unwrap();
        let edges = r_subsets(t, r).len() as f64;
        for p in [1.5, 2.0, 3.0, 5.0] {
            let exact = factorial(r) * edges * (t as f64).powf(-(r as f64) / p);
            assert!((rho(&g, p) - exact).abs() < 1e-9 * exact, "K_{t}^({r}), p={p}");
        }
    }
}

/// Golden-section search for `ρ_p` of the star `K_{1,k}`, whose maximizer
/// gives the leaves equal weight.
fn star_oracle(k: usize, p: f64) -> f64 {
    let f = |c: f64| {
        let leaf = ((1.0 - c.powf(p)) / k as f64).powf(1.0 / p);
        2.0 * k as f64 * c * leaf
    };
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) < f(d) {
            a = c;
        } else {
            b = d;
        }
    }
    f((a + b) / 2.0)
}

#[test]
fn stars_match_one_dimensional_search() {
    for k in [1, 3, 6] {
        let edges: Vec<[usize; 2]> = (1..=k).map(|i| [0, i]).collect();
        let star = Hypergraph::new(k + 1, 2, edges.iter()).unwrap();
        for p in [1.5, 2.0, 2.5, 4.0] {
            let oracle = star_oracle(k, p);
            assert!((rho(&star, p) - oracle).abs() < 1e-9, "K_1,{k} p={p}");
        }
    }
}

#[test]
fn random_three_graphs_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..6 {
        let m = rng.gen_range(2..=6);
        let g = random_connected_hypergraph(5, 3, m, rng.gen()).unwrap();
        for p in [2.0, 3.0] {
            let brute = rho_p_bruteforce(&g, p, DEFAULT_GRID_DEPTH).unwrap();
            assert!((rho(&g, p) - brute).abs() < 1e-4, "{g:?} p={p}");
        }
    }
}

#[test]
fn lagrangian_matches_edge_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let g = random_connected_hypergraph(7, 3, 12, rng.gen()).unwrap();
        let x: Vec<f64> = (0..7).map(|_| rng.gen_range(0.0..2.0)).collect();
        let ours = lagrangian(&g, &x).unwrap();
        let naive = naive_lagrangian(&g, &x);
        assert!((ours - naive).abs() <= 1e-12 * naive.abs().max(1.0));
    }
}

fn isomorphic_by_permutations(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.n() != b.n() || a.r() != b.r() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..a.n()).collect();
    loop {
        if a.relabel(&perm).unwrap() == *b {
            return true;
        }
        // next lexicographic permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return false;
        };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[test]
fn isomorphism_matches_permutation_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let all = r_subsets(6, 2);
    for _ in 0..200 {
        let m = rng.gen_range(0..=all.len());
        let a = Hypergraph::new(6, 2, all.choose_multiple(&mut rng, m)).unwrap();
        let b = if rng.gen_bool(0.5) {
            let mut perm: Vec<usize> = (0..6).collect();
            perm.shuffle(&mut rng);
            a.relabel(&perm).unwrap()
        } else {
            Hypergraph::new(6, 2, all.choose_multiple(&mut rng, m)).unwrap()
        };
        assert_eq!(are_isomorphic(&a, &b), isomorphic_by_permutations(&a, &b), "{a:?} / {b:?}");
    }
    let c6 = cycle(6);
    let two_triangles = graph(6, 2, &[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]);
    assert!(!are_isomorphic(&c6, &two_triangles));
    assert!(!isomorphic_by_permutations(&c6, &two_triangles));
}
