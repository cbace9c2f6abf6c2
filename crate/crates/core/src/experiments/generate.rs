use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{r_subsets, Hypergraph};

const REJECTION_TRIES: usize = 1000;

/// Fewest edges that can connect `n` vertices with r-sets.
pub fn min_connected_edges(n: usize, r: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (n - 1).div_ceil(r - 1)
    }
}

/// A connected r-graph with `n` vertices and `m` edges, determined by `seed`.
///
/// Uniformly random edge sets are drawn until one is connected; if that keeps
/// failing (sparse regimes), a random spanning hypertree is grown first and
/// topped up with random edges.
pub fn random_connected_hypergraph(n: usize, r: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::BadUniformity(r));
    }
    let need = min_connected_edges(n, r);
    let all = if n >= r { r_subsets(n, r) } else { Vec::new() };
    if m < need || m > all.len() || (n > 1 && n < r) {
        return Err(Error::Infeasible(format!(
            "a connected {r}-graph on {n} vertices needs between {need} and {} edges, asked for {m}",
            all.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_TRIES {
        let picked: Vec<&Vec<usize>> = all.choose_multiple(&mut rng, m).collect();
        let g = Hypergraph::new(n, r, picked)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    spanning_then_fill(n, r, m, &all, &mut rng)
}

fn spanning_then_fill(n: usize, r: usize, m: usize, all: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Result<Hypergraph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut first = order[..r].to_vec();
    first.sort_unstable();
    let mut edges = vec![first];
    let mut covered = r;
    while covered < n {
        // one already-covered vertex plus up to r−1 new ones, padded with covered vertices
        let fresh = (r - 1).min(n - covered);
        let mut e: Vec<usize> = order[covered..covered + fresh].to_vec();
        let mut pool: Vec<usize> = order[..covered].to_vec();
        pool.shuffle(rng);
        e.extend(pool.into_iter().take(r - fresh));
        covered += fresh;
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    let mut rest: Vec<&Vec<usize>> = all.iter().filter(|e| !edges.contains(e)).collect();
    rest.shuffle(rng);
    let extra = m.saturating_sub(edges.len());
    edges.extend(rest.into_iter().take(extra).cloned());
    let g = Hypergraph::new(n, r, edges)?;
    debug_assert!(g.is_connected());
    Ok(g)
}

/// A random connected instance of moderate density on `lo..=hi` vertices.
pub(crate) fn random_instance(r: usize, lo: usize, hi: usize, seed: u64) -> Result<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(lo..=hi);
    let total = r_subsets(n, r).len();
    let need = min_connected_edges(n, r);
    let m = rng.gen_range(need..=total.max(need));
    random_connected_hypergraph(n, r, m, rng.gen())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_and_deterministic() {
        let g = random_connected_hypergraph(5, 2, 4, 1).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g, random_connected_hypergraph(5, 2, 4, 1).unwrap());
        let h = random_connected_hypergraph(4, 3, 2, 7).unwrap();
        assert!(h.is_connected());
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn sparse_fallback() {
        for seed in 0..20 {
            let g = random_connected_hypergraph(12, 2, 11, seed).unwrap();
            assert!(g.is_connected() && g.edge_count() == 11);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let all = r_subsets(9, 3);
            let t = spanning_then_fill(9, 3, 6, &all, &mut rng).unwrap();
            assert!(t.is_connected() && t.edge_count() == 6, "{t:?}");
        }
    }

    #[test]
    fn infeasible_requests() {
        assert!(matches!(random_connected_hypergraph(5, 2, 3, 0), Err(Error::Infeasible(_))));
        assert!(matches!(random_connected_hypergraph(4, 2, 7, 0), Err(Error::Infeasible(_))));
        assert_eq!(random_connected_hypergraph(1, 2, 0, 0).unwrap().edge_count(), 0);
    }
}
