//! Exact canonical forms by colour refinement plus individualization.
//!
//! The search tree is defined without reference to vertex labels: refine the
//! colouring until stable, pick the first non-singleton cell, and branch on
//! every vertex in it. Each discrete leaf yields a relabeling; the canonical
//! form is the lexicographically smallest relabeled edge list over all
//! leaves. No automorphism pruning is done, which is fine at desk scale.

use super::Hypergraph;

struct Refiner<'a> {
    graph: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
}

impl<'a> Refiner<'a> {
    fn new(graph: &'a Hypergraph) -> Self {
        Refiner {
            graph,
            incidence: graph.incidence(),
        }
    }

    /// Refines `colors` (dense ranks `0..k`) to the coarsest equitable
    /// refinement. Ranks are assigned by sorting label-free signatures, so
    /// the result commutes with relabeling.
    fn refine(&self, colors: &mut [usize]) {
        let n = colors.len();
        let mut classes = count_classes(colors);
        loop {
            let mut sigs: Vec<(usize, Vec<Vec<usize>>, usize)> = (0..n)
                .map(|v| {
                    let mut around: Vec<Vec<usize>> = self.incidence[v]
                        .iter()
                        .map(|&ei| {
                            let mut c: Vec<usize> = self.graph.edges()[ei]
                                .iter()
                                .filter(|&&w| w != v)
                                .map(|&w| colors[w])
                                .collect();
                            c.sort_unstable();
                            c
                        })
                        .collect();
                    around.sort_unstable();
                    (colors[v], around, v)
                })
                .collect();
            sigs.sort_unstable_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
            let mut rank = 0;
            for i in 0..n {
                if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                    rank += 1;
                }
                colors[sigs[i].2] = rank;
            }
            let now = if n == 0 { 0 } else { rank + 1 };
            if now == classes {
                return;
            }
            classes = now;
        }
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let spread: Vec<usize> = colors
        .iter()
        .enumerate()
        .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
        .collect();
    let mut sorted = spread.clone();
    sorted.sort_unstable();
    sorted.dedup();
    spread.iter().map(|c| sorted.binary_search(c).unwrap()).collect()
}

fn relabeled_edges(g: &Hypergraph, colors: &[usize]) -> Vec<Vec<usize>> {
    let mut edges: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .map(|e| {
            let mut f: Vec<usize> = e.iter().map(|&v| colors[v]).collect();
            f.sort_unstable();
            f
        })
        .collect();
    edges.sort_unstable();
    edges
}

fn search(refiner: &Refiner, colors: Vec<usize>, best: &mut Option<Vec<Vec<usize>>>) {
    let n = colors.len();
    let mut size = vec![0usize; n];
    for &c in &colors {
        size[c] += 1;
    }
    let target = (0..n).find(|&c| size[c] > 1);
    match target {
        None => {
            let form = relabeled_edges(refiner.graph, &colors);
            if best.as_ref().is_none_or(|b| form < *b) {
                *best = Some(form);
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&v| colors[v] == cell) {
                let mut next = individualize(&colors, v);
                refiner.refine(&mut next);
                search(refiner, next, best);
            }
        }
    }
}

/// Canonical edge list: equal for two graphs iff they are isomorphic.
fn canonical_form(g: &Hypergraph) -> Vec<Vec<usize>> {
    let refiner = Refiner::new(g);
    let mut colors = vec![0; g.n()];
    refiner.refine(&mut colors);
    let mut best = None;
    search(&refiner, colors, &mut best);
    best.unwrap_or_default()
}

/// Isomorphism-invariant byte key: `n`, `r`, `m` and the canonical edge list,
/// each as little-endian `u32`.
pub fn canonical_key(g: &Hypergraph) -> Vec<u8> {
    let form = canonical_form(g);
    let mut key = Vec::with_capacity(12 + 4 * g.r() * form.len());
    for x in [g.n(), g.r(), form.len()] {
        key.extend_from_slice(&(x as u32).to_le_bytes());
    }
    for e in &form {
        for &v in e {
            key.extend_from_slice(&(v as u32).to_le_bytes());
        }
    }
    key
}

/// The canonical relabeling of `g`: isomorphic graphs map to equal values.
pub fn canonical_graph(g: &Hypergraph) -> Hypergraph {
    Hypergraph::from_sorted_unchecked(g.n(), g.r(), canonical_form(g))
}

pub fn canonical_key_hex(g: &Hypergraph) -> String {
    canonical_key(g).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.n() == b.n() && a.r() == b.r() && a.edge_count() == b.edge_count() && canonical_key(a) == canonical_key(b)
}
