//! Exhaustive decision procedures, with certificates, for k-tightness,
//! k-bridges and λ-plateaus.
//!
//! Subsets are enumerated by increasing size and then lexicographically, so
//! every reported witness is the smallest one in that order. Hosts are
//! limited to 64 vertices; above 24 the procedures log a warning since they
//! are exponential in `n`.

mod partition;
mod subsets;

pub use partition::{partitions_of, refines, IntegerPartition};

use std::collections::BTreeSet;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use subsets::{edge_masks, SubsetsBySize};

const DESK_SCALE: usize = 24;

fn guard_size(g: &Hypergraph, what: &str) -> Result<()> {
    if g.n() > 64 {
        return Err(Error::TooLarge(format!("{what} supports at most 64 vertices, got {}", g.n())));
    }
    if g.n() > DESK_SCALE {
        warn!("{what} on {} vertices enumerates 2^{} subsets", g.n(), g.n());
    }
    Ok(())
}

fn check_k(g: &Hypergraph, k: usize) -> Result<()> {
    if k < 1 || k + 1 > g.r() {
        return Err(Error::BadK { k, max: g.r() - 1 });
    }
    Ok(())
}

fn find_edge(g: &Hypergraph, e: &[usize]) -> Result<Vec<usize>> {
    let mut e = e.to_vec();
    e.sort_unstable();
    if g.has_edge(&e) {
        Ok(e)
    } else {
        Err(Error::NoSuchEdge(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightnessCertificate {
    pub k: usize,
    pub result: bool,
    /// A proper subset `U` inducing an edge that no edge meets in `k..=r−1` vertices.
    pub witness: Option<VertexSet>,
}

/// Decides k-tightness by scanning every proper vertex subset that contains an edge.
pub fn is_k_tight(g: &Hypergraph, k: usize) -> Result<TightnessCertificate> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    check_k(g, k)?;
    guard_size(g, "k-tightness")?;
    let r = g.r() as u32;
    let masks = edge_masks(g.edges());
    for u in SubsetsBySize::new(g.n(), g.r(), g.n() - 1) {
        if !masks.iter().any(|&e| e & !u == 0) {
            continue;
        }
        let met = masks.iter().any(|&e| {
            let c = (e & u).count_ones();
            c >= k as u32 && c < r
        });
        if !met {
            return Ok(TightnessCertificate {
                k,
                result: false,
                witness: Some(VertexSet::from_mask(u)),
            });
        }
    }
    Ok(TightnessCertificate {
        k,
        result: true,
        witness: None,
    })
}

/// Re-checks a non-tightness witness directly against the definition.
pub fn validate_tightness_witness(g: &Hypergraph, k: usize, u: &VertexSet) -> bool {
    let inside: BTreeSet<usize> = u.as_slice().iter().copied().collect();
    let proper = inside.len() < g.n() && inside.iter().all(|&v| v < g.n());
    let induces_edge = g.edges().iter().any(|e| e.iter().all(|v| inside.contains(v)));
    let crossing = g.edges().iter().any(|e| {
        let c = e.iter().filter(|v| inside.contains(v)).count();
        k <= c && c < g.r()
    });
    proper && induces_edge && !crossing
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeCertificate {
    pub edge: Vec<usize>,
    pub k: usize,
    pub result: bool,
    /// The side holding at least `k` vertices of the edge.
    pub a: Option<VertexSet>,
    pub b: Option<VertexSet>,
}

fn crossing(e: u64, a: u64, k: u32) -> bool {
    (e & a).count_ones() >= k && e & !a != 0
}

/// Decides whether `e` is a k-bridge: the unique edge meeting `A` in at least
/// `k` vertices and `B = V ∖ A` in at least one, for some bipartition.
pub fn is_k_bridge(g: &Hypergraph, e: &[usize], k: usize) -> Result<BridgeCertificate> {
    let e = find_edge(g, e)?;
    check_k(g, k)?;
    guard_size(g, "k-bridge search")?;
    let masks = edge_masks(g.edges());
    let target = edge_masks(std::slice::from_ref(&e))[0];
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let k32 = k as u32;
    for a in SubsetsBySize::new(g.n(), 1, g.n().saturating_sub(1)) {
        if !crossing(target, a, k32) {
            continue;
        }
        if masks.iter().all(|&f| f == target || !crossing(f, a, k32)) {
            return Ok(BridgeCertificate {
                edge: e,
                k,
                result: true,
                a: Some(VertexSet::from_mask(a)),
                b: Some(VertexSet::from_mask(full & !a)),
            });
        }
    }
    Ok(BridgeCertificate {
        edge: e,
        k,
        result: false,
        a: None,
        b: None,
    })
}

/// All k-bridges, each with the first bipartition witnessing it.
pub fn find_k_bridges(g: &Hypergraph, k: usize) -> Result<Vec<BridgeCertificate>> {
    check_k(g, k)?;
    guard_size(g, "k-bridge search")?;
    let masks = edge_masks(g.edges());
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let k32 = k as u32;
    let mut first: Vec<Option<u64>> = vec![None; masks.len()];
    let mut remaining = masks.len();
    for a in SubsetsBySize::new(g.n(), 1, g.n().saturating_sub(1)) {
        if remaining == 0 {
            break;
        }
        let mut only = None;
        let mut count = 0;
        for (i, &f) in masks.iter().enumerate() {
            if crossing(f, a, k32) {
                count += 1;
                only = Some(i);
                if count > 1 {
                    break;
                }
            }
        }
        if count == 1 {
            let i = only.unwrap();
            if first[i].is_none() {
                first[i] = Some(a);
                remaining -= 1;
            }
        }
    }
    Ok(first
        .iter()
        .enumerate()
        .filter_map(|(i, a)| {
            a.map(|a| BridgeCertificate {
                edge: g.edges()[i].clone(),
                k,
                result: true,
                a: Some(VertexSet::from_mask(a)),
                b: Some(VertexSet::from_mask(full & !a)),
            })
        })
        .collect())
}

/// Re-checks a bridge certificate directly against the definition.
pub fn validate_bridge_certificate(g: &Hypergraph, cert: &BridgeCertificate) -> bool {
    let (Some(a), Some(b)) = (&cert.a, &cert.b) else {
        return false;
    };
    let a: BTreeSet<usize> = a.as_slice().iter().copied().collect();
    let b: BTreeSet<usize> = b.as_slice().iter().copied().collect();
    let partition = a.is_disjoint(&b) && a.len() + b.len() == g.n() && a.union(&b).all(|&v| v < g.n()) && !b.is_empty();
    let crosses = |f: &Vec<usize>| f.iter().filter(|v| a.contains(v)).count() >= cert.k && f.iter().any(|v| b.contains(v));
    let crossers: Vec<&Vec<usize>> = g.edges().iter().filter(|f| crosses(f)).collect();
    partition && crossers.len() == 1 && *crossers[0] == cert.edge
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlateauCertificate {
    pub edge: Vec<usize>,
    pub lambda: IntegerPartition,
    pub result: bool,
    /// Vertex sets `V(H_j)`, group `j` meeting the edge in `λ_j` vertices.
    /// Components disjoint from the edge are placed in the first group.
    pub groups: Option<Vec<VertexSet>>,
    /// Weights `|e ∩ V(C)|` of the components of `H − e` that meet `e`.
    pub component_weights: Vec<usize>,
}

/// Decides whether `e` is a λ-plateau: the components of `H − e` (isolated
/// vertices kept) can be grouped so that group `j` meets `e` in exactly `λ_j`
/// vertices.
pub fn is_lambda_plateau(h: &Hypergraph, e: &[usize], lambda: &IntegerPartition) -> Result<PlateauCertificate> {
    let e = find_edge(h, e)?;
    if !lambda.is_nontrivial() {
        return Err(Error::TrivialPartition);
    }
    if lambda.target() != h.r() {
        return Err(Error::TargetMismatch(lambda.target(), h.r()));
    }
    let rest = h.remove_edge(&e)?;
    let components = rest.components();
    let weights: Vec<usize> = components.iter().map(|c| c.iter().filter(|v| e.contains(v)).count()).collect();
    let mut weighted: Vec<usize> = (0..components.len()).filter(|&i| weights[i] > 0).collect();
    weighted.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));

    fn assign(items: &[usize], weights: &[usize], capacity: &mut [usize], slot: &mut [usize]) -> bool {
        let Some((&c, rest)) = items.split_first() else {
            return capacity.iter().all(|&x| x == 0);
        };
        for j in 0..capacity.len() {
            if capacity[j] >= weights[c] {
                capacity[j] -= weights[c];
                slot[c] = j;
                if assign(rest, weights, capacity, slot) {
                    return true;
                }
                capacity[j] += weights[c];
            }
        }
        false
    }
    let mut capacity = lambda.parts().to_vec();
    let mut slot = vec![0usize; components.len()];
    let found = assign(&weighted, &weights, &mut capacity, &mut slot);
    let mut component_weights: Vec<usize> = weighted.iter().map(|&i| weights[i]).collect();
    component_weights.sort_unstable_by(|a, b| b.cmp(a));
    let groups = found.then(|| {
        let mut groups = vec![Vec::new(); lambda.len()];
        for (i, comp) in components.iter().enumerate() {
            groups[slot[i]].extend(comp.iter().copied());
        }
        groups
            .into_iter()
            .map(|g| VertexSet::new(g, h.n()).expect("component vertices are in range"))
            .collect()
    });
    Ok(PlateauCertificate {
        edge: e,
        lambda: lambda.clone(),
        result: found,
        groups,
        component_weights,
    })
}

/// Edges of `h` that are λ-plateaus, in edge order.
pub fn find_plateaus(h: &Hypergraph, lambda: &IntegerPartition) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for e in h.edges() {
        if is_lambda_plateau(h, e, lambda)?.result {
            out.push(e.clone());
        }
    }
    Ok(out)
}

/// k-plateaued iff every `λ ⊢ r` with `k ≤ λ_1 ≤ r − 1` has a plateau.
/// Returns the partitions lacking one.
pub fn is_k_plateaued(h: &Hypergraph, k: usize) -> Result<(bool, Vec<IntegerPartition>)> {
    check_k(h, k)?;
    let mut missing = Vec::new();
    for lambda in partitions_of(h.r(), k, h.r() - 1) {
        if find_plateaus(h, &lambda)?.is_empty() {
            missing.push(lambda);
        }
    }
    Ok((missing.is_empty(), missing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{complete_r_graph, ell_cliques};

    fn g(n: usize, r: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, r, edges.iter().copied()).unwrap()
    }

    fn p(parts: &[usize]) -> IntegerPartition {
        IntegerPartition::new(parts.to_vec()).unwrap()
    }

    fn bowtie() -> Hypergraph {
        g(6, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 4, 5]])
    }

    fn p3() -> Hypergraph {
        g(3, 2, &[&[0, 1], &[1, 2]])
    }

    #[test]
    fn tightness_examples() {
        assert!(is_k_tight(&complete_r_graph(4, 3).unwrap(), 2).unwrap().result);
        let two_k3 = ell_cliques(2, 3, 2).unwrap();
        let cert = is_k_tight(&two_k3, 1).unwrap();
        assert!(!cert.result);
        assert_eq!(cert.witness.as_ref().unwrap().as_slice(), &[0, 1, 2]);
        assert!(validate_tightness_witness(&two_k3, 1, cert.witness.as_ref().unwrap()));
        let single = g(4, 3, &[&[0, 1, 2]]);
        let cert = is_k_tight(&single, 1).unwrap();
        assert_eq!(cert.witness.unwrap().as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn tightness_errors() {
        assert!(matches!(is_k_tight(&Hypergraph::empty(3, 2).unwrap(), 1), Err(Error::EmptyGraph)));
        assert!(matches!(is_k_tight(&p3(), 2), Err(Error::BadK { k: 2, max: 1 })));
        assert!(matches!(is_k_tight(&p3(), 0), Err(Error::BadK { .. })));
    }

    #[test]
    fn validator_rejects_bad_witnesses() {
        let two_k3 = ell_cliques(2, 3, 2).unwrap();
        let all = VertexSet::new(0..6, 6).unwrap();
        assert!(!validate_tightness_witness(&two_k3, 1, &all));
        let mixed = VertexSet::new([0, 1, 3], 6).unwrap();
        assert!(!validate_tightness_witness(&two_k3, 1, &mixed));
        let edgeless = VertexSet::new([0, 3], 6).unwrap();
        assert!(!validate_tightness_witness(&two_k3, 1, &edgeless));
    }

    #[test]
    fn bridge_examples() {
        let cert = is_k_bridge(&p3(), &[0, 1], 1).unwrap();
        assert!(cert.result);
        assert_eq!(cert.a.as_ref().unwrap().as_slice(), &[0]);
        assert_eq!(cert.b.as_ref().unwrap().as_slice(), &[1, 2]);
        assert!(validate_bridge_certificate(&p3(), &cert));
        let k3 = complete_r_graph(3, 2).unwrap();
        for e in k3.edges() {
            assert!(!is_k_bridge(&k3, e, 1).unwrap().result);
        }
        let h = g(4, 3, &[&[0, 1, 2], &[1, 2, 3]]);
        let cert = is_k_bridge(&h, &[0, 1, 2], 2).unwrap();
        assert!(cert.result);
        assert_eq!(cert.a.as_ref().unwrap().as_slice(), &[0, 1]);
        assert_eq!(cert.b.as_ref().unwrap().as_slice(), &[2, 3]);
        assert!(validate_bridge_certificate(&h, &cert));
        assert!(matches!(is_k_bridge(&p3(), &[0, 2], 1), Err(Error::NoSuchEdge(_))));
        assert!(matches!(is_k_bridge(&h, &[0, 1, 2], 3), Err(Error::BadK { .. })));
    }

    #[test]
    fn find_bridges_agrees_with_single_edge_search() {
        let h = g(6, 2, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[3, 4], &[4, 5], &[3, 5]]);
        let found = find_k_bridges(&h, 1).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].edge, vec![2, 3]);
        for e in h.edges() {
            let single = is_k_bridge(&h, e, 1).unwrap();
            match found.iter().find(|c| &c.edge == e) {
                Some(c) => assert_eq!(c, &single),
                None => assert!(!single.result),
            }
        }
        assert!(find_k_bridges(&complete_r_graph(4, 3).unwrap(), 1).unwrap().is_empty());
        assert!(find_k_bridges(&complete_r_graph(4, 3).unwrap(), 2).unwrap().is_empty());
    }

    #[test]
    fn plateau_examples() {
        let cert = is_lambda_plateau(&p3(), &[0, 1], &p(&[1, 1])).unwrap();
        assert!(cert.result);
        let groups = cert.groups.unwrap();
        assert_eq!(groups[0].as_slice(), &[0]);
        assert_eq!(groups[1].as_slice(), &[1, 2]);
        let k3 = complete_r_graph(3, 2).unwrap();
        assert!(!is_lambda_plateau(&k3, &[0, 1], &p(&[1, 1])).unwrap().result);
        let cert = is_lambda_plateau(&bowtie(), &[0, 1, 2], &p(&[2, 1])).unwrap();
        assert!(cert.result);
        assert_eq!(cert.component_weights, vec![2, 1]);
        let groups = cert.groups.unwrap();
        assert_eq!(groups[0].as_slice(), &[0, 1, 3]);
        assert_eq!(groups[1].as_slice(), &[2, 4, 5]);
        assert!(matches!(
            is_lambda_plateau(&bowtie(), &[0, 1, 2], &p(&[3])),
            Err(Error::TrivialPartition)
        ));
        assert!(matches!(
            is_lambda_plateau(&bowtie(), &[0, 1, 4], &p(&[2, 1])),
            Err(Error::NoSuchEdge(_))
        ));
    }

    #[test]
    fn plateau_grouping_merges_components() {
        // removing the star edge leaves three singletons of weight 1 each
        let h = g(3, 3, &[&[0, 1, 2]]);
        assert!(is_lambda_plateau(&h, &[0, 1, 2], &p(&[2, 1])).unwrap().result);
        assert!(is_lambda_plateau(&h, &[0, 1, 2], &p(&[1, 1, 1])).unwrap().result);
    }

    #[test]
    fn plateaued_examples() {
        assert_eq!(is_k_plateaued(&p3(), 1).unwrap(), (true, vec![]));
        assert_eq!(is_k_plateaued(&bowtie(), 2).unwrap(), (true, vec![]));
        assert_eq!(is_k_plateaued(&complete_r_graph(4, 3).unwrap(), 2).unwrap(), (false, vec![p(&[2, 1])]));
        assert_eq!(find_plateaus(&p3(), &p(&[1, 1])).unwrap().len(), 2);
    }
}
