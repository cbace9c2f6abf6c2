//! Immutable r-uniform hypergraphs and their combinatorial transformations.
//!
//! Vertices are the ids `0..n`. Every edge is stored as a strictly increasing
//! id sequence and the edge list itself is kept in lexicographic order, so two
//! graphs with the same vertex count, uniformity and edge set compare equal.
//! Every transformation returns a new value; isolated vertices are never
//! dropped.

mod canon;
mod embed;
mod io;

pub use canon::{are_isomorphic, canonical_graph, canonical_key, canonical_key_hex};
pub use embed::{contains_induced_subgraph, contains_subgraph, contains_subgraph_through, PreparedPattern};
pub use io::{parse_hypergraph, read_hypergraph, serialize};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::IntegerPartition;

/// An r-uniform hypergraph on the vertex set `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

/// A sorted set of distinct vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Builds a vertex set for a host graph on `n` vertices.
    pub fn new(ids: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        if let Some(&vertex) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::OutOfRange { vertex, n });
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(VertexSet(ids))
    }

    /// Vertex set from a bitmask over ids `0..64`.
    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&v| mask >> v & 1 == 1).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

fn normalize_edge(edge: &[usize], n: usize, r: usize) -> Result<Vec<usize>> {
    if edge.len() != r {
        return Err(Error::WrongArity {
            edge: edge.to_vec(),
            expected: r,
            got: edge.len(),
        });
    }
    let mut e = edge.to_vec();
    e.sort_unstable();
    if e.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RepeatedVertex(edge.to_vec()));
    }
    if let Some(&vertex) = e.iter().find(|&&v| v >= n) {
        return Err(Error::OutOfRange { vertex, n });
    }
    Ok(e)
}

impl Hypergraph {
    /// Validates, deduplicates and sorts the given edges.
    pub fn new<E, I>(n: usize, r: usize, edges: I) -> Result<Self>
    where
        E: AsRef<[usize]>,
        I: IntoIterator<Item = E>,
    {
        if r < 2 {
            return Err(Error::BadUniformity(r));
        }
        let mut out = Vec::new();
        for e in edges {
            out.push(normalize_edge(e.as_ref(), n, r)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Hypergraph { n, r, edges: out })
    }

    /// The edgeless r-graph on `n` vertices.
    pub fn empty(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, Vec::<Vec<usize>>::new())
    }

    /// Internal constructor for edge lists that are already valid.
    pub(crate) fn from_sorted_unchecked(n: usize, r: usize, mut edges: Vec<Vec<usize>>) -> Self {
        for e in edges.iter_mut() {
            e.sort_unstable();
        }
        edges.sort_unstable();
        edges.dedup();
        debug_assert!(edges.iter().all(|e| e.len() == r && e.iter().all(|&v| v < n)));
        Hypergraph { n, r, edges }
    }

    /// Appends an edge that sorts after every current edge.
    pub(crate) fn push_edge_unchecked(&mut self, edge: Vec<usize>) {
        debug_assert!(self.edges.last().is_none_or(|last| *last < edge));
        self.edges.push(edge);
    }

    pub(crate) fn pop_edge(&mut self) -> Option<Vec<usize>> {
        self.edges.pop()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Membership test for an edge given in any vertex order.
    pub fn has_edge(&self, edge: &[usize]) -> bool {
        if edge.len() != self.r {
            return false;
        }
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).is_ok()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::OutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(&v)).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// `(Δ, δ)`; isolated vertices count with degree 0. The vertexless graph gives `(0, 0)`.
    pub fn degree_extremes(&self) -> (usize, usize) {
        let deg = self.degrees();
        let max = deg.iter().copied().max().unwrap_or(0);
        let min = deg.iter().copied().min().unwrap_or(0);
        (max, min)
    }

    /// For each vertex, the indices of the edges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Connected components of the vertex-edge incidence structure, each
    /// sorted, listed in order of their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in &self.edges {
            let mut root = find(&mut parent, e[0]);
            for &v in &e[1..] {
                let other = find(&mut parent, v);
                if other != root {
                    let (lo, hi) = if other < root { (other, root) } else { (root, other) };
                    parent[hi] = lo;
                    root = lo;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n];
        for v in 0..self.n {
            let root = find(&mut parent, v);
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(v);
        }
        groups
    }

    /// True iff the incidence structure has a single component covering every
    /// vertex. Graphs on at most one vertex are connected.
    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// True iff every pair of distinct vertices lies in a common edge.
    pub fn is_2_covering(&self) -> bool {
        let mut covered = vec![false; self.n * self.n];
        for e in &self.edges {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    covered[a * self.n + b] = true;
                }
            }
        }
        (0..self.n).all(|a| (a + 1..self.n).all(|b| covered[a * self.n + b]))
    }

    /// Induced subgraph on `s`, relabeled order-preservingly to `0..|s|`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Self> {
        if let Some(&vertex) = s.as_slice().iter().find(|&&v| v >= self.n) {
            return Err(Error::OutOfRange { vertex, n: self.n });
        }
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in s.as_slice().iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| new_id[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| new_id[v]).collect())
            .collect();
        Ok(Self::from_sorted_unchecked(s.len(), self.r, edges))
    }

    pub fn remove_edge(&self, edge: &[usize]) -> Result<Self> {
        let e = normalize_edge(edge, self.n, self.r)?;
        match self.edges.binary_search(&e) {
            Ok(i) => {
                let mut edges = self.edges.clone();
                edges.remove(i);
                Ok(Hypergraph { n: self.n, r: self.r, edges })
            }
            Err(_) => Err(Error::NoSuchEdge(e)),
        }
    }

    /// Returns the graph with `edge` added (a no-op if already present).
    pub fn add_edge(&self, edge: &[usize]) -> Result<Self> {
        let e = normalize_edge(edge, self.n, self.r)?;
        let mut edges = self.edges.clone();
        if let Err(i) = edges.binary_search(&e) {
            edges.insert(i, e);
        }
        Ok(Hypergraph { n: self.n, r: self.r, edges })
    }

    /// Zykov symmetrization `G_{u→v}`: every edge at `u` is deleted, then each
    /// edge `e ∋ v` with `u ∉ e` contributes `e + u − v`. `u == v` is the identity.
    pub fn clone_vertex(&self, u: usize, v: usize) -> Result<Self> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(self.clone());
        }
        let mut edges: Vec<Vec<usize>> = self.edges.iter().filter(|e| !e.contains(&u)).cloned().collect();
        for e in &self.edges {
            if e.contains(&v) && !e.contains(&u) {
                edges.push(e.iter().map(|&w| if w == v { u } else { w }).collect());
            }
        }
        Ok(Self::from_sorted_unchecked(self.n, self.r, edges))
    }

    /// Blow-up `G(t)`: vertex `v` becomes `t[v]` copies. Copies are numbered
    /// blockwise, all copies of vertex 0 first.
    pub fn blow_up(&self, t: &[usize]) -> Result<Self> {
        if t.len() != self.n {
            return Err(Error::BadCounts(format!("expected {} counts, got {}", self.n, t.len())));
        }
        if let Some(v) = t.iter().position(|&c| c == 0) {
            return Err(Error::BadCounts(format!("vertex {v} has count 0")));
        }
        let mut offset = Vec::with_capacity(self.n);
        let mut total = 0;
        for &c in t {
            offset.push(total);
            total += c;
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            let mut idx = vec![0usize; self.r];
            'odometer: loop {
                edges.push(e.iter().zip(&idx).map(|(&v, &j)| offset[v] + j).collect());
                let mut pos = self.r;
                loop {
                    if pos == 0 {
                        break 'odometer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < t[e[pos]] {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        Ok(Self::from_sorted_unchecked(total, self.r, edges))
    }

    /// Vertex-disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::UniformityMismatch(self.r, other.r));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| e.iter().map(|&v| v + self.n).collect()));
        Ok(Hypergraph {
            n: self.n + other.n,
            r: self.r,
            edges,
        })
    }

    /// Applies the relabeling `v ↦ perm[v]`, which must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::BadCounts(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let edges = self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect()).collect();
        Ok(Self::from_sorted_unchecked(self.n, self.r, edges))
    }

    /// All r-subsets of `0..n` not already edges, in lexicographic order.
    pub fn non_edges(&self) -> Vec<Vec<usize>> {
        r_subsets(self.n, self.r)
            .into_iter()
            .filter(|e| self.edges.binary_search(e).is_err())
            .collect()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn r_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The complete r-graph `K_t^(r)`.
pub fn complete_r_graph(t: usize, r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::BadUniformity(r));
    }
    Ok(Hypergraph::from_sorted_unchecked(t, r, r_subsets(t, r)))
}

/// `ℓ` vertex-disjoint copies of `K_t^(r)`; clique `j` occupies ids `j·t..(j+1)·t`.
pub fn ell_cliques(ell: usize, t: usize, r: usize) -> Result<Hypergraph> {
    let clique = complete_r_graph(t, r)?;
    let mut g = Hypergraph::empty(0, r)?;
    for _ in 0..ell {
        g = g.disjoint_union(&clique)?;
    }
    Ok(g)
}

/// `ℓ` disjoint copies of `K_t^(r)` plus one extra edge meeting clique `j` in
/// exactly `λ_j` vertices, namely its `λ_j` lowest ids.
pub fn l_gadget(ell: usize, lambda: &IntegerPartition, t: usize) -> Result<Hypergraph> {
    if !lambda.is_nontrivial() {
        return Err(Error::BadPartition(format!("{lambda} is trivial")));
    }
    if lambda.len() != ell {
        return Err(Error::BadPartition(format!("{lambda} has {} parts, expected {ell}", lambda.len())));
    }
    let r = lambda.target();
    if t < r || t < lambda.largest() {
        return Err(Error::TooSmall(format!("clique size {t} cannot host partition {lambda} of {r}")));
    }
    let base = ell_cliques(ell, t, r)?;
    let extra: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(j, &part)| (0..part).map(move |i| j * t + i))
        .collect();
    base.add_edge(&extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, r: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, r, edges.iter().copied()).unwrap()
    }

    #[test]
    fn construction_dedups_and_validates() {
        let e1 = g(3, 3, &[&[0, 1, 2]]);
        assert_eq!(e1.edge_count(), 1);
        let dup = g(3, 2, &[&[0, 1], &[1, 0]]);
        assert_eq!(dup.edge_count(), 1);
        assert!(matches!(Hypergraph::new(3, 3, [[0, 1]]), Err(Error::WrongArity { .. })));
        assert!(matches!(Hypergraph::new(3, 3, [[0, 0, 1]]), Err(Error::RepeatedVertex(_))));
        assert!(matches!(Hypergraph::new(3, 2, [[0, 3]]), Err(Error::OutOfRange { .. })));
        assert!(matches!(Hypergraph::new(3, 1, [[0]]), Err(Error::BadUniformity(1))));
    }

    #[test]
    fn degrees() {
        let p3 = g(3, 2, &[&[0, 1], &[1, 2]]);
        assert_eq!(p3.degree(1).unwrap(), 2);
        assert_eq!(p3.degree_extremes(), (2, 1));
        assert!(p3.degree(3).is_err());
        let k43 = complete_r_graph(4, 3).unwrap();
        assert!((0..4).all(|v| k43.degree(v).unwrap() == 3));
        let lonely = g(3, 2, &[&[0, 1]]);
        assert_eq!(lonely.degree_extremes(), (1, 0));
    }

    #[test]
    fn connectivity() {
        assert!(g(3, 2, &[&[0, 1], &[1, 2]]).is_connected());
        assert!(!ell_cliques(2, 3, 2).unwrap().is_connected());
        assert!(g(3, 3, &[&[0, 1, 2]]).is_connected());
        assert!(!g(4, 3, &[&[0, 1, 2]]).is_connected());
        assert!(Hypergraph::empty(1, 2).unwrap().is_connected());
        assert!(Hypergraph::empty(0, 2).unwrap().is_connected());
        assert!(!Hypergraph::empty(2, 2).unwrap().is_connected());
    }

    #[test]
    fn induced_subgraphs() {
        let k3 = complete_r_graph(3, 2).unwrap();
        let s = VertexSet::new([0, 1], 3).unwrap();
        assert_eq!(k3.induced_subgraph(&s).unwrap(), g(2, 2, &[&[0, 1]]));
        let p3 = g(3, 2, &[&[0, 1], &[1, 2]]);
        let s = VertexSet::new([0, 2], 3).unwrap();
        assert_eq!(p3.induced_subgraph(&s).unwrap(), Hypergraph::empty(2, 2).unwrap());
        let k43 = complete_r_graph(4, 3).unwrap();
        let s = VertexSet::new([0, 1, 2], 4).unwrap();
        assert_eq!(k43.induced_subgraph(&s).unwrap(), g(3, 3, &[&[0, 1, 2]]));
        assert!(VertexSet::new([5], 4).is_err());
        let all = VertexSet::new(0..4, 4).unwrap();
        assert_eq!(k43.induced_subgraph(&all).unwrap(), k43);
    }

    #[test]
    fn edge_removal() {
        let k3 = complete_r_graph(3, 2).unwrap();
        assert_eq!(k3.remove_edge(&[1, 0]).unwrap(), g(3, 2, &[&[0, 2], &[1, 2]]));
        let e1 = g(3, 3, &[&[0, 1, 2]]);
        let bare = e1.remove_edge(&[0, 1, 2]).unwrap();
        assert_eq!(bare.n(), 3);
        assert!(bare.is_empty());
        let p3 = g(3, 2, &[&[0, 1], &[1, 2]]);
        assert!(matches!(p3.remove_edge(&[0, 2]), Err(Error::NoSuchEdge(_))));
    }

    #[test]
    fn cloning() {
        let k3 = complete_r_graph(3, 2).unwrap();
        assert_eq!(k3.clone_vertex(0, 1).unwrap(), g(3, 2, &[&[1, 2], &[0, 2]]));
        let h = g(4, 3, &[&[0, 1, 2]]);
        assert_eq!(h.clone_vertex(3, 0).unwrap(), g(4, 3, &[&[0, 1, 2], &[1, 2, 3]]));
        assert_eq!(k3.clone_vertex(2, 2).unwrap(), k3);
        assert!(k3.clone_vertex(3, 0).is_err());
    }

    #[test]
    fn blow_ups() {
        let k2 = complete_r_graph(2, 2).unwrap();
        let c4 = k2.blow_up(&[2, 2]).unwrap();
        assert_eq!(c4, g(4, 2, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]));
        let e1 = g(3, 3, &[&[0, 1, 2]]);
        assert_eq!(e1.blow_up(&[1, 1, 1]).unwrap(), e1);
        let b = e1.blow_up(&[2, 1, 1]).unwrap();
        assert_eq!(b, g(4, 3, &[&[0, 2, 3], &[1, 2, 3]]));
        assert!(matches!(e1.blow_up(&[1, 0, 1]), Err(Error::BadCounts(_))));
        assert!(matches!(e1.blow_up(&[1, 1]), Err(Error::BadCounts(_))));
    }

    #[test]
    fn unions_and_cliques() {
        let two_k3 = ell_cliques(2, 3, 2).unwrap();
        assert_eq!((two_k3.n(), two_k3.edge_count()), (6, 6));
        let k43 = ell_cliques(1, 4, 3).unwrap();
        assert_eq!(k43.edge_count(), 4);
        let e1 = g(3, 3, &[&[0, 1, 2]]);
        let u = e1.disjoint_union(&e1).unwrap();
        assert_eq!((u.n(), u.edge_count()), (6, 2));
        assert!(matches!(
            e1.disjoint_union(&complete_r_graph(3, 2).unwrap()),
            Err(Error::UniformityMismatch(3, 2))
        ));
        assert_eq!(complete_r_graph(3, 2).unwrap().edge_count(), 3);
        let small = complete_r_graph(2, 3).unwrap();
        assert_eq!((small.n(), small.edge_count()), (2, 0));
    }

    #[test]
    fn gadgets() {
        let l11 = IntegerPartition::new(vec![1, 1]).unwrap();
        let gad = l_gadget(2, &l11, 2).unwrap();
        assert_eq!(gad, g(4, 2, &[&[0, 1], &[2, 3], &[0, 2]]));
        let l21 = IntegerPartition::new(vec![2, 1]).unwrap();
        let gad = l_gadget(2, &l21, 4).unwrap();
        assert_eq!(gad.edge_count(), 9);
        assert!(gad.has_edge(&[0, 1, 4]));
        let trivial = IntegerPartition::new(vec![3]).unwrap();
        assert!(matches!(l_gadget(1, &trivial, 4), Err(Error::BadPartition(_))));
        assert!(matches!(l_gadget(3, &l21, 4), Err(Error::BadPartition(_))));
        assert!(matches!(l_gadget(2, &l21, 2), Err(Error::TooSmall(_))));
    }

    #[test]
    fn two_covering() {
        assert!(complete_r_graph(4, 3).unwrap().is_2_covering());
        assert!(complete_r_graph(3, 2).unwrap().is_2_covering());
        assert!(!g(5, 3, &[&[0, 1, 2], &[2, 3, 4]]).is_2_covering());
    }

    #[test]
    fn subsets_in_lex_order() {
        assert_eq!(r_subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(r_subsets(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(r_subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
