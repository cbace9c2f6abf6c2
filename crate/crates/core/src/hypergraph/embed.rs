//! Subgraph containment by backtracking.
//!
//! Pattern vertices are placed in a fixed order (descending pattern degree,
//! ties by id) and host candidates are tried in ascending id order, so the
//! first witness found is the lexicographically first one under that order.
//! A host vertex is only tried if its degree is at least the pattern degree,
//! and every pattern edge whose vertices are all placed must map onto a host
//! edge.
//!
//! Everything that depends only on the pattern is computed once in
//! [`PreparedPattern`], which pays off when one pattern is tested against many
//! hosts.

use crate::error::{Error, Result};

use super::Hypergraph;

fn mask_of(verts: &[usize]) -> u128 {
    verts.iter().fold(0u128, |acc, &v| acc | 1u128 << v)
}

/// Edge membership by sorted bitmasks for graphs on at most 128 vertices,
/// falling back to binary search over the edge list otherwise.
struct EdgeLookup<'a> {
    graph: &'a Hypergraph,
    masks: Option<Vec<u128>>,
}

impl<'a> EdgeLookup<'a> {
    fn new(graph: &'a Hypergraph) -> Self {
        let masks = (graph.n() <= 128).then(|| {
            let mut m: Vec<u128> = graph.edges().iter().map(|e| mask_of(e)).collect();
            m.sort_unstable();
            m
        });
        EdgeLookup { graph, masks }
    }

    fn contains(&self, verts: &[usize]) -> bool {
        match &self.masks {
            Some(m) => m.binary_search(&mask_of(verts)).is_ok(),
            None => {
                let mut sorted = verts.to_vec();
                sorted.sort_unstable();
                self.graph.has_edge(&sorted)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Subgraph,
    Induced,
}

/// Placement order for the pattern vertices, with each pattern edge listed
/// under the vertex of that edge placed last.
#[derive(Clone, Debug)]
struct Plan {
    order: Vec<usize>,
    checks: Vec<Vec<usize>>,
}

impl Plan {
    fn new(pattern: &Hypergraph, degrees: &[usize], fixed: &[usize]) -> Self {
        let mut rest: Vec<usize> = (0..pattern.n()).filter(|v| !fixed.contains(v)).collect();
        rest.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
        let mut order = fixed.to_vec();
        order.extend(rest);
        let mut position = vec![0; pattern.n()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut checks = vec![Vec::new(); pattern.n()];
        for (i, e) in pattern.edges().iter().enumerate() {
            let last = e.iter().copied().max_by_key(|&v| position[v]).unwrap();
            checks[last].push(i);
        }
        Plan { order, checks }
    }
}

/// A pattern graph with its search plans precomputed.
#[derive(Clone, Debug)]
pub struct PreparedPattern {
    pattern: Hypergraph,
    degrees: Vec<usize>,
    whole: Plan,
    /// One plan per pattern edge, with that edge's vertices placed first.
    through: Vec<Plan>,
}

const UNMAPPED: usize = usize::MAX;

struct Search<'a> {
    host: &'a Hypergraph,
    lookup: EdgeLookup<'a>,
    host_deg: Vec<usize>,
    pattern: &'a PreparedPattern,
    pattern_lookup: Option<EdgeLookup<'a>>,
    plan: &'a Plan,
    mode: Mode,
    map: Vec<usize>,
    used: Vec<bool>,
    scratch: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(host: &'a Hypergraph, pattern: &'a PreparedPattern, mode: Mode, plan: &'a Plan) -> Self {
        Search {
            host,
            lookup: EdgeLookup::new(host),
            host_deg: host.degrees(),
            pattern,
            pattern_lookup: (mode == Mode::Induced).then(|| EdgeLookup::new(&pattern.pattern)),
            plan,
            mode,
            map: vec![UNMAPPED; pattern.pattern.n()],
            used: vec![false; host.n()],
            scratch: Vec::with_capacity(host.r()),
        }
    }

    fn reset(&mut self, plan: &'a Plan) {
        self.plan = plan;
        self.map.iter_mut().for_each(|m| *m = UNMAPPED);
        self.used.iter_mut().for_each(|u| *u = false);
    }

    fn consistent(&mut self, h: usize) -> bool {
        let edges = self.pattern.pattern.edges();
        for &ei in &self.plan.checks[h] {
            self.scratch.clear();
            self.scratch.extend(edges[ei].iter().map(|&w| self.map[w]));
            if !self.lookup.contains(&self.scratch) {
                return false;
            }
        }
        if self.mode == Mode::Induced && !self.induced_consistent(h) {
            return false;
        }
        true
    }

    /// Every r-set of placed vertices through `h` must be an edge of the host
    /// exactly when it is an edge of the pattern.
    fn induced_consistent(&self, h: usize) -> bool {
        let pattern = &self.pattern.pattern;
        let pattern_lookup = self.pattern_lookup.as_ref().expect("induced mode indexes the pattern");
        let r = pattern.r();
        let placed: Vec<usize> = (0..pattern.n()).filter(|&w| w != h && self.map[w] != UNMAPPED).collect();
        if placed.len() + 1 < r {
            return true;
        }
        let mut idx: Vec<usize> = (0..r - 1).collect();
        let mut pat = Vec::with_capacity(r);
        let mut img = Vec::with_capacity(r);
        loop {
            pat.clear();
            img.clear();
            pat.push(h);
            img.push(self.map[h]);
            for &i in &idx {
                pat.push(placed[i]);
                img.push(self.map[placed[i]]);
            }
            if pattern_lookup.contains(&pat) != self.lookup.contains(&img) {
                return false;
            }
            let k = r - 1;
            let mut i = k;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if idx[i] < placed.len() - k + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.plan.order.len() {
            return true;
        }
        let h = self.plan.order[depth];
        if self.map[h] != UNMAPPED {
            // pre-seeded vertex
            return self.consistent(h) && self.extend(depth + 1);
        }
        let need = self.pattern.degrees[h];
        for g in 0..self.host.n() {
            if self.used[g] || self.host_deg[g] < need {
                continue;
            }
            self.map[h] = g;
            self.used[g] = true;
            if self.consistent(h) && self.extend(depth + 1) {
                return true;
            }
            self.map[h] = UNMAPPED;
            self.used[g] = false;
        }
        false
    }
}

impl PreparedPattern {
    pub fn new(pattern: Hypergraph) -> Self {
        let degrees = pattern.degrees();
        let whole = Plan::new(&pattern, &degrees, &[]);
        let through = pattern.edges().iter().map(|e| Plan::new(&pattern, &degrees, e)).collect();
        PreparedPattern {
            pattern,
            degrees,
            whole,
            through,
        }
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.pattern
    }

    fn check_uniformity(&self, host: &Hypergraph) -> Result<()> {
        if host.r() != self.pattern.r() {
            return Err(Error::UniformityMismatch(host.r(), self.pattern.r()));
        }
        Ok(())
    }

    fn too_big_for(&self, host: &Hypergraph) -> bool {
        self.pattern.n() > host.n() || self.pattern.edge_count() > host.edge_count()
    }

    fn run(&self, host: &Hypergraph, mode: Mode) -> Option<Vec<usize>> {
        if self.too_big_for(host) {
            return None;
        }
        let mut search = Search::new(host, self, mode, &self.whole);
        search.extend(0).then_some(search.map)
    }

    /// A (not necessarily induced) copy of the pattern in `host`, as a map
    /// from pattern vertices to host vertices.
    pub fn find_in(&self, host: &Hypergraph) -> Result<Option<Vec<usize>>> {
        self.check_uniformity(host)?;
        Ok(self.run(host, Mode::Subgraph))
    }

    pub fn find_induced_in(&self, host: &Hypergraph) -> Result<Option<Vec<usize>>> {
        self.check_uniformity(host)?;
        Ok(self.run(host, Mode::Induced))
    }

    /// A copy of the pattern in `host` that uses the host edge `edge`.
    pub fn find_through(&self, host: &Hypergraph, edge: &[usize]) -> Result<Option<Vec<usize>>> {
        self.check_uniformity(host)?;
        let mut target = edge.to_vec();
        target.sort_unstable();
        if !host.has_edge(&target) {
            return Err(Error::NoSuchEdge(target));
        }
        if self.too_big_for(host) {
            return Ok(None);
        }
        let r = self.pattern.r();
        let mut search = Search::new(host, self, Mode::Subgraph, &self.whole);
        for (pe, plan) in self.pattern.edges().iter().zip(&self.through) {
            // try every bijection of the pattern edge onto the target edge
            let mut perm: Vec<usize> = (0..r).collect();
            loop {
                let fits = perm
                    .iter()
                    .enumerate()
                    .all(|(i, &j)| search.host_deg[target[j]] >= self.degrees[pe[i]]);
                if fits {
                    search.reset(plan);
                    for (i, &j) in perm.iter().enumerate() {
                        search.map[pe[i]] = target[j];
                        search.used[target[j]] = true;
                    }
                    if search.extend(0) {
                        return Ok(Some(search.map));
                    }
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        Ok(None)
    }
}

/// Looks for a (not necessarily induced) copy of `pattern` in `host`.
///
/// Returns the embedding `φ` as a vector indexed by pattern vertex.
pub fn contains_subgraph(host: &Hypergraph, pattern: &Hypergraph) -> Result<Option<Vec<usize>>> {
    PreparedPattern::new(pattern.clone()).find_in(host)
}

/// Looks for an induced copy of `pattern` in `host`.
pub fn contains_induced_subgraph(host: &Hypergraph, pattern: &Hypergraph) -> Result<Option<Vec<usize>>> {
    PreparedPattern::new(pattern.clone()).find_induced_in(host)
}

/// Looks for a copy of `pattern` in `host` that uses the host edge `edge`.
///
/// When the host minus `edge` is known to be pattern-free this decides
/// whether the host is, at a fraction of the cost of a full search.
pub fn contains_subgraph_through(host: &Hypergraph, pattern: &Hypergraph, edge: &[usize]) -> Result<Option<Vec<usize>>> {
    PreparedPattern::new(pattern.clone()).find_through(host, edge)
}

/// Advances to the next lexicographic permutation; false after the last one.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
