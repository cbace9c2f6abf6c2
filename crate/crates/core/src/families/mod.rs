//! Hypergraph families given by a membership predicate: `H`-free families,
//! plus the induced-free and blow-up-closure predicates used as
//! counterexample fixtures. Saturation, closure witnesses and exhaustive
//! extremal search live here as well.

mod enumerate;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{canonical_key, Hypergraph, PreparedPattern, VertexSet};

pub use enumerate::{
    count_members, enumerate_family, extremal_lambda_p, extremal_pi, ExtremalResult, MAX_CANDIDATE_EDGES,
};

/// A family of r-graphs decided by a membership predicate.
pub trait Family: Sync {
    fn uniformity(&self) -> usize;

    /// Membership for a graph already known to have the right uniformity.
    fn contains_graph(&self, g: &Hypergraph) -> bool;

    /// True if the family is closed under deleting edges, which lets
    /// enumeration test each added edge incrementally.
    fn is_monotone(&self) -> bool {
        false
    }

    /// For a monotone family: given that `g − edge` is a member, whether `g` is.
    fn admits_edge(&self, g: &Hypergraph, _edge: &[usize]) -> bool {
        self.contains_graph(g)
    }

    fn is_member(&self, g: &Hypergraph) -> Result<bool> {
        if g.r() != self.uniformity() {
            return Err(Error::UniformityMismatch(g.r(), self.uniformity()));
        }
        Ok(self.contains_graph(g))
    }
}

fn common_uniformity(graphs: &[Hypergraph]) -> Result<usize> {
    let first = graphs
        .first()
        .ok_or_else(|| Error::BadConfig("a family needs at least one forbidden graph".into()))?;
    if let Some(other) = graphs.iter().find(|h| h.r() != first.r()) {
        return Err(Error::UniformityMismatch(other.r(), first.r()));
    }
    Ok(first.r())
}

/// `F(𝓗)`: graphs containing no copy (not necessarily induced) of any forbidden graph.
#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenFamily {
    forbidden: Vec<Hypergraph>,
    #[serde(skip)]
    prepared: Vec<PreparedPattern>,
    r: usize,
}

impl ForbiddenFamily {
    pub fn new(forbidden: Vec<Hypergraph>) -> Result<Self> {
        let r = common_uniformity(&forbidden)?;
        let prepared = forbidden.iter().cloned().map(PreparedPattern::new).collect();
        Ok(ForbiddenFamily { forbidden, prepared, r })
    }

    pub fn single(h: Hypergraph) -> Self {
        ForbiddenFamily::new(vec![h]).expect("one graph has a common uniformity")
    }

    pub fn forbidden(&self) -> &[Hypergraph] {
        &self.forbidden
    }
}

impl Family for ForbiddenFamily {
    fn uniformity(&self) -> usize {
        self.r
    }

    fn contains_graph(&self, g: &Hypergraph) -> bool {
        self.prepared.iter().all(|h| matches!(h.find_in(g), Ok(None)))
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn admits_edge(&self, g: &Hypergraph, edge: &[usize]) -> bool {
        self.prepared.iter().all(|h| matches!(h.find_through(g, edge), Ok(None)))
    }
}

/// Graphs containing no induced copy of any forbidden graph. Not closed under
/// deleting edges in general.
#[derive(Clone, Debug, Serialize)]
pub struct InducedFreeFamily {
    forbidden: Vec<Hypergraph>,
    #[serde(skip)]
    prepared: Vec<PreparedPattern>,
    r: usize,
}

impl InducedFreeFamily {
    pub fn new(forbidden: Vec<Hypergraph>) -> Result<Self> {
        let r = common_uniformity(&forbidden)?;
        let prepared = forbidden.iter().cloned().map(PreparedPattern::new).collect();
        Ok(InducedFreeFamily { forbidden, prepared, r })
    }
}

impl Family for InducedFreeFamily {
    fn uniformity(&self) -> usize {
        self.r
    }

    fn contains_graph(&self, g: &Hypergraph) -> bool {
        self.prepared.iter().all(|h| matches!(h.find_induced_in(g), Ok(None)))
    }
}

/// The blow-ups `B(t)` of a fixed base graph over all `t ≥ 1` (every vertex
/// kept at least once), up to isomorphism.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowUpFamily {
    base: Hypergraph,
}

impl BlowUpFamily {
    pub fn new(base: Hypergraph) -> Self {
        BlowUpFamily { base }
    }
}

impl Family for BlowUpFamily {
    fn uniformity(&self) -> usize {
        self.base.r()
    }

    fn contains_graph(&self, g: &Hypergraph) -> bool {
        let k = self.base.n();
        if g.n() < k || (k == 0 && g.n() > 0) {
            return false;
        }
        if k == 0 {
            return true;
        }
        let key = canonical_key(g);
        let mut t = Vec::with_capacity(k);
        any_composition(g.n(), k, &mut t, &mut |t| {
            self.base
                .blow_up(t)
                .is_ok_and(|b| b.edge_count() == g.edge_count() && canonical_key(&b) == key)
        })
    }
}

/// Calls `f` on compositions of `total` into `parts` positive parts until it returns true.
fn any_composition(total: usize, parts: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if parts == 1 {
        cur.push(total);
        let hit = f(cur);
        cur.pop();
        return hit;
    }
    for first in 1..=total.saturating_sub(parts - 1) {
        cur.push(first);
        let hit = any_composition(total - first, parts - 1, cur, f);
        cur.pop();
        if hit {
            return true;
        }
    }
    false
}

fn require_member<F: Family + ?Sized>(family: &F, g: &Hypergraph) -> Result<()> {
    if family.is_member(g)? {
        Ok(())
    } else {
        Err(Error::NotMember)
    }
}

/// The first non-edge (in lexicographic order) whose addition keeps `g` in
/// the family, or `None` if `g` is edge-maximal.
pub fn first_augmenting_edge<F: Family + ?Sized>(family: &F, g: &Hypergraph) -> Result<Option<Vec<usize>>> {
    require_member(family, g)?;
    for e in g.non_edges() {
        let bigger = g.add_edge(&e)?;
        let stays = if family.is_monotone() {
            family.admits_edge(&bigger, &e)
        } else {
            family.contains_graph(&bigger)
        };
        if stays {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

pub fn is_edge_maximal<F: Family + ?Sized>(family: &F, g: &Hypergraph) -> Result<bool> {
    Ok(first_augmenting_edge(family, g)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Lex,
    Random(u64),
}

/// Greedy saturation: each r-set not already an edge is considered once, in
/// the given order, and added if the result stays in the family.
///
/// For monotone families one pass is enough: a candidate rejected early stays
/// rejected, since later additions only add edges.
pub fn saturate<F: Family + ?Sized>(family: &F, g0: &Hypergraph, order: Order) -> Result<Hypergraph> {
    require_member(family, g0)?;
    let mut candidates = g0.non_edges();
    if let Order::Random(seed) = order {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut g = g0.clone();
    loop {
        let mut added = false;
        for e in &candidates {
            if g.has_edge(e) {
                continue;
            }
            let bigger = g.add_edge(e)?;
            let stays = if family.is_monotone() {
                family.admits_edge(&bigger, e)
            } else {
                family.contains_graph(&bigger)
            };
            if stays {
                g = bigger;
                added = true;
            }
        }
        if family.is_monotone() || !added {
            return Ok(g);
        }
    }
}

/// The first ordered pair `(u, v)` with `G_{u→v}` outside the family.
pub fn find_clonal_violation<F: Family + ?Sized>(family: &F, g: &Hypergraph) -> Result<Option<(usize, usize)>> {
    require_member(family, g)?;
    for u in 0..g.n() {
        for v in 0..g.n() {
            if u != v && !family.contains_graph(&g.clone_vertex(u, v)?) {
                return Ok(Some((u, v)));
            }
        }
    }
    Ok(None)
}

pub fn check_clonal_on<F: Family + ?Sized>(family: &F, g: &Hypergraph) -> Result<bool> {
    Ok(find_clonal_violation(family, g)?.is_none())
}

/// Whether `G[S]` is a member, for a member `G`.
pub fn check_hereditary_witness<F: Family + ?Sized>(family: &F, g: &Hypergraph, s: &VertexSet) -> Result<bool> {
    require_member(family, g)?;
    Ok(family.contains_graph(&g.induced_subgraph(s)?))
}

/// Whether `G(t)` is a member, for a member `G`.
pub fn check_multiplicative_witness<F: Family + ?Sized>(family: &F, g: &Hypergraph, t: &[usize]) -> Result<bool> {
    require_member(family, g)?;
    Ok(family.contains_graph(&g.blow_up(t)?))
}
