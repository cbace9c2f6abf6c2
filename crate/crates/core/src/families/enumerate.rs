//! Exhaustive search over the labeled members of a family on exactly `n`
//! vertices.
//!
//! The candidate r-sets are decided one at a time in lexicographic order
//! (include before exclude). For monotone families each inclusion is checked
//! immediately through the new edge, so only members are ever visited; other
//! families are filtered at the leaves. The first few decisions are expanded
//! up front and the resulting subtrees are searched in parallel, each with
//! its own accumulator, and merged in subtree order.

use std::collections::BTreeMap;
use std::time::Instant;

use log::{debug, warn};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Family;
use crate::error::{Error, Result};
use crate::hypergraph::{canonical_key, canonical_key_hex, r_subsets, serialize, Hypergraph};
use crate::spectral::{solve_rho_p, SolverConfig, SpectralSolution};

/// Largest number of candidate r-sets (`C(n, r)`) the exhaustive search accepts.
pub const MAX_CANDIDATE_EDGES: usize = 28;

/// Decisions expanded before the search fans out.
const SPLIT_DEPTH: usize = 6;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn guard(n: usize, r: usize) -> Result<()> {
    let c = binomial(n, r);
    if c > MAX_CANDIDATE_EDGES {
        return Err(Error::TooLarge(format!(
            "exhaustive search over C({n},{r}) = {c} candidate edges exceeds the limit of {MAX_CANDIDATE_EDGES}"
        )));
    }
    Ok(())
}

/// Decisions made so far: bit `i` of `mask` is set if candidate `i` is an
/// edge, bit `i` of `optional` if it was left out although it could have
/// been added at that point.
#[derive(Clone, Copy)]
struct State {
    mask: u32,
    optional: u32,
}

struct Sweep<'a, F: Family + ?Sized> {
    family: &'a F,
    candidates: Vec<Vec<usize>>,
    monotone: bool,
    /// Visit only edge-maximal members.
    maximal_only: bool,
}

impl<'a, F: Family + ?Sized> Sweep<'a, F> {
    fn new(family: &'a F, n: usize, maximal_only: bool) -> Result<Self> {
        let r = family.uniformity();
        guard(n, r)?;
        Ok(Sweep {
            family,
            candidates: r_subsets(n, r),
            monotone: family.is_monotone(),
            maximal_only,
        })
    }

    fn try_include(&self, g: &mut Hypergraph, i: usize) -> bool {
        let edge = &self.candidates[i];
        g.push_edge_unchecked(edge.clone());
        if self.monotone && !self.family.admits_edge(g, edge) {
            g.pop_edge();
            return false;
        }
        true
    }

    /// Whether adding `edge` to `g` keeps it in the family.
    fn can_add(&self, g: &Hypergraph, edge: &[usize]) -> bool {
        let bigger = g.add_edge(edge).expect("candidate edges are valid");
        if self.monotone {
            self.family.admits_edge(&bigger, edge)
        } else {
            self.family.contains_graph(&bigger)
        }
    }

    /// For a monotone family, an optional exclusion of candidate `i` can only
    /// end in an edge-maximal member if adding it to the largest graph still
    /// reachable (every later candidate included) already leaves the family.
    fn exclusion_can_close(&self, g: &Hypergraph, i: usize) -> bool {
        let mut ceiling = g.clone();
        for e in &self.candidates[i + 1..] {
            ceiling.push_edge_unchecked(e.clone());
        }
        !self.can_add(&ceiling, &self.candidates[i])
    }

    /// Depth-first walk over decisions `i..stop`, calling `at_stop` on every
    /// surviving state at depth `stop`.
    fn walk(&self, i: usize, stop: usize, g: &mut Hypergraph, st: State, at_stop: &mut dyn FnMut(&mut Hypergraph, State)) {
        if i == stop {
            at_stop(g, st);
            return;
        }
        let included = self.try_include(g, i);
        if included {
            self.walk(i + 1, stop, g, State { mask: st.mask | 1 << i, ..st }, at_stop);
            g.pop_edge();
        }
        let mut next = st;
        if included || !self.monotone {
            if self.maximal_only && self.monotone && !self.exclusion_can_close(g, i) {
                return;
            }
            next.optional |= 1 << i;
        }
        self.walk(i + 1, stop, g, next, at_stop);
    }

    fn accepts_leaf(&self, g: &Hypergraph, st: State) -> bool {
        if !self.monotone && !self.family.contains_graph(g) {
            return false;
        }
        if !self.maximal_only {
            return true;
        }
        // forced exclusions were already blocked and stay blocked as edges are added
        self.candidates
            .iter()
            .enumerate()
            .filter(|(j, _)| st.optional >> j & 1 == 1)
            .all(|(_, e)| !self.can_add(g, e))
    }

    /// Visits every member (or every edge-maximal member) once; returns one
    /// accumulator per subtree, in order.
    fn run<A: Send>(&self, n: usize, init: impl Fn() -> A + Sync, visit: impl Fn(&mut A, &Hypergraph, u32) + Sync) -> Vec<A> {
        let r = self.family.uniformity();
        let total = self.candidates.len();
        let depth = SPLIT_DEPTH.min(total);
        let mut starts = Vec::new();
        let mut root = Hypergraph::from_sorted_unchecked(n, r, Vec::new());
        let empty = State { mask: 0, optional: 0 };
        self.walk(0, depth, &mut root, empty, &mut |g, st| starts.push((g.clone(), st)));
        starts
            .into_par_iter()
            .map(|(mut g, st)| {
                let mut acc = init();
                self.walk(depth, total, &mut g, st, &mut |g, st| {
                    if self.accepts_leaf(g, st) {
                        visit(&mut acc, g, st.mask);
                    }
                });
                acc
            })
            .collect()
    }
}

/// Number of labeled members on exactly `n` vertices.
pub fn count_members<F: Family + ?Sized>(family: &F, n: usize) -> Result<u64> {
    let sweep = Sweep::new(family, n, false)?;
    Ok(sweep.run(n, || 0u64, |c, _, _| *c += 1).into_iter().sum())
}

/// One canonical representative of every isomorphism class of members on
/// exactly `n` vertices, sorted by canonical key.
pub fn enumerate_family<F: Family + ?Sized>(family: &F, n: usize) -> Result<Vec<Hypergraph>> {
    let sweep = Sweep::new(family, n, false)?;
    if binomial(n, family.uniformity()) > 21 {
        warn!("enumerating isomorphism classes on {n} vertices keys every labeled member and may be slow");
    }
    let parts = sweep.run(n, BTreeMap::new, |seen: &mut BTreeMap<Vec<u8>, ()>, g, _| {
        seen.entry(canonical_key(g)).or_insert(());
    });
    let mut all = BTreeMap::new();
    for part in parts {
        all.extend(part);
    }
    let mut out = Vec::with_capacity(all.len());
    for key in all.into_keys() {
        out.push(graph_from_key(&key));
    }
    Ok(out)
}

fn graph_from_key(key: &[u8]) -> Hypergraph {
    let words: Vec<usize> = key
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let (n, r) = (words[0], words[1]);
    let edges = words[3..].chunks(r).map(|e| e.to_vec()).collect();
    Hypergraph::from_sorted_unchecked(n, r, edges)
}

/// Outcome of an exhaustive extremal search on `n` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult {
    pub n: usize,
    /// `None` for the edge-count problem.
    pub p: Option<f64>,
    pub value: f64,
    /// Canonical representatives of the optimal isomorphism classes, by key.
    pub argmax: Vec<Hypergraph>,
    /// Solver output for each argmax graph (empty for the edge-count problem).
    pub solutions: Vec<SpectralSolution>,
    /// Labeled members on exactly `n` vertices that the search visited: all
    /// of them for the edge-count problem, the edge-maximal ones for the
    /// spectral problem unless every member was requested.
    pub count_members: u64,
    /// Isomorphism classes passed to the solver (zero for the edge-count problem).
    pub candidates_solved: usize,
    pub elapsed_ms: Option<u64>,
}

impl ExtremalResult {
    pub fn argmax_keys(&self) -> Vec<String> {
        self.argmax.iter().map(canonical_key_hex).collect()
    }

    /// Drops the wall-clock field so that output is reproducible.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

impl Serialize for ExtremalResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtremalResult", 9)?;
        st.serialize_field("n", &self.n)?;
        if let Some(p) = self.p {
            st.serialize_field("p", &p)?;
        }
        st.serialize_field("value", &self.value)?;
        let graphs: Vec<String> = self.argmax.iter().map(serialize).collect();
        st.serialize_field("argmax", &graphs)?;
        st.serialize_field("argmax_keys", &self.argmax_keys())?;
        if self.p.is_some() {
            st.serialize_field("solutions", &self.solutions)?;
            st.serialize_field("candidates_solved", &self.candidates_solved)?;
        }
        st.serialize_field("count_members", &self.count_members)?;
        if let Some(ms) = self.elapsed_ms {
            st.serialize_field("elapsed_ms", &ms)?;
        }
        st.end()
    }
}

struct PiAcc {
    best: usize,
    keys: BTreeMap<Vec<u8>, ()>,
    count: u64,
}

/// `Π(F, n)`: the largest edge count of a member on `n` vertices, with every
/// optimal isomorphism class.
pub fn extremal_pi<F: Family + ?Sized>(family: &F, n: usize) -> Result<ExtremalResult> {
    let started = Instant::now();
    let sweep = Sweep::new(family, n, false)?;
    let parts = sweep.run(
        n,
        || PiAcc {
            best: 0,
            keys: BTreeMap::new(),
            count: 0,
        },
        |acc, g, _| {
            acc.count += 1;
            let m = g.edge_count();
            if m > acc.best || acc.keys.is_empty() {
                acc.best = m;
                acc.keys.clear();
            }
            if m == acc.best {
                acc.keys.entry(canonical_key(g)).or_insert(());
            }
        },
    );
    let count_members = parts.iter().map(|a| a.count).sum();
    let best = parts.iter().filter(|a| a.count > 0).map(|a| a.best).max().unwrap_or(0);
    let mut keys = BTreeMap::new();
    for part in parts.into_iter().filter(|a| a.best == best && a.count > 0) {
        keys.extend(part.keys);
    }
    Ok(ExtremalResult {
        n,
        p: None,
        value: best as f64,
        argmax: keys.keys().map(|k| graph_from_key(k)).collect(),
        solutions: Vec::new(),
        count_members,
        candidates_solved: 0,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}

/// `Λ_p(F, n)`: the largest p-spectral radius of a member on `n` vertices.
///
/// A maximizer can always be taken edge-maximal, since adding an edge never
/// lowers `ρ_p`, so by default only edge-maximal members are solved; `full`
/// solves every isomorphism class instead.
pub fn extremal_lambda_p<F: Family + ?Sized>(
    family: &F,
    n: usize,
    p: f64,
    config: &SolverConfig,
    full: bool,
) -> Result<ExtremalResult> {
    let started = Instant::now();
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadP(p));
    }
    let sweep = Sweep::new(family, n, !full)?;
    let parts = sweep.run(
        n,
        || (BTreeMap::new(), 0u64),
        |(classes, count): &mut (BTreeMap<Vec<u8>, ()>, u64), g, _| {
            *count += 1;
            classes.entry(canonical_key(g)).or_insert(());
        },
    );
    let count_members = parts.iter().map(|(_, c)| c).sum();
    let mut classes = BTreeMap::new();
    for (part, _) in parts {
        classes.extend(part);
    }
    let graphs: Vec<Hypergraph> = classes.keys().map(|k| graph_from_key(k)).collect();
    debug!("solving {} candidate classes on {n} vertices", graphs.len());
    let solved: Vec<SpectralSolution> = graphs
        .par_iter()
        .map(|g| solve_rho_p(g, p, config))
        .collect::<Result<_>>()?;
    let value = solved.iter().map(|s| s.rho_hat).fold(0.0, f64::max);
    let cutoff = value - 1e-9 * value.max(1.0);
    let mut argmax = Vec::new();
    let mut solutions = Vec::new();
    for (g, s) in graphs.iter().zip(&solved) {
        if s.rho_hat >= cutoff {
            argmax.push(g.clone());
            solutions.push(s.clone());
        }
    }
    Ok(ExtremalResult {
        n,
        p: Some(p),
        value,
        argmax,
        solutions,
        count_members,
        candidates_solved: graphs.len(),
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}
