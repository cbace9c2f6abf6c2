//! Reproducible verification suites. Each returns an [`ExperimentReport`]
//! whose rows are sorted by instance id and whose content depends only on
//! the parameters and the seed.

mod generate;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{extremal_lambda_p, extremal_pi, is_edge_maximal, saturate, Family, ForbiddenFamily, Order};
use crate::hypergraph::{canonical_key_hex, ell_cliques, r_subsets, Hypergraph, VertexSet};
use crate::report::{Cell, Claim, ExperimentReport};
use crate::spectral::{degree_ratio_lower_bound, principal_ratio, solve_rho_p, SolverConfig};
use crate::structure::{find_k_bridges, is_k_plateaued, is_k_tight, validate_tightness_witness};

pub use generate::{min_connected_edges, random_connected_hypergraph};

/// Slack allowed in `γ ≥ (Δ/δ)^{1/(p+r−2)}`.
pub const RATIO_BOUND_TOL: f64 = 1e-9;

/// Cap on `(γ − 1)·n` used by the ratio-scaling verdict. For complete
/// bipartite `K_{a,a+1}` the exact value `(√((a+1)/a) − 1)(2a+1)` stays below 2
/// for every `a ≥ 2`.
pub const RATIO_SCALING_CAP: f64 = 2.0;

/// Instance seed derived from a suite seed and an instance index.
pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn converged_within(residual: f64, rho: f64, tol: f64) -> bool {
    residual <= tol * rho.max(1.0)
}

fn graph_label(g: &Hypergraph) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|e| e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-"))
        .collect();
    format!("n{}:{}", g.n(), edges.join(" "))
}

/// One degree-bound instance: a graph and an exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeBoundCase {
    pub graph: Hypergraph,
    pub p: f64,
}

/// Instance `i` of the degree-bound suite: `r` cycles through `r_set` and `p`
/// through `p_set` (outer loop), on 4..=9 vertices for `r = 2` and
/// `r+1..=8` otherwise.
pub fn degree_bound_case(i: usize, r_set: &[usize], p_set: &[f64], seed: u64) -> Result<DegreeBoundCase> {
    if r_set.is_empty() || p_set.is_empty() {
        return Err(Error::BadConfig("degree-bound suite needs at least one r and one p".into()));
    }
    let r = r_set[i % r_set.len()];
    let p = p_set[(i / r_set.len()) % p_set.len()];
    let (lo, hi) = if r == 2 { (4, 9) } else { (r + 1, 8.max(r + 1)) };
    let graph = generate::random_instance(r, lo, hi, mix_seed(seed, i as u64))?;
    Ok(DegreeBoundCase { graph, p })
}

/// Checks `γ(x) + tol ≥ (Δ/δ)^{1/(p+r−2)}` on the solver's eigenvector for
/// the given instances. Unconverged solves are excluded and counted; vectors
/// with a zero entry satisfy the bound trivially (`γ = ∞`).
pub fn run_degree_bound_cases(cases: &[DegreeBoundCase], seed: u64, config: &SolverConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        "degree-bound",
        seed,
        &["id", "n", "r", "m", "p", "rho", "residual", "converged", "gamma", "bound", "slack", "status", "graph"],
    );
    report.param("instances", cases.len());
    report.param("tol", config.tol);
    report.param("starts", config.starts);
    let rows: Vec<(Vec<Cell>, bool, bool)> = cases
        .par_iter()
        .enumerate()
        .map(|(id, case)| -> Result<(Vec<Cell>, bool, bool)> {
            let g = &case.graph;
            let sol = solve_rho_p(g, case.p, config)?;
            let gamma = principal_ratio(sol.x.values())?;
            let bound = degree_ratio_lower_bound(g, case.p)?;
            let ok = converged_within(sol.residual, sol.rho_hat, config.tol);
            let holds = gamma + RATIO_BOUND_TOL >= bound;
            let status = match (ok, gamma.is_finite(), holds) {
                (false, _, _) => "excluded",
                (true, false, _) => "vacuous",
                (true, true, true) => "ok",
                (true, true, false) => "violation",
            };
            let row = vec![
                id.into(),
                g.n().into(),
                g.r().into(),
                g.edge_count().into(),
                case.p.into(),
                sol.rho_hat.into(),
                sol.residual.into(),
                ok.into(),
                gamma.into(),
                bound.into(),
                (gamma - bound).into(),
                status.into(),
                graph_label(g).into(),
            ];
            Ok((row, ok, holds))
        })
        .collect::<Result<_>>()?;
    let mut violations = 0;
    for (row, ok, holds) in rows {
        if !ok {
            report.excluded += 1;
        } else if !holds {
            violations += 1;
        }
        report.push_row(row);
    }
    report.claims.push(Claim {
        name: "principal ratio at least (max degree / min degree)^(1/(p+r-2))".into(),
        tolerance: Some(RATIO_BOUND_TOL),
        holds: violations == 0,
        detail: format!("{violations} violations among {} converged instances", cases.len() - report.excluded),
    });
    report.conclude();
    Ok(report)
}

/// The degree-bound check over `count` seeded random connected instances.
pub fn run_degree_bound_suite(
    count: usize,
    r_set: &[usize],
    p_set: &[f64],
    seed: u64,
    config: &SolverConfig,
) -> Result<ExperimentReport> {
    let cases = (0..count)
        .map(|i| degree_bound_case(i, r_set, p_set, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut report = run_degree_bound_cases(&cases, seed, config)?;
    report.param("r_set", r_set);
    report.param("p_set", p_set);
    Ok(report)
}

/// True if the vertices can be coloured with `r` colours so that every edge
/// sees all of them.
pub fn is_r_partite(h: &Hypergraph) -> bool {
    fn assign(h: &Hypergraph, v: usize, colors: &mut Vec<usize>) -> bool {
        if v == h.n() {
            return true;
        }
        for c in 0..h.r() {
            colors[v] = c;
            let clash = h.edges().iter().any(|e| {
                e.contains(&v)
                    && e.iter().any(|&w| w != v && w < v && colors[w] == c)
            });
            if !clash && assign(h, v + 1, colors) {
                return true;
            }
            // symmetry: the first vertex takes colour 0 only
            if v == 0 {
                break;
            }
        }
        false
    }
    let mut colors = vec![0; h.n()];
    assign(h, 0, &mut colors)
}

fn family_hypotheses(report: &mut ExperimentReport, family: &ForbiddenFamily) {
    for h in family.forbidden() {
        if !h.is_2_covering() {
            log::warn!("forbidden graph {} is not 2-covering", graph_label(h));
            report.skipped.push(format!("hypothesis: {} is not 2-covering", graph_label(h)));
        }
        if is_r_partite(h) {
            log::warn!("forbidden graph {} is r-partite", graph_label(h));
            report.skipped.push(format!("hypothesis: {} is r-partite", graph_label(h)));
        }
    }
}

/// `(γ − 1)·n` for every spectral-extremal graph of `family` on each `n`.
pub fn run_ratio_scaling(
    family: &ForbiddenFamily,
    p: f64,
    n_range: &[usize],
    config: &SolverConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        "ratio-scaling",
        seed,
        &["n", "argmax_key", "rho", "residual", "gamma", "gamma_minus_1", "scaled", "status"],
    );
    report.param("p", p);
    report.param("n", n_range);
    report.param("cap", RATIO_SCALING_CAP);
    report.param("forbidden", family.forbidden().iter().map(graph_label).collect::<Vec<_>>());
    family_hypotheses(&mut report, family);
    let mut worst: f64 = 0.0;
    for &n in n_range {
        let result = extremal_lambda_p(family, n, p, config, false)?;
        for (g, sol) in result.argmax.iter().zip(&result.solutions) {
            let gamma = principal_ratio(sol.x.values())?;
            let ok = converged_within(sol.residual, sol.rho_hat, config.tol);
            let scaled = (gamma - 1.0) * n as f64;
            if ok {
                worst = worst.max(scaled);
            } else {
                report.excluded += 1;
            }
            report.push_row(vec![
                n.into(),
                canonical_key_hex(g).into(),
                sol.rho_hat.into(),
                sol.residual.into(),
                gamma.into(),
                (gamma - 1.0).into(),
                scaled.into(),
                if ok { "ok" } else { "excluded" }.into(),
            ]);
        }
    }
    report.claims.push(Claim {
        name: "(gamma - 1) * n stays below the cap".into(),
        tolerance: Some(RATIO_SCALING_CAP),
        holds: worst <= RATIO_SCALING_CAP,
        detail: format!("largest (gamma - 1) * n = {worst}"),
    });
    report.conclude();
    Ok(report)
}

/// Random-order saturations of the empty graph in `F({H})` for every
/// k-bridgeless connected `H`, each tested for k-tightness.
pub fn run_bridgeless_tight_suite(
    h_list: &[Hypergraph],
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        "bridgeless-tight",
        seed,
        &["h_index", "h", "trial", "edges", "tight", "witness", "status"],
    );
    report.param("k", k);
    report.param("n", n);
    report.param("trials", trials);
    report.param("h_count", h_list.len());
    let mut jobs = Vec::new();
    for (hi, h) in h_list.iter().enumerate() {
        if !h.is_connected() {
            report.skipped.push(format!("{}: disconnected", graph_label(h)));
            continue;
        }
        let bridges = find_k_bridges(h, k)?;
        if !bridges.is_empty() {
            let edges: Vec<String> = bridges.iter().map(|b| format!("{:?}", b.edge)).collect();
            report.skipped.push(format!("{}: {k}-bridges {}", graph_label(h), edges.join(" ")));
            continue;
        }
        for t in 0..trials {
            jobs.push((hi, t));
        }
    }
    let rows: Vec<(Vec<Cell>, Option<bool>)> = jobs
        .par_iter()
        .map(|&(hi, t)| -> Result<(Vec<Cell>, Option<bool>)> {
            let h = &h_list[hi];
            let family = ForbiddenFamily::single(h.clone());
            let order = Order::Random(mix_seed(mix_seed(seed, hi as u64), t as u64));
            let g = saturate(&family, &Hypergraph::empty(n, h.r())?, order)?;
            if g.is_empty() {
                let row = vec![hi.into(), graph_label(h).into(), t.into(), 0usize.into(), Cell::Missing, Cell::Missing, "empty".into()];
                return Ok((row, None));
            }
            let cert = is_k_tight(&g, k)?;
            let witness = cert.witness.as_ref().map(|w| format!("{:?}", w.as_slice()));
            let row = vec![
                hi.into(),
                graph_label(h).into(),
                t.into(),
                g.edge_count().into(),
                cert.result.into(),
                witness.map_or(Cell::Missing, Cell::Text),
                if cert.result { "ok" } else { "counterexample" }.into(),
            ];
            Ok((row, Some(cert.result)))
        })
        .collect::<Result<_>>()?;
    let mut failures = 0;
    let mut checked = 0;
    for (row, tight) in rows {
        match tight {
            Some(true) => checked += 1,
            Some(false) => {
                checked += 1;
                failures += 1;
            }
            None => report.excluded += 1,
        }
        report.push_row(row);
    }
    report.claims.push(Claim {
        name: format!("every saturation of a {k}-bridgeless H is {k}-tight"),
        tolerance: None,
        holds: failures == 0,
        detail: format!("{failures} counterexamples among {checked} saturations"),
    });
    report.conclude();
    Ok(report)
}

/// Builds `ℓ` disjoint `K_{t−1}` (with `t = |V(H)|`), saturates it in
/// `F({H})` and checks that the result is edge-maximal and not k-tight, the
/// first clique being the violating set.
pub fn run_plateau_construction(h: &Hypergraph, k: usize, ell: usize, seed: u64) -> Result<ExperimentReport> {
    let r = h.r();
    let (plateaued, missing) = is_k_plateaued(h, k)?;
    if !plateaued {
        let missing: Vec<String> = missing.iter().map(|l| l.to_string()).collect();
        return Err(Error::HypothesisFailed(format!(
            "H is not {k}-plateaued: no plateau for {}",
            missing.join(", ")
        )));
    }
    if h.n() < r + 1 {
        return Err(Error::HypothesisFailed(format!("H has {} vertices, needs at least {}", h.n(), r + 1)));
    }
    let t = h.n();
    let mut report = ExperimentReport::new("plateau-construct", seed, &["step", "holds", "detail"]);
    report.param("h", graph_label(h));
    report.param("k", k);
    report.param("ell", ell);
    let family = ForbiddenFamily::single(h.clone());
    let start = ell_cliques(ell, t - 1, r)?;
    let start_member = family.is_member(&start)?;
    report.push_row(vec!["start is H-free".into(), start_member.into(), graph_label(&start).into()]);
    let mut claims = vec![("start is H-free", start_member)];
    if start_member {
        let g = saturate(&family, &start, Order::Lex)?;
        let maximal = is_edge_maximal(&family, &g)?;
        let cert = is_k_tight(&g, k)?;
        let first_clique = VertexSet::new(0..t - 1, g.n())?;
        let witness_ok = validate_tightness_witness(&g, k, &first_clique);
        report.push_row(vec!["saturation".into(), true.into(), graph_label(&g).into()]);
        report.push_row(vec!["edge-maximal".into(), maximal.into(), Cell::Missing]);
        let found = cert.witness.as_ref().map(|w| format!("{:?}", w.as_slice()));
        report.push_row(vec!["not k-tight".into(), (!cert.result).into(), found.map_or(Cell::Missing, Cell::Text)]);
        report.push_row(vec![
            "first clique violates tightness".into(),
            witness_ok.into(),
            format!("{:?}", first_clique.as_slice()).into(),
        ]);
        claims.extend([("edge-maximal", maximal), ("not k-tight", !cert.result), ("first clique is a witness", witness_ok)]);
    }
    for (name, holds) in claims {
        report.claims.push(Claim {
            name: name.into(),
            tolerance: None,
            holds,
            detail: String::new(),
        });
    }
    report.conclude();
    Ok(report)
}

/// Degree spread `Δ − δ` of every spectral-extremal graph, scaled by `n^{r−2}`.
pub fn run_coarseness_probe(
    family: &ForbiddenFamily,
    p: f64,
    n_range: &[usize],
    config: &SolverConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        "coarseness-probe",
        seed,
        &["n", "argmax_key", "rho", "max_degree", "min_degree", "spread", "scaled_spread"],
    );
    report.param("p", p);
    report.param("n", n_range);
    report.param("forbidden", family.forbidden().iter().map(graph_label).collect::<Vec<_>>());
    let r = family.uniformity();
    for &n in n_range {
        let result = extremal_lambda_p(family, n, p, config, false)?;
        for (g, sol) in result.argmax.iter().zip(&result.solutions) {
            let (max, min) = g.degree_extremes();
            let spread = max - min;
            report.push_row(vec![
                n.into(),
                canonical_key_hex(g).into(),
                sol.rho_hat.into(),
                max.into(),
                min.into(),
                spread.into(),
                (spread as f64 / (n as f64).powi(r as i32 - 2)).into(),
            ]);
        }
    }
    report.conclude();
    Ok(report)
}

/// `Π(F, n) / C(n, r)` for each `n`.
pub fn run_density_trend(family: &ForbiddenFamily, n_range: &[usize], seed: u64) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("density-trend", seed, &["n", "pi", "candidates", "density", "argmax_key"]);
    report.param("n", n_range);
    report.param("forbidden", family.forbidden().iter().map(graph_label).collect::<Vec<_>>());
    let r = family.uniformity();
    for &n in n_range {
        let result = extremal_pi(family, n)?;
        let total = r_subsets(n, r).len();
        let density = if total == 0 { 0.0 } else { result.value / total as f64 };
        let key = result.argmax_keys().into_iter().next();
        report.push_row(vec![
            n.into(),
            (result.value as u64).into(),
            total.into(),
            density.into(),
            key.map_or(Cell::Missing, Cell::Text),
        ]);
    }
    report.conclude();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::complete_r_graph;
    use crate::report::Verdict;

    fn g2(n: usize, edges: &[[usize; 2]]) -> Hypergraph {
        Hypergraph::new(n, 2, edges.iter()).unwrap()
    }

    fn quick() -> SolverConfig {
        SolverConfig {
            starts: 4,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn degree_bound_fixtures() {
        let p3 = g2(3, &[[0, 1], [1, 2]]);
        let k3 = complete_r_graph(3, 2).unwrap();
        let cases = vec![
            DegreeBoundCase { graph: p3, p: 2.0 },
            DegreeBoundCase { graph: k3, p: 2.0 },
        ];
        let report = run_degree_bound_cases(&cases, 0, &quick()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        let gamma = report.column("gamma").unwrap();
        let bound = report.column("bound").unwrap();
        let value = |row: usize, col: usize| match report.rows[row][col] {
            Cell::Real(x) => x,
            _ => panic!(),
        };
        assert!((value(0, gamma) - 2f64.sqrt()).abs() < 1e-8);
        assert!((value(0, bound) - 2f64.sqrt()).abs() < 1e-12);
        assert!((value(1, gamma) - 1.0).abs() < 1e-8);
        assert_eq!(value(1, bound), 1.0);
    }

    #[test]
    fn small_degree_suite_is_deterministic() {
        let a = run_degree_bound_suite(12, &[2, 3], &[1.5, 3.0], 5, &quick()).unwrap();
        let b = run_degree_bound_suite(12, &[2, 3], &[1.5, 3.0], 5, &quick()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(a.passed());
    }

    #[test]
    fn partite_detection() {
        assert!(!is_r_partite(&complete_r_graph(3, 2).unwrap()));
        assert!(is_r_partite(&g2(4, &[[0, 1], [1, 2], [2, 3], [0, 3]])));
        assert!(!is_r_partite(&complete_r_graph(4, 3).unwrap()));
        assert!(is_r_partite(&complete_r_graph(3, 3).unwrap()));
    }

    #[test]
    fn plateau_hypotheses() {
        let k3 = complete_r_graph(3, 2).unwrap();
        assert!(matches!(run_plateau_construction(&k3, 1, 2, 0), Err(Error::HypothesisFailed(_))));
        let p4 = g2(4, &[[0, 1], [1, 2], [2, 3]]);
        let report = run_plateau_construction(&p4, 1, 2, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
    }

    #[test]
    fn density_values() {
        let k2 = ForbiddenFamily::single(g2(2, &[[0, 1]]));
        let report = run_density_trend(&k2, &[3, 4], 0).unwrap();
        assert!(report.rows.iter().all(|row| row[3] == Cell::Real(0.0)));
        let k43 = ForbiddenFamily::single(complete_r_graph(4, 3).unwrap());
        let report = run_density_trend(&k43, &[4], 0).unwrap();
        assert_eq!(report.rows[0][3], Cell::Real(0.75));
    }
}
