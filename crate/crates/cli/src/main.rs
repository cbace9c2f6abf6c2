mod args;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hspex::experiments::{
    run_bridgeless_tight_suite, run_coarseness_probe, run_degree_bound_suite, run_density_trend, run_plateau_construction,
    run_ratio_scaling,
};
use hspex::families::{extremal_lambda_p, extremal_pi, saturate, ExtremalResult, ForbiddenFamily, Order};
use hspex::hypergraph::{canonical_key_hex, read_hypergraph, serialize};
use hspex::report::{format_f64, to_json_pretty, ExperimentReport, Verdict};
use hspex::spectral::SolutionFlag;
use hspex::structure::{find_k_bridges, find_plateaus, is_k_bridge, is_k_plateaued, is_k_tight, is_lambda_plateau};
use hspex::{solve_rho_p, Error, Hypergraph, SolverConfig};

use args::{CheckCommand, Cli, Command, ExperimentArgs, ExtremalArgs, Format, OrderArg, RhoArgs, SaturateArgs, SolverArgs, Suite};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NO_CONVERGENCE: u8 = 2;
const EXIT_PROPERTY_FALSE: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;

/// Text for stdout plus the exit code.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn new(text: String, code: u8) -> Self {
        Outcome { text, code }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(cli.command) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::TooLarge(_) = e {
                eprintln!("hint: exhaustive search is limited to small n; try a smaller --n");
                ExitCode::from(EXIT_TOO_LARGE)
            } else {
                ExitCode::from(EXIT_INPUT)
            }
        }
    }
}

fn run(command: Command) -> hspex::Result<Outcome> {
    match command {
        Command::Rho(a) => cmd_rho(a),
        Command::Check(c) => cmd_check(c),
        Command::Extremal(a) => cmd_extremal(a),
        Command::Saturate(a) => cmd_saturate(a),
        Command::Experiment(a) => cmd_experiment(a),
    }
}

fn solver_config(a: &SolverArgs) -> hspex::Result<SolverConfig> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(Error::BadConfig(format!("--tol must be positive, got {}", a.tol)));
    }
    if a.starts == 0 {
        return Err(Error::BadConfig("--starts must be at least 1".into()));
    }
    Ok(SolverConfig {
        tol: a.tol,
        starts: a.starts,
        seed: a.seed,
        ..SolverConfig::default()
    })
}

fn forbidden_family(paths: &[PathBuf]) -> hspex::Result<ForbiddenFamily> {
    let graphs = paths.iter().map(read_hypergraph).collect::<hspex::Result<Vec<_>>>()?;
    ForbiddenFamily::new(graphs)
}

fn json_line(value: &impl serde::Serialize) -> hspex::Result<String> {
    to_json_pretty(value).map(|s| s + "\n")
}

fn fmt_vec(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format_f64(*v)).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_rho(a: RhoArgs) -> hspex::Result<Outcome> {
    let g = read_hypergraph(&a.input)?;
    let config = solver_config(&a.solver)?;
    let sol = solve_rho_p(&g, a.p, &config)?;
    let code = if sol.has_flag(SolutionFlag::NoConvergence) {
        EXIT_NO_CONVERGENCE
    } else {
        EXIT_OK
    };
    let text = match a.output.format() {
        Format::Json => json_line(&sol)?,
        Format::Csv => {
            let mut s = String::from("rho,residual,converged,iterations\n");
            writeln!(s, "{},{},{},{}", format_f64(sol.rho_hat), format_f64(sol.residual), sol.converged, sol.iterations).unwrap();
            s
        }
        Format::Human => {
            let mut s = String::new();
            writeln!(s, "rho = {}", format_f64(sol.rho_hat)).unwrap();
            writeln!(s, "x = {}", fmt_vec(sol.x.values())).unwrap();
            writeln!(s, "residual = {}", format_f64(sol.residual)).unwrap();
            writeln!(s, "converged = {}", sol.converged).unwrap();
            if !sol.flags.is_empty() {
                writeln!(s, "flags = {:?}", sol.flags).unwrap();
            }
            s
        }
    };
    Ok(Outcome::new(text, code))
}

fn property_outcome(holds: bool, human: String, cert: &impl serde::Serialize, format: Format) -> hspex::Result<Outcome> {
    let text = match format {
        Format::Human => human,
        _ => json_line(cert)?,
    };
    Ok(Outcome::new(text, if holds { EXIT_OK } else { EXIT_PROPERTY_FALSE }))
}

fn cmd_check(c: CheckCommand) -> hspex::Result<Outcome> {
    match c {
        CheckCommand::Tight { input, k, output } => {
            let g = read_hypergraph(&input)?;
            let cert = is_k_tight(&g, k)?;
            let mut human = format!("{k}-tight: {}\n", cert.result);
            if let Some(w) = &cert.witness {
                writeln!(human, "witness: {:?}", w.as_slice()).unwrap();
            }
            property_outcome(cert.result, human, &cert, output.format())
        }
        CheckCommand::Bridge { input, k, edge, output } => {
            let g = read_hypergraph(&input)?;
            match edge {
                Some(edge) => {
                    let cert = is_k_bridge(&g, &edge, k)?;
                    let mut human = format!("{edge:?} is a {k}-bridge: {}\n", cert.result);
                    if let (Some(a), Some(b)) = (&cert.a, &cert.b) {
                        writeln!(human, "A: {:?}\nB: {:?}", a.as_slice(), b.as_slice()).unwrap();
                    }
                    property_outcome(cert.result, human, &cert, output.format())
                }
                None => {
                    let bridges = find_k_bridges(&g, k)?;
                    let mut human = format!("{k}-bridgeless: {}\n", bridges.is_empty());
                    for b in &bridges {
                        writeln!(human, "bridge: {:?}", b.edge).unwrap();
                    }
                    property_outcome(bridges.is_empty(), human, &bridges, output.format())
                }
            }
        }
        CheckCommand::Plateau { input, edge, lambda, k, output } => {
            let g = read_hypergraph(&input)?;
            if let Some(k) = k {
                let (holds, missing) = is_k_plateaued(&g, k)?;
                let missing: Vec<String> = missing.iter().map(|l| l.to_string()).collect();
                let mut human = format!("{k}-plateaued: {holds}\n");
                if !missing.is_empty() {
                    writeln!(human, "no plateau for: {}", missing.join(" ")).unwrap();
                }
                let cert = serde_json::json!({ "k": k, "result": holds, "missing": missing });
                return property_outcome(holds, human, &cert, output.format());
            }
            let lambda = lambda.expect("clap requires --lambda without --k");
            match edge {
                Some(edge) => {
                    let cert = is_lambda_plateau(&g, &edge, &lambda)?;
                    let human = format!("{edge:?} is a {lambda}-plateau: {}\n", cert.result);
                    property_outcome(cert.result, human, &cert, output.format())
                }
                None => {
                    let edges = find_plateaus(&g, &lambda)?;
                    let mut human = format!("{lambda}-plateaus: {}\n", edges.len());
                    for e in &edges {
                        writeln!(human, "plateau: {e:?}").unwrap();
                    }
                    property_outcome(!edges.is_empty(), human, &edges, output.format())
                }
            }
        }
    }
}

fn extremal_csv(results: &[ExtremalResult]) -> String {
    let mut s = String::from("n,p,value,argmax_key\n");
    for r in results {
        let p = r.p.map(format_f64).unwrap_or_default();
        for key in r.argmax_keys() {
            writeln!(s, "{},{},{},{}", r.n, p, format_f64(r.value), key).unwrap();
        }
    }
    s
}

fn cmd_extremal(a: ExtremalArgs) -> hspex::Result<Outcome> {
    let family = forbidden_family(&a.forbid)?;
    let config = solver_config(&a.solver)?;
    let mut results = Vec::new();
    for &n in &a.n.0 {
        let result = match a.p {
            Some(p) => extremal_lambda_p(&family, n, p, &config, a.full)?,
            None => extremal_pi(&family, n)?,
        };
        results.push(if a.timings { result } else { result.without_timing() });
    }
    let unconverged = results
        .iter()
        .flat_map(|r| &r.solutions)
        .any(|s| s.has_flag(SolutionFlag::NoConvergence));
    let text = match a.output.format() {
        Format::Json if results.len() == 1 => json_line(&results[0])?,
        Format::Json => json_line(&results)?,
        Format::Csv => extremal_csv(&results),
        Format::Human => {
            let mut s = String::new();
            for r in &results {
                let label = if r.p.is_some() { "Lambda_p" } else { "Pi" };
                writeln!(s, "n = {}: {label} = {}", r.n, format_f64(r.value)).unwrap();
                for (i, g) in r.argmax.iter().enumerate() {
                    writeln!(s, "  argmax {}: key {}", i, canonical_key_hex(g)).unwrap();
                    for line in serialize(g).lines() {
                        writeln!(s, "    {line}").unwrap();
                    }
                }
            }
            s
        }
    };
    Ok(Outcome::new(text, if unconverged { EXIT_NO_CONVERGENCE } else { EXIT_OK }))
}

fn cmd_saturate(a: SaturateArgs) -> hspex::Result<Outcome> {
    let family = forbidden_family(&a.forbid)?;
    let start = match (&a.input, a.n) {
        (Some(path), _) => read_hypergraph(path)?,
        (None, Some(n)) => Hypergraph::empty(n, hspex::families::Family::uniformity(&family))?,
        (None, None) => unreachable!("clap requires --n or --input"),
    };
    let order = match a.order {
        OrderArg::Lex => Order::Lex,
        OrderArg::Random => Order::Random(a.seed),
    };
    let g = saturate(&family, &start, order)?;
    let text = match a.output.format() {
        Format::Json => json_line(&serde_json::json!({
            "graph": serialize(&g),
            "edges": g.edges(),
            "key": canonical_key_hex(&g),
        }))?,
        _ => serialize(&g),
    };
    Ok(Outcome::new(text, EXIT_OK))
}

fn need<T>(value: Option<T>, flag: &str, suite: &str) -> hspex::Result<T> {
    value.ok_or_else(|| Error::BadConfig(format!("{suite} needs {flag}")))
}

fn report_human(report: &ExperimentReport) -> hspex::Result<String> {
    let mut s = format!("experiment: {} (seed {})\n", report.experiment, report.seed);
    s.push_str(&report.to_csv()?);
    for skipped in &report.skipped {
        writeln!(s, "skipped: {skipped}").unwrap();
    }
    for claim in &report.claims {
        writeln!(s, "claim: {}: {} ({})", claim.name, if claim.holds { "holds" } else { "FAILS" }, claim.detail).unwrap();
    }
    if report.excluded > 0 {
        writeln!(s, "excluded rows: {}", report.excluded).unwrap();
    }
    writeln!(s, "verdict: {}", serde_json::to_value(report.verdict).unwrap().as_str().unwrap()).unwrap();
    Ok(s)
}

fn cmd_experiment(a: ExperimentArgs) -> hspex::Result<Outcome> {
    let config = solver_config(&a.solver)?;
    let seed = a.solver.seed;
    let name = a.suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let n_range = || need(a.n.clone(), "--n", &name).map(|r| r.0);
    let report = match a.suite {
        Suite::DegreeBound => run_degree_bound_suite(a.count, &a.r_set, &a.p_set, seed, &config)?,
        Suite::RatioScaling => {
            let family = forbidden_family(&a.forbid)?;
            run_ratio_scaling(&family, need(a.p, "--p", &name)?, &n_range()?, &config, seed)?
        }
        Suite::BridgelessTight => {
            let graphs = a.forbid.iter().map(read_hypergraph).collect::<hspex::Result<Vec<_>>>()?;
            if graphs.is_empty() {
                return Err(Error::BadConfig("bridgeless-tight needs at least one --forbid graph".into()));
            }
            let n = n_range()?;
            if n.len() != 1 {
                return Err(Error::BadConfig("bridgeless-tight takes a single --n".into()));
            }
            run_bridgeless_tight_suite(&graphs, need(a.k, "--k", &name)?, n[0], a.trials, seed)?
        }
        Suite::PlateauConstruct => {
            if a.forbid.len() != 1 {
                return Err(Error::BadConfig("plateau-construct takes exactly one --forbid graph".into()));
            }
            let h = read_hypergraph(&a.forbid[0])?;
            run_plateau_construction(&h, need(a.k, "--k", &name)?, a.ell, seed)?
        }
        Suite::CoarsenessProbe => {
            let family = forbidden_family(&a.forbid)?;
            run_coarseness_probe(&family, need(a.p, "--p", &name)?, &n_range()?, &config, seed)?
        }
        Suite::DensityTrend => run_density_trend(&forbidden_family(&a.forbid)?, &n_range()?, seed)?,
    };
    if let Some(dir) = &a.out_dir {
        write_report(dir, &report)?;
    }
    let text = match a.output.format() {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
        Format::Human => report_human(&report)?,
    };
    let code = if report.verdict == Verdict::Fail {
        EXIT_PROPERTY_FALSE
    } else {
        EXIT_OK
    };
    Ok(Outcome::new(text, code))
}

fn write_report(dir: &Path, report: &ExperimentReport) -> hspex::Result<()> {
    let (json, csv) = report.write_files(dir)?;
    log::info!("wrote {} and {}", json.display(), csv.display());
    Ok(())
}
