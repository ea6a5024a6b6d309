//! `cover`: exact difference-body identities, certified lattice coverings,
//! and the covering-density audits, with machine-readable JSON output.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 a failed audit or
//! assertion (for example a claimed covering that does not certify).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cover_core::cover::{
    density, grid_covering_oracle, hadwiger_audit, homothety_check, is_covering,
    multiplicity_density_estimate, star_number, star_number_oracle, theorem2_audit,
};
use cover_core::diffbody::{
    bound_audit, default_grid, mixed_volume_profile, ratio_chain_values, rs_ratio_formula,
    simplex_decomposition, verify_decomposition,
};
use cover_core::geom::{general_difference_body, standard_simplex, volume};
use cover_core::io::{
    certificate_json, estimate_json, history_csv, int_json, lattice_json, load_lattice,
    load_polytope, point_json, polytope_json, rat_json, rat_json_with_decimal, report_json,
    search_result_json,
};
use cover_core::linalg::Vector;
use cover_core::optim::{optimize_lattice, SearchConfig, SearchMethod};
use cover_core::ratext::parse_rational;
use cover_core::report::AuditReport;
use cover_core::{Rat, RatVPolytope, RatVector, Scalar};

#[derive(Parser)]
#[command(name = "cover", version, about = "Exact lattice-covering toolkit")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BodyLattice {
    /// Polytope JSON file: {"dim": n, "vertices": [[[num,den],...],...]}.
    #[arg(long)]
    body: PathBuf,
    /// Lattice JSON file: {"basis": [[[num,den],...],...]} (rows generate).
    #[arg(long)]
    lattice: PathBuf,
}

#[derive(Args)]
struct SimplexLattice {
    /// Simplex JSON file (n+1 vertices).
    #[arg(long)]
    simplex: PathBuf,
    #[arg(long)]
    lattice: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Compute μK − νK with its exact volume and volume ratio.
    Diffbody {
        #[arg(long)]
        body: PathBuf,
        /// Scale μ > 0 as p/q.
        #[arg(long, value_parser = parse_rational_arg)]
        mu: Rat,
        /// Scale ν > 0 as p/q.
        #[arg(long, value_parser = parse_rational_arg)]
        nu: Rat,
    },
    /// Check the simplex volume identity: formula vs exact geometry.
    VerifyTheorem1 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational_arg)]
        mu: Rat,
        #[arg(long, value_parser = parse_rational_arg)]
        nu: Rat,
    },
    /// Build and verify the 2ⁿ-piece decomposition of μTₙ − νTₙ.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational_arg)]
        mu: Rat,
        #[arg(long, value_parser = parse_rational_arg)]
        nu: Rat,
    },
    /// Mixed-volume profile W₀..Wₙ of a body against its reflection.
    MixedVolumes {
        #[arg(long)]
        body: PathBuf,
    },
    /// Volume-ratio bound audit over the (μ,ν) grid.
    BoundsAudit {
        #[arg(long)]
        body: PathBuf,
    },
    /// Certified covering check of body + lattice.
    CoveringCheck {
        #[command(flatten)]
        io: BodyLattice,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Also run the dense-grid sampling oracle with this many points per axis.
        #[arg(long)]
        grid_oracle: Option<u64>,
    },
    /// Exact covering density vol(K)/det(Λ).
    Density {
        #[command(flatten)]
        io: BodyLattice,
    },
    /// Star number via difference-body enumeration (and optional oracle).
    StarNumber {
        #[command(flatten)]
        io: BodyLattice,
        /// Recompute by brute-force pairwise intersection and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Hadwiger inequality audit on a certified covering.
    HadwigerAudit {
        #[command(flatten)]
        io: BodyLattice,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Monte-Carlo multiplicity estimate of det(Λ) on a certified covering.
    Lemma3Estimate {
        #[command(flatten)]
        io: SimplexLattice,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Test whether K ∩ (K+x) is positively homothetic to K.
    Homothety {
        #[arg(long)]
        body: PathBuf,
        /// Comma-separated rational coordinates, e.g. "1/2,0".
        #[arg(long)]
        point: String,
    },
    /// Density lower-bound audit for a certified simplex covering.
    Theorem2Audit {
        #[command(flatten)]
        io: SimplexLattice,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Search for low-density covering lattices of a simplex.
    Optimize {
        /// Dimension of the standard simplex to cover (2..=4).
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        /// JSON or TOML file with SearchConfig overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long, value_parser = parse_method)]
        method: Option<SearchMethod>,
        /// Write the (evaluation, best density) history as CSV.
        #[arg(long)]
        history: Option<PathBuf>,
    },
}

fn parse_rational_arg(s: &str) -> Result<Rat, String> {
    parse_rational(s)
}

fn parse_method(s: &str) -> Result<SearchMethod, String> {
    match s {
        "simplex" => Ok(SearchMethod::Simplex),
        "anneal" => Ok(SearchMethod::Anneal),
        other => Err(format!("unknown method {other:?} (simplex|anneal)")),
    }
}

/// Failure carrying the intended process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn assertion_failure(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn log_enabled() -> bool {
    std::env::var("COVER_LOG").map(|v| !v.is_empty()).unwrap_or(false)
}

fn logln(msg: impl std::fmt::Display) {
    if log_enabled() {
        eprintln!("[cover] {msg}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(workers) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match run(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_body(path: &Path) -> Result<RatVPolytope, Failure> {
    load_polytope(path).map_err(input_error)
}

fn load_simplex(path: &Path) -> Result<RatVPolytope, Failure> {
    let body = load_body(path)?;
    if body.vertices().len() != body.dim() + 1 {
        return Err(input_error(format!(
            "{}: expected a simplex ({} vertices in dimension {})",
            path.display(),
            body.vertices().len(),
            body.dim()
        )));
    }
    Ok(body)
}

fn load_lat(path: &Path) -> Result<cover_core::Lattice, Failure> {
    load_lattice(path).map_err(input_error)
}

fn parse_point(s: &str, dim: usize) -> Result<RatVector, Failure> {
    let coords: Result<Vec<Rat>, String> = s.split(',').map(parse_rational).collect();
    let coords = coords.map_err(input_error)?;
    if coords.len() != dim {
        return Err(input_error(format!(
            "point has {} coordinates, body has dimension {dim}",
            coords.len()
        )));
    }
    Ok(Vector(coords))
}

/// Exit-2 discipline for audit reports: advisory rows (marked in context)
/// may be unsatisfied, everything else must hold.
fn required_rows_satisfied(report: &AuditReport) -> bool {
    report
        .rows
        .iter()
        .all(|r| r.satisfied || r.context.contains("advisory"))
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Diffbody { body, mu, nu } => {
            if *mu <= Rat::from_int(0) || *nu <= Rat::from_int(0) {
                return Err(input_error("mu and nu must be positive"));
            }
            let k = load_body(body)?;
            let d = general_difference_body(&k, mu, nu).map_err(input_error)?;
            let vol_k = volume(&k).map_err(input_error)?;
            let vol_d = volume(&d).map_err(input_error)?;
            Ok(json!({
                "inputs": { "mu": rat_json(mu), "nu": rat_json(nu) },
                "body": polytope_json(&d),
                "volume": rat_json_with_decimal(&vol_d),
                "ratio": rat_json_with_decimal(&(vol_d.clone() / vol_k)),
            }))
        }
        Command::VerifyTheorem1 { n, mu, nu } => {
            if *n < 1 || *n > 5 {
                return Err(input_error("n must be in 1..=5 for the geometric check"));
            }
            if *mu <= Rat::from_int(0) || *nu <= Rat::from_int(0) {
                return Err(input_error("mu and nu must be positive"));
            }
            logln(format!("verifying the ratio identity at n={n}"));
            let simplex = standard_simplex::<Rat>(*n);
            let formula = rs_ratio_formula(*n, mu, nu);
            let body = general_difference_body(&simplex, mu, nu).map_err(input_error)?;
            let geometric =
                volume(&body).map_err(input_error)? / volume(&simplex).map_err(input_error)?;
            let matches = formula == geometric;
            let report = json!({
                "inputs": { "n": n, "mu": rat_json(mu), "nu": rat_json(nu) },
                "formula": rat_json(&formula),
                "geometric": rat_json(&geometric),
                "match": matches,
            });
            if !matches {
                return Err(assertion_failure(format!(
                    "identity violated at n={n}: formula {formula} vs geometric {geometric}"
                )));
            }
            Ok(report)
        }
        Command::Decompose { n, mu, nu } => {
            if *n < 1 || *n > 5 {
                return Err(input_error("n must be in 1..=5"));
            }
            if *mu <= Rat::from_int(0) || *nu <= Rat::from_int(0) {
                return Err(input_error("mu and nu must be positive"));
            }
            let simplex = standard_simplex::<Rat>(*n);
            let pieces = simplex_decomposition(*n, mu, nu).map_err(input_error)?;
            let body = general_difference_body(&simplex, mu, nu).map_err(input_error)?;
            let report = verify_decomposition(&pieces, &body).map_err(input_error)?;
            let piece_rows: Vec<Value> = pieces
                .iter()
                .map(|p| {
                    json!({
                        "i": p.pair.i,
                        "j": p.pair.j,
                        "claimed_volume": rat_json(&p.claimed_volume),
                        "vertices": Value::Array(p.body.vertices().iter().map(point_json).collect()),
                    })
                })
                .collect();
            let out = json!({
                "inputs": { "n": n, "mu": rat_json(mu), "nu": rat_json(nu) },
                "pieces": piece_rows,
                "verification": report_json(&report),
            });
            if !report.all_satisfied() {
                return Err(assertion_failure("decomposition verification failed"));
            }
            Ok(out)
        }
        Command::MixedVolumes { body } => {
            let k = load_body(body)?;
            let vol = volume(&k).map_err(input_error)?;
            let profile = mixed_volume_profile(&k).map_err(input_error)?;
            Ok(json!({
                "volume": rat_json(&vol),
                "profile": Value::Array(profile.iter().map(rat_json).collect()),
                "normalized": Value::Array(
                    profile.iter().map(|w| rat_json(&(w / vol.clone()))).collect()
                ),
            }))
        }
        Command::BoundsAudit { body } => {
            let k = load_body(body)?;
            let report = bound_audit(&k, &default_grid()).map_err(input_error)?;
            let chain: Vec<Value> = (1..=12)
                .map(|n| {
                    let (lhs, mid, rhs) = ratio_chain_values(n);
                    json!({
                        "n": n,
                        "sum": int_json(&lhs),
                        "middle": int_json(&mid),
                        "power": int_json(&rhs),
                        "holds": lhs <= mid && mid <= rhs,
                    })
                })
                .collect();
            let out = json!({
                "report": report_json(&report),
                "ratio_chain": chain,
            });
            if !report.all_satisfied() {
                return Err(assertion_failure(
                    "bound audit failed; a simplex-maximality probe violation would be a research event",
                ));
            }
            Ok(out)
        }
        Command::CoveringCheck { io, depth, grid_oracle } => {
            let k = load_body(&io.body)?;
            let lattice = load_lat(&io.lattice)?;
            logln(format!("verifying covering at depth {depth}"));
            let cert = is_covering(&k, &lattice, *depth).map_err(input_error)?;
            let mut out = serde_json::Map::new();
            out.insert("certificate".into(), certificate_json(&cert));
            out.insert(
                "density".into(),
                rat_json_with_decimal(&density(&k, &lattice).map_err(input_error)?),
            );
            if let Some(per_axis) = grid_oracle {
                let gap = grid_covering_oracle(&k, &lattice, *per_axis).map_err(input_error)?;
                out.insert(
                    "grid_oracle_gap".into(),
                    gap.map(|p| point_json(&p)).unwrap_or(Value::Null),
                );
            }
            if !cert.verdict.is_covered() {
                let text = serde_json::to_string_pretty(&Value::Object(out)).unwrap();
                println!("{text}");
                return Err(assertion_failure(format!(
                    "not certified as a covering: verdict {}",
                    cert.verdict.name()
                )));
            }
            Ok(Value::Object(out))
        }
        Command::Density { io } => {
            let k = load_body(&io.body)?;
            let lattice = load_lat(&io.lattice)?;
            let theta = density(&k, &lattice).map_err(input_error)?;
            Ok(json!({
                "volume": rat_json(&volume(&k).map_err(input_error)?),
                "det": rat_json(lattice.det()),
                "density": rat_json_with_decimal(&theta),
            }))
        }
        Command::StarNumber { io, oracle } => {
            let k = load_body(&io.body)?;
            let lattice = load_lat(&io.lattice)?;
            let alpha = star_number(&k, &lattice).map_err(input_error)?;
            let mut out = serde_json::Map::new();
            out.insert("star_number".into(), json!(alpha));
            if *oracle {
                let brute = star_number_oracle(&k, &lattice).map_err(input_error)?;
                out.insert("oracle".into(), json!(brute));
                if brute != alpha {
                    return Err(assertion_failure(format!(
                        "oracle disagreement: difference-body count {alpha} vs pairwise {brute}"
                    )));
                }
            }
            Ok(Value::Object(out))
        }
        Command::HadwigerAudit { io, depth } => {
            let k = load_body(&io.body)?;
            let lattice = load_lat(&io.lattice)?;
            let cert = is_covering(&k, &lattice, *depth).map_err(input_error)?;
            if !cert.verdict.is_covered() {
                return Err(assertion_failure(format!(
                    "not a covering (verdict {}), audit precondition unverified",
                    cert.verdict.name()
                )));
            }
            let report = hadwiger_audit(&k, &lattice, &cert).map_err(input_error)?;
            let out = json!({
                "certificate": certificate_json(&cert),
                "report": report_json(&report),
            });
            if !report.all_satisfied() {
                return Err(assertion_failure(
                    "Hadwiger inequality failed on a certified covering (verifier bug?)",
                ));
            }
            Ok(out)
        }
        Command::Lemma3Estimate { io, samples, seed, depth } => {
            let simplex = load_simplex(&io.simplex)?;
            let lattice = load_lat(&io.lattice)?;
            let cert = is_covering(&simplex, &lattice, *depth).map_err(input_error)?;
            if !cert.verdict.is_covered() {
                return Err(assertion_failure(format!(
                    "not a covering (verdict {}), estimator precondition unverified",
                    cert.verdict.name()
                )));
            }
            logln(format!("sampling {samples} points with seed {seed}"));
            let est = multiplicity_density_estimate(&simplex, &lattice, &cert, *samples, *seed)
                .map_err(assertion_failure)?;
            let out = estimate_json(&est, lattice.det());
            let err = (est.estimated_det - lattice.det().to_f64()).abs();
            if err > 4.0 * est.std_error {
                let text = serde_json::to_string_pretty(&out).unwrap();
                println!("{text}");
                return Err(assertion_failure(format!(
                    "estimate off by {err:.3e} > 4 standard errors"
                )));
            }
            Ok(out)
        }
        Command::Homothety { body, point } => {
            let k = load_body(body)?;
            let x = parse_point(point, k.dim())?;
            match homothety_check(&k, &x).map_err(input_error)? {
                Some(h) => Ok(json!({
                    "homothetic": true,
                    "lambda": rat_json(&h.lambda),
                    "translate": point_json(&h.translate),
                })),
                None => Ok(json!({ "homothetic": false })),
            }
        }
        Command::Theorem2Audit { io, depth } => {
            let simplex = load_simplex(&io.simplex)?;
            let lattice = load_lat(&io.lattice)?;
            let cert = is_covering(&simplex, &lattice, *depth).map_err(input_error)?;
            if !cert.verdict.is_covered() {
                return Err(assertion_failure(format!(
                    "not a covering (verdict {}), audit precondition unverified",
                    cert.verdict.name()
                )));
            }
            let report = theorem2_audit(&simplex, &lattice, &cert).map_err(input_error)?;
            let out = json!({
                "certificate": certificate_json(&cert),
                "report": report_json(&report),
                "lattice": lattice_json(&lattice),
            });
            if !required_rows_satisfied(&report) {
                let text = serde_json::to_string_pretty(&out).unwrap();
                println!("{text}");
                return Err(assertion_failure("required audit rows failed"));
            }
            Ok(out)
        }
        Command::Optimize {
            dim,
            seed,
            config,
            restarts,
            iterations,
            method,
            history,
        } => {
            let mut cfg = match config {
                Some(path) => read_config(path, *dim)?,
                None => SearchConfig::for_dim(*dim),
            };
            cfg.dim = *dim;
            cfg.seed = *seed;
            if let Some(r) = restarts {
                cfg.restarts = *r;
            }
            if let Some(i) = iterations {
                cfg.iterations = *i;
            }
            if let Some(m) = method {
                cfg.method = *m;
            }
            let simplex = standard_simplex::<Rat>(*dim);
            logln(format!(
                "searching dimension {dim}: {} restarts x {} iterations",
                cfg.restarts, cfg.iterations
            ));
            let result = optimize_lattice(&simplex, &cfg).map_err(assertion_failure)?;
            if let Some(path) = history {
                std::fs::write(path, history_csv(&result.history))
                    .map_err(|e| input_error(format!("cannot write history: {e}")))?;
            }
            let aspirational = Rat::from_fraction(125, 63);
            let gap = result.best_density.clone() - &aspirational;
            let mut out = search_result_json(&result);
            let obj = out.as_object_mut().unwrap();
            obj.insert(
                "aspirational_target".into(),
                rat_json_with_decimal(&aspirational),
            );
            obj.insert("gap_to_target".into(), rat_json_with_decimal(&gap));
            Ok(out)
        }
    }
}

fn read_config(path: &Path, dim: usize) -> Result<SearchConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let is_toml = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("toml"))
        .unwrap_or(false);
    let mut cfg: SearchConfig = if is_toml {
        toml::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?
    } else {
        serde_json::from_str(&text)
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?
    };
    if cfg.dim == SearchConfig::default().dim && dim != cfg.dim {
        cfg.dim = dim;
    }
    Ok(cfg)
}

impl From<cover_core::io::ParseError> for Failure {
    fn from(e: cover_core::io::ParseError) -> Self {
        input_error(e)
    }
}
