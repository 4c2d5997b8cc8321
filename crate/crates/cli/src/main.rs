//! Batch certification front end.
//!
//! Every subcommand prints a JSON report (schema v1) to stdout — or to
//! `--out <file>` — and a short human summary to stderr. Exit codes:
//! 0 success/pass, 1 a check ran and failed, 2 usage error, 3 numerical
//! failure. Randomized procedures take `--seed` (default 42) and reproduce
//! byte-identical reports for identical invocations; `--timings` adds
//! wall-clock milliseconds at the cost of that byte-identity.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use blochcert::corpus::{corpus_get, corpus_list, CorpusEntry};
use blochcert::error::Error;
use blochcert::geometry::{ConvexDomain, Vector};
use blochcert::om::{check_sqrt_mean_inequality, is_derivative_increasing, OMFunction};
use blochcert::omega::{grid_oracle_details, lim_ratio_check, omega_distance, GeodesicConfig};
use blochcert::report::Report;
use blochcert::seminorms::{
    bloch_number, certify_equality, check_admissible, lipschitz_number, psi_from_spec, CheckConfig,
    SupremumConfig,
};
use blochcert::weights::Weight;

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser)]
#[command(name = "blochcert", version, about = "Weighted path metrics and semi-norm certification")]
struct Cli {
    /// Seed for every randomized procedure; echoed in the report.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Include wall-clock timing in the report (breaks byte-identical reruns).
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GeodesicArgs {
    /// Polyline control points for the geodesic optimizer.
    #[arg(long, default_value_t = 33)]
    control_points: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Boundary margin keeping paths strictly interior.
    #[arg(long, default_value_t = 1e-6)]
    margin: f64,
}

impl GeodesicArgs {
    fn to_config(&self) -> GeodesicConfig {
        GeodesicConfig {
            control_points: self.control_points,
            max_iters: self.max_iters,
            margin: self.margin,
            ..GeodesicConfig::default()
        }
    }
}

#[derive(Args, Clone)]
struct SupremumArgs {
    #[arg(long, default_value_t = 4096)]
    interior_samples: usize,
    #[arg(long, default_value_t = 8192)]
    pair_samples: usize,
    #[arg(long, default_value_t = 3)]
    refine_rounds: usize,
    /// Boundary shells swept, comma-separated, strictly decreasing.
    #[arg(long, default_value = "1e-2,1e-3,1e-4")]
    shells: String,
}

impl SupremumArgs {
    fn to_config(&self, seed: u64) -> Result<SupremumConfig, Error> {
        let cfg = SupremumConfig {
            interior_samples: self.interior_samples,
            pair_samples: self.pair_samples,
            refine_rounds: self.refine_rounds,
            shell_deltas: parse_list(&self.shells)?,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the ω-distance between two points.
    Distance {
        /// Weight spec: const1 | hyperbolic | spherical | phi_prime:<om-spec>.
        #[arg(long)]
        weight: String,
        /// Start point as comma-separated coordinates, e.g. "0,0".
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// End point as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Cross-check against the 2-D grid-graph oracle.
        #[arg(long, default_value_t = false)]
        oracle: bool,
        /// Grid resolution for the oracle.
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        /// Export the geodesic polyline as CSV.
        #[arg(long)]
        export_path: Option<String>,
        #[command(flatten)]
        geodesic: GeodesicArgs,
    },
    /// Estimate the Bloch number of a corpus mapping.
    Bloch {
        #[arg(long)]
        map: String,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        coweight: String,
        #[command(flatten)]
        supremum: SupremumArgs,
    },
    /// Estimate the Lipschitz number of a corpus mapping.
    Lipschitz {
        #[arg(long)]
        map: String,
        /// Admissible function: hyperbolic | minmax | geometric_mean:<om-spec>
        /// | spherical_normal | ratio, optionally scaled:<c>:<label>.
        #[arg(long)]
        psi: String,
        #[arg(long, default_value = "hyperbolic")]
        weight: String,
        #[arg(long, default_value = "const1")]
        coweight: String,
        #[command(flatten)]
        supremum: SupremumArgs,
    },
    /// Certify 𝔅 = 𝔏 for a corpus mapping at a relative-gap tolerance.
    Certify {
        #[arg(long)]
        map: String,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        coweight: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        tol: f64,
        /// Run the admissibility checker first instead of waiving it.
        #[arg(long, default_value_t = false)]
        check_admissibility: bool,
        #[command(flatten)]
        supremum: SupremumArgs,
    },
    /// Verify the √(φ′φ′)-mean inequality over seeded pairs.
    OmCheck {
        /// artanh | nev:phi0=<v>,dphi0=<v>,atoms=(t:w;...).
        #[arg(long)]
        om: String,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        /// Also scan φ′ monotonicity on [0, hi).
        #[arg(long)]
        monotone_hi: Option<f64>,
    },
    /// Per-condition admissibility report for a Ψ candidate.
    AdmissibleCheck {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "hyperbolic")]
        weight: String,
        #[arg(long, default_value = "const1")]
        coweight: String,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 48)]
        numerical_pairs: usize,
    },
    /// Probe lim d_ω(x, y)/∥x−y∥ = ω(x) at shrinking radii.
    LimCheck {
        #[arg(long)]
        weight: String,
        /// Base point as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Radii, comma-separated, strictly decreasing.
        #[arg(long)]
        radii: String,
        #[arg(long, default_value_t = 16)]
        directions: usize,
        #[command(flatten)]
        geodesic: GeodesicArgs,
    },
    /// Corpus registry operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List the built-in mappings.
    List,
}

fn parse_point(s: &str) -> Result<Vector, Error> {
    let coords: Result<Vec<f64>, Error> = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coordinate {c:?}")))
        })
        .collect();
    Vector::new(coords?)
}

fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {c:?}")))
        })
        .collect()
}

/// Coweight specs get a codomain-sized domain: `const1` covers all of the
/// codomain (a huge ball), the rest keep their natural domains.
fn coweight_from_spec(spec: &str, codomain_dim: usize) -> Result<Weight, Error> {
    match spec.trim() {
        "const1" => Ok(Weight::constant_one(ConvexDomain::ball(
            Vector::zeros(codomain_dim),
            1e12,
        )?)),
        other => Weight::from_spec(other),
    }
}

struct Outcome {
    report: Report,
    exit: i32,
    summary: String,
}

fn corpus_entry(label: &str) -> Result<CorpusEntry, Error> {
    corpus_get(label)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let seed = cli.seed;
    match &cli.command {
        Command::Distance {
            weight,
            from,
            to,
            oracle,
            resolution,
            export_path,
            geodesic,
        } => {
            let w = Weight::from_spec(weight)?;
            let x = parse_point(from)?;
            let y = parse_point(to)?;
            let cfg = geodesic.to_config();
            let res = omega_distance(&x, &y, &w, &cfg)?;
            let mut results = json!({
                "distance": res,
                "weight_label": w.label(),
            });
            let mut summary = format!(
                "d_omega({from} -> {to}) = {:.9}  [{} iterations, converged: {}]",
                res.value, res.iterations, res.converged
            );
            if *oracle {
                let det = grid_oracle_details(&x, &y, &w, *resolution, cfg.margin)?;
                let rel_gap = (res.value - det.value).abs() / det.value.max(1e-300);
                results["oracle"] = json!({
                    "value": det.value,
                    "raw_graph_value": det.raw_graph_value,
                    "grid_nodes": det.grid_nodes,
                    "resolution": resolution,
                    "relative_gap_vs_optimizer": rel_gap,
                });
                summary.push_str(&format!("\noracle = {:.9} (relative gap {:.3e})", det.value, rel_gap));
            }
            if let Some(path) = export_path {
                std::fs::write(path, res.path.to_csv())
                    .map_err(|e| Error::InvalidParameter(format!("cannot write {path}: {e}")))?;
            }
            let mut report = Report::new(
                "distance",
                seed,
                json!({
                    "weight": weight, "from": from, "to": to,
                    "oracle": oracle, "resolution": resolution,
                    "control_points": geodesic.control_points,
                    "max_iters": geodesic.max_iters,
                    "margin": geodesic.margin,
                }),
                results,
            );
            let exit = if res.converged {
                EXIT_OK
            } else {
                report.warn("geodesic descent hit the sweep budget before the decrease tolerance");
                EXIT_NUMERICAL
            };
            Ok(Outcome { report, exit, summary })
        }

        Command::Bloch { map, weight, coweight, supremum } => {
            let entry = corpus_entry(map)?;
            let w = Weight::from_spec(weight)?;
            let cow = coweight_from_spec(coweight, entry.mapping.codomain_dim())?;
            let cfg = supremum.to_config(seed)?;
            let est = bloch_number(&entry.mapping, &w, &cow, &cfg)?;
            let summary = format!(
                "Bloch estimate for {map}: {:.6} (argmax {:?})",
                est.estimate,
                est.argmax.coords()
            );
            let report = Report::new(
                "bloch",
                seed,
                json!({
                    "map": map, "weight": weight, "coweight": coweight,
                    "interior_samples": supremum.interior_samples,
                    "refine_rounds": supremum.refine_rounds,
                    "shells": supremum.shells,
                }),
                json!({
                    "estimate": est,
                    "known_bloch": entry.known_bloch,
                }),
            );
            Ok(Outcome { report, exit: EXIT_OK, summary })
        }

        Command::Lipschitz { map, psi, weight, coweight, supremum } => {
            let entry = corpus_entry(map)?;
            let w = Weight::from_spec(weight)?;
            let cow = coweight_from_spec(coweight, entry.mapping.codomain_dim())?;
            let p = psi_from_spec(psi, &entry.mapping, &w, &cow)?;
            let cfg = supremum.to_config(seed)?;
            let est = lipschitz_number(&entry.mapping, &p, &cfg)?;
            let summary = format!("Lipschitz estimate for {map} with psi={psi}: {:.6}", est.estimate);
            let report = Report::new(
                "lipschitz",
                seed,
                json!({
                    "map": map, "psi": psi, "weight": weight, "coweight": coweight,
                    "pair_samples": supremum.pair_samples,
                    "refine_rounds": supremum.refine_rounds,
                    "shells": supremum.shells,
                }),
                json!({ "estimate": est }),
            );
            Ok(Outcome { report, exit: EXIT_OK, summary })
        }

        Command::Certify {
            map,
            weight,
            coweight,
            psi,
            tol,
            check_admissibility,
            supremum,
        } => {
            let entry = corpus_entry(map)?;
            let w = Weight::from_spec(weight)?;
            let cow = coweight_from_spec(coweight, entry.mapping.codomain_dim())?;
            let p = psi_from_spec(psi, &entry.mapping, &w, &cow)?;
            let cfg = supremum.to_config(seed)?;
            let admissibility = if *check_admissibility {
                Some(check_admissible(
                    &p,
                    &entry.mapping,
                    &w,
                    &cow,
                    &CheckConfig { seed, ..CheckConfig::default() },
                )?)
            } else {
                None
            };
            let cert = certify_equality(&entry.mapping, &w, &cow, &p, &cfg, *tol, admissibility.is_none());
            let numerical_failure = !cert.failures.is_empty();
            let admissibility_ok = admissibility.as_ref().map_or(true, |a| a.passed);
            let pass = cert.pass && admissibility_ok;
            let summary = format!(
                "certify {map}: B = {:?}, L = {:?}, relative gap = {:?}, pass = {pass}",
                cert.bloch_estimate, cert.lipschitz_estimate, cert.relative_gap
            );
            let report = Report::new(
                "certify",
                seed,
                json!({
                    "map": map, "weight": weight, "coweight": coweight, "psi": psi,
                    "tol": tol, "check_admissibility": check_admissibility,
                    "interior_samples": supremum.interior_samples,
                    "pair_samples": supremum.pair_samples,
                    "refine_rounds": supremum.refine_rounds,
                    "shells": supremum.shells,
                }),
                json!({
                    "certificate": cert,
                    "admissibility": admissibility,
                }),
            );
            let exit = if numerical_failure {
                EXIT_NUMERICAL
            } else if pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            Ok(Outcome { report, exit, summary })
        }

        Command::OmCheck { om, pairs, monotone_hi } => {
            let phi = OMFunction::parse(om)?;
            // Deterministic low-discrepancy (s, t) pairs in (-0.95, 0.95).
            let mut min_slack = f64::INFINITY;
            let mut worst: Option<(f64, f64)> = None;
            let mut checked = 0usize;
            let golden = 0.6180339887498949_f64;
            let mut u = 0.2137_f64;
            let mut vv = 0.811_f64;
            for _ in 0..*pairs {
                u = (u + golden) % 1.0;
                vv = (vv + golden * golden) % 1.0;
                let a = -0.95 + 1.9 * u;
                let b = -0.95 + 1.9 * vv;
                if (a - b).abs() < 1e-9 {
                    continue;
                }
                let (s, t) = if a < b { (a, b) } else { (b, a) };
                let slack = check_sqrt_mean_inequality(&phi, s, t)?;
                checked += 1;
                if slack < min_slack {
                    min_slack = slack;
                    worst = Some((s, t));
                }
            }
            let inequality_holds = min_slack >= -1e-12;
            let monotone = match monotone_hi {
                Some(hi) => Some(is_derivative_increasing(&phi, *hi, 512)?),
                None => None,
            };
            let summary = format!(
                "om-check {om}: {checked} pairs, min slack {min_slack:.3e}, holds: {inequality_holds}"
            );
            let report = Report::new(
                "om-check",
                seed,
                json!({ "om": om, "pairs": pairs, "monotone_hi": monotone_hi }),
                json!({
                    "checked": checked,
                    "min_slack": min_slack,
                    "worst_pair": worst,
                    "inequality_holds": inequality_holds,
                    "derivative_monotonicity": monotone,
                }),
            );
            let exit = if inequality_holds { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok(Outcome { report, exit, summary })
        }

        Command::AdmissibleCheck { psi, map, weight, coweight, pairs, numerical_pairs } => {
            let entry = corpus_entry(map)?;
            let w = Weight::from_spec(weight)?;
            let cow = coweight_from_spec(coweight, entry.mapping.codomain_dim())?;
            let p = psi_from_spec(psi, &entry.mapping, &w, &cow)?;
            let ccfg = CheckConfig {
                pairs: *pairs,
                numerical_pairs: *numerical_pairs,
                seed,
                ..CheckConfig::default()
            };
            let rep = check_admissible(&p, &entry.mapping, &w, &cow, &ccfg)?;
            let mut summary = format!("admissible-check {psi} on {map}: passed = {}", rep.passed);
            for c in &rep.conditions {
                summary.push_str(&format!(
                    "\n  {} [{}]: {} (worst slack {:.3e})",
                    c.condition,
                    c.route,
                    if c.passed { "ok" } else { "FAILED" },
                    c.worst_slack
                ));
            }
            let exit = if rep.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
            let report = Report::new(
                "admissible-check",
                seed,
                json!({
                    "psi": psi, "map": map, "weight": weight, "coweight": coweight,
                    "pairs": pairs, "numerical_pairs": numerical_pairs,
                }),
                json!({ "report": rep }),
            );
            Ok(Outcome { report, exit, summary })
        }

        Command::LimCheck { weight, at, radii, directions, geodesic } => {
            let w = Weight::from_spec(weight)?;
            let x = parse_point(at)?;
            let rs = parse_list(radii)?;
            let cfg = geodesic.to_config();
            let rep = lim_ratio_check(&x, &w, &rs, *directions, &cfg)?;
            let mut summary = format!(
                "lim-check at {at}: omega(x) = {:.7}, monotone shrinking: {}",
                rep.omega_at_x, rep.monotone_shrinking
            );
            for row in &rep.rows {
                summary.push_str(&format!(
                    "\n  r = {:9.3e}  worst |d/r - omega| = {:.6e}",
                    row.radius, row.worst_deviation
                ));
            }
            let exit = if rep.monotone_shrinking { EXIT_OK } else { EXIT_CHECK_FAILED };
            let report = Report::new(
                "lim-check",
                seed,
                json!({
                    "weight": weight, "at": at, "radii": radii, "directions": directions,
                    "control_points": geodesic.control_points,
                    "margin": geodesic.margin,
                }),
                json!({ "report": rep }),
            );
            Ok(Outcome { report, exit, summary })
        }

        Command::Corpus { action: CorpusAction::List } => {
            let labels = corpus_list();
            let entries: Vec<serde_json::Value> = labels
                .iter()
                .map(|l| {
                    let e = corpus_get(l).expect("registry label");
                    json!({
                        "label": l,
                        "known_bloch": e.known_bloch,
                        "provenance": e.provenance,
                        "weight": e.weight,
                        "coweight": e.coweight,
                        "psi": e.psi,
                        "notes": e.notes,
                    })
                })
                .collect();
            let summary = labels.join("\n");
            let report = Report::new("corpus list", seed, json!({}), json!({ "entries": entries }));
            Ok(Outcome { report, exit: EXIT_OK, summary })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; keep its exit code for --help etc.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let started = Instant::now();
    match run(&cli) {
        Ok(mut outcome) => {
            if cli.timings {
                outcome.report = outcome.report.with_timing(started.elapsed().as_millis() as u64);
            }
            let text = outcome.report.to_json();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write report to {path}: {e}");
                        std::process::exit(EXIT_USAGE);
                    }
                }
                None => {
                    print!("{text}");
                }
            }
            eprintln!("{}", outcome.summary);
            std::process::exit(outcome.exit);
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
            std::process::exit(code);
        }
    }
}
