use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use amoeba_core::amoeba::{area_ratio, AmoebaError, LogPoint, Window};
use amoeba_core::forge::{search_harnack, SearchOptions, SignStrategy, StoredHarnack};
use amoeba_core::poly::{parse_polynomial, real_up_to_constant, LaurentPolynomial, NewtonPolygon};
use amoeba_core::real_locus::{harnack_verdict, Verdict};
use amoeba_core::render::{render, RenderKind, RenderOptions};
use amoeba_core::report::{maximality_report, Consistency, Profile};
use amoeba_core::ronkin::{order_of_component, ronkin_sample};

const EXIT_INPUT: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Parser)]
#[command(name = "amoeba", version, about = "Amoebas, Ronkin functions and Harnack curves of plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximality report: area ratio, fiber counts, reality and Harnack test.
    Report {
        #[arg(short, long)]
        polynomial: String,
        #[arg(long, default_value = "default")]
        profile: Profile,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw the amoeba, the real locus, both, or the Ronkin density as SVG (plus a JSON sidecar).
    Render {
        #[arg(short, long)]
        polynomial: String,
        #[arg(long)]
        what: RenderKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Log-space window `x1min,x1max,x2min,x2max`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Amoeba area and its ratio to π²·Area(Δ).
    Area {
        #[arg(short, long)]
        polynomial: String,
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
    },
    /// Harnack curve verification and search.
    Harnack {
        #[command(subcommand)]
        command: HarnackCommand,
    },
    /// Ronkin function value, gradient and Hessian at a point.
    Ronkin {
        #[arg(short, long)]
        polynomial: String,
        /// `x1,x2`
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Subcommand)]
enum HarnackCommand {
    Verify {
        #[arg(short, long)]
        polynomial: String,
    },
    Search {
        /// Vertices, e.g. "(0,0),(3,0),(0,3)".
        #[arg(long)]
        polygon: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only the seeded sign candidates.
        #[arg(long)]
        seeded_only: bool,
        /// Name for the emitted store line.
        #[arg(long, default_value = "candidate")]
        name: String,
    },
}

enum Failure {
    Input(String),
    Undecided(String),
    Inconsistent(String),
}

fn poly(text: &str) -> Result<LaurentPolynomial, Failure> {
    parse_polynomial(text).map_err(|e| Failure::Input(e.to_string()))
}

fn floats(text: &str, n: usize) -> Result<Vec<f64>, Failure> {
    let v: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(Failure::Input(format!("expected {n} comma-separated numbers, got {text:?}"))),
    }
}

fn amoeba_failure(e: AmoebaError) -> Failure {
    match e {
        AmoebaError::DegenerateNewtonPolygon | AmoebaError::ResolutionTooLow(_) => Failure::Input(e.to_string()),
        _ => Failure::Undecided(e.to_string()),
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Report {
            polynomial,
            profile,
            json,
        } => {
            let f = poly(&polynomial)?;
            let r = maximality_report(&f, profile).map_err(amoeba_failure)?;
            let text = r.to_json();
            if let Some(p) = json {
                write(&p, &text)?;
            }
            println!("{text}");
            match r.consistency {
                Consistency::ConsistentMaximal | Consistency::ConsistentNonMaximal => Ok(()),
                Consistency::Undecided(d) => Err(Failure::Undecided(d)),
                Consistency::Inconsistent(d) => Err(Failure::Inconsistent(d)),
            }
        }
        Command::Render {
            polynomial,
            what,
            out,
            resolution,
            window,
        } => {
            let f = poly(&polynomial)?;
            let window = match window {
                Some(w) => {
                    let v = floats(&w, 4)?;
                    let w = Window::new(v[0], v[1], v[2], v[3]);
                    if w.is_empty() {
                        return Err(Failure::Input("empty window".into()));
                    }
                    Some(w)
                }
                None => None,
            };
            let opts = RenderOptions {
                window,
                resolution,
                ..Default::default()
            };
            let r = render(&f, what, &opts).map_err(amoeba_failure)?;
            write(&out, &r.svg)?;
            let sidecar = serde_json::to_string_pretty(&r.sidecar).expect("sidecar serializes");
            write(&out.with_extension("json"), &sidecar)?;
            println!("{sidecar}");
            Ok(())
        }
        Command::Area { polynomial, tol } => {
            let f = poly(&polynomial)?;
            if !(tol > 0.0) {
                return Err(Failure::Input("tolerance must be positive".into()));
            }
            let (ratio, est) = area_ratio(&f, tol).map_err(amoeba_failure)?;
            println!(
                "{}",
                json!({
                    "area": est.area,
                    "ratio": ratio,
                    "converged": est.converged,
                    "window": est.window,
                    "history": est.history,
                })
            );
            Ok(())
        }
        Command::Harnack {
            command: HarnackCommand::Verify { polynomial },
        } => {
            let f = poly(&polynomial)?;
            if f.newton_polygon().is_degenerate() {
                return Err(Failure::Input("Newton polygon has zero area".into()));
            }
            let Some(w) = real_up_to_constant(&f) else {
                println!("{}", json!({ "real": false, "verdict": "NotHarnack" }));
                return Ok(());
            };
            let v = harnack_verdict(&w.realify(&f)).map_err(|e| Failure::Undecided(e.to_string()))?;
            println!("{}", json!({ "real": true, "witness": w, "verdict": v }));
            match v.verdict {
                Verdict::Undecided(d) => Err(Failure::Undecided(d)),
                _ => Ok(()),
            }
        }
        Command::Harnack {
            command:
                HarnackCommand::Search {
                    polygon,
                    seed,
                    seeded_only,
                    name,
                },
        } => {
            let p = NewtonPolygon::parse_vertices(&polygon)
                .ok_or_else(|| Failure::Input(format!("cannot parse polygon {polygon:?}")))?;
            let options = SearchOptions {
                seed,
                strategy: if seeded_only {
                    SignStrategy::Seeded
                } else {
                    SignStrategy::Exhaustive
                },
                ..Default::default()
            };
            let c = search_harnack(&p, &options).map_err(|e| Failure::Undecided(e.to_string()))?;
            let line = StoredHarnack::from_candidate(&name, &c);
            println!("{}", serde_json::to_string(&line).expect("store line serializes"));
            Ok(())
        }
        Command::Ronkin { polynomial, at } => {
            let f = poly(&polynomial)?;
            let v = floats(&at, 2)?;
            let x = LogPoint::new(v[0], v[1]);
            let s = ronkin_sample(&f, x);
            let order = order_of_component(&f, x).ok();
            println!(
                "{}",
                json!({
                    "x": [x.x1, x.x2],
                    "N": s.value,
                    "grad": s.gradient,
                    "hess": s.hessian,
                    "det": s.det(),
                    "quadrature_error": s.quadrature_error,
                    "order": order,
                })
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("AMOEBA_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second initialization attempt only fails if a pool exists already
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Undecided(m)) => {
            eprintln!("undecided: {m}");
            ExitCode::from(EXIT_UNDECIDED)
        }
        Err(Failure::Inconsistent(m)) => {
            eprintln!("inconsistent: {m}");
            ExitCode::from(EXIT_INCONSISTENT)
        }
    }
}
