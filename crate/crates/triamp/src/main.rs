//! Command-line interface: tensor generation, diagram census and evaluation,
//! invariants, amplification, CP decomposition, and the experiment harness.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use triamp::amplify::{amplify, AmplifierKind};
use triamp::bench::{run_experiment, write_csv, ExperimentConfig, Method};
use triamp::decompose::{amplified_init, cp_als, quick_rank1, CPModel};
use triamp::diagrams::{count_connected_classes, enumerate_matchings, parse_diagram};
use triamp::norms::{invariants, sharp_pow4_from, sigma4_pow4_from};
use triamp::tensor3::{random_unit_tensor, Tensor3};

#[derive(Parser)]
#[command(name = "triamp", version, about = "3-way tensor invariants, amplification, and CP decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random unit tensor to a file.
    Gen {
        /// Dimensions as p,q,r.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize, usize),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; a .bin extension selects the binary format.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print matching counts and connected colored-diagram class counts.
    Census {
        /// Largest vertex count to include (even, census rows up to 6).
        #[arg(long, default_value_t = 6)]
        max_d: usize,
    },
    /// Evaluate a diagram file against a tensor file.
    Evaluate {
        diagram: PathBuf,
        tensor: PathBuf,
    },
    /// Print the five degree-4 invariants and both norms as JSON.
    Invariants { tensor: PathBuf },
    /// Amplify a tensor and write the result.
    Amplify {
        tensor: PathBuf,
        /// Which amplification map to apply.
        #[arg(long)]
        kind: String,
        /// Output path; a .bin extension selects the binary format.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank-r CP decomposition; prints the model and ALS report as JSON.
    Decompose {
        tensor: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Initialization: random, qr1, sigma4, or sharp.
        #[arg(long, default_value = "sharp")]
        init: String,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        /// Seed for the random initialization.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Noisy low-rank recovery experiment; writes trial CSV, prints JSON
    /// aggregates.
    Bench {
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize, usize),
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long)]
        seed: u64,
        /// CSV output path for the trial table.
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated subset of random,qr1,sigma4+qr1,sharp+qr1.
        #[arg(long)]
        methods: Option<String>,
        /// Optional path for the JSON aggregates (also printed to stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected p,q,r got {s:?}"));
    }
    let mut dims = [0usize; 3];
    for (d, part) in dims.iter_mut().zip(&parts) {
        *d = part
            .trim()
            .parse()
            .map_err(|e| format!("bad dimension {part:?}: {e}"))?;
    }
    Ok((dims[0], dims[1], dims[2]))
}

fn is_binary_path(path: &Path) -> bool {
    path.extension().map(|e| e == "bin").unwrap_or(false)
}

fn read_tensor(path: &Path) -> triamp::Result<Tensor3> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    if is_binary_path(path) {
        Tensor3::read_binary(&mut reader)
    } else {
        Tensor3::read_text(&mut reader)
    }
}

fn write_tensor(t: &Tensor3, path: &Path) -> triamp::Result<()> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    if is_binary_path(path) {
        t.write_binary(&mut writer)?;
    } else {
        t.write_text(&mut writer)?;
    }
    writer.flush()?;
    Ok(())
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> triamp::Result<()> {
    match cli.command {
        Command::Gen { dims, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_unit_tensor(dims, &mut rng)?;
            write_tensor(&t, &out)?;
            println!("wrote {}x{}x{} unit tensor to {}", dims.0, dims.1, dims.2, out.display());
        }
        Command::Census { max_d } => {
            println!("{:>4} {:>12} {:>20}", "d", "matchings", "connected classes");
            let mut d = 2;
            while d <= max_d {
                let matchings = enumerate_matchings(d)?.len();
                let classes = if d <= 6 {
                    count_connected_classes(d)?.to_string()
                } else {
                    "-".to_string()
                };
                println!("{:>4} {:>12} {:>20}", d, matchings, classes);
                d += 2;
            }
        }
        Command::Evaluate { diagram, tensor } => {
            let text = std::fs::read_to_string(&diagram)?;
            let d = parse_diagram(&text)?;
            let t = read_tensor(&tensor)?;
            println!("{}", d.evaluate(&t)?);
        }
        Command::Invariants { tensor } => {
            let t = read_tensor(&tensor)?;
            let inv = invariants(&t)?;
            let sigma4_pow4 = sigma4_pow4_from(&inv);
            let sharp_pow4 = sharp_pow4_from(&inv);
            let out = json!({
                "frob4": inv.frob4,
                "frame1": inv.frame1,
                "frame2": inv.frame2,
                "frame3": inv.frame3,
                "tetra": inv.tetra,
                "sigma4": sigma4_pow4.max(0.0).powf(0.25),
                "sharp": sharp_pow4.max(0.0).powf(0.25),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        Command::Amplify { tensor, kind, out } => {
            let kind: AmplifierKind = kind.parse()?;
            let t = read_tensor(&tensor)?;
            let amped = amplify(&t, kind)?;
            write_tensor(&amped, &out)?;
            println!("wrote {kind}-amplified tensor to {}", out.display());
        }
        Command::Decompose {
            tensor,
            rank,
            init,
            tol,
            max_iter,
            seed,
        } => {
            let t = read_tensor(&tensor)?;
            let model = match init.as_str() {
                "random" => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    CPModel::random(t.dims(), rank, &mut rng)?
                }
                "qr1" => {
                    if rank == 1 {
                        CPModel::from_terms(&[quick_rank1(&t)?])?
                    } else {
                        amplified_init(&t, rank, AmplifierKind::Identity)?
                    }
                }
                other => amplified_init(&t, rank, other.parse()?)?,
            };
            let (model, report) = cp_als(&t, rank, &model, tol, max_iter)?;
            let out = json!({ "model": model, "report": report });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        Command::Bench {
            dims,
            rank,
            noise,
            trials,
            restarts,
            tol,
            max_iter,
            seed,
            out,
            methods,
            json: json_path,
        } => {
            let mut cfg = ExperimentConfig::new(dims, rank, noise);
            cfg.trials = trials;
            cfg.random_restarts = restarts;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            cfg.seed = seed;
            if let Some(spec) = methods {
                cfg.methods = spec
                    .split(',')
                    .map(|m| m.trim().parse::<Method>())
                    .collect::<triamp::Result<_>>()?;
            }
            let result = run_experiment(&cfg)?;
            let file = File::create(&out)?;
            let mut writer = BufWriter::new(file);
            write_csv(&result.records, &mut writer)?;
            writer.flush()?;
            let aggregates =
                serde_json::to_string_pretty(&result.aggregates).expect("serializable");
            if let Some(path) = json_path {
                std::fs::write(&path, &aggregates)?;
            }
            println!("{aggregates}");
        }
    }
    Ok(())
}
