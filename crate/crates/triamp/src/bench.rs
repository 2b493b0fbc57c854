//! Experiment harness: noisy low-rank recovery trials comparing random,
//! Quick-Rank-1, and amplified initializations for CP-ALS, with CSV trial
//! records and JSON aggregates.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplify::AmplifierKind;
use crate::decompose::{amplified_init, cp_als, rank1_fit, rankr_fit, CPModel};
use crate::error::{Error, Result};
use crate::tensor3::{linear_combine, random_unit_rank1, random_unit_tensor, RankOneTriple, Tensor3};

/// Initialization strategy benchmarked for each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Best of `random_restarts` runs from random factor matrices.
    Random,
    /// Iterated Quick Rank 1 deflation.
    QuickRank1,
    /// Sigma4 amplification before each Quick Rank 1 step.
    Sigma4QuickRank1,
    /// Sharp amplification before each Quick Rank 1 step.
    SharpQuickRank1,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Random,
        Method::QuickRank1,
        Method::Sigma4QuickRank1,
        Method::SharpQuickRank1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::QuickRank1 => "qr1",
            Method::Sigma4QuickRank1 => "sigma4+qr1",
            Method::SharpQuickRank1 => "sharp+qr1",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Method::Random),
            "qr1" => Ok(Method::QuickRank1),
            "sigma4+qr1" | "sigma4" => Ok(Method::Sigma4QuickRank1),
            "sharp+qr1" | "sharp" => Ok(Method::SharpQuickRank1),
            other => Err(Error::Parse(format!(
                "unknown method {other:?} (expected random|qr1|sigma4+qr1|sharp+qr1)"
            ))),
        }
    }
}

/// Experiment description; `seed` pins every random choice.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub dims: (usize, usize, usize),
    pub signal_rank: usize,
    pub noise_norm: f64,
    pub trials: usize,
    pub random_restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl ExperimentConfig {
    pub fn new(dims: (usize, usize, usize), signal_rank: usize, noise_norm: f64) -> Self {
        Self {
            dims,
            signal_rank,
            noise_norm,
            trials: 1,
            random_restarts: 10,
            tol: 1e-4,
            max_iter: 500,
            seed: 0,
            methods: Method::ALL.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (p, q, r) = self.dims;
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::Invalid("dims must be positive".into()));
        }
        if self.signal_rank == 0 {
            return Err(Error::Invalid("signal rank must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be >= 1".into()));
        }
        if self.random_restarts == 0 {
            return Err(Error::Invalid("random restarts must be >= 1".into()));
        }
        if self.noise_norm < 0.0 || !self.noise_norm.is_finite() {
            return Err(Error::Invalid("noise norm must be finite and >= 0".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Invalid("methods must be nonempty".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Invalid("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

/// One generated problem: the true rank-1 terms, their sum (the clean
/// signal), and the observed noisy tensor.
#[derive(Debug, Clone)]
pub struct Instance {
    pub truth: Vec<RankOneTriple>,
    pub signal: Tensor3,
    pub noisy: Tensor3,
}

/// Draw a noisy instance: `signal_rank` independent unit rank-1 terms plus a
/// noise tensor drawn uniformly from the radius-`noise_norm` sphere. For
/// ranks above one the signal sum is rescaled to unit Frobenius norm (the
/// weights carry the rescaling), keeping the signal-to-noise ratio and the
/// fit scale identical across ranks.
pub fn make_noisy_instance(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let mut truth: Vec<RankOneTriple> = (0..cfg.signal_rank)
        .map(|_| random_unit_rank1(cfg.dims, rng))
        .collect::<Result<_>>()?;
    let mut signal = sum_terms(&truth, cfg.dims)?;
    if cfg.signal_rank > 1 {
        let scale = 1.0 / signal.frobenius();
        truth = truth
            .iter()
            .map(|t| {
                RankOneTriple::new(
                    t.weight() * scale,
                    t.a().to_vec(),
                    t.b().to_vec(),
                    t.c().to_vec(),
                )
            })
            .collect::<Result<_>>()?;
        signal = sum_terms(&truth, cfg.dims)?;
    }
    let noisy = if cfg.noise_norm > 0.0 {
        let noise = random_unit_tensor(cfg.dims, rng)?.scale(cfg.noise_norm);
        linear_combine(&[(1.0, &signal), (1.0, &noise)])?
    } else {
        signal.clone()
    };
    Ok(Instance {
        truth,
        signal,
        noisy,
    })
}

fn sum_terms(terms: &[RankOneTriple], dims: (usize, usize, usize)) -> Result<Tensor3> {
    let mut acc = Tensor3::zeros(dims)?;
    for t in terms {
        let dense = t.to_tensor();
        acc = linear_combine(&[(1.0, &acc), (1.0, &dense)])?;
    }
    Ok(acc)
}

/// One scored run of one method on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub method: &'static str,
    /// Rank-1 trials: |(a·a')(b·b')(c·c')| against the true factors.
    /// Higher ranks: (T_signal·S)/‖S‖ against the clean signal.
    pub fit: f64,
    /// ALS sweeps; for the random method, summed over all restarts.
    pub iterations: usize,
    pub time_sec: f64,
    /// Final ALS objective fit 1 − ‖T_noisy − S‖/‖T_noisy‖ of the scored run.
    pub fit_noisy: f64,
    /// Iterations of the best restart (equals `iterations` for single-run
    /// methods).
    pub iterations_best: usize,
}

/// Run one method on one instance. `rng` drives the random restarts only.
pub fn run_trial(
    cfg: &ExperimentConfig,
    instance: &Instance,
    method: Method,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord> {
    let score = |model: &CPModel| -> Result<f64> {
        if cfg.signal_rank == 1 {
            rank1_fit(&instance.truth[0], &model.term(0)?)
        } else {
            rankr_fit(&instance.signal, model)
        }
    };
    let start = Instant::now();
    let (fit, iterations, iterations_best, fit_noisy) = match method {
        Method::Random => {
            let mut best_fit = f64::NEG_INFINITY;
            let mut best_iters = 0;
            let mut best_noisy = 0.0;
            let mut total_iters = 0;
            for _ in 0..cfg.random_restarts {
                let init = CPModel::random(cfg.dims, cfg.signal_rank, rng)?;
                let (model, report) =
                    cp_als(&instance.noisy, cfg.signal_rank, &init, cfg.tol, cfg.max_iter)?;
                total_iters += report.iterations;
                let fit = score(&model)?;
                if fit > best_fit {
                    best_fit = fit;
                    best_iters = report.iterations;
                    best_noisy = report.final_fit;
                }
            }
            (best_fit, total_iters, best_iters, best_noisy)
        }
        _ => {
            let kind = match method {
                Method::QuickRank1 => AmplifierKind::Identity,
                Method::Sigma4QuickRank1 => AmplifierKind::Sigma4,
                Method::SharpQuickRank1 => AmplifierKind::Sharp,
                Method::Random => unreachable!(),
            };
            let init = amplified_init(&instance.noisy, cfg.signal_rank, kind)?;
            let (model, report) =
                cp_als(&instance.noisy, cfg.signal_rank, &init, cfg.tol, cfg.max_iter)?;
            (
                score(&model)?,
                report.iterations,
                report.iterations,
                report.final_fit,
            )
        }
    };
    Ok(TrialRecord {
        trial,
        method: method.name(),
        fit,
        iterations,
        time_sec: start.elapsed().as_secs_f64(),
        fit_noisy,
        iterations_best,
    })
}

/// Mean and unbiased standard deviation of fit, iterations, and time for one
/// method.
#[derive(Debug, Clone, Serialize)]
pub struct MethodStats {
    pub trials: usize,
    pub mean_fit: f64,
    pub std_fit: f64,
    pub mean_iterations: f64,
    pub std_iterations: f64,
    pub mean_time_sec: f64,
    pub std_time_sec: f64,
}

pub type AggregateStats = BTreeMap<&'static str, MethodStats>;

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub aggregates: AggregateStats,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn aggregate(records: &[TrialRecord]) -> AggregateStats {
    let mut by_method: BTreeMap<&'static str, Vec<&TrialRecord>> = BTreeMap::new();
    for rec in records {
        by_method.entry(rec.method).or_default().push(rec);
    }
    by_method
        .into_iter()
        .map(|(name, recs)| {
            let fits: Vec<f64> = recs.iter().map(|r| r.fit).collect();
            let iters: Vec<f64> = recs.iter().map(|r| r.iterations as f64).collect();
            let times: Vec<f64> = recs.iter().map(|r| r.time_sec).collect();
            let (mean_fit, std_fit) = mean_std(&fits);
            let (mean_iterations, std_iterations) = mean_std(&iters);
            let (mean_time_sec, std_time_sec) = mean_std(&times);
            (
                name,
                MethodStats {
                    trials: recs.len(),
                    mean_fit,
                    std_fit,
                    mean_iterations,
                    std_iterations,
                    mean_time_sec,
                    std_time_sec,
                },
            )
        })
        .collect()
}

/// RNG stream for a trial: all trials share the seed, each owns a stream, so
/// trials are independent and the experiment parallelizes deterministically.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

/// Run every configured method on `trials` independent instances.
/// Deterministic for a fixed config and seed; trials run in parallel.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<Vec<TrialRecord>> {
            let mut rng = trial_rng(cfg.seed, trial);
            let instance = make_noisy_instance(cfg, &mut rng)?;
            cfg.methods
                .iter()
                .map(|&m| run_trial(cfg, &instance, m, trial, &mut rng))
                .collect()
        })
        .collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let aggregates = aggregate(&records);
    Ok(ExperimentResult {
        records,
        aggregates,
    })
}

pub const CSV_HEADER: &str = "trial,method,fit,iterations,time_sec,fit_noisy,iterations_best";

/// Write the trial table as CSV (schema in `CSV_HEADER`).
pub fn write_csv<W: Write>(records: &[TrialRecord], w: &mut W) -> Result<()> {
    writeln!(w, "{}", CSV_HEADER)?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.trial, r.method, r.fit, r.iterations, r.time_sec, r.fit_noisy, r.iterations_best
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new((8, 8, 8), 1, 1.0);
        cfg.trials = 4;
        cfg.random_restarts = 2;
        cfg.tol = 1e-4;
        cfg.seed = 7;
        cfg
    }

    #[test]
    fn instance_construction() {
        let mut cfg = small_config();
        cfg.noise_norm = 0.0;
        let mut rng = trial_rng(cfg.seed, 0);
        let inst = make_noisy_instance(&cfg, &mut rng).unwrap();
        assert!((inst.noisy.frobenius() - 1.0).abs() < 1e-12);

        cfg.noise_norm = 2.5;
        let mut rng = trial_rng(cfg.seed, 0);
        let inst = make_noisy_instance(&cfg, &mut rng).unwrap();
        let diff = linear_combine(&[(1.0, &inst.noisy), (-1.0, &inst.signal)]).unwrap();
        assert!((diff.frobenius() - 2.5).abs() < 1e-12);

        // determinism
        let mut rng2 = trial_rng(cfg.seed, 0);
        let inst2 = make_noisy_instance(&cfg, &mut rng2).unwrap();
        assert_eq!(inst.noisy.data(), inst2.noisy.data());
    }

    #[test]
    fn rank2_signal_is_normalized() {
        let mut cfg = small_config();
        cfg.signal_rank = 2;
        let mut rng = trial_rng(3, 0);
        let inst = make_noisy_instance(&cfg, &mut rng).unwrap();
        assert!((inst.signal.frobenius() - 1.0).abs() < 1e-12);
        let resum = sum_terms(&inst.truth, cfg.dims).unwrap();
        assert_eq!(resum.data(), inst.signal.data());
    }

    #[test]
    fn exact_rank1_all_methods() {
        let mut cfg = small_config();
        cfg.noise_norm = 0.0;
        let mut rng = trial_rng(cfg.seed, 0);
        let inst = make_noisy_instance(&cfg, &mut rng).unwrap();
        for method in Method::ALL {
            let rec = run_trial(&cfg, &inst, method, 0, &mut rng).unwrap();
            assert!(rec.fit >= 1.0 - 1e-8, "{}: fit {}", method.name(), rec.fit);
            assert!(rec.fit <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn experiment_shapes_and_aggregates() {
        let cfg = small_config();
        let result = run_experiment(&cfg).unwrap();
        assert_eq!(result.records.len(), cfg.trials * cfg.methods.len());
        for rec in &result.records {
            assert!(rec.fit >= 0.0 && rec.fit <= 1.0 + 1e-12);
            assert!(rec.iterations >= 1);
            assert!(rec.iterations_best <= rec.iterations);
        }
        // std recomputation from the records matches the aggregate
        let stats = &result.aggregates["qr1"];
        let fits: Vec<f64> = result
            .records
            .iter()
            .filter(|r| r.method == "qr1")
            .map(|r| r.fit)
            .collect();
        let mean = fits.iter().sum::<f64>() / fits.len() as f64;
        let var =
            fits.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (fits.len() - 1) as f64;
        assert!((stats.mean_fit - mean).abs() < 1e-14);
        assert!((stats.std_fit - var.sqrt()).abs() < 1e-14);
        assert!(stats.std_fit >= 0.0);
    }

    #[test]
    fn determinism_modulo_time() {
        let cfg = small_config();
        let strip = |records: &[TrialRecord]| -> Vec<String> {
            records
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.trial, r.method, r.fit, r.iterations, r.fit_noisy, r.iterations_best
                    )
                })
                .collect()
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(strip(&a.records), strip(&b.records));
    }

    #[test]
    fn csv_schema() {
        let cfg = small_config();
        let result = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&result.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.count(), result.records.len());
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_config();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small_config();
        cfg.methods.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = small_config();
        cfg.noise_norm = -1.0;
        assert!(cfg.validate().is_err());
        assert!("sigma4+qr1".parse::<Method>().unwrap() == Method::Sigma4QuickRank1);
        assert!("bogus".parse::<Method>().is_err());
    }
}
