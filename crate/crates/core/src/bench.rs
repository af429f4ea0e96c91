//! The security-assessment experiment: sample promised conjugacy instances
//! under a length-invariant measure, race the heuristic against the
//! deterministic enumerator, account expected running time per input length,
//! extrapolate by a small-degree polynomial, and classify how fast the
//! heuristic's failure rate decays.

use crate::attacks::{
    brute_force_search, composite_run, length_based_attack, ConjugacyInstance, SolverConfig,
    SolverTag,
};
use crate::error::{Error, Result};
use crate::platform::Platform;
use crate::protocols::derived_rng;
use crate::words::{random_reduced_word, Word};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Instance sampler: hidden conjugators are drawn uniformly among freely
/// reduced words of the exact requested length, so equal-length inputs are
/// equiprobable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerConfig {
    #[serde(with = "platform_string")]
    pub platform: Platform,
    pub lengths: Vec<usize>,
    pub trials_per_length: usize,
    pub pairs_per_instance: usize,
    pub base_word_length: usize,
    pub seed: u64,
}

mod platform_string {
    use super::Platform;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Platform, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Platform, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A sampled promised instance; the hidden conjugator is kept only for
/// diagnostics and never used to score success.
#[derive(Debug, Clone)]
pub struct SampledInstance {
    pub instance: ConjugacyInstance,
    pub hidden: Word,
}

/// Draw the instance `(n, id)` of a campaign. Each instance owns an rng
/// stream derived from `(seed, n, id)`, so trials are reproducible in any
/// execution order and on any worker count.
pub fn sample_instance(cfg: &SamplerConfig, n: usize, id: u64) -> Result<SampledInstance> {
    let mut rng = derived_rng(cfg.seed, &format!("sample/{n}"), id);
    let alphabet = cfg.platform.alphabet_size();
    let hidden = random_reduced_word(&mut rng, alphabet, n, None)?;
    let x = cfg.platform.element(&hidden)?;
    let x_inv = x.inverse();
    let mut pairs = Vec::with_capacity(cfg.pairs_per_instance);
    for _ in 0..cfg.pairs_per_instance {
        let a = random_reduced_word(&mut rng, alphabet, cfg.base_word_length, None)?;
        let b = x.mul(&cfg.platform.element(&a)?).mul(&x_inv).to_word();
        pairs.push((a, b));
    }
    let instance = ConjugacyInstance::new(cfg.platform, pairs)?.promised(n);
    Ok(SampledInstance { instance, hidden })
}

/// Expected running time of the raced solver on inputs of one length:
/// `e = (h·b + d·(100 - b)) / 100` with `b` the heuristic success percentage,
/// `h` the heuristic time bound and `d` the deterministic bound on the rest.
pub fn expected_time(h: f64, d: f64, b: f64) -> Result<f64> {
    if !(0.0..=100.0).contains(&b) {
        return Err(Error::OutOfRange {
            what: "success percentage b",
            value: b,
        });
    }
    if h < 0.0 || d < 0.0 {
        return Err(Error::OutOfRange {
            what: "time bound",
            value: h.min(d),
        });
    }
    Ok((h * b + d * (100.0 - b)) / 100.0)
}

/// `p^r`: probability that a per-round attack with single-round success
/// probability `p` breaks all `r` independent rounds.
pub fn multi_round_success(p: f64, r: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "probability p",
            value: p,
        });
    }
    if r == 0 {
        return Err(Error::OutOfRange {
            what: "round count r",
            value: 0.0,
        });
    }
    Ok(p.powi(r as i32))
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloCheck {
    pub exact: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub within_tolerance: bool,
}

/// Simulate `trials` multi-round attacks of `r` independent Bernoulli(p)
/// rounds each and compare the all-rounds-broken frequency against `p^r`
/// within four standard errors.
pub fn monte_carlo_check(p: f64, r: u32, trials: u64, seed: u64) -> Result<MonteCarloCheck> {
    use rand::Rng;
    let exact = multi_round_success(p, r)?;
    let mut rng = derived_rng(seed, "monte-carlo", 0);
    let mut successes = 0u64;
    for _ in 0..trials {
        let mut all = true;
        for _ in 0..r {
            if rng.gen::<f64>() >= p {
                all = false;
                break;
            }
        }
        if all {
            successes += 1;
        }
    }
    let estimate = successes as f64 / trials as f64;
    let std_error = (exact * (1.0 - exact) / trials as f64).sqrt();
    let within_tolerance = (estimate - exact).abs() <= 4.0 * std_error.max(f64::MIN_POSITIVE);
    Ok(MonteCarloCheck {
        exact,
        estimate,
        std_error,
        within_tolerance,
    })
}

// ---------------------------------------------------------------------------
// Polynomial fitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitModel {
    pub degree: usize,
    /// Ascending powers: `coefficients[k]` multiplies `n^k`.
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub relative_residual: f64,
    /// True when the relative residual and the leading coefficient are both
    /// under the configured bounds.
    pub small_degree_fit: bool,
}

impl FitModel {
    pub fn evaluate(&self, n: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * n + c)
    }
}

/// Least-squares polynomial fit via Householder QR on the Vandermonde
/// system. Needs `degree + 1` distinct abscissas.
pub fn fit_polynomial(
    points: &[(f64, f64)],
    degree: usize,
    relative_residual_threshold: f64,
    leading_coefficient_bound: f64,
) -> Result<FitModel> {
    let cols = degree + 1;
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < cols {
        return Err(Error::Underdetermined {
            degree,
            needed: cols,
            got: distinct.len(),
        });
    }
    let rows = points.len();
    let mut a = vec![vec![0.0f64; cols]; rows];
    let mut y: Vec<f64> = points.iter().map(|p| p.1).collect();
    for (row, &(x, _)) in a.iter_mut().zip(points) {
        let mut power = 1.0;
        for cell in row.iter_mut() {
            *cell = power;
            power *= x;
        }
    }
    // Householder triangularization of [A | y].
    for k in 0..cols {
        let mut norm = 0.0;
        for row in a.iter().skip(k) {
            norm += row[k] * row[k];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        for col in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i - k] * a[i][col]).sum();
            let scale = 2.0 * dot / vnorm_sq;
            for i in k..rows {
                a[i][col] -= scale * v[i - k];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i - k] * y[i]).sum();
        let scale = 2.0 * dot / vnorm_sq;
        for i in k..rows {
            y[i] -= scale * v[i - k];
        }
    }
    // Back substitution.
    let mut coefficients = vec![0.0f64; cols];
    for k in (0..cols).rev() {
        let mut value = y[k];
        for j in k + 1..cols {
            value -= a[k][j] * coefficients[j];
        }
        coefficients[k] = value / a[k][k];
    }
    // Residuals against the original data.
    let model = |x: f64| coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    let residual_norm = points
        .iter()
        .map(|&(x, t)| (t - model(x)).powi(2))
        .sum::<f64>()
        .sqrt();
    let data_norm = points.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt();
    let relative_residual = if data_norm > 0.0 {
        residual_norm / data_norm
    } else {
        residual_norm
    };
    let leading = coefficients.last().copied().unwrap_or(0.0);
    let small_degree_fit = relative_residual <= relative_residual_threshold
        && leading.abs() <= leading_coefficient_bound;
    Ok(FitModel {
        degree,
        coefficients,
        residual_norm,
        relative_residual,
        small_degree_fit,
    })
}

// ---------------------------------------------------------------------------
// Genericity classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenericityClass {
    #[serde(rename = "strongly-generic")]
    StronglyGeneric,
    #[serde(rename = "generic-only")]
    GenericOnly,
    #[serde(rename = "non-generic")]
    NonGeneric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenericityReport {
    pub classification: GenericityClass,
    /// Fitted decay base of `q(n) ≈ c·ρ^n`; 0 for an extinct failure series.
    pub rho: f64,
    pub log_residual: f64,
    pub points_used: usize,
}

/// Classify a failure-rate series `q(n)`: strongly generic when the failures
/// decay exponentially (log-linear fit with `ρ < 1` and small relative
/// residual, or outright extinction), generic-only when they decay
/// sub-exponentially, non-generic otherwise.
pub fn genericity_estimate(series: &[(usize, f64)], residual_threshold: f64) -> GenericityReport {
    let positives: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(_, q)| q > 0.0)
        .map(|&(n, q)| (n as f64, q.ln()))
        .collect();
    let non_increasing = series.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    // Noise-tolerant decay evidence: the series must actually come down.
    let overall_decay = series.last().map(|l| l.1) < series.first().map(|f| f.1);
    if positives.is_empty() || (non_increasing && series.last().is_some_and(|l| l.1 == 0.0)) {
        // No failures at all, or the failures die out entirely.
        return GenericityReport {
            classification: GenericityClass::StronglyGeneric,
            rho: 0.0,
            log_residual: 0.0,
            points_used: positives.len(),
        };
    }
    let fallback = if overall_decay {
        GenericityClass::GenericOnly
    } else {
        GenericityClass::NonGeneric
    };
    if positives.len() >= 5 {
        if let Ok(fit) = fit_polynomial(&positives, 1, f64::INFINITY, f64::INFINITY) {
            let rho = fit.coefficients[1].exp();
            let classification =
                if overall_decay && rho < 1.0 && fit.relative_residual < residual_threshold {
                    GenericityClass::StronglyGeneric
                } else {
                    fallback
                };
            return GenericityReport {
                classification,
                rho,
                log_residual: fit.relative_residual,
                points_used: positives.len(),
            };
        }
    }
    GenericityReport {
        classification: fallback,
        rho: f64::NAN,
        log_residual: f64::NAN,
        points_used: positives.len(),
    }
}

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

/// Full campaign configuration; this is the JSON document the CLI consumes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(flatten)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_fit_degree")]
    pub fit_degree: usize,
    #[serde(default = "default_fit_threshold")]
    pub fit_relative_residual_threshold: f64,
    #[serde(default = "default_leading_bound")]
    pub fit_leading_coefficient_bound: f64,
    #[serde(default = "default_genericity_threshold")]
    pub genericity_residual_threshold: f64,
}

fn default_fit_degree() -> usize {
    2
}
fn default_fit_threshold() -> f64 {
    0.05
}
fn default_leading_bound() -> f64 {
    100.0
}
fn default_genericity_threshold() -> f64 {
    0.1
}

/// One solver execution inside a campaign. `elapsed_ms` is measured but only
/// serialized on request, so reports stay byte-identical across re-runs.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub instance_id: u64,
    pub solver: &'static str,
    pub success: bool,
    pub steps: u64,
    pub elapsed_ms: u64,
}

/// Aggregate statistics for one input length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthStats {
    pub n: usize,
    pub trials: usize,
    /// Heuristic success percentage, 0–100.
    pub b: f64,
    /// Max observed heuristic steps over its successes.
    pub h: f64,
    /// Max observed deterministic steps over the heuristic's failures.
    pub d: f64,
    /// False when every heuristic run succeeded, so no deterministic run was
    /// observed and `d` is recorded as 0.
    pub d_observed: bool,
    /// Expected steps by the racing formula; always recomputable from
    /// `(h, d, b)`.
    pub e: f64,
    pub h_mean: f64,
    pub d_mean: f64,
    pub composite_mean: f64,
    pub composite_h_wins: usize,
    pub composite_d_wins: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    #[serde(with = "platform_string")]
    pub platform: Platform,
    pub seed: u64,
    pub interleave_ratio: u32,
    pub per_length: Vec<LengthStats>,
    pub fit: FitModel,
    pub genericity: GenericityReport,
}

/// A campaign's full output: the aggregate report plus the per-trial rows
/// destined for `trials.csv`.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub report: BenchReport,
    pub trials: Vec<TrialRecord>,
}

/// Build one length's aggregate from raw runs. `h_runs` holds
/// `(success, steps)` per heuristic execution, `d_runs` the deterministic
/// steps on the heuristic failures, `composite_runs` `(winning tag, steps)`.
pub fn length_stats_from_runs(
    n: usize,
    h_runs: &[(bool, u64)],
    d_runs: &[u64],
    composite_runs: &[(SolverTag, u64)],
) -> Result<LengthStats> {
    let trials = h_runs.len();
    let successes: Vec<u64> = h_runs.iter().filter(|r| r.0).map(|r| r.1).collect();
    let b = if trials == 0 {
        0.0
    } else {
        100.0 * successes.len() as f64 / trials as f64
    };
    let h = successes.iter().max().copied().unwrap_or(0) as f64;
    let d = d_runs.iter().max().copied().unwrap_or(0) as f64;
    let e = expected_time(h, d, b)?;
    let mean = |xs: &[u64]| {
        if xs.is_empty() {
            0.0
        } else {
            xs.iter().sum::<u64>() as f64 / xs.len() as f64
        }
    };
    let composite_steps: Vec<u64> = composite_runs.iter().map(|r| r.1).collect();
    Ok(LengthStats {
        n,
        trials,
        b,
        h,
        d,
        d_observed: !d_runs.is_empty(),
        e,
        h_mean: mean(&successes),
        d_mean: mean(d_runs),
        composite_mean: mean(&composite_steps),
        composite_h_wins: composite_runs
            .iter()
            .filter(|r| r.0 == SolverTag::CompositeH)
            .count(),
        composite_d_wins: composite_runs
            .iter()
            .filter(|r| r.0 == SolverTag::CompositeD)
            .count(),
    })
}

struct TrialRuns {
    n: usize,
    id: u64,
    h: (bool, u64, u64),
    d: Option<(u64, u64)>,
    composite: (SolverTag, u64, u64),
}

/// Run the campaign: per length, the heuristic alone on every instance, the
/// enumerator on the heuristic's failures, and the true composite race on
/// every instance. Steps are the primary metric; wall time is recorded as a
/// secondary diagnostic. The result is a pure function of the configuration.
pub fn run_experiment(cfg: &CampaignConfig) -> Result<CampaignResult> {
    let grid: Vec<(usize, u64)> = cfg
        .sampler
        .lengths
        .iter()
        .flat_map(|&n| (0..cfg.sampler.trials_per_length as u64).map(move |id| (n, id)))
        .collect();
    let runs: Vec<Result<TrialRuns>> = grid
        .par_iter()
        .map(|&(n, id)| run_trial(cfg, n, id))
        .collect();
    let runs: Vec<TrialRuns> = runs.into_iter().collect::<Result<_>>()?;

    let mut per_length = Vec::with_capacity(cfg.sampler.lengths.len());
    let mut trials = Vec::new();
    for &n in &cfg.sampler.lengths {
        let mut h_runs = Vec::new();
        let mut d_runs = Vec::new();
        let mut composite_runs = Vec::new();
        for run in runs.iter().filter(|r| r.n == n) {
            trials.push(TrialRecord {
                n,
                instance_id: run.id,
                solver: "heuristic",
                success: run.h.0,
                steps: run.h.1,
                elapsed_ms: run.h.2,
            });
            h_runs.push((run.h.0, run.h.1));
            if let Some((steps, ms)) = run.d {
                trials.push(TrialRecord {
                    n,
                    instance_id: run.id,
                    solver: "deterministic",
                    success: true,
                    steps,
                    elapsed_ms: ms,
                });
                d_runs.push(steps);
            }
            trials.push(TrialRecord {
                n,
                instance_id: run.id,
                solver: "composite",
                success: true,
                steps: run.composite.1,
                elapsed_ms: run.composite.2,
            });
            composite_runs.push((run.composite.0, run.composite.1));
        }
        per_length.push(length_stats_from_runs(n, &h_runs, &d_runs, &composite_runs)?);
    }

    let e_points: Vec<(f64, f64)> = per_length.iter().map(|s| (s.n as f64, s.e)).collect();
    let fit = fit_polynomial(
        &e_points,
        cfg.fit_degree,
        cfg.fit_relative_residual_threshold,
        cfg.fit_leading_coefficient_bound,
    )?;
    let failure_series: Vec<(usize, f64)> = per_length
        .iter()
        .map(|s| (s.n, (100.0 - s.b) / 100.0))
        .collect();
    let genericity = genericity_estimate(&failure_series, cfg.genericity_residual_threshold);
    Ok(CampaignResult {
        report: BenchReport {
            platform: cfg.sampler.platform,
            seed: cfg.sampler.seed,
            interleave_ratio: cfg.solver.interleave_ratio,
            per_length,
            fit,
            genericity,
        },
        trials,
    })
}

/// Same campaign on an explicitly sized worker pool; the output is identical
/// to any other worker count because trials own derived rng streams and are
/// aggregated in grid order.
pub fn run_experiment_with_workers(cfg: &CampaignConfig, workers: usize) -> Result<CampaignResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

fn run_trial(cfg: &CampaignConfig, n: usize, id: u64) -> Result<TrialRuns> {
    let sampled = sample_instance(&cfg.sampler, n, id)?;
    let inst = &sampled.instance;
    // The enumerator must be able to reach the hidden conjugator length,
    // otherwise the race could fail on a promised instance.
    let solver_cfg = SolverConfig {
        max_depth: cfg.solver.max_depth.max(n),
        ..cfg.solver.clone()
    };
    let h = length_based_attack(inst, &solver_cfg)?;
    let d = if h.witness.is_none() {
        let outcome = brute_force_search(inst, &solver_cfg)?;
        if outcome.witness.is_none() {
            return Err(Error::InvalidConfig(format!(
                "deterministic solver failed on promised instance n={n} id={id}; raise max_steps"
            )));
        }
        Some((outcome.steps, outcome.elapsed.as_millis() as u64))
    } else {
        None
    };
    let composite = composite_run(inst, &solver_cfg)?;
    if composite.witness.is_none() {
        return Err(Error::InvalidConfig(format!(
            "composite failed on promised instance n={n} id={id}; raise max_steps"
        )));
    }
    Ok(TrialRuns {
        n,
        id,
        h: (h.witness.is_some(), h.steps, h.elapsed.as_millis() as u64),
        d,
        composite: (
            composite.solver,
            composite.steps,
            composite.elapsed.as_millis() as u64,
        ),
    })
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

impl BenchReport {
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("serializable");
        bytes.push(b'\n');
        bytes
    }
}

/// Stable column order for downstream plotting. Timings are zeroed unless
/// requested so that identical campaigns emit identical bytes.
pub fn trials_csv(trials: &[TrialRecord], include_timings: bool) -> String {
    let mut out = String::from("n,instance_id,solver,success,steps,elapsed_ms\n");
    for t in trials {
        let ms = if include_timings { t.elapsed_ms } else { 0 };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            t.n, t.instance_id, t.solver, t.success, t.steps, ms
        )
        .expect("string write");
    }
    out
}

/// Write `report.json` and `trials.csv` into `dir`.
pub fn write_campaign(dir: &Path, result: &CampaignResult, include_timings: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), result.report.to_json_bytes())?;
    std::fs::write(
        dir.join("trials.csv"),
        trials_csv(&result.trials, include_timings),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_time_formula() {
        assert_eq!(expected_time(2.0, 200.0, 95.0).unwrap(), 11.9);
        assert_eq!(expected_time(7.0, 300.0, 100.0).unwrap(), 7.0);
        assert_eq!(expected_time(7.0, 300.0, 0.0).unwrap(), 300.0);
        assert!(matches!(
            expected_time(1.0, 1.0, 101.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn stats_aggregation_matches_the_formula_passthrough() {
        // Stubbed runs: b = 90, h = 1, d = 100 must report e = 10.9.
        let mut h_runs = vec![(true, 1u64); 90];
        h_runs.extend(vec![(false, 5u64); 10]);
        let d_runs = vec![100u64; 10];
        let composite: Vec<(SolverTag, u64)> =
            vec![(SolverTag::CompositeH, 2); 100];
        let stats = length_stats_from_runs(3, &h_runs, &d_runs, &composite).unwrap();
        assert_eq!(stats.b, 90.0);
        assert_eq!(stats.e, 10.9);
        assert_eq!(stats.e, expected_time(stats.h, stats.d, stats.b).unwrap());
        assert!(stats.d_observed);

        // All-success lengths record d = 0 with the flag cleared.
        let all_good = length_stats_from_runs(2, &[(true, 4), (true, 2)], &[], &[]).unwrap();
        assert!(!all_good.d_observed);
        assert_eq!(all_good.d, 0.0);
        assert_eq!(all_good.e, all_good.h);
    }

    #[test]
    fn sample_instance_edge_cases() {
        let cfg = SamplerConfig {
            platform: Platform::free(2).unwrap(),
            lengths: vec![0, 3],
            trials_per_length: 4,
            pairs_per_instance: 2,
            base_word_length: 5,
            seed: 11,
        };
        // n = 0: the hidden conjugator is trivial and b_i is a_i's normal form.
        let sampled = sample_instance(&cfg, 0, 0).unwrap();
        assert!(sampled.hidden.is_empty());
        for (a, b) in &sampled.instance.pairs {
            assert_eq!(&cfg.platform.normal_form(a).unwrap(), b);
        }
        // Exact hidden length, reduced, reproducible.
        let sampled = sample_instance(&cfg, 3, 1).unwrap();
        assert_eq!(sampled.hidden.len(), 3);
        assert!(sampled.hidden.is_reduced());
        assert_eq!(
            sample_instance(&cfg, 3, 1).unwrap().hidden,
            sampled.hidden
        );
        assert!(sampled.instance.promised);
        assert_eq!(sampled.instance.instance_length, 3);
    }

    #[test]
    fn fit_recovers_exact_polynomials() {
        let points: Vec<(f64, f64)> = (1..=6).map(|n| (n as f64, (n * n) as f64)).collect();
        let fit = fit_polynomial(&points, 2, 0.05, 100.0).unwrap();
        assert!(fit.residual_norm < 1e-9);
        assert!((fit.coefficients[0]).abs() < 1e-9);
        assert!((fit.coefficients[1]).abs() < 1e-9);
        assert!((fit.coefficients[2] - 1.0).abs() < 1e-9);
        assert!(fit.small_degree_fit);

        let constant: Vec<(f64, f64)> = (1..=4).map(|n| (n as f64, 5.5)).collect();
        let fit = fit_polynomial(&constant, 0, 0.05, 100.0).unwrap();
        assert!((fit.coefficients[0] - 5.5).abs() < 1e-12);
        assert!(fit.residual_norm < 1e-12);

        assert!(matches!(
            fit_polynomial(&[(1.0, 1.0), (2.0, 2.0)], 2, 0.05, 100.0),
            Err(Error::Underdetermined { .. })
        ));
    }

    #[test]
    fn fit_is_a_projection() {
        let noisy: Vec<(f64, f64)> = (1..=8)
            .map(|n| {
                let x = n as f64;
                (x, 3.0 * x * x - 2.0 * x + 1.0 + if n % 2 == 0 { 0.5 } else { -0.5 })
            })
            .collect();
        let fit = fit_polynomial(&noisy, 2, 0.5, 100.0).unwrap();
        // Refitting the model's own predictions reproduces it with zero
        // residual.
        let predicted: Vec<(f64, f64)> = noisy.iter().map(|&(x, _)| (x, fit.evaluate(x))).collect();
        let refit = fit_polynomial(&predicted, 2, 0.5, 100.0).unwrap();
        assert!(refit.residual_norm < 1e-9);
        for (a, b) in fit.coefficients.iter().zip(&refit.coefficients) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn genericity_classification_examples() {
        // Exact exponential decay.
        let exp: Vec<(usize, f64)> = (1..=12).map(|n| (n, 0.5f64.powi(n as i32))).collect();
        let report = genericity_estimate(&exp, 0.1);
        assert_eq!(report.classification, GenericityClass::StronglyGeneric);
        assert!((report.rho - 0.5).abs() < 1e-9);

        // Sub-exponential decay is generic-only.
        let harmonic: Vec<(usize, f64)> = (1..=12).map(|n| (n, 1.0 / n as f64)).collect();
        let report = genericity_estimate(&harmonic, 0.1);
        assert_eq!(report.classification, GenericityClass::GenericOnly);

        // All-zero failures.
        let zero: Vec<(usize, f64)> = (1..=6).map(|n| (n, 0.0)).collect();
        let report = genericity_estimate(&zero, 0.1);
        assert_eq!(report.classification, GenericityClass::StronglyGeneric);
        assert_eq!(report.rho, 0.0);

        // Non-decaying failures.
        let flat: Vec<(usize, f64)> = (1..=8).map(|n| (n, 0.4)).collect();
        let report = genericity_estimate(&flat, 0.1);
        assert_eq!(report.classification, GenericityClass::NonGeneric);
    }

    #[test]
    fn multi_round_success_examples() {
        assert_eq!(multi_round_success(0.9, 50).unwrap(), 0.9f64.powi(50));
        assert_eq!(multi_round_success(1.0, 7).unwrap(), 1.0);
        assert_eq!(multi_round_success(0.5, 2).unwrap(), 0.25);
        assert!(multi_round_success(1.5, 2).is_err());
        assert!(multi_round_success(0.5, 0).is_err());
    }

    #[test]
    fn monte_carlo_agrees_at_moderate_scale() {
        let check = monte_carlo_check(0.9, 5, 100_000, 7).unwrap();
        assert!(check.within_tolerance, "estimate {check:?}");
        // Degenerate probabilities are exact.
        let sure = monte_carlo_check(1.0, 3, 1000, 7).unwrap();
        assert_eq!(sure.estimate, 1.0);
        assert!(sure.within_tolerance);
    }
}
