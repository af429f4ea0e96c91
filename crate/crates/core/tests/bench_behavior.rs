//! Campaign-level behavior: statistical contracts of the sampler,
//! reproducibility across runs and worker counts, and the racing-overhead
//! audit.

mod common;

use ckex_core::bench::{
    expected_time, fit_polynomial, run_experiment, run_experiment_with_workers, trials_csv,
    CampaignConfig, SamplerConfig,
};
use ckex_core::platform::Platform;
use ckex_core::words::random_reduced_word;
use ckex_core::Error;
use common::normal_equations_fit;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn small_campaign(seed: u64) -> CampaignConfig {
    let config = serde_json::json!({
        "platform": "free:2",
        "lengths": [1, 2, 3, 4, 5],
        "trials_per_length": 8,
        "pairs_per_instance": 1,
        "base_word_length": 5,
        "seed": seed,
    });
    serde_json::from_value(config).expect("valid campaign config")
}

#[test]
fn sampler_is_length_invariant_by_chi_square() {
    // All 36 freely reduced length-3 words over rank 2 are equiprobable:
    // 10^5 draws must stay under the χ²(35) critical value at the 10⁻³
    // rejection threshold (66.62).
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let draws = 100_000usize;
    let mut counts = std::collections::HashMap::new();
    for _ in 0..draws {
        let word = random_reduced_word(&mut rng, 2, 3, None).unwrap();
        *counts.entry(word.to_string()).or_insert(0u64) += 1;
    }
    assert_eq!(counts.len(), 36, "every reduced length-3 word gets drawn");
    let expected = draws as f64 / 36.0;
    let chi_square: f64 = counts
        .values()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum();
    assert!(
        chi_square < 66.62,
        "chi-square {chi_square} rejects length-invariance"
    );

    // Two fixed words differ from the exact probability 1/36 by < 5σ.
    let sigma = (draws as f64 * (1.0 / 36.0) * (35.0 / 36.0)).sqrt();
    for probe in ["g1 g2 g1", "g2^-1 g1^-1 g2^-1"] {
        let observed = *counts.get(probe).unwrap_or(&0) as f64;
        assert!(
            (observed - expected).abs() < 5.0 * sigma,
            "frequency of {probe} off by more than 5 sigma"
        );
    }
}

#[test]
fn campaigns_are_reproducible_across_runs_and_workers() {
    let cfg = small_campaign(99);
    let first = run_experiment(&cfg).unwrap();
    let second = run_experiment(&cfg).unwrap();
    assert_eq!(first.report.to_json_bytes(), second.report.to_json_bytes());
    assert_eq!(
        trials_csv(&first.trials, false),
        trials_csv(&second.trials, false)
    );

    let solo = run_experiment_with_workers(&cfg, 1).unwrap();
    let pooled = run_experiment_with_workers(&cfg, 4).unwrap();
    assert_eq!(solo.report.to_json_bytes(), pooled.report.to_json_bytes());
    assert_eq!(
        trials_csv(&solo.trials, false),
        trials_csv(&pooled.trials, false)
    );

    // Different seeds shift the trials.
    let other = run_experiment(&small_campaign(100)).unwrap();
    assert_ne!(first.report.to_json_bytes(), other.report.to_json_bytes());
}

#[test]
fn report_equals_the_formula_recomputation_bit_for_bit() {
    let result = run_experiment(&small_campaign(5)).unwrap();
    for stats in &result.report.per_length {
        let recomputed = expected_time(stats.h, stats.d, stats.b).unwrap();
        assert!(
            stats.e.to_bits() == recomputed.to_bits(),
            "e(n) deviates from the formula at n = {}",
            stats.n
        );
        if !stats.d_observed {
            assert_eq!(stats.d, 0.0);
        }
    }
}

#[test]
fn composite_mean_respects_the_race_overhead_bound() {
    // Per generated length: mean composite steps stay within the provable
    // race overhead of the expected-time bound,
    // (ratio + 1) · e(n) + ratio + 1.
    let cfg = small_campaign(17);
    let result = run_experiment(&cfg).unwrap();
    let ratio = cfg.solver.interleave_ratio as f64;
    for stats in &result.report.per_length {
        assert!(
            stats.composite_mean <= (ratio + 1.0) * stats.e + ratio + 1.0,
            "n = {}: composite mean {} vs e = {}",
            stats.n,
            stats.composite_mean,
            stats.e
        );
    }
}

#[test]
fn csv_is_stable_and_timings_are_opt_in() {
    let result = run_experiment(&small_campaign(8)).unwrap();
    let silent = trials_csv(&result.trials, false);
    let mut lines = silent.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,instance_id,solver,success,steps,elapsed_ms"
    );
    for line in lines {
        assert!(line.ends_with(",0"), "timings must be zeroed: {line}");
    }
    assert_eq!(
        silent.lines().count(),
        1 + result.trials.len(),
        "one row per trial plus the header"
    );
}

#[test]
fn fit_matches_the_normal_equations_oracle_on_noisy_data() {
    // Quadratic with known injected noise.
    let points: Vec<(f64, f64)> = (1..=10)
        .map(|n| {
            let x = n as f64;
            let noise = if n % 2 == 0 { 0.25 } else { -0.25 };
            (x, 2.0 * x * x + 3.0 * x + 1.0 + noise)
        })
        .collect();
    let fit = fit_polynomial(&points, 2, 0.5, 100.0).unwrap();
    let oracle = normal_equations_fit(&points, 2);
    for (ours, theirs) in fit.coefficients.iter().zip(&oracle) {
        let scale = theirs.abs().max(1.0);
        assert!(
            (ours - theirs).abs() / scale < 1e-9,
            "{ours} vs oracle {theirs}"
        );
    }
}

#[test]
fn underdetermined_campaigns_are_rejected() {
    let mut cfg = small_campaign(3);
    cfg.sampler.lengths = vec![2, 4];
    cfg.fit_degree = 2;
    assert!(matches!(
        run_experiment(&cfg),
        Err(Error::Underdetermined { .. })
    ));
}

#[test]
fn campaign_config_json_round_trips_with_defaults() {
    let cfg = small_campaign(12);
    assert_eq!(cfg.fit_degree, 2);
    assert_eq!(cfg.solver.interleave_ratio, 4);
    assert_eq!(cfg.genericity_residual_threshold, 0.1);
    let text = serde_json::to_string(&cfg).unwrap();
    let back: CampaignConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back.sampler.platform, Platform::free(2).unwrap());
    assert_eq!(back.sampler.lengths, cfg.sampler.lengths);

    let nested: SamplerConfig = serde_json::from_value(serde_json::json!({
        "platform": "braid:6",
        "lengths": [2],
        "trials_per_length": 1,
        "pairs_per_instance": 2,
        "base_word_length": 3,
        "seed": 0,
    }))
    .unwrap();
    assert_eq!(nested.platform, Platform::braid(6).unwrap());
}
