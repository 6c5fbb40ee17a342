//! Acceptance criteria. Each test prints one PASS/FAIL line.

mod common;

use std::time::Instant;

use common::*;
use fedocsvm::data::SynthConfig;
use fedocsvm::eval::{f_score, Confusion};
use fedocsvm::experiment::{run_experiment, DataSource, ExperimentConfig};
use fedocsvm::federated::{aggregate, select_by_median, AggregationPolicy};
use fedocsvm::kernel::{kernel_matrix, KernelConfig};
use fedocsvm::ocsvm::{
    dual_objective, init_alpha, sgd_epoch, train_local, AlphaVector, CoefficientVector, Feasibility, OcsvmModel,
    TrainConfig,
};
use fedocsvm::oracle::solve_dual_reference;
use fedocsvm::personalize::{classify_edge, EdgeConfig};
use rand::Rng;

fn report(id: u32, pass: bool, detail: String) {
    println!("criterion {id}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_published_tables_not_reproducible() {
    println!(
        "criterion 1: NOT APPLICABLE (published bridge results use confidential data; \
         covered by the property criteria 2-9)"
    );
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let cfg = TrainConfig { nu: 0.1, ..TrainConfig::default() };
    let grid = grid(15, 3.0);
    let mut worst_gap: f64 = 0.0;
    let mut worst_agree: f64 = 1.0;
    for seed in 0..5u64 {
        let x = gaussian_blob(30, 2, 100 + seed);
        let kcfg = KernelConfig::from_median(&x).unwrap();
        let fit = train_local(&x, &kcfg, &cfg).unwrap();
        let reference = solve_dual_reference(&fit.kernel, cfg.nu).unwrap();
        let j_sgd = dual_objective(&fit.alpha, &fit.kernel).unwrap();
        let j_ref = dual_objective(&reference.alpha, &fit.kernel).unwrap();
        worst_gap = worst_gap.max((j_sgd - j_ref).abs() / j_ref.abs());

        let sgd_model = OcsvmModel::from_alpha(&x, &fit.alpha, &fit.kernel, kcfg, &cfg).unwrap();
        let ref_model = OcsvmModel::from_alpha(&x, &reference.alpha, &fit.kernel, kcfg, &cfg).unwrap();
        let agree = grid
            .iter()
            .filter(|p| sgd_model.classify(p).unwrap() == ref_model.classify(p).unwrap())
            .count() as f64
            / grid.len() as f64;
        worst_agree = worst_agree.min(agree);
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        worst_gap <= 0.02 && worst_agree >= 0.95 && secs < 5.0,
        format!("max relative J gap {worst_gap:.2e}, min sign agreement {worst_agree:.4}, {secs:.2}s"),
    );
}

#[test]
fn criterion_3_box_constraint_invariant() {
    let start = Instant::now();
    let mut r = rng(3);
    let mut violations = 0usize;
    for call in 0..1000 {
        let n = r.gen_range(1..=20);
        let nu = r.gen_range(0.01..0.99);
        let x: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)]).collect();
        let k = kernel_matrix(&x, &KernelConfig::new(r.gen_range(0.1..3.0)).unwrap()).unwrap();
        let cap = 1.0 / (nu * n as f64);
        let alpha = AlphaVector::new((0..n).map(|_| r.gen_range(0.0..=cap)).collect());
        let feasibility = if call % 2 == 0 { Feasibility::Box } else { Feasibility::BoxSimplex };
        let cfg = TrainConfig {
            nu,
            eta: r.gen_range(0.001..2.0),
            feasibility,
            ..TrainConfig::default()
        };
        let out = sgd_epoch(&alpha, &k, &cfg).unwrap();
        violations += out.as_slice().iter().filter(|&&a| !(0.0..=cap).contains(&a)).count();
    }
    let secs = start.elapsed().as_secs_f64();
    report(3, violations == 0 && secs < 1.0, format!("{violations} violations, {secs:.3}s"));
}

#[test]
fn criterion_4_median_filter_and_aggregate() {
    let mut r = rng(4);
    let mut bad_select = 0;
    let mut worst_err: f64 = 0.0;
    for _ in 0..200 {
        let c = r.gen_range(2..=12);
        // coarse values so ties occur
        let losses: Vec<f64> = (0..c).map(|_| r.gen_range(0..6) as f64 * 0.25 - 1.0).collect();
        let m = brute_median(&losses);
        let expected: Vec<usize> = (0..c).filter(|&i| losses[i] <= m).collect();
        let selected = select_by_median(&losses).unwrap();
        if selected != expected {
            bad_select += 1;
        }
        let n = r.gen_range(1..10);
        let ws: Vec<CoefficientVector> = (0..c)
            .map(|_| CoefficientVector::new((0..n).map(|_| r.gen_range(-1.0..1.0)).collect()))
            .collect();
        let agg = aggregate(&ws, &selected).unwrap();
        for k in 0..n {
            let mean = selected.iter().map(|&i| ws[i].as_slice()[k]).sum::<f64>() / selected.len() as f64;
            worst_err = worst_err.max((agg.as_slice()[k] - mean).abs());
        }
    }
    report(
        4,
        bad_select == 0 && worst_err <= 1e-12,
        format!("{bad_select} selection mismatches, max aggregate error {worst_err:.1e}"),
    );
}

#[test]
fn criterion_5_edge_geometry() {
    let start = Instant::now();
    let cfg = EdgeConfig { k: 10, gamma: 0.05 };
    let circle = unit_circle(100);
    let circle_edges = (0..100).filter(|&i| classify_edge(&circle, i, &cfg).unwrap().is_edge).count();

    let mut fractions = Vec::new();
    for seed in 0..50 {
        let disk = uniform_disk(200, 500 + seed);
        let mut order: Vec<usize> = (0..disk.len()).collect();
        let radius = |i: usize| disk[i][0].hypot(disk[i][1]);
        order.sort_by(|&a, &b| radius(a).total_cmp(&radius(b)));
        let interior = order[..50]
            .iter()
            .filter(|&&i| !classify_edge(&disk, i, &cfg).unwrap().is_edge)
            .count();
        fractions.push(interior as f64 / 50.0);
    }
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    let secs = start.elapsed().as_secs_f64();
    report(
        5,
        circle_edges == 100 && mean >= 0.9 && secs < 5.0,
        format!("circle edges {circle_edges}/100, disk interior non-edge {mean:.4}, {secs:.2}s"),
    );
}

#[test]
fn criterion_6_fft_matches_naive_dft() {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let len = r.gen_range(2..=256);
        let signal: Vec<f64> = (0..len).map(|_| r.gen_range(-1.0..1.0)).collect();
        let fast = fedocsvm::data::fft_magnitude(&signal).unwrap();
        let slow = naive_dft_magnitude(&signal);
        assert_eq!(fast.len(), slow.len());
        for (a, b) in fast.iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
    }
    report(6, worst <= 1e-9, format!("max abs deviation {worst:.2e}"));
}

pub fn benchmark_config(seed: u64, policy: AggregationPolicy, personalize: bool) -> ExperimentConfig {
    // 120 healthy per client: 100 train, 20 held out; 20 damaged per client
    let synth = SynthConfig::ring(6, 120, 2, 20, seed);
    ExperimentConfig {
        nu: 0.05,
        epochs: 50,
        rounds: 40,
        policy,
        personalize,
        train_fraction: 100.0 / 120.0,
        seed,
        ..ExperimentConfig::with_data(DataSource::Synth(synth))
    }
}

#[test]
fn criterion_7_end_to_end_benchmark() {
    let start = Instant::now();
    let seeds = [21u64, 22, 23, 24, 25];
    let mut pc = Vec::new();
    let mut plain = Vec::new();
    for &seed in &seeds {
        let a = run_experiment(&benchmark_config(seed, AggregationPolicy::ConditionalMedian, true)).unwrap();
        assert_eq!(a.per_client.len(), 6);
        assert!(a.per_client.iter().all(|c| c.tp + c.fn_ == 20 && c.fp + c.tn == 20));
        pc.push(a.summary.mean_f);
        let b = run_experiment(&benchmark_config(seed, AggregationPolicy::PlainAverage, false)).unwrap();
        plain.push(b.summary.mean_f);
    }
    let mean_pc = pc.iter().sum::<f64>() / pc.len() as f64;
    let mean_plain = plain.iter().sum::<f64>() / plain.len() as f64;
    let secs = start.elapsed().as_secs_f64();
    report(
        7,
        mean_pc >= 0.85 && mean_pc >= mean_plain && secs < 60.0,
        format!("conditional+personalized F {mean_pc:.4}, plain F {mean_plain:.4}, {secs:.1}s"),
    );
}

#[test]
fn criterion_8_determinism() {
    let mut identical = true;
    for seed in [21u64, 22, 23, 24, 25] {
        let cfg = benchmark_config(seed, AggregationPolicy::ConditionalMedian, true);
        let a = run_experiment(&cfg).unwrap().to_json();
        let b = run_experiment(&cfg).unwrap().to_json();
        identical &= a.as_bytes() == b.as_bytes();
    }
    report(8, identical, "metrics JSON compared byte for byte over 5 seeds".into());
}

#[test]
fn criterion_9_f_score_units() {
    let a = f_score(&Confusion { tp: 9, fp: 1, fn_: 1, tn: 0 });
    let b = f_score(&Confusion { tp: 0, fp: 5, fn_: 5, tn: 0 });
    let c = f_score(&Confusion { tp: 10, fp: 0, fn_: 0, tn: 0 });
    report(9, a == 0.9 && b == 0.0 && c == 1.0, format!("F = {a}, {b}, {c}"));
}

#[test]
fn init_alpha_feeds_training() {
    // sanity: uniform start is feasible for every nu used above
    for nu in [0.05, 0.1] {
        assert!(init_alpha(30).unwrap().within_box(nu));
    }
}
