//! Acceptance suite: nine numbered criteria, one per test, each printing a
//! single PASS line when it holds.  Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines as they print).

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use purity_core::channels::{expansion_apply, QuantumChannel};
use purity_core::lemma::{
    check_trace_bound, sample_bound_instance, sample_cs_instance, verify_cs_identity_with_cap,
    InstanceConfig,
};
use purity_core::linalg::{
    hermitian_spectrum, sample_haar_state_with, sample_hermitian_with, NormOrder,
};
use purity_core::purity::{
    check_multiplicativity, closed_form_product_nu_p, maximize_output_norm, norm_1_to_p_ratio,
    AscentOptions, MultVerdict,
};

/// The sixteen factor configurations exercised by criteria 1 and 8: twelve
/// uniform products (n x d x q) plus four mixed-factor products.
fn factor_configs() -> Vec<Vec<(usize, f64)>> {
    let mut configs = Vec::new();
    for n in 1..=3usize {
        for d in [2usize, 3] {
            for q in [0.3, 0.7] {
                configs.push(vec![(d, q); n]);
            }
        }
    }
    configs.push(vec![(2, 0.3), (3, 0.7)]);
    configs.push(vec![(2, 0.7), (3, 0.3)]);
    configs.push(vec![(2, 0.3), (2, 0.7), (3, 0.3)]);
    configs.push(vec![(3, 0.3), (3, 0.7)]);
    assert_eq!(configs.len(), 16);
    configs
}

fn product_channel(factors: &[(usize, f64)]) -> QuantumChannel {
    QuantumChannel::product(
        factors
            .iter()
            .map(|&(d, q)| QuantumChannel::depolarizing(d, q).expect("valid factor"))
            .collect(),
    )
    .expect("valid product")
}

fn opts(restarts: u32, seed: u64) -> AscentOptions {
    AscentOptions {
        restarts,
        ..AscentOptions::with_seed(seed)
    }
}

#[test]
fn criterion_1_optimizer_reproduces_closed_forms() {
    let orders = [2.0, 3.0, 4.0];
    for factors in factor_configs() {
        let channel = product_channel(&factors);
        for &raw in &orders {
            let p = NormOrder::new(raw).unwrap();
            let report = maximize_output_norm(&channel, p, &opts(12, 1)).unwrap();
            let closed = closed_form_product_nu_p(&factors, p).unwrap();
            assert!(
                report.nu_p >= closed - 1e-6 && report.nu_p <= closed + 1e-9,
                "{factors:?} at p = {raw}: optimizer {} vs closed form {closed}",
                report.nu_p
            );
        }
    }
    println!("ACCEPTANCE 1 PASS: optimizer matches closed forms on 16 configs x p in {{2,3,4}}");
}

#[test]
fn criterion_2_output_spectrum_of_depolarizing_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in [2usize, 3, 4] {
        for q in [0.3, 0.7] {
            let channel = QuantumChannel::depolarizing(d, q).unwrap();
            let top = 1.0 - (d - 1) as f64 * q / d as f64;
            let tail = q / d as f64;
            for _ in 0..50 {
                let state = sample_haar_state_with(d, &mut rng);
                let output = channel.apply(&state.projector()).unwrap();
                let spectrum = hermitian_spectrum(&output).unwrap();
                assert!(
                    (spectrum[0] - top).abs() <= 1e-12,
                    "top eigenvalue {} vs {top} (d={d}, q={q})",
                    spectrum[0]
                );
                for &v in &spectrum[1..] {
                    assert!(
                        (v - tail).abs() <= 1e-12,
                        "tail eigenvalue {v} vs {tail} (d={d}, q={q})"
                    );
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 2 PASS: output spectra match {{1-(d-1)q/d}} u {{q/d}} on 50 states x 6 (d,q)"
    );
}

#[test]
fn criterion_3_expansion_agrees_with_tensor_kraus_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..100 {
        let n = rng.random_range(1..=3usize);
        let factors: Vec<QuantumChannel> = (0..n)
            .map(|_| {
                let d = if rng.random::<f64>() < 0.5 { 2 } else { 3 };
                QuantumChannel::depolarizing(d, rng.random::<f64>()).unwrap()
            })
            .collect();
        let product = QuantumChannel::product(factors.clone()).unwrap();
        let kraus = QuantumChannel::kraus(product.kraus_operators().unwrap()).unwrap();

        // A random two-projector mixture as the input density operator.
        let dim = product.dim();
        let w = rng.random::<f64>();
        let p1 = sample_haar_state_with(dim, &mut rng).projector();
        let p2 = sample_haar_state_with(dim, &mut rng).projector();
        let rho = p1.scale_re(w).add(&p2.scale_re(1.0 - w));

        let via_expansion = expansion_apply(&factors, &rho).unwrap();
        let via_kraus = kraus.apply(&rho).unwrap();
        let via_product = product.apply(&rho).unwrap();
        let kraus_dev = via_expansion.sub(&via_kraus).max_abs();
        let product_dev = via_expansion.sub(&via_product).max_abs();
        assert!(
            kraus_dev <= 1e-12 && product_dev <= 1e-12,
            "round {round}: deviations {kraus_dev:.3e} / {product_dev:.3e}"
        );
    }
    println!("ACCEPTANCE 3 PASS: expansion = tensor-Kraus = direct on 100 density operators");
}

#[test]
fn criterion_4_trace_bound_on_one_thousand_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = InstanceConfig::default();
    for index in 0..1000 {
        let ops = sample_bound_instance(&shape, &mut rng).unwrap();
        let report = check_trace_bound(&ops).unwrap();
        assert!(
            report.passes,
            "instance {index}: |trace| {} exceeds bound {}",
            report.lhs, report.rhs
        );
    }
    println!("ACCEPTANCE 4 PASS: trace bound holds on 1000/1000 seeded instances");
}

#[test]
fn criterion_5_expansion_identity_on_two_hundred_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = InstanceConfig::default();
    for index in 0..200 {
        let ops = sample_cs_instance(&shape, &mut rng, 1_000_000).unwrap();
        let report = verify_cs_identity_with_cap(&ops, 1_000_000).unwrap();
        assert!(report.bijective, "instance {index}: map is not a bijection");
        assert!(
            report.deviation <= 1e-10,
            "instance {index}: expansion deviates by {}",
            report.deviation
        );
        let modulus = report.expansion.norm();
        assert!(
            modulus <= 1.0 + 1e-10,
            "instance {index}: |sum| = {modulus} exceeds 1"
        );
        assert!(report.passes, "instance {index}: {report:?}");
    }
    println!("ACCEPTANCE 5 PASS: expansion identity and |sum| <= 1 on 200/200 instances");
}

#[test]
fn criterion_6_hermitian_ratios_never_beat_the_optimizer() {
    let cases = [
        (product_channel(&[(2, 0.5)]), 2.0),
        (product_channel(&[(3, 0.3)]), 3.0),
        (product_channel(&[(2, 0.4), (2, 0.6)]), 2.0),
    ];
    for (channel, raw) in cases {
        let p = NormOrder::new(raw).unwrap();
        let report = maximize_output_norm(&channel, p, &opts(16, 6)).unwrap();

        let attained = norm_1_to_p_ratio(&channel, &report.maximizer.projector(), p).unwrap();
        assert!(
            (attained - report.nu_p).abs() <= 1e-12,
            "maximizer attains {attained} vs reported {}",
            report.nu_p
        );

        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let dim = channel.dim();
        for probe in 0..1000 {
            let a = sample_hermitian_with(dim, &mut rng);
            if a.max_abs() == 0.0 {
                continue;
            }
            let ratio = norm_1_to_p_ratio(&channel, &a, p).unwrap();
            assert!(
                ratio <= report.nu_p + 1e-9,
                "probe {probe} on {}: ratio {ratio} exceeds nu {}",
                report.channel,
                report.nu_p
            );
        }
    }
    println!("ACCEPTANCE 6 PASS: 1->p ratios bounded by nu_p on 1000 probes x 3 channels");
}

#[test]
fn criterion_7_multiplicativity_consistent_at_two_and_infinity() {
    let pairs = [vec![(2, 0.3), (2, 0.7)], vec![(2, 0.5), (3, 0.5)]];
    for factors in pairs {
        let channels: Vec<QuantumChannel> = factors
            .iter()
            .map(|&(d, q)| QuantumChannel::depolarizing(d, q).unwrap())
            .collect();
        for p in [NormOrder::new(2.0).unwrap(), NormOrder::infinity()] {
            let report = check_multiplicativity(&channels, p, &opts(12, 7), 1e-7).unwrap();
            assert_eq!(
                report.verdict,
                MultVerdict::Consistent,
                "{factors:?} at p = {p}"
            );
            assert!(
                report.gap.abs() <= 1e-8,
                "{factors:?} at p = {p}: gap {}",
                report.gap
            );
        }
    }
    println!("ACCEPTANCE 7 PASS: depolarizing pairs consistent at p = 2 and p = inf, |gap| <= 1e-8");
}

#[test]
fn criterion_8_unit_value_at_order_one() {
    let near_one = NormOrder::new(1.000001).unwrap();
    for factors in factor_configs() {
        let channel = product_channel(&factors);
        let exact = maximize_output_norm(&channel, NormOrder::one(), &opts(4, 8)).unwrap();
        assert_eq!(exact.nu_p, 1.0, "{factors:?}: nu_1 must be exactly 1");
        let nearby = maximize_output_norm(&channel, near_one, &opts(4, 8)).unwrap();
        assert!(
            nearby.nu_p <= 1.0 + 1e-9,
            "{factors:?}: nu at p = 1.000001 is {}",
            nearby.nu_p
        );
    }
    println!("ACCEPTANCE 8 PASS: nu_1 = 1 exactly and nu_1.000001 <= 1 + 1e-9 on all 16 configs");
}

#[test]
fn criterion_9_cli_reports_are_byte_reproducible() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("acceptance_determinism.toml");
    std::fs::write(
        &config_path,
        r#"
seed = 90
p = [1, 2, "inf"]
restarts = 6

[[channels]]
kind = "depolarizing"
dim = 2
q = 0.5

[lemma]
instances = 25
cs_instances = 8

[search]
samples = 2
factors = 2
dim = 2
kraus_ops = 3
"#,
    )
    .unwrap();

    for subcommand in ["nu", "check-mult", "verify-lemma", "search", "validate"] {
        let run = |label: &str| {
            let output = Command::new(env!("CARGO_BIN_EXE_purity"))
                .args([subcommand, "--config"])
                .arg(&config_path)
                .output()
                .expect("binary runs");
            assert!(
                output.status.success(),
                "{subcommand} ({label}) failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            output.stdout
        };
        let first = run("first");
        let second = run("second");
        assert_eq!(
            first, second,
            "{subcommand}: reports differ between identical runs"
        );
    }
    println!("ACCEPTANCE 9 PASS: all five subcommands byte-reproduce their reports");
}
