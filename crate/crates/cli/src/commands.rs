//! The five subcommands.  Each returns the result payload plus a summary;
//! `main` wraps them into a [`crate::report::ReportDocument`].
//!
//! Errors returned here are configuration problems (exit 2).  A run that
//! completes but fails its checks is reported through the summary (exit 1).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use purity_core::channels::{sample_kraus_channel_with, validate, QuantumChannel};
use purity_core::lemma::{
    check_trace_bound, sample_bound_instance, sample_cs_instance, verify_cs_identity_with_cap,
    InstanceConfig,
};
use purity_core::linalg::NormOrder;
use purity_core::purity::{
    check_multiplicativity, maximize_output_norm, AscentOptions, MultVerdict,
};

use crate::config::{RunConfig, SampleKind};
use crate::report::{LemmaBatch, LemmaFailure, MultEntry, NuEntry, Results, Summary, CANDIDATE_NOTE};

fn ascent_options(cfg: &RunConfig) -> AscentOptions {
    AscentOptions {
        restarts: cfg.restarts,
        max_iterations: cfg.max_iterations,
        tolerance: cfg.tol,
        seed: cfg.seed,
    }
}

fn build_channels(cfg: &RunConfig) -> Result<Vec<QuantumChannel>, String> {
    if cfg.channels.is_empty() {
        return Err("no channels configured; add [[channels]] entries".into());
    }
    cfg.channels
        .iter()
        .enumerate()
        .map(|(i, spec)| spec.build().map_err(|e| format!("channel {i}: {e}")))
        .collect()
}

fn check_dim_cap(dim: usize, cap: usize) -> Result<(), String> {
    if dim > cap {
        return Err(format!(
            "joint dimension {dim} exceeds the optimization cap of {cap}"
        ));
    }
    Ok(())
}

/// Whether a closed-form value is only conjectural: products of more than one
/// depolarizing factor at a finite, non-natural order.
fn conjectural_flag(channel: &QuantumChannel, p: NormOrder, has_closed_form: bool) -> Option<bool> {
    if !has_closed_form {
        return None;
    }
    let factors = channel.factor_dims().len();
    if factors > 1 && !p.is_infinite() && !p.is_natural() {
        Some(true)
    } else {
        None
    }
}

/// `nu`: optimize the output norm of every configured channel at every order.
/// Channels failing validation short-circuit into an error report.
pub fn cmd_nu(cfg: &RunConfig) -> Result<(Results, Summary), String> {
    let channels = build_channels(cfg)?;
    for c in &channels {
        check_dim_cap(c.dim(), cfg.dim_cap)?;
    }
    let validations = channels
        .iter()
        .map(|c| validate(c).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, String>>()?;
    if validations.iter().any(|v| !v.passes) {
        let passed = validations.iter().filter(|v| v.passes).count();
        let summary = Summary::new(validations.len(), passed);
        return Ok((Results::Validate { reports: validations }, summary));
    }

    let opts = ascent_options(cfg);
    let mut entries = Vec::with_capacity(channels.len() * cfg.p.len());
    for channel in &channels {
        for &p in &cfg.p {
            let report = maximize_output_norm(channel, p, &opts).map_err(|e| e.to_string())?;
            let conjectural = conjectural_flag(channel, p, report.closed_form.is_some());
            entries.push(NuEntry {
                report,
                conjectural,
            });
        }
    }
    let passed = entries.iter().filter(|e| e.report.converged).count();
    let summary = Summary::new(entries.len(), passed);
    Ok((Results::Nu { entries }, summary))
}

/// `check-mult`: compare the joint optimum of the configured factor list
/// against the product of per-factor optima, for every order.
pub fn cmd_check_mult(cfg: &RunConfig) -> Result<(Results, Summary), String> {
    let factors = build_channels(cfg)?;
    let joint_dim: usize = factors.iter().map(QuantumChannel::dim).product();
    check_dim_cap(joint_dim, cfg.dim_cap)?;

    let opts = ascent_options(cfg);
    let mut checks = Vec::with_capacity(cfg.p.len());
    for &p in &cfg.p {
        let report = check_multiplicativity(&factors, p, &opts, cfg.violation_tol)
            .map_err(|e| e.to_string())?;
        let note =
            (report.verdict == MultVerdict::ViolationCandidate).then_some(CANDIDATE_NOTE);
        checks.push(MultEntry { report, note });
    }
    let passed = checks
        .iter()
        .filter(|c| c.report.verdict == MultVerdict::Consistent)
        .count();
    let summary = Summary::new(checks.len(), passed);
    Ok((Results::Mult { checks }, summary))
}

/// `verify-lemma`: seeded batches of the trace bound and of the rank-one
/// expansion identity.  Failing instances are embedded whole for replay.
pub fn cmd_verify_lemma(cfg: &RunConfig) -> Result<(Results, Summary), String> {
    let lemma = &cfg.lemma;
    if lemma.instances == 0 && lemma.cs_instances == 0 {
        return Err("verify-lemma needs at least one instance; set lemma.instances".into());
    }
    let shape = InstanceConfig {
        max_operators: lemma.max_operators,
        max_factors: lemma.max_factors,
        dim_choices: lemma.dims.clone(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let mut bound_failures = Vec::new();
    for index in 0..lemma.instances {
        let ops = sample_bound_instance(&shape, &mut rng).map_err(|e| e.to_string())?;
        let report = check_trace_bound(&ops).map_err(|e| e.to_string())?;
        if !report.passes {
            bound_failures.push(LemmaFailure {
                index,
                operators: ops,
                report,
            });
        }
    }
    let trace_bound = LemmaBatch {
        instances: lemma.instances,
        passed: lemma.instances - bound_failures.len() as u32,
        failures: bound_failures,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let mut cs_failures = Vec::new();
    for index in 0..lemma.cs_instances {
        let ops = sample_cs_instance(&shape, &mut rng, lemma.multiindex_cap)
            .map_err(|e| e.to_string())?;
        let report =
            verify_cs_identity_with_cap(&ops, lemma.multiindex_cap).map_err(|e| e.to_string())?;
        if !report.passes {
            cs_failures.push(LemmaFailure {
                index,
                operators: ops,
                report,
            });
        }
    }
    let expansion = LemmaBatch {
        instances: lemma.cs_instances,
        passed: lemma.cs_instances - cs_failures.len() as u32,
        failures: cs_failures,
    };

    let items = (lemma.instances + lemma.cs_instances) as usize;
    let passed = (trace_bound.passed + expansion.passed) as usize;
    let summary = Summary::new(items, passed);
    Ok((
        Results::Lemma {
            trace_bound,
            expansion,
        },
        summary,
    ))
}

/// `search`: sample random channel tuples and hunt for multiplicativity
/// violations across the order grid.  Candidates are re-verified at elevated
/// restarts inside the comparison before being recorded, and are always
/// labelled unconfirmed.
pub fn cmd_search(cfg: &RunConfig) -> Result<(Results, Summary), String> {
    let plan = &cfg.search;
    if plan.samples == 0 || plan.factors == 0 {
        return Err("search needs samples >= 1 and factors >= 1".into());
    }
    if plan.dim < 2 {
        return Err(format!(
            "search dimension {} is below the minimum of 2",
            plan.dim
        ));
    }
    let joint_dim = plan.dim.checked_pow(plan.factors as u32).ok_or_else(|| {
        format!(
            "joint dimension {}^{} overflows",
            plan.dim, plan.factors
        )
    })?;
    check_dim_cap(joint_dim, cfg.dim_cap)?;
    if plan.sample_kind == SampleKind::Kraus && plan.kraus_ops == 0 {
        return Err("search needs kraus_ops >= 1".into());
    }

    let opts = ascent_options(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(2);
    let mut checks = Vec::new();
    let mut candidates = Vec::new();
    for _ in 0..plan.samples {
        let factors = (0..plan.factors)
            .map(|_| match plan.sample_kind {
                SampleKind::Kraus => {
                    Ok(sample_kraus_channel_with(plan.dim, plan.kraus_ops, &mut rng))
                }
                SampleKind::Depolarizing => {
                    QuantumChannel::depolarizing(plan.dim, rng.random::<f64>())
                        .map_err(|e| e.to_string())
                }
            })
            .collect::<Result<Vec<_>, String>>()?;
        for &p in &cfg.p {
            let report = check_multiplicativity(&factors, p, &opts, plan.threshold)
                .map_err(|e| e.to_string())?;
            let is_candidate = report.verdict == MultVerdict::ViolationCandidate;
            checks.push(MultEntry {
                report,
                note: is_candidate.then_some(CANDIDATE_NOTE),
            });
            if is_candidate {
                candidates.push(checks.len() - 1);
            }
        }
    }
    let passed = checks
        .iter()
        .filter(|c| c.report.verdict == MultVerdict::Consistent)
        .count();
    let summary = Summary::new(checks.len(), passed);
    Ok((
        Results::Search {
            samples: plan.samples as usize,
            checks,
            candidates,
        },
        summary,
    ))
}

/// `validate`: trace preservation and complete positivity for every
/// configured channel.
pub fn cmd_validate(cfg: &RunConfig) -> Result<(Results, Summary), String> {
    let channels = build_channels(cfg)?;
    let reports = channels
        .iter()
        .map(|c| validate(c).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, String>>()?;
    let passed = reports.iter().filter(|r| r.passes).count();
    let summary = Summary::new(reports.len(), passed);
    Ok((Results::Validate { reports }, summary))
}
