//! Acceptance suite: one test per shipping criterion, each printing a
//! pass/fail line with its elapsed time (visible with `--nocapture`) and
//! asserting both the physics tolerance and the runtime budget.
//!
//! Run with: `cargo test --test acceptance -- --nocapture`

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use qtd_core::info::{
    binary_entropy, find_crossover, fit_pair_rate, mutual_information, CrossoverOutcome,
    DEFAULT_G_RANGE,
};
use qtd_core::mc::validate::{run_validation, ValidationConfig};
use qtd_core::mc::{count_coincidences, Channel, PairingSpec};
use qtd_core::noise::{
    analytic_conditionals, classical_counts, conditional_row, quantum_counts, ConditionalTable,
};
use qtd_core::optics::{
    analyzer_matrix, bsa_outcome_distribution, make_bell, BellKind, DetectorOutcome, FockState,
    Occupation,
};
use qtd_core::{
    Detector, ExperimentParams, Hypothesis, JitterModel, Origin, PhotonEvent, Strategy,
};

/// Run one criterion, print its verdict line, and enforce the time budget.
fn criterion(
    number: u32,
    label: &str,
    budget: Duration,
    body: impl FnOnce() -> Result<(), String>,
) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    match &outcome {
        Ok(()) => println!(
            "[PASS] criterion {number}: {label} ({:.2}s)",
            elapsed.as_secs_f64()
        ),
        Err(e) => println!(
            "[FAIL] criterion {number}: {label} ({:.2}s): {e}",
            elapsed.as_secs_f64()
        ),
    }
    if let Err(e) = outcome {
        panic!("criterion {number} failed: {e}");
    }
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: operator algebra of the analyzer.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_operator_algebra() {
    criterion(
        1,
        "prepared state feeds the correlated pairs at 1/2, never the cross pairs",
        Duration::from_secs(1),
        || {
            let dist = bsa_outcome_distribution(&make_bell(BellKind::PhiPlus))
                .map_err(|e| e.to_string())?;
            ensure(
                (dist[&DetectorOutcome::APlusBPlus] - 0.5).abs() < 1e-12,
                format!("P(A+B+) = {}", dist[&DetectorOutcome::APlusBPlus]),
            )?;
            ensure(
                (dist[&DetectorOutcome::AMinusBMinus] - 0.5).abs() < 1e-12,
                format!("P(A-B-) = {}", dist[&DetectorOutcome::AMinusBMinus]),
            )?;
            ensure(
                dist[&DetectorOutcome::APlusBMinus] < 1e-12
                    && dist[&DetectorOutcome::AMinusBPlus] < 1e-12,
                "cross pairs must be dark",
            )?;

            // Expansion of the joint detection operators over input-mode
            // monomials: four terms each, coefficient 1/2, with the minus
            // signs on the same-port terms of the anticorrelated pair.
            let m = analyzer_matrix();
            let expand =
                |rx: usize, ry: usize| -> std::collections::BTreeMap<(usize, usize), f64> {
                    let mut c = std::collections::BTreeMap::new();
                    for i in 0..4 {
                        for j in 0..4 {
                            let v = (m[rx][i] * m[ry][j]).re;
                            if v.abs() > 1e-15 {
                                *c.entry((i.min(j), i.max(j))).or_insert(0.0) += v;
                            }
                        }
                    }
                    c.retain(|_, v| v.abs() > 1e-12);
                    c
                };
            let plus = expand(0, 2);
            let expected_plus = [((0, 2), 0.5), ((1, 3), 0.5), ((0, 1), 0.5), ((2, 3), 0.5)];
            for (key, val) in expected_plus {
                let got = plus.get(&key).copied().unwrap_or(0.0);
                ensure(
                    (got - val).abs() < 1e-12,
                    format!("d_A+ d_B+ term {key:?}: {got} vs {val}"),
                )?;
            }
            ensure(plus.len() == 4, format!("term count {}", plus.len()))?;
            let minus = expand(1, 3);
            let expected_minus = [((0, 2), 0.5), ((1, 3), 0.5), ((0, 1), -0.5), ((2, 3), -0.5)];
            for (key, val) in expected_minus {
                let got = minus.get(&key).copied().unwrap_or(0.0);
                ensure(
                    (got - val).abs() < 1e-12,
                    format!("d_A- d_B- term {key:?}: {got} vs {val}"),
                )?;
            }
            ensure(minus.len() == 4, format!("term count {}", minus.len()))?;
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: two background photons leak into the phi channel.
// ---------------------------------------------------------------------------

/// Brute-force two-photon transition oracle: 2x2 permanents of the
/// hand-written analyzer transfer matrix.
fn permanent_oracle(input: &FockState) -> Vec<([u8; 4], f64)> {
    let h = 1.0 / 2.0_f64.sqrt();
    let u = [
        [h, 0.0, 0.0, h],
        [h, 0.0, 0.0, -h],
        [0.0, h, h, 0.0],
        [0.0, -h, h, 0.0],
    ];
    let indices = |occ: &[u8; 4]| -> (usize, usize) {
        let mut v = Vec::with_capacity(2);
        for (mode, &n) in occ.iter().enumerate() {
            for _ in 0..n {
                v.push(mode);
            }
        }
        (v[0], v[1])
    };
    let fact_norm = |occ: &[u8; 4]| -> f64 {
        occ.iter()
            .map(|&n| (1..=n as u64).product::<u64>() as f64)
            .product::<f64>()
            .sqrt()
    };
    let mut outputs = Vec::new();
    for i in 0..4usize {
        for j in i..4usize {
            let mut out = [0u8; 4];
            out[i] += 1;
            out[j] += 1;
            let (r1, r2) = indices(&out);
            let mut amp = Complex64::new(0.0, 0.0);
            for (occ, c) in input.components() {
                let (c1, c2) = indices(&occ.0);
                let perm = u[r1][c1] * u[r2][c2] + u[r1][c2] * u[r2][c1];
                amp += c * perm / (fact_norm(&out) * fact_norm(&occ.0));
            }
            outputs.push((out, amp.norm_sqr()));
        }
    }
    outputs
}

#[test]
fn criterion_2_two_background_photons() {
    criterion(
        2,
        "orthogonally polarized photon pair in the signal port fakes the prepared state at 1/4",
        Duration::from_secs(1),
        || {
            let input = FockState::basis(Occupation([0, 0, 1, 1])).map_err(|e| e.to_string())?;
            let dist = bsa_outcome_distribution(&input).map_err(|e| e.to_string())?;
            for outcome in [DetectorOutcome::APlusBPlus, DetectorOutcome::AMinusBMinus] {
                ensure(
                    (dist[&outcome] - 0.25).abs() < 1e-12,
                    format!("P({outcome:?}) = {}", dist[&outcome]),
                )?;
            }
            // The full distribution agrees with the brute-force permanent
            // oracle outcome by outcome.
            let oracle = permanent_oracle(&input);
            for (occ, expected) in oracle {
                let got = match occ {
                    [1, 0, 1, 0] => dist[&DetectorOutcome::APlusBPlus],
                    [0, 1, 0, 1] => dist[&DetectorOutcome::AMinusBMinus],
                    [1, 0, 0, 1] => dist[&DetectorOutcome::APlusBMinus],
                    [0, 1, 1, 0] => dist[&DetectorOutcome::AMinusBPlus],
                    [1, 1, 0, 0] => dist[&DetectorOutcome::APlusAMinus],
                    [0, 0, 1, 1] => dist[&DetectorOutcome::BPlusBMinus],
                    [2, 0, 0, 0] => dist[&DetectorOutcome::BothAPlus],
                    [0, 2, 0, 0] => dist[&DetectorOutcome::BothAMinus],
                    [0, 0, 2, 0] => dist[&DetectorOutcome::BothBPlus],
                    [0, 0, 0, 2] => dist[&DetectorOutcome::BothBMinus],
                    _ => unreachable!(),
                };
                ensure(
                    (got - expected).abs() < 1e-12,
                    format!("outcome {occ:?}: {got} vs oracle {expected}"),
                )?;
            }
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: absent-target limits and high-noise asymptotes.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_stated_limits() {
    criterion(
        3,
        "absent-target rows are exactly (1/2, 1/2) and (1/4, 3/4); present rows approach them",
        Duration::from_secs(1),
        || {
            for g in [0.01, 1.0, 100.0, 1e4] {
                let p = ExperimentParams {
                    pair_rate: 100.0,
                    ..Default::default()
                }
                .with_noise_ratio(g);
                let (c0, c1) = conditional_row(&classical_counts(&p, Hypothesis::Absent))
                    .map_err(|e| e.to_string())?;
                ensure(
                    (c0 - 0.5).abs() < 1e-12 && (c1 - 0.5).abs() < 1e-12,
                    format!("classical absent at g={g}: ({c0}, {c1})"),
                )?;
                let (q0, q1) = conditional_row(&quantum_counts(&p, Hypothesis::Absent))
                    .map_err(|e| e.to_string())?;
                ensure(
                    (q0 - 0.25).abs() < 1e-12 && (q1 - 0.75).abs() < 1e-12,
                    format!("quantum absent at g={g}: ({q0}, {q1})"),
                )?;
            }
            // High-noise asymptotes of the present-target rows. The approach
            // rate scales inversely with the pair rate (the only signal-side
            // scale), so witness the limit with a unit pair rate.
            let p = ExperimentParams {
                pair_rate: 1.0,
                ..Default::default()
            }
            .with_noise_ratio(1e6);
            let c = analytic_conditionals(&p, Strategy::Classical).map_err(|e| e.to_string())?;
            let q = analytic_conditionals(&p, Strategy::Quantum).map_err(|e| e.to_string())?;
            ensure(
                (c.phi_given_present - 0.5).abs() < 1e-3,
                format!("classical asymptote {}", c.phi_given_present),
            )?;
            ensure(
                (q.phi_given_present - 0.25).abs() < 1e-3,
                format!("quantum asymptote {}", q.phi_given_present),
            )?;
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: accidental-rate scaling laws.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_noise_scaling_law() {
    criterion(
        4,
        "accidentals scale linearly (classical) and quadratically (quantum) in the background",
        Duration::from_secs(1),
        || {
            let slope = |strategy: Strategy| -> f64 {
                let points: Vec<(f64, f64)> = (0..9)
                    .map(|k| {
                        let n = 1e6 * 10f64.powf(k as f64 / 4.0);
                        let p = ExperimentParams {
                            background_rate: n,
                            ..Default::default()
                        };
                        let nc = match strategy {
                            Strategy::Classical => classical_counts(&p, Hypothesis::Present).nc_phi,
                            Strategy::Quantum => quantum_counts(&p, Hypothesis::Present).nc_phi,
                        };
                        (n.ln(), nc.ln())
                    })
                    .collect();
                let n = points.len() as f64;
                let mx: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
                let my: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
                let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
                let den: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
                num / den
            };
            let sc = slope(Strategy::Classical);
            let sq = slope(Strategy::Quantum);
            ensure(
                (sc - 1.0).abs() <= 0.05,
                format!("classical slope {sc} outside 1.0 +- 0.05"),
            )?;
            ensure(
                (sq - 2.0).abs() <= 0.05,
                format!("quantum slope {sq} outside 2.0 +- 0.05"),
            )?;
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: Monte Carlo vs analytic model.
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_monte_carlo_matches_analytic_model() {
    criterion(
        5,
        "seeded simulations agree with the closed-form model within 3 SE at g in {0,1,10,100}",
        Duration::from_secs(300),
        || {
            let base = ExperimentParams {
                pair_rate: 100.0,
                ..Default::default()
            };
            let cfg = ValidationConfig::default(); // 4 g-points x 40 seeds
            let reports =
                run_validation(&base, &JitterModel::default(), &cfg).map_err(|e| e.to_string())?;
            ensure(reports.len() == 16, "expected 16 entries")?;
            for r in &reports {
                ensure(
                    r.pass,
                    format!(
                        "g={} {} x={}: {}/{} trials within 3 SE (empty {})",
                        r.g,
                        r.strategy,
                        r.hypothesis.x(),
                        r.n_pass,
                        r.n_trials,
                        r.n_empty
                    ),
                )?;
            }
            // The present-target runs carry the statistics: at least 1e4
            // coincidences per trial on average, as sized by the planner.
            for r in reports
                .iter()
                .filter(|r| r.hypothesis == Hypothesis::Present)
            {
                ensure(
                    r.pooled_counts >= 10_000 * r.n_trials as u64,
                    format!(
                        "g={} {}: pooled {} over {} trials",
                        r.g, r.strategy, r.pooled_counts, r.n_trials
                    ),
                )?;
            }
            // The one analytically degenerate entry (classical, absent, no
            // background: no photon ever reaches the signal detectors) must
            // be recognized as such.
            let degenerate: Vec<_> = reports
                .iter()
                .filter(|r| r.analytically_degenerate)
                .collect();
            ensure(
                degenerate.len() == 1
                    && degenerate[0].strategy == Strategy::Classical
                    && degenerate[0].hypothesis == Hypothesis::Absent
                    && degenerate[0].g == 0.0
                    && degenerate[0].pooled_counts == 0,
                "degenerate-entry bookkeeping",
            )?;
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7: crossover reproduction and the window-improvement claim.
// ---------------------------------------------------------------------------

fn fitted_crossovers() -> Result<(f64, f64, f64), String> {
    let base = ExperimentParams::default(); // S_A = S_B = 1000/s, 5 ns, V = 0.9
    let pair_rate = fit_pair_rate(&base, 40.0).map_err(|e| e.to_string())?;
    let fitted = base.with_pair_rate(pair_rate);
    let g5 = match find_crossover(&fitted, DEFAULT_G_RANGE).map_err(|e| e.to_string())? {
        CrossoverOutcome::Found(r) => r.g_star,
        CrossoverOutcome::NoCrossover { .. } => return Err("no crossover at 5 ns".into()),
    };
    let g100 = match find_crossover(&fitted.with_window(1e-10), DEFAULT_G_RANGE)
        .map_err(|e| e.to_string())?
    {
        CrossoverOutcome::Found(r) => r.g_star,
        CrossoverOutcome::NoCrossover { .. } => return Err("no crossover at 100 ps".into()),
    };
    Ok((pair_rate, g5, g100))
}

#[test]
fn criterion_6_crossover_reproduction() {
    criterion(
        6,
        "one fitted pair rate puts the 5 ns crossover in [20, 80]; the manifest reports the fit",
        Duration::from_secs(10),
        || {
            let (pair_rate, g5, _) = fitted_crossovers()?;
            ensure(
                (20.0..=80.0).contains(&g5),
                format!("g* = {g5} outside [20, 80]"),
            )?;
            ensure(
                pair_rate.is_finite() && pair_rate > 0.0,
                format!("fitted pair rate {pair_rate}"),
            )?;

            // The CLI records the fitted value in its manifest.
            let out = temp_dir("manifest-fit");
            let status = qtd_command()
                .args(["reproduce", "window-claim", "--out"])
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            ensure(status.success(), format!("qtd exited with {status}"))?;
            let manifest =
                std::fs::read_to_string(out.join("manifest.json")).map_err(|e| e.to_string())?;
            let parsed: serde_json::Value =
                serde_json::from_str(&manifest).map_err(|e| e.to_string())?;
            ensure(
                parsed["pair_rate_fitted"].as_bool() == Some(true),
                "manifest must flag the fitted pair rate",
            )?;
            let reported = parsed["pair_rate"].as_f64().unwrap_or(f64::NAN);
            ensure(
                (reported - pair_rate).abs() / pair_rate < 1e-9,
                format!("manifest pair_rate {reported} vs fit {pair_rate}"),
            )?;
            std::fs::remove_dir_all(&out).ok();
            Ok(())
        },
    );
}

#[test]
fn criterion_7_window_improvement_claim() {
    criterion(
        7,
        "shrinking the window from 5 ns to 100 ps raises the crossover by a factor in [5, 20]",
        Duration::from_secs(10),
        || {
            let (_, g5, g100) = fitted_crossovers()?;
            let ratio = g100 / g5;
            ensure(
                (5.0..=20.0).contains(&ratio),
                format!("g*(100 ps)/g*(5 ns) = {ratio} (g5 = {g5}, g100 = {g100})"),
            )?;
            ensure(g100 > g5, "narrower window must tolerate more noise")?;
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: mutual-information bounds and edge cases.
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_information_bounds() {
    criterion(
        8,
        "mutual information respects its bounds and the reference channel values",
        Duration::from_secs(1),
        || {
            ensure(
                binary_entropy(0.5).map_err(|e| e.to_string())? == 1.0,
                "H(1/2) = 1",
            )?;
            let zero = mutual_information(&ConditionalTable::new(0.7, 0.7), 0.5)
                .map_err(|e| e.to_string())?;
            ensure(zero == 0.0, format!("identical rows gave {zero}"))?;
            let one = mutual_information(&ConditionalTable::new(1.0, 0.0), 0.5)
                .map_err(|e| e.to_string())?;
            ensure(
                (one - 1.0).abs() < 1e-15,
                format!("perfect channel gave {one}"),
            )?;
            let half_blind = mutual_information(&ConditionalTable::new(1.0, 0.5), 0.5)
                .map_err(|e| e.to_string())?;
            ensure(
                (half_blind - 0.311278).abs() < 1e-6,
                format!("reference channel gave {half_blind}"),
            )?;
            for p00 in [0.0, 0.3, 0.62, 1.0] {
                for p01 in [0.0, 0.25, 0.8, 1.0] {
                    let i = mutual_information(&ConditionalTable::new(p00, p01), 0.5)
                        .map_err(|e| e.to_string())?;
                    ensure(
                        (0.0..=1.0).contains(&i),
                        format!("I({p00}, {p01}) = {i} out of bounds"),
                    )?;
                }
            }
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: coincidence counter vs the exhaustive pairing oracle.
// ---------------------------------------------------------------------------

/// Independent O(n^2) implementation of one-use earliest-first matching.
fn exhaustive_pairing(events: &[PhotonEvent], window: f64, spec: &PairingSpec) -> (u64, u64) {
    let mut used = vec![false; events.len()];
    let (mut phi, mut perp) = (0u64, 0u64);
    for i in 0..events.len() {
        if used[i] {
            continue;
        }
        for j in 0..events.len() {
            if j <= i || used[j] {
                continue;
            }
            if (events[j].time - events[i].time).abs() > window {
                continue;
            }
            if let Some(ch) = spec.channel(events[i].detector, events[j].detector) {
                used[i] = true;
                used[j] = true;
                match ch {
                    Channel::Phi => phi += 1,
                    Channel::Perp => perp += 1,
                }
                break;
            }
        }
    }
    (phi, perp)
}

#[test]
fn criterion_9_coincidence_counter_vs_oracle() {
    criterion(
        9,
        "window matcher equals the exhaustive one-use pairing oracle on 100 random streams",
        Duration::from_secs(30),
        || {
            use rand::rngs::StdRng;
            use rand::{Rng, SeedableRng};
            let mut rng = StdRng::seed_from_u64(90210);
            for case in 0..100 {
                let spec = if case % 2 == 0 {
                    PairingSpec::quantum()
                } else {
                    PairingSpec::classical()
                };
                let span = 10f64.powf(rng.random_range(-4.0..-1.0));
                let mut events: Vec<PhotonEvent> = (0..1000)
                    .map(|_| PhotonEvent {
                        time: rng.random_range(0.0..span),
                        detector: Detector::ALL[rng.random_range(0..Detector::ALL.len())],
                        origin: Origin::Background,
                    })
                    .collect();
                events.sort_unstable_by(PhotonEvent::stream_cmp);
                let window = span * 10f64.powf(rng.random_range(-4.0..-0.5));
                let counts =
                    count_coincidences(&events, window, &spec).map_err(|e| e.to_string())?;
                let (phi, perp) = exhaustive_pairing(&events, window, &spec);
                ensure(
                    counts.phi == phi && counts.perp == perp,
                    format!(
                        "case {case}: fast ({}, {}) vs oracle ({phi}, {perp})",
                        counts.phi, counts.perp
                    ),
                )?;
            }
            Ok(())
        },
    );
}

// ---------------------------------------------------------------------------
// Criterion 10: byte-identical artifact reproduction through the CLI.
// ---------------------------------------------------------------------------

fn qtd_command() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qtd"));
    cmd.env("QTD_LOG", "quiet");
    cmd
}

fn temp_dir(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qtd-acceptance-{tag}-{}", std::process::id()))
}

#[test]
fn criterion_10_byte_identical_reproduction() {
    criterion(
        10,
        "reproduce fig3/fig4 with a fixed seed emits byte-identical artifacts twice",
        Duration::from_secs(60),
        || {
            for target in ["fig3", "fig4"] {
                let file = format!("{target}.csv");
                let mut outputs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
                for run in 0..2 {
                    let out = temp_dir(&format!("{target}-{run}"));
                    let status = qtd_command()
                        .args(["reproduce", target, "--seed", "20260808", "--out"])
                        .arg(&out)
                        .status()
                        .map_err(|e| e.to_string())?;
                    ensure(status.success(), format!("qtd exited with {status}"))?;
                    let artifact = std::fs::read(out.join(&file)).map_err(|e| e.to_string())?;
                    let manifest =
                        std::fs::read(out.join("manifest.json")).map_err(|e| e.to_string())?;
                    outputs.push((artifact, manifest));
                    std::fs::remove_dir_all(&out).ok();
                }
                ensure(
                    outputs[0].0 == outputs[1].0,
                    format!("{file} differs between runs"),
                )?;
                ensure(
                    outputs[0].1 == outputs[1].1,
                    "manifest.json differs between runs",
                )?;
                ensure(!outputs[0].0.is_empty(), format!("{file} is empty"))?;
                // Grid rows plus header.
                let text = String::from_utf8(outputs[0].0.clone()).map_err(|e| e.to_string())?;
                ensure(
                    text.lines().count() == 51,
                    format!("{file}: expected 51 lines, got {}", text.lines().count()),
                )?;
            }
            Ok(())
        },
    );
}
