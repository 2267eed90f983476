//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every random draw comes from a fixed-seed ChaCha stream, so the run is
//! reproducible.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use scp_cli::commands::{solve, Decision};
use scp_cli::Instance;
use scp_core::solver::{
    beta_eta2_closed, beta_numeric, classify_flat, construct_completion, exists_two_atomic,
    hyperplane_min, necessary_checks, sufficient_checks, FlatClass, EQUAL_SHARE,
    INVERSE_SECOND_GEN, SECOND_GEN_DOMINATES, UNIFORM_RATE,
};
use scp_core::stampfli::{
    neg_moment1, neg_moment2, params_from_triple, stampfli_measure, support_sup_closed,
    triple_from_params,
};
use scp_core::verifier::{brute_force_beta, verify_completion, verify_measures, TRUNK_INEQUALITY};
use scp_core::{AtomicMeasure, BranchKind, InitialData, RateTheta, Regime, TreeData, WeightTriple};

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn instance_json(data: &InitialData) -> Instance {
    let branches: Vec<_> = data
        .branches()
        .iter()
        .map(|b| json!({"l1": b.l1, "l2": b.l2}))
        .collect();
    let text = json!({
        "shape": {"eta": data.eta(), "kappa": 1, "p": 2},
        "lambda0": data.lambda0(),
        "branches": branches,
    })
    .to_string();
    Instance::parse(&text).expect("generated instances are valid")
}

// lambda_{i,2}^2 = eta k_i lambda_{i,1}^2 keeps sum a_i = sum 1/(eta k_i) near 1
fn random_instance(rng: &mut ChaCha8Rng, eta: usize) -> InitialData {
    let pairs: Vec<(f64, f64)> = (0..eta)
        .map(|_| {
            let l1 = rng.gen_range(0.2..5.0);
            let k: f64 = rng.gen_range(0.6..4.0);
            (l1, l1 * k * eta as f64)
        })
        .collect();
    InitialData::from_squares(rng.gen_range(0.05..4.0), &pairs).unwrap()
}

fn mixed_example() -> Outcome {
    let r3 = 3f64.sqrt();
    let measures = vec![
        AtomicMeasure::dirac(2.0).unwrap(),
        AtomicMeasure::two_point(3.0 - r3, 3.0 + r3, 0.5).unwrap(),
    ];
    let bound = 12.0 / 7.0;
    let mut lines = Vec::new();
    let mut ok = true;
    for (l0_sq, expect) in [(bound - 1e-6, true), (bound, true), (bound + 1e-6, false)] {
        let tree = TreeData::new(
            vec![f64::sqrt(l0_sq)],
            vec![vec![1.0, 2f64.sqrt()], vec![1.0, r3]],
        )
        .unwrap();
        let rep = verify_measures(&tree, &measures, 1e-9).unwrap();
        let slack = rep.find(TRUNK_INEQUALITY).next().unwrap().residual;
        ok &= rep.passed == expect;
        lines.push(format!(
            "{}:{slack:+.2e}",
            if rep.passed { "pass" } else { "fail" }
        ));
    }
    outcome(
        ok,
        format!(
            "lambda0^2 = 12/7 -1e-6, 12/7, +1e-6 -> {}",
            lines.join(", ")
        ),
    )
}

fn eta2_closed_form(rng: &mut ChaCha8Rng) -> Outcome {
    let mut buckets: [Vec<InitialData>; 3] = [vec![], vec![], vec![]];
    let mut tries = 0;
    while buckets.iter().any(|b| b.len() < 100) && tries < 1_000_000 {
        tries += 1;
        let (a1, b1) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let a2 = (a1 + b1) * rng.gen_range(0.5..4.0);
        let b2 = (a1 + b1) * rng.gen_range(0.5..4.0);
        let sigma: f64 = a2 / (a1 + b1);
        let tau = a2 * (b2 - b1) / (a1 * b2);
        if tau <= 1.0 + 1e-6 || (sigma - 1.0).abs() < 1e-6 || (sigma - tau).abs() < 1e-6 {
            continue;
        }
        let k = if sigma <= 1.0 {
            0
        } else if sigma < tau {
            1
        } else {
            2
        };
        if buckets[k].len() < 100 {
            buckets[k].push(InitialData::from_squares(1.0, &[(a1, a2), (b1, b2)]).unwrap());
        }
    }
    let labels = [Regime::SigmaLow, Regime::Interior, Regime::TauHigh];
    let (mut worst_grid, mut worst_numeric, mut bad_labels, mut n) = (0f64, 0f64, 0, 0);
    for (k, bucket) in buckets.iter().enumerate() {
        for d in bucket {
            n += 1;
            let closed = beta_eta2_closed(d).unwrap();
            if closed.regime != Some(labels[k]) {
                bad_labels += 1;
            }
            let c = closed.value.finite().unwrap();
            let g = brute_force_beta(d, 100_000).unwrap().unwrap();
            let m = beta_numeric(d).value.finite().unwrap();
            worst_grid = worst_grid.max((g - c).abs());
            worst_numeric = worst_numeric.max(rel(m, c));
        }
    }
    let full = buckets.iter().all(|b| b.len() == 100);
    outcome(
        full && bad_labels == 0 && worst_grid <= 1e-3 && worst_numeric <= 1e-10,
        format!(
            "{n} instances (100 per regime), label mismatches {bad_labels}, \
             max |closed - grid| {worst_grid:.1e} (<= 1e-3), \
             max rel |closed - numeric| {worst_numeric:.1e} (<= 1e-10)"
        ),
    )
}

fn stampfli_round_trip(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut worst, mut not_increasing) = (0f64, 0);
    for _ in 0..1000 {
        let x = rng.gen_range(0.1..10.0);
        let r = rng.gen_range(1.0 + 1e-4..50.0);
        let theta = rng.gen_range(1.0 + 1e-4..50.0);
        let t = triple_from_params(x, RateTheta::new(r, theta).unwrap()).unwrap();
        let back = params_from_triple(&t).unwrap();
        worst = worst.max(rel(back.r(), r)).max(rel(back.theta(), theta));
        let [tx, ty, tz] = t.weights();
        if !(tx < ty && ty < tz && t.du() > 0.0 && t.dv() > 0.0) {
            not_increasing += 1;
        }
    }
    outcome(
        worst <= 1e-9 && not_increasing == 0,
        format!(
            "1000 draws, max rel error {worst:.1e} (<= 1e-9), \
             triples not strictly increasing: {not_increasing}"
        ),
    )
}

fn negative_moments(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut worst_neg, mut worst_gamma) = (0f64, 0f64);
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(0.1..10.0);
        let y = x * rng.gen_range(1.001..3.0);
        let z = y * rng.gen_range(1.001..3.0);
        let t = WeightTriple::new(x, y, z).unwrap();
        let xi = stampfli_measure(&t).unwrap();
        worst_neg = worst_neg
            .max(rel(neg_moment1(&t).unwrap(), xi.moment(-1).unwrap()))
            .max(rel(neg_moment2(&t).unwrap(), xi.moment(-2).unwrap()));
        let gamma = [x * x, x * x * y * y, x * x * y * y * z * z];
        for (k, g) in gamma.iter().enumerate() {
            worst_gamma = worst_gamma.max(rel(xi.moment(k as i32 + 1).unwrap(), *g));
        }
    }
    outcome(
        worst_neg <= 1e-10 && worst_gamma <= 1e-10,
        format!(
            "1000 triples, negative moments max rel {worst_neg:.1e}, \
             gamma_1..3 max rel {worst_gamma:.1e} (both <= 1e-10)"
        ),
    )
}

fn end_to_end(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut yes, mut failures, mut mixed) = (0, Vec::new(), 0);
    for k in 0..500 {
        let eta = rng.gen_range(2..=4);
        let d = random_instance(rng, eta);
        let report = match solve(&instance_json(&d), 1e-9) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("#{k}: {e}"));
                continue;
            }
        };
        if report.decision != Decision::Yes {
            continue;
        }
        yes += 1;
        let c = report.completion.as_ref().unwrap();
        if !c.one_atomic().is_empty() {
            mixed += 1;
        }
        let v = verify_completion(&d, c, 6, 1e-9).unwrap();
        let atoms_ok = c.branches.iter().all(|b| b.measure.len() <= 2);
        let zero_ok = c.branches.iter().all(|b| !b.measure.has_atom_at_zero());
        if !(v.passed && atoms_ok && zero_ok) {
            failures.push(format!("#{k}: verification failed"));
        }
    }
    outcome(
        failures.is_empty() && yes > 0,
        format!(
            "500 instances, {yes} YES ({mixed} with 1-atomic branches), all verified at depth 6 \
             tol 1e-9 with <= 2 atoms and no zero atom; failures: {}",
            if failures.is_empty() {
                "none".into()
            } else {
                failures.join("; ")
            }
        ),
    )
}

/// Draws data until `accept` holds.
fn draw_until(
    rng: &mut ChaCha8Rng,
    mut make: impl FnMut(&mut ChaCha8Rng) -> InitialData,
    accept: impl Fn(&InitialData) -> bool,
) -> Option<InitialData> {
    (0..100_000).map(|_| make(rng)).find(|d| accept(d))
}

fn necessary_conditions(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut yes, mut yes_bad) = (0, 0);
    for _ in 0..1000 {
        let eta = rng.gen_range(2..=4);
        let d = random_instance(rng, eta);
        if exists_two_atomic(&d).exists {
            yes += 1;
            if !necessary_checks(&d).all_hold {
                yes_bad += 1;
            }
        }
    }

    // counterexamples: break inequality k, keep the others where possible
    let fails = |d: &InitialData| -> Vec<bool> {
        necessary_checks(d)
            .inequalities
            .iter()
            .map(|i| !i.holds)
            .collect()
    };
    let mut counter = [0usize; 4];
    let mut counter_yes = 0;
    let mut missing = Vec::new();
    for (k, found_k) in counter.iter_mut().enumerate() {
        for _ in 0..50 {
            let found = draw_until(
                rng,
                |rng| {
                    let eta = rng.gen_range(2..=4);
                    let pairs: Vec<(f64, f64)> = (0..eta)
                        .map(|_| (rng.gen_range(0.2..3.0), rng.gen_range(0.3..12.0)))
                        .collect();
                    InitialData::from_squares(rng.gen_range(0.02..6.0), &pairs).unwrap()
                },
                |d| {
                    let f = fails(d);
                    // a failure of the last inequality forces the ratio sum above 1
                    let expected: Vec<bool> =
                        (0..4).map(|j| j == k || (k == 3 && j == 2)).collect();
                    f == expected
                },
            );
            match found {
                Some(d) => {
                    *found_k += 1;
                    if exists_two_atomic(&d).exists {
                        counter_yes += 1;
                    }
                }
                None => missing.push(k),
            }
        }
    }
    outcome(
        yes > 0 && yes_bad == 0 && counter_yes == 0 && missing.is_empty(),
        format!(
            "{yes} YES instances all satisfy the 4 inequalities (violations {yes_bad}); \
             counterexamples per inequality {counter:?} all answer NO (wrong YES {counter_yes}); \
             breaking the 4th also breaks the 3rd"
        ),
    )
}

fn sufficient_witnesses(rng: &mut ChaCha8Rng) -> Outcome {
    type Gen = fn(&mut ChaCha8Rng) -> InitialData;
    fn eta(rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(2..=4)
    }
    let gens: [(&str, Gen); 4] = [
        (SECOND_GEN_DOMINATES, |rng| {
            let n = eta(rng);
            let l1: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
            let sum: f64 = l1.iter().sum();
            let pairs: Vec<_> = l1
                .iter()
                .map(|a| (*a, sum * rng.gen_range(1.01..6.0)))
                .collect();
            InitialData::from_squares(sum * rng.gen_range(0.01..0.99), &pairs).unwrap()
        }),
        (UNIFORM_RATE, |rng| loop {
            let n = eta(rng);
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let a = rng.gen_range(0.2..3.0);
                    (a, a * rng.gen_range(1.0..4.0) * n as f64)
                })
                .collect();
            let s: f64 = pairs.iter().map(|(a, b)| a / b).sum();
            if s < 0.99 {
                let c: f64 = pairs.iter().map(|(a, b)| a / (b * b)).sum();
                return InitialData::from_squares(s * s / c * rng.gen_range(0.01..0.99), &pairs)
                    .unwrap();
            }
        }),
        (EQUAL_SHARE, |rng| {
            let n = eta(rng);
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let a = rng.gen_range(0.2..3.0);
                    (a, a * n as f64 * rng.gen_range(1.01..5.0))
                })
                .collect();
            let inv: f64 = pairs.iter().map(|(a, _)| 1.0 / a).sum();
            let top = (n * n) as f64 / inv;
            InitialData::from_squares(top * rng.gen_range(0.01..0.99), &pairs).unwrap()
        }),
        (INVERSE_SECOND_GEN, |rng| {
            let n = eta(rng);
            let l2: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..10.0)).collect();
            let w: f64 = l2.iter().map(|b| 1.0 / b).sum();
            let pairs: Vec<_> = l2
                .iter()
                .map(|b| (rng.gen_range(0.05..0.99) / w, *b))
                .collect();
            let q: f64 = pairs.iter().map(|(a, b)| 1.0 / (a * b * b)).sum();
            InitialData::from_squares(w * w / q * rng.gen_range(0.01..0.99), &pairs).unwrap()
        }),
    ];

    let mut notes = Vec::new();
    let mut ok = true;
    for (name, make) in gens {
        let (mut worst, mut bad) = (0f64, 0);
        for _ in 0..300 {
            let d = make(rng);
            let rep = sufficient_checks(&d);
            let c = rep.conditions.iter().find(|c| c.name == name).unwrap();
            let Some(w) = c.witness.as_ref() else {
                bad += 1;
                continue;
            };
            let residual = c.constraint_residual.unwrap().abs();
            worst = worst.max(residual);
            let verified = construct_completion(&d, w)
                .and_then(|done| verify_completion(&d, &done, 6, 1e-9))
                .is_ok_and(|v| v.passed);
            if !(c.holds && residual <= 1e-12 && c.value.unwrap() < c.threshold && verified) {
                bad += 1;
            }
        }
        ok &= bad == 0;
        notes.push(format!(
            "{name}: 300 drawn, {bad} bad, max |residual| {worst:.1e}"
        ));
    }
    outcome(ok, notes.join("; "))
}

fn flat_classification() -> Outcome {
    let cases = [
        (1.0, 1.5, FlatClass::NoCompletionHyponormality),
        (1.0, 2.0, FlatClass::NoTwoAtomicOneAtomicOnly),
        (1.0, 3.0, FlatClass::TwoAtomicExists),
        (2.0, 3.0, FlatClass::NoTwoAtomicMustBeOneAtomic),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (l0_sq, l2_sq, expect) in cases {
        let d = InitialData::from_pairs(f64::sqrt(l0_sq), &[(1.0, f64::sqrt(l2_sq)); 2]).unwrap();
        let class = classify_flat(&d).unwrap();
        let r = solve(&instance_json(&d), 1e-9).unwrap();
        let all_one_atomic = r
            .completion
            .as_ref()
            .is_some_and(|c| c.branches.iter().all(|b| b.kind == BranchKind::OneAtomic));
        let consistent = match class {
            FlatClass::NoCompletionHyponormality => r.decision == Decision::No,
            FlatClass::NoTwoAtomicOneAtomicOnly => {
                !r.two_atomic && r.decision == Decision::Yes && all_one_atomic
            }
            FlatClass::TwoAtomicExists => r.two_atomic && r.decision == Decision::Yes,
            FlatClass::NoTwoAtomicMustBeOneAtomic => {
                !r.two_atomic && (r.decision == Decision::No || all_one_atomic)
            }
        };
        ok &= class == expect && consistent;
        notes.push(format!(
            "({l2_sq}, {l0_sq}) -> {class:?}/{}",
            if r.decision == Decision::Yes {
                "YES"
            } else {
                "NO"
            }
        ));
    }
    outcome(ok, notes.join(", "))
}

fn hyperplane_identity(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut worst, mut below) = (0f64, 0);
    for _ in 0..200 {
        let n = rng.gen_range(2..=6);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
        let m = hyperplane_min(&a, &b).unwrap();
        let q: f64 = a.iter().zip(&b).map(|(a, b)| a * a / b).sum();
        let at: f64 = m.r.iter().zip(&b).map(|(r, b)| b * r * r).sum();
        let constraint: f64 = m.r.iter().zip(&a).map(|(r, a)| r * a).sum();
        worst = worst
            .max(rel(m.value, 1.0 / q))
            .max(rel(at, 1.0 / q))
            .max((constraint - 1.0).abs());
        for _ in 0..100 {
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
            let scale: f64 = w.iter().zip(&a).map(|(w, a)| w * a).sum();
            let value: f64 = w.iter().zip(&b).map(|(w, b)| b * (w / scale).powi(2)).sum();
            if value < (1.0 / q) * (1.0 - 1e-12) {
                below += 1;
            }
        }
    }
    outcome(
        worst <= 1e-12 && below == 0,
        format!(
            "200 (a, b) x 100 feasible r: {below} below the bound, \
             attainment error {worst:.1e} (<= 1e-12)"
        ),
    )
}

fn sup_support(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0f64;
    for _ in 0..1000 {
        let x = rng.gen_range(0.1..10.0);
        let rt = RateTheta::new(
            rng.gen_range(1.0 + 1e-4..50.0),
            rng.gen_range(1.0 + 1e-4..50.0),
        )
        .unwrap();
        let t = triple_from_params(x, rt).unwrap();
        let top = stampfli_measure(&t).unwrap().support_sup();
        worst = worst.max(rel(support_sup_closed(x, rt).unwrap(), top));
    }
    outcome(
        worst <= 1e-10,
        format!("1000 draws, max rel error {worst:.1e} (<= 1e-10)"),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, Outcome)> = vec![
        (
            "mixed example measures pass iff lambda0^2 <= 12/7",
            mixed_example(),
        ),
        (
            "eta = 2 closed-form beta vs grid and active set",
            eta2_closed_form(&mut rng),
        ),
        (
            "Stampfli (r, theta) round trip",
            stampfli_round_trip(&mut rng),
        ),
        (
            "Stampfli negative moments and weight products",
            negative_moments(&mut rng),
        ),
        ("solve YES answers verify end to end", end_to_end(&mut rng)),
        ("necessary inequalities", necessary_conditions(&mut rng)),
        (
            "sufficient-condition witnesses",
            sufficient_witnesses(&mut rng),
        ),
        ("flat data classification", flat_classification()),
        (
            "weighted minimum over a hyperplane",
            hyperplane_identity(&mut rng),
        ),
        ("closed-form support supremum", sup_support(&mut rng)),
    ];
    let mut passed = 0;
    for (k, (name, o)) in criteria.iter().enumerate() {
        println!(
            "{} [{:>2}] {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
        passed += o.ok as usize;
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
