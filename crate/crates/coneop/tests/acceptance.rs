//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured runtime. Run with `cargo test --test acceptance --
//! --nocapture` to see the lines.

use std::time::{Duration, Instant};

use coneop::bruteforce::{
    classify_monomial, enumerate_grid_cone, enumerate_report, find_norm_additive_bijections,
    GridMap, MonomialVerdict,
};
use coneop::cone::ConeFunction;
use coneop::fixtures::fixture_oracle;
use coneop::operators::{as_oracle, random_op, PointMap, WeightFunction};
use coneop::recovery::{
    check_duality, recover, recover_inverse, RecoverConfig, RecoveredMap, RecoveredWeight,
};
use coneop::scalar::Scalar;
use coneop::space::SpaceDescriptor;
use coneop::verification::{
    check_biseparating, check_lipschitz, check_norm_additive, check_order_iso, check_zero,
    estimate_bound, replay_witness, Sampler, SamplerParams, Witness,
};

fn sampler(seed: u64, space: &SpaceDescriptor) -> Sampler {
    Sampler::new(seed, space.clone(), SamplerParams::default())
}

/// Criterion 1: the canonical form satisfies the norm-additive condition
/// identically — 1000 random discrete operators, 50 pairs each, zero
/// discrepancy in exact rationals.
#[test]
fn acceptance_1_norm_additive_converse() {
    let started = Instant::now();
    for k in 0..1000u64 {
        let n = (k as usize % 64) + 1;
        let space = SpaceDescriptor::discrete(n).unwrap();
        let op = random_op(k, &space, &space, (0.1, 10.0)).unwrap();
        let oracle = as_oracle(&op);
        let report =
            check_norm_additive(&oracle, &mut sampler(k ^ 0x5eed, &space), 50, 0.0).unwrap();
        assert!(
            report.passed(),
            "op seed {k} (n={n}) violated norm additivity: {:?}",
            report.witness()
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("ACCEPTANCE 1 PASS: 1000 discrete operators, 50 pairs each, discrepancy exactly 0 ({elapsed:?})");
}

/// Criterion 2: black-box recovery returns the generator's point map and
/// weight exactly, certified with zero residual, using exactly n * |Y|
/// localization queries.
#[test]
fn acceptance_2_recovery_round_trip() {
    let started = Instant::now();
    for k in 0..200u64 {
        let n = (k as usize % 64) + 1;
        let space = SpaceDescriptor::discrete(n).unwrap();
        let op = random_op(k.wrapping_add(7_000), &space, &space, (0.1, 10.0)).unwrap();
        let oracle = as_oracle(&op);
        let mut config = RecoverConfig::for_space(&space);
        config.certification_trials = 20;
        config.certification_seed = k;
        let result = recover(&oracle, &space, &config).unwrap();
        assert!(result.certified(), "seed {k} not certified");
        assert!(result.residual_max.is_zero(), "seed {k} nonzero residual");
        assert_eq!(
            result.localization_queries,
            (n * n) as u64,
            "seed {k}: localization must use exactly n * |Y| indicator queries"
        );
        let (map, weights) = match (&result.tau, &result.weight) {
            (RecoveredMap::Permutation { map }, RecoveredWeight::Discrete { values }) => {
                (map, values)
            }
            _ => panic!("expected discrete recovery"),
        };
        match (op.point_map(), op.weight()) {
            (PointMap::Permutation { map: true_map }, WeightFunction::Discrete(w)) => {
                assert_eq!(map, true_map, "seed {k}: tau differs");
                assert_eq!(weights.as_slice(), w.values(), "seed {k}: h differs");
            }
            _ => unreachable!(),
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("ACCEPTANCE 2 PASS: 200 discrete recoveries match the generator exactly, residual 0, n*|Y| localization queries ({elapsed:?})");
}

/// Criterion 3: the inverse operator satisfies S(Tf) = f — exactly on
/// discrete spaces, within 1e-9 sup norm on the PL line.
#[test]
fn acceptance_3_inverse_formula() {
    let started = Instant::now();
    for k in 0..100u64 {
        let n = (k as usize % 16) + 1;
        let space = SpaceDescriptor::discrete(n).unwrap();
        let op = random_op(k.wrapping_add(11_000), &space, &space, (0.1, 10.0)).unwrap();
        let inv = op.invert();
        let mut s = sampler(k, &space);
        for _ in 0..20 {
            let f = s.sample_function();
            let image = op.apply(&f).unwrap();
            assert_eq!(inv.apply(&image).unwrap(), f, "discrete round trip, seed {k}");
            // and the other composition order: T(Sv) = v
            let v = s.sample_function();
            assert_eq!(
                op.apply(&inv.apply(&v).unwrap()).unwrap(),
                v,
                "discrete reverse round trip, seed {k}"
            );
        }
    }
    let line = SpaceDescriptor::pl_line(1e-9).unwrap();
    for k in 0..100u64 {
        let op = random_op(k.wrapping_add(12_000), &line, &line, (0.5, 4.0)).unwrap();
        let inv = op.invert();
        let mut s = sampler(k, &line);
        for _ in 0..20 {
            let f = s.sample_function();
            let back = inv.apply(&op.apply(&f).unwrap()).unwrap();
            let dist = back.sup_distance(&f).unwrap().to_f64();
            assert!(dist <= 1e-9, "PL round trip off by {dist} at seed {k}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("ACCEPTANCE 3 PASS: inverse round trips exact on discrete, <= 1e-9 on PL ({elapsed:?})");
}

/// Criterion 4: weight duality h(y) * w(tau(y)) = 1, exactly, at every
/// point, via independent forward and backward recoveries.
#[test]
fn acceptance_4_weight_duality() {
    let started = Instant::now();
    for k in 0..100u64 {
        let n = (k as usize % 8) + 2;
        let space = SpaceDescriptor::discrete(n).unwrap();
        let op = random_op(k.wrapping_add(13_000), &space, &space, (0.1, 10.0)).unwrap();
        let forward_oracle = as_oracle(&op);
        let backward_oracle = as_oracle(&op.invert());
        let mut config = RecoverConfig::for_space(&space);
        config.certification_trials = 5;
        let forward = recover(&forward_oracle, &space, &config).unwrap();
        let backward = recover_inverse(&backward_oracle, &space, &config).unwrap();
        assert!(forward.certified() && backward.certified(), "seed {k}");
        let duality = check_duality(&forward, &backward).unwrap();
        assert!(duality.sigma_inverts_tau, "seed {k}: sigma != tau^-1");
        assert!(
            duality.weight_duality_max_dev.is_zero(),
            "seed {k}: h(y) w(tau(y)) != 1"
        );
    }
    let elapsed = started.elapsed();
    println!("ACCEPTANCE 4 PASS: h(y) * w(tau(y)) = 1 exactly for 100 recovered operator pairs ({elapsed:?})");
}

/// Criterion 5: the structural check suite — order isomorphism, disjointness
/// preservation (tuples of 2 and 3), boundedness with the estimate
/// attaining h_max exactly, and the Lipschitz bound with M = h_max — all
/// with zero discrepancy on 200 random discrete operators.
#[test]
fn acceptance_5_structural_suite() {
    let started = Instant::now();
    for k in 0..200u64 {
        let n = (k as usize % 14) + 3;
        let space = SpaceDescriptor::discrete(n).unwrap();
        let op = random_op(k.wrapping_add(17_000), &space, &space, (0.1, 10.0)).unwrap();
        let oracle = as_oracle(&op);
        let inverse_oracle = as_oracle(&op.invert());

        let order = check_order_iso(
            &oracle,
            Some(&inverse_oracle),
            &mut sampler(k ^ 1, &space),
            20,
            0.0,
        )
        .unwrap();
        assert!(order.passed(), "seed {k}: order_iso failed");

        for tuple_size in [2usize, 3] {
            let bis = check_biseparating(
                &oracle,
                &mut sampler(k ^ 2, &space),
                20,
                tuple_size,
                0.0,
            )
            .unwrap();
            assert!(bis.passed(), "seed {k}: biseparating_{tuple_size} failed");
        }

        let h_max = op.h_max();
        let bound = estimate_bound(&oracle, &mut sampler(k ^ 3, &space), 20, Some(&h_max)).unwrap();
        assert!(bound.passed(), "seed {k}: bound exceeded h_max");
        // the estimate attains h_max exactly via an indicator probe
        assert_eq!(
            bound.constants.get("m_hat"),
            Some(&h_max),
            "seed {k}: m_hat != h_max"
        );

        let lip = check_lipschitz(&oracle, &h_max, &mut sampler(k ^ 4, &space), 20, 0.0).unwrap();
        assert!(lip.passed(), "seed {k}: lipschitz with M = h_max failed");
    }
    let elapsed = started.elapsed();
    println!("ACCEPTANCE 5 PASS: order/biseparating/bound/lipschitz exact on 200 discrete operators ({elapsed:?})");
}

/// Criterion 6: every negative-control fixture is rejected by a named
/// check, and its serialized witness replays to the identical discrepancy.
#[test]
fn acceptance_6_negative_controls() {
    let started = Instant::now();
    let mut rejections: Vec<(String, String)> = Vec::new();

    let mut reject = |fixture: &str, check: &str, witness: &Witness, space: &SpaceDescriptor| {
        // serialize, reload, replay: the discrepancy must be identical
        let json = serde_json::to_string(witness).unwrap();
        let reloaded: Witness = serde_json::from_str(&json).unwrap();
        let oracle = fixture_oracle(fixture, space).unwrap();
        let (_, _, disc) = replay_witness(&oracle, &reloaded).unwrap();
        assert_eq!(
            disc, witness.discrepancy,
            "{fixture}: replay changed the discrepancy"
        );
        rejections.push((fixture.to_string(), check.to_string()));
    };

    let s3 = SpaceDescriptor::discrete(3).unwrap();
    let square = fixture_oracle("square", &s3).unwrap();
    let rep = check_norm_additive(&square, &mut sampler(2, &s3), 50, 0.0).unwrap();
    assert!(!rep.passed(), "square must fail norm_additive");
    reject("square", "norm_additive", rep.witness().unwrap(), &s3);

    let shift = fixture_oracle("shift", &s3).unwrap();
    let rep = check_zero(&shift, 0.0).unwrap();
    assert!(!rep.passed(), "shift must fail the zero check");
    reject("shift", "zero", rep.witness().unwrap(), &s3);

    let s2 = SpaceDescriptor::discrete(2).unwrap();
    let order_swap = fixture_oracle("order-swap", &s2).unwrap();
    let rep = check_order_iso(&order_swap, None, &mut sampler(3, &s2), 200, 0.0).unwrap();
    assert!(!rep.passed(), "order-swap must fail order_iso");
    reject("order-swap", "order_iso", rep.witness().unwrap(), &s2);

    let s4 = SpaceDescriptor::discrete(4).unwrap();
    let averaging = fixture_oracle("averaging", &s4).unwrap();
    let rep = check_biseparating(&averaging, &mut sampler(5, &s4), 20, 2, 0.0).unwrap();
    assert!(!rep.passed(), "averaging must fail biseparating");
    reject("averaging", "biseparating_2", rep.witness().unwrap(), &s4);

    let elapsed = started.elapsed();
    let summary: Vec<String> = rejections
        .iter()
        .map(|(f, c)| format!("{f} by {c}"))
        .collect();
    println!(
        "ACCEPTANCE 6 PASS: all fixtures rejected with replayable witnesses ({}) ({elapsed:?})",
        summary.join(", ")
    );
}

/// Criterion 7: brute force over tiny grids — the boolean one-point cone
/// admits only the identity; the 2-point / max-2 cone completes quickly,
/// contains both coordinate-permutation monomial maps, and every passer
/// fixes zero. Non-monomial counts are reported, not asserted.
#[test]
fn acceptance_7_brute_force() {
    let started = Instant::now();

    let tiny = enumerate_report(1, 1, 16, 400_000).unwrap();
    assert_eq!(tiny.passing_count, 1, "(1,1) must pass only the identity");
    assert!(tiny.all_passers_fix_zero);
    assert_eq!(tiny.monomial_count, 1);

    let cone = enumerate_grid_cone(2, 2, 16).unwrap();
    let passers = find_norm_additive_bijections(&cone, 400_000).unwrap();
    let identity = GridMap::identity(cone.len());
    let swap = GridMap {
        perm: (0..cone.len())
            .map(|i| {
                let e = &cone.elements()[i];
                cone.index_of(&[e[1], e[0]]).unwrap()
            })
            .collect(),
    };
    assert!(passers.contains(&identity), "identity must pass on (2,2)");
    assert!(
        passers.contains(&swap),
        "coordinate swap must pass on (2,2)"
    );
    for map in [&identity, &swap] {
        assert!(matches!(
            classify_monomial(&cone, map),
            MonomialVerdict::Monomial { .. }
        ));
    }
    assert!(passers.iter().all(GridMap::fixes_zero));
    let report = enumerate_report(2, 2, 16, 400_000).unwrap();

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 7 PASS: (1,1) passes identity only; (2,2) has {} passers ({} monomial, {} non-monomial, all fixing zero) ({elapsed:?})",
        report.passing_count, report.monomial_count, report.non_monomial_count
    );
}

/// Criterion 8: PL model fidelity — 50 random increasing PL operators with
/// weights in [1/2, 4] recover on a 32-point grid: certified with residual
/// at most 1e-7, weights within 1e-6 of the truth, and strictly monotone
/// recovered point-map samples.
#[test]
fn acceptance_8_pl_model_fidelity() {
    let started = Instant::now();
    let line = SpaceDescriptor::pl_line(1e-10).unwrap();
    for k in 0..50u64 {
        let op = random_op(k.wrapping_add(21_000), &line, &line, (0.5, 4.0)).unwrap();
        let oracle = as_oracle(&op);
        let mut config = RecoverConfig::for_space(&line).with_grid(-8.0, 8.0, 32);
        config.certification_trials = 20;
        config.certification_seed = k;
        let result = recover(&oracle, &line, &config).unwrap();
        assert!(
            result.certified(),
            "seed {k}: verdict {:?}",
            result.verdict
        );
        assert!(
            result.residual_max.to_f64() <= 1e-7,
            "seed {k}: residual {}",
            result.residual_max
        );
        let (tau_true, h_true) = match (op.point_map(), op.weight()) {
            (PointMap::PlHomeo(t), WeightFunction::Pl(h)) => (t, h),
            _ => unreachable!(),
        };
        match (&result.tau, &result.weight) {
            (
                RecoveredMap::Sampled {
                    points,
                    values,
                    radii,
                },
                RecoveredWeight::Sampled { values: h_vals, .. },
            ) => {
                assert!(
                    values.windows(2).all(|w| w[0] < w[1]),
                    "seed {k}: recovered tau samples not strictly monotone"
                );
                for ((&y, &x), (&r, &h)) in
                    points.iter().zip(values).zip(radii.iter().zip(h_vals))
                {
                    assert!(
                        (x - tau_true.eval(y)).abs() <= r.max(1e-9),
                        "seed {k}: tau off at {y}"
                    );
                    assert!(
                        (h - h_true.eval(y)).abs() <= 1e-6,
                        "seed {k}: h off at {y}: {h} vs {}",
                        h_true.eval(y)
                    );
                }
            }
            _ => panic!("expected sampled recovery"),
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("ACCEPTANCE 8 PASS: 50 PL recoveries certified (residual <= 1e-7, h within 1e-6, tau monotone) ({elapsed:?})");
}

/// The swap example worked end to end: generation, checking, recovery, and
/// certification agree on the hand-computed values.
#[test]
fn acceptance_worked_example() {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let space = SpaceDescriptor::discrete(2).unwrap();
    let op = coneop::operators::WeightedCompositionOp::new(
        space.clone(),
        space.clone(),
        PointMap::permutation(vec![1, 0]).unwrap(),
        WeightFunction::discrete(vec![rat(2, 1), rat(1, 2)]).unwrap(),
    )
    .unwrap();
    let s = space.as_discrete().unwrap();
    let f = ConeFunction::discrete_from_ints(s, &[1, 3]).unwrap();
    let image = op.apply(&f).unwrap();
    assert_eq!(
        image.discrete_values().unwrap(),
        &[rat(6, 1), rat(1, 2)][..]
    );
    let oracle = as_oracle(&op);
    let mut config = RecoverConfig::for_space(&space);
    config.certification_trials = 10;
    let result = recover(&oracle, &space, &config).unwrap();
    assert!(result.certified());
    assert_eq!(result.tau, RecoveredMap::Permutation { map: vec![1, 0] });
    assert_eq!(
        result.weight,
        RecoveredWeight::Discrete {
            values: vec![rat(2, 1), rat(1, 2)]
        }
    );
    assert_eq!(Scalar::Rational(rat(1, 2)), op.h_min());
    println!("ACCEPTANCE EXAMPLE PASS: swap/(2, 1/2) worked example verified end to end");
}
