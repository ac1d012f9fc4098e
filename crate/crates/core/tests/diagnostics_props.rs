use lacunary::diagnostics::{
    average_at, check_dyadic_block_bound, check_relation_bound, check_weyl_deviation, golden_angles,
    lambda_q_profile, mesh_exponent_fit, powers_of_two, two_power_pairs, uc_lower_bound, weighted_average,
    weyl_profile, zalcwasser_fit, Angle, DyadicBoundParams, RelationBoundParams, RelationConstant, Verdict,
};
use lacunary::seq::{sample_set, BaseSequence, MeanSchedule};
use lacunary::IntegerSet;
use num_complex::Complex64;

fn rational_angles() -> Vec<Angle> {
    [(1, 3), (1, 4), (2, 5), (3, 7), (1, 8)].iter().map(|&(p, q)| Angle::Rational { p, q }).collect()
}

#[test]
fn zero_angle_average_is_one_for_sampled_sets() {
    for seed in 0..5 {
        let set = sample_set(&MeanSchedule::LogLog { c: 1.0 }, &BaseSequence::Naturals, 20_000, seed).unwrap();
        let grid = [100, 1_000, 10_000, 20_000];
        let p = weyl_profile(&set, &[Angle::Zero], &grid, 1e-12).unwrap();
        for pt in &p.angles[0].points {
            if pt.count > 0 {
                assert_eq!(pt.average, Some(Complex64::new(1.0, 0.0)));
            }
        }
    }
}

/// Thinned squares and primes follow the base's own averages at rational angles.
#[test]
fn thinned_bases_track_base_averages() {
    let count = 20_000;
    let half = MeanSchedule::Custom { table: vec![0.5; count] };
    for base in [BaseSequence::squares(), BaseSequence::Primes] {
        let values = base.values(count).unwrap();
        let top = *values.last().unwrap();
        for seed in 0..20 {
            let set = sample_set(&half, &base, count, seed).unwrap();
            for a in rational_angles() {
                let limit = weighted_average(&values, &vec![1.0; count], a).unwrap();
                let got = average_at(&set, a, top).unwrap();
                assert!((got - limit).norm() <= 0.05, "{base:?} seed {seed} {a:?}: {got} vs {limit}");
            }
        }
    }
}

#[test]
fn weyl_deviation_over_squares_is_consistent() {
    let half = MeanSchedule::Custom { table: vec![0.5; 20_000] };
    let r = check_weyl_deviation(&BaseSequence::squares(), &half, 20_000, &rational_angles(), 50, 4).unwrap();
    assert_ne!(r.verdict, Verdict::Violated);
}

#[test]
fn golden_angles_are_equidistributed_for_dense_sets() {
    let half = MeanSchedule::Custom { table: vec![0.5; 100_000] };
    let set = sample_set(&half, &BaseSequence::Naturals, 100_000, 2).unwrap();
    for a in golden_angles(20) {
        assert!(average_at(&set, a, 100_000).unwrap().norm() < 0.05);
    }
}

#[test]
fn mesh_fits() {
    let grid: Vec<u64> = (4..=20).map(|k| 1u64 << k).collect();
    let pairs = mesh_exponent_fit(&two_power_pairs(1 << 20), &grid).unwrap();
    assert!((pairs.beta - 2.0).abs() <= 0.15 && pairs.accepted, "{pairs:?}");
    let single = mesh_exponent_fit(&powers_of_two(1 << 20), &grid).unwrap();
    assert!((single.beta - 1.0).abs() <= 0.15 && single.accepted, "{single:?}");
    let interval = mesh_exponent_fit(&IntegerSet::interval(1, 1 << 20), &grid).unwrap();
    assert!(!interval.accepted);
}

#[test]
fn lacunary_q_exponent_is_smaller_than_interval() {
    let q = [2.0, 4.0, 6.0, 8.0];
    let lac = lambda_q_profile(&powers_of_two(1 << 10), &q, 8, 1).unwrap();
    let full = lambda_q_profile(&IntegerSet::interval(1, 1024), &q, 8, 1).unwrap();
    let (le, fe) = (lac.exponent.unwrap(), full.exponent.unwrap());
    assert!(le <= 0.7, "{lac:?}");
    assert!(le < fe, "{le} vs {fe}");
}

#[test]
fn lacunary_partial_sums_stay_bounded() {
    let spectrum: Vec<i64> = (0..12).map(|j| 1i64 << j).collect();
    let uc = uc_lower_bound(&spectrum, &[1, 4, 16, 64, 256, 1024], 8, 2).unwrap();
    assert!(uc.value >= 1.0 && uc.value < 16.0, "{uc:?}");
}

#[test]
fn relation_bound_over_squares() {
    let params = RelationBoundParams {
        schedule: MeanSchedule::LogLog { c: 1.0 },
        base: BaseSequence::squares(),
        constant: RelationConstant::RegularBase,
        s: 3,
        m: 4,
        horizon: 5_000,
        trials: 200,
        seed: 3,
        tail_cap: 1_000_000,
    };
    let r = check_relation_bound(&params).unwrap();
    assert_ne!(r.verdict, Verdict::Violated);
}

#[test]
fn small_dyadic_constants_are_reported_infeasible() {
    let params = DyadicBoundParams { c: 1.0 / 24.0, tau: 1.0 / 24.0, n_lo: 8, n_hi: 10, trials: 10, seed: 1, probe_width: 2 };
    let rows = check_dyadic_block_bound(&params).unwrap();
    let relations: Vec<_> = rows.into_iter().filter(|r| r.bound_id == "lemma2_9_relations").collect();
    assert_eq!(relations.len(), 3);
    for r in relations {
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.notes.iter().any(|n| n.contains("not desk-verifiable")), "{:?}", r.notes);
    }
}

#[test]
fn zalcwasser_rejects_small_exponents() {
    assert!(zalcwasser_fit(&[64, 128, 256], &[2.0]).is_err());
}
