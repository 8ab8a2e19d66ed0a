mod common;

use common::*;
use growthfit::distributions::ModelSpec;
use growthfit::estimation::{fit_mle, FitOptions};
use growthfit::selection::{aic, bic, hqc, rank_models, CriteriaRow, Criterion, RankingTable};

#[test]
fn criteria_reproduce_reference_rows() {
    for (name, family, n, ll, a, b, h) in reference_criteria() {
        let k = ModelSpec::from_label(family).unwrap().n_free_params();
        let (ga, gb, gh) = (aic(k, ll), bic(k, n, ll).unwrap(), hqc(k, n, ll).unwrap());
        assert!((ga - a).abs() <= 2.0, "{name} {family} aic {ga} vs {a}");
        assert!((gb - b).abs() <= 2.0, "{name} {family} bic {gb} vs {b}");
        assert!((gh - h).abs() <= 2.0, "{name} {family} hqc {gh} vs {h}");
    }
}

#[test]
fn criteria_formulas_are_exact() {
    let row = CriteriaRow::new("m", 7, 12_309, 1234.5, true).unwrap();
    assert_eq!(row.aic, 14.0 - 2469.0);
    assert_eq!(row.bic, 7.0 * (12_309f64).ln() - 2469.0);
    assert_eq!(row.hqc, 14.0 * (12_309f64).ln().ln() - 2469.0);
}

fn rows(lls: &[(&str, usize, f64)], n: usize) -> Vec<CriteriaRow> {
    lls.iter().map(|&(l, k, ll)| CriteriaRow::new(l, k, n, ll, true).unwrap()).collect()
}

#[test]
fn shifting_log_likelihoods_keeps_winners() {
    let base = [("normal", 2, 100.0), ("student_t", 3, 104.0), ("2st12", 5, 107.5), ("3st", 8, 109.0)];
    for n in [50, 2987, 36_643] {
        let t0 = RankingTable::from_rows(rows(&base, n)).unwrap();
        for c in [-1e4, -3.5, 0.25, 777.0] {
            let shifted: Vec<_> = base.iter().map(|&(l, k, ll)| (l, k, ll + c)).collect();
            let t1 = RankingTable::from_rows(rows(&shifted, n)).unwrap();
            for crit in Criterion::ALL {
                assert_eq!(t0.winner(crit), t1.winner(crit));
            }
            for (r0, r1) in t0.rows.iter().zip(&t1.rows) {
                for crit in Criterion::ALL {
                    assert!((crit.of(r1) - crit.of(r0) + 2.0 * c).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn criteria_decrease_in_log_likelihood() {
    for k in [1, 3, 8] {
        for w in [-100.0, 0.0, 0.5, 1e4].windows(2) {
            assert!(aic(k, w[1]) < aic(k, w[0]));
            assert!(bic(k, 3000, w[1]).unwrap() < bic(k, 3000, w[0]).unwrap());
            assert!(hqc(k, 3000, w[1]).unwrap() < hqc(k, 3000, w[0]).unwrap());
        }
    }
}

#[test]
fn penalty_ordering_at_census_sample_sizes() {
    for n in [2987usize, 3088, 3291, 8074, 8081, 12_309, 19_048, 24_685, 30_201, 36_643] {
        let ln = (n as f64).ln();
        assert!(ln > 2.0 * ln.ln() && 2.0 * ln.ln() > 2.0);
        let (a, b, h) = (aic(4, 0.0), bic(4, n, 0.0).unwrap(), hqc(4, n, 0.0).unwrap());
        assert!(b > h && h > a, "n = {n}");
    }
    for n in (5504..200_000).step_by(997) {
        let ln = (n as f64).ln();
        assert!(ln > 2.0 * ln.ln());
    }
}

#[test]
fn ranking_ignores_input_order() {
    let base = rows(&[("a", 2, 10.0), ("b", 3, 12.0), ("c", 5, 12.5), ("d", 3, 12.0)], 1000);
    let reference = RankingTable::from_rows(base.clone()).unwrap();
    let mut perm = base.clone();
    for shift in 1..4 {
        perm.rotate_left(1);
        let mut rev = perm.clone();
        rev.reverse();
        assert_eq!(RankingTable::from_rows(perm.clone()).unwrap(), reference, "rotation {shift}");
        assert_eq!(RankingTable::from_rows(rev).unwrap(), reference);
    }
    assert!(reference.winner_aic.is_tie());
}

#[test]
fn student_t_beats_normal_on_heavy_tailed_data() {
    let sample = draw(&france_t(), 36_643, 8);
    let fits: Vec<_> = [ModelSpec::Normal, ModelSpec::StudentT]
        .iter()
        .map(|s| fit_mle(s, &sample, &FitOptions::with_seed(3)).unwrap())
        .collect();
    let table = rank_models(&fits).unwrap();
    for c in Criterion::ALL {
        assert!(table.winner(c).is("student_t"), "{}", table);
    }
    let mut reversed = fits.clone();
    reversed.reverse();
    assert_eq!(rank_models(&reversed).unwrap(), table);
}
