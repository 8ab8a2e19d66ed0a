use growthfit::diagnostics::{empirical_log_corank, empirical_log_rank};
use growthfit::distributions::{ModelParams, ModelSpec};
use growthfit::estimation::{from_unconstrained, nelder_mead, to_unconstrained, NelderMeadOptions};
use growthfit::samples::{describe, GrowthSample};
use growthfit::selection::{aic, bic, hqc, CriteriaRow, Criterion, RankingTable};
use proptest::prelude::*;

fn scale() -> impl Strategy<Value = f64> {
    (-4.0f64..1.0).prop_map(|e| 10f64.powf(e))
}

fn location() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

fn shape() -> impl Strategy<Value = f64> {
    0.4f64..4.0
}

fn any_params() -> impl Strategy<Value = ModelParams> {
    let family = |spec: ModelSpec, s: BoxedStrategy<Vec<f64>>| s.prop_map(move |v| ModelParams::from_vec(&spec, &v).unwrap());
    prop_oneof![
        family(ModelSpec::Normal, (location(), scale()).prop_map(|(m, s)| vec![m, s]).boxed()),
        family(ModelSpec::StudentT, (location(), scale(), 0.5f64..200.0).prop_map(|(m, s, n)| vec![m, s, n]).boxed()),
        family(
            ModelSpec::AdLn,
            (0.5f64..60.0, 0.5f64..60.0, location(), 0.005f64..0.5).prop_map(|(a, b, m, s)| vec![a, b, m, s]).boxed()
        ),
        family(
            ModelSpec::ASub,
            (scale(), scale(), shape(), shape(), location()).prop_map(|(al, ar, bl, br, m)| vec![al, ar, bl, br, m]).boxed()
        ),
        family(
            ModelSpec::two_st12(),
            (location(), scale(), location(), scale(), 0.01f64..0.99).prop_map(|(a, b, c, d, p)| vec![a, b, c, d, p]).boxed()
        ),
        family(
            ModelSpec::three_st(),
            (location(), scale(), location(), scale(), location(), scale(), 0.01f64..0.49, 0.01f64..0.49)
                .prop_map(|(a, b, c, d, e, f, p, q)| vec![a, b, c, d, e, f, p, q])
                .boxed()
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn transform_round_trip(p in any_params()) {
        let spec = p.spec();
        let y = to_unconstrained(&spec, &p).unwrap();
        let back = from_unconstrained(&spec, &y).unwrap();
        for (a, b) in p.to_vec().iter().zip(back.to_vec()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn any_unconstrained_vector_is_valid(y in prop::collection::vec(-30.0f64..30.0, 8)) {
        let p = from_unconstrained(&ModelSpec::three_st(), &y).unwrap();
        prop_assert!(p.validate().is_ok());
    }

    #[test]
    fn cdf_is_a_distribution_function(p in any_params(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let d = p.prepare().unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (flo, fhi) = (d.cdf(lo), d.cdf(hi));
        prop_assert!((0.0..=1.0).contains(&flo) && (0.0..=1.0).contains(&fhi));
        prop_assert!(flo <= fhi + 1e-12);
        prop_assert!((d.cdf(hi) + d.sf(hi) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_density_is_finite_near_the_bulk(p in any_params(), u in -1.0f64..1.0) {
        let (lo, hi) = p.window(5.0);
        let g = 0.5 * (lo + hi) + 0.5 * (hi - lo) * u;
        let v = p.log_pdf(g).unwrap();
        prop_assert!(v.is_finite() && v < 20.0);
    }

    #[test]
    fn criteria_shift_with_the_log_likelihood(
        lls in prop::collection::vec(-1e4f64..1e4, 1..6),
        ks in prop::collection::vec(1usize..9, 6),
        n in 3usize..100_000,
        c in -1e3f64..1e3,
    ) {
        let build = |shift: f64| -> Vec<CriteriaRow> {
            lls.iter().enumerate().map(|(i, &ll)| CriteriaRow::new(format!("m{i}"), ks[i], n, ll + shift, true).unwrap()).collect()
        };
        let t0 = RankingTable::from_rows(build(0.0)).unwrap();
        let t1 = RankingTable::from_rows(build(c)).unwrap();
        for crit in Criterion::ALL {
            // winners can only change when a tie sits at the edge of the tolerance
            let gap = {
                let mut v: Vec<f64> = t0.rows.iter().map(|r| crit.of(r)).collect();
                v.sort_by(f64::total_cmp);
                v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
            };
            if gap > 1e-6 {
                prop_assert_eq!(t0.winner(crit), t1.winner(crit));
            }
        }
        let k = ks[0];
        prop_assert!((aic(k, lls[0] + c) - aic(k, lls[0]) + 2.0 * c).abs() < 1e-9);
        prop_assert!((bic(k, n, lls[0] + c).unwrap() - bic(k, n, lls[0]).unwrap() + 2.0 * c).abs() < 1e-9);
        prop_assert!((hqc(k, n, lls[0] + c).unwrap() - hqc(k, n, lls[0]).unwrap() + 2.0 * c).abs() < 1e-9);
    }

    #[test]
    fn empirical_series_are_monotone(v in prop::collection::vec(-5.0f64..5.0, 2..300)) {
        let s = GrowthSample::new(v.clone(), "p").unwrap();
        let up = empirical_log_rank(&s).unwrap();
        let low = empirical_log_corank(&s).unwrap();
        prop_assert_eq!(up.points.len(), v.len());
        prop_assert!(up.points.windows(2).all(|w| w[0].1 >= w[1].1));
        prop_assert!(low.points.windows(2).all(|w| w[0].1 <= w[1].1));
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(up.points.last().unwrap(), &(max, 0.0));
    }

    #[test]
    fn describe_bounds(v in prop::collection::vec(-5.0f64..5.0, 1..300)) {
        let d = describe(&GrowthSample::new(v.clone(), "p").unwrap()).unwrap();
        prop_assert!(d.min <= d.mean + 1e-12 && d.mean <= d.max + 1e-12);
        prop_assert!(d.sd >= 0.0);
        prop_assert_eq!(d.n_obs, v.len());
    }

    #[test]
    fn nelder_mead_finds_quadratic_minima(
        center in prop::collection::vec(-5.0f64..5.0, 1..5),
        weights in prop::collection::vec(0.1f64..10.0, 5),
    ) {
        let f = |x: &[f64]| x.iter().zip(&center).zip(&weights).map(|((a, c), w)| w * (a - c).powi(2)).sum::<f64>();
        let opts = NelderMeadOptions { max_iters: 20_000, f_tol: 1e-14, x_tol: 1e-10 };
        let r = nelder_mead(f, &vec![0.0; center.len()], &opts);
        prop_assert!(r.converged);
        for (x, c) in r.x.iter().zip(&center) {
            prop_assert!((x - c).abs() < 1e-5, "{} vs {}", x, c);
        }
        prop_assert!(r.best_trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
