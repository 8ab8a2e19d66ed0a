use std::io::Write;

use growthfit::samples::{compute_log_growth, describe, read_panel, read_rates, write_rates, GrowthSample, PopulationPair};
use growthfit::Error;

#[test]
fn log_growth_recovers_population_ratio() {
    let pairs: Vec<PopulationPair> = (1..200)
        .map(|i| {
            let start = 37.0 * i as f64 + 0.5;
            let end = start * (1.0 + 0.013 * ((i % 17) as f64 - 8.0));
            PopulationPair::new(format!("u{i}"), start, end).unwrap()
        })
        .collect();
    let out = compute_log_growth(&pairs, "synthetic").unwrap();
    assert!(out.report.rejected.is_empty());
    for (p, g) in pairs.iter().zip(out.sample.values()) {
        let ratio = p.pop_end / p.pop_start;
        assert!((g.exp() - ratio).abs() / ratio < 1e-12);
    }
}

#[test]
fn panel_file_with_bad_rows() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "id,pop_start,pop_end").unwrap();
    writeln!(file, "a,100,100").unwrap();
    writeln!(file, "b,0,50").unwrap();
    writeln!(file, "c,7.38905609893065,20.085536923187668").unwrap();
    writeln!(file, "d,abc,3").unwrap();
    writeln!(file, "e,40,-2").unwrap();
    let out = read_panel(std::fs::File::open(file.path()).unwrap(), "panel").unwrap();
    assert_eq!(out.sample.values().len(), 2);
    assert_eq!(out.report.accepted, 2);
    assert_eq!(out.report.rejected.len(), 3);
    let stats = describe(&out.sample).unwrap();
    assert_eq!(stats.n_obs, 2);
    assert!((stats.mean - 0.5).abs() < 1e-12);
    assert_eq!(stats.min, 0.0);
    assert!((stats.max - 1.0).abs() < 1e-12);
}

#[test]
fn panel_with_no_valid_rows_fails() {
    let data = "id,pop_start,pop_end\na,0,1\nb,-1,3\n";
    assert!(matches!(read_panel(data.as_bytes(), "bad"), Err(Error::Ingestion(_))));
}

#[test]
fn rates_write_read_round_trip_is_exact() {
    let values = vec![0.1, -0.25, 1e-17, 2.692, -2.06, 0.1 + 0.2];
    let sample = GrowthSample::new(values.clone(), "rt").unwrap();
    let mut buf = Vec::new();
    write_rates(&sample, &mut buf).unwrap();
    let back = read_rates(buf.as_slice(), "rt").unwrap();
    assert_eq!(back.sample.values(), values.as_slice());
}

#[test]
fn describe_is_stable_under_self_concatenation() {
    let values: Vec<f64> = (0..101).map(|i| ((i * 37) % 101) as f64 / 50.0 - 1.0).collect();
    let once = describe(&GrowthSample::new(values.clone(), "x").unwrap()).unwrap();
    let twice = describe(&GrowthSample::new([values.clone(), values].concat(), "x").unwrap()).unwrap();
    assert!((once.mean - twice.mean).abs() < 1e-14);
    assert_eq!(once.min, twice.min);
    assert_eq!(once.max, twice.max);
    assert_eq!(twice.n_obs, 2 * once.n_obs);
}

#[test]
fn describe_rejects_empty_and_handles_constant() {
    let empty = GrowthSample::new(vec![], "e").unwrap();
    assert!(matches!(describe(&empty), Err(Error::EmptySample)));
    let s = describe(&GrowthSample::new(vec![0.3; 3], "c").unwrap()).unwrap();
    assert_eq!(s.sd, 0.0);
    assert!(s.min <= s.mean && s.mean <= s.max);
}
