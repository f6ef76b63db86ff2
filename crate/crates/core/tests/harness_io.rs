use hillpath::harness::{self, report, Format, SweepConfig, SweepResult, SweepRow, CSV_COLUMNS};
use proptest::prelude::*;

fn config(trials: u64, grid: Vec<f64>) -> SweepConfig {
    SweepConfig {
        n: 16,
        k: 4,
        path_len: Some(20),
        a: None,
        c_grid: grid,
        trials_per_c: trials,
        master_seed: 99,
        budget: None,
        output_path: None,
        threads: Some(2),
    }
}

#[test]
fn csv_has_one_row_per_grid_point() {
    let result = harness::sweep(&config(20, vec![3.0, 1.5, 2.0, 2.0])).unwrap();
    let csv = String::from_utf8(report(&result, Format::Csv).unwrap()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_COLUMNS.join(","));
    assert_eq!(lines.len(), 4);
    let cs: Vec<f64> = result.rows.iter().map(|r| r.c).collect();
    assert_eq!(cs, [1.5, 2.0, 3.0]);
    assert!(result.rows.iter().all(|r| r.ratio.unwrap() > 0.0));
    let best = result
        .rows
        .iter()
        .min_by(|a, b| a.mean_t.unwrap().total_cmp(&b.mean_t.unwrap()))
        .unwrap();
    assert_eq!(result.empirical_c_star, Some(best.c));
}

#[test]
fn single_trial_leaves_stderr_undefined() {
    let result = harness::sweep(&config(1, vec![2.0])).unwrap();
    assert_eq!(result.rows[0].stderr_t, None);
    let csv = String::from_utf8(report(&result, Format::Csv).unwrap()).unwrap();
    let fields: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[3], "");
}

#[test]
fn empty_result_is_header_only() {
    let result = SweepResult {
        n: 16,
        k: 4,
        path_len: 20,
        a_eff: 20.0 / 4096.0,
        model_c_star: 3.0,
        rows: vec![],
        empirical_c_star: None,
    };
    let csv = report(&result, Format::Csv).unwrap();
    assert_eq!(
        String::from_utf8(csv).unwrap(),
        CSV_COLUMNS.join(",") + "\n"
    );
}

#[test]
fn parallelism_does_not_change_output() {
    let mut cfg = config(30, vec![1.5, 2.5]);
    cfg.threads = Some(1);
    let one = report(&harness::sweep(&cfg).unwrap(), Format::Csv).unwrap();
    cfg.threads = Some(4);
    let four = report(&harness::sweep(&cfg).unwrap(), Format::Csv).unwrap();
    assert_eq!(one, four);
}

#[test]
fn reports_are_written_next_to_each_other() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(5, vec![2.0]);
    cfg.output_path = Some(dir.path().join("nested/out.csv"));
    let result = harness::sweep(&cfg).unwrap();
    let csv = std::fs::read(dir.path().join("nested/out.csv")).unwrap();
    assert_eq!(csv, report(&result, Format::Csv).unwrap());
    let json = std::fs::read_to_string(dir.path().join("nested/out.json")).unwrap();
    assert_eq!(serde_json::from_str::<SweepResult>(&json).unwrap(), result);
}

#[test]
fn write_failure_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let mut cfg = config(2, vec![2.0]);
    cfg.output_path = Some(blocker.join("out.csv"));
    let err = harness::sweep(&cfg).unwrap_err().to_string();
    assert!(err.contains("file"), "{err}");
}

#[test]
fn config_validation() {
    assert!(SweepConfig::from_json(
        r#"{"n":16,"k":4,"L":20,"c_grid":[2.0],"trials_per_c":3,"master_seed":1}"#
    )
    .is_ok());
    assert!(SweepConfig::from_json(
        r#"{"n":16,"k":4,"L":20,"c_grid":[2.0],"trials_per_c":3,"master_seed":1,"extra":0}"#
    )
    .is_err());
    for bad in [
        config(0, vec![2.0]),
        config(3, vec![0.0]),
        config(3, vec![16.0]),
    ] {
        assert!(harness::sweep(&bad).is_err());
    }
    let mut big = config(3, vec![2.0]);
    big.path_len = Some(10_000);
    assert!(matches!(
        harness::sweep(&big),
        Err(hillpath::Error::Capacity { .. })
    ));
}

#[test]
fn runtime_splits_into_path_and_jump_phases() {
    let cfg = SweepConfig {
        n: 36,
        k: 4,
        path_len: Some(150),
        a: None,
        c_grid: vec![3.5],
        trials_per_c: 40,
        master_seed: 7,
        budget: None,
        output_path: None,
        threads: None,
    };
    let row = &harness::sweep(&cfg).unwrap().rows[0];
    let t = row.mean_t.unwrap();
    let rest = t - row.mean_path_phase.unwrap() - row.mean_jump_wait.unwrap();
    assert!(rest >= 0.0 && rest <= 0.05 * t, "{rest} of {t}");
}

fn finite() -> impl Strategy<Value = f64> {
    -1e12f64..1e12
}

fn row() -> impl Strategy<Value = SweepRow> {
    (
        (
            0.01f64..10.0,
            1u64..1000,
            0u64..10,
            proptest::option::of(finite()),
            proptest::option::of(finite()),
        ),
        (
            proptest::option::of(finite()),
            proptest::option::of(finite()),
            0u64..10,
            finite(),
            proptest::option::of(finite()),
        ),
    )
        .prop_map(
            |((c, trials, truncated, mean_t, stderr_t), (path, jump, early, predicted, ratio))| {
                SweepRow {
                    c,
                    trials,
                    truncated,
                    mean_t,
                    stderr_t,
                    mean_path_phase: path,
                    mean_jump_wait: jump,
                    early_jumps: early,
                    predicted_t: predicted,
                    ratio,
                }
            },
        )
}

proptest! {
    #[test]
    fn json_round_trip(rows in proptest::collection::vec(row(), 0..6), a in 1e-6f64..10.0, c_star in proptest::option::of(finite())) {
        let result = SweepResult {
            n: 36,
            k: 4,
            path_len: 150,
            a_eff: a,
            model_c_star: 3.6,
            rows,
            empirical_c_star: c_star,
        };
        let bytes = report(&result, Format::Json).unwrap();
        let back: SweepResult = serde_json::from_slice(&bytes).unwrap();
        prop_assert_eq!(back, result);
    }
}
