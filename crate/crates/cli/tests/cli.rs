use std::process::{Command, Output};

use proptest::prelude::*;

use qcoherent_cli::sweep::{Observable, ZConvention};
use qcoherent_cli::{
    read_csv, run_sweep, run_verify, write_csv, Suite, SweepSpec, VerificationReport,
};

fn qcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcoh"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_output_is_deterministic() {
    let args = [
        "sweep",
        "--observable",
        "squeeze",
        "--q",
        "1.1,1.3",
        "--points",
        "25",
        "--oracle",
    ];
    let a = qcoh(&args);
    let b = qcoh(&args);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_header_and_ordering() {
    let o = qcoh(&[
        "sweep",
        "--observable",
        "metric",
        "--q",
        "1.3,1.1",
        "--t-max",
        "1",
        "--points",
        "3",
    ]);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,t,value");
    assert_eq!(lines.len(), 7);
    let rows = read_csv(text.as_bytes()).unwrap();
    // q in the order given, t ascending within each q
    let qs: Vec<f64> = rows.iter().map(|r| r.q).collect();
    assert_eq!(qs, vec![1.3, 1.3, 1.3, 1.1, 1.1, 1.1]);
    assert_eq!(rows[0].t, 0.0);
    assert_eq!(rows[2].t, 1.0);
    assert_eq!(rows[0].value, 1.0);

    let o = qcoh(&[
        "sweep",
        "--observable",
        "metric",
        "--q",
        "1.2",
        "--points",
        "2",
        "--oracle",
    ]);
    assert!(stdout(&o).starts_with("q,t,value,oracle_value,oracle_delta\n"));
}

#[test]
fn cli_csv_round_trips_through_library() {
    let o = qcoh(&["sweep", "--observable", "weight", "--points", "11"]);
    let parsed = read_csv(o.stdout.as_slice()).unwrap();
    let direct = run_sweep(&SweepSpec {
        points: 11,
        ..SweepSpec::figure_defaults(Observable::Weight)
    })
    .unwrap();
    assert_eq!(parsed, direct);
}

#[test]
fn json_sweep() {
    let o = qcoh(&[
        "sweep",
        "--observable",
        "snr",
        "--q",
        "1.5",
        "--points",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["t"], 0.0);
    assert!(rows[0].get("oracle_value").is_none());
}

#[test]
fn svg_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mandel.svg");
    let o = qcoh(&[
        "sweep",
        "--observable",
        "mandel",
        "--svg",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn exit_status_contract() {
    let verify = qcoh(&["verify", "--suite", "oscillator", "--format", "json"]);
    assert_eq!(verify.status.code(), Some(0));
    let reports: Vec<VerificationReport> = serde_json::from_slice(&verify.stdout).unwrap();
    assert!(!reports.is_empty());
    for r in &reports {
        assert_eq!(r.passed, r.worst_residual <= r.tolerance);
    }

    assert_eq!(
        qcoh(&["sweep", "--observable", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qcoh(&[
            "sweep",
            "--observable",
            "weight",
            "--t-min",
            "3",
            "--t-max",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        qcoh(&["sweep", "--observable", "mandel", "--q", "0.9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qcoh(&[
            "sweep",
            "--observable",
            "squeeze",
            "--z-convention",
            "modulus-only"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        qcoh(&["sweep", "--observable", "mandel", "--t-min", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qcoh(&["query", "--observable", "nope", "--q", "2", "--t", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qcoh(&["query", "--observable", "mandel", "--q", "2", "--t", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_reports_match_library() {
    let o = qcoh(&["verify", "--suite", "qmath", "--format", "json"]);
    let from_cli: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).unwrap();
    let direct = run_verify(Suite::Qmath);
    assert_eq!(from_cli, direct);
}

#[test]
fn query_reports() {
    let o = qcoh(&[
        "query",
        "--observable",
        "spectrum",
        "--q",
        "2",
        "--n",
        "0",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 0.75);

    let o = qcoh(&[
        "query",
        "--observable",
        "squeeze",
        "--q",
        "1.2",
        "--z",
        "-0.5,0.3",
        "--oracle",
    ]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("tail_mass") && text.contains("oracle_delta"));
}

fn observable() -> impl Strategy<Value = Observable> {
    prop_oneof![
        Just(Observable::Weight),
        Just(Observable::Mandel),
        Just(Observable::Squeeze),
        Just(Observable::Snr),
        Just(Observable::Metric),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn csv_round_trip(
        obs in observable(),
        qs in proptest::collection::vec(1.01f64..3.0, 1..3),
        t_min in 0.01f64..1.0,
        width in 0.1f64..3.0,
        points in 2usize..12,
        oracle in any::<bool>(),
    ) {
        let spec = SweepSpec {
            observable: obs,
            q_list: qs,
            t_min,
            t_max: t_min + width,
            points,
            z_convention: ZConvention::RealSqrtT,
            oracle_dim: oracle.then_some(60),
            ..SweepSpec::figure_defaults(obs)
        };
        let rows = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, oracle, &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }
}
