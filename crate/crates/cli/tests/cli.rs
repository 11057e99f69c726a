use std::fs;
use std::path::Path;
use std::process::Command;

use lindblad_pdp_cli::config::{parse_config, Coupling, Overrides, RunConfig};
use lindblad_pdp_cli::output::Metadata;

const SMALL: &str = r#"{
  "model": {"lambda": 0.01, "n1": 30, "n2": 30},
  "run": {"trajectories": 300, "n_points": 40}
}"#;

fn simulate(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_simulate"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn compare_writes_schema_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = dir.path().join("strong.csv");
    let (code, stderr) = simulate(&[
        "compare",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--coupling",
        "strong",
        "--seed",
        "4",
    ]);
    assert_eq!(code, 0, "{stderr}");

    let (header, rows) = parse_csv(&fs::read_to_string(&out).unwrap());
    assert_eq!(
        header,
        [
            "t",
            "rho11_mc",
            "stderr_mc",
            "rho11_tcl2",
            "rho11_tcl2t",
            "rho11_exact"
        ]
    );
    assert_eq!(rows.len(), 40);
    for row in &rows {
        assert_eq!(row.len(), 6);
        assert!(row.iter().all(|v| v.is_finite()));
        for &v in [row[1], row[3], row[4], row[5]].iter() {
            assert!((-1e-9..=1.0 + 1e-9).contains(&v), "{v}");
        }
        assert!(row[2] >= 0.0);
    }

    let meta =
        Metadata::from_json(&fs::read_to_string(dir.path().join("strong.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta.subcommand, "compare");
    assert_eq!(meta.convention, "hazard_consistent");
    assert_eq!(meta.seeds.seed, 4);
    assert_eq!(meta.seeds.trajectory_streams, 300);
    assert_eq!(meta.seeds.exact_streams.len(), 1);
    assert!(meta.version.starts_with(env!("CARGO_PKG_VERSION")));
    assert_eq!(meta.columns, header);

    let overrides = Overrides {
        seed: Some(4),
        coupling: Some(Coupling::Strong),
        out: Some(out.clone()),
        ..Overrides::default()
    };
    let expected = RunConfig::from_document(SMALL, &overrides).unwrap();
    assert_eq!(meta.config, expected);
    // the recorded config is itself a valid configuration document
    assert_eq!(
        parse_config(&serde_json::to_string(&meta.config).unwrap()).unwrap(),
        expected
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let (code, stderr) = simulate(&["mc", "--config", &config, "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{stderr}");
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn seed_flag_changes_the_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let run = |seed: &str| {
        let out = dir.path().join(format!("{seed}.csv"));
        assert_eq!(
            simulate(&[
                "mc",
                "--config",
                &config,
                "--out",
                out.to_str().unwrap(),
                "--seed",
                seed
            ])
            .0,
            0
        );
        fs::read_to_string(out).unwrap()
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn subcommands_emit_their_columns() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    for (sub, columns) in [
        ("mc", vec!["t", "rho11_mc", "stderr_mc"]),
        ("tcl", vec!["t", "rho11_tcl2", "rho11_tcl2t"]),
        ("exact", vec!["t", "rho11_exact"]),
    ] {
        let out = dir.path().join(format!("{sub}.csv"));
        let (code, stderr) = simulate(&[
            sub,
            "--config",
            &config,
            "--out",
            out.to_str().unwrap(),
            "--convention",
            "printed",
        ]);
        assert_eq!(code, 0, "{stderr}");
        let (header, rows) = parse_csv(&fs::read_to_string(&out).unwrap());
        assert_eq!(header, columns);
        assert_eq!(rows.len(), 40);
        let meta = Metadata::from_json(
            &fs::read_to_string(dir.path().join(format!("{sub}.meta.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(meta.convention, "printed");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();

    let bad = write_config(dir.path(), r#"{"model": {"lambda": 0.001, "n1": 0}}"#);
    let (code, stderr) = simulate(&["tcl", "--config", &bad, "--out", out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("model.n1"), "{stderr}");

    let empty = write_config(dir.path(), "{}");
    let (code, stderr) = simulate(&["tcl", "--config", &empty, "--out", out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("model.lambda missing"), "{stderr}");

    assert_eq!(
        simulate(&["tcl", "--config", &empty, "--coupling", "medium"]).0,
        1
    );
    assert_eq!(simulate(&["render", "--config", &empty]).0, 1);

    let missing = dir.path().join("absent.json");
    assert_eq!(
        simulate(&["tcl", "--config", missing.to_str().unwrap()]).0,
        3
    );

    let good = write_config(dir.path(), SMALL);
    let unwritable = dir.path().join("no/such/dir/x.csv");
    assert_eq!(
        simulate(&[
            "tcl",
            "--config",
            &good,
            "--out",
            unwritable.to_str().unwrap()
        ])
        .0,
        3
    );
}

#[test]
fn numerical_failures_exit_with_two() {
    let e = lindblad_pdp_cli::error::CliError::Numerical(lindblad_pdp::Error::ZeroRateJump);
    assert_eq!(e.exit_code(), 2);
}
