use std::path::PathBuf;

use lindblad_pdp::two_band::{rates, SamplerConvention, TwoBandParams};
use lindblad_pdp_cli::config::{parse_config, ConfigError, Coupling, Overrides, RunConfig};

fn error(doc: &str) -> ConfigError {
    parse_config(doc).unwrap_err()
}

#[test]
fn empty_document_needs_lambda() {
    let e = error("{}");
    assert_eq!(e.to_string(), "model.lambda missing");
    assert_eq!(e.path(), "model.lambda");
}

#[test]
fn lambda_alone_gives_weak_defaults() {
    let cfg = parse_config(r#"{"model": {"lambda": 0.001}}"#).unwrap();
    assert_eq!(cfg.model.delta_e, 1.0);
    assert_eq!(cfg.model.delta_eps, 0.31);
    assert_eq!((cfg.model.n1, cfg.model.n2), (200, 200));
    assert_eq!(cfg.run.coupling, Coupling::Weak);
    assert_eq!(cfg.run.convention, SamplerConvention::HazardConsistent);
    assert_eq!(cfg.run.trajectories, 5000);
    assert_eq!(cfg.run.n_points, 200);
    assert_eq!(cfg.run.realizations, 1);
    let gamma = rates(&TwoBandParams::reference(0.001, 0)).total();
    assert_eq!(cfg.run.t_max, 6.0 / gamma);
    let grid = cfg.grid();
    assert_eq!(grid.len(), 200);
    assert_eq!((grid[0], grid[199]), (0.0, cfg.run.t_max));
}

#[test]
fn strong_default_horizon() {
    let cfg =
        parse_config(r#"{"model": {"lambda": 0.01}, "run": {"coupling": "strong"}}"#).unwrap();
    assert_eq!(cfg.run.t_max, 60.0 / 0.31);
}

#[test]
fn range_errors_name_the_key() {
    for (doc, path) in [
        (r#"{"model": {"lambda": 0.001, "n1": 0}}"#, "model.n1"),
        (r#"{"model": {"lambda": 0.001, "n2": 0}}"#, "model.n2"),
        (r#"{"model": {"lambda": -1}}"#, "model.lambda"),
        (
            r#"{"model": {"lambda": 0.001, "delta_eps": 0}}"#,
            "model.delta_eps",
        ),
        (
            r#"{"model": {"lambda": 0.001}, "run": {"trajectories": 0}}"#,
            "run.trajectories",
        ),
        (
            r#"{"model": {"lambda": 0.001}, "run": {"n_points": 1}}"#,
            "run.n_points",
        ),
        (
            r#"{"model": {"lambda": 0.001}, "run": {"t_max": -2}}"#,
            "run.t_max",
        ),
        (
            r#"{"model": {"lambda": 0.001}, "run": {"realizations": 0}}"#,
            "run.realizations",
        ),
        (r#"{"model": {"lambda": 0}}"#, "run.t_max"),
        (
            r#"{"model": {"lambda": 0.001}, "output": {"path": ""}}"#,
            "output.path",
        ),
    ] {
        let e = error(doc);
        assert_eq!(e.path(), path, "{doc}: {e}");
        assert!(e.to_string().starts_with(path));
    }
}

#[test]
fn unknown_keys_are_rejected_with_their_path() {
    for (doc, path) in [
        (r#"{"model": {"lambda": 0.001, "gamma": 1}}"#, "model.gamma"),
        (
            r#"{"model": {"lambda": 0.001}, "run": {"threads": 4}}"#,
            "run.threads",
        ),
        (
            r#"{"model": {"lambda": 0.001}, "output": {"dir": "x"}}"#,
            "output.dir",
        ),
        (r#"{"model": {"lambda": 0.001}, "plot": {}}"#, "plot"),
    ] {
        let e = error(doc);
        assert_eq!(e.path(), path);
        assert!(e.to_string().contains("unknown field"), "{e}");
    }
}

#[test]
fn malformed_documents() {
    assert_eq!(error(r#"{"model": {"lambda": 0.001}"#).path(), "config");
    assert_eq!(
        error(r#"{"model": {"lambda": 0.001}} trailing"#).path(),
        "config"
    );
    assert_eq!(error("[]").path(), "config");
    assert_eq!(error(r#"{"run": {"seed": "one"}}"#).path(), "run.seed");
    assert_eq!(
        error(r#"{"model": {"lambda": 0.001}, "run": {"coupling": "medium"}}"#).path(),
        "run.coupling"
    );
}

#[test]
fn convention_spellings() {
    for (name, expected) in [
        ("printed", SamplerConvention::PrintedF),
        ("printed_f", SamplerConvention::PrintedF),
        ("hazard", SamplerConvention::HazardConsistent),
        ("hazard_consistent", SamplerConvention::HazardConsistent),
    ] {
        let cfg = parse_config(&format!(
            r#"{{"model": {{"lambda": 0.01}}, "run": {{"convention": "{name}"}}}}"#
        ))
        .unwrap();
        assert_eq!(cfg.run.convention, expected);
    }
}

#[test]
fn overrides_take_precedence() {
    let doc = r#"{"model": {"lambda": 0.01}, "run": {"coupling": "weak", "seed": 5, "convention": "hazard"},
                  "output": {"path": "a.csv"}}"#;
    let overrides = Overrides {
        seed: Some(9),
        coupling: Some(Coupling::Strong),
        convention: Some(SamplerConvention::PrintedF),
        out: Some(PathBuf::from("b.csv")),
        realizations: Some(3),
    };
    let cfg = RunConfig::from_document(doc, &overrides).unwrap();
    assert_eq!(cfg.run.seed, 9);
    assert_eq!(cfg.run.coupling, Coupling::Strong);
    // the default horizon follows the overridden regime
    assert_eq!(cfg.run.t_max, 60.0 / 0.31);
    assert_eq!(cfg.run.convention, SamplerConvention::PrintedF);
    assert_eq!(cfg.output.path, PathBuf::from("b.csv"));
    assert_eq!(cfg.run.realizations, 3);
    assert_eq!(cfg.params().seed, 9);
}

#[test]
fn resolved_config_reparses_to_itself() {
    let cfg =
        parse_config(r#"{"model": {"lambda": 0.0013, "delta_eps": 0.2900000000000001}}"#).unwrap();
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(parse_config(&text).unwrap(), cfg);
}
