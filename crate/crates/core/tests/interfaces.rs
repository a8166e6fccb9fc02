use std::path::Path;

use ris_sense::cli::{run, EXIT_CONFIG, EXIT_OK};
use ris_sense::detector::{detection_threshold, SensingConfig};
use ris_sense::output::{
    metadata_path, sweep_header, GAIN_PDF_HEADER, PD_CURVE_HEADER, PLAN_HEADER, VALIDATION_HEADER,
};
use ris_sense::scenario::{scenario_from_metadata, ScenarioFile};

const SCENARIOS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");

fn cli(dir: &Path, args: &[&str]) -> i32 {
    let out = dir.join("out.csv");
    let mut full = vec!["ris-sense".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.extend(["--out".to_string(), out.display().to_string()]);
    run(full)
}

fn header(text: &str) -> &str {
    text.lines().next().unwrap()
}

#[test]
fn table_headers_are_stable() {
    assert_eq!(
        PD_CURVE_HEADER.join(","),
        "N,M,gamma,pd_analytical,pd_empirical,ci_lo,ci_hi,pfa_empirical,pfa_ci_lo,pfa_ci_hi,status"
    );
    assert_eq!(
        PLAN_HEADER.join(","),
        "c,n,gamma,m_inf,g0,m_pd,target_pd,m_target,status"
    );
    assert_eq!(
        GAIN_PDF_HEADER.join(","),
        "quantity,bin_lo,bin_hi,bin_center,empirical_density,analytical_density"
    );
    assert_eq!(VALIDATION_HEADER.join(","), "criterion,title,result,detail");
    assert_eq!(
        sweep_header(&["kappa", "elements"]).join(","),
        "cell,kappa,elements,N,n,M,case,gamma,pfa_analytical,pd_analytical,pd_empirical,\
         pd_ci_lo,pd_ci_hi,pfa_empirical,pfa_ci_lo,pfa_ci_hi,m_inf,g0,m_pd,status"
    );
}

#[test]
fn shipped_scenarios_round_trip() {
    for entry in std::fs::read_dir(SCENARIOS).unwrap() {
        let path = entry.unwrap().path();
        let file = ScenarioFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(
            ScenarioFile::parse(&file.to_toml()).unwrap(),
            file,
            "{}",
            path.display()
        );
        let resolved = file.resolve(9).unwrap();
        let echo = resolved.echo();
        assert_eq!(
            echo.resolve(123).unwrap().echo(),
            echo,
            "{}",
            path.display()
        );
    }
}

#[test]
fn missing_seed_and_unknown_keys_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(dir.path(), &["plan"]), EXIT_CONFIG);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "schema_version = 1\n[sensing]\nantenas = 4\n").unwrap();
    assert_eq!(
        cli(
            dir.path(),
            &["plan", "--seed", "1", "--config", bad.to_str().unwrap()]
        ),
        EXIT_CONFIG
    );
    std::fs::write(&bad, "schema_version = 7\n").unwrap();
    assert_eq!(
        cli(
            dir.path(),
            &["plan", "--seed", "1", "--config", bad.to_str().unwrap()]
        ),
        EXIT_CONFIG
    );
    assert_eq!(cli(dir.path(), &["sweep", "--seed", "1"]), EXIT_CONFIG);
    assert_eq!(
        cli(dir.path(), &["validate", "--seed", "1", "--only", "42"]),
        EXIT_CONFIG
    );
}

#[test]
fn flags_override_the_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    std::fs::write(
        &cfg,
        "schema_version = 1\n[sensing]\nantennas = 32\nalpha = 0.05\n[channel]\nkappa = 5.0\n\
         [experiment]\nc_grid = [0.02]\n",
    )
    .unwrap();
    let code = cli(
        dir.path(),
        &[
            "plan",
            "--seed",
            "4",
            "--config",
            cfg.to_str().unwrap(),
            "--alpha",
            "0.2",
        ],
    );
    assert_eq!(code, EXIT_OK);
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(header(&csv), PLAN_HEADER.join(","));
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let gamma: f64 = row[2].parse().unwrap();
    let expected = detection_threshold(&SensingConfig::new(32, 0.02, 0.2).unwrap()).unwrap();
    assert_eq!(gamma, expected);

    let meta = std::fs::read_to_string(metadata_path(&dir.path().join("out.csv"))).unwrap();
    assert!(meta.contains("seed=4"));
    let echoed = scenario_from_metadata(&meta).unwrap().resolve(0).unwrap();
    assert_eq!(echoed.sensing.alpha, 0.2);
    assert_eq!(echoed.sensing.antennas, 32);
}

#[test]
fn sweep_and_gain_pdf_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    std::fs::write(
        &cfg,
        "schema_version = 1\n[sensing]\nantennas = 16\nc = 0.05\n[channel]\nkappa = 3.0\nelements = 8\n\
         [experiment]\ntrials = 50\ndraws = 2000\nbins = 10\n\
         [[experiment.axes]]\nparam = \"elements\"\nvalues = [0, 8]\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(
        cli(dir.path(), &["sweep", "--seed", "2", "--config", c]),
        EXIT_OK
    );
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(header(&csv), sweep_header(&["elements"]).join(","));
    assert_eq!(csv.lines().count(), 3);

    assert_eq!(
        cli(dir.path(), &["gain-pdf", "--seed", "2", "--config", c]),
        EXIT_OK
    );
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(header(&csv), GAIN_PDF_HEADER.join(","));
    assert!(csv.lines().count() > 10);
}
