use std::path::Path;
use std::process::{Command, Output};

use thermoq_cli::output::Table;

fn thermoq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermoq"))
        .args(args)
        .env_remove("THERMOQ_CONFIG")
        .output()
        .unwrap()
}

fn stdout_table(out: &Output) -> Table {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Table::from_csv("stdout", &String::from_utf8(out.stdout.clone()).unwrap()).unwrap()
}

#[test]
fn box_ep_vanishes_near_crossing() {
    let t = stdout_table(&thermoq(&["ep", "--system", "box", "--L", "3", "--T", "1.57"]));
    assert!(t.column("ep").unwrap()[0].abs() < 1e-3);
    assert_eq!(t.column("within_validity").unwrap()[0], 1.0);
}

#[test]
fn free_ep_vanishes_at_analytic_zero() {
    let t = stdout_table(&thermoq(&["ep", "--system", "free", "--T", "0.15915"]));
    assert!(t.column("ep").unwrap()[0].abs() < 1e-5);
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(thermoq(&["ep", "--system", "box", "--L", "3", "--T", "-1"]).status.code(), Some(2));
    assert_eq!(thermoq(&["figure", "9"]).status.code(), Some(2));
    assert_eq!(thermoq(&["ep", "--T", "1"]).status.code(), Some(2));
    assert_eq!(thermoq(&["ep", "--system", "box", "--T", "2,1"]).status.code(), Some(2));
    assert_eq!(thermoq(&["nonsense"]).status.code(), Some(2));
    assert_eq!(thermoq(&["--help"]).status.code(), Some(0));
}

#[test]
fn io_error_exits_3() {
    let out = thermoq(&[
        "ep", "--system", "box", "--T", "1", "--output", "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_row_for_box() {
    let t = stdout_table(&thermoq(&["spectrum", "--system", "box", "--L", "3", "--T", "2.0", "--modes", "1"]));
    assert_eq!(t.rows(), 1);
    assert!((t.column("e0").unwrap()[0] - 0.548311).abs() < 1e-6);
    assert!((t.column("ep").unwrap()[0] - 0.352219).abs() < 1e-6);
    assert!((t.column("eT").unwrap()[0] - 0.900531).abs() < 1e-6);
}

#[test]
fn box_wavefunction_last_sample() {
    let t = stdout_table(&thermoq(&[
        "wavefunction", "--system", "box", "--L", "3", "--n", "1", "--T", "2.0", "--samples", "400",
    ]));
    assert_eq!(t.rows(), 400);
    assert_eq!(*t.column("x").unwrap().last().unwrap(), 3.0);
    assert!((t.column("psi").unwrap().last().unwrap() + 0.6316485).abs() < 1e-6);
}

#[test]
fn validity_reports_free_crossing() {
    let t = stdout_table(&thermoq(&["validity", "--system", "free", "--t-range", "0.01:1"]));
    let crossing = t
        .column("kind")
        .unwrap()
        .iter()
        .position(|&k| k == 1.0)
        .unwrap();
    let want = 1.0 / (2.0 * std::f64::consts::PI);
    assert!((t.column("lo").unwrap()[crossing] - want).abs() < 1e-10);
}

#[test]
fn verify_exit_codes() {
    let ok = thermoq(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("0 failed"));

    let tight = thermoq(&["verify", "--tolerance", "1e-15"]);
    assert_eq!(tight.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&tight.stdout).contains("FAIL"));

    let d = thermoq(&["verify", "--check", "appendixD", "--alpha", "0.1"]);
    assert_eq!(d.status.code(), Some(0));
    let text = String::from_utf8_lossy(&d.stdout);
    assert!(text.contains("0.99225"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 1);

    assert_eq!(thermoq(&["verify", "--check", "bogus"]).status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# box run\nsystem = box\nL = 1\nT = 2.0\nmodes = 1\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["spectrum"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_thermoq"))
            .args(&args)
            .env("THERMOQ_CONFIG", &cfg)
            .output()
            .unwrap()
    };
    let from_file = stdout_table(&run(&[]));
    assert!((from_file.column("e0").unwrap()[0] - 0.5 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
    let overridden = stdout_table(&run(&["--L", "3"]));
    assert!((overridden.column("e0").unwrap()[0] - 0.548311355616075).abs() < 1e-12);
}

#[test]
fn json_output_roundtrips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ep.json");
    let p = path.to_str().unwrap();
    let args = [
        "ep", "--system", "oscillator", "--omega", "1", "--t-range", "0.1:3", "--samples", "37",
        "--format", "json", "--output", p,
    ];
    assert_eq!(thermoq(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&path).unwrap();
    let table: Table = serde_json::from_str(&first).unwrap();
    assert_eq!(table.rows(), 37);
    let reserialised = table.render(thermoq_cli::output::Format::Json).unwrap();
    assert_eq!(reserialised, first);

    // re-running yields an identical file
    assert_eq!(thermoq(&args).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn figure_writes_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let status = thermoq(&["figure", "2b", "--samples", "50", "--output", out]);
    assert_eq!(status.status.code(), Some(0));
    for l in 1..=5 {
        assert!(Path::new(out).join(format!("fig2b_L{l}.csv")).is_file());
    }

    let status = thermoq(&["figure", "7", "--omega", "0.1", "--T", "0.1,0.2", "--samples", "50", "--output", out]);
    assert_eq!(status.status.code(), Some(0));
    let fig7 = std::fs::read_dir(out)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("fig7_"))
        .count();
    assert_eq!(fig7, 12);

    assert_eq!(thermoq(&["figure", "7", "--output", out]).status.code(), Some(2));
}
