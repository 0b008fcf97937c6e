use std::path::{Path, PathBuf};
use std::process::Command;

use spectrum_price::run;

fn dataset(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("datasets")
        .join(name)
        .display()
        .to_string()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Runs the CLI in-process, returning (exit code, stdout, stderr).
fn specprice(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("specprice").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn floor_golden() {
    let (code, out, _) = specprice(&["floor", "--scenario", &dataset("europe-2001.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("floor_europe.csv"));
}

#[test]
fn breakdown_golden() {
    let (code, out, _) = specprice(&["breakdown", "--scenario", &dataset("europe-2001.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("breakdown_europe.csv"));
}

#[test]
fn compare_golden_has_row_per_multiplier_and_summary() {
    let (code, out, _) = specprice(&[
        "compare",
        "--scenario",
        &dataset("europe-2001-base.json"),
        "--alt",
        &dataset("europe-2001.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("compare_europe.csv"));
    let lines: Vec<&str> = out.lines().collect();
    // header + 19 multipliers (0.2..=2.0 step 0.1) + mean
    assert_eq!(lines.len(), 21);
    assert!(lines[20].starts_with("mean,"));
}

#[test]
fn sweep_and_capacity_golden() {
    let (code, out, _) = specprice(&[
        "sweep",
        "--scenario",
        &dataset("toy.json"),
        "--param",
        "unit_costs.opex_per_subscriber_per_year",
        "--outputs",
        "floor,ceiling,break_even,breakdown",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("sweep_toy_opex.csv"));

    let (code, out, _) = specprice(&["capacity", "--scenario", &dataset("toy.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("capacity_toy.csv"));
}

#[test]
fn ceiling_and_breakeven_on_toy() {
    let (code, out, _) = specprice(&["ceiling", "--scenario", &dataset("toy.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("scenario,kind,usd_per_mbyte,q_weighted\ntoy,ceiling,"));

    let (code, out, _) = specprice(&[
        "breakeven",
        "--scenario",
        &dataset("toy.json"),
        "--range",
        "0.01:10",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().ends_with(",true"));
}

#[test]
fn mno_override_inline_changes_ceiling() {
    let toy = dataset("toy.json");
    let (_, before, _) = specprice(&["ceiling", "--scenario", &toy]);
    let (code, after, _) = specprice(&[
        "ceiling",
        "--scenario",
        &toy,
        "--mno",
        r#"{"retail_price_voice_per_mbyte": 2, "retail_price_data_per_mbyte": 2,
            "cost_per_subscriber_per_year": 0, "gross_margin": 0}"#,
    ]);
    assert_eq!(code, 0);
    assert_ne!(before, after);
    assert!(after.contains("toy,ceiling,2,"));
}

#[test]
fn validation_errors_exit_1() {
    let (code, _, err) = specprice(&["floor", "--scenario", "missing.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("missing.json"));

    let (code, _, err) = specprice(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"));

    let (code, _, _) = specprice(&["floor", "--scenario", &dataset("toy.json"), "--bogus"]);
    assert_eq!(code, 1);

    let (code, _, err) = specprice(&[
        "sweep",
        "--scenario",
        &dataset("toy.json"),
        "--param",
        "finance.nope",
        "--grid",
        "1,2",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("finance.nope"));

    let (code, _, _) = specprice(&[
        "floor",
        "--scenario",
        &dataset("toy.json"),
        "--format",
        "xml",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn model_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dataset("toy.json")).unwrap()).unwrap();
    v["demand"]["voice_mbytes"] = serde_json::json!(vec![0.0; 10]);
    v["demand"]["data_mbytes"] = serde_json::json!(vec![0.0; 10]);
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, v.to_string()).unwrap();
    let (code, _, err) = specprice(&["floor", "--scenario", zero.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("discounted traffic is zero"));

    // Retail price below any floor: no crossing.
    let (code, _, err) = specprice(&[
        "breakeven",
        "--scenario",
        &dataset("toy.json"),
        "--mno",
        r#"{"retail_price_voice_per_mbyte": 0.01, "retail_price_data_per_mbyte": 0.01,
            "cost_per_subscriber_per_year": 0, "gross_margin": 0}"#,
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("no break-even"));
}

#[test]
fn out_flag_writes_file_and_nothing_else() {
    let dir = tempfile::tempdir().unwrap();
    let target: PathBuf = dir.path().join("floor.csv");
    let (code, out, _) = specprice(&[
        "floor",
        "--scenario",
        &dataset("europe-2001.json"),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        golden("floor_europe.csv")
    );

    let (_, out, _) = specprice(&[
        "floor",
        "--scenario",
        &dataset("europe-2001.json"),
        "--out",
        "-",
    ]);
    assert_eq!(out, golden("floor_europe.csv"));
}

#[test]
fn binary_runs_without_writing_files() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_specprice");
    let run_once = || {
        Command::new(bin)
            .current_dir(dir.path())
            .args(["breakeven", "--scenario", &dataset("europe-2001.json")])
            .output()
            .unwrap()
    };
    let first = run_once();
    let second = run_once();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let missing = Command::new(bin)
        .args(["floor", "--scenario", "missing.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = specprice(&["--help"]);
    assert_eq!(code, 0);
    for sub in [
        "floor",
        "ceiling",
        "breakeven",
        "breakdown",
        "sweep",
        "compare",
        "capacity",
    ] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
}
