//! End-to-end checks of the command-line surface: exit codes, config
//! precedence, and byte-level determinism of the data sections.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lgtrap"))
}

fn tmpdir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("lgtrap-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Everything after the `# data:` marker.
fn data_section(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.split_once("# data:\n").expect("data marker").1.to_string()
}

#[test]
fn tc_sweep_values_and_determinism() {
    let dir = tmpdir("tc");
    for _ in 0..2 {
        let status = bin().args(["tc-sweep", "--out"]).arg(&dir).status().unwrap();
        assert!(status.success());
    }
    let data = data_section(&dir.join("tc_sweep.csv"));
    let rows: Vec<&str> = data.lines().skip(1).collect();
    assert_eq!(rows.len(), 18); // 3 configurations x 6 indices

    // the 3D endpoint temperatures land on the expected values
    let tc = |needle: &str| -> f64 {
        rows.iter()
            .find(|r| r.starts_with(needle))
            .unwrap()
            .split(',')
            .nth(4)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((tc("3D_LG,1,") - 361.8).abs() < 1.0);
    assert!((tc("3D_LG,6,") - 539.0).abs() < 1.0);

    // every configuration agrees at ell = 1
    let ell1: Vec<&str> = rows
        .iter()
        .filter(|r| r.split(',').nth(1) == Some("1"))
        .copied()
        .collect();
    let tail = |r: &str| r.splitn(3, ',').nth(2).unwrap().to_string();
    assert!(ell1.iter().all(|r| tail(r) == tail(ell1[0])));

    // re-run reproduced the data bytes (headers may differ in wall time)
    let dir2 = tmpdir("tc-rerun");
    let status = bin().args(["tc-sweep", "--out"]).arg(&dir2).status().unwrap();
    assert!(status.success());
    assert_eq!(data, data_section(&dir2.join("tc_sweep.csv")));

    // provenance sidecar exists and names the table source
    let prov: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("tc_sweep.provenance.json")).unwrap())
            .unwrap();
    assert_eq!(prov["coefficient_table"]["source_kind"], "shipped");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tmpdir("cfg");
    let cfg_path = dir.join("run.cfg");
    std::fs::write(
        &cfg_path,
        "n_atoms = 5e5\nell = 2,3\n\n[tc-sweep]\nell = 4\n",
    )
    .unwrap();

    // section overrides the global key
    let out = bin()
        .args(["tc-sweep", "--config"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("ell = 4"), "{stdout}");
    assert!(stdout.contains("n_atoms = 500000"), "{stdout}");
    let data = data_section(&dir.join("tc_sweep.csv"));
    assert_eq!(data.lines().skip(1).count(), 3); // 3 configurations x 1 index

    // command-line flag beats both
    let out = bin()
        .args(["tc-sweep", "--config"])
        .arg(&cfg_path)
        .args(["--ell", "5", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let data = data_section(&dir.join("tc_sweep.csv"));
    assert!(data.lines().nth(1).unwrap().contains(",5,"));
}

#[test]
fn species_check_and_validation_errors() {
    let dir = tmpdir("species");
    let out = bin().arg("species-check").output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("g "), "{stdout}");
    assert!(stdout.contains("recoil temp"));

    // a truncated species document fails with a missing-field message
    let bad = dir.join("bad.species");
    std::fs::write(&bad, "mass_kg = 1.4e-25\n").unwrap();
    let out = bin()
        .args(["species-check", "--species"])
        .arg(&bad)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("missing field"), "{stderr}");

    // a missing file is reported before any computation
    let out = bin()
        .args(["species-check", "--species", "/nonexistent.species"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn growth_and_levels_and_waists_outputs() {
    let dir = tmpdir("rows");
    let status = bin()
        .args(["growth", "--configurations", "3d_lg", "--ell", "6", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let curve = data_section(&dir.join("growth_3d_lg_ell6.dat"));
    let last = curve.lines().last().unwrap();
    let frac: f64 = last.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((frac - 0.1).abs() < 1e-3, "final fraction {frac}");
    let summary = data_section(&dir.join("growth_summary.csv"));
    assert!(summary.lines().nth(1).unwrap().contains("true,ok"));

    let status = bin().args(["levels", "--out"]).arg(&dir).status().unwrap();
    assert!(status.success());
    let levels = data_section(&dir.join("levels.csv"));
    assert_eq!(levels.lines().skip(1).count(), 4 * 8); // 4 orders x 8 levels

    let status = bin().args(["waists", "--out"]).arg(&dir).status().unwrap();
    assert!(status.success());
    let waists = data_section(&dir.join("waists.csv"));
    // every waist stays above 20 um at the default working point
    for row in waists.lines().skip(1) {
        let w0: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(w0 >= 20.0, "{row}");
    }
}

#[test]
fn scattering_row_order_and_determinism() {
    let dir = tmpdir("scatter");
    let run = || {
        let status = bin()
            .args(["scattering", "--ell", "2,1", "--out"])
            .arg(&dir)
            .status()
            .unwrap();
        assert!(status.success());
        data_section(&dir.join("scattering.csv"))
    };
    let first = run();
    // rows sorted by (ell, detuning) regardless of the input order
    let keys: Vec<(u32, f64)> = first
        .lines()
        .skip(1)
        .map(|r| {
            let mut parts = r.split(',');
            (
                parts.nth(1).unwrap().parse().unwrap(),
                parts.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(first, run());
}

#[test]
fn out_of_regime_rows_flag_and_fail() {
    // a tiny condensate volume pushes Tc0 up until q leaves the perturbative
    // window: the row is flagged, kept, and the process exits non-zero
    let dir = tmpdir("regime");
    let out = bin()
        .args(["tc-sweep", "--vc-um3", "0.05", "--ell", "1", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let data = data_section(&dir.join("tc_sweep.csv"));
    let flagged: Vec<&str> = data
        .lines()
        .skip(1)
        .filter(|r| r.ends_with("out_of_regime"))
        .collect();
    assert_eq!(flagged.len(), 3, "{data}");
}

#[test]
fn shapes_small_grid_end_to_end() {
    let dir = tmpdir("shapes");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "[shapes]\ngrid = 48x96\ntolerance = 1e-5\n").unwrap();
    let status = bin()
        .args(["shapes", "--configurations", "3d_lg", "--ell", "1", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());

    let density = std::fs::read_to_string(dir.join("shapes_3d_lg_ell1_density.dat")).unwrap();
    assert!(density.contains("n_rho 48 n_z 96"));
    let rows = data_section(&dir.join("shapes_3d_lg_ell1_density.dat"));
    assert_eq!(rows.lines().filter(|l| !l.starts_with('#')).count(), 48);

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("shapes_3d_lg_ell1_meta.json")).unwrap())
            .unwrap();
    assert!(meta["mu_c_J"].as_f64().unwrap() > 0.0);
    assert!(meta["residual"].as_f64().unwrap() <= 1e-5);

    let contours = data_section(&dir.join("shapes_3d_lg_ell1_contours.csv"));
    assert!(contours.lines().skip(1).count() > 10);
}
