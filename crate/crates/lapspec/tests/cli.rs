use std::path::Path;
use std::process::{Command, Output};

fn lapspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lapspec"))
        .args(args)
        .env_remove("LAPSPEC_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn spectrum_of_a_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.csv", "0.25,-0.25\n-0.5,0.5\n");
    let o = lapspec(&["spectrum", &m]);
    assert_eq!(code(&o), 0);
    let mut re: Vec<f64> = json(&o)
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["re"].as_f64().unwrap())
        .collect();
    re.sort_by(f64::total_cmp);
    assert!(re[0].abs() < 1e-14 && (re[1] - 0.75).abs() < 1e-14);

    let ragged = write(dir.path(), "r.csv", "1,2\n3\n");
    assert_eq!(code(&lapspec(&["spectrum", &ragged])), 2);
    assert_eq!(code(&lapspec(&["spectrum", "/nonexistent/m.csv"])), 2);
}

#[test]
fn verify_cycle_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = write(dir.path(), "c.tsv", "5 1\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 0 1\n");
    for extra in [&[][..], &["--exact"][..]] {
        let mut args = vec!["verify", tsv.as_str()];
        args.extend_from_slice(extra);
        let o = lapspec(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let r = json(&o);
        assert_eq!(r["pass"], true);
        let names: Vec<&str> = r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        assert!(names.contains(&"hamiltonian-extremal/modulus"));
    }
    let csv = write(dir.path(), "k.csv", "0.5,-0.5\n-0.5,0.5\n");
    assert_eq!(code(&lapspec(&["verify", &csv])), 0);
    let bad = write(dir.path(), "bad.csv", "0,1\n0,0\n");
    assert_eq!(code(&lapspec(&["verify", &bad])), 2);
    let malformed = write(dir.path(), "m.tsv", "3 1\n0 0 1\n");
    let o = lapspec(&["verify", &malformed]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn polygon_listing() {
    let o = lapspec(&["polygon", "--n", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    let h = v["vertices"][1][1].as_f64().unwrap();
    assert!((h - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-12);
    let text = lapspec(&["polygon", "--n", "4"]);
    assert_eq!(String::from_utf8_lossy(&text.stdout).lines().count(), 6);
    assert_eq!(code(&lapspec(&["polygon", "--n", "1"])), 2);
}

#[test]
fn witness_inside_and_outside() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let o = lapspec(&[
        "witness",
        "--n",
        "6",
        "--re",
        "0.4",
        "--im",
        "-0.15",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json(&o)["residual"].as_f64().unwrap() <= 1e-8);
    let spec = json(&lapspec(&["spectrum", csv.to_str().unwrap()]));
    let hit = spec
        .as_array()
        .unwrap()
        .iter()
        .any(|e| (e["re"].as_f64().unwrap() - 0.4).abs() < 1e-8 && (e["im"].as_f64().unwrap() + 0.15).abs() < 1e-8);
    assert!(hit);
    assert_eq!(
        code(&lapspec(&["witness", "--n", "6", "--re", "0.5", "--im", "0.4"])),
        1
    );
}

#[test]
fn figures_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["region", "--n", "7"],
        &["region", "--n", "7", "--samples", "20", "--seed", "3"],
        &["region", "--n", "5", "--coarse"],
        &["cycloid", "--n", "16"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let svg = dir.path().join(format!("f{i}.svg"));
        let mut all = args.to_vec();
        all.extend(["--svg", svg.to_str().unwrap()]);
        let o = lapspec(&all);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<svg") && text.contains("<path"));
    }
    let again = dir.path().join("again.svg");
    lapspec(&[
        "region",
        "--n",
        "7",
        "--samples",
        "20",
        "--seed",
        "3",
        "--svg",
        again.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read(dir.path().join("f1.svg")).unwrap(),
        std::fs::read(again).unwrap()
    );
    assert_eq!(
        code(&lapspec(&["region", "--n", "7", "--svg", "/nonexistent/dir/x.svg"])),
        2
    );
}

#[test]
fn conjecture_report_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = lapspec(&[
        "conjecture",
        "--n",
        "5",
        "--trials",
        "2000",
        "--seed",
        "9",
        "--density",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["violation_count"], 0);
    assert_eq!(report["eigenvalues_tested"], 10_000);
    assert_eq!(report["config"]["mode"], "sparse-digraph");

    let capped = Command::new(env!("CARGO_BIN_EXE_lapspec"))
        .args([
            "conjecture",
            "--n",
            "5",
            "--trials",
            "2000",
            "--seed",
            "9",
            "--density",
            "0.5",
            "--threads",
            "4",
        ])
        .env("LAPSPEC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 0);
    assert_eq!(capped.stdout, std::fs::read(&out).unwrap());
    assert!(String::from_utf8_lossy(&capped.stderr).contains("2 thread(s)"));

    let bad_env = Command::new(env!("CARGO_BIN_EXE_lapspec"))
        .args(["conjecture", "--n", "5", "--trials", "1", "--seed", "1"])
        .env("LAPSPEC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad_env), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&lapspec(&[])), 2);
    assert_eq!(code(&lapspec(&["conjecture", "--n", "5"])), 2);
    assert_eq!(
        code(&lapspec(&["conjecture", "--n", "5", "--trials", "0", "--seed", "1"])),
        2
    );
    assert_eq!(
        code(&lapspec(&[
            "conjecture",
            "--n",
            "5",
            "--trials",
            "3",
            "--seed",
            "1",
            "--density",
            "1.5"
        ])),
        2
    );
    assert_eq!(
        code(&lapspec(&[
            "region",
            "--n",
            "5",
            "--coarse",
            "--samples",
            "3",
            "--svg",
            "x.svg"
        ])),
        2
    );
}
