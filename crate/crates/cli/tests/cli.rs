use std::process::{Command, Output};

fn fluxbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluxbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn same_seed_same_bytes() {
    let a = fluxbound(&["montecarlo", "--draws", "200", "--seed", "9"]);
    let b = fluxbound(&[
        "montecarlo",
        "--draws",
        "200",
        "--seed",
        "9",
        "--threads",
        "3",
    ]);
    let c = fluxbound(&["montecarlo", "--draws", "200", "--seed", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn headers_are_fixed() {
    let first_line = |args: &[&str]| {
        let out = fluxbound(args);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(
        first_line(&["montecarlo", "--draws", "1"]),
        "draw,flux_ratio_sq,s_tilde,pinsker_rhs,main_rhs,strengthened_rhs,epsilon,redraws"
    );
    assert_eq!(
        first_line(&["spinpair", "--t-steps", "2"]),
        "t,flux,flux_analytic,two_phi_sq,onsager,s_tilde"
    );
    assert_eq!(
        first_line(&["saturation", "--a-steps", "2"]),
        "a,tn_sq_over_4,B_of_s_tilde,abs_diff"
    );
}

#[test]
fn jsonl_keys_match_csv_headers() {
    let csv = fluxbound(&["montecarlo", "--draws", "5", "--policy", "redraw"]);
    let json = fluxbound(&[
        "montecarlo",
        "--draws",
        "5",
        "--policy",
        "redraw",
        "--format",
        "jsonl",
    ]);
    let csv = String::from_utf8(csv.stdout).unwrap();
    let headers: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let json = String::from_utf8(json.stdout).unwrap();
    assert_eq!(json.lines().count(), 5);
    for (i, line) in json.lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, headers);
        assert_eq!(v["draw"], i as u64);
    }
}

#[test]
fn spin_pair_starts_at_rest() {
    let out = String::from_utf8(fluxbound(&["spinpair", "--t-steps", "3"]).stdout).unwrap();
    let row: Vec<f64> = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!(row.iter().all(|&x| x == 0.0), "{row:?}");
}

#[test]
fn verify_passes_and_reports_every_check() {
    let out = fluxbound(&["verify", "--draws", "200"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let names: Vec<String> = rdr.records().map(|r| r.unwrap()[0].to_string()).collect();
    for name in [
        "main",
        "strengthened",
        "pinsker_symmetric",
        "qtur",
        "correlation",
        "thermal_flux_identity",
    ] {
        assert!(names.iter().any(|n| n == name), "missing {name}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(fluxbound(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        fluxbound(&["montecarlo", "--draws", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        fluxbound(&["spinpair", "--p", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        fluxbound(&["saturation", "--tolerance", "-1"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let out = fluxbound(&["saturation", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out.csv"));
    assert_eq!(fluxbound(&["--help"]).status.code(), Some(0));
}
