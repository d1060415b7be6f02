mod support;

use std::fs;

use support::{compare_file, golden_dir, manifest_dir, read_stl, stl_is_closed, telefold};
use telefold::pgm::encode_pgm;
use telefold_core::silhouette::GrayImage;

const COARSE: [&str; 4] = ["--angular-step", "30", "--contour-points", "64"];

#[test]
fn bend_prints_one_json_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = telefold(&["bend", "--s0", "100", "--s1", "120", "--r", "20"], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    // x = (s1² − s0²)/(4r); h from the shorter wall's triangle.
    assert_eq!(v["x"].as_f64().unwrap(), 55.0);
    assert!((v["h"].as_f64().unwrap() - (100f64 * 100.0 - 35.0 * 35.0).sqrt()).abs() < 1e-9);
    compare_file(&golden_dir().join("bend.json"), o.stdout.as_bytes()).unwrap();
}

#[test]
fn bend_ratio_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = telefold(&["bend", "--s0", "100", "--r", "20", "--h0", "50", "--ratios", "1,1.2"], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "ratio,x_mm,h_mm,theta_deg,axial_ratio");
    assert_eq!(lines[1], "1.000000,0.000000,97.979590,0.000000,1.959592");
    assert!(lines[2].starts_with("1.200000,55.000000,93.674970,30.41875"));
}

#[test]
fn generate_matches_golden_and_is_closed() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["generate", "--preset", "BAS", "--out", "bas.stl"];
    args.extend(COARSE);
    let o = telefold(&args, dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    let stl = fs::read(dir.path().join("bas.stl")).unwrap();
    let parsed = read_stl(&stl).unwrap();
    assert!(stl_is_closed(&parsed));
    assert_eq!(parsed.facets.len(), 12 * 64 * 2);
    let metrics = fs::read(dir.path().join("bas.json")).unwrap();
    let m: serde_json::Value = serde_json::from_slice(&metrics).unwrap();
    assert_eq!(m["diagnostics"]["triangle_count"].as_u64().unwrap() as usize, parsed.facets.len());
    compare_file(&golden_dir().join("generate_bas.stl"), &stl).unwrap();
    compare_file(&golden_dir().join("generate_bas.json"), &metrics).unwrap();

    // The shipped baseline file is the same design.
    let config = manifest_dir().join("presets/baseline.json");
    let mut args = vec!["generate", "--config", config.to_str().unwrap(), "--out", "cfg.stl"];
    args.extend(COARSE);
    assert_eq!(telefold(&args, dir.path()).code, 0);
    assert_eq!(fs::read(dir.path().join("cfg.stl")).unwrap(), stl);
}

#[test]
fn generate_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "generate",
        "--preset",
        "AMP-low",
        "--out",
        "a.stl",
        "--obj",
        "a.obj",
        "--dump-midline",
        "m.csv",
        "--dump-contour",
        "c.csv",
    ];
    args.extend(COARSE);
    let o = telefold(&args, dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    let midline = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert!(midline.starts_with("s,rho,z\n0.000000,32.000000,0.000000\n"));
    assert_eq!(midline.lines().count(), 1 + 3 * 64 + 1);
    let contour = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(contour.lines().count(), 1 + 64);
    let obj = fs::read_to_string(dir.path().join("a.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 12 * 64 * 2);
}

#[test]
fn sweep_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let spec = manifest_dir().join("presets/sweep_standard.json");
    let o = telefold(&["sweep", "--spec", spec.to_str().unwrap(), "--out", "run"], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    let results = fs::read(dir.path().join("run/results.csv")).unwrap();
    let sens = fs::read(dir.path().join("run/sensitivity.csv")).unwrap();
    let text = String::from_utf8(results.clone()).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().skip(1).all(|l| l.ends_with(',')), "no row carries an error");
    assert_eq!(String::from_utf8(sens.clone()).unwrap().lines().count(), 1 + 7 * 5);
    compare_file(&golden_dir().join("results.csv"), &results).unwrap();
    compare_file(&golden_dir().join("sensitivity.csv"), &sens).unwrap();
}

#[test]
fn silhouette_over_a_frame_directory() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    fs::create_dir(&frames).unwrap();
    for i in 0..4 {
        let mut img = GrayImage::filled(80, 160, 0).unwrap();
        img.fill_rect(20, 150 - (50 + 10 * i), 30 + 2 * i, 50 + 10 * i, 255);
        fs::write(frames.join(format!("f{i:03}.pgm")), encode_pgm(&img)).unwrap();
    }
    fs::write(frames.join("notes.txt"), "ignored").unwrap();
    let o = telefold(&["silhouette", "--frames", "frames", "--mm-per-px", "0.5", "--out", "s.csv"], dir.path());
    assert_eq!(o.code, 0, "{}", o.stderr);
    let csv = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "frame,h_px,w_px,dL_mm,dR_mm,theta_deg");
    assert_eq!(lines.len(), 5);
    assert!(lines[3].starts_with("f002.pgm,70,34,10.000000,2.000000,"));
    // Flat rectangle tops always have several highest pixels.
    assert!(o.stderr.contains("warning: silhouette_metrics: f000.pgm"));
}

#[test]
fn usage_errors_exit_2_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["bend", "--s0", "1", "--s1", "2", "--r", "1", "--bogus"],
        vec!["bend", "--s0", "x", "--s1", "2", "--r", "1"],
        vec!["generate", "--out", "x.stl"],
        vec!["generate", "--preset", "BAS", "--config", "c.json", "--out", "x.stl"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = telefold(&args, dir.path());
        assert_eq!(o.code, 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let help = telefold(&["--help"], dir.path());
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("generate"));
}

#[test]
fn pipeline_errors_exit_1_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let mut bad = telefold_core::design::baseline();
    bad.sections.0[0].midline.amplitude = -1.0;
    fs::write(dir.path().join("bad.json"), serde_json::to_string(&bad).unwrap()).unwrap();
    let cases: [(&[&str], &str); 5] = [
        (&["bend", "--s0", "10", "--s1", "100", "--r", "1"], "error: bend_model: "),
        (&["generate", "--config", "missing.json", "--out", "x.stl"], "error: config: "),
        (
            &["generate", "--config", "bad.json", "--out", "x.stl"],
            "error: design_params: sections[0].midline.amplitude",
        ),
        (&["generate", "--preset", "AMP-mid", "--out", "x.stl"], "error: design_params: "),
        (&["silhouette", "--frames", ".", "--mm-per-px", "1", "--out", "s.csv"], "error: silhouette_metrics: "),
    ];
    for (args, prefix) in cases {
        let o = telefold(args, dir.path());
        assert_eq!(o.code, 1, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}: {}", o.stdout);
        assert_eq!(o.stderr.lines().count(), 1, "{}", o.stderr);
        assert!(o.stderr.starts_with(prefix), "{}", o.stderr);
    }
    assert!(!dir.path().join("x.stl").exists());
}
