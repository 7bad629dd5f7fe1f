use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use uiscatter_cli::specfile::SpecFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uiscatter")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn read_spec(p: &str) -> SpecFile {
    SpecFile::parse(&fs::read_to_string(Path::new(p)).unwrap()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

const AMPLIFIER: [&str; 8] = ["--rl", "0,0", "--rr", "0,0", "--t", "0,1.41421356", "--k0", "6.28318531"];

fn design_amplifier(dir: &TempDir) -> String {
    let out = path(dir, "amp.json");
    let mut args = vec!["design"];
    args.extend(AMPLIFIER);
    args.extend(["--n", "300", "--m-list", "602,300,0,-301", "--out", &out]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    out
}

fn design_singular(dir: &TempDir, extra: &[&str]) -> (Output, String) {
    let out = path(dir, "sing.json");
    let mut args = vec!["singularity", "--alpha", "-1e-4", "--n", "300", "--m", "300", "--k0", "6.28318531", "--out", &out];
    args.extend(extra);
    (run(&args), out)
}

#[test]
fn design_reproduces_worked_example() {
    let dir = TempDir::new().unwrap();
    let file = read_spec(&design_amplifier(&dir));
    let alphas = [1.57798e-4, 1.93283e-4, 1.11565e-4, 2.73409e-4];
    let ds = [300.625, 150.299, 0.0, -150.326];
    assert_eq!(file.blocks.len(), 4);
    for ((b, a), d) in file.blocks.iter().zip(alphas).zip(ds) {
        assert!((b.alpha / a - 1.0).abs() < 5e-6, "{}", b.alpha);
        assert!((b.d - d).abs() < 1e-3, "{}", b.d);
        assert_eq!(b.n, 300);
    }
    let conj: Vec<bool> = file.blocks.iter().map(|b| b.conjugated).collect();
    assert_eq!(conj, [false, true, false, true]);
}

#[test]
fn design_reports_plan_and_residuals() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "a.json");
    let mut args = vec!["design"];
    args.extend(AMPLIFIER);
    args.extend(["--out", &out]);
    let o = run(&args);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("right-invisible") && text.contains("left-invisible"));
    assert!(text.contains("verify:") && text.contains("PASS"));
}

#[test]
fn free_target_gives_empty_spec() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "free.json");
    let o = run(&["design", "--rl", "0,0", "--rr", "0,0", "--t", "1,0", "--k0", "6.28318531", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("free potential"));
    assert!(read_spec(&out).blocks.is_empty());
}

#[test]
fn addendum_single_sided_design() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "add.json");
    let o = run(&[
        "design", "--rl", "0.3,-0.4", "--rr", "0,0", "--t", "0.8, 0.2", "--k0", "6.28318531",
        "--plan", "addendum", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(read_spec(&out).blocks.len(), 3);
    let v = run(&["verify", "--spec", &out, "--rl", "0.3,-0.4", "--rr", "0,0", "--t", "0.8,0.2", "--tol", "1e-3"]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn overlapping_overrides_are_design_failures() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "bad.json");
    let mut args = vec!["design"];
    args.extend(AMPLIFIER);
    args.extend(["--m-list", "602,301,0,-301", "--out", &out]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("overlap"));
    let mut args = vec!["design"];
    args.extend(AMPLIFIER);
    args.extend(["--m-list", "1,2", "--out", &out]);
    assert_eq!(run(&args).status.code(), Some(1));
}

#[test]
fn singularity_prints_beta_and_amplitudes() {
    let dir = TempDir::new().unwrap();
    let (o, out) = design_singular(&dir, &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value = |key: &str| -> String {
        text.lines().find(|l| l.starts_with(key)).unwrap().rsplit(' ').next().unwrap().to_owned()
    };
    let beta: f64 = value("beta:").parse().unwrap();
    assert!((beta / 1.759e-4 - 1.0).abs() < 5e-4);
    let rr: Vec<f64> = value("w+").split(',').map(|v| v.parse().unwrap()).collect();
    let rl: Vec<f64> = value("w-").split(',').map(|v| v.parse().unwrap()).collect();
    assert!((rr[1] - 0.754).abs() < 0.005 * 0.754);
    assert!((rl[1] + 1.323).abs() < 0.005 * 1.323);
    let file = read_spec(&out);
    assert_eq!(file.blocks.iter().map(|b| b.conjugated).collect::<Vec<_>>(), [true, false]);

    let (cpa, out) = design_singular(&dir, &["--cpa"]);
    assert_eq!(cpa.status.code(), Some(0));
    assert_eq!(read_spec(&out).blocks.iter().map(|b| b.conjugated).collect::<Vec<_>>(), [false, true]);
}

#[test]
fn singularity_rejects_invalid_alpha() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.json");
    let o = run(&["singularity", "--alpha", "-0.3", "--k0", "6.28318531", "--out", &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!Path::new(&out).exists());
}

#[test]
fn spectrum_of_singularity_and_free_spec() {
    let dir = TempDir::new().unwrap();
    let (_, spec) = design_singular(&dir, &[]);
    let o = run(&["spectrum", "--spec", &spec, "--kmin", "6.2203534569", "--kmax", "6.3460171631", "--points", "201"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "k,k_over_k0,Rl2,Rr2,T2,argT,capped");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 201);
    let peak = rows.iter().min_by(|a, b| (a[1] - 1.0).abs().total_cmp(&(b[1] - 1.0).abs())).unwrap();
    assert!(peak[4] >= 1e6, "T2 = {}", peak[4]);
    // identical invocations are byte-identical
    let again = run(&["spectrum", "--spec", &spec, "--kmin", "6.2203534569", "--kmax", "6.3460171631", "--points", "201"]);
    assert_eq!(again.stdout, o.stdout);

    let free = path(&dir, "free.json");
    run(&["design", "--rl", "0,0", "--rr", "0,0", "--t", "1,0", "--k0", "6.28318531", "--out", &free]);
    let csv = path(&dir, "free.csv");
    let o = run(&["spectrum", "--spec", &free, "--kmin", "1", "--kmax", "10", "--points", "7", "--out", &csv]);
    assert_eq!(o.status.code(), Some(0));
    for row in csv_rows(&fs::read_to_string(&csv).unwrap()) {
        assert_eq!((row[2], row[3], row[4], row[6]), (0.0, 0.0, 1.0, 0.0));
    }
}

#[test]
fn amplifier_spectrum_minimum_near_design_wavenumber() {
    let dir = TempDir::new().unwrap();
    let spec = design_amplifier(&dir);
    let o = run(&["spectrum", "--spec", &spec, "--kmin", "6.25318531", "--kmax", "6.31318531", "--points", "61"]);
    let rows = csv_rows(&stdout(&o));
    let near = rows.iter().min_by(|a, b| (a[1] - 1.0).abs().total_cmp(&(b[1] - 1.0).abs())).unwrap();
    assert!((near[4] - 2.0).abs() < 1e-3 && near[2] < 1e-6 && near[3] < 1e-6, "{near:?}");
}

#[test]
fn profile_outputs() {
    let dir = TempDir::new().unwrap();
    let (_, spec) = design_singular(&dir, &[]);
    let o = run(&["profile", "--spec", &spec, "--xmin", "200", "--xmax", "210", "--points", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "x,re_v,im_v,re_n_minus_1,im_n");
    let rows = csv_rows(&text);
    assert_eq!((rows[0][0], rows[10][0]), (200.0, 210.0));
    assert!(rows.iter().all(|r| r[1..].iter().all(|v| *v == 0.0)));

    // |k0 x| ≤ π around the junction of the two blocks
    let o = run(&["profile", "--spec", &spec, "--xmin", "-0.5", "--xmax", "0.5", "--points", "401"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!((rows[0][0], rows[400][0]), (-0.5, 0.5));
    let peak = rows.iter().map(|r| r[3].hypot(r[4])).fold(0.0, f64::max);
    assert!(peak > 1e-4 && peak < 5e-3, "max |n - 1| = {peak}");
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = design_amplifier(&dir);
    let ok = run(&["verify", "--spec", &spec, "--rl", "0,0", "--rr", "0,0", "--t", "0,1.41421356", "--tol", "1e-3"]);
    assert_eq!(ok.status.code(), Some(0));
    let wrong = run(&["verify", "--spec", &spec, "--rl", "0,0", "--rr", "0,0", "--t", "1,0"]);
    assert_eq!(wrong.status.code(), Some(1));
    assert!(stdout(&wrong).contains("FAIL"));
    let missing = run(&["verify", "--spec", &path(&dir, "nope.json"), "--rl", "0,0", "--rr", "0,0", "--t", "1,0"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("cannot read spec"));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.json");
    let o = run(&["design", "--rl", "1", "--rr", "0,0", "--t", "1,0", "--k0", "1", "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("re,im"));
    let bad = path(&dir, "bad.json");
    fs::write(&bad, r#"{"version":1,"k0":1.0,"blocks":[],"metadata":"","colour":"red"}"#).unwrap();
    let o = run(&["spectrum", "--spec", &bad, "--kmin", "1", "--kmax", "2", "--points", "3"]);
    assert_eq!(o.status.code(), Some(2));
}
