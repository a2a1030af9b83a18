use fourstab::bounds::dft_freq_bounds;
use fourstab::core_matrix::build_perturbed_dft_freq;
use fourstab::experiments::{random_frequency_perturbation, trial_rng};
use fourstab::spectral::svd_values;
use fourstab_cli::dispatch;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut argv = vec!["fourstab"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dispatch(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    assert_eq!(r.code, 0, "stderr: {}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn dft_spectrum_is_flat() {
    let v = json(&run(&["spectral", "--dft", "4"]));
    let s = floats(&v["singular_values"]);
    assert_eq!(s.len(), 4);
    assert!(s.iter().all(|x| (x - 2.0).abs() < 1e-12), "{s:?}");
}

#[test]
fn bounds_pass_through() {
    let v = json(&run(&["bounds", "--theorem", "t3", "--m", "16", "--ell", "0.1"]));
    let lib = serde_json::to_value(dft_freq_bounds(&[16], 0.1, false).unwrap()).unwrap();
    assert_eq!(v, lib);
    let alias = json(&run(&["bounds", "--theorem", "dft_frequency", "--m", "16", "--ell", "1/10"]));
    assert_eq!(alias, lib);
}

#[test]
fn gated_theorem_reports_not_applicable() {
    let v = json(&run(&["bounds", "--theorem", "t3", "--m", "16", "--ell", "0.3"]));
    assert_eq!(v["applicable"], Value::Bool(false));
}

#[test]
fn classify_half_shift() {
    let v = json(&run(&["classify", "--deltas", "0,0.5", "--p", "0,1"]));
    assert_eq!(v["kind"], "RieszBasis");
    assert!((v["lower_constant"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["upper_constant"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let exact = json(&run(&["classify", "--deltas", "0,1/2", "--p", "0,1"]));
    assert_eq!(exact, v);
}

#[test]
fn build_then_spectral_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    let r = run(&["build", "--m", "4,3", "--ell", "0.2", "--seed", "7", "--out", p]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = json(&run(&["spectral", "--input", p, "--method", "full"]));

    let mut rng = trial_rng(7, 0, 0);
    let eps = random_frequency_perturbation(&mut rng, &[4, 3], 0.2, false).unwrap();
    let a = build_perturbed_dft_freq(&[4, 3], &eps, None).unwrap();
    let expected = svd_values(&a).unwrap();
    let got = floats(&v["singular_values"]);
    assert_eq!(got.len(), expected.singular_values.len());
    for (g, e) in got.iter().zip(&expected.singular_values) {
        assert_eq!(g.to_bits(), e.to_bits());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["plot"]).code, 2);
    assert_eq!(run(&["spectral", "--dft", "4", "--bogus"]).code, 2);
    assert_eq!(run(&["spectral"]).code, 2);
    assert_eq!(run(&["spectral", "--dft", "4", "--instability", "3"]).code, 2);
    let r = run(&["bounds", "--theorem", "t3", "--m", "16"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("--ell"));
    assert_eq!(run(&["bounds", "--theorem", "t9"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn computation_errors_exit_one_with_json() {
    let r = run(&["spectral", "--instability", "4"]);
    assert_eq!(r.code, 1);
    let e: Value = serde_json::from_str(r.err.trim()).unwrap();
    assert_eq!(e["error"], "invalid_input");
    assert!(e["message"].as_str().unwrap().contains("odd"));
}

#[test]
fn verify_exit_code_tracks_violations() {
    let r = run(&["verify", "--suite", "conditions", "--trials", "5"]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    let violations = v["violations"].as_u64().unwrap();
    assert_eq!(r.code == 0, violations == 0);
    assert_eq!(violations, 0);
}

#[test]
fn csv_output() {
    let r = run(&["spectral", "--dft", "2", "--format", "csv"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("index,sigma\n"));
    assert_eq!(r.out.lines().count(), 3);
}
