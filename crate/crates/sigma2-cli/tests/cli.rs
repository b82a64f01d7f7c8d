use std::process::{Command, Output};

use serde_json::Value;
use sigma2::elliptic::{EllipticContext, EllipticCurveParams};
use sigma2::{NumericsConfig, C};
use sigma2_cli::job::JobSpec;

fn sigma2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigma2"))
        .args(args)
        .env_remove("SIGMA2_SEED")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn classify_example() {
    let o = sigma2(&["classify", "--lambda", "0,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "sigma2/1");
    let r = &v["result"];
    assert_eq!(r["stratum"], "Lambda1");
    assert_eq!(r["a2"], serde_json::json!([0.0, 0.0]));
    assert_eq!(r["gamma"], serde_json::json!([[0.0, 0.0], [1.0, 0.0]]));
    assert_eq!(r["partition"], serde_json::json!([2, 1, 1, 1]));
    assert_eq!(r["rank"], 3);
}

#[test]
fn classify_lambda0_example() {
    let v = json(&sigma2(&["classify", "--lambda", "-3,2,0,0"]));
    assert_eq!(v["result"]["stratum"], "Lambda0");
    assert_eq!(v["result"]["partition"], serde_json::json!([2, 2, 1]));
}

#[test]
fn job_round_trips() {
    for args in [
        &["classify", "--lambda", "0,1,0,0"][..],
        &[
            "sigma",
            "--a2",
            "0,0",
            "--gamma",
            "0,0,1,0",
            "--u",
            "0.1,0,0.2,0",
        ],
        &["periods", "--a2", "0.3,-0.1", "--gamma", "0.4,0.2,-0.2,0.5"],
        &[
            "invert",
            "--rational-alpha",
            "1,0.2",
            "--U1",
            "0.2,0.1",
            "--U3",
            "0.3,-0.2",
        ],
    ] {
        let v = json(&sigma2(args));
        let job: JobSpec = serde_json::from_value(v["job"].clone()).unwrap();
        assert_eq!(serde_json::to_value(&job).unwrap(), v["job"], "{args:?}");
    }
}

#[test]
fn sigma_example_is_finite() {
    let o = sigma2(&[
        "sigma",
        "--a2",
        "0,0",
        "--gamma",
        "0,0,1,0",
        "--u",
        "0.1,0,0.2,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let val = &json(&o)["result"]["value"];
    assert!(val[0].as_f64().unwrap().is_finite() && val[1].as_f64().unwrap().is_finite());
}

#[test]
fn sigma_magnitude_grid_is_finite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sigma.csv");
    let p = path.to_str().unwrap();
    let o = sigma2(&[
        "sigma",
        "--a2",
        "0.3,-0.1",
        "--gamma",
        "0.4,0.2,-0.2,0.5",
        "--grid",
        "50",
        "--csv",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["grid"]["non_finite"], 0);
    let mut rd = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["u3", "u1", "re", "im"]);
    assert_eq!(rd.records().count(), 2500);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(sigma2(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        sigma2(&["classify", "--lambda", "1,2"]).status.code(),
        Some(1)
    );
    let o = sigma2(&[
        "sigma",
        "--a2",
        "0,0",
        "--gamma",
        "0,0,1,0",
        "--grid",
        "0",
        "--csv",
        "/tmp/never.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "usage");
}

#[test]
fn numerical_errors_exit_two() {
    // ℘(U₁) = ℘(α) is a singular configuration of the inversion formulas.
    let o = sigma2(&[
        "invert", "--a2", "0,0", "--gamma", "0,0,1,0", "--U1", "0,0", "--U3", "0.1,0",
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert!(json(&o)["error"]["kind"].is_string());
}

#[test]
fn potential_csv_is_real_on_imaginary_wp_prime_segment() {
    let e = EllipticContext::real_rectangular(
        EllipticCurveParams::new(C::new(-0.7, 0.0), C::new(0.1, 0.0)),
        &NumericsConfig::default(),
    )
    .unwrap();
    let alpha = e.omega * 0.5 + e.omega_p * 0.5 * 0.4;
    let a = format!("{},{}", alpha.re, alpha.im);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v1.csv");
    let o = sigma2(&[
        "potential",
        "--gamma",
        "-0.7,0.1",
        "--alpha",
        &a,
        "--family",
        "v1",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let mut rd = csv::Reader::from_path(&path).unwrap();
    let mut n = 0;
    for r in rd.records() {
        let r = r.unwrap();
        let (re, im): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert!(im.abs() < 1e-8 * (1.0 + re.abs()), "{re} {im}");
        n += 1;
    }
    assert_eq!(n, 512);
}

#[test]
fn verify_is_seeded_and_deterministic() {
    let a = sigma2(&[
        "verify",
        "--suite",
        "algebra",
        "--seed",
        "3",
        "--samples",
        "5",
    ]);
    let b = sigma2(&["verify", "--suite", "8", "--seed", "3", "--samples", "5"]);
    assert_eq!(a.status.code(), Some(0));
    let (va, vb) = (json(&a), json(&b));
    assert_eq!(va["result"], vb["result"]);
    assert_eq!(va["result"]["criteria"][0]["id"], 8);
}

#[test]
fn verify_red_criterion_exits_two() {
    let o = sigma2(&["verify", "--suite", "trig"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["result"]["red"], serde_json::json!([11]));
}

#[test]
fn env_overrides_reach_the_job() {
    let o = Command::new(env!("CARGO_BIN_EXE_sigma2"))
        .args(["verify", "--suite", "algebra", "--samples", "1"])
        .env("SIGMA2_SEED", "11")
        .env("SIGMA2_TOL", "1e-9")
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["job"]["command"]["seed"], 11);
    assert_eq!(v["job"]["cfg"]["tol"], 1e-9);
}
