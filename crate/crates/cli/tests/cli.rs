use std::process::{Command, Output};

use multiaffine::scan_io::{from_csv, from_json};
use multiaffine::Error;
use multiaffine_cli::exit_code;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiaffine")).args(args).output().expect("spawn")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validation_errors_exit_two_with_one_line() {
    for args in [
        &["membrane", "--T", "-1", "--p", "1", "--R", "1"][..],
        &["fisher", "--family", "poisson", "--point", "1"],
        &["fisher", "--family", "bernoulli", "--point", "0.5,1"],
        &["chsh", "--state", "singlet", "--settings", "0,1,2"],
        &["chsh", "--state", "singlet"],
        &["berry", "--theta-c", "1", "--segments", "4"],
        &["membrane", "--T", "1", "--R", "1"],
        &["nonsense"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        let rest = err.strip_prefix("error: ").unwrap_or_else(|| panic!("{err}"));
        let (field, reason) = rest.split_once(": ").unwrap_or_else(|| panic!("{err}"));
        assert!(!field.is_empty() && !field.contains(' ') && !reason.trim().is_empty(), "{err}");
    }
    let o = run(&["membrane", "--T", "-1", "--p", "1", "--R", "1"]);
    assert_eq!(stderr(&o).trim(), "error: T: tension must be positive (got -1)");
}

#[test]
fn non_convergence_maps_to_three() {
    assert_eq!(exit_code(&Error::ShootingNoConvergence { iterations: 50, residual: 1.0 }), 3);
    assert_eq!(exit_code(&Error::QuadratureNonConvergence(1e-3)), 3);
    assert_eq!(exit_code(&Error::NotConvex), 2);
}

#[test]
fn provenance_records_every_input() {
    let o = run(&["membrane", "--T", "2", "--p", "0.5", "--R", "1.5", "--nodes", "32", "--format", "json", "--seed", "9"]);
    assert!(o.status.success());
    let t = from_json(&o.stdout).unwrap();
    let p = &t.meta.parameters;
    for (k, v) in [("T", "2"), ("p", "0.5"), ("R", "1.5"), ("nodes", "32"), ("seed", "9"), ("format", "json"), ("deg", "false")] {
        assert_eq!(p.get(k).map(String::as_str), Some(v), "{k}");
    }
    assert_eq!(t.meta.operation, "membrane");
    assert_eq!(t.meta.grid, Some(32));
}

#[test]
fn degrees_switch_converts_angles() {
    let rad = run(&["chsh", "--state", "singlet", "--settings", "0,1.5707963267948966,0.7853981633974483,2.356194490192345"]);
    let deg = run(&["chsh", "--state", "singlet", "--settings", "0,90,45,135", "--deg"]);
    let (a, b) = (from_csv(&rad.stdout).unwrap(), from_csv(&deg.stdout).unwrap());
    let (sa, sb) = (a.column("s").unwrap()[0], b.column("s").unwrap()[0]);
    assert!((sa - sb).abs() <= 1e-12);
    assert!((sa.abs() - 2.0 * 2f64.sqrt()).abs() <= 1e-12);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = ["string", "--A", "0.7", "--fs", "0.5,1.5", "--x", "3.0"];
    let csv = from_csv(&run(&args).stdout).unwrap();
    let json = from_json(&run(&[&args[..], &["--format", "json"]].concat()).stdout).unwrap();
    assert!(csv.same_data(&json));
    assert_eq!(json.column("frequency").unwrap()[0], 2.0);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("multiaffine-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let args = ["decompose", "--theta", "0.4", "--N", "2"];
    let o = run(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn random_state_follows_the_seed() {
    let go = |seed: &str| run(&["chsh", "--state", "random", "--settings", "0,1,2,3", "--seed", seed]).stdout;
    assert_eq!(go("3"), go("3"));
    assert_ne!(go("3"), go("4"));
}

#[test]
fn documented_examples() {
    let t = from_csv(&run(&["berry", "--family", "spin-half", "--theta-c", "1.5707963", "--segments", "2000"]).stdout).unwrap();
    assert!((t.column("total_phase").unwrap()[0] + std::f64::consts::PI).abs() <= 1e-4);
    let t = from_csv(&run(&["divergence", "--family", "bernoulli", "--chart", "mean", "--p", "0.2", "--q", "0.7"]).stdout).unwrap();
    let (kl, b) = (t.column("kl").unwrap()[0], t.column("bregman").unwrap()[0]);
    let exact = 0.2 * (0.2f64 / 0.7).ln() + 0.8 * (0.8f64 / 0.3).ln();
    assert!((kl - exact).abs() <= 1e-12 && (b - exact).abs() <= 1e-12);
    let t = from_csv(&run(&["geodesic", "--family", "bernoulli", "--chart", "natural", "--from", "-1", "--to", "2", "--alpha", "1", "--samples", "4"]).stdout)
        .unwrap();
    assert_eq!(t.column("x0").unwrap(), vec![-1.0, 0.0, 1.0, 2.0]);
}
