use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mfnls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfnls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn passing_preset_exits_zero_and_writes_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gn");
    let o = mfnls(&["gn", "--preset", "gn-1.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("gn-1.5: PASS"));
    let text = fs::read_to_string(out.join("outcome.json")).unwrap();
    assert!(text.starts_with("{\"schema_version\":\"1.0\""));
    assert!(text.contains("\"spec\""));
}

#[test]
fn invalid_parameters_exit_two_and_name_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "kind = \"gn\"\n[params]\nalpha1 = 1.0\n",
    );
    let o = mfnls(&["gn", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(0,2]\\{1}"), "{}", stderr(&o));

    let cfg = write(
        dir.path(),
        "typo.toml",
        "kind = \"gn\"\n[knobs]\nensembel = 3\n",
    );
    let o = mfnls(&["gn", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ensembel"));

    let o = mfnls(&["decay", "--preset", "gn-2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mfnls(&[
        "gn",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.toml"));
}

#[test]
fn failed_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // increasing gaps cannot give a monotone decrease
    let cfg = write(
        dir.path(),
        "cont.toml",
        "preset = \"continuity\"\n[grid]\nnx = 32\nny = 32\n[solver]\ndt = 0.01\nt_end = 0.2\n[knobs]\nalpha_primes = [1.51, 1.6]\n",
    );
    let o = mfnls(&["continuity", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn numerical_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "decay.toml",
        "preset = \"decay-2-1.5\"\n[grid]\nnx = 64\nny = 64\nlx = 20.0\nly = 20.0\n",
    );
    let o = mfnls(&["decay", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn snapshots_are_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let cfg = write(
        dir.path(),
        "sim.toml",
        &format!(
            "preset = \"conservation\"\noutput = \"{}\"\n[grid]\nnx = 32\nny = 32\n[solver]\ndt = 0.01\nt_end = 0.05\n",
            out.display()
        ),
    );
    let o = mfnls(&["simulate", "--config", &cfg, "--snapshot"]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stderr(&o));
    for f in [
        "outcome.json",
        "run-0.json",
        "run-0.csv",
        "u0.bin",
        "u_final.bin",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn sweep_uses_per_job_directories_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for root in [&a, &b] {
        let o = mfnls(&[
            "sweep",
            "--presets",
            "gn-2,embedding",
            "--jobs",
            "2",
            "--out",
            root.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for job in ["gn-2", "embedding"] {
        let x = fs::read(a.join(job).join("outcome.json")).unwrap();
        let y = fs::read(b.join(job).join("outcome.json")).unwrap();
        assert_eq!(x, y, "{job}");
    }
    let o = mfnls(&["sweep", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_shows_family_presets() {
    let o = mfnls(&["kernel", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("kernel-1.5") && s.contains("bessel") && s.contains("oscillatory-kernel"));
    assert!(!s.contains("gn-2"));
}
