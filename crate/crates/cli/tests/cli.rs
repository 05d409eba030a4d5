//! End-to-end runs of the binary on tiny datasets.

use std::path::Path;
use std::process::{Command, Output};

fn urbansim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urbansim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = urbansim(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn tiny_config(dir: &Path) -> String {
    let path = dir.join("tiny.toml");
    std::fs::write(&path, "[camera]\nwidth = 16\nheight = 16\n\n[dataset]\nn_scenes = 2\n").unwrap();
    path.to_string_lossy().into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_run_every_experiment_on_the_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tiny_config(tmp.path());
    let (sim, target, test, out) = (
        tmp.path().join("sim"),
        tmp.path().join("target"),
        tmp.path().join("test"),
        tmp.path().join("out"),
    );
    let fids = "lambertian,mcpt-2";
    ok(&["generate", "--config", &cfg, "--out", s(&sim), "--fidelity", fids, "--threads", "2"]);
    ok(&["generate", "--config", &cfg, "--out", s(&target), "--fidelity", fids, "--seed", "100"]);
    ok(&["generate", "--config", &cfg, "--out", s(&test), "--fidelity", fids, "--seed", "200"]);
    assert!(sim.join("manifest.toml").exists());
    assert!(sim.join("scene-0001/mcpt-2/labels.png").exists());

    let csv = ok(&["sweep", "--train", s(&sim), "--test", s(&test), "--test-fidelity", "mcpt-2", "--out", s(&out)]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("fidelity,mean_iou,histogram_tv"));
    for f in ["sweep.csv", "sweep.svg", "sweep.toml", "models/lambertian.txt", "models/mcpt-2.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }

    let model = out.join("models/mcpt-2.txt");
    let spec = format!("probe={}", model.display());
    let csv = ok(&["trimap", "--model", &spec, "--test", s(&test), "--fidelity", "mcpt-2", "--widths", "1,2,5", "--out", s(&out)]);
    assert_eq!(csv.lines().count(), 5);

    let eval_out = tmp.path().join("eval");
    let line = ok(&["eval", "--model", s(&model), "--data", s(&test), "--fidelity", "mcpt-2", "--out", s(&eval_out)]);
    assert!(line.starts_with("mean_iou,"));
    for f in ["iou.csv", "trimap.csv", "trimap.svg"] {
        assert!(eval_out.join(f).exists(), "{f}");
    }

    let csv = ok(&[
        "adapt", "--sim", s(&sim), "--target", s(&target), "--test", s(&test), "--fidelity", "lambertian",
        "--fraction", "0.5", "--lambdas", "0,1", "--out", s(&out),
    ]);
    assert!(csv.contains("target-only,") && csv.contains("sim-full+finetune,"));
    assert!(out.join("adaptation.csv").exists());
}

#[test]
fn failures_exit_non_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let missing = tmp.path().join("missing.toml");
    assert!(!urbansim(&["generate", "--config", s(&missing), "--out", s(&out)]).status.success());
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "[camera]\nwidth = 0\n").unwrap();
    assert!(!urbansim(&["generate", "--config", s(&bad), "--out", s(&out)]).status.success());
    assert!(!urbansim(&["generate", "--out", s(&out), "--fidelity", "mcpt-x"]).status.success());
    assert!(!urbansim(&["eval", "--model", s(&missing), "--data", s(&out), "--out", s(&out)]).status.success());
    assert!(!urbansim(&["sweep", "--out", s(&out), "--threads", "0"]).status.success());
    assert!(!urbansim(&["bogus"]).status.success());
}

#[test]
fn tampered_dataset_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tiny_config(tmp.path());
    let data = tmp.path().join("data");
    ok(&["generate", "--config", &cfg, "--out", s(&data), "--fidelity", "lambertian", "--scenes", "1"]);
    std::fs::write(data.join("scene-0000/lambertian/rgb.png"), b"not a png").unwrap();
    let out = urbansim(&[
        "eval", "--model", s(&data.join("none.txt")), "--data", s(&data), "--fidelity", "lambertian", "--out",
        s(&tmp.path().join("o")),
    ]);
    assert!(!out.status.success());
    let model_dir = tmp.path().join("m");
    let r = urbansim(&["sweep", "--train", s(&data), "--test", s(&data), "--test-fidelity", "lambertian", "--out", s(&model_dir)]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("verifying"));
}
