use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn qtmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtmc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_close(got: &str, want: &str) {
    let parse = |s: &str| -> Vec<(String, f64)> {
        s.lines()
            .map(|l| {
                let (w, p) = l.split_once(' ').unwrap();
                (w.to_string(), p.parse().unwrap())
            })
            .collect()
    };
    let (g, w) = (parse(got), parse(want));
    assert_eq!(g.len(), w.len(), "{got}");
    for ((gw, gp), (ww, wp)) in g.iter().zip(&w) {
        assert_eq!(gw, ww);
        assert!((gp - wp).abs() <= 1e-8, "{got}");
    }
}

#[test]
fn validate_reports_verdicts() {
    let ok = qtmc(&["qtm", "validate", example("hadamard.qtm").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "well-formed\n");
    let bad = qtmc(&["qtm", "validate", example("broken.qtm").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("violation"));
}

#[test]
fn equiv_passes_on_the_hadamard_walk() {
    let o = qtmc(&[
        "equiv",
        "--qtm",
        example("hadamard.qtm").to_str().unwrap(),
        "--inputs",
        "0,1",
        "--t",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("input")).count(), 2);
    assert!(out.ends_with("verdict pass\n"));
}

#[test]
fn equiv_rejects_a_broken_machine() {
    let o = qtmc(&[
        "equiv",
        "--qtm",
        example("broken.qtm").to_str().unwrap(),
        "--inputs",
        "0",
        "--t",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_and_format_errors_exit_with_two() {
    assert_eq!(qtmc(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        qtmc(&["qtm", "validate", "/nonexistent.qtm"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qtm");
    std::fs::write(&bad, "states 1 q0=0\nalphabet 2 blank=1\n").unwrap();
    let o = qtmc(&["qtm", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = qtmc(&[
        "qtm",
        "run",
        example("hadamard.qtm").to_str().unwrap(),
        "--input",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(qtmc(&["synth", "--random", "3"]).status.code(), Some(2));
}

#[test]
fn machine_run_prints_the_window_distribution() {
    let o = qtmc(&[
        "qtm",
        "run",
        example("hadamard.qtm").to_str().unwrap(),
        "--input",
        "0",
        "--t",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "_0_ 0.500000000000\n_1_ 0.500000000000\n");
}

#[test]
fn compile_is_deterministic_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.qc"), dir.path().join("b.qc"));
    let q = example("hadamard.qtm");
    for out in [&a, &b] {
        let o = qtmc(&[
            "compile",
            "--qtm",
            q.to_str().unwrap(),
            "--n",
            "2",
            "--t",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).starts_with("wires 20 t 2 gates "));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let machine = qtmc(&[
        "qtm",
        "run",
        q.to_str().unwrap(),
        "--input",
        "01",
        "--t",
        "2",
    ]);
    let run = |mode: &str| {
        qtmc(&[
            "circuit",
            "run",
            a.to_str().unwrap(),
            "--input",
            "01",
            "--mode",
            mode,
            "--qtm",
            q.to_str().unwrap(),
        ])
    };
    for mode in ["elementary", "dictionary"] {
        let o = run(mode);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_close(&stdout(&o), &stdout(&machine));
    }
    let wrong = qtmc(&[
        "circuit",
        "run",
        a.to_str().unwrap(),
        "--input",
        "01",
        "--mode",
        "dictionary",
        "--qtm",
        example("move_right.qtm").to_str().unwrap(),
    ]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn codegen_dict_sections_match_across_lengths() {
    let q = example("move_right.qtm");
    let code = |n: &str| {
        stdout(&qtmc(&[
            "codegen",
            "--qtm",
            q.to_str().unwrap(),
            "--n",
            n,
            "--t",
            "3",
        ]))
    };
    let dict = |s: &str| s[s.find("\ndict\n").unwrap()..s.find("\nbody\n").unwrap()].to_string();
    let (one, two) = (code("1"), code("2"));
    assert_eq!(dict(&one), dict(&two));
    let body = |s: &str| s[s.find("\nbody\n").unwrap()..].to_string();
    assert_eq!(body(&one), body(&two));
    assert_ne!(one, two);
}

#[test]
fn synth_writes_a_flat_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("r.mat");
    std::fs::write(&m, "dim 2\n3/5 -4/5\n4/5 3/5\n").unwrap();
    let o = qtmc(&["synth", m.to_str().unwrap(), "--certify", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gate 0 r "), "{text}");
    let out = dir.path().join("r.qc");
    let o = qtmc(&[
        "synth",
        "--random",
        "4",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = qtmc(&["circuit", "run", out.to_str().unwrap(), "--input", "00"]);
    assert_eq!(o.status.code(), Some(0));
    let total: f64 = stdout(&o)
        .lines()
        .map(|l| l.split(' ').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}
