//! End-to-end checks of the `garden` binary.

use std::path::Path;
use std::process::Command;

fn garden(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_garden"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("running the garden binary")
}

#[test]
fn pipeline_generate_compile_solve_embed_validate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let out = garden(d, &["generate", "--n", "4", "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("instance.json").exists());
    assert!(d.join("instance.json.manifest.json").exists());

    let out = garden(d, &["compile", "--instance", "instance.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = garden(
        d,
        &["solve", "--qubo", "qubo.json", "--solver", "tabu", "--reads", "10", "--seed", "1"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("samples.json").exists());
    let csv = std::fs::read_to_string(d.join("samples.csv")).unwrap();
    assert!(csv.starts_with("energy,occurrences\n"));

    let out = garden(
        d,
        &["embed", "--qubo", "qubo.json", "--topology", "chimera", "--m", "4", "--seed", "1"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = garden(
        d,
        &[
            "validate",
            "--instance",
            "instance.json",
            "--qubo",
            "qubo.json",
            "--embedding",
            "embedding.json",
            "--samples",
            "samples.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("validation passed"), "{text}");
}

#[test]
fn runtime_errors_exit_1_and_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = garden(dir.path(), &["solve", "--qubo", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = garden(dir.path(), &["solve", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = garden(dir.path(), &["validate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equal_seeds_reproduce_data_files_byte_for_byte() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        assert!(garden(d, &["generate", "--n", "6", "--seed", "9"]).status.success());
        assert!(garden(d, &["compile", "--instance", "instance.json"]).status.success());
        assert!(garden(
            d,
            &["solve", "--qubo", "qubo.json", "--solver", "sa", "--reads", "20", "--seed", "2"],
        )
        .status
        .success());
    }
    for name in ["instance.json", "qubo.json", "samples.json", "samples.csv"] {
        let left = std::fs::read(a.path().join(name)).unwrap();
        let right = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(left, right, "{name} differs between equal-seed runs");
    }
}
