use std::path::PathBuf;
use std::process::Command;

use coniveau::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("coniveau").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Golden name and command. Regenerate with `UPDATE_GOLDENS=1`.
const GOLDENS: &[(&str, &[&str])] = &[
    ("dh_zp3_integral.json", &["dh-report", "Zp^3@p=3", "--mode=integral", "--max-degree", "10", "--format", "machine"]),
    ("dh_zp3_modp.json", &["dh-report", "Zp^3@p=3", "--mode=modp", "--max-degree", "10", "--format", "machine"]),
    ("dh_q8.json", &["dh-report", "Q8", "--format", "machine"]),
    ("dh_d8.json", &["dh-report", "D8", "--format", "machine"]),
    ("dh_so3.json", &["dh-report", "SO3", "--format", "machine"]),
    ("dh_g2.json", &["dh-report", "G2", "--format", "machine"]),
    ("dh_pgl3.json", &["dh-report", "PGLp@p=3", "--format", "machine"]),
    ("dh_e.json", &["dh-report", "E", "--format", "machine"]),
    ("margolis_zp3_q0.json", &["margolis", "Zp^3@p=3", "--n", "0", "--format", "machine"]),
    ("transfer_d8.json", &["transfer-check", "D8", "--format", "machine"]),
    ("dh_g2.txt", &["dh-report", "G2"]),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog").join("goldens")
}

#[test]
fn goldens_match() {
    let update = std::env::var_os("UPDATE_GOLDENS").is_some();
    for (name, cmd) in GOLDENS {
        let (code, out, err) = run(cmd);
        assert_eq!(code, 0, "{cmd:?}: {err}");
        let path = golden_dir().join(name);
        if update {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden {name}; run with UPDATE_GOLDENS=1"));
        assert_eq!(out, want, "{name} differs from its golden");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (_, cmd) in GOLDENS {
        assert_eq!(run(cmd), run(cmd));
    }
}

#[test]
fn documented_examples() {
    let (code, out, _) = run(&["op", "--q", "0", "x1*x2*x3", "--entry", "Zp^3@p=3"]);
    assert_eq!((code, out.trim()), (0, "y1*x2*x3 - y2*x1*x3 + y3*x1*x2"));
    for id in ["Zp^3@p=3", "Q8", "D8", "SO3", "G2", "PGLp@p=3"] {
        let (code, out, _) = run(&["basis", "--degree", "0", "--entry", id]);
        assert_eq!((code, out.trim()), (0, "1"), "{id}");
    }
    let (code, out, _) = run(&["dh-report", "Zp^3@p=3", "--mode=integral", "--max-degree", "10"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches(": certified_nonzero").count(), 4);
}

#[test]
fn other_subcommands() {
    let (code, out, _) = run(&["list"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "G2"));
    let (code, out, _) = run(&["validate", "SO3"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("0 failed\n"));
    let (code, out, _) = run(&["coniveau", "Zp^3@p=3", "--c", "1", "--degree", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("x1*x2"));
    let (code, out, _) = run(&["op", "--power", "1", "w4", "--entry", "G2"]);
    assert_eq!((code, out.trim()), (0, "w6"));
    let (code, out, _) = run(&["op", "--beta", "w2", "--entry", "SO3", "--format", "machine"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "w3");
    let (code, out, _) = run(&["margolis", "SO3", "--n", "0", "--max-degree", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("Margolis homology of Q_0"));
}

#[test]
fn presentation_files_as_input() {
    let dir = std::env::temp_dir().join(format!("coniveau-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("lens.pres");
    std::fs::write(&good, "prime 3\ntruncate 8\ngen y deg=2 kind=poly weight=1\ngen x deg=1 kind=ext weight=1\nq 0 y = 0\nq 0 x = y\n").unwrap();
    let (code, out, _) = run(&["basis", good.to_str().unwrap(), "--degree", "3"]);
    assert_eq!((code, out.trim()), (0, "y*x"));
    let bad = dir.join("bad.pres");
    std::fs::write(&bad, "prime 3\ntruncate 8\ngen y deg=2 kind=poly weight=1\nrel y +\n").unwrap();
    let (code, _, err) = run(&["basis", bad.to_str().unwrap(), "--degree", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_coniveau");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["list"]), Some(0));
    assert_eq!(status(&["basis", "no-such-entry", "--degree", "0"]), Some(2));
    assert_eq!(status(&["op", "--q", "0", "x1*", "--entry", "SO3"]), Some(2));
    assert_eq!(status(&["dh-report", "Zp^3@p=3", "--max-degree", "40"]), Some(1));
    assert_eq!(status(&["op", "--q", "4", "w2", "--entry", "SO3"]), Some(1));
    assert_eq!(status(&["nonsense"]), Some(2));
}
