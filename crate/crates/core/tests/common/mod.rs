//! Shared helpers for the integration tests: the golden CLI table and an
//! in-process runner.

#![allow(dead_code)]

use std::path::PathBuf;

use lucas_pell::cli::{run_with, Hooks};

/// Structured-mode invocations whose stdout is pinned under `tests/golden/`.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("lucas_pq", &["lucas", "--p", "1", "--q", "-1", "--n", "10"]),
    ("lucas_a_range", &["lucas", "--a", "3", "--range", "0..5"]),
    ("lucas_b_range", &["lucas", "--b", "4", "--range", "1..=6"]),
    ("pell_plus", &["pell", "--d", "5", "--count", "4"]),
    (
        "pell_minus",
        &["pell", "--d", "13", "--sign", "-4", "--count", "3"],
    ),
    ("pell_unsolvable", &["pell", "--d", "3", "--sign", "-4"]),
    ("pell_square", &["pell", "--d", "9"]),
    ("member_a", &["member", "--value", "33", "--a", "3"]),
    (
        "member_b_non_member",
        &["member", "--value", "16", "--b", "4"],
    ),
    (
        "lattice_hyperbolic",
        &["lattice", "--a", "1", "--b", "3", "--c", "-1"],
    ),
    (
        "lattice_isotropic",
        &["lattice", "--a", "1", "--b", "3", "--c", "2"],
    ),
    ("k3_case_a_2_1", &["k3", "--m", "2", "--a", "1"]),
    ("k3_case_a_3_3", &["k3", "--m", "3", "--a", "3"]),
    ("k3_case_b", &["k3", "--b", "4", "--n", "3"]),
    ("k3_from_term", &["k3", "--a", "2", "--n", "5"]),
    ("k3_from_pell_y", &["k3", "--a", "1", "--y", "8"]),
    (
        "intersect_plus_plus",
        &["intersect", "--flavor", "++", "--p1", "1", "--p2", "4"],
    ),
    (
        "intersect_minus_minus",
        &["intersect", "--flavor", "mm", "--p1", "4", "--p2", "14"],
    ),
    (
        "intersect_mixed",
        &["intersect", "--flavor", "mixed", "--p1", "1", "--p2", "7"],
    ),
    (
        "intersect_trivial",
        &["intersect", "--flavor", "++", "--p1", "1", "--p2", "2"],
    ),
    (
        "intersect_opposite",
        &[
            "intersect",
            "--flavor",
            "opposite",
            "--p1",
            "1",
            "--p2",
            "2",
            "--bound",
            "100000",
        ],
    ),
];

/// Invocations and the exit code each must produce.
pub const EXIT_CASES: &[(&[&str], i32)] = &[
    (&["lucas", "--a", "3", "--n", "7"], 0),
    (&["--help"], 0),
    (&[], 2),
    (&["lucas", "--a", "3", "--n", "x"], 2),
    (&["pell", "--d", "5", "--unknown"], 2),
    (&["member", "--value", "5", "--a", "0"], 2),
    (&["pell", "--d", "-5"], 2),
    (&["k3", "--b", "3", "--n", "2"], 2),
    (&["k3", "--a", "3", "--y", "4"], 2),
    (
        &[
            "intersect",
            "--flavor",
            "opposite",
            "--p1",
            "1",
            "--p2",
            "2",
        ],
        2,
    ),
    (&["pell", "--d", "3", "--sign", "-4"], 0),
    (&["pell", "--d", "3", "--sign", "-4", "--require"], 3),
    (
        &[
            "intersect",
            "--flavor",
            "++",
            "--p1",
            "1",
            "--p2",
            "4",
            "--cap",
            "1",
        ],
        4,
    ),
];

pub struct CliRun {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str], hooks: &Hooks) -> CliRun {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lucas-pell").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err, hooks);
    CliRun {
        code,
        stdout: String::from_utf8(out).expect("utf-8 stdout"),
        stderr: String::from_utf8(err).expect("utf-8 stderr"),
    }
}

/// Golden arguments: the case's own plus structured format and `--verify`.
pub fn golden_args<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(["--format", "structured", "--verify"]);
    v
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.json"))
}

/// Compares every golden case. With `UPDATE_GOLDEN=1` the files are
/// rewritten instead. Returns a description of each mismatch.
pub fn check_golden() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1");
    let mut failures = Vec::new();
    for (name, args) in GOLDEN_CASES {
        let run = run_cli(&golden_args(args), &Hooks::default());
        if run.code != 0 {
            failures.push(format!("{name}: exit {} ({})", run.code, run.stderr.trim()));
            continue;
        }
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &run.stdout).expect("write golden file");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == run.stdout => {}
            Ok(_) => failures.push(format!("{name}: output differs from {}", path.display())),
            Err(e) => failures.push(format!("{name}: cannot read {}: {e}", path.display())),
        }
    }
    failures
}

pub fn check_exit_codes() -> Vec<String> {
    EXIT_CASES
        .iter()
        .filter_map(|(args, want)| {
            let got = run_cli(args, &Hooks::default()).code;
            (got != *want).then(|| format!("{args:?}: exit {got}, expected {want}"))
        })
        .collect()
}

/// A hook that adds one to the numeric string at `pointer` in the result.
pub fn corrupting_hooks(pointer: &'static str) -> Hooks {
    Hooks {
        corrupt_result: Some(Box::new(move |_, v| {
            let slot = v.pointer_mut(pointer).expect("corruption target exists");
            let n: i64 = slot
                .as_str()
                .and_then(|s| s.parse().ok())
                .expect("numeric string");
            *slot = serde_json::Value::String((n + 1).to_string());
        })),
    }
}

/// Commands and the result field corrupted for each.
pub const FAULT_CASES: &[(&[&str], &str)] = &[
    (&["lucas", "--a", "3", "--range", "0..5"], "/terms/3/u"),
    (&["pell", "--d", "13", "--sign", "-4"], "/fundamental/u"),
    (&["member", "--value", "33", "--a", "3"], "/index"),
    (
        &["lattice", "--a", "1", "--b", "3", "--c", "-1"],
        "/so_plus_generator/g/0/1",
    ),
    (&["k3", "--m", "2", "--a", "1"], "/n"),
    (
        &["intersect", "--flavor", "++", "--p1", "1", "--p2", "4"],
        "/x/2",
    ),
];

/// Corrupted results must be caught by `--verify` (exit 5) and pass
/// through unchanged without it.
pub fn check_fault_injection() -> Vec<String> {
    let mut failures = Vec::new();
    for (args, pointer) in FAULT_CASES {
        let mut with = args.to_vec();
        with.extend(["--verify", "--format", "structured"]);
        let run = run_cli(&with, &corrupting_hooks(pointer));
        if run.code != 5 {
            failures.push(format!(
                "{args:?} with fault at {pointer}: exit {}, expected 5",
                run.code
            ));
        }
        let clean = run_cli(&with, &Hooks::default());
        if clean.code != 0 {
            failures.push(format!("{args:?} without fault: exit {}", clean.code));
        }
        let unverified = run_cli(args, &corrupting_hooks(pointer));
        if unverified.code != 0 {
            failures.push(format!(
                "{args:?} with fault, no --verify: exit {}",
                unverified.code
            ));
        }
    }
    failures
}
