use std::path::{Path, PathBuf};

use collineations::cli::{self, Report, EXIT_OK, EXIT_SCOPE, EXIT_USAGE};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("collineations").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

/// A documented invocation: its arguments and expected exit code (`# exit N`, default 0).
fn parse_example(line: &str) -> Option<(Vec<String>, i32)> {
    let rest = line.trim().strip_prefix("collineations ")?;
    let (cmd, note) = rest.split_once('#').unwrap_or((rest, ""));
    if cmd.contains('<') || cmd.contains('[') {
        return None;
    }
    let code = note
        .trim()
        .strip_prefix("exit ")
        .map_or(0, |c| c.trim().parse().unwrap());
    Some((cmd.split_whitespace().map(String::from).collect(), code))
}

fn run_example(args: &[String], scratch: &Path) -> Run {
    let mut args = args.to_vec();
    if let Some(i) = args.iter().position(|a| a == "--svg") {
        args[i + 1] = scratch.join(&args[i + 1]).to_string_lossy().into_owned();
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

fn repo_file(rel: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn check_examples(source: &str, lines: impl Iterator<Item = String>) {
    let scratch = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for line in lines {
        let Some((args, want)) = parse_example(&line) else {
            continue;
        };
        let r = run_example(&args, scratch.path());
        assert_eq!(
            r.code, want,
            "{source}: `{line}`\nstdout: {}\nstderr: {}",
            r.out, r.err
        );
        if want == EXIT_OK {
            assert!(!r.out.is_empty(), "{source}: `{line}` printed nothing");
            if let Some(i) = args.iter().position(|a| a == "--svg") {
                let svg = std::fs::read_to_string(scratch.path().join(&args[i + 1])).unwrap();
                assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
            }
        } else {
            assert!(!r.err.is_empty(), "{source}: `{line}` gave no diagnostic");
        }
        seen += 1;
    }
    assert!(seen > 0, "{source}: no examples found");
}

#[test]
fn readme_examples_run() {
    let readme = repo_file("../../README.md");
    check_examples("README.md", readme.lines().map(String::from));
}

#[test]
fn module_doc_examples_run() {
    let src = repo_file("src/cli/mod.rs");
    let lines = src
        .lines()
        .filter_map(|l| l.strip_prefix("//! "))
        .map(String::from);
    check_examples("src/cli/mod.rs", lines);
}

#[test]
fn json_round_trips_through_report() {
    for args in [
        &["chambers", "--space", "Q", "--n", "4", "--h", "3"][..],
        &["invariants", "--space", "mbar-gr", "--n", "5"],
        &["verify", "census", "--rows", "2", "--cols", "3", "--q", "3"],
    ] {
        let r = run(args);
        assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.err);
        let report = Report::from_json(&r.out).unwrap();
        assert_eq!(report.to_json(), r.out);
    }
}

#[test]
fn markdown_lists_chambers_and_marks_nef() {
    let r = run(&[
        "chambers", "--space", "Q", "--n", "4", "--h", "3", "--format", "markdown",
    ]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("# Q(4,3)"));
    assert!(r.out.contains("## Chambers (5)"));
    assert_eq!(r.out.matches("(nef)").count(), 1);
}

#[test]
fn missing_coordinates_exit_out_of_scope() {
    let r = run(&[
        "chambers", "--space", "C", "--n", "5", "--m", "5", "--h", "3",
    ]);
    assert_eq!(r.code, EXIT_SCOPE);
    assert!(
        r.err
            .contains("class coordinates not supplied for C(5,5,3)"),
        "{}",
        r.err
    );
    assert!(r.out.is_empty());
}

#[test]
fn bad_parameters_exit_two() {
    for args in [
        &[
            "invariants",
            "--space",
            "C",
            "--n",
            "3",
            "--m",
            "2",
            "--h",
            "1",
        ][..],
        &["invariants", "--space", "Q", "--n", "2", "--h", "5"],
        &["invariants", "--space", "C", "--n", "3"],
        &["verify", "census", "--rows", "2", "--cols", "2", "--q", "4"],
        &[
            "verify",
            "rank-lemma",
            "--rows",
            "3",
            "--cols",
            "3",
            "--k",
            "3",
            "--q",
            "2",
        ],
        &["invariants", "--space", "nowhere"],
        &["frobnicate"],
    ] {
        let r = run(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.err);
        assert!(!r.err.is_empty());
    }
}

#[test]
fn help_is_success() {
    let r = run(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("chambers"));
}

#[test]
fn rank_two_sections_are_drawn_as_bands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conics.svg");
    let p = path.to_string_lossy().into_owned();
    let r = run(&[
        "chambers", "--space", "mbar-pxp", "--n", "1", "--m", "2", "--svg", &p,
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 2);
}
