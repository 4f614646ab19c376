#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdin: Option<&'static str>,
}

const fn case(name: &'static str, args: &'static [&'static str]) -> Case {
    Case { name, args, stdin: None }
}

const fn piped(name: &'static str, args: &'static [&'static str], stdin: &'static str) -> Case {
    Case { name, args, stdin: Some(stdin) }
}

const MISTYPED: &str = "\
def id = \\(x:p). x
assume a : p
check id a : p
check id a : q
normalize id a
";

const PROGRAM: &str = "\
-- composition, then a let over a box
def compose = \\(f:q -> r). \\(g:p -> q). \\(x:p). f (g x)
assume h : p -> q
normalize compose (\\(y:q). y) h
normalize let [z] = [h] in z
trace (\\(x:Ex p). x) [\\(y:p). y]
";

pub const CASES: &[Case] = &[
    case("check-prop1", &["check", "fixtures/prop1.jex"]),
    case("check-prop6-unicode", &["--unicode", "check", "fixtures/prop6.jex"]),
    case("check-lolli", &["check", "fixtures/lolli.jex"]),
    case("check-elaboration-resugar", &["--resugar", "check", "fixtures/elaboration.jex"]),
    piped("check-type-failure", &["check", "-"], MISTYPED),
    piped("check-json", &["--json", "check", "-"], MISTYPED),
    piped("check-unknown-name", &["check", "-"], "check nothing : p\n"),
    piped("check-syntax-error", &["check", "-"], "def id = \\(x:p x\n"),
    case("check-missing-file", &["check", "fixtures/no-such-file.jex"]),
    piped("normalize-expression", &["normalize", "-"], "(\\(f:p -> p). f) (\\(x:p). x) a\n"),
    piped("normalize-program", &["normalize", "-"], PROGRAM),
    piped("normalize-fuel", &["normalize", "--fuel", "1", "-"], "(\\(f:p -> p). f) (\\(x:p). x) a\n"),
    case("trace-application", &["trace", "(\\(f:p -> p). f) (\\(x:p). x) a"]),
    case("trace-let-unicode", &["--unicode", "--resugar", "trace", "let [x] = [a] in (\\j(y:p). [y]j) @j x"]),
    case("trace-syntax-error", &["trace", "\\(x:p). @j"]),
    case("translate-to-lax", &["translate", "--to-lax", "Ex p -> q"]),
    case("translate-from-lax", &["translate", "--from-lax", "O (p => O q)"]),
    case("translate-from-lax-resugar", &["--resugar", "--unicode", "translate", "--from-lax", "p => O q"]),
    case("derive-lax-ii", &["derive", "lax-ii", "p"]),
    case("derive-prop-1l", &["derive", "prop-1L", "p", "q"]),
    case("derive-trunc-elim", &["derive", "trunc-elim", "\\j(x:p). [x]j"]),
    case("derive-unknown-builder", &["derive", "prop-7", "p"]),
    case("fuzz-roundtrip", &["fuzz", "--suite", "roundtrip", "--count", "50"]),
    case("fuzz-subject-reduction-just", &["fuzz", "--suite", "subject-reduction", "--kind", "just", "--count", "100"]),
    case("fuzz-normalization-json", &["--json", "fuzz", "--suite", "normalization", "--kind", "true", "--count", "100"]),
];

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Exit code, stdout and stderr of one invocation, in the golden file layout.
pub fn run(case: &Case) -> String {
    let mut child = Command::new(env!("CARGO_BIN_EXE_jex"))
        .args(case.args)
        .current_dir(workspace_root())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the jex binary runs");
    let input = case.stdin.unwrap_or_default().to_string();
    let mut stdin = child.stdin.take().unwrap();
    std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let out = child.wait_with_output().unwrap();
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap()
    )
}

/// Names of the cases whose output differs from the golden file. With
/// `JEX_BLESS` set the golden files are rewritten instead.
pub fn golden_mismatches() -> Vec<(&'static str, String, String)> {
    let bless = std::env::var_os("JEX_BLESS").is_some();
    let mut bad = Vec::new();
    for case in CASES {
        let got = run(case);
        let path = golden_path(case.name);
        if bless {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        if got != want {
            bad.push((case.name, want, got));
        }
    }
    bad
}
