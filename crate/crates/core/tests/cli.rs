use std::fs;
use std::path::PathBuf;
use std::process::Command;

use decireal::realnum::parse_real;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn decireal(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_decireal"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn set_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("decireal-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn eval_sqrt_two() {
    let r = decireal(&["eval", "sqrt(2)", "--digits", "10"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "1.4142135623\n"));
}

#[test]
fn eval_exact_values() {
    assert_eq!(decireal(&["eval", "1/8", "--digits", "5"]).stdout, "0.125\n");
    assert_eq!(decireal(&["eval", "1/3", "--digits", "4"]).stdout, "0.3333\n");
    assert_eq!(decireal(&["eval", "-2 * 0.(3)", "--digits", "3"]).stdout, "-0.666\n");
}

#[test]
fn eval_enclosure() {
    let r = decireal(&["eval", "sqrt(2)", "--digits", "5", "--enclosure"]);
    assert_eq!(r.code, 0);
    let body = r.stdout.trim().trim_start_matches('[').trim_end_matches(']');
    let (lo, hi) = body.split_once(", ").expect("[lo, hi]");
    let (lo, hi) = (parse_real(lo).unwrap(), parse_real(hi).unwrap());
    let width = decireal::arithmetic::sub(&hi, &lo).as_rational().unwrap();
    assert!(width <= decireal::Rational::new(1, 100_000).unwrap());
    assert!(lo.as_rational().unwrap() * lo.as_rational().unwrap() <= decireal::Rational::from_integer(2));
}

#[test]
fn unstable_digits_exit_two() {
    let r = decireal(&["eval", "sqrt(2) * sqrt(2)", "--digits", "5"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.starts_with('['), "{}", r.stdout);
    assert!(!r.stderr.is_empty());
}

#[test]
fn cmp_outcomes() {
    let r = decireal(&["cmp", "0.(3)", "1/3", "--budget", "10"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "=\n"));
    assert_eq!(decireal(&["cmp", "sqrt(2)", "1.5"]).stdout, "<\n");
    assert_eq!(decireal(&["cmp", "-1", "-2"]).stdout, ">\n");
    let r = decireal(&["cmp", "sqrt(2) * sqrt(2)", "2", "--budget", "20"]);
    assert_eq!((r.code, r.stdout.as_str()), (3, "undecided\n"));
}

#[test]
fn between_witnesses() {
    assert_eq!(decireal(&["between", "1.9999(8)", "2"]).stdout, "1.99999\n");
    assert_eq!(decireal(&["between", "0.88(7)", "5.(1)"]).stdout, "0.9\n");
    let r = decireal(&["between", "2", "1"]);
    assert_eq!(r.code, 1);
    assert!(!r.stderr.is_empty());
}

#[test]
fn sup_of_set_files() {
    let b = set_file("b.set", "# family: paper-B\n");
    let r = decireal(&["sup", b.to_str().unwrap(), "--digits", "5"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "1\n"));
    let a = set_file("a.set", "# family: paper-A\n");
    assert_eq!(decireal(&["sup", a.to_str().unwrap(), "--digits", "8"]).stdout, "2.12011111\n");
    let finite = set_file("finite.set", "# three members\n0.5\n1/3\n-2\n");
    assert_eq!(decireal(&["sup", finite.to_str().unwrap()]).stdout, "0.5\n");
}

#[test]
fn rep_digits() {
    let r = decireal(&["rep", "1/7", "--digits", "12"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "0.142857142857\n"));
    assert_eq!(decireal(&["rep", "-5/4", "--digits", "4"]).stdout, "-1.2500\n");
}

#[test]
fn errors_exit_one() {
    for args in [
        vec!["eval", "1 +"],
        vec!["eval", "1/0"],
        vec!["cmp", "x", "1"],
        vec!["sup", "/nonexistent/file.set"],
        vec!["rep", "sqrt(2)"],
        vec!["frobnicate"],
    ] {
        let r = decireal(&args);
        assert_eq!(r.code, 1, "{args:?}");
        assert_eq!(r.stderr.trim_end().lines().count(), 1, "{args:?}: {}", r.stderr);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "sqrt(3) / (1 + sqrt(5))", "--digits", "60"];
    let first = decireal(&args);
    for _ in 0..3 {
        let again = decireal(&args);
        assert_eq!((again.code, &again.stdout), (first.code, &first.stdout));
    }
}

#[test]
fn printed_values_reparse() {
    for expr in ["22/7", "-1/6", "0.1(6) * 3", "2.5 - 0.5"] {
        let printed = decireal(&["eval", expr, "--digits", "40"]).stdout;
        let x = decireal::cli::parse_expression(expr).unwrap();
        let back = parse_real(printed.trim()).unwrap();
        assert_eq!(back, x.prefix(40).unwrap().to_terminating().into(), "{expr}");
    }
}
