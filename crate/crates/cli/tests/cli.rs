use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_nccum");

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn nccum");
    // Commands that fail early may exit before reading stdin.
    if let Err(e) = child.stdin.take().unwrap().write_all(stdin.as_bytes()) {
        assert_eq!(e.kind(), std::io::ErrorKind::BrokenPipe, "{e}");
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nccum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const STANDARD: &str = "vars 1\norder 2\n1 : 0\n1 1 : 1\n";

const LAW: &str = "\
vars 1
order 4
1 : 1/2, 1
1 1 : 2, -1/3
1 1 1 : -1, 2
1 1 1 1 : 5/4, 0
";

#[test]
fn centred_unit_variance() {
    let out = run(&["cumulants", "--family", "free"], STANDARD);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("family free"), "{text}");
    assert!(text.contains("1 : 0, 0"), "{text}");
    assert!(text.contains("1 1 : 1, 0"), "{text}");
}

#[test]
fn moments_invert_cumulants() {
    let c = run(&["cumulants", "--family", "monotone"], LAW);
    assert!(c.status.success());
    let m = run(&["moments"], &stdout(&c));
    assert!(m.status.success());
    let back = run(&["cumulants", "--family", "monotone"], &stdout(&m));
    assert_eq!(stdout(&back), stdout(&c));
}

#[test]
fn bp_free_cumulants_are_boolean() {
    let bp = run(&["bp", "--t", "1"], LAW);
    assert!(bp.status.success());
    let free = run(&["cumulants", "--family", "free"], &stdout(&bp));
    let boolean = run(&["cumulants", "--family", "boolean"], LAW);
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("family")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&free)), strip(stdout(&boolean)));

    let inv = run(&["bp", "--inverse"], &stdout(&bp));
    let canonical = run(&["power", "--kind", "free", "--s", "1"], LAW);
    assert_eq!(stdout(&inv), stdout(&canonical));
}

#[test]
fn convert_matches_direct() {
    let free = run(&["cumulants", "--family", "free"], LAW);
    let conv = run(&["convert", "--to", "boolean"], &stdout(&free));
    let direct = run(&["cumulants", "--family", "boolean"], LAW);
    assert!(conv.status.success());
    assert_eq!(stdout(&conv), stdout(&direct));
}

#[test]
fn convolve_and_join() {
    let a = temp_file("a.law", LAW);
    let b = temp_file("b.law", STANDARD);
    let out = run(&["convolve", "--kind", "free", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(4), "orders differ");
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[dimension]"));

    let j = run(&["join", "--kind", "boolean", a.to_str().unwrap(), a.to_str().unwrap()], "");
    assert!(j.status.success());
    assert!(stdout(&j).starts_with("vars 2\norder 4\n"));
}

#[test]
fn verify_bp_semigroup() {
    let out = run(&["verify", "--suite", "bp-semigroup", "--order", "6", "--seed", "7"], "");
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with("summary")));
    assert!(text.ends_with("summary: 5 passed, 0 failed\n"), "{text}");
}

#[test]
fn verify_every_suite_passes() {
    let out = run(&["verify", "--suite", "all", "--order", "4", "--seed", "11", "--laws", "2"], "");
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "roundtrips", "--order", "4", "--seed", "3"];
    assert_eq!(stdout(&run(&args, "")), stdout(&run(&args, "")));
    let c = ["cumulants", "--family", "boolean"];
    assert_eq!(stdout(&run(&c, LAW)), stdout(&run(&c, LAW)));
}

#[test]
fn partitions_listing() {
    let out = run(&["partitions", "--n", "4", "--family", "noncrossing"], "");
    assert_eq!(stdout(&out).lines().count(), 14);
    let out = run(&["partitions", "--n", "3", "--family", "irreducible-nc", "--stats"], "");
    assert_eq!(stdout(&out).lines().count(), 2);
    assert!(stdout(&out).contains("tree_factorial="));
    let out = run(&["partitions", "--n", "11"], "");
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn exit_codes() {
    let parse = run(&["cumulants", "--family", "free"], "vars 1\norder 1\n1 : x\n");
    assert_eq!(parse.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&parse.stderr).starts_with("error[parse]"));

    let usage = run(&["cumulants", "--family", "sideways"], STANDARD);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"], "").status.code(), Some(2));

    let domain = run(&["power", "--kind", "free", "--s", "-1"], LAW);
    assert_eq!(domain.status.code(), Some(5));

    let missing = run(&["moments", "--in", "/nonexistent/table"], "");
    assert_eq!(missing.status.code(), Some(7));

    let size = run(&["verify", "--suite", "roundtrips", "--order", "0"], "");
    assert_eq!(size.status.code(), Some(6));
}
