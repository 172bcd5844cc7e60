use std::fs;
use std::path::{Path, PathBuf};

use r0filters::cli::{run, EXIT_CAPACITY, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("r0filters").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let r = cli(&full);
    (r.code, serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn verify_algebra_exit_codes() {
    let r = cli(&["verify-algebra", &fixture("example34.alg")]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.out);
    assert!(r.out.ends_with("result: pass\n"));

    let dir = TempDir::new().unwrap();
    let text = fs::read_to_string(fixture("example34.alg")).unwrap();
    let mutated = text.replace("arrow d: a a b c 1 1", "arrow d: a b b c 1 1");
    assert_ne!(mutated, text);
    let r = cli(&["verify-algebra", &write(&dir, "bad.alg", &mutated)]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.out.contains("FAIL"), "{}", r.out);
    assert!(r.out.contains("x="), "witness expected: {}", r.out);

    let r = cli(&["verify-algebra", &write(&dir, "junk.alg", "elements: 0 1\nneg: 1\n")]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("line 2"), "{}", r.err);

    let r = cli(&["verify-algebra", "/nonexistent/algebra.alg"]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn enum_listings() {
    let r = cli(&["enum", &fixture("example34.alg"), "--fated", "--oracle"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.out);
    assert!(r.out.contains("  {0, a, b, c, d, 1}\n"));
    assert!(r.out.contains("  {c, d, 1}\n"));
    assert!(r.out.contains("count: 2\n"));
    assert!(r.out.contains("closed under intersection: yes"));
    assert!(r.out.contains("oracle: naive scan agrees"));

    let r = cli(&["enum", &fixture("boolean2.alg")]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("count: 2\n"), "{}", r.out);

    let r = cli(&["enum", &fixture("boolean4.alg"), "--fated", "--oracle"]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("  {1}\n"), "{}", r.out);

    let r = cli(&["enum", &fixture("example34.alg"), "--bound", "4"]);
    assert_eq!(r.code, EXIT_CAPACITY, "{}", r.err);
}

#[test]
fn check_verdicts() {
    let alg = fixture("example34.alg");
    let r = cli(&["check", &alg, &fixture("mu34.fz"), "--k", "2/5", "--notion", "strong-qk"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.out);
    let r = cli(&["check", &alg, &fixture("nu34.fz"), "--k", "1/5", "--notion", "strong-qk"]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.out.contains("FAIL"));
    let r = cli(&["check", &alg, &fixture("mu315.fz"), "--k", "3/10", "--notion", "qk"]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.out.contains("x=c"), "{}", r.out);
    let r = cli(&["check", &alg, &fixture("mu315.fz"), "--k", "0.4", "--notion", "qk"]);
    assert_eq!(r.code, EXIT_PASS);

    let r = cli(&["check", &alg, &fixture("nu34.fz"), "--k", "1/5", "--all"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.out);
    assert!(r.out.contains("implications:"));
    assert!(r.out.contains("strong-qk => qk: vacuous"));
    assert!(r.out.contains("qk => level-qk: holds"));
    assert!(!r.out.contains("VIOLATED"));

    let r = cli(&["check", &alg, &fixture("mu34.fz"), "--k", "1", "--notion", "qk"]);
    assert_eq!(r.code, EXIT_INPUT);
    let r = cli(&["check", &alg, &fixture("mu34.fz"), "--notion", "bogus"]);
    assert_eq!(r.code, EXIT_INPUT);
    let r = cli(&["check", &fixture("boolean2.alg"), &fixture("mu34.fz"), "--notion", "qk"]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn check_json_matches_text() {
    let alg = fixture("example34.alg");
    let nu = fixture("nu34.fz");
    let args = ["check", alg.as_str(), nu.as_str(), "--k", "1/5", "--notion", "strong-qk"];
    let text = cli(&args);
    let (code, v) = json(&args);
    assert_eq!(code, text.code);
    assert_eq!(v["verdict"], "fail");
    let condition = v["condition"].as_str().unwrap();
    assert!(text.out.contains(condition), "{condition} not in {}", text.out);
    for (var, value) in v["witness"].as_object().unwrap() {
        if let Some(s) = value.as_str() {
            assert!(text.out.contains(&format!("{var}={s}")), "{var}={s} not in {}", text.out);
        }
    }
}

#[test]
fn level_tables() {
    let alg = fixture("example34.alg");
    let r = cli(&["levels", &alg, &fixture("mu315.fz"), "--kind", "u", "--to", "7/20"]);
    assert_eq!(r.code, EXIT_PASS);
    let rows: Vec<&str> = r.out.lines().filter(|l| l.starts_with("  t in")).collect();
    assert_eq!(
        rows,
        [
            "  t in (3/10, 7/20]  {c, d}",
            "  t in (1/10, 3/10]  {c, d, 1}",
            "  t in (0, 1/10]  {0, a, b, c, d, 1}",
        ]
    );

    let r = cli(&["levels", &alg, &fixture("nu34.fz"), "--k", "1/5", "--kind", "qk"]);
    let rows: Vec<&str> = r.out.lines().filter(|l| l.starts_with("  t in")).collect();
    assert_eq!(rows, ["  t in (1/2, 1]  {0, a, b, c, d, 1}", "  t in (2/5, 1/2]  {c, d, 1}"]);

    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one.fz", "0 = 1\na = 1\nb = 1\nc = 1\nd = 1\n1 = 1\n");
    let r = cli(&["levels", &alg, &one, "--kind", "u"]);
    let rows: Vec<&str> = r.out.lines().filter(|l| l.starts_with("  t in")).collect();
    assert_eq!(rows, ["  t in (0, 1]  {0, a, b, c, d, 1}"]);

    let (code, v) = json(&["levels", &alg, &fixture("mu315.fz"), "--kind", "u", "--to", "7/20"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["u"][0]["lo"], "3/10");
    assert_eq!(v["u"][0]["set"], "{c, d}");

    let r = cli(&["levels", &alg, &fixture("mu315.fz"), "--from", "1/2", "--to", "1/2"]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn construct_modes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let out_s = out.display().to_string();
    let b4 = fixture("boolean4.alg");

    let chain = write(&dir, "chain.txt", "# unit then everything\nfilter: {1}\nfilter: L\n");
    let r = cli(&["construct", &b4, &chain, "--mode", "chain", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_PASS, "{}{}", r.out, r.err);
    let mu = fs::read_to_string(out.join("mu.fz")).unwrap();
    assert!(mu.contains("1 = 1/2"), "{mu}");
    let r = cli(&["levels", &b4, &out.join("mu.fz").display().to_string(), "--kind", "u", "--to", "1/2"]);
    assert!(r.out.contains("(1/4, 1/2]  {1}\n"), "{}", r.out);

    let ex = fixture("example34.alg");
    let r = cli(&["construct", &ex, &chain, "--mode", "chain", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.err.contains("not a fated filter"), "{}", r.err);

    let two = write(&dir, "two.txt", "filter: {c, d, 1}\nt1: 1/2\nt2: 1/2\n");
    let r = cli(&["construct", &ex, &two, "--mode", "two-level", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_FAIL);
    let two = write(&dir, "two.txt", "filter: {c, d, 1}\nt1: 3/5\nt2: 1/5\n");
    let r = cli(&["construct", &ex, &two, "--mode", "two-level", "--k", "1/5", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);

    let sup = write(&dir, "sup.txt", "member: 1/5 {c, d, 1}\nmember: 1/10 L\n");
    let r = cli(&["construct", &ex, &sup, "--mode", "sup", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("mu: 0=1/10 a=1/10 b=1/10 c=1/5 d=1/5 1=1/5"), "{}", r.out);

    let bad = write(&dir, "bad.txt", "filter: {c, d, 1}\nwidth: 3\n");
    let r = cli(&["construct", &ex, &bad, "--mode", "two-level", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("line 2"), "{}", r.err);

    let r = cli(&["construct", &b4, &fixture("three_values.fz"), "--mode", "decompose", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_PASS, "{}{}", r.out, r.err);
    assert!(out.join("nu.fz").exists() && out.join("gamma.fz").exists());
    assert!(r.out.contains("pass  nu u gamma = mu"));

    let r = cli(&["construct", &ex, &fixture("mu315.fz"), "--mode", "decompose", "--k", "2/5", "--out-dir", &out_s]);
    assert_eq!(r.code, EXIT_FAIL);
}

#[test]
fn verify_paper_fixtures_only() {
    let r = cli(&["verify-paper", "--sweep", "0"]);
    assert_eq!(r.code, EXIT_FAIL, "the unit set is not fated in this algebra");
    assert!(r.out.contains("seed: 1  sweep: 0"));
    assert!(r.out.contains("  pass  nu34.fz fails strong-qk at k = 1/5"));
    assert!(r.out.contains("  pass  mu315.fz fails qk at k = 3/10"));
    assert!(r.out.contains("  FAIL  {1} is a fated filter"));
    assert!(r.out.ends_with("result: 51 of 52 claims hold, 1 violated\n"), "{}", r.out);

    let b4 = fixture("boolean4.alg");
    let r = cli(&["verify-paper", "--algebra", &b4, "--sweep", "200"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.out);

    let r = cli(&["verify-paper", "--algebra", &b4, "--sweep", "200", "--mutation", "drop-quasi"]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.out.contains("minimized subject"), "{}", r.out);
}

#[test]
fn verify_paper_is_deterministic_across_modes() {
    let b4 = fixture("boolean4.alg");
    let base = ["verify-paper", "--algebra", b4.as_str(), "--sweep", "300", "--seed", "7"];
    let par = cli(&base);
    let again = cli(&base);
    let mut seq_args = base.to_vec();
    seq_args.push("--sequential");
    let seq = cli(&seq_args);
    assert_eq!(par.out, again.out);
    assert_eq!(par.out, seq.out);

    let (code, v) = json(&base);
    assert_eq!(code, par.code);
    assert_eq!(v["seed"], 7);
    for section in v["sections"].as_array().unwrap() {
        for claim in section["claims"].as_array().unwrap() {
            let name = claim["claim"].as_str().unwrap();
            let mark = if claim["violations"] == 0 { "pass" } else { "FAIL" };
            assert!(par.out.contains(&format!("  {mark}  {name}")), "{name}");
        }
    }
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]).code, EXIT_INPUT);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(cli(&["check", "a", "b"]).code, EXIT_INPUT);
    assert_eq!(cli(&["--help"]).code, EXIT_PASS);
}
