use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ggf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggf"))
        .args(args)
        .output()
        .expect("run ggf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ggf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn derivations() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("derivations")
}

/// Coefficients of a printed univariate series, by naive parsing.
fn coeffs(series: &str, n: usize) -> Vec<i64> {
    let mut out = vec![0; n + 1];
    let text = series.trim().replace(" - ", " + -");
    for term in text.split(" + ") {
        let term = term.trim();
        let (c, power) = match term.split_once('q') {
            None => (term.parse::<i64>().unwrap(), 0),
            Some((c, rest)) => {
                let c = c.trim_end_matches('*');
                let c = match c {
                    "" => 1,
                    "-" => -1,
                    _ => c.parse().unwrap(),
                };
                let p = rest.strip_prefix('^').map_or(1, |e| e.parse().unwrap());
                (c, p)
            }
        };
        out[power] += c;
    }
    out
}

#[test]
fn count_basics_only_one_variable() {
    let f = temp_file("one.sys", "vars: x\n");
    let o = ggf(&["count", f.to_str().unwrap(), "--weight", "3"]);
    assert!(o.status.success());
    assert_eq!(coeffs(&stdout(&o), 3), [1, 1, 1, 1]);
}

#[test]
fn minc_display() {
    let o = ggf(&["family", "minc", "--weight", "6"]);
    assert!(o.status.success());
    assert_eq!(coeffs(&stdout(&o), 6), [1, 1, 2, 4, 7, 13, 24]);
}

#[test]
fn alhc_four_against_product() {
    // ∏_{i=1}^{4} (1 + q^i)/(1 − q^{i+1}), expanded by hand-rolled series arithmetic
    let n = 10;
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for i in 1..=4 {
        for d in (i..=n).rev() {
            p[d] += p[d - i];
        }
        for d in (i + 1)..=n {
            p[d] += p[d - i - 1];
        }
    }
    let o = ggf(&["family", "alhc", "--n", "4", "--weight", "10"]);
    assert!(o.status.success());
    assert_eq!(coeffs(&stdout(&o), n), p);
}

#[test]
fn solve_round_trips_through_gf_files() {
    let f = temp_file("a2.sys", "vars: a b\na >= b/2 >= 0\n");
    let solved = stdout(&ggf(&["solve", f.to_str().unwrap()]));
    let g = temp_file("a2.gf", &format!("vars: a b\n{solved}"));
    let again = ggf(&["gf", g.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), solved);
    let expanded = stdout(&ggf(&["gf", g.to_str().unwrap(), "--weight", "8"]));
    let counted = stdout(&ggf(&["count", f.to_str().unwrap(), "--weight", "8"]));
    assert_eq!(expanded, counted);
}

#[test]
fn fast_path_agrees() {
    let f = temp_file("square.sys", "vars: a b\n2*a >= b\nb >= a\n");
    let slow = stdout(&ggf(&["expand", f.to_str().unwrap(), "--weight", "10"]));
    let gf = stdout(&ggf(&["solve", f.to_str().unwrap(), "--fast-path"]));
    let g = temp_file("square.gf", &format!("vars: a b\n{gf}"));
    assert_eq!(
        stdout(&ggf(&["gf", g.to_str().unwrap(), "--weight", "10"])),
        slow
    );
}

#[test]
fn listing() {
    let f = temp_file("a2list.sys", "vars: a b\na >= b/2 >= 0\n");
    let o = ggf(&["count", f.to_str().unwrap(), "--weight", "2", "--list"]);
    assert_eq!(
        stdout(&o),
        "# weight 0\n0 0\n# weight 1\n1 0\n# weight 2\n1 1\n2 0\n"
    );
}

#[test]
fn tracked_expansion_matches_tracked_count() {
    let f = temp_file("track.sys", "vars: a b c\na >= b >= c\n");
    let p = f.to_str().unwrap();
    let e = stdout(&ggf(&["expand", p, "--weight", "5", "--track", "b"]));
    let c = stdout(&ggf(&["count", p, "--weight", "5", "--track", "b"]));
    assert_eq!(e, c);
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.sys", "vars: a\na >= b\n");
    let o = ggf(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 6"));
    assert_eq!(ggf(&["solve"]).status.code(), Some(2));
    assert_eq!(
        ggf(&["family", "nope", "--weight", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(ggf(&["verify", "--suite", "nope"]).status.code(), Some(2));

    let big = temp_file("big.sys", "vars: a b c\na >= b/2 >= c/3\n");
    let o = Command::new(env!("CARGO_BIN_EXE_ggf"))
        .args(["solve", big.to_str().unwrap()])
        .env("GGF_STEP_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_identities_passes() {
    let o = ggf(&["verify", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["odd1", "even1", "odd2", "even2", "qchu-limit", "qchu-zero"] {
        assert!(out.contains(&format!("PASS {name}:")), "{out}");
    }
}

#[test]
fn verify_is_deterministic() {
    let a = ggf(&[
        "verify", "--suite", "random", "--seed", "9", "--cases", "20",
    ]);
    let b = ggf(&[
        "verify", "--suite", "random", "--seed", "9", "--cases", "20",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn derivation_scripts_match_counts() {
    let dir = derivations();
    for name in ["alhc2", "tworow2", "minc3", "lhp3"] {
        let sys = dir.join(format!("{name}.sys"));
        let steps = dir.join(format!("{name}.steps"));
        let o = ggf(&["steps", sys.to_str().unwrap(), steps.to_str().unwrap()]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let out = stdout(&o);
        let (trace, gf) = out.split_once("result:\n").unwrap();
        assert!(trace.lines().all(|l| l.starts_with('[')), "{name}");
        let vars = std::fs::read_to_string(&sys)
            .unwrap()
            .lines()
            .find(|l| l.starts_with("vars:"))
            .unwrap()
            .to_string();
        let g = temp_file(&format!("{name}.gf"), &format!("{vars}\n{gf}"));
        let expanded = stdout(&ggf(&["gf", g.to_str().unwrap(), "--weight", "12"]));
        let counted = stdout(&ggf(&["count", sys.to_str().unwrap(), "--weight", "12"]));
        assert_eq!(expanded, counted, "{name}");
    }
}
