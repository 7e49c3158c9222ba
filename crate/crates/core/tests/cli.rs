use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zquartic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn factor_and_gcd() {
    let o = run(&["factor", "60"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "60 = (1+i)^4*(-1-2i)*(-1+2i)*(-3)\nnu = 7\nin G: true\n");
    let o = run(&["gcd", "6+2i", "4"]);
    assert_eq!(stdout(&o), "-2+2i\n");
    let o = run(&["factor", "-1+2i"]);
    assert_eq!(stdout(&o), "-1+2i = (-1+2i)\nnu = 1\nin G: true\n");
    let o = run(&["gcd", "-4", "-2i"]);
    assert_eq!(stdout(&o), "2i\n");
    assert_eq!(run(&["gcd", "0", "0"]).status.code(), Some(2));
    assert_eq!(run(&["factor", "1+"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "3.1", "--bound", "4"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "3.8"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--equation", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "--obstruction", "3.9/x"]).status.code(), Some(2));
    assert_eq!(run(&["resolvent", "1", "1", "--equation", "3.1"]).status.code(), Some(2));
}

#[test]
fn csv_and_json_output() {
    let o = run(&["search", "--equation", "3.3", "--bound", "2", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z,primitive,orbit_id"));
    assert_eq!(lines.count(), 32);
    let o = run(&["search", "--equation", "3.6", "--bound", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["raw_count"], 16);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# defaults\nequation = 3.3\nbound = 2\nformat = csv\nworkers = 2\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = stdout(&run(&["search", "--config", p]));
    assert!(from_file.starts_with("x,y,z,primitive,orbit_id\n"));
    let flags_win = run(&["search", "--config", p, "--format", "json", "--equation", "3.1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&flags_win)).unwrap();
    assert_eq!(v["equation"]["id"], "3.1");
    assert_eq!(v["bound"], 2);

    std::fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(run(&["search", "--config", p]).status.code(), Some(2));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "7"]);
    let b = run(&["selftest", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("7/7 suites passed\n"));
}

#[test]
fn descent_certificate_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.txt");
    let p = path.to_str().unwrap();
    let o = run(&["descent-check", "--bound", "3", "--emit", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["descent-check", p]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "VALID"));

    let text = std::fs::read_to_string(&path).unwrap();
    let last = text.lines().last().unwrap();
    let (head, nu) = last.rsplit_once(',').unwrap();
    let bumped: u64 = nu.trim().parse::<u64>().unwrap() + 1;
    let tampered = text.replace(last, &format!("{head},{bumped}"));
    std::fs::write(&path, tampered).unwrap();
    let o = run(&["descent-check", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("INVALID"));
}
