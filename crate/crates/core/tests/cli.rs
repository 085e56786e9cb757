use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrmoon"))
        .args(args)
        .output()
        .expect("spawn irrmoon")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_j() {
    let o = run(&["expand", "E4^3/eta^24 - 744", "--trunc", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("196884") && s.contains("21493760"), "{s}");
}

#[test]
fn expand_lines_and_json() {
    let o = run(&[
        "expand",
        "eta[0/5]*eta[2/5]*eta[3/5]/(eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)",
        "--format",
        "lines",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.contains("-10")));

    let o = run(&["--json", "expand", "eta^24", "--trunc", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["terms"][0]["exp"], "1/1");
    assert_eq!(v["terms"][1]["coeff"], "-24");
}

#[test]
fn group_actions() {
    let o = run(&[
        "group",
        "--p",
        "7",
        "--gens",
        "delta_7,alpha_7i",
        "--action",
        "identify",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("computed=A4"));

    let o = run(&["group", "--p", "13", "--gens", "", "--action", "genus"]);
    assert!(
        stdout(&o).contains("CHECK genus INFO expected=- computed=50"),
        "{}",
        stdout(&o)
    );

    let o = run(&[
        "group",
        "--p",
        "5",
        "--gens",
        "alpha_5i,delta_5",
        "--action",
        "relations",
        "--relations",
        "alpha_5i^3; delta_5^3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(
        s.contains("relation_alpha_5i^3 PASS") && s.contains("relation_delta_5^3 FAIL"),
        "{s}"
    );
}

#[test]
fn verify_single_case_and_tables() {
    let o = run(&["verify", "--case", "7iii"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("CASE 7iii\n"));

    let o = run(&["tables", "check"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn errors_exit_two() {
    let o = run(&["expand", "eta[1/"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = run(&["verify", "--case", "9x"]);
    assert_eq!(o.status.code(), Some(2));
}
