use std::fs;
use std::process::{Command, Output};

fn dessin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dessin"))
        .env_remove("DESSIN_CACHE")
        .args(args)
        .output()
        .expect("run dessin")
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> &str {
    std::str::from_utf8(&o.stderr).unwrap()
}

#[test]
fn coeff_examples() {
    let o = dessin(&[
        "coeff",
        "--d",
        "1",
        "--k",
        "1",
        "--l",
        "1",
        "--profile",
        "1^1",
    ]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "N=1, marked=1\n"));
    let o = dessin(&[
        "coeff",
        "--d",
        "2",
        "--k",
        "2",
        "--l",
        "1",
        "--profile",
        "2^1",
    ]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "N=1/2, marked=1\n")
    );
    let o = dessin(&[
        "coeff",
        "--d",
        "2",
        "--k",
        "1",
        "--l",
        "1",
        "--profile",
        "1^2",
    ]);
    assert_eq!(stdout(&o), "N=1/2, marked=1\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &[
            "coeff",
            "--d",
            "2",
            "--k",
            "2",
            "--l",
            "1",
            "--profile",
            "2^",
        ][..],
        &[
            "coeff",
            "--d",
            "4",
            "--k",
            "2",
            "--l",
            "1",
            "--profile",
            "2^1",
        ],
        &["table", "--dmax", "0"],
        &["table", "--dmax", "3", "--format", "yaml"],
        &["frobnicate"],
    ] {
        let o = dessin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn table_outputs() {
    let o = dessin(&["table", "--dmax", "1", "--marked"]);
    assert_eq!(stdout(&o), "d,g,G_marked\n1,0,1\n");

    let o = dessin(&["table", "--dmax", "5", "--marked", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o)).unwrap();
    assert_eq!(v["dmax"], 5);
    assert_eq!(v["marked"], true);
    let last = v["entries"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last, serde_json::json!({"d": 5, "g": 2, "value": "8"}));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = dessin(&["table", "--dmax", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "d,g,G_num,G_den\n1,0,1,1\n1,1,0,1\n2,0,3,2\n2,1,0,1\n3,0,4,1\n3,1,1,3\n4,0,14,1\n4,1,15,4\n"
    );

    let o = dessin(&["table", "--dmax", "2", "--out", "/nonexistent/dir/t.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn checks_pass() {
    let o = dessin(&["kp", "--dmax", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = dessin(&["oracle", "--d", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = dessin(&["closed", "--dmax", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 40);
    let o = dessin(&["oracle", "--d", "12"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_is_reused_and_extended() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("f.cache");
    let c = cache.to_str().unwrap();

    let first = dessin(&["-v", "--cache", c, "table", "--dmax", "8", "--marked"]);
    assert!(first.status.success());
    assert!(
        stderr(&first).contains("computed F_2..F_8"),
        "{}",
        stderr(&first)
    );
    let bytes = fs::read(&cache).unwrap();
    assert!(bytes.starts_with(b"DESSIN-F v1 dmax=8\n"));

    let second = dessin(&["-v", "--cache", c, "table", "--dmax", "8", "--marked"]);
    assert_eq!(second.stdout, first.stdout);
    assert!(stderr(&second).contains("loaded F_1..F_8"));
    assert!(!stderr(&second).contains("computed"), "{}", stderr(&second));
    assert_eq!(fs::read(&cache).unwrap(), bytes);

    let smaller = dessin(&["-v", "--cache", c, "table", "--dmax", "5", "--marked"]);
    assert!(!stderr(&smaller).contains("computed"));
    assert_eq!(
        stdout(&smaller),
        stdout(&dessin(&["table", "--dmax", "5", "--marked"]))
    );

    let larger = dessin(&[
        "-v",
        "--cache",
        c,
        "coeff",
        "--d",
        "10",
        "--k",
        "1",
        "--l",
        "1",
        "--profile",
        "10^1",
    ]);
    assert!(larger.status.success());
    assert!(stderr(&larger).contains("computed F_9..F_10"));
    let extended = fs::read_to_string(&cache).unwrap();
    let body = |s: &str| s.split_once('\n').unwrap().1.to_string();
    assert!(body(&extended).starts_with(&body(std::str::from_utf8(&bytes).unwrap())));
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.cache");
    let o = Command::new(env!("CARGO_BIN_EXE_dessin"))
        .env("DESSIN_CACHE", &cache)
        .args(["table", "--dmax", "3"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(fs::read_to_string(&cache)
        .unwrap()
        .starts_with("DESSIN-F v1 dmax=3\n"));

    fs::write(&cache, "DESSIN-F v1 dmax=2\n1 1 1 1 1/2\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dessin"))
        .env("DESSIN_CACHE", &cache)
        .args(["table", "--dmax", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}
