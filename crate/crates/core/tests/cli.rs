use std::process::{Command, Output};

fn ffquad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffquad")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    ffquad(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = ffquad(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["unit"]), 0);
    assert_eq!(code(&["unit", "--d", "1,1"]), 2);
    assert_eq!(code(&["unit", "--q", "9"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["vaughan-check", "--nmax", "1"]), 2);
    assert_eq!(code(&["typesums", "--nmax", "2", "--alpha", "3", "--beta", "3"]), 2);
    assert_eq!(code(&["scan", "--nmax", "30"]), 3);
    assert_eq!(code(&["pnt", "--nmax", "5", "--scale-cap", "100"]), 3);
    assert_eq!(code(&["unit", "--config", "/nonexistent/ffquad.toml"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn unit_row() {
    let s = stdout(&["unit"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("q,d,u,abs_exp,abs_u,norm,cf_period,certified"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "3");
    assert_eq!(row[3], "1");
    assert_eq!(row[7], "true");
}

#[test]
fn json_output_is_an_array() {
    let s = stdout(&["pnt", "--nmax", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (i, r) in rows.iter().enumerate() {
        let n = i as u32 + 1;
        assert_eq!(r["pnt_sum"], r["lambda_enumerated"]);
        assert_eq!(r["q_pow_N"].as_u64().unwrap(), 3u64.pow(n));
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "q = 5\nnmax = 2\nformat = \"json\"\n").unwrap();
    let p = path.to_str().unwrap();
    let s = stdout(&["pnt", "--config", p]);
    let v: Vec<serde_json::Value> = serde_json::from_str(&s).unwrap();
    assert_eq!(v.len(), 2);
    assert_eq!(v[1]["q_pow_N"], 25);
    let s = stdout(&["pnt", "--config", p, "--q", "3", "--format", "csv"]);
    assert!(s.starts_with("N,"));
    assert!(s.lines().nth(2).unwrap().contains(",9,"));
    std::fs::write(&path, "unknown_key = 1\n").unwrap();
    assert_eq!(code(&["pnt", "--config", p]), 2);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let args = ["scan", "--nmin", "4", "--nmax", "5", "--seed", "3"];
    let direct = stdout(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    assert_eq!(stdout(&with_out), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn runs_are_deterministic() {
    let a = stdout(&["poisson-check", "--samples", "20", "--seed", "5"]);
    let b = stdout(&["poisson-check", "--samples", "20", "--seed", "5"]);
    assert_eq!(a, b);
    let c = stdout(&["dirichlet", "--seed", "5", "--max-norm-exp", "4"]);
    let d = stdout(&["dirichlet", "--seed", "5", "--max-norm-exp", "4"]);
    assert_eq!(c, d);
}

#[test]
fn rejected_target_exits_two() {
    // x = (0, 0) is sigma(0/1)
    let out = ffquad(&["dirichlet", "--target", "0:0,0,0:-2;0:0,0,0:-2"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(2), "{err}");
    assert!(err.contains("target rejected"), "{err}");
    assert_eq!(code(&["dirichlet", "--target", "0:0:-10;0:0:-10"]), 2);
}
