use super::*;
use crate::quadratic::QuadElem;

fn opts() -> Options {
    Options::default()
}

#[test]
fn defaults_per_command() {
    let c = RunConfig::resolve(Command::Scan, opts()).unwrap();
    assert_eq!((c.q(), c.d_text.as_str(), c.nmin, c.nmax), (3, "1,0,1", 4, 8));
    assert_eq!((c.alpha, c.beta, c.seed, c.epsilon), (3, 3, 1, 0.01));
    assert_eq!(c.format, Format::Csv);
    assert!(c.tail < 0);
    let c = RunConfig::resolve(Command::PoissonCheck, Options { q: Some(5), ..opts() }).unwrap();
    assert_eq!((c.d_text.as_str(), c.samples, c.nmax), ("2,0,1", 100, 5));
    let c = RunConfig::resolve(Command::Dirichlet, opts()).unwrap();
    assert_eq!(c.max_norm_exp, 6);
    assert_eq!(c.c_exp, c.field.half_deg() + c.field.unit().abs_exp);
}

#[test]
fn bad_fields_are_config_errors() {
    for (q, d) in [(3, "1,1"), (3, "0,0,1"), (4, "1,0,1"), (3, "1,x,1")] {
        let e = RunConfig::resolve(Command::Unit, Options { q: Some(q), d: Some(d.into()), ..opts() })
            .unwrap_err();
        assert_eq!(exit_code(&e), 2, "q={q} d={d}: {e}");
    }
    let e = RunConfig::resolve(Command::Scan, Options { epsilon: Some(0.2), ..opts() }).unwrap_err();
    assert_eq!(exit_code(&e), 2);
    let e = RunConfig::resolve(Command::Scan, Options { nmin: Some(5), nmax: Some(4), ..opts() }).unwrap_err();
    assert_eq!(exit_code(&e), 2);
}

#[test]
fn alpha_beta_rejection() {
    let o = Options { nmax: Some(2), alpha: Some(3), beta: Some(3), ..opts() };
    for cmd in [Command::VaughanCheck, Command::Typesums] {
        let e = RunConfig::resolve(cmd, o.clone()).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        assert!(e.to_string().contains("αβ < X"), "{e}");
    }
    assert!(RunConfig::resolve(Command::Pnt, o).is_ok());
}

#[test]
fn scale_cap_is_exit_three() {
    let o = Options { nmax: Some(20), ..opts() };
    let e = RunConfig::resolve(Command::Scan, o.clone()).unwrap_err();
    assert_eq!(exit_code(&e), 3);
    let e = RunConfig::resolve(Command::Pnt, Options { scale_cap: Some(100), nmax: Some(5), ..opts() })
        .unwrap_err();
    assert_eq!(exit_code(&e), 3);
}

#[test]
fn flags_override_file() {
    let file: Options = toml::from_str("q = 5\nseed = 9\nnmax = 6\nformat = \"json\"").unwrap();
    let merged = Options { seed: Some(4), ..opts() }.or(file);
    let c = RunConfig::resolve(Command::Scan, merged).unwrap();
    assert_eq!((c.q(), c.seed, c.nmax, c.format), (5, 4, 6, Format::Json));
    assert!(toml::from_str::<Options>("bogus = 1").is_err());
}

#[test]
fn seeded_targets_are_deterministic() {
    let c = RunConfig::resolve(Command::Scan, Options { seed: Some(42), ..opts() }).unwrap();
    let a = make_target(&c, 0).unwrap();
    let b = make_target(&c, 0).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, make_target(&c, 1).unwrap());
    assert_eq!(target_seed(42, 3), 45);
}

#[test]
fn exact_hits_are_rejected() {
    let mut c = RunConfig::resolve(Command::Scan, opts()).unwrap();
    let v = QuadElem::from_poly(Poly::from_i64(3, &[0, 1]));
    let t = Target::planted(&c.field, &QuadElem::one(3), &v, c.tail).unwrap();
    c.target = Some(t);
    let e = make_target(&c, 0).unwrap_err();
    assert!(matches!(e, Error::TargetRejected(_)), "{e}");
    assert_eq!(exit_code(&e), 2);
}

#[test]
fn explicit_target_text_parses() {
    let o = Options { target: Some("0:1,2,0:-2;-1:1:-1".into()), ..opts() };
    let c = RunConfig::resolve(Command::Dirichlet, o).unwrap();
    let t = c.target.unwrap();
    assert_eq!(t.tail(), -1);
    assert!(RunConfig::resolve(Command::Dirichlet, Options { target: Some("0:1:-3".into()), ..opts() }).is_err());
}

#[test]
fn empty_table_is_header_only() {
    let t = Table::new(&["a", "b"]);
    assert_eq!(t.to_csv().unwrap(), b"a,b\n");
    assert_eq!(String::from_utf8(t.to_json().unwrap()).unwrap().trim(), "[]");
}

#[test]
fn json_csv_round_trip() {
    let mut t = Table::new(&["n", "x", "ok", "s", "none"]);
    t.push(vec![Cell::Int(-3), Cell::Float(0.1 + 0.2), Cell::Bool(true), "abc".into(), Cell::Null]);
    t.push(vec![Cell::Int(1 << 40), Cell::Float(1.5e-9), Cell::Bool(false), "x y".into(), Cell::Null]);
    let from_json = Table::from_json(&t.to_json().unwrap(), &[]).unwrap();
    let from_csv = Table::from_csv(&from_json.to_csv().unwrap()).unwrap();
    let back = Table::from_json(&from_csv.to_json().unwrap(), &[]).unwrap();
    assert_eq!(from_json, back);
    assert_eq!(from_json.columns, t.columns);
    assert_eq!(from_json.rows[0][1], Cell::Float(round12(0.3)));
}

#[test]
fn round12_keeps_twelve_digits() {
    assert_eq!(round12(0.1 + 0.2), 0.3);
    assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    assert_eq!(round12(0.0), 0.0);
    assert!(round12(f64::INFINITY).is_infinite());
}

#[test]
fn scan_schema() {
    let o = Options { nmin: Some(4), nmax: Some(5), samples: Some(1), ..opts() };
    let c = RunConfig::resolve(Command::Scan, o).unwrap();
    let out = run_command(&c).unwrap();
    let want = [
        "target_seed", "N", "delta_exp", "radius_exp", "odd_N", "lambda_sum", "T_num", "T_den", "T",
        "tildeT_num", "tildeT_den", "tildeT_prime", "tildeT_power", "ratio", "witness_count",
        "witness_v", "witness_p", "witness_norm_exp", "err1_exp", "err2_exp", "achieved_theta",
        "target_theta", "outside_theorem_range",
    ];
    assert_eq!(out.table.columns, want);
    assert_eq!(out.table.len(), 2);
    assert_eq!(out.failures, 0);
    let odd = out.table.column("odd_N").unwrap();
    assert_eq!(out.table.rows[1][odd], Cell::Bool(true));
}
