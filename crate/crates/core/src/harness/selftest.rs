//! The twelve acceptance criteria as library checks. Each returns a
//! pass/fail verdict with a short detail string; elapsed time counts
//! against the criterion's budget.

use std::time::{Duration, Instant};

use super::commands::{check_ideal_vaughan, check_poly_vaughan};
use super::{poisson_samples, run_command, Command, Options, RunConfig};
use crate::algebra::{enumerate_monic, factorize, mangoldt_poly, mobius_poly, monic_divisors};
use crate::diophantine::{
    dirichlet_search, exponent_scan, pnt_sum, prime_power_generators, lambda_sum_enumerated,
    recompute_record, screen_target, DeltaChoice, Prepared, Target, DEFAULT_SCALE_CAP,
};
use crate::error::Result;
use crate::laurent::default_tail;
use crate::quadratic::{IdealCatalog, QuadElem, QuadField};
use crate::vaughan::{type_sums, VaughanParams};

#[derive(Clone, Copy, Debug)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget_secs: u64,
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "vaughan identity (polynomials)", budget_secs: 60 },
    Criterion { id: 2, name: "vaughan identity (ideals)", budget_secs: 120 },
    Criterion { id: 3, name: "poisson identity for omega", budget_secs: 120 },
    Criterion { id: 4, name: "generator invariance of omega", budget_secs: 60 },
    Criterion { id: 5, name: "divisor-sum identities", budget_secs: 60 },
    Criterion { id: 6, name: "prime ideal theorem tolerance", budget_secs: 120 },
    Criterion { id: 7, name: "fundamental unit and S(a) cardinality", budget_secs: 60 },
    Criterion { id: 8, name: "principality spot check", budget_secs: 120 },
    Criterion { id: 9, name: "vaughan decomposition exactness", budget_secs: 120 },
    Criterion { id: 10, name: "dirichlet search", budget_secs: 120 },
    Criterion { id: 11, name: "scan positivity", budget_secs: 600 },
    Criterion { id: 12, name: "determinism", budget_secs: 60 },
];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = Result<(bool, String)>;

fn field(q: u64, d: &str) -> QuadField {
    QuadField::from_text(q, d).expect("default fields are valid")
}

pub fn run_criterion(id: u32) -> CriterionResult {
    let c = *CRITERIA.iter().find(|c| c.id == id).expect("criterion id in 1..=12");
    let start = Instant::now();
    let res = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => c12(),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match res {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > Duration::from_secs(c.budget_secs) {
        passed = false;
        detail.push_str(&format!("; over the {} s budget", c.budget_secs));
    }
    CriterionResult { id, name: c.name, passed, detail, elapsed }
}

fn c1() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for q in [3, 5] {
        let (cases, fails) = check_poly_vaughan(q, 5, 4, 4)?;
        ok &= fails == 0;
        parts.push(format!("q={q}: {fails} failures in {cases} cases"));
    }
    Ok((ok, parts.join(", ")))
}

fn c2() -> Check {
    let k = field(3, "1,0,1");
    let (cases, fails) = check_ideal_vaughan(&k, 4, 82, 80)?;
    Ok((fails == 0, format!("{fails} failures in {cases} (ideal, alpha, beta) cases")))
}

fn c3() -> Check {
    let k = field(3, "1,0,1");
    let s = poisson_samples(&k, 7, 100, 5, default_tail(5, 2), DEFAULT_SCALE_CAP)?;
    let exact = s.iter().filter(|x| x.exact()).count();
    let rational = s.iter().filter(|x| x.poisson.is_some()).count();
    Ok((
        exact == 100 && rational == 100,
        format!("{exact}/100 exact, {rational}/100 rational"),
    ))
}

fn c4() -> Check {
    let k = field(3, "1,0,1");
    let cat = IdealCatalog::new(&k, 4)?;
    let t = Target::seeded(3, 11, -30);
    let prep = Prepared::new(&k, &t)?;
    let u = k.unit().u.clone();
    let ui = k.unit_inverse(&u)?;
    let mut bad = 0;
    let mut checked = 0;
    for i in (0..cat.len()).filter(|&i| cat.norm_exp(i) >= 1).take(50) {
        checked += 1;
        let g = &cat.ideals[i].rep.gen;
        let mut gens: Vec<QuadElem> = k.canonical_generators(g)?;
        gens.push(k.mul(&u, g));
        gens.push(k.mul(&ui, g));
        for radius in [-2, -1, 0] {
            let counts = gens
                .iter()
                .map(|v| prep.omega_direct(v, radius, false).map(|o| o.count))
                .collect::<Result<Vec<_>>>()?;
            if counts.iter().any(|&c| c != counts[0]) {
                bad += 1;
            }
        }
    }
    Ok((bad == 0 && checked == 50, format!("{checked} ideals x 3 radii, {bad} disagreements")))
}

fn c5() -> Check {
    let mut fails = 0;
    let mut cases = 0;
    for (q, max_deg) in [(3u64, 6usize), (5, 4)] {
        for deg in 0..=max_deg {
            for f in enumerate_monic(q, deg) {
                let divs = monic_divisors(&factorize(&f)?, q);
                let mut lam = 0i64;
                let mut mu = 0i64;
                for d in &divs {
                    lam += mangoldt_poly(d)? as i64;
                    mu += mobius_poly(d)?;
                }
                cases += 1;
                fails += (lam != deg as i64) as usize + (mu != (deg == 0) as i64) as usize;
            }
        }
    }
    for (q, d) in [(3u64, "1,0,1"), (5, "2,0,1")] {
        let k = field(q, d);
        let cat = IdealCatalog::new(&k, 4)?;
        for i in 0..cat.len() {
            let divs = cat.divisors(i);
            let lam: u64 = divs.iter().map(|&j| cat.mangoldt(j)).sum();
            let mu: i64 = divs.iter().map(|&j| cat.mobius(j)).sum();
            cases += 1;
            fails += (lam as i64 != cat.norm_exp(i)) as usize
                + (mu != (i == cat.unit_ideal()) as i64) as usize;
        }
    }
    let mut pnt_fails = 0;
    for n in 1..=8usize {
        let s: u64 = enumerate_monic(3, n).map(|f| mangoldt_poly(&f)).sum::<Result<u64>>()?;
        pnt_fails += (s != 3u64.pow(n as u32)) as usize;
    }
    Ok((
        fails == 0 && pnt_fails == 0,
        format!("{fails} divisor-sum failures in {cases} cases; sum over deg n of Lambda = 3^n fails for {pnt_fails} of n = 1..8"),
    ))
}

fn c6() -> Check {
    let mut worst = 0i128;
    let mut bad = 0;
    let mut rows = 0;
    for (q, d) in [(3u64, "1,0,1"), (5, "2,0,1")] {
        let k = field(q, d);
        for n in 1..=8i64 {
            if q.pow(n as u32) > DEFAULT_SCALE_CAP {
                continue;
            }
            let s = pnt_sum(&k, n, DEFAULT_SCALE_CAP)?;
            let e = lambda_sum_enumerated(&prime_power_generators(&k, n, DEFAULT_SCALE_CAP)?);
            let dev = (s as i128 - q.pow(n as u32) as i128).abs();
            worst = worst.max(dev);
            rows += 1;
            bad += (dev > 2 || s != e) as usize;
        }
    }
    Ok((bad == 0, format!("{rows} (field, N) rows, worst |pnt_sum - q^N| = {worst}, {bad} violations")))
}

fn c7() -> Check {
    let k = field(3, "1,0,1");
    let u = k.unit();
    let mut ok = u.abs_exp == 1 && !u.norm_unit.is_multiple_of(3);
    // no unit with 1 < |v| < |u| in the box deg a, deg b <= abs_exp
    let mut smaller = 0;
    for bi in 0..3u64.pow(u.abs_exp as u32 + 1) {
        for ai in 0..3u64.pow(u.abs_exp as u32 + 1) {
            let v = QuadElem::new(
                crate::quadratic::poly_from_index(3, ai),
                crate::quadratic::poly_from_index(3, bi),
            );
            if v.is_zero() || k.norm(&v).deg() != 0 {
                continue;
            }
            let (j1, _) = k.sigma_degrees(&v).expect("nonzero");
            if j1 > 0 && j1 < u.abs_exp {
                smaller += 1;
            }
        }
    }
    ok &= smaller == 0;
    let cat = IdealCatalog::new(&k, 5)?;
    let mut card_bad = 0;
    let take = cat.len().min(100);
    for i in 0..take {
        if k.canonical_generators(&cat.ideals[i].rep.gen)?.len() != 2 {
            card_bad += 1;
        }
    }
    ok &= card_bad == 0 && take == 100;
    Ok((
        ok,
        format!(
            "u = {}, |u| = 3^{}, Norm(u) = {}, {smaller} smaller units, #S(a) != q-1 for {card_bad} of {take} ideals",
            u.u, u.abs_exp, u.norm_unit
        ),
    ))
}

fn c8() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for (q, d) in [(3u64, "1,0,1"), (5, "2,0,1")] {
        let r = field(q, d).principality_spot_check(4, None);
        ok &= r.failures.is_empty();
        parts.push(format!("q={q}: {} checked, {} failures", r.checked, r.failures.len()));
    }
    Ok((ok, parts.join(", ")))
}

fn c9() -> Check {
    let k = field(3, "1,0,1");
    let t = Target::seeded(3, 1, default_tail(4, 2));
    let prep = Prepared::new(&k, &t)?;
    screen_target(&prep, 2)?;
    let ts = type_sums(&prep, 4, VaughanParams { alpha: 3, beta: 3 }, -(4i64.div_euclid(8)))?;
    Ok((
        ts.exact(),
        format!(
            "direct = {}, S1+S2+S3 = {}, T_I = {:.4e}, T_II = {:.4e}",
            ts.direct.normal_form(),
            ts.total().normal_form(),
            ts.t_i,
            ts.t_ii
        ),
    ))
}

fn c10() -> Check {
    let k = field(3, "1,0,1");
    let c_exp = k.half_deg() + k.unit().abs_exp;
    let mut no_record = 0;
    let mut non_monotone = 0;
    for seed in 1..=20u64 {
        let t = Target::seeded(3, seed, default_tail(6, 2));
        let prep = Prepared::new(&k, &t)?;
        screen_target(&prep, 2)?;
        if dirichlet_search(&prep, 6, c_exp)?.is_empty() {
            no_record += 1;
        }
        let mut prev = i64::MAX;
        for m in 0..=6 {
            let best = dirichlet_search(&prep, m, i64::MAX / 4)?
                .first()
                .map_or(i64::MAX, |r| r.quality_exp().unwrap_or(i64::MIN));
            if best > prev {
                non_monotone += 1;
            }
            prev = best;
        }
    }
    Ok((
        no_record == 0 && non_monotone == 0,
        format!("C_exp = {c_exp}: {no_record}/20 targets without a record, {non_monotone} monotonicity violations"),
    ))
}

fn c11() -> Check {
    let k = field(5, "2,0,1");
    let tail = default_tail(10, 2);
    let targets: Vec<Target> = (1..=10u64).map(|s| Target::seeded(5, s, tail)).collect();
    for t in &targets {
        screen_target(&Prepared::new(&k, t)?, 2)?;
    }
    let rows = exponent_scan(&k, &targets, [4, 6, 8, 10], DeltaChoice::Rule { epsilon: 0.01 }, DEFAULT_SCALE_CAP)?;
    let cells = rows.len();
    let positive = rows.iter().filter(|r| r.tilde_t > 0).count();
    let labeled = rows.iter().all(|r| r.outside_theorem_range && r.delta_exp == -(r.n.div_euclid(8)));
    let mut witnesses = 0;
    let mut mismatches = 0;
    for r in &rows {
        for w in &r.witnesses {
            witnesses += 1;
            if recompute_record(k.d(), &targets[r.target_index], &w.p, &w.v)? != (w.err1, w.err2) {
                mismatches += 1;
            }
        }
    }
    let ok = cells == 40 && positive * 10 >= cells * 9 && mismatches == 0 && labeled;
    Ok((
        ok,
        format!(
            "tildeT > 0 in {positive}/{cells} cells, {witnesses} witnesses recomputed with {mismatches} mismatches"
        ),
    ))
}

fn c12() -> Check {
    let runs = [
        (
            Command::Scan,
            Options { q: Some(3), d: Some("1,0,1".into()), nmin: Some(2), nmax: Some(6), samples: Some(2), ..Options::default() },
        ),
        (Command::PoissonCheck, Options { samples: Some(30), seed: Some(7), ..Options::default() }),
        (Command::Dirichlet, Options { samples: Some(3), seed: Some(42), ..Options::default() }),
        (Command::Typesums, Options { seed: Some(3), ..Options::default() }),
        (Command::VaughanCheck, Options::default()),
        (Command::Pnt, Options { q: Some(5), nmax: Some(6), ..Options::default() }),
        (Command::Unit, Options::default()),
        (Command::Factor, Options { poly: Some("0,2,2,1,1".into()), ..Options::default() }),
    ];
    let mut same = 0;
    for (cmd, o) in &runs {
        let once = || -> Result<Vec<u8>> {
            let cfg = RunConfig::resolve(*cmd, o.clone())?;
            run_command(&cfg)?.table.to_csv()
        };
        let (a, b) = (once()?, once()?);
        same += (a == b && !a.is_empty()) as usize;
    }
    Ok((same == runs.len(), format!("{same}/{} commands byte-identical on rerun", runs.len())))
}
