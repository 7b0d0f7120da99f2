use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::{make_target, selftest, target_seed, Cell, Command, RunConfig, Table};
use crate::algebra::{factorize, mangoldt_poly, mobius_poly, quadratic_character};
use crate::diophantine::{
    delta_rule, dirichlet_search, exponent_scan, pnt_sum, prime_power_generators,
    lambda_sum_enumerated, recompute_record, DeltaChoice, Prepared, Target,
};
use crate::error::{Error, Result};
use crate::laurent::QPow;
use crate::quadratic::{cf_expansion, IdealCatalog, QuadField};
use crate::vaughan::{type_sums, vaughan_terms_ideal, vaughan_terms_poly, VaughanParams};

/// Rows, a one-line summary, and the number of failed checks.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub table: Table,
    pub summary: String,
    pub failures: usize,
}

fn exp_cell(e: QPow) -> Cell {
    e.exp().into()
}

pub fn run_command(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Selftest => run_selftest(),
        Command::Factor => run_factor(cfg),
        Command::Unit => run_unit(cfg),
        Command::VaughanCheck => run_vaughan_check(cfg),
        Command::PoissonCheck => run_poisson_check(cfg),
        Command::Pnt => run_pnt(cfg),
        Command::Dirichlet => run_dirichlet(cfg),
        Command::Scan => run_scan(cfg),
        Command::Typesums => run_typesums(cfg),
    }
}

fn run_selftest() -> Result<Outcome> {
    let mut t = Table::new(&["criterion", "name", "passed", "detail"]);
    let mut failures = 0;
    for c in selftest::CRITERIA {
        let r = selftest::run_criterion(c.id);
        eprintln!("{}", r.line());
        failures += (!r.passed) as usize;
        t.push(vec![(c.id as u64).into(), c.name.into(), r.passed.into(), r.detail.into()]);
    }
    let n = selftest::CRITERIA.len();
    Ok(Outcome { table: t, summary: format!("{}/{n} criteria passed", n - failures), failures })
}

fn run_factor(cfg: &RunConfig) -> Result<Outcome> {
    let f = cfg.poly.clone().unwrap_or_else(|| cfg.field.d().clone());
    let fac = factorize(&f)?;
    let mut t = Table::new(&["factor", "exponent", "degree", "splitting"]);
    for (p, e) in &fac.factors {
        let s = quadratic_character(cfg.field.d(), p)?;
        t.push(vec![p.to_string().into(), (*e as u64).into(), p.deg().into(), s.as_str().into()]);
    }
    let summary = format!(
        "factor: f = {f}, unit {}, {} distinct factors, Lambda(f/lead) = {}, mu(f/lead) = {}",
        fac.unit,
        fac.factors.len(),
        mangoldt_poly(&f.to_monic())?,
        mobius_poly(&f.to_monic())?
    );
    Ok(Outcome { table: t, summary, failures: 0 })
}

fn run_unit(cfg: &RunConfig) -> Result<Outcome> {
    let k = &cfg.field;
    let u = k.unit();
    let cf = cf_expansion(k.d(), 10_000)?;
    let mut t = Table::new(&["q", "d", "u", "abs_exp", "abs_u", "norm", "cf_period", "certified"]);
    let abs_u = k.q().checked_pow(u.abs_exp as u32);
    t.push(vec![
        k.q().into(),
        k.d().to_string().into(),
        u.u.to_string().into(),
        u.abs_exp.into(),
        abs_u.into(),
        u.norm_unit.into(),
        cf.period.into(),
        true.into(),
    ]);
    let summary = format!(
        "unit: u = {}, |u| = q^{} = {}, Norm(u) = {}",
        u.u,
        u.abs_exp,
        abs_u.map_or("overflow".into(), |x| x.to_string()),
        u.norm_unit
    );
    Ok(Outcome { table: t, summary, failures: 0 })
}

/// (cases, failures) of the polynomial identity for monic f with
/// 1 <= deg f <= max_deg, alpha' <= alpha, beta' <= min(beta, deg f - 1).
pub(crate) fn check_poly_vaughan(q: u64, max_deg: usize, alpha: u64, beta: u64) -> Result<(usize, usize)> {
    let mut cases = 0;
    let mut fails = 0;
    for deg in 1..=max_deg {
        for f in crate::algebra::enumerate_monic(q, deg) {
            let lam = mangoldt_poly(&f)? as i64;
            for a in 0..=alpha {
                for b in 0..=beta.min(deg as u64 - 1) {
                    cases += 1;
                    if vaughan_terms_poly(&f, VaughanParams { alpha: a, beta: b })?.total() != lam {
                        fails += 1;
                    }
                }
            }
        }
    }
    Ok((cases, fails))
}

/// (cases, failures) of the ideal identity over the catalogue, with
/// alpha' in 1..=alpha and beta' in 1..=beta, beta' < N(f).
pub(crate) fn check_ideal_vaughan(k: &QuadField, max_exp: i64, alpha: u64, beta: u64) -> Result<(usize, usize)> {
    let cat = IdealCatalog::new(k, max_exp)?;
    let q = k.q();
    let mut cases = 0;
    let mut fails = 0;
    for i in 0..cat.len() {
        let nf = q.pow(cat.norm_exp(i) as u32);
        let lam = cat.mangoldt(i) as i64;
        for a in 1..=alpha {
            for b in 1..=beta.min(nf.saturating_sub(1)) {
                cases += 1;
                if vaughan_terms_ideal(&cat, q, i, VaughanParams { alpha: a, beta: b })?.total() != lam {
                    fails += 1;
                }
            }
        }
    }
    Ok((cases, fails))
}

fn run_vaughan_check(cfg: &RunConfig) -> Result<Outcome> {
    let mut t = Table::new(&["form", "q", "max_size_exp", "alpha", "beta", "cases", "failures"]);
    let (pc, pf) = check_poly_vaughan(cfg.q(), cfg.nmax as usize, cfg.alpha, cfg.beta)?;
    let (ic, ifl) = check_ideal_vaughan(&cfg.field, cfg.nmax, cfg.alpha, cfg.beta)?;
    for (form, c, f) in [("polynomial", pc, pf), ("ideal", ic, ifl)] {
        t.push(vec![
            form.into(),
            cfg.q().into(),
            cfg.nmax.into(),
            cfg.alpha.into(),
            cfg.beta.into(),
            c.into(),
            f.into(),
        ]);
    }
    let failures = pf + ifl;
    Ok(Outcome {
        table: t,
        summary: format!(
            "vaughan-check: polynomial {}/{pc} exact, ideal {}/{ic} exact",
            pc - pf,
            ic - ifl
        ),
        failures,
    })
}

/// One sampled (ideal, target, delta) triple.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonSample {
    pub index: usize,
    pub generator: String,
    pub norm_exp: i64,
    pub delta_exp: i64,
    pub radius_exp: i64,
    pub target_seed: u64,
    pub direct: u64,
    /// `None` when the dual sum was not rational.
    pub poisson: Option<u64>,
    pub terms: usize,
}

impl PoissonSample {
    pub fn exact(&self) -> bool {
        self.poisson == Some(self.direct)
    }
}

/// Triples drawn from SplitMix64(seed): a catalogued ideal of norm at most
/// q^max_exp, delta_exp in [-2, 2] and a seeded target.
pub fn poisson_samples(
    k: &QuadField,
    seed: u64,
    samples: usize,
    max_exp: i64,
    tail: i64,
    scale_cap: u64,
) -> Result<Vec<PoissonSample>> {
    let cat = IdealCatalog::new(k, max_exp)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for index in 0..samples {
        let i = (rng.next_u64() % cat.len() as u64) as usize;
        let delta_exp = (rng.next_u64() % 5) as i64 - 2;
        let tseed = rng.next_u64();
        let target = Target::seeded(k.q(), tseed, tail);
        let prep = Prepared::new(k, &target)?.with_scale_cap(scale_cap);
        let rep = &cat.ideals[i].rep;
        let radius = crate::diophantine::radius_exp(delta_exp, rep.norm_exp);
        let direct = prep.omega_direct(&rep.gen, radius, false)?.count;
        let (poisson, terms) = match prep.omega_poisson(&rep.gen, radius) {
            Ok(p) => (Some(p.value), p.terms),
            Err(Error::IdentityFailure(_)) => (None, 0),
            Err(e) => return Err(e),
        };
        out.push(PoissonSample {
            index,
            generator: rep.gen.to_string(),
            norm_exp: rep.norm_exp,
            delta_exp,
            radius_exp: radius,
            target_seed: tseed,
            direct,
            poisson,
            terms,
        });
    }
    Ok(out)
}

fn run_poisson_check(cfg: &RunConfig) -> Result<Outcome> {
    let samples = poisson_samples(&cfg.field, cfg.seed, cfg.samples, cfg.nmax, cfg.tail, cfg.scale_cap)?;
    let mut t = Table::new(&[
        "sample", "generator", "norm_exp", "delta_exp", "radius_exp", "target_seed", "omega_direct",
        "omega_poisson", "rational", "dual_terms", "exact",
    ]);
    let mut exact = 0;
    for s in &samples {
        exact += s.exact() as usize;
        t.push(vec![
            s.index.into(),
            s.generator.clone().into(),
            s.norm_exp.into(),
            s.delta_exp.into(),
            s.radius_exp.into(),
            s.target_seed.into(),
            s.direct.into(),
            s.poisson.into(),
            s.poisson.is_some().into(),
            s.terms.into(),
            s.exact().into(),
        ]);
    }
    Ok(Outcome {
        summary: format!("poisson-check: {exact}/{} exact", samples.len()),
        failures: samples.len() - exact,
        table: t,
    })
}

fn run_pnt(cfg: &RunConfig) -> Result<Outcome> {
    let k = &cfg.field;
    let q = k.q();
    let g = k.d().deg() / 2 - 1;
    let mut t = Table::new(&[
        "N", "pnt_sum", "lambda_enumerated", "q_pow_N", "deviation", "bound", "within_bound",
    ]);
    let mut failures = 0;
    let mut worst = 0i128;
    for n in cfg.nmin.max(1)..=cfg.nmax {
        let s = pnt_sum(k, n, cfg.scale_cap)?;
        let e = lambda_sum_enumerated(&prime_power_generators(k, n, cfg.scale_cap)?);
        let qn = q.pow(n as u32);
        let dev = s as i128 - qn as i128;
        let bound = 2.0 * g as f64 * (q as f64).powf(n as f64 / 2.0) + 2.0;
        let within = (dev.abs() as f64) <= bound;
        failures += (s != e) as usize + (!within) as usize;
        worst = worst.max(dev.abs());
        t.push(vec![
            n.into(),
            s.into(),
            e.into(),
            qn.into(),
            Cell::Int(dev),
            bound.into(),
            within.into(),
        ]);
    }
    Ok(Outcome {
        summary: format!("pnt: {} rows, worst |pnt_sum - q^N| = {worst}, {failures} failures", t.len()),
        table: t,
        failures,
    })
}

fn run_dirichlet(cfg: &RunConfig) -> Result<Outcome> {
    let mut t = Table::new(&[
        "target_seed", "rank", "norm_exp", "v", "p", "err1_exp", "err2_exp", "exact", "quality_exp",
    ]);
    let mut best_all = Vec::new();
    for i in 0..cfg.samples {
        let target = make_target(cfg, i)?;
        let prep = Prepared::new(&cfg.field, &target)?.with_scale_cap(cfg.scale_cap);
        let recs = dirichlet_search(&prep, cfg.max_norm_exp, cfg.c_exp)?;
        best_all.push(recs.first().map(|r| r.quality_exp()));
        for (rank, r) in recs.iter().enumerate() {
            t.push(vec![
                target_seed(cfg.seed, i).into(),
                rank.into(),
                r.norm_exp.into(),
                r.v.to_string().into(),
                r.p.to_string().into(),
                exp_cell(r.err1),
                exp_cell(r.err2),
                (r.max_err() == QPow::Zero).into(),
                r.quality_exp().into(),
            ]);
        }
    }
    let hit = best_all.iter().filter(|b| b.is_some()).count();
    Ok(Outcome {
        summary: format!(
            "dirichlet: {} records, {hit}/{} targets with quality_exp <= C_exp = {}",
            t.len(),
            cfg.samples,
            cfg.c_exp
        ),
        table: t,
        failures: 0,
    })
}

pub(crate) const SCAN_COLUMNS: &[&str] = &[
    "target_seed", "N", "delta_exp", "radius_exp", "odd_N", "lambda_sum", "T_num", "T_den", "T",
    "tildeT_num", "tildeT_den", "tildeT_prime", "tildeT_power", "ratio", "witness_count", "witness_v",
    "witness_p", "witness_norm_exp", "err1_exp", "err2_exp", "achieved_theta", "target_theta",
    "outside_theorem_range",
];

fn run_scan(cfg: &RunConfig) -> Result<Outcome> {
    let targets = (0..cfg.samples).map(|i| make_target(cfg, i)).collect::<Result<Vec<_>>>()?;
    let choice = match cfg.delta_exp {
        Some(e) => DeltaChoice::Fixed(e),
        None => DeltaChoice::Rule { epsilon: cfg.epsilon },
    };
    let rows = exponent_scan(&cfg.field, &targets, cfg.nmin..=cfg.nmax, choice, cfg.scale_cap)?;
    let mut t = Table::new(SCAN_COLUMNS);
    let mut mismatches = 0;
    let mut positive = 0;
    for r in &rows {
        for w in &r.witnesses {
            let fresh = recompute_record(cfg.field.d(), &targets[r.target_index], &w.p, &w.v)?;
            if fresh != (w.err1, w.err2) {
                mismatches += 1;
            }
        }
        positive += (r.tilde_t > 0) as usize;
        let w = r.witness.as_ref();
        t.push(vec![
            target_seed(cfg.seed, r.target_index).into(),
            r.n.into(),
            r.delta_exp.into(),
            r.radius_exp.into(),
            (r.n % 2 != 0).into(),
            r.lambda_sum.into(),
            r.t_value.num.into(),
            r.t_value.den.into(),
            r.t_value.to_f64().into(),
            r.tilde_t.into(),
            1u64.into(),
            r.prime_part.into(),
            r.power_part.into(),
            r.ratio.into(),
            r.witness_count.into(),
            w.map(|w| w.v.to_string()).into(),
            w.map(|w| w.p.to_string()).into(),
            w.map(|w| w.norm_exp).into(),
            w.and_then(|w| w.err1.exp()).into(),
            w.and_then(|w| w.err2.exp()).into(),
            r.achieved_theta.into(),
            r.target_theta.into(),
            r.outside_theorem_range.into(),
        ]);
    }
    Ok(Outcome {
        summary: format!(
            "scan: {} rows, tildeT > 0 in {positive}, witness recomputation mismatches {mismatches}",
            rows.len()
        ),
        table: t,
        failures: mismatches,
    })
}

fn run_typesums(cfg: &RunConfig) -> Result<Outcome> {
    let n = cfg.nmax;
    let target = make_target(cfg, 0)?;
    let prep = Prepared::new(&cfg.field, &target)?.with_scale_cap(cfg.scale_cap);
    let delta_exp = cfg.delta_exp.unwrap_or_else(|| {
        delta_rule(cfg.q(), n, DeltaChoice::Rule { epsilon: cfg.epsilon }).0
    });
    let ts = type_sums(&prep, n, VaughanParams { alpha: cfg.alpha, beta: cfg.beta }, delta_exp)?;
    let mut t = Table::new(&[
        "N", "alpha", "beta", "delta_exp", "radius_exp", "prefactor_exp", "T_I", "T_II", "S1", "S2",
        "S3", "S_total", "direct", "exact", "type_ii_pairs", "max_lambda", "max_abs_h",
    ]);
    let exact = ts.exact();
    t.push(vec![
        n.into(),
        cfg.alpha.into(),
        cfg.beta.into(),
        delta_exp.into(),
        ts.radius_exp.into(),
        ts.prefactor_exp.into(),
        ts.t_i.into(),
        ts.t_ii.into(),
        ts.s1.normal_form().to_string().into(),
        ts.s2.normal_form().to_string().into(),
        ts.s3.normal_form().to_string().into(),
        ts.total().normal_form().to_string().into(),
        ts.direct.normal_form().to_string().into(),
        exact.into(),
        ts.type_ii_pairs.into(),
        ts.max_lambda.into(),
        ts.max_abs_h.into(),
    ]);
    Ok(Outcome {
        summary: format!(
            "typesums: N = {n}, T_I = {:.6e}, T_II = {:.6e}, S1+S2+S3 {} direct sum",
            ts.t_i,
            ts.t_ii,
            if exact { "equals" } else { "DIFFERS FROM" }
        ),
        table: t,
        failures: (!exact) as usize,
    })
}
