use super::{big_t, pow_q, radius_exp, ApproxRecord, Prepared, Ratio, Target};
use crate::algebra::{factorize, inv_mod, splitting_unchecked, DegreeSieve, Poly, PowerClass, Splitting};
use crate::error::{Error, Result};
use crate::laurent::QPow;
use crate::quadratic::{QuadElem, QuadField};

/// Canonical generator of an ideal of norm q^N with Lambda > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenEntry {
    pub v: QuadElem,
    pub lambda: u64,
    /// The ideal is prime (exponent r = 1).
    pub prime: bool,
}

fn digits(q: u64, mut i: u64, out: &mut [u64]) {
    for c in out.iter_mut() {
        *c = i % q;
        i /= q;
    }
}

fn deg_of(c: &[u64]) -> i64 {
    c.iter().rposition(|&x| x != 0).map_or(-1, |i| i as i64)
}

fn lowest_nonzero(c: &[u64]) -> Option<u64> {
    c.iter().copied().find(|&x| x != 0)
}

/// Canonical generators of every prime-power ideal of norm q^n, with
/// Lambda, in enumeration order (b index outer, a index inner).
///
/// Norms are classified with a degree-n sieve; only proper powers take
/// the factorization path.
pub fn prime_power_generators(k: &QuadField, n: i64, scale_cap: u64) -> Result<Vec<GenEntry>> {
    if n < 1 {
        return Ok(Vec::new());
    }
    let q = k.q();
    match pow_q(q, n) {
        Some(x) if x <= scale_cap => {}
        _ => return Err(Error::ScaleCap(format!("q^{n} ideals exceed the cap {scale_cap}"))),
    }
    let g = k.half_deg();
    let kk = k.unit().abs_exp;
    let (ba, bb) = k.window_box(n);
    let sieve = DegreeSieve::new(q, n as usize);
    let dcoef = k.d().coeffs().to_vec();
    let nu = n as usize;
    let la = (ba + 1).max(0) as usize;
    let lb = (bb + 1).max(0) as usize;
    let na = if ba < 0 { 1 } else { q.pow(la as u32) };
    let nb = if bb < 0 { 1 } else { q.pow(lb as u32) };
    let width = (2 * la).max(2 * lb + dcoef.len()).max(nu + 1);
    let mut av = vec![0u64; la];
    let mut bv = vec![0u64; lb];
    let mut bd = vec![0u64; width];
    let mut nrm = vec![0u64; width];
    let mut out = Vec::new();
    for bi in 0..nb {
        digits(q, bi, &mut bv);
        // b^2 d
        bd.iter_mut().for_each(|c| *c = 0);
        let mut b2 = vec![0u64; (2 * lb).max(1)];
        for i in 0..lb {
            if bv[i] == 0 {
                continue;
            }
            for j in 0..lb {
                b2[i + j] = (b2[i + j] + bv[i] * bv[j]) % q;
            }
        }
        for (i, &x) in b2.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in dcoef.iter().enumerate() {
                bd[i + j] = (bd[i + j] + x * y) % q;
            }
        }
        let db = deg_of(&bv);
        let b_low = lowest_nonzero(&bv);
        for ai in 0..na {
            digits(q, ai, &mut av);
            // first nonzero coefficient in (a ascending, b ascending) must be 1
            match lowest_nonzero(&av).or(b_low) {
                Some(1) => {}
                _ => continue,
            }
            nrm.copy_from_slice(&bd);
            for c in nrm.iter_mut() {
                *c = (q - *c) % q;
            }
            for i in 0..la {
                if av[i] == 0 {
                    continue;
                }
                for j in 0..la {
                    nrm[i + j] = (nrm[i + j] + av[i] * av[j]) % q;
                }
            }
            if deg_of(&nrm) != n {
                continue;
            }
            // deg sigma_1 in the window n - k < 2j <= n + k
            let da = deg_of(&av);
            let j1 = if db < 0 {
                da
            } else {
                let mb = db + g;
                if da != mb {
                    da.max(mb)
                } else if (av[da as usize] + bv[db as usize]).is_multiple_of(q) {
                    n - mb
                } else {
                    mb
                }
            };
            if !(n - kk < 2 * j1 && 2 * j1 <= n + kk) {
                continue;
            }
            let lead_inv = inv_mod(nrm[nu], q);
            let idx = nrm[..nu]
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc * q + c * lead_inv % q);
            let entry = match sieve.class_of_index(idx) {
                PowerClass::Composite => continue,
                PowerClass::Irreducible => (n as u64, true),
                PowerClass::ProperPower => {
                    let v = QuadElem::new(
                        Poly::from_residues(q, av.clone()),
                        Poly::from_residues(q, bv.clone()),
                    );
                    let lam = k.mangoldt_element(&v)?;
                    if lam == 0 {
                        continue;
                    }
                    let norm = Poly::from_residues(q, nrm[..=nu].to_vec());
                    let fac = factorize(&norm)?;
                    let (p, e) = &fac.factors[0];
                    let prime = splitting_unchecked(k.d(), p) == Splitting::Inert && *e == 2;
                    (lam, prime)
                }
            };
            out.push(GenEntry {
                v: QuadElem::new(
                    Poly::from_residues(q, av.clone()),
                    Poly::from_residues(q, bv.clone()),
                ),
                lambda: entry.0,
                prime: entry.1,
            });
        }
    }
    Ok(out)
}

/// Sum of Lambda over the enumerated generators.
pub fn lambda_sum_enumerated(gens: &[GenEntry]) -> u64 {
    gens.iter().map(|g| g.lambda).sum()
}

/// The omega-weighted count with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeT {
    pub value: u64,
    /// Contribution of prime ideals.
    pub prime_part: u64,
    /// Contribution of p^r with r >= 2.
    pub power_part: u64,
    /// One record per prime ideal with omega > 0.
    pub witnesses: Vec<ApproxRecord>,
}

impl TildeT {
    /// Witness with the smallest worse-side error.
    pub fn best_witness(&self) -> Option<&ApproxRecord> {
        self.witnesses.iter().min_by(|a, b| a.max_err().cmp(&b.max_err()).then(a.v.cmp(&b.v)))
    }
}

/// sum Lambda(a) omega(a) over the given prime-power generators.
pub fn tilde_t(prep: &Prepared<'_>, gens: &[GenEntry], radius: i64) -> Result<TildeT> {
    let mut t = TildeT { value: 0, prime_part: 0, power_part: 0, witnesses: Vec::new() };
    for e in gens {
        let om = prep.omega_direct(&e.v, radius, e.prime)?;
        if om.count == 0 {
            continue;
        }
        let w = e.lambda * om.count;
        t.value += w;
        if e.prime {
            t.prime_part += w;
            let (p, err1, err2) = om.best.expect("best requested");
            t.witnesses.push(ApproxRecord {
                p,
                v: e.v.clone(),
                err1,
                err2,
                norm_exp: prep.k.norm_exp(&e.v),
            });
        } else {
            t.power_part += w;
        }
    }
    Ok(t)
}

/// How the delta exponent of a scan row was chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaChoice {
    /// Smallest delta in the theorem window when it contains a power of q,
    /// otherwise -floor(N/8) with the row labeled outside the range.
    Rule { epsilon: f64 },
    Fixed(i64),
}

/// Real endpoints (lo, hi) of the window for log_q(delta) / N:
/// -(1/8 - log_q sqrt 2 - 2 eps) <= . <= -(log_q 2 + 2 eps).
pub fn delta_window(q: u64, epsilon: f64) -> (f64, f64) {
    let l2 = 2f64.ln() / (q as f64).ln();
    (-(0.125 - 0.5 * l2 - 2.0 * epsilon), -(l2 + 2.0 * epsilon))
}

/// (delta_exp, outside_theorem_range) for level N.
pub fn delta_rule(q: u64, n: i64, choice: DeltaChoice) -> (i64, bool) {
    match choice {
        DeltaChoice::Fixed(e) => {
            let (lo, hi) = delta_window(q, 0.0);
            let inside = q > 4096 && e as f64 >= lo * n as f64 && e as f64 <= hi * n as f64;
            (e, !inside)
        }
        DeltaChoice::Rule { epsilon } => {
            let (lo, hi) = delta_window(q, epsilon);
            let e_lo = (lo * n as f64).ceil() as i64;
            let e_hi = (hi * n as f64).floor() as i64;
            if q > 4096 && lo <= hi && e_lo <= e_hi {
                (e_lo, false)
            } else {
                (-n.div_euclid(8), true)
            }
        }
    }
}

/// One (target, N) cell of the scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub target_index: usize,
    pub n: i64,
    pub delta_exp: i64,
    pub radius_exp: i64,
    pub lambda_sum: u64,
    pub t_value: Ratio,
    pub tilde_t: u64,
    pub prime_part: u64,
    pub power_part: u64,
    pub ratio: f64,
    pub witness_count: usize,
    pub witness: Option<ApproxRecord>,
    /// Every prime witness, best first.
    pub witnesses: Vec<ApproxRecord>,
    pub achieved_theta: Option<f64>,
    pub target_theta: f64,
    pub outside_theorem_range: bool,
}

/// theta-hat = -maxerr / N - 1/2 (infinite for an exact hit).
pub fn achieved_theta(rec: &ApproxRecord) -> f64 {
    match rec.max_err() {
        QPow::Zero => f64::INFINITY,
        QPow::Exp(e) => -(e as f64) / rec.norm_exp as f64 - 0.5,
    }
}

/// Scans N over `levels` for every target, sharing the generator
/// enumeration between targets.
pub fn exponent_scan(
    k: &QuadField,
    targets: &[Target],
    levels: impl IntoIterator<Item = i64>,
    delta: DeltaChoice,
    scale_cap: u64,
) -> Result<Vec<ScanRow>> {
    let preps = targets
        .iter()
        .map(|t| Prepared::new(k, t).map(|p| p.with_scale_cap(scale_cap)))
        .collect::<Result<Vec<_>>>()?;
    let eps = match delta {
        DeltaChoice::Rule { epsilon } => epsilon,
        DeltaChoice::Fixed(_) => 0.0,
    };
    let l2 = 2f64.ln() / (k.q() as f64).ln();
    let target_theta = 0.125 - 0.5 * l2 - eps;
    let mut rows = Vec::new();
    for n in levels {
        let gens = prime_power_generators(k, n, scale_cap)?;
        let lambda_sum = lambda_sum_enumerated(&gens);
        let (delta_exp, outside) = delta_rule(k.q(), n, delta);
        let radius = radius_exp(delta_exp, n);
        let t_value = big_t(k, n, delta_exp, lambda_sum);
        for (ti, prep) in preps.iter().enumerate() {
            let tt = tilde_t(prep, &gens, radius)?;
            let best = tt.best_witness().cloned();
            let mut witnesses = tt.witnesses;
            witnesses.sort_by(|a, b| a.max_err().cmp(&b.max_err()).then(a.v.cmp(&b.v)));
            rows.push(ScanRow {
                target_index: ti,
                n,
                delta_exp,
                radius_exp: radius,
                lambda_sum,
                t_value,
                tilde_t: tt.value,
                prime_part: tt.prime_part,
                power_part: tt.power_part,
                ratio: tt.value as f64 / t_value.to_f64(),
                witness_count: witnesses.len(),
                achieved_theta: best.as_ref().map(achieved_theta),
                witness: best,
                witnesses,
                target_theta,
                outside_theorem_range: outside,
            });
        }
    }
    Ok(rows)
}
