//! Approximation of target pairs (x1, x2) by ratios sigma_i(p)/sigma_i(v):
//! the counter omega, its Poisson form, Dirichlet search, and the scan
//! comparing the Lambda-weighted counts with and without omega.

mod scan;

pub use scan::{
    achieved_theta, delta_rule, delta_window, exponent_scan, lambda_sum_enumerated,
    prime_power_generators, tilde_t, DeltaChoice, GenEntry, ScanRow, TildeT,
};

use std::cmp::Ordering;
use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::algebra::{irreducibles_of_degree, splitting_unchecked, Poly, Splitting};
use crate::error::{Error, Result};
use crate::laurent::{CycSum, Laurent, Magnitude, QPow};
use crate::quadratic::{Embedding, QuadElem, QuadField};

/// Default bound on any single enumeration (candidate numerators, dual
/// lattice boxes, generator lists).
pub const DEFAULT_SCALE_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Seeded { seed: u64 },
}

/// A pair (x1, x2) in F_q((1/T))^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub x1: Laurent,
    pub x2: Laurent,
    pub provenance: Provenance,
}

impl Target {
    pub fn explicit(x1: Laurent, x2: Laurent) -> Target {
        Target { x1, x2, provenance: Provenance::Explicit }
    }

    /// Coefficients drawn from SplitMix64 (state = seed) as next_u64() % q,
    /// x1 first then x2, each from exponent 0 down to `tail`.
    pub fn seeded(q: u64, seed: u64, tail: i64) -> Target {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let len = (1 - tail).max(1) as usize;
        let mut draw = || (0..len).map(|_| rng.next_u64() % q).collect::<Vec<_>>();
        let c1 = draw();
        let c2 = draw();
        Target {
            x1: Laurent::new(q, 0, c1, Some(tail)).expect("valid shape"),
            x2: Laurent::new(q, 0, c2, Some(tail)).expect("valid shape"),
            provenance: Provenance::Seeded { seed },
        }
    }

    /// (sigma_1(p/v), sigma_2(p/v)) known down to `tail`.
    pub fn planted(k: &QuadField, p: &QuadElem, v: &QuadElem, tail: i64) -> Result<Target> {
        let (j1, j2) = k
            .sigma_degrees(v)
            .ok_or_else(|| Error::Precondition("zero denominator".into()))?;
        let pdeg = p.a.deg().max(p.b.deg() + k.half_deg()).max(0);
        let t0 = tail - 2 * j1.abs().max(j2.abs()) - pdeg - 4;
        let mut xs = Vec::new();
        for w in [Embedding::First, Embedding::Second] {
            let sv = k.sigma(v, w, t0)?;
            let sp = k.sigma(p, w, t0)?;
            let top = sv.top_exp().expect("nonzero embedding");
            let inv = sv.inv(t0 - 2 * top)?;
            xs.push(sp.mul(&inv).truncate(tail));
        }
        let x2 = xs.pop().unwrap();
        let x1 = xs.pop().unwrap();
        Ok(Target::explicit(x1, x2))
    }

    /// Lowest exponent known in both components.
    pub fn tail(&self) -> i64 {
        self.x1.tail().unwrap_or(i64::MIN).max(self.x2.tail().unwrap_or(i64::MIN))
    }
}

/// Error exponents and quality of an approximation p/v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxRecord {
    pub p: QuadElem,
    pub v: QuadElem,
    /// |x_i - sigma_i(p)/sigma_i(v)|; `Zero` when it vanishes to the
    /// available precision.
    pub err1: QPow,
    pub err2: QPow,
    pub norm_exp: i64,
}

impl ApproxRecord {
    pub fn max_err(&self) -> QPow {
        self.err1.max(self.err2)
    }

    /// max err exponent + norm exponent of v (`None` for an exact hit).
    pub fn quality_exp(&self) -> Option<i64> {
        self.max_err().exp().map(|e| e + self.norm_exp)
    }

    fn sort_key(&self) -> (Option<i64>, i64, &QuadElem) {
        (self.quality_exp(), self.norm_exp, &self.v)
    }
}

impl fmt::Display for ApproxRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p = {}, v = {}, |err| = ({}, {}), N(v) = q^{}",
            self.p, self.v, self.err1, self.err2, self.norm_exp
        )
    }
}

/// Result of [`Prepared::omega_direct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    pub count: u64,
    /// A counted numerator with the smallest worse-side error.
    pub best: Option<(QuadElem, QPow, QPow)>,
}

/// Result of [`Prepared::omega_poisson`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonOmega {
    /// Sum of e(C(vp)) over the dual ball, including p = 0.
    pub sum: CycSum,
    /// log_q of the prefactor N(a) Delta^2 / |sqrt d|.
    pub prefactor_exp: i64,
    pub value: u64,
    pub terms: usize,
}

/// F(a) / prefactor: the dual sum without the zero frequency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonzeroFrequencies {
    pub sum: CycSum,
    pub prefactor_exp: i64,
}

fn pow_q(q: u64, e: i64) -> Option<u64> {
    if e < 0 {
        return Some(0);
    }
    q.checked_pow(u32::try_from(e).ok()?)
}

fn qpow_of(m: Magnitude) -> QPow {
    match m {
        Magnitude::Exact(v) => v,
        Magnitude::Below(_) => QPow::Zero,
    }
}

/// A target with the derived series used by every evaluation:
/// H = (x1+x2)/2 and G = (x1-x2)/2, so that for y = a + b sqrt d
/// D(y) = aH + b sqrt(d) G and C(y) = a G/sqrt(d) + bH.
#[derive(Clone, Debug)]
pub struct Prepared<'k> {
    pub k: &'k QuadField,
    pub target: Target,
    h: Laurent,
    sd: Laurent,
    sd_g: Laurent,
    sd_h: Laurent,
    g_over_sd: Laurent,
    g: Laurent,
    inv_sd: Laurent,
    pub scale_cap: u64,
}

impl<'k> Prepared<'k> {
    pub fn new(k: &'k QuadField, target: &Target) -> Result<Prepared<'k>> {
        let q = k.q();
        if target.x1.modulus() != q || target.x2.modulus() != q {
            return Err(Error::FieldMismatch(target.x1.modulus(), q));
        }
        let t = target.tail();
        if t == i64::MIN {
            return Err(Error::Precondition("exact targets are not supported".into()));
        }
        let g_half = k.half_deg();
        let inv2 = crate::algebra::inv_mod(2, q);
        let h = target.x1.add(&target.x2).scale(inv2);
        let g = target.x1.sub(&target.x2).scale(inv2);
        let sd = k.sqrt_d(t - g_half - 2)?;
        let inv_sd = k.inv_sqrt_d(t - 3 * g_half - 2)?;
        let sd_g = sd.mul(&g);
        let sd_h = sd.mul(&h);
        let g_over_sd = g.mul(&inv_sd);
        Ok(Prepared {
            k,
            target: target.clone(),
            h,
            sd,
            sd_g,
            sd_h,
            g_over_sd,
            g,
            inv_sd,
            scale_cap: DEFAULT_SCALE_CAP,
        })
    }

    pub fn with_scale_cap(mut self, cap: u64) -> Self {
        self.scale_cap = cap;
        self
    }

    fn lin(&self, y: &QuadElem, pa: &Laurent, pb: &Laurent, floor: Option<i64>) -> Laurent {
        let a = Laurent::from_poly(&y.a);
        let b = Laurent::from_poly(&y.b);
        match floor {
            Some(f) => a.mul_to(pa, f).add(&b.mul_to(pb, f)),
            None => a.mul(pa).add(&b.mul(pb)),
        }
    }

    /// D(y) = (x1 sigma_1(y) + x2 sigma_2(y)) / 2.
    pub fn d_value(&self, y: &QuadElem, floor: Option<i64>) -> Laurent {
        self.lin(y, &self.h, &self.sd_g, floor)
    }

    /// C(y) = (x1 sigma_1(y) - x2 sigma_2(y)) / (2 sqrt d).
    pub fn c_value(&self, y: &QuadElem, floor: Option<i64>) -> Laurent {
        self.lin(y, &self.g_over_sd, &self.h, floor)
    }

    /// sqrt(d) C(y) = aG + b sqrt(d) H.
    fn y_value(&self, y: &QuadElem, floor: Option<i64>) -> Laurent {
        self.lin(y, &self.g, &self.sd_h, floor)
    }

    pub fn cd_values(&self, y: &QuadElem) -> (Laurent, Laurent) {
        (self.c_value(y, None), self.d_value(y, None))
    }

    /// p with a = polypart((c1+c2)/2) and b = polypart((c1-c2)/(2 sqrt d)),
    /// where c_i = x_i sigma_i(v).
    pub fn lattice_round(&self, v: &QuadElem) -> Result<QuadElem> {
        let a = self.d_value(v, None).poly_part()?;
        let b = self.c_value(v, None).poly_part()?;
        Ok(QuadElem::new(a, b))
    }

    /// Normalized errors |x_i - sigma_i(p)/sigma_i(v)|.
    pub fn errors(&self, p: &QuadElem, v: &QuadElem) -> Result<(QPow, QPow)> {
        let (j1, j2) = self
            .k
            .sigma_degrees(v)
            .ok_or_else(|| Error::Precondition("zero denominator".into()))?;
        let x = self.d_value(v, None).sub(&Laurent::from_poly(&p.a));
        let t = self.y_value(v, None).sub(&Laurent::from_poly(&p.b).mul(&self.sd));
        let e1 = qpow_of(x.add(&t).magnitude()).mul(QPow::Exp(-j1));
        let e2 = qpow_of(x.sub(&t).magnitude()).mul(QPow::Exp(-j2));
        Ok((e1, e2))
    }

    pub fn record(&self, p: &QuadElem, v: &QuadElem) -> Result<ApproxRecord> {
        let (err1, err2) = self.errors(p, v)?;
        Ok(ApproxRecord { p: p.clone(), v: v.clone(), err1, err2, norm_exp: self.k.norm_exp(v) })
    }

    /// omega for the ideal (v) with open radius Delta = q^radius_exp:
    /// the number of p with |x_i - sigma_i(p)/sigma_i(v)| < Delta.
    ///
    /// Write X = D(v), Y = sqrt(d) C(v), p = alpha + beta sqrt d, s = X -
    /// alpha, t = Y - beta sqrt d; the conditions are |s + t| <= q^r1 and
    /// |s - t| <= q^r2 with r_i = radius_exp - 1 + deg sigma_i(v). They are
    /// equivalent to |s| <= q^rmax together with beta in the ball of radius
    /// q^(rmin - g) around (Y +- s)/sqrt d.
    pub fn omega_direct(&self, v: &QuadElem, radius_exp: i64, want_best: bool) -> Result<Omega> {
        let q = self.k.q();
        let g = self.k.half_deg();
        let (j1, j2) = self
            .k
            .sigma_degrees(v)
            .ok_or_else(|| Error::Precondition("zero generator".into()))?;
        let r1 = radius_exp - 1 + j1;
        let r2 = radius_exp - 1 + j2;
        let (rmin, rmax) = (r1.min(r2), r1.max(r2));
        let e = rmin - g;
        let floor = e.min(rmin) - 2;
        let x = self.d_value(v, Some(floor));
        let c = self.c_value(v, Some(floor));
        let base = x.poly_part()?;
        let n_alpha = if rmax >= 0 {
            pow_q(q, rmax + 1).filter(|&n| n <= self.scale_cap).ok_or_else(|| {
                Error::ScaleCap(format!("q^{} numerator candidates", rmax + 1))
            })?
        } else {
            if !x.frac_at_most(rmax)? {
                return Ok(Omega { count: 0, best: None });
            }
            1
        };
        let per_alpha = if e >= 0 {
            Some(pow_q(q, e + 1).ok_or_else(|| Error::ScaleCap(format!("q^{}", e + 1)))?)
        } else {
            None
        };
        let sign_plus = r1 <= r2;
        let mut count: u64 = 0;
        let mut best: Option<(QuadElem, QPow, QPow)> = None;
        for hi in 0..n_alpha {
            let alpha = if rmax >= 0 {
                base.add(&crate::quadratic::poly_from_index(q, hi))
            } else {
                base.clone()
            };
            let s = x.sub(&Laurent::from_poly(&alpha));
            let s_sd = s.mul_to(&self.inv_sd, floor - g);
            let z = if sign_plus { c.add(&s_sd) } else { c.sub(&s_sd) };
            let hit = match per_alpha {
                Some(m) => {
                    count = count
                        .checked_add(m)
                        .filter(|&c| c <= u64::MAX / 2)
                        .ok_or_else(|| Error::ScaleCap("omega overflow".into()))?;
                    true
                }
                None => {
                    let ok = z.frac_at_most(e)?;
                    count += ok as u64;
                    ok
                }
            };
            if hit && want_best {
                let p = QuadElem::new(alpha, z.poly_part()?);
                let (e1, e2) = self.errors(&p, v)?;
                if best.as_ref().is_none_or(|b| e1.max(e2) < b.1.max(b.2)) {
                    best = Some((p, e1, e2));
                }
            }
        }
        Ok(Omega { count, best })
    }

    /// The dual-lattice sum: all p with deg sigma_i(vp) <= g - radius_exp - 1
    /// (i.e. |sigma_i(vp)/(2 sqrt d)| < Delta^-1) and the phase index of
    /// e(C(vp)) for each, p = 0 included.
    fn dual_sum(&self, v: &QuadElem, radius_exp: i64, skip_zero: bool) -> Result<(CycSum, usize)> {
        let k = self.k;
        let q = k.q();
        let g = k.half_deg();
        let (j1, j2) = k
            .sigma_degrees(v)
            .ok_or_else(|| Error::Precondition("zero generator".into()))?;
        let m1 = g - radius_exp - 1 - j1;
        let m2 = g - radius_exp - 1 - j2;
        let ma = m1.max(m2);
        let mb = ma - g;
        let mut sum = CycSum::zero(q);
        let mut terms = 0usize;
        if !skip_zero {
            sum.add_zeta(0, 1);
            terms += 1;
        }
        if ma < 0 {
            return Ok((sum, terms));
        }
        let na = pow_q(q, ma + 1).unwrap_or(u64::MAX);
        let nb = if mb < 0 { 1 } else { pow_q(q, mb + 1).unwrap_or(u64::MAX) };
        if na.saturating_mul(nb) > self.scale_cap {
            return Err(Error::ScaleCap(format!("dual box of {na} x {nb} elements")));
        }
        for bi in 0..nb {
            let b = crate::quadratic::poly_from_index(q, bi);
            for ai in 0..na {
                if ai == 0 && bi == 0 {
                    continue;
                }
                let w = QuadElem::new(crate::quadratic::poly_from_index(q, ai), b.clone());
                let (s1, s2) = k.sigma_degrees(&w).expect("nonzero");
                if s1 > m1 || s2 > m2 {
                    continue;
                }
                let y = k.mul(v, &w);
                let phase = self.c_value(&y, Some(-3)).char_e()?;
                sum.add_zeta(phase, 1);
                terms += 1;
            }
        }
        Ok((sum, terms))
    }

    /// log_q of N(a) Delta^2 / |sqrt d|.
    pub fn prefactor_exp(&self, v: &QuadElem, radius_exp: i64) -> i64 {
        self.k.norm_exp(v) + 2 * radius_exp - self.k.half_deg()
    }

    /// omega through the Poisson identity, evaluated exactly in Z[zeta_p].
    pub fn omega_poisson(&self, v: &QuadElem, radius_exp: i64) -> Result<PoissonOmega> {
        let q = self.k.q();
        let (sum, terms) = self.dual_sum(v, radius_exp, false)?;
        let prefactor_exp = self.prefactor_exp(v, radius_exp);
        let r = sum.rational().ok_or_else(|| {
            Error::IdentityFailure(format!("dual sum {sum} for {v} is not rational"))
        })?;
        let value = scale_by_q_power(r, q, prefactor_exp).ok_or_else(|| {
            Error::IdentityFailure(format!(
                "q^{prefactor_exp} * {r} is not a nonnegative integer (generator {v})"
            ))
        })?;
        Ok(PoissonOmega { sum, prefactor_exp, value, terms })
    }

    /// The weight F(a) of the type-I/II sums, as (prefactor exponent,
    /// exact sum over the nonzero frequencies).
    pub fn nonzero_frequencies(&self, v: &QuadElem, radius_exp: i64) -> Result<NonzeroFrequencies> {
        let (sum, _) = self.dual_sum(v, radius_exp, true)?;
        Ok(NonzeroFrequencies { sum, prefactor_exp: self.prefactor_exp(v, radius_exp) })
    }
}

/// r * q^e as a nonnegative integer, if it is one.
fn scale_by_q_power(r: i64, q: u64, e: i64) -> Option<u64> {
    if r < 0 {
        return None;
    }
    let r = r as u64;
    if e >= 0 {
        return pow_q(q, e).and_then(|m| r.checked_mul(m));
    }
    let m = pow_q(q, -e)?;
    r.is_multiple_of(m).then_some(r / m)
}

/// Open radius exponent D of Delta = delta / q^(N/2) = q^(delta_exp -
/// floor(N/2)).
pub fn radius_exp(delta_exp: i64, n: i64) -> i64 {
    delta_exp - n.div_euclid(2)
}

/// Every canonical denominator v with N(v) <= q^max_norm_exp, paired with
/// p = lattice_round(v), keeping those with max error <= q^c_exp / N(v).
/// Sorted by quality (exact hits first), then norm, then v.
pub fn dirichlet_search(
    prep: &Prepared<'_>,
    max_norm_exp: i64,
    c_exp: i64,
) -> Result<Vec<ApproxRecord>> {
    let k = prep.k;
    let mut out = Vec::new();
    for n in 0..=max_norm_exp {
        let gens = k.generators_of_norm_exp(n);
        if gens.len() as u64 > prep.scale_cap {
            return Err(Error::ScaleCap(format!("{} denominators of norm q^{n}", gens.len())));
        }
        for v in gens {
            let p = prep.lattice_round(&v)?;
            let rec = prep.record(&p, &v)?;
            if rec.max_err() <= QPow::Exp(c_exp - n) {
                out.push(rec);
            }
        }
    }
    out.sort_by(cmp_quality);
    Ok(out)
}

fn cmp_quality(a: &ApproxRecord, b: &ApproxRecord) -> Ordering {
    let (qa, na, va) = a.sort_key();
    let (qb, nb, vb) = b.sort_key();
    // None (exact) sorts first, as the best quality
    qa.map_or(i64::MIN, |x| x)
        .cmp(&qb.map_or(i64::MIN, |x| x))
        .then(na.cmp(&nb))
        .then_with(|| va.cmp(vb))
}

/// Best (smallest) quality exponent among records; `None` inside means an
/// exact hit.
pub fn best_quality(records: &[ApproxRecord]) -> Option<Option<i64>> {
    records.first().map(|r| r.quality_exp())
}

/// Rejects targets that a small Dirichlet search hits exactly, i.e. that
/// look like elements of sigma(K).
pub fn screen_target(prep: &Prepared<'_>, max_norm_exp: i64) -> Result<()> {
    let recs = dirichlet_search(prep, max_norm_exp, i64::MAX / 4)?;
    if let Some(r) = recs.iter().find(|r| r.max_err() == QPow::Zero) {
        return Err(Error::TargetRejected(format!(
            "target equals sigma(p/v) to working precision with {r}"
        )));
    }
    Ok(())
}

/// Number of prime ideals of norm exactly q^f.
fn prime_count(k: &QuadField, f: i64) -> u64 {
    let mut c = 0;
    for p in irreducibles_of_degree(k.q(), f as usize) {
        c += match splitting_unchecked(k.d(), &p) {
            Splitting::Split => 2,
            Splitting::Ramified => 1,
            Splitting::Inert => 0,
        };
    }
    if f % 2 == 0 {
        for p in irreducibles_of_degree(k.q(), (f / 2) as usize) {
            if splitting_unchecked(k.d(), &p) == Splitting::Inert {
                c += 1;
            }
        }
    }
    c
}

/// Sum of Lambda over ideals of norm q^N, from splitting data: every prime
/// of norm q^f with f | N contributes f once (as p^(N/f)).
pub fn pnt_sum(k: &QuadField, n: i64, scale_cap: u64) -> Result<u64> {
    if n < 1 {
        return Ok(0);
    }
    match pow_q(k.q(), n) {
        Some(x) if x <= scale_cap => {}
        _ => return Err(Error::ScaleCap(format!("q^{n} exceeds {scale_cap}"))),
    }
    Ok((1..=n).filter(|f| n % f == 0).map(|f| f as u64 * prime_count(k, f)).sum())
}

/// Exact rational number num/den with den > 0, reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    /// m * q^e.
    pub fn from_q_power(m: u128, q: u64, e: i64) -> Ratio {
        let qq = q as u128;
        if e >= 0 {
            return Ratio { num: m * qq.pow(e as u32), den: 1 };
        }
        let mut num = m;
        let mut den = qq.pow((-e) as u32);
        while den > 1 && num.is_multiple_of(qq) {
            num /= qq;
            den /= qq;
        }
        if num == 0 {
            den = 1;
        }
        Ratio { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// T(N) = N(a) Delta^2 / |sqrt d| * (sum of Lambda over norm q^N).
pub fn big_t(k: &QuadField, n: i64, delta_exp: i64, lambda_sum: u64) -> Ratio {
    let e = n + 2 * radius_exp(delta_exp, n) - k.half_deg();
    Ratio::from_q_power(lambda_sum as u128, k.q(), e)
}

/// Recomputes normalized errors from scratch: a fresh square root of d,
/// fresh embeddings and inverses, and x_i - sigma_i(p) / sigma_i(v).
pub fn recompute_record(
    d: &Poly,
    target: &Target,
    p: &QuadElem,
    v: &QuadElem,
) -> Result<(QPow, QPow)> {
    let q = d.modulus();
    let xt = target.tail();
    let g = d.deg() / 2;
    let vdeg = v.a.deg().max(v.b.deg() + g).max(0);
    let pdeg = p.a.deg().max(p.b.deg() + g).max(0);
    let deep = xt - 4 * vdeg - 2 * pdeg - 2 * g - 16;
    let sd = crate::laurent::sqrt_of_poly(d, deep)?;
    let mut out = Vec::new();
    for (x, sign) in [(&target.x1, 1u64), (&target.x2, q - 1)] {
        let sv = Laurent::from_poly(&v.a).add(&Laurent::from_poly(&v.b).mul(&sd).scale(sign));
        let sp = Laurent::from_poly(&p.a).add(&Laurent::from_poly(&p.b).mul(&sd).scale(sign));
        let top = sv
            .top_exp()
            .ok_or_else(|| Error::Precondition("zero denominator".into()))?;
        let inv = sv.inv(sv.tail().unwrap_or(deep) - 2 * top)?;
        let diff = x.sub(&sp.mul(&inv));
        out.push(qpow_of(diff.magnitude()));
    }
    Ok((out[0], out[1]))
}

#[cfg(test)]
mod tests;
