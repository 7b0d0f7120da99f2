//! Vaughan's identity for monic polynomials and for ideals, the truncated
//! Mobius sum H, and the type-I / type-II sums of the experiment's weight.

use crate::algebra::{factorize, Poly};
use crate::diophantine::Prepared;
use crate::error::{Error, Result};
use crate::laurent::{cyc_reduce, CycSum};
use crate::quadratic::IdealCatalog;

/// Thresholds of the identity. The polynomial form compares degrees with
/// them; the ideal form compares norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VaughanParams {
    pub alpha: u64,
    pub beta: u64,
}

/// The three pieces a1 + a2 + a3 of Lambda.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VaughanTerms {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
}

impl VaughanTerms {
    pub fn total(&self) -> i64 {
        self.a1 + self.a2 + self.a3
    }
}

/// A divisor of f as an exponent vector over the prime factors of f.
type Exps = Vec<u32>;

/// Prime factors of f as (log_q size, exponent).
struct Lattice {
    primes: Vec<(i64, u32)>,
}

impl Lattice {
    fn divisors(&self) -> Vec<Exps> {
        let mut out: Vec<Exps> = vec![Vec::new()];
        for &(_, e) in &self.primes {
            out = out
                .into_iter()
                .flat_map(|d| {
                    (0..=e).map(move |k| {
                        let mut d2 = d.clone();
                        d2.push(k);
                        d2
                    })
                })
                .collect();
        }
        out
    }

    fn size(&self, d: &[u32]) -> i64 {
        d.iter().zip(&self.primes).map(|(&k, &(w, _))| w * k as i64).sum()
    }

    fn mobius(d: &[u32]) -> i64 {
        if d.iter().any(|&k| k > 1) {
            0
        } else if d.iter().filter(|&&k| k == 1).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn mangoldt(&self, d: &[u32]) -> i64 {
        let mut nz = d.iter().enumerate().filter(|(_, &k)| k > 0);
        match (nz.next(), nz.next()) {
            (Some((i, _)), None) => self.primes[i].0,
            _ => 0,
        }
    }

    fn quotient(a: &[u32], b: &[u32]) -> Option<Exps> {
        a.iter().zip(b).map(|(&x, &y)| x.checked_sub(y)).collect()
    }

    fn full(&self) -> Exps {
        self.primes.iter().map(|&(_, e)| e).collect()
    }

    /// The identity with `small_a(s)` / `small_b(s)` deciding whether a
    /// divisor of log-size s lies below alpha / beta.
    fn terms(&self, small_a: impl Fn(i64) -> bool, small_b: impl Fn(i64) -> bool) -> VaughanTerms {
        let divs = self.divisors();
        let f = self.full();
        let total = self.size(&f);
        let mut a1 = 0;
        let mut a2 = 0;
        let mut a3 = 0;
        for m in &divs {
            let mu_m = Self::mobius(m);
            let sm = self.size(m);
            if mu_m != 0 && small_a(sm) {
                a2 += mu_m * (total - sm);
                let rest = Self::quotient(&f, m).expect("divisor");
                for l in &divs {
                    if Self::quotient(&rest, l).is_some() && small_b(self.size(l)) {
                        a1 -= mu_m * self.mangoldt(l);
                    }
                }
            }
            let lam = self.mangoldt(m);
            if lam != 0 && !small_b(sm) && sm < total {
                let n = Self::quotient(&f, m).expect("divisor");
                let h: i64 = divs
                    .iter()
                    .filter(|d| Self::quotient(&n, d).is_some() && small_a(self.size(d)))
                    .map(|d| Self::mobius(d))
                    .sum();
                a3 -= lam * h;
            }
        }
        VaughanTerms { a1, a2, a3 }
    }
}

/// Vaughan's identity for a monic polynomial with degree thresholds.
pub fn vaughan_terms_poly(f: &Poly, params: VaughanParams) -> Result<VaughanTerms> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::Precondition("f must be monic and nonzero".into()));
    }
    if params.beta as i64 >= f.deg() {
        return Err(Error::Precondition(format!(
            "beta < deg f required (beta = {}, deg f = {})",
            params.beta,
            f.deg()
        )));
    }
    let fac = factorize(f)?;
    let lat = Lattice { primes: fac.factors.iter().map(|(p, e)| (p.deg(), *e)).collect() };
    let (a, b) = (params.alpha as i64, params.beta as i64);
    Ok(lat.terms(|s| s <= a, |s| s <= b))
}

fn norm_at_most(q: u64, e: i64, bound: u64) -> bool {
    match q.checked_pow(e as u32) {
        Some(n) => n <= bound,
        None => false,
    }
}

/// Vaughan's identity for a catalogued ideal with norm thresholds.
pub fn vaughan_terms_ideal(cat: &IdealCatalog, q: u64, idx: usize, params: VaughanParams) -> Result<VaughanTerms> {
    if params.alpha == 0 || params.beta == 0 {
        return Err(Error::Precondition("alpha and beta must be positive".into()));
    }
    let ne = cat.norm_exp(idx);
    if norm_at_most(q, ne, params.beta) {
        return Err(Error::Precondition(format!(
            "beta < N(f) required (beta = {}, N(f) = q^{ne})",
            params.beta
        )));
    }
    let lat = Lattice {
        primes: cat.ideals[idx]
            .factors
            .iter()
            .map(|&(p, e)| (cat.primes[p].norm_exp, e))
            .collect(),
    };
    Ok(lat.terms(
        |s| norm_at_most(q, s, params.alpha),
        |s| norm_at_most(q, s, params.beta),
    ))
}

/// H(n) = sum of mu(d) over d | n with N(d) <= alpha.
pub fn h_value(cat: &IdealCatalog, q: u64, idx: usize, alpha: u64) -> i64 {
    cat.divisors(idx)
        .into_iter()
        .filter(|&d| norm_at_most(q, cat.norm_exp(d), alpha))
        .map(|d| cat.mobius(d))
        .sum()
}

/// Type-I / type-II report at level N. All CycSum values omit the common
/// factor q^prefactor_exp.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeSums {
    pub n: i64,
    pub params: VaughanParams,
    pub delta_exp: i64,
    pub radius_exp: i64,
    pub prefactor_exp: i64,
    pub t_i: f64,
    pub t_ii: f64,
    pub s1: CycSum,
    pub s2: CycSum,
    pub s3: CycSum,
    /// sum of Lambda(f) F(f) over N(f) = q^N, evaluated directly.
    pub direct: CycSum,
    /// Number of (m, n) pairs evaluated in the type-II range.
    pub type_ii_pairs: usize,
    pub max_lambda: u64,
    pub max_abs_h: i64,
}

impl TypeSums {
    pub fn total(&self) -> CycSum {
        self.s1.add(&self.s2).add(&self.s3)
    }

    pub fn exact(&self) -> bool {
        self.total() == self.direct
    }
}

/// Evaluates S1, S2, S3 (from their bilinear forms), T_I and T_II for
/// F supported on N(a) = q^N, and the direct Lambda-weighted sum.
pub fn type_sums(prep: &Prepared<'_>, n: i64, params: VaughanParams, delta_exp: i64) -> Result<TypeSums> {
    let k = prep.k;
    let q = k.q();
    let x = q
        .checked_pow(n as u32)
        .filter(|&x| x <= prep.scale_cap)
        .ok_or_else(|| Error::ScaleCap(format!("q^{n} exceeds the cap {}", prep.scale_cap)))?;
    if params.alpha == 0 || params.beta == 0 {
        return Err(Error::Precondition("alpha and beta must be positive".into()));
    }
    if params.alpha.saturating_mul(params.beta) >= x {
        return Err(Error::Precondition(format!(
            "αβ < X violated: {} * {} >= q^{n} = {x}",
            params.alpha, params.beta
        )));
    }
    let (alpha, beta) = (params.alpha, params.beta);
    let cat = IdealCatalog::new(k, n)?;
    let radius = crate::diophantine::radius_exp(delta_exp, n);
    let mut f_val: Vec<Option<CycSum>> = vec![None; cat.len()];
    let mut prefactor_exp = None;
    for i in cat.of_norm_exp(n) {
        let nf = prep.nonzero_frequencies(&cat.ideals[i].rep.gen, radius)?;
        prefactor_exp = Some(nf.prefactor_exp);
        f_val[i] = Some(nf.sum);
    }
    let prefactor_exp = prefactor_exp.unwrap_or(n + 2 * radius - k.half_deg());
    let scale = (q as f64).powi(prefactor_exp as i32);
    let zero = CycSum::zero(q);
    let fv = |i: usize| f_val[i].as_ref().unwrap_or(&zero);
    let ln = n as u64;
    let cap_h = 1i64 << n.min(62);
    let mut max_lambda = 0u64;
    let mut max_abs_h = 0i64;
    let mut check_lambda = |l: u64| -> Result<()> {
        max_lambda = max_lambda.max(l);
        if l > ln {
            return Err(Error::IdentityFailure(format!("Lambda = {l} exceeds log_q X = {n}")));
        }
        Ok(())
    };

    let mut direct = CycSum::zero(q);
    for i in cat.of_norm_exp(n) {
        let l = cat.mangoldt(i);
        check_lambda(l)?;
        direct.add_assign(&fv(i).scale(l as i64));
    }

    // inner sums over n with N(t n) = q^N
    let inner = |t: usize, weight: &dyn Fn(usize) -> i64| -> CycSum {
        let mut s = CycSum::zero(q);
        for m in cat.of_norm_exp(n - cat.norm_exp(t)) {
            let w = weight(m);
            if w != 0 {
                let tm = cat.product(t, m).expect("norm q^N lies in the catalog");
                s.add_assign(&fv(tm).scale(w));
            }
        }
        s
    };

    let mut s1 = CycSum::zero(q);
    let mut t_i = 0.0;
    let ab = alpha * beta;
    for t in 0..cat.len() {
        if !norm_at_most(q, cat.norm_exp(t), ab) {
            continue;
        }
        let inner_t = inner(t, &|_| 1);
        t_i += cyc_reduce(&inner_t).magnitude;
        let mut c = 0i64;
        for l in cat.divisors(t) {
            if !norm_at_most(q, cat.norm_exp(l), beta) {
                continue;
            }
            let lam = cat.mangoldt(l);
            if lam == 0 {
                continue;
            }
            check_lambda(lam)?;
            let m = cat
                .lookup(&quotient(&cat.ideals[t].factors, &cat.ideals[l].factors))
                .expect("divisor in catalog");
            if norm_at_most(q, cat.norm_exp(m), alpha) {
                c += lam as i64 * cat.mobius(m);
            }
        }
        s1.add_assign(&inner_t.scale(-c));
    }
    let t_i = t_i * scale * (ab as f64).ln() / (q as f64).ln();

    let mut s2 = CycSum::zero(q);
    for l in 0..cat.len() {
        let mu = cat.mobius(l);
        if mu == 0 || !norm_at_most(q, cat.norm_exp(l), alpha) {
            continue;
        }
        let w = n - cat.norm_exp(l);
        s2.add_assign(&inner(l, &|_| w).scale(mu));
    }

    let mut s3 = CycSum::zero(q);
    let mut pairs = 0usize;
    for m in 0..cat.len() {
        let lam = cat.mangoldt(m);
        let em = cat.norm_exp(m);
        if lam == 0 || norm_at_most(q, em, beta) || em > n {
            continue;
        }
        check_lambda(lam)?;
        for nn in cat.of_norm_exp(n - em) {
            if norm_at_most(q, cat.norm_exp(nn), alpha) {
                continue;
            }
            let h = h_value(&cat, q, nn, alpha);
            max_abs_h = max_abs_h.max(h.abs());
            if h.abs() > cap_h {
                return Err(Error::IdentityFailure(format!("|H| = {} exceeds 2^{n}", h.abs())));
            }
            pairs += 1;
            if h != 0 {
                let mn = cat.product(m, nn).expect("norm q^N lies in the catalog");
                s3.add_assign(&fv(mn).scale(-(lam as i64) * h));
            }
        }
    }
    let t_ii = cyc_reduce(&s3).magnitude * scale;

    Ok(TypeSums {
        n,
        params,
        delta_exp,
        radius_exp: radius,
        prefactor_exp,
        t_i,
        t_ii,
        s1,
        s2,
        s3,
        direct,
        type_ii_pairs: pairs,
        max_lambda,
        max_abs_h,
    })
}

fn quotient(a: &[(usize, u32)], b: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for &(p, e) in a {
        let f = b.iter().find(|(q, _)| *q == p).map_or(0, |x| x.1);
        if e > f {
            out.push((p, e - f));
        }
    }
    out
}

#[cfg(test)]
mod tests;
