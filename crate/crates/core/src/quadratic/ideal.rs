use std::collections::HashMap;

use super::unit::from_index;
use super::{QuadElem, QuadField};
use crate::algebra::{
    factorize, inv_mod, irreducibles_of_degree, is_irreducible, splitting_unchecked, Poly,
    Splitting,
};
use crate::error::{Error, Result};

/// Tag distinguishing the two primes above a split P: `First` is the one
/// whose canonical generator is smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Which {
    First,
    Second,
}

/// Nonzero ideal of A stored through its canonical generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealRep {
    pub gen: QuadElem,
    pub norm_exp: i64,
}

/// A prime ideal together with the polynomial prime below it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: Poly,
    pub splitting: Splitting,
    pub which: Option<Which>,
    pub gen: QuadElem,
    pub norm_exp: i64,
}

impl PrimeIdeal {
    pub fn rep(&self) -> IdealRep {
        IdealRep { gen: self.gen.clone(), norm_exp: self.norm_exp }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpotCheckFailure {
    pub p: Poly,
    pub splitting: Splitting,
    pub which: Option<Which>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpotCheckReport {
    pub checked: usize,
    pub failures: Vec<SpotCheckFailure>,
}

/// The generator of (v) in S((v)) whose first nonzero coefficient is 1.
pub fn canonicalize(k: &QuadField, v: &QuadElem) -> Result<QuadElem> {
    k.canonical_generator(v)
}

impl QuadField {
    /// deg sigma_1 window for S of an ideal of norm q^n: n - k < 2j <= n + k.
    pub fn in_window(&self, v: &QuadElem, n: i64) -> bool {
        let k = self.unit().abs_exp;
        match self.sigma_degrees(v) {
            Some((j, _)) => n - k < 2 * j && 2 * j <= n + k,
            None => false,
        }
    }

    /// Degree bounds (deg a, deg b) containing every element of S(a) for
    /// ideals of norm q^n: both |sigma_i(v)| <= q^B with B = floor((n+k)/2),
    /// and a, b sqrt d are half-sums of the embeddings.
    pub fn window_box(&self, n: i64) -> (i64, i64) {
        let b = (n + self.unit().abs_exp).div_euclid(2);
        (b, b - self.half_deg())
    }

    /// u^r v for the unique r placing deg sigma_1 in the window.
    fn balance(&self, v: &QuadElem) -> Result<QuadElem> {
        let (j0, _) = self
            .sigma_degrees(v)
            .ok_or_else(|| Error::Precondition("the zero element generates no ideal".into()))?;
        let n = self.norm(v).deg();
        let k = self.unit().abs_exp;
        let r = (n + k - 2 * j0).div_euclid(2 * k);
        Ok(self.mul(&self.unit_pow(r), v))
    }

    /// The q - 1 generators of (v) lying in the balanced window, sorted
    /// canonically (so the canonical generator comes first).
    pub fn canonical_generators(&self, v: &QuadElem) -> Result<Vec<QuadElem>> {
        let w = self.balance(v)?;
        let mut out: Vec<QuadElem> = (1..self.q()).map(|e| w.scale(e)).collect();
        out.sort();
        Ok(out)
    }

    pub fn canonical_generator(&self, v: &QuadElem) -> Result<QuadElem> {
        let w = self.balance(v)?;
        let c = w.first_coeff().expect("nonzero");
        Ok(w.scale(inv_mod(c, self.q())))
    }

    pub fn ideal_of(&self, v: &QuadElem) -> Result<IdealRep> {
        let gen = self.canonical_generator(v)?;
        let norm_exp = self.norm(&gen).deg();
        Ok(IdealRep { gen, norm_exp })
    }

    /// Calls `f` on every normalized (first coefficient 1) element of norm
    /// degree n in the window, within deg a <= box_a and deg b <= box_b.
    /// Stops early when `f` returns true.
    pub fn for_each_window_element<F>(&self, n: i64, box_a: i64, box_b: i64, mut f: F)
    where
        F: FnMut(&QuadElem, &Poly) -> bool,
    {
        if box_a < 0 && box_b < 0 {
            return;
        }
        let q = self.q();
        let side = |bound: i64| if bound < 0 { 1 } else { q.pow((bound + 1) as u32) };
        for bi in 0..side(box_b) {
            let b = from_index(q, bi);
            let bd = b.square().mul(self.d());
            for ai in 0..side(box_a) {
                let a = from_index(q, ai);
                let v = QuadElem { a, b: b.clone() };
                if v.first_coeff() != Some(1) {
                    continue;
                }
                let nrm = v.a.square().sub(&bd);
                if nrm.deg() != n || !self.in_window(&v, n) {
                    continue;
                }
                if f(&v, &nrm) {
                    return;
                }
            }
        }
    }

    /// Canonical generators of every ideal of norm q^n, by enumeration.
    pub fn generators_of_norm_exp(&self, n: i64) -> Vec<QuadElem> {
        let (ba, bb) = self.window_box(n);
        let mut out = Vec::new();
        self.for_each_window_element(n, ba, bb, |v, _| {
            out.push(v.clone());
            false
        });
        out.sort();
        out
    }

    fn check_prime(&self, p: &Poly) -> Result<Splitting> {
        if !p.is_monic() || p.deg() < 1 || !is_irreducible(p)? {
            return Err(Error::Precondition(format!("{p} is not a monic irreducible")));
        }
        Ok(splitting_unchecked(self.d(), p))
    }

    /// Generator of a prime above the split or ramified polynomial prime P.
    pub fn find_generator(&self, p: &Poly, which: Which) -> Result<QuadElem> {
        self.find_generator_in_box(p, which, None)
    }

    /// As [`QuadField::find_generator`] with the degree bound on a replaced
    /// by `box_override` (negative means an empty search).
    pub fn find_generator_in_box(
        &self,
        p: &Poly,
        which: Which,
        box_override: Option<i64>,
    ) -> Result<QuadElem> {
        let splitting = self.check_prime(p)?;
        if splitting == Splitting::Inert {
            return Err(Error::Precondition(format!(
                "{p} is inert; the prime above it is ({p})"
            )));
        }
        let n = p.deg();
        let (ba, bb) = match box_override {
            Some(b) => (b, b - self.half_deg()),
            None => self.window_box(n),
        };
        let mut hit = None;
        if ba >= 0 {
            self.for_each_window_element(n, ba, bb, |v, nrm| {
                if nrm.to_monic() == *p {
                    hit = Some(v.clone());
                    true
                } else {
                    false
                }
            });
        }
        let h = hit.ok_or_else(|| Error::NoGenerator(format!("prime above {p}")))?;
        let g1 = self.canonical_generator(&h)?;
        if splitting == Splitting::Ramified {
            return Ok(g1);
        }
        let g2 = self.canonical_generator(&h.conj())?;
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        Ok(match which {
            Which::First => lo,
            Which::Second => hi,
        })
    }

    /// Prime ideals of norm exactly q^n, sorted by generator.
    pub fn prime_ideals_of_norm_exp(&self, n: i64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        if n < 1 {
            return Ok(out);
        }
        for p in irreducibles_of_degree(self.q(), n as usize) {
            match splitting_unchecked(self.d(), &p) {
                Splitting::Inert => {}
                Splitting::Ramified => {
                    let gen = self.find_generator(&p, Which::First)?;
                    out.push(PrimeIdeal { p, splitting: Splitting::Ramified, which: None, gen, norm_exp: n });
                }
                Splitting::Split => {
                    for w in [Which::First, Which::Second] {
                        let gen = self.find_generator(&p, w)?;
                        out.push(PrimeIdeal {
                            p: p.clone(),
                            splitting: Splitting::Split,
                            which: Some(w),
                            gen,
                            norm_exp: n,
                        });
                    }
                }
            }
        }
        if n % 2 == 0 {
            for p in irreducibles_of_degree(self.q(), (n / 2) as usize) {
                if splitting_unchecked(self.d(), &p) == Splitting::Inert {
                    let gen = self.canonical_generator(&QuadElem::from_poly(p.clone()))?;
                    out.push(PrimeIdeal { p, splitting: Splitting::Inert, which: None, gen, norm_exp: n });
                }
            }
        }
        out.sort_by(|x, y| x.gen.cmp(&y.gen));
        Ok(out)
    }

    /// Every prime ideal of norm at most q^max_norm_exp, by norm then generator.
    pub fn enumerate_prime_ideals(&self, max_norm_exp: i64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for n in 1..=max_norm_exp {
            out.extend(self.prime_ideals_of_norm_exp(n)?);
        }
        Ok(out)
    }

    /// Number of times pi divides v.
    fn valuation(&self, pi: &QuadElem, v: &QuadElem) -> u32 {
        let mut e = 0;
        let mut w = v.clone();
        while let Some(next) = self.div_exact(&w, pi) {
            w = next;
            e += 1;
        }
        e
    }

    /// Prime ideal factorization of (v), primes sorted by generator.
    pub fn factor_element(&self, v: &QuadElem) -> Result<Vec<(PrimeIdeal, u32)>> {
        let nrm = self.norm(v);
        if nrm.is_zero() {
            return Err(Error::Precondition("cannot factor zero".into()));
        }
        let mut out = Vec::new();
        for (p, e) in factorize(&nrm)?.factors {
            let np = p.deg();
            match splitting_unchecked(self.d(), &p) {
                Splitting::Inert => {
                    let gen = self.canonical_generator(&QuadElem::from_poly(p.clone()))?;
                    out.push((
                        PrimeIdeal { p, splitting: Splitting::Inert, which: None, gen, norm_exp: 2 * np },
                        e / 2,
                    ));
                }
                Splitting::Ramified => {
                    let gen = self.find_generator(&p, Which::First)?;
                    out.push((
                        PrimeIdeal { p, splitting: Splitting::Ramified, which: None, gen, norm_exp: np },
                        e,
                    ));
                }
                Splitting::Split => {
                    let g1 = self.find_generator(&p, Which::First)?;
                    let e1 = self.valuation(&g1, v);
                    let g2 = self.find_generator(&p, Which::Second)?;
                    for (w, gen, ex) in [(Which::First, g1, e1), (Which::Second, g2, e - e1)] {
                        if ex > 0 {
                            out.push((
                                PrimeIdeal {
                                    p: p.clone(),
                                    splitting: Splitting::Split,
                                    which: Some(w),
                                    gen,
                                    norm_exp: np,
                                },
                                ex,
                            ));
                        }
                    }
                }
            }
        }
        out.sort_by(|x, y| x.0.gen.cmp(&y.0.gen));
        Ok(out)
    }

    /// Lambda((v)) from the factorization of Norm(v) alone.
    ///
    /// When Norm(v) = eps P^e: a ramified or inert P always gives a prime
    /// power; for split P the ideal is p^i p'^(e-i), a prime power iff P
    /// does not divide both a and b.
    pub fn mangoldt_element(&self, v: &QuadElem) -> Result<u64> {
        let nrm = self.norm(v);
        if nrm.is_zero() {
            return Err(Error::Precondition("Lambda of zero".into()));
        }
        let fac = factorize(&nrm)?;
        let [(p, e)] = fac.factors.as_slice() else {
            return Ok(0);
        };
        let np = p.deg() as u64;
        Ok(match splitting_unchecked(self.d(), p) {
            Splitting::Ramified => np,
            Splitting::Inert => 2 * np,
            Splitting::Split if *e == 1 => np,
            Splitting::Split => {
                if p.divides(&v.a) && p.divides(&v.b) {
                    0
                } else {
                    np
                }
            }
        })
    }

    /// Attempts a generator search for every prime of norm <= q^max_norm_exp.
    pub fn principality_spot_check(
        &self,
        max_norm_exp: i64,
        box_override: Option<i64>,
    ) -> SpotCheckReport {
        let mut report = SpotCheckReport::default();
        for n in 1..=max_norm_exp {
            for p in irreducibles_of_degree(self.q(), n as usize) {
                let s = splitting_unchecked(self.d(), &p);
                let tags: &[Option<Which>] = match s {
                    Splitting::Inert => {
                        // (P) itself; contributes at norm q^(2n)
                        if 2 * n <= max_norm_exp {
                            report.checked += 1;
                        }
                        &[]
                    }
                    Splitting::Ramified => &[None],
                    Splitting::Split => &[Some(Which::First), Some(Which::Second)],
                };
                for &w in tags {
                    report.checked += 1;
                    let r = self.find_generator_in_box(&p, w.unwrap_or(Which::First), box_override);
                    let ok = match &r {
                        Ok(g) => self.norm(g).to_monic() == p,
                        Err(_) => false,
                    };
                    if !ok {
                        report.failures.push(SpotCheckFailure {
                            p: p.clone(),
                            splitting: s,
                            which: w,
                            reason: match r {
                                Err(e) => e.to_string(),
                                Ok(g) => format!("generator {g} has the wrong norm"),
                            },
                        });
                    }
                }
            }
        }
        report
    }
}

/// One ideal of an [`IdealCatalog`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogIdeal {
    pub rep: IdealRep,
    /// (index into `primes`, exponent), sorted by prime index.
    pub factors: Vec<(usize, u32)>,
}

/// All ideals of norm <= q^max_exp with their prime factorizations.
#[derive(Clone, Debug)]
pub struct IdealCatalog {
    pub max_exp: i64,
    pub primes: Vec<PrimeIdeal>,
    pub ideals: Vec<CatalogIdeal>,
    index: HashMap<Vec<(usize, u32)>, usize>,
    by_gen: HashMap<QuadElem, usize>,
}

impl IdealCatalog {
    pub fn new(k: &QuadField, max_exp: i64) -> Result<IdealCatalog> {
        let primes = k.enumerate_prime_ideals(max_exp)?;
        let mut ideals = Vec::new();
        let mut stack: Vec<(usize, Vec<(usize, u32)>, QuadElem, i64)> =
            vec![(0, Vec::new(), QuadElem::one(k.q()), 0)];
        while let Some((start, fac, gen, ne)) = stack.pop() {
            ideals.push((fac.clone(), gen.clone(), ne));
            for (i, pr) in primes.iter().enumerate().skip(start) {
                let mut g = gen.clone();
                let mut e = 0u32;
                let mut n = ne;
                loop {
                    n += pr.norm_exp;
                    if n > max_exp {
                        break;
                    }
                    g = k.mul(&g, &pr.gen);
                    e += 1;
                    let mut f2 = fac.clone();
                    f2.push((i, e));
                    stack.push((i + 1, f2, g.clone(), n));
                }
            }
        }
        let mut built = Vec::with_capacity(ideals.len());
        for (factors, gen, ne) in ideals {
            let gen = k.canonical_generator(&gen)?;
            built.push(CatalogIdeal { rep: IdealRep { gen, norm_exp: ne }, factors });
        }
        built.sort_by(|a, b| (a.rep.norm_exp, &a.rep.gen).cmp(&(b.rep.norm_exp, &b.rep.gen)));
        let index = built.iter().enumerate().map(|(i, c)| (c.factors.clone(), i)).collect();
        let by_gen = built.iter().enumerate().map(|(i, c)| (c.rep.gen.clone(), i)).collect();
        Ok(IdealCatalog { max_exp, primes, ideals: built, index, by_gen })
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn of_norm_exp(&self, n: i64) -> impl Iterator<Item = usize> + '_ {
        self.ideals
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.rep.norm_exp == n)
            .map(|(i, _)| i)
    }

    pub fn unit_ideal(&self) -> usize {
        self.index[&Vec::new()]
    }

    pub fn lookup(&self, factors: &[(usize, u32)]) -> Option<usize> {
        self.index.get(factors).copied()
    }

    pub fn lookup_gen(&self, gen: &QuadElem) -> Option<usize> {
        self.by_gen.get(gen).copied()
    }

    /// Index of the product ideal, if it lies in the catalog.
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        let mut m: Vec<(usize, u32)> = self.ideals[i].factors.clone();
        for &(p, e) in &self.ideals[j].factors {
            match m.iter_mut().find(|(q, _)| *q == p) {
                Some(slot) => slot.1 += e,
                None => m.push((p, e)),
            }
        }
        m.sort();
        self.lookup(&m)
    }

    /// Indices of all divisors.
    pub fn divisors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
        for &(p, e) in &self.ideals[i].factors {
            let mut next = Vec::new();
            for f in &out {
                next.push(f.clone());
                for k in 1..=e {
                    let mut g = f.clone();
                    g.push((p, k));
                    next.push(g);
                }
            }
            out = next;
        }
        out.iter().map(|f| self.index[f]).collect()
    }

    pub fn mobius(&self, i: usize) -> i64 {
        let f = &self.ideals[i].factors;
        if f.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn mangoldt(&self, i: usize) -> u64 {
        match self.ideals[i].factors.as_slice() {
            [(p, _)] => self.primes[*p].norm_exp as u64,
            _ => 0,
        }
    }

    pub fn norm_exp(&self, i: usize) -> i64 {
        self.ideals[i].rep.norm_exp
    }
}

/// Lambda from an explicit prime-power certificate, validated against the
/// ideal: the product of the certified prime powers must generate (gen).
pub fn mangoldt_ideal(k: &QuadField, a: &IdealRep, cert: &[(PrimeIdeal, u32)]) -> Result<u64> {
    validate_certificate(k, a, cert)?;
    Ok(match cert {
        [(p, _)] => p.norm_exp as u64,
        _ => 0,
    })
}

/// Moebius function from a validated certificate.
pub fn mobius_ideal(k: &QuadField, a: &IdealRep, cert: &[(PrimeIdeal, u32)]) -> Result<i64> {
    validate_certificate(k, a, cert)?;
    Ok(if cert.iter().any(|(_, e)| *e > 1) {
        0
    } else if cert.len().is_multiple_of(2) {
        1
    } else {
        -1
    })
}

fn validate_certificate(k: &QuadField, a: &IdealRep, cert: &[(PrimeIdeal, u32)]) -> Result<()> {
    let mut g = QuadElem::one(k.q());
    let mut ne = 0;
    for (i, (p, e)) in cert.iter().enumerate() {
        if *e == 0 || cert[..i].iter().any(|(o, _)| o.gen == p.gen) {
            return Err(Error::InvalidInput("certificate repeats a prime or has exponent 0".into()));
        }
        g = k.mul(&g, &k.pow(&p.gen, *e as u64));
        ne += p.norm_exp * *e as i64;
    }
    if ne != a.norm_exp || k.canonical_generator(&g)? != k.canonical_generator(&a.gen)? {
        return Err(Error::InvalidInput(format!(
            "certificate does not multiply out to the ideal generated by {}",
            a.gen
        )));
    }
    Ok(())
}
