//! Deterministic factorization over F_q: square-free decomposition, then
//! distinct-degree splitting, then equal-degree splitting driven by an
//! enumerated (not random) sequence of auxiliary polynomials.

use super::poly::Poly;
use crate::error::{Error, Result};

/// `f = unit * prod(P_i^e_i)` with monic, distinct, canonically sorted P_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self, q: u64) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(q, self.unit), |acc, (p, e)| {
                acc.mul(&p.pow(*e as u64))
            })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// True iff `f` is irreducible over F_q. Checks gcd(T^{q^i} - T, f) = 1 for
/// every i up to deg f / 2.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Precondition(format!("{f} is constant"))),
    };
    if n == 1 {
        return Ok(true);
    }
    let q = f.modulus();
    let f = f.to_monic();
    let t = Poly::t(q);
    let mut h = t.rem(&f)?;
    for _ in 1..=n / 2 {
        h = h.powmod(q as u128, &f)?;
        if !f.gcd(&h.sub(&t)).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Square-free decomposition of a monic polynomial: pairs (g, i) with
/// f = prod g^i, each g square-free and pairwise coprime.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let q = f.modulus();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides f");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides w");
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides c");
        w = y;
    }
    if !c.is_one() {
        let root = c.qth_root();
        for (g, j) in squarefree_decomposition(&root) {
            out.push((g, j * q as u32));
        }
    }
    out
}

/// Splits a monic square-free polynomial into (product of all irreducible
/// factors of degree k, k).
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = f.modulus();
    let t = Poly::t(q);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut k = 1usize;
    while rest.deg() >= 2 * k as i64 {
        h = h.powmod(q as u128, &rest)?;
        let g = rest.gcd(&h.sub(&t));
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((g, k));
        }
        k += 1;
    }
    if !rest.is_one() {
        let n = rest.degree().unwrap();
        out.push((rest, n));
    }
    Ok(out)
}

/// Auxiliary polynomial number `i` (ascending base-q digits of i).
fn aux_poly(q: u64, mut i: u64) -> Poly {
    let mut v = Vec::new();
    while i > 0 {
        v.push(i % q);
        i /= q;
    }
    Poly::from_residues(q, v)
}

/// Splits a monic product of distinct irreducibles all of degree k.
fn equal_degree(g: &Poly, k: usize) -> Result<Vec<Poly>> {
    let q = g.modulus();
    let exp: u128 = ((q as u128).pow(k as u32) - 1) / 2;
    let mut pending = vec![g.clone()];
    let mut done = Vec::new();
    while let Some(f) = pending.pop() {
        let n = f.degree().unwrap();
        if n == k {
            done.push(f);
            continue;
        }
        let mut i = 1u64;
        loop {
            let h = aux_poly(q, i);
            i += 1;
            if h.deg() >= n as i64 {
                return Err(Error::InvalidInput(format!(
                    "equal-degree splitting of {f} exhausted candidates"
                )));
            }
            if h.is_constant() {
                continue;
            }
            let mut split = f.gcd(&h);
            if split.is_one() || split == f {
                let a = h.powmod(exp, &f)?.sub(&Poly::one(q));
                split = f.gcd(&a);
            }
            if !split.is_one() && split != f {
                let other = f.div_exact(&split)?;
                pending.push(split);
                pending.push(other);
                break;
            }
        }
    }
    Ok(done)
}

/// Full factorization of a nonzero polynomial.
pub fn factorize(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let (unit, monic) = f.monic_parts();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sq, e) in squarefree_decomposition(&monic) {
        for (block, k) in distinct_degree(&sq)? {
            for p in equal_degree(&block, k)? {
                factors.push((p, e));
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Möbius function on F_q[T]: 0 when a square of a non-unit divides f,
/// otherwise (-1)^(number of distinct irreducible factors).
pub fn mobius_poly(f: &Poly) -> Result<i64> {
    let fac = factorize(f)?;
    if !fac.is_squarefree() {
        return Ok(0);
    }
    Ok(if fac.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Von Mangoldt function with values log_q|P| = deg P, as an exact integer.
pub fn mangoldt_poly(f: &Poly) -> Result<u64> {
    let fac = factorize(f)?;
    match fac.factors.as_slice() {
        [(p, _)] => Ok(p.deg() as u64),
        _ => Ok(0),
    }
}

/// All monic divisors of a factored polynomial, sorted canonically.
pub fn monic_divisors(fac: &Factorization, q: u64) -> Vec<Poly> {
    let mut divs = vec![Poly::one(q)];
    for (p, e) in &fac.factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*e {
                acc = acc.mul(p);
                next.push(acc.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::enumerate_monic;

    fn p(q: u64, c: &[i64]) -> Poly {
        Poly::from_i64(q, c)
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&p(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(3, &[1, 2, 1])).unwrap());
        assert!(is_irreducible(&p(3, &[0, 1])).unwrap());
        assert!(is_irreducible(&p(7, &[0, 1])).unwrap());
        assert!(is_irreducible(&p(3, &[2])).is_err());
    }

    #[test]
    fn factor_examples() {
        let f = factorize(&p(3, &[0, 2, 2])).unwrap();
        assert_eq!(f.unit, 2);
        assert_eq!(f.factors, vec![(p(3, &[0, 1]), 1), (p(3, &[1, 1]), 1)]);

        let f = factorize(&p(3, &[0, 1])).unwrap();
        assert_eq!((f.unit, f.factors), (1, vec![(p(3, &[0, 1]), 1)]));

        let f = factorize(&p(3, &[2])).unwrap();
        assert_eq!((f.unit, f.factors.len()), (2, 0));
        assert!(factorize(&Poly::zero(3)).is_err());
    }

    #[test]
    fn factor_handles_qth_powers() {
        // (T+1)^3 * T^4 * (T^2+1)^2 over F_3: exercises the T^q branch.
        let f = p(3, &[1, 1])
            .pow(3)
            .mul(&p(3, &[0, 1]).pow(4))
            .mul(&p(3, &[1, 0, 1]).pow(2));
        let fac = factorize(&f).unwrap();
        assert_eq!(
            fac.factors,
            vec![(p(3, &[0, 1]), 4), (p(3, &[1, 1]), 3), (p(3, &[1, 0, 1]), 2)]
        );
        assert_eq!(fac.product(3), f);
    }

    /// Trial division by every monic polynomial of degree >= 1.
    fn trial_division(f: &Poly) -> Vec<(Poly, u32)> {
        let q = f.modulus();
        let mut rest = f.to_monic();
        let mut out = Vec::new();
        let mut deg = 1;
        while rest.deg() >= 1 {
            for g in enumerate_monic(q, deg) {
                let mut e = 0;
                while g.divides(&rest) {
                    rest = rest.div_exact(&g).unwrap();
                    e += 1;
                }
                if e > 0 {
                    out.push((g, e));
                }
            }
            deg += 1;
        }
        out.sort();
        out
    }

    #[test]
    fn factorize_agrees_with_trial_division() {
        for q in [3u64, 5] {
            for deg in 1..=5usize.min(if q == 3 { 6 } else { 4 }) {
                for f in enumerate_monic(q, deg) {
                    let fac = factorize(&f.scale(2)).unwrap();
                    assert_eq!(fac.unit, 2);
                    assert_eq!(fac.factors, trial_division(&f), "f = {f}");
                }
            }
        }
    }

    #[test]
    fn mobius_and_mangoldt() {
        assert_eq!(mobius_poly(&p(3, &[0, 0, 1])).unwrap(), 0);
        assert_eq!(mobius_poly(&p(3, &[0, 2])).unwrap(), -1);
        assert_eq!(mobius_poly(&p(3, &[0, 1, 1])).unwrap(), 1);
        assert_eq!(mangoldt_poly(&p(3, &[0, 0, 1])).unwrap(), 1);
        assert_eq!(mangoldt_poly(&p(3, &[1, 0, 1])).unwrap(), 2);
        assert_eq!(mangoldt_poly(&p(3, &[0, 1, 1])).unwrap(), 0);
        assert!(mangoldt_poly(&Poly::zero(3)).is_err());
        assert!(mobius_poly(&Poly::zero(3)).is_err());
    }

    #[test]
    fn irreducible_iff_single_linear_factorization() {
        for f in enumerate_monic(5, 4) {
            let fac = factorize(&f).unwrap();
            let single = fac.factors.len() == 1 && fac.factors[0].1 == 1;
            assert_eq!(is_irreducible(&f).unwrap(), single, "f = {f}");
        }
    }

    #[test]
    fn divisor_sums_small() {
        // sum Lambda(g) over monic g | f equals deg f; sum mu(g) = [f const]
        for f in enumerate_monic(3, 4) {
            let fac = factorize(&f).unwrap();
            let divs = monic_divisors(&fac, 3);
            let lam: u64 = divs
                .iter()
                .filter(|g| !g.is_one())
                .map(|g| mangoldt_poly(g).unwrap())
                .sum();
            assert_eq!(lam, 4);
            let mu: i64 = divs.iter().map(|g| mobius_poly(g).unwrap()).sum();
            assert_eq!(mu, 0);
        }
    }
}
