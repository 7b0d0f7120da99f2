use std::cmp::Ordering;
use std::fmt;

use super::fq::{add_mod, inv_mod, mul_mod, sub_mod, FqElem};
use crate::error::{Error, Result};

/// Dense polynomial over the prime field F_q, coefficients in ascending order.
///
/// The coefficient vector never carries a trailing zero, so the zero
/// polynomial is the empty vector and `degree` is `len - 1` otherwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    q: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial from signed ascending coefficients, reducing mod q.
    pub fn from_i64(q: u64, coeffs: &[i64]) -> Poly {
        let c = coeffs
            .iter()
            .map(|&x| x.rem_euclid(q as i64) as u64)
            .collect();
        Poly::from_residues(q, c)
    }

    /// Builds a polynomial from residues; values are reduced mod q.
    pub fn from_residues(q: u64, mut coeffs: Vec<u64>) -> Poly {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        let mut p = Poly { q, coeffs };
        p.trim();
        p
    }

    pub fn from_elems(q: u64, coeffs: &[FqElem]) -> Poly {
        Poly::from_residues(q, coeffs.iter().map(|c| c.value()).collect())
    }

    pub fn zero(q: u64) -> Poly {
        Poly { q, coeffs: Vec::new() }
    }

    pub fn one(q: u64) -> Poly {
        Poly::constant(q, 1)
    }

    pub fn constant(q: u64, c: u64) -> Poly {
        Poly::from_residues(q, vec![c])
    }

    /// The indeterminate T.
    pub fn t(q: u64) -> Poly {
        Poly::monomial(q, 1, 1)
    }

    pub fn monomial(q: u64, c: u64, deg: usize) -> Poly {
        let mut v = vec![0; deg + 1];
        v[deg] = c;
        Poly::from_residues(q, v)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Splits a nonzero polynomial into (leading coefficient, monic part).
    pub fn monic_parts(&self) -> (u64, Poly) {
        let lc = self.lead();
        if lc == 0 {
            return (0, self.clone());
        }
        (lc, self.scale(inv_mod(lc, self.q)))
    }

    pub fn to_monic(&self) -> Poly {
        self.monic_parts().1
    }

    pub fn scale(&self, c: u64) -> Poly {
        let c = c % self.q;
        Poly::from_residues(
            self.q,
            self.coeffs.iter().map(|&x| mul_mod(x, c, self.q)).collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.q - 1)
    }

    /// Multiplies by T^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Poly { q: self.q, coeffs: v }
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(
            self.q, other.q,
            "mixed moduli in polynomial arithmetic ({} vs {})",
            self.q, other.q
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| add_mod(self.coeff(i), other.coeff(i), self.q))
            .collect();
        Poly::from_residues(self.q, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| sub_mod(self.coeff(i), other.coeff(i), self.q))
            .collect();
        Poly::from_residues(self.q, v)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q;
        let mut v = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % q;
            }
        }
        Poly::from_residues(q, v)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(self.q);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division: returns (quotient, remainder) with deg rem < deg g.
    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(g);
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.q;
        if self.coeffs.len() < g.coeffs.len() {
            return Ok((Poly::zero(q), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let dg = g.coeffs.len() - 1;
        let inv_lead = inv_mod(g.lead(), q);
        let mut quot = vec![0u64; rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dg], inv_lead, q);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, gj, q), q);
            }
        }
        rem.truncate(dg);
        Ok((Poly::from_residues(q, quot), Poly::from_residues(q, rem)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(self.divrem(g)?.1)
    }

    /// Exact quotient; errors if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Poly) -> Result<Poly> {
        let (quot, rem) = self.divrem(g)?;
        if !rem.is_zero() {
            return Err(Error::Precondition(format!("{g} does not divide {self}")));
        }
        Ok(quot)
    }

    pub fn divides(&self, f: &Poly) -> bool {
        match f.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => f.is_zero(),
        }
    }

    /// Monic generator of the ideal (self, other); zero when both are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.to_monic()
    }

    pub fn derivative(&self) -> Poly {
        let q = self.q;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % q, q))
            .collect();
        Poly::from_residues(q, v)
    }

    /// `self^e mod m`, with a 128-bit exponent so that (q^k - 1)/2 fits.
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(self.q).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square().rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let q = self.q;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x % q, q), c, q))
    }

    /// For f with f' = 0 (so f = g(T^q)), returns g with g^q = f.
    pub(crate) fn qth_root(&self) -> Poly {
        let q = self.q as usize;
        let v = self.coeffs.iter().step_by(q).copied().collect();
        Poly::from_residues(self.q, v)
    }

    /// Index of a monic polynomial of degree n among the q^n monic
    /// polynomials of that degree: sum of c_i q^i over i < n.
    pub fn monic_index(&self) -> u64 {
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q + c)
    }

    pub fn from_monic_index(q: u64, deg: usize, mut idx: u64) -> Poly {
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push(idx % q);
            idx /= q;
        }
        v.push(1);
        Poly { q, coeffs: v }
    }

    /// Parses the ascending comma-separated residue format, e.g. "1,0,1".
    pub fn parse(q: u64, text: &str) -> Result<Poly> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Poly::zero(q));
        }
        let coeffs = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {s:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_i64(q, &coeffs))
    }

    /// Ascending comma-separated residues; the inverse of [`Poly::parse`].
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Canonical order: by degree (zero first), then lexicographically on the
/// ascending coefficient residues.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.q, self)
    }
}

/// Every monic polynomial of the given degree, in index order.
pub fn enumerate_monic(q: u64, deg: usize) -> impl Iterator<Item = Poly> {
    let count = q.pow(deg as u32);
    (0..count).map(move |i| Poly::from_monic_index(q, deg, i))
}

/// Signed-degree wrapper around [`enumerate_monic`] that rejects negative input.
pub fn enumerate_monic_checked(q: u64, deg: i64) -> Result<impl Iterator<Item = Poly>> {
    if deg < 0 {
        return Err(Error::Precondition(format!("negative degree {deg}")));
    }
    Ok(enumerate_monic(q, deg as usize))
}
