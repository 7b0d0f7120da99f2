//! The order A = F_q[T][sqrt d] of a real quadratic function field: elements,
//! embeddings, norms, the fundamental unit, and principal ideals.

mod ideal;
mod unit;

pub use ideal::{
    canonicalize, mangoldt_ideal, mobius_ideal, CatalogIdeal, IdealCatalog, IdealRep, PrimeIdeal,
    SpotCheckFailure, SpotCheckReport, Which,
};
pub use unit::{cf_expansion, CfExpansion, UnitData};
pub(crate) use unit::from_index as poly_from_index;

use std::fmt;

use crate::algebra::{check_modulus, inv_mod, Poly};
use crate::error::{Error, Result};
use crate::laurent::{sqrt_of_poly, Laurent};

/// Default depth for the cached square root of d.
const SQRT_TAIL: i64 = -160;

/// a + b sqrt(d) with a, b in F_q[T].
///
/// The derived order (a first, then b, each in the polynomial canonical
/// order) is the canonical order on elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElem {
    pub a: Poly,
    pub b: Poly,
}

impl QuadElem {
    pub fn new(a: Poly, b: Poly) -> QuadElem {
        assert_eq!(a.modulus(), b.modulus(), "mixed moduli");
        QuadElem { a, b }
    }

    pub fn from_poly(a: Poly) -> QuadElem {
        let q = a.modulus();
        QuadElem { a, b: Poly::zero(q) }
    }

    pub fn zero(q: u64) -> QuadElem {
        QuadElem { a: Poly::zero(q), b: Poly::zero(q) }
    }

    pub fn one(q: u64) -> QuadElem {
        QuadElem { a: Poly::one(q), b: Poly::zero(q) }
    }

    pub fn sqrt_d(q: u64) -> QuadElem {
        QuadElem { a: Poly::zero(q), b: Poly::one(q) }
    }

    pub fn modulus(&self) -> u64 {
        self.a.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn scale(&self, c: u64) -> QuadElem {
        QuadElem { a: self.a.scale(c), b: self.b.scale(c) }
    }

    pub fn scale_poly(&self, f: &Poly) -> QuadElem {
        QuadElem { a: self.a.mul(f), b: self.b.mul(f) }
    }

    /// a - b sqrt(d).
    pub fn conj(&self) -> QuadElem {
        QuadElem { a: self.a.clone(), b: self.b.neg() }
    }

    /// Text form "a;b" with both parts in the ascending coefficient format.
    pub fn to_text(&self) -> String {
        format!("{};{}", self.a.to_text(), self.b.to_text())
    }

    pub fn parse(q: u64, text: &str) -> Result<QuadElem> {
        let (a, b) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected a;b, got {text:?}")))?;
        Ok(QuadElem::new(Poly::parse(q, a)?, Poly::parse(q, b)?))
    }

    /// First nonzero coefficient in the sequence (a ascending, b ascending).
    pub(crate) fn first_coeff(&self) -> Option<u64> {
        self.a.coeffs().iter().chain(self.b.coeffs()).copied().find(|&c| c != 0)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})√d", self.b),
            (false, false) => write!(f, "{} + ({})√d", self.a, self.b),
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadElem({self})")
    }
}

/// Which of the two embeddings into F_q((1/T)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    /// sqrt(d) maps to the root with leading coefficient +1.
    First,
    Second,
}

/// Checks the hypotheses on d: monic, square-free, even positive degree.
pub fn validate_d(d: &Poly) -> Result<()> {
    check_modulus(d.modulus())?;
    if !d.is_monic() {
        return Err(Error::Precondition(format!("d = {d} is not monic")));
    }
    if d.deg() < 2 || d.deg() % 2 != 0 {
        return Err(Error::Precondition(format!("d = {d} must have even positive degree")));
    }
    if !d.gcd(&d.derivative()).is_one() {
        return Err(Error::Precondition(format!("d = {d} is not square-free")));
    }
    Ok(())
}

/// Field context: q, d, the cached square root of d, and the fundamental unit.
#[derive(Clone, Debug)]
pub struct QuadField {
    q: u64,
    d: Poly,
    sqrt_d: Laurent,
    inv_sqrt_d: Laurent,
    unit: UnitData,
}

impl QuadField {
    pub fn new(d: Poly) -> Result<QuadField> {
        validate_d(&d)?;
        let q = d.modulus();
        let sqrt_d = sqrt_of_poly(&d, SQRT_TAIL)?;
        let g = d.deg() / 2;
        let inv_sqrt_d = sqrt_d.inv(SQRT_TAIL - 2 * g)?;
        let unit = unit::fundamental_unit(&d)?;
        Ok(QuadField { q, d, sqrt_d, inv_sqrt_d, unit })
    }

    pub fn from_text(q: u64, d: &str) -> Result<QuadField> {
        check_modulus(q)?;
        QuadField::new(Poly::parse(q, d)?)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> &Poly {
        &self.d
    }

    /// deg d / 2, so that |sqrt d| = q^g.
    pub fn half_deg(&self) -> i64 {
        self.d.deg() / 2
    }

    pub fn unit(&self) -> &UnitData {
        &self.unit
    }

    fn check_tail(&self, tail: i64, have: i64) -> Result<()> {
        if tail < have {
            return Err(Error::PrecisionExhausted { requested: tail, available: have });
        }
        Ok(())
    }

    /// sqrt(d) known down to `tail`.
    pub fn sqrt_d(&self, tail: i64) -> Result<Laurent> {
        if tail < SQRT_TAIL {
            return sqrt_of_poly(&self.d, tail);
        }
        Ok(self.sqrt_d.truncate(tail))
    }

    /// 1/sqrt(d) known down to `tail`.
    pub fn inv_sqrt_d(&self, tail: i64) -> Result<Laurent> {
        let have = SQRT_TAIL - 2 * self.half_deg();
        if tail < have {
            let g = self.half_deg();
            return sqrt_of_poly(&self.d, tail + 2 * g)?.inv(tail);
        }
        self.check_tail(tail, have)?;
        Ok(self.inv_sqrt_d.truncate(tail))
    }

    pub fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let a = x.a.mul(&y.a).add(&x.b.mul(&y.b).mul(&self.d));
        let b = x.a.mul(&y.b).add(&x.b.mul(&y.a));
        QuadElem { a, b }
    }

    pub fn pow(&self, x: &QuadElem, mut e: u64) -> QuadElem {
        let mut base = x.clone();
        let mut acc = QuadElem::one(self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// a^2 - b^2 d.
    pub fn norm(&self, x: &QuadElem) -> Poly {
        x.a.square().sub(&x.b.square().mul(&self.d))
    }

    /// x / y when the quotient lies in A.
    pub fn div_exact(&self, x: &QuadElem, y: &QuadElem) -> Option<QuadElem> {
        let n = self.norm(y);
        if n.is_zero() {
            return None;
        }
        let t = self.mul(x, &y.conj());
        let (qa, ra) = t.a.divrem(&n).ok()?;
        let (qb, rb) = t.b.divrem(&n).ok()?;
        (ra.is_zero() && rb.is_zero()).then_some(QuadElem { a: qa, b: qb })
    }

    pub fn divides(&self, y: &QuadElem, x: &QuadElem) -> bool {
        self.div_exact(x, y).is_some()
    }

    /// Inverse of a unit (Norm in F_q^x): conj(u) / Norm(u).
    pub fn unit_inverse(&self, u: &QuadElem) -> Result<QuadElem> {
        let n = self.norm(u);
        if n.deg() != 0 {
            return Err(Error::Precondition(format!("{u} is not a unit")));
        }
        Ok(u.conj().scale(inv_mod(n.coeff(0), self.q)))
    }

    /// u^r for the fundamental unit and any integer r.
    pub fn unit_pow(&self, r: i64) -> QuadElem {
        let base = if r >= 0 {
            self.unit.u.clone()
        } else {
            self.unit_inverse(&self.unit.u).expect("fundamental unit")
        };
        self.pow(&base, r.unsigned_abs())
    }

    /// sigma_i(x) known down to `tail`.
    pub fn sigma(&self, x: &QuadElem, which: Embedding, tail: i64) -> Result<Laurent> {
        let b = x.b.deg();
        let bs = if b < 0 {
            Laurent::zero(self.q)
        } else {
            // b sqrt(d) down to `tail` needs sqrt(d) to tail - deg b
            Laurent::from_poly(&x.b).mul_to(&self.sqrt_d(tail - b)?, tail)
        };
        let a = Laurent::from_poly(&x.a);
        Ok(match which {
            Embedding::First => a.add(&bs),
            Embedding::Second => a.sub(&bs),
        }
        .truncate(tail))
    }

    /// Exact (deg sigma_1(x), deg sigma_2(x)); `None` for x = 0.
    ///
    /// sqrt d = T^g + lower terms, so the leading terms of a and b sqrt d
    /// cancel in at most one embedding, and then the product formula
    /// |sigma_1||sigma_2| = |Norm| recovers the smaller degree.
    pub fn sigma_degrees(&self, x: &QuadElem) -> Option<(i64, i64)> {
        let da = x.a.deg();
        let db = x.b.deg();
        if da < 0 && db < 0 {
            return None;
        }
        if db < 0 {
            return Some((da, da));
        }
        let mb = db + self.half_deg();
        if da != mb {
            let m = da.max(mb);
            return Some((m, m));
        }
        let (la, lb) = (x.a.lead(), x.b.lead());
        let n = self.norm(x).deg();
        if (la + lb) % self.q == 0 {
            Some((n - mb, mb))
        } else if la == lb {
            Some((mb, n - mb))
        } else {
            Some((mb, mb))
        }
    }

    /// Element a + b sqrt(d) from residue vectors (convenience for tests
    /// and bindings).
    pub fn elem(&self, a: &[i64], b: &[i64]) -> QuadElem {
        QuadElem::new(Poly::from_i64(self.q, a), Poly::from_i64(self.q, b))
    }

    /// deg Norm(x), i.e. log_q of the norm of the ideal (x).
    pub fn norm_exp(&self, x: &QuadElem) -> i64 {
        self.norm(x).deg()
    }
}
