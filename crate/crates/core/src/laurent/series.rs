use std::fmt;

use crate::algebra::{add_mod, inv_mod, mul_mod, sub_mod, Poly};
use crate::error::{Error, Result};

/// An absolute value |x| in q^Z together with 0.
///
/// Ordered so that `Zero` is below every power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QPow {
    Zero,
    Exp(i64),
}

impl QPow {
    pub fn exp(self) -> Option<i64> {
        match self {
            QPow::Zero => None,
            QPow::Exp(e) => Some(e),
        }
    }

    pub fn mul(self, other: QPow) -> QPow {
        match (self, other) {
            (QPow::Exp(a), QPow::Exp(b)) => QPow::Exp(a + b),
            _ => QPow::Zero,
        }
    }

    pub fn to_f64(self, q: u64) -> f64 {
        match self {
            QPow::Zero => 0.0,
            QPow::Exp(e) => (q as f64).powi(e as i32),
        }
    }
}

impl fmt::Display for QPow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QPow::Zero => write!(f, "0"),
            QPow::Exp(e) => write!(f, "q^{e}"),
        }
    }
}

/// Truncated element of F_q((1/T)).
///
/// Coefficients are stored densely in descending exponent order starting at
/// `top`. With `tail = Some(t)` every exponent in `t..=top` is stored and the
/// exponents below `t` are unknown; with `tail = None` the value is exact
/// and all unstored coefficients are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    q: u64,
    top: i64,
    coeffs: Vec<u64>,
    tail: Option<i64>,
}

fn max_tail(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Laurent {
    fn normalized(q: u64, mut top: i64, mut coeffs: Vec<u64>, tail: Option<i64>) -> Laurent {
        let lead = coeffs.iter().position(|&c| c != 0).unwrap_or(coeffs.len());
        if lead > 0 {
            coeffs.drain(..lead);
            top -= lead as i64;
        }
        match tail {
            Some(t) => {
                let keep = (top - t + 1).max(0) as usize;
                if coeffs.len() > keep {
                    coeffs.truncate(keep);
                }
                if coeffs.is_empty() {
                    top = t - 1;
                } else {
                    // all of top..=t must be stored
                    coeffs.resize(keep, 0);
                }
            }
            None => {
                while coeffs.last() == Some(&0) {
                    coeffs.pop();
                }
                if coeffs.is_empty() {
                    top = 0;
                }
            }
        }
        Laurent { q, top, coeffs, tail }
    }

    /// Builds a value from descending coefficients starting at exponent `top`.
    /// `tail` is the lowest known exponent (`None` for an exact value).
    pub fn new(q: u64, top: i64, coeffs: Vec<u64>, tail: Option<i64>) -> Result<Laurent> {
        if let Some(t) = tail {
            if t > top + 1 {
                return Err(Error::InvalidInput(format!(
                    "tail exponent {t} above top exponent {top} + 1"
                )));
            }
            if (coeffs.len() as i64) < top - t + 1 {
                return Err(Error::InvalidInput(format!(
                    "{} coefficients cannot cover exponents {top}..={t}",
                    coeffs.len()
                )));
            }
        }
        let coeffs = coeffs.into_iter().map(|c| c % q).collect();
        Ok(Laurent::normalized(q, top, coeffs, tail))
    }

    pub fn zero(q: u64) -> Laurent {
        Laurent { q, top: 0, coeffs: Vec::new(), tail: None }
    }

    /// Zero known down to exponent `tail`.
    pub fn known_zero(q: u64, tail: i64) -> Laurent {
        Laurent { q, top: tail - 1, coeffs: Vec::new(), tail: Some(tail) }
    }

    pub fn monomial(q: u64, c: u64, exp: i64) -> Laurent {
        Laurent::normalized(q, exp, vec![c % q], None)
    }

    pub fn from_poly(f: &Poly) -> Laurent {
        let coeffs: Vec<u64> = f.coeffs().iter().rev().copied().collect();
        Laurent::normalized(f.modulus(), f.deg(), coeffs, None)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn tail(&self) -> Option<i64> {
        self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail.is_none()
    }

    /// True when every coefficient known is zero (exact zero included).
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading nonzero stored coefficient.
    pub fn top_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.top)
    }

    /// Exponent e with |x| <= q^e guaranteed; `None` for the exact zero.
    fn bound_exp(&self) -> Option<i64> {
        match (self.coeffs.is_empty(), self.tail) {
            (false, _) => Some(self.top),
            (true, Some(t)) => Some(t - 1),
            (true, None) => None,
        }
    }

    fn lowest_stored(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Coefficient of T^k.
    pub fn coeff(&self, k: i64) -> Result<u64> {
        if k > self.top {
            return Ok(0);
        }
        if k >= self.lowest_stored() {
            return Ok(self.coeffs[(self.top - k) as usize]);
        }
        match self.tail {
            None => Ok(0),
            Some(t) => Err(Error::InsufficientPrecision(format!(
                "coefficient of T^{k} requested, known only down to T^{t}"
            ))),
        }
    }

    /// Descending coefficients for exponents `hi` down to `lo`.
    pub fn coeff_range(&self, hi: i64, lo: i64) -> Result<Vec<u64>> {
        (lo..=hi).rev().map(|k| self.coeff(k)).collect()
    }

    fn combine(&self, other: &Laurent, subtract: bool) -> Laurent {
        assert_eq!(self.q, other.q, "mixed moduli");
        let q = self.q;
        let tail = max_tail(self.tail, other.tail);
        let hi = match (self.bound_exp(), other.bound_exp()) {
            (None, None) => return Laurent::zero(q),
            (a, b) => a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN)),
        };
        let lo = tail.unwrap_or_else(|| {
            [self, other]
                .iter()
                .filter(|x| !x.coeffs.is_empty())
                .map(|x| x.lowest_stored())
                .min()
                .unwrap_or(hi)
        });
        if lo > hi {
            return Laurent::known_zero(q, lo);
        }
        let coeffs = (lo..=hi)
            .rev()
            .map(|k| {
                let a = self.coeff(k).expect("within tail");
                let b = other.coeff(k).expect("within tail");
                if subtract {
                    sub_mod(a, b, q)
                } else {
                    add_mod(a, b, q)
                }
            })
            .collect();
        Laurent::normalized(q, hi, coeffs, tail)
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Laurent {
        self.scale(self.q - 1)
    }

    pub fn scale(&self, c: u64) -> Laurent {
        let c = c % self.q;
        if c == 0 {
            return match self.bound_exp() {
                Some(_) if self.tail.is_some() => Laurent::known_zero(self.q, self.tail.unwrap()),
                _ => Laurent::zero(self.q),
            };
        }
        let coeffs = self.coeffs.iter().map(|&x| mul_mod(x, c, self.q)).collect();
        Laurent { q: self.q, top: self.top, coeffs, tail: self.tail }
    }

    /// Multiplication by T^k.
    pub fn shift(&self, k: i64) -> Laurent {
        if self.coeffs.is_empty() && self.tail.is_none() {
            return self.clone();
        }
        Laurent {
            q: self.q,
            top: self.top + k,
            coeffs: self.coeffs.clone(),
            tail: self.tail.map(|t| t + k),
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        self.mul_impl(other, None)
    }

    /// Product with every exponent below `floor` discarded (the result is
    /// then known only down to `floor`).
    pub fn mul_to(&self, other: &Laurent, floor: i64) -> Laurent {
        self.mul_impl(other, Some(floor))
    }

    fn mul_impl(&self, other: &Laurent, floor: Option<i64>) -> Laurent {
        assert_eq!(self.q, other.q, "mixed moduli");
        let q = self.q;
        let (bx, by) = match (self.bound_exp(), other.bound_exp()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Laurent::zero(q),
        };
        let tail = max_tail(
            max_tail(self.tail.map(|t| t + by), other.tail.map(|t| t + bx)),
            floor,
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::known_zero(q, tail.expect("inexact zero operand"));
        }
        let hi = self.top + other.top;
        let lo = tail.unwrap_or(self.lowest_stored() + other.lowest_stored());
        if lo > hi {
            return Laurent::known_zero(q, lo);
        }
        let len = (hi - lo + 1) as usize;
        let mut acc = vec![0u64; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            // exponent of acc slot = hi - (i + j); keep slots < len
            if i >= len {
                break;
            }
            let jmax = (len - i).min(other.coeffs.len());
            for (j, &b) in other.coeffs[..jmax].iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot = (*slot + a * b) % q;
            }
        }
        Laurent::normalized(q, hi, acc, tail)
    }

    pub fn mul_poly(&self, f: &Poly) -> Laurent {
        self.mul(&Laurent::from_poly(f))
    }

    /// Drops every exponent below `floor`.
    pub fn truncate(&self, floor: i64) -> Laurent {
        let tail = max_tail(self.tail, Some(floor));
        Laurent::normalized(self.q, self.top, self.coeffs.clone(), tail)
    }

    /// Multiplicative inverse computed down to exponent `want_tail`.
    pub fn inv(&self, want_tail: i64) -> Result<Laurent> {
        if self.coeffs.is_empty() {
            return Err(Error::Precondition("inverse of a (known) zero".into()));
        }
        let q = self.q;
        let top = self.top;
        if let Some(t) = self.tail {
            let natural = t - 2 * top;
            if want_tail < natural {
                return Err(Error::PrecisionExhausted { requested: want_tail, available: natural });
            }
        }
        let out_top = -top;
        if want_tail > out_top {
            return Ok(Laurent::known_zero(q, want_tail));
        }
        let n = (out_top - want_tail + 1) as usize;
        let c_inv = inv_mod(self.coeffs[0], q);
        let mut y = vec![0u64; n];
        y[0] = c_inv;
        for k in 1..n {
            let mut s = 0u64;
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s = (s + self.coeffs[i] * y[k - i]) % q;
            }
            y[k] = mul_mod(q - s % q, c_inv, q) % q;
        }
        Ok(Laurent::normalized(q, out_top, y, Some(want_tail)))
    }

    /// |x|; errors if nothing nonzero is known and the value is not exact.
    pub fn abs_value(&self) -> Result<QPow> {
        match (self.coeffs.is_empty(), self.tail) {
            (false, _) => Ok(QPow::Exp(self.top)),
            (true, None) => Ok(QPow::Zero),
            (true, Some(t)) => Err(Error::InsufficientPrecision(format!(
                "all coefficients zero down to T^{t}; magnitude undetermined"
            ))),
        }
    }

    /// |x| when determined, otherwise the certified bound.
    pub fn magnitude(&self) -> Magnitude {
        match (self.coeffs.is_empty(), self.tail) {
            (false, _) => Magnitude::Exact(QPow::Exp(self.top)),
            (true, None) => Magnitude::Exact(QPow::Zero),
            (true, Some(t)) => Magnitude::Below(t),
        }
    }

    /// Is |x| <= q^e?
    pub fn abs_at_most(&self, e: i64) -> Result<bool> {
        match self.bound_exp() {
            None => Ok(true),
            Some(b) if b <= e => Ok(true),
            Some(_) if !self.coeffs.is_empty() => Ok(false),
            Some(b) => Err(Error::InsufficientPrecision(format!(
                "cannot decide |x| <= q^{e}: known zero only down to T^{}",
                b + 1
            ))),
        }
    }

    /// Polynomial part (exponents >= 0).
    pub fn poly_part(&self) -> Result<Poly> {
        if self.top < 0 {
            if let Some(t) = self.tail {
                if t > 0 {
                    return Err(Error::InsufficientPrecision(format!(
                        "constant term unknown (tail T^{t})"
                    )));
                }
            }
            return Ok(Poly::zero(self.q));
        }
        let v = (0..=self.top).map(|k| self.coeff(k)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_residues(self.q, v))
    }

    /// Fractional part (exponents < 0).
    pub fn frac_part(&self) -> Laurent {
        if self.top < 0 {
            return self.clone();
        }
        let skip = (self.top + 1) as usize;
        let rest = if self.coeffs.len() > skip {
            self.coeffs[skip..].to_vec()
        } else {
            Vec::new()
        };
        let tail = self.tail.map(|t| t.min(0));
        Laurent::normalized(self.q, -1, rest, tail)
    }

    /// Distance to F_q[T]: |fractional part|.
    pub fn frac_dist(&self) -> Result<QPow> {
        self.frac_part().abs_value().map_err(|_| {
            Error::InsufficientPrecision(
                "fractional part zero down to the tail; distance undetermined".into(),
            )
        })
    }

    /// Is ||x|| <= q^e?
    pub fn frac_at_most(&self, e: i64) -> Result<bool> {
        if e >= -1 {
            return Ok(true);
        }
        for k in (e + 1..=-1).rev() {
            if self.coeff(k)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index j with e(x) = zeta_p^j, i.e. the coefficient of T^{-1}.
    pub fn char_e(&self) -> Result<u64> {
        self.coeff(-1)
    }

    /// Parses "top:c,c,...:tail" (descending coefficients); the tail token
    /// may be "exact".
    pub fn parse(q: u64, text: &str) -> Result<Laurent> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected top:coeffs:tail, got {text:?}")));
        }
        let top: i64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad top exponent in {text:?}")))?;
        let coeffs = if parts[1].trim().is_empty() {
            Vec::new()
        } else {
            parts[1]
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map(|c| c.rem_euclid(q as i64) as u64)
                        .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let tail = match parts[2].trim() {
            "exact" => None,
            s => Some(
                s.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad tail exponent in {text:?}")))?,
            ),
        };
        Laurent::new(q, top, coeffs, tail)
    }

    pub fn to_text(&self) -> String {
        let coeffs = self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let tail = match self.tail {
            Some(t) => t.to_string(),
            None => "exact".to_string(),
        };
        format!("{}:{}:{}", self.top, coeffs, tail)
    }

    /// Stored coefficients, descending from the top exponent.
    pub fn stored(&self) -> (i64, &[u64]) {
        (self.top, &self.coeffs)
    }
}

/// Magnitude of a truncated value: exact, or only bounded because every
/// known coefficient vanished (`Below(t)`: |x| < q^t).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(QPow),
    Below(i64),
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = self.top - i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (e, 1) => write!(f, "T^{e}")?,
                (1, c) => write!(f, "{c}T")?,
                (e, c) => write!(f, "{c}T^{e}")?,
            }
        }
        match self.tail {
            Some(t) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(T^{})", t - 1)
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent[{}]({})", self.q, self)
    }
}

/// Square root of a monic polynomial of even degree 2m in F_q((1/T)), the
/// branch with leading term T^m, known down to exponent `tail`.
///
/// Returned exactly when d is the square of a polynomial.
pub fn sqrt_of_poly(d: &Poly, tail: i64) -> Result<Laurent> {
    let q = d.modulus();
    if q.is_multiple_of(2) {
        return Err(Error::BadModulus(q));
    }
    if !d.is_monic() || d.deg() < 0 || d.deg() % 2 != 0 {
        return Err(Error::Precondition(format!(
            "square root needs a monic polynomial of even degree, got {d}"
        )));
    }
    let m = d.deg() / 2;
    let inv2 = inv_mod(2, q);
    let n = (m - tail + 1).max(1) as usize;
    let dc = |j: i64| if j < 0 { 0 } else { d.coeff(j as usize) };
    let mut y = vec![0u64; n];
    y[0] = 1;
    for k in 1..n {
        let mut s = 0u64;
        for i in 1..k {
            s = (s + y[i] * y[k - i]) % q;
        }
        y[k] = mul_mod(sub_mod(dc(2 * m - k as i64), s, q), inv2, q);
    }
    let approx = Laurent::normalized(q, m, y, Some(tail));
    let poly = approx.poly_part()?;
    if approx.frac_part().is_known_zero() && poly.square() == *d {
        return Ok(Laurent::from_poly(&poly));
    }
    Ok(approx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l3(text: &str) -> Laurent {
        Laurent::parse(3, text).unwrap()
    }

    #[test]
    fn addition_with_tail() {
        // (T + T^-1) + 2T^-1 = T over F_3, tail tracked
        let x = l3("1:1,0,1,0:-2");
        let y = l3("-1:2,0:-2");
        let s = x.add(&y);
        assert_eq!(s.top_exp(), Some(1));
        assert_eq!(s.coeff(-1).unwrap(), 0);
        assert_eq!(s.tail(), Some(-2));
        assert!(s.coeff(-3).is_err());
    }

    #[test]
    fn inverse_examples() {
        let t = Laurent::from_poly(&Poly::t(3));
        let inv = t.inv(-10).unwrap();
        assert_eq!(inv.top_exp(), Some(-1));
        assert!(inv.frac_part().sub(&Laurent::monomial(3, 1, -1)).is_known_zero());

        // 1/(T+1) = T^-1 - T^-2 + T^-3 - ... = T^-1 + 2T^-2 + T^-3 + ...
        let x = Laurent::from_poly(&Poly::from_i64(3, &[1, 1]));
        let inv = x.inv(-8).unwrap();
        assert_eq!(inv.coeff_range(-1, -4).unwrap(), vec![1, 2, 1, 2]);
        let back = inv.mul(&x);
        assert_eq!(back.coeff(0).unwrap(), 1);
        for k in back.tail().unwrap()..0 {
            assert_eq!(back.coeff(k).unwrap(), 0);
        }
        assert!(Laurent::zero(3).inv(-3).is_err());
    }

    #[test]
    fn inverse_respects_input_precision() {
        let x = l3("2:1,0,1:0");
        assert!(matches!(x.inv(-10), Err(Error::PrecisionExhausted { .. })));
        assert!(x.inv(-4).is_ok());
    }

    #[test]
    fn abs_and_frac_examples() {
        assert_eq!(l3("3:1,0,2,0:0").abs_value().unwrap(), QPow::Exp(3));
        assert_eq!(Laurent::zero(3).abs_value().unwrap(), QPow::Zero);
        assert_eq!(l3("-2:2,0,0,1:-5").abs_value().unwrap(), QPow::Exp(-2));
        assert!(Laurent::known_zero(3, -4).abs_value().is_err());

        assert_eq!(l3("1:1,0,2,0,1:-3").frac_dist().unwrap(), QPow::Exp(-1));
        let f = Laurent::from_poly(&Poly::from_i64(3, &[1, 2, 1]));
        assert_eq!(f.frac_dist().unwrap(), QPow::Zero);
        assert_eq!(l3("2:1,0,0,0,0,0,1:-4").frac_dist().unwrap(), QPow::Exp(-4));
        assert!(l3("2:1,0,0,0,0:-2").frac_dist().is_err());
    }

    #[test]
    fn sqrt_examples() {
        let d = Poly::from_i64(3, &[1, 0, 1]);
        let s = sqrt_of_poly(&d, -9).unwrap();
        // T + 2T^-1 + T^-3 + ...
        assert_eq!(s.coeff_range(1, -3).unwrap(), vec![1, 0, 2, 0, 1]);
        let sq = s.mul(&s);
        let dl = Laurent::from_poly(&d);
        assert!(sq.sub(&dl).is_known_zero());
        assert_eq!(sq.sub(&dl).tail(), sq.tail());

        let t2 = Poly::from_i64(5, &[0, 0, 1]);
        assert_eq!(sqrt_of_poly(&t2, -5).unwrap(), Laurent::from_poly(&Poly::t(5)));
        assert!(sqrt_of_poly(&Poly::from_i64(3, &[1, 1, 0, 1]), -5).is_err());
        assert!(sqrt_of_poly(&Poly::from_i64(3, &[1, 0, 2]), -5).is_err());
    }

    #[test]
    fn char_e_examples() {
        assert_eq!(Laurent::monomial(3, 1, -1).char_e().unwrap(), 1);
        let x = Laurent::from_poly(&Poly::from_i64(3, &[2, 0, 1]));
        assert_eq!(x.char_e().unwrap(), 0);
        assert!(l3("0:1:0").char_e().is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = l3("0:1,2,0,1:-3");
        assert_eq!(Laurent::parse(3, &x.to_text()).unwrap(), x);
        assert!(Laurent::parse(3, "0:1,2").is_err());
        assert!(Laurent::parse(3, "0:1:5").is_err());
    }
}
