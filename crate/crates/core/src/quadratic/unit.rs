use std::collections::HashMap;

use super::QuadElem;
use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::laurent::sqrt_of_poly;

const MAX_CF_STEPS: usize = 10_000;
/// Largest box the minimality certificate will enumerate.
const CERT_BOX_CAP: u64 = 50_000_000;

/// The fundamental unit u (|u| = |sigma_1(u)| > 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    pub u: QuadElem,
    pub abs_exp: i64,
    pub norm_unit: u64,
}

/// Continued fraction of sqrt d with exact states (P + sqrt d) / Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub quotients: Vec<Poly>,
    /// (P_n, Q_n) for n = 0..quotients.len().
    pub states: Vec<(Poly, Poly)>,
    /// States repeat from index `period_start` with this length.
    pub period_start: usize,
    pub period: usize,
}

impl CfExpansion {
    /// Convergents p_n / q_n for n < quotients.len().
    pub fn convergents(&self) -> Vec<(Poly, Poly)> {
        let q = self.quotients[0].modulus();
        let (mut p2, mut p1) = (Poly::zero(q), Poly::one(q));
        let (mut q2, mut q1) = (Poly::one(q), Poly::zero(q));
        let mut out = Vec::with_capacity(self.quotients.len());
        for a in &self.quotients {
            let p = a.mul(&p1).add(&p2);
            let qq = a.mul(&q1).add(&q2);
            p2 = std::mem::replace(&mut p1, p.clone());
            q2 = std::mem::replace(&mut q1, qq.clone());
            out.push((p, qq));
        }
        out
    }
}

/// Expands sqrt d until the state (P, Q) repeats.
pub fn cf_expansion(d: &Poly, max_steps: usize) -> Result<CfExpansion> {
    let q = d.modulus();
    if d.deg() < 0 || d.deg() % 2 != 0 || !d.is_monic() {
        return Err(Error::Precondition(format!(
            "d = {d} must be monic of even degree"
        )));
    }
    let root = sqrt_of_poly(d, 0)?.poly_part()?;
    if root.square() == *d {
        return Err(Error::Precondition(format!("d = {d} is a perfect square")));
    }
    let mut seen: HashMap<(Poly, Poly), usize> = HashMap::new();
    let mut states = Vec::new();
    let mut quotients = Vec::new();
    let (mut p, mut qq) = (Poly::zero(q), Poly::one(q));
    for n in 0..=max_steps {
        if let Some(&j) = seen.get(&(p.clone(), qq.clone())) {
            return Ok(CfExpansion { quotients, states, period_start: j, period: n - j });
        }
        seen.insert((p.clone(), qq.clone()), n);
        states.push((p.clone(), qq.clone()));
        let a = p.add(&root).divrem(&qq)?.0;
        let p_next = a.mul(&qq).sub(&p);
        let q_next = d.sub(&p_next.square()).div_exact(&qq)?;
        quotients.push(a);
        p = p_next;
        qq = q_next;
    }
    Err(Error::PeriodNotFound(max_steps))
}

/// Fundamental unit from the first convergent p + q sqrt d of constant norm,
/// certified minimal by a box search over deg a, deg b <= abs_exp.
pub(super) fn fundamental_unit(d: &Poly) -> Result<UnitData> {
    let cf = cf_expansion(d, MAX_CF_STEPS)?;
    let convs = cf.convergents();
    let mut found = None;
    for (n, (p, qq)) in convs.iter().enumerate() {
        // p_n^2 - d q_n^2 = (-1)^{n+1} Q_{n+1}
        let q_next = cf.states.get(n + 1).map(|s| &s.1);
        let constant = match q_next {
            Some(qn) => qn.deg() == 0,
            None => {
                let nrm = p.square().sub(&qq.square().mul(d));
                nrm.deg() == 0
            }
        };
        if constant {
            found = Some(QuadElem::new(p.clone(), qq.clone()));
            break;
        }
    }
    let u = found.ok_or(Error::PeriodNotFound(convs.len()))?;
    let norm = u.a.square().sub(&u.b.square().mul(d));
    let abs_exp = u.a.deg();
    let data = UnitData { u, abs_exp, norm_unit: norm.coeff(0) };
    certify_minimal(d, &data)?;
    Ok(data)
}

/// No unit u' with 1 < |u'| < |u| exists with deg a, deg b <= abs_exp.
fn certify_minimal(d: &Poly, data: &UnitData) -> Result<()> {
    let q = d.modulus();
    let k = data.abs_exp;
    let side = q.checked_pow((k + 1) as u32).unwrap_or(u64::MAX);
    if side.saturating_mul(side) > CERT_BOX_CAP {
        return Err(Error::ScaleCap(format!(
            "unit certificate box q^{} exceeds {CERT_BOX_CAP}",
            2 * (k + 1)
        )));
    }
    if let Some(smaller) = smaller_unit(d, k) {
        return Err(Error::IdentityFailure(format!(
            "continued fraction unit {} is not fundamental: {} is smaller",
            data.u, smaller
        )));
    }
    Ok(())
}

/// Searches deg a, deg b <= k for a unit with 1 < |u'| < q^k.
pub(crate) fn smaller_unit(d: &Poly, k: i64) -> Option<QuadElem> {
    let q = d.modulus();
    let g = d.deg() / 2;
    let side = q.pow((k + 1) as u32);
    for bi in 1..side {
        let b = from_index(q, bi);
        let bd = b.square().mul(d);
        for ai in 0..side {
            let a = from_index(q, ai);
            let n = a.square().sub(&bd);
            if n.deg() != 0 {
                continue;
            }
            // deg sigma_1 = max(deg a, deg b + g) unless the leads cancel
            let mb = b.deg() + g;
            let s1 = if a.deg() == mb && (a.lead() + b.lead()).is_multiple_of(q) {
                -mb
            } else {
                a.deg().max(mb)
            };
            if s1 > 0 && s1 < k {
                return Some(QuadElem::new(a, b));
            }
        }
    }
    None
}

/// Polynomial whose ascending coefficients are the base-q digits of i.
pub(crate) fn from_index(q: u64, mut i: u64) -> Poly {
    let mut v = Vec::new();
    while i > 0 {
        v.push(i % q);
        i /= q;
    }
    Poly::from_residues(q, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cf_for_t2_plus_1() {
        let d = Poly::from_i64(3, &[1, 0, 1]);
        let cf = cf_expansion(&d, 2).unwrap();
        assert_eq!(cf.period, 1);
        assert_eq!(cf.quotients[0], Poly::t(3));
        assert!(cf_expansion(&Poly::from_i64(3, &[1, 2, 1]), 5).is_err());
    }

    #[test]
    fn convergent_norms_reach_a_constant() {
        let d = Poly::from_i64(5, &[1, 1, 1, 0, 1]);
        let cf = cf_expansion(&d, 200).unwrap();
        let degs: Vec<i64> = cf
            .convergents()
            .iter()
            .map(|(p, q)| p.square().sub(&q.square().mul(&d)).deg())
            .collect();
        assert!(degs.contains(&0));
        // deg(p_n^2 - d q_n^2) = g - deg a_{n+1} lies in [0, g)
        assert!(degs.iter().all(|&e| (0..2).contains(&e)), "{degs:?}");
    }

    #[test]
    fn unit_examples() {
        let d = Poly::from_i64(3, &[1, 0, 1]);
        let u = fundamental_unit(&d).unwrap();
        assert_eq!(u.u, QuadElem::new(Poly::t(3), Poly::one(3)));
        assert_eq!((u.abs_exp, u.norm_unit), (1, 2));

        let d = Poly::from_i64(5, &[2, 0, 1]);
        let u = fundamental_unit(&d).unwrap();
        assert_eq!(u.abs_exp, 1);
        assert_eq!(u.norm_unit, 3);
    }
}
