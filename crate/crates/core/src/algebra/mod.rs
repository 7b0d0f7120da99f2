//! Arithmetic in F_q and F_q[T] for an odd prime q.

mod factor;
mod fq;
mod poly;
mod sieve;

pub use factor::{factorize, is_irreducible, mangoldt_poly, mobius_poly, monic_divisors, Factorization};
pub use fq::{add_mod, check_modulus, inv_mod, is_prime, mul_mod, pow_mod, sub_mod, FqElem};
pub use poly::{enumerate_monic, enumerate_monic_checked, Poly};
pub use sieve::{irreducibles_of_degree, DegreeSieve, PowerClass};

use crate::error::{Error, Result};

/// How a monic irreducible P of F_q[T] decomposes in F_q(T)(sqrt d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    pub fn as_str(self) -> &'static str {
        match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        }
    }
}

/// Splitting type of P: ramified if P | d, split if d is a nonzero square
/// in F_q[T]/(P) (Euler criterion with exponent (|P|-1)/2), inert otherwise.
pub fn quadratic_character(d: &Poly, p: &Poly) -> Result<Splitting> {
    if !p.is_monic() || p.deg() < 1 || !is_irreducible(p)? {
        return Err(Error::Precondition(format!(
            "{p} is not a monic irreducible polynomial"
        )));
    }
    Ok(splitting_unchecked(d, p))
}

/// [`quadratic_character`] without the irreducibility check.
pub(crate) fn splitting_unchecked(d: &Poly, p: &Poly) -> Splitting {
    let r = d.rem(p).expect("p is nonzero");
    if r.is_zero() {
        return Splitting::Ramified;
    }
    let norm = (p.modulus() as u128).pow(p.deg() as u32);
    let e = r.powmod((norm - 1) / 2, p).expect("p is nonzero");
    if e.is_one() {
        Splitting::Split
    } else {
        Splitting::Inert
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(c: &[i64]) -> Poly {
        Poly::from_i64(3, c)
    }

    #[test]
    fn splitting_examples() {
        let d = p3(&[1, 0, 1]);
        assert_eq!(quadratic_character(&d, &p3(&[0, 1])).unwrap(), Splitting::Split);
        assert_eq!(quadratic_character(&d, &p3(&[1, 1])).unwrap(), Splitting::Inert);
        assert_eq!(quadratic_character(&d, &p3(&[1, 0, 1])).unwrap(), Splitting::Ramified);
        assert!(quadratic_character(&d, &p3(&[1, 2, 1])).is_err());
        assert!(quadratic_character(&d, &p3(&[0, 2])).is_err());
    }

    #[test]
    fn splitting_matches_residue_square_roots() {
        // Independent oracle: d is a square mod P iff some r with deg r < deg P
        // satisfies r^2 = d mod P.
        let q = 3;
        let d = Poly::from_i64(q, &[2, 1, 0, 1]).mul(&Poly::from_i64(q, &[0, 1]));
        for deg in 1..=3 {
            for p in irreducibles_of_degree(q, deg) {
                let dr = d.rem(&p).unwrap();
                let expected = if dr.is_zero() {
                    Splitting::Ramified
                } else {
                    let n = q.pow(deg as u32);
                    let is_sq = (0..n).any(|i| {
                        let mut v = Vec::new();
                        let mut i = i;
                        for _ in 0..deg {
                            v.push(i % q);
                            i /= q;
                        }
                        Poly::from_residues(q, v).square().rem(&p).unwrap() == dr
                    });
                    if is_sq {
                        Splitting::Split
                    } else {
                        Splitting::Inert
                    }
                };
                assert_eq!(quadratic_character(&d, &p).unwrap(), expected, "P = {p}");
            }
        }
    }

    #[test]
    fn splitting_counts_partition_irreducibles() {
        let d = Poly::from_i64(5, &[2, 0, 1]);
        for deg in 1..=4 {
            let irr = irreducibles_of_degree(5, deg);
            let mut counts = [0usize; 3];
            for p in &irr {
                counts[quadratic_character(&d, p).unwrap() as usize] += 1;
            }
            assert_eq!(counts.iter().sum::<usize>(), irr.len());
        }
    }
}
