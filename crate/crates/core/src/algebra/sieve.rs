use super::factor::is_irreducible;
use super::poly::{enumerate_monic, Poly};

/// Classification of a monic polynomial of the sieved degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerClass {
    /// Divisible by two distinct irreducibles.
    Composite,
    Irreducible,
    /// P^r with r >= 2.
    ProperPower,
}

/// Eratosthenes-style sieve over the q^n monic polynomials of degree n.
///
/// Entry i describes the monic polynomial with index i (see
/// [`Poly::monic_index`]).
pub struct DegreeSieve {
    q: u64,
    n: usize,
    table: Vec<u8>,
}

const COMPOSITE: u8 = 0;
const IRREDUCIBLE: u8 = 1;
const POWER: u8 = 2;

impl DegreeSieve {
    pub fn new(q: u64, n: usize) -> DegreeSieve {
        let size = q.pow(n as u32) as usize;
        let mut table = vec![IRREDUCIBLE; size];
        if n == 0 {
            table[0] = COMPOSITE;
            return DegreeSieve { q, n, table };
        }
        let mut coeffs = vec![0u64; n + 1];
        for k in 1..=n / 2 {
            let m = n - k;
            for p in irreducibles_of_degree(q, k) {
                let pc = p.coeffs();
                for gidx in 0..q.pow(m as u32) {
                    // coeffs of p * g where g is monic of degree m with index gidx
                    coeffs.iter_mut().for_each(|c| *c = 0);
                    let mut rest = gidx;
                    for j in 0..=m {
                        let gj = if j == m {
                            1
                        } else {
                            let c = rest % q;
                            rest /= q;
                            c
                        };
                        if gj == 0 {
                            continue;
                        }
                        for (i, &pi) in pc.iter().enumerate() {
                            coeffs[i + j] = (coeffs[i + j] + pi * gj) % q;
                        }
                    }
                    let idx = coeffs[..n].iter().rev().fold(0u64, |acc, &c| acc * q + c);
                    table[idx as usize] = COMPOSITE;
                }
            }
        }
        for k in 1..n {
            if !n.is_multiple_of(k) {
                continue;
            }
            for p in irreducibles_of_degree(q, k) {
                let idx = p.pow((n / k) as u64).monic_index();
                table[idx as usize] = POWER;
            }
        }
        DegreeSieve { q, n, table }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn class_of_index(&self, idx: u64) -> PowerClass {
        match self.table[idx as usize] {
            IRREDUCIBLE => PowerClass::Irreducible,
            POWER => PowerClass::ProperPower,
            _ => PowerClass::Composite,
        }
    }

    /// Class of a nonzero polynomial of the sieved degree (up to units).
    pub fn class_of(&self, f: &Poly) -> PowerClass {
        assert_eq!(f.deg(), self.n as i64);
        self.class_of_index(f.to_monic().monic_index())
    }

    pub fn irreducibles(&self) -> impl Iterator<Item = Poly> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == IRREDUCIBLE)
            .map(|(i, _)| Poly::from_monic_index(self.q, self.n, i as u64))
    }
}

/// All monic irreducibles of the given degree, in canonical order.
pub fn irreducibles_of_degree(q: u64, deg: usize) -> Vec<Poly> {
    match deg {
        0 => Vec::new(),
        1 => enumerate_monic(q, 1).collect(),
        _ if q.pow(deg as u32) <= 2000 => enumerate_monic(q, deg)
            .filter(|f| is_irreducible(f).unwrap())
            .collect(),
        _ => DegreeSieve::new(q, deg).irreducibles().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::factor::factorize;

    /// Gauss's count of monic irreducibles: (1/n) sum_{k|n} mu(n/k) q^k.
    fn gauss_count(q: i64, n: i64) -> i64 {
        fn mu(mut m: i64) -> i64 {
            let mut r = 1;
            let mut p = 2;
            while p * p <= m {
                if m % p == 0 {
                    m /= p;
                    if m % p == 0 {
                        return 0;
                    }
                    r = -r;
                }
                p += 1;
            }
            if m > 1 {
                r = -r;
            }
            r
        }
        (1..=n)
            .filter(|k| n % k == 0)
            .map(|k| mu(n / k) * q.pow(k as u32))
            .sum::<i64>()
            / n
    }

    #[test]
    fn sieve_counts_match_gauss_formula() {
        for (q, n) in [(3u64, 1usize), (3, 2), (3, 6), (3, 8), (5, 4), (5, 6)] {
            let s = DegreeSieve::new(q, n);
            assert_eq!(
                s.irreducibles().count() as i64,
                gauss_count(q as i64, n as i64),
                "q={q} n={n}"
            );
        }
    }

    #[test]
    fn sieve_classes_match_factorization() {
        let s = DegreeSieve::new(3, 6);
        for f in enumerate_monic(3, 6) {
            let fac = factorize(&f).unwrap();
            let expected = match fac.factors.as_slice() {
                [(_, 1)] => PowerClass::Irreducible,
                [(_, _)] => PowerClass::ProperPower,
                _ => PowerClass::Composite,
            };
            assert_eq!(s.class_of(&f), expected, "f = {f}");
        }
    }
}
