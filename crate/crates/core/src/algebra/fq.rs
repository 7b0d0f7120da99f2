use std::fmt;

use crate::error::{Error, Result};

/// Deterministic primality check for the moduli used here (trial division is
/// plenty for q below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut i = 3u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

pub fn check_modulus(q: u64) -> Result<()> {
    if q % 2 == 1 && q < (1 << 31) && is_prime(q) {
        Ok(())
    } else {
        Err(Error::BadModulus(q))
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    a * b % q
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse in F_q by Fermat; `a` must be nonzero mod q.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(q));
    pow_mod(a, q - 2, q)
}

/// Element of the prime field F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    value: u64,
    q: u64,
}

impl FqElem {
    pub fn new(value: i64, q: u64) -> Self {
        FqElem {
            value: value.rem_euclid(q as i64) as u64,
            q,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<FqElem> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FqElem {
            value: inv_mod(self.value, self.q),
            q: self.q,
        })
    }

    pub fn pow(self, e: u64) -> FqElem {
        FqElem {
            value: pow_mod(self.value, e, self.q),
            q: self.q,
        }
    }
}

impl std::ops::Add for FqElem {
    type Output = FqElem;
    fn add(self, rhs: FqElem) -> FqElem {
        FqElem {
            value: add_mod(self.value, rhs.value, self.q),
            q: self.q,
        }
    }
}

impl std::ops::Sub for FqElem {
    type Output = FqElem;
    fn sub(self, rhs: FqElem) -> FqElem {
        FqElem {
            value: sub_mod(self.value, rhs.value, self.q),
            q: self.q,
        }
    }
}

impl std::ops::Mul for FqElem {
    type Output = FqElem;
    fn mul(self, rhs: FqElem) -> FqElem {
        FqElem {
            value: mul_mod(self.value, rhs.value, self.q),
            q: self.q,
        }
    }
}

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        FqElem {
            value: sub_mod(0, self.value, self.q),
            q: self.q,
        }
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
