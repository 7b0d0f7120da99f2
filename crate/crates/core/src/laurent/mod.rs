//! Truncated Laurent series in 1/T, absolute values, and exact sums of
//! p-th roots of unity.

mod cyc;
mod series;

pub use cyc::{cyc_reduce, CycReduced, CycSum};
pub use series::{sqrt_of_poly, Laurent, Magnitude, QPow};

/// A closed ball {x : |x| <= q^e}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallExp(pub i64);

impl BallExp {
    /// The open ball |x| < q^r is the closed ball of exponent r - 1.
    pub fn open(r: i64) -> BallExp {
        BallExp(r - 1)
    }

    pub fn contains(self, v: QPow) -> bool {
        match v {
            QPow::Zero => true,
            QPow::Exp(e) => e <= self.0,
        }
    }
}

/// Working tail for experiments at level q^N.
///
/// The deepest quantity compared is a product of two embeddings with
/// |.| <= q^{N + deg d} followed by an error test near q^{-N}; the extra 8
/// digits absorb the inverse and square-root losses.
pub fn default_tail(n: i64, deg_d: i64) -> i64 {
    -(2 * n + deg_d + 8)
}
