use std::f64::consts::PI;
use std::fmt;

/// Exact element sum_j counts[j] * zeta_p^j of Z[zeta_p].
#[derive(Clone, Debug)]
pub struct CycSum {
    p: u64,
    counts: Vec<i64>,
}

/// Result of [`cyc_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct CycReduced {
    pub normal: CycSum,
    pub rational: Option<i64>,
    pub magnitude: f64,
}

impl CycSum {
    pub fn zero(p: u64) -> CycSum {
        CycSum { p, counts: vec![0; p as usize] }
    }

    pub fn from_counts(p: u64, counts: Vec<i64>) -> CycSum {
        assert_eq!(counts.len(), p as usize, "need one count per residue");
        CycSum { p, counts }
    }

    pub fn integer(p: u64, n: i64) -> CycSum {
        let mut s = CycSum::zero(p);
        s.counts[0] = n;
        s
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Adds mult * zeta^j.
    pub fn add_zeta(&mut self, j: u64, mult: i64) {
        self.counts[(j % self.p) as usize] += mult;
    }

    pub fn add_assign(&mut self, other: &CycSum) {
        assert_eq!(self.p, other.p);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn add(&self, other: &CycSum) -> CycSum {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn scale(&self, k: i64) -> CycSum {
        CycSum { p: self.p, counts: self.counts.iter().map(|c| c * k).collect() }
    }

    /// Multiplication by zeta^j.
    pub fn rotate(&self, j: u64) -> CycSum {
        let p = self.p as usize;
        let j = (j % self.p) as usize;
        let mut counts = vec![0; p];
        for (i, &c) in self.counts.iter().enumerate() {
            counts[(i + j) % p] = c;
        }
        CycSum { p: self.p, counts }
    }

    /// Representative with counts[p-1] = 0.
    pub fn normal_form(&self) -> CycSum {
        let last = *self.counts.last().unwrap();
        CycSum { p: self.p, counts: self.counts.iter().map(|c| c - last).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().counts.iter().all(|&c| c == 0)
    }

    /// The integer value when the sum lies in Z.
    pub fn rational(&self) -> Option<i64> {
        let n = self.normal_form();
        let p = self.p as usize;
        n.counts[1..p - 1].iter().all(|&c| c == 0).then_some(n.counts[0])
    }

    /// Complex value at zeta_p = exp(2 pi i / p).
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &c) in self.counts.iter().enumerate() {
            let a = 2.0 * PI * j as f64 / self.p as f64;
            re += c as f64 * a.cos();
            im += c as f64 * a.sin();
        }
        (re, im)
    }

    /// |s|, evaluated in floating point.
    pub fn magnitude(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }
}

impl PartialEq for CycSum {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.normal_form().counts == other.normal_form().counts
    }
}

impl Eq for CycSum {}

impl fmt::Display for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.rational() {
            return write!(f, "{r}");
        }
        let n = self.normal_form();
        let terms: Vec<String> = n
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, c)| if j == 0 { c.to_string() } else { format!("{c}z^{j}") })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn cyc_reduce(s: &CycSum) -> CycReduced {
    CycReduced { normal: s.normal_form(), rational: s.rational(), magnitude: s.magnitude() }
}
