use super::*;
use crate::algebra::{enumerate_monic, mangoldt_poly, mobius_poly, monic_divisors};
use crate::diophantine::{Target, DEFAULT_SCALE_CAP};
use crate::quadratic::QuadField;

/// Literal triple sums over explicit monic divisors.
fn poly_oracle(f: &Poly, a: i64, b: i64) -> (i64, i64, i64) {
    let q = f.modulus();
    let divs = monic_divisors(&factorize(f).unwrap(), q);
    let mu = |p: &Poly| mobius_poly(p).unwrap();
    let lam = |p: &Poly| mangoldt_poly(p).unwrap() as i64;
    let mut a1 = 0;
    for m in &divs {
        for l in &divs {
            let ml = m.mul(l);
            if ml.divides(f) && m.deg() <= a && l.deg() <= b {
                a1 -= mu(m) * lam(l);
            }
        }
    }
    let a2 = divs
        .iter()
        .filter(|l| l.deg() <= a)
        .map(|l| mu(l) * f.div_exact(l).unwrap().deg())
        .sum();
    let mut a3 = 0;
    for m in &divs {
        let n = f.div_exact(m).unwrap();
        if m.deg() > b && n.deg() > 0 {
            let inner: i64 = divs
                .iter()
                .filter(|d| d.divides(&n) && d.deg() <= a)
                .map(&mu)
                .sum();
            a3 -= lam(m) * inner;
        }
    }
    (a1, a2, a3)
}

#[test]
fn poly_examples() {
    let f = Poly::from_i64(3, &[0, 0, 0, 1]);
    let t = vaughan_terms_poly(&f, VaughanParams { alpha: 1, beta: 2 }).unwrap();
    assert_eq!(t.total(), 1);
    let g = Poly::from_i64(3, &[0, 1]).mul(&Poly::from_i64(3, &[1, 1])).mul(&Poly::from_i64(3, &[2, 1]));
    let t = vaughan_terms_poly(&g, VaughanParams { alpha: 1, beta: 1 }).unwrap();
    assert_eq!(t.total(), 0);
    assert!(vaughan_terms_poly(&g, VaughanParams { alpha: 1, beta: 3 }).is_err());
    assert!(vaughan_terms_poly(&g.scale(2), VaughanParams { alpha: 1, beta: 1 }).is_err());
}

#[test]
fn poly_terms_match_oracle() {
    for deg in 1..=4 {
        for f in enumerate_monic(3, deg) {
            for alpha in 0..=3 {
                for beta in 0..deg as u64 {
                    let t = vaughan_terms_poly(&f, VaughanParams { alpha, beta }).unwrap();
                    assert_eq!((t.a1, t.a2, t.a3), poly_oracle(&f, alpha as i64, beta as i64), "{f}");
                    assert_eq!(t.total(), mangoldt_poly(&f).unwrap() as i64);
                }
            }
        }
    }
}

#[test]
fn ideal_identity_and_h() {
    let k = QuadField::from_text(3, "1,0,1").unwrap();
    let cat = IdealCatalog::new(&k, 4).unwrap();
    for i in 0..cat.len() {
        let n = 3u64.pow(cat.norm_exp(i) as u32);
        for alpha in 1..=20 {
            for beta in (1..n).step_by(4) {
                let t = vaughan_terms_ideal(&cat, 3, i, VaughanParams { alpha, beta }).unwrap();
                assert_eq!(t.total(), cat.mangoldt(i) as i64);
            }
            let h = h_value(&cat, 3, i, alpha);
            if n > 1 && n <= alpha {
                assert_eq!(h, 0);
            }
        }
        assert!(vaughan_terms_ideal(&cat, 3, i, VaughanParams { alpha: 1, beta: n }).is_err());
    }
    assert_eq!(h_value(&cat, 3, cat.unit_ideal(), 5), 1);
    // inert prime of norm 9 with alpha = q: only d = (1) counts
    let inert = cat
        .of_norm_exp(2)
        .find(|&i| matches!(cat.ideals[i].factors.as_slice(), [(p, 1)] if cat.primes[*p].norm_exp == 2))
        .expect("T^2+1 has an inert prime of degree 1");
    assert_eq!(h_value(&cat, 3, inert, 3), 1);
}

#[test]
fn decomposition_is_exact() {
    let k = QuadField::from_text(3, "1,0,1").unwrap();
    let t = Target::seeded(3, 1, -30);
    let prep = Prepared::new(&k, &t).unwrap();
    for delta_exp in [-1, 0, 1] {
        let ts = type_sums(&prep, 4, VaughanParams { alpha: 3, beta: 3 }, delta_exp).unwrap();
        assert!(ts.exact(), "delta_exp = {delta_exp}");
        assert!(ts.max_lambda <= 4 && ts.max_abs_h <= 16);
    }
}

#[test]
fn empty_dual_range_gives_zero_sums() {
    let k = QuadField::from_text(3, "1,0,1").unwrap();
    let t = Target::seeded(3, 1, -30);
    let prep = Prepared::new(&k, &t).unwrap();
    let ts = type_sums(&prep, 4, VaughanParams { alpha: 3, beta: 3 }, 6).unwrap();
    assert_eq!((ts.t_i, ts.t_ii), (0.0, 0.0));
    assert!(ts.direct.is_zero());
}

#[test]
fn alpha_beta_must_stay_below_x() {
    let k = QuadField::from_text(3, "1,0,1").unwrap();
    let t = Target::seeded(3, 1, -30);
    let prep = Prepared::new(&k, &t).unwrap().with_scale_cap(DEFAULT_SCALE_CAP);
    let err = type_sums(&prep, 2, VaughanParams { alpha: 3, beta: 3 }, 0).unwrap_err();
    assert!(err.to_string().contains("αβ < X"));
}

#[test]
fn type_ii_range_shrinks_with_thresholds() {
    let k = QuadField::from_text(3, "1,0,1").unwrap();
    let t = Target::seeded(3, 2, -30);
    let prep = Prepared::new(&k, &t).unwrap();
    let mut prev = usize::MAX;
    for (alpha, beta) in [(1, 1), (2, 2), (3, 3), (3, 9), (9, 8)] {
        let ts = type_sums(&prep, 4, VaughanParams { alpha, beta }, 0).unwrap();
        assert!(ts.type_ii_pairs <= prev);
        prev = ts.type_ii_pairs;
    }
}
