use ffquad::algebra::{enumerate_monic, factorize, is_irreducible, mangoldt_poly, mobius_poly, monic_divisors, Poly};
use ffquad::diophantine::{Prepared, Target};
use ffquad::laurent::{Laurent, QPow};
use ffquad::quadratic::QuadField;
use ffquad::vaughan::{vaughan_terms_poly, VaughanParams};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7), Just(11)]
}

fn poly(q: u64, max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..q, 0..=max_len).prop_map(move |c| Poly::from_residues(q, c))
}

fn qpoly(max_len: usize) -> impl Strategy<Value = (u64, Poly, Poly)> {
    prime().prop_flat_map(move |q| (Just(q), poly(q, max_len), poly(q, max_len)))
}

fn exact(f: &Poly) -> Laurent {
    Laurent::from_poly(f)
}

fn field(q: u64) -> QuadField {
    QuadField::from_text(q, if q == 5 { "2,0,1" } else { "1,0,1" }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poly_ring_laws((q, f, g) in qpoly(8)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        if !g.is_zero() {
            let (quo, rem) = f.divrem(&g).unwrap();
            prop_assert_eq!(quo.mul(&g).add(&rem), f.clone());
            prop_assert!(rem.deg() < g.deg());
            prop_assert!(f.mul(&g).div_exact(&g).unwrap() == f);
        }
        let h = f.gcd(&g);
        if !h.is_zero() {
            prop_assert!(h.divides(&f) && h.divides(&g));
        }
        prop_assert_eq!(Poly::parse(q, &f.to_text()).unwrap(), f);
    }

    #[test]
    fn factorization_round_trip((q, f, _) in qpoly(7)) {
        prop_assume!(!f.is_zero());
        let fac = factorize(&f).unwrap();
        prop_assert_eq!(fac.product(q), f.clone());
        for (p, e) in &fac.factors {
            prop_assert!(p.is_monic() && *e >= 1);
            prop_assert!(is_irreducible(p).unwrap());
        }
        let m = f.to_monic();
        let divs = monic_divisors(&fac, q);
        let lam: u64 = divs.iter().map(|d| mangoldt_poly(d).unwrap()).sum();
        let mu: i64 = divs.iter().map(|d| mobius_poly(d).unwrap()).sum();
        prop_assert_eq!(lam as i64, m.deg());
        prop_assert_eq!(mu, (m.deg() == 0) as i64);
    }

    #[test]
    fn laurent_products_of_polys_are_exact((_q, f, g) in qpoly(6)) {
        let lhs = exact(&f).mul(&exact(&g));
        prop_assert_eq!(lhs.clone(), exact(&f.mul(&g)));
        prop_assert_eq!(exact(&f).add(&exact(&g)), exact(&f.add(&g)));
        prop_assert!(lhs.is_exact());
    }

    #[test]
    fn laurent_ultrametric((_q, f, g) in qpoly(6), s in -4i64..4) {
        let x = exact(&f).shift(s);
        let y = exact(&g);
        let sum = x.add(&y).abs_value().unwrap();
        let bound = x.abs_value().unwrap().max(y.abs_value().unwrap());
        prop_assert!(sum <= bound);
        prop_assert_eq!(
            x.mul(&y).abs_value().unwrap(),
            x.abs_value().unwrap().mul(y.abs_value().unwrap())
        );
    }

    #[test]
    fn laurent_inverse((_q, f, _g) in qpoly(5), s in -3i64..3, tail in -20i64..-5) {
        prop_assume!(!f.is_zero());
        let x = exact(&f).shift(s);
        let inv = x.inv(tail).unwrap();
        let one = x.mul(&inv);
        prop_assert_eq!(one.abs_value().unwrap(), QPow::Exp(0));
        let t = one.tail().unwrap();
        prop_assert!(t <= tail + x.abs_value().unwrap().exp().unwrap());
        for k in t..=0 {
            prop_assert_eq!(one.coeff(k).unwrap(), (k == 0) as u64);
        }
    }

    #[test]
    fn laurent_text_round_trip(q in prime(), top in -5i64..5, c in prop::collection::vec(0u64..3, 1..8)) {
        let tail = top - c.len() as i64 + 1;
        let x = Laurent::new(q, top, c, Some(tail)).unwrap();
        prop_assert_eq!(Laurent::parse(q, &x.to_text()).unwrap(), x);
    }

    #[test]
    fn norm_is_multiplicative(q in prop_oneof![Just(3u64), Just(5)], a in prop::collection::vec(-2i64..3, 0..4), b in prop::collection::vec(-2i64..3, 0..3), c in prop::collection::vec(-2i64..3, 0..4), d in prop::collection::vec(-2i64..3, 0..3)) {
        let k = field(q);
        let x = k.elem(&a, &b);
        let y = k.elem(&c, &d);
        prop_assert_eq!(k.norm(&k.mul(&x, &y)), k.norm(&x).mul(&k.norm(&y)));
        prop_assert_eq!(k.norm(&x), k.mul(&x, &x.conj()).a);
    }

    #[test]
    fn vaughan_identity_on_random_monic(q in prop_oneof![Just(3u64), Just(5)], idx in 0u64..10_000, deg in 1usize..6, alpha in 0u64..6, beta_frac in 0.0f64..1.0) {
        let idx = idx % q.pow(deg as u32);
        let f = Poly::from_monic_index(q, deg, idx);
        let beta = ((deg as f64) * beta_frac) as u64;
        let t = vaughan_terms_poly(&f, VaughanParams { alpha, beta }).unwrap();
        prop_assert_eq!(t.total(), mangoldt_poly(&f).unwrap() as i64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn poisson_matches_direct_count(q in prop_oneof![Just(3u64), Just(5)], seed in 0u64..1000, n in 0i64..3, pick in 0usize..1000, radius in -2i64..2) {
        let k = field(q);
        let t = Target::seeded(q, seed, -30);
        let prep = Prepared::new(&k, &t).unwrap();
        let gens = k.generators_of_norm_exp(n);
        prop_assume!(!gens.is_empty());
        let v = &gens[pick % gens.len()];
        let direct = prep.omega_direct(v, radius, false).unwrap().count;
        let dual = prep.omega_poisson(v, radius).unwrap();
        let r = dual.sum.rational().expect("dual sum is rational") as i128;
        let e = dual.prefactor_exp;
        let qe = (q as i128).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            prop_assert_eq!(r * qe, dual.value as i128);
        } else {
            prop_assert_eq!(r, dual.value as i128 * qe);
        }
        prop_assert_eq!(dual.value, direct);
    }

    #[test]
    fn omega_is_generator_invariant(seed in 0u64..1000, n in 0i64..4, pick in 0usize..1000, r in -2i64..3, radius in -2i64..1) {
        let k = field(3);
        let t = Target::seeded(3, seed, -40);
        let prep = Prepared::new(&k, &t).unwrap();
        let gens = k.generators_of_norm_exp(n);
        prop_assume!(!gens.is_empty());
        let v = &gens[pick % gens.len()];
        let w = k.mul(&k.unit_pow(r), &v.scale(2));
        let a = prep.omega_direct(v, radius, false).unwrap().count;
        let b = prep.omega_direct(&w, radius, false).unwrap().count;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn monic_enumeration_counts() {
    for q in [3u64, 5] {
        for deg in 0..4 {
            let all: Vec<Poly> = enumerate_monic(q, deg).collect();
            assert_eq!(all.len() as u64, q.pow(deg as u32));
            assert!(all.iter().all(|f| f.is_monic() && f.deg() == deg as i64));
        }
    }
}
