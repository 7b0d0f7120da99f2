use super::*;
use crate::quadratic::IdealCatalog;

fn field(q: u64, d: &str) -> QuadField {
    QuadField::from_text(q, d).unwrap()
}

/// Brute-force omega: every p in a box containing all candidates, with
/// errors from freshly computed embeddings.
fn omega_oracle(k: &QuadField, t: &Target, v: &QuadElem, radius: i64) -> u64 {
    let q = k.q();
    let g = k.half_deg();
    let (j1, j2) = k.sigma_degrees(v).unwrap();
    let m = (j1.max(j2) + radius.max(0)).max(0);
    let na = q.pow((m + 1) as u32);
    let nb = if m - g < 0 { 1 } else { q.pow((m - g + 1) as u32) };
    let tail = t.tail() - 2 * m - 6;
    let svs = [
        k.sigma(v, Embedding::First, tail).unwrap(),
        k.sigma(v, Embedding::Second, tail).unwrap(),
    ];
    let mut count = 0;
    for bi in 0..nb {
        for ai in 0..na {
            let p = QuadElem::new(
                crate::quadratic::poly_from_index(q, ai),
                crate::quadratic::poly_from_index(q, bi),
            );
            let ok = [(Embedding::First, &t.x1), (Embedding::Second, &t.x2)]
                .iter()
                .enumerate()
                .all(|(i, (w, x))| {
                    let sp = k.sigma(&p, *w, tail).unwrap();
                    // |x sv - sp| < q^(radius + j)
                    let lhs = x.mul(&svs[i]).sub(&sp);
                    let j = if i == 0 { j1 } else { j2 };
                    lhs.abs_at_most(radius - 1 + j).unwrap()
                });
            count += ok as u64;
        }
    }
    count
}

fn small_targets(q: u64) -> Vec<Target> {
    (1..=3).map(|s| Target::seeded(q, s, -30)).collect()
}

#[test]
fn omega_direct_matches_brute_force() {
    for (q, d) in [(3, "1,0,1"), (5, "2,0,1")] {
        let k = field(q, d);
        for t in small_targets(q) {
            let prep = Prepared::new(&k, &t).unwrap();
            for n in 0..=2 {
                for v in k.generators_of_norm_exp(n) {
                    for radius in -2..=1 {
                        let got = prep.omega_direct(&v, radius, false).unwrap().count;
                        let want = omega_oracle(&k, &t, &v, radius);
                        assert_eq!(got, want, "q={q} v={v} D={radius}");
                    }
                }
            }
        }
    }
}

#[test]
fn poisson_identity_is_exact() {
    for (q, d) in [(3, "1,0,1"), (5, "2,0,1"), (3, "1,1,0,0,1")] {
        let k = field(q, d);
        let t = Target::seeded(q, 9, -40);
        let prep = Prepared::new(&k, &t).unwrap();
        for n in 1..=3 {
            for v in k.generators_of_norm_exp(n) {
                for radius in -3..=0 {
                    let a = prep.omega_direct(&v, radius, false).unwrap().count;
                    let b = prep.omega_poisson(&v, radius).unwrap();
                    assert_eq!(a, b.value, "q={q} d={d} v={v} D={radius}");
                }
            }
        }
    }
}

#[test]
fn planted_target_is_hit_exactly() {
    let k = field(3, "1,0,1");
    let v = k.elem(&[1, 1], &[1]);
    let p = k.elem(&[2], &[0, 1]);
    let t = Target::planted(&k, &p, &v, -30).unwrap();
    let prep = Prepared::new(&k, &t).unwrap();
    assert_eq!(prep.lattice_round(&v).unwrap(), p);
    let (e1, e2) = prep.errors(&p, &v).unwrap();
    assert_eq!((e1, e2), (QPow::Zero, QPow::Zero));
    let recs = dirichlet_search(&prep, 2, 0).unwrap();
    assert_eq!(recs[0].max_err(), QPow::Zero);
    assert!(matches!(screen_target(&prep, 2), Err(Error::TargetRejected(_))));
    let (r1, r2) = recompute_record(k.d(), &t, &p, &v).unwrap();
    assert!(r1.exp().is_none_or(|x| x <= -20) && r2.exp().is_none_or(|x| x <= -20));
}

#[test]
fn lattice_round_errors_are_bounded() {
    // |x_i sigma_i(v) - sigma_i(p)| <= q^(g-1) for the rounded p
    let k = field(5, "2,0,1");
    for t in small_targets(5) {
        let prep = Prepared::new(&k, &t).unwrap();
        for v in k.generators_of_norm_exp(3) {
            let p = prep.lattice_round(&v).unwrap();
            let (j1, j2) = k.sigma_degrees(&v).unwrap();
            let (e1, e2) = prep.errors(&p, &v).unwrap();
            assert!(e1 <= QPow::Exp(k.half_deg() - 1 - j1));
            assert!(e2 <= QPow::Exp(k.half_deg() - 1 - j2));
        }
    }
}

#[test]
fn lattice_round_beats_its_neighbours_in_a_5x5_box() {
    // Among p + (c1 + c2 sqrt d) with constants c1, c2, none improves both
    // errors at once.
    let k = field(5, "2,0,1");
    let t = Target::seeded(5, 4, -30);
    let prep = Prepared::new(&k, &t).unwrap();
    for v in k.generators_of_norm_exp(2) {
        let p = prep.lattice_round(&v).unwrap();
        let (e1, e2) = prep.errors(&p, &v).unwrap();
        for c1 in 0..5 {
            for c2 in 0..5 {
                if c1 == 0 && c2 == 0 {
                    continue;
                }
                let p2 = p.add(&k.elem(&[c1], &[c2]));
                let (f1, f2) = prep.errors(&p2, &v).unwrap();
                assert!(!(f1 < e1 && f2 < e2), "v={v} c=({c1},{c2})");
            }
        }
    }
}

#[test]
fn omega_depends_only_on_the_ideal() {
    let k = field(3, "1,0,1");
    let t = Target::seeded(3, 2, -40);
    let prep = Prepared::new(&k, &t).unwrap();
    let u = k.unit().u.clone();
    for v in k.generators_of_norm_exp(2) {
        let base = prep.omega_direct(&v, -1, false).unwrap().count;
        for w in [k.mul(&u, &v), v.scale(2), k.mul(&k.unit_inverse(&u).unwrap(), &v)] {
            assert_eq!(prep.omega_direct(&w, -1, false).unwrap().count, base);
        }
    }
}

#[test]
fn pnt_sum_matches_enumeration() {
    for (q, d) in [(3, "1,0,1"), (5, "2,0,1")] {
        let k = field(q, d);
        let cat = IdealCatalog::new(&k, 4).unwrap();
        for n in 1..=4 {
            let gens = prime_power_generators(&k, n, DEFAULT_SCALE_CAP).unwrap();
            let from_catalog: u64 = cat.of_norm_exp(n).map(|i| cat.mangoldt(i)).sum();
            assert_eq!(lambda_sum_enumerated(&gens), pnt_sum(&k, n, DEFAULT_SCALE_CAP).unwrap());
            assert_eq!(lambda_sum_enumerated(&gens), from_catalog, "q={q} n={n}");
            assert_eq!(gens.iter().filter(|g| g.prime).count() as u64, {
                cat.of_norm_exp(n).filter(|&i| cat.ideals[i].factors.len() == 1 && cat.ideals[i].factors[0].1 == 1).count() as u64
            });
        }
    }
}

#[test]
fn fast_generators_agree_with_slow_route() {
    let k = field(3, "1,1,0,0,1");
    for n in 1..=4 {
        let mut slow: Vec<(QuadElem, u64)> = k
            .generators_of_norm_exp(n)
            .into_iter()
            .filter_map(|v| {
                let l = k.mangoldt_element(&v).unwrap();
                (l > 0).then_some((v, l))
            })
            .collect();
        let mut fast: Vec<(QuadElem, u64)> = prime_power_generators(&k, n, DEFAULT_SCALE_CAP)
            .unwrap()
            .into_iter()
            .map(|g| (g.v, g.lambda))
            .collect();
        slow.sort();
        fast.sort();
        assert_eq!(fast, slow, "n={n}");
    }
}

#[test]
fn dirichlet_best_quality_is_monotone() {
    let k = field(3, "1,0,1");
    for t in small_targets(3) {
        let prep = Prepared::new(&k, &t).unwrap();
        let mut prev: Option<i64> = None;
        for m in 0..=4 {
            let recs = dirichlet_search(&prep, m, i64::MAX / 4).unwrap();
            let best = recs.first().unwrap().quality_exp().unwrap();
            if let Some(p) = prev {
                assert!(best <= p);
            }
            prev = Some(best);
        }
    }
}

#[test]
fn tilde_t_sums_lambda_times_omega() {
    let k = field(3, "1,0,1");
    let t = Target::seeded(3, 5, -40);
    let prep = Prepared::new(&k, &t).unwrap();
    let n = 4;
    let gens = prime_power_generators(&k, n, DEFAULT_SCALE_CAP).unwrap();
    let r = radius_exp(0, n);
    let tt = tilde_t(&prep, &gens, r).unwrap();
    let direct: u64 =
        gens.iter().map(|g| g.lambda * omega_oracle(&k, &t, &g.v, r)).sum();
    assert_eq!(tt.value, direct);
    assert_eq!(tt.value, tt.prime_part + tt.power_part);
    for w in &tt.witnesses {
        assert!(w.max_err() < QPow::Exp(r));
    }
}

#[test]
fn delta_rule_ranges() {
    assert_eq!(delta_rule(5, 10, DeltaChoice::Rule { epsilon: 0.01 }), (-1, true));
    // q = 4099 sits just above 2^12: the window is nonempty only for
    // epsilon below about 1.1e-5
    let (lo, hi) = delta_window(4099, 1e-6);
    assert!(lo < hi);
    let (lo2, hi2) = delta_window(4099, 1e-4);
    assert!(lo2 > hi2);
    let (e, outside) = delta_rule(4099, 2, DeltaChoice::Rule { epsilon: 1e-6 });
    assert!(outside);
    assert_eq!(e, 0);
    let (lo, hi) = delta_window(65537, 0.001);
    let (e, outside) = delta_rule(65537, 200, DeltaChoice::Rule { epsilon: 0.001 });
    assert!(!outside);
    assert!(e as f64 >= lo * 200.0 && e as f64 <= hi * 200.0);
}

#[test]
fn seeded_targets_are_deterministic() {
    assert_eq!(Target::seeded(5, 7, -10), Target::seeded(5, 7, -10));
    assert_ne!(Target::seeded(5, 7, -10).x1, Target::seeded(5, 8, -10).x1);
    assert_eq!(Target::seeded(5, 7, -10).tail(), -10);
}

#[test]
fn scan_row_is_consistent() {
    let k = field(3, "1,0,1");
    let ts = vec![Target::seeded(3, 1, -30)];
    let rows = exponent_scan(&k, &ts, 2..=4, DeltaChoice::Fixed(0), DEFAULT_SCALE_CAP).unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r.lambda_sum, pnt_sum(&k, r.n, DEFAULT_SCALE_CAP).unwrap());
        assert_eq!(r.tilde_t, r.prime_part + r.power_part);
        assert!(r.outside_theorem_range);
    }
}
