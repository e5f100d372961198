use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use fpc_core::arith::{cuberoot_term_cmp, nonneg_for_all_ge, ParamPoly, Rat, Sign};
use fpc_core::certificates::{mutate_once, mutation_sites};
use fpc_core::corpus;
use fpc_core::cremona::{cremona_step, CremonaStep};
use fpc_core::monomials::{case5_factorize, containment_factors, member_of_product, Monomial};
use fpc_core::oracle::{dimension_generic, DEFAULT_PRIME};
use fpc_core::systems::{projective_vdim, FatPointSystem};

fn small_poly() -> impl Strategy<Value = ParamPoly> {
    prop::collection::vec(-50i64..50, 0..4).prop_map(|c| ParamPoly::from_i64s(&c))
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-200i64..200, 1i64..60).prop_map(|(n, d)| Rat::new(n, d))
}

fn system() -> impl Strategy<Value = FatPointSystem> {
    (small_poly(), prop::collection::vec(small_poly(), 4..9)).prop_map(|(d, m)| FatPointSystem::new(d, m, 1))
}

proptest! {
    #[test]
    fn poly_ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn poly_evaluation_is_a_homomorphism(a in small_poly(), b in small_poly(), v in -30i64..30) {
        prop_assert_eq!((&a * &b).eval_i64(v), a.eval_i64(v) * b.eval_i64(v));
        prop_assert_eq!((&a + &b).eval_i64(v), a.eval_i64(v) + b.eval_i64(v));
    }

    #[test]
    fn poly_text_round_trip(a in small_poly(), var in prop::sample::select(vec!['m', 'n', 'r'])) {
        let text = a.display_with(var);
        let (back, _) = ParamPoly::parse(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn rat_field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
    }

    /// A Yes must survive sampling; a No must come with a real witness.
    #[test]
    fn sign_decisions_are_sound(p in small_poly(), m0 in 0i64..6) {
        match nonneg_for_all_ge(&p, m0) {
            Sign::Yes => {
                for v in m0..m0 + 200 {
                    prop_assert!(p.eval_i64(v) >= BigInt::from(0), "{} at {}", p, v);
                }
            }
            Sign::No { witness } => {
                let w: i64 = witness.parse().unwrap();
                prop_assert!(w >= m0);
                prop_assert!(p.eval_i64(w) < BigInt::from(0));
            }
            Sign::Unknown => {}
        }
    }

    /// `a cbrt(x)` against `c` agrees with comparing cubes.
    #[test]
    fn cuberoot_comparison_matches_cubing(an in 0i64..40, ad in 1i64..20, x in 0i64..5000, cn in -10i64..400, cd in 1i64..20) {
        let (a, c) = (Rat::new(an, ad), Rat::new(cn, cd));
        let got = cuberoot_term_cmp(&a, &BigInt::from(x), &c).unwrap();
        // a^3 x vs c^3 after clearing denominators, with c's sign respected
        let lhs = BigInt::from(an).pow(3) * x * BigInt::from(cd).pow(3);
        let rhs = BigInt::from(cn).pow(3) * BigInt::from(ad).pow(3);
        prop_assert_eq!(got, lhs.cmp(&rhs));
    }

    #[test]
    fn system_text_round_trip(s in system()) {
        let back: FatPointSystem = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn cremona_is_an_involution(s in system(), pick in prop::sample::subsequence(vec![1usize, 2, 3, 4], 4)) {
        let step = CremonaStep::new([pick[0], pick[1], pick[2], pick[3]]).unwrap();
        let (once, k) = cremona_step(&s, &step).unwrap();
        let (twice, k2) = cremona_step(&once, &step).unwrap();
        prop_assert_eq!(twice, s);
        prop_assert_eq!(k2, -k);
    }

    #[test]
    fn vdim_is_monotone(t in 0i64..30, mults in prop::collection::vec(0i64..8, 0..8), j in 0usize..8) {
        let v = projective_vdim(t, &mults);
        prop_assert!(projective_vdim(t + 1, &mults) > v);
        if j < mults.len() {
            let mut more = mults.clone();
            more[j] += 1;
            prop_assert!(projective_vdim(t, &more) < v);
        }
    }

    #[test]
    fn drop_is_idempotent(t in -5i64..20, mults in prop::collection::vec(-6i64..8, 0..10)) {
        let s = FatPointSystem::constant(t, &mults);
        let once = s.drop_nonpositive().unwrap();
        prop_assert_eq!(once.drop_nonpositive().unwrap(), once.clone());
        prop_assert!(once.mults.iter().all(|m| m.as_i64().unwrap() > 0));
    }

    #[test]
    fn symbolic_power_monomials_factor(n in 1usize..5, r in 1u32..4, a in prop::collection::vec(0u32..12, 4)) {
        let t: u32 = a.iter().sum();
        let m = 3 * r - 2;
        // only monomials of the symbolic power are claimed to factor
        prop_assume!(a[..n].iter().all(|&e| e + m <= t));
        let x = Monomial(a);
        let factors = containment_factors(n, r, 3);
        prop_assert!(case5_factorize(&x, n, r).is_ok());
        prop_assert!(member_of_product(&x, &factors));
    }

    #[test]
    fn mutations_touch_one_literal(pick in 0usize..10_000, delta in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])) {
        let files = corpus::embedded();
        let f = &files[pick % files.len()];
        let sites = mutation_sites(&f.text);
        let site = &sites[pick % sites.len()];
        if let Some(m) = mutate_once(&f.text, site, delta) {
            prop_assert_ne!(&m, &f.text);
            let changed = f.text.lines().zip(m.lines()).filter(|(a, b)| a != b).count();
            prop_assert_eq!(changed, 1);
            prop_assert_eq!(mutation_sites(&m).len(), sites.len());
        } else {
            prop_assert!(site.value as i64 + delta < 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Multiplying by a general linear form shows dimension never drops with `t`.
    #[test]
    fn oracle_is_monotone_and_deterministic(mults in prop::collection::vec(0i64..4, 1..7), t in 0i64..7, seed in 0u64..1000) {
        let a = dimension_generic(&mults, t, DEFAULT_PRIME, seed).unwrap();
        let b = dimension_generic(&mults, t, DEFAULT_PRIME, seed).unwrap();
        prop_assert_eq!(&a, &b);
        let next = dimension_generic(&mults, t + 1, DEFAULT_PRIME, seed).unwrap();
        prop_assert!(next.dimension >= a.dimension);
        let expected = projective_vdim(t, &mults) + 1;
        prop_assert!(a.dimension as i128 >= expected.max(0));
    }
}

#[test]
fn cubing_reference_orders_equal_values() {
    // 2 cbrt(27) = 6
    let got = cuberoot_term_cmp(&Rat::int(2), &BigInt::from(27), &Rat::int(6)).unwrap();
    assert_eq!(got, Ordering::Equal);
}
