mod common;

use common::{conj_oracle, is_transitive, limit_oracle, residuum_oracle, transitive_closure};
use proptest::prelude::*;
use qdomain::approach::{check_approach_axioms, ApproachTable};
use qdomain::domain::{way_below_param, WayBelowMode};
use qdomain::interval::{d_alpha_r, ParamStructure, Point, Shape};
use qdomain::order::FiniteQOrder;
use qdomain::scott::{classify_injectivity, verify_certificate, Certificate, InjectivityVerdict};
use qdomain::{Archetype, TNorm};

const TOL: f64 = 1e-9;

/// Ordinal sums with up to three pieces on quarter or eighth breakpoints.
fn tnorm_strategy() -> impl Strategy<Value = TNorm> {
    prop::collection::vec((0usize..8, 1usize..4, prop::bool::ANY), 0..3).prop_map(|raw| {
        let mut pieces = Vec::new();
        let mut cursor = 0usize;
        for (gap, width, luk) in raw {
            let lo = cursor + gap % 3;
            let hi = (lo + width).min(8);
            if lo >= hi {
                break;
            }
            let kind = if luk { Archetype::Lukasiewicz } else { Archetype::Product };
            pieces.push((lo as f64 / 8.0, hi as f64 / 8.0, kind));
            cursor = hi;
        }
        TNorm::ordinal_sum(&pieces).unwrap()
    })
}

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![(0u32..=64).prop_map(|k| k as f64 / 64.0), 0.0..=1.0f64]
}

fn order_strategy() -> impl Strategy<Value = FiniteQOrder> {
    (tnorm_strategy(), 1usize..=5)
        .prop_flat_map(|(t, n)| (Just(t), prop::collection::vec(0u32..=8, n * n), Just(n)))
        .prop_map(|(t, raw, n)| {
            let m: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { raw[i * n + j] as f64 / 8.0 }).collect())
                .collect();
            let m = transitive_closure(&t, m);
            FiniteQOrder::new(t, (0..n).map(|i| format!("p{i}")).collect(), m).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conj_matches_ordinal_sum_formula(t in tnorm_strategy(), x in unit(), y in unit()) {
        prop_assert!((t.conj(x, y) - conj_oracle(&t, x, y)).abs() <= TOL);
    }

    #[test]
    fn conj_is_a_commutative_monoid(t in tnorm_strategy(), x in unit(), y in unit(), z in unit()) {
        prop_assert_eq!(t.conj(x, y), t.conj(y, x));
        prop_assert!((t.conj(t.conj(x, y), z) - t.conj(x, t.conj(y, z))).abs() <= TOL);
        prop_assert_eq!(t.conj(x, 1.0), x);
        prop_assert!(t.conj(x, y) <= x.min(y) + TOL);
    }

    #[test]
    fn residuum_is_right_adjoint(t in tnorm_strategy(), x in unit(), y in unit(), z in unit()) {
        let r = t.residuum(x, y);
        prop_assert!((r - residuum_oracle(&t, x, y)).abs() <= 1e-9);
        prop_assert!(t.conj(x, r) <= y + TOL);
        prop_assert_eq!(t.conj(x, z) <= y + TOL, z <= r + 1e-7);
    }

    #[test]
    fn idempotents_act_as_min(t in tnorm_strategy(), x in unit(), y in unit()) {
        let lo = x.min(y);
        for p in t.pieces() {
            if lo <= p.lo && p.lo <= x.max(y) {
                prop_assert_eq!(t.conj(x, y), lo);
            }
        }
    }

    #[test]
    fn residuum_limits_match_direct_limits(t in tnorm_strategy(), s in 0u32..64, x in unit()) {
        let s = s as f64 / 64.0;
        let above = t.residuum_limit_first_from_above(s, x);
        prop_assert!((above - limit_oracle(|u| t.residuum(u, x), s, true)).abs() <= 1e-6);
        if s > 0.0 {
            let below = t.residuum_limit_second_from_below(x, s);
            prop_assert!((below - limit_oracle(|u| t.residuum(x, u), s, false)).abs() <= 1e-6);
        }
    }

    #[test]
    fn d_alpha_r_is_a_one_sided_limit(t in tnorm_strategy(), top in 0u32..=32, x in unit()) {
        let top = top as f64 / 32.0;
        let want = if top >= 1.0 { t.residuum(1.0, x) } else { limit_oracle(|u| t.residuum(u, x), top, true) };
        prop_assert!((d_alpha_r(&t, top, x) - want).abs() <= 1e-6);
    }

    #[test]
    fn interval_homs_are_transitive(t in tnorm_strategy(), a in unit(), b in unit(), c in unit()) {
        for shape in [Shape::AlphaL, Shape::AlphaR] {
            let s = ParamStructure::new(t.clone(), shape);
            let h = |u: f64, v: f64| s.hom(&Point::Value(u), &Point::Value(v)).unwrap();
            prop_assert!(t.conj(h(a, b), h(b, c)) <= h(a, c) + TOL);
            prop_assert_eq!(h(a, a), 1.0);
        }
    }

    #[test]
    fn closures_are_valid_orders(x in order_strategy()) {
        prop_assert!(is_transitive(x.tnorm(), &x.table(), TOL));
        let op = x.opposite();
        prop_assert_eq!(op.opposite().table(), x.table());
    }

    #[test]
    fn yoneda_lemma(x in order_strategy(), a in 0usize..5) {
        let a = a % x.len();
        for phi in x.grid_weights(2) {
            let s = x.sub(x.yoneda(a).values(), phi.values()).unwrap();
            prop_assert!((s - phi.get(a)).abs() <= TOL);
        }
    }

    #[test]
    fn gamma_tables_are_approach_spaces(x in order_strategy()) {
        let g = ApproachTable::gamma(&x).unwrap();
        let r = check_approach_axioms(&g);
        prop_assert!(r.valid, "{:?}", r);
        prop_assert_eq!(g.omega().unwrap().table(), x.table());
        for mask in 0..=g.full_mask() {
            let col = g.column(mask);
            prop_assert_eq!(g.closure(&col).unwrap(), col);
        }
    }

    #[test]
    fn certificates_replay_after_serialization(t in tnorm_strategy()) {
        let v = classify_injectivity(&t, 24, TOL).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        let back: InjectivityVerdict = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &v);
        let check = verify_certificate(&back, TOL).unwrap();
        prop_assert!(check.valid, "{}", check.detail);
        let mut forged = back.clone();
        let tampered = match &mut forged.certificate {
            Certificate::NonExtendable { sup_bound, .. } => { *sup_bound += 0.5; true }
            Certificate::NonContinuous { infimum, .. } => { *infimum += 0.5; true }
            Certificate::Isomorphism { max_error, .. } => { *max_error = 0.5; true }
            Certificate::Unclassified { .. } => false,
        };
        if tampered {
            prop_assert!(!verify_certificate(&forged, TOL).unwrap().valid);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parametric_way_below_laws(t in tnorm_strategy()) {
        let s = ParamStructure::new(t, Shape::AlphaR);
        let (x, w) = way_below_param(&s, 16).unwrap();
        prop_assert_eq!(w.mode(), WayBelowMode::Parametric);
        for a in 0..x.len() {
            for b in 0..x.len() {
                prop_assert!(w.get(a, b) <= x.hom(a, b) + TOL);
            }
        }
    }
}
