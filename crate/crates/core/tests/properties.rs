mod common;

use homog_core::backforth::back_and_forth;
use homog_core::deciders::analyze;
use homog_core::generators::{
    build_odd_zchain, build_reduction, check_growth, check_stage_invariants, odd_zchain_f, Kind,
};
use homog_core::oracle::Oracle;
use homog_core::presentations::json::{parse_value, presentation_to_json, structure_to_json, Input};
use homog_core::presentations::linear::normalize_linear;
use homog_core::presentations::{Block, EqCharacter, InjSpectrum, LinOrderPres, Presentation};
use homog_core::structure::Relation;
use homog_core::{ExtCount, Family, Fin, FiniteStructure, Omega};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FAMILIES: [Family; 7] = [
    Family::Order,
    Family::Equivalence,
    Family::Injection,
    Family::Graph,
    Family::TreePo,
    Family::TreePred,
    Family::NestedEq(2),
];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn count(rng: &mut ChaCha8Rng) -> ExtCount {
    if rng.gen_bool(0.3) {
        Omega
    } else {
        Fin(rng.gen_range(1..4))
    }
}

fn random_blocks(rng: &mut ChaCha8Rng) -> LinOrderPres {
    let len = rng.gen_range(0..7);
    let blocks = (0..len)
        .map(|_| match rng.gen_range(0..5) {
            0 => Block::Fin(rng.gen_range(1..4)),
            1 => Block::Omega,
            2 => Block::OmegaStar,
            3 => Block::Zeta,
            _ => Block::Eta,
        })
        .collect();
    LinOrderPres::new(blocks)
}

fn random_presentation(rng: &mut ChaCha8Rng) -> Presentation {
    match rng.gen_range(0..5) {
        0 => Presentation::Linear(random_blocks(rng)),
        1 => {
            let sizes = rng.gen_range(0..4);
            let entries: Vec<(ExtCount, ExtCount)> = (0..sizes).map(|_| (count(rng), count(rng))).collect();
            Presentation::Equivalence(EqCharacter::new(entries))
        }
        2 => {
            let cycles: Vec<(u64, ExtCount)> = (0..rng.gen_range(0..3)).map(|_| (rng.gen_range(1..5), count(rng))).collect();
            let omega = if rng.gen_bool(0.5) { Fin(0) } else { count(rng) };
            Presentation::Injection(InjSpectrum::new(cycles, omega, count(rng)))
        }
        3 => Presentation::TreePo(common::random_tree_pres(rng.gen_range(0..=3), rng)),
        _ => Presentation::TreePred(common::random_tree_pres(rng.gen_range(0..=3), rng)),
    }
}

fn flip_bits(rel: &mut Relation, n: usize, flips: usize, rng: &mut ChaCha8Rng) {
    for _ in 0..flips {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let v = rel.get(a, b);
        rel.set(a, b, !v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn uh_is_invariant_under_relabelling(seed: u64, f in 0..FAMILIES.len(), n in 1usize..=6) {
        let mut r = rng(seed);
        let s = common::random_structure(FAMILIES[f], n, &mut r);
        let (t, _) = common::shuffled(&s, &mut r);
        let o = Oracle::default();
        prop_assert_eq!(o.is_uh(&s).unwrap().holds, o.is_uh(&t).unwrap().holds);
    }

    #[test]
    fn decider_agrees_with_naive_oracle(seed: u64, f in 0..FAMILIES.len(), n in 1usize..=6) {
        let s = common::random_structure(FAMILIES[f], n, &mut rng(seed));
        let d = analyze(&Presentation::of_structure(&s).unwrap()).unwrap().uh;
        if let Some(d) = d.as_bool() {
            prop_assert_eq!(d, common::naive_uh(&s), "{}", structure_to_json(&s));
        }
    }

    #[test]
    fn back_and_forth_matches_shuffled_copies(seed: u64, f in 0..FAMILIES.len(), n in 1usize..=9) {
        let mut r = rng(seed);
        let a = common::random_structure(FAMILIES[f], n, &mut r);
        let (b, _) = common::shuffled(&a, &mut r);
        let sched = back_and_forth(&a, &b).unwrap();
        let total = sched.total.expect("a total map");
        prop_assert!(common::preserves(&a, &b, &total));
        prop_assert!(sched.verified.iter().all(|&v| v));
    }

    #[test]
    fn structures_round_trip_through_json(seed: u64, f in 0..FAMILIES.len(), n in 0usize..=9) {
        let s = common::random_structure(FAMILIES[f], n, &mut rng(seed));
        match parse_value(&structure_to_json(&s)).unwrap() {
            Input::Structure(t) => prop_assert_eq!(t, s),
            other => prop_assert!(false, "parsed as {:?}", other),
        }
    }

    #[test]
    fn presentations_round_trip_through_json(seed: u64) {
        let p = random_presentation(&mut rng(seed));
        prop_assume!(p.validate().is_ok());
        match parse_value(&presentation_to_json(&p)).unwrap() {
            Input::Presentation(q) => prop_assert_eq!(q, p),
            other => prop_assert!(false, "parsed as {:?}", other),
        }
    }

    #[test]
    fn normal_forms_are_fixed_points_with_the_same_verdicts(seed: u64) {
        let p = random_blocks(&mut rng(seed));
        let q = normalize_linear(&p);
        prop_assert_eq!(normalize_linear(&q), q.clone());
        let (a, b) = (analyze(&Presentation::Linear(p)).unwrap(), analyze(&Presentation::Linear(q)).unwrap());
        prop_assert_eq!((a.uh, a.wuh), (b.uh, b.wuh));
    }

    #[test]
    fn canonical_trees_are_fixed_points_with_the_same_verdicts(seed: u64, h in 0usize..=3) {
        let t = common::random_tree_pres(h, &mut rng(seed));
        let c = t.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        for (x, y) in [
            (Presentation::TreePo(t.clone()), Presentation::TreePo(c.clone())),
            (Presentation::TreePred(t), Presentation::TreePred(c)),
        ] {
            let (a, b) = (analyze(&x).unwrap(), analyze(&y).unwrap());
            prop_assert_eq!((a.uh, a.wuh), (b.uh, b.wuh));
        }
    }

    #[test]
    fn reductions_keep_their_stage_invariants(
        seed: u64,
        k in 0..Kind::REDUCTIONS.len(),
        stages in 0u64..=60,
        p in prop::sample::select(vec![0.0, 0.1, 0.5, 0.9]),
    ) {
        let kind = Kind::REDUCTIONS[k];
        let mut r = rng(seed);
        let w = common::random_schedule(stages + 1, p, kind.requires_bounded() || r.gen_bool(0.5), &mut r);
        let a = build_reduction(kind, &w, stages).unwrap();
        let b = build_reduction(kind, &w, stages + 1).unwrap();
        let c = check_stage_invariants(kind, &a, &w).unwrap();
        prop_assert!(c.holds, "{} stage {}: {:?}", kind, stages, c.violations);
        prop_assert_eq!(check_growth(&a, &b), Vec::<String>::new());
    }

    #[test]
    fn odd_chain_is_injective(n in 1usize..400) {
        let mut seen = std::collections::HashSet::new();
        for y in 1..=n as u64 {
            prop_assert!(seen.insert(odd_zchain_f(y)));
        }
        prop_assert!(build_odd_zchain(n).validate().is_ok());
    }

    #[test]
    fn tree_order_validation_matches_the_definition(seed: u64, n in 1usize..=7, flips in 0usize..=2) {
        let mut r = rng(seed);
        let t = FiniteStructure::tree_po(&common::random_parents(n, &mut r)).unwrap();
        let mut rel = Relation::from_fn(n, |a, b| t.rel(0, a, b));
        flip_bits(&mut rel, n, flips, &mut r);
        let want = common::naive_tree_order(n, |a, b| rel.get(a, b));
        let got = FiniteStructure::new(Family::TreePo, n, vec![rel], vec![]).is_ok();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn order_validation_matches_the_definition(seed: u64, n in 1usize..=7, flips in 0usize..=2) {
        let mut r = rng(seed);
        let (t, _) = common::shuffled(&FiniteStructure::chain(n), &mut r);
        let mut rel = Relation::from_fn(n, |a, b| t.rel(0, a, b));
        flip_bits(&mut rel, n, flips, &mut r);
        let linear = common::naive_tree_order(n, |a, b| rel.get(a, b))
            && (0..n).all(|a| (0..n).all(|b| rel.get(a, b) || rel.get(b, a)));
        let got = FiniteStructure::new(Family::Order, n, vec![rel], vec![]).is_ok();
        prop_assert_eq!(got, linear);
    }
}
