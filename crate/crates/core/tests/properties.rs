mod common;

use num_bigint::BigUint;
use proptest::prelude::*;

use homq_core::algorithms::{
    cycle_detector_2query, reconstruct_unary, unary_queries, unbounded_boolean_cycle_detector,
};
use homq_core::analysis::{component_count, core, gamma, is_berge_acyclic, star_transform};
use homq_core::catalog::canonical_mask;
use homq_core::datalog::{builtin_program, evaluate};
use homq_core::format::{decode, encode, encode_compact};
use homq_core::hom::{hom_count, hom_exists, hom_value};
use homq_core::query::{
    flatten_adaptive_boolean, lift_non_adaptive, run_adaptive, run_adaptive_capped, run_non_adaptive,
    FnStrategy, NonAdaptiveAlgorithm, Orientation, StrategyDecision, Transcript, Verdict,
};
use homq_core::structure::{
    direct_product, directed_cycle, directed_path, disjoint_union, n_ary_cycle, Signature, Structure,
};
use homq_core::{isomorphic, Semiring};

use common::*;

fn digraph(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n));
            Structure::digraph(n, edges).unwrap()
        })
    })
}

fn sparse_digraph(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::btree_set((0..n, 0..n), 0..=n + 1)
            .prop_map(move |edges| Structure::digraph(n, edges).unwrap())
    })
}

fn with_permutation(max_n: usize) -> impl Strategy<Value = (Structure, Vec<usize>)> {
    digraph(max_n).prop_flat_map(|s| {
        let n = s.size();
        (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn ternary(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::btree_set(proptest::collection::vec(0..n, 3), 0..=3).prop_map(move |tuples| {
            Structure::new(Signature::single(3).unwrap(), n, vec![tuples.into_iter().collect()]).unwrap()
        })
    })
}

fn unary_pq(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((any::<bool>(), any::<bool>()), n).prop_map(move |flags| {
            let p = (0..n).filter(|&e| flags[e].0).map(|e| vec![e]).collect();
            let q = (0..n).filter(|&e| flags[e].1).map(|e| vec![e]).collect();
            Structure::new(Signature::unary(["P", "Q"]).unwrap(), n, vec![p, q]).unwrap()
        })
    })
}

fn rpq(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::btree_set((0..n, 0..n), 0..=n + 1),
            proptest::collection::vec(any::<(bool, bool)>(), n),
        )
            .prop_map(move |(edges, flags)| {
                let sig: Signature = "R/2, P/1, Q/1".parse().unwrap();
                let r = edges.into_iter().map(|(a, b)| vec![a, b]).collect();
                let p = (0..n).filter(|&e| flags[e].0).map(|e| vec![e]).collect();
                let q = (0..n).filter(|&e| flags[e].1).map(|e| vec![e]).collect();
                Structure::new(sig, n, vec![r, p, q]).unwrap()
            })
    })
}

fn is_connected(s: &Structure) -> bool {
    component_count(s) == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_law(a in digraph(3), b in digraph(3), c in digraph(3)) {
        let u = disjoint_union(&a, &b).unwrap();
        prop_assert_eq!(hom_count(&u, &c).unwrap(), hom_count(&a, &c).unwrap() * hom_count(&b, &c).unwrap());
    }

    #[test]
    fn product_law(a in digraph(3), b in digraph(3), c in digraph(3)) {
        let p = direct_product(&b, &c).unwrap();
        prop_assert_eq!(hom_count(&a, &p).unwrap(), hom_count(&a, &b).unwrap() * hom_count(&a, &c).unwrap());
    }

    #[test]
    fn connected_sources_split_over_unions(a in digraph(3), b in digraph(3), c in digraph(3)) {
        prop_assume!(is_connected(&a));
        let u = disjoint_union(&b, &c).unwrap();
        prop_assert_eq!(hom_count(&a, &u).unwrap(), hom_count(&a, &b).unwrap() + hom_count(&a, &c).unwrap());
    }

    #[test]
    fn counts_match_brute_force(a in sparse_digraph(4), b in digraph(3)) {
        prop_assert_eq!(hom_count(&a, &b).unwrap(), BigUint::from(brute_hom_count(&a, &b)));
    }

    #[test]
    fn boolean_is_projection_of_count(a in digraph(3), b in digraph(3)) {
        let count = hom_count(&a, &b).unwrap();
        prop_assert_eq!(hom_exists(&a, &b).unwrap(), count > BigUint::from(0u32));
        prop_assert_eq!(hom_value(&a, &b, Semiring::Boolean).unwrap(), Semiring::Boolean.project(count));
    }

    #[test]
    fn relabeling_preserves_invariants((s, perm) in with_permutation(5)) {
        let t = s.relabel(&perm);
        prop_assert_eq!(gamma(&s).unwrap(), gamma(&t).unwrap());
        prop_assert_eq!(canonical_mask(&s).unwrap(), canonical_mask(&t).unwrap());
        prop_assert!(isomorphic(&s, &t));
        prop_assert_eq!(component_count(&s), component_count(&t));
    }

    #[test]
    fn gamma_matches_cycle_enumeration(s in sparse_digraph(6)) {
        prop_assert_eq!(gamma(&s).unwrap(), gamma_by_cycles(&s));
    }

    #[test]
    fn isomorphism_matches_brute_force(a in sparse_digraph(4), b in sparse_digraph(4)) {
        prop_assert_eq!(isomorphic(&a, &b), brute_isomorphic(&a, &b));
    }

    #[test]
    fn format_round_trips(s in digraph(4), t in rpq(3)) {
        prop_assert_eq!(decode(&encode(&s)).unwrap(), s.clone());
        prop_assert_eq!(decode(&encode_compact(&s)).unwrap(), s);
        prop_assert_eq!(decode(&encode(&t)).unwrap(), t);
    }

    #[test]
    fn berge_acyclicity_matches_incidence_forest(s in sparse_digraph(5), t in ternary(4)) {
        prop_assert_eq!(is_berge_acyclic(&s), incidence_forest(&s));
        prop_assert_eq!(is_berge_acyclic(&t), incidence_forest(&t));
    }

    #[test]
    fn core_is_hom_equivalent_and_minimal(s in sparse_digraph(5)) {
        let c = core(&s).unwrap();
        prop_assert!(c.size() <= s.size());
        prop_assert!(brute_hom_exists(&s, &c) && brute_hom_exists(&c, &s));
        prop_assert!(isomorphic(&core(&c).unwrap(), &c));
    }

    #[test]
    fn datalog_agrees_with_reference(s in sparse_digraph(5), t in rpq(4)) {
        prop_assert_eq!(evaluate(&builtin_program("directed-cycle").unwrap(), &s).unwrap(), has_directed_cycle(&s));
        prop_assert_eq!(
            evaluate(&builtin_program("nonzero-net-cycle").unwrap(), &s).unwrap(),
            gamma_by_cycles(&s) != 0
        );
        prop_assert_eq!(evaluate(&builtin_program("pq-reachability").unwrap(), &t).unwrap(), pq_connected(&t));
    }

    #[test]
    fn unary_reconstruction_round_trips(s in unary_pq(4)) {
        let sig = s.signature().clone();
        let answers: Vec<BigUint> = unary_queries(&sig).unwrap().iter().map(|q| hom_count(q, &s).unwrap()).collect();
        prop_assert!(isomorphic(&reconstruct_unary(&sig, &answers).unwrap(), &s));
    }

    #[test]
    fn star_decides_maps_to_nary_cycles(a in ternary(4), d in 1usize..=4) {
        let target = n_ary_cycle(d, 3).unwrap();
        let star = star_transform(&a).unwrap();
        prop_assert_eq!(brute_hom_exists(&a, &target), brute_hom_exists(&star, &directed_cycle(d).unwrap()));
    }

    #[test]
    fn components_add_under_union(a in digraph(4), b in digraph(4)) {
        let u = disjoint_union(&a, &b).unwrap();
        prop_assert_eq!(component_count(&u), component_count(&a) + component_count(&b));
        prop_assert_eq!(component_count(&a), weak_components(&a));
    }

    #[test]
    fn union_is_commutative_and_associative(a in digraph(3), b in digraph(3), c in digraph(3)) {
        prop_assert!(isomorphic(&disjoint_union(&a, &b).unwrap(), &disjoint_union(&b, &a).unwrap()));
        let left = disjoint_union(&disjoint_union(&a, &b).unwrap(), &c).unwrap();
        let right = disjoint_union(&a, &disjoint_union(&b, &c).unwrap()).unwrap();
        prop_assert!(isomorphic(&left, &right));
    }

    #[test]
    fn runs_are_isomorphism_invariant((s, perm) in with_permutation(4)) {
        let t = s.relabel(&perm);
        let two = cycle_detector_2query();
        let a = run_adaptive_capped(&two, &s, Orientation::Left, Semiring::Count).unwrap();
        let b = run_adaptive_capped(&two, &t, Orientation::Left, Semiring::Count).unwrap();
        prop_assert_eq!(a.transcript, b.transcript);
        let unbounded = unbounded_boolean_cycle_detector();
        let a = run_adaptive_capped(&unbounded, &s, Orientation::Left, Semiring::Boolean).unwrap();
        let b = run_adaptive_capped(&unbounded, &t, Orientation::Left, Semiring::Boolean).unwrap();
        prop_assert_eq!(a.transcript, b.transcript);
    }

    #[test]
    fn transcripts_replay_their_queries(s in digraph(4)) {
        let detector = unbounded_boolean_cycle_detector();
        let run = run_adaptive_capped(&detector, &s, Orientation::Left, Semiring::Boolean).unwrap();
        let answers = run.transcript.answers();
        for i in 0..run.queries.len() {
            let prefix = Transcript::from_answers(answers[..i].to_vec());
            prop_assert_eq!(
                homq_core::query::Strategy::decide(&detector, &prefix).unwrap(),
                StrategyDecision::Query(run.queries[i].clone())
            );
        }
        prop_assert_eq!(
            homq_core::query::Strategy::decide(&detector, &run.transcript).unwrap(),
            StrategyDecision::Halt(run.verdict)
        );
    }

    #[test]
    fn lifting_preserves_verdicts(s in digraph(4)) {
        let queries = vec![directed_cycle(1).unwrap(), directed_path(3), directed_cycle(3).unwrap()];
        let alg = NonAdaptiveAlgorithm::with_predicate(Orientation::Left, queries, |a| a[0] > a[2]).unwrap();
        let direct = run_non_adaptive(&alg, &s, Semiring::Count).unwrap();
        let lifted = run_adaptive(&lift_non_adaptive(alg), &s, Orientation::Left, Semiring::Count, None).unwrap();
        prop_assert_eq!(direct.verdict, lifted.verdict);
        prop_assert_eq!(direct.transcript, lifted.transcript);
    }

    #[test]
    fn flattening_preserves_boolean_verdicts(s in digraph(4)) {
        let strategy = depth_two();
        let flat = flatten_adaptive_boolean(&strategy, Orientation::Left, 2).unwrap();
        prop_assert!(flat.k() <= 3);
        let adaptive = run_adaptive(&strategy, &s, Orientation::Left, Semiring::Boolean, Some(2)).unwrap();
        let flattened = run_non_adaptive(&flat, &s, Semiring::Boolean).unwrap();
        prop_assert_eq!(adaptive.verdict, flattened.verdict);
    }

    #[test]
    fn boolean_runs_respect_hom_equivalence(s in sparse_digraph(5)) {
        let c = core(&s).unwrap();
        let doubled = disjoint_union(&s, &s).unwrap();
        let detector = unbounded_boolean_cycle_detector();
        let verdict = |x: &Structure| run_adaptive_capped(&detector, x, Orientation::Left, Semiring::Boolean).unwrap().verdict;
        prop_assert_eq!(verdict(&s), verdict(&c));
        prop_assert_eq!(verdict(&s), verdict(&doubled));
    }
}

type DecideFn = Box<dyn Fn(&Transcript) -> homq_core::Result<StrategyDecision> + Send + Sync>;

/// Asks for a loop; without one, asks for a 2-cycle.
fn depth_two() -> FnStrategy<DecideFn> {
    let zero = BigUint::from(0u32);
    FnStrategy(Box::new(move |t: &Transcript| {
        Ok(match t.answers() {
            [] => StrategyDecision::Query(directed_cycle(1).unwrap()),
            [a] if *a != zero => StrategyDecision::Halt(Verdict::Yes),
            [_] => StrategyDecision::Query(directed_cycle(2).unwrap()),
            [_, b] => StrategyDecision::Halt(Verdict::from_bool(*b != zero)),
            _ => unreachable!(),
        })
    }))
}
