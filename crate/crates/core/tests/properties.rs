use proptest::prelude::*;

use godpuzzle::formula::Literal;
use godpuzzle::knowledge::KnowledgeState;
use godpuzzle::model::{Assignment, Enumeration, GodType, PuzzleSpec};
use godpuzzle::simulator::{self, PatternCoins, RandomMode, WordSemantics};
use godpuzzle::strategy::{self, Rational, StrategyFile, StrategyTree};
use godpuzzle::Formula;

const TYPES: [GodType; 3] = [GodType::Truthful, GodType::Liar, GodType::Random];

fn arb_spec(max_gods: usize) -> impl Strategy<Value = PuzzleSpec> {
    (1..=max_gods)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, m)| (Just(n), Just(m), 0..=n - m))
        .prop_map(|(n, m, k)| PuzzleSpec::new(n, m, k).unwrap())
}

fn arb_formula(gods: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Formula::Const),
        6 => (0..gods, 0..3usize, any::<bool>()).prop_map(|(god, t, negated)| Formula::Lit(Literal {
            god,
            ty: TYPES[t],
            negated
        })),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner, 2..4).prop_map(Formula::Or),
        ]
    })
}

fn spec_and_formula(max_gods: usize) -> impl Strategy<Value = (PuzzleSpec, Formula)> {
    arb_spec(max_gods).prop_flat_map(|s| (Just(s), arb_formula(s.gods())))
}

/// A tree of the given depth with arbitrary questions and leaves.
fn arb_tree(spec: PuzzleSpec, depth: u32) -> BoxedStrategy<StrategyTree> {
    let worlds = spec.enumerate();
    let leaf = (0..worlds.len()).prop_map(move |i| StrategyTree::leaf(worlds[i].clone()));
    if depth == 0 {
        return leaf.boxed();
    }
    let node = (
        0..spec.gods(),
        arb_formula(spec.gods()),
        arb_tree(spec, depth - 1),
        arb_tree(spec, depth - 1),
    )
        .prop_map(|(g, q, y, n)| StrategyTree::node(g, q, y, n));
    prop_oneof![1 => leaf, 3 => node].boxed()
}

fn spec_and_tree() -> impl Strategy<Value = (PuzzleSpec, StrategyTree)> {
    arb_spec(4).prop_flat_map(|s| (Just(s), arb_tree(s, 3)))
}

fn truth_vector(f: &Formula, worlds: &[Assignment]) -> Vec<bool> {
    worlds.iter().map(|a| f.eval(a).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dnf_preserves_truth((spec, f) in spec_and_formula(5)) {
        let worlds = spec.enumerate();
        let dnf = f.to_dnf(spec).unwrap();
        prop_assert_eq!(truth_vector(&dnf, &worlds), truth_vector(&f, &worlds));
        let conjuncts = dnf.dnf_conjuncts().expect("complete-assignment DNF");
        let expected: Vec<Assignment> = worlds.iter().filter(|a| f.eval(a).unwrap()).cloned().collect();
        prop_assert_eq!(conjuncts, expected);
    }

    #[test]
    fn printing_then_parsing_keeps_meaning((spec, f) in spec_and_formula(5)) {
        let worlds = spec.enumerate();
        let printed = f.to_string();
        let parsed = Formula::parse(&printed).unwrap();
        prop_assert_eq!(truth_vector(&parsed, &worlds), truth_vector(&f, &worlds));
        prop_assert_eq!(parsed.to_string(), printed);
    }

    #[test]
    fn update_keeps_random_members_and_filters_the_rest(
        (spec, f) in spec_and_formula(5),
        god_seed in any::<usize>(),
        bit in any::<bool>(),
    ) {
        let god = god_seed % spec.gods();
        let state = KnowledgeState::new(spec);
        let next = state.update_formula(god, &f, bit).unwrap();
        for (i, a) in spec.enumerate().iter().enumerate() {
            let kept = a[god] == GodType::Random || f.eval(a).unwrap() == bit;
            prop_assert_eq!(next.possible().contains(i), kept, "{}", a);
        }
        let other = state.update_formula(god, &f, !bit).unwrap();
        prop_assert_eq!(next.possible().union(other.possible()), state.possible().clone());
    }

    #[test]
    fn updates_never_grow((spec, f) in spec_and_formula(4), (g, h) in (0..4usize, 0..4usize), bits in any::<(bool, bool)>()) {
        let e = std::sync::Arc::new(Enumeration::new(spec));
        let first = KnowledgeState::full(e).update_formula(g % spec.gods(), &f, bits.0).unwrap();
        let second = first.update_formula(h % spec.gods(), &f.clone().negate(), bits.1).unwrap();
        prop_assert!(second.possible().is_subset(first.possible()));
    }

    #[test]
    fn strategy_files_round_trip((spec, tree) in spec_and_tree(), comment in "[a-z0-9]([a-z =0-9]{0,18}[a-z0-9])?") {
        let file = StrategyFile::new(spec, tree).with_comment(comment);
        let text = file.to_string();
        let back = StrategyFile::parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back.spec, spec);
    }

    /// The exhaustive verifier against brute-force simulation over every
    /// world, meaning of `χ` and coin pattern.
    #[test]
    fn verifier_agrees_with_simulation((spec, tree) in spec_and_tree()) {
        let report = strategy::verify(&tree, spec, RandomMode::Escaping).unwrap();
        let worlds = spec.enumerate();
        let depth = tree.depth() as u32;
        let patterns = 1u64 << depth;
        let mut all_correct = true;
        let mut worst = 0;
        let mut total = 0u64;
        for world in &worlds {
            for ws in [WordSemantics::CHI_YES, WordSemantics::CHI_NO] {
                for pattern in 0..patterns {
                    let mut coins = PatternCoins::new(pattern);
                    let ep = simulator::run_episode(spec, world, ws, &tree, &mut coins, RandomMode::Escaping).unwrap();
                    all_correct &= ep.correct();
                    worst = worst.max(ep.questions as u32);
                    if ws == WordSemantics::CHI_YES {
                        total += ep.questions as u64;
                    }
                }
            }
        }
        prop_assert_eq!(report.correct, all_correct);
        prop_assert_eq!(report.worst_case, worst);
        let expected = Rational::new(total as i64, (patterns * worlds.len() as u64) as i64);
        prop_assert_eq!(report.expected, expected);
    }
}
