use godpuzzle::model::PuzzleSpec;
use godpuzzle::simulator::{PatternCoins, RandomMode, SeededCoins, WordSemantics};
use godpuzzle::strategy::{self, Rational, SimulatedInterrogator};
use godpuzzle::synthesis::{self, SearchConfig, SearchValue};

fn specs(max_gods: usize) -> impl Iterator<Item = PuzzleSpec> {
    (1..=max_gods).flat_map(|n| (0..=n).flat_map(move |m| (0..=n - m).map(move |k| PuzzleSpec::new(n, m, k).unwrap())))
}

fn unpruned() -> SearchConfig {
    SearchConfig {
        prune_inseparable: false,
        ..SearchConfig::default()
    }
}

fn ceil_log2(n: u128) -> u32 {
    (n.max(1) - 1).checked_ilog2().map_or(0, |l| l + 1)
}

#[test]
fn pruned_and_unpruned_solvability_agree() {
    let mut checked = 0;
    for spec in specs(6).filter(|s| s.possibility_count() <= 12) {
        let pruned = synthesis::solvable_by_search(spec, SearchConfig::default()).unwrap();
        let plain = synthesis::solvable_by_search(spec, unpruned()).unwrap();
        assert_eq!(pruned, plain, "{spec}");
        assert_eq!(pruned, spec.meets_solvability_criterion(), "{spec}");
        checked += 1;
    }
    assert!(checked > 30);
}

#[test]
fn optimal_searches_are_consistent() {
    for spec in specs(4).filter(|s| s.meets_solvability_criterion() && s.possibility_count() <= 12) {
        let worst = synthesis::min_worst_case(spec, SearchConfig::default()).unwrap();
        let SearchValue::Depth(d) = worst.value else {
            panic!("{spec}: {:?}", worst.value)
        };
        assert!(d >= ceil_log2(spec.possibility_count()), "{spec}");
        let tree = worst.witness.unwrap();
        let report = strategy::verify(&tree, spec, RandomMode::Escaping).unwrap();
        assert!(report.correct, "{spec}");
        assert_eq!(report.worst_case, d, "{spec}");

        let bounded = |depth| synthesis::exists_within(spec, depth, unpruned()).unwrap().exists;
        assert!(bounded(d), "{spec}");
        if d > 0 {
            assert!(!bounded(d - 1), "{spec}");
        }

        let expected = synthesis::min_expected(spec, SearchConfig::default()).unwrap();
        assert!(expected.optimal);
        let SearchValue::Expected(e) = expected.value else {
            panic!("{spec}: {:?}", expected.value)
        };
        assert!(e <= Rational::from_integer(d as i64), "{spec}");
        let report = strategy::verify(&expected.witness.unwrap(), spec, RandomMode::Escaping).unwrap();
        assert!(report.correct);
        assert_eq!(report.expected, e, "{spec}");
        assert!(report.expected <= strategy::verify(&tree, spec, RandomMode::Escaping).unwrap().expected);
    }
}

#[test]
fn unsolvable_specs_have_no_strategy() {
    for spec in specs(5).filter(|s| !s.meets_solvability_criterion() && s.possibility_count() <= 60) {
        let result = synthesis::min_worst_case(spec, SearchConfig::default()).unwrap();
        if spec.non_random() > 0 {
            assert_eq!(result.value, SearchValue::Unsolvable, "{spec}");
            assert!(result.witness.is_none());
        }
        assert!(strategy::constructive_solve(spec).is_err(), "{spec}");
    }
}

#[test]
fn constructive_solves_six_gods() {
    for spec in specs(6).filter(|s| s.gods() == 6 && s.meets_solvability_criterion()) {
        let tree = strategy::constructive_solve(spec).unwrap();
        let report = strategy::verify(&tree, spec, RandomMode::Escaping).unwrap();
        assert!(report.correct, "{spec}");
    }
}

#[test]
fn lone_truthful_god_is_found_without_questions() {
    let spec = PuzzleSpec::new(1, 0, 1).unwrap();
    let world = &spec.enumerate()[0];
    let mut coins = SeededCoins::new(0);
    let mut oracle = SimulatedInterrogator::new(world, WordSemantics::CHI_YES, &mut coins);
    assert_eq!(strategy::find_non_random(spec, &mut oracle).unwrap(), 0);
}

#[test]
fn found_god_is_never_random() {
    for spec in specs(5).filter(|s| s.meets_solvability_criterion()) {
        for world in spec.enumerate() {
            for pattern in 0..64 {
                let mut coins = PatternCoins::new(pattern);
                let mut oracle = SimulatedInterrogator::new(&world, WordSemantics::CHI_NO, &mut coins);
                let god = strategy::find_non_random(spec, &mut oracle).unwrap();
                assert_ne!(world[god], godpuzzle::GodType::Random, "{spec} {world} {pattern}");
            }
        }
    }
}
