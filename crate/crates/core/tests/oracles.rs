//! Cross-checks of the two acceptance-probability oracles and replay of the
//! recorded fixture values.
//!
//! A third, deliberately naive oracle lives here in the test: it literally
//! loops over every tape of a given shape and runs the automaton. It is slow
//! and only usable at tiny sizes, which is exactly its job — an independent
//! route to the same numbers.

use num_bigint::BigUint;
use paca_core::automaton::{run, Automaton, Configuration, RandomTape, RunOutcome};
use paca_core::corpus;
use paca_core::dyadic::Dyadic;
use paca_core::prob::{acceptance_prob_dp, acceptance_prob_enum, Budget};

/// Literal tape loop: every coin matrix with `horizon − 1` rows.
fn naive_prob(aut: &impl Automaton, input: &Configuration, horizon: u32) -> Dyadic {
    let n = input.len();
    let rules = aut.rule_count() as u64;
    if horizon == 0 {
        return Dyadic::zero();
    }
    let rows = (horizon - 1) as usize;
    let digits = rows * n;
    let total: u64 = rules.pow(digits as u32);
    let mut accepted: u64 = 0;
    for tape_idx in 0..total {
        let mut rest = tape_idx;
        let mut rows_vec = Vec::with_capacity(rows.max(1));
        for _ in 0..rows {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                row.push((rest % rules) as u8);
                rest /= rules;
            }
            rows_vec.push(row);
        }
        if rows_vec.is_empty() {
            rows_vec.push(vec![0; n]);
        }
        let tape = RandomTape::new(rows_vec).unwrap();
        let outcome = run(aut, input, &tape).unwrap();
        let hit = match outcome {
            RunOutcome::Accepted { step } => step < horizon,
            RunOutcome::RejectedWithinHorizon => false,
        };
        if hit {
            accepted += 1;
        }
    }
    let bits = (digits as u32) * (rules as u32).trailing_zeros();
    Dyadic::from_count(BigUint::from(accepted), bits)
}

fn words(alphabet: &str, len: usize) -> Vec<String> {
    let syms: Vec<char> = alphabet.chars().collect();
    let mut out = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for c in &syms {
                let mut w2 = w.clone();
                w2.push(*c);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

#[test]
fn recorded_fixture_probabilities_replay_exactly() {
    let budget = Budget::default();
    for name in corpus::fixture_names() {
        let fixture = corpus::fixture(name).unwrap();
        let aut = match fixture.artifact.automaton() {
            Some(aut) => aut,
            None => continue,
        };
        for exp in &fixture.expected {
            let input = Configuration::from_symbols(&exp.input).unwrap();
            if let corpus::Expected::Probability(want) = &exp.value {
                let got = acceptance_prob_dp(aut, &input, exp.horizon, &budget).unwrap();
                assert_eq!(got, *want, "{name} on {}", exp.input);
            }
        }
    }
}

#[test]
fn oracles_agree_with_the_naive_tape_loop_at_tiny_sizes() {
    let budget = Budget::default();
    let cases = [
        ("at_most_one_one", "11", 5u32),
        ("at_most_one_one", "101", 4),
        ("starts_with_one", "11", 5),
        ("ascending_runs", "1122", 4),
        ("ascending_runs", "0112", 4),
        ("all_zeros", "010", 3),
    ];
    for (name, word, horizon) in cases {
        let fixture = corpus::fixture(name).unwrap();
        let aut = fixture.artifact.automaton().unwrap();
        let input = Configuration::from_symbols(word).unwrap();
        let naive = naive_prob(aut, &input, horizon);
        let enumerated = acceptance_prob_enum(aut, &input, horizon, &budget).unwrap();
        let forwarded = acceptance_prob_dp(aut, &input, horizon, &budget).unwrap();
        assert_eq!(naive, enumerated, "{name} on {word}");
        assert_eq!(naive, forwarded, "{name} on {word}");
    }
}

#[test]
fn enum_and_dp_agree_on_short_words_and_small_horizons() {
    let budget = Budget::default();
    for name in ["at_most_one_one", "starts_with_one", "all_zeros"] {
        let fixture = corpus::fixture(name).unwrap();
        let aut = fixture.artifact.automaton().unwrap();
        for len in 1..=4 {
            for word in words("01", len) {
                for horizon in 1..=4 {
                    let input = Configuration::from_symbols(&word).unwrap();
                    let a = acceptance_prob_enum(aut, &input, horizon, &budget).unwrap();
                    let b = acceptance_prob_dp(aut, &input, horizon, &budget).unwrap();
                    assert_eq!(a, b, "{name} on {word} within {horizon}");
                }
            }
        }
    }
}

#[test]
fn countdown_probabilities_follow_the_collision_law() {
    // j countdown cells with 4 targets each agree with probability 4^(1−j).
    let budget = Budget::default();
    let fixture = corpus::fixture("at_most_one_one").unwrap();
    let aut = fixture.artifact.automaton().unwrap();
    for (word, num, exp) in [("0101", 1u64, 2u32), ("111", 1, 4), ("01", 1, 0), ("1111", 1, 6)] {
        let input = Configuration::from_symbols(word).unwrap();
        let got = acceptance_prob_dp(aut, &input, 7, &budget).unwrap();
        assert_eq!(got, Dyadic::new(BigUint::from(num), exp), "{word}");
    }
}

#[test]
fn probability_is_monotone_in_the_horizon() {
    let budget = Budget::default();
    let fixture = corpus::fixture("at_most_one_one").unwrap();
    let aut = fixture.artifact.automaton().unwrap();
    for word in ["010", "110", "111"] {
        let input = Configuration::from_symbols(word).unwrap();
        let mut last = Dyadic::zero();
        for horizon in 0..=8 {
            let p = acceptance_prob_dp(aut, &input, horizon, &budget).unwrap();
            assert!(p >= last, "{word} at horizon {horizon}");
            last = p;
        }
    }
}

#[test]
fn denominators_stay_within_the_coin_budget() {
    let budget = Budget::default();
    let fixture = corpus::fixture("ascending_runs").unwrap();
    let aut = fixture.artifact.automaton().unwrap();
    for word in ["11223", "011223", "111222"] {
        let input = Configuration::from_symbols(word).unwrap();
        let horizon = 4;
        let p = acceptance_prob_dp(aut, &input, horizon, &budget).unwrap();
        assert!(p.exponent() <= horizon * input.len() as u32, "{word}");
    }
}

#[test]
fn enumeration_budget_is_enforced() {
    let fixture = corpus::fixture("at_most_one_one").unwrap();
    let aut = fixture.artifact.automaton().unwrap();
    let input = Configuration::from_symbols("01010101").unwrap();
    let tight = Budget {
        enum_bits: 10,
        ..Budget::default()
    };
    assert!(acceptance_prob_enum(aut, &input, 7, &tight).is_err());
}
