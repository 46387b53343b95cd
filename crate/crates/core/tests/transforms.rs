//! Construction tests: language preservation, step mappings, and exact
//! agreement between the generic oracles and the composition laws.
//!
//! The law checks are the load-bearing part: each product construction
//! claims its acceptance probability is an exact function of its components'
//! probabilities (independent copies). Here the full product distribution is
//! still small enough to forward directly, so the claim is tested against
//! the generic oracle bit for bit; the acceptance suite then leans on the
//! laws at sizes where forwarding the product would be hopeless.

use num_bigint::BigUint;
use paca_core::automaton::{run, Configuration, RandomTape, RunOutcome};
use paca_core::corpus;
use paca_core::dyadic::Dyadic;
use paca_core::langs::{self, words_of_length, EquivalenceResult};
use paca_core::prob::{
    acceptance_prob_dp, classify, classify_probability, Budget, Classification, ErrorMode,
};
use paca_core::ratio::Ratio;
use paca_core::transforms::{
    self, derandomize_one_sided, expand_rules, intersect_paca, laws, paca_from_llin,
    reduce_error_one_sided, reduce_error_two_sided, union_paca, DerandomizeParams,
};

fn d(num: u64, exp: u32) -> Dyadic {
    Dyadic::new(BigUint::from(num), exp)
}

fn r(a: u64, b: u64) -> Ratio {
    Ratio::from_u64s(a, b)
}

fn cfg(word: &str) -> Configuration {
    Configuration::from_symbols(word).unwrap()
}

#[test]
fn one_sided_copy_counts() {
    let base = corpus::ascending_runs();
    // p^m ≤ p_target with p = 1/2 needs two copies for 1/4.
    let report = reduce_error_one_sided(&base, &r(1, 2), &r(1, 4), 4).unwrap();
    assert_eq!(report.parameters["copies"], "2");
    // Equal target: a single copy.
    let report = reduce_error_one_sided(&base, &r(7, 8), &r(7, 8), 4).unwrap();
    assert_eq!(report.parameters["copies"], "1");
    assert_eq!(report.derived_horizon, 5);
    // (7/8)^m ≤ 1/2 needs six copies.
    let report = reduce_error_one_sided(&base, &r(7, 8), &r(1, 2), 4).unwrap();
    assert_eq!(report.parameters["copies"], "6");
    assert_eq!(report.derived_horizon, 30);
}

#[test]
fn one_sided_reduction_matches_the_any_of_copies_law() {
    let budget = Budget::default();
    let base = corpus::ascending_runs();
    let report = reduce_error_one_sided(&base, &r(7, 8), &r(49, 64), 4).unwrap();
    assert_eq!(report.parameters["copies"], "2");
    for word in ["1122", "11222", "011223", "111222", "112233", "0123"] {
        let input = cfg(word);
        let q = acceptance_prob_dp(&base, &input, 4, &budget).unwrap();
        let direct =
            acceptance_prob_dp(&report.output, &input, report.derived_horizon as u32, &budget)
                .unwrap();
        assert_eq!(direct, laws::any_of_copies(&q, 2), "{word}");
    }
}

#[test]
fn one_sided_reduction_preserves_soundness_exactly() {
    let budget = Budget::default();
    let base = corpus::ascending_runs();
    let report = reduce_error_one_sided(&base, &r(7, 8), &r(1, 2), 4).unwrap();
    // Non-members keep probability exactly zero through six copies.
    for word in ["11223", "0101", "33", "011220"] {
        let input = cfg(word);
        assert!(acceptance_prob_dp(&base, &input, 4, &budget).unwrap().is_zero());
        let p = acceptance_prob_dp(&report.output, &input, report.derived_horizon as u32, &budget)
            .unwrap();
        assert!(p.is_zero(), "{word}");
    }
}

#[test]
fn round_robin_accepts_at_interleaved_steps() {
    // Copy j accepting at its step t makes the product accept at m·t + j + 1.
    let base = corpus::starts_with_one();
    let report = reduce_error_one_sided(&base, &r(1, 2), &r(1, 4), 7).unwrap();
    let product = &report.output;
    let m = 2u32;
    // The base accepts "1…" at step 2 + target, target = 2·b0 + b1 + 1 from
    // its first two coins. In the product, copy j draws its coins at the
    // wrapper steps where the counter equals j.
    // Copy 0 advances at wrapper steps 1,3,5,…  (producing its steps 1,2,3,…)
    // Copy 1 advances at wrapper steps 2,4,6,…
    // Row g drives the transition from wrapper step g to g+1; copy 0
    // advances out of steps 1,3,5,… so its base coins live in rows 1 and 3,
    // copy 1's in rows 2 and 4.
    let n = 3;
    let mut rows = vec![vec![0u8; n]; 40];
    // Copy 0 target 1 (coins 0,0): accepts at base step 3, wrapper step
    // 2·3+0+1 = 7. Copy 1 target 4 (coins 1,1): wrapper step 14, later.
    rows[1][0] = 0;
    rows[3][0] = 0;
    rows[2][0] = 1;
    rows[4][0] = 1;
    let outcome = run(product, &cfg("100"), &RandomTape::new(rows.clone()).unwrap()).unwrap();
    assert_eq!(outcome, RunOutcome::Accepted { step: m * 3 + 0 + 1 });
    // Swap the targets: copy 1 lands first, at wrapper step 2·3+1+1 = 8.
    let mut rows = vec![vec![0u8; n]; 40];
    rows[1][0] = 1;
    rows[3][0] = 1;
    rows[2][0] = 0;
    rows[4][0] = 0;
    let outcome = run(product, &cfg("100"), &RandomTape::new(rows).unwrap()).unwrap();
    assert_eq!(outcome, RunOutcome::Accepted { step: m * 3 + 1 + 1 });
}

#[test]
fn two_sided_copy_counts_from_exact_binomial_tails() {
    let base = corpus::at_most_one_one();
    let budget = Budget::default();
    // Majority tails: p = 1/3 to 1/10 needs 15 copies; 1/4 to 1/16 needs 9.
    assert_eq!(transforms::majority_copies(&r(1, 3), &r(1, 10)).unwrap().0, 15);
    assert_eq!(transforms::majority_copies(&r(1, 4), &r(1, 16)).unwrap().0, 9);
    // The 9-copy product is constructible under a large budget (its declared
    // horizon is the full sweep), and refused under the default one.
    let report = reduce_error_two_sided(&base, &r(1, 4), &r(1, 16), 7, &Budget::large());
    assert_eq!(report.unwrap().parameters["copies"], "9");
    assert!(reduce_error_two_sided(&base, &r(1, 4), &r(1, 16), 7, &budget).is_err());
    // Equal bounds: pass-through.
    let report = reduce_error_two_sided(&base, &r(1, 3), &r(1, 3), 7, &budget).unwrap();
    assert_eq!(report.parameters["copies"], "1");
}

#[test]
fn two_sided_reduction_matches_the_binomial_law() {
    let budget = Budget::default();
    let base = corpus::at_most_one_one();
    // p = 1/4 down to 5/32 is exactly the three-copy majority tail.
    let report = reduce_error_two_sided(&base, &r(1, 4), &r(5, 32), 7, &budget).unwrap();
    assert_eq!(report.parameters["copies"], "3");
    for word in ["11", "01"] {
        let input = cfg(word);
        let q = acceptance_prob_dp(&base, &input, 7, &budget).unwrap();
        let direct =
            acceptance_prob_dp(&report.output, &input, report.derived_horizon as u32, &budget)
                .unwrap();
        assert_eq!(direct, laws::threshold_of_copies(&q, 3, 2), "{word}");
    }
}

#[test]
fn intersection_satisfies_the_exact_product_law() {
    let budget = Budget::default();
    let c1 = corpus::starts_with_one();
    let c2 = corpus::at_most_one_one_16();
    let report = intersect_paca(&c1, &Ratio::zero(), 7, &c2, &r(1, 16), 21, &budget).unwrap();
    for word in ["11", "10", "01", "111", "110"] {
        let input = cfg(word);
        let q1 = acceptance_prob_dp(&c1, &input, 7, &budget).unwrap();
        let q2 = acceptance_prob_dp(&c2, &input, 21, &budget).unwrap();
        let direct =
            acceptance_prob_dp(&report.output, &input, report.derived_horizon as u32, &budget)
                .unwrap();
        assert_eq!(direct, laws::and_independent(&q1, &q2), "{word}");
    }
}

#[test]
fn union_matches_the_or_law_and_the_language() {
    let budget = Budget::default();
    let c1 = corpus::th11_ternary();
    let c2 = corpus::th21_ternary();
    let report = union_paca(&c1, &r(1, 4), 7, &c2, &r(1, 4), 7, &budget).unwrap();
    let horizon = report.derived_horizon as u32;
    // Operands are reduced to three-copy majorities before the union.
    let reduced1 = reduce_error_two_sided(&c1, &r(1, 4), &r(5, 32), 7, &budget).unwrap();
    let reduced2 = reduce_error_two_sided(&c2, &r(1, 4), &r(5, 32), 7, &budget).unwrap();
    for word in ["12", "11"] {
        let input = cfg(word);
        let a = acceptance_prob_dp(&reduced1.output, &input, reduced1.derived_horizon as u32, &budget)
            .unwrap();
        let b = acceptance_prob_dp(&reduced2.output, &input, reduced2.derived_horizon as u32, &budget)
            .unwrap();
        let direct = acceptance_prob_dp(&report.output, &input, horizon, &budget).unwrap();
        assert_eq!(direct, laws::or_independent(&a, &b), "{word}");
        // And the law agrees with the binomial form over the raw operands.
        let q1 = acceptance_prob_dp(&c1, &input, 7, &budget).unwrap();
        let q2 = acceptance_prob_dp(&c2, &input, 7, &budget).unwrap();
        assert_eq!(
            direct,
            laws::or_independent(
                &laws::threshold_of_copies(&q1, 3, 2),
                &laws::threshold_of_copies(&q2, 3, 2)
            ),
            "{word}"
        );
    }
    // Classification on wider words goes through the validated laws: the
    // full product distribution outgrows any budget there.
    let mode = ErrorMode::TwoSided(r(1, 3));
    for (word, expect) in [
        ("12", Classification::InLanguage),
        ("102", Classification::InLanguage),
        ("1122", Classification::NotInLanguage),
        ("221100", Classification::NotInLanguage),
        ("100002", Classification::InLanguage),
    ] {
        let input = cfg(word);
        let q1 = acceptance_prob_dp(&c1, &input, 7, &budget).unwrap();
        let q2 = acceptance_prob_dp(&c2, &input, 7, &budget).unwrap();
        let p = laws::or_independent(
            &laws::threshold_of_copies(&q1, 3, 2),
            &laws::threshold_of_copies(&q2, 3, 2),
        );
        let got = classify_probability(&p, &mode).unwrap();
        assert_eq!(got, expect, "{word}");
    }
}

#[test]
fn expansion_preserves_probabilities_exactly() {
    let budget = Budget::default();
    let virtual_base = corpus::at_most_one_one_virtual();
    let report = expand_rules(&virtual_base).unwrap();
    assert_eq!(report.parameters["k"], "2");
    let expanded = &report.output;
    let direct = corpus::at_most_one_one();
    for len in 1..=4 {
        for word in words_of_length(&langs::word("01"), len) {
            let word: String = word.iter().map(|n| n.as_str()).collect();
            let input = cfg(&word);
            let v = acceptance_prob_dp(&virtual_base, &input, 6, &budget).unwrap();
            let e = acceptance_prob_dp(expanded, &input, 12, &budget).unwrap();
            let c = acceptance_prob_dp(&direct, &input, 7, &budget).unwrap();
            assert_eq!(v, e, "{word}");
            assert_eq!(v, c, "{word}");
        }
    }
}

#[test]
fn expansion_with_identical_rules_is_degenerate() {
    let budget = Budget::default();
    // All four rules identical: the identity. Coins cannot matter.
    let base = corpus::all_zeros();
    let virtual_base = paca_core::automaton::VirtualPaca {
        label: "identity4".into(),
        states: base.states.clone(),
        input_alphabet: base.input_alphabet.clone(),
        accepting: base.accepting.clone(),
        rules: vec![base.rule0.clone(); 4],
        horizon: Some(1),
    };
    let report = expand_rules(&virtual_base).unwrap();
    for word in ["00", "01", "10"] {
        let input = cfg(word);
        let v = acceptance_prob_dp(&virtual_base, &input, 3, &budget).unwrap();
        let e = acceptance_prob_dp(&report.output, &input, 6, &budget).unwrap();
        assert_eq!(v, e, "{word}");
        assert!(v.is_zero() || v.is_one());
    }
}

#[test]
fn derandomized_degenerate_automaton_keeps_its_language() {
    let budget = Budget::default();
    let base = corpus::all_zeros();
    let params = DerandomizeParams {
        t_in: 1,
        error: r(1, 2),
        budget_m: None,
        calibration_len: 6,
    };
    let report = derandomize_one_sided(&base, &params, &budget).unwrap();
    assert_eq!(report.parameters["critical_budget"], "0");
    assert!(report.output.deterministic);
    let daca = &report.output;
    let horizon = report.derived_horizon as u32;
    let result = langs::bounded_equivalence(
        |w| {
            let word: String = w.iter().map(|n| n.as_str()).collect();
            Ok::<bool, ()>(word.chars().all(|c| c == '0'))
        },
        |w| {
            let word: String = w.iter().map(|n| n.as_str()).collect();
            let input = cfg(&word);
            let tape = RandomTape::zeros(horizon as usize, input.len());
            Ok(matches!(run(daca, &input, &tape).unwrap(), RunOutcome::Accepted { step } if step < horizon))
        },
        &langs::word("01"),
        8,
    )
    .unwrap();
    assert_eq!(result, EquivalenceResult::Equal);
}

#[test]
fn derandomized_single_critical_cell_automaton_keeps_its_language() {
    let budget = Budget::default();
    let base = corpus::starts_with_one();
    let params = DerandomizeParams {
        t_in: 7,
        error: r(1, 2),
        budget_m: None,
        calibration_len: 6,
    };
    let report = derandomize_one_sided(&base, &params, &budget).unwrap();
    assert_eq!(report.parameters["critical_budget"], "1");
    assert_eq!(report.parameters["radius"], "6");
    let daca = &report.output;
    let horizon = report.derived_horizon as u32;
    let result = langs::bounded_equivalence(
        |w| Ok::<bool, ()>(w[0].as_str() == "1"),
        |w| {
            let word: String = w.iter().map(|n| n.as_str()).collect();
            let input = cfg(&word);
            let tape = RandomTape::zeros(horizon as usize, input.len());
            Ok(matches!(run(daca, &input, &tape).unwrap(), RunOutcome::Accepted { step } if step < horizon))
        },
        &langs::word("01"),
        9,
    )
    .unwrap();
    assert_eq!(result, EquivalenceResult::Equal);
}

#[test]
fn compiled_threshold_spec_has_exact_window_probabilities() {
    let budget = Budget::default();
    let spec = corpus::th11_llin_spec();
    let compiled = paca_from_llin(&spec, &budget).unwrap();
    // Integer weights compile verbatim: probability 2^{−|w|₁} in one shot.
    assert!(compiled.normalized.is_none());
    assert_eq!(compiled.accept_bound, d(1, 1));
    assert_eq!(compiled.reject_bound, Some(d(1, 2)));
    assert_eq!((compiled.copies, compiled.threshold), (4, 2));
    for len in 1..=6 {
        for word in words_of_length(&langs::word("01"), len) {
            let ones = word.iter().filter(|n| n.as_str() == "1").count() as u32;
            let text: String = word.iter().map(|n| n.as_str()).collect();
            let input = cfg(&text);
            let p = acceptance_prob_dp(&compiled.pre, &input, compiled.pre_horizon, &budget)
                .unwrap();
            assert_eq!(p, Dyadic::new(BigUint::from(1u8), ones), "{text}");
        }
    }
}

#[test]
fn amplified_threshold_spec_classifies_like_the_membership_oracle() {
    let budget = Budget::default();
    let spec = corpus::th11_llin_spec();
    let compiled = paca_from_llin(&spec, &budget).unwrap();
    let amplified = &compiled.report.output;
    let horizon = compiled.report.derived_horizon as u32;
    let mode = ErrorMode::TwoSided(r(1, 3));
    for len in 1..=4 {
        for word in words_of_length(&langs::word("01"), len) {
            let text: String = word.iter().map(|n| n.as_str()).collect();
            let input = cfg(&text);
            let want = langs::llin_membership(&spec, &word).unwrap();
            let got = classify(amplified, &input, horizon, &mode, &budget).unwrap();
            assert_eq!(
                got,
                if want {
                    Classification::InLanguage
                } else {
                    Classification::NotInLanguage
                },
                "{text}"
            );
            // The amplified probability equals the binomial law over the
            // one-shot probability.
            let q = acceptance_prob_dp(&compiled.pre, &input, compiled.pre_horizon, &budget)
                .unwrap();
            let p = acceptance_prob_dp(amplified, &input, horizon, &budget).unwrap();
            assert_eq!(p, laws::threshold_of_copies(&q, 4, 2), "{text}");
        }
    }
}

#[test]
fn all_zero_weight_specs_accept_everything_through_the_compiler() {
    let budget = Budget::default();
    let spec = langs::LlinSpec::new(
        langs::word("01"),
        1,
        None,
        None,
        langs::Weights::rational(vec![]),
        Ratio::zero(),
    )
    .unwrap();
    let compiled = paca_from_llin(&spec, &budget).unwrap();
    assert!(compiled.reject_bound.is_none());
    assert_eq!(compiled.copies, 1);
    for word in ["0", "1", "0101", "111"] {
        let input = cfg(word);
        let p = acceptance_prob_dp(&compiled.pre, &input, compiled.pre_horizon, &budget).unwrap();
        assert!(p.is_one(), "{word}");
    }
}

#[test]
fn rescaled_specs_go_through_normalization_and_classify_correctly() {
    let budget = Budget::default();
    // Non-integer weights: 1/2 per occurrence of 1, threshold 1/2 — the same
    // language as the direct threshold spec, but needing the rescale.
    let spec = langs::LlinSpec::new(
        langs::word("01"),
        1,
        None,
        None,
        langs::Weights::rational(vec![(langs::word("1"), r(1, 2))]),
        r(1, 2),
    )
    .unwrap();
    let compiled = paca_from_llin(&spec, &budget).unwrap();
    assert!(compiled.normalized.is_some());
    let mode = ErrorMode::TwoSided(r(1, 3));
    // The amplified automaton is too tall to forward here; classify via the
    // validated binomial law over the one-shot probabilities.
    for len in 1..=5 {
        for word in words_of_length(&langs::word("01"), len) {
            let text: String = word.iter().map(|n| n.as_str()).collect();
            let input = cfg(&text);
            let want = langs::llin_membership(&spec, &word).unwrap();
            let q = acceptance_prob_dp(&compiled.pre, &input, compiled.pre_horizon, &budget)
                .unwrap();
            let p = laws::threshold_of_copies(&q, compiled.copies, compiled.threshold);
            let got = classify_probability(&p, &mode).unwrap();
            assert_eq!(
                got,
                if want {
                    Classification::InLanguage
                } else {
                    Classification::NotInLanguage
                },
                "{text}"
            );
        }
    }
}

#[test]
fn slt_embedding_compiles_to_a_two_copy_amplifier() {
    let budget = Budget::default();
    let allowed = [langs::word("00"), langs::word("01"), langs::word("11")]
        .into_iter()
        .collect();
    let slt = langs::SltSpec::new(langs::word("01"), 2, None, None, allowed).unwrap();
    let spec = langs::slt_to_llin(&slt).unwrap();
    let compiled = paca_from_llin(&spec, &budget).unwrap();
    assert_eq!(compiled.accept_bound, Dyadic::one());
    assert_eq!(compiled.reject_bound, Some(Dyadic::half()));
    assert_eq!((compiled.copies, compiled.threshold), (2, 2));
    let amplified = &compiled.report.output;
    let horizon = compiled.report.derived_horizon as u32;
    let mode = ErrorMode::TwoSided(r(1, 3));
    for len in 1..=5 {
        for word in words_of_length(&langs::word("01"), len) {
            let text: String = word.iter().map(|n| n.as_str()).collect();
            let input = cfg(&text);
            let want = langs::slt_membership(&slt, &word).unwrap();
            let got = classify(amplified, &input, horizon, &mode, &budget).unwrap();
            assert_eq!(
                got,
                if want {
                    Classification::InLanguage
                } else {
                    Classification::NotInLanguage
                },
                "{text}"
            );
        }
    }
}

#[test]
fn transform_outputs_carry_their_horizons() {
    let budget = Budget::default();
    let base = corpus::at_most_one_one();
    let report = reduce_error_two_sided(&base, &r(1, 4), &r(5, 32), 7, &budget).unwrap();
    assert_eq!(report.output.horizon, Some(report.derived_horizon));
    let report = transforms::reduce_error_one_sided(&corpus::ascending_runs(), &r(7, 8), &r(1, 2), 4)
        .unwrap();
    assert_eq!(report.output.horizon, Some(report.derived_horizon));
}

#[test]
fn degenerate_operands_keep_their_language_through_union_and_intersection() {
    let budget = Budget::default();
    let base = corpus::all_zeros();
    let zero = Ratio::zero();
    let union = union_paca(&base, &zero, 1, &base, &zero, 1, &budget).unwrap();
    let inter = intersect_paca(&base, &zero, 1, &base, &zero, 1, &budget).unwrap();
    for (report, label) in [(&union, "union"), (&inter, "intersection")] {
        let horizon = report.derived_horizon as u32;
        for word in ["0", "0000", "01", "10", "111"] {
            let input = cfg(word);
            let p = acceptance_prob_dp(&report.output, &input, horizon, &budget).unwrap();
            let member = word.chars().all(|c| c == '0');
            assert_eq!(!p.is_zero(), member, "{label} on {word}");
            assert!(p.is_zero() || p.is_one(), "{label} on {word}: {p}");
        }
    }
}

#[test]
fn nine_copy_majority_keeps_non_members_below_a_sixteenth() {
    // The nine-copy majority over the countdown acceptor (p = 1/4 to 1/16)
    // is far too tall to forward, but its acceptance probability is the
    // validated binomial tail over the base probability; every non-member up
    // to length 8 stays at or below 1/16.
    let budget = Budget::default();
    let base = corpus::at_most_one_one();
    let bound = Ratio::from_u64s(1, 16);
    for len in 1..=8usize {
        for word in words_of_length(&langs::word("01"), len) {
            let ones = word.iter().filter(|n| n.as_str() == "1").count();
            if ones < 2 {
                continue;
            }
            let text: String = word.iter().map(|n| n.as_str()).collect();
            let q = acceptance_prob_dp(&base, &cfg(&text), 7, &budget).unwrap();
            let amplified = laws::threshold_of_copies(&q, 9, 5);
            assert!(
                bound.cmp_dyadic(&amplified) != std::cmp::Ordering::Less,
                "{text}: {amplified}"
            );
        }
    }
}

#[test]
fn two_sided_reduction_preserves_the_language_through_classification() {
    let budget = Budget::default();
    let base = corpus::at_most_one_one();
    let report = reduce_error_two_sided(&base, &r(1, 4), &r(5, 32), 7, &budget).unwrap();
    assert_eq!(report.parameters["copies"], "3");
    let mode = ErrorMode::TwoSided(r(5, 32));
    for len in 1..=8usize {
        for word in words_of_length(&langs::word("01"), len) {
            let text: String = word.iter().map(|n| n.as_str()).collect();
            let q = acceptance_prob_dp(&base, &cfg(&text), 7, &budget).unwrap();
            let p = laws::threshold_of_copies(&q, 3, 2);
            let got = classify_probability(&p, &mode).unwrap();
            let want = if corpus::at_most_one_member(&text, '1') {
                Classification::InLanguage
            } else {
                Classification::NotInLanguage
            };
            assert_eq!(got, want, "{text}");
        }
    }
}
