//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured runtime (visible under `--nocapture`).
//!
//! Every tolerance here is exact: probabilities are compared as dyadic
//! rationals, never approximately. Where a product construction's full
//! distribution is too large to forward directly, the suite uses the
//! composition laws of `transforms::laws` — each validated against the
//! generic oracles on direct-forwardable instances inside the same criterion
//! (and in the transforms test suite) before being trusted at scale.

use std::time::Instant;

use num_bigint::BigUint;
use paca_core::automaton::{run, Configuration, Paca, RandomTape, RunOutcome, StateVal};
use paca_core::corpus;
use paca_core::dyadic::Dyadic;
use paca_core::langs::{
    self, bounded_equivalence, eval_expr, gap_holds, llin_membership, normalize_llin,
    slt_membership, slt_to_llin, words_of_length, EquivalenceResult, LlinScanner, LlinSpec,
    SltSpec, Weights,
};
use paca_core::name::Name;
use paca_core::prob::{
    acceptance_prob_dp, acceptance_prob_enum, acceptance_step_profile, classify_probability,
    critical_cells, independence_check, Budget, Classification, DpSweeper, ErrorMode,
    IndependenceOutcome, PositivitySweeper,
};
use paca_core::ratio::Ratio;
use paca_core::transforms::{
    derandomize_one_sided, intersect_paca, laws, paca_from_llin, reduce_error_one_sided,
    union_paca, DerandomizeParams,
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

fn pass(criterion: &str, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("[PASS] {criterion} — {elapsed:.2}s (budget {budget_secs}s)");
    assert!(
        elapsed < budget_secs,
        "{criterion}: took {elapsed:.2}s, budget {budget_secs}s"
    );
}

/// Calls `visit` on every word of length `1..=max_len` over the alphabet.
fn for_all_words(alphabet: &[char], max_len: usize, mut visit: impl FnMut(&str)) {
    let mut buf = String::with_capacity(max_len);
    fn rec(
        alphabet: &[char],
        buf: &mut String,
        remaining: usize,
        visit: &mut impl FnMut(&str),
    ) {
        if !buf.is_empty() {
            visit(buf);
        }
        if remaining == 0 {
            return;
        }
        for &c in alphabet {
            buf.push(c);
            rec(alphabet, buf, remaining - 1, visit);
            buf.pop();
        }
    }
    rec(alphabet, &mut buf, max_len, &mut visit);
}

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

#[test]
fn criterion_01_four_letter_fixture_exact_probabilities() {
    let started = Instant::now();
    let aut = corpus::ascending_runs();
    // The 3/16 value comes from the tape-enumeration oracle first; the wide
    // word needs a raised tape budget (48 coin bits).
    let enum_budget = Budget {
        enum_bits: 48,
        ..Budget::default()
    };
    let enumerated =
        acceptance_prob_enum(&aut, &cfg("0000011122233333"), 4, &enum_budget).unwrap();
    assert_eq!(enumerated, d(3, 4));
    let budget = Budget::default();
    let cases = [
        ("00000112233333", d(0, 0)),
        ("000001112233333", d(1, 3)),
        ("000001122233333", d(1, 3)),
        ("0000011122233333", d(3, 4)),
    ];
    for (word, want) in cases {
        let got = acceptance_prob_dp(&aut, &cfg(word), 4, &budget).unwrap();
        assert_eq!(got, want, "{word}");
    }
    pass(
        "criterion 01: four-letter fixture probabilities 0, 1/8, 1/8, 3/16 (enumeration first)",
        started,
        5.0,
    );
}

#[test]
fn criterion_02_oracle_agreement_on_all_fixtures() {
    let started = Instant::now();
    let budget = Budget::default();
    let mut pairs = 0u64;
    for name in corpus::fixture_names() {
        let fixture = corpus::fixture(name).unwrap();
        let Some(aut) = fixture.artifact.automaton() else { continue };
        let alphabet: Vec<char> = aut
            .input_alphabet
            .iter()
            .map(|s| match s {
                StateVal::Sym(n) => n.as_str().chars().next().unwrap(),
                _ => unreachable!(),
            })
            .collect();
        for_all_words(&alphabet, 5, |word| {
            let input = cfg(word);
            for horizon in 1..=4u32 {
                let a = acceptance_prob_enum(aut, &input, horizon, &budget).unwrap();
                let b = acceptance_prob_dp(aut, &input, horizon, &budget).unwrap();
                assert_eq!(a, b, "{name} on {word} within {horizon}");
                pairs += 1;
            }
        });
    }
    assert!(pairs > 9_000, "swept {pairs} oracle pairs");
    pass(
        "criterion 02: tape enumeration and distribution forwarding agree exactly",
        started,
        60.0,
    );
}

#[test]
fn criterion_03_countdown_fixture_error_bounds() {
    let started = Instant::now();
    let budget = Budget::default();
    let aut = corpus::at_most_one_one();
    let quarter = d(1, 2);
    for_all_words(&['0', '1'], 8, |word| {
        let ones = word.chars().filter(|c| *c == '1').count() as u32;
        let p = acceptance_prob_dp(&aut, &cfg(word), 7, &Budget::default()).unwrap();
        if ones <= 1 {
            assert!(p.is_one(), "{word}: {p}");
        } else {
            assert_eq!(p, Dyadic::new(BigUint::from(1u8), 2 * (ones - 1)), "{word}");
            assert!(p <= quarter, "{word}: {p}");
        }
    });
    let _ = budget;
    pass(
        "criterion 03: probability 1 below two 1s, exactly 4^(1-j) ≤ 1/4 at j ≥ 2",
        started,
        60.0,
    );
}

#[test]
fn criterion_04_one_sided_reduction_language_and_step_mapping() {
    let started = Instant::now();
    let budget = Budget::default();
    let base = corpus::ascending_runs();
    let report = reduce_error_one_sided(&base, &r(7, 8), &r(1, 2), 4).unwrap();
    assert_eq!(report.parameters["copies"], "6");
    let product = &report.output;
    let horizon = report.derived_horizon as u32;
    let half = Ratio::from_u64s(1, 2);
    let eighth = Ratio::from_u64s(1, 8);

    // The or-law over six copies is validated against the fully forwarded
    // product wherever that is tractable.
    for word in ["1122", "11222", "111223"] {
        let q = acceptance_prob_dp(&base, &cfg(word), 4, &budget).unwrap();
        let direct = acceptance_prob_dp(product, &cfg(word), horizon, &budget).unwrap();
        assert_eq!(direct, laws::any_of_copies(&q, 6), "{word}");
    }
    for word in ["11223", "012", "2211"] {
        let direct = acceptance_prob_dp(product, &cfg(word), horizon, &budget).unwrap();
        assert!(direct.is_zero(), "{word}");
    }

    // Exhaustive sweep over every word of length ≤ 12: members must be
    // accepted with probability above 1/2 through six copies, non-members
    // with exactly zero. Membership is decided by the exact positivity
    // oracle; exact probabilities are recomputed for every member and for a
    // sampled slice of the zeros.
    let mut screen = PositivitySweeper::new(&base, 4);
    let mut exact = DpSweeper::new(&base);
    let mut members = 0u64;
    let mut scanned = 0u64;
    for_all_words(&['0', '1', '2', '3'], 12, |word| {
        scanned += 1;
        let input = cfg(word);
        let positive = screen
            .accepts_with_positive_probability(&input, &budget)
            .unwrap();
        assert_eq!(
            positive,
            corpus::ascending_runs_member(word),
            "membership mismatch on {word}"
        );
        if positive {
            members += 1;
            let q = exact.probability(&input, 4, &budget).unwrap();
            // One-sided validity of the base: members at or above 1 − 7/8.
            assert!(eighth.cmp_dyadic(&q) != std::cmp::Ordering::Greater, "{word}: {q}");
            let amplified = laws::any_of_copies(&q, 6);
            assert!(
                half.cmp_dyadic(&amplified) == std::cmp::Ordering::Less,
                "{word}: {amplified}"
            );
        } else if scanned % 100_000 == 0 {
            let q = exact.probability(&input, 4, &budget).unwrap();
            assert!(q.is_zero(), "{word}");
        }
    });
    assert!(members > 400, "{members} members seen");

    // Step mapping: a tape that lets only copy i accept (at base step 3)
    // makes the product accept first at step 6·3 + i + 1.
    let word = "000001112233333";
    let input = cfg(word);
    // Exposed coins live at cells 6 (right of the leftmost 1), 7 (left of
    // the leftmost 2), and 9 (right of the leftmost 2 = left of the leftmost
    // 3); the accepting pattern is coin(6)=1, coin(7)=0, coin(9)=1. Copy i's
    // base transition 1→2 consumes wrapper row 6·1 + i + 1.
    for i in 0..6u32 {
        let mut rows = vec![vec![0u8; input.len()]; horizon as usize];
        let row = (6 + i + 1) as usize;
        rows[row][6] = 1;
        rows[row][7] = 0;
        rows[row][9] = 1;
        let outcome = run(product, &input, &RandomTape::new(rows).unwrap()).unwrap();
        assert_eq!(
            outcome,
            RunOutcome::Accepted { step: 6 * 3 + i + 1 },
            "copy {i}"
        );
    }
    pass(
        "criterion 04: six-copy reduction keeps members above 1/2, zeros exact, steps m·t+i+1",
        started,
        120.0,
    );
}

#[test]
fn criterion_05_union_and_intersection_products() {
    let started = Instant::now();
    let budget = Budget::default();

    // Union of the two ternary threshold acceptors, classified at error 1/3
    // against the language oracle on every ternary word up to length 6.
    let c1 = corpus::th11_ternary();
    let c2 = corpus::th21_ternary();
    let union = union_paca(&c1, &r(1, 4), 7, &c2, &r(1, 4), 7, &budget).unwrap();
    let union_horizon = union.derived_horizon as u32;
    // Validate the composition law against the fully forwarded union where
    // that is tractable.
    for word in ["12", "11"] {
        let q1 = acceptance_prob_dp(&c1, &cfg(word), 7, &budget).unwrap();
        let q2 = acceptance_prob_dp(&c2, &cfg(word), 7, &budget).unwrap();
        let predicted = laws::or_independent(
            &laws::threshold_of_copies(&q1, 3, 2),
            &laws::threshold_of_copies(&q2, 3, 2),
        );
        let direct = acceptance_prob_dp(&union.output, &cfg(word), union_horizon, &budget).unwrap();
        assert_eq!(direct, predicted, "{word}");
    }
    let lang = corpus::th_union_expr();
    let mode = ErrorMode::TwoSided(r(1, 3));
    let mut sweep1 = DpSweeper::new(&c1);
    let mut sweep2 = DpSweeper::new(&c2);
    for_all_words(&['0', '1', '2'], 6, |word| {
        let input = cfg(word);
        let q1 = sweep1.probability(&input, 7, &budget).unwrap();
        let q2 = sweep2.probability(&input, 7, &budget).unwrap();
        let p = laws::or_independent(
            &laws::threshold_of_copies(&q1, 3, 2),
            &laws::threshold_of_copies(&q2, 3, 2),
        );
        let got = classify_probability(&p, &mode).unwrap();
        let want = eval_expr(&lang, &langs::word(word)).unwrap();
        assert_eq!(
            got,
            if want {
                Classification::InLanguage
            } else {
                Classification::NotInLanguage
            },
            "{word}"
        );
    });

    // Intersection product: exact product law, directly forwarded on every
    // binary word up to length 6. The operands keep their live randomness
    // constant (one countdown cell; two border gadgets), so the full product
    // distribution stays small at every length.
    let a = corpus::starts_with_one();
    let b = corpus::bordered_ones_16();
    let inter = intersect_paca(&a, &Ratio::zero(), 7, &b, &r(1, 16), 21, &budget).unwrap();
    let inter_horizon = inter.derived_horizon as u32;
    let mut direct_checked = 0u64;
    let mut sweep_a = DpSweeper::new(&a);
    let mut sweep_b = DpSweeper::new(&b);
    for_all_words(&['0', '1'], 6, |word| {
        let input = cfg(word);
        let qa = sweep_a.probability(&input, 7, &budget).unwrap();
        let qb = sweep_b.probability(&input, 21, &budget).unwrap();
        let predicted = laws::and_independent(&qa, &qb);
        let direct = acceptance_prob_dp(&inter.output, &input, inter_horizon, &budget).unwrap();
        assert_eq!(direct, predicted, "{word}");
        direct_checked += 1;
    });
    assert_eq!(direct_checked, 126);
    // One richer pair: both operands genuinely random.
    let c = corpus::at_most_one_one_16();
    let inter2 = intersect_paca(&c, &r(1, 16), 21, &b, &r(1, 16), 21, &budget).unwrap();
    let word = cfg("11");
    let qc = acceptance_prob_dp(&c, &word, 21, &budget).unwrap();
    let qb = acceptance_prob_dp(&b, &word, 21, &budget).unwrap();
    let direct =
        acceptance_prob_dp(&inter2.output, &word, inter2.derived_horizon as u32, &budget).unwrap();
    assert_eq!(direct, laws::and_independent(&qc, &qb));
    assert_eq!(direct, &d(1, 4) * &d(15, 4));
    pass(
        "criterion 05: union classifies like the language oracle; intersection obeys the exact product law",
        started,
        300.0,
    );
}

#[test]
fn criterion_06_derandomization_equals_the_inputs_languages() {
    let started = Instant::now();
    let budget = Budget::default();

    struct Case {
        fixture: Paca,
        t_in: u32,
        error: Ratio,
        alphabet: Vec<char>,
        max_len: usize,
    }
    let cases = [
        Case {
            fixture: corpus::all_zeros(),
            t_in: 1,
            error: r(1, 2),
            alphabet: vec!['0', '1'],
            max_len: 10,
        },
        Case {
            fixture: corpus::starts_with_one(),
            t_in: 7,
            error: r(1, 2),
            alphabet: vec!['0', '1'],
            max_len: 10,
        },
        Case {
            fixture: corpus::ascending_runs(),
            t_in: 4,
            error: r(7, 8),
            alphabet: vec!['0', '1', '2', '3'],
            max_len: 10,
        },
    ];
    for case in cases {
        let report = derandomize_one_sided(
            &case.fixture,
            &DerandomizeParams {
                t_in: case.t_in,
                error: case.error.clone(),
                budget_m: None,
                calibration_len: 10,
            },
            &budget,
        )
        .unwrap();
        assert!(report.output.deterministic);
        let daca = report.output;
        let horizon = report.derived_horizon as u32;
        let mut screen = PositivitySweeper::new(&case.fixture, case.t_in);
        let mut exact = DpSweeper::new(&case.fixture);
        let mode = ErrorMode::OneSided(case.error.clone());
        let mut scanned = 0u64;
        for_all_words(&case.alphabet, case.max_len, |word| {
            scanned += 1;
            let input = cfg(word);
            // Membership of the input acceptor: positive probability. For a
            // sampled slice (and every short word) the full classification
            // contract is re-checked with the exact oracle.
            let member = screen
                .accepts_with_positive_probability(&input, &budget)
                .unwrap();
            if word.len() <= 5 || scanned % 10_000 == 0 {
                let p = exact.probability(&input, case.t_in, &budget).unwrap();
                let want = if member {
                    Classification::InLanguage
                } else {
                    Classification::NotInLanguage
                };
                assert_eq!(
                    classify_probability(&p, &mode).unwrap(),
                    want,
                    "{} on {word}",
                    case.fixture.label
                );
            }
            let tape = RandomTape::zeros(horizon as usize, input.len());
            let accepted = matches!(
                run(&daca, &input, &tape).unwrap(),
                RunOutcome::Accepted { step } if step < horizon
            );
            assert_eq!(accepted, member, "{} on {word}", case.fixture.label);
        });
    }
    pass(
        "criterion 06: derandomized acceptors match their inputs on every word up to length 10",
        started,
        600.0,
    );
}

#[test]
fn criterion_07_window_spec_compiler() {
    let started = Instant::now();
    let budget = Budget::default();
    let spec = corpus::th11_llin_spec();
    let compiled = paca_from_llin(&spec, &budget).unwrap();
    assert_eq!((compiled.copies, compiled.threshold), (4, 2));

    // One-shot probabilities are exactly 2^{−|w|₁} on every word ≤ 8.
    let mut pre = DpSweeper::new(&compiled.pre);
    for_all_words(&['0', '1'], 8, |word| {
        let ones = word.chars().filter(|c| *c == '1').count() as u32;
        let p = pre
            .probability(&cfg(word), compiled.pre_horizon, &budget)
            .unwrap();
        assert_eq!(p, Dyadic::new(BigUint::from(1u8), ones), "{word}");
    });

    // The amplified automaton classifies at two-sided error 1/3 exactly like
    // the membership oracle: directly forwarded up to length 3, through the
    // validated binomial law up to length 8.
    let amplified = &compiled.report.output;
    let horizon = compiled.report.derived_horizon as u32;
    let mode = ErrorMode::TwoSided(r(1, 3));
    let mut pre_sweep = DpSweeper::new(&compiled.pre);
    for_all_words(&['0', '1'], 8, |word| {
        let input = cfg(word);
        let q = pre_sweep
            .probability(&input, compiled.pre_horizon, &budget)
            .unwrap();
        let p = laws::threshold_of_copies(&q, compiled.copies, compiled.threshold);
        if word.len() <= 3 {
            let direct = acceptance_prob_dp(amplified, &input, horizon, &budget).unwrap();
            assert_eq!(direct, p, "{word}");
        }
        let got = classify_probability(&p, &mode).unwrap();
        let want = llin_membership(&spec, &langs::word(word)).unwrap();
        assert_eq!(
            got,
            if want {
                Classification::InLanguage
            } else {
                Classification::NotInLanguage
            },
            "{word}"
        );
    });
    pass(
        "criterion 07: compiled spec hits 2^(−ones) exactly and classifies like the membership oracle",
        started,
        300.0,
    );
}

#[test]
fn criterion_08_independence_of_far_cells() {
    let started = Instant::now();
    let budget = Budget::default();
    let mut rng = Rng(2024);
    let mut far_pairs = 0u64;
    for _ in 0..50 {
        let states = if rng.below(2) == 0 { "ab" } else { "abc" };
        let accepting = 1 + rng.below(2);
        let aut = random_table_paca(&mut rng, states, accepting);
        let n = 5 + rng.below(4);
        let horizon = 1 + rng.below(3) as u32; // T ≤ 3
        let t = horizon - 1;
        let chars: Vec<char> = states.chars().collect();
        let word: String = (0..n).map(|_| chars[rng.below(chars.len())]).collect();
        let input = cfg(&word);
        for i in 0..n {
            for j in (i + 1)..n {
                if (j - i) as u32 <= 2 * (horizon.max(1) - 1) {
                    continue;
                }
                let outcome = independence_check(&aut, &input, i, j, t, &budget).unwrap();
                assert!(
                    matches!(outcome, IndependenceOutcome::Independent { .. }),
                    "cells {i},{j} of {word} at step {t}"
                );
                far_pairs += 1;
            }
        }
    }
    assert!(far_pairs > 200, "{far_pairs} far pairs");
    // The recorded dependent case: both runs of length two share exposed
    // coins between adjacent condition cells.
    let aut = corpus::ascending_runs();
    let outcome = independence_check(&aut, &cfg("00000112233333"), 5, 7, 3, &budget).unwrap();
    assert!(matches!(outcome, IndependenceOutcome::Dependent { .. }));
    pass(
        "criterion 08: far cells multiply exactly; the shared-coin case is dependent",
        started,
        120.0,
    );
}

fn random_table_paca(rng: &mut Rng, symbols: &str, accepting_count: usize) -> Paca {
    use paca_core::automaton::{Accepting, LocalRule, StateSet};
    let vals: Vec<StateVal> = symbols
        .chars()
        .map(|c| StateVal::Sym(Name::from_char(c)))
        .collect();
    let bnd = StateVal::Sym(Name::from_char('$'));
    let mut domain = vals.clone();
    domain.push(bnd.clone());
    let mut table0 = std::collections::BTreeMap::new();
    let mut table1 = std::collections::BTreeMap::new();
    for l in &domain {
        for c in &vals {
            for r in &domain {
                let key = (l.clone(), c.clone(), r.clone());
                table0.insert(key.clone(), vals[rng.below(vals.len())].clone());
                table1.insert(key, vals[rng.below(vals.len())].clone());
            }
        }
    }
    let mut accepting = Vec::new();
    while accepting.len() < accepting_count {
        let cand = vals[rng.below(vals.len())].clone();
        if !accepting.contains(&cand) {
            accepting.push(cand);
        }
    }
    Paca {
        label: "random".into(),
        states: StateSet::explicit(vals.clone(), bnd).unwrap(),
        input_alphabet: vals,
        accepting: Accepting::set(accepting),
        rule0: LocalRule::table(table0),
        rule1: LocalRule::table(table1),
        deterministic: false,
        horizon: None,
    }
}

#[test]
fn criterion_09_critical_cell_counts_stay_constant() {
    let started = Instant::now();
    let budget = Budget::default();

    struct Case {
        aut: Paca,
        horizon: u32,
        expected_max: usize,
        members: Box<dyn Fn(usize) -> Vec<String>>,
    }
    let cases = [
        Case {
            aut: corpus::all_zeros(),
            horizon: 1,
            expected_max: 0,
            members: Box::new(|len| vec!["0".repeat(len)]),
        },
        Case {
            aut: corpus::at_most_one_one(),
            horizon: 7,
            expected_max: 1,
            members: Box::new(|len| {
                let mut words = vec!["0".repeat(len)];
                for i in 0..len {
                    let mut w: Vec<char> = "0".repeat(len).chars().collect();
                    w[i] = '1';
                    words.push(w.into_iter().collect());
                }
                words
            }),
        },
        Case {
            aut: corpus::starts_with_one(),
            horizon: 7,
            expected_max: 1,
            members: Box::new(|len| {
                // All members would be 2^(len−1); a diagonal slice suffices
                // to cover every border interaction at every length.
                let mut words = Vec::new();
                for pattern in 0..len.min(6) {
                    let tail: String = (1..len)
                        .map(|i| if i % (pattern + 1) == 0 { '1' } else { '0' })
                        .collect();
                    words.push(format!("1{tail}"));
                }
                words
            }),
        },
        Case {
            aut: corpus::ascending_runs(),
            horizon: 4,
            expected_max: 3,
            members: Box::new(|len| {
                let mut words = Vec::new();
                for k in 0..=len {
                    for l in 2..=len {
                        for m in 2..=len {
                            if k + l + m > len {
                                continue;
                            }
                            let n = len - k - l - m;
                            if !(l >= 3 || m >= 3 || n == 0) {
                                continue;
                            }
                            words.push(format!(
                                "{}{}{}{}",
                                "0".repeat(k),
                                "1".repeat(l),
                                "2".repeat(m),
                                "3".repeat(n)
                            ));
                        }
                    }
                }
                words
            }),
        },
    ];

    for case in &cases {
        let mut per_length: Vec<(usize, usize)> = Vec::new();
        for len in 4..=12usize {
            let mut max_count: Option<usize> = None;
            for word in (case.members)(len) {
                let input = cfg(&word);
                let profile =
                    acceptance_step_profile(&case.aut, &input, case.horizon - 1, &budget)
                        .unwrap();
                for (t, mass) in profile.iter().enumerate() {
                    if mass.is_zero() {
                        continue;
                    }
                    let report = critical_cells(&case.aut, &input, t as u32, &budget).unwrap();
                    let count = report.critical.len();
                    max_count = Some(max_count.map_or(count, |m| m.max(count)));
                }
            }
            if let Some(m) = max_count {
                per_length.push((len, m));
            }
        }
        assert!(!per_length.is_empty(), "{}", case.aut.label);
        // The recorded constant bounds every length, the maxima never shrink
        // as words grow, and once attained the constant persists. (Shortest
        // members may lack room for every coin-dependent run: the four-letter
        // fixture needs length 6 before all three leftmost-run cells exist.)
        let mut plateau = false;
        let mut last = 0usize;
        for (len, m) in &per_length {
            assert!(
                *m <= case.expected_max,
                "{} at length {len}: {m} critical cells above the recorded constant",
                case.aut.label
            );
            assert!(
                *m >= last,
                "{} at length {len}: maxima shrank from {last} to {m}",
                case.aut.label
            );
            last = *m;
            if *m == case.expected_max {
                plateau = true;
            } else {
                assert!(!plateau, "{} dropped below its constant", case.aut.label);
            }
        }
        assert!(plateau, "{} never attains its constant", case.aut.label);
        let overall = per_length.iter().map(|(_, m)| *m).max().unwrap();
        assert_eq!(overall, case.expected_max, "{}", case.aut.label);
    }
    pass(
        "criterion 09: per-fixture critical-cell maxima stay at their recorded constants",
        started,
        300.0,
    );
}

#[test]
fn criterion_10_subregular_toolkit() {
    let started = Instant::now();
    let mut rng = Rng(77);

    // Scanner and direct membership agree exhaustively on random specs.
    for _ in 0..10 {
        let ell = 1 + rng.below(2);
        let spec = random_llin_spec(&mut rng, ell);
        for len in 1..=8usize {
            for w in words_of_length(&langs::word("01"), len) {
                let direct = llin_membership(&spec, &w).unwrap();
                let mut scanner = LlinScanner::new(&spec);
                for s in &w {
                    scanner.push(*s).unwrap();
                }
                assert_eq!(scanner.finish().unwrap(), direct, "{w:?}");
            }
        }
    }

    // Normalization preserves membership with a certified gap up to length 10.
    for _ in 0..6 {
        let ell = 1 + rng.below(2);
        let spec = random_llin_spec(&mut rng, ell);
        let norm = normalize_llin(&spec, 200_000).unwrap();
        for len in 1..=10usize {
            for w in words_of_length(&langs::word("01"), len) {
                assert_eq!(
                    llin_membership(&spec, &w).unwrap(),
                    llin_membership(&norm.spec, &w).unwrap(),
                    "{w:?}"
                );
                assert!(gap_holds(&norm.spec, &norm.epsilon, &w).unwrap(), "{w:?}");
            }
        }
    }

    // Strictly local specs agree with their weighted embeddings.
    for _ in 0..10 {
        let ell = 1 + rng.below(3);
        let windows = words_of_length(&langs::word("01"), ell);
        let mut allowed = std::collections::BTreeSet::new();
        for w in &windows {
            if rng.below(3) > 0 {
                allowed.insert(w.clone());
            }
        }
        let spec = SltSpec::new(langs::word("01"), ell, None, None, allowed).unwrap();
        let embedded = slt_to_llin(&spec).unwrap();
        for len in 1..=8usize {
            for w in words_of_length(&langs::word("01"), len) {
                assert_eq!(
                    slt_membership(&spec, &w).unwrap(),
                    llin_membership(&embedded, &w).unwrap(),
                    "{w:?}"
                );
            }
        }
    }

    // Boolean laws on expressions.
    use paca_core::langs::LangExpr;
    let th = |infix: &str, theta: u64| LangExpr::Threshold {
        alphabet: langs::word("01"),
        infix: langs::word(infix),
        theta,
    };
    let a = th("1", 1);
    let b = th("0", 2);
    let alphabet = langs::word("01");
    let lhs = LangExpr::Not(
        Box::new(LangExpr::Union(vec![a.clone(), b.clone()])),
        alphabet.clone(),
    );
    let rhs = LangExpr::Inter(vec![
        LangExpr::Not(Box::new(a.clone()), alphabet.clone()),
        LangExpr::Not(Box::new(b.clone()), alphabet.clone()),
    ]);
    let result = bounded_equivalence(
        |w| eval_expr(&lhs, w),
        |w| eval_expr(&rhs, w),
        &alphabet,
        8,
    )
    .unwrap();
    assert_eq!(result, EquivalenceResult::Equal);
    pass(
        "criterion 10: scanners, normalization gaps, embeddings, Boolean laws",
        started,
        120.0,
    );
}

fn random_llin_spec(rng: &mut Rng, ell: usize) -> LlinSpec {
    let alpha = langs::word("01");
    let windows = words_of_length(&alpha, ell);
    let mut weights = Vec::new();
    for w in &windows {
        let weight = match rng.below(4) {
            0 => Ratio::zero(),
            1 => Ratio::one(),
            2 => Ratio::from_u64s(1, 2),
            _ => Ratio::from_u64(2),
        };
        weights.push((w.clone(), weight));
    }
    let theta = match rng.below(3) {
        0 => Ratio::one(),
        1 => Ratio::from_u64s(3, 2),
        _ => Ratio::from_u64(2),
    };
    LlinSpec::new(alpha, ell, None, None, Weights::rational(weights), theta).unwrap()
}
