//! Concrete example automata and words with recorded exact values.
//!
//! Every expected value below is reproducible by the oracles in
//! [`crate::prob`] and [`crate::langs`]; the test suite replays the tables on
//! every build. Fixtures are addressed by name so the command line can export
//! and reload them.

use alloc::string::String;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::automaton::{Accepting, LocalRule, Paca, StateSet, StateVal, VirtualPaca};
use crate::dyadic::Dyadic;
use crate::langs::{LangExpr, LlinSpec, Weights};
use crate::name::Name;
use crate::ratio::Ratio;

/// State-encoding tags shared by the hand-built fixtures.
mod tag {
    pub const PASS: u8 = 1;
    pub const COLLECT: u8 = 2;
    pub const COUNT: u8 = 3;
    pub const DEAD: u8 = 4;
    pub const GATHER: u8 = 5;
    pub const ROLE: u8 = 6;
    pub const VERDICT: u8 = 7;
}

fn sym(c: char) -> StateVal {
    StateVal::Sym(Name::from_char(c))
}

fn pass() -> StateVal {
    StateVal::packed(tag::PASS, 0)
}

fn dead() -> StateVal {
    StateVal::packed(tag::DEAD, 0)
}

fn collect(count: u64, bits: u64) -> StateVal {
    StateVal::packed(tag::COLLECT, count | bits << 8)
}

fn countdown(target: u64, elapsed: u64) -> StateVal {
    StateVal::packed(tag::COUNT, target | elapsed << 16)
}

fn countdown_hit(lo: u64) -> bool {
    (lo & 0xffff) == lo >> 16
}

/// A fixture: an artifact plus a table of expected exact values.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub artifact: FixtureArtifact,
    pub expected: Vec<Expectation>,
    pub notes: &'static str,
}

#[derive(Clone, Debug)]
pub enum FixtureArtifact {
    Automaton(Paca),
    Words(Vec<String>),
    Lang(LangExpr),
}

impl FixtureArtifact {
    pub fn automaton(&self) -> Option<&Paca> {
        match self {
            FixtureArtifact::Automaton(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Expectation {
    pub input: String,
    /// Horizon for probability expectations; unused for membership.
    pub horizon: u32,
    pub value: Expected,
    /// How the value was obtained.
    pub source: &'static str,
}

#[derive(Clone, Debug)]
pub enum Expected {
    Probability(Dyadic),
    Membership(bool),
}

fn prob(input: &str, horizon: u32, num: u64, exp: u32, source: &'static str) -> Expectation {
    Expectation {
        input: input.to_string(),
        horizon,
        value: Expected::Probability(Dyadic::new(BigUint::from(num), exp)),
        source,
    }
}

fn member(input: &str, value: bool, source: &'static str) -> Expectation {
    Expectation {
        input: input.to_string(),
        horizon: 0,
        value: Expected::Membership(value),
        source,
    }
}

/// Deterministic acceptor for `0+` over `{0,1}`: the identity rule keeps
/// every symbol in place and only `0` is accepting, so all-zero words are
/// accepted at step 0 and nothing else ever.
pub fn all_zeros() -> Paca {
    let zero = sym('0');
    let one = sym('1');
    Paca::daca(
        "all_zeros",
        StateSet::explicit(vec![zero.clone(), one.clone()], sym('$')).unwrap(),
        vec![zero.clone(), one],
        Accepting::set(vec![zero]),
        LocalRule::proc("identity", |_, c, _| c.clone()),
        Some(1),
    )
}

/// Two-sided acceptor for `{w : |w|_σ ≤ 1}` over `alphabet`.
///
/// Cells holding any other symbol accept immediately and permanently. A cell
/// holding `counted` collects `coin_bits` coins over as many steps, reads
/// them as a countdown target `t ∈ [1, 2^coin_bits]`, and is accepting
/// exactly at step `coin_bits + t`; afterwards it is dead. Words with at
/// most one counted symbol are accepted with probability 1; with `j ≥ 2`
/// occurrences all targets must agree, probability `2^{−coin_bits·(j−1)}`.
pub fn threshold_one_paca(label: &str, alphabet: &str, counted: char, coin_bits: u32) -> Paca {
    assert!((1..=15).contains(&coin_bits));
    let counted_sym = sym(counted);
    let k = coin_bits as u64;
    let alpha: Vec<StateVal> = alphabet.chars().map(sym).collect();
    assert!(alpha.contains(&counted_sym));
    let step = {
        let counted_sym = counted_sym.clone();
        move |coin: u64, c: &StateVal| -> StateVal {
            match c {
                StateVal::Sym(_) => {
                    if *c == counted_sym {
                        if k == 1 {
                            countdown(coin + 1, 0)
                        } else {
                            collect(1, coin)
                        }
                    } else {
                        pass()
                    }
                }
                StateVal::Packed { tag: t, lo, .. } if *t == tag::COLLECT => {
                    let seen = lo & 0xff;
                    let bits = (lo >> 8) << 1 | coin;
                    if seen + 1 == k {
                        countdown(bits + 1, 0)
                    } else {
                        collect(seen + 1, bits)
                    }
                }
                StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => {
                    let target = lo & 0xffff;
                    let elapsed = (lo >> 16) + 1;
                    if elapsed > target {
                        dead()
                    } else {
                        countdown(target, elapsed)
                    }
                }
                _ => c.clone(),
            }
        }
    };
    let s0 = step.clone();
    let s1 = step;
    Paca {
        label: label.into(),
        states: StateSet::lazy(sym('$')),
        input_alphabet: alpha,
        accepting: Accepting::pred("pass-or-countdown-hit", move |s| match s {
            StateVal::Sym(_) => *s != counted_sym,
            StateVal::Packed { tag: t, .. } if *t == tag::PASS => true,
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => countdown_hit(*lo),
            _ => false,
        }),
        rule0: LocalRule::proc("countdown-0", move |_, c, _| s0(0, c)),
        rule1: LocalRule::proc("countdown-1", move |_, c, _| s1(1, c)),
        deterministic: false,
        horizon: Some(coin_bits as u64 + (1u64 << coin_bits) + 1),
    }
}

/// Two-sided acceptor for at most one `1` over `{0,1}`: two coins, countdown
/// targets `1..4`, acceptance at step `2 + t`, horizon 7.
pub fn at_most_one_one() -> Paca {
    threshold_one_paca("at_most_one_one", "01", '1', 2)
}

/// At most one `1` over `{0,1,2}`.
pub fn th11_ternary() -> Paca {
    threshold_one_paca("th11_ternary", "012", '1', 2)
}

/// At most one `2` over `{0,1,2}`.
pub fn th21_ternary() -> Paca {
    threshold_one_paca("th21_ternary", "012", '2', 2)
}

/// A 16-target variant of [`at_most_one_one`]: two-sided error exactly 1/16,
/// small enough for intersection products that need operand error below 1/10
/// without a pre-reduction stage.
pub fn at_most_one_one_16() -> Paca {
    threshold_one_paca("at_most_one_one_16", "01", '1', 4)
}

/// The language of [`at_most_one_one`] presented with four local rules: one
/// four-way coin draw picks the countdown target directly. Used as input to
/// rule-set expansion.
pub fn at_most_one_one_virtual() -> VirtualPaca {
    let rules: Vec<LocalRule> = (0..4u64)
        .map(|draw| {
            LocalRule::proc("virtual-countdown", move |_l, c, _r| match c {
                StateVal::Sym(_) => {
                    if *c == sym('1') {
                        countdown(draw + 1, 0)
                    } else {
                        pass()
                    }
                }
                StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => {
                    let target = lo & 0xffff;
                    let elapsed = (lo >> 16) + 1;
                    if elapsed > target {
                        dead()
                    } else {
                        countdown(target, elapsed)
                    }
                }
                _ => c.clone(),
            })
        })
        .collect();
    VirtualPaca {
        label: "at_most_one_one_virtual".into(),
        states: StateSet::lazy(sym('$')),
        input_alphabet: vec![sym('0'), sym('1')],
        accepting: Accepting::pred("pass-or-countdown-hit", |s| match s {
            StateVal::Sym(_) => *s == sym('0'),
            StateVal::Packed { tag: t, .. } if *t == tag::PASS => true,
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => countdown_hit(*lo),
            _ => false,
        }),
        rules,
        horizon: Some(6),
    }
}

/// Two-sided acceptor for `{w : |w| ≥ 2, w starts and ends with 1}` with
/// error exactly 1/16 and constant live randomness.
///
/// The left border cell draws a 16-way countdown target and is accepting
/// only at step `4 + t_L`; the right border cell draws a 16-way poison step
/// and is accepting at every step in `5..=20` except `4 + t_R`; interior
/// cells accept permanently from step 1. The word is accepted exactly when
/// `t_L ≠ t_R`, probability 15/16; non-members (a border cell holding 0, or
/// length 1) are never accepted. Only the two border cells ever branch, so
/// exact forwarding stays at 256 configurations regardless of length.
pub fn bordered_ones_16() -> Paca {
    const K: u64 = 4;
    fn step(coin: u64, l: &StateVal, c: &StateVal, r: &StateVal) -> StateVal {
        match c {
            StateVal::Sym(_) => {
                let left_border = *l == sym('$');
                let right_border = *r == sym('$');
                if !left_border && !right_border {
                    return pass();
                }
                if left_border && right_border {
                    return dead(); // single-cell words are never members
                }
                if *c != sym('1') {
                    return dead();
                }
                // Tag bit 16 distinguishes the poison gadget on the right.
                let gadget = if right_border { 1u64 << 16 } else { 0 };
                StateVal::packed(tag::COLLECT, (1 | gadget) | coin << 8)
            }
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COLLECT => {
                let seen = lo & 0xff;
                let gadget = lo >> 16 & 1;
                let bits = (lo >> 8 & 0xff) << 1 | coin;
                if seen + 1 == K {
                    // Countdown payload: target, elapsed, gadget kind.
                    StateVal::packed(tag::COUNT, (bits + 1) | gadget << 40)
                } else {
                    StateVal::packed(tag::COLLECT, (seen + 1 | gadget << 16) | bits << 8)
                }
            }
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => {
                let target = lo & 0xffff;
                let gadget = lo >> 40 & 1;
                let elapsed = (lo >> 16 & 0xffffff) + 1;
                if elapsed > 16 {
                    dead()
                } else {
                    StateVal::packed(tag::COUNT, target | elapsed << 16 | gadget << 40)
                }
            }
            _ => c.clone(),
        }
    }
    Paca {
        label: "bordered_ones_16".into(),
        states: StateSet::lazy(sym('$')),
        input_alphabet: vec![sym('0'), sym('1')],
        accepting: Accepting::pred("hit-or-dodge", |s| match s {
            StateVal::Packed { tag: t, .. } if *t == tag::PASS => true,
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => {
                let target = lo & 0xffff;
                let gadget = lo >> 40 & 1;
                let elapsed = lo >> 16 & 0xffffff;
                if gadget == 0 {
                    elapsed == target
                } else {
                    elapsed >= 1 && elapsed != target
                }
            }
            _ => false,
        }),
        rule0: LocalRule::proc("bordered-0", |l, c, r| step(0, l, c, r)),
        rule1: LocalRule::proc("bordered-1", |l, c, r| step(1, l, c, r)),
        deterministic: false,
        horizon: Some(21),
    }
}

/// One-sided acceptor for `1Σ*` over `{0,1}` with a single critical cell.
///
/// The leftmost cell (it sees the boundary) runs the countdown gadget when
/// its input is `1` and dies when it is `0`; every other cell accepts
/// permanently from step 1. Members are accepted with probability 1, at a
/// coin-chosen step in `3..=6`; non-members never.
pub fn starts_with_one() -> Paca {
    fn step(coin: u64, l: &StateVal, c: &StateVal) -> StateVal {
        match c {
            StateVal::Sym(_) => {
                if *l == sym('$') {
                    if *c == sym('1') {
                        collect(1, coin)
                    } else {
                        dead()
                    }
                } else {
                    pass()
                }
            }
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COLLECT => {
                let bits = (lo >> 8) << 1 | coin;
                countdown(bits + 1, 0)
            }
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => {
                let target = lo & 0xffff;
                let elapsed = (lo >> 16) + 1;
                if elapsed > target {
                    dead()
                } else {
                    countdown(target, elapsed)
                }
            }
            _ => c.clone(),
        }
    }
    Paca {
        label: "starts_with_one".into(),
        states: StateSet::lazy(sym('$')),
        input_alphabet: vec![sym('0'), sym('1')],
        accepting: Accepting::pred("pass-or-countdown-hit", |s| match s {
            StateVal::Packed { tag: t, .. } if *t == tag::PASS => true,
            StateVal::Packed { tag: t, lo, .. } if *t == tag::COUNT => countdown_hit(*lo),
            _ => false,
        }),
        rule0: LocalRule::proc("leftmost-gadget-0", |l, c, _| step(0, l, c)),
        rule1: LocalRule::proc("leftmost-gadget-1", |l, c, _| step(1, l, c)),
        deterministic: false,
        horizon: Some(7),
    }
}

// ---------------------------------------------------------------------------
// The four-letter one-sided fixture.
// ---------------------------------------------------------------------------

const SIGMA4: [char; 4] = ['0', '1', '2', '3'];

fn code4(s: &StateVal) -> u64 {
    for (i, c) in SIGMA4.iter().enumerate() {
        if *s == sym(*c) {
            return i as u64;
        }
    }
    4 // boundary
}

/// Radius-1 violations of the run shape `0*1^{≥2}2^{≥2}3*`. `b`, `c`, `d`
/// are the symbol codes of the left, own, and right input symbols
/// (4 = boundary).
fn shape_violation(b: u64, c: u64, d: u64) -> bool {
    // Symbols must ascend left to right.
    if c < 4 && d < 4 && c > d {
        return true;
    }
    // A lone 1 or a lone 2: runs need length at least two.
    if (b == 0 || b == 4) && c == 1 && d != 1 {
        return true;
    }
    if b != 2 && c == 2 && d != 2 {
        return true;
    }
    // 1 directly followed by 3: no 2-run at all.
    if c == 1 && d == 3 {
        return true;
    }
    // Words must end in 2 or 3, else the 1- or 2-run is missing.
    if d == 4 && (c == 0 || c == 1) {
        return true;
    }
    // A 2 or 3 preceded only by 0s or the border.
    if (b == 0 || b == 4) && (c == 2 || c == 3) {
        return true;
    }
    false
}

/// One-sided `7/8`-error acceptor for ascending-run words `0^k 1^l 2^m 3^n`
/// with `l, m ≥ 2` and a long enough middle (see below).
///
/// The run shape is checked deterministically from radius-2 views gathered in
/// two steps. Randomness decides the rest: the cells adjacent to the leftmost
/// `1`, `2`, and `3` each expose one coin, and those three leftmost cells
/// accept only under the conditions `r₁ = 1`, `l₂ + r₂ < 2`, `l₃ = 1` on
/// their neighbors' exposed coins. When the 1- and 2-runs both have length
/// exactly two, adjacent conditions read the same exposed coin and become
/// contradictory, giving exact probability 0. Acceptance happens exactly at
/// step 3; horizon 4.
///
/// Applying the coin conditions verbatim leaves one border case: with no
/// 3-run (`n = 0`) the `l₃` constraint disappears, so `0^k 1^2 2^2` is
/// accepted with probability 1/4. The recognized language is therefore
/// `shape ∧ (l ≥ 3 ∨ m ≥ 3 ∨ n = 0)` — see [`ascending_runs_member`] — and
/// on it this is a valid one-sided 7/8-error acceptor (members land at
/// probability 1/8, 3/16, 1/4, or 3/8; non-members at exactly 0).
pub fn ascending_runs() -> Paca {
    fn step(coin: u64, l: &StateVal, c: &StateVal, r: &StateVal) -> StateVal {
        match c {
            StateVal::Sym(_) => {
                StateVal::packed(tag::GATHER, code4(l) * 25 + code4(c) * 5 + code4(r))
            }
            StateVal::Packed { tag: t, lo, .. } if *t == tag::GATHER => {
                let (wm1, w0, wp1) = (lo / 25, lo / 5 % 5, lo % 5);
                let wm2 = match l {
                    StateVal::Packed { tag: t2, lo: l2, .. } if *t2 == tag::GATHER => l2 / 25,
                    _ => 4,
                };
                let shape_ok = !shape_violation(wm1, w0, wp1);
                let is_c1 = w0 == 1 && (wm1 == 0 || wm1 == 4);
                let is_c2 = w0 == 2 && wm1 != 2;
                let is_c3 = w0 == 3 && wm1 != 3;
                let exposer = (wm1 == 1 && (wm2 == 0 || wm2 == 4))
                    || (wp1 == 2 && w0 != 2)
                    || (wm1 == 2 && wm2 != 2)
                    || (wp1 == 3 && w0 != 3);
                let mut flags = 0u64;
                if is_c1 {
                    flags |= 1;
                }
                if is_c2 {
                    flags |= 2;
                }
                if is_c3 {
                    flags |= 4;
                }
                if exposer {
                    flags |= 8;
                }
                if shape_ok {
                    flags |= 16;
                }
                let coin_bit = if exposer { coin } else { 0 };
                StateVal::packed(tag::ROLE, flags | coin_bit << 8)
            }
            StateVal::Packed { tag: t, lo, .. } if *t == tag::ROLE => {
                fn exposed(s: &StateVal) -> u64 {
                    match s {
                        StateVal::Packed { tag: t2, lo: v, .. }
                            if *t2 == tag::ROLE && v & 8 != 0 =>
                        {
                            v >> 8 & 1
                        }
                        _ => 0,
                    }
                }
                let shape_ok = lo & 16 != 0;
                let lc = exposed(l);
                let rc = exposed(r);
                let mut ok = shape_ok;
                if lo & 1 != 0 {
                    ok &= rc == 1;
                }
                if lo & 2 != 0 {
                    ok &= lc + rc < 2;
                }
                if lo & 4 != 0 {
                    ok &= lc == 1;
                }
                StateVal::packed(tag::VERDICT, ok as u64)
            }
            _ => dead(),
        }
    }
    Paca {
        label: "ascending_runs".into(),
        states: StateSet::lazy(sym('$')),
        input_alphabet: SIGMA4.iter().map(|c| sym(*c)).collect(),
        accepting: Accepting::pred("verdict", |s| {
            matches!(s, StateVal::Packed { tag: t, lo: 1, .. } if *t == tag::VERDICT)
        }),
        rule0: LocalRule::proc("ascending-runs-0", |l, c, r| step(0, l, c, r)),
        rule1: LocalRule::proc("ascending-runs-1", |l, c, r| step(1, l, c, r)),
        deterministic: false,
        horizon: Some(4),
    }
}

/// Direct membership predicate for the language [`ascending_runs`] accepts.
pub fn ascending_runs_member(word: &str) -> bool {
    let mut runs = [0usize; 4];
    let mut last: i8 = -1;
    for ch in word.chars() {
        let code = match ch {
            '0' => 0i8,
            '1' => 1,
            '2' => 2,
            '3' => 3,
            _ => return false,
        };
        if code < last {
            return false;
        }
        runs[code as usize] += 1;
        last = code;
    }
    let (l, m, n) = (runs[1], runs[2], runs[3]);
    l >= 2 && m >= 2 && (l >= 3 || m >= 3 || n == 0)
}

/// The one-sided error parameter of [`ascending_runs`]: members are accepted
/// with probability at least `1 − 7/8 = 1/8`.
pub fn ascending_runs_error() -> Ratio {
    Ratio::from_u64s(7, 8)
}

/// Membership for the counted-symbol acceptors: at most one occurrence.
pub fn at_most_one_member(word: &str, counted: char) -> bool {
    word.chars().filter(|c| *c == counted).count() <= 1
}

/// `Th(1,1)` over `{0,1}` as a weighted local spec: window length 1,
/// weight 1 on `1`, weight 0 on `0`, threshold 1.
pub fn th11_llin_spec() -> LlinSpec {
    LlinSpec::new(
        vec![Name::from_char('0'), Name::from_char('1')],
        1,
        None,
        None,
        Weights::rational(vec![
            (vec![Name::from_char('0')], Ratio::zero()),
            (vec![Name::from_char('1')], Ratio::one()),
        ]),
        Ratio::one(),
    )
    .expect("well-formed spec")
}

/// `{w ∈ {0,1}⁺ : w ∉ 0*}` as a complement expression.
pub fn not_all_zeros_expr() -> LangExpr {
    let alphabet = vec![Name::from_char('0'), Name::from_char('1')];
    LangExpr::Not(
        alloc::boxed::Box::new(LangExpr::Threshold {
            alphabet: alphabet.clone(),
            infix: vec![Name::from_char('1')],
            theta: 0,
        }),
        alphabet,
    )
}

/// `Th(1,1) ∪ Th(2,1)` over `{0,1,2}`.
pub fn th_union_expr() -> LangExpr {
    let alphabet = vec![
        Name::from_char('0'),
        Name::from_char('1'),
        Name::from_char('2'),
    ];
    LangExpr::Union(vec![
        LangExpr::Threshold {
            alphabet: alphabet.clone(),
            infix: vec![Name::from_char('1')],
            theta: 1,
        },
        LangExpr::Threshold {
            alphabet,
            infix: vec![Name::from_char('2')],
            theta: 1,
        },
    ])
}

/// Names of all registered fixtures.
pub fn fixture_names() -> Vec<&'static str> {
    vec![
        "all_zeros",
        "at_most_one_one",
        "at_most_one_one_16",
        "th11_ternary",
        "th21_ternary",
        "bordered_ones_16",
        "starts_with_one",
        "ascending_runs",
        "ascending_runs_words",
        "th11_llin",
        "not_all_zeros_expr",
        "th_union_expr",
    ]
}

/// Looks up a fixture by name.
pub fn fixture(name: &str) -> Option<Fixture> {
    let f = match name {
        "all_zeros" => Fixture {
            name: "all_zeros",
            artifact: FixtureArtifact::Automaton(all_zeros()),
            expected: vec![
                prob("000", 1, 1, 0, "identity orbit: all-zero input accepting at step 0"),
                prob("010", 4, 0, 0, "identity orbit: the 1 never leaves"),
            ],
            notes: "deterministic acceptor for 0+; no cell ever depends on a coin",
        },
        "at_most_one_one" => Fixture {
            name: "at_most_one_one",
            artifact: FixtureArtifact::Automaton(at_most_one_one()),
            expected: vec![
                prob("000", 7, 1, 0, "all cells accepting from step 0"),
                prob("010", 7, 1, 0, "a single countdown always lands"),
                prob("0101", 7, 1, 2, "tape enumeration: two independent targets agree with probability 1/4"),
                prob("111", 7, 1, 4, "tape enumeration: three independent targets agree with probability 1/16"),
            ],
            notes: "two-sided acceptor for at most one 1; error exactly 4^(1-j) on words with j >= 2 ones",
        },
        "at_most_one_one_16" => Fixture {
            name: "at_most_one_one_16",
            artifact: FixtureArtifact::Automaton(at_most_one_one_16()),
            expected: vec![
                prob("010", 21, 1, 0, "a single countdown always lands"),
                prob("011", 21, 1, 4, "two 16-way targets agree with probability 1/16"),
            ],
            notes: "16-target countdown variant; two-sided error exactly 1/16",
        },
        "th11_ternary" => Fixture {
            name: "th11_ternary",
            artifact: FixtureArtifact::Automaton(th11_ternary()),
            expected: vec![
                prob("022", 7, 1, 0, "no counted symbol present"),
                prob("101", 7, 1, 2, "two countdowns agree with probability 1/4"),
            ],
            notes: "at most one 1 over {0,1,2}",
        },
        "th21_ternary" => Fixture {
            name: "th21_ternary",
            artifact: FixtureArtifact::Automaton(th21_ternary()),
            expected: vec![
                prob("011", 7, 1, 0, "no counted symbol present"),
                prob("202", 7, 1, 2, "two countdowns agree with probability 1/4"),
            ],
            notes: "at most one 2 over {0,1,2}",
        },
        "bordered_ones_16" => Fixture {
            name: "bordered_ones_16",
            artifact: FixtureArtifact::Automaton(bordered_ones_16()),
            expected: vec![
                prob("11", 21, 15, 4, "border targets differ with probability 15/16"),
                prob("101", 21, 15, 4, "interior symbols are free"),
                prob("10", 21, 0, 0, "right border holds 0"),
                prob("1", 21, 0, 0, "single-cell words are rejected"),
            ],
            notes: "two-sided 1/16-error acceptor for 1-bordered words; only the two border cells branch",
        },
        "starts_with_one" => Fixture {
            name: "starts_with_one",
            artifact: FixtureArtifact::Automaton(starts_with_one()),
            expected: vec![
                prob("10", 7, 1, 0, "the leftmost countdown always lands"),
                prob("01", 7, 0, 0, "the leftmost cell dies on 0"),
            ],
            notes: "one-sided acceptor for 1-prefixed words; single critical cell at steps 3..=6",
        },
        "ascending_runs" => Fixture {
            name: "ascending_runs",
            artifact: FixtureArtifact::Automaton(ascending_runs()),
            expected: vec![
                prob(
                    "00000112233333",
                    4,
                    0,
                    0,
                    "tape enumeration: both run lengths two, coin conditions contradict through shared coins",
                ),
                prob(
                    "000001112233333",
                    4,
                    1,
                    3,
                    "tape enumeration: r2 and l3 share a cell, (1/2)(1/4)",
                ),
                prob(
                    "000001122233333",
                    4,
                    1,
                    3,
                    "tape enumeration: r1 and l2 share a cell, (1/4)(1/2)",
                ),
                prob(
                    "0000011122233333",
                    4,
                    3,
                    4,
                    "tape enumeration: all four exposed coins independent, (1/2)(3/4)(1/2)",
                ),
                prob("000001122200000", 4, 0, 0, "shape check: descent after the 2-run"),
                prob("0000112", 4, 0, 0, "shape check: lone 2 at the end"),
            ],
            notes: "one-sided 7/8-error acceptor; acceptance only at step 3, horizon 4",
        },
        "ascending_runs_words" => Fixture {
            name: "ascending_runs_words",
            artifact: FixtureArtifact::Words(vec![
                "000001112233333".into(),
                "000001122233333".into(),
                "00000112233333".into(),
            ]),
            expected: vec![
                member("000001112233333", true, "three 1s, two 2s"),
                member("000001122233333", true, "two 1s, three 2s"),
                member("00000112233333", false, "both runs of length two"),
            ],
            notes: "x, y (members) and z (non-member): every length-5 window of z occurs in x or y",
        },
        "th11_llin" => Fixture {
            name: "th11_llin",
            artifact: FixtureArtifact::Lang(LangExpr::Llin(th11_llin_spec())),
            expected: vec![
                member("010", true, "one occurrence of the weighted infix"),
                member("0110", false, "weight 2 exceeds the threshold"),
            ],
            notes: "at most one 1 as a weighted local spec",
        },
        "not_all_zeros_expr" => Fixture {
            name: "not_all_zeros_expr",
            artifact: FixtureArtifact::Lang(not_all_zeros_expr()),
            expected: vec![
                member("000", false, "complement of the all-zero words"),
                member("010", true, "complement of the all-zero words"),
            ],
            notes: "complement expression over a threshold atom",
        },
        "th_union_expr" => Fixture {
            name: "th_union_expr",
            artifact: FixtureArtifact::Lang(th_union_expr()),
            expected: vec![
                member("1122", false, "two 1s and two 2s fail both atoms"),
                member("112", true, "at most one 2"),
                member("1", true, "at most one of each"),
            ],
            notes: "union of two threshold atoms over {0,1,2}",
        },
        _ => return None,
    };
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{run, Configuration, RandomTape, RunOutcome};

    #[test]
    fn fixtures_resolve_by_name() {
        for name in fixture_names() {
            assert!(fixture(name).is_some(), "{name}");
        }
        assert!(fixture("unknown").is_none());
    }

    #[test]
    fn countdown_gadget_accepts_all_zero_words_at_step_zero() {
        let aut = at_most_one_one();
        let cfg = Configuration::from_symbols("000").unwrap();
        let tape = RandomTape::zeros(6, 3);
        assert_eq!(run(&aut, &cfg, &tape).unwrap(), RunOutcome::Accepted { step: 0 });
    }

    #[test]
    fn countdown_gadget_accepts_single_one_at_coin_chosen_step() {
        let aut = at_most_one_one();
        let cfg = Configuration::from_symbols("010").unwrap();
        // Coins for the middle cell: r0=1, r1=0 → target 2·1+0+1 = 3, so the
        // run accepts at step 2+3 = 5.
        let tape = RandomTape::new(alloc::vec![
            alloc::vec![0, 1, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![0, 0, 0],
            alloc::vec![0, 0, 0],
        ])
        .unwrap();
        assert_eq!(run(&aut, &cfg, &tape).unwrap(), RunOutcome::Accepted { step: 5 });
    }

    #[test]
    fn two_ones_accept_only_when_targets_agree() {
        let aut = at_most_one_one();
        let cfg = Configuration::from_symbols("11").unwrap();
        let agree = RandomTape::new(alloc::vec![
            alloc::vec![0, 0],
            alloc::vec![1, 1],
            alloc::vec![0, 0],
            alloc::vec![0, 0],
            alloc::vec![0, 0],
            alloc::vec![0, 0],
        ])
        .unwrap();
        assert_eq!(run(&aut, &cfg, &agree).unwrap(), RunOutcome::Accepted { step: 4 });
        let disagree = RandomTape::new(alloc::vec![
            alloc::vec![0, 0],
            alloc::vec![1, 0],
            alloc::vec![0, 0],
            alloc::vec![0, 0],
            alloc::vec![0, 0],
            alloc::vec![0, 0],
        ])
        .unwrap();
        assert_eq!(
            run(&aut, &cfg, &disagree).unwrap(),
            RunOutcome::RejectedWithinHorizon
        );
    }

    #[test]
    fn ascending_runs_gathers_windows_step_by_step() {
        use crate::automaton::space_time;
        let aut = ascending_runs();
        let cfg = Configuration::from_symbols("0011223").unwrap();
        let tape = RandomTape::zeros(3, 7);
        let d = space_time(&aut, &cfg, Some(&tape), 1).unwrap();
        // After one step each cell holds its gathered radius-1 view.
        let expect = |l: u64, c: u64, r: u64| StateVal::packed(tag::GATHER, l * 25 + c * 5 + r);
        assert_eq!(d.rows[1].cells()[0], expect(4, 0, 0));
        assert_eq!(d.rows[1].cells()[1], expect(0, 0, 1));
        assert_eq!(d.rows[1].cells()[3], expect(1, 1, 2));
        assert_eq!(d.rows[1].cells()[6], expect(2, 3, 4));
    }

    #[test]
    fn ascending_runs_member_predicate() {
        assert!(ascending_runs_member("000001112233333"));
        assert!(ascending_runs_member("1122")); // no 3-run: border quirk
        assert!(!ascending_runs_member("11223"));
        assert!(!ascending_runs_member("0101"));
        assert!(!ascending_runs_member("112"));
    }
}
