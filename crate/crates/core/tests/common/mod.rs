//! Random rules and values shared by the property and acceptance tests.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use vetgate::value::Atomic;
use vetgate::Value;

/// A runner that always draws the same sequence.
pub fn seeded_runner() -> TestRunner {
    TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Draws `count` samples from `strategy` without shrinking.
pub fn sample<S: Strategy>(strategy: S, count: usize, runner: &mut TestRunner) -> Vec<S::Value> {
    (0..count)
        .map(|_| strategy.new_tree(runner).expect("strategy generates").current())
        .collect()
}

fn endpoint() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![
        Just(None),
        prop::sample::select(vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0]).prop_map(Some),
    ]
}

fn range_text() -> impl Strategy<Value = String> {
    (any::<bool>(), endpoint(), endpoint(), any::<bool>()).prop_map(|(lc, lo, hi, uc)| {
        let (lo, hi) = match (lo, hi) {
            (Some(a), Some(b)) if a > b => (Some(b), Some(a)),
            other => other,
        };
        let fmt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{}{},{}{}",
            if lc { '[' } else { '(' },
            fmt(lo),
            fmt(hi),
            if uc { ']' } else { ')' }
        )
    })
}

fn length_text(allow_lt_zero: bool) -> impl Strategy<Value = String> {
    prop_oneof![
        Just(String::new()),
        Just("?".to_owned()),
        Just("+".to_owned()),
        (0usize..5).prop_map(|k| k.to_string()),
        (prop::sample::select(vec!["==", "<", "<=", ">", ">="]), 0usize..5)
            .prop_filter("n<0 has no spec form", move |(op, k)| allow_lt_zero || !(*op == "<" && *k == 0))
            .prop_map(|(op, k)| format!("{op}{k}")),
    ]
}

/// Rules over the class codes that translate to a vector spec.
pub fn representable_rule() -> impl Strategy<Value = String> {
    (
        prop::sample::select(vec!['b', 'i', 'n', 'd', 's', 'f', 'l', 'x']),
        any::<bool>(),
        length_text(false),
        any::<bool>(),
        range_text(),
    )
        .prop_map(|(c, upper, len, with_range, range)| {
            let letter = if upper { c.to_ascii_uppercase() } else { c };
            let range = if with_range && "indx".contains(c) { range } else { String::new() };
            format!("{letter}{len}{range}")
        })
}

/// Any grammatical rule, including codes without a spec form.
pub fn any_rule() -> impl Strategy<Value = String> {
    (
        prop::sample::select(vec!['b', 'i', 'n', 'd', 's', 'f', 'l', 'a', 'v', 'x', '0']),
        any::<bool>(),
        length_text(true),
        any::<bool>(),
        range_text(),
    )
        .prop_map(|(c, upper, len, with_range, range)| {
            let letter = if upper { c.to_ascii_uppercase() } else { c };
            let range = if with_range && "indx".contains(c) { range } else { String::new() };
            format!("{letter}{len}{range}")
        })
}

fn float_cell() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![
        4 => prop::sample::select(vec![-2.0, -1.0, -0.0, 0.0, 0.5, 0.999, 1.0, 1.5, 2.0, 3.0, 1e300]).prop_map(Some),
        2 => (-5i64..5).prop_map(|v| Some(v as f64)),
        1 => Just(None),
        1 => Just(Some(f64::NAN)),
        1 => prop::sample::select(vec![f64::INFINITY, f64::NEG_INFINITY]).prop_map(Some),
        1 => (-3.0f64..3.0).prop_map(Some),
    ]
}

fn label() -> impl Strategy<Value = Option<String>> {
    prop_oneof![
        4 => prop::sample::select(vec!["a", "b", "c", "lo", "hi"]).prop_map(|s| Some(s.to_owned())),
        1 => Just(None),
    ]
}

fn names_for(len: usize) -> impl Strategy<Value = Option<Vec<Option<String>>>> {
    prop_oneof![
        4 => Just(None),
        1 => prop::collection::vec(label(), len).prop_map(Some),
    ]
}

/// Atomic vectors, factors and lists of length 0..6, sometimes named.
pub fn vector_value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        prop::collection::vec(prop::option::weighted(0.85, any::<bool>()), 0..6).prop_map(Value::bool),
        prop::collection::vec(prop::option::weighted(0.85, -3i64..4), 0..6).prop_map(Value::int),
        prop::collection::vec(float_cell(), 0..6).prop_map(Value::float),
        prop::collection::vec(label(), 0..6).prop_map(Value::str),
        prop::collection::vec(label(), 0..6)
            .prop_map(|ls| Value::factor_from_labels(ls.iter().map(|l| l.as_deref()))),
    ];
    let list = prop::collection::vec(
        prop_oneof![
            Just(Value::null()),
            prop::collection::vec(-2i64..3, 0..3).prop_map(Value::int),
            Just(Value::strs(["a"])),
        ],
        0..4,
    )
    .prop_map(Value::list);
    prop_oneof![8 => leaf, 1 => list].prop_flat_map(|v| {
        let n = v.len();
        (Just(v), names_for(n)).prop_map(|(v, names)| match names {
            Some(ns) => v.clone().with_names(ns).unwrap_or(v),
            None => v,
        })
    })
}

/// Vectors plus `Null`, small matrices and small frames.
pub fn any_value() -> impl Strategy<Value = Value> {
    let matrix = (1usize..3, 1usize..3).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::option::weighted(0.9, -2i64..3), r * c)
            .prop_map(move |cells| Value::matrix(Atomic::Int(cells), r, c, None, None).expect("dims match"))
    });
    let frame = prop::collection::vec(prop::option::weighted(0.9, 0i64..5), 0..4).prop_map(|a| {
        let b: Vec<Option<String>> = a.iter().map(|v| v.map(|n| n.to_string())).collect();
        Value::frame(vec![("a".into(), Value::int(a)), ("b".into(), Value::str(b))]).expect("equal lengths")
    });
    prop_oneof![
        10 => vector_value(),
        1 => Just(Value::null()),
        1 => matrix,
        1 => frame,
    ]
}
