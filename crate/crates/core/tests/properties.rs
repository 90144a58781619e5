//! Invariants checked over generated rules and values.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use vetgate::api::{self, make_assertion, make_expectation, make_test, CheckFunction, CollectingReporter};
use vetgate::dsl::{eval_rule_probed, parse_rule_bytes};
use vetgate::engine::{check_vector, check_vector_probed, ElementCounter};
use vetgate::ingest::{read_csv, Table};
use vetgate::schema::{validate, Schema};
use vetgate::{parse_rule, qassert, qcheck, qtest, rule_to_spec, CheckOutcome, Error, Value};

use common::{any_rule, any_value, representable_rule};

proptest! {
    #[test]
    fn rule_and_translated_spec_agree(rule in representable_rule(), x in any_value()) {
        let spec = rule_to_spec(&parse_rule(&rule).unwrap()).unwrap();
        prop_assert_eq!(qtest(&x, &rule).unwrap(), check_vector(&x, &spec).is_ok());
    }

    #[test]
    fn test_is_check_is_ok(rule in any_rule(), x in any_value()) {
        prop_assert_eq!(qtest(&x, &rule).unwrap(), qcheck(&x, &rule).unwrap().is_ok());
    }

    #[test]
    fn assert_returns_its_input_or_wraps_the_message(rule in any_rule(), x in any_value()) {
        match (qcheck(&x, &rule).unwrap(), qassert(&x, &rule)) {
            (CheckOutcome::Ok, Ok(back)) => prop_assert!(std::ptr::eq(back, &x)),
            (CheckOutcome::Fail(m), Err(Error::Validation(e))) => {
                prop_assert_eq!(e.message(), format!("Assertion on 'x' failed: {m}"))
            }
            (c, a) => prop_assert!(false, "incoherent: {:?} vs {:?}", c, a),
        }
    }

    #[test]
    fn failure_messages_name_an_element_within_range(rule in any_rule(), x in any_value()) {
        if let CheckOutcome::Fail(m) = qcheck(&x, &rule).unwrap() {
            prop_assert!(m.starts_with("Must "), "{}", m);
            if let Some(rest) = m.strip_suffix(')').and_then(|s| s.rsplit_once("(element ")) {
                let i: usize = rest.1.parse().unwrap();
                prop_assert!(i >= 1 && i <= x.len().max(1), "{} for length {}", m, x.len());
            }
        }
    }

    #[test]
    fn factories_match_generic_families(rule in any_rule(), x in any_value()) {
        let check = CheckFunction::from_rule(parse_rule(&rule).unwrap());
        let reporter = Arc::new(CollectingReporter::new());
        let direct = api::assert(&x, &check, "v").map(|v| v as *const Value);
        let made = make_assertion(check.clone()).call(&x, "v").map(|v| v as *const Value);
        prop_assert_eq!(direct, made);
        prop_assert_eq!(api::test(&x, &check), make_test(check.clone()).call(&x));
        let expected = make_expectation(check.clone(), reporter.clone()).call(&x, "v").unwrap();
        prop_assert_eq!(expected, api::test(&x, &check));
        let record = reporter.records().pop().unwrap();
        let outcome = api::check(&x, &check);
        prop_assert_eq!(record.message.as_deref(), outcome.message());
        prop_assert_eq!(record.label, "v");
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..24)) {
        let _ = parse_rule_bytes(&bytes);
    }

    #[test]
    fn rendering_round_trips(rule in any_rule()) {
        let parsed = parse_rule(&rule).unwrap();
        let rendered = parsed.to_string();
        prop_assert_eq!(parse_rule(&rendered).unwrap(), parsed);
        prop_assert_eq!(parse_rule(&rendered).unwrap().to_string(), rendered);
    }

    #[test]
    fn lowercase_admits_missing_and_uppercase_does_not(rule in any_rule(), x in any_value()) {
        // the uppercase form only adds the no-missing constraint
        let upper = format!("{}{}", rule[..1].to_ascii_uppercase(), &rule[1..]);
        let lower = format!("{}{}", rule[..1].to_ascii_lowercase(), &rule[1..]);
        if qtest(&x, &upper).unwrap() {
            prop_assert!(qtest(&x, &lower).unwrap());
        }
    }

    #[test]
    fn reads_stay_within_one_pass(rule in representable_rule(), x in any_value()) {
        let spec = rule_to_spec(&parse_rule(&rule).unwrap()).unwrap();
        let mut engine = ElementCounter::default();
        let mut dsl = ElementCounter::default();
        let _ = check_vector_probed(&x, &spec, &mut engine);
        let _ = eval_rule_probed(&x, &parse_rule(&rule).unwrap(), &mut dsl);
        prop_assert!(engine.inspected <= x.len(), "{} > {}", engine.inspected, x.len());
        prop_assert!(dsl.inspected <= x.len(), "{} > {}", dsl.inspected, x.len());
    }

    #[test]
    fn long_float_scan_matches_elementwise_reference(
        cells in prop::collection::vec(prop_oneof![
            20 => (0.0f64..10.0).prop_map(Some),
            1 => Just(None),
            1 => Just(Some(-1.0)),
            1 => Just(Some(f64::INFINITY)),
        ], 0..600),
        missing_ok in any::<bool>(),
    ) {
        let rule = if missing_ok { "n[0,10]" } else { "N[0,10]" };
        let expected = cells
            .iter()
            .position(|c| match c {
                None => !missing_ok,
                Some(v) => !(0.0..=10.0).contains(v),
            });
        let outcome = qcheck(&Value::float(cells.clone()), rule).unwrap();
        match expected {
            None => prop_assert!(outcome.is_ok()),
            Some(i) => {
                let m = outcome.message().unwrap().to_owned();
                prop_assert!(m.ends_with(&format!("(element {})", i + 1)), "{}", m);
            }
        }
    }

    #[test]
    fn report_lists_failures_in_schema_order(
        rules in prop::collection::vec(any_rule(), 1..5),
        cells in prop::collection::vec(prop::sample::select(vec!["1", "0", "-2", "NA", "", "x", "2.5", "TRUE"]), 0..4),
    ) {
        let schema_text: String = rules
            .iter()
            .enumerate()
            .map(|(j, r)| format!("c{j} = {:?}\n", r))
            .collect();
        let schema = Schema::parse(&schema_text).unwrap();
        let header: Vec<String> = (0..rules.len()).map(|j| format!("c{j}")).collect();
        let csv: String = std::iter::once(header.join(","))
            .chain(cells.iter().map(|c| vec![*c; rules.len()].join(",")))
            .map(|l| l + "\n")
            .collect();
        let table: Table = read_csv(&csv).unwrap();
        let report = validate(&schema, &table, "t.csv");
        let columns: Vec<usize> = report
            .failures
            .iter()
            .map(|f| f.column[1..].parse().unwrap())
            .collect();
        prop_assert!(columns.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(report.passed, report.failures.is_empty());
        prop_assert_eq!(report.to_json(), validate(&schema, &table, "t.csv").to_json());
    }
}
