mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use inca::attribution::{most_probable_suspects, AttributionAnswer, AttributionQuery};
use inca::em::ProbabilisticFormula;
use inca::kb::{load, LoadOptions};
use inca::rational::Rational;

const ACTORS: [&str; 2] = ["s0", "s1"];

fn ask(case: &AttrCase, actors: &[&str; 2], suspects: &[&str]) -> AttributionAnswer {
    let fw = case.framework(actors);
    most_probable_suspects(&fw, &AttributionQuery::new(suspects, OPERATION))
        .expect("query succeeds")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn answer_matches_recomputed_pipeline(case in attr_case_strategy()) {
        let fw = case.framework(&ACTORS);
        let answer = most_probable_suspects(&fw, &AttributionQuery::new(&ACTORS, OPERATION)).unwrap();
        let oracle = pipeline_oracle(&fw, &case.em_rows(), &ACTORS, OPERATION);
        let got: BTreeSet<String> = answer.most_probable.iter().cloned().collect();
        prop_assert_eq!(&got, &oracle.most_probable);
        for (s, (lo, hi)) in &oracle.per_suspect {
            let i = &answer.per_suspect[s];
            prop_assert_eq!(&i.lower, &to_big(lo), "lower for {}", s);
            prop_assert_eq!(&i.upper, &to_big(hi), "upper for {}", s);
        }
        prop_assert!(!got.is_empty());
        prop_assert!(got.iter().all(|s| ACTORS.contains(&s.as_str())));
    }

    #[test]
    fn renaming_suspects_renames_the_answer(case in attr_case_strategy()) {
        let straight = ask(&case, &["s0", "s1"], &ACTORS);
        let swapped = ask(&case, &["s1", "s0"], &ACTORS);
        let rename = |s: &str| if s == "s0" { "s1" } else { "s0" }.to_string();
        let renamed: BTreeSet<String> = straight.most_probable.iter().map(|s| rename(s)).collect();
        let got: BTreeSet<String> = swapped.most_probable.iter().cloned().collect();
        prop_assert_eq!(got, renamed);
        for (s, i) in &straight.per_suspect {
            prop_assert_eq!(&swapped.per_suspect[&rename(s)], i);
        }
    }

    #[test]
    fn answers_are_deterministic(case in attr_case_strategy()) {
        let first = ask(&case, &ACTORS, &ACTORS);
        let again = ask(&case, &ACTORS, &ACTORS);
        let reversed = ask(&case, &ACTORS, &["s1", "s0"]);
        prop_assert_eq!(&first, &again);
        prop_assert_eq!(&first.per_suspect, &reversed.per_suspect);
        prop_assert_eq!(&first.trace, &reversed.trace);
        let a: BTreeSet<_> = first.most_probable.iter().collect();
        let b: BTreeSet<_> = reversed.most_probable.iter().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn consistent_evidence_never_fails(case in attr_case_strategy(), pick in 0usize..8) {
        // Evidence pinned to the hidden distribution keeps the model satisfiable.
        let fw = case.framework(&ACTORS);
        let hidden = FwCase { weights: case.weights.clone(), em: case.em.clone(), am: AmCase { elements: vec![] }, af: vec![] };
        let atom = em_atom(pick % FW_ATOMS);
        let p: Rational = hidden
            .distribution()
            .into_iter()
            .filter(|(w, _)| w.contains(&atom))
            .map(|(_, x)| x)
            .sum();
        let evidence = ProbabilisticFormula::new(inca::language::Formula::atom(atom), p, Rational::from_integer(0.into())).unwrap();
        let query = AttributionQuery::new(&ACTORS, OPERATION).with_evidence(vec![evidence]);
        let answer = most_probable_suspects(&fw, &query);
        prop_assert!(answer.is_ok(), "{:?}", answer.err());
    }
}

#[test]
fn worked_example_matches_pipeline_with_every_annotation() {
    let (_, fw) = load(&fixture("worm123_full.inca"), LoadOptions::default()).unwrap();
    let query = AttributionQuery::new(&["baja", "mojave", "krasnovia"], "worm123");
    let answer = most_probable_suspects(&fw, &query).unwrap();
    let row = |f: &str, lo: i128, hi: i128| {
        (
            inca::kb::parse_formula(f).unwrap(),
            Q::new(lo, 10),
            Q::new(hi, 10),
        )
    };
    let rows = [
        row("govCybLab(baja)", 7, 9),
        row("cybCapAge(baja,5)", 1, 3),
        row("mseTT(baja,2)", 8, 10),
    ];
    let oracle = pipeline_oracle(&fw, &rows, &["baja", "mojave", "krasnovia"], "worm123");
    let got: BTreeSet<String> = answer.most_probable.iter().cloned().collect();
    assert_eq!(got, oracle.most_probable);
    for (s, (lo, hi)) in &oracle.per_suspect {
        assert_eq!(answer.per_suspect[s].lower, to_big(lo), "{s}");
        assert_eq!(answer.per_suspect[s].upper, to_big(hi), "{s}");
    }
}
