use proptest::prelude::*;

use r0filters::algebra::{boolean_algebra, ElementId};
use r0filters::constructions::two_level;
use r0filters::crisp::{enumerate_fated_filters, enumerate_fated_filters_naive, is_fated_filter, DEFAULT_ENUMERATION_BOUND};
use r0filters::fixtures;
use r0filters::{Analyzer, FuzzySubset, Grade, KParam, Notion, R0Algebra};

const DENOM: i128 = 10;

fn algebras() -> Vec<R0Algebra> {
    vec![fixtures::example34(), boolean_algebra(2).unwrap(), fixtures::boolean2()]
}

fn k_values() -> Vec<KParam> {
    [0, 2, 3, 4, 5].iter().map(|&n| KParam::ratio(n, DENOM).unwrap()).collect()
}

fn subject(n: usize, raw: &[i128]) -> FuzzySubset {
    FuzzySubset::new(raw[..n].iter().map(|&v| Grade::ratio(v, DENOM).unwrap()).collect())
}

fn in_vee_qk(mu: &FuzzySubset, x: ElementId, t: Grade, k: KParam) -> bool {
    let v = mu.grade(x).value();
    v >= t.value() || v + t.value() + k.value() > Grade::ONE.value()
}

/// The fuzzy-point definition with `t` and `s` ranging over multiples of
/// `1/(2·DENOM)`, enough to separate every breakpoint of tenths.
fn pointwise_oracle(a: &R0Algebra, mu: &FuzzySubset, k: KParam) -> bool {
    let ts: Vec<Grade> = (1..=2 * DENOM).map(|j| Grade::ratio(j, 2 * DENOM).unwrap()).collect();
    let top = a.top();
    for x in a.elements() {
        for &t in &ts {
            if mu.grade(x) >= t && !in_vee_qk(mu, top, t, k) {
                return false;
            }
        }
    }
    for x in a.elements() {
        for y in a.elements() {
            let inner = a.arrow(a.arrow(x, y), x);
            for p in a.elements() {
                let premise = mu.grade(a.arrow(p, inner));
                let ap = mu.grade(p);
                for &t in ts.iter().filter(|&&t| premise >= t) {
                    for &s in ts.iter().filter(|&&s| ap >= s) {
                        if !in_vee_qk(mu, x, t.min(s), k) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn characterizations_agree(which in 0usize..3, raw in prop::collection::vec(0i128..=DENOM, 6)) {
        let algs = algebras();
        let a = &algs[which];
        let an = Analyzer::new(a, DEFAULT_ENUMERATION_BOUND).unwrap();
        let mu = subject(a.size(), &raw);
        for k in k_values() {
            let qk = an.check(Notion::Qk, &mu, k).unwrap().passed();
            prop_assert_eq!(qk, pointwise_oracle(a, &mu, k), "oracle at k={}", k);
            for n in [Notion::QkPointwise, Notion::LevelU, Notion::LevelBracket] {
                prop_assert_eq!(qk, an.check(n, &mu, k).unwrap().passed(), "{} at k={}", n, k);
            }
            for n in [Notion::LevelQk, Notion::DerivedRules] {
                prop_assert!(!qk || an.check(n, &mu, k).unwrap().passed(), "qk => {} at k={}", n, k);
            }
            if an.check(Notion::StrongQk, &mu, k).unwrap().passed() {
                prop_assert!(qk);
            }
        }
    }

    #[test]
    fn in_in_implies_every_k(which in 0usize..3, raw in prop::collection::vec(0i128..=DENOM, 6)) {
        let algs = algebras();
        let a = &algs[which];
        let an = Analyzer::new(a, DEFAULT_ENUMERATION_BOUND).unwrap();
        let mu = subject(a.size(), &raw);
        let in_in = an.check(Notion::InIn, &mu, KParam::ZERO).unwrap().passed();
        prop_assert_eq!(in_in, an.check(Notion::InInPointwise, &mu, KParam::ZERO).unwrap().passed());
        let verdicts: Vec<bool> = k_values().iter().map(|&k| an.check(Notion::Qk, &mu, k).unwrap().passed()).collect();
        if in_in {
            prop_assert!(verdicts.iter().all(|&v| v));
        }
        for w in verdicts.windows(2) {
            prop_assert!(!w[0] || w[1], "monotone in k: {:?}", verdicts);
        }
    }

    #[test]
    fn fuzzy_filter_forms_agree(which in 0usize..3, raw in prop::collection::vec(0i128..=DENOM, 6)) {
        let algs = algebras();
        let a = &algs[which];
        let an = Analyzer::new(a, DEFAULT_ENUMERATION_BOUND).unwrap();
        let mu = subject(a.size(), &raw);
        let ff = an.check(Notion::FuzzyFilter, &mu, KParam::ZERO).unwrap().passed();
        prop_assert_eq!(ff, an.check(Notion::FuzzyFilterMp, &mu, KParam::ZERO).unwrap().passed());
        prop_assert_eq!(ff, an.check(Notion::FuzzyFilterLevels, &mu, KParam::ZERO).unwrap().passed());
    }

    #[test]
    fn failure_witnesses_confirm(which in 0usize..3, raw in prop::collection::vec(0i128..=DENOM, 6), ki in 0usize..5) {
        let algs = algebras();
        let a = &algs[which];
        let an = Analyzer::new(a, DEFAULT_ENUMERATION_BOUND).unwrap();
        let mu = subject(a.size(), &raw);
        let k = k_values()[ki];
        for n in Notion::ALL {
            let v = an.check(n, &mu, k).unwrap();
            if !v.passed() {
                prop_assert!(an.confirm_witness(&mu, k, &v).unwrap(), "{} witness at k={}", n, k);
            }
        }
    }

    #[test]
    fn text_round_trip(which in 0usize..3, raw in prop::collection::vec(0i128..=DENOM, 6)) {
        let algs = algebras();
        let a = &algs[which];
        let mu = subject(a.size(), &raw);
        prop_assert_eq!(FuzzySubset::parse(a, &mu.to_text(a)).unwrap(), mu);
        prop_assert_eq!(R0Algebra::parse(&a.to_text()).unwrap(), a.clone());
    }

    #[test]
    fn two_level_outputs_pass(which in 0usize..3, member in 0usize..8, t1 in 0i128..=DENOM, t2 in 1i128..DENOM, ki in 0usize..5) {
        let algs = algebras();
        let a = &algs[which];
        let k = k_values()[ki];
        let an = Analyzer::new(a, DEFAULT_ENUMERATION_BOUND).unwrap();
        let members = an.family().unwrap().members().to_vec();
        let f = members[member % members.len()];
        let (t1, t2) = (Grade::ratio(t1, DENOM).unwrap(), Grade::ratio(t2, DENOM).unwrap());
        match two_level(a, f, t1, t2, k) {
            Ok(mu) => {
                prop_assert!(t1 >= k.half() && t2 < k.half());
                prop_assert!(an.check(Notion::Qk, &mu, k).unwrap().passed());
                prop_assert!(an.check(Notion::QkPointwise, &mu, k).unwrap().passed());
            }
            Err(_) => prop_assert!(t1 < k.half() || t2 >= k.half()),
        }
    }
}

#[test]
fn boolean_families_match_the_naive_scan() {
    for atoms in 1..=3 {
        let a = boolean_algebra(atoms).unwrap();
        let family = enumerate_fated_filters(&a, DEFAULT_ENUMERATION_BOUND).unwrap();
        let naive = enumerate_fated_filters_naive(&a, DEFAULT_ENUMERATION_BOUND).unwrap();
        assert_eq!(family.members(), naive.as_slice(), "{atoms} atoms");
        assert!(family.intersection_counterexample().is_none());
        let unit = r0filters::CrispSubset::from_elements(a.size(), [a.top()]);
        assert!(is_fated_filter(&a, unit).unwrap().passed());
    }
}
