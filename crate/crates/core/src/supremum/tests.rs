use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::families::*;
use super::*;
use crate::rationals::{self, Rational};
use crate::realnum::{parse_real, DEFAULT_BUDGET};
use crate::terminating::TerminatingDecimal;

fn r(s: &str) -> RealNumber {
    parse_real(s).unwrap()
}

fn t(s: &str) -> TerminatingDecimal {
    s.parse().unwrap()
}

fn set(items: &[&str]) -> BTreeSet<TerminatingDecimal> {
    items.iter().map(|s| t(s)).collect()
}

#[test]
fn sums_and_products_of_sets() {
    assert_eq!(set_sum(&set(&["0.1", "0.2"]), &set(&["1"])), set(&["1.1", "1.2"]));
    let b = set(&["0.5", "-3", "2.25"]);
    assert_eq!(set_sum(&set(&["0"]), &b), b);
    assert_eq!(set_sum(&set(&["0.5", "-0.5"]), &set(&["0.5", "-0.5"])), set(&["1", "0", "-1"]));
    assert_eq!(set_product(&set(&["0.2"]), &set(&["0.3"])), set(&["0.06"]));
    assert_eq!(set_product(&set(&["1"]), &b), b);
    assert_eq!(set_product(&set(&["2", "3"]), &set(&["2", "3"])), set(&["4", "6", "9"]));
}

#[test]
fn built_in_suprema() {
    let a = sup(&mixed_expansions()).unwrap();
    assert_eq!(a, r("2.1201(1)"));
    assert_eq!(a.prefix(30).unwrap().to_string(), "2.120111111111111111111111111111");
    assert_eq!(sup(&nines_approaching_one()).unwrap(), r("1"));
    assert_eq!(sup(&negated_nines()).unwrap(), r("-0.19"));
    assert_eq!(sup(&negative_powers_of_ten()).unwrap(), r("0"));
}

#[test]
fn families_by_name() {
    assert_eq!(sup(&family_by_name("paper-B").unwrap()).unwrap(), r("1"));
    assert_eq!(sup(&family_by_name("lower-cut 0.1(6)").unwrap()).unwrap(), r("0.1(6)"));
    assert_eq!(sup(&family_by_name(" lower-cut  -2.5 ").unwrap()).unwrap(), r("-2.5"));
    assert!(family_by_name("paper-E").is_err());
    assert!(family_by_name("lower-cut").is_err());
    assert!(family_by_name("lower-cut7").is_err());
    assert!(family_by_name("lower-cut x").is_err());
}

#[test]
fn upper_bounds() {
    let b = nines_approaching_one();
    assert_eq!(is_upper_bound(&r("1"), &b, 200), UpperBound::Yes);
    assert_eq!(is_upper_bound(&r("0.999"), &b, 200), UpperBound::No(r("0.9991")));
    let a = mixed_expansions();
    assert_eq!(is_upper_bound(&r("2"), &a, 200), UpperBound::No(r("2.12")));
    assert_eq!(is_upper_bound(&r("-0.2"), &negated_nines(), 200), UpperBound::No(r("-0.19")));
    assert_eq!(is_upper_bound(&r("-0.19"), &negated_nines(), 200), UpperBound::Yes);
    match is_upper_bound(&r("-0.00001"), &negative_powers_of_ten(), 200) {
        UpperBound::No(w) => assert_eq!(w, r("-0.000001")),
        other => panic!("expected a witness, got {other:?}"),
    }
    let finite = BoundedSet::finite(vec![r("0.5"), r("0.(3)")]);
    assert_eq!(is_upper_bound(&r("0.5"), &finite, 10), UpperBound::Yes);
    assert_eq!(is_upper_bound(&r("0.4"), &finite, 10), UpperBound::No(r("0.5")));
}

#[test]
fn certificates() {
    let a = mixed_expansions();
    assert_eq!(check_sup_certificate(&r("2.1201(1)"), &a, 50, 200), Certificate::Pass);
    assert_eq!(check_sup_certificate(&r("3"), &a, 50, 200), Certificate::FailLeastness(t("2.5")));
    assert_eq!(check_sup_certificate(&r("2"), &a, 50, 200), Certificate::FailBound(r("2.12")));
    assert_eq!(check_sup_certificate(&r("1"), &nines_approaching_one(), 50, 200), Certificate::Pass);
    assert_eq!(check_sup_certificate(&r("-0.19"), &negated_nines(), 50, 200), Certificate::Pass);
    assert_eq!(check_sup_certificate(&r("0"), &negative_powers_of_ten(), 30, 200), Certificate::Pass);
    assert!(matches!(
        check_sup_certificate(&r("0.001"), &negative_powers_of_ten(), 30, 200),
        Certificate::FailLeastness(_)
    ));
}

#[test]
fn lower_cuts_recover_their_value() {
    for c in ["2.12", "3", "0.1(6)", "0", "-0.5", "-1.(142857)", "0.(9)", "7.0001", "-4"] {
        let c = r(c);
        assert_eq!(sup(&lower_cut(c.clone())).unwrap(), c, "lower cut of {c}");
    }
}

#[test]
fn lower_cut_without_hints() {
    // Periodic values stream their own digits.
    let s = sup_of_oracle(Arc::new(LowerCut::new(r("0.1(6)")).without_hints()), 64).unwrap();
    assert!(!s.is_exact());
    assert_eq!(s.prefix(100).unwrap(), r("0.1(6)").prefix(100).unwrap());
    // Terminating values walk into an endless run of 9s.
    let e = sup_of_oracle(Arc::new(LowerCut::new(r("2.12")).without_hints()), 64);
    assert_eq!(e, Err(Error::NineTailUndetectable { index: 3 }));
    let e = sup_of_oracle(Arc::new(LowerCut::new(r("3")).without_hints()), 16);
    assert_eq!(e, Err(Error::NineTailUndetectable { index: 1 }));
}

/// An all-negative oracle whose minimum digits end in 9s. No set of
/// canonical members produces this walk; it only drives the 9-tail branch
/// for negative sets.
#[derive(Clone)]
struct NegativeNineTail;

impl PrefixMaxOracle for NegativeNineTail {
    fn has_nonnegative(&self) -> bool {
        false
    }
    fn max_integral(&self) -> BigInt {
        BigInt::from(0)
    }
    fn max_next_digit(&self, prefix: &DigitPrefix) -> u8 {
        if prefix.is_empty() {
            1
        } else {
            9
        }
    }
    fn tail_hint(&self, prefix: &DigitPrefix) -> TailHint {
        if prefix.len() >= 1 {
            TailHint::AllNinesFrom(2)
        } else {
            TailHint::Unknown
        }
    }
    fn member_extending(&self, _prefix: &DigitPrefix) -> RealNumber {
        r("-0.2")
    }
}

#[test]
fn negative_nine_tail_branch() {
    // -0.1999... is -0.2.
    assert_eq!(sup_by_digits(&NegativeNineTail).unwrap(), r("-0.2"));
}

#[test]
fn negative_sets_never_walk_into_nines() {
    // Magnitudes 0.19, 0.199, 0.1999, ...: the minimum digits are 1, 9, 0.
    let members: Vec<RealNumber> = (2..12).map(|k| r(&format!("-0.1{}", "9".repeat(k - 1)))).collect();
    let s = sup(&BoundedSet::finite(members)).unwrap();
    assert_eq!(s, r("-0.19"));
}

#[test]
fn flagged_stream_rejects_late_nines() {
    // Digits 5 for 200 places, then 9s: the eager scan sees no 9s, so a
    // stream is returned, and reading far enough trips the window check.
    #[derive(Clone)]
    struct LateNines;
    impl PrefixMaxOracle for LateNines {
        fn has_nonnegative(&self) -> bool {
            true
        }
        fn max_integral(&self) -> BigInt {
            BigInt::from(0)
        }
        fn max_next_digit(&self, prefix: &DigitPrefix) -> u8 {
            if prefix.len() < 200 {
                5
            } else {
                9
            }
        }
        fn member_extending(&self, prefix: &DigitPrefix) -> RealNumber {
            prefix.to_terminating().into()
        }
    }
    let s = sup_by_digits(&LateNines).unwrap();
    assert_eq!(s.digit_at(100).unwrap(), 5);
    assert!(matches!(s.prefix(250), Err(Error::CanonicalViolation { index: 201, .. })));
}

fn exact_real() -> impl Strategy<Value = RealNumber> {
    (-3000i64..3000, 1i64..120).prop_map(|(p, q)| rationals::to_decimal(&Rational::new(p, q).unwrap()))
}

fn terminating() -> impl Strategy<Value = TerminatingDecimal> {
    (-50_000i64..50_000, 0usize..4).prop_map(|(v, s)| TerminatingDecimal::from_scaled(v, s))
}

fn max_of(members: &[RealNumber]) -> Rational {
    members.iter().map(|m| m.as_rational().unwrap()).max().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn finite_sup_is_max_and_walk_agrees(members in prop::collection::vec(exact_real(), 1..12)) {
        let s = sup(&BoundedSet::finite(members.clone())).unwrap();
        prop_assert_eq!(s.as_rational().unwrap(), max_of(&members));
        let walked = sup_by_digits(&FiniteFamily::new(members.clone())).unwrap();
        prop_assert_eq!(walked.prefix(120).unwrap(), s.prefix(120).unwrap());
        prop_assert_eq!(walked, s.clone());
        prop_assert_eq!(is_upper_bound(&s, &BoundedSet::finite(members.clone()), DEFAULT_BUDGET), UpperBound::Yes);
    }

    #[test]
    fn subsets_have_smaller_suprema(members in prop::collection::vec(exact_real(), 2..10), keep in 1usize..9) {
        let part = members[..keep.min(members.len())].to_vec();
        let small = sup(&BoundedSet::finite(part)).unwrap();
        let big = sup(&BoundedSet::finite(members)).unwrap();
        prop_assert!(small.as_rational().unwrap() <= big.as_rational().unwrap());
    }

    #[test]
    fn translation_and_scaling(members in prop::collection::vec(terminating(), 1..10), b in terminating()) {
        let s = members.iter().max().unwrap().clone();
        let reals = |xs: Vec<TerminatingDecimal>| BoundedSet::finite(xs.into_iter().map(RealNumber::from).collect());
        let shifted = sup(&reals(members.iter().map(|x| x + &b).collect())).unwrap();
        prop_assert_eq!(shifted, RealNumber::from(&s + &b));
        if !b.is_negative() {
            let scaled = sup(&reals(members.iter().map(|x| x * &b).collect())).unwrap();
            prop_assert_eq!(scaled, RealNumber::from(&s * &b));
        }
    }

    #[test]
    fn lower_cut_sup_is_the_cut_point(c in exact_real()) {
        let s = sup(&lower_cut(c.clone())).unwrap();
        prop_assert_eq!(s.prefix(100).unwrap(), c.prefix(100).unwrap());
        prop_assert_eq!(s, c);
    }

    #[test]
    fn finite_certificates_pass(members in prop::collection::vec(exact_real(), 1..8)) {
        let set = BoundedSet::finite(members);
        let s = sup(&set).unwrap();
        prop_assert_eq!(check_sup_certificate(&s, &set, 20, 200), Certificate::Pass);
    }
}
