use cuspidal::arith::{nu, factorial, truncation_set, SemigroupPair};
use cuspidal::picard::{canonical_cd, lambda_weights, lambda_weights_with, VirtualRep};
use proptest::prelude::*;

const PAIRS: [(u64, u64); 5] = [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)];

fn pair() -> impl Strategy<Value = SemigroupPair> {
    (2u64..12, 2u64..12)
        .prop_filter("coprime", |(a, b)| num_integer::gcd(*a, *b) == 1)
        .prop_map(|(a, b)| SemigroupPair::new(a, b).unwrap())
}

fn brute_ell(a: u64, b: u64, m: i64) -> u64 {
    (1..=m.max(0) as u64).filter(|&i| a * i < m as u64 && (m as u64 - a * i).is_multiple_of(b)).count() as u64
}

#[test]
fn ell_shift_and_popoviciu() {
    for (a, b) in PAIRS {
        let sg = SemigroupPair::new(a, b).unwrap();
        for m in 0..=500i64 {
            assert_eq!(sg.reps_nonneg(m), sg.ell(m + (a + b) as i64));
            assert_eq!(sg.ell(m), brute_ell(a, b, m));
            if m >= 1 {
                let f = m as u64 / (a * b);
                assert!(sg.reps_nonneg(m) == f || sg.reps_nonneg(m) == f + 1);
            }
        }
    }
}

#[test]
fn m_sets_and_ell_counts() {
    for (a, b) in PAIRS {
        let sg = SemigroupPair::new(a, b).unwrap();
        for i in 1..=25 {
            let mi = sg.m_set(i).unwrap();
            assert_eq!(mi.len() as u64, (a - 1) * (b - 1) / 2);
            assert_eq!(sg.count_ell_equal(i), a * b);
            if i <= 6 {
                let below: Vec<u64> = (1..a * b * (i + 2)).filter(|&m| sg.ell(m as i64) < i).collect();
                let complement: Vec<u64> = (1..=a * b * i).filter(|k| !mi.contains(k)).collect();
                assert_eq!(below, complement);
            }
        }
    }
}

#[test]
fn truncation_sets_are_bounded() {
    for (a, b) in PAIRS {
        let sg = SemigroupPair::new(a, b).unwrap();
        for r in 0..8 {
            let s = truncation_set(sg, r);
            assert!(s.max().unwrap() < a * b * (r + 2));
            assert!(s.is_subset(&truncation_set(sg, r + 1)));
            let brute: Vec<u64> = (1..a * b * (r + 4)).filter(|&m| sg.ell(m as i64) <= r).collect();
            assert_eq!(s.elements(), &brute[..]);
        }
    }
}

#[test]
fn lambda_has_ell_weights() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5)] {
        let sg = SemigroupPair::new(a, b).unwrap();
        for m in 1..=500 {
            assert_eq!(lambda_weights(sg, m).unwrap().len() as u64, sg.ell(m as i64));
        }
    }
}

#[test]
fn lambda_fixed_point_compatibility() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5)] {
        let sg = SemigroupPair::new(a, b).unwrap();
        for m in 1..=240u64 {
            let w = lambda_weights(sg, m).unwrap();
            for (p, _) in cuspidal::arith::factorize(m) {
                let mut d = p;
                while m % d == 0 {
                    let n = w.iter().filter(|&&nu| nu % d as i64 == 0).count();
                    assert_eq!(n, lambda_weights(sg, m / d).unwrap().len());
                    let rep = VirtualRep::from_weights(m, &w).unwrap();
                    let small = VirtualRep::from_weights(m / d, &lambda_weights(sg, m / d).unwrap()).unwrap();
                    assert_eq!(rep.fixed_points(d).unwrap(), small);
                    d *= p;
                }
            }
        }
    }
}

#[test]
fn valuation_examples() {
    assert_eq!(nu(2, &113400u32.into()).unwrap(), 3);
    assert_eq!(nu(3, &factorial(15)).unwrap(), 6);
    assert_eq!(nu(7, &1u32.into()).unwrap(), 0);
    assert!(nu(4, &8u32.into()).is_err());
}

proptest! {
    #[test]
    fn cd_choice_invariance(sg in pair(), m in 1u64..300, k in -3i64..=3) {
        let (c, d) = canonical_cd(sg);
        let (a, b) = (sg.a() as i64, sg.b() as i64);
        prop_assert_eq!(a * d - b * c, 1);
        let base = VirtualRep::from_weights(m, &lambda_weights_with(sg, m, c, d)).unwrap();
        let moved = VirtualRep::from_weights(m, &lambda_weights_with(sg, m, c + k * a, d + k * b)).unwrap();
        prop_assert_eq!(base, moved);
    }

    #[test]
    fn ell_matches_brute_force(sg in pair(), m in -20i64..400) {
        prop_assert_eq!(sg.ell(m), brute_ell(sg.a(), sg.b(), m));
    }

    #[test]
    fn quotients_compose(sg in pair(), r in 0u64..4, d in 1u64..6, e in 1u64..6) {
        let s = truncation_set(sg, r);
        let left = s.quot(d).unwrap().quot(e).unwrap();
        let right = s.quot(d * e).unwrap();
        prop_assert_eq!(left.elements(), right.elements());
    }

    #[test]
    fn fixed_dims_are_additive(m in 2u64..40, w1 in proptest::collection::vec(0i64..80, 0..5), w2 in proptest::collection::vec(0i64..80, 0..5)) {
        let x = VirtualRep::from_weights(m, &w1).unwrap();
        let y = VirtualRep::from_weights(m, &w2).unwrap();
        let sum = cuspidal::picard::fixed_dims(&x.plus(&y).unwrap()).values;
        let parts: Vec<i64> = cuspidal::picard::fixed_dims(&x).values.iter()
            .zip(cuspidal::picard::fixed_dims(&y).values).map(|(p, q)| p + q).collect();
        prop_assert_eq!(sum, parts);
    }
}
