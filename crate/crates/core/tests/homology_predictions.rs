use cuspidal::arith::SemigroupPair;
use cuspidal::equivariant::{
    certify_sigma, certify_truncated, compare_x_vs_y, predict_sigma, predict_truncated, CheckStatus,
};
use cuspidal::hochschild::{
    boundary, build_small_complex, generator_chain, generator_count, is_cycle, oracle_report, tau_witness_r0,
    to_bar, SmallChain, SmallTerm, DX,
};
use cuspidal::homology::{homology, HomologyOptions};
use cuspidal::simplicial::{build_sigma, build_truncated, fixed_subcomplex};

const PAIRS: [(u64, u64); 4] = [(2, 3), (2, 5), (3, 4), (3, 5)];

fn sg(a: u64, b: u64) -> SemigroupPair {
    SemigroupPair::new(a, b).unwrap()
}

#[test]
fn sigma_homology_is_concentrated() {
    for (a, b) in PAIRS {
        for m in 1..=14 {
            let s = sg(a, b);
            let h = homology(&fixed_subcomplex(s, m, 1).unwrap().complex, HomologyOptions::ranks_only()).unwrap();
            let p = predict_sigma(s, m).unwrap();
            assert!(h.is_torsion_free());
            assert_eq!(h.support().len(), p.modules.len(), "({a},{b},{m})");
            for d in &p.modules {
                assert_eq!(h.rank(d.0), d.1.expected_rank());
            }
        }
    }
}

#[test]
fn sigma_certificates_small() {
    for (a, b) in PAIRS {
        for m in 1..=12 {
            let r = certify_sigma(sg(a, b), m).unwrap();
            assert!(r.is_certified(), "{r:?}");
        }
    }
}

#[test]
fn truncated_family_small() {
    for a in 2..=5 {
        for s in 1..=10 {
            let x = build_truncated(a, s).unwrap();
            let h = homology(&x, HomologyOptions::ranks_only()).unwrap();
            let p = predict_truncated(a, s).unwrap();
            let d = 2 * ((s - 1) / a) as usize + usize::from(s % a == 0);
            assert_eq!(h.support(), vec![d], "a={a} s={s}");
            assert_eq!(h.rank(d), p.modules[0].1.expected_rank());
            assert!(h.is_torsion_free());
            assert!(certify_truncated(a, s).unwrap().structure_passes());
        }
    }
}

#[test]
fn oracle_agrees_small() {
    for (a, b) in PAIRS {
        for m in 1..=14 {
            let r = oracle_report(sg(a, b), m).unwrap();
            assert!(r.equal, "({a},{b},{m}) {r:?}");
        }
    }
}

#[test]
fn small_complex_squares_to_zero() {
    for (a, b) in PAIRS {
        for m in 1..=20 {
            let c = build_small_complex(sg(a, b), m).unwrap();
            for (q, basis) in c.basis.iter().enumerate() {
                for t in basis {
                    let mut x = SmallChain::zero();
                    x.add(*t, 1);
                    assert!(boundary(sg(a, b), &boundary(sg(a, b), &x)).is_zero(), "q={q}");
                }
            }
        }
    }
}

#[test]
fn generator_chains_are_cycles() {
    for (a, b) in PAIRS {
        for m in 1..=40 {
            let s = sg(a, b);
            let Some(n) = generator_count(s, m) else { continue };
            for q in 1..=n {
                let c = generator_chain(s, m, Some(q)).unwrap();
                assert!(is_cycle(s, &c), "({a},{b},{m}) q={q}");
                if m <= 24 {
                    assert!(to_bar(s, &c).unwrap().differential().is_zero());
                }
            }
        }
    }
    let s = sg(2, 3);
    let mut single = SmallChain::zero();
    single.add(SmallTerm { k: 3, i: 1, form: DX, r: 0 }, 1);
    assert!(!is_cycle(s, &single));
    assert!(is_cycle(s, &SmallChain::zero()));
}

#[test]
fn rotation_witnesses() {
    for (a, b) in PAIRS {
        assert!(tau_witness_r0(sg(a, b), a * b).unwrap().holds);
    }
}

#[test]
fn x_versus_y_small() {
    for m in [1, 2, 3, 4, 6, 8, 9, 12] {
        let bundle = compare_x_vs_y(sg(2, 3), m, None).unwrap();
        assert!(bundle.all_certified(), "m = {m}");
    }
    let bundle = compare_x_vs_y(sg(3, 5), 15, None).unwrap();
    assert!(bundle.all_certified());
}

#[test]
fn sigma_examples() {
    let s = sg(2, 3);
    assert_eq!(build_sigma(s, 5).unwrap().dims(), vec![5, 5]);
    let six = build_sigma(s, 6).unwrap();
    assert_eq!(six.dims(), vec![6, 9, 2]);
    assert_eq!(six.euler_characteristic(), -1);
    assert!(build_sigma(s, 1).unwrap().is_empty());
    let r = certify_sigma(s, 6).unwrap();
    assert_eq!(r.check("orbit_spans").unwrap().status, CheckStatus::Pass);
}
