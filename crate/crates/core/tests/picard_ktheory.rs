use cuspidal::arith::{is_prime, primes_up_to, SemigroupPair};
use cuspidal::ktheory::{
    factor_identities, fp_square_orders, k_group_report, k_odd_order, k_odd_order_direct,
    k_odd_order_factored, valuation_crosscheck,
};
use cuspidal::picard::{fixed_dims, image_congruence_cp, lattice_contains, psi_kernel, VirtualRep};
use num_bigint::BigUint;

fn sg(a: u64, b: u64) -> SemigroupPair {
    SemigroupPair::new(a, b).unwrap()
}

#[test]
fn psi_injective_only_for_small_prime_powers() {
    for m in 2..=32u64 {
        let f = cuspidal::arith::factorize(m);
        if f.len() != 1 {
            continue;
        }
        let zero = psi_kernel(m).unwrap().is_empty();
        assert_eq!(zero, matches!(m, 2..=4), "m = {m}");
    }
}

#[test]
fn c5_kernel() {
    let mut x = VirtualRep::zero(5).unwrap();
    x.add_plane(1, 1);
    x.add_plane(2, -1);
    assert!(fixed_dims(&x).values.iter().all(|&v| v == 0));
    let k = psi_kernel(5).unwrap();
    assert_eq!(k.len(), 1);
    assert!(k[0] == x || k[0] == x.scale(-1));
    assert!(lattice_contains(&k, &x.scale(2)).unwrap());
}

#[test]
fn kernel_elements_have_zero_dimension_function() {
    for m in 2..=30u64 {
        for r in psi_kernel(m).unwrap() {
            assert!(fixed_dims(&r).values.iter().all(|&v| v == 0), "m = {m}");
        }
    }
}

#[test]
fn cp_image_parity() {
    for p in [3, 5, 7, 11, 13] {
        assert!(image_congruence_cp(p).unwrap());
    }
    assert!(image_congruence_cp(4).is_err());
}

#[test]
fn order_for_3_5() {
    let r = k_group_report(sg(3, 5), 1).unwrap();
    assert_eq!(r.odd_order, Some(BigUint::from(113400u32)));
    assert_eq!(r.factorization_string(), "2^3·3^4·5^2·7");
    assert_eq!(k_odd_order_direct(sg(3, 5), 1).unwrap(), BigUint::from(113400u32));
}

#[test]
fn order_formula_matches_direct_product() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)] {
        for i in 1..=12 {
            assert_eq!(k_odd_order(sg(a, b), i).unwrap(), k_odd_order_direct(sg(a, b), i).unwrap());
        }
    }
}

#[test]
fn orders_positive_and_factored() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)] {
        for i in 1..=50 {
            let f = k_odd_order_factored(sg(a, b), i).unwrap();
            assert!(f.keys().all(|&p| is_prime(p) && p <= a * b * i));
            assert!(k_odd_order(sg(a, b), i).unwrap() >= BigUint::from(1u32));
        }
    }
}

#[test]
fn valuations_and_factor_identities_small() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5)] {
        for i in 1..=8 {
            assert!(factor_identities(sg(a, b), i).unwrap().all());
            for p in primes_up_to(a * b * i) {
                assert!(valuation_crosscheck(sg(a, b), i, p).unwrap(), "({a},{b}) i={i} p={p}");
            }
        }
    }
}

#[test]
fn fp_exponents_nonnegative() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)] {
        for p in [2, 3, 5, 7, 11] {
            if a % p == 0 {
                assert!(fp_square_orders(sg(a, b), 1, p).is_err());
                continue;
            }
            for r in 0..10 {
                let f = fp_square_orders(sg(a, b), r, p).unwrap();
                assert!(f.exponent >= 0);
                assert!(f.s_ab <= f.s_a.min(f.s_b) && f.s_a <= f.s && f.s_b <= f.s);
            }
        }
    }
    assert!(fp_square_orders(sg(2, 3), 1, 9).is_err());
}
