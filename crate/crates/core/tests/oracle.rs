//! Library results against exhaustive factorization of small polynomials.

mod common;

use common::{deg, factor, has_factor_of_degree, is_primitive, render, trinomial, Mask};
use num_bigint::BigUint;
use proptest::prelude::*;
use trinom::ait::{ait, AitConfig};
use trinom::apt::{apt, FactorTable};
use trinom::density::{census, irreducible_count, largest_factor_profile, primitive_count, Mode};
use trinom::poly::{factor as lib_factor, is_irreducible};
use trinom::swan::{nu_parity, Parity};
use trinom::DensePoly;

fn dense(p: Mask) -> DensePoly {
    DensePoly::from_u64(p)
}

#[test]
fn oracle_sieve_counts() {
    // irreducibles of degree 1..=8 other than x: 1, 1, 2, 3, 6, 9, 18, 30
    let counts: Vec<usize> =
        (1..=8).map(|d| common::irreducibles_up_to(d).iter().filter(|&&p| deg(p) == d && p != 2).count()).collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 6, 9, 18, 30]);
}

#[test]
fn swan_parity_matches_factor_count() {
    for n in 2..=30u32 {
        for s in 1..n {
            let count = factor(trinomial(n, s)).len() as u64;
            let got = nu_parity(n as u64, s as u64).unwrap().parity;
            assert_eq!(got, Parity::of(count), "n={n} s={s}");
        }
    }
}

#[test]
fn ait_verdicts_match_small_degrees() {
    let cfg = AitConfig::default();
    for n in 2..=28u32 {
        for r in n / 2 + 1..=n {
            let delta = n - r;
            for s in 1..n {
                let want = has_factor_of_degree(n, s, r).is_some();
                let v = ait(r as u64, s as u64, delta as u64, &cfg).unwrap();
                assert_eq!(v.accepted, want, "r={r} s={s} delta={delta}");
                if want {
                    let small = v.outcome.unwrap().small_product.unwrap();
                    let expect: Mask =
                        factor(trinomial(n, s)).into_iter().filter(|&q| deg(q) != r).fold(1, common::mul);
                    assert_eq!(small, dense(expect), "S for r={r} s={s}");
                }
            }
        }
    }
}

#[test]
fn apt_verdicts_match_small_degrees() {
    let table = FactorTable::new();
    let cfg = AitConfig::default();
    for n in 2..=20u32 {
        for r in n / 2 + 1..=n {
            for s in 1..n {
                let want = has_factor_of_degree(n, s, r).is_some_and(is_primitive);
                let v = apt(r as u64, s as u64, (n - r) as u64, &table, &cfg).unwrap();
                assert_eq!(v.accepted, want, "r={r} s={s}");
            }
        }
    }
}

#[test]
fn profiles_match_oracle() {
    for n in 2..=40u32 {
        for s in 1..n {
            let want = factor(trinomial(n, s)).into_iter().map(deg).find(|&d| 2 * d > n).map(u64::from);
            assert_eq!(largest_factor_profile(n as u64, s as u64).unwrap(), want, "n={n} s={s}");
        }
    }
}

#[test]
fn census_matches_reference_file() {
    let rows = census(30, Mode::Apt, &FactorTable::new()).unwrap();
    let expected = include_str!("data/census30_apt.csv");
    let mut lines = vec!["n,N_ait,E_ait,N_apt,E_apt".to_string()];
    lines.extend(rows.iter().map(|r| r.to_csv(Mode::Apt, false)));
    assert_eq!(lines.join("\n") + "\n", expected);
}

#[test]
fn counts_match_enumeration() {
    // degree-d irreducibles other than x, and the primitive ones among them
    let table = FactorTable::new();
    for d in 1..=16u32 {
        let irr: Vec<Mask> = ((1 << d)..(1 << (d + 1))).filter(|&p| p != 2 && common::is_irreducible(p)).collect();
        assert_eq!(irreducible_count(d as u64), BigUint::from(irr.len()), "I_{d}");
        let prim = irr.iter().filter(|&&p| common::order_of_x(p) == (1u128 << d) - 1).count();
        assert_eq!(primitive_count(d as u64, &table).unwrap(), BigUint::from(prim), "P_{d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dense_factorization_matches_oracle(p in 1u64..(1 << 40)) {
        let ours: Vec<String> = lib_factor(&dense(p))
            .unwrap()
            .into_iter()
            .flat_map(|(q, m)| std::iter::repeat_n(q.to_string(), m as usize))
            .collect();
        let want: Vec<String> = factor(p).into_iter().map(render).collect();
        prop_assert_eq!(ours, want);
    }

    #[test]
    fn irreducibility_matches_oracle(p in 2u64..(1 << 24)) {
        prop_assert_eq!(is_irreducible(&dense(p)), common::is_irreducible(p));
    }
}
