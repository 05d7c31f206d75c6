//! Partition-level routines against brute-force and root-system oracles.

mod common;

use common::*;
use unipotent::classical::{bv_dual, dimension, is_special, ls_dual, orbits};
use unipotent::partitions::{collapse, satisfies_parity};
use unipotent::springer::{b_invariant, springer_rep};
use unipotent::{ClassicalFamily, Letter, Partition};

#[test]
fn collapse_matches_exhaustive_search() {
    let o = criterion6();
    assert!(o.pass, "{}", o.detail);
}

#[test]
fn parity_rule_agrees_with_definition() {
    for n in 1..=14 {
        for p in partitions_of(n) {
            for l in [Letter::A, Letter::B, Letter::C, Letter::D] {
                assert_eq!(satisfies_parity(&Partition::new(p.clone()), l), parity_ok(&p, l), "{l} {p:?}");
            }
        }
    }
}

#[test]
fn collapse_is_idempotent_and_below() {
    for n in 1..=14 {
        for p in Partition::all(n) {
            for l in [Letter::B, Letter::D] {
                let c = collapse(&p, l);
                assert!(below(c.parts(), p.parts()));
                assert_eq!(collapse(&c, l), c);
            }
        }
    }
}

#[test]
fn dimension_matches_grading() {
    for fam in families_up_to_rank(6) {
        for o in orbits(fam) {
            assert_eq!(dimension(&o), graded_dimension(&o), "{o}");
        }
    }
    for n in 1..=8 {
        for o in orbits(ClassicalFamily::new(Letter::A, n).unwrap()) {
            assert_eq!(dimension(&o), graded_dimension(&o), "{o}");
        }
    }
}

#[test]
fn springer_b_is_half_codimension() {
    let o = criterion3();
    assert!(o.pass, "{}", o.detail);
}

#[test]
fn springer_b_beyond_the_required_range() {
    for fam in [
        ClassicalFamily::of_rank(Letter::B, 8),
        ClassicalFamily::of_rank(Letter::C, 8),
        ClassicalFamily::of_rank(Letter::D, 8),
    ] {
        for o in orbits(fam).iter().filter(|o| !o.is_very_even()) {
            assert_eq!(2 * b_invariant(&springer_rep(o)), fam.root_count() - dimension(o), "{o}");
        }
    }
}

#[test]
fn duals_are_involutions_and_reverse_order() {
    let o = criterion4();
    assert!(o.pass, "{}", o.detail);
}

#[test]
fn duals_land_on_special_orbits() {
    for fam in families_up_to_n(14) {
        for o in orbits(fam) {
            assert!(is_special(&ls_dual(&o)), "ls {o}");
            assert!(is_special(&bv_dual(&o)), "bv {o}");
        }
    }
}

#[test]
fn special_counts() {
    // Special classes correspond to families of Weyl group characters;
    // small counts are easy to list by hand.
    assert_eq!(special_count(ClassicalFamily::of_rank(Letter::B, 2)), 3);
    assert_eq!(special_count(ClassicalFamily::of_rank(Letter::C, 2)), 3);
    assert_eq!(special_count(ClassicalFamily::of_rank(Letter::B, 3)), 6);
    assert_eq!(special_count(ClassicalFamily::of_rank(Letter::C, 3)), 6);
    // The B and C counts agree in every rank since bv_dual is a bijection.
    for r in 1..=7 {
        assert_eq!(
            special_count(ClassicalFamily::of_rank(Letter::B, r)),
            special_count(ClassicalFamily::of_rank(Letter::C, r))
        );
    }
}

#[test]
fn documented_examples() {
    let o = orbit(Letter::B, "[3,2,2]");
    assert_eq!(bv_dual(&o), orbit(Letter::C, "[3,3]"));
    assert_eq!(bv_dual(&orbit(Letter::B, "[7,1,1]")), orbit(Letter::C, "[2,2,1,1,1,1]"));
    assert_eq!(collapse(&"[4,3,2]".parse().unwrap(), Letter::B).parts(), [3, 3, 3]);
    assert_eq!(collapse(&"[3,2,1]".parse().unwrap(), Letter::C).parts(), [2, 2, 2]);
}
