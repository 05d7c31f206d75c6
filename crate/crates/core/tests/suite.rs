//! The classical identities, orbit by orbit.

mod common;

use common::*;
use unipotent::classical::{decompose_special, induce_zero, unipotent_count, LeviSpec};
use unipotent::exec::Execution;
use unipotent::pipeline::{analyze_classical, classical_suite};
use unipotent::{ClassicalFamily, Letter};

#[test]
fn suite_up_to_rank_six() {
    let o = criterion5();
    assert!(o.pass, "{}", o.detail);
}

#[test]
fn suite_at_rank_eight() {
    for l in [Letter::B, Letter::C, Letter::D] {
        let r = classical_suite(l, 8, Execution::default());
        assert!(r.ok(), "{l}: {:?}", r.failures);
        assert!(r.non_even > 0);
    }
}

#[test]
fn suite_covers_documented_orbits() {
    let r = analyze_classical(&orbit(Letter::B, "[3,2,2]")).unwrap();
    assert_eq!(decompose_special(&orbit(Letter::B, "[3,2,2]")).unwrap().q, 0);
    assert_eq!(r.pi_count, 1);
    assert_eq!(r.o.to_string(), "[3,3]");

    let o = orbit(Letter::B, "[7,1,1]");
    assert_eq!(decompose_special(&o).unwrap().q, 1);
    assert_eq!(unipotent_count(&o).unwrap(), 2);
    let r = analyze_classical(&o).unwrap();
    assert_eq!(r.pi_count, 2);
    assert_eq!(r.o.to_string(), "[2,2,1,1,1,1]");
    assert!(r.ok());
}

#[test]
fn richardson_from_gl2_in_so4() {
    let o = induce_zero(&LeviSpec::new(vec![2], 0), ClassicalFamily::new(Letter::D, 4).unwrap()).unwrap();
    assert_eq!(o.p.parts(), [2, 2]);
    // Dimension oracle: the Richardson orbit has dim g − dim l.
    assert_eq!(graded_dimension(&o), 6 - 4);
}

#[test]
fn richardson_dimension_is_twice_the_nilradical() {
    for fam in families_up_to_rank(5) {
        let rank = fam.rank();
        for a in 1..=rank {
            let rest = rank - a;
            let levi = LeviSpec::new(vec![a], rest);
            let o = induce_zero(&levi, fam).unwrap();
            let co = ClassicalFamily::of_rank(fam.letter, rest);
            let levi_roots = a * (a - 1) + if rest == 0 { 0 } else { co.root_count() };
            assert_eq!(graded_dimension(&o), fam.root_count() - levi_roots, "{fam} gl({a})");
        }
    }
}
