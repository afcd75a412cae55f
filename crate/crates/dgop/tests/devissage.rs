use dgop::coalgebra::{self, verify_pcoalgebra};
use dgop::operad::AxiomConfig;
use dgop::random;
use dgop::Field;

#[test]
fn glue_then_restrict_round_trips() {
    let mut r = random::rng(11);
    for p in 1..=3usize {
        for k in -2..=2i64 {
            for _ in 0..20 {
                let inst = random::gluing_instance(Field::f2(), p, k, 3, &mut r);
                let g = inst.base.glue(inst.cell.clone(), inst.delta.clone()).unwrap();
                assert_eq!(g.restrict_last(), inst.base);
                let op = g.presentation.realize_weighted((2 * p - 1).min(4), None, Some(2)).unwrap();
                let rep = verify_pcoalgebra(&op, &g.to_pcoalgebra(&op), &AxiomConfig::exhaustive());
                assert!(rep.passed(), "p={p} k={k} {:?}", rep.first_failure());
            }
        }
    }
}

#[test]
fn extension_count_matches_enumeration() {
    let mut r = random::rng(5);
    for p in 1..=2usize {
        for k in -1..=1i64 {
            for dim in 1..=2 {
                let inst = random::gluing_instance(Field::f2(), p, k, dim, &mut r);
                let brute = coalgebra::enumerate_cooperations(&inst.base.carrier, p, k)
                    .into_iter()
                    .filter(|d| inst.base.glue(inst.cell.clone(), d.clone()).is_ok())
                    .count() as u128;
                let db = &inst.base.generators[0];
                assert_eq!(coalgebra::count_null_homotopies(&inst.base.carrier, db), Some(brute));
            }
        }
    }
}
