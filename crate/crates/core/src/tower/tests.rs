use num_bigint::BigInt;

use super::*;
use crate::catalog;
use crate::malcev::{int, rat, MalcevWord};

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn group_centers() {
    assert_eq!(catalog::h3_lattice().group_center(), vec![ints(&[0, 0, 1])]);
    assert_eq!(catalog::torus(2).group_center(), vec![ints(&[1, 0]), ints(&[0, 1])]);
    assert_eq!(catalog::n4_lattice().group_center(), vec![ints(&[0, 0, 0, 1])]);
    assert_eq!(catalog::h3_times_z().group_center(), vec![ints(&[0, 0, 1, 0]), ints(&[0, 0, 0, 1])]);
}

#[test]
fn primitive_central_choices() {
    let pick = |l: NilLattice| l.pick_primitive_central().unwrap().z;
    assert_eq!(pick(catalog::h3_lattice()), ints(&[0, 0, 1]));
    assert_eq!(pick(catalog::torus(2)), ints(&[0, 1]));
    assert_eq!(pick(catalog::n4_lattice()), ints(&[0, 0, 0, 1]));
    assert!(catalog::h5_lattice().pick_primitive_central().unwrap().is_primitive());
    assert!(NilLattice::point().pick_primitive_central().is_none());
}

#[test]
fn peel_heisenberg() {
    let step = catalog::h3_lattice().peel_step().unwrap();
    assert_eq!(step.base, catalog::torus(2));
    assert_eq!(step.cocycle, CentralCocycle::from_entries(2, [(0, 1, int(1))]));
}

#[test]
fn peel_torus_and_filiform() {
    let step = catalog::torus(3).peel_step().unwrap();
    assert_eq!(step.base, catalog::torus(2));
    assert!(step.cocycle.is_zero());

    let step = catalog::n4_lattice().peel_step().unwrap();
    assert_eq!(step.base.algebra(), &catalog::h3());
    assert_eq!(step.cocycle, CentralCocycle::from_entries(3, [(0, 2, int(2))]));
}

#[test]
fn peel_circle_and_point() {
    let step = catalog::torus(1).peel_step().unwrap();
    assert_eq!(step.base, NilLattice::point());
    assert_eq!(step.cocycle.dim(), 0);
    assert_eq!(NilLattice::point().peel_step(), Err(TowerError::PeelPoint));
}

#[test]
fn towers_have_one_step_per_dimension() {
    for l in [catalog::torus(3), catalog::h3_lattice(), catalog::n4_lattice(), catalog::h3_times_z(), catalog::h5_lattice()] {
        let tower = l.peel_tower();
        assert_eq!(tower.len(), l.dim());
        for (k, step) in tower.steps.iter().enumerate() {
            assert_eq!(step.total.dim(), l.dim() - k);
            assert_eq!(step.base.dim(), step.total.dim() - 1);
        }
        assert_eq!(tower.steps.last().unwrap().base, NilLattice::point());
        assert_eq!(tower.rebuild().unwrap(), l);
    }
    let h3 = catalog::h3_lattice().peel_tower();
    let euler: Vec<bool> = h3.steps.iter().map(|s| s.cocycle.is_zero()).collect();
    assert_eq!(euler, vec![false, true, true]);
}

#[test]
fn extend_examples() {
    let z2 = catalog::torus(2);
    let h3 = z2.extend_by_cocycle(&CentralCocycle::from_entries(2, [(0, 1, int(1))])).unwrap();
    assert_eq!(h3, catalog::h3_lattice());
    assert_eq!(z2.extend_by_cocycle(&CentralCocycle::zero(2)).unwrap(), catalog::torus(3));
}

#[test]
fn extend_rejects_open_cocycle() {
    let bad = CentralCocycle::from_entries(4, [(3, 1, int(1))]);
    let err = catalog::n4_lattice().extend_by_cocycle(&bad).unwrap_err();
    assert_eq!(err, TowerError::NotClosed { triple: (0, 2, 1), defect: int(2) });
}

#[test]
fn extend_rejects_non_skew_and_non_integral() {
    let mut m = vec![vec![int(0); 2]; 2];
    m[0][1] = int(1);
    let err = catalog::torus(2).extend_by_cocycle(&CentralCocycle::from_matrix(m)).unwrap_err();
    assert_eq!(err, TowerError::NotSkew { i: 0, j: 1 });

    let half = CentralCocycle::from_entries(2, [(0, 1, rat(1, 2))]);
    assert!(matches!(catalog::torus(2).extend_by_cocycle(&half), Err(TowerError::NotIntegral(_))));
}

#[test]
fn cohomology_over_torus_and_heisenberg() {
    let z2 = catalog::torus(2);
    let one = CentralCocycle::from_entries(2, [(0, 1, int(1))]);
    let two = CentralCocycle::from_entries(2, [(0, 1, int(2))]);
    assert_eq!(
        z2.cocycles_cohomologous(&one, &one, false).unwrap(),
        Cohomology::Cohomologous { sign: CohomologySign::Same, lambda: ints(&[0, 0]) }
    );
    let verdict = z2.cocycles_cohomologous(&one, &two, false).unwrap();
    assert!(!verdict.is_cohomologous());

    let h3 = catalog::h3_lattice();
    let w = CentralCocycle::from_entries(3, [(0, 1, int(1))]);
    let Cohomology::Cohomologous { sign, lambda } = h3.cocycles_cohomologous(&w, &CentralCocycle::zero(3), false).unwrap() else {
        panic!("ω(e1,e2) = 1 is a coboundary over h3");
    };
    assert_eq!(sign, CohomologySign::Same);
    assert_eq!(lambda, ints(&[0, 0, -1]));
    assert_eq!(coboundary(&h3, &lambda), w);
}

#[test]
fn cohomology_up_to_sign() {
    let z2 = catalog::torus(2);
    let w = CentralCocycle::from_entries(2, [(0, 1, int(3))]);
    assert!(!z2.cocycles_cohomologous(&w, &w.neg(), false).unwrap().is_cohomologous());
    let Cohomology::Cohomologous { sign, .. } = z2.cocycles_cohomologous(&w, &w.neg(), true).unwrap() else {
        panic!("w and -w agree up to sign");
    };
    assert_eq!(sign, CohomologySign::Opposite);
}

#[test]
fn distinct_classes_carry_checkable_certificates() {
    let z2 = catalog::torus(2);
    let one = CentralCocycle::from_entries(2, [(0, 1, int(1))]);
    let two = CentralCocycle::from_entries(2, [(0, 1, int(2))]);
    let Cohomology::Distinct { obstructions } = z2.cocycles_cohomologous(&one, &two, true).unwrap() else {
        panic!("Euler numbers 1 and 2 differ even up to sign");
    };
    assert_eq!(obstructions.len(), 2);
    let (a, b) = cohomology::coboundary_system(&z2, &one.sub(&two));
    assert!(obstructions[0].verify(&a, &b, 2));
}

#[test]
fn section_defect_of_heisenberg() {
    let h3 = catalog::h3_lattice();
    let e1 = MalcevWord::from_ints(&[1, 0]);
    let e2 = MalcevWord::from_ints(&[0, 1]);
    assert_eq!(h3.section_defect(&e1, &e2).unwrap(), int(0));
    // exp(e2) exp(e1) = exp(e1) exp(e2) exp(-e3)
    assert_eq!(h3.section_defect(&e2, &e1).unwrap(), int(-1));
}
