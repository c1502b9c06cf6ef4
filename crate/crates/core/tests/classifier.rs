use std::collections::BTreeSet;

use hamfix_core::classifier6::{
    capacities, classify_all, classify_all_with, enumerate_tfd, enumerate_tfd_with, equivalent, flip, golden_row,
    ExtremalProfile, SearchConfig, Tfd,
};
use hamfix_core::exec::ExecMode;
use hamfix_core::lattice::{CohClass, LatticeKind};
use hamfix_core::localization::{betti, chern_number, integrate, ComponentKind, Integrand};
use hamfix_core::rational::q;
use hamfix_core::reduction::{bmax_from_euler, check_dh_decrease};
use hamfix_core::Error;

fn row(label: &str) -> Tfd {
    let mut t = Tfd::assemble(&golden_row(label).unwrap().blueprint()).unwrap();
    t.label = Some(label.into());
    t
}

fn crit(levels: &[i64]) -> BTreeSet<i64> {
    levels.iter().copied().collect()
}

fn surface_classes(t: &Tfd) -> Vec<(Vec<i64>, u32)> {
    t.components()
        .filter_map(|c| match &c.kind {
            ComponentKind::InteriorSurface { class, genus, .. } => Some((class.to_ints().unwrap(), *genus)),
            _ => None,
        })
        .collect()
}

#[test]
fn point_extrema_through_zero_is_the_quadric() {
    let found = enumerate_tfd(ExtremalProfile::new(0, 0), &crit(&[0])).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(surface_classes(&found[0]), [(vec![2], 0)]);
}

#[test]
fn sphere_maximum_below_zero() {
    let found = enumerate_tfd(ExtremalProfile::new(0, 2), &crit(&[-1, 0])).unwrap();
    let got: BTreeSet<Vec<i64>> = found.iter().map(|t| surface_classes(t)[0].0.clone()).collect();
    let want: BTreeSet<Vec<i64>> = [vec![0, 1], vec![1, 0], vec![2, -1]].into();
    assert_eq!(got, want);

    assert!(enumerate_tfd(ExtremalProfile::new(0, 2), &crit(&[-1])).unwrap().is_empty());
    assert!(enumerate_tfd(ExtremalProfile::new(0, 2), &crit(&[-1, 1])).unwrap().is_empty());
}

#[test]
fn four_manifold_maximum_with_points_and_surfaces() {
    let found = enumerate_tfd(ExtremalProfile::new(0, 4), &crit(&[-1, 0])).unwrap();
    assert_eq!(found.len(), 5);
    let chern: BTreeSet<i64> = found.iter().map(|t| t.derived.as_ref().unwrap().chern).collect();
    assert_eq!(chern, [42, 46, 50].into());
}

#[test]
fn listed_rows_and_their_invariants() {
    let i2 = row("I-2");
    assert_eq!(i2.reduced_lattice(), Some(LatticeKind::BlowupOfP2(3)));
    assert_eq!(i2.levels(), [-3, -1, 1, 3]);
    assert_eq!(chern_number(&i2).unwrap(), 48);
    assert_eq!(betti(&i2), [1, 0, 3, 0, 3, 0, 1]);

    let ii32 = row("II-3.2");
    assert_eq!(surface_classes(&ii32), [(vec![1, 0], 0)]);
    assert_eq!(chern_number(&ii32).unwrap(), 54);

    let iii33 = row("III-3.3");
    assert_eq!(surface_classes(&iii33), [(vec![3], 1)]);
    assert_eq!(chern_number(&iii33).unwrap(), 40);
    assert_eq!(betti(&iii33), [1, 0, 2, 2, 2, 0, 1]);

    assert_eq!(betti(&row("I-1")), [1, 0, 1, 0, 1, 0, 1]);
    for (label, c) in [("I-3", 52), ("II-4.2", 42), ("III-2", 56)] {
        assert_eq!(chern_number(&row(label)).unwrap(), c, "{label}");
    }
}

#[test]
fn localization_of_whole_rows() {
    let i1 = row("I-1");
    assert!(integrate(&i1, Integrand::One).unwrap().is_zero());
    assert!(integrate(&i1, Integrand::C1).unwrap().is_zero());
    let top = integrate(&row("III-1"), Integrand::C1Cubed).unwrap();
    assert_eq!(top.as_monomial(), Some((0, &q(64))));
}

#[test]
fn capacity_values() {
    assert_eq!(capacities(&row("III-1")).unwrap(), (q(4), q(4)));
    assert_eq!(capacities(&row("II-4.1")).unwrap(), (q(2), q(5)));
    // second critical value of I-1 is 0, not -1
    assert_eq!(capacities(&row("I-1")).unwrap(), (q(3), q(6)));

    let flipped = flip(&row("III-1")).unwrap();
    assert!(matches!(capacities(&flipped), Err(Error::CapacityFormulaInapplicable(_))));
}

#[test]
fn reduced_space_examples() {
    let i2 = row("I-2");
    let s = i2.slice_at(&q(0)).unwrap();
    assert_eq!(s.dh(&q(1)).unwrap(), q(4));
    assert!(check_dh_decrease(&i2.slices[0], &i2.slices[1], 3).unwrap());

    let i3 = row("I-3");
    assert!(check_dh_decrease(&i3.slices[0], &i3.slices[1], 1).unwrap());
    assert!(check_dh_decrease(&i3.slices[0], &i3.slices[0].with_hi(q(-1)), 0).is_err());

    let iii32 = row("III-3.2");
    let above = iii32.slices.last().unwrap();
    assert_eq!(above.dh(&q(1)).unwrap(), q(4));
    assert_eq!(above.omega(&q(1)), CohClass::from_ints(LatticeKind::BlowupOfP2(0), &[2]));

    let ii31 = row("II-3.1");
    let (b, area) = bmax_from_euler(ii31.slices.last().unwrap()).unwrap();
    assert_eq!((b, area), (3, q(5)));
}

#[test]
fn flips() {
    let i1 = row("I-1");
    let f = flip(&i1).unwrap();
    assert_eq!(f.levels(), [-3, 0, 3]);
    assert!(equivalent(&f, &i1));

    let ii41 = row("II-4.1");
    let f = flip(&ii41).unwrap();
    assert_eq!(f.levels(), [-2, -1, 0, 1, 3]);
    assert_eq!(chern_number(&f).unwrap(), 44);
    assert!(!equivalent(&f, &ii41));
    assert!(equivalent(&flip(&f).unwrap(), &ii41));
}

#[test]
fn extra_survivor_is_reported_not_dropped() {
    match classify_all() {
        Err(Error::ClassificationMismatch(msg)) => assert!(msg.contains("u - E1"), "{msg}"),
        other => panic!("expected a mismatch, got {other:?}"),
    }
    let c = classify_all_with(&SearchConfig::default()).unwrap();
    assert_eq!(c.rows.len(), 18);
    assert_eq!(c.extra.len(), 1);
    assert!(c.missing.is_empty());
    assert_eq!(c.extra[0].label.as_deref(), Some("unlisted-1"));
    assert_eq!(c.extra[0].derived.as_ref().unwrap().chern, 48);
}

#[test]
fn small_bound_is_an_error() {
    let cfg = SearchConfig { bound: 1, ..SearchConfig::default() };
    let r = enumerate_tfd_with(ExtremalProfile::new(0, 4), &crit(&[0]), &cfg);
    assert!(matches!(r, Err(Error::BoundTooSmall { .. })), "{r:?}");
}

#[test]
fn parallel_and_sequential_agree() {
    let par = classify_all_with(&SearchConfig { mode: ExecMode::Parallel, ..SearchConfig::default() }).unwrap();
    let seq = classify_all_with(&SearchConfig { mode: ExecMode::Sequential, ..SearchConfig::default() }).unwrap();
    assert_eq!(par.rows.len(), seq.rows.len());
    for (a, b) in par.all_rows().zip(seq.all_rows()) {
        assert_eq!(a.label, b.label);
        assert_eq!(a.events, b.events);
        assert_eq!(a.derived, b.derived);
    }
    assert_eq!(par.stats, seq.stats);
}
