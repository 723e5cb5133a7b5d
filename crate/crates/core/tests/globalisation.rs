use localgpd::fintop::all_topologies;
use localgpd::foliate::{leaf_check, ChartSource};
use localgpd::localsub::{adjunction_check, for_each_atlas, for_each_local_subgroupoid, Ambient, LocalSubgroupoid};
use localgpd::{Bits, FinSpace};
use proptest::prelude::*;

/// Smallest wide subgroupoid whose germs contain those of `s`, by scanning all of them.
fn glob_oracle(s: &LocalSubgroupoid) -> Bits {
    let amb = s.ambient();
    let g = &amb.groupoid;
    let n = s.space().len();
    g.wide_subgroupoids(s.space().whole())
        .into_iter()
        .filter(|&h| (0..n).all(|x| s.germ(x).is_subset(amb.germ_of(h, x))))
        .fold(g.all_arrows(), |acc, h| acc & h)
}

#[test]
fn glob_matches_oracle_on_small_atlases() {
    let mut atlases = 0;
    for n in 1..=3 {
        for sp in all_topologies(n) {
            let amb = Ambient::pair(&sp);
            for_each_atlas(&amb, 4, |s| {
                atlases += 1;
                let expected = glob_oracle(s);
                assert_eq!(s.glob(), expected);
                assert_eq!(s.glob_by_definition(), expected);
                assert_eq!(s.glob_by_covers(1 << 16).unwrap(), expected);
            })
            .unwrap();
        }
    }
    assert!(atlases > 1000);
}

#[test]
fn adjunction_holds_through_three_points() {
    for n in 1..=3 {
        for sp in all_topologies(n) {
            let report = adjunction_check(&Ambient::pair(&sp)).unwrap();
            assert!(report.holds(), "{report:?}");
        }
    }
}

#[test]
fn discrete_pair_has_a_strict_counit() {
    let amb = Ambient::pair(&FinSpace::discrete(2));
    let all = amb.groupoid.all_arrows();
    let s = LocalSubgroupoid::loc(&amb, all).unwrap();
    assert_eq!(s.glob(), amb.groupoid.identities());
    assert_eq!(adjunction_check(&amb).unwrap().strict_counit.len(), 1);
}

#[test]
fn no_incoherent_local_subgroupoid_below_four_points() {
    for n in 1..=3 {
        for sp in all_topologies(n) {
            for_each_local_subgroupoid(&Ambient::pair(&sp), |s| assert!(s.is_globally_coherent()));
        }
    }
}

#[test]
fn leaves_can_be_finer_than_glob_components() {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let sp = FinSpace::from_nbhds(names, vec![Bits(0b111), Bits(0b010), Bits(0b100)]).unwrap();
    let amb = Ambient::pair(&sp);
    let h = amb.groupoid.relation(&[Bits(0b001), Bits(0b110)]).unwrap();
    let s = LocalSubgroupoid::loc(&amb, h).unwrap();
    assert!(s.is_coherent());
    let check = leaf_check(&s, ChartSource::Atlas);
    assert_eq!(check.glob_components, vec![Bits(0b001), Bits(0b110)]);
    assert_eq!(check.leaves, vec![Bits(0b001), Bits(0b010), Bits(0b100)]);
}

proptest! {
    #[test]
    fn loc_and_glob_form_a_galois_connection(space in 0usize..29, pick in any::<prop::sample::Index>()) {
        let sp = all_topologies(3).swap_remove(space);
        let amb = Ambient::pair(&sp);
        let wide = amb.groupoid.wide_subgroupoids(sp.whole());
        let h = wide[pick.index(wide.len())];
        let s = LocalSubgroupoid::loc(&amb, h).unwrap();
        let back = s.glob();
        prop_assert!(back.is_subset(h));
        prop_assert!(LocalSubgroupoid::loc(&amb, back).unwrap().equal(&s).unwrap());
        prop_assert_eq!(back, glob_oracle(&s));
    }
}
