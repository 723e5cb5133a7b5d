use localgpd::fintop::all_topologies;
use localgpd::presheaf::enumerate::for_each_presheaf;
use localgpd::presheaf::Presheaf;
use localgpd::{Bits, FinSpace};
use proptest::prelude::*;

/// Every open cover of `u` by opens inside it; `∅` is also covered by the empty family.
fn covers(sp: &FinSpace, u: Bits) -> Vec<Vec<Bits>> {
    let inside: Vec<Bits> = sp.opens_within(u).collect();
    (0u64..1 << inside.len())
        .map(|mask| inside.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>())
        .filter(|c| c.iter().fold(Bits::EMPTY, |a, &v| a | v) == u)
        .collect()
}

/// Locality and gluing by brute force over all families, written independently of the library.
fn sheaf_by_brute_force(p: &Presheaf) -> bool {
    let sp = p.space();
    for &u in sp.opens() {
        for cover in covers(sp, u) {
            let image: Vec<Vec<usize>> = (0..p.size(u)).map(|e| cover.iter().map(|&v| p.restrict(u, v, e)).collect()).collect();
            let mut sorted = image.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != image.len() {
                return false;
            }
            let radix: Vec<usize> = cover.iter().map(|&v| p.size(v)).collect();
            if radix.contains(&0) {
                continue;
            }
            let mut family = vec![0; cover.len()];
            loop {
                let compatible = (0..cover.len()).all(|i| {
                    (0..cover.len()).all(|j| {
                        let w = cover[i] & cover[j];
                        p.restrict(cover[i], w, family[i]) == p.restrict(cover[j], w, family[j])
                    })
                });
                if compatible && !image.contains(&family) {
                    return false;
                }
                let mut k = 0;
                while k < family.len() {
                    family[k] += 1;
                    if family[k] < radix[k] {
                        break;
                    }
                    family[k] = 0;
                    k += 1;
                }
                if k == family.len() {
                    break;
                }
            }
        }
    }
    true
}

fn relation_presheaf() -> Presheaf {
    let sp = FinSpace::discrete(3);
    let whole = sp.whole();
    Presheaf::from_fn(&sp, |u| usize::from(u != whole), |_, _, _| 0)
}

#[test]
fn three_pairwise_relations_do_not_glue() {
    let p = relation_presheaf();
    p.validate().unwrap();
    let check = p.check_sheaf().unwrap();
    assert!(check.f1);
    assert!(!check.f2);
    let pairs = [Bits(0b011), Bits(0b110), Bits(0b101)];
    assert!(check.f2_witnesses.iter().any(|w| w.open == Bits(0b111) && pairs.iter().all(|v| w.cover.contains(v))));
    assert!(check.equalizer_agrees);
    assert!(!p.mu_bijective_everywhere());
}

#[test]
fn library_agrees_with_brute_force_on_two_points() {
    let mut seen = 0;
    for sp in all_topologies(2) {
        for_each_presheaf(&sp, 2, false, |p| {
            seen += 1;
            let check = p.check_sheaf().unwrap();
            assert_eq!(check.f1 && check.f2, sheaf_by_brute_force(p));
            assert_eq!(p.is_sheaf(), p.mu_bijective_everywhere());
        });
    }
    assert!(seen > 100);
}

#[test]
fn sheafification_of_relations_is_a_sheaf() {
    let sheaf = relation_presheaf().sheafify();
    assert_eq!(sheaf.stalk_sizes(), &[1, 1, 1]);
    let gamma = sheaf.canonical_presheaf();
    assert!(sheaf_by_brute_force(&gamma));
    assert_eq!(gamma.size(Bits(0b111)), 1);
    assert!(sheaf.projection_is_local_homeomorphism().unwrap());
}

proptest! {
    #[test]
    fn functions_are_sheaves(space in 0usize..29, k in 1usize..3) {
        let sp = all_topologies(3).swap_remove(space);
        let p = Presheaf::functions(&sp, k);
        prop_assert!(sheaf_by_brute_force(&p));
        prop_assert!(p.mu_bijective_everywhere());
        for &u in sp.opens() {
            prop_assert_eq!(p.size(u), k.pow(u.len() as u32));
        }
    }

    #[test]
    fn canonical_presheaf_counts_sections(space in 0usize..29, k in 1usize..3) {
        let sp = all_topologies(3).swap_remove(space);
        let sheaf = Presheaf::constant(&sp, k).sheafify();
        let gamma = sheaf.canonical_presheaf();
        prop_assert!(gamma.is_sheaf());
        for &u in sp.opens() {
            // locally constant functions: one value per connected component
            prop_assert_eq!(gamma.size(u), k.pow(sp.components(u).len() as u32));
        }
    }
}
