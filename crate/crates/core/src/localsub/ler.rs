//! Local equivalence relations: local subgroupoids of the pair groupoid.

use std::sync::Arc;

use super::{Ambient, LocalSubgroupoid};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::FinSpace;
use crate::groupoid::{FinGroup, Groupoid};

/// A local subgroupoid of the pair groupoid; every chart is an equivalence relation on its open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEquivRel(LocalSubgroupoid);

impl LocalEquivRel {
    pub fn new(s: LocalSubgroupoid) -> Result<LocalEquivRel> {
        if *s.groupoid() != Groupoid::pair(s.space().names()) {
            return Err(Error::BaseMismatch);
        }
        Ok(LocalEquivRel(s))
    }

    pub fn inner(&self) -> &LocalSubgroupoid {
        &self.0
    }

    pub fn into_inner(self) -> LocalSubgroupoid {
        self.0
    }

    /// Blocks of the germ relation at `x` on `N(x)`.
    pub fn blocks_at(&self, x: usize) -> Vec<Bits> {
        let s = &self.0;
        s.groupoid().components(s.germ(x), s.space().min_nbhd(x))
    }
}

/// On each nonempty open `U`: `x ∼ y` iff `x` and `y` have the same closure in `U`.
pub fn ler_from_closure(space: &FinSpace) -> LocalEquivRel {
    let amb = Ambient::pair(space);
    let g = &amb.groupoid;
    let charts = space
        .opens()
        .iter()
        .filter(|u| !u.is_empty())
        .map(|&u| {
            let closure = |x: usize| space.relative_closure(Bits::singleton(x), u);
            let h = g.restrict_full(u).iter().filter(|&f| closure(g.src(f)) == closure(g.tgt(f))).collect();
            (u, h)
        })
        .collect();
    LocalEquivRel(LocalSubgroupoid::new(&amb, charts).expect("closure relations agree on overlaps"))
}

/// Each chart `R_i` becomes `R_i × K` inside `X × X × K`.
pub fn ler_times_group(r: &LocalEquivRel, group: &FinGroup) -> LocalSubgroupoid {
    let s = r.inner();
    let sp = s.space();
    let n = sp.len();
    let k = group.order();
    let amb = Ambient::new(sp.clone(), Groupoid::pair_with_group(sp.names(), group)).expect("same objects");
    let lift = |h: Bits| -> Bits { h.iter().flat_map(|f| (0..k).map(move |c| f * k + c)).collect() };
    debug_assert_eq!(amb.groupoid.arrow_count(), n * n * k);
    let charts = s.charts().iter().map(|&(u, h)| (u, lift(h))).collect();
    LocalSubgroupoid::new(&amb, charts).expect("products of compatible charts are compatible")
}

/// Applies `[α, β]` chart by chart.
pub fn project_to_ler(s: &LocalSubgroupoid) -> LocalEquivRel {
    let (pair, upsilon) = s.groupoid().upsilon();
    let amb: Arc<Ambient> = Ambient::new(s.space().clone(), pair).expect("same objects");
    let charts = s.charts().iter().map(|&(u, h)| (u, upsilon.image(h))).collect();
    LocalEquivRel(LocalSubgroupoid::new(&amb, charts).expect("images of compatible charts are compatible"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::all_topologies;

    #[test]
    fn closure_relation_on_sierpinski_is_diagonal() {
        let sp = FinSpace::sierpinski();
        let r = ler_from_closure(&sp);
        let g = r.inner().groupoid();
        assert_eq!(r.inner().glob(), g.identities());
        for &(_, h) in r.inner().charts() {
            assert!(h.is_subset(g.identities()));
        }
    }

    #[test]
    fn closure_relation_on_indiscrete_is_full() {
        let r = ler_from_closure(&FinSpace::indiscrete(2));
        assert_eq!(r.inner().germ(0), r.inner().groupoid().all_arrows());
        assert_eq!(r.blocks_at(0), vec![Bits::from_indices([0, 1])]);
    }

    #[test]
    fn closure_relation_is_valid_everywhere() {
        for n in 1..=4 {
            for sp in all_topologies(n) {
                let r = ler_from_closure(&sp);
                // points with the same neighbourhood are related
                for x in 0..n {
                    let expected: Bits = (0..n).filter(|&y| sp.min_nbhd(y) == sp.min_nbhd(x)).collect();
                    let blocks = r.blocks_at(x);
                    assert!(blocks.contains(&expected));
                }
            }
        }
    }

    #[test]
    fn projection_forgets_the_group() {
        let sp = FinSpace::sierpinski();
        let z2 = FinGroup::cyclic(2);
        let full = LocalEquivRel::new(LocalSubgroupoid::loc(&Ambient::pair(&sp), Bits::full(4)).unwrap()).unwrap();
        let lifted = ler_times_group(&full, &z2);
        assert_eq!(lifted.glob().len(), 8);
        assert_eq!(project_to_ler(&lifted), full);
        let amb = Ambient::new(sp.clone(), Groupoid::pair_with_group(sp.names(), &z2)).unwrap();
        let whole = LocalSubgroupoid::loc(&amb, amb.groupoid.all_arrows()).unwrap();
        assert_eq!(project_to_ler(&whole), full);
    }

    #[test]
    fn non_pair_groupoid_is_rejected() {
        let sp = FinSpace::discrete(2);
        let amb = Ambient::new(sp.clone(), Groupoid::null(sp.names())).unwrap();
        let s = LocalSubgroupoid::loc(&amb, amb.groupoid.all_arrows()).unwrap();
        assert_eq!(LocalEquivRel::new(s), Err(Error::BaseMismatch));
    }
}
