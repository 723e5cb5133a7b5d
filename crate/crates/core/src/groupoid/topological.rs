//! Groupoids whose arrows and objects carry finite topologies.

use super::Groupoid;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::{FinSpace, PointMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopGroupoid {
    pub groupoid: Groupoid,
    pub arrows: FinSpace,
    pub objects: FinSpace,
}

impl TopGroupoid {
    /// Checks that source, target, identity, inversion and composition are continuous.
    pub fn new(groupoid: Groupoid, arrows: FinSpace, objects: FinSpace) -> Result<TopGroupoid> {
        if arrows.len() != groupoid.arrow_count() || objects.len() != groupoid.object_count() {
            return Err(Error::TopologyRequired);
        }
        let t = TopGroupoid { groupoid, arrows, objects };
        if !t.source_map().is_continuous() {
            return Err(Error::NotContinuous("source".into()));
        }
        if !t.target_map().is_continuous() {
            return Err(Error::NotContinuous("target".into()));
        }
        let g = &t.groupoid;
        let ident = PointMap::new(t.objects.clone(), t.arrows.clone(), (0..g.object_count()).map(|x| g.identity(x)).collect())?;
        if !ident.is_continuous() {
            return Err(Error::NotContinuous("identity".into()));
        }
        let inv = PointMap::new(t.arrows.clone(), t.arrows.clone(), (0..g.arrow_count()).map(|f| g.inverse(f)).collect())?;
        if !inv.is_continuous() {
            return Err(Error::NotContinuous("inverse".into()));
        }
        if !t.composition_continuous_on(g.all_arrows()) {
            return Err(Error::NotContinuous("composition".into()));
        }
        Ok(t)
    }

    /// Arrow topology induced from `X × X` through `f ↦ (tgt f, src f)`; arrows in
    /// different fibres (e.g. a discrete group coordinate) are kept apart by `same_fibre`.
    pub fn product_topology(groupoid: Groupoid, objects: FinSpace, same_fibre: impl Fn(usize, usize) -> bool) -> Result<TopGroupoid> {
        let g = &groupoid;
        let nbhd = (0..g.arrow_count())
            .map(|f| {
                (0..g.arrow_count())
                    .filter(|&h| {
                        objects.min_nbhd(g.tgt(f)).contains(g.tgt(h))
                            && objects.min_nbhd(g.src(f)).contains(g.src(h))
                            && same_fibre(f, h)
                    })
                    .collect::<Bits>()
            })
            .collect();
        let arrows = FinSpace::from_nbhds(g.arrow_names().to_vec(), nbhd)?;
        TopGroupoid::new(groupoid, arrows, objects)
    }

    /// Pair groupoid over a space with the product topology on arrows.
    pub fn pair(objects: &FinSpace) -> TopGroupoid {
        TopGroupoid::product_topology(Groupoid::pair(objects.names()), objects.clone(), |_, _| true)
            .expect("pair groupoid is topological")
    }

    pub fn source_map(&self) -> PointMap {
        let g = &self.groupoid;
        PointMap { source: self.arrows.clone(), dest: self.objects.clone(), map: (0..g.arrow_count()).map(|f| g.src(f)).collect() }
    }

    pub fn target_map(&self) -> PointMap {
        let g = &self.groupoid;
        PointMap { source: self.arrows.clone(), dest: self.objects.clone(), map: (0..g.arrow_count()).map(|f| g.tgt(f)).collect() }
    }

    /// Composition restricted to composable pairs inside `w` is continuous for the
    /// product-subspace topology: `m(N(f)×N(g) ∩ composable) ⊆ N(fg)`.
    pub fn composition_continuous_on(&self, w: Bits) -> bool {
        let g = &self.groupoid;
        w.iter().all(|f| {
            w.iter().filter(|&h| g.composable(f, h)).all(|h| {
                let target = self.arrows.min_nbhd(g.compose(f, h).unwrap());
                (self.arrows.min_nbhd(f) & w).iter().all(|f2| {
                    (self.arrows.min_nbhd(h) & w)
                        .iter()
                        .all(|h2| !g.composable(f2, h2) || target.contains(g.compose(f2, h2).unwrap()))
                })
            })
        })
    }

    /// Source map is a local homeomorphism.
    pub fn is_etale(&self) -> bool {
        self.source_map().is_local_homeomorphism()
    }

    /// Source and target are open maps.
    pub fn is_open_groupoid(&self) -> bool {
        self.source_map().is_open_map() && self.target_map().is_open_map()
    }

    /// Subspace topology on the arrow set `h`, indexed like `h.iter()`.
    pub fn arrow_subspace(&self, h: Bits) -> FinSpace {
        self.arrows.subspace(h).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::all_topologies;
    use crate::groupoid::FinGroup;

    #[test]
    fn null_groupoid_with_discrete_arrows_is_etale() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::null(sp.names());
        let arrows = FinSpace::discrete(2);
        let t = TopGroupoid::new(g, arrows, sp).unwrap();
        assert!(t.is_etale());
    }

    #[test]
    fn pair_groupoid_product_topology_has_open_continuous_endpoints() {
        for n in 1..=3 {
            for sp in all_topologies(n) {
                let t = TopGroupoid::pair(&sp);
                assert!(t.is_open_groupoid());
            }
        }
    }

    #[test]
    fn pair_with_group_topology() {
        let sp = FinSpace::sierpinski();
        let k = FinGroup::cyclic(2);
        let g = Groupoid::pair_with_group(sp.names(), &k);
        let t = TopGroupoid::product_topology(g, sp, |f, h| f % 2 == h % 2).unwrap();
        assert!(t.is_open_groupoid());
    }
}
