//! The fine topology of a local subgroupoid: the base opens together with the
//! transitivity components of every chart subgroupoid, and its leaves.

use crate::bits::Bits;
use crate::fintop::{FinSpace, PointMap};
use crate::localsub::LocalSubgroupoid;

/// Which charts supply the transitivity components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartSource {
    /// The atlas the local subgroupoid was built from.
    Atlas,
    /// One chart `(N(x), germ at x)` per point.
    CanonicalGerms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationTopology {
    pub fine: FinSpace,
    /// Transitivity components `M_{x,a}` of the chart subgroupoids, deduplicated.
    pub generators: Vec<Bits>,
}

impl FoliationTopology {
    /// The identity `X^s → X`.
    pub fn identity_is_continuous(&self, base: &FinSpace) -> bool {
        PointMap { source: self.fine.clone(), dest: base.clone(), map: (0..base.len()).collect() }.is_continuous()
    }

    /// Connected components of the fine space.
    pub fn leaves(&self) -> Vec<Bits> {
        self.fine.components(self.fine.whole())
    }
}

pub fn component_generators(s: &LocalSubgroupoid, source: ChartSource) -> Vec<Bits> {
    let g = s.groupoid();
    let canonical;
    let charts = match source {
        ChartSource::Atlas => s.charts(),
        ChartSource::CanonicalGerms => {
            canonical = s.canonical();
            canonical.charts()
        }
    };
    let mut gens: Vec<Bits> = charts.iter().flat_map(|&(u, h)| g.components(h, u)).collect();
    gens.sort_by_key(|b| (b.len(), b.0));
    gens.dedup();
    gens
}

pub fn fine_topology(s: &LocalSubgroupoid, source: ChartSource) -> FoliationTopology {
    let base = s.space();
    let generators = component_generators(s, source);
    let nbhd = (0..base.len())
        .map(|x| generators.iter().filter(|m| m.contains(x)).fold(base.min_nbhd(x), |acc, &m| acc & m))
        .collect();
    let fine = FinSpace::from_nbhds(base.names().to_vec(), nbhd).expect("intersections of generators are neighbourhoods");
    FoliationTopology { fine, generators }
}

/// Leaves of the fine topology compared with the transitivity components of `glob(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafCheck {
    pub leaves: Vec<Bits>,
    pub glob_components: Vec<Bits>,
    /// The two partitions coincide.
    pub equal: bool,
    /// Every component of `glob(s)` is open and closed in the fine topology.
    pub components_clopen: bool,
}

pub fn leaf_check(s: &LocalSubgroupoid, source: ChartSource) -> LeafCheck {
    let top = fine_topology(s, source);
    let mut leaves = top.leaves();
    let mut glob_components = s.groupoid().components(s.glob(), s.space().whole());
    leaves.sort_by_key(|b| b.0);
    glob_components.sort_by_key(|b| b.0);
    let components_clopen = glob_components.iter().all(|&m| top.fine.is_open(m) && top.fine.is_closed(m));
    LeafCheck { equal: leaves == glob_components, leaves, glob_components, components_clopen }
}
