//! Local subgroupoids: compatible atlases of wide subgroupoids, stored by their
//! germs `H|N(x)` at minimal neighbourhoods, together with `loc`, `glob` and the
//! coherence predicates.
//!
//! On a finite space the germ of a chart `(U, H)` at `x` is determined by
//! `H|N(x)`, so two charts agree near `x` exactly when they agree on `N(x)`.

pub mod bench;
mod ler;

pub use bench::{adjunction_check, atlas_name, for_each_atlas, for_each_local_subgroupoid, theorem_bench, AdjunctionReport, BenchReport, Statement};
pub use ler::{ler_from_closure, ler_times_group, project_to_ler, LocalEquivRel};

use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::FinSpace;
use crate::groupoid::Groupoid;
use crate::presheaf::Presheaf;

/// A groupoid whose objects are the points of a finite space, in the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub space: FinSpace,
    pub groupoid: Groupoid,
}

impl Ambient {
    pub fn new(space: FinSpace, groupoid: Groupoid) -> Result<Arc<Ambient>> {
        if space.names() != groupoid.objects() {
            return Err(Error::BaseMismatch);
        }
        Ok(Arc::new(Ambient { space, groupoid }))
    }

    /// Pair groupoid over `space`.
    pub fn pair(space: &FinSpace) -> Arc<Ambient> {
        Arc::new(Ambient { space: space.clone(), groupoid: Groupoid::pair(space.names()) })
    }

    /// `H|N(x)`.
    pub fn germ_of(&self, h: Bits, x: usize) -> Bits {
        self.groupoid.restrict(h, self.space.min_nbhd(x))
    }

    /// The full subgroupoid on `u` as an ambient over the subspace `u`, with the old
    /// index of every new arrow.
    pub fn restrict(&self, u: Bits) -> (Arc<Ambient>, Vec<usize>) {
        let (space, _) = self.space.subspace(u);
        let (groupoid, arrows) = self.groupoid.to_groupoid(self.groupoid.restrict_full(u));
        (Arc::new(Ambient { space, groupoid }), arrows)
    }

    /// The presheaf `U ↦ {wide subgroupoids of G|U}` with `H ↦ H|V`; elements are
    /// listed in increasing bit order.
    pub fn wide_presheaf(&self) -> Presheaf {
        let sp = &self.space;
        let g = &self.groupoid;
        let wide: Vec<Vec<Bits>> = sp.opens().iter().map(|&u| g.wide_subgroupoids(u)).collect();
        let idx = |u: Bits| sp.open_index(u).expect("open");
        Presheaf::from_fn(
            sp,
            |u| wide[idx(u)].len(),
            |u, v, e| {
                let h = g.restrict(wide[idx(u)][e], v);
                wide[idx(v)].iter().position(|&k| k == h).expect("restriction of a wide subgroupoid is wide")
            },
        )
        .with_labels(
            sp.opens()
                .iter()
                .map(|&u| wide[idx(u)].iter().map(|&h| format!("{{{}}}", g.arrow_list(h).join(","))).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug)]
pub struct LocalSubgroupoid {
    ambient: Arc<Ambient>,
    charts: Vec<(Bits, Bits)>,
    germs: Vec<Bits>,
}

impl PartialEq for LocalSubgroupoid {
    /// Same ambient and same germs; the defining atlases may differ.
    fn eq(&self, other: &Self) -> bool {
        self.same_base(other) && self.germs == other.germs
    }
}

impl Eq for LocalSubgroupoid {}

impl LocalSubgroupoid {
    /// Validates an atlas `{(U_i, H_i)}` and builds the germ table.
    pub fn new(ambient: &Arc<Ambient>, charts: Vec<(Bits, Bits)>) -> Result<LocalSubgroupoid> {
        let sp = &ambient.space;
        let g = &ambient.groupoid;
        for (i, &(u, h)) in charts.iter().enumerate() {
            if !sp.is_open(u) {
                return Err(Error::NotOpen(sp.fmt_set(u)));
            }
            if !h.is_subset(g.restrict_full(u)) || !g.is_subgroupoid(h) {
                return Err(Error::NotSubgroupoid(i));
            }
            if !g.is_wide_on(h, u) {
                return Err(Error::NotWide(i));
            }
        }
        if charts.iter().fold(Bits::EMPTY, |acc, &(u, _)| acc | u) != sp.whole() {
            return Err(Error::CoverIncomplete);
        }
        for (i, &(u, h)) in charts.iter().enumerate() {
            for (j, &(v, k)) in charts.iter().enumerate().skip(i + 1) {
                if let Some(x) = (u & v).iter().find(|&x| ambient.germ_of(h, x) != ambient.germ_of(k, x)) {
                    return Err(Error::Incompatible { i, j, point: sp.name(x).to_string() });
                }
            }
        }
        let germs = (0..sp.len())
            .map(|x| {
                let &(_, h) = charts.iter().find(|(u, _)| u.contains(x)).expect("charts cover");
                ambient.germ_of(h, x)
            })
            .collect();
        Ok(LocalSubgroupoid { ambient: Arc::clone(ambient), charts, germs })
    }

    /// The atlas `{(N(x), germs[x])}`.
    pub fn from_germs(ambient: &Arc<Ambient>, germs: &[Bits]) -> Result<LocalSubgroupoid> {
        let charts = germs.iter().enumerate().map(|(x, &h)| (ambient.space.min_nbhd(x), h)).collect();
        LocalSubgroupoid::new(ambient, charts)
    }

    /// `loc(H)`: the single chart `(X, H)`.
    pub fn loc(ambient: &Arc<Ambient>, h: Bits) -> Result<LocalSubgroupoid> {
        LocalSubgroupoid::new(ambient, vec![(ambient.space.whole(), h)])
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn space(&self) -> &FinSpace {
        &self.ambient.space
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.ambient.groupoid
    }

    pub fn charts(&self) -> &[(Bits, Bits)] {
        &self.charts
    }

    pub fn germ(&self, x: usize) -> Bits {
        self.germs[x]
    }

    pub fn germs(&self) -> &[Bits] {
        &self.germs
    }

    /// The atlas built from germs at minimal neighbourhoods.
    pub fn canonical(&self) -> LocalSubgroupoid {
        LocalSubgroupoid::from_germs(&self.ambient, &self.germs).expect("germs of a valid atlas")
    }

    pub fn same_base(&self, other: &LocalSubgroupoid) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) || *self.ambient == *other.ambient
    }

    /// `s ≤ t`: at every point the germ of `s` is contained in the germ of `t`.
    pub fn le(&self, other: &LocalSubgroupoid) -> Result<bool> {
        if !self.same_base(other) {
            return Err(Error::BaseMismatch);
        }
        Ok(self.germs.iter().zip(&other.germs).all(|(h, k)| h.is_subset(*k)))
    }

    pub fn equal(&self, other: &LocalSubgroupoid) -> Result<bool> {
        Ok(self.le(other)? && other.le(self)?)
    }

    /// `s|U` on the subspace `U`: charts are intersected with `U` and re-validated.
    pub fn restrict(&self, u: Bits) -> Result<LocalSubgroupoid> {
        let sp = self.space();
        if !sp.is_open(u) {
            return Err(Error::NotOpen(sp.fmt_set(u)));
        }
        let (sub, arrows) = self.ambient.restrict(u);
        let old_points: Vec<usize> = u.iter().collect();
        let reindex_points = |b: Bits| -> Bits { old_points.iter().enumerate().filter(|(_, &o)| b.contains(o)).map(|(i, _)| i).collect() };
        let reindex_arrows = |b: Bits| -> Bits { arrows.iter().enumerate().filter(|(_, &o)| b.contains(o)).map(|(i, _)| i).collect() };
        let g = self.groupoid();
        let charts = self
            .charts
            .iter()
            .filter(|(v, _)| v.intersects(u))
            .map(|&(v, h)| (reindex_points(v & u), reindex_arrows(g.restrict(h, v & u))))
            .collect();
        LocalSubgroupoid::new(&sub, charts)
    }

    /// `glob(s)`: the wide subgroupoid generated by all germs.
    pub fn glob(&self) -> Bits {
        let union = self.germs.iter().fold(Bits::EMPTY, |acc, &h| acc | h);
        self.groupoid().generated(union, self.space().whole())
    }

    /// `H_V` for a point-indexed refinement: `choice[x] = (chart index, V_x)`.
    pub fn generated_by(&self, choice: &[(usize, Bits)]) -> Bits {
        let g = self.groupoid();
        let seed = choice.iter().fold(Bits::EMPTY, |acc, &(i, v)| acc | g.restrict(self.charts[i].1, v));
        g.generated(seed, self.space().whole())
    }

    /// Per point, the distinct pieces `H_i|V` over charts `i ∋ x` and opens `x ∈ V ⊆ U_i`.
    pub fn refinement_pieces(&self) -> Vec<Vec<Bits>> {
        let sp = self.space();
        let g = self.groupoid();
        (0..sp.len())
            .map(|x| {
                let mut pieces: Vec<Bits> = self
                    .charts
                    .iter()
                    .filter(|(u, _)| u.contains(x))
                    .flat_map(|&(u, h)| sp.opens_within(u).filter(move |v| v.contains(x)).map(move |v| g.restrict(h, v)))
                    .collect();
                pieces.sort_by_key(|b| b.0);
                pieces.dedup();
                pieces
            })
            .collect()
    }

    /// `glob(s)` as the intersection of `H_V` over every refinement `V` of the atlas cover.
    pub fn glob_by_covers(&self, limit: usize) -> Result<Bits> {
        let pieces = self.refinement_pieces();
        let total = pieces.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()).filter(|&t| t <= limit));
        if total.is_none() {
            return Err(Error::ResourceCap(format!("more than {limit} refinements")));
        }
        let g = self.groupoid();
        let whole = self.space().whole();
        let mut digits = vec![0usize; pieces.len()];
        let mut acc = g.all_arrows();
        loop {
            let seed = digits.iter().zip(&pieces).fold(Bits::EMPTY, |s, (&d, p)| s | p[d]);
            acc &= g.generated(seed, whole);
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return Ok(acc);
                }
                digits[k] += 1;
                if digits[k] < pieces[k].len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    /// `glob(s)` as the intersection of every wide `H` with `s ≤ loc(H)`.
    pub fn glob_by_definition(&self) -> Bits {
        let g = self.groupoid();
        g.wide_subgroupoids(self.space().whole())
            .into_iter()
            .filter(|&h| (0..self.space().len()).all(|x| self.germs[x].is_subset(self.ambient.germ_of(h, x))))
            .fold(g.all_arrows(), |acc, h| acc & h)
    }

    /// `loc(glob(s))`.
    pub fn loc_glob(&self) -> LocalSubgroupoid {
        LocalSubgroupoid::loc(&self.ambient, self.glob()).expect("glob is wide")
    }

    /// `s ≤ loc(glob(s))`.
    pub fn is_coherent(&self) -> bool {
        self.le(&self.loc_glob()).expect("same base")
    }

    /// `s = loc(glob(s))`.
    pub fn is_globally_coherent(&self) -> bool {
        *self == self.loc_glob()
    }

    /// `s|U` coherent for every open `U`.
    pub fn is_totally_coherent(&self) -> bool {
        self.space().opens().iter().all(|&u| self.restrict(u).expect("open").is_coherent())
    }

    pub fn coherence(&self) -> Coherence {
        Coherence {
            coherent: self.is_coherent(),
            globally_coherent: self.is_globally_coherent(),
            totally_coherent: self.is_totally_coherent(),
        }
    }

    /// Arrow names of each germ, for reports.
    pub fn germ_names(&self) -> Vec<Vec<String>> {
        self.germs.iter().map(|&h| self.groupoid().arrow_list(h)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coherence {
    pub coherent: bool,
    pub globally_coherent: bool,
    pub totally_coherent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubgroupoidCoherence {
    /// `loc(H)` is coherent.
    pub locally_coherent: bool,
    /// `H = glob(loc(H))`.
    pub coherent: bool,
}

pub fn subgroupoid_coherence(ambient: &Arc<Ambient>, h: Bits) -> Result<SubgroupoidCoherence> {
    let s = LocalSubgroupoid::loc(ambient, h)?;
    Ok(SubgroupoidCoherence { locally_coherent: s.is_coherent(), coherent: s.glob() == h })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::groupoid::FinGroup;

    /// `{1,2,3}` with opens `∅, {2}, {1,2}, {2,3}, X`.
    pub(crate) fn line() -> FinSpace {
        let names: Vec<String> = ["1", "2", "3"].iter().map(|s| s.to_string()).collect();
        FinSpace::from_opens(names, [0b000, 0b010, 0b011, 0b110, 0b111].into_iter().map(Bits).collect()).unwrap()
    }

    /// Full pair charts on `{1,2}` and `{2,3}`.
    pub(crate) fn two_full_charts() -> LocalSubgroupoid {
        let amb = Ambient::pair(&line());
        let g = &amb.groupoid;
        let a = Bits::from_indices([0, 1]);
        let b = Bits::from_indices([1, 2]);
        LocalSubgroupoid::new(&amb, vec![(a, g.restrict_full(a)), (b, g.restrict_full(b))]).unwrap()
    }

    #[test]
    fn two_full_charts_glob_to_the_pair_groupoid() {
        let s = two_full_charts();
        assert_eq!(s.germ(1), s.groupoid().identities_of(Bits::singleton(1)));
        assert_eq!(s.glob(), s.groupoid().all_arrows());
        assert_eq!(s.glob().len(), 9);
        assert_eq!(s.glob_by_covers(1 << 16).unwrap(), s.glob());
        assert_eq!(s.glob_by_definition(), s.glob());
    }

    #[test]
    fn diagonal_and_full_disagree_at_the_generic_point() {
        let amb = Ambient::pair(&FinSpace::sierpinski());
        let g = &amb.groupoid;
        let charts = vec![(amb.space.whole(), g.identities()), (amb.space.whole(), g.all_arrows())];
        assert_eq!(LocalSubgroupoid::new(&amb, charts), Err(Error::Incompatible { i: 0, j: 1, point: "b".into() }));
    }

    #[test]
    fn chart_errors() {
        let amb = Ambient::pair(&FinSpace::sierpinski());
        let g = &amb.groupoid;
        let a = Bits::singleton(0);
        assert_eq!(LocalSubgroupoid::new(&amb, vec![(a, g.identities_of(a))]), Err(Error::CoverIncomplete));
        assert_eq!(LocalSubgroupoid::new(&amb, vec![(amb.space.whole(), g.identities_of(a))]), Err(Error::NotWide(0)));
        // (b,a) without its inverse
        let one_way = g.identities() | Bits::singleton(2);
        assert_eq!(LocalSubgroupoid::new(&amb, vec![(amb.space.whole(), one_way)]), Err(Error::NotSubgroupoid(0)));
        assert!(matches!(LocalSubgroupoid::new(&amb, vec![(Bits::singleton(1), g.identities())]), Err(Error::NotOpen(_))));
    }

    #[test]
    fn loc_of_pair_groupoid_on_sierpinski() {
        let amb = Ambient::pair(&FinSpace::sierpinski());
        let g = &amb.groupoid;
        let s = LocalSubgroupoid::loc(&amb, g.all_arrows()).unwrap();
        assert_eq!(s.germ(0), g.restrict_full(Bits::singleton(0)));
        assert_eq!(s.germ(1), g.all_arrows());
        let diag = LocalSubgroupoid::loc(&amb, g.identities()).unwrap();
        assert!(diag.le(&s).unwrap());
        assert!(!s.le(&diag).unwrap());
        assert!(s.le(&s).unwrap());
    }

    #[test]
    fn loc_restricts_to_h_on_every_open() {
        let amb = Ambient::pair(&line());
        for h in amb.groupoid.wide_subgroupoids(amb.space.whole()) {
            let s = LocalSubgroupoid::loc(&amb, h).unwrap();
            for &u in amb.space.opens() {
                let r = s.restrict(u).unwrap();
                let (sub, arrows) = amb.restrict(u);
                let expected: Bits = arrows.iter().enumerate().filter(|(_, &f)| h.contains(f)).map(|(i, _)| i).collect();
                assert_eq!(r, LocalSubgroupoid::loc(&sub, expected).unwrap());
            }
        }
    }

    #[test]
    fn counit_is_strict_on_discrete_pair() {
        let amb = Ambient::pair(&FinSpace::discrete(2));
        let g = &amb.groupoid;
        let s = LocalSubgroupoid::loc(&amb, g.all_arrows()).unwrap();
        assert_eq!(s.glob(), g.identities());
        let c = subgroupoid_coherence(&amb, g.all_arrows()).unwrap();
        assert!(!c.coherent && c.locally_coherent);
        assert!(subgroupoid_coherence(&amb, g.identities()).unwrap().coherent);
    }

    #[test]
    fn bundle_of_groups_is_globally_coherent() {
        let sp = FinSpace::sierpinski();
        let g = Groupoid::pair_with_group(sp.names(), &FinGroup::cyclic(2));
        // vertex groups only
        let bundle: Bits = (0..g.arrow_count()).filter(|&f| g.src(f) == g.tgt(f)).collect();
        let (bg, _) = g.to_groupoid(bundle);
        let amb = Ambient::new(sp, bg).unwrap();
        let s = LocalSubgroupoid::loc(&amb, amb.groupoid.all_arrows()).unwrap();
        assert_eq!(s.glob(), amb.groupoid.all_arrows());
        assert!(s.is_globally_coherent());
        assert!(s.is_totally_coherent());
    }

    #[test]
    fn wide_presheaf_sections_are_local_subgroupoids() {
        let amb = Ambient::pair(&line());
        let p = amb.wide_presheaf();
        p.validate().unwrap();
        let sheaf = p.sheafify();
        let mut count = 0;
        for_each_local_subgroupoid(&amb, |_| count += 1);
        assert_eq!(sheaf.count_sections(amb.space.whole()), count);
    }

    #[test]
    fn base_mismatch() {
        let a = LocalSubgroupoid::loc(&Ambient::pair(&line()), Bits::from_indices([0, 4, 8])).unwrap();
        let b = two_full_charts();
        assert!(a.le(&b).unwrap());
        let c = LocalSubgroupoid::loc(&Ambient::pair(&FinSpace::discrete(3)), Bits::from_indices([0, 4, 8])).unwrap();
        assert_eq!(a.le(&c), Err(Error::BaseMismatch));
    }
}
