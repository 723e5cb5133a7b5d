//! Étale spaces over finite spaces.
//!
//! A sheaf over a finite space is determined by its stalks `F_x` and the maps
//! `ρ_xy : F_x → F_y` for `y ∈ N(x)`, so that is what is stored. The germ
//! `(x, e)` has minimal neighbourhood `{(y, ρ_xy(e)) : y ∈ N(x)}` in the
//! total space, and a section over an open `U` is a choice `e_x ∈ F_x` with
//! `ρ_xy(e_x) = e_y` whenever `y ∈ N(x)`.

use std::collections::HashSet;

use super::Presheaf;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::{FinSpace, PointMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleSheaf {
    space: FinSpace,
    stalks: Vec<usize>,
    offset: Vec<usize>,
    /// `rho[x * n + y]` for `y ∈ N(x)`, empty otherwise.
    rho: Vec<Vec<usize>>,
    labels: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    pub domain: Bits,
    /// Stalk element at each point of the domain, `None` elsewhere.
    pub values: Vec<Option<usize>>,
}

impl Section {
    pub fn restrict(&self, v: Bits) -> Section {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(x, e)| if v.contains(x) { *e } else { None })
            .collect();
        Section { domain: v, values }
    }

    pub fn at(&self, x: usize) -> usize {
        self.values[x].expect("point outside the section's domain")
    }
}

impl EtaleSheaf {
    /// Builds a sheaf from stalk sizes and maps `ρ_xy`, checking functoriality.
    pub fn from_fn(space: &FinSpace, stalks: Vec<usize>, rho: impl Fn(usize, usize, usize) -> usize) -> Result<EtaleSheaf> {
        let n = space.len();
        let mut table = vec![Vec::new(); n * n];
        for x in 0..n {
            for y in space.min_nbhd(x).iter() {
                let map: Vec<usize> = (0..stalks[x]).map(|e| rho(x, y, e)).collect();
                if let Some(&bad) = map.iter().find(|&&e| e >= stalks[y]) {
                    return Err(Error::ElementNotInSet { open: space.name(y).to_string(), element: format!("#{bad}") });
                }
                table[x * n + y] = map;
            }
        }
        Self::from_table(space, stalks, table)
    }

    pub fn from_table(space: &FinSpace, stalks: Vec<usize>, rho: Vec<Vec<usize>>) -> Result<EtaleSheaf> {
        let n = space.len();
        let mut offset = Vec::with_capacity(n);
        let mut acc = 0;
        for &s in &stalks {
            offset.push(acc);
            acc += s;
        }
        let sheaf = EtaleSheaf { space: space.clone(), stalks, offset, rho, labels: None };
        for x in 0..n {
            if sheaf.rho(x, x).iter().enumerate().any(|(i, &e)| i != e) {
                return Err(Error::IdentityLawViolation(space.name(x).to_string()));
            }
            for y in space.min_nbhd(x).iter() {
                for z in space.min_nbhd(y).iter() {
                    if (0..sheaf.stalks[x]).any(|e| sheaf.rho(y, z)[sheaf.rho(x, y)[e]] != sheaf.rho(x, z)[e]) {
                        return Err(Error::CompositionLawViolation {
                            u: space.name(x).to_string(),
                            v: space.name(y).to_string(),
                            w: space.name(z).to_string(),
                        });
                    }
                }
            }
        }
        Ok(sheaf)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> EtaleSheaf {
        self.labels = Some(labels);
        self
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn stalk_size(&self, x: usize) -> usize {
        self.stalks[x]
    }

    pub fn stalk_sizes(&self) -> &[usize] {
        &self.stalks
    }

    pub fn rho(&self, x: usize, y: usize) -> &[usize] {
        &self.rho[x * self.space.len() + y]
    }

    pub fn germ_count(&self) -> usize {
        self.stalks.iter().sum()
    }

    pub fn germ(&self, x: usize, e: usize) -> usize {
        self.offset[x] + e
    }

    pub fn germ_point(&self, g: usize) -> usize {
        self.offset.partition_point(|&o| o <= g) - 1
    }

    pub fn germ_elem(&self, g: usize) -> usize {
        g - self.offset[self.germ_point(g)]
    }

    pub fn germs_over(&self, x: usize) -> std::ops::Range<usize> {
        self.offset[x]..self.offset[x] + self.stalks[x]
    }

    pub fn germ_label(&self, g: usize) -> String {
        let (x, e) = (self.germ_point(g), self.germ_elem(g));
        match &self.labels {
            Some(l) => l[x][e].clone(),
            None => e.to_string(),
        }
    }

    pub fn element_label(&self, x: usize, e: usize) -> String {
        self.germ_label(self.germ(x, e))
    }

    /// Germ ids of the minimal neighbourhood of germ `g` in the total space.
    pub fn germ_nbhd(&self, g: usize) -> Vec<usize> {
        let (x, e) = (self.germ_point(g), self.germ_elem(g));
        self.space.min_nbhd(x).iter().map(|y| self.germ(y, self.rho(x, y)[e])).collect()
    }

    /// The total space as a finite space, with the projection to the base.
    pub fn total_space(&self) -> Result<(FinSpace, PointMap)> {
        let count = self.germ_count();
        if count > Bits::CAPACITY {
            return Err(Error::TooLarge { what: "germ space", got: count, limit: Bits::CAPACITY });
        }
        let names = (0..count).map(|g| format!("g{g}")).collect();
        let nbhd = (0..count).map(|g| Bits::from_indices(self.germ_nbhd(g))).collect();
        let total = FinSpace::from_nbhds(names, nbhd)?;
        let proj = (0..count).map(|g| self.germ_point(g)).collect();
        let p = PointMap::new(total.clone(), self.space.clone(), proj)?;
        Ok((total, p))
    }

    pub fn projection_is_local_homeomorphism(&self) -> Result<bool> {
        Ok(self.total_space()?.1.is_local_homeomorphism())
    }

    /// All sections over the open `u`, by backtracking over its points.
    pub fn sections(&self, u: Bits) -> Vec<Section> {
        let mut out = Vec::new();
        let pts: Vec<usize> = u.iter().collect();
        let mut values = vec![None; self.space.len()];
        self.sections_rec(u, &pts, 0, &mut values, &mut |v| {
            out.push(Section { domain: u, values: v.to_vec() });
        });
        out
    }

    pub fn count_sections(&self, u: Bits) -> usize {
        let mut count = 0;
        let pts: Vec<usize> = u.iter().collect();
        let mut values = vec![None; self.space.len()];
        self.sections_rec(u, &pts, 0, &mut values, &mut |_| count += 1);
        count
    }

    fn sections_rec(
        &self,
        u: Bits,
        pts: &[usize],
        k: usize,
        values: &mut Vec<Option<usize>>,
        emit: &mut dyn FnMut(&[Option<usize>]),
    ) {
        if k == pts.len() {
            emit(values);
            return;
        }
        let x = pts[k];
        for e in 0..self.stalks[x] {
            let ok = pts[..k].iter().all(|&y| {
                let ey = values[y].unwrap();
                (!self.space.min_nbhd(x).contains(y) || self.rho(x, y)[e] == ey)
                    && (!self.space.min_nbhd(y).contains(x) || self.rho(y, x)[ey] == e)
            });
            if ok {
                values[x] = Some(e);
                self.sections_rec(u, pts, k + 1, values, emit);
            }
        }
        values[x] = None;
    }

    /// Whether an arbitrary germ choice over `u` is a continuous section.
    pub fn is_section(&self, s: &Section) -> bool {
        s.domain.iter().all(|x| match s.values[x] {
            Some(e) if e < self.stalks[x] => self
                .space
                .min_nbhd(x)
                .iter()
                .all(|y| s.values[y] == Some(self.rho(x, y)[e])),
            _ => false,
        })
    }

    /// Germ ids hit by a section.
    pub fn section_germs(&self, s: &Section) -> Vec<usize> {
        s.domain.iter().map(|x| self.germ(x, s.at(x))).collect()
    }

    /// `V ↦ Γ(V)`, elements indexed in the order produced by [`EtaleSheaf::sections`].
    pub fn canonical_presheaf(&self) -> Presheaf {
        let opens = self.space.opens();
        let all: Vec<Vec<Section>> = opens.iter().map(|&u| self.sections(u)).collect();
        let index_of = |vi: usize, s: &Section| all[vi].iter().position(|t| t == s).expect("restriction of a section");
        let m = opens.len();
        let sizes: Vec<usize> = all.iter().map(Vec::len).collect();
        let mut tables: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; m];
        for ui in 0..m {
            for vi in 0..m {
                if opens[vi].is_subset(opens[ui]) {
                    tables[ui][vi] = all[ui].iter().map(|s| index_of(vi, &s.restrict(opens[vi]))).collect();
                }
            }
        }
        let p = Presheaf::from_fn(
            &self.space,
            |u| sizes[self.space.open_index(u).unwrap()],
            |u, v, e| tables[self.space.open_index(u).unwrap()][self.space.open_index(v).unwrap()][e],
        );
        let labels = all
            .iter()
            .map(|secs| secs.iter().map(|s| self.section_label(s)).collect())
            .collect();
        p.with_labels(labels)
    }

    pub fn section_label(&self, s: &Section) -> String {
        let parts: Vec<String> = s
            .domain
            .iter()
            .map(|x| format!("{}:{}", self.space.name(x), self.element_label(x, s.at(x))))
            .collect();
        format!("<{}>", parts.join(","))
    }

    /// The sheaf over the subspace `u`, i.e. `p⁻¹(u)`.
    pub fn restrict_to(&self, u: Bits) -> EtaleSheaf {
        let (sub, old) = self.space.subspace(u);
        let stalks = old.iter().map(|&x| self.stalks[x]).collect();
        let mut out = EtaleSheaf::from_fn(&sub, stalks, |x, y, e| self.rho(old[x], old[y])[e])
            .expect("restriction of a valid sheaf");
        if let Some(l) = &self.labels {
            out.labels = Some(old.iter().map(|&x| l[x].clone()).collect());
        }
        out
    }

    /// All morphisms `self → other`: families of stalk maps commuting with the `ρ`.
    pub fn homs(&self, other: &EtaleSheaf) -> Vec<SheafMorphism> {
        let n = self.space.len();
        let mut out = Vec::new();
        let mut maps: Vec<Vec<usize>> = vec![Vec::new(); n];
        self.homs_rec(other, 0, &mut maps, &mut out);
        out
    }

    fn homs_rec(&self, other: &EtaleSheaf, x: usize, maps: &mut Vec<Vec<usize>>, out: &mut Vec<SheafMorphism>) {
        let n = self.space.len();
        if x == n {
            out.push(SheafMorphism { maps: maps.clone() });
            return;
        }
        let (a, b) = (self.stalks[x], other.stalks[x]);
        if a > 0 && b == 0 {
            return;
        }
        let total = b.pow(a as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..a)
                .map(|_| {
                    let v = c % b;
                    c /= b;
                    v
                })
                .collect();
            let consistent = (0..x).all(|y| {
                let fwd = !self.space.min_nbhd(x).contains(y)
                    || (0..a).all(|e| maps[y][self.rho(x, y)[e]] == other.rho(x, y)[map[e]]);
                let back = !self.space.min_nbhd(y).contains(x)
                    || (0..self.stalks[y]).all(|e| map[self.rho(y, x)[e]] == other.rho(y, x)[maps[y][e]]);
                fwd && back
            });
            if consistent {
                maps[x] = map;
                self.homs_rec(other, x + 1, maps, out);
            }
        }
        maps[x] = Vec::new();
    }

    pub fn is_isomorphic(&self, other: &EtaleSheaf) -> bool {
        self.stalks == other.stalks
            && self.homs(other).iter().any(|h| {
                h.maps.iter().all(|m| m.iter().copied().collect::<HashSet<_>>().len() == m.len())
            })
    }
}

/// A stalk-preserving germ map, given pointwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SheafMorphism {
    pub maps: Vec<Vec<usize>>,
}

impl SheafMorphism {
    pub fn identity(sheaf: &EtaleSheaf) -> SheafMorphism {
        SheafMorphism { maps: sheaf.stalks.iter().map(|&s| (0..s).collect()).collect() }
    }

    /// Continuity of the germ map, which on finite spaces is naturality in the `ρ`.
    pub fn is_continuous(&self, from: &EtaleSheaf, to: &EtaleSheaf) -> bool {
        let sp = &from.space;
        (0..sp.len()).all(|x| {
            sp.min_nbhd(x)
                .iter()
                .all(|y| (0..from.stalks[x]).all(|e| self.maps[y][from.rho(x, y)[e]] == to.rho(x, y)[self.maps[x][e]]))
        })
    }

    pub fn maps_sections_to_sections(&self, from: &EtaleSheaf, to: &EtaleSheaf) -> bool {
        from.space.opens().iter().all(|&u| {
            from.sections(u).iter().all(|s| {
                let image = Section {
                    domain: u,
                    values: s.values.iter().enumerate().map(|(x, e)| e.map(|e| self.maps[x][e])).collect(),
                };
                to.is_section(&image)
            })
        })
    }

    /// Image of every open set of the total space is open.
    pub fn is_open_map(&self, from: &EtaleSheaf, to: &EtaleSheaf) -> bool {
        let map_germ = |g: usize| {
            let x = from.germ_point(g);
            to.germ(x, self.maps[x][from.germ_elem(g)])
        };
        (0..from.germ_count()).all(|g| {
            let image: HashSet<usize> = from.germ_nbhd(g).into_iter().map(map_germ).collect();
            image.iter().all(|&h| to.germ_nbhd(h).iter().all(|k| image.contains(k)))
        })
    }

    pub fn compose(&self, then: &SheafMorphism) -> SheafMorphism {
        SheafMorphism {
            maps: self.maps.iter().zip(&then.maps).map(|(f, g)| f.iter().map(|&e| g[e]).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::all_topologies;

    #[test]
    fn constant_on_discrete_pair_total_space() {
        let sp = FinSpace::discrete(2);
        let sheaf = Presheaf::constant(&sp, 2).sheafify();
        let (total, p) = sheaf.total_space().unwrap();
        assert_eq!(total.len(), 4);
        assert_eq!(total.opens().len(), 16);
        assert!(p.is_local_homeomorphism());
        assert_eq!(sheaf.germs_over(0).len(), 2);
    }

    #[test]
    fn basis_sets_are_homeomorphic_to_their_domain() {
        let sp = FinSpace::sierpinski();
        let p = Presheaf::constant(&sp, 2);
        let sheaf = p.sheafify();
        let (total, proj) = sheaf.total_space().unwrap();
        for e in 0..2 {
            let s = p.mu(sp.whole(), e);
            let img = Bits::from_indices(sheaf.section_germs(&s));
            assert!(total.is_open(img));
            let (sub, old) = total.subspace(img);
            let restricted = PointMap::new(sub, sp.clone(), old.iter().map(|&g| proj.map[g]).collect()).unwrap();
            assert!(restricted.is_homeomorphism());
        }
    }

    /// Sections found by trying every germ choice and testing continuity into the total space.
    fn brute_sections(sheaf: &EtaleSheaf, u: Bits) -> usize {
        let (total, _) = sheaf.total_space().unwrap();
        let pts: Vec<usize> = u.iter().collect();
        let dims: Vec<usize> = pts.iter().map(|&x| sheaf.stalk_size(x)).collect();
        let count: usize = dims.iter().product();
        let (sub, old) = sheaf.space().subspace(u);
        let mut good = 0;
        for code in 0..count {
            let mut c = code;
            let germs: Vec<usize> = pts
                .iter()
                .zip(&dims)
                .map(|(&x, &d)| {
                    let e = c % d;
                    c /= d;
                    sheaf.germ(x, e)
                })
                .collect();
            let f = PointMap::new(sub.clone(), total.clone(), germs).unwrap();
            assert_eq!(old, pts);
            if f.is_continuous() {
                good += 1;
            }
        }
        good
    }

    #[test]
    fn section_search_matches_continuity_oracle() {
        for n in 1..=3 {
            for sp in all_topologies(n) {
                let sheaf = Presheaf::functions(&sp, 2).sheafify();
                if sheaf.germ_count() > 64 {
                    continue;
                }
                for &u in sp.opens() {
                    assert_eq!(sheaf.count_sections(u), brute_sections(&sheaf, u));
                }
            }
        }
    }

    #[test]
    fn canonical_presheaf_is_a_sheaf_with_same_stalks() {
        for sp in all_topologies(3) {
            let p = crate::presheaf::tests::lumpy(&sp);
            let sheaf = p.sheafify();
            let gamma = sheaf.canonical_presheaf();
            assert!(gamma.is_sheaf());
            let again = gamma.sheafify();
            assert_eq!(again.stalk_sizes(), sheaf.stalk_sizes());
            assert!(again.is_isomorphic(&sheaf));
        }
    }

    #[test]
    fn identity_is_continuous_and_open() {
        let sheaf = Presheaf::functions(&FinSpace::sierpinski(), 2).sheafify();
        let id = SheafMorphism::identity(&sheaf);
        assert!(id.is_continuous(&sheaf, &sheaf));
        assert!(id.maps_sections_to_sections(&sheaf, &sheaf));
        assert!(id.is_open_map(&sheaf, &sheaf));
        assert!(sheaf.homs(&sheaf).contains(&id));
    }
}
