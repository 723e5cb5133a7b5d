//! Presheaves of finite sets on a finite space.
//!
//! Elements over an open are dense indices `0..size`; optional string labels
//! ride along for instance files. Restriction tables are stored for every
//! pair `V ⊆ U` of opens.

mod atlas;
pub mod enumerate;
mod image;
mod sheaf;

pub use atlas::Atlas;
pub use image::{check_adjunction, inverse_image, AdjunctionReport};
pub use sheaf::{EtaleSheaf, Section, SheafMorphism};

use std::collections::{BTreeSet, HashSet};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::{FinSpace, PointMap};

/// Above this many opens below a target, exhaustive cover enumeration is refused.
pub const COVER_OPEN_LIMIT: usize = 16;
/// Cap on the number of families examined by the equalizer cross-check.
pub const FAMILY_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    space: FinSpace,
    sizes: Vec<usize>,
    labels: Option<Vec<Vec<String>>>,
    /// `restr[u * m + v]` for open indices with `opens[v] ⊆ opens[u]`, empty otherwise.
    restr: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Builds a presheaf from closures; the result is not checked, see [`Presheaf::validate`].
    pub fn from_fn(
        space: &FinSpace,
        size: impl Fn(Bits) -> usize,
        restrict: impl Fn(Bits, Bits, usize) -> usize,
    ) -> Presheaf {
        let opens = space.opens();
        let m = opens.len();
        let sizes: Vec<usize> = opens.iter().map(|&u| size(u)).collect();
        let mut restr = vec![Vec::new(); m * m];
        for (ui, &u) in opens.iter().enumerate() {
            for (vi, &v) in opens.iter().enumerate() {
                if v.is_subset(u) {
                    restr[ui * m + vi] = (0..sizes[ui]).map(|e| restrict(u, v, e)).collect();
                }
            }
        }
        Presheaf { space: space.clone(), sizes, labels: None, restr }
    }

    /// Builds a presheaf from explicit tables keyed by open. Identity restrictions may be
    /// omitted; every other pair `V ⊊ U` must be present.
    pub fn from_tables(
        space: &FinSpace,
        labels: Vec<(Bits, Vec<String>)>,
        maps: Vec<(Bits, Bits, Vec<usize>)>,
    ) -> Result<Presheaf> {
        let opens = space.opens();
        let m = opens.len();
        let mut set_labels: Vec<Option<Vec<String>>> = vec![None; m];
        for (u, l) in labels {
            let ui = space.open_index(u).ok_or_else(|| Error::NotOpen(space.fmt_set(u)))?;
            let distinct: HashSet<&String> = l.iter().collect();
            if distinct.len() != l.len() {
                return Err(Error::Duplicate(format!("element over {}", space.key(u))));
            }
            if set_labels[ui].replace(l).is_some() {
                return Err(Error::Duplicate(format!("set over {}", space.key(u))));
            }
        }
        let set_labels: Vec<Vec<String>> = set_labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::BadRestriction { from: space.key(opens[i]), to: space.key(opens[i]) }))
            .collect::<Result<_>>()?;
        let sizes: Vec<usize> = set_labels.iter().map(Vec::len).collect();
        let mut restr: Vec<Option<Vec<usize>>> = vec![None; m * m];
        for (u, v, table) in maps {
            let ui = space.open_index(u).ok_or_else(|| Error::NotOpen(space.fmt_set(u)))?;
            let vi = space.open_index(v).ok_or_else(|| Error::NotOpen(space.fmt_set(v)))?;
            let bad = || Error::BadRestriction { from: space.key(u), to: space.key(v) };
            if !v.is_subset(u) || table.len() != sizes[ui] {
                return Err(bad());
            }
            if let Some(&e) = table.iter().find(|&&e| e >= sizes[vi]) {
                return Err(Error::ElementNotInSet { open: space.key(v), element: format!("#{e}") });
            }
            if restr[ui * m + vi].replace(table).is_some() {
                return Err(Error::Duplicate(format!("restriction {} -> {}", space.key(u), space.key(v))));
            }
        }
        let mut dense = vec![Vec::new(); m * m];
        for ui in 0..m {
            for vi in 0..m {
                if !opens[vi].is_subset(opens[ui]) {
                    continue;
                }
                dense[ui * m + vi] = match restr[ui * m + vi].take() {
                    Some(t) => t,
                    None if ui == vi => (0..sizes[ui]).collect(),
                    None => {
                        return Err(Error::BadRestriction { from: space.key(opens[ui]), to: space.key(opens[vi]) })
                    }
                };
            }
        }
        Ok(Presheaf { space: space.clone(), sizes, labels: Some(set_labels), restr: dense })
    }

    /// `F(U) = A` for every open, restrictions the identity.
    pub fn constant(space: &FinSpace, size: usize) -> Presheaf {
        Presheaf::from_fn(space, |_| size, |_, _, e| e)
    }

    /// `F(U)` = all functions `U → {0..k-1}`, restriction by restricting functions.
    /// Functions are encoded in base `k` over the points of `U` in increasing order.
    pub fn functions(space: &FinSpace, k: usize) -> Presheaf {
        let encode = |u: Bits, vals: &dyn Fn(usize) -> usize| -> usize {
            u.iter().fold((0, 1), |(acc, pow), x| (acc + pow * vals(x), pow * k)).0
        };
        Presheaf::from_fn(
            space,
            |u| k.pow(u.len() as u32),
            |u, v, e| {
                let pts: Vec<usize> = u.iter().collect();
                let mut digits = vec![0; space.len()];
                let mut c = e;
                for &x in &pts {
                    digits[x] = c % k;
                    c /= k;
                }
                encode(v, &|x| digits[x])
            },
        )
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Presheaf {
        self.labels = Some(labels);
        self
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    fn m(&self) -> usize {
        self.space.opens().len()
    }

    fn idx(&self, u: Bits) -> usize {
        self.space.open_index(u).unwrap_or_else(|| panic!("{} is not open", self.space.fmt_set(u)))
    }

    pub fn size(&self, u: Bits) -> usize {
        self.sizes[self.idx(u)]
    }

    pub fn size_at(&self, ui: usize) -> usize {
        self.sizes[ui]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Image of element `e ∈ F(u)` in `F(v)`.
    pub fn restrict(&self, u: Bits, v: Bits, e: usize) -> usize {
        let (ui, vi) = (self.idx(u), self.idx(v));
        self.restr[ui * self.m() + vi][e]
    }

    pub fn restrict_idx(&self, ui: usize, vi: usize, e: usize) -> usize {
        self.restr[ui * self.m() + vi][e]
    }

    pub fn label(&self, u: Bits, e: usize) -> String {
        match &self.labels {
            Some(l) => l[self.idx(u)][e].clone(),
            None => e.to_string(),
        }
    }

    pub fn labels_of(&self, u: Bits) -> Vec<String> {
        (0..self.size(u)).map(|e| self.label(u, e)).collect()
    }

    pub fn element(&self, u: Bits, label: &str) -> Result<usize> {
        (0..self.size(u))
            .find(|&e| self.label(u, e) == label)
            .ok_or_else(|| Error::ElementNotInSet { open: self.space.key(u), element: label.to_string() })
    }

    /// Checks both functor laws.
    pub fn validate(&self) -> Result<()> {
        let opens = self.space.opens();
        let m = opens.len();
        for ui in 0..m {
            if self.restr[ui * m + ui].iter().enumerate().any(|(i, &e)| i != e) {
                return Err(Error::IdentityLawViolation(self.space.key(opens[ui])));
            }
        }
        for ui in 0..m {
            for vi in 0..m {
                if !opens[vi].is_subset(opens[ui]) || ui == vi {
                    continue;
                }
                for wi in 0..m {
                    if !opens[wi].is_subset(opens[vi]) || wi == vi {
                        continue;
                    }
                    let uv = &self.restr[ui * m + vi];
                    let vw = &self.restr[vi * m + wi];
                    let uw = &self.restr[ui * m + wi];
                    if (0..self.sizes[ui]).any(|e| vw[uv[e]] != uw[e]) {
                        return Err(Error::CompositionLawViolation {
                            u: self.space.key(opens[ui]),
                            v: self.space.key(opens[vi]),
                            w: self.space.key(opens[wi]),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical germ of `e ∈ F(u)` at `x`: its restriction to the minimal neighbourhood.
    pub fn germ_at(&self, u: Bits, e: usize, x: usize) -> Result<(usize, usize)> {
        if !u.contains(x) {
            return Err(Error::UnknownPoint(self.space.name(x).to_string()));
        }
        if e >= self.size(u) {
            return Err(Error::ElementNotInSet { open: self.space.key(u), element: format!("#{e}") });
        }
        Ok((x, self.restrict(u, self.space.min_nbhd(x), e)))
    }

    /// Number of germs at `x`.
    pub fn stalk_size(&self, x: usize) -> usize {
        self.size(self.space.min_nbhd(x))
    }

    pub fn sheafify(&self) -> EtaleSheaf {
        let sp = &self.space;
        let n = sp.len();
        let stalks: Vec<usize> = (0..n).map(|x| self.stalk_size(x)).collect();
        let sheaf = EtaleSheaf::from_fn(sp, stalks, |x, y, e| self.restrict(sp.min_nbhd(x), sp.min_nbhd(y), e))
            .expect("restrictions of a valid presheaf are functorial on minimal neighbourhoods");
        let labels = (0..n).map(|x| self.labels_of(sp.min_nbhd(x))).collect();
        sheaf.with_labels(labels)
    }

    /// `μ_U(e)`: the section `x ↦ germ of e at x`.
    pub fn mu(&self, u: Bits, e: usize) -> Section {
        let mut values = vec![None; self.space.len()];
        for x in u.iter() {
            values[x] = Some(self.restrict(u, self.space.min_nbhd(x), e));
        }
        Section { domain: u, values }
    }

    /// Whether `μ_U` is injective and surjective onto the sections of the sheafification.
    pub fn mu_status(&self, sheaf: &EtaleSheaf, u: Bits) -> MuStatus {
        let images: HashSet<Section> = (0..self.size(u)).map(|e| self.mu(u, e)).collect();
        let sections = sheaf.count_sections(u);
        MuStatus { injective: images.len() == self.size(u), surjective: images.len() == sections, sections }
    }

    pub fn mu_bijective_everywhere(&self) -> bool {
        let sheaf = self.sheafify();
        self.space.opens().iter().all(|&u| {
            let st = self.mu_status(&sheaf, u);
            st.injective && st.surjective
        })
    }

    /// F1 and F2 over every cover of every open, with failing witnesses. A member lying
    /// inside another member is the restriction of it in every compatible family and in
    /// every image, so dropping it changes neither condition; only covers by pairwise
    /// incomparable opens are enumerated, and the witnesses come from those.
    pub fn check_sheaf(&self) -> Result<SheafCheck> {
        let mut out = SheafCheck { f1: true, f2: true, equalizer_agrees: true, f1_witness: None, f2_witnesses: Vec::new() };
        for &u in self.space.opens() {
            for cover in self.space.antichain_covers(u, COVER_OPEN_LIMIT)? {
                let (f1, f2) = self.cover_conditions(u, &cover, &mut out);
                if self.equalizer_holds(u, &cover)? != (f1 && f2) {
                    out.equalizer_agrees = false;
                }
            }
        }
        Ok(out)
    }

    /// Fast decision of F1 ∧ F2 using irredundant covers only.
    pub fn is_sheaf(&self) -> bool {
        let mut scratch = SheafCheck { f1: true, f2: true, equalizer_agrees: true, f1_witness: None, f2_witnesses: Vec::new() };
        for &u in self.space.opens() {
            for cover in self.space.irredundant_covers(u) {
                let (f1, f2) = self.cover_conditions(u, &cover, &mut scratch);
                if !(f1 && f2) {
                    return false;
                }
            }
        }
        true
    }

    fn cover_conditions(&self, u: Bits, cover: &[Bits], out: &mut SheafCheck) -> (bool, bool) {
        let restrict_all = |e: usize| -> Vec<usize> { cover.iter().map(|&c| self.restrict(u, c, e)).collect() };
        let mut f1 = true;
        let mut seen: Vec<(Vec<usize>, usize)> = Vec::new();
        for e in 0..self.size(u) {
            let r = restrict_all(e);
            if let Some((_, prev)) = seen.iter().find(|(v, _)| *v == r) {
                f1 = false;
                out.f1 = false;
                if out.f1_witness.is_none() {
                    out.f1_witness = Some(F1Witness { open: u, cover: cover.to_vec(), first: *prev, second: e });
                }
            } else {
                seen.push((r, e));
            }
        }
        let images: HashSet<Vec<usize>> = seen.into_iter().map(|(v, _)| v).collect();
        let mut f2 = true;
        for family in self.compatible_families(cover) {
            if !images.contains(&family) {
                f2 = false;
                out.f2 = false;
                if out.f2_witnesses.len() < WITNESS_LIMIT {
                    out.f2_witnesses.push(F2Witness { open: u, cover: cover.to_vec(), family });
                }
            }
        }
        (f1, f2)
    }

    /// Families `(s_i ∈ F(U_i))` agreeing on all pairwise intersections.
    pub fn compatible_families(&self, cover: &[Bits]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(cover.len());
        self.families_rec(cover, &mut cur, &mut out);
        out
    }

    fn families_rec(&self, cover: &[Bits], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == cover.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..self.size(cover[k]) {
            let ok = (0..k).all(|j| {
                let w = cover[j] & cover[k];
                self.restrict(cover[j], w, cur[j]) == self.restrict(cover[k], w, e)
            });
            if ok {
                cur.push(e);
                self.families_rec(cover, cur, out);
                cur.pop();
            }
        }
    }

    /// Whether `F(U) → ∏F(U_i) ⇉ ∏F(U_i ∩ U_j)` is an equalizer, by brute force over all families.
    fn equalizer_holds(&self, u: Bits, cover: &[Bits]) -> Result<bool> {
        let dims: Vec<usize> = cover.iter().map(|&c| self.size(c)).collect();
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
        if total > FAMILY_LIMIT {
            return Err(Error::ResourceCap(format!("{total} families over a cover of {}", self.space.key(u))));
        }
        let mut equalizer = BTreeSet::new();
        for code in 0..total {
            let mut c = code;
            let family: Vec<usize> = dims
                .iter()
                .map(|&d| {
                    let v = c % d;
                    c /= d;
                    v
                })
                .collect();
            let left: Vec<usize> = pairs(cover.len())
                .map(|(i, j)| self.restrict(cover[i], cover[i] & cover[j], family[i]))
                .collect();
            let right: Vec<usize> = pairs(cover.len())
                .map(|(i, j)| self.restrict(cover[j], cover[i] & cover[j], family[j]))
                .collect();
            if left == right {
                equalizer.insert(family);
            }
        }
        let image: Vec<Vec<usize>> = (0..self.size(u))
            .map(|e| cover.iter().map(|&c| self.restrict(u, c, e)).collect())
            .collect();
        let distinct: BTreeSet<Vec<usize>> = image.iter().cloned().collect();
        Ok(distinct.len() == image.len() && distinct == equalizer)
    }

    /// `(f_*F)(V) = F(f⁻¹V)`.
    pub fn direct_image(&self, f: &PointMap) -> Result<Presheaf> {
        if !f.is_continuous() {
            return Err(Error::NotContinuous("f".into()));
        }
        let pre = |v: Bits| f.preimage(v);
        let mut out = Presheaf::from_fn(&f.dest, |v| self.size(pre(v)), |u, v, e| self.restrict(pre(u), pre(v), e));
        if self.labels.is_some() {
            out.labels = Some(f.dest.opens().iter().map(|&v| self.labels_of(pre(v))).collect());
        }
        Ok(out)
    }
}

fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
}

pub const WITNESS_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuStatus {
    pub injective: bool,
    pub surjective: bool,
    pub sections: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F1Witness {
    pub open: Bits,
    pub cover: Vec<Bits>,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Witness {
    pub open: Bits,
    pub cover: Vec<Bits>,
    pub family: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafCheck {
    pub f1: bool,
    pub f2: bool,
    /// The equalizer formulation gave the same answer as F1 ∧ F2 on every cover.
    pub equalizer_agrees: bool,
    pub f1_witness: Option<F1Witness>,
    /// At most [`WITNESS_LIMIT`] compatible families that do not glue.
    pub f2_witnesses: Vec<F2Witness>,
}

/// Per-open natural maps `h_U : F₁(U) → F₂(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMorphism {
    /// Indexed by open index.
    pub maps: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn is_natural(&self, from: &Presheaf, to: &Presheaf) -> bool {
        let opens = from.space.opens();
        for (ui, &u) in opens.iter().enumerate() {
            if self.maps[ui].len() != from.sizes[ui] || self.maps[ui].iter().any(|&e| e >= to.sizes[ui]) {
                return false;
            }
            for (vi, &v) in opens.iter().enumerate() {
                if !v.is_subset(u) {
                    continue;
                }
                let ok = (0..from.sizes[ui])
                    .all(|e| self.maps[vi][from.restrict_idx(ui, vi, e)] == to.restrict_idx(ui, vi, self.maps[ui][e]));
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// The induced germ map between sheafifications.
    pub fn induced(&self, from: &Presheaf) -> SheafMorphism {
        let sp = &from.space;
        SheafMorphism {
            maps: (0..sp.len()).map(|x| self.maps[from.idx(sp.min_nbhd(x))].clone()).collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The sub-presheaf of equivalence relations on discrete {1,2,3} spanned by
    /// full{1,2}, full{2,3}, diag{1,3}; nothing lives over the whole space.
    pub(crate) fn non_gluing() -> Presheaf {
        let sp = FinSpace::discrete(3);
        let pair = |a, b| Bits::from_indices([a, b]);
        Presheaf::from_fn(
            &sp,
            |u| if u == sp.whole() { 0 } else { 1 },
            |_, _, _| 0,
        )
        .with_labels(
            sp.opens()
                .iter()
                .map(|&u| {
                    if u == sp.whole() {
                        vec![]
                    } else if u == pair(0, 1) || u == pair(1, 2) {
                        vec!["full".to_string()]
                    } else if u.len() == 2 {
                        vec!["diag".to_string()]
                    } else {
                        vec!["triv".to_string()]
                    }
                })
                .collect(),
        )
    }

    /// Two elements over the whole space, one everywhere else.
    pub(crate) fn lumpy(sp: &FinSpace) -> Presheaf {
        let whole = sp.whole();
        Presheaf::from_fn(sp, |u| if u == whole { 2 } else { 1 }, |u, v, e| if u == v { e } else { 0 })
    }

    #[test]
    fn constant_and_functions_are_valid() {
        let sp = FinSpace::sierpinski();
        Presheaf::constant(&sp, 2).validate().unwrap();
        let f = Presheaf::functions(&sp, 2);
        f.validate().unwrap();
        assert_eq!(f.size(sp.whole()), 4);
        assert_eq!(f.stalk_size(1), 4);
        assert_eq!(f.stalk_size(0), 2);
    }

    #[test]
    fn broken_composition_is_reported() {
        let sp = FinSpace::sierpinski();
        let a = Bits::singleton(0);
        let labels = vec![
            (Bits::EMPTY, vec!["z".into(), "w".into()]),
            (a, vec!["p".into(), "q".into()]),
            (sp.whole(), vec!["s".into(), "t".into()]),
        ];
        let maps = vec![
            (sp.whole(), a, vec![0, 1]),
            (a, Bits::EMPTY, vec![0, 1]),
            (sp.whole(), Bits::EMPTY, vec![1, 0]),
        ];
        let p = Presheaf::from_tables(&sp, labels, maps).unwrap();
        assert!(matches!(p.validate(), Err(Error::CompositionLawViolation { .. })));
    }

    #[test]
    fn non_gluing_family_fails_f2_only() {
        let p = non_gluing();
        p.validate().unwrap();
        let check = p.check_sheaf().unwrap();
        assert!(check.f1);
        assert!(!check.f2);
        assert!(check.equalizer_agrees);
        let sp = p.space();
        let target = vec![Bits::from_indices([0, 1]), Bits::from_indices([0, 2]), Bits::from_indices([1, 2])];
        let found = check.f2_witnesses.iter().any(|w| {
            let mut c = w.cover.clone();
            c.sort();
            let mut t = target.clone();
            t.sort();
            c == t && w.open == sp.whole()
        });
        assert!(found);
        // Γ(X) has a section though nothing lives over X
        let sheaf = p.sheafify();
        assert_eq!(sheaf.count_sections(sp.whole()), 1);
        assert_eq!(p.size(sp.whole()), 0);
    }

    #[test]
    fn constant_on_sierpinski_is_a_sheaf() {
        let sp = FinSpace::sierpinski();
        let p = Presheaf::constant(&sp, 2);
        // the constant presheaf has two elements over ∅, which the empty cover rejects
        assert!(!p.check_sheaf().unwrap().f1);
        let fixed = Presheaf::from_fn(&sp, |u| if u.is_empty() { 1 } else { 2 }, |_, v, e| if v.is_empty() { 0 } else { e });
        let c = fixed.check_sheaf().unwrap();
        assert!(c.f1 && c.f2 && c.equalizer_agrees);
        assert!(fixed.is_sheaf());
    }

    #[test]
    fn functions_presheaf_is_a_sheaf_on_small_spaces() {
        for n in 0..=3 {
            for sp in crate::fintop::all_topologies(n) {
                let p = Presheaf::functions(&sp, 2);
                let c = p.check_sheaf().unwrap();
                assert!(c.f1 && c.f2 && c.equalizer_agrees);
                assert!(p.mu_bijective_everywhere());
            }
        }
    }

    /// Stalk as a colimit: classes of pairs (U, s) with x ∈ U under "agree on a smaller open around x".
    fn colimit_stalk_size(p: &Presheaf, x: usize) -> usize {
        let sp = p.space();
        let pairs: Vec<(Bits, usize)> = sp
            .opens()
            .iter()
            .filter(|u| u.contains(x))
            .flat_map(|&u| (0..p.size(u)).map(move |e| (u, e)))
            .collect();
        let mut parent: Vec<usize> = (0..pairs.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..pairs.len() {
            for j in 0..pairs.len() {
                let (u, s) = pairs[i];
                let (v, t) = pairs[j];
                let agree = sp
                    .opens()
                    .iter()
                    .any(|&w| w.contains(x) && w.is_subset(u & v) && p.restrict(u, w, s) == p.restrict(v, w, t));
                if agree {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        (0..pairs.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    #[test]
    fn stalks_match_the_colimit() {
        let sp = FinSpace::sierpinski();
        let f = Presheaf::functions(&sp, 2);
        assert_eq!(colimit_stalk_size(&f, 1), 4);
        assert_eq!(colimit_stalk_size(&f, 0), 2);
        for n in 1..=3 {
            for sp in crate::fintop::all_topologies(n) {
                let f = Presheaf::functions(&sp, 2);
                for x in 0..n {
                    assert_eq!(colimit_stalk_size(&f, x), f.stalk_size(x));
                }
            }
        }
        let c = Presheaf::constant(&FinSpace::discrete(2), 2);
        assert_eq!(colimit_stalk_size(&c, 0), 2);
    }

    #[test]
    fn mu_for_constant_on_discrete_pair() {
        let sp = FinSpace::discrete(2);
        let p = Presheaf::constant(&sp, 2);
        let sheaf = p.sheafify();
        assert_eq!(sheaf.germ_count(), 4);
        let st = p.mu_status(&sheaf, sp.whole());
        assert_eq!(st.sections, 4);
        assert!(st.injective && !st.surjective);
        assert_eq!(sheaf.count_sections(Bits::EMPTY), 1);
    }

    #[test]
    fn direct_image_to_a_point() {
        let x = FinSpace::discrete(2);
        let pt = FinSpace::discrete(1);
        let f = PointMap::new(x.clone(), pt.clone(), vec![0, 0]).unwrap();
        let sheaf = Presheaf::constant(&x, 2).sheafify();
        let pushed = sheaf.canonical_presheaf().direct_image(&f).unwrap();
        assert_eq!(pushed.size(pt.whole()), 4);
        let id = PointMap::identity(&x);
        let same = sheaf.canonical_presheaf().direct_image(&id).unwrap();
        assert_eq!(same.sizes(), sheaf.canonical_presheaf().sizes());
    }

    #[test]
    fn induced_morphism_of_identity() {
        let sp = FinSpace::sierpinski();
        let p = Presheaf::functions(&sp, 2);
        let id = PresheafMorphism { maps: sp.opens().iter().map(|&u| (0..p.size(u)).collect()).collect() };
        assert!(id.is_natural(&p, &p));
        let sheaf = p.sheafify();
        assert!(id.induced(&p).is_continuous(&sheaf, &sheaf));
    }
}
