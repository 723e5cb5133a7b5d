//! Finite groupoids as explicit tables.
//!
//! Composition follows `m(f, g) = f∘g`, defined when `src(f) = tgt(g)`, with
//! `src(f∘g) = src(g)` and `tgt(f∘g) = tgt(f)`. Subgroupoids are arrow sets
//! ([`Bits`]); their objects are the objects whose identity they contain.

mod constructors;
pub mod group;
mod topological;

pub use group::{FinGroup, GroupAction};
pub use topological::TopGroupoid;

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::bits::Bits;
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    inv: Vec<usize>,
    /// `comp[f * a + g] = f∘g`, or `NONE` when not composable.
    comp: Vec<usize>,
}

/// Raw tables as read from an instance file, indices already resolved.
#[derive(Clone, Debug, Default)]
pub struct RawGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<(String, usize, usize)>,
    pub compose: Vec<(usize, usize, usize)>,
    pub identities: Vec<(usize, usize)>,
    pub inverses: Vec<(usize, usize)>,
}

fn violation(law: &'static str, witness: String) -> Error {
    Error::AxiomViolation { law, witness }
}

impl Groupoid {
    pub fn validate(raw: RawGroupoid) -> Result<Groupoid> {
        let a = raw.arrows.len();
        let n = raw.objects.len();
        if a > Bits::CAPACITY {
            return Err(Error::TooLarge { what: "groupoid", got: a, limit: Bits::CAPACITY });
        }
        let mut ids = HashSet::new();
        for (name, s, t) in &raw.arrows {
            if !ids.insert(name.as_str()) {
                return Err(Error::Duplicate(format!("arrow `{name}`")));
            }
            if *s >= n || *t >= n {
                return Err(Error::UnknownObject(format!("endpoint of `{name}`")));
            }
        }
        let names: Vec<String> = raw.arrows.iter().map(|(n, _, _)| n.clone()).collect();
        let src: Vec<usize> = raw.arrows.iter().map(|&(_, s, _)| s).collect();
        let tgt: Vec<usize> = raw.arrows.iter().map(|&(_, _, t)| t).collect();

        let mut comp = vec![NONE; a * a];
        for &(f, g, h) in &raw.compose {
            if f >= a || g >= a || h >= a {
                return Err(Error::UnknownArrow(format!("#{}", f.max(g).max(h))));
            }
            if src[f] != tgt[g] {
                return Err(violation("composable", format!("{} ∘ {} listed but src ≠ tgt", names[f], names[g])));
            }
            if comp[f * a + g] != NONE {
                return Err(Error::Duplicate(format!("composite {} ∘ {}", names[f], names[g])));
            }
            comp[f * a + g] = h;
        }
        let mut ident = vec![NONE; n];
        for &(x, i) in &raw.identities {
            if x >= n || i >= a {
                return Err(Error::UnknownObject(format!("identity #{x}")));
            }
            ident[x] = i;
        }
        if let Some(x) = ident.iter().position(|&i| i == NONE) {
            return Err(violation("identity", format!("object `{}` has no identity", raw.objects[x])));
        }
        let mut inv = vec![NONE; a];
        for &(f, g) in &raw.inverses {
            if f >= a || g >= a {
                return Err(Error::UnknownArrow(format!("#{}", f.max(g))));
            }
            inv[f] = g;
        }
        if let Some(f) = inv.iter().position(|&g| g == NONE) {
            return Err(violation("inverse", format!("`{}` has no inverse", names[f])));
        }
        let g = Groupoid { objects: raw.objects, arrows: names, src, tgt, ident, inv, comp };
        g.check_axioms()?;
        Ok(g)
    }

    /// Builds a groupoid from closures over dense arrow indices and checks every axiom.
    pub fn from_fn(
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        compose: impl Fn(usize, usize) -> usize,
        identity: impl Fn(usize) -> usize,
        inverse: impl Fn(usize) -> usize,
    ) -> Result<Groupoid> {
        let a = arrows.len();
        let mut raw = RawGroupoid { objects, ..Default::default() };
        for f in 0..a {
            for g in 0..a {
                if arrows[f].1 == arrows[g].2 {
                    raw.compose.push((f, g, compose(f, g)));
                }
            }
        }
        raw.identities = (0..raw.objects.len()).map(|x| (x, identity(x))).collect();
        raw.inverses = (0..a).map(|f| (f, inverse(f))).collect();
        raw.arrows = arrows;
        Groupoid::validate(raw)
    }

    fn check_axioms(&self) -> Result<()> {
        let a = self.arrows.len();
        let name = |f: usize| self.arrows[f].as_str();
        for f in 0..a {
            for g in 0..a {
                if self.src[f] != self.tgt[g] {
                    continue;
                }
                let h = self.comp[f * a + g];
                if h == NONE {
                    return Err(violation("composable", format!("{} ∘ {} missing", name(f), name(g))));
                }
                if self.src[h] != self.src[g] || self.tgt[h] != self.tgt[f] {
                    return Err(violation("endpoints", format!("{} ∘ {} = {}", name(f), name(g), name(h))));
                }
            }
        }
        for (x, &i) in self.ident.iter().enumerate() {
            if self.src[i] != x || self.tgt[i] != x {
                return Err(violation("identity", format!("{} is not a loop at {}", name(i), self.objects[x])));
            }
        }
        for f in 0..a {
            let (s, t) = (self.ident[self.src[f]], self.ident[self.tgt[f]]);
            if self.comp[f * a + s] != f || self.comp[t * a + f] != f {
                return Err(violation("unit", name(f).to_string()));
            }
            let g = self.inv[f];
            if self.src[g] != self.tgt[f] || self.tgt[g] != self.src[f] {
                return Err(violation("inverse", format!("{} / {}", name(f), name(g))));
            }
            if self.comp[f * a + g] != t || self.comp[g * a + f] != s {
                return Err(violation("inverse", format!("{} / {}", name(f), name(g))));
            }
        }
        for f in 0..a {
            for g in 0..a {
                if self.src[f] != self.tgt[g] {
                    continue;
                }
                let fg = self.comp[f * a + g];
                for h in 0..a {
                    if self.src[g] != self.tgt[h] {
                        continue;
                    }
                    let gh = self.comp[g * a + h];
                    if self.comp[fg * a + h] != self.comp[f * a + gh] {
                        return Err(violation("associativity", format!("{}, {}, {}", name(f), name(g), name(h))));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrows
    }

    pub fn arrow_name(&self, f: usize) -> &str {
        &self.arrows[f]
    }

    pub fn arrow(&self, name: &str) -> Result<usize> {
        self.arrows.iter().position(|a| a == name).ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|a| a == name).ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn all_arrows(&self) -> Bits {
        Bits::full(self.arrows.len())
    }

    pub fn all_objects(&self) -> Bits {
        Bits::full(self.objects.len())
    }

    /// `α`
    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    /// `β`
    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.ident[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.ident[self.src[f]] == f
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inv[f]
    }

    pub fn composable(&self, f: usize, g: usize) -> bool {
        self.src[f] == self.tgt[g]
    }

    /// `f∘g`, when `src(f) = tgt(g)`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let h = self.comp[f * self.arrows.len() + g];
        (h != NONE).then_some(h)
    }

    pub fn identities(&self) -> Bits {
        self.ident.iter().copied().collect()
    }

    /// Identities of the objects in `objects`.
    pub fn identities_of(&self, objects: Bits) -> Bits {
        objects.iter().map(|x| self.ident[x]).collect()
    }

    /// Objects whose identity lies in `h`.
    pub fn objects_of(&self, h: Bits) -> Bits {
        (0..self.objects.len()).filter(|&x| h.contains(self.ident[x])).collect()
    }

    /// Closed under composition and inverses, and contains the identities of all endpoints.
    pub fn is_subgroupoid(&self, h: Bits) -> bool {
        h.iter().all(|f| {
            h.contains(self.inv[f])
                && h.contains(self.ident[self.src[f]])
                && h.contains(self.ident[self.tgt[f]])
                && h.iter().all(|g| !self.composable(f, g) || h.contains(self.comp[f * self.arrows.len() + g]))
        })
    }

    /// A subgroupoid containing the identity of every object in `objects`.
    pub fn is_wide_on(&self, h: Bits, objects: Bits) -> bool {
        self.identities_of(objects).is_subset(h)
    }

    /// `G|U`: arrows with both endpoints in `u`.
    pub fn restrict_full(&self, u: Bits) -> Bits {
        (0..self.arrows.len()).filter(|&f| u.contains(self.src[f]) && u.contains(self.tgt[f])).collect()
    }

    /// `H|U = H ∩ G|U`.
    pub fn restrict(&self, h: Bits, u: Bits) -> Bits {
        h & self.restrict_full(u)
    }

    /// Least subgroupoid containing `seed` and the identities of `objects`.
    pub fn generated(&self, seed: Bits, objects: Bits) -> Bits {
        let a = self.arrows.len();
        let mut h = seed | self.identities_of(objects);
        for f in seed.iter() {
            h.insert(self.ident[self.src[f]]);
            h.insert(self.ident[self.tgt[f]]);
        }
        loop {
            let mut next = h;
            for f in h.iter() {
                next.insert(self.inv[f]);
                for g in h.iter() {
                    let c = self.comp[f * a + g];
                    if c != NONE {
                        next.insert(c);
                    }
                }
            }
            if next == h {
                return h;
            }
            h = next;
        }
    }

    /// Every subgroupoid containing the identities of `objects`, found by adding one arrow at a time.
    pub fn subgroupoids_containing(&self, objects: Bits) -> Vec<Bits> {
        let base = self.generated(Bits::EMPTY, objects);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        seen.insert(base.0);
        let mut stack = vec![base];
        while let Some(h) = stack.pop() {
            for f in (self.all_arrows() - h).iter() {
                let k = self.generated(h | Bits::singleton(f), Bits::EMPTY);
                if seen.insert(k.0) {
                    stack.push(k);
                }
            }
        }
        seen.into_iter().map(Bits).collect()
    }

    /// Wide subgroupoids of `G|U`.
    pub fn wide_subgroupoids(&self, u: Bits) -> Vec<Bits> {
        let full = self.restrict_full(u);
        self.subgroupoids_containing(u).into_iter().filter(|h| h.is_subset(full)).collect()
    }

    /// Objects reachable from `x` along arrows of `h`, in either direction.
    pub fn component_of(&self, h: Bits, x: usize) -> Bits {
        let mut comp = Bits::singleton(x);
        loop {
            let mut next = comp;
            for f in h.iter() {
                if comp.contains(self.src[f]) || comp.contains(self.tgt[f]) {
                    next.insert(self.src[f]);
                    next.insert(self.tgt[f]);
                }
            }
            if next == comp {
                return comp;
            }
            comp = next;
        }
    }

    /// Transitivity components of `h` on the objects `objects`, ordered by least element.
    pub fn components(&self, h: Bits, objects: Bits) -> Vec<Bits> {
        let mut rest = objects;
        let mut out = Vec::new();
        while let Some(x) = rest.first() {
            let c = self.component_of(h, x) & objects;
            out.push(c | Bits::singleton(x));
            rest = rest - c - Bits::singleton(x);
        }
        out
    }

    pub fn is_transitive(&self, h: Bits, objects: Bits) -> bool {
        self.components(h, objects).len() == 1
    }

    /// `H(x, x)`.
    pub fn vertex_group(&self, h: Bits, x: usize) -> Bits {
        h.iter().filter(|&f| self.src[f] == x && self.tgt[f] == x).collect()
    }

    /// Arrow ids in `h`, for reports.
    pub fn arrow_list(&self, h: Bits) -> Vec<String> {
        h.iter().map(|f| self.arrows[f].clone()).collect()
    }

    pub fn arrow_set(&self, names: &[String]) -> Result<Bits> {
        names.iter().map(|n| self.arrow(n)).collect::<Result<Vec<_>>>().map(Bits::from_indices)
    }

    /// The subgroupoid `h` as a groupoid in its own right, with the map back to arrow indices.
    pub fn to_groupoid(&self, h: Bits) -> (Groupoid, Vec<usize>) {
        let arrows: Vec<usize> = h.iter().collect();
        let objs: Vec<usize> = self.objects_of(h).iter().collect();
        let oi: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let ai: HashMap<usize, usize> = arrows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let g = Groupoid::from_fn(
            objs.iter().map(|&x| self.objects[x].clone()).collect(),
            arrows.iter().map(|&f| (self.arrows[f].clone(), oi[&self.src[f]], oi[&self.tgt[f]])).collect(),
            |f, g| ai[&self.comp[arrows[f] * self.arrows.len() + arrows[g]]],
            |x| ai[&self.ident[objs[x]]],
            |f| ai[&self.inv[arrows[f]]],
        )
        .expect("subgroupoid of a valid groupoid");
        (g, arrows)
    }
}

/// A functor between groupoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl GroupoidMorphism {
    pub fn is_morphism(&self, from: &Groupoid, to: &Groupoid) -> bool {
        let a = from.arrow_count();
        (0..a).all(|f| {
            let img = self.arrows[f];
            to.src(img) == self.objects[from.src(f)] && to.tgt(img) == self.objects[from.tgt(f)]
        }) && (0..from.object_count()).all(|x| self.arrows[from.identity(x)] == to.identity(self.objects[x]))
            && (0..a).all(|f| {
                (0..a).all(|g| match from.compose(f, g) {
                    Some(h) => to.compose(self.arrows[f], self.arrows[g]) == Some(self.arrows[h]),
                    None => true,
                })
            })
    }

    pub fn image(&self, h: Bits) -> Bits {
        h.iter().map(|f| self.arrows[f]).collect()
    }

    pub fn preimage(&self, k: Bits) -> Bits {
        (0..self.arrows.len()).filter(|&f| k.contains(self.arrows[f])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::FinSpace;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pair_groupoid_basics() {
        let g = Groupoid::pair(&names(&["1", "2", "3"]));
        assert_eq!(g.arrow_count(), 9);
        let a21 = g.arrow("(2,1)").unwrap();
        let a32 = g.arrow("(3,2)").unwrap();
        assert_eq!(g.compose(a32, a21), Some(g.arrow("(3,1)").unwrap()));
        assert_eq!(g.compose(a21, a32), None);
        assert_eq!(g.restrict_full(Bits::from_indices([0, 1])).len(), 4);
        assert!(g.is_transitive(g.all_arrows(), g.all_objects()));
    }

    #[test]
    fn broken_associativity_is_caught() {
        // a group table for Z3 with one entry disturbed, seen as a one-object groupoid
        let objects = names(&["*"]);
        let arrows = vec![("e".to_string(), 0, 0), ("a".to_string(), 0, 0), ("b".to_string(), 0, 0)];
        let table = [[0, 1, 2], [1, 2, 0], [2, 0, 0]];
        let err = Groupoid::from_fn(objects, arrows, |f, g| table[f][g], |_| 0, |f| [0, 2, 1][f]).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }));
    }

    #[test]
    fn null_groupoid_is_valid() {
        let g = Groupoid::null(&names(&["a", "b"]));
        assert_eq!(g.arrow_count(), 2);
        assert_eq!(g.restrict_full(Bits::singleton(0)).len(), 1);
        assert_eq!(g.components(g.all_arrows(), g.all_objects()).len(), 2);
    }

    #[test]
    fn generated_subgroupoids() {
        let g = Groupoid::pair(&names(&["1", "2", "3"]));
        let seed = g.arrow_set(&names(&["(1,2)", "(2,3)"])).unwrap();
        assert_eq!(g.generated(seed, g.all_objects()), g.all_arrows());
        assert_eq!(g.generated(Bits::EMPTY, g.all_objects()), g.identities());

        let k = Groupoid::pair_with_group(&names(&["1", "2"]), &FinGroup::cyclic(2));
        assert_eq!(k.arrow_count(), 8);
        let f = k.arrow("(1,2,g)").unwrap();
        assert_eq!(k.arrow_name(k.inverse(f)), "(2,1,g)");
        let h = k.generated(Bits::singleton(f), k.all_objects());
        assert_eq!(h.len(), 4);
        assert_eq!(k.vertex_group(k.all_arrows(), 0).len(), 2);
    }

    /// Intersection of all subgroupoids containing the seed.
    fn generated_oracle(g: &Groupoid, seed: Bits, objects: Bits) -> Bits {
        (0..1u64 << g.arrow_count())
            .map(Bits)
            .filter(|&h| seed.is_subset(h) && g.identities_of(objects).is_subset(h) && g.is_subgroupoid(h))
            .fold(g.all_arrows(), |acc, h| acc & h)
    }

    #[test]
    fn generation_matches_brute_force() {
        let g = Groupoid::pair(&names(&["1", "2", "3"]));
        for seed in g.all_arrows().subsets().step_by(7) {
            for objects in g.all_objects().subsets() {
                assert_eq!(g.generated(seed, objects), generated_oracle(&g, seed, objects));
            }
        }
        let k = Groupoid::pair_with_group(&names(&["1", "2"]), &FinGroup::cyclic(2));
        for seed in k.all_arrows().subsets() {
            let h = k.generated(seed, Bits::EMPTY);
            assert_eq!(h, generated_oracle(&k, seed, Bits::EMPTY));
            assert_eq!(k.generated(h, Bits::EMPTY), h);
        }
    }

    #[test]
    fn subgroupoid_enumeration_is_complete() {
        let g = Groupoid::pair(&names(&["1", "2", "3"]));
        let brute: Vec<Bits> = (0..1u64 << 9).map(Bits).filter(|&h| g.is_subgroupoid(h)).collect();
        assert_eq!(g.subgroupoids_containing(Bits::EMPTY), brute);
        // wide subgroupoids of a pair groupoid are equivalence relations
        assert_eq!(g.wide_subgroupoids(g.all_objects()).len(), 5);
    }

    #[test]
    fn relations_and_actions() {
        let sp = FinSpace::discrete(3);
        let pair = Groupoid::pair(sp.names());
        let r = pair.relation(&[Bits::from_indices([0, 1]), Bits::singleton(2)]).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(pair.component_of(r, 0), Bits::from_indices([0, 1]));
        let swap = GroupAction::new(FinGroup::cyclic(2), 2, vec![0, 1, 1, 0]).unwrap();
        let act = Groupoid::action(&names(&["1", "2"]), &swap);
        assert_eq!(act.arrow_count(), 4);
        let f = act.arrow("(g,1)").unwrap();
        assert_eq!((act.src(f), act.tgt(f)), (0, 1));
    }

    #[test]
    fn upsilon_is_a_morphism() {
        let obj = names(&["1", "2"]);
        let k = Groupoid::pair_with_group(&obj, &FinGroup::cyclic(2));
        let (pair, ups) = k.upsilon();
        assert!(ups.is_morphism(&k, &pair));
        let p = Groupoid::pair(&obj);
        let (_, id) = p.upsilon();
        assert_eq!(id.arrows, (0..4).collect::<Vec<_>>());
        let null = Groupoid::null(&obj);
        let (pair, diag) = null.upsilon();
        assert_eq!(diag.image(null.all_arrows()), pair.identities());
    }
}
