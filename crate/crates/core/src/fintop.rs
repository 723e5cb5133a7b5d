//! Finite topological spaces given by an explicit lattice of open sets.
//!
//! Every finite space is determined by its minimal neighbourhoods `N(x)`, the
//! intersection of all opens containing `x`. Opens are exactly the sets `S`
//! with `N(x) ⊆ S` for every `x ∈ S`, and a map between finite spaces is
//! continuous iff `f(N(x)) ⊆ N(f(x))` for every point. Most checks below are
//! phrased through that characterisation.

use std::collections::{BTreeSet, HashSet};

use crate::bits::Bits;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    names: Vec<String>,
    /// Sorted by `(cardinality, bits)`, so `opens[0]` is empty and the last is the whole space.
    opens: Vec<Bits>,
    nbhd: Vec<Bits>,
}

fn sort_opens(opens: &mut [Bits]) {
    opens.sort_by_key(|b| (b.len(), b.0));
}

impl FinSpace {
    /// Builds a space from point ids and open sets given as lists of point ids.
    /// Nothing is completed: a family that is not a topology is rejected.
    pub fn validate(points: &[String], opens: &[Vec<String>]) -> Result<FinSpace> {
        if points.len() > Bits::CAPACITY {
            return Err(Error::TooLarge { what: "space", got: points.len(), limit: Bits::CAPACITY });
        }
        let mut seen = HashSet::new();
        for p in points {
            if !seen.insert(p.as_str()) {
                return Err(Error::Duplicate(format!("point `{p}`")));
            }
        }
        let index = |name: &str| points.iter().position(|p| p == name);
        let mut sets = Vec::with_capacity(opens.len());
        for open in opens {
            let mut b = Bits::EMPTY;
            for name in open {
                let i = index(name).ok_or_else(|| Error::UnknownPoint(name.clone()))?;
                b.insert(i);
            }
            sets.push(b);
        }
        Self::from_opens(points.to_vec(), sets)
    }

    pub fn from_opens(names: Vec<String>, mut opens: Vec<Bits>) -> Result<FinSpace> {
        let n = names.len();
        if n > Bits::CAPACITY {
            return Err(Error::TooLarge { what: "space", got: n, limit: Bits::CAPACITY });
        }
        let whole = Bits::full(n);
        if let Some(bad) = opens.iter().find(|o| !o.is_subset(whole)) {
            let extra = bad.iter().find(|&i| i >= n).unwrap_or(0);
            return Err(Error::UnknownPoint(format!("#{extra}")));
        }
        sort_opens(&mut opens);
        if let Some(w) = opens.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(format!("open set {}", fmt_set(&names, w[0]))));
        }
        let set: HashSet<Bits> = opens.iter().copied().collect();
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !set.contains(&(a | b)) {
                    return Err(Error::ClosureViolation {
                        op: "union",
                        left: fmt_set(&names, a),
                        right: fmt_set(&names, b),
                    });
                }
                if !set.contains(&(a & b)) {
                    return Err(Error::ClosureViolation {
                        op: "intersection",
                        left: fmt_set(&names, a),
                        right: fmt_set(&names, b),
                    });
                }
            }
        }
        if !opens.contains(&Bits::EMPTY) || !opens.contains(&whole) {
            return Err(Error::MissingEmptyOrWhole);
        }
        let nbhd = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(whole, |acc, &o| acc & o)
            })
            .collect();
        Ok(FinSpace { names, opens, nbhd })
    }

    /// Builds a space from its minimal neighbourhoods, which must describe a preorder:
    /// `x ∈ N(x)` and `y ∈ N(x)` implies `N(y) ⊆ N(x)`.
    pub fn from_nbhds(names: Vec<String>, nbhd: Vec<Bits>) -> Result<FinSpace> {
        let n = names.len();
        if n > Bits::CAPACITY || nbhd.len() != n {
            return Err(Error::TooLarge { what: "space", got: n, limit: Bits::CAPACITY });
        }
        for x in 0..n {
            if !nbhd[x].contains(x) || !nbhd[x].is_subset(Bits::full(n)) {
                return Err(Error::NotOpen(fmt_set(&names, nbhd[x])));
            }
            for y in nbhd[x].iter() {
                if !nbhd[y].is_subset(nbhd[x]) {
                    return Err(Error::NotOpen(fmt_set(&names, nbhd[x])));
                }
            }
        }
        let opens = opens_from_nbhds(&nbhd);
        Ok(FinSpace { names, opens, nbhd })
    }

    pub fn discrete(n: usize) -> FinSpace {
        let names = (1..=n).map(|i| i.to_string()).collect();
        let nbhd = (0..n).map(Bits::singleton).collect();
        FinSpace::from_nbhds(names, nbhd).expect("discrete topology")
    }

    pub fn indiscrete(n: usize) -> FinSpace {
        let names = (1..=n).map(|i| i.to_string()).collect();
        let nbhd = vec![Bits::full(n); n];
        FinSpace::from_nbhds(names, nbhd).expect("indiscrete topology")
    }

    /// Points `a`, `b` with opens `∅, {a}, {a,b}`.
    pub fn sierpinski() -> FinSpace {
        let names = vec!["a".to_string(), "b".to_string()];
        FinSpace::from_nbhds(names, vec![Bits::singleton(0), Bits::full(2)]).expect("sierpinski")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn whole(&self) -> Bits {
        Bits::full(self.len())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn point(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn set_of(&self, names: &[String]) -> Result<Bits> {
        names.iter().map(|n| self.point(n)).collect::<Result<Vec<_>>>().map(Bits::from_indices)
    }

    pub fn opens(&self) -> &[Bits] {
        &self.opens
    }

    pub fn open_index(&self, u: Bits) -> Option<usize> {
        self.opens
            .binary_search_by_key(&(u.len(), u.0), |b| (b.len(), b.0))
            .ok()
    }

    pub fn is_open(&self, s: Bits) -> bool {
        s.iter().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn is_closed(&self, s: Bits) -> bool {
        self.is_open(self.whole() - s)
    }

    /// Smallest open set containing `x`.
    pub fn min_nbhd(&self, x: usize) -> Bits {
        self.nbhd[x]
    }

    pub fn min_nbhds(&self) -> &[Bits] {
        &self.nbhd
    }

    /// Opens contained in `u`, in canonical order.
    pub fn opens_within(&self, u: Bits) -> impl Iterator<Item = Bits> + '_ {
        self.opens.iter().copied().filter(move |o| o.is_subset(u))
    }

    pub fn interior(&self, s: Bits) -> Bits {
        s.iter().filter(|&x| self.nbhd[x].is_subset(s)).collect()
    }

    /// Smallest closed superset of `s`.
    pub fn closure(&self, s: Bits) -> Bits {
        (0..self.len()).filter(|&y| self.nbhd[y].intersects(s)).collect()
    }

    /// Closure of `s` relative to the subspace `within`.
    pub fn relative_closure(&self, s: Bits, within: Bits) -> Bits {
        self.closure(s) & within
    }

    /// Connected components of the subspace `s`, ordered by least element.
    pub fn components(&self, s: Bits) -> Vec<Bits> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = Bits::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = Bits::EMPTY;
                for x in frontier.iter() {
                    next |= self.nbhd[x] & s;
                }
                // points whose neighbourhood meets the component
                for y in (s - comp).iter() {
                    if self.nbhd[y].intersects(comp | next) {
                        next.insert(y);
                    }
                }
                frontier = next - comp;
                comp |= next;
            }
            out.push(comp);
            rest = rest - comp;
        }
        out
    }

    pub fn is_connected(&self, s: Bits) -> bool {
        self.components(s).len() <= 1
    }

    pub fn closed_sets(&self) -> Vec<Bits> {
        let w = self.whole();
        self.opens.iter().map(|&o| w - o).collect()
    }

    /// Every nonempty irreducible closed set is the closure of exactly one point.
    pub fn is_sober(&self) -> bool {
        let closed = self.closed_sets();
        for &f in &closed {
            if f.is_empty() {
                continue;
            }
            let proper: Vec<Bits> = closed.iter().copied().filter(|&c| c.is_subset(f) && c != f).collect();
            let reducible = proper
                .iter()
                .any(|&a| proper.iter().any(|&b| (a | b) == f));
            if reducible {
                continue;
            }
            let generic = (0..self.len()).filter(|&x| self.closure(Bits::singleton(x)) == f).count();
            if generic != 1 {
                return false;
            }
        }
        true
    }

    /// Subspace on `s`; the second component maps new indices to old ones.
    pub fn subspace(&self, s: Bits) -> (FinSpace, Vec<usize>) {
        let old: Vec<usize> = s.iter().collect();
        let names = old.iter().map(|&i| self.names[i].clone()).collect();
        let reindex = |b: Bits| -> Bits {
            old.iter().enumerate().filter(|(_, &o)| b.contains(o)).map(|(j, _)| j).collect()
        };
        let nbhd = old.iter().map(|&i| reindex(self.nbhd[i] & s)).collect();
        let space = FinSpace::from_nbhds(names, nbhd).expect("subspace of a valid space");
        (space, old)
    }

    /// Product space; point `(i, j)` has index `i * other.len() + j`.
    pub fn product(&self, other: &FinSpace) -> Result<FinSpace> {
        let (n, m) = (self.len(), other.len());
        if n * m > Bits::CAPACITY {
            return Err(Error::TooLarge { what: "product space", got: n * m, limit: Bits::CAPACITY });
        }
        let mut names = Vec::with_capacity(n * m);
        let mut nbhd = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                names.push(format!("({},{})", self.names[i], other.names[j]));
                let mut b = Bits::EMPTY;
                for a in self.nbhd[i].iter() {
                    for c in other.nbhd[j].iter() {
                        b.insert(a * m + c);
                    }
                }
                nbhd.push(b);
            }
        }
        FinSpace::from_nbhds(names, nbhd)
    }

    /// Irredundant covers of the open `u` by opens: no member lies in the union
    /// of the others. The empty cover is the only irredundant cover of `∅`.
    pub fn irredundant_covers(&self, u: Bits) -> Vec<Vec<Bits>> {
        let candidates: Vec<Bits> = self.opens_within(u).filter(|o| !o.is_empty()).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        irredundant_rec(&candidates, 0, u, &mut chosen, &mut out);
        out
    }

    /// Every cover of `u` by opens contained in `u`, including redundant ones.
    pub fn all_covers(&self, u: Bits, limit: usize) -> Result<Vec<Vec<Bits>>> {
        let candidates: Vec<Bits> = self.opens_within(u).collect();
        if candidates.len() > limit {
            return Err(Error::ResourceCap(format!(
                "{} opens below {}, cover enumeration limited to {}",
                candidates.len(),
                self.fmt_set(u),
                limit
            )));
        }
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << candidates.len()) {
            let members: Vec<Bits> = Bits(mask).iter().map(|i| candidates[i]).collect();
            let union = members.iter().fold(Bits::EMPTY, |a, &b| a | b);
            if union == u {
                out.push(members);
            }
        }
        Ok(out)
    }

    /// Covers of `u` whose members are pairwise incomparable. Only covers of `∅` itself
    /// can contain `∅`.
    pub fn antichain_covers(&self, u: Bits, limit: usize) -> Result<Vec<Vec<Bits>>> {
        let mut covers = self.all_covers(u, limit)?;
        covers.retain(|c| c.iter().all(|&v| c.iter().all(|&w| v == w || !v.is_subset(w))));
        Ok(covers)
    }

    pub fn fmt_set(&self, s: Bits) -> String {
        fmt_set(&self.names, s)
    }

    /// Canonical key of a set: sorted point ids in declaration order, e.g. `[a,b]`.
    pub fn key(&self, s: Bits) -> String {
        let inner: Vec<&str> = s.iter().map(|i| self.names[i].as_str()).collect();
        format!("[{}]", inner.join(","))
    }

    pub fn points_of(&self, s: Bits) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }
}

fn irredundant_rec(cands: &[Bits], start: usize, target: Bits, chosen: &mut Vec<Bits>, out: &mut Vec<Vec<Bits>>) {
    let union = chosen.iter().fold(Bits::EMPTY, |a, &b| a | b);
    if union == target {
        let irredundant = (0..chosen.len()).all(|i| {
            let others = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Bits::EMPTY, |a, (_, &b)| a | b);
            !chosen[i].is_subset(others)
        });
        if irredundant {
            out.push(chosen.clone());
        }
        return;
    }
    for i in start..cands.len() {
        let c = cands[i];
        // a new member must contribute a point not yet covered
        if c.is_subset(union) {
            continue;
        }
        if chosen.iter().any(|&m| m.is_subset(c)) {
            continue;
        }
        chosen.push(c);
        irredundant_rec(cands, i + 1, target, chosen, out);
        chosen.pop();
    }
}

pub(crate) fn opens_from_nbhds(nbhd: &[Bits]) -> Vec<Bits> {
    let mut seen: BTreeSet<(usize, u64)> = BTreeSet::new();
    seen.insert((0, 0));
    let mut list = vec![Bits::EMPTY];
    for &nb in nbhd {
        let current = list.clone();
        for o in current {
            let u = o | nb;
            if seen.insert((u.len(), u.0)) {
                list.push(u);
            }
        }
    }
    let mut opens: Vec<Bits> = list;
    sort_opens(&mut opens);
    opens
}

pub fn fmt_set(names: &[String], s: Bits) -> String {
    let inner: Vec<&str> = s.iter().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

/// A cover of an open `target` by opens of `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub target: Bits,
    pub members: Vec<Bits>,
}

impl Cover {
    pub fn new(space: &FinSpace, target: Bits, members: Vec<Bits>) -> Result<Cover> {
        for &m in members.iter().chain(std::iter::once(&target)) {
            if !space.is_open(m) {
                return Err(Error::NotOpen(space.fmt_set(m)));
            }
        }
        let union = members.iter().fold(Bits::EMPTY, |a, &b| a | b);
        if union != target {
            return Err(Error::CoverIncomplete);
        }
        Ok(Cover { target, members })
    }

    /// Every member of `self` lies inside some member of `other`.
    pub fn refines(&self, other: &Cover) -> Result<bool> {
        if self.target != other.target {
            return Err(Error::TargetMismatch);
        }
        Ok(self.members.iter().all(|&a| other.members.iter().any(|&b| a.is_subset(b))))
    }

    /// Pairwise intersections with empty and repeated members dropped.
    pub fn common_refinement(&self, other: &Cover) -> Result<Cover> {
        if self.target != other.target {
            return Err(Error::TargetMismatch);
        }
        let mut members = Vec::new();
        for &a in &self.members {
            for &b in &other.members {
                let c = a & b;
                if !c.is_empty() && !members.contains(&c) {
                    members.push(c);
                }
            }
        }
        Ok(Cover { target: self.target, members })
    }
}

/// A function between the point sets of two finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub source: FinSpace,
    pub dest: FinSpace,
    pub map: Vec<usize>,
}

impl PointMap {
    pub fn new(source: FinSpace, dest: FinSpace, map: Vec<usize>) -> Result<PointMap> {
        if map.len() != source.len() {
            return Err(Error::UnknownPoint(format!("map defined on {} of {} points", map.len(), source.len())));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= dest.len()) {
            return Err(Error::UnknownPoint(format!("#{bad}")));
        }
        Ok(PointMap { source, dest, map })
    }

    pub fn identity(space: &FinSpace) -> PointMap {
        PointMap { source: space.clone(), dest: space.clone(), map: (0..space.len()).collect() }
    }

    pub fn image(&self, s: Bits) -> Bits {
        s.iter().map(|x| self.map[x]).collect()
    }

    pub fn preimage(&self, t: Bits) -> Bits {
        (0..self.source.len()).filter(|&x| t.contains(self.map[x])).collect()
    }

    /// Preimage of every open is open.
    pub fn is_continuous(&self) -> bool {
        self.dest.opens().iter().all(|&v| self.source.is_open(self.preimage(v)))
    }

    /// Image of every open is open.
    pub fn is_open_map(&self) -> bool {
        self.source.opens().iter().all(|&u| self.dest.is_open(self.image(u)))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.dest.len() && self.image(self.source.whole()) == self.dest.whole()
    }

    pub fn is_homeomorphism(&self) -> bool {
        self.is_bijective() && self.is_continuous() && self.is_open_map()
    }

    /// Every point has an open neighbourhood mapped homeomorphically onto an open set.
    pub fn is_local_homeomorphism(&self) -> bool {
        (0..self.source.len()).all(|x| self.is_local_homeomorphism_at(x))
    }

    fn is_local_homeomorphism_at(&self, x: usize) -> bool {
        let w = self.source.min_nbhd(x);
        if !self.is_continuous() {
            return false;
        }
        let img = self.image(w);
        if img.len() != w.len() || !self.dest.is_open(img) {
            return false;
        }
        // on the subspace w the map must carry each minimal neighbourhood onto one
        w.iter().all(|y| self.image(self.source.min_nbhd(y)) == self.dest.min_nbhd(self.map[y]))
    }

    pub fn all_continuous(source: &FinSpace, dest: &FinSpace) -> Vec<PointMap> {
        let n = source.len();
        let m = dest.len();
        let mut out = Vec::new();
        if m == 0 && n > 0 {
            return out;
        }
        let total = (m as u64).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let v = (c % m as u64) as usize;
                    c /= m as u64;
                    v
                })
                .collect();
            let f = PointMap { source: source.clone(), dest: dest.clone(), map };
            if f.is_continuous() {
                out.push(f);
            }
        }
        out
    }
}

/// All labelled topologies on `n` points (`n ≤ 5`), named `1..n`.
pub fn all_topologies(n: usize) -> Vec<FinSpace> {
    assert!(n <= 5, "topology enumeration is limited to five points");
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut out = Vec::new();
    let mut nbhd = vec![Bits::EMPTY; n];
    topologies_rec(n, 0, &mut nbhd, &names, &mut out);
    out
}

fn topologies_rec(n: usize, x: usize, nbhd: &mut Vec<Bits>, names: &[String], out: &mut Vec<FinSpace>) {
    if x == n {
        let ok = (0..n).all(|a| nbhd[a].iter().all(|b| nbhd[b].is_subset(nbhd[a])));
        if ok {
            out.push(FinSpace::from_nbhds(names.to_vec(), nbhd.clone()).expect("checked preorder"));
        }
        return;
    }
    let others = Bits::full(n) - Bits::singleton(x);
    for extra in others.subsets() {
        nbhd[x] = extra | Bits::singleton(x);
        topologies_rec(n, x + 1, nbhd, names, out);
    }
}

/// One representative per homeomorphism class of topologies on `n` points.
pub fn topologies_up_to_homeomorphism(n: usize) -> Vec<FinSpace> {
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for space in all_topologies(n) {
        let canon = perms
            .iter()
            .map(|p| {
                let mut v = vec![Bits::EMPTY; n];
                for x in 0..n {
                    v[p[x]] = space.nbhd[x].iter().map(|y| p[y]).collect();
                }
                v.iter().map(|b| b.0).collect::<Vec<u64>>()
            })
            .min()
            .unwrap_or_default();
        if seen.insert(canon) {
            out.push(space);
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    permute_rec(&mut cur, 0, &mut out);
    out
}

fn permute_rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute_rec(cur, k + 1, out);
        cur.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn sierpinski_validates() {
        let sp = FinSpace::validate(&s(&["a", "b"]), &[s(&[]), s(&["a"]), s(&["a", "b"])]).unwrap();
        assert_eq!(sp.opens().len(), 3);
        assert_eq!(sp.min_nbhd(0), Bits::singleton(0));
        assert_eq!(sp.min_nbhd(1), Bits::full(2));
    }

    #[test]
    fn missing_union_is_rejected() {
        let err = FinSpace::validate(&s(&["a", "b"]), &[s(&[]), s(&["a"]), s(&["b"])]).unwrap_err();
        assert!(matches!(err, Error::ClosureViolation { op: "union", .. }), "{err}");
    }

    #[test]
    fn missing_whole_and_unknown_points() {
        assert_eq!(
            FinSpace::validate(&s(&["a", "b"]), &[s(&[]), s(&["a"])]).unwrap_err(),
            Error::MissingEmptyOrWhole
        );
        assert_eq!(
            FinSpace::validate(&s(&["a"]), &[s(&[]), s(&["z"])]).unwrap_err(),
            Error::UnknownPoint("z".into())
        );
        assert!(matches!(
            FinSpace::validate(&s(&["a"]), &[s(&[]), s(&["a"]), s(&["a"])]).unwrap_err(),
            Error::Duplicate(_)
        ));
    }

    #[test]
    fn discrete_three_points() {
        let all: Vec<Vec<String>> = Bits::full(3)
            .subsets()
            .map(|b| b.iter().map(|i| (i + 1).to_string()).collect())
            .collect();
        let sp = FinSpace::validate(&s(&["1", "2", "3"]), &all).unwrap();
        assert_eq!(sp, FinSpace::discrete(3));
        assert_eq!(sp.min_nbhd(1), Bits::singleton(1));
        assert_eq!(sp.components(sp.whole()), vec![Bits::singleton(0), Bits::singleton(1), Bits::singleton(2)]);
        assert!(sp.is_sober());
    }

    #[test]
    fn closure_components_and_sobriety() {
        let sp = FinSpace::sierpinski();
        assert_eq!(sp.closure(Bits::singleton(0)), Bits::full(2));
        assert_eq!(sp.closure(Bits::singleton(1)), Bits::singleton(1));
        assert_eq!(sp.components(sp.whole()), vec![Bits::full(2)]);
        assert!(sp.is_sober());
        assert!(!FinSpace::indiscrete(2).is_sober());
    }

    #[test]
    fn refinement_examples() {
        let sp = FinSpace::sierpinski();
        let x = sp.whole();
        let a = Cover::new(&sp, x, vec![Bits::singleton(0), x]).unwrap();
        let b = Cover::new(&sp, x, vec![x]).unwrap();
        assert!(a.refines(&b).unwrap());

        let d = FinSpace::discrete(3);
        let w = d.whole();
        let p = Cover::new(&d, w, vec![Bits::from_indices([0, 1]), Bits::from_indices([1, 2])]).unwrap();
        let q = Cover::new(&d, w, vec![w]).unwrap();
        assert_eq!(p.common_refinement(&q).unwrap().members, p.members);
        assert!(!q.refines(&p).unwrap());
        let other = Cover::new(&d, Bits::singleton(0), vec![Bits::singleton(0)]).unwrap();
        assert_eq!(p.refines(&other), Err(Error::TargetMismatch));
    }

    #[test]
    fn continuity_and_openness() {
        let sp = FinSpace::sierpinski();
        let id = PointMap::identity(&sp);
        assert!(id.is_continuous() && id.is_open_map());
        let f = PointMap::new(FinSpace::discrete(2), sp.clone(), vec![0, 1]).unwrap();
        assert!(f.is_continuous());
        assert!(!f.is_open_map());
        let (sub, old) = sp.subspace(Bits::singleton(1));
        assert_eq!(sub.len(), 1);
        assert_eq!(old, vec![1]);
        assert_eq!(sub.opens().len(), 2);
    }

    #[test]
    fn topology_counts() {
        assert_eq!(all_topologies(1).len(), 1);
        assert_eq!(all_topologies(2).len(), 4);
        assert_eq!(all_topologies(3).len(), 29);
        assert_eq!(all_topologies(4).len(), 355);
        assert_eq!(topologies_up_to_homeomorphism(3).len(), 9);
        assert_eq!(topologies_up_to_homeomorphism(4).len(), 33);
    }

    #[test]
    fn irredundant_covers_of_discrete_pair() {
        let d = FinSpace::discrete(2);
        let covers = d.irredundant_covers(d.whole());
        // {X} and {{1},{2}}
        assert_eq!(covers.len(), 2);
        assert_eq!(d.irredundant_covers(Bits::EMPTY), vec![Vec::<Bits>::new()]);
    }
}
