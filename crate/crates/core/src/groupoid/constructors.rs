//! The standard example families.

use super::{FinGroup, GroupAction, Groupoid, GroupoidMorphism};
use crate::bits::Bits;
use crate::error::{Error, Result};

impl Groupoid {
    /// `X × X`: one arrow `(y,x)` from `x` to `y` for every pair, `(z,y)(y,x) = (z,x)`.
    pub fn pair(objects: &[String]) -> Groupoid {
        let n = objects.len();
        let arrows = (0..n * n)
            .map(|i| {
                let (y, x) = (i / n, i % n);
                (format!("({},{})", objects[y], objects[x]), x, y)
            })
            .collect();
        Groupoid::from_fn(
            objects.to_vec(),
            arrows,
            |f, g| (f / n) * n + g % n,
            |x| x * n + x,
            |f| (f % n) * n + f / n,
        )
        .expect("pair groupoid")
    }

    /// Identities only.
    pub fn null(objects: &[String]) -> Groupoid {
        let arrows = objects.iter().enumerate().map(|(x, o)| (format!("({o},{o})"), x, x)).collect();
        Groupoid::from_fn(objects.to_vec(), arrows, |f, _| f, |x| x, |f| f).expect("null groupoid")
    }

    /// `X × X × K` with `(z,y,h)(y,x,g) = (z,x,hg)` and `(y,x,g)⁻¹ = (x,y,g⁻¹)`.
    pub fn pair_with_group(objects: &[String], group: &FinGroup) -> Groupoid {
        let n = objects.len();
        let k = group.order();
        let idx = |y: usize, x: usize, g: usize| (y * n + x) * k + g;
        let mut arrows = Vec::with_capacity(n * n * k);
        for y in 0..n {
            for x in 0..n {
                for g in 0..k {
                    arrows.push((format!("({},{},{})", objects[y], objects[x], group.name(g)), x, y));
                }
            }
        }
        let split = |f: usize| (f / k / n, (f / k) % n, f % k);
        Groupoid::from_fn(
            objects.to_vec(),
            arrows,
            |f, g| {
                let (z, _, h) = split(f);
                let (_, x, gg) = split(g);
                idx(z, x, group.mul(h, gg))
            },
            |x| idx(x, x, group.unit()),
            |f| {
                let (y, x, g) = split(f);
                idx(x, y, group.inv(g))
            },
        )
        .expect("pair groupoid with group")
    }

    /// Action groupoid `K ⋉ X`: arrow `(g,x)` from `x` to `g·x`, `(h,gx)(g,x) = (hg,x)`.
    pub fn action(objects: &[String], action: &GroupAction) -> Groupoid {
        let n = objects.len();
        let grp = &action.group;
        let k = grp.order();
        let arrows = (0..k * n)
            .map(|i| {
                let (g, x) = (i / n, i % n);
                (format!("({},{})", grp.name(g), objects[x]), x, action.act(g, x))
            })
            .collect();
        Groupoid::from_fn(
            objects.to_vec(),
            arrows,
            |f, g| grp.mul(f / n, g / n) * n + g % n,
            |x| grp.unit() * n + x,
            |f| {
                let (g, x) = (f / n, f % n);
                grp.inv(g) * n + action.act(g, x)
            },
        )
        .expect("action groupoid")
    }

    /// In a pair groupoid: the arrows of the equivalence relation with the given blocks.
    pub fn relation(&self, blocks: &[Bits]) -> Result<Bits> {
        let all = blocks.iter().fold(Bits::EMPTY, |a, &b| a | b);
        let total: usize = blocks.iter().map(|b| b.len()).sum();
        if all != self.all_objects() || total != self.object_count() {
            return Err(Error::NotEquivalence("blocks do not partition the objects".into()));
        }
        let mut h = Bits::EMPTY;
        for f in 0..self.arrow_count() {
            if blocks.iter().any(|b| b.contains(self.src(f)) && b.contains(self.tgt(f))) {
                h.insert(f);
            }
        }
        Ok(h)
    }

    /// The equivalence relation as a groupoid of its own.
    pub fn from_equiv_relation(objects: &[String], blocks: &[Bits]) -> Result<Groupoid> {
        let pair = Groupoid::pair(objects);
        let h = pair.relation(blocks)?;
        Ok(pair.to_groupoid(h).0)
    }

    /// `Υ = [α, β]` into the pair groupoid on the same objects.
    pub fn upsilon(&self) -> (Groupoid, GroupoidMorphism) {
        let n = self.object_count();
        let pair = Groupoid::pair(self.objects());
        let arrows = (0..self.arrow_count()).map(|f| self.tgt(f) * n + self.src(f)).collect();
        (pair, GroupoidMorphism { objects: (0..n).collect(), arrows })
    }
}
