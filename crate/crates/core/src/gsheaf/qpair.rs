//! Pairs `(R_U, S_U)` of compatible equivalence relations on an open `U` and on
//! the germs over it, r-structures, and the action they induce.

use super::action::{validate_action, GroupoidAction};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::{permutations, FinSpace, PointMap};
use crate::localsub::{LocalEquivRel, LocalSubgroupoid};
use crate::presheaf::EtaleSheaf;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPair {
    pub open: Bits,
    /// Blocks of `R_U`, a partition of `open`.
    pub r_blocks: Vec<Bits>,
    /// Blocks of `S_U` as germ ids, a partition of `p⁻¹(open)`.
    pub s_blocks: Vec<Bits>,
}

fn sorted(mut blocks: Vec<Bits>) -> Vec<Bits> {
    blocks.retain(|b| !b.is_empty());
    blocks.sort_by_key(|b| b.0);
    blocks
}

/// Germ ids over `u`.
pub fn germs_over(sheaf: &EtaleSheaf, u: Bits) -> Bits {
    u.iter().flat_map(|x| sheaf.germs_over(x)).collect()
}

impl QPair {
    pub fn new(open: Bits, r_blocks: Vec<Bits>, s_blocks: Vec<Bits>) -> QPair {
        QPair { open, r_blocks: sorted(r_blocks), s_blocks: sorted(s_blocks) }
    }

    /// `(R_U ∩ V×V, S_U ∩ p⁻¹V × p⁻¹V)`.
    pub fn restrict(&self, sheaf: &EtaleSheaf, v: Bits) -> QPair {
        let gv = germs_over(sheaf, v);
        QPair::new(self.open & v, self.r_blocks.iter().map(|&b| b & v).collect(), self.s_blocks.iter().map(|&b| b & gv).collect())
    }

    /// The arrows of `R_U` in the pair groupoid on the whole space, `(y,x)` at `y * n + x`.
    pub fn relation_arrows(&self, n: usize) -> Bits {
        self.r_blocks.iter().flat_map(|b| b.iter().flat_map(move |x| b.iter().map(move |y| y * n + x))).collect()
    }

    pub fn s_block_of(&self, germ: usize) -> Bits {
        *self.s_blocks.iter().find(|b| b.contains(germ)).expect("partition")
    }
}

/// The quotient of `space` by a partition, with the quotient topology.
pub fn quotient_space(space: &FinSpace, classes: &[Bits]) -> FinSpace {
    let names = classes.iter().map(|&c| space.fmt_set(c)).collect();
    let nbhd = (0..classes.len())
        .map(|c| {
            let mut s = classes[c];
            loop {
                let grown = s.iter().fold(s, |acc, x| acc | space.min_nbhd(x));
                let saturated = classes.iter().filter(|k| k.intersects(grown)).fold(Bits::EMPTY, |acc, &k| acc | k);
                if saturated == s {
                    break;
                }
                s = saturated;
            }
            (0..classes.len()).filter(|&k| classes[k].is_subset(s)).collect()
        })
        .collect();
    FinSpace::from_nbhds(names, nbhd).expect("saturated opens")
}

/// First condition of `Q(U, F)` that fails, if any.
pub fn q_pair_check(sheaf: &EtaleSheaf, q: &QPair) -> std::result::Result<(), &'static str> {
    let space = sheaf.space();
    let u = q.open;
    let gu = germs_over(sheaf, u);
    let partition = |blocks: &[Bits], of: Bits| {
        blocks.iter().fold(Bits::EMPTY, |a, &b| a | b) == of && blocks.iter().map(|b| b.len()).sum::<usize>() == of.len()
    };
    if !space.is_open(u) || !partition(&q.r_blocks, u) || !partition(&q.s_blocks, gu) {
        return Err("partition");
    }
    let r_block = |x: usize| q.r_blocks.iter().position(|b| b.contains(x)).expect("partition");
    for b in &q.s_blocks {
        let points: Bits = b.iter().map(|e| sheaf.germ_point(e)).collect();
        if points.iter().any(|x| r_block(x) != r_block(points.first().expect("nonempty"))) {
            return Err("compatibility");
        }
        // one germ of the class over each point of the R-class
        if points != q.r_blocks[r_block(points.first().expect("nonempty"))] || points.len() != b.len() {
            return Err("lift");
        }
    }
    let (total, _) = sheaf.total_space().expect("small sheaf");
    let (fu, germs) = total.subspace(gu);
    let (us, pts) = space.subspace(u);
    let local = |blocks: &[Bits], old: &[usize]| -> Vec<Bits> {
        blocks.iter().map(|&b| (0..old.len()).filter(|&i| b.contains(old[i])).collect()).collect()
    };
    let fs = quotient_space(&fu, &local(&q.s_blocks, &germs));
    let ur = quotient_space(&us, &local(&q.r_blocks, &pts));
    let q_map = PointMap {
        source: fs.clone(),
        dest: ur.clone(),
        map: q.s_blocks.iter().map(|b| r_block(sheaf.germ_point(b.first().expect("nonempty")))).collect(),
    };
    if !q_map.is_local_homeomorphism() {
        return Err("localHomeo");
    }
    // F|U → U ×_{U/R} F/S must be a homeomorphism onto the fibre product
    let prod = us.product(&fs).expect("small product");
    let m = fs.len();
    let s_block = |e: usize| q.s_blocks.iter().position(|b| b.contains(e)).expect("partition");
    let mut fibre = Bits::EMPTY;
    for i in 0..us.len() {
        for c in (0..m).filter(|&c| r_block(pts[i]) == q_map.map[c]) {
            fibre.insert(i * m + c);
        }
    }
    let (fibre_space, fibre_pts) = prod.subspace(fibre);
    let map = germs
        .iter()
        .map(|&e| {
            let i = pts.iter().position(|&x| x == sheaf.germ_point(e)).expect("germ over u");
            fibre_pts.iter().position(|&k| k == i * m + s_block(e)).expect("in the fibre product")
        })
        .collect();
    if !(PointMap { source: fu, dest: fibre_space, map }).is_homeomorphism() {
        return Err("pullback");
    }
    Ok(())
}

/// Every pair in `Q(U, F)` whose relation on `U` has the given blocks.
pub fn q_pairs_over(sheaf: &EtaleSheaf, u: Bits, r_blocks: &[Bits]) -> Vec<QPair> {
    // an S-class over an R-block picks one germ in each stalk: fix bijections from the first stalk
    let mut per_block: Vec<Vec<Vec<Bits>>> = Vec::new();
    for &b in r_blocks {
        let pts: Vec<usize> = b.iter().collect();
        let k = sheaf.stalk_size(pts[0]);
        if pts.iter().any(|&x| sheaf.stalk_size(x) != k) {
            return Vec::new();
        }
        let perms = permutations(k);
        let mut choices: Vec<Vec<Bits>> = Vec::new();
        let mut digits = vec![0usize; pts.len() - 1];
        loop {
            let classes = (0..k)
                .map(|e| {
                    let mut c = Bits::singleton(sheaf.germ(pts[0], e));
                    for (j, &x) in pts[1..].iter().enumerate() {
                        c.insert(sheaf.germ(x, perms[digits[j]][e]));
                    }
                    c
                })
                .collect();
            choices.push(classes);
            let mut i = 0;
            loop {
                if i == digits.len() {
                    break;
                }
                digits[i] += 1;
                if digits[i] < perms.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        per_block.push(choices);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_block.len()];
    loop {
        let s_blocks = idx.iter().enumerate().flat_map(|(b, &i)| per_block[b][i].iter().copied()).collect();
        let q = QPair::new(u, r_blocks.to_vec(), s_blocks);
        if q_pair_check(sheaf, &q).is_ok() {
            out.push(q);
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < per_block[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// All of `Q(U, F)`.
pub fn q_pairs(sheaf: &EtaleSheaf, u: Bits) -> Vec<QPair> {
    partitions(u).into_iter().flat_map(|r| q_pairs_over(sheaf, u, &r)).collect()
}

fn partitions(u: Bits) -> Vec<Vec<Bits>> {
    let Some(first) = u.first() else { return vec![Vec::new()] };
    let mut rest = u;
    rest.remove(first);
    let mut out = Vec::new();
    for p in partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(first);
            out.push(q);
        }
        let mut q = p;
        q.push(Bits::singleton(first));
        out.push(q);
    }
    out
}

/// Blocks of an equivalence relation on `u`, given as pair-groupoid arrows.
fn blocks_of(r: &LocalSubgroupoid, h: Bits, u: Bits) -> Vec<Bits> {
    r.groupoid().components(h, u)
}

fn relation_atlas(r: &LocalEquivRel, charts: &[QPair]) -> Result<()> {
    let s = r.inner();
    let n = s.space().len();
    let atlas = charts.iter().map(|q| (q.open, q.relation_arrows(n))).collect();
    match LocalSubgroupoid::new(s.ambient(), atlas) {
        Ok(t) if t == *s => Ok(()),
        _ => Err(Error::NotAnAtlas),
    }
}

/// Whether `charts` present an r-structure on `sheaf` over `r`: the relations form an
/// atlas for `r`, every chart and its germs lie in `Q`, and the germs agree on overlaps.
pub fn r_structure_check(sheaf: &EtaleSheaf, r: &LocalEquivRel, charts: &[QPair]) -> Result<bool> {
    relation_atlas(r, charts)?;
    let space = sheaf.space();
    let germ = |q: &QPair, x: usize| q.restrict(sheaf, space.min_nbhd(x));
    for q in charts {
        if q_pair_check(sheaf, q).is_err() || q.open.iter().any(|x| q_pair_check(sheaf, &germ(q, x)).is_err()) {
            return Ok(false);
        }
    }
    for (i, a) in charts.iter().enumerate() {
        for b in &charts[i + 1..] {
            if (a.open & b.open).iter().any(|x| germ(a, x) != germ(b, x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every r-structure, one `(N(x), R_x, S_x)` chart per point.
pub fn r_structures(sheaf: &EtaleSheaf, r: &LocalEquivRel) -> Vec<Vec<QPair>> {
    let s = r.inner();
    let space = sheaf.space();
    let n = space.len();
    let options: Vec<Vec<QPair>> = (0..n)
        .map(|x| {
            let nx = space.min_nbhd(x);
            q_pairs_over(sheaf, nx, &blocks_of(s, s.germ(x), nx))
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<QPair> = Vec::new();
    fn rec(sheaf: &EtaleSheaf, options: &[Vec<QPair>], chosen: &mut Vec<QPair>, out: &mut Vec<Vec<QPair>>) {
        let x = chosen.len();
        if x == options.len() {
            out.push(chosen.clone());
            return;
        }
        let space = sheaf.space();
        for q in &options[x] {
            let agrees = (0..x).all(|y| {
                let common = space.min_nbhd(x) & space.min_nbhd(y);
                common.iter().all(|z| {
                    let nz = space.min_nbhd(z);
                    q.restrict(sheaf, nz) == chosen[y].restrict(sheaf, nz)
                })
            });
            if agrees {
                chosen.push(q.clone());
                rec(sheaf, options, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(sheaf, &options, &mut chosen, &mut out);
    out
}

/// The action of `R = glob(r)` induced by an r-structure: a chart arrow sends `e₁`
/// over `x₁` to the unique `e₂` over `x₂` in its `S`-class; composites fill the rest.
pub fn lift_r_action(sheaf: &EtaleSheaf, r: &LocalEquivRel, charts: &[QPair]) -> Result<GroupoidAction> {
    let s = r.inner();
    if !s.is_globally_coherent() {
        return Err(Error::NotGlobal);
    }
    relation_atlas(r, charts)?;
    let g = s.groupoid();
    let n = s.space().len();
    let big_r = s.glob();
    let mut maps: Vec<Vec<usize>> = vec![Vec::new(); g.arrow_count()];
    let mut defined = Bits::EMPTY;
    for q in charts {
        let arrows = q.relation_arrows(n);
        if !arrows.is_subset(big_r) {
            return Err(Error::NotAnAtlas);
        }
        for f in arrows.iter() {
            let (x1, x2) = (g.src(f), g.tgt(f));
            let mut map = Vec::with_capacity(sheaf.stalk_size(x1));
            for e in 0..sheaf.stalk_size(x1) {
                let over: Vec<usize> = q.s_block_of(sheaf.germ(x1, e)).iter().filter(|&e2| sheaf.germ_point(e2) == x2).collect();
                let label = || format!("{}·{}", g.arrow_name(f), sheaf.element_label(x1, e));
                match over.as_slice() {
                    [] => return Err(Error::LiftMissing(label())),
                    [e2] => map.push(sheaf.germ_elem(*e2)),
                    _ => return Err(Error::LiftNotUnique(label())),
                }
            }
            if defined.contains(f) && maps[f] != map {
                return Err(Error::LiftNotUnique(g.arrow_name(f).to_string()));
            }
            maps[f] = map;
            defined.insert(f);
        }
    }
    loop {
        let mut grew = false;
        for a in defined.iter() {
            for b in defined.iter() {
                if let Some(ab) = g.compose(a, b) {
                    if !defined.contains(ab) {
                        maps[ab] = maps[b].iter().map(|&e| maps[a][e]).collect();
                        defined.insert(ab);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    let act = GroupoidAction { arrows: defined, maps };
    validate_action(g, sheaf, &act)?;
    Ok(act)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::all_topologies;
    use crate::localsub::{ler_from_closure, Ambient};
    use crate::presheaf::enumerate::for_each_sheaf;

    fn constant(sp: &FinSpace, k: usize) -> EtaleSheaf {
        EtaleSheaf::from_fn(sp, vec![k; sp.len()], |_, _, e| e).unwrap()
    }

    #[test]
    fn two_germs_over_a_point() {
        let sp = FinSpace::discrete(1);
        let f = constant(&sp, 2);
        let qs = q_pairs(&f, sp.whole());
        assert_eq!(qs, vec![QPair::new(Bits(1), vec![Bits(1)], vec![Bits(1), Bits(2)])]);
        let fused = QPair::new(Bits(1), vec![Bits(1)], vec![Bits(3)]);
        assert_eq!(q_pair_check(&f, &fused), Err("lift"));
    }

    #[test]
    fn diagonal_relation_forbids_fibrewise_fusion() {
        let sp = FinSpace::discrete(2);
        let f = constant(&sp, 2);
        // germs: (1,0)=0 (1,1)=1 (2,0)=2 (2,1)=3
        let fused = QPair::new(Bits(3), vec![Bits(1), Bits(2)], vec![Bits(0b0011), Bits(0b1100)]);
        assert_eq!(q_pair_check(&f, &fused), Err("lift"));
        let crossing = QPair::new(Bits(3), vec![Bits(1), Bits(2)], vec![Bits(0b0101), Bits(0b1010)]);
        assert_eq!(q_pair_check(&f, &crossing), Err("compatibility"));
        let diag = QPair::new(Bits(3), vec![Bits(1), Bits(2)], vec![Bits(1), Bits(2), Bits(4), Bits(8)]);
        assert_eq!(q_pair_check(&f, &diag), Ok(()));
    }

    #[test]
    fn label_pairing_over_sierpinski() {
        let sp = FinSpace::sierpinski();
        let f = constant(&sp, 2);
        let qs = q_pairs_over(&f, sp.whole(), &[sp.whole()]);
        // only the label-preserving pairing keeps the quotient map a local homeomorphism
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].s_blocks, vec![Bits(0b0101), Bits(0b1010)]);
    }

    #[test]
    fn quotient_of_discrete_is_discrete() {
        let sp = FinSpace::discrete(3);
        let q = quotient_space(&sp, &[Bits(3), Bits(4)]);
        assert_eq!(q.opens().len(), 4);
    }

    #[test]
    fn diagonal_structure_is_an_r_structure() {
        for sp in all_topologies(2) {
            let r = LocalEquivRel::new(LocalSubgroupoid::loc(&Ambient::pair(&sp), crate::groupoid::Groupoid::pair(sp.names()).identities()).unwrap()).unwrap();
            for_each_sheaf(&sp, 2, false, |f| {
                let charts: Vec<QPair> = (0..sp.len())
                    .map(|x| {
                        let nx = sp.min_nbhd(x);
                        QPair::new(nx, nx.iter().map(Bits::singleton).collect(), germs_over(f, nx).iter().map(Bits::singleton).collect())
                    })
                    .collect();
                assert!(r_structure_check(f, &r, &charts).unwrap());
                let act = lift_r_action(f, &r, &charts).unwrap();
                assert_eq!(act, super::super::action::GroupoidAction::trivial(r.inner().groupoid(), f, sp.whole()));
            });
        }
    }

    #[test]
    fn full_relation_on_indiscrete_pair() {
        let sp = FinSpace::indiscrete(2);
        let f = constant(&sp, 2);
        let amb = Ambient::pair(&sp);
        let r = LocalEquivRel::new(LocalSubgroupoid::loc(&amb, amb.groupoid.all_arrows()).unwrap()).unwrap();
        let label = QPair::new(sp.whole(), vec![sp.whole()], vec![Bits(0b0101), Bits(0b1010)]);
        let cross = QPair::new(sp.whole(), vec![sp.whole()], vec![Bits(0b1001), Bits(0b0110)]);
        assert!(r_structure_check(&f, &r, std::slice::from_ref(&label)).unwrap());
        assert!(!r_structure_check(&f, &r, std::slice::from_ref(&cross)).unwrap());
        let act = lift_r_action(&f, &r, &[label]).unwrap();
        let a21 = amb.groupoid.arrow("(2,1)").unwrap();
        assert_eq!(act.maps[a21], vec![0, 1]);
        // the crossing pairing still lifts, to the swap action
        let act = lift_r_action(&f, &r, &[cross]).unwrap();
        assert_eq!(act.maps[a21], vec![1, 0]);
    }

    #[test]
    fn chart_relation_beyond_glob_is_rejected() {
        // on a discrete space the germs of a full chart are trivial, so glob(r) is the diagonal
        let sp = FinSpace::discrete(2);
        let f = constant(&sp, 2);
        let amb = Ambient::pair(&sp);
        let r = LocalEquivRel::new(LocalSubgroupoid::new(&amb, vec![(sp.whole(), amb.groupoid.all_arrows())]).unwrap()).unwrap();
        let cross = QPair::new(sp.whole(), vec![sp.whole()], vec![Bits(0b1001), Bits(0b0110)]);
        assert!(r_structure_check(&f, &r, std::slice::from_ref(&cross)).unwrap());
        assert_eq!(lift_r_action(&f, &r, &[cross]), Err(Error::NotAnAtlas));
    }

    #[test]
    fn restriction_stays_in_q() {
        for n in 1..=3 {
            for sp in all_topologies(n) {
                let r = ler_from_closure(&sp);
                for_each_sheaf(&sp, 2, true, |f| {
                    for q in q_pairs(f, sp.whole()) {
                        for &v in sp.opens() {
                            assert_eq!(q_pair_check(f, &q.restrict(f, v)), Ok(()), "{q:?} on {v:?}");
                        }
                    }
                    for t in r_structures(f, &r) {
                        assert!(r_structure_check(f, &r, &t).unwrap());
                    }
                });
            }
        }
    }

    #[test]
    fn partitions_are_bell_numbers() {
        assert_eq!([0, 1, 2, 3, 4].map(|k| partitions(Bits::full(k)).len()), [1, 1, 2, 5, 15]);
    }
}
