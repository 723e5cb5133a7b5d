//! Locally topological groupoids `(H, W)` and the regularity conditions on atlases
//! that produce them.

use super::sections::locally_sectionable;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::PointMap;
use crate::groupoid::TopGroupoid;
use crate::localsub::LocalSubgroupoid;

/// Verdicts on the five conditions, with a witness for each failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyTopReport {
    pub g1: bool,
    pub g2: bool,
    pub g3: bool,
    pub g4: bool,
    pub g5: bool,
    pub failures: Vec<(&'static str, String)>,
}

impl LocallyTopReport {
    pub fn holds(&self) -> bool {
        self.g1 && self.g2 && self.g3 && self.g4 && self.g5
    }
}

/// Checks `(H, W)` inside the topological groupoid `tg`; `W` carries the subspace topology.
pub fn check_locally_top(tg: &TopGroupoid, h: Bits, w: Bits) -> LocallyTopReport {
    let g = &tg.groupoid;
    let names = |b: Bits| g.arrow_list(b).join(",");
    let nw = |f: usize| tg.arrows.min_nbhd(f) & w;
    let mut failures = Vec::new();

    // objects sit inside W as a subspace
    let ids = g.identities();
    let g1 = if !ids.is_subset(w) || !w.is_subset(h) || !g.is_subgroupoid(h) {
        failures.push(("G1", format!("identities {{{}}} ⊆ W {{{}}} ⊆ H {{{}}}", names(ids), names(w), names(h))));
        false
    } else {
        let embedded = (0..g.object_count()).all(|x| nw(g.identity(x)) & ids == g.identities_of(tg.objects.min_nbhd(x)));
        if !embedded {
            failures.push(("G1", "objects do not carry the subspace topology".into()));
        }
        embedded
    };

    let g2 = match w.iter().find(|&f| !w.contains(g.inverse(f))) {
        Some(f) => {
            failures.push(("G2", format!("inverse of {} not in W", g.arrow_name(f))));
            false
        }
        None => true,
    };

    // W ×_src W with the product-subspace topology; W_δ = pairs with f∘k⁻¹ in W
    let delta = |f: usize, k: usize| g.compose(f, g.inverse(k)).expect("same source");
    let mut g3 = true;
    'outer: for f in w.iter() {
        for k in w.iter().filter(|&k| g.src(k) == g.src(f)) {
            if !w.contains(delta(f, k)) {
                continue;
            }
            let target = nw(delta(f, k));
            for f2 in nw(f).iter() {
                for k2 in nw(k).iter().filter(|&k2| g.src(k2) == g.src(f2)) {
                    let d = delta(f2, k2);
                    if !w.contains(d) {
                        failures.push(("G3", format!("W_δ not open at ({},{})", g.arrow_name(f), g.arrow_name(k))));
                        g3 = false;
                        break 'outer;
                    }
                    if !target.contains(d) {
                        failures.push(("G3", format!("difference map not continuous at ({},{})", g.arrow_name(f), g.arrow_name(k))));
                        g3 = false;
                        break 'outer;
                    }
                }
            }
        }
    }

    let (wspace, old) = tg.arrows.subspace(w);
    let on_w = |m: &dyn Fn(usize) -> usize| PointMap { source: wspace.clone(), dest: tg.objects.clone(), map: old.iter().map(|&f| m(f)).collect() };
    let mut g4 = true;
    if !on_w(&|f| g.src(f)).is_continuous() || !on_w(&|f| g.tgt(f)).is_continuous() {
        failures.push(("G4", "source or target not continuous on W".into()));
        g4 = false;
    }
    if let Err(f) = locally_sectionable(tg, w) {
        failures.push(("G4", format!("no continuous admissible section through {}", g.arrow_name(f))));
        g4 = false;
    }

    let generated = g.generated(w, g.all_objects());
    let g5 = generated == h;
    if !g5 {
        failures.push(("G5", format!("W generates {{{}}}", names(generated))));
    }
    LocallyTopReport { g1, g2, g3, g4, g5, failures }
}

/// Regularity of the atlas a local subgroupoid was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub weakly_adaptable: bool,
    pub regular: bool,
    pub strictly_regular: bool,
    pub witnesses: Vec<String>,
}

/// Chart assigned to each point: the one with the smallest open, then the lowest index.
pub fn point_charts(s: &LocalSubgroupoid) -> Vec<usize> {
    (0..s.space().len())
        .map(|x| {
            (0..s.charts().len())
                .filter(|&i| s.charts()[i].0.contains(x))
                .min_by_key(|&i| (s.charts()[i].0.len(), i))
                .expect("charts cover")
        })
        .collect()
}

fn same_base(tg: &TopGroupoid, s: &LocalSubgroupoid) -> Result<()> {
    if tg.groupoid != *s.groupoid() || tg.objects != *s.space() {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

pub fn atlas_regularity(tg: &TopGroupoid, s: &LocalSubgroupoid) -> Result<Regularity> {
    same_base(tg, s)?;
    let g = &tg.groupoid;
    let mut witnesses = Vec::new();
    let union = s.charts().iter().fold(Bits::EMPTY, |acc, &(_, h)| acc | h);
    let weakly_adaptable = g.generated(union, g.all_objects()) == s.glob();
    if !weakly_adaptable {
        witnesses.push("charts generate more than glob(s)".to_string());
    }
    let mut sectionable = true;
    for (i, &(_, h)) in s.charts().iter().enumerate() {
        if let Err(f) = locally_sectionable(tg, h) {
            witnesses.push(format!("chart {i}: no section through {}", g.arrow_name(f)));
            sectionable = false;
        }
    }
    let regular = weakly_adaptable && sectionable && s.is_totally_coherent();
    let at = point_charts(s);
    let chart = |x: usize| s.charts()[at[x]].1;
    let mut strict = true;
    'outer: for x in 0..g.object_count() {
        for a in chart(x).iter().filter(|&a| g.src(a) == x) {
            let z = g.tgt(a);
            for y in 0..g.object_count() {
                for b in chart(y).iter().filter(|&b| g.src(b) == x && g.tgt(b) == y) {
                    let d = g.compose(a, g.inverse(b)).expect("same source");
                    if !chart(z).contains(d) {
                        witnesses.push(format!("{}∘{}⁻¹ not in the chart at {}", g.arrow_name(a), g.arrow_name(b), g.objects()[z]));
                        strict = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(Regularity { weakly_adaptable, regular, strictly_regular: regular && strict, witnesses })
}

/// `(glob(s), ⋃ charts)` for a strictly regular atlas, with every condition re-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyTopGroupoid {
    pub h: Bits,
    pub w: Bits,
    pub report: LocallyTopReport,
}

pub fn build_locally_top_from_s(tg: &TopGroupoid, s: &LocalSubgroupoid) -> Result<LocallyTopGroupoid> {
    if !atlas_regularity(tg, s)?.strictly_regular {
        return Err(Error::NotStrictlyRegular);
    }
    let h = s.glob();
    let w = s.charts().iter().fold(Bits::EMPTY, |acc, &(_, k)| acc | k);
    let report = check_locally_top(tg, h, w);
    if let Some((cond, witness)) = report.failures.first() {
        return Err(Error::ConditionFailed { cond, witness: witness.clone() });
    }
    Ok(LocallyTopGroupoid { h, w, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::FinSpace;
    use crate::groupoid::Groupoid;
    use crate::localsub::tests::two_full_charts;
    use crate::localsub::Ambient;

    #[test]
    fn null_groupoid_with_identities() {
        let sp = FinSpace::sierpinski();
        let g = Groupoid::null(sp.names());
        let tg = TopGroupoid::new(g.clone(), sp.clone(), sp).unwrap();
        assert!(check_locally_top(&tg, g.all_arrows(), g.all_arrows()).holds());
    }

    #[test]
    fn discrete_pair_groupoid() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g.clone(), FinSpace::discrete(4), sp).unwrap();
        assert!(check_locally_top(&tg, g.all_arrows(), g.all_arrows()).holds());
    }

    #[test]
    fn pair_groupoid_on_sierpinski() {
        let tg = TopGroupoid::pair(&FinSpace::sierpinski());
        let all = tg.groupoid.all_arrows();
        let r = check_locally_top(&tg, all, all);
        assert!(r.g1 && r.g2 && r.g5);
        // (b,a) has no admissible section: its target b is not open
        assert!(!r.g4);
    }

    #[test]
    fn diagonal_atlas_is_strictly_regular() {
        let sp = FinSpace::sierpinski();
        let tg = TopGroupoid::pair(&sp);
        let amb = Ambient::pair(&sp);
        let s = LocalSubgroupoid::loc(&amb, amb.groupoid.identities()).unwrap();
        let reg = atlas_regularity(&tg, &s).unwrap();
        assert!(reg.strictly_regular);
        let lt = build_locally_top_from_s(&tg, &s).unwrap();
        assert_eq!(lt.h, lt.w);
        assert!(lt.report.holds());
    }

    #[test]
    fn two_full_charts_regularity() {
        let s = two_full_charts();
        let tg = TopGroupoid::pair(s.space());
        let reg = atlas_regularity(&tg, &s).unwrap();
        assert!(reg.weakly_adaptable);
        // (2,3) sits in the chart at 3 but (2,3)∘(2,1)⁻¹ is not in the chart at 3? only the strict clause is computed
        assert!(!reg.strictly_regular);
        assert_eq!(build_locally_top_from_s(&tg, &s), Err(Error::NotStrictlyRegular));
    }

    #[test]
    fn single_chart_regular_subgroupoid() {
        let sp = FinSpace::discrete(2);
        let amb = Ambient::pair(&sp);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g, FinSpace::discrete(4), sp).unwrap();
        let s = LocalSubgroupoid::loc(&amb, amb.groupoid.identities()).unwrap();
        let lt = build_locally_top_from_s(&tg, &s).unwrap();
        assert_eq!(lt.w, amb.groupoid.identities());
    }
}
