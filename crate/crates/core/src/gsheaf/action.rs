//! Actions of (sub)groupoids on the germs of an étale sheaf.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::permutations;
use crate::groupoid::{Groupoid, TopGroupoid};
use crate::presheaf::EtaleSheaf;

/// `maps[f][e]` is the element of `F_{tgt f}` that `f` sends `e ∈ F_{src f}` to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupoidAction {
    /// The acting subgroupoid.
    pub arrows: Bits,
    /// Indexed by arrow; empty outside `arrows`.
    pub maps: Vec<Vec<usize>>,
}

impl GroupoidAction {
    pub fn from_fn(g: &Groupoid, sheaf: &EtaleSheaf, arrows: Bits, act: impl Fn(usize, usize) -> usize) -> GroupoidAction {
        let maps = (0..g.arrow_count())
            .map(|f| if arrows.contains(f) { (0..sheaf.stalk_size(g.src(f))).map(|e| act(f, e)).collect() } else { Vec::new() })
            .collect();
        GroupoidAction { arrows, maps }
    }

    /// Identities acting trivially over `objects`.
    pub fn trivial(g: &Groupoid, sheaf: &EtaleSheaf, objects: Bits) -> GroupoidAction {
        GroupoidAction::from_fn(g, sheaf, g.identities_of(objects), |_, e| e)
    }

    /// `g_♯ : F_{src g} → F_{tgt g}`.
    pub fn stalk_map(&self, f: usize) -> &[usize] {
        &self.maps[f]
    }

    pub fn act(&self, f: usize, e: usize) -> usize {
        self.maps[f][e]
    }

    pub fn restrict(&self, arrows: Bits) -> GroupoidAction {
        let arrows = self.arrows & arrows;
        let maps = self.maps.iter().enumerate().map(|(f, m)| if arrows.contains(f) { m.clone() } else { Vec::new() }).collect();
        GroupoidAction { arrows, maps }
    }

    /// Rows `arrow: e ↦ e'`, for reports.
    pub fn table(&self, g: &Groupoid, sheaf: &EtaleSheaf) -> Vec<(String, String, String)> {
        self.arrows
            .iter()
            .flat_map(|f| {
                self.maps[f].iter().enumerate().map(move |(e, &e2)| {
                    (g.arrow_name(f).to_string(), sheaf.element_label(g.src(f), e), sheaf.element_label(g.tgt(f), e2))
                })
            })
            .collect()
    }
}

/// Square, unit and associativity laws.
pub fn validate_action(g: &Groupoid, sheaf: &EtaleSheaf, act: &GroupoidAction) -> Result<()> {
    if !g.is_subgroupoid(act.arrows) {
        return Err(Error::NotAction("acting arrows do not form a subgroupoid".into()));
    }
    if act.maps.len() != g.arrow_count() {
        return Err(Error::ActionIncomplete("arrow table".into()));
    }
    for f in act.arrows.iter() {
        if act.maps[f].len() != sheaf.stalk_size(g.src(f)) {
            return Err(Error::ActionIncomplete(g.arrow_name(f).to_string()));
        }
        if let Some(e) = act.maps[f].iter().position(|&e2| e2 >= sheaf.stalk_size(g.tgt(f))) {
            return Err(Error::SquareViolation(format!("{}·{}", g.arrow_name(f), sheaf.element_label(g.src(f), e))));
        }
    }
    for x in g.objects_of(act.arrows).iter() {
        let id = g.identity(x);
        if act.maps[id].iter().enumerate().any(|(e, &e2)| e != e2) {
            return Err(Error::UnitViolation(g.objects()[x].clone()));
        }
    }
    for f in act.arrows.iter() {
        for h in act.arrows.iter() {
            if let Some(fh) = g.compose(f, h) {
                if (0..sheaf.stalk_size(g.src(h))).any(|e| act.maps[fh][e] != act.maps[f][act.maps[h][e]]) {
                    return Err(Error::AssocViolation(format!("({},{})", g.arrow_name(f), g.arrow_name(h))));
                }
            }
        }
    }
    Ok(())
}

/// Continuity of `H ×_X F → F` with `H` carrying the subspace topology of the arrows.
pub fn check_continuity(tg: &TopGroupoid, sheaf: &EtaleSheaf, act: &GroupoidAction) -> Result<()> {
    let g = &tg.groupoid;
    for f in act.arrows.iter() {
        for f2 in (tg.arrows.min_nbhd(f) & act.arrows).iter() {
            let (a, b, a2, b2) = (g.src(f), g.tgt(f), g.src(f2), g.tgt(f2));
            for e in 0..sheaf.stalk_size(a) {
                if act.maps[f2][sheaf.rho(a, a2)[e]] != sheaf.rho(b, b2)[act.maps[f][e]] {
                    return Err(Error::NotContinuous(format!(
                        "action near ({}, {})",
                        g.arrow_name(f),
                        sheaf.element_label(a, e)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Every continuous action of `arrows` on the stalks over its objects.
pub fn enumerate_actions(tg: &TopGroupoid, sheaf: &EtaleSheaf, arrows: Bits) -> Vec<GroupoidAction> {
    let g = &tg.groupoid;
    let start = GroupoidAction::from_fn(g, sheaf, g.identities() & arrows, |_, e| e);
    let free: Vec<usize> = arrows.iter().filter(|&f| !g.is_identity(f)).collect();
    if free.iter().any(|&f| sheaf.stalk_size(g.src(f)) != sheaf.stalk_size(g.tgt(f))) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = start;
    actions_rec(tg, sheaf, &free, 0, &mut cur, &mut out);
    out
}

fn actions_rec(tg: &TopGroupoid, sheaf: &EtaleSheaf, free: &[usize], i: usize, cur: &mut GroupoidAction, out: &mut Vec<GroupoidAction>) {
    let g = &tg.groupoid;
    if i == free.len() {
        if check_continuity(tg, sheaf, cur).is_ok() {
            out.push(cur.clone());
        }
        return;
    }
    let f = free[i];
    for perm in permutations(sheaf.stalk_size(g.src(f))) {
        cur.maps[f] = perm;
        cur.arrows.insert(f);
        if consistent_at(g, cur, f) {
            actions_rec(tg, sheaf, free, i + 1, cur, out);
        }
        cur.arrows.remove(f);
    }
    cur.maps[f] = Vec::new();
}

/// Associativity among assigned arrows, for composites involving `f`.
fn consistent_at(g: &Groupoid, cur: &GroupoidAction, f: usize) -> bool {
    let law = |a: usize, b: usize| match g.compose(a, b) {
        Some(ab) if cur.arrows.contains(ab) => (0..cur.maps[b].len()).all(|e| cur.maps[ab][e] == cur.maps[a][cur.maps[b][e]]),
        _ => true,
    };
    cur.arrows.iter().all(|h| law(f, h) && law(h, f))
        && cur.arrows.iter().all(|a| cur.arrows.iter().all(|b| g.compose(a, b) != Some(f) || law(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::{all_topologies, FinSpace};
    use crate::presheaf::enumerate::for_each_sheaf;

    fn constant(sp: &FinSpace, k: usize) -> EtaleSheaf {
        EtaleSheaf::from_fn(sp, vec![k; sp.len()], |_, _, e| e).unwrap()
    }

    #[test]
    fn pair_groupoid_moves_labels() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let f = constant(&sp, 2);
        let act = GroupoidAction::from_fn(&g, &f, g.all_arrows(), |_, e| e);
        validate_action(&g, &f, &act).unwrap();
    }

    #[test]
    fn null_groupoid_acts_trivially() {
        for sp in all_topologies(2) {
            let g = Groupoid::null(sp.names());
            for_each_sheaf(&sp, 2, false, |f| {
                validate_action(&g, f, &GroupoidAction::trivial(&g, f, sp.whole())).unwrap();
            });
        }
    }

    #[test]
    fn constant_map_breaks_associativity() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let f = constant(&sp, 2);
        let a21 = g.arrow("(2,1)").unwrap();
        let act = GroupoidAction::from_fn(&g, &f, g.all_arrows(), |h, e| if h == a21 { 0 } else { e });
        assert_eq!(validate_action(&g, &f, &act), Err(Error::AssocViolation("((1,2),(2,1))".into())));
    }

    #[test]
    fn unit_and_square_violations() {
        let sp = FinSpace::discrete(1);
        let g = Groupoid::null(sp.names());
        let f = constant(&sp, 2);
        let swap = GroupoidAction::from_fn(&g, &f, g.all_arrows(), |_, e| 1 - e);
        assert!(matches!(validate_action(&g, &f, &swap), Err(Error::UnitViolation(_))));
        let out = GroupoidAction::from_fn(&g, &f, g.all_arrows(), |_, e| e + 1);
        assert!(matches!(validate_action(&g, &f, &out), Err(Error::SquareViolation(_))));
    }

    #[test]
    fn enumerated_actions_are_functors_to_stalks() {
        for sp in all_topologies(2) {
            let tg = TopGroupoid::pair(&sp);
            let g = &tg.groupoid;
            for_each_sheaf(&sp, 2, false, |f| {
                for act in enumerate_actions(&tg, f, g.all_arrows()) {
                    validate_action(g, f, &act).unwrap();
                    check_continuity(&tg, f, &act).unwrap();
                    // (h∘k)_♯ = h_♯ ∘ k_♯
                    for h in g.all_arrows().iter() {
                        for k in g.all_arrows().iter() {
                            if let Some(hk) = g.compose(h, k) {
                                let composite: Vec<usize> = act.stalk_map(k).iter().map(|&e| act.stalk_map(h)[e]).collect();
                                assert_eq!(act.stalk_map(hk), composite.as_slice());
                            }
                        }
                    }
                }
            });
        }
    }

    #[test]
    fn continuity_pins_the_indiscrete_action() {
        let sp = FinSpace::indiscrete(2);
        let tg = TopGroupoid::pair(&sp);
        let f = constant(&sp, 2);
        let acts = enumerate_actions(&tg, &f, tg.groupoid.all_arrows());
        assert_eq!(acts.len(), 1);
        // on the discrete space both bijections along (2,1) are continuous
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g, FinSpace::discrete(4), sp.clone()).unwrap();
        assert_eq!(enumerate_actions(&tg, &constant(&sp, 2), tg.groupoid.all_arrows()).len(), 2);
    }
}
