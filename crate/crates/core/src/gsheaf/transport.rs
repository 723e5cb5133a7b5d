//! s-transports: compatible families of continuous actions of the germs of a
//! local subgroupoid on the sheaf over each minimal neighbourhood.

use super::action::{check_continuity, enumerate_actions, validate_action, GroupoidAction};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::groupoid::TopGroupoid;
use crate::localsub::LocalSubgroupoid;
use crate::presheaf::EtaleSheaf;

/// Every germ is transitive on the minimal neighbourhood it lives on.
pub fn is_locally_transitive(s: &LocalSubgroupoid) -> bool {
    (0..s.space().len()).all(|x| s.groupoid().is_transitive(s.germ(x), s.space().min_nbhd(x)))
}

fn same_base(tg: &TopGroupoid, s: &LocalSubgroupoid) -> Result<()> {
    if tg.groupoid != *s.groupoid() || tg.objects != *s.space() {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// Whether the charts `(U_i, H_i, φ_i)` form an s-transport on `sheaf`.
pub fn s_transport_check(tg: &TopGroupoid, sheaf: &EtaleSheaf, s: &LocalSubgroupoid, charts: &[(Bits, Bits, GroupoidAction)]) -> Result<bool> {
    same_base(tg, s)?;
    let atlas = charts.iter().map(|(u, h, _)| (*u, *h)).collect();
    match LocalSubgroupoid::new(s.ambient(), atlas) {
        Ok(t) if t == *s => {}
        _ => return Err(Error::NotAnAtlas),
    }
    let g = &tg.groupoid;
    for (i, (u, h, act)) in charts.iter().enumerate() {
        let valid = act.arrows == *h
            && g.objects_of(*h).is_subset(*u)
            && validate_action(g, sheaf, act).is_ok()
            && check_continuity(tg, sheaf, act).is_ok();
        if !valid {
            return Err(Error::ActionInvalid(i));
        }
    }
    for (i, (u, _, a)) in charts.iter().enumerate() {
        for (v, _, b) in &charts[i + 1..] {
            if (*u & *v).iter().any(|x| a.restrict(s.germ(x)) != b.restrict(s.germ(x))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every s-transport, as its family of germs: the action of `germ(x)` at each `x`.
pub fn enumerate_transports(tg: &TopGroupoid, s: &LocalSubgroupoid, sheaf: &EtaleSheaf) -> Result<Vec<Vec<GroupoidAction>>> {
    same_base(tg, s)?;
    let space = s.space();
    let options: Vec<Vec<GroupoidAction>> = (0..space.len()).map(|x| enumerate_actions(tg, sheaf, s.germ(x))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(s: &LocalSubgroupoid, options: &[Vec<GroupoidAction>], chosen: &mut Vec<GroupoidAction>, out: &mut Vec<Vec<GroupoidAction>>) {
        let x = chosen.len();
        if x == options.len() {
            out.push(chosen.clone());
            return;
        }
        let space = s.space();
        for act in &options[x] {
            let agrees = (0..x).all(|y| (space.min_nbhd(x) & space.min_nbhd(y)).iter().all(|z| act.restrict(s.germ(z)) == chosen[y].restrict(s.germ(z))));
            if agrees {
                chosen.push(act.clone());
                rec(s, options, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(s, &options, &mut chosen, &mut out);
    Ok(out)
}

/// Canonical charts `(N(x), germ(x), φ_x)` of a transport given by its germs.
pub fn transport_charts(s: &LocalSubgroupoid, germs: &[GroupoidAction]) -> Vec<(Bits, Bits, GroupoidAction)> {
    germs.iter().enumerate().map(|(x, a)| (s.space().min_nbhd(x), s.germ(x), a.clone())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportCount {
    pub count: usize,
    /// Up to two distinct transports, as germ families.
    pub witnesses: Vec<Vec<GroupoidAction>>,
}

pub fn unique_transport(tg: &TopGroupoid, s: &LocalSubgroupoid, sheaf: &EtaleSheaf) -> Result<TransportCount> {
    let all = enumerate_transports(tg, s, sheaf)?;
    Ok(TransportCount { count: all.len(), witnesses: all.into_iter().take(2).collect() })
}
