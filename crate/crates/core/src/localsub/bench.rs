//! Exhaustive sweeps over small ambients: every local subgroupoid, every atlas,
//! the loc/glob adjunction, and the coherence theorems checked instance by instance.

use std::sync::Arc;

use super::{Ambient, LocalSubgroupoid};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::foliate::{leaf_check, ChartSource};

/// Groupoids above this many arrows are refused by the sweeps.
pub const SWEEP_ARROW_LIMIT: usize = 32;
/// Refinement count above which the cover oracle gives up.
pub const REFINEMENT_LIMIT: usize = 1 << 16;
/// Witness strings kept per statement.
const WITNESS_LIMIT: usize = 16;

fn check_size(ambient: &Ambient) -> Result<()> {
    let a = ambient.groupoid.arrow_count();
    if a > SWEEP_ARROW_LIMIT {
        return Err(Error::ResourceCap(format!("{a} arrows, the sweep limit is {SWEEP_ARROW_LIMIT}")));
    }
    Ok(())
}

/// Every local subgroupoid, as a germ table with its canonical atlas.
pub fn for_each_local_subgroupoid(ambient: &Arc<Ambient>, mut visit: impl FnMut(&LocalSubgroupoid)) {
    let sp = &ambient.space;
    let n = sp.len();
    let options: Vec<Vec<Bits>> = (0..n).map(|x| ambient.groupoid.wide_subgroupoids(sp.min_nbhd(x))).collect();
    let mut germs = vec![Bits::EMPTY; n];
    fn rec(amb: &Arc<Ambient>, options: &[Vec<Bits>], germs: &mut Vec<Bits>, x: usize, visit: &mut dyn FnMut(&LocalSubgroupoid)) {
        let sp = &amb.space;
        if x == germs.len() {
            visit(&LocalSubgroupoid::from_germs(amb, germs).expect("compatible germs"));
            return;
        }
        for &h in &options[x] {
            let ok = (0..x).all(|y| {
                if sp.min_nbhd(x).contains(y) {
                    amb.germ_of(h, y) == germs[y]
                } else if sp.min_nbhd(y).contains(x) {
                    amb.germ_of(germs[y], x) == h
                } else {
                    true
                }
            });
            if ok {
                germs[x] = h;
                rec(amb, options, germs, x + 1, visit);
            }
        }
    }
    rec(ambient, &options, &mut germs, 0, &mut visit);
}

/// Every atlas of at most `max_charts` distinct charts `(U, H)` with `U` a nonempty open.
pub fn for_each_atlas(ambient: &Arc<Ambient>, max_charts: usize, mut visit: impl FnMut(&LocalSubgroupoid)) -> Result<()> {
    check_size(ambient)?;
    let sp = &ambient.space;
    let g = &ambient.groupoid;
    let pool: Vec<(Bits, Bits)> = sp
        .opens()
        .iter()
        .filter(|u| !u.is_empty())
        .flat_map(|&u| g.wide_subgroupoids(u).into_iter().map(move |h| (u, h)))
        .collect();
    let compatible = |a: (Bits, Bits), b: (Bits, Bits)| (a.0 & b.0).iter().all(|x| ambient.germ_of(a.1, x) == ambient.germ_of(b.1, x));
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        amb: &Arc<Ambient>,
        pool: &[(Bits, Bits)],
        compatible: &dyn Fn((Bits, Bits), (Bits, Bits)) -> bool,
        chosen: &mut Vec<usize>,
        start: usize,
        max: usize,
        visit: &mut dyn FnMut(&LocalSubgroupoid),
    ) {
        let covered = chosen.iter().fold(Bits::EMPTY, |acc, &i| acc | pool[i].0);
        if covered == amb.space.whole() && !chosen.is_empty() {
            let charts = chosen.iter().map(|&i| pool[i]).collect();
            visit(&LocalSubgroupoid::new(amb, charts).expect("compatible charts"));
        }
        if chosen.len() == max {
            return;
        }
        for i in start..pool.len() {
            if chosen.iter().all(|&j| compatible(pool[j], pool[i])) {
                chosen.push(i);
                rec(amb, pool, compatible, chosen, i + 1, max, visit);
                chosen.pop();
            }
        }
    }
    rec(ambient, &pool, &compatible, &mut chosen, 0, max_charts, &mut visit);
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub wide: usize,
    pub local: usize,
    /// `glob(loc(H)) ⊄ H`.
    pub counit_violations: Vec<String>,
    /// `s ≰ loc(glob(s))`.
    pub unit_violations: Vec<String>,
    pub monotonicity_violations: Vec<String>,
    /// `glob∘loc∘glob ≠ glob` on coherent `s`, or `loc∘glob∘loc ≠ loc` on locally coherent `H`.
    pub triangle_violations: Vec<String>,
    /// Pairs breaking `glob(s) ⊆ H ⇔ s ≤ loc(H)`.
    pub correspondence_violations: Vec<String>,
    /// Wide `H` with `glob(loc(H)) ⊊ H`.
    pub strict_counit: Vec<String>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.counit_violations.is_empty()
            && self.unit_violations.is_empty()
            && self.monotonicity_violations.is_empty()
            && self.triangle_violations.is_empty()
            && self.correspondence_violations.is_empty()
    }
}

fn push(list: &mut Vec<String>, w: impl FnOnce() -> String) {
    if list.len() < WITNESS_LIMIT {
        list.push(w());
    }
}

fn show(ambient: &Ambient, h: Bits) -> String {
    format!("{{{}}}", ambient.groupoid.arrow_list(h).join(","))
}

fn show_germs(s: &LocalSubgroupoid) -> String {
    let sp = s.space();
    let parts: Vec<String> = (0..sp.len()).map(|x| format!("{}:{}", sp.name(x), show(s.ambient(), s.germ(x)))).collect();
    format!("[{}]", parts.join(" "))
}

pub fn adjunction_check(ambient: &Arc<Ambient>) -> Result<AdjunctionReport> {
    check_size(ambient)?;
    let g = &ambient.groupoid;
    let wide = g.wide_subgroupoids(ambient.space.whole());
    let mut locals = Vec::new();
    for_each_local_subgroupoid(ambient, |s| locals.push(s.clone()));
    let locs: Vec<LocalSubgroupoid> = wide.iter().map(|&h| LocalSubgroupoid::loc(ambient, h).expect("wide")).collect();
    let globs: Vec<Bits> = locals.iter().map(LocalSubgroupoid::glob).collect();
    let mut r = AdjunctionReport { wide: wide.len(), local: locals.len(), ..Default::default() };

    for (&h, lh) in wide.iter().zip(&locs) {
        let back = lh.glob();
        if !back.is_subset(h) {
            push(&mut r.counit_violations, || show(ambient, h));
        } else if back != h {
            push(&mut r.strict_counit, || format!("{} ⊋ {}", show(ambient, h), show(ambient, back)));
        }
        if lh.is_coherent() && lh.loc_glob() != *lh {
            push(&mut r.triangle_violations, || format!("loc∘glob∘loc at {}", show(ambient, h)));
        }
    }
    for (s, &gs) in locals.iter().zip(&globs) {
        let lg = s.loc_glob();
        if !s.le(&lg)? {
            push(&mut r.unit_violations, || show_germs(s));
        }
        if s.is_coherent() && lg.glob() != gs {
            push(&mut r.triangle_violations, || format!("glob∘loc∘glob at {}", show_germs(s)));
        }
    }
    for (i, &h) in wide.iter().enumerate() {
        for (j, &k) in wide.iter().enumerate() {
            if h.is_subset(k) && !locs[i].le(&locs[j])? {
                push(&mut r.monotonicity_violations, || format!("loc: {} ⊆ {}", show(ambient, h), show(ambient, k)));
            }
        }
    }
    for (i, s) in locals.iter().enumerate() {
        for (j, t) in locals.iter().enumerate() {
            if s.le(t)? && !globs[i].is_subset(globs[j]) {
                push(&mut r.monotonicity_violations, || format!("glob: {} ≤ {}", show_germs(s), show_germs(t)));
            }
        }
        for (&h, lh) in wide.iter().zip(&locs) {
            if globs[i].is_subset(h) != s.le(lh)? {
                push(&mut r.correspondence_violations, || format!("{} against {}", show_germs(s), show(ambient, h)));
            }
        }
    }
    Ok(r)
}

/// One checked implication: how many instances were examined, how many met the
/// hypothesis, and the instances where the conclusion failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub name: &'static str,
    pub checked: usize,
    pub hypothesis_held: usize,
    pub witnesses: Vec<String>,
}

impl Statement {
    fn new(name: &'static str) -> Statement {
        Statement { name, checked: 0, hypothesis_held: 0, witnesses: Vec::new() }
    }

    fn record(&mut self, hypothesis: bool, conclusion: impl FnOnce() -> bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if hypothesis {
            self.hypothesis_held += 1;
            if !conclusion() {
                push(&mut self.witnesses, witness);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchReport {
    pub statements: Vec<Statement>,
}

impl BenchReport {
    pub fn statement(&self, name: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.name == name)
    }

    pub fn counterexamples(&self) -> usize {
        self.statements.iter().map(|s| s.witnesses.len()).sum()
    }

    /// Adds the counts and witnesses of `other`, statement by statement.
    pub fn merge(&mut self, other: BenchReport) {
        for o in other.statements {
            match self.statements.iter_mut().find(|s| s.name == o.name) {
                Some(s) => {
                    s.checked += o.checked;
                    s.hypothesis_held += o.hypothesis_held;
                    for w in o.witnesses {
                        push(&mut s.witnesses, || w);
                    }
                }
                None => self.statements.push(o),
            }
        }
    }
}

pub const CLOPEN_COMPONENTS: &str = "refined components are clopen in components";
pub const LOCALLY_CONNECTED_COHERENT: &str = "locally connected components give coherence";
pub const LOCALLY_CONNECTED_TOTAL: &str = "locally connected charts give total coherence";
pub const CONNECTED_GIVES_COHERENT: &str = "connected components give a coherent subgroupoid";
pub const CLOSED_COHERENT_CONNECTED: &str = "closed components of a coherent subgroupoid are connected";
pub const RESTRICTION_GLOBAL: &str = "restrictions stay globally coherent";
pub const LOCAL_TOTAL: &str = "total coherence is local";
pub const LEAVES_ARE_COMPONENTS: &str = "leaves are the components of glob";
pub const COMPONENTS_CLOPEN_IN_FINE: &str = "components of glob are clopen in the fine topology";

/// Every transitivity component of `h` on `objects` is connected in the base space.
fn components_connected(ambient: &Ambient, h: Bits, objects: Bits) -> bool {
    ambient.groupoid.components(h, objects).iter().all(|&m| ambient.space.is_connected(m))
}

/// Runs every coherence statement over all wide subgroupoids, all point-indexed
/// covers, all local subgroupoids and all atlases of at most `max_charts` charts.
pub fn theorem_bench(ambient: &Arc<Ambient>, max_charts: usize) -> Result<BenchReport> {
    check_size(ambient)?;
    let sp = &ambient.space;
    let g = &ambient.groupoid;
    let whole = sp.whole();
    let mut clopen = Statement::new(CLOPEN_COMPONENTS);
    let mut loc_conn = Statement::new(LOCALLY_CONNECTED_COHERENT);
    let mut loc_total = Statement::new(LOCALLY_CONNECTED_TOTAL);
    let mut conn = Statement::new(CONNECTED_GIVES_COHERENT);
    let mut closed = Statement::new(CLOSED_COHERENT_CONNECTED);
    let mut restr = Statement::new(RESTRICTION_GLOBAL);
    let mut local_total = Statement::new(LOCAL_TOTAL);
    let mut leaves = Statement::new(LEAVES_ARE_COMPONENTS);
    let mut leaves_clopen = Statement::new(COMPONENTS_CLOPEN_IN_FINE);

    let nbhd_choices: Vec<Vec<Bits>> = (0..sp.len()).map(|x| sp.opens().iter().copied().filter(|v| v.contains(x)).collect()).collect();
    for h in g.wide_subgroupoids(whole) {
        let s = LocalSubgroupoid::loc(ambient, h)?;
        let h_components = g.components(h, whole);
        // every point-indexed open cover
        let mut digits = vec![0usize; sp.len()];
        'covers: loop {
            let seed = digits.iter().zip(&nbhd_choices).fold(Bits::EMPTY, |acc, (&d, c)| acc | g.restrict(h, c[d]));
            let hv = g.generated(seed, whole);
            clopen.record(
                true,
                || {
                    g.components(hv, whole).iter().all(|&c| {
                        let m = h_components.iter().copied().find(|m| c.is_subset(*m)).expect("refined component");
                        let (sub, old) = sp.subspace(m);
                        let rel: Bits = old.iter().enumerate().filter(|(_, &o)| c.contains(o)).map(|(i, _)| i).collect();
                        sub.is_open(rel) && sub.is_closed(rel)
                    })
                },
                || format!("H={} V={:?}", show(ambient, h), digits.iter().zip(&nbhd_choices).map(|(&d, c)| sp.fmt_set(c[d])).collect::<Vec<_>>()),
            );
            for (k, d) in digits.iter_mut().enumerate() {
                *d += 1;
                if *d < nbhd_choices[k].len() {
                    continue 'covers;
                }
                *d = 0;
            }
            break;
        }
        let locally_connected =
            (0..sp.len()).all(|x| nbhd_choices[x].iter().any(|&w| components_connected(ambient, g.restrict(h, w), w)));
        loc_conn.record(locally_connected, || s.is_coherent(), || show(ambient, h));
        let coherent_h = s.glob() == h;
        conn.record(components_connected(ambient, h, whole), || coherent_h, || show(ambient, h));
        closed.record(
            coherent_h && h_components.iter().all(|&m| sp.is_closed(m)),
            || components_connected(ambient, h, whole),
            || show(ambient, h),
        );
    }

    let mut sweep_local = |s: &LocalSubgroupoid| -> Result<()> {
        let global_and_total = |t: &LocalSubgroupoid| t.is_globally_coherent() && t.is_totally_coherent();
        let gt = global_and_total(s);
        for &u in sp.opens() {
            restr.record(gt, || s.restrict(u).map(|r| r.is_globally_coherent()).unwrap_or(false), || format!("{} on {}", show_germs(s), sp.fmt_set(u)));
        }
        let hyp = (0..sp.len()).all(|x| nbhd_choices[x].iter().any(|&v| global_and_total(&s.restrict(v).expect("open"))));
        local_total.record(hyp, || s.is_totally_coherent(), || show_germs(s));
        Ok(())
    };
    let mut local_err = Ok(());
    for_each_local_subgroupoid(ambient, |s| {
        if local_err.is_ok() {
            local_err = sweep_local(s);
        }
    });
    local_err?;

    for_each_atlas(ambient, max_charts, |s| {
        let hyp = s.charts().iter().all(|&(u, h)| {
            u.iter().all(|a| {
                sp.opens_within(u)
                    .filter(|v| v.contains(a))
                    .all(|v| sp.opens_within(v).filter(|w| w.contains(a)).any(|w| components_connected(ambient, g.restrict(h, w), w)))
            })
        });
        loc_total.record(hyp, || s.is_totally_coherent(), || atlas_name(s));
        let check = leaf_check(s, ChartSource::Atlas);
        let coherent = s.is_coherent();
        leaves.record(coherent, || check.equal, || format!("{} leaves {:?} components {:?}", atlas_name(s), fmt_all(s, &check.leaves), fmt_all(s, &check.glob_components)));
        leaves_clopen.record(coherent, || check.components_clopen, || atlas_name(s));
    })?;

    Ok(BenchReport { statements: vec![clopen, loc_conn, loc_total, conn, closed, restr, local_total, leaves, leaves_clopen] })
}

fn fmt_all(s: &LocalSubgroupoid, sets: &[Bits]) -> Vec<String> {
    sets.iter().map(|&b| s.space().fmt_set(b)).collect()
}

/// `(U, H); ...` with arrow names, for witnesses.
pub fn atlas_name(s: &LocalSubgroupoid) -> String {
    let parts: Vec<String> = s.charts().iter().map(|&(u, h)| format!("({}, {})", s.space().fmt_set(u), show(s.ambient(), h))).collect();
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::{all_topologies, FinSpace};
    use crate::localsub::tests::line;

    #[test]
    fn local_subgroupoids_on_sierpinski() {
        // germ at b is a wide subgroupoid of the pair groupoid on X, germ at a is forced
        let amb = Ambient::pair(&FinSpace::sierpinski());
        let mut count = 0;
        for_each_local_subgroupoid(&amb, |_| count += 1);
        assert_eq!(count, 2);
    }

    #[test]
    fn every_atlas_matches_a_germ_table() {
        for sp in all_topologies(3) {
            let amb = Ambient::pair(&sp);
            let mut tables = Vec::new();
            for_each_local_subgroupoid(&amb, |s| tables.push(s.germs().to_vec()));
            for_each_atlas(&amb, 3, |s| assert!(tables.contains(&s.germs().to_vec()))).unwrap();
        }
    }

    #[test]
    fn adjunction_on_discrete_pair() {
        let amb = Ambient::pair(&FinSpace::discrete(2));
        let r = adjunction_check(&amb).unwrap();
        assert!(r.holds());
        assert_eq!(r.strict_counit.len(), 1);
    }

    #[test]
    fn adjunction_on_small_spaces() {
        for n in 1..=3 {
            for sp in all_topologies(n) {
                let r = adjunction_check(&Ambient::pair(&sp)).unwrap();
                assert!(r.holds(), "{r:?}");
            }
        }
    }

    #[test]
    fn bench_on_the_line() {
        let r = theorem_bench(&Ambient::pair(&line()), 4).unwrap();
        for st in &r.statements {
            assert!(st.witnesses.is_empty(), "{st:?}");
            assert!(st.checked > 0);
        }
    }

    #[test]
    fn oversized_groupoid_is_refused() {
        let amb = Ambient::pair(&FinSpace::discrete(6));
        assert!(matches!(adjunction_check(&amb), Err(Error::ResourceCap(_))));
    }
}
