//! Exhaustive transport and r-structure checks over local equivalence relations.

use super::action::check_continuity;
use super::qpair::{lift_r_action, r_structures};
use super::transport::{enumerate_transports, is_locally_transitive, s_transport_check, transport_charts};
use crate::error::Result;
use crate::fintop::FinSpace;
use crate::groupoid::TopGroupoid;
use crate::localsub::{for_each_local_subgroupoid, Ambient, LocalEquivRel};
use crate::presheaf::enumerate::for_each_sheaf;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransportSweep {
    /// `(r, F)` pairs with `r` locally transitive.
    pub transitive_pairs: usize,
    pub max_transports: usize,
    /// Locally transitive pairs with two or more transports.
    pub uniqueness_violations: Vec<String>,
    /// Enumerated transports rejected by the chart check.
    pub chart_failures: usize,
    /// r-structures lifted to an action of `glob(r)`.
    pub lifts: usize,
    pub lift_failures: Vec<String>,
    /// Lifted actions that are not continuous for the product topology.
    pub discontinuous_lifts: usize,
    /// `(r, F)` pairs whose r-structure and transport counts differ.
    pub count_mismatches: usize,
}

impl TransportSweep {
    pub fn holds(&self) -> bool {
        self.uniqueness_violations.is_empty() && self.chart_failures == 0 && self.lift_failures.is_empty()
    }

    pub fn merge(&mut self, other: TransportSweep) {
        self.transitive_pairs += other.transitive_pairs;
        self.max_transports = self.max_transports.max(other.max_transports);
        self.uniqueness_violations.extend(other.uniqueness_violations);
        self.chart_failures += other.chart_failures;
        self.lifts += other.lifts;
        self.lift_failures.extend(other.lift_failures);
        self.discontinuous_lifts += other.discontinuous_lifts;
        self.count_mismatches += other.count_mismatches;
    }
}

/// Every local equivalence relation on `space` against every sheaf with stalks of at most `max_stalk`.
pub fn transport_sweep(space: &FinSpace, max_stalk: usize) -> Result<TransportSweep> {
    let tg = TopGroupoid::pair(space);
    let amb = Ambient::pair(space);
    let mut out = TransportSweep::default();
    let mut err = None;
    for_each_local_subgroupoid(&amb, |s| {
        let transitive = is_locally_transitive(s);
        let coherent = s.is_globally_coherent();
        let r = LocalEquivRel::new(s.clone()).expect("pair groupoid");
        for_each_sheaf(space, max_stalk, false, |f| {
            let transports = match enumerate_transports(&tg, s, f) {
                Ok(t) => t,
                Err(e) => {
                    err.get_or_insert(e);
                    return;
                }
            };
            for t in &transports {
                if !s_transport_check(&tg, f, s, &transport_charts(s, t)).unwrap_or(false) {
                    out.chart_failures += 1;
                }
            }
            if transitive {
                out.transitive_pairs += 1;
                out.max_transports = out.max_transports.max(transports.len());
                if transports.len() > 1 {
                    out.uniqueness_violations.push(format!("{:?} with stalks {:?}: {} transports", s.germ_names(), f.stalk_sizes(), transports.len()));
                }
            }
            let structures = r_structures(f, &r);
            if structures.len() != transports.len() {
                out.count_mismatches += 1;
            }
            if !coherent {
                return;
            }
            for t in &structures {
                out.lifts += 1;
                match lift_r_action(f, &r, t) {
                    Ok(act) => out.discontinuous_lifts += check_continuity(&tg, f, &act).is_err() as usize,
                    Err(e) => out.lift_failures.push(format!("{:?} with stalks {:?}: {e}", s.germ_names(), f.stalk_sizes())),
                }
            }
        });
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
