//! Exhaustive holonomy checks over every atlas of a topological groupoid.

use std::sync::Arc;

use super::hol::holonomy_groupoid;
use super::locally_top::{atlas_regularity, build_locally_top_from_s};
use crate::error::Result;
use crate::groupoid::TopGroupoid;
use crate::localsub::{atlas_name, for_each_atlas, Ambient};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HolonomySweep {
    pub atlases: usize,
    pub weakly_adaptable: usize,
    pub regular: usize,
    pub strictly_regular: usize,
    /// Strictly regular atlases whose `(glob(s), W)` failed a condition.
    pub locally_top_failures: Vec<String>,
    /// Strictly regular atlases whose holonomy groupoid failed a check.
    pub holonomy_failures: Vec<String>,
    pub lemma_counterexamples: usize,
    /// Holonomy groupoids in which the identity-valued `W`-germs were not already normal.
    pub kernel_enlarged: usize,
    pub phi_bijective: usize,
}

impl HolonomySweep {
    pub fn holds(&self) -> bool {
        self.locally_top_failures.is_empty() && self.holonomy_failures.is_empty() && self.lemma_counterexamples == 0
    }

    pub fn merge(&mut self, other: HolonomySweep) {
        self.atlases += other.atlases;
        self.weakly_adaptable += other.weakly_adaptable;
        self.regular += other.regular;
        self.strictly_regular += other.strictly_regular;
        self.locally_top_failures.extend(other.locally_top_failures);
        self.holonomy_failures.extend(other.holonomy_failures);
        self.lemma_counterexamples += other.lemma_counterexamples;
        self.kernel_enlarged += other.kernel_enlarged;
        self.phi_bijective += other.phi_bijective;
    }
}

pub fn holonomy_sweep(tg: &TopGroupoid, max_charts: usize) -> Result<HolonomySweep> {
    let amb: Arc<Ambient> = Ambient::new(tg.objects.clone(), tg.groupoid.clone())?;
    let mut out = HolonomySweep::default();
    let mut err = None;
    for_each_atlas(&amb, max_charts, |s| {
        out.atlases += 1;
        let reg = match atlas_regularity(tg, s) {
            Ok(r) => r,
            Err(e) => {
                err.get_or_insert(e);
                return;
            }
        };
        out.weakly_adaptable += reg.weakly_adaptable as usize;
        out.regular += reg.regular as usize;
        if !reg.strictly_regular {
            return;
        }
        out.strictly_regular += 1;
        let lt = match build_locally_top_from_s(tg, s) {
            Ok(lt) => lt,
            Err(e) => {
                out.locally_top_failures.push(format!("{}: {e}", atlas_name(s)));
                return;
            }
        };
        match holonomy_groupoid(tg, lt.h, lt.w) {
            Ok(hol) => {
                let check = hol.check();
                out.lemma_counterexamples += check.lemma_counterexamples;
                out.kernel_enlarged += !check.literal_kernel_normal as usize;
                out.phi_bijective += check.phi_bijective as usize;
                if !check.holds() {
                    out.holonomy_failures.push(format!("{}: {check:?}", atlas_name(s)));
                }
            }
            Err(e) => out.holonomy_failures.push(format!("{}: {e}", atlas_name(s))),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::FinSpace;

    #[test]
    fn sierpinski_pair_sweep() {
        let r = holonomy_sweep(&TopGroupoid::pair(&FinSpace::sierpinski()), 8).unwrap();
        assert!(r.strictly_regular > 0);
        assert!(r.holds(), "{r:?}");
    }
}
