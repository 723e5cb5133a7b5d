//! Atlases: covering families of local elements that agree germ-wise.

use super::{Presheaf, Section};
use crate::bits::Bits;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    /// `(U_i, s_i)` with `s_i ∈ F(U_i)`.
    pub charts: Vec<(Bits, usize)>,
}

impl Atlas {
    pub fn single(u: Bits, e: usize) -> Atlas {
        Atlas { charts: vec![(u, e)] }
    }

    /// Checks the covering condition and local compatibility of every pair of charts.
    pub fn validate(&self, p: &Presheaf) -> Result<()> {
        let sp = p.space();
        for &(u, e) in &self.charts {
            if sp.open_index(u).is_none() {
                return Err(Error::NotOpen(sp.fmt_set(u)));
            }
            if e >= p.size(u) {
                return Err(Error::ElementNotInSet { open: sp.key(u), element: format!("#{e}") });
            }
        }
        let union = self.charts.iter().fold(Bits::EMPTY, |a, &(u, _)| a | u);
        if union != sp.whole() {
            return Err(Error::CoverIncomplete);
        }
        for (i, &(u, s)) in self.charts.iter().enumerate() {
            for (j, &(v, t)) in self.charts.iter().enumerate().skip(i + 1) {
                for x in (u & v).iter() {
                    let w = sp.min_nbhd(x);
                    if p.restrict(u, w, s) != p.restrict(v, w, t) {
                        return Err(Error::IncompatibleAtlas { i, j, point: sp.name(x).to_string() });
                    }
                }
            }
        }
        Ok(())
    }

    /// Glues the charts germ by germ into a global section of the sheafification.
    pub fn to_section(&self, p: &Presheaf) -> Result<Section> {
        self.validate(p)?;
        let sp = p.space();
        let mut values = vec![None; sp.len()];
        for x in 0..sp.len() {
            let &(u, e) = self.chart_for(x);
            values[x] = Some(p.restrict(u, sp.min_nbhd(x), e));
        }
        let s = Section { domain: sp.whole(), values };
        debug_assert!(p.sheafify().is_section(&s));
        Ok(s)
    }

    /// Chart containing `x` with the smallest open, then the lowest index.
    fn chart_for(&self, x: usize) -> &(Bits, usize) {
        self.charts
            .iter()
            .filter(|(u, _)| u.contains(x))
            .min_by_key(|(u, _)| u.len())
            .expect("charts cover the space")
    }

    /// One chart `(N(x), s(x))` per point.
    pub fn from_section(p: &Presheaf, s: &Section) -> Result<Atlas> {
        let sp = p.space();
        if s.domain != sp.whole() {
            return Err(Error::NotGlobal);
        }
        Ok(Atlas { charts: (0..sp.len()).map(|x| (sp.min_nbhd(x), s.at(x))).collect() })
    }

    /// Both atlases induce the same germ at every point.
    pub fn same_section(&self, other: &Atlas, p: &Presheaf) -> Result<bool> {
        Ok(self.to_section(p)? == other.to_section(p)?)
    }

    /// `(u, e)` is a chart for the global section `s`: its germ at each point of `u` is `s(x)`.
    pub fn is_chart_for(p: &Presheaf, s: &Section, u: Bits, e: usize) -> bool {
        let sp = p.space();
        u.iter().all(|x| p.restrict(u, sp.min_nbhd(x), e) == s.at(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::{all_topologies, FinSpace};
    use crate::presheaf::tests::{lumpy, non_gluing};

    #[test]
    fn single_chart_gives_mu() {
        let sp = FinSpace::sierpinski();
        let p = Presheaf::functions(&sp, 2);
        for e in 0..4 {
            let a = Atlas::single(sp.whole(), e);
            assert_eq!(a.to_section(&p).unwrap(), p.mu(sp.whole(), e));
            let refined = Atlas { charts: vec![(Bits::singleton(0), p.restrict(sp.whole(), Bits::singleton(0), e)), (sp.whole(), e)] };
            assert!(refined.same_section(&a, &p).unwrap());
        }
    }

    #[test]
    fn non_gluing_family_is_an_atlas() {
        let p = non_gluing();
        let charts = vec![(Bits::from_indices([0, 1]), 0), (Bits::from_indices([1, 2]), 0), (Bits::from_indices([0, 2]), 0)];
        let atlas = Atlas { charts };
        let s = atlas.to_section(&p).unwrap();
        assert_eq!(p.size(p.space().whole()), 0);
        assert!(p.sheafify().is_section(&s));
    }

    #[test]
    fn incompatible_charts_are_rejected() {
        let sp = FinSpace::sierpinski();
        let p = Presheaf::functions(&sp, 2);
        // f(a) = 0 versus f(a) = 1 overlap at a
        let a = Atlas { charts: vec![(sp.whole(), 0), (Bits::singleton(0), 1)] };
        assert!(matches!(a.validate(&p), Err(Error::IncompatibleAtlas { point, .. }) if point == "a"));
        let partial = Atlas { charts: vec![(Bits::singleton(0), 0)] };
        assert_eq!(partial.validate(&p), Err(Error::CoverIncomplete));
    }

    /// Common refinement oracle: a cover by opens each inside a chart of both atlases, on which they agree.
    fn common_refinement_exists(p: &Presheaf, a: &Atlas, b: &Atlas) -> bool {
        let sp = p.space();
        let good: Vec<Bits> = sp
            .opens()
            .iter()
            .copied()
            .filter(|&w| {
                a.charts.iter().any(|&(u, s)| {
                    w.is_subset(u)
                        && b.charts.iter().any(|&(v, t)| w.is_subset(v) && p.restrict(u, w, s) == p.restrict(v, w, t))
                })
            })
            .collect();
        good.iter().fold(Bits::EMPTY, |acc, &w| acc | w) == sp.whole()
    }

    #[test]
    fn round_trip_and_refinement_oracle() {
        for sp in all_topologies(3) {
            for p in [Presheaf::functions(&sp, 2), lumpy(&sp)] {
                let sheaf = p.sheafify();
                let globals = sheaf.sections(sp.whole());
                let atlases: Vec<Atlas> = globals.iter().map(|s| Atlas::from_section(&p, s).unwrap()).collect();
                for (s, a) in globals.iter().zip(&atlases) {
                    assert_eq!(&a.to_section(&p).unwrap(), s);
                    for (u, e) in sp.opens().iter().flat_map(|&u| (0..p.size(u)).map(move |e| (u, e))) {
                        let by_germs = Atlas::is_chart_for(&p, s, u, e);
                        let by_sections = p.mu(u, e) == s.restrict(u);
                        assert_eq!(by_germs, by_sections);
                    }
                }
                for a in &atlases {
                    for b in &atlases {
                        assert_eq!(a.same_section(b, &p).unwrap(), common_refinement_exists(&p, a, b));
                    }
                }
            }
        }
    }
}
