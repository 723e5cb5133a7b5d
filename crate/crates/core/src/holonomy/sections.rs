//! Admissible local sections: partial maps `k: U → G` with `src k(x) = x` whose
//! target map carries `U` homeomorphically onto an open set.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fintop::FinSpace;
use crate::groupoid::{Groupoid, TopGroupoid};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleSection {
    pub domain: Bits,
    /// Indexed by point; `None` off the domain.
    pub values: Vec<Option<usize>>,
}

impl AdmissibleSection {
    /// Checks the three admissibility conditions.
    pub fn new(space: &FinSpace, g: &Groupoid, domain: Bits, values: Vec<Option<usize>>) -> Result<AdmissibleSection> {
        let k = AdmissibleSection { domain, values };
        k.check(space, g)?;
        Ok(k)
    }

    pub fn check(&self, space: &FinSpace, g: &Groupoid) -> Result<()> {
        if !space.is_open(self.domain) || self.values.len() != space.len() {
            return Err(Error::NotAdmissible("domain"));
        }
        for x in 0..space.len() {
            match self.values[x] {
                Some(f) if !self.domain.contains(x) || f >= g.arrow_count() || g.src(f) != x => return Err(Error::NotAdmissible("alpha")),
                None if self.domain.contains(x) => return Err(Error::NotAdmissible("alpha")),
                _ => {}
            }
        }
        let image = self.target_image(g, self.domain);
        if !space.is_open(image) {
            return Err(Error::NotAdmissible("openImage"));
        }
        let injective = image.len() == self.domain.len();
        if !injective || !self.domain.iter().all(|y| self.target_image(g, space.min_nbhd(y)) == space.min_nbhd(self.target(g, y))) {
            return Err(Error::NotAdmissible("homeo"));
        }
        Ok(())
    }

    /// `x ↦ 1_x` on `u`.
    pub fn identity(g: &Groupoid, u: Bits) -> AdmissibleSection {
        let values = (0..g.object_count()).map(|x| u.contains(x).then(|| g.identity(x))).collect();
        AdmissibleSection { domain: u, values }
    }

    pub fn at(&self, x: usize) -> usize {
        self.values[x].expect("point in domain")
    }

    /// `tgt k(x)`.
    pub fn target(&self, g: &Groupoid, x: usize) -> usize {
        g.tgt(self.at(x))
    }

    pub fn target_image(&self, g: &Groupoid, s: Bits) -> Bits {
        (s & self.domain).iter().map(|x| self.target(g, x)).collect()
    }

    /// The arrows taken.
    pub fn arrows(&self) -> Bits {
        self.values.iter().flatten().copied().collect()
    }

    /// `(t k)(x) = t(tgt k(x)) ∘ k(x)` where defined.
    pub fn product(&self, g: &Groupoid, k: &AdmissibleSection) -> AdmissibleSection {
        let t = self;
        let domain: Bits = k.domain.iter().filter(|&x| t.domain.contains(k.target(g, x))).collect();
        let values = (0..k.values.len())
            .map(|x| domain.contains(x).then(|| g.compose(t.at(k.target(g, x)), k.at(x)).expect("composable")))
            .collect();
        AdmissibleSection { domain, values }
    }

    /// `tgt k(x) ↦ k(x)⁻¹` on the image of the domain.
    pub fn inverse(&self, g: &Groupoid) -> AdmissibleSection {
        let mut values = vec![None; self.values.len()];
        for x in self.domain.iter() {
            values[self.target(g, x)] = Some(g.inverse(self.at(x)));
        }
        AdmissibleSection { domain: self.target_image(g, self.domain), values }
    }

    pub fn restrict(&self, v: Bits) -> AdmissibleSection {
        let domain = self.domain & v;
        AdmissibleSection { domain, values: self.values.iter().enumerate().map(|(x, &f)| if domain.contains(x) { f } else { None }).collect() }
    }

    /// Values in `w` and continuous into `w` with its subspace topology.
    pub fn is_continuous_into(&self, tg: &TopGroupoid, w: Bits) -> bool {
        self.arrows().is_subset(w)
            && self.domain.iter().all(|x| {
                let target = tg.arrows.min_nbhd(self.at(x));
                tg.objects.min_nbhd(x).iter().all(|y| target.contains(self.at(y)))
            })
    }

    pub fn label(&self, g: &Groupoid) -> String {
        let parts: Vec<String> = self.domain.iter().map(|x| format!("{}↦{}", g.objects()[x], g.arrow_name(self.at(x)))).collect();
        format!("<{}>", parts.join(","))
    }
}

/// All admissible sections on `domain` with values in `values_in`.
pub fn admissible_sections(space: &FinSpace, g: &Groupoid, values_in: Bits, domain: Bits) -> Vec<AdmissibleSection> {
    let points: Vec<usize> = domain.iter().collect();
    let options: Vec<Vec<usize>> = points.iter().map(|&x| values_in.iter().filter(|&f| g.src(f) == x).collect()).collect();
    if options.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; points.len()];
    loop {
        let mut values = vec![None; space.len()];
        for (i, &x) in points.iter().enumerate() {
            values[x] = Some(options[i][digits[i]]);
        }
        let k = AdmissibleSection { domain, values };
        if k.check(space, g).is_ok() {
            out.push(k);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] < options[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Continuous admissible sections into `w` on `domain`.
pub fn continuous_sections(tg: &TopGroupoid, w: Bits, domain: Bits) -> Vec<AdmissibleSection> {
    admissible_sections(&tg.objects, &tg.groupoid, w, domain).into_iter().filter(|k| k.is_continuous_into(tg, w)).collect()
}

/// Continuous admissible sections into `w` through `arrow`, on the minimal
/// neighbourhood of its source; any section through `arrow` restricts to one of these.
pub fn sections_through(tg: &TopGroupoid, w: Bits, arrow: usize) -> Vec<AdmissibleSection> {
    let x = tg.groupoid.src(arrow);
    continuous_sections(tg, w, tg.objects.min_nbhd(x)).into_iter().filter(|k| k.at(x) == arrow).collect()
}

/// First arrow of `w` with no continuous admissible section through it, if any.
pub fn locally_sectionable(tg: &TopGroupoid, w: Bits) -> std::result::Result<(), usize> {
    match w.iter().find(|&f| sections_through(tg, w, f).is_empty()) {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::all_topologies;
    use proptest::prelude::*;

    #[test]
    fn identity_sections_are_admissible() {
        for sp in all_topologies(3) {
            let g = Groupoid::pair(sp.names());
            for &u in sp.opens() {
                let k = AdmissibleSection::identity(&g, u);
                k.check(&sp, &g).unwrap();
                assert_eq!(k.product(&g, &k), k);
            }
        }
    }

    #[test]
    fn discrete_pair_section_and_inverse() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let a21 = g.arrow("(2,1)").unwrap();
        let k = AdmissibleSection::new(&sp, &g, Bits::singleton(0), vec![Some(a21), None]).unwrap();
        let inv = k.inverse(&g);
        assert_eq!(inv.domain, Bits::singleton(1));
        inv.check(&sp, &g).unwrap();
        assert_eq!(inv.product(&g, &k), AdmissibleSection::identity(&g, Bits::singleton(0)));
    }

    #[test]
    fn swapping_sierpinski_points_is_not_a_homeomorphism() {
        let sp = FinSpace::sierpinski();
        let g = Groupoid::pair(sp.names());
        let ba = g.arrow("(b,a)").unwrap();
        let ab = g.arrow("(a,b)").unwrap();
        assert_eq!(AdmissibleSection::new(&sp, &g, sp.whole(), vec![Some(ba), Some(ab)]), Err(Error::NotAdmissible("homeo")));
        // a ↦ (b,a) lands on the non-open point b
        assert_eq!(AdmissibleSection::new(&sp, &g, Bits::singleton(0), vec![Some(ba), None]), Err(Error::NotAdmissible("openImage")));
        let aa = g.identity(0);
        assert_eq!(AdmissibleSection::new(&sp, &g, sp.whole(), vec![Some(aa), Some(aa)]), Err(Error::NotAdmissible("alpha")));
    }

    #[test]
    fn discrete_pair_is_locally_sectionable() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g.clone(), FinSpace::discrete(4), sp).unwrap();
        assert_eq!(locally_sectionable(&tg, g.all_arrows()), Ok(()));
    }

    fn all_sections(sp: &FinSpace, g: &Groupoid) -> Vec<AdmissibleSection> {
        sp.opens().iter().flat_map(|&u| admissible_sections(sp, g, g.all_arrows(), u)).collect()
    }

    proptest! {
        #[test]
        fn inverse_semigroup_laws(top in 0usize..29, i in 0usize..64, j in 0usize..64) {
            let sp = all_topologies(3).swap_remove(top);
            let g = Groupoid::pair(sp.names());
            let all = all_sections(&sp, &g);
            let k = &all[i % all.len()];
            let t = &all[j % all.len()];
            let kk = k.product(&g, &k.inverse(&g)).product(&g, k);
            prop_assert_eq!(&kk, k);
            let tk = t.product(&g, k);
            prop_assert!(tk.check(&sp, &g).is_ok());
            // idempotents k k⁻¹ and t t⁻¹ commute
            let e = k.product(&g, &k.inverse(&g));
            let f = t.product(&g, &t.inverse(&g));
            prop_assert_eq!(e.product(&g, &f), f.product(&g, &e));
            // (tk)⁻¹ = k⁻¹ t⁻¹
            prop_assert_eq!(tk.inverse(&g), k.inverse(&g).product(&g, &t.inverse(&g)));
        }
    }
}
