//! The holonomy groupoid: germs of products of continuous `W`-valued admissible
//! sections, modulo the normal closure of the `W`-germs with identity value.

use std::collections::HashMap;

use super::locally_top::check_locally_top;
use super::sections::{continuous_sections, sections_through, AdmissibleSection};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, TopGroupoid};

/// A section germ at `point`, stored as the section restricted to `N(point)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectionGerm {
    pub point: usize,
    pub section: AdmissibleSection,
}

impl SectionGerm {
    pub fn of(tg: &TopGroupoid, k: &AdmissibleSection, x: usize) -> SectionGerm {
        SectionGerm { point: x, section: k.restrict(tg.objects.min_nbhd(x)) }
    }

    /// `ψ[k]_x = k(x)`.
    pub fn value(&self) -> usize {
        self.section.at(self.point)
    }

    pub fn target(&self, g: &Groupoid) -> usize {
        self.section.target(g, self.point)
    }
}

/// One letter of a representative word: a generator germ, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolArrow {
    pub src: usize,
    pub tgt: usize,
    /// `φ` of the class.
    pub phi: usize,
    /// Smallest germ index in the class.
    pub representative: usize,
}

#[derive(Clone, Debug)]
pub struct HolonomyGroupoid {
    pub tg: TopGroupoid,
    pub h: Bits,
    pub w: Bits,
    /// `J^c(H,W)`; the first `generator_count` entries are the germs of `Γ^c(W)`.
    pub germs: Vec<SectionGerm>,
    pub generator_count: usize,
    /// A word over the generators producing each germ.
    pub words: Vec<Vec<Letter>>,
    /// Membership of each germ in `J_0`.
    pub normal: Vec<bool>,
    /// Whether the `W`-germs with identity value were already a normal subgroupoid.
    pub literal_kernel_normal: bool,
    pub class_of: Vec<usize>,
    pub classes: Vec<HolArrow>,
    index: HashMap<SectionGerm, usize>,
}

impl HolonomyGroupoid {
    fn g(&self) -> &Groupoid {
        &self.tg.groupoid
    }

    pub fn germ_index(&self, germ: &SectionGerm) -> Option<usize> {
        self.index.get(germ).copied()
    }

    fn product(&self, a: usize, b: usize) -> usize {
        self.index[&product(self.g(), &self.germs[a], &self.germs[b]).expect("composable")]
    }

    fn inverse(&self, a: usize) -> usize {
        self.index[&inverse(self.g(), &self.germs[a])]
    }

    /// Class of the germ at `x` of a section in `J^c(H,W)`.
    pub fn class_of_section(&self, k: &AdmissibleSection, x: usize) -> Option<usize> {
        self.germ_index(&SectionGerm::of(&self.tg, k, x)).map(|i| self.class_of[i])
    }

    /// `i(w)`: the class of the first continuous section through `w`.
    pub fn embed(&self, w: usize) -> Result<usize> {
        let through = sections_through(&self.tg, self.w, w);
        let k = through.first().ok_or_else(|| Error::SectionSearchExhausted(self.g().arrow_name(w).to_string()))?;
        Ok(self.class_of_section(k, self.g().src(w)).expect("W-germs are generators"))
    }

    /// Class product `c∘d`, defined when `src c = tgt d`.
    pub fn compose(&self, c: usize, d: usize) -> Option<usize> {
        (self.classes[c].src == self.classes[d].tgt)
            .then(|| self.class_of[self.product(self.classes[c].representative, self.classes[d].representative)])
    }

    pub fn word_label(&self, germ: usize) -> String {
        let parts: Vec<String> = self.words[germ]
            .iter()
            .map(|l| {
                let gen = &self.germs[l.generator];
                let label = format!("{}@{}", gen.section.label(self.g()), self.g().objects()[gen.point]);
                if l.inverse {
                    format!("({label})⁻¹")
                } else {
                    label
                }
            })
            .collect();
        parts.join(" · ")
    }

    /// The quotient as a groupoid with arrows named `⟨c⟩`, and `φ` as an arrow map.
    pub fn to_groupoid(&self) -> Result<(Groupoid, Vec<usize>)> {
        let n = self.classes.len();
        if n > Bits::CAPACITY {
            return Err(Error::TooLarge { what: "holonomy groupoid", got: n, limit: Bits::CAPACITY });
        }
        let g = self.g();
        let ident: Vec<usize> = (0..g.object_count()).map(|x| self.class_of[self.identity_germ(x)]).collect();
        let inv: Vec<usize> = (0..n).map(|c| self.class_of[self.inverse(self.classes[c].representative)]).collect();
        let hol = Groupoid::from_fn(
            g.objects().to_vec(),
            self.classes.iter().enumerate().map(|(c, a)| (format!("<{c}>"), a.src, a.tgt)).collect(),
            |c, d| self.compose(c, d).expect("composable"),
            |x| ident[x],
            |c| inv[c],
        )?;
        Ok((hol, self.classes.iter().map(|a| a.phi).collect()))
    }

    fn identity_germ(&self, x: usize) -> usize {
        self.index[&SectionGerm::of(&self.tg, &AdmissibleSection::identity(self.g(), self.tg.objects.min_nbhd(x)), x)]
    }

    /// Every verdict required of the construction.
    pub fn check(&self) -> HolonomyCheck {
        let g = self.g();
        let n = self.classes.len();
        let mut quotient_well_defined = true;
        let mut phi_morphism = true;
        for a in 0..self.germs.len() {
            for b in 0..self.germs.len() {
                if self.germs[a].point != self.germs[b].target(g) {
                    continue;
                }
                let ab = self.product(a, b);
                let (ca, cb) = (self.class_of[a], self.class_of[b]);
                if self.compose(ca, cb) != Some(self.class_of[ab]) {
                    quotient_well_defined = false;
                }
                if g.compose(self.classes[ca].phi, self.classes[cb].phi) != Some(self.classes[self.class_of[ab]].phi) {
                    phi_morphism = false;
                }
            }
        }
        for c in 0..n {
            let id = self.class_of[self.identity_germ(self.classes[c].src)];
            if self.classes[id].phi != g.identity(self.classes[c].src) {
                phi_morphism = false;
            }
        }
        let object_fixing = self.classes.iter().all(|a| g.src(a.phi) == a.src && g.tgt(a.phi) == a.tgt);
        let image: Bits = self.classes.iter().map(|a| a.phi).collect();
        let phi_surjective = image == self.h;
        let embedding = self.w.iter().all(|w| self.embed(w).map(|c| self.classes[c].phi == w).unwrap_or(false));
        let kernel_totally_disconnected = (0..self.germs.len()).filter(|&i| self.normal[i]).all(|i| self.germs[i].target(g) == self.germs[i].point);
        let lemma = lemma_germ_independence(self);
        HolonomyCheck {
            classes: n,
            germs: self.germs.len(),
            quotient_well_defined,
            phi_morphism,
            object_fixing,
            phi_surjective,
            phi_bijective: phi_surjective && n == self.h.len(),
            embedding,
            kernel_totally_disconnected,
            literal_kernel_normal: self.literal_kernel_normal,
            lemma_counterexamples: lemma.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyCheck {
    pub classes: usize,
    pub germs: usize,
    pub quotient_well_defined: bool,
    pub phi_morphism: bool,
    pub object_fixing: bool,
    pub phi_surjective: bool,
    pub phi_bijective: bool,
    /// `φ∘i = id_W`.
    pub embedding: bool,
    pub kernel_totally_disconnected: bool,
    pub literal_kernel_normal: bool,
    pub lemma_counterexamples: usize,
}

impl HolonomyCheck {
    pub fn holds(&self) -> bool {
        self.quotient_well_defined
            && self.phi_morphism
            && self.object_fixing
            && self.phi_surjective
            && self.embedding
            && self.kernel_totally_disconnected
            && self.lemma_counterexamples == 0
    }
}

fn product(g: &Groupoid, t: &SectionGerm, k: &SectionGerm) -> Option<SectionGerm> {
    (t.point == k.target(g)).then(|| SectionGerm { point: k.point, section: t.section.product(g, &k.section) })
}

fn inverse(g: &Groupoid, k: &SectionGerm) -> SectionGerm {
    SectionGerm { point: k.target(g), section: k.section.inverse(g) }
}

/// Builds `Hol` for a pair passing the locally topological checks.
pub fn holonomy_groupoid(tg: &TopGroupoid, h: Bits, w: Bits) -> Result<HolonomyGroupoid> {
    if !check_locally_top(tg, h, w).holds() {
        return Err(Error::NotLocallyTop);
    }
    let g = &tg.groupoid;
    let mut germs: Vec<SectionGerm> = Vec::new();
    for x in 0..g.object_count() {
        let nx = tg.objects.min_nbhd(x);
        for k in continuous_sections(tg, w, nx) {
            germs.push(SectionGerm { point: x, section: k });
        }
    }
    if let Some(f) = w.iter().find(|&f| !germs.iter().any(|k| k.point == g.src(f) && k.value() == f)) {
        return Err(Error::SectionSearchExhausted(g.arrow_name(f).to_string()));
    }
    let generator_count = germs.len();
    let mut index: HashMap<SectionGerm, usize> = germs.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut words: Vec<Vec<Letter>> = (0..generator_count).map(|i| vec![Letter { generator: i, inverse: false }]).collect();

    // close under inverse and product
    let mut push = |germ: SectionGerm, word: Vec<Letter>, germs: &mut Vec<SectionGerm>, words: &mut Vec<Vec<Letter>>| {
        if !index.contains_key(&germ) {
            index.insert(germ.clone(), germs.len());
            germs.push(germ);
            words.push(word);
        }
    };
    let mut done = 0;
    while done < germs.len() {
        let a = done;
        done += 1;
        let inv = inverse(g, &germs[a]);
        let word = words[a].iter().rev().map(|l| Letter { generator: l.generator, inverse: !l.inverse }).collect();
        push(inv, word, &mut germs, &mut words);
        for b in 0..germs.len() {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(p) = product(g, &germs[x], &germs[y]) {
                    let word = words[x].iter().chain(words[y].iter()).copied().collect();
                    push(p, word, &mut germs, &mut words);
                }
            }
        }
    }
    let index: HashMap<SectionGerm, usize> = germs.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let prod = |a: usize, b: usize| product(g, &germs[a], &germs[b]).map(|p| index[&p]);
    let inv = |a: usize| index[&inverse(g, &germs[a])];

    let literal: Vec<bool> = (0..germs.len()).map(|i| i < generator_count && g.is_identity(germs[i].value())).collect();
    let is_closed = |set: &[bool]| -> bool {
        let members: Vec<usize> = (0..germs.len()).filter(|&i| set[i]).collect();
        members.iter().all(|&n| set[inv(n)])
            && members.iter().all(|&n| members.iter().all(|&m| prod(n, m).map_or(true, |p| set[p])))
            && members.iter().all(|&n| {
                (0..germs.len()).filter(|&a| germs[a].point == germs[n].point).all(|a| set[prod(prod(a, n).expect("composable"), inv(a)).expect("composable")])
            })
    };
    let literal_kernel_normal = is_closed(&literal);

    let mut normal = literal.clone();
    loop {
        let members: Vec<usize> = (0..germs.len()).filter(|&i| normal[i]).collect();
        let mut added = false;
        let mut add = |i: usize, normal: &mut Vec<bool>| {
            if !normal[i] {
                normal[i] = true;
                added = true;
            }
        };
        for &n in &members {
            add(inv(n), &mut normal);
            for &m in &members {
                if let Some(p) = prod(n, m) {
                    add(p, &mut normal);
                }
            }
            for a in (0..germs.len()).filter(|&a| germs[a].point == germs[n].point) {
                add(prod(prod(a, n).expect("composable"), inv(a)).expect("composable"), &mut normal);
            }
        }
        if !added {
            break;
        }
    }

    // a ~ b iff b⁻¹a ∈ J_0
    let mut class_of = vec![usize::MAX; germs.len()];
    let mut classes = Vec::new();
    for a in 0..germs.len() {
        if class_of[a] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let (src, tgt) = (germs[a].point, germs[a].target(g));
        for b in a..germs.len() {
            if germs[b].point == src && germs[b].target(g) == tgt && normal[prod(inv(b), a).expect("same target")] {
                class_of[b] = c;
            }
        }
        classes.push(HolArrow { src, tgt, phi: germs[a].value(), representative: a });
    }

    Ok(HolonomyGroupoid { tg: tg.clone(), h, w, germs, generator_count, words, normal, literal_kernel_normal, class_of, classes, index })
}

/// Pairs of sections through the same `w` whose germs land in different classes.
pub fn lemma_germ_independence(hol: &HolonomyGroupoid) -> Vec<(usize, AdmissibleSection, AdmissibleSection)> {
    let g = hol.g();
    let mut out = Vec::new();
    for w in hol.w.iter() {
        let through = sections_through(&hol.tg, hol.w, w);
        let x = g.src(w);
        for (i, s) in through.iter().enumerate() {
            for t in &through[i + 1..] {
                if hol.class_of_section(s, x) != hol.class_of_section(t, x) {
                    out.push((w, s.clone(), t.clone()));
                }
            }
        }
    }
    out
}

/// `σ_k(w) = ⟨k⟩_{β w}⟨f⟩_{α w}` for `f` through `w`. `None` when `β w` is outside
/// the domain of `k` or when two choices of `f` disagree.
pub fn sigma_chart_value(hol: &HolonomyGroupoid, k: &AdmissibleSection, w: usize) -> Option<usize> {
    let g = hol.g();
    if !k.domain.contains(g.tgt(w)) {
        return None;
    }
    let kb = hol.germ_index(&SectionGerm::of(&hol.tg, k, g.tgt(w)))?;
    let mut value = None;
    for f in sections_through(&hol.tg, hol.w, w) {
        let fa = hol.germ_index(&SectionGerm::of(&hol.tg, &f, g.src(w)))?;
        let c = hol.class_of[hol.product(kb, fa)];
        match value {
            None => value = Some(c),
            Some(v) if v != c => return None,
            _ => {}
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::{all_topologies, FinSpace};

    #[test]
    fn diagonal_holonomy_is_the_null_groupoid() {
        for sp in all_topologies(3) {
            let tg = TopGroupoid::pair(&sp);
            let ids = tg.groupoid.identities();
            let hol = holonomy_groupoid(&tg, ids, ids).unwrap();
            let check = hol.check();
            assert!(check.holds(), "{check:?}");
            assert!(check.phi_bijective);
            assert_eq!(check.classes, 3);
            assert!(hol.normal.iter().all(|&n| n));
            let (gpd, phi) = hol.to_groupoid().unwrap();
            assert_eq!(gpd.arrow_count(), 3);
            assert_eq!(phi, (0..3).map(|x| tg.groupoid.identity(x)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn discrete_pair_holonomy_is_the_pair_groupoid() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g.clone(), FinSpace::discrete(4), sp).unwrap();
        let all = g.all_arrows();
        let hol = holonomy_groupoid(&tg, all, all).unwrap();
        let check = hol.check();
        assert!(check.holds() && check.phi_bijective, "{check:?}");
        // the two sections through (2,1) have domain {1}; their germs coincide
        let a21 = g.arrow("(2,1)").unwrap();
        assert_eq!(sections_through(&tg, all, a21).len(), 1);
        let (gpd, _) = hol.to_groupoid().unwrap();
        assert_eq!(gpd.arrow_count(), 4);
    }

    #[test]
    fn sigma_of_identity_section_is_the_embedding() {
        let sp = FinSpace::discrete(2);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g.clone(), FinSpace::discrete(4), sp.clone()).unwrap();
        let all = g.all_arrows();
        let hol = holonomy_groupoid(&tg, all, all).unwrap();
        let id = AdmissibleSection::identity(&g, sp.whole());
        for w in all.iter() {
            assert_eq!(sigma_chart_value(&hol, &id, w), Some(hol.embed(w).unwrap()));
        }
    }

    #[test]
    fn words_evaluate_to_their_germs() {
        let sp = FinSpace::discrete(3);
        let g = Groupoid::pair(sp.names());
        let tg = TopGroupoid::new(g.clone(), FinSpace::discrete(9), sp).unwrap();
        let w = g.identities() | g.arrow_set(&["(2,1)".into(), "(1,2)".into(), "(3,2)".into(), "(2,3)".into()]).unwrap();
        let hol = holonomy_groupoid(&tg, g.all_arrows(), w).unwrap();
        for (i, word) in hol.words.iter().enumerate() {
            let mut acc: Option<SectionGerm> = None;
            for l in word.iter().rev() {
                let gen = &hol.germs[l.generator];
                let letter = if l.inverse { inverse(&g, gen) } else { gen.clone() };
                acc = Some(match acc {
                    None => letter,
                    Some(k) => product(&g, &letter, &k).unwrap(),
                });
            }
            assert_eq!(acc.as_ref(), Some(&hol.germs[i]));
        }
        assert!(hol.check().holds());
    }

    #[test]
    fn not_locally_topological_is_rejected() {
        let tg = TopGroupoid::pair(&FinSpace::sierpinski());
        let all = tg.groupoid.all_arrows();
        assert!(matches!(holonomy_groupoid(&tg, all, all), Err(Error::NotLocallyTop)));
    }
}
