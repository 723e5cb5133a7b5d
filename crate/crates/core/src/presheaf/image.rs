//! Inverse image of sheaves and the hom-set bijection `Hom(f*G, F) ≅ Hom(G, f_*F)`.

use super::{EtaleSheaf, Section, SheafMorphism};
use crate::error::{Error, Result};
use crate::fintop::PointMap;

/// `f*G = {(x, σ) : f(x) = p(σ)}`, stalk at `x` equal to the stalk of `G` at `f(x)`.
pub fn inverse_image(f: &PointMap, sheaf: &EtaleSheaf) -> Result<EtaleSheaf> {
    if !f.is_continuous() {
        return Err(Error::NotContinuous("f".into()));
    }
    let stalks = f.map.iter().map(|&y| sheaf.stalk_size(y)).collect();
    let out = EtaleSheaf::from_fn(&f.source, stalks, |x, x2, e| sheaf.rho(f.map[x], f.map[x2])[e])?;
    let labels = f
        .map
        .iter()
        .map(|&y| (0..sheaf.stalk_size(y)).map(|e| sheaf.element_label(y, e)).collect())
        .collect();
    Ok(out.with_labels(labels))
}

/// A morphism `G → f_*F`, given on minimal neighbourhoods: `theta[y][σ]` is a section of
/// `F` over `f⁻¹(N(y))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardHom {
    pub theta: Vec<Vec<Section>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// `|Hom(f*G, F)|`
    pub left: usize,
    /// `|Hom(G, f_*F)|`
    pub right: usize,
    /// The explicit maps are mutually inverse and land in the right hom-sets.
    pub bijection: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.bijection
    }
}

/// Enumerates both hom-sets for `f : X → Y`, `F` on `X`, `G` on `Y`, and checks the
/// transpose maps between them.
pub fn check_adjunction(f: &PointMap, on_source: &EtaleSheaf, on_target: &EtaleSheaf) -> Result<AdjunctionReport> {
    let pulled = inverse_image(f, on_target)?;
    let left = pulled.homs(on_source);
    let right = pushforward_homs(f, on_target, on_source);

    let mut bijection = true;
    for eta in &left {
        let theta = transpose(f, on_target, eta);
        if !right.contains(&theta) || untranspose(f, on_target, &theta) != *eta {
            bijection = false;
        }
    }
    for theta in &right {
        let eta = untranspose(f, on_target, theta);
        if !left.contains(&eta) || transpose(f, on_target, &eta) != *theta {
            bijection = false;
        }
    }
    Ok(AdjunctionReport { left: left.len(), right: right.len(), bijection })
}

/// `η ↦ (σ ∈ G_y ↦ section x ↦ η_x(ρ(σ) at f(x)))` over `f⁻¹(N(y))`.
pub fn transpose(f: &PointMap, target: &EtaleSheaf, eta: &SheafMorphism) -> PushforwardHom {
    let ysp = &f.dest;
    let theta = (0..ysp.len())
        .map(|y| {
            let dom = f.preimage(ysp.min_nbhd(y));
            (0..target.stalk_size(y))
                .map(|sigma| {
                    let mut values = vec![None; f.source.len()];
                    for x in dom.iter() {
                        values[x] = Some(eta.maps[x][target.rho(y, f.map[x])[sigma]]);
                    }
                    Section { domain: dom, values }
                })
                .collect()
        })
        .collect();
    PushforwardHom { theta }
}

/// `θ ↦ ((x, σ) ↦ θ_{f(x)}(σ) at x)`.
pub fn untranspose(f: &PointMap, target: &EtaleSheaf, theta: &PushforwardHom) -> SheafMorphism {
    let maps = (0..f.source.len())
        .map(|x| {
            let y = f.map[x];
            (0..target.stalk_size(y)).map(|sigma| theta.theta[y][sigma].at(x)).collect()
        })
        .collect();
    SheafMorphism { maps }
}

/// Natural families `θ_y : G_y → Γ(f⁻¹N(y), F)`.
pub fn pushforward_homs(f: &PointMap, target: &EtaleSheaf, source: &EtaleSheaf) -> Vec<PushforwardHom> {
    let ysp = &f.dest;
    let n = ysp.len();
    let sections: Vec<Vec<Section>> = (0..n).map(|y| source.sections(f.preimage(ysp.min_nbhd(y)))).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<Section>> = vec![Vec::new(); n];
    pushforward_rec(f, target, &sections, 0, &mut cur, &mut out);
    out
}

fn pushforward_rec(
    f: &PointMap,
    target: &EtaleSheaf,
    sections: &[Vec<Section>],
    y: usize,
    cur: &mut Vec<Vec<Section>>,
    out: &mut Vec<PushforwardHom>,
) {
    let ysp = &f.dest;
    if y == ysp.len() {
        out.push(PushforwardHom { theta: cur.clone() });
        return;
    }
    let a = target.stalk_size(y);
    let b = sections[y].len();
    if a > 0 && b == 0 {
        return;
    }
    let total = b.pow(a as u32);
    for code in 0..total {
        let mut c = code;
        let choice: Vec<Section> = (0..a)
            .map(|_| {
                let v = c % b;
                c /= b;
                sections[y][v].clone()
            })
            .collect();
        let natural = (0..y).all(|z| {
            // z ∈ N(y): restricting θ_y(σ) to f⁻¹N(z) gives θ_z(ρ_yz σ); and symmetrically
            let fwd = !ysp.min_nbhd(y).contains(z)
                || (0..a).all(|s| {
                    choice[s].restrict(f.preimage(ysp.min_nbhd(z))) == cur[z][target.rho(y, z)[s]]
                });
            let back = !ysp.min_nbhd(z).contains(y)
                || (0..target.stalk_size(z)).all(|s| {
                    cur[z][s].restrict(f.preimage(ysp.min_nbhd(y))) == choice[target.rho(z, y)[s]]
                });
            fwd && back
        });
        if natural {
            cur[y] = choice;
            pushforward_rec(f, target, sections, y + 1, cur, out);
        }
    }
    cur[y] = Vec::new();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::FinSpace;
    use crate::presheaf::Presheaf;

    #[test]
    fn identity_pullback_is_isomorphic() {
        let sp = FinSpace::sierpinski();
        let sheaf = Presheaf::functions(&sp, 2).sheafify();
        let id = PointMap::identity(&sp);
        let pulled = inverse_image(&id, &sheaf).unwrap();
        assert!(pulled.is_isomorphic(&sheaf));
        assert!(pulled.projection_is_local_homeomorphism().unwrap());
    }

    #[test]
    fn adjunction_for_collapse_to_a_point() {
        let x = FinSpace::discrete(2);
        let pt = FinSpace::discrete(1);
        let f = PointMap::new(x.clone(), pt.clone(), vec![0, 0]).unwrap();
        let on_x = Presheaf::constant(&x, 2).sheafify();
        let on_pt = Presheaf::constant(&pt, 2).sheafify();
        let report = check_adjunction(&f, &on_x, &on_pt).unwrap();
        // maps from a 2-element stalk into two 2-element stalks: 4 * 4
        assert_eq!(report.left, 16);
        assert!(report.holds());
    }

    #[test]
    fn adjunction_on_sierpinski_inclusion() {
        let sp = FinSpace::sierpinski();
        let pt = FinSpace::discrete(1);
        let f = PointMap::new(pt.clone(), sp.clone(), vec![1]).unwrap();
        assert!(f.is_continuous());
        let g = Presheaf::functions(&sp, 2).sheafify();
        let h = Presheaf::constant(&pt, 2).sheafify();
        assert!(check_adjunction(&f, &h, &g).unwrap().holds());
    }
}
