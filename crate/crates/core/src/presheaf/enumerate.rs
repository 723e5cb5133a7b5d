//! Exhaustive enumeration of small presheaves and sheaves.
//!
//! Presheaves are built open by open in increasing order, choosing maps only
//! to the maximal proper sub-opens and deriving every other restriction by
//! composition; a choice survives only if all composites agree. Sheaves are
//! built the same way on the specialization preorder of points.

use std::collections::HashSet;

use super::{EtaleSheaf, Presheaf};
use crate::bits::Bits;
use crate::fintop::FinSpace;

/// Calls `visit` on every presheaf on `space` with at most `max_size` elements per open.
/// With `up_to_iso`, one presheaf per isomorphism class (elements relabelled per open).
pub fn for_each_presheaf(space: &FinSpace, max_size: usize, up_to_iso: bool, mut visit: impl FnMut(&Presheaf)) {
    let opens = space.opens().to_vec();
    let m = opens.len();
    let children: Vec<Vec<usize>> = (0..m)
        .map(|u| {
            (0..m)
                .filter(|&v| {
                    v != u
                        && opens[v].is_subset(opens[u])
                        && !(0..m).any(|w| w != u && w != v && opens[v].is_subset(opens[w]) && opens[w].is_subset(opens[u]) && opens[w] != opens[v])
                })
                .collect()
        })
        .collect();
    let mut state = Builder {
        opens,
        children,
        max_size,
        sizes: vec![0; m],
        restr: vec![Vec::new(); m * m],
        seen: HashSet::new(),
        up_to_iso,
    };
    state.rec(space, 0, &mut visit);
}

struct Builder {
    opens: Vec<Bits>,
    children: Vec<Vec<usize>>,
    max_size: usize,
    sizes: Vec<usize>,
    restr: Vec<Vec<usize>>,
    seen: HashSet<Vec<u8>>,
    up_to_iso: bool,
}

impl Builder {
    fn m(&self) -> usize {
        self.opens.len()
    }

    fn rec(&mut self, space: &FinSpace, u: usize, visit: &mut dyn FnMut(&Presheaf)) {
        let m = self.m();
        if u == m {
            if self.up_to_iso {
                let code = self.canonical_code();
                if !self.seen.insert(code) {
                    return;
                }
            }
            let p = self.build(space);
            visit(&p);
            return;
        }
        for size in 0..=self.max_size {
            if size > 0 && self.children[u].iter().any(|&c| self.sizes[c] == 0) {
                break;
            }
            self.sizes[u] = size;
            self.restr[u * m + u] = (0..size).collect();
            let kids = self.children[u].clone();
            let mut choice = vec![0usize; kids.len()];
            loop {
                if self.assign_maps(u, &kids, &choice) {
                    self.rec(space, u + 1, visit);
                }
                if !advance(&mut choice, &kids.iter().map(|&c| self.sizes[c].pow(size as u32)).collect::<Vec<_>>()) {
                    break;
                }
            }
            for v in 0..m {
                if v != u {
                    self.restr[u * m + v].clear();
                }
            }
        }
    }

    /// Installs the chosen maps to each child and every derived composite; false on disagreement.
    fn assign_maps(&mut self, u: usize, kids: &[usize], choice: &[usize]) -> bool {
        let m = self.m();
        let size = self.sizes[u];
        let mut derived: Vec<Option<Vec<usize>>> = vec![None; m];
        for (k, &c) in kids.iter().enumerate() {
            let base = self.sizes[c];
            let mut code = choice[k];
            let map: Vec<usize> = (0..size)
                .map(|_| {
                    let v = code % base;
                    code /= base;
                    v
                })
                .collect();
            for w in 0..m {
                if !self.opens[w].is_subset(self.opens[c]) {
                    continue;
                }
                let composite: Vec<usize> = map.iter().map(|&e| self.restr[c * m + w][e]).collect();
                match &derived[w] {
                    None => derived[w] = Some(composite),
                    Some(prev) if *prev != composite => return false,
                    Some(_) => {}
                }
            }
        }
        for (w, d) in derived.into_iter().enumerate() {
            if let Some(map) = d {
                self.restr[u * m + w] = map;
            }
        }
        true
    }

    fn build(&self, space: &FinSpace) -> Presheaf {
        let m = self.m();
        let idx = |b: Bits| space.open_index(b).unwrap();
        Presheaf::from_fn(space, |u| self.sizes[idx(u)], |u, v, e| self.restr[idx(u) * m + idx(v)][e])
    }

    /// Lexicographically least encoding over all per-open relabellings.
    fn canonical_code(&self) -> Vec<u8> {
        let m = self.m();
        let perms: Vec<Vec<Vec<usize>>> = self.sizes.iter().map(|&s| crate::fintop::permutations(s)).collect();
        let mut choice = vec![0usize; m];
        let dims: Vec<usize> = perms.iter().map(Vec::len).collect();
        let mut best: Option<Vec<u8>> = None;
        loop {
            let mut code = Vec::new();
            for u in 0..m {
                code.push(self.sizes[u] as u8);
            }
            for u in 0..m {
                let pu = &perms[u][choice[u]];
                // inverse relabelling on the source side
                let mut inv = vec![0; pu.len()];
                for (i, &j) in pu.iter().enumerate() {
                    inv[j] = i;
                }
                for v in 0..m {
                    if !self.opens[v].is_subset(self.opens[u]) {
                        continue;
                    }
                    let pv = &perms[v][choice[v]];
                    for new_e in 0..self.sizes[u] {
                        code.push(pv[self.restr[u * m + v][inv[new_e]]] as u8);
                    }
                }
            }
            if best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
            if !advance(&mut choice, &dims) {
                break;
            }
        }
        best.unwrap_or_default()
    }
}

/// Mixed-radix increment; false once every digit has wrapped.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Calls `visit` on every sheaf on `space` with stalks of size at most `max_stalk`,
/// optionally one per isomorphism class.
pub fn for_each_sheaf(space: &FinSpace, max_stalk: usize, up_to_iso: bool, mut visit: impl FnMut(&EtaleSheaf)) {
    let n = space.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| space.min_nbhd(x).iter().filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut sizes = vec![0usize; n];
    let mut seen = HashSet::new();
    loop {
        let feasible = pairs.iter().all(|&(x, y)| sizes[x] == 0 || sizes[y] > 0);
        if feasible {
            let radix: Vec<usize> = pairs.iter().map(|&(x, y)| sizes[y].pow(sizes[x] as u32)).collect();
            let mut choice = vec![0usize; pairs.len()];
            loop {
                let mut table = vec![Vec::new(); n * n];
                for x in 0..n {
                    table[x * n + x] = (0..sizes[x]).collect();
                }
                for (k, &(x, y)) in pairs.iter().enumerate() {
                    let mut c = choice[k];
                    table[x * n + y] = (0..sizes[x])
                        .map(|_| {
                            let v = c % sizes[y];
                            c /= sizes[y];
                            v
                        })
                        .collect();
                }
                if let Ok(sheaf) = EtaleSheaf::from_table(space, sizes.clone(), table) {
                    if !up_to_iso || seen.insert(sheaf_code(&sheaf)) {
                        visit(&sheaf);
                    }
                }
                if !advance(&mut choice, &radix) {
                    break;
                }
            }
        }
        if !advance(&mut sizes, &vec![max_stalk + 1; n]) {
            break;
        }
    }
}

fn sheaf_code(sheaf: &EtaleSheaf) -> Vec<u8> {
    let sp = sheaf.space();
    let n = sp.len();
    let perms: Vec<Vec<Vec<usize>>> = (0..n).map(|x| crate::fintop::permutations(sheaf.stalk_size(x))).collect();
    let dims: Vec<usize> = perms.iter().map(Vec::len).collect();
    let mut choice = vec![0usize; n];
    let mut best: Option<Vec<u8>> = None;
    loop {
        let mut code: Vec<u8> = sheaf.stalk_sizes().iter().map(|&s| s as u8).collect();
        for x in 0..n {
            let px = &perms[x][choice[x]];
            let mut inv = vec![0; px.len()];
            for (i, &j) in px.iter().enumerate() {
                inv[j] = i;
            }
            for y in sp.min_nbhd(x).iter() {
                let py = &perms[y][choice[y]];
                for e in 0..sheaf.stalk_size(x) {
                    code.push(py[sheaf.rho(x, y)[inv[e]]] as u8);
                }
            }
        }
        if best.as_ref().map_or(true, |b| code < *b) {
            best = Some(code);
        }
        if !advance(&mut choice, &dims) {
            break;
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::all_topologies;

    #[test]
    fn presheaves_on_a_point() {
        // sizes (F(∅), F(pt)) with maps F(pt) → F(∅)
        let sp = FinSpace::discrete(1);
        let mut count = 0;
        for_each_presheaf(&sp, 2, false, |p| {
            p.validate().unwrap();
            count += 1;
        });
        // (0,0) 1; (1,0..2) 1+1+1; (2,0) 1, (2,1) 2, (2,2) 4
        assert_eq!(count, 1 + 3 + 1 + 2 + 4);
        let mut iso = 0;
        for_each_presheaf(&sp, 2, true, |_| iso += 1);
        // (2,1): both maps constant, relabelling F(∅) identifies them; (2,2): id/swap vs constants
        assert_eq!(iso, 1 + 3 + 1 + 1 + 2);
    }

    #[test]
    fn enumerated_presheaves_are_valid() {
        for sp in all_topologies(2) {
            for_each_presheaf(&sp, 2, false, |p| p.validate().unwrap());
        }
    }

    #[test]
    fn sheaves_on_sierpinski() {
        let sp = FinSpace::sierpinski();
        let mut count = 0;
        // sheaves = maps F_b → F_a
        for_each_sheaf(&sp, 2, false, |_| count += 1);
        assert_eq!(count, 3 + 1 + 2 + 1 + 4);
        let mut iso = 0;
        for_each_sheaf(&sp, 2, true, |_| iso += 1);
        assert!(iso < count);
    }
}
