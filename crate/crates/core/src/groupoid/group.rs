//! Finite groups given by multiplication tables.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    names: Vec<String>,
    mul: Vec<usize>,
    unit: usize,
    inv: Vec<usize>,
}

impl FinGroup {
    /// `mul[a * n + b] = ab`. Checks associativity, a two-sided unit and inverses.
    pub fn new(names: Vec<String>, mul: Vec<usize>) -> Result<FinGroup> {
        let n = names.len();
        let law = |law: &'static str, witness: String| Error::AxiomViolation { law, witness };
        if n == 0 || mul.len() != n * n || mul.iter().any(|&c| c >= n) {
            return Err(law("group table", format!("{} entries for {} elements", mul.len(), n)));
        }
        let m = |a: usize, b: usize| mul[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(law("group associativity", format!("{},{},{}", names[a], names[b], names[c])));
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| law("group unit", "none".into()))?;
        let inv = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| m(a, b) == unit && m(b, a) == unit)
                    .ok_or_else(|| law("group inverse", names[a].clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinGroup { names, mul, unit, inv })
    }

    /// `Z/n` with elements `e, g, g2, ..`.
    pub fn cyclic(n: usize) -> FinGroup {
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        let mul = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        FinGroup::new(names, mul).expect("cyclic group")
    }

    pub fn trivial() -> FinGroup {
        FinGroup::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }
}

/// A left action of a finite group on `0..points`: `table[g * points + x] = g·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub group: FinGroup,
    pub points: usize,
    pub table: Vec<usize>,
}

impl GroupAction {
    pub fn new(group: FinGroup, points: usize, table: Vec<usize>) -> Result<GroupAction> {
        let k = group.order();
        if table.len() != k * points || table.iter().any(|&y| y >= points) {
            return Err(Error::NotAction("table has the wrong shape".into()));
        }
        let act = |g: usize, x: usize| table[g * points + x];
        for x in 0..points {
            if act(group.unit(), x) != x {
                return Err(Error::NotAction(format!("unit moves point #{x}")));
            }
            for g in 0..k {
                for h in 0..k {
                    if act(group.mul(h, g), x) != act(h, act(g, x)) {
                        return Err(Error::NotAction(format!(
                            "({}{})·#{x} differs from {}·({}·#{x})",
                            group.name(h),
                            group.name(g),
                            group.name(h),
                            group.name(g)
                        )));
                    }
                }
            }
        }
        Ok(GroupAction { group, points, table })
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.points + x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        let z3 = FinGroup::cyclic(3);
        assert_eq!(z3.mul(1, 2), 0);
        assert_eq!(z3.inv(1), 2);
        assert_eq!(z3.name(2), "g2");
    }

    #[test]
    fn bad_table_is_rejected() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(FinGroup::new(names, vec![0, 0, 0, 1]).is_err());
    }

    #[test]
    fn swap_action() {
        let z2 = FinGroup::cyclic(2);
        GroupAction::new(z2.clone(), 2, vec![0, 1, 1, 0]).unwrap();
        assert!(matches!(GroupAction::new(z2, 2, vec![0, 1, 1, 1]), Err(Error::NotAction(_))));
    }
}
