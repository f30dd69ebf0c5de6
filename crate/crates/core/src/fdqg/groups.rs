use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted from files.
pub const MAX_ORDER: usize = 64;

/// Multiplication table of a finite group, 0-based, `table[g][h] = g·h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let g = GroupTable { order: table.len(), table };
        g.validate()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: GroupTable = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::Invalid(format!("group order {n} exceeds limit {MAX_ORDER}")));
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::NotAGroup("table is not order × order".into()));
        }
        if self.table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::NotAGroup("closure: entry out of range".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|g| self.table[e][g] == g && self.table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("identity: no two-sided unit".into()))?;
        for g in 0..n {
            if !(0..n).any(|h| self.table[g][h] == e && self.table[h][g] == e) {
                return Err(Error::NotAGroup(format!("inverses: element {g} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        (0..self.order).find(|&e| (0..self.order).all(|g| self.table[e][g] == g)).unwrap_or(0)
    }

    pub fn inverse(&self, g: usize) -> usize {
        let e = self.identity();
        (0..self.order).find(|&h| self.table[g][h] == e).unwrap_or(e)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn from_elements<T: PartialEq + Clone>(elements: &[T], op: impl Fn(&T, &T) -> T) -> Self {
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        let p = op(a, b);
                        elements.iter().position(|x| *x == p).expect("closed")
                    })
                    .collect()
            })
            .collect();
        GroupTable { order: elements.len(), table }
    }

    pub fn cyclic(n: usize) -> Self {
        let elems: Vec<usize> = (0..n).collect();
        Self::from_elements(&elems, |a, b| (a + b) % n)
    }

    /// Direct product; element `(a, b)` has index `a * other.order + b`.
    pub fn product(&self, other: &GroupTable) -> Self {
        let m = other.order;
        let n = self.order * m;
        let table = (0..n)
            .map(|x| (0..n).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        GroupTable { order: n, table }
    }

    /// Dihedral group of order `2n`: `r^k` at index `k`, `s r^k` at `n + k`.
    pub fn dihedral(n: usize) -> Self {
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|f| (0..n).map(move |k| (f, k))).collect();
        // (f, k) stands for s^f r^k; r^k s = s r^{-k}
        Self::from_elements(&elems, |&(f1, k1), &(f2, k2)| {
            let k = if f2 == 0 { (k1 + k2) % n } else { (n - k1 % n + k2) % n };
            ((f1 + f2) % 2, k)
        })
    }

    /// Quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // (sign, unit) with unit 0 = 1, 1 = i, 2 = j, 3 = k
        let elems: Vec<(i8, u8)> = [0u8, 1, 2, 3].iter().flat_map(|&u| [(1i8, u), (-1i8, u)]).collect();
        Self::from_elements(&elems, |&(s1, a), &(s2, b)| {
            let (s, u) = match (a, b) {
                (0, x) | (x, 0) => (1, x),
                (x, y) if x == y => (-1, 0),
                (1, 2) => (1, 3),
                (2, 3) => (1, 1),
                (3, 1) => (1, 2),
                (2, 1) => (-1, 3),
                (3, 2) => (-1, 1),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            };
            (s1 * s2 * s, u)
        })
    }

    /// Built-in groups by name: `Zn`, `Z2xZ2`, `Z4xZ2`, `Z2xZ2xZ2`, `S3`, `D3`, `D4`, `Q8`.
    pub fn builtin(name: &str) -> Result<Self> {
        let z = |n| GroupTable::cyclic(n);
        let g = match name {
            "Z2xZ2" => z(2).product(&z(2)),
            "Z4xZ2" => z(4).product(&z(2)),
            "Z2xZ2xZ2" => z(2).product(&z(2)).product(&z(2)),
            "S3" | "D3" => GroupTable::dihedral(3),
            "D4" => GroupTable::dihedral(4),
            "Q8" => GroupTable::quaternion(),
            _ => match name.strip_prefix('Z').and_then(|k| k.parse::<usize>().ok()) {
                Some(n) if (1..=MAX_ORDER).contains(&n) => z(n),
                _ => return Err(Error::Invalid(format!("unknown built-in group `{name}`"))),
            },
        };
        Ok(g)
    }

    /// Names of the built-in groups of order at most 8, one per isomorphism class.
    pub fn small_group_names() -> &'static [&'static str] {
        &["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2", "D4", "Q8"]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_groups() {
        for name in GroupTable::small_group_names() {
            let g = GroupTable::builtin(name).unwrap();
            g.validate().unwrap();
            assert_eq!(g.identity(), 0, "{name}");
        }
    }

    #[test]
    fn abelian_flags() {
        assert!(GroupTable::builtin("Z4xZ2").unwrap().is_abelian());
        assert!(!GroupTable::builtin("S3").unwrap().is_abelian());
        assert!(!GroupTable::builtin("D4").unwrap().is_abelian());
        assert!(!GroupTable::builtin("Q8").unwrap().is_abelian());
    }

    #[test]
    fn q8_and_d4_differ() {
        // count elements of order 2
        let invols = |g: &GroupTable| (1..8).filter(|&x| g.mul(x, x) == 0).count();
        assert_eq!(invols(&GroupTable::quaternion()), 1);
        assert_eq!(invols(&GroupTable::dihedral(4)), 5);
    }

    #[test]
    fn rejects_bad_tables() {
        let e = GroupTable::new(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(e, Error::NotAGroup(_)));
        assert!(GroupTable::new(vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(GroupTable::from_json(r#"{"order":2,"table":[[0,1],[1,0]]}"#).is_ok());
        assert!(GroupTable::from_json(r#"{"order":3,"table":[[0,1],[1,0]]}"#).is_err());
    }
}
