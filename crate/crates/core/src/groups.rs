//! Finite groups given by multiplication tables.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a table where `table[a][b]` is the index of `a·b`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Malformed("group table is empty".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::Malformed("group table is not square".into()));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::Malformed("group table entry out of range".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Malformed("group table has no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Malformed(format!("group table is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity)
                .ok_or_else(|| Error::Malformed(format!("element {a} has no inverse")))?;
        }
        Ok(Self { table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is valid")
    }

    /// Direct product; the pair `(a, b)` has index `a * |H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (n, m) = (g.order(), h.order());
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).collect())
            .collect();
        Self::from_table(table).expect("product table is valid")
    }

    /// Symmetric group on three letters; permutations listed lexicographically,
    /// `(a·b)(x) = a(b(x))`.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        Self::from_table(table).expect("S3 table is valid")
    }

    /// Groups available by name: `Z2`, `Z3`, `Z4`, `Z2xZ2`, `S3`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "Z2" => Some(Self::cyclic(2)),
            "Z3" => Some(Self::cyclic(3)),
            "Z4" => Some(Self::cyclic(4)),
            "Z2xZ2" => Some(Self::product(&Self::cyclic(2), &Self::cyclic(2))),
            "S3" => Some(Self::s3()),
            _ => None,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// All subgroups as sorted element lists, ordered by size then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut found: Vec<Vec<usize>> = Vec::new();
        // every subgroup of a group this small is generated by at most two elements
        for a in 0..n {
            for b in a..n {
                let mut set = vec![self.identity, a, b];
                loop {
                    let mut grown = set.clone();
                    for &x in &set {
                        for &y in &set {
                            let z = self.mul(x, y);
                            if !grown.contains(&z) {
                                grown.push(z);
                            }
                        }
                    }
                    if grown.len() == set.len() {
                        break;
                    }
                    set = grown;
                }
                set.sort_unstable();
                set.dedup();
                if !found.contains(&set) {
                    found.push(set);
                }
            }
        }
        found.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_nonabelian_of_order_six() {
        let g = FiniteGroup::s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        assert!((0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a))));
        assert_eq!(g.subgroups().len(), 6);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::cyclic(4).subgroups().len(), 3);
        assert_eq!(FiniteGroup::builtin("Z2xZ2").unwrap().subgroups().len(), 5);
        assert_eq!(FiniteGroup::cyclic(3).subgroups().len(), 2);
    }

    #[test]
    fn invalid_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]]).is_err());
    }
}
