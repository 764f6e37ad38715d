//! Finite groups given by validated multiplication tables.
//!
//! Elements are dense indices `0..order`. The identity and inverses are always
//! recomputed from the table; the constructors in this module happen to put the
//! identity at index 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on group order. `G^n` tables grow as `order^n`.
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

/// On-disk form. Identity and inverses are never read from a file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// The cyclic group `Z_n` under addition mod `n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group order must be positive".into()));
        }
        check_cap(n, DEFAULT_MAX_ORDER)?;
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(table)
    }

    /// The dihedral group of order `2n`: element `r^i` is `i`, `s r^i` is `n + i`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dihedral parameter must be positive".into()));
        }
        check_cap(2 * n, DEFAULT_MAX_ORDER)?;
        let decode = |x: usize| (x / n, x % n);
        let encode = |s: usize, r: usize| s * n + r;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (s1, r1) = decode(a);
                let (s2, r2) = decode(b);
                // s^s1 r^r1 s^s2 r^r2 = s^(s1+s2) r^(±r1 + r2)
                let r = if s2 == 0 { (r1 + r2) % n } else { (n - r1 + r2) % n };
                table[a][b] = encode((s1 + s2) % 2, r);
            }
        }
        Self::from_table(table)
    }

    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_limit(table, DEFAULT_MAX_ORDER)
    }

    /// Validates closure, identity, inverses and associativity (exhaustively).
    pub fn from_table_with_limit(table: Vec<Vec<usize>>, max_order: usize) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        check_cap(order, max_order)?;
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Shape(format!("row {i} has length {} (expected {order})", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::NotAGroup(format!("entry {bad} in row {i} is out of range")));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|i| at(e, i) == i && at(i, e) == i))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;

        let mut inverse = Vec::with_capacity(order);
        for i in 0..order {
            let inv = (0..order)
                .find(|&j| at(i, j) == identity && at(j, i) == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {i} has no inverse")))?;
            inverse.push(inv);
        }

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }

        Ok(FiniteGroup { order, table: flat, identity, inverse })
    }

    /// Componentwise product; the pair `(g, h)` is element `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let order = g.order * h.order;
        check_cap(order, DEFAULT_MAX_ORDER)?;
        let mut table = vec![vec![0; order]; order];
        for a in 0..order {
            for b in 0..order {
                let (a1, a2) = (a / h.order, a % h.order);
                let (b1, b2) = (b / h.order, b % h.order);
                table[a][b] = g.mul(a1, b1) * h.order + h.mul(a2, b2);
            }
        }
        Self::from_table(table)
    }

    pub fn from_json(json: &GroupJson) -> Result<Self> {
        if json.order != json.table.len() {
            return Err(Error::Shape(format!(
                "declared order {} but table has {} rows",
                json.order,
                json.table.len()
            )));
        }
        Self::from_table(json.table.clone())
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { order: self.order, table: self.table_rows() }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Product `x_1 x_2 ... x_k` (identity for the empty word).
    pub fn product(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
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

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }
}

fn check_cap(order: usize, max_order: usize) -> Result<()> {
    if order > max_order {
        return Err(Error::TooLarge(format!("group order {order} exceeds the cap {max_order}")));
    }
    Ok(())
}

/// Row-major enumeration of `G^n`; tuple `(x_1, ..., x_n)` has index
/// `sum x_i * order^(n-i)`. `G^0` has the single empty tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleSpace {
    pub order: usize,
    pub degree: usize,
}

impl TupleSpace {
    pub fn new(order: usize, degree: usize) -> Self {
        TupleSpace { order, degree }
    }

    pub fn len(&self) -> usize {
        self.order.pow(self.degree as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, xs: &[usize]) -> usize {
        debug_assert_eq!(xs.len(), self.degree);
        xs.iter().fold(0, |acc, &x| acc * self.order + x)
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut xs = vec![0; self.degree];
        for slot in xs.iter_mut().rev() {
            *slot = idx % self.order;
            idx /= self.order;
        }
        xs
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |i| self.tuple(i))
    }
}

/// `(x_1, ..., x_i x_{i+1}, ..., x_n)` for `1 <= i < n` (1-based, as in the
/// coboundary formula).
pub fn glue(group: &FiniteGroup, xs: &[usize], i: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(xs.len() - 1);
    out.extend_from_slice(&xs[..i - 1]);
    out.push(group.mul(xs[i - 1], xs[i]));
    out.extend_from_slice(&xs[i + 1..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(g: &FiniteGroup, a: usize) -> usize {
        (1..=g.order()).find(|&k| (0..k).fold(g.identity(), |acc, _| g.mul(acc, a)) == g.identity()).unwrap()
    }

    #[test]
    fn cyclic_small_cases() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().table_rows(), vec![vec![0]]);
        assert_eq!(FiniteGroup::cyclic(2).unwrap().table_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(FiniteGroup::cyclic(3).unwrap().inverse_table(), &[0, 2, 1]);
        assert!(matches!(FiniteGroup::cyclic(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn from_table_cases() {
        let z2 = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2, FiniteGroup::cyclic(2).unwrap());

        let klein = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
        let v4 = FiniteGroup::from_table(klein).unwrap();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.inverse_table(), &[0, 1, 2, 3]);

        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(ref m) if m.contains("element 1 has no inverse")), "{err}");
    }

    #[test]
    fn identity_detected_away_from_zero() {
        // Z_2 with the identity stored at index 1.
        let g = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inv(0), 0);
    }

    #[test]
    fn non_associative_table_rejected() {
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(t).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(ref m) if m.contains("associativity")), "{err}");
    }

    #[test]
    fn direct_products() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let v4 = FiniteGroup::direct_product(&z2, &z2).unwrap();
        assert!((0..4).all(|a| v4.inv(a) == a));

        let triv = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(FiniteGroup::direct_product(&z3, &triv).unwrap().table_rows(), z3.table_rows());

        let z6 = FiniteGroup::direct_product(&z2, &z3).unwrap();
        let one_one = 3 + 1;
        assert_eq!(brute_order(&z6, one_one), 6);
        assert_eq!(z6.element_order(one_one), 6);
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(FiniteGroup::cyclic(65), Err(Error::TooLarge(_))));
        assert!(FiniteGroup::from_table_with_limit(FiniteGroup::cyclic(3).unwrap().table_rows(), 2).is_err());
    }

    #[test]
    fn dihedral_is_nonabelian_group() {
        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(!d3.is_abelian());
        assert_eq!(d3.element_order(3), 2);
        assert_eq!(d3.element_order(1), 3);
    }

    #[test]
    fn tuple_space_round_trip() {
        let ts = TupleSpace::new(3, 2);
        assert_eq!(ts.len(), 9);
        assert_eq!(ts.index(&[1, 2]), 5);
        assert_eq!(ts.tuple(5), vec![1, 2]);
        assert_eq!(TupleSpace::new(4, 0).iter().collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }
}
