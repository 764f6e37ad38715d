//! Finite products of residue rings `Z_{p^k}`, their unital ideals and unit groups.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 16;
pub const MAX_BLOCKS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub modulus: u64,
    pub prime: u64,
    pub exponent: u32,
}

impl Block {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!("block modulus {modulus} must be at least 2")));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::TooLarge(format!("block modulus {modulus} exceeds {MAX_MODULUS}")));
        }
        let prime = smallest_prime_factor(modulus);
        let mut m = modulus;
        let mut exponent = 0;
        while m % prime == 0 {
            m /= prime;
            exponent += 1;
        }
        if m != 1 {
            return Err(Error::InvalidParameter(format!("block modulus {modulus} is not a prime power")));
        }
        Ok(Block { modulus, prime, exponent })
    }

    pub fn is_unit(&self, r: u64) -> bool {
        r % self.prime != 0
    }

    /// Euler phi of the modulus.
    pub fn unit_count(&self) -> u64 {
        self.modulus / self.prime * (self.prime - 1)
    }

    /// Independent generators of `U(Z_m)` with their orders. Order-1 factors are omitted.
    pub fn unit_generators(&self) -> Vec<(u64, u64)> {
        let m = self.modulus;
        if self.prime != 2 {
            let phi = self.unit_count();
            let g = (2..m).find(|&g| self.is_unit(g) && mult_order(g, m) == phi).expect("cyclic unit group");
            vec![(g, phi)]
        } else {
            match self.exponent {
                1 => vec![],
                2 => vec![(3, 2)],
                k => vec![(m - 1, 2), (5, 1 << (k - 2))],
            }
        }
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

fn mult_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = x * g % m;
        k += 1;
    }
    k
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Inverse of a unit `r` mod `m` via the extended Euclidean algorithm.
pub fn inv_mod(r: u64, m: u64) -> Option<u64> {
    let e = (r as i64).extended_gcd(&(m as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i64) as u64)
}

/// A set of block indices, stored as a bitmask. The ideal is `e A` with `e` the
/// idempotent that is 1 exactly on these blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ideal(pub u64);

impl Ideal {
    pub const ZERO: Ideal = Ideal(0);

    pub fn full(blocks: usize) -> Ideal {
        if blocks >= 64 {
            Ideal(u64::MAX)
        } else {
            Ideal((1u64 << blocks) - 1)
        }
    }

    pub fn from_blocks<I: IntoIterator<Item = usize>>(it: I) -> Ideal {
        Ideal(it.into_iter().fold(0, |acc, b| acc | (1u64 << b)))
    }

    pub fn single(b: usize) -> Ideal {
        Ideal(1u64 << b)
    }

    #[inline]
    pub fn meet(self, other: Ideal) -> Ideal {
        Ideal(self.0 & other.0)
    }

    #[inline]
    pub fn join(self, other: Ideal) -> Ideal {
        Ideal(self.0 | other.0)
    }

    #[inline]
    pub fn contains(self, b: usize) -> bool {
        self.0 >> b & 1 == 1
    }

    pub fn is_subset(self, other: Ideal) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(b)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement(pub Vec<u64>);

impl RingElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    /// Blocks where the element is nonzero.
    pub fn support(&self) -> Ideal {
        Ideal::from_blocks(self.0.iter().enumerate().filter(|(_, &r)| r != 0).map(|(i, _)| i))
    }
}

/// Unit group data for one block: generators plus a discrete log table.
#[derive(Debug, Clone)]
struct UnitTable {
    gens: Vec<(u64, u64)>,
    log: HashMap<u64, Vec<u64>>,
}

impl UnitTable {
    fn new(block: &Block) -> Self {
        let gens = block.unit_generators();
        let mut log = HashMap::new();
        let mut stack: Vec<(u64, Vec<u64>)> = vec![(1 % block.modulus, vec![0; gens.len()])];
        // Enumerate products of generator powers; independence makes this a bijection.
        for (j, &(g, ord)) in gens.iter().enumerate() {
            let mut next = Vec::with_capacity(stack.len() * ord as usize);
            for (r, exps) in &stack {
                let mut x = *r;
                for e in 0..ord {
                    let mut v = exps.clone();
                    v[j] = e;
                    next.push((x, v));
                    x = x * g % block.modulus;
                }
            }
            stack = next;
        }
        for (r, v) in stack {
            log.insert(r, v);
        }
        UnitTable { gens, log }
    }
}

#[derive(Debug, Clone)]
pub struct ProductRing {
    blocks: Vec<Block>,
    tables: Vec<UnitTable>,
}

impl PartialEq for ProductRing {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}
impl Eq for ProductRing {}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingJson {
    pub blocks: Vec<u64>,
}

impl ProductRing {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.len() > MAX_BLOCKS {
            return Err(Error::TooLarge(format!("{} blocks exceed the cap {MAX_BLOCKS}", moduli.len())));
        }
        let blocks = moduli.iter().map(|&m| Block::new(m)).collect::<Result<Vec<_>>>()?;
        let mut cache: HashMap<u64, UnitTable> = HashMap::new();
        let tables = blocks
            .iter()
            .map(|b| cache.entry(b.modulus).or_insert_with(|| UnitTable::new(b)).clone())
            .collect();
        Ok(ProductRing { blocks, tables })
    }

    pub fn from_json(json: &RingJson) -> Result<Self> {
        Self::new(&json.blocks)
    }

    pub fn to_json(&self) -> RingJson {
        RingJson { blocks: self.moduli() }
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.modulus).collect()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn full(&self) -> Ideal {
        Ideal::full(self.blocks.len())
    }

    pub fn zero(&self) -> RingElement {
        RingElement(vec![0; self.blocks.len()])
    }

    pub fn one(&self) -> RingElement {
        self.idempotent_of(self.full())
    }

    pub fn check_element(&self, a: &RingElement) -> Result<()> {
        if a.0.len() != self.blocks.len() {
            return Err(Error::Shape(format!(
                "element has {} residues, ring has {} blocks",
                a.0.len(),
                self.blocks.len()
            )));
        }
        for (i, (&r, b)) in a.0.iter().zip(&self.blocks).enumerate() {
            if r >= b.modulus {
                return Err(Error::Shape(format!("residue {r} in block {i} is not reduced mod {}", b.modulus)));
            }
        }
        Ok(())
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<RingElement> {
        let a = RingElement(residues);
        self.check_element(&a)?;
        Ok(a)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.same_shape(a, b)?;
        Ok(RingElement(
            self.blocks.iter().enumerate().map(|(i, bl)| (a.0[i] + b.0[i]) % bl.modulus).collect(),
        ))
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.same_shape(a, b)?;
        Ok(RingElement(
            self.blocks
                .iter()
                .enumerate()
                .map(|(i, bl)| (a.0[i] + bl.modulus - b.0[i]) % bl.modulus)
                .collect(),
        ))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.same_shape(a, b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(self.blocks.iter().enumerate().map(|(i, bl)| a.0[i] * b.0[i] % bl.modulus).collect())
    }

    fn same_shape(&self, a: &RingElement, b: &RingElement) -> Result<()> {
        let n = self.blocks.len();
        if a.0.len() != n || b.0.len() != n {
            return Err(Error::Shape(format!(
                "operand lengths {} and {} do not match {n} blocks",
                a.0.len(),
                b.0.len()
            )));
        }
        Ok(())
    }

    pub fn idempotent_of(&self, ideal: Ideal) -> RingElement {
        RingElement((0..self.blocks.len()).map(|i| u64::from(ideal.contains(i))).collect())
    }

    /// `1_I a`.
    pub fn project(&self, a: &RingElement, ideal: Ideal) -> RingElement {
        RingElement(a.0.iter().enumerate().map(|(i, &r)| if ideal.contains(i) { r } else { 0 }).collect())
    }

    pub fn is_unit_of(&self, a: &RingElement, ideal: Ideal) -> bool {
        a.0.len() == self.blocks.len()
            && self.blocks.iter().enumerate().all(|(i, b)| {
                if ideal.contains(i) {
                    b.is_unit(a.0[i])
                } else {
                    a.0[i] == 0
                }
            })
    }

    pub fn inverse_in_ideal(&self, a: &RingElement, ideal: Ideal) -> Result<RingElement> {
        if a.0.len() != self.blocks.len() {
            return Err(Error::Shape(format!("element has {} residues", a.0.len())));
        }
        let mut out = vec![0; self.blocks.len()];
        for (i, b) in self.blocks.iter().enumerate() {
            let r = a.0[i];
            if ideal.contains(i) {
                out[i] = inv_mod(r, b.modulus).ok_or(Error::NotAUnit { block: i, residue: r, modulus: b.modulus })?;
            } else if r != 0 {
                return Err(Error::NotAUnit { block: i, residue: r, modulus: b.modulus });
            }
        }
        Ok(RingElement(out))
    }

    /// Inverse on the element's own support. Every nonzero residue must be a unit.
    pub fn inverse_on_support(&self, a: &RingElement) -> Result<RingElement> {
        self.inverse_in_ideal(a, a.support())
    }

    /// `a^e` for an integer exponent, computed in the ideal spanned by the support of `a`.
    pub fn pow_in_ideal(&self, a: &RingElement, e: i64) -> Result<RingElement> {
        let base = if e < 0 { self.inverse_on_support(a)? } else { a.clone() };
        let k = e.unsigned_abs();
        Ok(RingElement(
            self.blocks
                .iter()
                .enumerate()
                .map(|(i, b)| if base.0[i] == 0 { 0 } else { pow_mod(base.0[i], k, b.modulus) })
                .collect(),
        ))
    }

    /// Generators of `U(I R)` as full ring elements (1 on other blocks of `I`, 0 off `I`).
    pub fn unit_group_structure(&self, ideal: Ideal) -> Vec<(RingElement, u64)> {
        let one = self.idempotent_of(ideal);
        let mut out = Vec::new();
        for i in ideal.iter() {
            for &(g, ord) in &self.tables[i].gens {
                let mut e = one.clone();
                e.0[i] = g;
                out.push((e, ord));
            }
        }
        out
    }

    /// Generator residues and orders of block `i`'s unit group.
    pub fn block_unit_generators(&self, i: usize) -> &[(u64, u64)] {
        &self.tables[i].gens
    }

    /// Exponents of a unit residue in block `i` with respect to its generators.
    pub fn discrete_log(&self, i: usize, r: u64) -> Option<&[u64]> {
        self.tables[i].log.get(&r).map(|v| v.as_slice())
    }

    pub fn unit_group_order(&self, ideal: Ideal) -> u64 {
        ideal.iter().map(|i| self.blocks[i].unit_count()).product()
    }

    /// Sum of elements with pairwise disjoint supports; each block is taken from
    /// whichever summand is nonzero there.
    pub fn assemble<'a, I: IntoIterator<Item = &'a RingElement>>(&self, parts: I) -> RingElement {
        let mut out = self.zero();
        for p in parts {
            for (i, &r) in p.0.iter().enumerate() {
                if r != 0 {
                    out.0[i] = r;
                }
            }
        }
        out
    }
}
