//! Finite abelian groups as products of cyclic factors, homomorphisms between them,
//! and the linear algebra (kernels, images, preimages, quotients) over mixed moduli.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::action::PartialAction;
use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::group::TupleSpace;
use crate::ring::{pow_mod, RingElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub slot: usize,
    pub block: usize,
    pub gen: u64,
    pub order: u64,
}

/// `C^n(G, A)` as a product of cyclic groups: slots in row-major tuple order, then
/// support blocks ascending, then unit generators of the block.
#[derive(Debug, Clone)]
pub struct AbelianPresentation {
    pub degree: usize,
    pub factors: Vec<Factor>,
}

impl AbelianPresentation {
    pub fn cochains(pa: &PartialAction, n: usize) -> Self {
        let ts = TupleSpace::new(pa.group().order(), n);
        let mut factors = Vec::new();
        for (slot, xs) in ts.iter().enumerate() {
            for block in pa.tuple_ideal(&xs).iter() {
                for &(gen, order) in pa.ring().block_unit_generators(block) {
                    factors.push(Factor { slot, block, gen, order });
                }
            }
        }
        AbelianPresentation { degree: n, factors }
    }

    pub fn orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().fold(BigUint::from(1u32), |acc, f| acc * f.order)
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, f| acc.checked_mul(f.order))
    }

    /// Exponent vector of a valid cochain.
    pub fn encode(&self, pa: &PartialAction, f: &Cochain) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut i = 0;
        while i < self.factors.len() {
            let Factor { slot, block, .. } = self.factors[i];
            let r = f.values[slot].0[block];
            let logs = pa
                .ring()
                .discrete_log(block, r)
                .ok_or(Error::NotAUnit { block, residue: r, modulus: pa.ring().block(block).modulus })?;
            out.extend_from_slice(logs);
            i += logs.len();
        }
        Ok(out)
    }

    pub fn decode(&self, pa: &PartialAction, v: &[u64]) -> Cochain {
        let mut f = Cochain::identity(pa, self.degree);
        for (fac, &e) in self.factors.iter().zip(v) {
            let m = pa.ring().block(fac.block).modulus;
            let r = &mut f.values[fac.slot].0[fac.block];
            *r = *r * pow_mod(fac.gen, e, m) % m;
        }
        f
    }

    /// Mixed-radix digits of `idx`, first factor most significant.
    pub fn unrank(&self, mut idx: u64) -> Vec<u64> {
        let mut v = vec![0; self.factors.len()];
        for (slot, f) in v.iter_mut().zip(&self.factors).rev() {
            *slot = idx % f.order;
            idx /= f.order;
        }
        v
    }

    /// Cochain whose only nontrivial factor is generator `j`.
    pub fn generator(&self, pa: &PartialAction, j: usize) -> Cochain {
        let mut f = Cochain::identity(pa, self.degree);
        let fac = self.factors[j];
        f.values[fac.slot] = {
            let mut v: RingElement = f.values[fac.slot].clone();
            v.0[fac.block] = fac.gen;
            v
        };
        f
    }
}

/// A homomorphism `⊕ Z/a_j -> ⊕ Z/c_i`, stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMatrix {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
    pub columns: Vec<Vec<u64>>,
}

impl HomMatrix {
    pub fn new(source: Vec<u64>, target: Vec<u64>, columns: Vec<Vec<u64>>) -> Result<Self> {
        if columns.len() != source.len() || columns.iter().any(|c| c.len() != target.len()) {
            return Err(Error::Shape("matrix shape does not match the presentations".into()));
        }
        let columns =
            columns.into_iter().map(|c| c.iter().zip(&target).map(|(&x, &m)| x % m).collect()).collect::<Vec<Vec<u64>>>();
        for (c, &a) in columns.iter().zip(&source) {
            if c.iter().zip(&target).any(|(&x, &m)| (x as u128 * a as u128) % m as u128 != 0) {
                return Err(Error::Shape("column order does not divide the source order".into()));
            }
        }
        Ok(HomMatrix { source, target, columns })
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.target.len()];
        for (col, &e) in self.columns.iter().zip(v) {
            if e == 0 {
                continue;
            }
            for ((o, &c), &m) in out.iter_mut().zip(col).zip(&self.target) {
                *o = ((*o as u128 + c as u128 * e as u128) % m as u128) as u64;
            }
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &HomMatrix) -> HomMatrix {
        let columns = inner.columns.iter().map(|c| self.apply(c)).collect();
        HomMatrix { source: inner.source.clone(), target: self.target.clone(), columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|&x| x == 0))
    }

    pub fn eliminate(&self) -> Elimination {
        let gens = self.columns.iter().enumerate().map(|(j, c)| {
            let mut v = vec![0; self.source.len()];
            v[j] = 1 % self.source[j];
            (c.clone(), v)
        });
        Elimination::run(&self.target, &self.source, gens.collect())
    }
}

#[derive(Debug, Clone)]
pub struct Pivot {
    pub row: usize,
    pub y: Vec<u64>,
    pub v: Vec<u64>,
}

/// Row-by-row gcd elimination on pairs `(y, v)` with `y = φ(v)`.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub target: Vec<u64>,
    pub source: Vec<u64>,
    pub pivots: Vec<Pivot>,
    /// Generators of the kernel (their `y` parts vanished).
    pub kernel: Vec<Vec<u64>>,
}

fn comb(a: &[u64], b: &[u64], s: i128, t: i128, moduli: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(moduli)
        .map(|((&x, &y), &m)| {
            let m = m as i128;
            ((s * x as i128 + t * y as i128).rem_euclid(m)) as u64
        })
        .collect()
}

impl Elimination {
    pub fn run(target: &[u64], source: &[u64], mut gens: Vec<(Vec<u64>, Vec<u64>)>) -> Elimination {
        let mut pivots = Vec::new();
        for (row, &c) in target.iter().enumerate() {
            let mut piv: Option<(Vec<u64>, Vec<u64>)> = None;
            let mut rest = Vec::with_capacity(gens.len());
            for (y, v) in gens {
                if y[row] == 0 {
                    rest.push((y, v));
                    continue;
                }
                match piv.take() {
                    None => piv = Some((y, v)),
                    Some((py, pv)) => {
                        let (p, q) = (py[row] as i128, y[row] as i128);
                        let eg = p.extended_gcd(&q);
                        let g = eg.gcd;
                        let ny = comb(&py, &y, eg.x, eg.y, target);
                        let nv = comb(&pv, &v, eg.x, eg.y, source);
                        let qy = comb(&py, &y, q / g, -(p / g), target);
                        let qv = comb(&pv, &v, q / g, -(p / g), source);
                        debug_assert_eq!(qy[row], 0);
                        piv = Some((ny, nv));
                        rest.push((qy, qv));
                    }
                }
            }
            if let Some((py, pv)) = piv {
                let k = c / py[row].gcd(&c);
                let my = comb(&py, &py, k as i128, 0, target);
                let mv = comb(&pv, &pv, k as i128, 0, source);
                rest.push((my, mv));
                pivots.push(Pivot { row, y: py, v: pv });
            }
            gens = rest.into_iter().filter(|(y, v)| y.iter().any(|&x| x != 0) || v.iter().any(|&x| x != 0)).collect();
        }
        let kernel = gens.into_iter().map(|(_, v)| v).filter(|v| v.iter().any(|&x| x != 0)).collect();
        Elimination { target: target.to_vec(), source: source.to_vec(), pivots, kernel }
    }

    /// Order of the span of the `y` parts (the image).
    pub fn image_order(&self) -> BigUint {
        self.pivots.iter().fold(BigUint::from(1u32), |acc, p| {
            let c = self.target[p.row];
            acc * (c / p.y[p.row].gcd(&c))
        })
    }

    /// Some `v` with `φ(v) = t`, if `t` is in the image.
    pub fn solve(&self, t: &[u64]) -> Option<Vec<u64>> {
        let mut t = t.to_vec();
        let mut v = vec![0u64; self.source.len()];
        let mut next = 0;
        for row in 0..self.target.len() {
            let c = self.target[row];
            let piv = match self.pivots.get(next) {
                Some(p) if p.row == row => {
                    next += 1;
                    Some(p)
                }
                _ => None,
            };
            if t[row] == 0 {
                continue;
            }
            let p = piv?;
            let g = p.y[row];
            let d = g.gcd(&c);
            if t[row] % d != 0 {
                return None;
            }
            let (gd, cd) = (g / d, c / d);
            let inv = crate::ring::inv_mod(gd % cd, cd).unwrap_or(0);
            let k = ((t[row] / d) as u128 * inv as u128 % cd.max(1) as u128) as i128;
            t = comb(&t, &p.y, 1, -k, &self.target);
            v = comb(&v, &p.v, 1, k, &self.source);
            debug_assert_eq!(t[row], 0);
        }
        Some(v)
    }
}

/// Order of the subgroup of `⊕ Z/m_i` spanned by `gens`.
pub fn subgroup_order(moduli: &[u64], gens: &[Vec<u64>]) -> BigUint {
    let e = Elimination::run(moduli, &[], gens.iter().map(|g| (g.clone(), vec![])).collect());
    e.image_order()
}

/// Order of an element of `⊕ Z/m_i`.
pub fn element_order(moduli: &[u64], v: &[u64]) -> u64 {
    v.iter().zip(moduli).fold(1u64, |acc, (&x, &m)| acc.lcm(&(m / x.gcd(&m))))
}

/// Invariant factors (ascending, each dividing the next, no 1s) of `Z / B`, where `B ⊆ Z`
/// are subgroups of `⊕ Z/m_i` given by generators.
pub fn quotient_invariants(moduli: &[u64], z_gens: &[Vec<u64>], b_gens: &[Vec<u64>]) -> Result<Vec<u64>> {
    let z: Vec<&Vec<u64>> = z_gens.iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    let b: Vec<&Vec<u64>> = b_gens.iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    if z.is_empty() {
        return Ok(vec![]);
    }
    let zo: Vec<u64> = z.iter().map(|v| element_order(moduli, v)).collect();
    let bo: Vec<u64> = b.iter().map(|v| element_order(moduli, v)).collect();
    let big_o = zo.iter().try_fold(1u64, |acc, &o| {
        let l = acc.lcm(&o);
        if l > (1 << 40) {
            None
        } else {
            Some(l)
        }
    });
    let big_o = big_o.ok_or_else(|| Error::TooLarge("exponent of the cocycle group is too large".into()))?;

    // Kernel of (r, q) ↦ Σ r_i z_i − Σ q_j b_j.
    let mut source = zo.clone();
    source.extend(&bo);
    let mut columns: Vec<Vec<u64>> = z.iter().map(|v| (*v).clone()).collect();
    for v in &b {
        columns.push(v.iter().zip(moduli).map(|(&x, &m)| (m - x) % m).collect());
    }
    let hom = HomMatrix::new(source, moduli.to_vec(), columns)?;
    let ker = hom.eliminate().kernel;

    let k = z.len();
    let o = big_o as i128;
    // Relation matrix: rows = Z generators, columns = relations.
    let mut mat: Vec<Vec<i128>> = vec![Vec::new(); k];
    for rel in &ker {
        for i in 0..k {
            mat[i].push(rel[i] as i128 % o);
        }
    }
    for i in 0..k {
        for (r, row) in mat.iter_mut().enumerate() {
            row.push(if r == i { zo[i] as i128 % o } else { 0 });
        }
    }
    let diag = snf_diagonal_mod(mat, o);
    let mut factors: Vec<u64> = Vec::with_capacity(k);
    for i in 0..k {
        let d = diag.get(i).copied().unwrap_or(0);
        let d = if d == 0 { o } else { d.gcd(&o) };
        factors.push(d as u64);
    }
    Ok(normalize_invariants(&factors))
}

/// Diagonal of the Smith form of an integer matrix whose row lattice quotient contains
/// `o · Z^rows`, with entries kept in `[0, o)`. Pivot: smallest nonzero value, then lowest
/// index (row-major).
pub fn snf_diagonal_mod(mut a: Vec<Vec<i128>>, o: i128) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let red = |x: i128| x.rem_euclid(o);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = red(*x);
        }
    }
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // Pick pivot.
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a[i][j];
                if v != 0 && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut done = true;
            // Clear column t below.
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / p;
                    for j in t..cols {
                        a[i][j] = red(a[i][j] - q * a[t][j]);
                    }
                    if a[i][t] != 0 {
                        done = false;
                    }
                }
            }
            // Clear row t to the right.
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / p;
                    for i in t..rows {
                        a[i][j] = red(a[i][j] - q * a[i][t]);
                    }
                    if a[t][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                // Divisibility condition: p must divide every remaining entry.
                let mut fix = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if a[i][j] % p != 0 {
                            fix = Some(i);
                            break 'scan;
                        }
                    }
                }
                match fix {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            a[t][j] = red(a[t][j] + a[i][j]);
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row t / column t to the pivot.
            let mut best: Option<(i128, bool, usize)> = None;
            for i in t..rows {
                let v = a[i][t];
                if v != 0 && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, true, i));
                }
            }
            for j in t..cols {
                let v = a[t][j];
                if v != 0 && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, false, j));
                }
            }
            match best {
                Some((_, true, i)) => a.swap(t, i),
                Some((_, false, j)) => {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
                None => break,
            }
            if a[t][t] == 0 {
                break;
            }
        }
        diag.push(a[t][t]);
        t += 1;
    }
    diag
}

fn prime_power_parts(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Canonical invariant factors of `⊕ Z/d_i` (ascending divisibility chain, 1s dropped).
pub fn normalize_invariants(ds: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &d in ds {
        for (p, q) in prime_power_parts(d) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (_, mut qs) in by_prime {
        qs.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in qs.into_iter().enumerate() {
            out[len - 1 - i] *= q;
        }
    }
    out.retain(|&d| d != 1);
    out
}

/// `|H[p^k]|` for `k = 1, 2, ...` until it stabilizes (the last, repeated value is dropped).
pub fn torsion_counts<F: FnMut(u64) -> u64>(p: u64, mut count: F) -> Vec<u64> {
    let mut out = Vec::new();
    let mut prev = 1;
    let mut pk = p;
    loop {
        let c = count(pk);
        if c == prev {
            return out;
        }
        out.push(c);
        prev = c;
        pk *= p;
    }
}

/// Cyclic `p`-power factors of a group with `|H[p^k]| = counts[k-1]`.
pub fn p_primary_from_counts(p: u64, counts: &[u64]) -> Vec<u64> {
    // ranks[k] = number of cyclic factors of order at least p^(k+1).
    let mut ranks = Vec::with_capacity(counts.len());
    let mut prev = 1;
    for &c in counts {
        let mut q = c / prev;
        let mut r = 0;
        while q > 1 {
            q /= p;
            r += 1;
        }
        ranks.push(r);
        prev = c;
    }
    let mut out = Vec::new();
    for (k, &r) in ranks.iter().enumerate() {
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        for _ in next..r {
            out.push(p.pow(k as u32 + 1));
        }
    }
    out
}

pub fn prime_factors(n: u64) -> Vec<u64> {
    prime_power_parts(n).into_iter().map(|(p, _)| p).collect()
}

/// Invariant factors of a direct product.
pub fn combine_invariant_factors(parts: &[Vec<u64>]) -> Vec<u64> {
    normalize_invariants(&parts.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_invariants(&[2, 3]), vec![6]);
        assert_eq!(normalize_invariants(&[4, 2, 1]), vec![2, 4]);
        assert_eq!(normalize_invariants(&[6, 4]), vec![2, 12]);
        assert_eq!(normalize_invariants(&[]), Vec::<u64>::new());
        assert_eq!(combine_invariant_factors(&[vec![2], vec![2, 4]]), vec![2, 2, 4]);
    }

    #[test]
    fn presentation_examples() {
        let p3 = AbelianPresentation::cochains(&fixtures::fixture3(), 1);
        assert_eq!(p3.orders(), vec![4, 4]);
        assert_eq!(p3.order(), BigUint::from(16u32));
        let p1 = AbelianPresentation::cochains(&fixtures::fixture1(), 1);
        assert_eq!(p1.orders(), vec![4, 4, 4, 4]);
        assert_eq!(p1.factors.iter().map(|f| f.slot).collect::<Vec<_>>(), vec![0, 0, 1, 2]);
        let triv = fixtures::trivial_action(crate::group::FiniteGroup::cyclic(2).unwrap(), &[5], false).unwrap();
        let pt = AbelianPresentation::cochains(&triv, 1);
        assert!(pt.factors.iter().all(|f| f.slot == 0));
    }

    #[test]
    fn encode_decode_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for pa in [fixtures::fixture1(), fixtures::fixture2()] {
            for n in 0..3 {
                let pres = AbelianPresentation::cochains(&pa, n);
                let f = crate::cochain::random_cochain(&mut rng, &pa, n);
                let v = pres.encode(&pa, &f).unwrap();
                assert_eq!(pres.decode(&pa, &v), f);
            }
        }
    }

    fn brute_quotient(moduli: &[u64], z: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<u64> {
        use std::collections::BTreeSet;
        let span = |gens: &[Vec<u64>]| {
            let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
            set.insert(vec![0; moduli.len()]);
            let mut frontier: Vec<Vec<u64>> = set.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for g in gens {
                    let y: Vec<u64> = x.iter().zip(g).zip(moduli).map(|((&a, &b), &m)| (a + b) % m).collect();
                    if set.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            set
        };
        let zs = span(z);
        let bs = span(b);
        let h = zs.len() / bs.len();
        let mut ds: Vec<u64> = Vec::new();
        for (p, _) in prime_power_parts(h as u64) {
            let counts = torsion_counts(p, |pk| {
                zs.iter()
                    .filter(|x| {
                        let y: Vec<u64> = x.iter().zip(moduli).map(|(&a, &m)| a * pk % m).collect();
                        bs.contains(&y)
                    })
                    .count() as u64
                    / bs.len() as u64
            });
            ds.extend(p_primary_from_counts(p, &counts));
        }
        normalize_invariants(&ds)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn quotient_matches_enumeration(
            moduli in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 8, 9]), 1..4),
            seeds in prop::collection::vec(any::<u64>(), 4),
        ) {
            let gen = |s: u64| -> Vec<u64> {
                moduli.iter().enumerate().map(|(i, &m)| s.rotate_left(7 * i as u32) % m).collect()
            };
            let z = vec![gen(seeds[0]), gen(seeds[1]), gen(seeds[2])];
            // B is spanned by multiples of Z elements so that B ⊆ Z.
            let b: Vec<Vec<u64>> = vec![
                z[0].iter().zip(&moduli).map(|(&x, &m)| x * (seeds[3] % 5) % m).collect(),
                z[1].iter().zip(&z[2]).zip(&moduli).map(|((&x, &y), &m)| (x + y) % m).collect(),
            ];
            let fast = quotient_invariants(&moduli, &z, &b).unwrap();
            prop_assert_eq!(fast, brute_quotient(&moduli, &z, &b));
        }

        #[test]
        fn solve_finds_preimages(
            seeds in prop::collection::vec(any::<u64>(), 9),
        ) {
            let source = vec![4u64, 6, 2];
            let target = vec![8u64, 3, 4];
            // Entry (i, j) must be a multiple of c_i / gcd(c_i, a_j).
            let cols: Vec<Vec<u64>> = (0..3)
                .map(|j| {
                    target
                        .iter()
                        .enumerate()
                        .map(|(i, &m)| {
                            let step = m / m.gcd(&source[j]);
                            seeds[i + 3 * j] % (m / step) * step
                        })
                        .collect()
                })
                .collect();
            let hom = HomMatrix::new(source.clone(), target.clone(), cols).unwrap();
            let el = hom.eliminate();
            let v: Vec<u64> = source.iter().enumerate().map(|(i, &m)| seeds[i] % m).collect();
            let t = hom.apply(&v);
            let w = el.solve(&t).unwrap();
            prop_assert_eq!(hom.apply(&w), t);
            for k in &el.kernel {
                prop_assert!(hom.apply(k).iter().all(|&x| x == 0));
            }
            // |ker| · |im| = |source|.
            let ker = subgroup_order(&source, &el.kernel);
            prop_assert_eq!(ker * el.image_order(), BigUint::from(48u32));
        }
    }
}
