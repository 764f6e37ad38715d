//! `H^n(G, A)` via integer elimination on the presented coboundary maps, plus an
//! exhaustive enumeration oracle.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{
    normalize_invariants, p_primary_from_counts, prime_factors, quotient_invariants, subgroup_order,
    torsion_counts, AbelianPresentation, Elimination, HomMatrix,
};
use crate::action::PartialAction;
use crate::cochain::{delta, random_cochain, Cochain};
use crate::error::{Error, Result};

pub const DEFAULT_BRUTE_FORCE_BOUND: u64 = 1 << 20;

/// `δ^n` as a matrix between the presentations of `C^n` and `C^{n+1}`.
#[derive(Debug, Clone)]
pub struct DeltaMatrix {
    pub degree: usize,
    pub source: AbelianPresentation,
    pub target: AbelianPresentation,
    pub matrix: HomMatrix,
    action: PartialAction,
    elim: Elimination,
}

impl DeltaMatrix {
    pub fn new(pa: &PartialAction, n: usize) -> Result<Self> {
        let source = AbelianPresentation::cochains(pa, n);
        let target = AbelianPresentation::cochains(pa, n + 1);
        let columns = (0..source.len())
            .map(|j| target.encode(pa, &delta(pa, &source.generator(pa, j))?))
            .collect::<Result<Vec<_>>>()?;
        let matrix = HomMatrix::new(source.orders(), target.orders(), columns)?;
        let elim = matrix.eliminate();
        Ok(DeltaMatrix { degree: n, source, target, matrix, action: pa.clone(), elim })
    }

    /// Compares `encode(δ f)` with the matrix applied to `encode(f)` on random cochains.
    pub fn validate<R: Rng>(&self, rng: &mut R, trials: usize) -> Result<()> {
        let pa = &self.action;
        for _ in 0..trials {
            let f = random_cochain(rng, pa, self.degree);
            let direct = self.target.encode(pa, &delta(pa, &f)?)?;
            let via = self.matrix.apply(&self.source.encode(pa, &f)?);
            if direct != via {
                return Err(Error::internal("coboundary matrix", &[self.degree]));
            }
        }
        Ok(())
    }

    pub fn kernel_generators(&self) -> &[Vec<u64>] {
        &self.elim.kernel
    }

    /// Images of the source generators, as target exponent vectors.
    pub fn image_generators(&self) -> &[Vec<u64>] {
        &self.matrix.columns
    }

    pub fn kernel_order(&self) -> BigUint {
        subgroup_order(&self.source.orders(), &self.elim.kernel)
    }

    pub fn image_order(&self) -> BigUint {
        self.elim.image_order()
    }

    /// `ξ` with `δ ξ = f`, if any.
    pub fn preimage(&self, f: &Cochain) -> Result<Option<Cochain>> {
        let pa = &self.action;
        let t = self.target.encode(pa, f)?;
        Ok(self.elim.solve(&t).map(|v| self.source.decode(pa, &v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyResult {
    pub degree: usize,
    pub invariant_factors: Vec<u64>,
    pub order: BigUint,
    pub cocycles: BigUint,
    pub coboundaries: BigUint,
    pub cochains: BigUint,
}

/// `H^n(G, A) = ker δ^n / im δ^{n-1}` (with `im δ^{-1}` trivial).
pub fn cohomology(pa: &PartialAction, n: usize) -> Result<CohomologyResult> {
    let dn = DeltaMatrix::new(pa, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    dn.validate(&mut rng, 4)?;
    let moduli = dn.source.orders();
    let (b_gens, b_order): (Vec<Vec<u64>>, BigUint) = if n == 0 {
        (vec![], BigUint::from(1u32))
    } else {
        let prev = DeltaMatrix::new(pa, n - 1)?;
        prev.validate(&mut rng, 4)?;
        (prev.image_generators().to_vec(), prev.image_order())
    };
    let z_order = dn.kernel_order();
    let invariant_factors = quotient_invariants(&moduli, dn.kernel_generators(), &b_gens)?;
    let order = invariant_factors.iter().fold(BigUint::from(1u32), |acc, &d| acc * d);
    if &order * &b_order != z_order || z_order.clone() * dn.image_order() != dn.source.order() {
        return Err(Error::internal("cohomology order bookkeeping", &[n]));
    }
    Ok(CohomologyResult {
        degree: n,
        invariant_factors,
        order,
        cocycles: z_order,
        coboundaries: b_order,
        cochains: dn.source.order(),
    })
}

/// Exhaustive oracle: enumerates `C^n` and `C^{n-1}`, then reads the structure of
/// `Z / B` off the counts `|{z : z^{p^k} ∈ B}|`.
pub fn cohomology_bruteforce(pa: &PartialAction, n: usize, bound: u64) -> Result<Vec<u64>> {
    let pres = AbelianPresentation::cochains(pa, n);
    let total = pres
        .order_u64()
        .filter(|&t| t <= bound)
        .ok_or_else(|| Error::TooLarge(format!("|C^{n}| exceeds the brute-force bound {bound}")))?;
    let ident = Cochain::identity(pa, n + 1);
    let mut cocycles = Vec::new();
    for idx in 0..total {
        let f = pres.decode(pa, &pres.unrank(idx));
        if delta(pa, &f)? == ident {
            cocycles.push(f);
        }
    }
    let mut bset: HashSet<Cochain> = HashSet::new();
    if n == 0 {
        bset.insert(Cochain::identity(pa, 0));
    } else {
        let prev = AbelianPresentation::cochains(pa, n - 1);
        let ptotal = prev
            .order_u64()
            .filter(|&t| t <= bound)
            .ok_or_else(|| Error::TooLarge(format!("|C^{}| exceeds the brute-force bound {bound}", n - 1)))?;
        for idx in 0..ptotal {
            bset.insert(delta(pa, &prev.decode(pa, &prev.unrank(idx)))?);
        }
    }
    let h = cocycles.len() as u64 / bset.len() as u64;
    if h * bset.len() as u64 != cocycles.len() as u64 {
        return Err(Error::internal("coboundaries index cocycles", &[n]));
    }
    let mut ds = Vec::new();
    for p in prime_factors(h) {
        let counts = torsion_counts(p, |pk| {
            let mut c = 0u64;
            for z in &cocycles {
                if bset.contains(&z.pow(pa, pk as i64).expect("cocycle values are units")) {
                    c += 1;
                }
            }
            c / bset.len() as u64
        });
        ds.extend(p_primary_from_counts(p, &counts));
    }
    Ok(normalize_invariants(&ds))
}

/// Uniformly random element of `Z^n` (a random combination of kernel generators).
pub fn random_cocycle<R: Rng>(rng: &mut R, pa: &PartialAction, n: usize) -> Result<Cochain> {
    let dm = DeltaMatrix::new(pa, n)?;
    Ok(random_cocycle_from(rng, pa, &dm))
}

pub fn random_cocycle_from<R: Rng>(rng: &mut R, pa: &PartialAction, dm: &DeltaMatrix) -> Cochain {
    let orders = dm.source.orders();
    let mut v = vec![0u64; orders.len()];
    for k in dm.kernel_generators() {
        let c = rng.gen_range(0..crate::abelian::element_order(&orders, k));
        for ((x, &y), &m) in v.iter_mut().zip(k).zip(&orders) {
            *x = (*x + c * y) % m;
        }
    }
    dm.source.decode(pa, &v)
}

/// A cocycle that is not a coboundary, if `H^n` is nontrivial.
pub fn random_noncoboundary<R: Rng>(rng: &mut R, pa: &PartialAction, n: usize, tries: usize) -> Result<Option<Cochain>> {
    let dm = DeltaMatrix::new(pa, n)?;
    for _ in 0..tries {
        let z = random_cocycle_from(rng, pa, &dm);
        if n == 0 || crate::cochain::is_coboundary(pa, &z)?.is_none() {
            if z != Cochain::identity(pa, n) {
                return Ok(Some(z));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::FiniteGroup;

    #[test]
    fn fixture3_degree_one() {
        let pa = fixtures::fixture3();
        let dm = DeltaMatrix::new(&pa, 1).unwrap();
        // δ^1 f (x, y) = f(y) f(xy)^-1 f(x): |ker| = 8 from f(e) = 1 and f(s)^2 = 1.
        assert_eq!(dm.kernel_order(), BigUint::from(2u32));
        assert_eq!(dm.image_order(), BigUint::from(8u32));
        let h = cohomology(&pa, 1).unwrap();
        assert_eq!(h.invariant_factors, vec![2]);
        assert_eq!(cohomology_bruteforce(&pa, 1, DEFAULT_BRUTE_FORCE_BOUND).unwrap(), vec![2]);
    }

    #[test]
    fn trivial_degree_zero_matrix() {
        let pa = fixtures::fixture3();
        assert!(DeltaMatrix::new(&pa, 0).unwrap().matrix.is_zero());
    }

    #[test]
    fn classical_anchors() {
        let z2_on_z3 = fixtures::trivial_action(FiniteGroup::cyclic(2).unwrap(), &[3], true).unwrap();
        assert_eq!(cohomology(&z2_on_z3, 2).unwrap().invariant_factors, vec![2]);
        assert_eq!(cohomology_bruteforce(&z2_on_z3, 2, DEFAULT_BRUTE_FORCE_BOUND).unwrap(), vec![2]);
        let pa = fixtures::fixture1();
        assert_eq!(cohomology(&pa, 0).unwrap().invariant_factors, vec![4]);
        assert_eq!(cohomology_bruteforce(&pa, 0, DEFAULT_BRUTE_FORCE_BOUND).unwrap(), vec![4]);
    }

    #[test]
    fn h0_is_invariants() {
        for pa in [fixtures::fixture1(), fixtures::fixture2(), fixtures::fixture3()] {
            let pres = AbelianPresentation::cochains(&pa, 0);
            let count = (0..pres.order_u64().unwrap())
                .filter(|&i| crate::cochain::is_cocycle_deg0_explicit(&pa, &pres.decode(&pa, &pres.unrank(i)).values[0]))
                .count();
            assert_eq!(cohomology(&pa, 0).unwrap().order, BigUint::from(count));
        }
    }

    #[test]
    fn coboundary_matrices_compose_to_zero() {
        for pa in [fixtures::fixture1(), fixtures::fixture2()] {
            for n in 0..2 {
                let a = DeltaMatrix::new(&pa, n).unwrap();
                let b = DeltaMatrix::new(&pa, n + 1).unwrap();
                assert!(b.matrix.compose(&a.matrix).is_zero());
            }
        }
    }

    #[test]
    fn matrix_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for pa in [fixtures::fixture1(), fixtures::fixture2(), fixtures::fixture3()] {
            for n in 0..3 {
                DeltaMatrix::new(&pa, n).unwrap().validate(&mut rng, 100).unwrap();
            }
        }
    }

    #[test]
    fn rank_nullity() {
        for pa in [fixtures::fixture1(), fixtures::fixture2(), fixtures::fixture3()] {
            for n in 0..3 {
                let dm = DeltaMatrix::new(&pa, n).unwrap();
                assert_eq!(dm.kernel_order() * dm.image_order(), dm.source.order());
            }
        }
    }

    #[test]
    fn random_cocycles_are_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for pa in [fixtures::fixture1(), fixtures::fixture2()] {
            for n in 0..3 {
                let z = random_cocycle(&mut rng, &pa, n).unwrap();
                assert!(crate::cochain::is_cocycle(&pa, &z).unwrap());
            }
        }
    }
}
