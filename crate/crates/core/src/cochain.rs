//! Partial cochains, their pointwise group structure and the coboundary maps.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::action::PartialAction;
use crate::error::{Error, Result};
use crate::group::{glue, TupleSpace};
use crate::ring::{Ideal, ProductRing, RingElement};

/// Dense table `G^n -> A` in row-major tuple order; degree 0 has one value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<RingElement>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CochainJson {
    pub degree: usize,
    pub values: BTreeMap<String, Vec<u64>>,
}

pub fn tuple_key(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Product of `f^s` over the factors, with inverses taken on each factor's own support.
pub(crate) fn signed_product(ring: &ProductRing, factors: &[(&RingElement, bool)]) -> Result<RingElement> {
    let mut acc = ring.one();
    for (f, inverse) in factors {
        if *inverse {
            let inv = ring.inverse_on_support(f)?;
            acc = ring.mul_unchecked(&acc, &inv);
        } else {
            acc = ring.mul_unchecked(&acc, f);
        }
    }
    Ok(acc)
}

impl Cochain {
    pub fn space(&self, pa: &PartialAction) -> TupleSpace {
        TupleSpace::new(pa.group().order(), self.degree)
    }

    pub fn at(&self, pa: &PartialAction, xs: &[usize]) -> &RingElement {
        &self.values[TupleSpace::new(pa.group().order(), xs.len()).index(xs)]
    }

    /// `e_n(x) = 1_{(x)}`.
    pub fn identity(pa: &PartialAction, n: usize) -> Cochain {
        let ts = TupleSpace::new(pa.group().order(), n);
        let values = ts.iter().map(|xs| pa.ring().idempotent_of(pa.tuple_ideal(&xs))).collect();
        Cochain { degree: n, values }
    }

    /// Build from a function on tuples.
    pub fn from_fn<F: FnMut(&[usize]) -> RingElement>(pa: &PartialAction, n: usize, mut f: F) -> Cochain {
        let ts = TupleSpace::new(pa.group().order(), n);
        Cochain { degree: n, values: ts.iter().map(|xs| f(&xs)).collect() }
    }

    pub fn validate(&self, pa: &PartialAction) -> Result<()> {
        let ts = TupleSpace::new(pa.group().order(), self.degree);
        if self.values.len() != ts.len() {
            return Err(Error::NotACochain(format!(
                "degree {} needs {} values, got {}",
                self.degree,
                ts.len(),
                self.values.len()
            )));
        }
        for (i, v) in self.values.iter().enumerate() {
            let xs = ts.tuple(i);
            pa.ring().check_element(v).map_err(|e| Error::NotACochain(format!("value at {xs:?}: {e}")))?;
            let ideal = pa.tuple_ideal(&xs);
            if !pa.ring().is_unit_of(v, ideal) {
                return Err(Error::NotACochain(format!(
                    "value {:?} at {xs:?} is not a unit of the ideal on blocks {:?}",
                    v.0,
                    ideal.to_vec()
                )));
            }
        }
        Ok(())
    }

    pub fn mul(&self, pa: &PartialAction, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || self.values.len() != other.values.len() {
            return Err(Error::NotACochain("degree mismatch".into()));
        }
        let r = pa.ring();
        let values = self.values.iter().zip(&other.values).map(|(a, b)| r.mul(a, b)).collect::<Result<_>>()?;
        Ok(Cochain { degree: self.degree, values })
    }

    pub fn inv(&self, pa: &PartialAction) -> Result<Cochain> {
        let ts = TupleSpace::new(pa.group().order(), self.degree);
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                pa.ring()
                    .inverse_in_ideal(v, pa.tuple_ideal(&ts.tuple(i)))
                    .map_err(|e| Error::NotACochain(format!("at {:?}: {e}", ts.tuple(i))))
            })
            .collect::<Result<_>>()?;
        Ok(Cochain { degree: self.degree, values })
    }

    pub fn pow(&self, pa: &PartialAction, e: i64) -> Result<Cochain> {
        let values = self.values.iter().map(|v| pa.ring().pow_in_ideal(v, e)).collect::<Result<_>>()?;
        Ok(Cochain { degree: self.degree, values })
    }

    pub fn to_json(&self, pa: &PartialAction) -> CochainJson {
        let ts = TupleSpace::new(pa.group().order(), self.degree);
        let values = self.values.iter().enumerate().map(|(i, v)| (tuple_key(&ts.tuple(i)), v.0.clone())).collect();
        CochainJson { degree: self.degree, values }
    }

    /// Parses and validates against `pa`.
    pub fn from_json(pa: &PartialAction, json: &CochainJson) -> Result<Cochain> {
        let n = pa.group().order();
        let ts = TupleSpace::new(n, json.degree);
        let mut values: Vec<Option<RingElement>> = vec![None; ts.len()];
        for (k, v) in &json.values {
            let xs: Vec<usize> = if k.is_empty() {
                vec![]
            } else {
                k.split(',')
                    .map(|s| s.trim().parse::<usize>().ok().filter(|&x| x < n))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Parse(format!("values key {k:?} is not a tuple of group elements")))?
            };
            if xs.len() != json.degree {
                return Err(Error::Parse(format!("values key {k:?} does not have {} entries", json.degree)));
            }
            let el = RingElement(v.clone());
            pa.ring().check_element(&el).map_err(|e| Error::Parse(format!("values.{k:?}: {e}")))?;
            values[ts.index(&xs)] = Some(el);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("values is missing key {:?}", tuple_key(&ts.tuple(i))))))
            .collect::<Result<_>>()?;
        let f = Cochain { degree: json.degree, values };
        f.validate(pa)?;
        Ok(f)
    }
}

/// `δ^n f`. Each factor is inverted on its own ideal; the support of the result is
/// checked against `D_{(x_1..x_{n+1})}`.
pub fn delta(pa: &PartialAction, f: &Cochain) -> Result<Cochain> {
    let gr = pa.group();
    let r = pa.ring();
    let n = f.degree;
    let src = TupleSpace::new(gr.order(), n);
    let dst = TupleSpace::new(gr.order(), n + 1);
    let mut values = Vec::with_capacity(dst.len());
    for xs in dst.iter() {
        let first = pa.apply(xs[0], &f.values[src.index(&xs[1..])]);
        let mut owned: Vec<(RingElement, bool)> = vec![(first, false)];
        if n == 0 {
            owned.push((f.values[0].clone(), true));
        } else {
            for i in 1..=n {
                owned.push((f.values[src.index(&glue(gr, &xs, i))].clone(), i % 2 == 1));
            }
            owned.push((f.values[src.index(&xs[..n])].clone(), n % 2 == 0));
        }
        let factors: Vec<(&RingElement, bool)> = owned.iter().map(|(a, s)| (a, *s)).collect();
        let v = signed_product(r, &factors)?;
        let ideal = pa.tuple_ideal(&xs);
        if !r.is_unit_of(&v, ideal) {
            return Err(Error::internal("coboundary support", &xs));
        }
        values.push(v);
    }
    Ok(Cochain { degree: n + 1, values })
}

/// First tuple where `δ f` differs from the identity, if any.
pub fn cocycle_failure(pa: &PartialAction, f: &Cochain) -> Result<Option<Vec<usize>>> {
    let d = delta(pa, f)?;
    let e = Cochain::identity(pa, f.degree + 1);
    let ts = TupleSpace::new(pa.group().order(), f.degree + 1);
    Ok(d.values.iter().zip(&e.values).position(|(a, b)| a != b).map(|i| ts.tuple(i)))
}

pub fn is_cocycle(pa: &PartialAction, f: &Cochain) -> Result<bool> {
    Ok(cocycle_failure(pa, f)?.is_none())
}

pub fn ensure_cocycle(pa: &PartialAction, f: &Cochain) -> Result<()> {
    f.validate(pa)?;
    match cocycle_failure(pa, f)? {
        None => Ok(()),
        Some(tuple) => Err(Error::NotACocycle { tuple }),
    }
}

/// `α_x(1_{x^-1} f(y)) f(x) = 1_x f(xy)` for all `x, y`.
pub fn is_cocycle_deg1_explicit(pa: &PartialAction, f: &Cochain) -> bool {
    let gr = pa.group();
    let r = pa.ring();
    gr.elements().all(|x| {
        gr.elements().all(|y| {
            let lhs = r.mul_unchecked(&pa.apply(x, f.at(pa, &[y])), f.at(pa, &[x]));
            let rhs = r.mul_unchecked(&r.idempotent_of(pa.domain(x)), f.at(pa, &[gr.mul(x, y)]));
            lhs == rhs
        })
    })
}

/// `α_x(1_{x^-1} f(y,z)) f(x,yz) = f(x,y) f(xy,z)` for all `x, y, z`.
pub fn is_cocycle_deg2_explicit(pa: &PartialAction, f: &Cochain) -> bool {
    let gr = pa.group();
    let r = pa.ring();
    gr.elements().all(|x| {
        gr.elements().all(|y| {
            gr.elements().all(|z| {
                let lhs = r.mul_unchecked(&pa.apply(x, f.at(pa, &[y, z])), f.at(pa, &[x, gr.mul(y, z)]));
                let rhs = r.mul_unchecked(f.at(pa, &[x, y]), f.at(pa, &[gr.mul(x, y), z]));
                lhs == rhs
            })
        })
    })
}

/// `α_x(1_{x^-1} a) = 1_x a` for all `x`.
pub fn is_cocycle_deg0_explicit(pa: &PartialAction, a: &RingElement) -> bool {
    let r = pa.ring();
    pa.group().elements().all(|x| pa.apply(x, a) == r.mul_unchecked(&r.idempotent_of(pa.domain(x)), a))
}

pub fn random_unit<R: Rng>(rng: &mut R, ring: &ProductRing, ideal: Ideal) -> RingElement {
    let mut out = ring.zero();
    for i in ideal.iter() {
        let b = ring.block(i);
        loop {
            let r = rng.gen_range(1..b.modulus);
            if b.is_unit(r) {
                out.0[i] = r;
                break;
            }
        }
    }
    out
}

pub fn random_cochain<R: Rng>(rng: &mut R, pa: &PartialAction, n: usize) -> Cochain {
    Cochain::from_fn(pa, n, |xs| random_unit(rng, pa.ring(), pa.tuple_ideal(xs)))
}

/// Witness `ξ` with `δ ξ = f`, if `f` is a coboundary.
pub fn is_coboundary(pa: &PartialAction, f: &Cochain) -> Result<Option<Cochain>> {
    f.validate(pa)?;
    if f.degree == 0 {
        return Err(Error::InvalidParameter("coboundaries start in degree 1".into()));
    }
    let dm = crate::cohomology::DeltaMatrix::new(pa, f.degree - 1)?;
    dm.preimage(f)
}

/// Exhaustive search over `C^{n-1}`; only for tiny instances.
pub fn is_coboundary_bruteforce(pa: &PartialAction, f: &Cochain, bound: u64) -> Result<Option<Cochain>> {
    let pres = crate::abelian::AbelianPresentation::cochains(pa, f.degree - 1);
    let total = pres.order_u64().filter(|&t| t <= bound).ok_or_else(|| {
        Error::TooLarge(format!("C^{} exceeds the brute-force bound {bound}", f.degree - 1))
    })?;
    for idx in 0..total {
        let xi = pres.decode(pa, &pres.unrank(idx));
        if &delta(pa, &xi)? == f {
            return Ok(Some(xi));
        }
    }
    Ok(None)
}

/// Witness `ξ` with `f2 = f1 · δ ξ`.
pub fn cohomologous(pa: &PartialAction, f1: &Cochain, f2: &Cochain) -> Result<Option<Cochain>> {
    ensure_cocycle(pa, f1)?;
    ensure_cocycle(pa, f2)?;
    if f1.degree != f2.degree {
        return Err(Error::InvalidParameter("degrees differ".into()));
    }
    if f1 == f2 {
        return Ok(Some(Cochain::identity(pa, f1.degree.saturating_sub(1))));
    }
    if f1.degree == 0 {
        return Ok(None);
    }
    is_coboundary(pa, &f1.inv(pa)?.mul(pa, f2)?)
}
