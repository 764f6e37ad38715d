//! Unital partial actions of a finite group on a product ring, stored as block bijections.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupJson};
use crate::ring::{Ideal, ProductRing, RingElement, RingJson};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAction {
    group: FiniteGroup,
    ring: ProductRing,
    domains: Vec<Ideal>,
    /// `maps[g][b]` is the image of block `b` under `alpha_g`, defined exactly on `D_{g^-1}`.
    maps: Vec<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub g: Option<usize>,
    pub h: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionJson {
    pub group: GroupJson,
    pub ring: RingJson,
    pub domains: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, usize>>,
}

impl PartialAction {
    /// Shape checks only: every `maps[g]` must be defined exactly on `D_{g^-1}` with
    /// in-range images. Use [`PartialAction::validate`] for the axioms.
    pub fn new(
        group: FiniteGroup,
        ring: ProductRing,
        domains: Vec<Ideal>,
        maps: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let n = group.order();
        let nb = ring.num_blocks();
        let full = ring.full();
        if domains.len() != n || maps.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} domains and maps, got {} and {}",
                domains.len(),
                maps.len()
            )));
        }
        for g in 0..n {
            if !domains[g].is_subset(full) {
                return Err(Error::Shape(format!("domain of {g} mentions a block outside 0..{nb}")));
            }
        }
        for g in 0..n {
            if maps[g].len() != nb {
                return Err(Error::Shape(format!("map of {g} has length {} (expected {nb})", maps[g].len())));
            }
            let src = domains[group.inv(g)];
            for b in 0..nb {
                match maps[g][b] {
                    Some(t) if t >= nb => {
                        return Err(Error::Shape(format!("map of {g} sends block {b} to missing block {t}")))
                    }
                    Some(_) if !src.contains(b) => {
                        return Err(Error::Shape(format!(
                            "map of {g} is defined on block {b} outside the domain of its inverse"
                        )))
                    }
                    None if src.contains(b) => {
                        return Err(Error::Shape(format!("map of {g} is undefined on block {b}")))
                    }
                    _ => {}
                }
            }
        }
        Ok(PartialAction { group, ring, domains, maps })
    }

    /// A global action given by block permutations `perms[g][b]`.
    pub fn global(group: FiniteGroup, ring: ProductRing, perms: Vec<Vec<usize>>) -> Result<Self> {
        let full = ring.full();
        let domains = vec![full; group.order()];
        let maps = perms.into_iter().map(|p| p.into_iter().map(Some).collect()).collect();
        Self::new(group, ring, domains, maps)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn ring(&self) -> &ProductRing {
        &self.ring
    }

    #[inline]
    pub fn domain(&self, g: usize) -> Ideal {
        self.domains[g]
    }

    /// Image of block `b` under `alpha_g`, if `b` lies in `D_{g^-1}`.
    #[inline]
    pub fn map_block(&self, g: usize, b: usize) -> Option<usize> {
        self.maps[g][b]
    }

    pub fn is_global(&self) -> bool {
        let full = self.ring.full();
        self.domains.iter().all(|&d| d == full)
    }

    /// Image of an ideal contained in `D_{g^-1}` (blocks outside are dropped).
    pub fn map_ideal(&self, g: usize, ideal: Ideal) -> Ideal {
        Ideal::from_blocks(ideal.iter().filter_map(|b| self.maps[g][b]))
    }

    pub fn validate(&self) -> ValidationReport {
        let gr = &self.group;
        let n = gr.order();
        let nb = self.ring.num_blocks();
        let e = gr.identity();
        let mut violations = Vec::new();
        let mut push = |axiom: &str, g: Option<usize>, h: Option<usize>, detail: String| {
            violations.push(Violation { axiom: axiom.to_string(), g, h, detail });
        };

        if self.domains[e] != self.ring.full() {
            push("(i)", Some(e), None, "identity domain is not the full ring".into());
        }
        if (0..nb).any(|b| self.maps[e][b] != Some(b)) {
            push("(i)", Some(e), None, "identity map is not the identity".into());
        }

        for g in 0..n {
            let src = self.domains[gr.inv(g)];
            let img = self.map_ideal(g, src);
            if img.len() != src.len() || img != self.domains[g] {
                push("bijection", Some(g), None, format!("map is not a bijection onto {:?}", self.domains[g].to_vec()));
            }
            for b in src.iter() {
                if let Some(t) = self.maps[g][b] {
                    if self.ring.block(b).modulus != self.ring.block(t).modulus {
                        push("moduli", Some(g), None, format!("block {b} and block {t} have different moduli"));
                    }
                }
            }
        }

        for g in 0..n {
            let gi = gr.inv(g);
            for h in 0..n {
                let gh = gr.mul(g, h);
                let lhs = self.map_ideal(g, self.domains[gi].meet(self.domains[h]));
                let rhs = self.domains[g].meet(self.domains[gh]);
                if lhs != rhs {
                    push(
                        "(ii')",
                        Some(g),
                        Some(h),
                        format!("image {:?} differs from {:?}", lhs.to_vec(), rhs.to_vec()),
                    );
                }
                let on = self.domains[gr.inv(h)].meet(self.domains[gr.inv(gh)]);
                for b in on.iter() {
                    let left = self.maps[h][b].and_then(|c| self.maps[g][c]);
                    let right = self.maps[gh][b];
                    if left != right {
                        push("(iii')", Some(g), Some(h), format!("composition differs on block {b}"));
                        break;
                    }
                }
            }
        }
        ValidationReport { valid: violations.is_empty(), violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let rep = self.validate();
        match rep.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidParameter(format!(
                "partial action axiom {} fails at g={:?}, h={:?}: {}",
                v.axiom, v.g, v.h, v.detail
            ))),
        }
    }

    /// Restriction of a global action to the ideal `ideal`; blocks are renumbered in
    /// ascending order.
    pub fn restrict_global(&self, ideal: Ideal) -> Result<PartialAction> {
        if !self.is_global() {
            return Err(Error::NotAGlobalAction("some domain is not the full ring".into()));
        }
        if let Some(v) = self.validate().violations.first() {
            return Err(Error::NotAGlobalAction(format!("axiom {} fails: {}", v.axiom, v.detail)));
        }
        if !ideal.is_subset(self.ring.full()) {
            return Err(Error::InvalidParameter("ideal mentions blocks outside the ring".into()));
        }
        self.restrict_to(ideal)
    }

    /// Restriction to `I` in the partial sense: `D_g' = I ∩ D_g ∩ alpha_g(I ∩ D_{g^-1})`.
    /// For an invariant union of orbits this is just the sub-action.
    pub fn restrict_to(&self, ideal: Ideal) -> Result<PartialAction> {
        let keep = ideal.to_vec();
        let mut new_index = vec![None; self.ring.num_blocks()];
        for (i, &b) in keep.iter().enumerate() {
            new_index[b] = Some(i);
        }
        let moduli: Vec<u64> = keep.iter().map(|&b| self.ring.block(b).modulus).collect();
        let ring = ProductRing::new(&moduli)?;
        let n = self.group.order();
        let mut domains = vec![Ideal::ZERO; n];
        let mut maps = vec![vec![None; keep.len()]; n];
        for g in 0..n {
            for &b in &keep {
                if let Some(t) = self.maps[g][b] {
                    if ideal.contains(t) {
                        let (nb, nt) = (new_index[b].unwrap(), new_index[t].unwrap());
                        maps[g][nb] = Some(nt);
                        domains[g] = domains[g].join(Ideal::single(nt));
                    }
                }
            }
        }
        PartialAction::new(self.group.clone(), ring, domains, maps)
    }

    /// `alpha_g(1_{g^-1} a)`.
    pub fn apply(&self, g: usize, a: &RingElement) -> RingElement {
        let mut out = self.ring.zero();
        for b in self.domains[self.group.inv(g)].iter() {
            out.0[self.maps[g][b].unwrap()] = a.0[b];
        }
        out
    }

    /// `D_{(x_1, ..., x_n)} = D_{x_1} ∩ D_{x_1 x_2} ∩ ... ∩ D_{x_1...x_n}`; full for `n = 0`.
    pub fn tuple_ideal(&self, xs: &[usize]) -> Ideal {
        let mut acc = self.ring.full();
        let mut p = self.group.identity();
        for &x in xs {
            p = self.group.mul(p, x);
            acc = acc.meet(self.domains[p]);
        }
        acc
    }

    /// Orbits of blocks, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let nb = self.ring.num_blocks();
        let mut parent: Vec<usize> = (0..nb).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in 0..self.group.order() {
            for b in 0..nb {
                if let Some(t) = self.maps[g][b] {
                    let (rb, rt) = (find(&mut parent, b), find(&mut parent, t));
                    if rb != rt {
                        parent[rb.max(rt)] = rb.min(rt);
                    }
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for b in 0..nb {
            let r = find(&mut parent, b);
            classes.entry(r).or_default().push(b);
        }
        classes.into_values().collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Disjoint union over the same group; blocks of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &PartialAction) -> Result<PartialAction> {
        if self.group != other.group {
            return Err(Error::InvalidParameter("disjoint union needs the same group".into()));
        }
        let off = self.ring.num_blocks();
        let mut moduli = self.ring.moduli();
        moduli.extend(other.ring.moduli());
        let ring = ProductRing::new(&moduli)?;
        let n = self.group.order();
        let mut domains = Vec::with_capacity(n);
        let mut maps = Vec::with_capacity(n);
        for g in 0..n {
            domains.push(Ideal(self.domains[g].0 | (other.domains[g].0 << off)));
            let mut m = self.maps[g].clone();
            m.extend(other.maps[g].iter().map(|t| t.map(|t| t + off)));
            maps.push(m);
        }
        PartialAction::new(self.group.clone(), ring, domains, maps)
    }

    pub fn to_json(&self) -> ActionJson {
        let mut domains = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for g in 0..self.group.order() {
            domains.insert(g.to_string(), self.domains[g].to_vec());
            let m: BTreeMap<String, usize> = self.maps[g]
                .iter()
                .enumerate()
                .filter_map(|(b, t)| t.map(|t| (b.to_string(), t)))
                .collect();
            maps.insert(g.to_string(), m);
        }
        ActionJson { group: self.group.to_json(), ring: self.ring.to_json(), domains, maps }
    }

    pub fn from_json(json: &ActionJson) -> Result<Self> {
        let group = FiniteGroup::from_json(&json.group)?;
        let ring = ProductRing::from_json(&json.ring)?;
        let n = group.order();
        let nb = ring.num_blocks();
        let e = group.identity();
        let parse = |s: &str, what: &str, bound: usize| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| Error::Parse(format!("{what} key {s:?} is not an index")))?;
            if v >= bound {
                return Err(Error::Parse(format!("{what} key {s:?} is out of range")));
            }
            Ok(v)
        };
        let mut domains: Vec<Option<Ideal>> = vec![None; n];
        for (k, blocks) in &json.domains {
            let g = parse(k, "domains", n)?;
            if let Some(&b) = blocks.iter().find(|&&b| b >= nb) {
                return Err(Error::Parse(format!("domains.{k} lists missing block {b}")));
            }
            domains[g] = Some(Ideal::from_blocks(blocks.iter().copied()));
        }
        let domains: Vec<Ideal> = domains
            .into_iter()
            .enumerate()
            .map(|(g, d)| match d {
                Some(d) => Ok(d),
                None if g == e => Ok(ring.full()),
                None => Err(Error::Parse(format!("domains is missing key {g:?}"))),
            })
            .collect::<Result<_>>()?;
        let mut maps: Vec<Vec<Option<usize>>> = vec![vec![None; nb]; n];
        maps[e] = (0..nb).map(Some).collect();
        for (k, m) in &json.maps {
            let g = parse(k, "maps", n)?;
            maps[g] = vec![None; nb];
            for (bk, &t) in m {
                let b = parse(bk, &format!("maps.{k}"), nb)?;
                maps[g][b] = Some(t);
            }
        }
        PartialAction::new(group, ring, domains, maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn el(v: &[u64]) -> RingElement {
        RingElement(v.to_vec())
    }

    #[test]
    fn fixture_one_from_restriction() {
        let global = fixtures::cyclic_shift(3, 5).unwrap();
        let pa = global.restrict_global(Ideal::from_blocks([0, 1])).unwrap();
        assert_eq!(pa, fixtures::fixture1());
        assert!(pa.validate().valid);
        assert_eq!(pa.domain(1), Ideal::single(1));
        assert_eq!(pa.domain(2), Ideal::single(0));
        assert_eq!(pa.map_block(1, 0), Some(1));
    }

    #[test]
    fn restriction_edge_cases() {
        let global = fixtures::cyclic_shift(3, 5).unwrap();
        assert_eq!(global.restrict_global(global.ring().full()).unwrap(), global);

        let swap = fixtures::cyclic_shift(2, 3).unwrap();
        let r = swap.restrict_global(Ideal::single(0)).unwrap();
        assert!(r.domain(1).is_empty());
        assert_eq!(r.map_block(1, 0), None);

        assert!(matches!(
            fixtures::fixture1().restrict_global(Ideal::single(0)),
            Err(Error::NotAGlobalAction(_))
        ));
    }

    #[test]
    fn corrupted_fixture_reports_ii_prime() {
        let pa = fixtures::fixture1();
        let mut json = pa.to_json();
        json.maps.get_mut("1").unwrap().insert("0".into(), 0);
        // Redirected map still passes shape checks: it is defined on D_{g^-1} = {0}.
        let bad = PartialAction::from_json(&json).unwrap();
        let rep = bad.validate();
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.axiom == "(ii')" && v.g == Some(1) && v.h == Some(2)));
    }

    #[test]
    fn global_validity_is_homomorphism() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let ring = ProductRing::new(&[3, 3]).unwrap();
        let hom = PartialAction::global(g.clone(), ring.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(hom.validate().valid);
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let r3 = ProductRing::new(&[3, 3]).unwrap();
        // Z_3 acting by swap is not a homomorphism.
        let bad = PartialAction::global(z3, r3, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap();
        let rep = bad.validate();
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.axiom == "(iii')"));
    }

    #[test]
    fn apply_cases() {
        let pa = fixtures::fixture1();
        assert_eq!(pa.apply(1, &el(&[3, 4])), el(&[0, 3]));
        assert_eq!(pa.apply(0, &el(&[3, 4])), el(&[3, 4]));
        assert_eq!(pa.apply(2, &el(&[0, 2])), el(&[2, 0]));
    }

    #[test]
    fn orbit_cases() {
        assert_eq!(fixtures::fixture1().orbits(), vec![vec![0, 1]]);
        let triv = fixtures::trivial_action(FiniteGroup::cyclic(2).unwrap(), &[5, 5], false).unwrap();
        assert_eq!(triv.orbits(), vec![vec![0], vec![1]]);
        assert_eq!(fixtures::cyclic_shift(2, 3).unwrap().orbits(), vec![vec![0, 1]]);
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let pa = fixtures::fixture1();
        let text = serde_json::to_string(&pa.to_json()).unwrap();
        let back = PartialAction::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, pa);

        let text = r#"{"group":{"order":3,"table":[[0,1,2],[1,2,0],[2,0,1]]},"ring":{"blocks":[5,5]},
            "domains":{"1":[1],"2":[0]},"maps":{"1":{"0":1},"2":{"1":0}}}"#;
        let pa2 = PartialAction::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(pa2, pa);

        let bad = r#"{"group":{"order":1,"table":[[0]]},"ring":{"blocks":[5]},"domains":{"x":[0]}}"#;
        let err = PartialAction::from_json(&serde_json::from_str(bad).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("\"x\"")), "{err}");
    }

    #[test]
    fn product_ideal_images() {
        let pa = fixtures::fixture1();
        let g = pa.group();
        for x in g.elements() {
            for y1 in g.elements() {
                for y2 in g.elements() {
                    let src = pa.domain(g.inv(x)).meet(pa.domain(y1)).meet(pa.domain(y2));
                    let dst = pa.domain(x).meet(pa.domain(g.mul(x, y1))).meet(pa.domain(g.mul(x, y2)));
                    assert_eq!(pa.map_ideal(x, src), dst);
                }
            }
        }
    }

    #[test]
    fn apply_composes_on_lawful_domain() {
        let pa = fixtures::fixture1();
        let g = pa.group();
        let r = pa.ring();
        let a = el(&[3, 2]);
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(x, y);
                let i = pa.domain(g.inv(xy)).meet(pa.domain(g.inv(y)));
                let pa_ = r.project(&a, i);
                assert_eq!(pa.apply(x, &pa.apply(y, &pa_)), pa.apply(xy, &pa_));
            }
        }
    }
}
