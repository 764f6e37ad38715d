//! Stabilizer, transversal and the index maps `eta`, `tau`, `sigma` of a transitive
//! partial action.

use crate::action::PartialAction;
use crate::error::{Error, Result};
use crate::ring::RingElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityData {
    pub base: usize,
    pub stabilizer: Vec<usize>,
    in_stab: Vec<bool>,
    /// `Λ'`, identity first.
    pub transversal: Vec<usize>,
    /// Position of a transversal element in `Λ'`.
    pos: Vec<Option<usize>>,
    /// `x ↦ x̄`.
    pub bar: Vec<usize>,
    /// `x ↦ x^-1 x̄`.
    pub eta: Vec<usize>,
    /// `Λ ⊆ Λ'`, in transversal order.
    pub lambda: Vec<usize>,
    /// Block `α_t(λ0)` for each `t ∈ Λ`, indexed by group element.
    block_of: Vec<Option<usize>>,
    /// Element of `Λ` owning each block.
    pub elem_of_block: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<usize>,
    order: usize,
}

impl TransitivityData {
    /// Transversal chosen greedily in element-index order.
    pub fn new(pa: &PartialAction, base: usize) -> Result<Self> {
        let order: Vec<usize> = pa.group().elements().collect();
        Self::with_order(pa, base, &order)
    }

    /// Transversal chosen greedily along `order` (the identity is always taken first).
    pub fn with_order(pa: &PartialAction, base: usize, order: &[usize]) -> Result<Self> {
        let g = pa.group();
        let n = g.order();
        let nb = pa.ring().num_blocks();
        if base >= nb {
            return Err(Error::InvalidIndex(format!("base block {base} out of range")));
        }
        let orbits = pa.orbits().len();
        if orbits != 1 {
            return Err(Error::NotTransitive { orbits });
        }
        let mut seen = vec![false; n];
        for &x in order {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidParameter("transversal order must list each element once".into()));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter("transversal order must list each element once".into()));
        }

        let in_stab: Vec<bool> = (0..n).map(|x| pa.map_block(x, base) == Some(base)).collect();
        let stabilizer: Vec<usize> = (0..n).filter(|&x| in_stab[x]).collect();

        let e = g.identity();
        let mut bar = vec![usize::MAX; n];
        let mut transversal = Vec::new();
        let mut pos = vec![None; n];
        for x in std::iter::once(e).chain(order.iter().copied().filter(|&x| x != e)) {
            if bar[x] == usize::MAX {
                pos[x] = Some(transversal.len());
                transversal.push(x);
                for &h in &stabilizer {
                    bar[g.mul(x, h)] = x;
                }
            }
        }
        let eta: Vec<usize> = (0..n).map(|x| g.mul(g.inv(x), bar[x])).collect();

        let mut lambda = Vec::new();
        let mut block_of = vec![None; n];
        let mut elem_of_block = vec![usize::MAX; nb];
        for &t in &transversal {
            if let Some(b) = pa.map_block(t, base) {
                if elem_of_block[b] != usize::MAX {
                    return Err(Error::internal("distinct transversal blocks", &[t, elem_of_block[b]]));
                }
                lambda.push(t);
                block_of[t] = Some(b);
                elem_of_block[b] = t;
            }
        }
        if let Some(b) = elem_of_block.iter().position(|&t| t == usize::MAX) {
            return Err(Error::internal("transversal covers blocks", &[b]));
        }

        Ok(TransitivityData {
            base,
            stabilizer,
            in_stab,
            transversal,
            pos,
            bar,
            eta,
            lambda,
            block_of,
            elem_of_block,
            inv: g.inverse_table().to_vec(),
            mul: g.table_rows().concat(),
            order: n,
        })
    }

    #[inline]
    fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn in_stabilizer(&self, x: usize) -> bool {
        self.in_stab[x]
    }

    pub fn position(&self, t: usize) -> Option<usize> {
        self.pos[t]
    }

    /// Block `α_t(λ0)` for `t ∈ Λ`.
    pub fn block_of(&self, t: usize) -> Option<usize> {
        self.block_of[t]
    }

    pub fn in_lambda(&self, t: usize) -> bool {
        self.block_of[t].is_some()
    }

    /// `η_n^g(x_1..x_n)` for every prefix, plus the chain `c_k = bar(x_k^-1 ... x_1^-1 g)`.
    fn chain(&self, g: usize, xs: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut etas = Vec::with_capacity(xs.len());
        let mut cs = Vec::with_capacity(xs.len() + 1);
        let mut c = g;
        cs.push(c);
        for &x in xs {
            let y = self.m(self.inv[x], c);
            etas.push(self.eta[y]);
            c = self.bar[y];
            cs.push(c);
        }
        (etas, cs)
    }

    pub fn eta_n(&self, g: usize, xs: &[usize]) -> usize {
        *self.chain(g, xs).0.last().expect("n >= 1")
    }

    /// `τ_n^g(x)`.
    pub fn tau(&self, g: usize, xs: &[usize]) -> Vec<usize> {
        self.chain(g, xs).0
    }

    /// `σ_{n,i}^g(x)` for `i = 0..=n`; for `n = 0` the single tuple `(g^-1)`.
    pub fn sigma(&self, g: usize, xs: &[usize]) -> Vec<Vec<usize>> {
        let (etas, cs) = self.chain(g, xs);
        let n = xs.len();
        let mut out = Vec::with_capacity(n + 1);
        let mut s0 = vec![self.inv[g]];
        s0.extend_from_slice(xs);
        out.push(s0);
        for i in 1..=n {
            let mut s = etas[..i].to_vec();
            s.push(self.inv[cs[i]]);
            s.extend_from_slice(&xs[i..]);
            out.push(s);
        }
        out
    }

    /// `θ_g(a) = α_g(pr_{λ0}(a))`: the base residue of `a` placed at block `α_g(λ0)`.
    pub fn theta(&self, g: usize, a: &RingElement) -> Result<RingElement> {
        let b = self
            .block_of
            .get(g)
            .copied()
            .flatten()
            .ok_or_else(|| Error::InvalidIndex(format!("element {g} is not in Λ")))?;
        let mut out = RingElement(vec![0; a.0.len()]);
        out.0[b] = a.0[self.base];
        Ok(out)
    }
}
