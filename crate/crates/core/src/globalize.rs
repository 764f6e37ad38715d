//! Enveloping actions, the transported cocycle `w'` with its witness `ε`, the extension
//! `w̃`, the global lift `u`, and comparison of globalizations.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::action::PartialAction;
use crate::cochain::{cohomologous, delta, ensure_cocycle, signed_product, Cochain};
use crate::error::{Error, Result};
use crate::group::{glue, TupleSpace};
use crate::ring::{Ideal, ProductRing, RingElement, RingJson};
use crate::transitivity::TransitivityData;

/// Global action on `∏_{g ∈ Λ'} A_g` enveloping a transitive partial action.
#[derive(Debug, Clone)]
pub struct EnvelopingAction {
    pub source: PartialAction,
    pub td: TransitivityData,
    /// Block `i` of the envelope is the copy indexed by `td.transversal[i]`.
    pub global: PartialAction,
    /// Source block to envelope block.
    pub embed: Vec<usize>,
}

/// A cochain over the envelope whose values are units of the whole envelope ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalCochain(pub Cochain);

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeJson {
    pub ring: RingJson,
    pub transversal: Vec<usize>,
    pub beta: BTreeMap<String, Vec<usize>>,
    pub embed: Vec<usize>,
}

impl EnvelopingAction {
    pub fn build(pa: &PartialAction) -> Result<Self> {
        let order: Vec<usize> = pa.group().elements().collect();
        Self::build_with_order(pa, &order)
    }

    /// Envelope whose transversal is chosen greedily along `order`.
    pub fn build_with_order(pa: &PartialAction, order: &[usize]) -> Result<Self> {
        let td = TransitivityData::with_order(pa, 0, order)?;
        let gr = pa.group();
        let m = pa.ring().block(td.base).modulus;
        let k = td.transversal.len();
        let ring = ProductRing::new(&vec![m; k])?;
        let perms: Vec<Vec<usize>> = gr
            .elements()
            .map(|x| {
                td.transversal
                    .iter()
                    .map(|&g| td.position(td.bar[gr.mul(x, g)]).expect("bar lands in the transversal"))
                    .collect()
            })
            .collect();
        let global = PartialAction::global(gr.clone(), ring, perms)?;
        let embed = td.elem_of_block.iter().map(|&t| td.position(t).expect("Λ ⊆ Λ'")).collect();
        let env = EnvelopingAction { source: pa.clone(), td, global, embed };
        if let Some(v) = env.global.validate().violations.first() {
            return Err(Error::internal(&format!("envelope axiom {}", v.axiom), &[v.g.unwrap_or(0)]));
        }
        if !env.round_trip_ok()? {
            return Err(Error::internal("envelope restriction round trip", &[]));
        }
        if let Some(b) = env.embedding_views_disagree() {
            return Err(Error::internal("function and block views of the embedding", &[b]));
        }
        Ok(env)
    }

    pub fn ring(&self) -> &ProductRing {
        self.global.ring()
    }

    pub fn embedded_ideal(&self) -> Ideal {
        Ideal::from_blocks(self.embed.iter().copied())
    }

    /// Restricting the envelope to the embedded blocks gives back the source action.
    pub fn round_trip_ok(&self) -> Result<bool> {
        let restricted = self.global.restrict_to(self.embedded_ideal())?;
        // restrict_to renumbers blocks by ascending envelope position.
        let sorted: Vec<usize> = self.embedded_ideal().to_vec();
        let to_new = |b: usize| sorted.iter().position(|&p| p == self.embed[b]).expect("embedded");
        let n = self.source.group().order();
        let nb = self.source.ring().num_blocks();
        for g in 0..n {
            let dom = Ideal::from_blocks(self.source.domain(g).iter().map(to_new));
            if dom != restricted.domain(g) {
                return Ok(false);
            }
            for b in 0..nb {
                if self.source.map_block(g, b).map(to_new) != restricted.map_block(g, to_new(b)) {
                    return Ok(false);
                }
            }
        }
        Ok(self.source.ring().moduli().iter().all(|&m| m == self.ring().block(0).modulus))
    }

    /// Envelope element of `a ∈ A`.
    pub fn embed_element(&self, a: &RingElement) -> RingElement {
        let mut out = self.ring().zero();
        for (b, &p) in self.embed.iter().enumerate() {
            out.0[p] = a.0[b];
        }
        out
    }

    /// `φ(a)|_t = α_{t^-1}(1_t a)` for every `t`.
    pub fn phi(&self, a: &RingElement) -> Vec<RingElement> {
        let gr = self.source.group();
        gr.elements().map(|t| self.source.apply(gr.inv(t), a)).collect()
    }

    /// Function view of an envelope element: `f|_t[α_{g0}(λ0)] = c[bar(t g0)]`.
    pub fn block_to_function(&self, c: &RingElement) -> Vec<RingElement> {
        let gr = self.source.group();
        let nb = self.source.ring().num_blocks();
        gr.elements()
            .map(|t| {
                RingElement(
                    (0..nb)
                        .map(|b| {
                            let g0 = self.td.elem_of_block[b];
                            c.0[self.td.position(self.td.bar[gr.mul(t, g0)]).expect("transversal")]
                        })
                        .collect(),
                )
            })
            .collect()
    }

    fn embedding_views_disagree(&self) -> Option<usize> {
        let r = self.source.ring();
        (0..r.num_blocks()).find(|&b| {
            let e = r.idempotent_of(Ideal::single(b));
            self.phi(&e) != self.block_to_function(&self.embed_element(&e))
        })
    }

    /// Transports an envelope cochain from `other` (same source, different transversal)
    /// to this envelope by matching cosets.
    pub fn transport_from(&self, other: &EnvelopingAction, f: &Cochain) -> Cochain {
        let perm: Vec<usize> = other
            .td
            .transversal
            .iter()
            .map(|&g| self.td.position(self.td.bar[g]).expect("transversal"))
            .collect();
        let values = f
            .values
            .iter()
            .map(|v| {
                let mut out = self.ring().zero();
                for (i, &p) in perm.iter().enumerate() {
                    out.0[p] = v.0[i];
                }
                out
            })
            .collect();
        Cochain { degree: f.degree, values }
    }

    pub fn to_json(&self) -> EnvelopeJson {
        let gr = self.global.group();
        let k = self.td.transversal.len();
        let beta =
            gr.elements().map(|x| (x.to_string(), (0..k).map(|p| self.global.map_block(x, p).unwrap()).collect())).collect();
        EnvelopeJson {
            ring: self.ring().to_json(),
            transversal: self.td.transversal.clone(),
            beta,
            embed: self.embed.clone(),
        }
    }
}

fn assemble_theta(pa: &PartialAction, td: &TransitivityData, parts: &[(usize, RingElement)]) -> Result<RingElement> {
    let thetas = parts.iter().map(|(g, a)| td.theta(*g, a)).collect::<Result<Vec<_>>>()?;
    Ok(pa.ring().assemble(&thetas))
}

/// `w̃'(x) = ∏_{g ∈ Λ} θ_g(w(τ_n^g(x)))`, without the idempotent.
pub fn w_tilde_prime(pa: &PartialAction, td: &TransitivityData, w: &Cochain) -> Result<Cochain> {
    let n = w.degree;
    let src = TupleSpace::new(pa.group().order(), n);
    let mut values = Vec::with_capacity(src.len());
    for xs in src.iter() {
        let parts: Vec<(usize, RingElement)> =
            td.lambda.iter().map(|&g| (g, w.values[src.index(&td.tau(g, &xs))].clone())).collect();
        values.push(assemble_theta(pa, td, &parts)?);
    }
    Ok(Cochain { degree: n, values })
}

/// `w'(x) = 1_{(x)} ∏_{g ∈ Λ} θ_g(w(τ_n^g(x)))`.
pub fn w_prime(pa: &PartialAction, td: &TransitivityData, w: &Cochain) -> Result<Cochain> {
    let mut t = w_tilde_prime(pa, td, w)?;
    let ts = TupleSpace::new(pa.group().order(), w.degree);
    for (i, v) in t.values.iter_mut().enumerate() {
        *v = pa.ring().project(v, pa.tuple_ideal(&ts.tuple(i)));
    }
    Ok(t)
}

/// `ε(x') = 1_{(x')} ∏_{g ∈ Λ} θ_g(∏_{i=0}^{n-1} w(σ_{n-1,i}^g(x'))^{(-1)^i})`, degree `n - 1`.
pub fn epsilon(pa: &PartialAction, td: &TransitivityData, w: &Cochain) -> Result<Cochain> {
    let n = w.degree;
    if n == 0 {
        return Err(Error::InvalidParameter("ε needs degree at least 1".into()));
    }
    let gn = pa.group().order();
    let src = TupleSpace::new(gn, n);
    let dst = TupleSpace::new(gn, n - 1);
    let mut values = Vec::with_capacity(dst.len());
    for xs in dst.iter() {
        let mut parts = Vec::with_capacity(td.lambda.len());
        for &g in &td.lambda {
            let sig = td.sigma(g, &xs);
            let factors: Vec<(&RingElement, bool)> =
                sig.iter().enumerate().map(|(i, s)| (&w.values[src.index(s)], i % 2 == 1)).collect();
            parts.push((g, signed_product(pa.ring(), &factors)?));
        }
        let v = assemble_theta(pa, td, &parts)?;
        values.push(pa.ring().project(&v, pa.tuple_ideal(&xs)));
    }
    Ok(Cochain { degree: n - 1, values })
}

/// First tuple where `w = δ^{n-1} ε · w'` fails, or where `w'` fails to be a cocycle
/// (reported with a leading marker `usize::MAX`).
pub fn check_w_prime_theorem(pa: &PartialAction, td: &TransitivityData, w: &Cochain) -> Result<Option<Vec<usize>>> {
    let wp = w_prime(pa, td, w)?;
    let eps = epsilon(pa, td, w)?;
    if wp.validate(pa).is_err() || eps.validate(pa).is_err() {
        return Ok(Some(vec![]));
    }
    let rhs = delta(pa, &eps)?.mul(pa, &wp)?;
    let ts = TupleSpace::new(pa.group().order(), w.degree);
    if let Some(i) = w.values.iter().zip(&rhs.values).position(|(a, b)| a != b) {
        return Ok(Some(ts.tuple(i)));
    }
    if let Some(mut t) = crate::cochain::cocycle_failure(pa, &wp)? {
        t.insert(0, usize::MAX);
        return Ok(Some(t));
    }
    Ok(None)
}

/// The pieces of the extension `w̃ = δ̃ε̃ · w̃'`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub w_prime: Cochain,
    pub w_tilde_prime: Cochain,
    pub epsilon: Cochain,
    pub w_tilde: Cochain,
}

fn fill_ones(ring: &ProductRing, a: &RingElement, ideal: Ideal) -> RingElement {
    RingElement(a.0.iter().enumerate().map(|(i, &r)| if ideal.contains(i) { r } else { 1 % ring.block(i).modulus }).collect())
}

/// Computes `w̃` and asserts the restriction law and both extended identities.
pub fn extend(pa: &PartialAction, td: &TransitivityData, w: &Cochain) -> Result<Extension> {
    ensure_cocycle(pa, w)?;
    let n = w.degree;
    if n == 0 {
        return Err(Error::InvalidParameter("extension needs degree at least 1".into()));
    }
    let r = pa.ring();
    let gn = pa.group().order();
    let wp = w_prime(pa, td, w)?;
    let wtp = w_tilde_prime(pa, td, w)?;
    let eps = epsilon(pa, td, w)?;
    let src = TupleSpace::new(gn, n);
    let low = TupleSpace::new(gn, n - 1);
    let eps_t: Vec<RingElement> =
        low.iter().map(|xs| fill_ones(r, &eps.values[low.index(&xs)], pa.tuple_ideal(&xs))).collect();
    let mut values = Vec::with_capacity(src.len());
    for xs in src.iter() {
        let first = fill_ones(r, &pa.apply(xs[0], &eps_t[low.index(&xs[1..])]), pa.domain(xs[0]));
        let mut owned: Vec<(RingElement, bool)> = vec![(first, false)];
        for i in 1..n {
            owned.push((eps_t[low.index(&glue(pa.group(), &xs, i))].clone(), i % 2 == 1));
        }
        owned.push((eps_t[low.index(&xs[..n - 1])].clone(), n % 2 == 1));
        owned.push((wtp.values[src.index(&xs)].clone(), false));
        let factors: Vec<(&RingElement, bool)> = owned.iter().map(|(a, s)| (a, *s)).collect();
        values.push(signed_product(r, &factors)?);
    }
    let wt = Cochain { degree: n, values };
    let ext = Extension { w_prime: wp, w_tilde_prime: wtp, epsilon: eps, w_tilde: wt };
    if let Some(t) = check_restriction(pa, w, &ext.w_tilde) {
        return Err(Error::internal("restriction of the extension", &t));
    }
    if let Some(t) = check_extended_identity(pa, &ext.w_tilde)? {
        return Err(Error::internal("extended cocycle identity", &t));
    }
    if let Some(t) = check_extended_identity(pa, &ext.w_tilde_prime)? {
        return Err(Error::internal("quasi-cocycle identity", &t));
    }
    Ok(ext)
}

/// First tuple where `w(x) ≠ 1_{(x)} w̃(x)`.
pub fn check_restriction(pa: &PartialAction, w: &Cochain, wt: &Cochain) -> Option<Vec<usize>> {
    let ts = TupleSpace::new(pa.group().order(), w.degree);
    (0..ts.len()).find_map(|i| {
        let xs = ts.tuple(i);
        (pa.ring().project(&wt.values[i], pa.tuple_ideal(&xs)) != w.values[i]).then_some(xs)
    })
}

/// First `(x_1..x_{n+1})` where
/// `α_{x_1}(1_{x_1^-1} f(x_2..)) ∏ f(..x_i x_{i+1}..)^{(-1)^i} f(x_1..x_n)^{(-1)^{n+1}} ≠ 1_{x_1}`
/// for a cochain `f` with values in `U(A)`.
pub fn check_extended_identity(pa: &PartialAction, f: &Cochain) -> Result<Option<Vec<usize>>> {
    let n = f.degree;
    let gn = pa.group().order();
    let src = TupleSpace::new(gn, n);
    for xs in TupleSpace::new(gn, n + 1).iter() {
        let first = pa.apply(xs[0], &f.values[src.index(&xs[1..])]);
        let mut owned = vec![(first, false)];
        for i in 1..=n {
            owned.push((f.values[src.index(&glue(pa.group(), &xs, i))].clone(), i % 2 == 1));
        }
        owned.push((f.values[src.index(&xs[..n])].clone(), n % 2 == 0));
        let factors: Vec<(&RingElement, bool)> = owned.iter().map(|(a, s)| (a, *s)).collect();
        let lhs = signed_product(pa.ring(), &factors)?;
        if lhs != pa.ring().idempotent_of(pa.domain(xs[0])) {
            return Ok(Some(xs));
        }
    }
    Ok(None)
}

/// A globalization in both views.
#[derive(Debug, Clone)]
pub struct Lift {
    /// `function[slot][t] = u(x)|_t`.
    pub function: Vec<Vec<RingElement>>,
    pub u: GlobalCochain,
}

/// `u(x)|_t` from `w̃`, converted to the block view `c[g] = u|_g[λ0]`.
pub fn lift(env: &EnvelopingAction, wt: &Cochain) -> Result<Lift> {
    let pa = &env.source;
    let gr = pa.group();
    let r = pa.ring();
    let n = wt.degree;
    let ts = TupleSpace::new(gr.order(), n);
    let mut function = Vec::with_capacity(ts.len());
    for xs in ts.iter() {
        let mut row = Vec::with_capacity(gr.order());
        for t in gr.elements() {
            let ti = gr.inv(t);
            let mut owned: Vec<(RingElement, bool)> = Vec::new();
            let mut a = vec![ti];
            a.extend_from_slice(&xs[..n - 1]);
            owned.push((wt.values[ts.index(&a)].clone(), n % 2 == 1));
            let mut b = vec![gr.mul(ti, xs[0])];
            b.extend_from_slice(&xs[1..]);
            owned.push((wt.values[ts.index(&b)].clone(), false));
            for i in 1..n {
                let mut c = vec![ti];
                c.extend(glue(gr, &xs, i));
                owned.push((wt.values[ts.index(&c)].clone(), i % 2 == 1));
            }
            let factors: Vec<(&RingElement, bool)> = owned.iter().map(|(a, s)| (a, *s)).collect();
            row.push(signed_product(r, &factors)?);
        }
        function.push(row);
    }
    Ok(Lift { u: GlobalCochain(function_to_block(env, &function, n)), function })
}

fn function_to_block(env: &EnvelopingAction, function: &[Vec<RingElement>], n: usize) -> Cochain {
    let base = env.td.base;
    let values = function
        .iter()
        .map(|row| RingElement(env.td.transversal.iter().map(|&g| row[g].0[base]).collect()))
        .collect();
    Cochain { degree: n, values }
}

/// The constant globalization of a 0-cocycle.
pub fn lift_degree_zero(env: &EnvelopingAction, a: &RingElement) -> Lift {
    let gr = env.source.group();
    let function = vec![gr.elements().map(|_| a.clone()).collect()];
    Lift { u: GlobalCochain(function_to_block(env, &function, 0)), function }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LiftChecks {
    pub global_cocycle: Option<Vec<usize>>,
    pub restriction: Option<Vec<usize>>,
    pub germ: Option<Vec<usize>>,
    pub views_agree: Option<Vec<usize>>,
}

impl LiftChecks {
    pub fn all_pass(&self) -> bool {
        self.global_cocycle.is_none() && self.restriction.is_none() && self.germ.is_none() && self.views_agree.is_none()
    }
}

/// Checks `u` against `w` (and `w̃` when given): strict cocycle in both views, the
/// restriction law `φ(w(x)) = φ(1_{(x)}) u(x)`, the germ `u|_1 = w̃`, and agreement of
/// the function view with the block view.
pub fn check_lift(env: &EnvelopingAction, w: &Cochain, wt: Option<&Cochain>, lift: &Lift) -> Result<LiftChecks> {
    let pa = &env.source;
    let gr = pa.group();
    let r = pa.ring();
    let n = w.degree;
    let ts = TupleSpace::new(gr.order(), n);
    let mut out = LiftChecks::default();

    let u = &lift.u.0;
    if u.values.iter().any(|v| !env.ring().is_unit_of(v, env.ring().full())) {
        out.global_cocycle = Some(vec![]);
    } else if let Some(t) = crate::cochain::cocycle_failure(&env.global, u)? {
        out.global_cocycle = Some(t);
    } else if let Some(t) = function_cocycle_failure(env, &lift.function, n)? {
        out.global_cocycle = Some(t);
    }

    for (i, xs) in ts.iter().enumerate() {
        let ideal_one = r.idempotent_of(pa.tuple_ideal(&xs));
        let ok = gr.elements().all(|t| {
            let lhs = pa.apply(gr.inv(t), &w.values[i]);
            let rhs = r.mul_unchecked(&pa.apply(gr.inv(t), &ideal_one), &lift.function[i][t]);
            lhs == rhs
        });
        if !ok {
            out.restriction = Some(xs);
            break;
        }
    }

    if let Some(wt) = wt {
        let e = gr.identity();
        out.germ = (0..ts.len()).find(|&i| lift.function[i][e] != wt.values[i]).map(|i| ts.tuple(i));
    }

    out.views_agree = (0..ts.len()).find(|&i| env.block_to_function(&u.values[i]) != lift.function[i]).map(|i| ts.tuple(i));
    Ok(out)
}

/// `β_{x_1}(u(x_2..)) ∏ u(..)^{(-1)^i} u(x_1..x_n)^{(-1)^{n+1}} = 1` in `F(G, A)`.
fn function_cocycle_failure(env: &EnvelopingAction, f: &[Vec<RingElement>], n: usize) -> Result<Option<Vec<usize>>> {
    let pa = &env.source;
    let gr = pa.group();
    let r = pa.ring();
    let src = TupleSpace::new(gr.order(), n);
    let one = r.one();
    for xs in TupleSpace::new(gr.order(), n + 1).iter() {
        for t in gr.elements() {
            let first = f[src.index(&xs[1..])][gr.mul(gr.inv(xs[0]), t)].clone();
            let mut owned = vec![(first, false)];
            if n == 0 {
                owned.push((f[0][t].clone(), true));
            } else {
                for i in 1..=n {
                    owned.push((f[src.index(&glue(gr, &xs, i))][t].clone(), i % 2 == 1));
                }
                owned.push((f[src.index(&xs[..n])][t].clone(), n % 2 == 0));
            }
            let factors: Vec<(&RingElement, bool)> = owned.iter().map(|(a, s)| (a, *s)).collect();
            if signed_product(r, &factors)? != one {
                return Ok(Some(xs));
            }
        }
    }
    Ok(None)
}

/// Every unit `c` of the envelope that is a global 0-cocycle restricting to `a`.
/// Errors when the envelope unit group exceeds `bound`.
pub fn degree_zero_globalizations(env: &EnvelopingAction, a: &RingElement, bound: u64) -> Result<Vec<RingElement>> {
    let pres = crate::abelian::AbelianPresentation::cochains(&env.global, 0);
    let total = pres
        .order_u64()
        .filter(|&t| t <= bound)
        .ok_or_else(|| Error::TooLarge("envelope unit group exceeds the enumeration bound".into()))?;
    let w = Cochain { degree: 0, values: vec![a.clone()] };
    let mut out = Vec::new();
    for idx in 0..total {
        let c = pres.decode(&env.global, &pres.unrank(idx)).values.remove(0);
        let lift = Lift { function: vec![env.block_to_function(&c)], u: GlobalCochain(Cochain { degree: 0, values: vec![c.clone()] }) };
        let checks = check_lift(env, &w, None, &lift)?;
        if checks.global_cocycle.is_none() && checks.restriction.is_none() {
            out.push(c);
        }
    }
    Ok(out)
}

/// Per-orbit output of [`globalize`].
#[derive(Debug, Clone)]
pub struct OrbitGlobalization {
    /// Source blocks of this orbit, ascending.
    pub blocks: Vec<usize>,
    pub env: EnvelopingAction,
    /// The partial cocycle restricted to the orbit.
    pub w: Cochain,
    pub extension: Option<Extension>,
    pub lift: Lift,
    pub checks: LiftChecks,
}

/// Restriction of a cochain to an invariant set of blocks, renumbered ascending.
pub fn project_cochain(f: &Cochain, blocks: &[usize]) -> Cochain {
    let values = f.values.iter().map(|v| RingElement(blocks.iter().map(|&b| v.0[b]).collect())).collect();
    Cochain { degree: f.degree, values }
}

/// Transitive pipeline for one orbit with a chosen transversal order.
pub fn globalize_transitive(pa: &PartialAction, w: &Cochain, order: &[usize]) -> Result<OrbitGlobalization> {
    ensure_cocycle(pa, w)?;
    let env = EnvelopingAction::build_with_order(pa, order)?;
    let (extension, lift) = if w.degree == 0 {
        (None, lift_degree_zero(&env, &w.values[0]))
    } else {
        let ext = extend(pa, &env.td, w)?;
        let l = lift(&env, &ext.w_tilde)?;
        (Some(ext), l)
    };
    let checks = check_lift(&env, w, extension.as_ref().map(|e| &e.w_tilde), &lift)?;
    if !checks.all_pass() {
        return Err(Error::internal("globalization checks", checks.global_cocycle.as_deref().unwrap_or(&[])));
    }
    let blocks = (0..pa.ring().num_blocks()).collect();
    Ok(OrbitGlobalization { blocks, env, w: w.clone(), extension, lift, checks })
}

/// Globalizes a partial cocycle orbit by orbit.
pub fn globalize(pa: &PartialAction, w: &Cochain) -> Result<Vec<OrbitGlobalization>> {
    let order: Vec<usize> = pa.group().elements().collect();
    globalize_with_order(pa, w, &order)
}

pub fn globalize_with_order(pa: &PartialAction, w: &Cochain, order: &[usize]) -> Result<Vec<OrbitGlobalization>> {
    ensure_cocycle(pa, w)?;
    let mut out = Vec::new();
    for orbit in pa.orbits() {
        let sub = pa.restrict_to(Ideal::from_blocks(orbit.iter().copied()))?;
        let wo = project_cochain(w, &orbit);
        let mut g = globalize_transitive(&sub, &wo, order)?;
        g.blocks = orbit;
        out.push(g);
    }
    Ok(out)
}

/// `ζ` over `env` with `u2 = u1 · δζ`. `xi`, when given, is a partial witness with
/// `w2 = w1 · δ xi` for the partial cocycles the `u_i` globalize.
pub fn compare_globalizations(
    env: &EnvelopingAction,
    u1: &GlobalCochain,
    u2: &GlobalCochain,
    xi: Option<&Cochain>,
) -> Result<Cochain> {
    let (u1, u2) = (&u1.0, &u2.0);
    let genv = &env.global;
    if u1.degree != u2.degree {
        return Err(Error::InvalidParameter("degrees differ".into()));
    }
    ensure_cocycle(genv, u1)?;
    ensure_cocycle(genv, u2)?;
    let n = u1.degree;
    if n == 0 {
        return if u1 == u2 { Ok(Cochain::identity(genv, 0)) } else { Err(Error::NotCohomologous) };
    }
    if let Some(z) = constructive_witness(env, u1, u2, xi)? {
        if &u1.mul(genv, &delta(genv, &z)?)? == u2 {
            return Ok(z);
        }
    }
    cohomologous(genv, u1, u2)?.ok_or(Error::NotCohomologous)
}

fn constructive_witness(env: &EnvelopingAction, u1: &Cochain, u2: &Cochain, xi: Option<&Cochain>) -> Result<Option<Cochain>> {
    let genv = &env.global;
    let gr = genv.group();
    let n = u1.degree;
    // Transversal of the envelope's own stabilizer equal to Λ', in the same order.
    let mut order = env.td.transversal.clone();
    order.extend(gr.elements().filter(|x| !env.td.transversal.contains(x)));
    let tde = TransitivityData::with_order(genv, 0, &order)?;
    if tde.transversal != env.td.transversal {
        return Ok(None);
    }
    let e1 = epsilon(genv, &tde, u1)?;
    let e2 = epsilon(genv, &tde, u2)?;
    let low = TupleSpace::new(gr.order(), n - 1);
    let k = env.td.transversal.len();
    let xi_prime = match xi {
        None => Cochain::identity(genv, n - 1),
        Some(x) => {
            if x.degree != n - 1 {
                return Err(Error::InvalidParameter("witness has the wrong degree".into()));
            }
            let values = low
                .iter()
                .map(|xs| {
                    RingElement(
                        (0..k)
                            .map(|p| {
                                let g = env.td.transversal[p];
                                x.values[low.index(&env.td.tau(g, &xs))].0[env.td.base]
                            })
                            .collect(),
                    )
                })
                .collect();
            Cochain { degree: n - 1, values }
        }
    };
    if xi_prime.validate(genv).is_err() {
        return Ok(None);
    }
    Ok(Some(e2.mul(genv, &e1.inv(genv)?)?.mul(genv, &xi_prime)?))
}
