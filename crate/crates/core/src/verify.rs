//! Seeded theorem suite over one action, and the partial-versus-global cohomology check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::PartialAction;
use crate::cochain::{delta, random_cochain, Cochain};
use crate::cohomology::{cohomology, random_cocycle_from, DeltaMatrix};
use crate::error::{Error, Result};
use crate::globalize::{
    check_w_prime_theorem, compare_globalizations, degree_zero_globalizations, extend, globalize_transitive,
    project_cochain, EnvelopingAction, GlobalCochain,
};
use crate::ring::Ideal;
use crate::transitivity::TransitivityData;

/// Envelope unit groups up to this size are enumerated for the degree-0 uniqueness check.
pub const DEGREE_ZERO_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub orbit: Option<usize>,
    pub tuple: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub degree: usize,
    pub pass: bool,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub degrees: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    pub properties: Vec<PropertyResult>,
    pub all_pass: bool,
}

struct Tally {
    name: &'static str,
    degree: usize,
    checked: usize,
    failure: Option<Counterexample>,
}

impl Tally {
    fn new(name: &'static str, degree: usize) -> Self {
        Tally { name, degree, checked: 0, failure: None }
    }

    fn record(&mut self, trial: usize, orbit: Option<usize>, outcome: Option<(Vec<usize>, String)>) {
        self.checked += 1;
        if let (None, Some((tuple, detail))) = (&self.failure, outcome) {
            self.failure = Some(Counterexample { trial, orbit, tuple, detail });
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            property: self.name.to_string(),
            degree: self.degree,
            pass: self.failure.is_none(),
            checked: self.checked,
            counterexample: self.failure,
        }
    }
}

/// Turns theorem-check errors into counterexamples; everything else propagates.
fn as_outcome<T>(r: Result<T>) -> Result<std::result::Result<T, (Vec<usize>, String)>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::Internal { check, tuple }) => Ok(Err((tuple, check))),
        Err(e) => Err(e),
    }
}

struct Orbit {
    blocks: Vec<usize>,
    pa: PartialAction,
    td: TransitivityData,
}

fn split_orbits(pa: &PartialAction) -> Result<Vec<Orbit>> {
    pa.orbits()
        .into_iter()
        .map(|blocks| {
            let sub = pa.restrict_to(Ideal::from_blocks(blocks.iter().copied()))?;
            let td = TransitivityData::new(&sub, 0)?;
            Ok(Orbit { blocks, pa: sub, td })
        })
        .collect()
}

/// Runs every property for each degree with `trials` random samples.
pub fn verify(pa: &PartialAction, seed: u64, trials: usize, degrees: &[usize]) -> Result<VerifyReport> {
    pa.ensure_valid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orbits = split_orbits(pa)?;
    let gr = pa.group();
    let fwd: Vec<usize> = gr.elements().collect();
    let rev: Vec<usize> = fwd.iter().rev().copied().collect();
    let mut properties = Vec::new();

    for &n in degrees {
        let mut dd = Tally::new("delta_squared", n);
        let mut thm = Tally::new("w_prime_theorem", n);
        let mut ext = Tally::new("extension", n);
        let mut lift = Tally::new("lift", n);
        let mut uniq = Tally::new("uniqueness", n);
        let mut func = Tally::new("functoriality", n);

        let dm = DeltaMatrix::new(pa, n)?;
        let id2 = Cochain::identity(pa, n + 2);
        for trial in 0..trials {
            let f = random_cochain(&mut rng, pa, n);
            let ddf = delta(pa, &delta(pa, &f)?)?;
            let bad = (0..ddf.values.len()).find(|&i| ddf.values[i] != id2.values[i]);
            dd.record(trial, None, bad.map(|i| (ddf.space(pa).tuple(i), "δδf differs from the identity".into())));

            let w = random_cocycle_from(&mut rng, pa, &dm);
            let w2 = random_cocycle_from(&mut rng, pa, &dm);
            for (k, o) in orbits.iter().enumerate() {
                let wo = project_cochain(&w, &o.blocks);
                if n >= 1 {
                    let r = check_w_prime_theorem(&o.pa, &o.td, &wo)?;
                    thm.record(trial, Some(k), r.map(|t| (t, "w = δε·w' or w' cocycle".into())));
                    let e = as_outcome(extend(&o.pa, &o.td, &wo))?;
                    ext.record(trial, Some(k), e.err());
                }
                let a = match as_outcome(globalize_transitive(&o.pa, &wo, &fwd))? {
                    Ok(a) => a,
                    Err(fail) => {
                        lift.record(trial, Some(k), Some(fail));
                        continue;
                    }
                };
                lift.record(trial, Some(k), None);

                if n == 0 {
                    let all = degree_zero_globalizations(&a.env, &wo.values[0], DEGREE_ZERO_BOUND)?;
                    let ok = all.len() == 1 && all[0] == a.lift.u.0.values[0];
                    uniq.record(trial, Some(k), (!ok).then(|| (vec![], format!("{} globalizations", all.len()))));
                } else {
                    let b = globalize_transitive(&o.pa, &wo, &rev)?;
                    let u2 = GlobalCochain(a.env.transport_from(&b.env, &b.lift.u.0));
                    uniq.record(trial, Some(k), witness_failure(&a.env, &a.lift.u, &u2, None)?);
                }

                let wo2 = project_cochain(&w2, &o.blocks);
                func.record(trial, Some(k), functoriality_failure(&o.pa, &a.env, &wo, &wo2, &a.lift.u)?);
            }
        }
        properties.extend([dd, thm, ext, lift, uniq, func].into_iter().filter(|t| t.checked > 0).map(Tally::finish));

        let iso = check_partial_global_iso(pa, &[n])?;
        let mut t = Tally::new("partial_global_iso", n);
        t.record(0, None, iso[0].mismatch());
        properties.push(t.finish());
    }

    let all_pass = properties.iter().all(|p| p.pass);
    Ok(VerifyReport {
        seed,
        trials,
        degrees: degrees.to_vec(),
        orbits: orbits.into_iter().map(|o| o.blocks).collect(),
        properties,
        all_pass,
    })
}

/// `None` when a witness `ζ` is found and `u2 = u1 · δζ` checks out.
fn witness_failure(
    env: &EnvelopingAction,
    u1: &GlobalCochain,
    u2: &GlobalCochain,
    xi: Option<&Cochain>,
) -> Result<Option<(Vec<usize>, String)>> {
    let g = &env.global;
    if u1.0.degree == 0 {
        return Ok((u1 != u2).then(|| (vec![], "degree-0 globalizations differ".into())));
    }
    match compare_globalizations(env, u1, u2, xi) {
        Ok(z) => {
            let ok = u1.0.mul(g, &delta(g, &z)?)? == u2.0;
            Ok((!ok).then(|| (vec![], "witness does not verify".into())))
        }
        Err(Error::NotCohomologous) => Ok(Some((vec![], "no witness".into()))),
        Err(e) => Err(e),
    }
}

/// `u(w1 · w2)` is cohomologous to `u(w1) · u(w2)` over the same envelope.
fn functoriality_failure(
    pa: &PartialAction,
    env: &EnvelopingAction,
    w1: &Cochain,
    w2: &Cochain,
    u1: &GlobalCochain,
) -> Result<Option<(Vec<usize>, String)>> {
    let order = env.td.transversal.iter().copied().chain(pa.group().elements()).collect::<Vec<_>>();
    let mut seen = vec![false; pa.group().order()];
    let order: Vec<usize> = order.into_iter().filter(|&x| !std::mem::replace(&mut seen[x], true)).collect();
    let b = globalize_transitive(pa, w2, &order)?;
    let c = globalize_transitive(pa, &w1.mul(pa, w2)?, &order)?;
    let g = &env.global;
    let prod = GlobalCochain(u1.0.mul(g, &env.transport_from(&b.env, &b.lift.u.0))?);
    let uc = GlobalCochain(env.transport_from(&c.env, &c.lift.u.0));
    witness_failure(env, &prod, &uc, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoEntry {
    pub degree: usize,
    pub partial: Vec<u64>,
    pub global: Vec<u64>,
    pub equal: bool,
}

impl IsoEntry {
    fn mismatch(&self) -> Option<(Vec<usize>, String)> {
        (!self.equal).then(|| (vec![self.degree], format!("partial {:?} vs global {:?}", self.partial, self.global)))
    }
}

/// The global action on the envelopes of all orbits, side by side.
pub fn envelope_of(pa: &PartialAction) -> Result<PartialAction> {
    let mut out: Option<PartialAction> = None;
    for o in split_orbits(pa)? {
        let env = EnvelopingAction::build(&o.pa)?;
        out = Some(match out {
            None => env.global,
            Some(acc) => acc.disjoint_union(&env.global)?,
        });
    }
    out.ok_or_else(|| Error::InvalidParameter("action has no blocks".into()))
}

/// Invariant factors of partial `H^n(G, A)` against global `H^n` over the envelope.
pub fn check_partial_global_iso(pa: &PartialAction, degrees: &[usize]) -> Result<Vec<IsoEntry>> {
    let env = envelope_of(pa)?;
    degrees
        .iter()
        .map(|&n| {
            let partial = cohomology(pa, n)?.invariant_factors;
            let global = cohomology(&env, n)?.invariant_factors;
            Ok(IsoEntry { degree: n, equal: partial == global, partial, global })
        })
        .collect()
}
