//! Canonical small actions and seeded random instances used by tests and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::PartialAction;
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::ring::{Ideal, ProductRing};

/// `Z_n` acting on `Z_m^n` by cyclically shifting blocks: `g` sends block `b` to `b + g`.
pub fn cyclic_shift(n: usize, modulus: u64) -> Result<PartialAction> {
    let group = FiniteGroup::cyclic(n)?;
    let ring = ProductRing::new(&vec![modulus; n])?;
    let perms = (0..n).map(|g| (0..n).map(|b| (b + g) % n).collect()).collect();
    PartialAction::global(group, ring, perms)
}

/// `Z_3` on `Z_5 x Z_5`, obtained by restricting the shift action on `Z_5^3` to two blocks.
pub fn fixture1() -> PartialAction {
    cyclic_shift(3, 5).and_then(|g| g.restrict_global(Ideal::from_blocks([0, 1]))).expect("fixture")
}

/// `Z_4` on `Z_3 x Z_3`, globally, through the swap.
pub fn fixture2() -> PartialAction {
    let group = FiniteGroup::cyclic(4).expect("fixture");
    let ring = ProductRing::new(&[3, 3]).expect("fixture");
    let perms = (0..4).map(|g| if g % 2 == 1 { vec![1, 0] } else { vec![0, 1] }).collect();
    PartialAction::global(group, ring, perms).expect("fixture")
}

/// `Z_2` acting trivially on `Z_5`.
pub fn fixture3() -> PartialAction {
    trivial_action(FiniteGroup::cyclic(2).expect("fixture"), &[5], true).expect("fixture")
}

/// Identity action. With `global = false` every non-identity domain is zero instead.
pub fn trivial_action(group: FiniteGroup, moduli: &[u64], global: bool) -> Result<PartialAction> {
    let ring = ProductRing::new(moduli)?;
    let nb = ring.num_blocks();
    let e = group.identity();
    let n = group.order();
    if global {
        let perms = vec![(0..nb).collect(); n];
        return PartialAction::global(group, ring, perms);
    }
    let full = ring.full();
    let domains = (0..n).map(|g| if g == e { full } else { Ideal::ZERO }).collect();
    let maps = (0..n).map(|g| if g == e { (0..nb).map(Some).collect() } else { vec![None; nb] }).collect();
    PartialAction::new(group, ring, domains, maps)
}

/// Global action on the left cosets `G/K`, one block of modulus `m` per coset.
pub fn coset_action(group: &FiniteGroup, subgroup: &[usize], modulus: u64) -> Result<PartialAction> {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            let c = reps.len();
            reps.push(x);
            for &k in subgroup {
                coset_of[group.mul(x, k)] = c;
            }
        }
    }
    let ring = ProductRing::new(&vec![modulus; reps.len()])?;
    let perms = (0..n).map(|g| reps.iter().map(|&r| coset_of[group.mul(g, r)]).collect()).collect();
    PartialAction::global(group.clone(), ring, perms)
}

/// Small groups used for randomized instances.
pub fn small_groups() -> Vec<FiniteGroup> {
    let z2 = FiniteGroup::cyclic(2).expect("group");
    let z3 = FiniteGroup::cyclic(3).expect("group");
    vec![
        z2.clone(),
        z3.clone(),
        FiniteGroup::cyclic(4).expect("group"),
        FiniteGroup::cyclic(5).expect("group"),
        FiniteGroup::cyclic(6).expect("group"),
        FiniteGroup::direct_product(&z2, &z2).expect("group"),
        FiniteGroup::direct_product(&z2, &z3).expect("group"),
        FiniteGroup::dihedral(3).expect("group"),
    ]
}

fn all_subgroups(group: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut subs: Vec<Vec<usize>> = Vec::new();
    for a in group.elements() {
        for b in group.elements() {
            let s = group.subgroup_generated(&[a, b]);
            if !subs.contains(&s) {
                subs.push(s);
            }
        }
    }
    subs.sort();
    subs
}

/// A disjoint union of one or two coset actions with random moduli.
pub fn random_global_action<R: Rng>(rng: &mut R, group: &FiniteGroup) -> Result<PartialAction> {
    const MODULI: [u64; 6] = [2, 3, 4, 5, 7, 8];
    let subs = all_subgroups(group);
    let orbits = rng.gen_range(1..=2);
    let mut acc: Option<PartialAction> = None;
    for _ in 0..orbits {
        let k = subs.choose(rng).expect("subgroups");
        let m = *MODULI.choose(rng).expect("moduli");
        let part = coset_action(group, k, m)?;
        acc = Some(match acc {
            None => part,
            Some(prev) => prev.disjoint_union(&part)?,
        });
    }
    Ok(acc.expect("at least one orbit"))
}

/// Restriction of a random global action to a random nonempty ideal.
pub fn random_partial_action<R: Rng>(rng: &mut R, group: &FiniteGroup) -> Result<PartialAction> {
    let global = random_global_action(rng, group)?;
    let nb = global.ring().num_blocks();
    let mut mask = 0u64;
    while mask == 0 {
        mask = rng.gen_range(0..(1u64 << nb));
    }
    global.restrict_global(Ideal(mask))
}
