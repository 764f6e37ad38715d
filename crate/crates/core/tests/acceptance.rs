//! Acceptance criteria, one line each. Runs without the libtest harness.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use pcoh::action::PartialAction;
use pcoh::cochain::{delta, random_cochain, Cochain};
use pcoh::cohomology::{cohomology, cohomology_bruteforce, random_cocycle_from, DeltaMatrix, DEFAULT_BRUTE_FORCE_BOUND};
use pcoh::fixtures;
use pcoh::globalize::{
    check_w_prime_theorem, compare_globalizations, degree_zero_globalizations, extend, globalize, globalize_transitive,
    lift, EnvelopingAction, GlobalCochain,
};
use pcoh::abelian::AbelianPresentation;
use pcoh::group::FiniteGroup;
use pcoh::transitivity::TransitivityData;
use pcoh::verify::check_partial_global_iso;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixtures3() -> Vec<(&'static str, PartialAction)> {
    vec![("F1", fixtures::fixture1()), ("F2", fixtures::fixture2()), ("F3", fixtures::fixture3())]
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut actions: Vec<PartialAction> = fixtures3().into_iter().map(|(_, a)| a).collect();
    let groups = fixtures::small_groups();
    for i in 0..20 {
        actions.push(fixtures::random_partial_action(&mut rng, &groups[i % groups.len()]).map_err(err)?);
    }
    let mut count = 0;
    for (k, pa) in actions.iter().enumerate() {
        for n in 0..3 {
            let id = Cochain::identity(pa, n + 2);
            for _ in 0..25 {
                let f = random_cochain(&mut rng, pa, n);
                if delta(pa, &delta(pa, &f).map_err(err)?).map_err(err)? != id {
                    return Err(format!("instance {k}, n = {n}"));
                }
                count += 1;
            }
        }
    }
    within(start, Duration::from_secs(10), "δδ checks")?;
    Ok(format!("{count} cochains over {} actions", actions.len()))
}

/// 25 random cocycles per fixture per degree, seeded.
fn sampled_cocycles(degrees: &[usize], seed: u64) -> Result<Vec<(&'static str, PartialAction, Cochain)>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, pa) in fixtures3() {
        for &n in degrees {
            let dm = DeltaMatrix::new(&pa, n).map_err(err)?;
            for _ in 0..25 {
                out.push((name, pa.clone(), random_cocycle_from(&mut rng, &pa, &dm)));
            }
        }
    }
    Ok(out)
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let samples = sampled_cocycles(&[1, 2, 3], 2)?;
    for (name, pa, w) in &samples {
        let td = TransitivityData::new(pa, 0).map_err(err)?;
        if let Some(t) = check_w_prime_theorem(pa, &td, w).map_err(err)? {
            return Err(format!("{name}, n = {}, tuple {t:?}", w.degree));
        }
    }
    within(start, Duration::from_secs(30), "w' theorem")?;
    Ok(format!("{} cocycles", samples.len()))
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let samples = sampled_cocycles(&[1, 2, 3], 2)?;
    for (name, pa, w) in &samples {
        let env = EnvelopingAction::build(pa).map_err(err)?;
        // extend asserts the restriction law and both extended identities.
        let ext = extend(pa, &env.td, w).map_err(|e| format!("{name}, n = {}: {e}", w.degree))?;
        let l = lift(&env, &ext.w_tilde).map_err(err)?;
        let checks = pcoh::globalize::check_lift(&env, w, Some(&ext.w_tilde), &l).map_err(err)?;
        if !checks.all_pass() {
            return Err(format!("{name}, n = {}: {checks:?}", w.degree));
        }
    }
    within(start, Duration::from_secs(60), "globalization checks")?;
    Ok(format!("{} cocycles", samples.len()))
}

fn criterion4() -> Outcome {
    let samples = sampled_cocycles(&[1, 2], 4)?;
    for (name, pa, w) in &samples {
        let fwd: Vec<usize> = pa.group().elements().collect();
        let rev: Vec<usize> = fwd.iter().rev().copied().collect();
        let a = globalize_transitive(pa, w, &fwd).map_err(err)?;
        let b = globalize_transitive(pa, w, &rev).map_err(err)?;
        let u2 = GlobalCochain(a.env.transport_from(&b.env, &b.lift.u.0));
        let z = compare_globalizations(&a.env, &a.lift.u, &u2, None).map_err(|e| format!("{name}: {e}"))?;
        let g = &a.env.global;
        if a.lift.u.0.mul(g, &delta(g, &z).map_err(err)?).map_err(err)? != u2.0 {
            return Err(format!("{name}, n = {}: witness fails", w.degree));
        }
    }
    Ok(format!("{} pairs of globalizations", samples.len()))
}

fn criterion5() -> Outcome {
    let z2 = FiniteGroup::cyclic(2).map_err(err)?;
    let anchor1 = fixtures::trivial_action(z2.clone(), &[5], true).map_err(err)?;
    let anchor2 = fixtures::trivial_action(z2, &[3], true).map_err(err)?;
    if cohomology(&anchor1, 1).map_err(err)?.invariant_factors != vec![2] {
        return Err("H^1(Z2, U(Z5)) is not Z2".into());
    }
    if cohomology(&anchor2, 2).map_err(err)?.invariant_factors != vec![2] {
        return Err("H^2(Z2, U(Z3)) is not Z2".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances: Vec<PartialAction> = fixtures3().into_iter().map(|(_, a)| a).collect();
    instances.push(anchor1);
    instances.push(anchor2);
    let groups = fixtures::small_groups();
    for i in 0..6 {
        instances.push(fixtures::random_partial_action(&mut rng, &groups[i % groups.len()]).map_err(err)?);
    }
    let fits = |pa: &PartialAction, n: usize| {
        AbelianPresentation::cochains(pa, n).order_u64().is_some_and(|o| o <= DEFAULT_BRUTE_FORCE_BOUND)
    };
    let mut compared = 0;
    for (k, pa) in instances.iter().enumerate() {
        for n in 0..4 {
            if !fits(pa, n) || (n > 0 && !fits(pa, n - 1)) {
                continue;
            }
            let snf = cohomology(pa, n).map_err(err)?.invariant_factors;
            let brute = cohomology_bruteforce(pa, n, DEFAULT_BRUTE_FORCE_BOUND).map_err(err)?;
            if snf != brute {
                return Err(format!("instance {k}, n = {n}: snf {snf:?} vs enumeration {brute:?}"));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} groups compared, both Z2 anchors hold"))
}

fn criterion6() -> Outcome {
    let mut lines = Vec::new();
    for (name, pa) in [("F1", fixtures::fixture1()), ("F2", fixtures::fixture2())] {
        for e in check_partial_global_iso(&pa, &[0, 1, 2]).map_err(err)? {
            if !e.equal {
                return Err(format!("{name}, n = {}: {:?} vs {:?}", e.degree, e.partial, e.global));
            }
            lines.push(format!("{name} H{}={:?}", e.degree, e.partial));
        }
    }
    Ok(lines.join(" "))
}

fn criterion7() -> Outcome {
    let mut checked = 0;
    let two_orbit = fixtures::fixture1()
        .disjoint_union(&fixtures::trivial_action(FiniteGroup::cyclic(3).map_err(err)?, &[7], true).map_err(err)?)
        .map_err(err)?;
    for pa in [fixtures::fixture1(), fixtures::fixture2(), fixtures::fixture3(), two_orbit] {
        let pres = AbelianPresentation::cochains(&pa, 0);
        for idx in 0..pres.order_u64().ok_or("C^0 too large")? {
            let a = pres.decode(&pa, &pres.unrank(idx));
            if !pcoh::cochain::is_cocycle(&pa, &a).map_err(err)? {
                continue;
            }
            for g in globalize(&pa, &a).map_err(err)? {
                let a_o = &g.w.values[0];
                if g.lift.function.iter().flatten().any(|v| v != a_o) {
                    return Err(format!("globalization of {a_o:?} is not constant"));
                }
                let all = degree_zero_globalizations(&g.env, a_o, 1 << 20).map_err(err)?;
                if all != vec![g.lift.u.0.values[0].clone()] {
                    return Err(format!("{} globalizations of {a_o:?}", all.len()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} 0-cocycles, each with exactly one globalization"))
}

fn criterion8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_pcoh");
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let runs = [("fixture1", "42", "0,1,2"), ("fixture2", "7", "1,2,3"), ("fixture3", "42", "0,1,2")];
    for (name, seed, degrees) in runs {
        let run = || {
            Command::new(bin)
                .arg("verify")
                .arg(dir.join(format!("{name}.json")))
                .args(["--seed", seed, "--trials", "25", "--degrees", degrees])
                .output()
                .map_err(err)
        };
        let (a, b) = (run()?, run()?);
        if a.status.code() != Some(0) {
            return Err(format!("{name}: exit {:?}", a.status.code()));
        }
        if a.stdout != b.stdout {
            return Err(format!("{name}: two runs differ"));
        }
        let golden = std::fs::read(dir.join("golden").join(format!("{name}_verify.json"))).map_err(err)?;
        if a.stdout != golden {
            return Err(format!("{name}: report differs from the golden file"));
        }
    }
    Ok("three fixtures, byte-identical to golden".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("coboundary squares to identity", criterion1),
        ("w = δε·w' and w' is a cocycle", criterion2),
        ("extension and lift checks", criterion3),
        ("transversal independence up to coboundary", criterion4),
        ("SNF agrees with enumeration", criterion5),
        ("partial and global cohomology agree", criterion6),
        ("degree-0 globalization constant and unique", criterion7),
        ("CLI determinism and golden reports", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {:.2?})", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
