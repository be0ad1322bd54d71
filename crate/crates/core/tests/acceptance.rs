//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use abelian_core::bench::{self, BenchConfig};
use abelian_core::oracle::{self, DEFAULT_SEARCH_CAP};
use abelian_core::orbits::orbit_of;
use abelian_core::snf::{quotient_matrix, smith_normal_form};
use abelian_core::{
    are_automorphic, element_order, enumerate_orbits, make_group, numutil, quotient_key, AbelianGroup,
    CanonicalGroupKey, Method,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn small_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `k` into non-increasing parts.
fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            prefix.push(part);
            go(k - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors (ascending) of every abelian group of order `n`, one
/// list per isomorphism class. The trivial group is `[1]`.
fn abelian_groups(n: u64) -> Vec<Vec<u64>> {
    let mut acc: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, k) in small_factor(n) {
        let mut next = Vec::new();
        for inv in &acc {
            for part in partitions(k) {
                // largest-first alignment, then back to ascending
                let mut desc: Vec<u64> = inv.iter().rev().copied().collect();
                desc.resize(desc.len().max(part.len()), 1);
                for (slot, e) in desc.iter_mut().zip(&part) {
                    *slot *= p.pow(*e);
                }
                desc.reverse();
                next.push(desc);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|v| if v.is_empty() { vec![1] } else { v })
        .collect()
}

fn groups_up_to(max: u64) -> impl Iterator<Item = (u64, AbelianGroup)> {
    (1..=max).flat_map(|n| {
        abelian_groups(n)
            .into_iter()
            .map(move |inv| (n, make_group(&inv).unwrap()))
    })
}

fn within_oracle_cap(g: &AbelianGroup) -> bool {
    let order = g.order().to_u64().unwrap();
    (order as f64).powi(g.rank() as i32) <= DEFAULT_SEARCH_CAP as f64
}

fn key(parts: &[(u64, &[u32])]) -> CanonicalGroupKey {
    CanonicalGroupKey::from_parts(parts.iter().map(|(p, e)| (BigUint::from(*p), e.iter().copied())))
}

fn worked_example() -> Outcome {
    let run = || {
        let g = make_group(&[2u32, 4, 8, 8]).unwrap();
        let x = g.element(&[2u32, 1, 2, 4]).unwrap();
        let fast = quotient_key(&g, &x, Method::Fast).unwrap();
        let snf = quotient_key(&g, &x, Method::Snf).unwrap();
        let diag = smith_normal_form(&quotient_matrix(&g, &x).unwrap());
        (fast, snf, diag)
    };
    // first call pays for one-time prime table setup
    run();
    let t = Instant::now();
    let (fast, snf, diag) = run();
    let elapsed = t.elapsed();
    let want = key(&[(2, &[3, 3, 1])]);
    ensure!(fast == want, "fast gave {fast}");
    ensure!(snf == want, "snf gave {snf}");
    let diag: Vec<u64> = diag.iter().map(|d| d.to_u64().unwrap()).collect();
    ensure!(diag == [1, 2, 8, 8], "diagonal {diag:?}");
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!("{want} via fast and snf, diagonal {diag:?}, {elapsed:?}"))
}

fn oracle_equivalence() -> Outcome {
    let (mut groups, mut pairs) = (0usize, 0u64);
    for (_, g) in groups_up_to(64) {
        if !within_oracle_cap(&g) {
            continue;
        }
        let orbits = oracle::brute_orbits(&g).unwrap();
        let elems: Vec<_> = g.elements().collect();
        let mut label = std::collections::HashMap::new();
        for (i, orbit) in orbits.iter().enumerate() {
            for x in orbit {
                label.insert(x.clone(), i);
            }
        }
        for x in &elems {
            for y in &elems {
                let fast = are_automorphic(&g, x, y).unwrap();
                ensure!(
                    fast == (label[x] == label[y]),
                    "{g}: {:?} vs {:?} fast={fast}",
                    x.coords(),
                    y.coords()
                );
                pairs += 1;
            }
        }
        groups += 1;
    }
    Ok(format!("{groups} groups, {pairs} pairs"))
}

fn tri_method_agreement() -> Outcome {
    let mut elems = 0u64;
    for (_, g) in groups_up_to(256) {
        for x in g.elements() {
            let fast = quotient_key(&g, &x, Method::Fast).unwrap();
            let snf = quotient_key(&g, &x, Method::Snf).unwrap();
            let brute = oracle::brute_quotient_key(&g, &x).unwrap();
            ensure!(
                fast == snf && snf == brute,
                "{g} x={:?}: fast {fast}, snf {snf}, brute {brute}",
                x.coords()
            );
            elems += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut random = 0;
    while random < 10_000 {
        let arity = rng.gen_range(1..=6);
        let moduli: Vec<u64> = (0..arity).map(|_| rng.gen_range(1..=3000)).collect();
        let order = moduli.iter().try_fold(1u64, |a, &m| a.checked_mul(m));
        if !matches!(order, Some(o) if o <= 1_000_000_000) {
            continue;
        }
        let g = make_group(&moduli).unwrap();
        let coords: Vec<u64> = moduli.iter().map(|&m| rng.gen_range(0..m)).collect();
        let x = g.element(&coords).unwrap();
        let fast = quotient_key(&g, &x, Method::Fast).unwrap();
        let snf = quotient_key(&g, &x, Method::Snf).unwrap();
        ensure!(fast == snf, "{g} x={coords:?}: fast {fast}, snf {snf}");
        random += 1;
    }
    Ok(format!("{elems} exhaustive elements, {random} random instances"))
}

fn orbit_correctness() -> Outcome {
    let mut checked = 0;
    for (_, g) in groups_up_to(64) {
        if !within_oracle_cap(&g) {
            continue;
        }
        let fast = enumerate_orbits(&g).unwrap();
        let brute = oracle::brute_orbits(&g).unwrap();
        ensure!(
            fast.len() == brute.len(),
            "{g}: {} vs {} orbits",
            fast.len(),
            brute.len()
        );
        let mut seen = vec![false; fast.len()];
        for orbit in &brute {
            let idx = orbit_of(&fast, &g, &orbit[0])
                .unwrap()
                .ok_or(format!("{g}: unplaced"))?;
            ensure!(!seen[idx], "{g}: two brute orbits share summary {idx}");
            seen[idx] = true;
            ensure!(
                fast[idx].size == BigUint::from(orbit.len()),
                "{g}: size {} vs {}",
                fast[idx].size,
                orbit.len()
            );
            for x in orbit {
                ensure!(
                    orbit_of(&fast, &g, x).unwrap() == Some(idx),
                    "{g}: {:?} split from its orbit",
                    x.coords()
                );
            }
        }
        checked += 1;
    }
    let mut summed = 0;
    for (n, g) in groups_up_to(10_000) {
        let total: BigUint = enumerate_orbits(&g).unwrap().iter().map(|o| &o.size).sum();
        ensure!(total == BigUint::from(n), "{g}: sizes sum to {total}");
        summed += 1;
    }
    for n in 1..=1000u64 {
        let g = make_group(&[n]).unwrap();
        let count = enumerate_orbits(&g).unwrap().len();
        let tau = numutil::factorize(&BigUint::from(n)).unwrap().tau();
        ensure!(BigUint::from(count) == tau, "C{n}: {count} orbits, tau {tau}");
    }
    Ok(format!(
        "{checked} partitions vs oracle, {summed} size sums, tau for n <= 1000"
    ))
}

fn maximal_order_elements() -> Outcome {
    let mut groups = 0;
    for (_, g) in groups_up_to(256) {
        let exp = g.exponent();
        let maximal: Vec<_> = g
            .elements()
            .filter(|x| element_order(&g, x).unwrap() == exp)
            .collect();
        ensure!(!maximal.is_empty(), "{g}: no element of maximal order");
        let keys: Vec<_> = maximal
            .iter()
            .map(|x| quotient_key(&g, x, Method::Fast).unwrap())
            .collect();
        ensure!(keys.iter().all(|k| *k == keys[0]), "{g}: maximal keys differ");
        for x in &maximal {
            ensure!(
                are_automorphic(&g, &maximal[0], x).unwrap(),
                "{g}: {:?} not equivalent to {:?}",
                x.coords(),
                maximal[0].coords()
            );
        }
        groups += 1;
    }
    Ok(format!("{groups} groups"))
}

fn aut_order_formula() -> Outcome {
    for &(p, m, n, want) in &[
        (2u64, 1u32, 2u32, 6u64),
        (2, 2, 2, 96),
        (3, 1, 2, 48),
        (2, 1, 3, 168),
    ] {
        let g = make_group(&vec![p.pow(m); n as usize]).unwrap();
        let count = oracle::enumerate_automorphisms(&g).unwrap().len() as u64;
        let closed = oracle::aut_order_homocyclic(&BigUint::from(p), m, n);
        ensure!(
            count == want && closed == BigUint::from(want),
            "({p},{m},{n}): enumerated {count}, formula {closed}, expected {want}"
        );
    }
    let mut pgroups = 0;
    for (n, g) in groups_up_to(256) {
        let f = small_factor(n);
        if f.len() != 1 || !within_oracle_cap(&g) {
            continue;
        }
        let p = BigUint::from(f[0].0);
        let aut = BigUint::from(oracle::enumerate_automorphisms(&g).unwrap().len());
        ensure!(
            oracle::satisfies_exponential_bound(&p, g.rank() as u32, &aut),
            "{g}: |Aut| = {aut} below (p/2)^rank"
        );
        pgroups += 1;
    }
    Ok(format!("4 homocyclic counts, bound on {pgroups} p-groups"))
}

fn scaling_exponent() -> Outcome {
    let config = BenchConfig {
        ranks: (2..=9).map(|k| 1usize << k).collect(),
        methods: vec![Method::Fast],
        ..BenchConfig::default()
    };
    let rows = bench::run_bench(&config).unwrap();
    let fit = bench::fit_rows(&rows, Method::Fast).ok_or("no fit")?;
    let detail = format!(
        "exponent {:.3} (ranks 4..512, {:.4} ms at rank 4, {:.4} ms at rank 512)",
        fit.exponent,
        rows[0].median_ms,
        rows.last().unwrap().median_ms
    );
    ensure!((1.0..=1.6).contains(&fit.exponent), "{detail}");
    Ok(detail)
}

fn model_crossover() -> Outcome {
    let n = bench::model_crossover();
    ensure!((300..=500).contains(&n), "crossover at {n}");
    let mut buf = Vec::new();
    bench::write_model_csv(&[n - 1, n], &mut buf).unwrap();
    let lines: Vec<String> = String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    ensure!(lines.len() == 3, "model csv {lines:?}");
    Ok(format!("crossover at rank {n}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("worked example", worked_example),
        ("oracle equivalence", oracle_equivalence),
        ("tri-method quotient agreement", tri_method_agreement),
        ("orbit correctness", orbit_correctness),
        ("maximal-order elements", maximal_order_elements),
        ("automorphism counts", aut_order_formula),
        ("fast-path scaling exponent", scaling_exponent),
        ("model crossover", model_crossover),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
