//! Self-check suites exercising the rank and coalescence machinery on
//! explicitly realized pencils. Every check is exact: a suite either
//! reproduces the predicted integers or reports the discrepancy verbatim.
//!
//! The suites are reachable through the CLI (`pencil-strata verify <name>`)
//! and drive the acceptance tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::closure::{all_assignments, bundle_closure_contains, coalesce, orbit_closure_contains};
use crate::exact::{
    build_coupled, build_p, extract_weyr, pencil_rank, ExplicitPencil, GaussianRational,
};
use crate::hierarchy::{c_jor, enumerate_bundles};
use crate::par;
use crate::partitions::Partition;
use crate::realize::{realize_kcf, scramble, witness_sequence};
use crate::structure::{Eigenvalue, PencilStructure};

/// Outcome of one suite: how many individual checks ran and which failed.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{}: {} checks passed", self.name, self.checks)
        } else {
            format!(
                "{}: {} of {} checks failed",
                self.name,
                self.failures.len(),
                self.checks
            )
        }
    }
}

fn collect_report(name: &'static str, results: Vec<(usize, Vec<String>)>) -> SuiteReport {
    let checks = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    SuiteReport {
        name,
        checks,
        failures,
    }
}

/// Known suite names, in CLI spelling.
pub const SUITE_NAMES: [&str; 6] = [
    "rank-lemma",
    "coupled-lemma",
    "witness",
    "pervouchine",
    "duality",
    "order",
];

/// Runs a suite by CLI name; `None` for an unknown name.
pub fn by_name(name: &str, seed: u64) -> Option<SuiteReport> {
    match name {
        "rank-lemma" => Some(rank_lemma(seed)),
        "coupled-lemma" => Some(coupled_lemma(seed)),
        "witness" => Some(witness(seed)),
        "pervouchine" => Some(pervouchine()),
        "duality" => Some(duality(seed)),
        "order" => Some(order()),
        _ => None,
    }
}

fn small_value_pool() -> Vec<Eigenvalue> {
    vec![
        Eigenvalue::from_int(0),
        Eigenvalue::from_int(1),
        Eigenvalue::from_int(2),
        Eigenvalue::from_int(3),
        Eigenvalue::from_int(-1),
        Eigenvalue::from_ratio(1, 2),
        Eigenvalue::Finite(GaussianRational::i()),
        Eigenvalue::Infinity,
    ]
}

/// Splits `total` into `slots` non-negative summands, uniformly enough for
/// test diversity.
fn random_split(rng: &mut ChaCha8Rng, total: usize, slots: usize) -> Vec<usize> {
    let mut out = vec![0usize; slots];
    for _ in 0..total {
        let slot = rng.gen_range(0..slots);
        out[slot] += 1;
    }
    out
}

fn random_partition(rng: &mut ChaCha8Rng, weight: usize) -> Partition {
    let mut parts = Vec::new();
    let mut remaining = weight;
    let mut cap = weight;
    while remaining > 0 {
        let p = rng.gen_range(1..=remaining.min(cap));
        parts.push(p);
        cap = p;
        remaining -= p;
    }
    Partition::new(parts)
}

/// A random valid structure with `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n` and at
/// most `max_eigs` distinct eigenvalues, drawn from a small exact pool
/// (including ∞).
pub fn random_structure(
    rng: &mut ChaCha8Rng,
    max_m: usize,
    max_n: usize,
    max_eigs: usize,
) -> PencilStructure {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let rho = rng.gen_range(0..=m.min(n));
    let n_right = n - rho;
    let n_left = m - rho;

    let right_sum = if n_right > 0 {
        rng.gen_range(0..=rho)
    } else {
        0
    };
    let left_sum = if n_left > 0 {
        rng.gen_range(0..=rho - right_sum)
    } else {
        0
    };
    let right = if n_right == 0 {
        Vec::new()
    } else {
        random_split(rng, right_sum, n_right)
    };
    let left = if n_left == 0 {
        Vec::new()
    } else {
        random_split(rng, left_sum, n_left)
    };

    let weight = rho - right_sum - left_sum;
    let eig_count = if weight == 0 {
        0
    } else {
        rng.gen_range(1..=max_eigs.min(weight))
    };
    let mut eig: BTreeMap<Eigenvalue, Partition> = BTreeMap::new();
    if eig_count > 0 {
        let mut weights = vec![1usize; eig_count];
        for (i, extra) in random_split(rng, weight - eig_count, eig_count)
            .into_iter()
            .enumerate()
        {
            weights[i] += extra;
        }
        let mut pool = small_value_pool();
        pool.shuffle(rng);
        for (value, w) in pool.into_iter().zip(weights) {
            eig.insert(value, random_partition(rng, w));
        }
    }
    PencilStructure::new(m, n, eig, right, left).expect("construction satisfies the identities")
}

fn probe_outside_spectrum(s: &PencilStructure) -> Eigenvalue {
    let spectrum: BTreeSet<Eigenvalue> = s.eigenvalues().cloned().collect();
    (5..)
        .map(Eigenvalue::from_int)
        .find(|e| !spectrum.contains(e))
        .unwrap()
}

/// Rank-lemma suite: on realized and scrambled random structures, the
/// nullity of `P_μ^d` must equal `Σ_{i≤d} W_i(μ) + d·r₀` for every
/// eigenvalue, one outside probe, and `d = 1..4`.
pub fn rank_lemma(seed: u64) -> SuiteReport {
    rank_lemma_with(seed, 200, true)
}

/// Rank-lemma suite with explicit scale and parallelism.
pub fn rank_lemma_with(seed: u64, structures: usize, parallel: bool) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs: Vec<(PencilStructure, ExplicitPencil, String)> = Vec::new();
    for idx in 0..structures {
        let s = random_structure(&mut rng, 4, 4, 2);
        let realized = realize_kcf(&s).expect("no symbolic eigenvalues in the pool");
        for scramble_seed in 0..3u64 {
            let mixed = scramble(&realized, seed ^ ((idx as u64) << 8) ^ scramble_seed);
            jobs.push((s.clone(), mixed, format!("{} (seed {})", s, scramble_seed)));
        }
        jobs.push((s.clone(), realized, format!("{} (canonical)", s)));
    }
    let results = par::map_items(parallel, &jobs, |(s, pencil, label)| {
        let mut checks = 0usize;
        let mut failures = Vec::new();
        let r0 = pencil.cols() - pencil_rank(pencil);
        let mut probes: Vec<Eigenvalue> = s.eigenvalues().cloned().collect();
        probes.push(probe_outside_spectrum(s));
        for e in probes {
            let weyr = s.weyr_at(&e);
            // the infinite eigenvalue reads at 0 of the reversal
            let (evaluated, mu) = match &e {
                Eigenvalue::Infinity => (pencil.reversal(), GaussianRational::zero()),
                Eigenvalue::Finite(g) => (pencil.clone(), g.clone()),
                Eigenvalue::Symbolic(_) => unreachable!("pool is concrete"),
            };
            for d in 1..=4usize {
                checks += 1;
                let nullity = build_p(&evaluated, &mu, d).nullity();
                let predicted: usize = (0..d).map(|i| weyr.part(i)).sum::<usize>() + d * r0;
                if nullity != predicted {
                    failures.push(format!(
                        "{label}: nullity(P_{{{e}}}^{d}) = {nullity}, predicted {predicted}"
                    ));
                }
            }
        }
        (checks, failures)
    });
    collect_report("rank-lemma", results)
}

/// Coupled-lemma suite: the nullity of the coupled block matrix equals the
/// sum of the nullities of its diagonal blocks, for random pencils, point
/// sets and depths.
pub fn coupled_lemma(seed: u64) -> SuiteReport {
    coupled_lemma_with(seed, 100, true)
}

/// Coupled-lemma suite with explicit scale and parallelism.
pub fn coupled_lemma_with(seed: u64, instances: usize, parallel: bool) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point_pool = [
        (0i64, 1i64),
        (1, 1),
        (2, 1),
        (3, 1),
        (-1, 1),
        (1, 2),
        (-1, 2),
    ];
    let mut jobs = Vec::new();
    for idx in 0..instances {
        let s = random_structure(&mut rng, 4, 4, 2);
        let pencil = scramble(&realize_kcf(&s).unwrap(), seed ^ (idx as u64));
        let count = rng.gen_range(1..=3usize);
        let mut points: Vec<GaussianRational> = point_pool
            .choose_multiple(&mut rng, count)
            .map(|&(n, d)| GaussianRational::from_ratio(n, d))
            .collect();
        points.shuffle(&mut rng);
        let depths: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=3)).collect();
        jobs.push((pencil, points, depths, s.to_string()));
    }
    let results = par::map_items(parallel, &jobs, |(pencil, points, depths, label)| {
        let coupled = build_coupled(pencil, points, depths).expect("points are distinct");
        let sum: usize = points
            .iter()
            .zip(depths)
            .map(|(p, &d)| build_p(pencil, p, d).nullity())
            .sum();
        let got = coupled.nullity();
        let failures = if got == sum {
            Vec::new()
        } else {
            vec![format!(
                "{label}: coupled nullity {got} != blockwise sum {sum}"
            )]
        };
        (1, failures)
    });
    collect_report("coupled-lemma", results)
}

/// Witness suite: coalescence witness sequences carry the displaced Weyr
/// data exactly, their limits carry the union, and the singular counts
/// survive untouched.
pub fn witness(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    while jobs.len() < 40 {
        let s = random_structure(&mut rng, 4, 4, 2);
        let finite: Vec<Eigenvalue> = s.eigenvalues().filter(|e| e.is_finite()).cloned().collect();
        if finite.is_empty() {
            continue;
        }
        let take = rng.gen_range(1..=finite.len());
        let group: BTreeSet<Eigenvalue> = finite.choose_multiple(&mut rng, take).cloned().collect();
        let k = *[1usize, 7, 20].choose(&mut rng).unwrap();
        jobs.push((s, group, k));
    }
    let results = par::map_items(true, &jobs, |(s, group, k)| {
        let mut checks = 0usize;
        let mut failures = Vec::new();
        // 10 is outside the random value pool, so never collides
        let target = GaussianRational::from_int(10);
        let w = match witness_sequence(s, group, &target, *k) {
            Ok(w) => w,
            Err(e) => {
                return (1, vec![format!("{s}: witness construction failed: {e}")]);
            }
        };
        let d_max = s.rows().min(s.cols());
        for (source, displaced) in &w.displaced {
            checks += 1;
            let got = extract_weyr(&w.lk, &Eigenvalue::Finite(displaced.clone()), d_max);
            let want = s.weyr_at(source);
            if got.as_ref() != Ok(&want) {
                failures.push(format!(
                    "{s}: W at displaced {displaced} = {got:?}, expected {want}"
                ));
            }
        }
        checks += 1;
        let union = Partition::union(
            group
                .iter()
                .map(|e| s.weyr_at(e))
                .collect::<Vec<_>>()
                .iter(),
        );
        let got = extract_weyr(&w.limit, &Eigenvalue::Finite(target.clone()), d_max);
        if got.as_ref() != Ok(&union) {
            failures.push(format!("{s}: limit W = {got:?}, expected union {union}"));
        }
        for (pencil, which) in [(&w.lk, "L_k"), (&w.limit, "limit")] {
            checks += 1;
            let rank = pencil_rank(pencil);
            if pencil.cols() - rank != s.right_indices().len()
                || pencil.rows() - rank != s.left_indices().len()
            {
                failures.push(format!("{s}: singular counts changed in {which}"));
            }
        }
        (checks, failures)
    });
    collect_report("witness", results)
}

/// The regression scenario around the classical false bundle-closure
/// formula: the coalescence route must say YES, every coalescence-free
/// relabeling must say NO, and the witness sequence must carry the stated
/// Weyr data at every displaced eigenvalue and in the limit.
pub fn pervouchine() -> SuiteReport {
    let mut checks = 0usize;
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        checks += 1;
        if !ok {
            failures.push(what.to_string());
        }
    };

    let l = PencilStructure::parse("3x3: J(3;1) J(2;2)").unwrap();
    let m = PencilStructure::parse("3x3: J(2;3)").unwrap();

    // (a) bundle inclusion with the coalescence witness
    match bundle_closure_contains(&l, &m) {
        Ok((true, Some(witness))) => {
            check(
                witness.to_string() == "{2,3}->2",
                "bundle witness is {2,3}->2)",
            );
        }
        other => {
            check(
                false,
                &format!("bundle check: expected YES with witness, got {other:?}"),
            );
        }
    }
    check(
        !bundle_closure_contains(&m, &l).unwrap().0,
        "reverse bundle inclusion must fail",
    );

    // (b) no coalescence-free relabeling works
    let grid = [
        Eigenvalue::from_int(0),
        Eigenvalue::from_int(1),
        Eigenvalue::from_int(2),
        Eigenvalue::from_int(3),
        Eigenvalue::Infinity,
    ];
    for a in &grid {
        let merged = PencilStructure::new(
            3,
            3,
            BTreeMap::from([(a.clone(), Partition::from([2, 1]))]),
            vec![],
            vec![],
        )
        .unwrap();
        check(
            !orbit_closure_contains(&merged, &m).unwrap(),
            &format!("orbit check must fail for {{{a}:(2,1)}}"),
        );
    }
    for a in &grid {
        for b in &grid {
            if a == b {
                continue;
            }
            let relabeled = PencilStructure::new(
                3,
                3,
                BTreeMap::from([
                    (a.clone(), Partition::from([2])),
                    (b.clone(), Partition::from([1])),
                ]),
                vec![],
                vec![],
            )
            .unwrap();
            check(
                !orbit_closure_contains(&relabeled, &m).unwrap(),
                &format!("orbit check must fail for {{{a}:(2), {b}:(1)}}"),
            );
        }
    }

    // (c) the witness sequence at k = 1, 10, 100
    let group: BTreeSet<Eigenvalue> = [Eigenvalue::from_int(2), Eigenvalue::from_int(3)].into();
    let target = GaussianRational::from_int(2);
    for k in [1usize, 10, 100] {
        let w = witness_sequence(&l, &group, &target, k).unwrap();
        let simple = extract_weyr(&w.lk, &Eigenvalue::Finite(w.displaced[0].1.clone()), 3);
        check(
            simple == Ok(Partition::from([1])),
            &format!("k={k}: Weyr at 2+1/{k} must be (1)"),
        );
        let double = extract_weyr(&w.lk, &Eigenvalue::Finite(w.displaced[1].1.clone()), 3);
        check(
            double == Ok(Partition::from([1, 1])),
            &format!("k={k}: Weyr at 2+2/{k} must be (1,1)"),
        );
        let limit = extract_weyr(&w.limit, &Eigenvalue::from_int(2), 3);
        check(
            limit == Ok(Partition::from([1, 1, 1])),
            &format!("k={k}: limit Weyr at 2 must be (1,1,1)"),
        );
    }

    SuiteReport {
        name: "pervouchine",
        checks,
        failures,
    }
}

/// Duality suite: conjugation swaps union and sum on random families.
pub fn duality(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for _ in 0..500 {
        let family: Vec<Partition> = (0..rng.gen_range(0..=5usize))
            .map(|_| {
                let weight = rng.gen_range(0..=12usize);
                let p = random_partition(&mut rng, weight);
                // parts stay ≤ 8
                Partition::new(p.parts().iter().map(|&x| x.min(8)).collect())
            })
            .collect();
        let conjugates: Vec<Partition> = family.iter().map(Partition::conjugate).collect();
        checks += 2;
        if Partition::union(&family).conjugate() != Partition::sum(&conjugates) {
            failures.push(format!("(∪)♯ ≠ Σ♯ for {family:?}"));
        }
        if Partition::sum(&family).conjugate() != Partition::union(&conjugates) {
            failures.push(format!("(Σ)♯ ≠ ∪♯ for {family:?}"));
        }
    }
    SuiteReport {
        name: "duality",
        checks,
        failures,
    }
}

/// Order suite: on all bundles of sizes 2×2 and 2×3 the inclusion relation
/// is a partial order, orbit containment implies bundle containment, and
/// every coalescence of a structure stays in its bundle closure.
pub fn order() -> SuiteReport {
    let mut checks = 0usize;
    let mut failures = Vec::new();

    for (m, n) in [(2usize, 2usize), (2, 3)] {
        let sigs = enumerate_bundles(m, n);
        let symbolic: Vec<PencilStructure> =
            sigs.iter().map(|s| s.instantiate_symbolic()).collect();
        let concrete: Vec<PencilStructure> = sigs
            .iter()
            .map(|s| s.instantiate(|i| Eigenvalue::from_int(i as i64)).unwrap())
            .collect();
        let count = sigs.len();

        let pairs: Vec<(usize, usize)> = (0..count)
            .flat_map(|i| (0..count).map(move |j| (i, j)))
            .collect();
        let flags = par::map_items(true, &pairs, |&(i, j)| {
            bundle_closure_contains(&symbolic[i], &symbolic[j])
                .unwrap()
                .0
        });
        let rel = |i: usize, j: usize| flags[i * count + j];

        for (i, sig) in sigs.iter().enumerate() {
            checks += 1;
            if !rel(i, i) {
                failures.push(format!("{m}x{n}: relation not reflexive at {sig}"));
            }
        }
        for i in 0..count {
            for j in 0..count {
                if i != j {
                    checks += 1;
                    if rel(i, j) && rel(j, i) {
                        failures.push(format!(
                            "{m}x{n}: antisymmetry fails between {} and {}",
                            sigs[i], sigs[j]
                        ));
                    }
                }
                for k in 0..count {
                    checks += 1;
                    if rel(i, j) && rel(j, k) && !rel(i, k) {
                        failures.push(format!(
                            "{m}x{n}: transitivity fails on {} > {} > {}",
                            sigs[i], sigs[j], sigs[k]
                        ));
                    }
                }
            }
        }

        for i in 0..count {
            for j in 0..count {
                checks += 1;
                if orbit_closure_contains(&concrete[i], &concrete[j]).unwrap() && !rel(i, j) {
                    failures.push(format!(
                        "{m}x{n}: orbit containment without bundle containment: {} vs {}",
                        sigs[i], sigs[j]
                    ));
                }
            }
        }

        for s in &concrete {
            for a in all_assignments(s) {
                checks += 1;
                let c = coalesce(s, &a, &BTreeMap::new()).unwrap();
                if !bundle_closure_contains(s, &c).unwrap().0 {
                    failures.push(format!(
                        "{m}x{n}: coalescence {a} of {s} escaped the closure"
                    ));
                }
            }
        }
    }

    // three-eigenvalue coalescence structures, beyond what 2×2 and 2×3 offer
    for text in [
        "3x3: J(0;1) J(1;1) J(2;1)",
        "21x22: J(0;2,2,1) J(1;3,2) J(2;4) R(3) R(1) LT(2)",
    ] {
        let s = PencilStructure::parse(text).unwrap();
        for a in all_assignments(&s) {
            checks += 1;
            let c = coalesce(&s, &a, &BTreeMap::new()).unwrap();
            if !bundle_closure_contains(&s, &c).unwrap().0 {
                failures.push(format!("coalescence {a} of {s} escaped the closure"));
            }
        }
    }

    SuiteReport {
        name: "order",
        checks,
        failures,
    }
}

/// Jordan-codimension invariance under coalescence on random structures;
/// backs the corresponding acceptance criterion.
pub fn cjor_invariance(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for _ in 0..100 {
        let s = random_structure(&mut rng, 5, 5, 3);
        let assignments = all_assignments(&s);
        let base = c_jor(&s.signature());
        let pick = assignments.choose(&mut rng).cloned();
        let mut selected: Vec<_> = pick.into_iter().collect();
        if assignments.len() <= 16 {
            selected = assignments;
        }
        for a in selected {
            checks += 1;
            let c = coalesce(&s, &a, &BTreeMap::new()).unwrap();
            if c_jor(&c.signature()) != base {
                failures.push(format!("c_jor changed under {a} on {s}"));
            }
        }
    }
    SuiteReport {
        name: "c-jor",
        checks,
        failures,
    }
}
