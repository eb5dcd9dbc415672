//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p nfold-core --test acceptance`.

mod support;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nfold_core::apps::{build_partition, build_threeway, cluster_variance, PartitionInstance};
use nfold_core::bruteforce::{brute_convex_max, zonotope_vertices_exhaustive};
use nfold_core::convexmax::{solve_convex_nfold, Builtin, ConvexObjective, ConvexOutcome, ConvexReport};
use nfold_core::graver::{brute_force_graver, graver_basis};
use nfold_core::ip::{solve_nfold_ip, Outcome};
use nfold_core::linalg::{Matrix, Vector};
use nfold_core::nfold::{nfold_graver_with, graver_complexity, nproduct, LiftStrategy, Stencil};
use nfold_core::zonotope::{certificates_separate, zonotope_vertices};
use nfold_core::Limits;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

type Verdict = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn(&mut Shared) -> Verdict,
}

#[derive(Default)]
struct Shared {
    identity_checks: usize,
    identity_failures: usize,
    convex_instances: usize,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graver_example(_: &mut Shared) -> Verdict {
    let basis = graver_basis(&Matrix::<BigInt>::from_ints(1, 3, &[1, 2, 1]).unwrap()).map_err(|e| e.to_string())?;
    let want: BTreeSet<V> = [[2, -1, 0], [0, -1, 2], [1, 0, -1], [1, -1, 1]]
        .iter()
        .flat_map(|g| [vec_big(g), vec_big(g).neg()])
        .collect();
    let got: BTreeSet<V> = basis.elements().iter().cloned().collect();
    ensure(got == want, || format!("basis {got:?}"))?;
    Ok(format!("{} elements", got.len()))
}

fn nproduct_example(_: &mut Shared) -> Verdict {
    let got = nproduct(&Matrix::<BigInt>::from_ints(1, 3, &[1, 1, 1]).unwrap(), 3).map_err(|e| e.to_string())?;
    #[rustfmt::skip]
    let want = Matrix::from_ints(6, 9, &[
        1, 0, 0, 1, 0, 0, 1, 0, 0,
        0, 1, 0, 0, 1, 0, 0, 1, 0,
        0, 0, 1, 0, 0, 1, 0, 0, 1,
        1, 1, 1, 0, 0, 0, 0, 0, 0,
        0, 0, 0, 1, 1, 1, 0, 0, 0,
        0, 0, 0, 0, 0, 0, 1, 1, 1,
    ]).unwrap();
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("6x9 entrywise".into())
}

fn graver_oracle(_: &mut Shared) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut compared, mut skipped, mut drawn) = (0, 0, 0);
    while compared < 200 {
        drawn += 1;
        let rows = rng.gen_range(1..=3);
        let cols = rng.gen_range(2..=5);
        let a = rand_matrix(&mut rng, rows, cols, -3, 3);
        let basis = graver_basis(&a).map_err(|e| e.to_string())?;
        let bound = basis.elements().iter().map(|g| g.max_abs()).max().unwrap_or_else(|| big(0));
        let bound = u32::try_from(&bound).expect("entries of a small matrix basis fit in u32");
        match brute_force_graver(&to_small(&a), bound, 20_000_000) {
            Ok(brute) => {
                let brute: Vec<V> = brute.elements().iter().map(|g| vec_big(g)).collect();
                ensure(brute == basis.elements(), || format!("mismatch on {a:?}"))?;
                compared += 1;
            }
            Err(e) if e.is_guard() => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("{compared} matrices agree ({skipped} of {drawn} skipped as outside the box budget)"))
}

fn stencils() -> Vec<(&'static str, Stencil<BigInt>)> {
    let m = |r, c, e: &[i64]| Matrix::from_ints(r, c, e).unwrap();
    vec![
        ("A1=(1,0) A2=(1,-1)", Stencil::new(m(1, 2, &[1, 0]), m(1, 2, &[1, -1])).unwrap()),
        ("A1=(1,1) A2=(1,-1)", Stencil::new(m(1, 2, &[1, 1]), m(1, 2, &[1, -1])).unwrap()),
        ("product of (1,2)", Stencil::new(Matrix::identity(2), m(1, 2, &[1, 2])).unwrap()),
        ("A1=(1,2), empty A2", Stencil::new(m(1, 2, &[1, 2]), Matrix::zeros(0, 2)).unwrap()),
        ("A1=(1,0,0) A2=(1,1,1)", Stencil::new(m(1, 3, &[1, 0, 0]), m(1, 3, &[1, 1, 1])).unwrap()),
        (
            "2x2 transportation",
            Stencil::new(Matrix::identity(4), m(4, 4, &[1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1])).unwrap(),
        ),
    ]
}

fn stabilization(_: &mut Shared) -> Verdict {
    let limits = Limits::default();
    let mut report = Vec::new();
    for (name, s) in stencils() {
        let g = graver_complexity(&s, &limits).map_err(|e| e.to_string())?;
        let mut checked = 0;
        for n in 1..=g + 2 {
            let direct = nfold_graver_with(&s, n, LiftStrategy::Direct, &limits);
            let lifted = nfold_graver_with(&s, n, LiftStrategy::Lift, &limits);
            match (direct, lifted) {
                (Ok(d), Ok(l)) => {
                    ensure(d == l, || format!("{name}: n={n} direct {} vs lifted {}", d.len(), l.len()))?;
                    checked += 1;
                }
                (Err(e), _) | (_, Err(e)) if e.is_guard() => {}
                (Err(e), _) | (_, Err(e)) => return Err(format!("{name}: {e}")),
            }
        }
        ensure(checked == g + 2, || format!("{name}: only {checked} of {} layer counts within guards", g + 2))?;
        report.push(format!("g={g}"));
    }
    Ok(format!("{} stencils, n <= g+2 each ({})", report.len(), report.join(", ")))
}

fn ip_oracle(_: &mut Shared) -> Verdict {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut optimal, mut infeasible) = (0, 0);
    for _ in 0..150 {
        let case = bounded_nfold(&mut rng);
        let w = rand_vector(&mut rng, case.matrix.cols(), -3, 3);
        let points = case.feasible_points();
        let out = solve_nfold_ip(&case.stencil, case.n, &w, &case.rhs, &limits).map_err(|e| e.to_string())?;
        match (out, points.iter().map(|x| x.dot(&w)).max()) {
            (Outcome::Optimal { x, value }, Some(best)) => {
                ensure(value == best && x.dot(&w) == value, || format!("value {value} vs brute force {best}"))?;
                ensure(points.binary_search(&x).is_ok(), || format!("returned point {x} is not feasible"))?;
                optimal += 1;
            }
            (Outcome::Infeasible, None) => infeasible += 1,
            (out, best) => return Err(format!("solver {out:?} vs brute force {best:?}")),
        }
    }
    // instances with a free variable: a ray exists exactly when it pays
    let mut unbounded = 0;
    for _ in 0..30 {
        let mut case = bounded_nfold(&mut rng);
        let t = case.stencil.t();
        let a1 = case.stencil.a1().clone();
        let mut a2 = case.stencil.a2().clone();
        let free = rng.gen_range(0..t);
        let mut a1z = a1.clone();
        for i in 0..a2.rows() {
            a2.set(i, free, big(0));
        }
        for i in 0..a1z.rows() {
            a1z.set(i, free, big(0));
        }
        case.stencil = Stencil::new(a1z, a2).unwrap();
        let matrix = nfold_core::nfold::nfold_matrix(&case.stencil, case.n).unwrap();
        let b = matrix.mat_vec(&Vector::zeros(matrix.cols())).unwrap();
        case.rhs = nfold_core::nfold::Rhs::from_flat(&b, &case.stencil, case.n).unwrap();
        let mut w = rand_vector(&mut rng, matrix.cols(), -3, 3);
        w.as_mut_slice()[free] = big(rng.gen_range(1..=3));
        let out = solve_nfold_ip(&case.stencil, case.n, &w, &case.rhs, &limits).map_err(|e| e.to_string())?;
        let Outcome::Unbounded { ray } = out else {
            return Err(format!("expected an unbounded verdict, got {out:?}"));
        };
        ensure(
            ray.is_nonnegative() && !ray.is_zero() && matrix.mat_vec(&ray).unwrap().is_zero() && ray.dot(&w) > big(0),
            || format!("invalid ray certificate {ray}"),
        )?;
        unbounded += 1;
    }
    Ok(format!("{optimal} optimal and {infeasible} infeasible match enumeration, {unbounded} unbounded with valid rays"))
}

fn zonotope_oracle(_: &mut Shared) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut degenerate = 0;
    let total = 150;
    for k in 0..total {
        let d = rng.gen_range(1..=3);
        let m = rng.gen_range(0..=12);
        let mut gens: Vec<V> = (0..m).map(|_| rand_vector(&mut rng, d, -3, 3)).collect();
        if k % 3 == 0 && !gens.is_empty() {
            // parallel copies and zero vectors
            let e = gens[0].clone();
            gens.push(e.scaled(&big(-2)));
            gens.push(Vector::zeros(d));
            gens.truncate(12);
            degenerate += 1;
        }
        let out = zonotope_vertices(&gens, d).map_err(|e| e.to_string())?;
        let got: Vec<V> = out.iter().map(|v| v.vertex.clone()).collect();
        let want = zonotope_vertices_exhaustive(&gens, d).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("vertex sets differ for {gens:?}"))?;
        ensure(certificates_separate(&out), || format!("certificate fails to separate for {gens:?}"))?;
    }
    Ok(format!("{total} generator sets ({degenerate} degenerate) match the sign enumeration; certificates separate"))
}

fn report_value(c: &Builtin<BigInt>, r: &ConvexReport<BigInt>) -> Option<BigInt> {
    match &r.outcome {
        ConvexOutcome::Optimal { z, .. } => c.value(z),
        _ => None,
    }
}

fn convex_equivalence(shared: &mut Shared) -> Verdict {
    let limits = Limits::default();
    let pool = |k| rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap();
    let (one, four) = (pool(1), pool(4));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut kinds = std::collections::BTreeMap::new();
    for i in 0..120 {
        let case = match i % 3 {
            0 => transport_case(&mut rng),
            1 => packing_case(&mut rng),
            _ => partition_case(&mut rng),
        };
        let solve = || {
            solve_convex_nfold(&case.stencil, case.n, &case.weights, &case.rhs, &case.objective, &limits)
        };
        let serial = one.install(solve);
        let parallel = four.install(solve);
        let report = match (serial, parallel) {
            (Ok(a), Ok(b)) => {
                ensure(a == b, || format!("{} instance differs between 1 and 4 threads", case.kind))?;
                a
            }
            (Err(e), _) | (_, Err(e)) => {
                if matches!(e, nfold_core::Error::Inconsistent(_)) {
                    shared.identity_failures += 1;
                }
                return Err(format!("{}: {e}", case.kind));
            }
        };
        shared.identity_checks += report.stats.identity_checks;
        let got = report_value(&case.objective, &report);
        let want = match case.points.is_empty() {
            true => None,
            false => {
                let (_, z) = brute_convex_max(&case.points, &case.weights, &case.objective).unwrap();
                case.objective.value(&z)
            }
        };
        ensure(got == want, || format!("{}: pipeline {got:?} vs brute force {want:?}", case.kind))?;
        if want.is_none() {
            ensure(report.outcome == ConvexOutcome::Infeasible, || format!("{}: expected Infeasible", case.kind))?;
        }
        *kinds.entry(case.kind).or_insert(0) += 1;
        shared.convex_instances += 1;
    }
    let summary: Vec<String> = kinds.iter().map(|(k, v)| format!("{v} {k}")).collect();
    Ok(format!("{} instances agree ({}); identical under 1 and 4 threads", shared.convex_instances, summary.join(", ")))
}

fn identity(shared: &mut Shared) -> Verdict {
    ensure(shared.convex_instances > 0, || "criterion 7 produced no instances".into())?;
    ensure(shared.identity_checks > 0 && shared.identity_failures == 0, || {
        format!("{} checks, {} failures", shared.identity_checks, shared.identity_failures)
    })?;
    Ok(format!("{} oracle answers checked, 0 failures", shared.identity_checks))
}

fn clustering(_: &mut Shared) -> Verdict {
    let items: Vec<V> = [[0, 0], [1, 4], [5, 1], [6, 5], [2, 2], [7, 3]].iter().map(|p| vec_big(p)).collect();
    let inst = PartitionInstance { players: 2, items: items.clone(), sizes: Some(vec![big(3), big(3)]) };
    let sys = build_partition(&inst).map_err(|e| e.to_string())?;
    let r = solve_convex_nfold(&sys.stencil, sys.n, &sys.weights, &sys.rhs, &Builtin::Norm2, &Limits::default())
        .map_err(|e| e.to_string())?;
    let ConvexOutcome::Optimal { x, .. } = r.outcome else {
        return Err(format!("{:?}", r.outcome));
    };
    let parts = sys.decode(&x).map_err(|e| e.to_string())?;
    let found = cluster_variance(&items, &parts).map_err(|e| e.to_string())?;
    let mut best = None;
    for mask in 0u32..64 {
        if mask.count_ones() != 3 {
            continue;
        }
        let a: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
        let b: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 0).collect();
        let v = cluster_variance(&items, &[a, b]).unwrap();
        best = Some(best.map_or(v.clone(), |w: num_rational::Ratio<BigInt>| w.min(v)));
    }
    let best = best.unwrap();
    ensure(found == best, || format!("pipeline variance {found} vs minimum {best}"))?;
    Ok(format!("partition {parts:?} attains the minimum variance {best} over 20 balanced partitions"))
}

fn growth_instance(n: usize) -> (Stencil<BigInt>, nfold_core::nfold::Rhs<BigInt>, nfold_core::convexmax::ObjectiveWeights<BigInt>) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let table = rand_table(&mut rng, vec![2, 2, n], 3);
    let margin = |s: &[usize], r, c| Matrix::new(r, c, table.margin(s).unwrap()).unwrap();
    let sys = build_threeway(2, 2, n, &margin(&[1, 2], 2, 2), &margin(&[1, 3], 2, n), &margin(&[2, 3], 2, n)).unwrap();
    // weights repeat every four layers, so the projected directions do not depend on n
    let pattern = rand_weights(&mut rng, 2, 16, -2, 2);
    let rows = pattern
        .rows()
        .iter()
        .map(|r| Vector::new((0..4 * n).map(|j| r[j % 16].clone()).collect()))
        .collect();
    (sys.stencil, sys.rhs, nfold_core::convexmax::ObjectiveWeights::new(rows).unwrap())
}

fn growth(_: &mut Shared) -> Verdict {
    let limits = Limits::default();
    let mut times = Vec::new();
    for n in [4usize, 8, 16, 32] {
        let (stencil, rhs, weights) = growth_instance(n);
        let mut best = Duration::MAX;
        for _ in 0..3 {
            let start = Instant::now();
            let r = solve_convex_nfold(&stencil, n, &weights, &rhs, &Builtin::Norm2, &limits).map_err(|e| e.to_string())?;
            ensure(matches!(r.outcome, ConvexOutcome::Optimal { .. }), || format!("n={n}: {:?}", r.outcome))?;
            best = best.min(start.elapsed());
        }
        times.push((n, best));
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].1.as_secs_f64() / w[0].1.as_secs_f64()).collect();
    let shown: Vec<String> = times.iter().map(|(n, t)| format!("n={n}: {:.1} ms", t.as_secs_f64() * 1e3)).collect();
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    ensure(ratios.iter().all(|&r| r <= 8.0), || format!("{}; ratios {}", shown.join(", "), ratio_text.join(", ")))?;
    Ok(format!("{}; ratios per doubling {}", shown.join(", "), ratio_text.join(", ")))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "Graver example fidelity", limit: Duration::from_secs(1), run: graver_example },
        Criterion { id: 2, name: "n-product fidelity", limit: Duration::from_secs(1), run: nproduct_example },
        Criterion { id: 3, name: "Graver oracle suite", limit: Duration::from_secs(300), run: graver_oracle },
        Criterion { id: 4, name: "Stabilization consistency", limit: Duration::from_secs(600), run: stabilization },
        Criterion { id: 5, name: "IP oracle suite", limit: Duration::from_secs(600), run: ip_oracle },
        Criterion { id: 6, name: "Zonotope oracle suite", limit: Duration::from_secs(300), run: zonotope_oracle },
        Criterion { id: 7, name: "End-to-end convex equivalence", limit: Duration::from_secs(900), run: convex_equivalence },
        Criterion { id: 8, name: "Per-query identity", limit: Duration::from_secs(1), run: identity },
        Criterion { id: 9, name: "Clustering check", limit: Duration::from_secs(60), run: clustering },
        Criterion { id: 10, name: "Polynomial-growth smoke test", limit: Duration::from_secs(600), run: growth },
    ];
    let mut shared = Shared::default();
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let verdict = (c.run)(&mut shared);
        let elapsed = start.elapsed();
        let verdict = verdict.and_then(|msg| {
            if elapsed <= c.limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.2?}, limit {:?}", c.limit))
            }
        });
        match verdict {
            Ok(msg) => println!("criterion {:>2} PASS  {} [{elapsed:.2?}]: {msg}", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} [{elapsed:.2?}]: {msg}", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
