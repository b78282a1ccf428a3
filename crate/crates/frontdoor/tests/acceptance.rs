//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use common::{all_dags, random_dag, random_xy, small_xy_pairs, subsets};
use frontdoor::bench::{gen_instance, run_benchmark, ExperimentConfig, XyMode};
use frontdoor_core::oracle::fd_sets_bruteforce;
use frontdoor_core::{
    compute_zi, compute_zii, do_oracle, fd_estimate, fd_estimate_observed, find_fd, find_fd_traced, find_minimal_fd,
    fixtures, joint_distribution, minimal_decomposition, verify_fd, Dag, DiscreteModel, FdEnumerator, FdQuery,
    FdResult, NodeSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_ORACLE_GRAPHS: usize = 2000;
const SLOPE_RANGE: (f64, f64) = (0.8, 1.3);
const LINEARITY_REPS: usize = 20;
const MAX_SECONDS_LARGEST: f64 = 1.0;
const DELAY_INSTANCES: usize = 500;
const DELAY_OUTPUT_CAP: usize = 4096;
const ESTIMATOR_MODELS: usize = 200;
const ESTIMATOR_TOLERANCE: f64 = 1e-10;
const MARGINAL_TOLERANCE: f64 = 1e-14;
const FLAG_REPS: usize = 1000;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(g: &Dag, list: &str) -> NodeSet {
    g.set_by_names(list.split(',').filter(|s| !s.is_empty())).unwrap()
}

fn query(g: &Dag) -> FdQuery {
    FdQuery::with_defaults(g, names(g, "X"), names(g, "Y")).unwrap()
}

fn golden() -> Verdict {
    let mut checks = 0;
    let mut expect = |what: &str, ok: bool| -> Result<(), String> {
        checks += 1;
        ensure(ok, || format!("{what} does not hold"))
    };

    let g = fixtures::gr();
    let q = query(&g);
    let zi = compute_zi(&g, &q);
    expect("GR Z(i)={A,B,D}", zi == names(&g, "A,B,D"))?;
    expect("GR Z(ii)={A,D}", compute_zii(&g, &q, &zi) == names(&g, "A,D"))?;
    expect("GR find={A,D}", find_fd(&g, &q) == FdResult::Found(names(&g, "A,D")))?;

    let g = fixtures::g2();
    let q = query(&g);
    expect(
        "G2 find={A,B,C,D}",
        find_fd(&g, &q) == FdResult::Found(names(&g, "A,B,C,D")),
    )?;
    expect("G2 min={D}", find_minimal_fd(&g, &q) == FdResult::Found(names(&g, "D")))?;
    expect("G2 13 sets", FdEnumerator::new(&g, &q).count() == 13)?;

    let g = fixtures::g3();
    let (x, y) = (names(&g, "X"), names(&g, "Y"));
    let v = |z: &str| verify_fd(&g, &x, &y, &names(&g, z)).unwrap();
    expect("G3 verify {A,B,C}", v("A,B,C"))?;
    expect("G3 reject pairs", !v("A,B") && !v("A,C") && !v("B,C"))?;
    expect(
        "G3 min={A}",
        find_minimal_fd(&g, &query(&g)) == FdResult::Found(names(&g, "A")),
    )?;

    let g = fixtures::gm();
    let d = minimal_decomposition(&g, &query(&g)).ok_or("GM has no front-door set")?;
    expect("GM Z_An={B,C,D,E}", d.z_an == names(&g, "B,C,D,E"))?;
    expect("GM Z_XY={B}", d.z_xy == names(&g, "B"))?;
    expect("GM Z_ZY={D,E}", d.z_zy == names(&g, "D,E"))?;
    expect("GM min={B,D,E}", d.minimal == names(&g, "B,D,E"))?;

    let g = fixtures::g1();
    let q = query(&g);
    let z = FdResult::Found(names(&g, "Z"));
    expect("G1 find={Z}", find_fd(&g, &q) == z)?;
    expect("G1 min={Z}", find_minimal_fd(&g, &q) == z)?;
    expect(
        "G1 enumeration [{Z}]",
        FdEnumerator::new(&g, &q).collect::<Vec<_>>() == [names(&g, "Z")],
    )?;
    Ok(format!("{checks} checks"))
}

/// Compares every algorithm with brute force on one query.
fn oracle_case(g: &Dag, x: &NodeSet, y: &NodeSet) -> Result<(), String> {
    let q = FdQuery::with_defaults(g, x.clone(), y.clone()).map_err(|e| e.to_string())?;
    let family = fd_sets_bruteforce(g, x, y, q.include(), q.restrict()).map_err(|e| e.to_string())?;
    let describe = || {
        format!(
            "edges={:?} latent={:?} x={x:?} y={y:?}",
            g.edges().collect::<Vec<_>>(),
            g.latent_nodes()
        )
    };
    match find_fd(g, &q) {
        FdResult::NoneExists => ensure(family.is_empty(), || format!("find missed a set: {}", describe()))?,
        FdResult::Found(z) => ensure(family.contains(&z) && family.iter().all(|f| f.is_subset(&z)), || {
            format!("find returned {z:?}, not the maximum: {}", describe())
        })?,
    }
    let mut listed: Vec<NodeSet> = FdEnumerator::new(g, &q).collect();
    listed.sort();
    ensure(listed == family, || format!("enumeration differs: {}", describe()))?;
    if let Some(z) = find_minimal_fd(g, &q).into_set() {
        ensure(family.contains(&z), || {
            format!("min returned invalid {z:?}: {}", describe())
        })?;
        ensure(!family.iter().any(|f| f != &z && f.is_subset(&z)), || {
            format!("min returned non-minimal {z:?}: {}", describe())
        })?;
    } else {
        ensure(family.is_empty(), || format!("min missed a set: {}", describe()))?;
    }
    for z in subsets(q.restrict()) {
        let v = verify_fd(g, x, y, &z).map_err(|e| e.to_string())?;
        ensure(v == family.contains(&z), || {
            format!("verify({z:?})={v}: {}", describe())
        })?;
    }
    Ok(())
}

fn parallel_count<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<usize, String> + Sync) -> Result<usize, String> {
    let workers = thread::available_parallelism().map_or(1, |p| p.get());
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().try_fold(0, |acc, it| f(it).map(|k| acc + k))))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    })
}

fn oracle_equivalence() -> Verdict {
    let mut queries = 0;
    for n in 2..=5 {
        let nodes: Vec<usize> = (0..n).collect();
        let pairs = small_xy_pairs(n, &nodes);
        queries += parallel_count(&all_dags(n), |g| {
            for (x, y) in &pairs {
                oracle_case(g, x, y)?;
            }
            Ok(pairs.len())
        })?;
    }
    let exhaustive = queries;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut random = Vec::with_capacity(RANDOM_ORACLE_GRAPHS);
    while random.len() < RANDOM_ORACLE_GRAPHS {
        let n = rng.random_range(6..=10);
        let p = rng.random_range(0.15..0.55);
        let latent_p = if rng.random_bool(0.5) { 0.0 } else { 0.25 };
        let g = random_dag(&mut rng, n, p, latent_p);
        if let Some((x, y)) = random_xy(&mut rng, &g) {
            random.push((g, x, y));
        }
    }
    queries += parallel_count(&random, |(g, x, y)| oracle_case(g, x, y).map(|_| 1))?;
    Ok(format!(
        "{queries} queries ({exhaustive} exhaustive n<=5), 0 discrepancies"
    ))
}

fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

fn linearity() -> Verdict {
    let mut points = Vec::new();
    let mut work = Vec::new();
    let mut worst_largest = 0.0f64;
    for e in 10..=17 {
        let n = 1usize << e;
        let cfg = ExperimentConfig {
            n,
            m: n * 3 / 2,
            xy_mode: XyMode::Random13,
            r_fraction: 0.5,
            reps: LINEARITY_REPS,
            seed: 0x11ea,
            time_limit: 30.0,
        };
        for rep in 0..LINEARITY_REPS {
            let inst = gen_instance(&cfg, cfg.instance_seed(rep)).map_err(|e| e.to_string())?;
            let q = inst.query();
            let secs = (0..3)
                .map(|_| {
                    let t = Instant::now();
                    std::hint::black_box(find_fd(&inst.dag, &q));
                    t.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min);
            let size = ((n + cfg.m) as f64).ln();
            points.push((size, secs.ln()));
            let stats = find_fd_traced(&inst.dag, &q).1.stats;
            work.push((size, ((stats.visits + stats.edge_checks) as f64).ln()));
            if e == 17 {
                worst_largest = worst_largest.max(secs);
            }
        }
    }
    let slope = regression_slope(&points);
    let detail = format!(
        "slope {slope:.3}, slowest at n=2^17 {:.3} ms, slope of visited vertices and edges {:.3}",
        worst_largest * 1e3,
        regression_slope(&work)
    );
    ensure((SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope), || {
        format!("{detail}: slope outside {SLOPE_RANGE:?}")
    })?;
    ensure(worst_largest < MAX_SECONDS_LARGEST, || {
        format!("{detail}: exceeds {MAX_SECONDS_LARGEST} s")
    })?;
    Ok(detail)
}

fn enumeration_delay() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde1a);
    let mut worst_ratio = 0.0f64;
    let mut outputs = 0;
    for k in 0..DELAY_INSTANCES {
        let n = rng.random_range(8..=64);
        let m = rng.random_range(n..=3 * n).min(n * (n - 1) / 2);
        let cfg = ExperimentConfig {
            n,
            m,
            xy_mode: if k % 2 == 0 { XyMode::Random13 } else { XyMode::LogGrow },
            r_fraction: rng.random_range(0.1..0.4),
            reps: 1,
            seed: rng.random(),
            time_limit: 30.0,
        };
        let inst = gen_instance(&cfg, cfg.seed).map_err(|e| e.to_string())?;
        let mut e = FdEnumerator::new(&inst.dag, &inst.query()).with_limit(DELAY_OUTPUT_CAP);
        outputs += e.by_ref().count();
        let bound = 2 * n + 2;
        ensure(e.max_delay() <= bound, || {
            format!("delay {} exceeds {bound} at n={n}", e.max_delay())
        })?;
        worst_ratio = worst_ratio.max(e.max_delay() as f64 / bound as f64);
    }
    Ok(format!(
        "{DELAY_INSTANCES} instances, {outputs} sets, worst delay/(2n+2) = {worst_ratio:.3}"
    ))
}

fn random_model(g: Dag, rng: &mut ChaCha8Rng) -> DiscreteModel {
    let cards: Vec<usize> = (0..g.node_count()).map(|_| rng.random_range(2..=3)).collect();
    let cpts = (0..g.node_count())
        .map(|v| {
            let rows: usize = g.parents(v).iter().map(|&p| cards[p]).product();
            (0..rows)
                .flat_map(|_| {
                    let w: Vec<f64> = (0..cards[v]).map(|_| rng.random_range(0.05..1.0)).collect();
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(move |a| a / s)
                })
                .collect()
        })
        .collect();
    DiscreteModel::new(g, cards, cpts).unwrap()
}

/// P(assignment) by summing the product of all tables over every state.
fn brute_marginal(m: &DiscreteModel, fixed: &[(usize, usize)]) -> f64 {
    let g = m.dag();
    let n = g.node_count();
    let mut state = vec![0; n];
    let mut total = 0.0;
    loop {
        if fixed.iter().all(|&(v, val)| state[v] == val) {
            let mut p = 1.0;
            for v in 0..n {
                let row = g.parents(v).iter().fold(0, |a, &u| a * m.cards()[u] + state[u]);
                p *= m.cpt(v)[row * m.cards()[v] + state[v]];
            }
            total += p;
        }
        let mut k = 0;
        while k < n {
            state[k] += 1;
            if state[k] < m.cards()[k] {
                break;
            }
            state[k] = 0;
            k += 1;
        }
        if k == n {
            return total;
        }
    }
}

fn estimator() -> Verdict {
    let fixtures: [(&str, fn() -> Dag); 4] = [
        ("G1", fixtures::g1),
        ("G2", fixtures::g2),
        ("G3", fixtures::g3),
        ("GM", fixtures::gm),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xe57);
    let mut worst = 0.0f64;
    let mut evaluations = 0;
    for k in 0..ESTIMATOR_MODELS {
        let (label, make) = fixtures[k % fixtures.len()];
        let model = random_model(make(), &mut rng);
        let g = model.dag();
        let q = query(g);
        let (xv, yv) = (g.index_of("X").unwrap(), g.index_of("Y").unwrap());
        let zs = [
            find_fd(g, &q).into_set().unwrap(),
            find_minimal_fd(g, &q).into_set().unwrap(),
        ];
        for xval in 0..model.cards()[xv] {
            for yval in 0..model.cards()[yv] {
                let (xa, ya) = ([(xv, xval)], [(yv, yval)]);
                let truth = do_oracle(&model, &xa, &ya).map_err(|e| e.to_string())?;
                for z in &zs {
                    let f = fd_estimate(&model, &xa, &ya, z).map_err(|e| e.to_string())?;
                    worst = worst.max((f - truth).abs());
                    evaluations += 1;
                    ensure((f - truth).abs() <= ESTIMATOR_TOLERANCE, || {
                        format!("{label}: estimate {f} vs truncated factorization {truth}")
                    })?;
                }
                let joint = joint_distribution(&model, &g.set_of([xv, yv])).map_err(|e| e.to_string())?;
                let empty = fd_estimate_observed(&joint, &xa, &ya, &[]).map_err(|e| e.to_string())?;
                let exact = joint.prob(&ya).ok_or("P(y) is undefined")?;
                ensure(empty.to_bits() == exact.to_bits(), || {
                    format!("{label}: empty-set branch {empty} is not P(y) = {exact}")
                })?;
                let py = brute_marginal(&model, &ya);
                ensure((empty - py).abs() <= MARGINAL_TOLERANCE, || {
                    format!("{label}: empty-set branch {empty} vs summed P(y) {py}")
                })?;
            }
        }
    }
    Ok(format!("{evaluations} estimates, max error {worst:.2e}"))
}

fn identification_flags() -> Verdict {
    let mut configs = Vec::new();
    for e in 4..=6 {
        let n = 1usize << e;
        for m in [n * 3 / 2, n * 5 / 2, n * 5] {
            for xy_mode in [XyMode::Random13, XyMode::LogGrow] {
                configs.push(ExperimentConfig {
                    n,
                    m,
                    xy_mode,
                    r_fraction: 0.25,
                    reps: FLAG_REPS,
                    seed: 0xd0 + configs.len() as u64,
                    time_limit: 30.0,
                });
            }
        }
    }
    let results = parallel_count(&configs, |cfg| {
        let records = run_benchmark(cfg).map_err(|e| e.to_string())?;
        let mut sizes: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
        for r in &records {
            ensure(!r.fdzero || r.fd, || format!("fdzero without fd, seed {}", r.seed))?;
            ensure(r.bdplus == (r.bd || r.fdzero), || {
                format!("bdplus mismatch, seed {}", r.seed)
            })?;
            if r.fd {
                let e = sizes.entry(r.algo).or_default();
                e.0 += r.setsize as f64;
                e.1 += 1;
            }
        }
        let mean = |algo: &str| sizes.get(algo).map_or(0.0, |&(s, k)| s / k as f64);
        let (max, min) = (mean("find"), mean("min"));
        ensure(max >= min, || {
            format!("n={} m={}: mean maximal {max} < mean minimal {min}", cfg.n, cfg.m)
        })?;
        Ok(usize::from(max > min))
    })?;
    ensure(results > 0, || {
        "maximal and minimal sets never differ in mean size".into()
    })?;
    Ok(format!(
        "{} configurations x {FLAG_REPS} reps, 0 flag violations, strict size gap in {results}",
        configs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 6] = [
        ("golden examples", golden),
        ("oracle equivalence", oracle_equivalence),
        ("linearity", linearity),
        ("enumeration delay", enumeration_delay),
        ("estimator", estimator),
        ("identification flags", identification_flags),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
