//! Acceptance suite. Runs every criterion in sequence, prints one
//! `PASS`/`FAIL` line each and exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reebmapper::cli;
use reebmapper::cover::{refine, uniform_cover_of_image};
use reebmapper::fixtures::{
    circle4, random_bivariate_grid, random_instance, random_region, random_test_boxes, raster_box_components,
    stable_sampling_oracle, tent, torus, Instance, InstanceParams,
};
use reebmapper::interleave::{
    build_interleaving_with, certified_upper_bound, identity_witness, verify_interleaving, BuildOptions,
};
use reebmapper::mapper::{categorical_mapper, jcn, lemma61_check_with};
use reebmapper::reeb::{adapted_cover, betti, geometric_mapper, reeb_graph, rgraph_isomorphic, IsoMode};
use reebmapper::{components, ActiveRegion, OpenBox, RdSpace, ReebGraph, Simplex};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn d1_instances(count: u64, offset: u64) -> Vec<Instance> {
    (offset..offset + count).map(|s| random_instance(s, &InstanceParams::small(1))).collect()
}

fn d2_instances(count: u64, offset: u64) -> Vec<Instance> {
    (offset..offset + count).map(|s| random_instance(s, &InstanceParams::small(2))).collect()
}

/// The test-box family of the instance, topped up with random boxes to at
/// least 16.
fn lemma_boxes(inst: &Instance, seed: u64) -> Vec<OpenBox> {
    let mut boxes = random_test_boxes(&inst.space, &inst.cover, 16, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let d = inst.cover.dim_range();
    let lo: Vec<f64> =
        (0..d).map(|a| inst.cover.elements().iter().map(|b| b.lo(a)).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> =
        (0..d).map(|a| inst.cover.elements().iter().map(|b| b.hi(a)).fold(f64::NEG_INFINITY, f64::max)).collect();
    while boxes.len() < 16 {
        let axes = (0..d)
            .map(|a| {
                let p = rng.gen_range(lo[a]..hi[a]);
                let q = rng.gen_range(lo[a]..hi[a]);
                (p.min(q) - 0.01, p.max(q) + 0.01)
            })
            .collect();
        boxes.push(OpenBox::new(axes).unwrap());
    }
    boxes
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut instances = d1_instances(100, 1_000);
    instances.extend(d2_instances(100, 2_000));
    let mut failures = 0;
    let mut boxes_checked = 0;
    let mut pairs_checked = 0;
    let mut min_boxes = usize::MAX;
    for (k, inst) in instances.iter().enumerate() {
        let boxes = lemma_boxes(inst, k as u64);
        min_boxes = min_boxes.min(boxes.len());
        let cm = categorical_mapper(&inst.space, &inst.cover).unwrap();
        let report = lemma61_check_with(&inst.space, &cm, &boxes).unwrap();
        failures += report.failures.len();
        boxes_checked += report.boxes_checked;
        pairs_checked += report.pairs_checked;
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures == 0 && min_boxes >= 10 && elapsed < Duration::from_secs(120),
        format!(
            "{} instances, {boxes_checked} boxes (min {min_boxes} per instance), {pairs_checked} nested pairs, \
             {failures} failures, {:.1} s",
            instances.len(),
            elapsed.as_secs_f64()
        ),
    )
}

struct InterleaveStats {
    instances: usize,
    failures: usize,
    corrupted: usize,
    corruption_missed: usize,
    identity_failures: usize,
    swap_failures: usize,
}

fn interleaving_runs() -> (InterleaveStats, InterleaveStats) {
    let run = |instances: Vec<Instance>| {
        let mut s = InterleaveStats {
            instances: instances.len(),
            failures: 0,
            corrupted: 0,
            corruption_missed: 0,
            identity_failures: 0,
            swap_failures: 0,
        };
        for (k, inst) in instances.iter().enumerate() {
            let opts = BuildOptions { seed: k as u64, ..BuildOptions::default() };
            let w = build_interleaving_with(&inst.space, &inst.cover, inst.cover.resolution(), &opts).unwrap();
            if !verify_interleaving(&w).passed {
                s.failures += 1;
            }
            if !verify_interleaving(&w.swapped()).passed {
                s.swap_failures += 1;
            }
            let id = identity_witness(&inst.space, &inst.cover, &opts).unwrap();
            if !verify_interleaving(&id).passed {
                s.identity_failures += 1;
            }
            let mut bad = w.clone();
            if bad.corrupt_phi() {
                s.corrupted += 1;
                if verify_interleaving(&bad).passed {
                    s.corruption_missed += 1;
                }
            }
        }
        s
    };
    (run(d1_instances(50, 3_000)), run(d2_instances(20, 4_000)))
}

fn criterion_2(d1: &InterleaveStats, d2: &InterleaveStats) -> Outcome {
    let corrupted = d1.corrupted + d2.corrupted;
    let missed = d1.corruption_missed + d2.corruption_missed;
    Outcome::new(
        d1.instances >= 50 && d2.instances >= 20 && d1.failures + d2.failures == 0 && corrupted > 0 && missed == 0,
        format!(
            "d=1: {}/{} verified; d=2: {}/{} verified; negative control: {}/{corrupted} corrupted witnesses rejected",
            d1.instances - d1.failures,
            d1.instances,
            d2.instances - d2.failures,
            d2.instances,
            corrupted - missed
        ),
    )
}

fn criterion_7(d1: &InterleaveStats, d2: &InterleaveStats) -> Outcome {
    let n = d1.instances + d2.instances;
    let id = d1.identity_failures + d2.identity_failures;
    let sw = d1.swap_failures + d2.swap_failures;
    Outcome::new(
        id == 0 && sw == 0,
        format!("reflexivity {}/{n}, symmetry {}/{n}; triangle inequality not tested", n - id, n - sw),
    )
}

/// Per-vertex labels of the engine's components.
fn engine_partition(x: &RdSpace, r: &ActiveRegion) -> (usize, Vec<Option<u32>>) {
    let cs = components(x, r);
    let cx = x.complex();
    let labels = (0..cx.vertex_count() as u32)
        .map(|v| {
            let id = cx.id_of(&Simplex::new(vec![v]).unwrap())?;
            cs.label_of_simplex(id as u32)
        })
        .collect();
    (cs.len(), labels)
}

/// Whether two vertex labellings induce the same partition of the same set.
fn same_partition<A: Ord + Copy, B: Ord + Copy>(a: &[Option<A>], b: &[Option<B>]) -> bool {
    let mut fwd: BTreeMap<A, B> = BTreeMap::new();
    let mut back: BTreeMap<B, A> = BTreeMap::new();
    for (p, q) in a.iter().zip(b) {
        match (p, q) {
            (None, None) => {}
            (Some(p), Some(q)) => {
                if *fwd.entry(*p).or_insert(*q) != *q || *back.entry(*q).or_insert(*p) != *p {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

fn criterion_3() -> Outcome {
    let mut pairs = 0;
    let mut count_mismatch = 0;
    let mut partition_mismatch = 0;
    let mut unstable = 0;
    for seed in 0..250u64 {
        let dim = 1 + (seed % 2) as usize;
        let inst = random_instance(5_000 + seed, &InstanceParams::small(dim));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..2 {
            let region = if k == 1 && seed % 3 == 0 {
                let a = random_region(&mut rng, dim);
                let b = random_region(&mut rng, dim);
                ActiveRegion::union(a.boxes().iter().chain(b.boxes()).cloned().collect())
            } else {
                random_region(&mut rng, dim)
            };
            let (oracle, stable) = stable_sampling_oracle(&inst.space, &region, if dim == 1 { 16 } else { 128 });
            let (count, labels) = engine_partition(&inst.space, &region);
            pairs += 1;
            unstable += !stable as usize;
            count_mismatch += (count != oracle.count) as usize;
            partition_mismatch += !same_partition(&labels, &oracle.vertex_partition) as usize;
        }
    }
    Outcome::new(
        pairs >= 500 && count_mismatch == 0 && partition_mismatch == 0 && unstable == 0,
        format!(
            "{pairs} (mesh, region) pairs: {count_mismatch} count mismatches, {partition_mismatch} partition \
             mismatches, {unstable} unstable oracle runs"
        ),
    )
}

/// The graph as a 1-complex, each edge subdivided at its midpoint.
fn graph_space(g: &ReebGraph) -> RdSpace {
    let mut values: Vec<Vec<f64>> = g.values().iter().map(|&v| vec![v]).collect();
    let mut simplices = Vec::new();
    for &(a, b) in g.edges() {
        let m = values.len() as u32;
        values.push(vec![0.5 * (g.values()[a] + g.values()[b])]);
        simplices.push(vec![a as u32, m]);
        simplices.push(vec![m, b as u32]);
    }
    RdSpace::from_parts(1, values, simplices).unwrap()
}

/// Compares a Reeb graph with sampled component counts of `x` over every
/// interval between cut points, and derives `b1` from slab and band counts.
/// Cuts sit in the middle of gaps of at least `min_gap` between vertex values.
fn reeb_vs_oracle(x: &RdSpace, g: &ReebGraph, min_gap: f64, depth: usize) -> Result<(usize, usize), String> {
    let mut vals: Vec<f64> = x.map().values().iter().map(|v| v[0]).collect();
    vals.sort_by(f64::total_cmp);
    let (lo, hi) = (vals[0] - 1.0, vals[vals.len() - 1] + 1.0);
    let gaps: Vec<(f64, f64)> = vals
        .windows(2)
        .filter(|w| w[1] - w[0] >= min_gap.max(1e-6))
        .map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0]))
        .collect();
    let oracle = |x: &RdSpace, a: f64, b: f64| -> Result<usize, String> {
        let (r, stable) = stable_sampling_oracle(x, &OpenBox::interval(a, b).unwrap().into(), depth);
        if stable {
            Ok(r.count)
        } else {
            Err(format!("oracle unstable on ({a}, {b})"))
        }
    };
    let gx = graph_space(g);
    let mut points = vec![lo];
    points.extend(gaps.iter().map(|&(c, _)| c));
    points.push(hi);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (points[i], points[j]);
            let (want, got) = (oracle(x, a, b)?, oracle(&gx, a, b)?);
            if want != got {
                return Err(format!("({a}, {b}): mesh has {want} components, graph has {got}"));
            }
        }
    }
    let b0 = oracle(x, lo, hi)?;
    let slabs: usize = points.windows(2).map(|w| oracle(x, w[0], w[1])).sum::<Result<usize, String>>()?;
    let bands: usize =
        gaps.iter().map(|&(c, gap)| oracle(x, c - 0.25 * gap, c + 0.25 * gap)).sum::<Result<usize, String>>()?;
    Ok((b0, bands + b0 - slabs))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, x: RdSpace, min_gap: f64, depth: usize, shape: &dyn Fn(&ReebGraph) -> bool| {
        let g = reeb_graph(&x).unwrap();
        let b = betti(&g);
        let derived = reeb_vs_oracle(&x, &g, min_gap, depth);
        let good = shape(&g) && derived == Ok((b.b0, b.b1));
        ok &= good;
        notes.push(format!(
            "{name}: {} nodes/{} edges, b=({},{}), {} non-regular, oracle {:?}",
            g.node_count(),
            g.edge_count(),
            b.b0,
            b.b1,
            g.critical_nodes().len(),
            derived
        ));
    };
    check("tent", tent(), 0.0, 16, &|g| {
        let mut v = g.values().to_vec();
        v.sort_by(f64::total_cmp);
        let top = (0..g.node_count()).find(|&n| g.values()[n] == 1.0);
        g.node_count() == 3
            && g.edge_count() == 2
            && v == [0.0, 0.0, 1.0]
            && top.is_some_and(|t| g.degree(t) == 2)
            && (betti(g).b0, betti(g).b1) == (1, 0)
    });
    check("circle4", circle4(), 0.0, 16, &|g| {
        g.node_count() == 2 && g.edge_count() == 2 && (betti(g).b0, betti(g).b1) == (1, 1)
    });
    check("torus", torus(), 0.15, 32, &|g| (betti(g).b0, betti(g).b1) == (1, 1) && g.critical_nodes().len() == 4);
    Outcome::new(ok, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut iso_notes = Vec::new();
    let mut iso_ok = true;
    let mut bound_ok = true;
    let mut bound_notes = Vec::new();
    for (name, x) in [("tent", tent()), ("circle4", circle4()), ("torus", torus())] {
        let reeb = reeb_graph(&x).unwrap();
        let mut c = uniform_cover_of_image(&x, &[2], 0.5).unwrap();
        let mut adapted_steps = Vec::new();
        let mut iso_steps = Vec::new();
        let mut prev_res: Option<f64> = None;
        for step in 0..6 {
            let cm = categorical_mapper(&x, &c).unwrap();
            if adapted_cover(&x, &cm).unwrap() {
                adapted_steps.push(c.len());
                let g = geometric_mapper(&cm).unwrap().contract_regular();
                if rgraph_isomorphic(&g, &reeb, IsoMode::Monotone).unwrap() {
                    iso_steps.push(c.len());
                }
            }
            if step < 4 {
                let res = c.resolution();
                let bound = certified_upper_bound(&x, &c);
                let halved = prev_res.is_none_or(|p| res < p && (res - 0.5 * p).abs() <= 1e-9 * p);
                match bound {
                    Ok(b) if b <= res && halved => {}
                    other => {
                        bound_ok = false;
                        bound_notes.push(format!("{name} n={}: {other:?}", c.len()));
                    }
                }
                prev_res = Some(res);
            }
            c = refine(&c).unwrap();
        }
        iso_ok &= iso_steps == adapted_steps;
        iso_notes.push(format!("{name} adapted at n={adapted_steps:?}, isomorphic at n={iso_steps:?}"));
    }
    let bound = if bound_ok { "bound <= res at all 4 steps".to_string() } else { bound_notes.join(", ") };
    Outcome::new(iso_ok && bound_ok, format!("{}; {bound}", iso_notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut mismatched_cases = 0;
    let mut mismatched_boxes = Vec::new();
    for seed in 0..20u64 {
        let (x, _) = random_bivariate_grid(6_000 + seed, 32);
        for q in 2..=8usize {
            let counts = [q, q];
            let nerve = jcn(&x, &counts, 0.5).unwrap();
            let cover = uniform_cover_of_image(&x, &counts, 0.5).unwrap();
            let raster = raster_box_components(x.map().values(), 32, 256, cover.elements());
            checked += 1;
            if nerve.vertex_count() != raster.iter().sum::<usize>() {
                mismatched_cases += 1;
                for (b, &r) in cover.elements().iter().zip(&raster) {
                    let engine = components(&x, &b.clone().into()).len();
                    if engine != r {
                        mismatched_boxes.push((seed, b.clone(), engine));
                    }
                }
            }
        }
    }
    // finer raster on a sample of the disagreeing boxes
    let sample: Vec<_> = mismatched_boxes.iter().step_by((mismatched_boxes.len() / 40).max(1)).collect();
    let resolved = sample
        .iter()
        .filter(|(seed, b, engine)| {
            let (x, _) = random_bivariate_grid(6_000 + seed, 32);
            raster_box_components(x.map().values(), 32, 2048, std::slice::from_ref(b))[0] == *engine
        })
        .count();
    Outcome::new(
        mismatched_cases == 0,
        format!(
            "{checked} (field, quantization) cases, {mismatched_cases} with a different vertex count at 256x256 \
             ({} boxes); at 2048x2048, {resolved}/{} sampled disagreeing boxes match the engine",
            mismatched_boxes.len(),
            sample.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let sides = [32usize, 45, 64, 91, 128];
    let mut medians = Vec::new();
    for &n in &sides {
        let (x, _) = random_bivariate_grid(7_000, n);
        let mut runs: Vec<f64> = (0..5)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(jcn(&x, &[4, 4], 0.5).unwrap());
                t.elapsed().as_secs_f64()
            })
            .collect();
        runs.sort_by(f64::total_cmp);
        medians.push(runs[2]);
    }
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[1] / w[0]).collect();
    let detail =
        sides.iter().zip(&medians).map(|(n, m)| format!("{n}x{n}: {:.1} ms", m * 1e3)).collect::<Vec<_>>().join(", ");
    Outcome::new(
        ratios.iter().all(|&r| r < 2.5),
        format!(
            "{detail}; ratios per doubling of vertex count {:?}",
            ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("circle4.json");
    let mut sink = Vec::new();
    let code = cli::run(
        ["reebmapper", "fixture", "--name", "circle4", "--out", mesh.to_str().unwrap()],
        &mut sink,
        &mut Vec::new(),
    );
    assert_eq!(code, 0);
    let converge = || {
        let mut out = Vec::new();
        let code = cli::run(
            [
                "reebmapper",
                "converge",
                "--mesh",
                mesh.to_str().unwrap(),
                "--steps",
                "4",
                "--seed",
                "7",
                "--format",
                "csv",
            ],
            &mut out,
            &mut Vec::new(),
        );
        (code, out)
    };
    let (c1, a) = converge();
    let (c2, b) = converge();
    Outcome::new(
        c1 == 0 && c2 == 0 && !a.is_empty() && a == b,
        format!("exit codes {c1}/{c2}, {} bytes, identical: {}", a.len(), a == b),
    )
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut stdout = std::io::stdout();
    let mut failed = 0;
    let mut report = |id: usize, title: &str, o: Outcome| {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{tag} criterion {id} ({title}): {}", o.detail).unwrap();
        stdout.flush().unwrap();
        failed += !o.passed as usize;
    };
    report(1, "colimit formula", criterion_1());
    let (d1, d2) = interleaving_runs();
    report(2, "interleaving certification", criterion_2(&d1, &d2));
    report(3, "component engine vs sampling oracle", criterion_3());
    report(4, "canonical Reeb graphs", criterion_4());
    report(5, "geometric mapper at adapted covers", criterion_5());
    report(6, "JCN vs raster flood fill", criterion_6());
    report(7, "identity and swapped witnesses", criterion_7(&d1, &d2));
    report(8, "JCN scaling", criterion_8());
    report(9, "converge determinism", criterion_9());
    if failed > 0 {
        writeln!(std::io::stdout(), "{failed} criterion(s) failed").unwrap();
        std::process::exit(1);
    }
}
