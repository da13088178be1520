use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reebmapper::cli::format_float;
use reebmapper::cover::{refine, thicken, uniform_cover, uniform_cover_of_image};
use reebmapper::fixtures::{
    circle4, random_instance, random_region, stable_sampling_oracle, tent, torus, InstanceParams,
};
use reebmapper::interleave::{certified_upper_bound, identity_witness, verify_interleaving, BuildOptions};
use reebmapper::mapper::{categorical_mapper, mapper_nerve};
use reebmapper::preimage::component_map;
use reebmapper::reeb::{betti, geometric_mapper, nerve_betti, reeb_graph_with};
use reebmapper::{components, OpenBox, RdSpace};

fn axis() -> impl Strategy<Value = (f64, f64)> {
    (-10.0..10.0f64, 0.1..5.0f64).prop_map(|(lo, w)| (lo, lo + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uniform_cover_covers_its_range(
        range in proptest::collection::vec(axis(), 1..=3),
        n in 1usize..6,
        gain in 0.05..0.95f64,
        t in proptest::collection::vec(0.0..1.0f64, 3),
    ) {
        let counts = vec![n; range.len()];
        let c = uniform_cover(&range, &counts, gain).unwrap();
        prop_assert_eq!(c.len(), n.pow(range.len() as u32));
        let p: Vec<f64> = range.iter().zip(&t).map(|(&(lo, hi), &s)| lo + s * (hi - lo)).collect();
        prop_assert!(c.elements().iter().any(|b| b.contains_point(&p)));
        let diam = c.elements().iter().map(|b| b.diameter()).fold(0.0, f64::max);
        prop_assert!((c.resolution() - diam).abs() <= 1e-12 * diam.max(1.0));
    }

    #[test]
    fn refine_halves_resolution(range in axis(), n in 1usize..8, gain in 0.05..0.95f64) {
        let c = uniform_cover(&[range], &[n], gain).unwrap();
        let r = refine(&c).unwrap();
        prop_assert!((r.resolution() - c.resolution() / 2.0).abs() <= 1e-9 * c.resolution());
    }

    #[test]
    fn thickening_contains_the_box(a in axis(), b in axis(), eps in 0.0..2.0f64) {
        let x = OpenBox::new(vec![a, b]).unwrap();
        let t = thicken(&x, eps);
        prop_assert!(x.is_subset_of(&t));
        prop_assert!((t.diameter() - x.diameter() - 2.0 * eps).abs() <= 1e-9);
    }

    #[test]
    fn format_float_is_stable(v in proptest::num::f64::NORMAL) {
        let once = format_float(v);
        let parsed: f64 = once.parse().unwrap();
        prop_assert_eq!(format_float(parsed), once);
        prop_assert!(((parsed - v) / v).abs() < 1e-11);
    }

    #[test]
    fn mesh_json_round_trip(seed in any::<u64>(), dim in 1usize..=2) {
        let x = random_instance(seed, &InstanceParams::small(dim)).space;
        let y = RdSpace::from_json_str(&x.to_json_string()).unwrap();
        prop_assert_eq!(x, y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engine_matches_oracle_on_intervals(seed in any::<u64>(), region_seed in any::<u64>()) {
        let x = random_instance(seed, &InstanceParams::small(1)).space;
        let r = random_region(&mut ChaCha8Rng::seed_from_u64(region_seed), 1);
        let (oracle, stable) = stable_sampling_oracle(&x, &r, 16);
        prop_assert!(stable);
        prop_assert_eq!(components(&x, &r).len(), oracle.count);
    }

    #[test]
    fn nested_boxes_map_every_component(seed in any::<u64>(), region_seed in any::<u64>(), eps in 0.0..1.0f64) {
        let dim = 1 + (seed % 2) as usize;
        let x = random_instance(seed, &InstanceParams::small(dim)).space;
        let small = random_region(&mut ChaCha8Rng::seed_from_u64(region_seed), dim);
        let large = thicken(&small.boxes()[0], eps);
        let s = components(&x, &small);
        let l = components(&x, &large.into());
        let m = component_map(&x, &s, &l).unwrap();
        prop_assert_eq!(m.len(), s.len());
        let targets: BTreeSet<u32> = l.labels().into_iter().collect();
        prop_assert!(m.values().all(|t| targets.contains(t)));
    }

    #[test]
    fn nerve_vertices_count_components(seed in any::<u64>()) {
        let inst = random_instance(seed, &InstanceParams::small(1 + (seed % 2) as usize));
        let cm = categorical_mapper(&inst.space, &inst.cover).unwrap();
        let m = mapper_nerve(&cm);
        let expected: usize = inst
            .cover
            .elements()
            .iter()
            .map(|b| components(&inst.space, &b.clone().into()).len())
            .sum();
        prop_assert_eq!(m.vertex_count(), expected);
        // the nerve is closed under faces
        let all: BTreeSet<&Vec<usize>> = m.simplices.iter().collect();
        for s in &m.simplices {
            for skip in 0..s.len() {
                if s.len() > 1 {
                    let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    prop_assert!(all.contains(&f));
                }
            }
        }
    }

    #[test]
    fn reeb_graph_keeps_components(seed in any::<u64>()) {
        let x = random_instance(seed, &InstanceParams::small(1)).space;
        let g = reeb_graph_with(&x, false).unwrap();
        prop_assert_eq!(betti(&g).b0, x.complex().vertex_components().0);
        prop_assert!(g.edges().iter().all(|&(a, b)| g.values()[a] < g.values()[b]));
        let c = g.contract_regular();
        prop_assert_eq!(betti(&c), betti(&g));
        prop_assert!(c.critical_nodes().len() == c.node_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certified_bound_is_the_resolution(seed in any::<u64>()) {
        let inst = random_instance(seed, &InstanceParams::small(1));
        prop_assert_eq!(certified_upper_bound(&inst.space, &inst.cover).unwrap(), inst.cover.resolution());
    }

    #[test]
    fn identity_witness_verifies(seed in any::<u64>()) {
        let inst = random_instance(seed, &InstanceParams::small(2));
        let w = identity_witness(&inst.space, &inst.cover, &BuildOptions::default()).unwrap();
        prop_assert!(verify_interleaving(&w).passed);
    }
}

#[test]
fn geometric_mapper_betti_matches_nerve_on_fixtures() {
    for x in [tent(), circle4(), torus()] {
        let mut c = uniform_cover_of_image(&x, &[2], 0.5).unwrap();
        for _ in 0..5 {
            let cm = categorical_mapper(&x, &c).unwrap();
            assert_eq!(betti(&geometric_mapper(&cm).unwrap()), nerve_betti(&mapper_nerve(&cm)));
            c = refine(&c).unwrap();
        }
    }
}

#[test]
fn geometric_mapper_collapses_cycles_inside_an_overlap() {
    // two components over each interval, pairwise meeting in the overlap
    let inst = random_instance(124, &InstanceParams::small(1));
    assert_eq!(inst.cover.len(), 2);
    let cm = categorical_mapper(&inst.space, &inst.cover).unwrap();
    let geo = betti(&geometric_mapper(&cm).unwrap());
    let nerve = nerve_betti(&mapper_nerve(&cm));
    assert_eq!((geo.b0, geo.b1), (2, 0));
    assert_eq!((nerve.b0, nerve.b1), (2, 1));
}
