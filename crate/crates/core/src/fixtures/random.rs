//! Seeded random meshes, covers, regions and bivariate fields.
//!
//! Random instances are small 1- or 2-complexes (at most 200 simplices):
//!
//! * a random connected graph (spanning tree plus a few chords), or
//! * a triangulated grid patch of 2..=5 vertices per side with some
//!   triangles removed,
//!
//! optionally doubled into two disjoint pieces. Vertex values are drawn from
//! the lattice `{0, 0.5, ..., 4}` per axis. Region endpoints for oracle
//! comparisons are odd multiples of 0.25, so no vertex value ever sits on a
//! region boundary.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::square_grid;
use crate::cover::{uniform_cover_of_image, Cover, OpenBox};
use crate::preimage::ActiveRegion;
use crate::RdSpace;

#[derive(Clone, Debug)]
pub struct InstanceParams {
    pub dim_range: usize,
    /// Upper bound on the total simplex count.
    pub max_simplices: usize,
    /// Upper bound on cover intervals per axis.
    pub max_intervals: usize,
}

impl InstanceParams {
    pub fn small(dim_range: usize) -> Self {
        InstanceParams { dim_range, max_simplices: 200, max_intervals: if dim_range == 1 { 6 } else { 4 } }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub space: RdSpace,
    pub cover: Cover,
    /// False when two vertices share a value (d = 1).
    pub generic: bool,
}

fn lattice_value(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0..=8) as f64 * 0.5
}

fn random_graph(rng: &mut ChaCha8Rng, offset: u32) -> (usize, Vec<Vec<u32>>) {
    let n = rng.gen_range(2..=14usize);
    let mut edges: Vec<Vec<u32>> = (1..n).map(|v| vec![rng.gen_range(0..v) as u32, v as u32]).collect();
    let chords = rng.gen_range(0..=n / 2);
    for _ in 0..chords {
        let a = rng.gen_range(0..n) as u32;
        let b = rng.gen_range(0..n) as u32;
        if a != b && !edges.iter().any(|e| e.contains(&a) && e.contains(&b)) {
            edges.push(vec![a.min(b), a.max(b)]);
        }
    }
    (n, edges.into_iter().map(|e| e.into_iter().map(|v| v + offset).collect()).collect())
}

fn random_patch(rng: &mut ChaCha8Rng, offset: u32, max_side: usize) -> (usize, Vec<Vec<u32>>) {
    let a = rng.gen_range(2..=max_side);
    let b = rng.gen_range(2..=max_side);
    let id = |i: usize, j: usize| (j * a + i) as u32 + offset;
    let mut simplices = Vec::new();
    for j in 0..b - 1 {
        for i in 0..a - 1 {
            for tri in [[id(i, j), id(i + 1, j), id(i + 1, j + 1)], [id(i, j), id(i + 1, j + 1), id(i, j + 1)]] {
                if rng.gen_bool(0.85) {
                    simplices.push(tri.to_vec());
                } else {
                    // keep the boundary edges so the vertex set stays used
                    simplices.push(vec![tri[0], tri[1]]);
                }
            }
        }
    }
    (a * b, simplices)
}

/// A seeded random mesh with a uniform cover of its image.
pub fn random_instance(seed: u64, params: &InstanceParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pieces = if rng.gen_bool(0.3) { 2 } else { 1 };
        let surface = rng.gen_bool(0.5);
        let mut vertex_count = 0usize;
        let mut simplices = Vec::new();
        for _ in 0..pieces {
            let (n, s) = if surface {
                random_patch(&mut rng, vertex_count as u32, if pieces == 2 { 4 } else { 5 })
            } else {
                random_graph(&mut rng, vertex_count as u32)
            };
            vertex_count += n;
            simplices.extend(s);
        }
        let values: Vec<Vec<f64>> =
            (0..vertex_count).map(|_| (0..params.dim_range).map(|_| lattice_value(&mut rng)).collect()).collect();
        let space = RdSpace::from_parts(params.dim_range, values, simplices).unwrap();
        if space.complex().len() > params.max_simplices {
            continue;
        }
        let counts: Vec<usize> =
            (0..params.dim_range).map(|_| rng.gen_range(1..=params.max_intervals.max(1))).collect();
        let gain = rng.gen_range(0.2..0.7);
        let cover = uniform_cover_of_image(&space, &counts, gain).unwrap();
        let generic = space.genericity_warnings().is_empty();
        return Instance { space, cover, generic };
    }
}

/// A random box with odd-multiple-of-0.25 endpoints in `[-1, 5]`.
pub fn random_region(rng: &mut ChaCha8Rng, dim: usize) -> ActiveRegion {
    let axes = (0..dim)
        .map(|_| {
            let a = rng.gen_range(-2..=9) as f64 * 0.5 + 0.25;
            let width = rng.gen_range(1..=6) as f64 * 0.5;
            (a, a + width)
        })
        .collect();
    ActiveRegion::single(OpenBox::new(axes).unwrap())
}

/// Largest `d = 1` midpoint family returned in full.
pub const FULL_INTERVAL_LIMIT: usize = 2048;

/// Test boxes for comparing functors on a cover of `x`.
///
/// For `d = 1`: every interval whose endpoints are midpoints between
/// consecutive breakpoints (cover endpoints and vertex values), plus points
/// beyond both ends, unless there are more than [`FULL_INTERVAL_LIMIT`] of
/// them. Otherwise, and for `d >= 2`: `count` boxes built from random centers,
/// each at three scales (half, one and two times the resolution), so the
/// family contains nested chains.
pub fn random_test_boxes(x: &RdSpace, cover: &Cover, count: usize, seed: u64) -> Vec<OpenBox> {
    if cover.dim_range() == 1 {
        let mut breaks: Vec<f64> = cover.elements().iter().flat_map(|b| [b.lo(0), b.hi(0)]).collect();
        breaks.extend(x.map().values().iter().map(|v| v[0]));
        let mids = midpoints(breaks);
        if mids.len() * mids.len().saturating_sub(1) / 2 > FULL_INTERVAL_LIMIT {
            return scaled_boxes(cover, count, seed);
        }
        let mut out = Vec::new();
        for (i, &a) in mids.iter().enumerate() {
            for &b in &mids[i + 1..] {
                out.push(OpenBox::interval(a, b).unwrap());
            }
        }
        return out;
    }
    scaled_boxes(cover, count, seed)
}

/// `count` boxes around random centers in the hull of the cover, each at
/// half, one and two times the resolution.
pub(crate) fn scaled_boxes(cover: &Cover, count: usize, seed: u64) -> Vec<OpenBox> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let res = cover.resolution();
    let bounds: Vec<(f64, f64)> = (0..cover.dim_range())
        .map(|axis| {
            let lo = cover.elements().iter().map(|b| b.lo(axis)).fold(f64::INFINITY, f64::min);
            let hi = cover.elements().iter().map(|b| b.hi(axis)).fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let center: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
        let aspect: Vec<f64> = bounds.iter().map(|_| rng.gen_range(0.5..1.0)).collect();
        for scale in [0.5, 1.0, 2.0] {
            if out.len() == count {
                break;
            }
            let axes =
                center.iter().zip(&aspect).map(|(&c, &a)| (c - 0.5 * scale * res * a, c + 0.5 * scale * res * a));
            out.push(OpenBox::new(axes.collect()).unwrap());
        }
    }
    out
}

/// Sorted midpoints between consecutive distinct breakpoints, extended by one
/// point below and one above.
pub(crate) fn midpoints(mut breaks: Vec<f64>) -> Vec<f64> {
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    if breaks.is_empty() {
        return Vec::new();
    }
    let mut mids = vec![breaks[0] - 1.0];
    mids.extend(breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    mids.push(breaks[breaks.len() - 1] + 1.0);
    mids
}

/// A smooth random map `[0,1]^2 -> R^2`: each coordinate is a linear ramp
/// plus a low-frequency wave across the other axis.
#[derive(Clone, Debug)]
pub struct BivariateField {
    amp: [f64; 2],
    freq: [f64; 2],
    phase: [f64; 2],
    tilt: [f64; 2],
}

impl BivariateField {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut f = || -> f64 { *[1.0, 1.5, 2.0].choose(rng).unwrap() };
        let freq = [f(), f()];
        BivariateField {
            amp: [rng.gen_range(0.1..0.3), rng.gen_range(0.1..0.3)],
            freq,
            phase: [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)],
            tilt: [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)],
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        [
            x + self.tilt[0] * y + self.amp[0] * (TAU * (self.freq[0] * y + self.phase[0])).sin(),
            y + self.tilt[1] * x + self.amp[1] * (TAU * (self.freq[1] * x + self.phase[1])).sin(),
        ]
    }
}

/// An `n x n` grid mesh sampling a seeded random bivariate field.
pub fn random_bivariate_grid(seed: u64, n: usize) -> (RdSpace, BivariateField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = BivariateField::random(&mut rng);
    let f = field.clone();
    (square_grid(n, move |x, y| f.eval(x, y).to_vec()), field)
}
