//! Brute-force connectivity oracles. They share no code with the preimage
//! engine: points are sampled, tested against the region one by one, and
//! flood-filled.

use std::collections::HashMap;

use crate::unionfind::UnionFind;
use crate::{tolerance, ActiveRegion, OpenBox, RdSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub depth: usize,
    pub count: usize,
    /// Per mesh vertex: the oracle component holding it, when it is in the
    /// region. Components are numbered by their smallest vertex, then the
    /// vertex-free ones last.
    pub vertex_partition: Vec<Option<usize>>,
    pub samples_inside: usize,
}

/// Bit `i` is set when the point lies strictly inside box `i`.
fn boxes_containing(p: &[f64], r: &ActiveRegion, tol: f64) -> u64 {
    r.boxes()
        .iter()
        .enumerate()
        .filter(|(_, b)| p.iter().zip(b.axes()).all(|(&x, &(lo, hi))| x - lo > tol && hi - x > tol))
        .fold(0, |mask, (i, _)| mask | 1 << i)
}

fn compositions(parts: usize, total: usize) -> Vec<Vec<u16>> {
    if parts == 1 {
        return vec![vec![total as u16]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

/// Samples every maximal simplex on the barycentric grid of the given depth
/// and keeps samples whose value lies strictly inside the region. Within one
/// simplex, samples inside a common box are joined, since the preimage of a
/// box under an affine map is convex. Samples on shared faces are the same
/// point.
pub fn sampling_oracle(x: &RdSpace, r: &ActiveRegion, depth: usize) -> OracleResult {
    assert!(depth >= 4, "oracle depth must be at least 4");
    assert!(r.boxes().len() <= 64, "oracle supports at most 64 boxes");
    let tol = tolerance();
    let m = x.map();
    let d = x.dim_range();
    let mut global: HashMap<Vec<(u32, u16)>, usize> = HashMap::new();
    let mut inside: Vec<u64> = Vec::new();
    let mut vertex_sample: Vec<Option<usize>> = vec![None; x.complex().vertex_count()];
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut grids: HashMap<usize, Vec<Vec<u16>>> = HashMap::new();

    for s in x.complex().maximal_simplices() {
        let verts = s.vertices();
        let k = verts.len();
        let grid = grids.entry(k).or_insert_with(|| compositions(k, depth));
        let mut local: HashMap<&[u16], usize> = HashMap::with_capacity(grid.len());
        for w in grid.iter() {
            let nonzero = w.iter().filter(|&&c| c > 0).count();
            let id = if nonzero == k && k > 1 {
                inside.push(0);
                inside.len() - 1
            } else {
                let key: Vec<(u32, u16)> =
                    verts.iter().zip(w).filter(|&(_, &c)| c > 0).map(|(&v, &c)| (v, c)).collect();
                match global.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = inside.len();
                        inside.push(0);
                        global.insert(key, id);
                        id
                    }
                }
            };
            let value: Vec<f64> = (0..d)
                .map(|axis| verts.iter().zip(w).map(|(&v, &c)| c as f64 * m.value(v)[axis]).sum::<f64>() / depth as f64)
                .collect();
            inside[id] = boxes_containing(&value, r, tol);
            if nonzero == 1 {
                let corner = verts[w.iter().position(|&c| c > 0).unwrap()];
                vertex_sample[corner as usize] = Some(id);
            }
            local.insert(w.as_slice(), id);
        }
        let mut first_in_box: [Option<usize>; 64] = [None; 64];
        for w in grid.iter() {
            let a = local[w.as_slice()];
            let mut mask = inside[a];
            while mask != 0 {
                let bit = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                match first_in_box[bit] {
                    Some(b) => links.push((a, b)),
                    None => first_in_box[bit] = Some(a),
                }
            }
        }
    }

    let mut uf = UnionFind::new(inside.len());
    for (a, b) in links {
        uf.union(a, b);
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut next = 0;
    let mut vertex_partition = vec![None; vertex_sample.len()];
    for (v, sample) in vertex_sample.iter().enumerate() {
        if let Some(s) = *sample {
            if inside[s] != 0 {
                let root = uf.find(s);
                let l = *label.entry(root).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                vertex_partition[v] = Some(l);
            }
        }
    }
    let mut samples_inside = 0;
    for s in 0..inside.len() {
        if inside[s] != 0 {
            samples_inside += 1;
            let root = uf.find(s);
            label.entry(root).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
    }
    OracleResult { depth, count: next, vertex_partition, samples_inside }
}

/// Runs the oracle at `depth` and `depth + 2`; returns the deeper result and
/// whether the two agree on the component count.
pub fn stable_sampling_oracle(x: &RdSpace, r: &ActiveRegion, depth: usize) -> (OracleResult, bool) {
    let a = sampling_oracle(x, r, depth);
    let b = sampling_oracle(x, r, depth + 2);
    let stable = a.count == b.count;
    (b, stable)
}

/// Component counts of `{pixel : f(pixel) in box}` for each box, on a
/// `resolution x resolution` lattice spanning the closed unit square.
///
/// `grid_values` are the vertex values of an `n x n` grid laid out as in
/// [`super::square_grid`]; pixels are evaluated by linear interpolation on
/// the same diagonal split. Pixels are joined when they are 4-neighbours or
/// lie in the same mesh triangle, whose preimage of a box is convex.
pub fn raster_box_components(grid_values: &[Vec<f64>], n: usize, resolution: usize, boxes: &[OpenBox]) -> Vec<usize> {
    assert_eq!(grid_values.len(), n * n);
    assert!(resolution >= 2, "raster needs at least 2 pixels per side");
    let tol = tolerance();
    let cells = (n - 1) as f64;
    let locate = |px: usize, py: usize| -> (Vec<f64>, usize) {
        let x = px as f64 / (resolution - 1) as f64 * cells;
        let y = py as f64 / (resolution - 1) as f64 * cells;
        let i = (x.floor() as usize).min(n - 2);
        let j = (y.floor() as usize).min(n - 2);
        let (u, v) = (x - i as f64, y - j as f64);
        let f = |a: usize, b: usize| &grid_values[b * n + a];
        let (f00, f10, f11, f01) = (f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1));
        let lower = u >= v;
        let value = (0..f00.len())
            .map(|k| {
                if lower {
                    f00[k] + u * (f10[k] - f00[k]) + v * (f11[k] - f10[k])
                } else {
                    f00[k] + v * (f01[k] - f00[k]) + u * (f11[k] - f01[k])
                }
            })
            .collect();
        (value, 2 * (j * (n - 1) + i) + (!lower) as usize)
    };
    let pixels: Vec<(Vec<f64>, usize)> =
        (0..resolution * resolution).map(|p| locate(p % resolution, p / resolution)).collect();
    boxes
        .iter()
        .map(|b| {
            let inside: Vec<bool> = pixels
                .iter()
                .map(|(p, _)| p.iter().zip(b.axes()).all(|(&x, &(lo, hi))| x - lo > tol && hi - x > tol))
                .collect();
            let mut uf = UnionFind::new(inside.len());
            let mut first_in_triangle: HashMap<usize, usize> = HashMap::new();
            for p in 0..inside.len() {
                if !inside[p] {
                    continue;
                }
                let first = *first_in_triangle.entry(pixels[p].1).or_insert(p);
                uf.union(p, first);
                let (px, py) = (p % resolution, p / resolution);
                if px + 1 < resolution && inside[p + 1] {
                    uf.union(p, p + 1);
                }
                if py + 1 < resolution && inside[p + resolution] {
                    uf.union(p, p + resolution);
                }
            }
            (0..inside.len()).filter(|&p| inside[p] && uf.find(p) == p).count()
        })
        .collect()
}
