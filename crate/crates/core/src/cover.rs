//! Open box covers of `R^d` and their nerves.
//!
//! All distances use the sup-norm, so the diameter of a box is its longest
//! side and the `eps`-thickening of a box is again a box.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{tolerance, Error, Result};

/// An axis-aligned open box `prod (lo_i, hi_i)`. Bounds may be infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OpenBox {
    axes: Vec<(f64, f64)>,
}

impl OpenBox {
    pub fn new(axes: Vec<(f64, f64)>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Validation("box needs at least one axis".into()));
        }
        for &(lo, hi) in &axes {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::Validation(format!("empty or invalid box axis ({lo}, {hi})")));
            }
        }
        Ok(OpenBox { axes })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        OpenBox::new(vec![(lo, hi)])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[(f64, f64)] {
        &self.axes
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.axes[axis].0
    }

    pub fn hi(&self, axis: usize) -> f64 {
        self.axes[axis].1
    }

    /// Sup-norm diameter: the longest side.
    pub fn diameter(&self) -> f64 {
        self.axes.iter().map(|&(lo, hi)| hi - lo).fold(0.0, f64::max)
    }

    /// Intersection with slack larger than the tolerance on every axis.
    pub fn intersection(&self, other: &OpenBox) -> Option<OpenBox> {
        let tol = tolerance();
        let axes: Vec<(f64, f64)> =
            self.axes.iter().zip(&other.axes).map(|(&(a, b), &(c, d))| (a.max(c), b.min(d))).collect();
        if axes.iter().all(|&(lo, hi)| hi - lo > tol) {
            Some(OpenBox { axes })
        } else {
            None
        }
    }

    pub fn intersects(&self, other: &OpenBox) -> bool {
        self.intersection(other).is_some()
    }

    /// Closed containment `self ⊆ other`, axis by axis.
    pub fn is_subset_of(&self, other: &OpenBox) -> bool {
        self.axes.iter().zip(&other.axes).all(|(&(a, b), &(c, d))| c <= a && b <= d)
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        let tol = tolerance();
        self.axes.iter().zip(p).all(|(&(lo, hi), &x)| x - lo > tol && hi - x > tol)
    }

    /// Bit pattern of the bounds, used to key caches.
    pub fn key(&self) -> Vec<u64> {
        self.axes.iter().flat_map(|&(lo, hi)| [lo.to_bits(), hi.to_bits()]).collect()
    }
}

/// The sup-norm `eps`-thickening `{x : ||x - b|| < eps}`; `thicken(b, 0) = b`.
pub fn thicken(b: &OpenBox, eps: f64) -> OpenBox {
    assert!(eps >= 0.0, "negative thickening {eps}");
    if eps == 0.0 {
        return b.clone();
    }
    OpenBox { axes: b.axes.iter().map(|&(lo, hi)| (lo - eps, hi + eps)).collect() }
}

/// Parameters of a cover produced by [`uniform_cover`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformParams {
    pub range: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
    pub gain: f64,
}

/// A finite indexed family of open boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    dim_range: usize,
    elements: Vec<OpenBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    uniform: Option<UniformParams>,
}

impl Cover {
    /// A hand-built cover. All boxes must have the same dimension.
    pub fn from_boxes(elements: Vec<OpenBox>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidCover("a cover needs at least one element".into()));
        };
        let d = first.dim();
        if elements.iter().any(|b| b.dim() != d) {
            return Err(Error::InvalidCover("cover elements differ in dimension".into()));
        }
        Ok(Cover { dim_range: d, elements, uniform: None })
    }

    pub fn dim_range(&self) -> usize {
        self.dim_range
    }

    pub fn elements(&self) -> &[OpenBox] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn uniform_params(&self) -> Option<&UniformParams> {
        self.uniform.as_ref()
    }

    /// Maximal sup-norm diameter of the elements.
    pub fn resolution(&self) -> f64 {
        self.elements.iter().map(OpenBox::diameter).fold(0.0, f64::max)
    }

    /// Whether every point in `points` lies in some element.
    pub fn covers_points<'a>(&self, points: impl IntoIterator<Item = &'a [f64]>) -> bool {
        points.into_iter().all(|p| self.elements.iter().any(|b| b.contains_point(p)))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("cover serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Cover = serde_json::from_str(s)?;
        for b in &c.elements {
            OpenBox::new(b.axes.clone())?;
        }
        if c.elements.is_empty() || c.elements.iter().any(|b| b.dim() != c.dim_range) {
            return Err(Error::InvalidCover("malformed cover".into()));
        }
        Ok(c)
    }
}

/// Evenly spaced overlapping boxes over `range`: per axis, `n` centers from
/// `lo` to `hi` inclusive with step `s = (hi - lo) / (n - 1)` and radius
/// `(1 + gain) * s / 2`. With `n = 1` a single interval of radius
/// `(1 + gain) * (hi - lo) / 2` around the midpoint.
pub fn uniform_cover(range: &[(f64, f64)], counts: &[usize], gain: f64) -> Result<Cover> {
    if !(gain > 0.0 && gain < 1.0) {
        return Err(Error::InvalidCover(format!("gain must lie in (0, 1), got {gain}")));
    }
    if range.is_empty() || counts.len() != range.len() {
        return Err(Error::InvalidCover(format!(
            "{} interval counts given for a {}-dimensional range",
            counts.len(),
            range.len()
        )));
    }
    if counts.iter().any(|&n| n == 0) {
        return Err(Error::InvalidCover("interval counts must be positive".into()));
    }
    for &(lo, hi) in range {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidCover(format!("invalid range ({lo}, {hi})")));
        }
    }
    let per_axis: Vec<Vec<(f64, f64)>> = range
        .iter()
        .zip(counts)
        .map(|(&(lo, hi), &n)| {
            if n == 1 {
                let c = 0.5 * (lo + hi);
                let r = (1.0 + gain) * (hi - lo) / 2.0;
                vec![(c - r, c + r)]
            } else {
                let s = (hi - lo) / (n - 1) as f64;
                let r = (1.0 + gain) * s / 2.0;
                (0..n).map(|k| lo + k as f64 * s).map(|c| (c - r, c + r)).collect()
            }
        })
        .collect();
    let mut elements = vec![Vec::new()];
    for axis in &per_axis {
        elements = elements
            .into_iter()
            .flat_map(|prefix: Vec<(f64, f64)>| {
                axis.iter().map(move |&iv| {
                    let mut p = prefix.clone();
                    p.push(iv);
                    p
                })
            })
            .collect();
    }
    Ok(Cover {
        dim_range: range.len(),
        elements: elements.into_iter().map(|axes| OpenBox { axes }).collect(),
        uniform: Some(UniformParams { range: range.to_vec(), counts: counts.to_vec(), gain }),
    })
}

/// Uniform cover over the bounding box of the vertex values. A degenerate
/// axis (constant coordinate) is widened by 0.5 on each side.
pub fn uniform_cover_of_image(x: &crate::RdSpace, counts: &[usize], gain: f64) -> Result<Cover> {
    let bounds = x.image_bounds().ok_or_else(|| Error::Validation("mesh has no vertices".into()))?;
    let range: Vec<(f64, f64)> =
        bounds.into_iter().map(|(lo, hi)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) }).collect();
    uniform_cover(&range, counts, gain)
}

/// Doubles the density of a uniform cover: counts `n -> 2n - 1` (and `1 -> 3`),
/// same range and gain.
pub fn refine(c: &Cover) -> Result<Cover> {
    let p = c.uniform.as_ref().ok_or_else(|| Error::InvalidCover("only uniform covers can be refined".into()))?;
    let counts: Vec<usize> = p.counts.iter().map(|&n| if n == 1 { 3 } else { 2 * n - 1 }).collect();
    uniform_cover(&p.range, &counts, p.gain)
}

/// The nerve of a cover, with the intersection box of every simplex.
///
/// Simplices are sorted by size and then lexicographically; singletons come
/// first, so `{a}` has id `a` whenever every element is nonempty.
#[derive(Clone, Debug)]
pub struct CoverNerve {
    simplices: Vec<Vec<usize>>,
    boxes: Vec<OpenBox>,
    index: HashMap<Vec<usize>, usize>,
    facets: Vec<Vec<usize>>,
}

impl CoverNerve {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &[usize] {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// `U_sigma`, the intersection of the cover elements in simplex `id`.
    pub fn intersection_box(&self, id: usize) -> &OpenBox {
        &self.boxes[id]
    }

    pub fn id_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    /// Ids of the codimension-1 faces of simplex `id` (empty for vertices).
    pub fn facets(&self, id: usize) -> &[usize] {
        &self.facets[id]
    }

    pub fn vertex_id(&self, element: usize) -> Option<usize> {
        self.id_of(&[element])
    }

    /// `K_a`: simplices whose intersection box meets `a`.
    pub fn k_sub(&self, a: &OpenBox) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.boxes[i].intersects(a)).collect()
    }
}

/// All index sets of the cover with nonempty common intersection.
pub fn nerve_of_cover(c: &Cover) -> CoverNerve {
    let n = c.len();
    let mut found: Vec<(Vec<usize>, OpenBox)> = Vec::new();
    // depth-first over increasing index sets
    let mut stack: Vec<(Vec<usize>, OpenBox)> = (0..n).map(|a| (vec![a], c.elements[a].clone())).collect();
    while let Some((sigma, bx)) = stack.pop() {
        let last = *sigma.last().unwrap();
        for b in last + 1..n {
            if let Some(inter) = bx.intersection(&c.elements[b]) {
                let mut tau = sigma.clone();
                tau.push(b);
                stack.push((tau, inter));
            }
        }
        found.push((sigma, bx));
    }
    found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let (simplices, boxes): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let index: HashMap<Vec<usize>, usize> = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let facets = simplices
        .iter()
        .map(|s: &Vec<usize>| {
            if s.len() < 2 {
                return Vec::new();
            }
            (0..s.len())
                .map(|skip| {
                    let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    index[&f]
                })
                .collect()
        })
        .collect();
    CoverNerve { simplices, boxes, index, facets }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> OpenBox {
        OpenBox::interval(lo, hi).unwrap()
    }

    fn approx_axes(b: &OpenBox, expected: &[(f64, f64)]) {
        for (&(lo, hi), &(elo, ehi)) in b.axes().iter().zip(expected) {
            assert!((lo - elo).abs() < 1e-12 && (hi - ehi).abs() < 1e-12, "{b:?} vs {expected:?}");
        }
    }

    #[test]
    fn uniform_intervals() {
        let c = uniform_cover(&[(0.0, 1.0)], &[3], 0.5).unwrap();
        approx_axes(&c.elements()[0], &[(-0.375, 0.375)]);
        approx_axes(&c.elements()[1], &[(0.125, 0.875)]);
        approx_axes(&c.elements()[2], &[(0.625, 1.375)]);
        assert!((c.resolution() - 0.75).abs() < 1e-12);

        let c2 = uniform_cover(&[(0.0, 1.0)], &[2], 0.5).unwrap();
        approx_axes(&c2.elements()[0], &[(-0.75, 0.75)]);
        approx_axes(&c2.elements()[1], &[(0.25, 1.75)]);
        assert!((c2.resolution() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_rejects_bad_parameters() {
        assert!(matches!(uniform_cover(&[(0.0, 1.0)], &[3], 1.5), Err(Error::InvalidCover(_))));
        assert!(uniform_cover(&[(0.0, 1.0)], &[3], 0.0).is_err());
        assert!(uniform_cover(&[(0.0, 1.0)], &[0], 0.5).is_err());
        assert!(uniform_cover(&[(0.0, 1.0)], &[2, 2], 0.5).is_err());
    }

    #[test]
    fn single_box_resolution() {
        let c = Cover::from_boxes(vec![OpenBox::new(vec![(0.0, 1.0), (0.0, 2.0)]).unwrap()]).unwrap();
        assert_eq!(c.resolution(), 2.0);
    }

    #[test]
    fn nerve_of_three_intervals_is_a_path() {
        let c = uniform_cover(&[(0.0, 1.0)], &[3], 0.5).unwrap();
        let k = nerve_of_cover(&c);
        assert_eq!(k.simplices(), &[vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2]]);
        approx_axes(k.intersection_box(3), &[(0.125, 0.375)]);
        assert_eq!(k.facets(3), &[1, 0]);
    }

    #[test]
    fn disjoint_boxes_give_isolated_vertices() {
        let c = Cover::from_boxes(vec![iv(0.0, 1.0), iv(2.0, 3.0)]).unwrap();
        let k = nerve_of_cover(&c);
        assert_eq!(k.simplices(), &[vec![0], vec![1]]);
    }

    #[test]
    fn square_cover_has_fourfold_intersection() {
        let c = uniform_cover(&[(0.0, 1.0), (0.0, 1.0)], &[2, 2], 0.5).unwrap();
        let k = nerve_of_cover(&c);
        let top = k.id_of(&[0, 1, 2, 3]).expect("4-fold intersection");
        approx_axes(k.intersection_box(top), &[(0.25, 0.75), (0.25, 0.75)]);
        // complete simplex on 4 vertices
        assert_eq!(k.len(), 15);
    }

    #[test]
    fn k_sub_examples() {
        let c = uniform_cover(&[(0.0, 1.0)], &[3], 0.5).unwrap();
        let k = nerve_of_cover(&c);
        let ids = k.k_sub(&iv(0.2, 0.3));
        let sub: Vec<&[usize]> = ids.iter().map(|&i| k.simplex(i)).collect();
        assert_eq!(sub, vec![&[0][..], &[1], &[0, 1]]);
        assert!(k.k_sub(&iv(5.0, 6.0)).is_empty());
        assert_eq!(k.k_sub(&iv(-10.0, 10.0)).len(), k.len());
    }

    #[test]
    fn thickening() {
        assert_eq!(thicken(&iv(0.0, 1.0), 0.5), iv(-0.5, 1.5));
        let b = OpenBox::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(thicken(&b, 0.0), b);
        assert_eq!(thicken(&b, 1.0), OpenBox::new(vec![(-1.0, 2.0), (1.0, 4.0)]).unwrap());
        let inf = thicken(&b, f64::INFINITY);
        assert!(inf.lo(0).is_infinite() && inf.hi(1).is_infinite());
    }

    #[test]
    fn refine_examples() {
        let c = uniform_cover(&[(0.0, 1.0)], &[3], 0.5).unwrap();
        let r = refine(&c).unwrap();
        assert_eq!(r.uniform_params().unwrap().counts, vec![5]);
        assert!((r.resolution() - 0.375).abs() < 1e-12);
        let c2 = uniform_cover(&[(0.0, 1.0)], &[2], 0.5).unwrap();
        assert_eq!(refine(&c2).unwrap().len(), 3);
        let hand = Cover::from_boxes(vec![iv(0.0, 1.0)]).unwrap();
        assert!(matches!(refine(&hand), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn cover_json_roundtrip() {
        let c = uniform_cover(&[(0.0, 1.0), (-1.0, 1.0)], &[2, 3], 0.3).unwrap();
        let back = Cover::from_json_str(&c.to_json_string()).unwrap();
        assert_eq!(c, back);
        let v: serde_json::Value = serde_json::from_str(&c.to_json_string()).unwrap();
        assert_eq!(v["elements"][0][1].as_array().unwrap().len(), 2);
    }
}
