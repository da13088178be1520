//! Connected components of `f^{-1}(B)` for open boxes and unions of boxes.
//!
//! Within one simplex the preimage of a convex region is convex, so pieces in
//! adjacent simplices touch iff the shared facet is active. A union of boxes
//! is handled piecewise: a node per active (simplex, box) pair, glued across
//! facets for the same box and inside a simplex when the two boxes overlap on
//! its image.

pub mod hull;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::unionfind::UnionFind;
use crate::{tolerance, Error, OpenBox, PlMap, RdSpace, Result, Simplex};

/// Map between component label sets.
pub type LabelMap = BTreeMap<u32, u32>;

/// One open box or a finite union of boxes. The empty union is allowed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActiveRegion {
    boxes: Vec<OpenBox>,
}

impl ActiveRegion {
    pub fn single(b: OpenBox) -> Self {
        ActiveRegion { boxes: vec![b] }
    }

    pub fn union(boxes: Vec<OpenBox>) -> Self {
        ActiveRegion { boxes }
    }

    pub fn boxes(&self) -> &[OpenBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Each box lies inside some box of `other`.
    pub fn is_boxwise_subset_of(&self, other: &ActiveRegion) -> bool {
        self.boxes.iter().all(|b| other.boxes.iter().any(|c| b.is_subset_of(c)))
    }
}

impl From<OpenBox> for ActiveRegion {
    fn from(b: OpenBox) -> Self {
        ActiveRegion::single(b)
    }
}

/// Whether `f(s)` meets the region with slack above the tolerance.
pub fn simplex_region_intersects(s: &Simplex, m: &PlMap, r: &ActiveRegion) -> bool {
    let points: Vec<&[f64]> = s.vertices().iter().map(|&v| m.value(v)).collect();
    let tol = tolerance();
    r.boxes.iter().any(|b| hull::hull_meets_box(&points, b, tol))
}

fn simplex_meets_box(x: &RdSpace, id: usize, b: &OpenBox, tol: f64) -> bool {
    let s = x.complex().simplex(id);
    let m = x.map();
    if s.dim() == 0 {
        return hull::point_slack(m.value(s.vertices()[0]), b) > tol;
    }
    let points: Vec<&[f64]> = s.vertices().iter().map(|&v| m.value(v)).collect();
    hull::hull_meets_box(&points, b, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Piece {
    simplex: u32,
    bx: u32,
    comp: u32,
}

/// A connected component of a preimage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    /// Smallest simplex id in the component.
    pub label: u32,
    /// Sorted ids of the simplices meeting the component.
    pub simplices: Vec<u32>,
}

/// `pi_0 f^{-1}(region)` with the simplex pieces each class is made of.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSet {
    region: ActiveRegion,
    components: Vec<Component>,
    pieces: Vec<Piece>,
}

#[derive(Serialize)]
struct ComponentSetJson<'a> {
    region: &'a ActiveRegion,
    components: BTreeMap<u32, &'a [u32]>,
}

impl ComponentSet {
    pub fn region(&self) -> &ActiveRegion {
        &self.region
    }

    /// Components sorted by label.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn labels(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.label).collect()
    }

    /// Label of the component containing the piece of `simplex` over box
    /// `bx` of the region, if that piece is active.
    pub fn label_of_piece(&self, simplex: u32, bx: u32) -> Option<u32> {
        self.pieces
            .binary_search_by(|p| (p.simplex, p.bx).cmp(&(simplex, bx)))
            .ok()
            .map(|i| self.components[self.pieces[i].comp as usize].label)
    }

    fn pieces_of(&self, simplex: u32) -> &[Piece] {
        let start = self.pieces.partition_point(|p| p.simplex < simplex);
        let end = self.pieces.partition_point(|p| p.simplex <= simplex);
        &self.pieces[start..end]
    }

    /// Label of the unique component containing `simplex`; `None` when the
    /// simplex is inactive or split between components.
    pub fn label_of_simplex(&self, simplex: u32) -> Option<u32> {
        let pieces = self.pieces_of(simplex);
        let first = pieces.first()?.comp;
        pieces.iter().all(|p| p.comp == first).then(|| self.components[first as usize].label)
    }

    pub fn to_json_string(&self) -> String {
        let out = ComponentSetJson {
            region: &self.region,
            components: self.components.iter().map(|c| (c.label, c.simplices.as_slice())).collect(),
        };
        serde_json::to_string(&out).expect("component set serialization cannot fail")
    }
}

/// Connected components of `f^{-1}(r)`, labelled by their smallest simplex id.
pub fn components(x: &RdSpace, r: &ActiveRegion) -> ComponentSet {
    let tol = tolerance();
    let cx = x.complex();
    let nboxes = r.boxes.len();
    // node id per (simplex, box); usize::MAX when inactive
    let mut node = vec![usize::MAX; cx.len() * nboxes];
    let mut nodes: Vec<(u32, u32)> = Vec::new();
    for id in 0..cx.len() {
        for (bi, b) in r.boxes.iter().enumerate() {
            if simplex_meets_box(x, id, b, tol) {
                node[id * nboxes + bi] = nodes.len();
                nodes.push((id as u32, bi as u32));
            }
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    for (n, &(s, bi)) in nodes.iter().enumerate() {
        for &f in cx.facets(s as usize) {
            let other = node[f * nboxes + bi as usize];
            if other != usize::MAX {
                uf.union(n, other);
            }
        }
    }
    if nboxes > 1 {
        for id in 0..cx.len() {
            let active: Vec<usize> = (0..nboxes).filter(|&b| node[id * nboxes + b] != usize::MAX).collect();
            for (i, &a) in active.iter().enumerate() {
                for &b in &active[i + 1..] {
                    if uf.find(node[id * nboxes + a]) == uf.find(node[id * nboxes + b]) {
                        continue;
                    }
                    if let Some(inter) = r.boxes[a].intersection(&r.boxes[b]) {
                        if simplex_meets_box(x, id, &inter, tol) {
                            uf.union(node[id * nboxes + a], node[id * nboxes + b]);
                        }
                    }
                }
            }
        }
    }
    let (count, class) = uf.classes();
    // nodes are in increasing simplex order, so first appearance = smallest id
    let mut comps: Vec<Component> = vec![Component { label: u32::MAX, simplices: Vec::new() }; count];
    for (n, &(s, _)) in nodes.iter().enumerate() {
        let c = &mut comps[class[n]];
        if c.label == u32::MAX {
            c.label = s;
        }
        if c.simplices.last() != Some(&s) {
            c.simplices.push(s);
        }
    }
    let pieces: Vec<Piece> =
        nodes.iter().enumerate().map(|(n, &(simplex, bx))| Piece { simplex, bx, comp: class[n] as u32 }).collect();
    ComponentSet { region: r.clone(), components: comps, pieces }
}

/// Map induced by the inclusion `small.region ⊆ large.region`, which must
/// hold box by box.
pub fn component_map(_x: &RdSpace, small: &ComponentSet, large: &ComponentSet) -> Result<LabelMap> {
    let mut target = Vec::with_capacity(small.region.boxes.len());
    for (i, b) in small.region.boxes.iter().enumerate() {
        let j = large.region.boxes.iter().position(|c| b.is_subset_of(c)).ok_or_else(|| {
            Error::Containment(format!("box {i} of the smaller region {:?} is not inside the larger region", b.axes()))
        })?;
        target.push(j as u32);
    }
    induced_map(small, |p| large.label_of_piece(p.simplex, target[p.bx as usize]).into_iter().collect::<Vec<_>>())
}

/// Map induced by an inclusion of preimages `f^{-1}(small) ⊆ f^{-1}(large)`
/// that need not come from a box-wise containment of regions. Every active
/// piece of `small` must overlap an active piece of `large` in the same
/// simplex; overlapping pieces determine the image.
pub fn component_map_covering(x: &RdSpace, small: &ComponentSet, large: &ComponentSet) -> Result<LabelMap> {
    let tol = tolerance();
    induced_map(small, |p| {
        let b = &small.region.boxes[p.bx as usize];
        large
            .pieces_of(p.simplex)
            .iter()
            .filter(|q| {
                b.intersection(&large.region.boxes[q.bx as usize])
                    .is_some_and(|inter| simplex_meets_box(x, p.simplex as usize, &inter, tol))
            })
            .map(|q| large.components[q.comp as usize].label)
            .collect()
    })
}

fn induced_map(small: &ComponentSet, mut images: impl FnMut(&Piece) -> Vec<u32>) -> Result<LabelMap> {
    let mut out = LabelMap::new();
    for p in &small.pieces {
        let from = small.components[p.comp as usize].label;
        let candidates = images(p);
        let Some(&to) = candidates.first() else {
            return Err(Error::Containment(format!(
                "piece of simplex {} over box {} has no image in the larger region",
                p.simplex, p.bx
            )));
        };
        if candidates.iter().any(|&c| c != to) {
            return Err(Error::WellDefinedness(format!(
                "piece of simplex {} meets components {candidates:?}",
                p.simplex
            )));
        }
        match out.insert(from, to) {
            Some(prev) if prev != to => {
                return Err(Error::WellDefinedness(format!("component {from} maps to both {prev} and {to}")))
            }
            _ => {}
        }
    }
    Ok(out)
}

/// `g ∘ f` for label maps; `f`'s values must lie in `g`'s domain.
pub fn compose(g: &LabelMap, f: &LabelMap) -> LabelMap {
    f.iter().map(|(&a, b)| (a, g[b])).collect()
}

/// The identity on a label set.
pub fn identity(labels: impl IntoIterator<Item = u32>) -> LabelMap {
    labels.into_iter().map(|l| (l, l)).collect()
}
