//! Reeb graphs of real-valued PL maps, the constructible cosheaf
//! `pi_0 f^{-1}` on its generating intervals, the geometric mapper graph, and
//! graph comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::cover::OpenBox;
use crate::mapper::{CategoricalMapper, MapperNerve};
use crate::preimage::{component_map, components, ComponentSet, LabelMap};
use crate::unionfind::UnionFind;
use crate::{tolerance, Error, RdSpace, Result};

/// A finite graph with a real value per node, strictly monotone on edges.
/// Parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReebGraph {
    values: Vec<f64>,
    edges: Vec<(usize, usize)>,
}

impl ReebGraph {
    /// Validates node ids and the monotone-edge condition.
    pub fn new(values: Vec<f64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let tol = tolerance();
        for &(a, b) in &edges {
            if a >= values.len() || b >= values.len() {
                return Err(Error::Validation(format!("edge ({a}, {b}) names a missing node")));
            }
            if (values[a] - values[b]).abs() <= tol {
                return Err(Error::Validation(format!("edge ({a}, {b}) is not monotone")));
            }
        }
        Ok(ReebGraph { values, edges })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == node) as usize + (b == node) as usize).sum()
    }

    /// Nodes that are not regular: degree other than 2, or both neighbours
    /// on the same side.
    pub fn critical_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| !self.is_regular(v)).collect()
    }

    fn is_regular(&self, v: usize) -> bool {
        let nbrs: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        nbrs.len() == 2 && (self.values[nbrs[0]] - self.values[v]) * (self.values[nbrs[1]] - self.values[v]) < 0.0
    }

    /// Removes regular nodes, joining their two neighbours.
    pub fn contract_regular(&self) -> ReebGraph {
        let mut edges = self.edges.clone();
        let mut alive = vec![true; self.values.len()];
        loop {
            let g = ReebGraph { values: self.values.clone(), edges: edges.clone() };
            let Some(v) = (0..self.values.len()).find(|&v| alive[v] && g.is_regular(v)) else { break };
            let (touching, rest): (Vec<_>, Vec<_>) = edges.iter().partition(|&&(a, b)| a == v || b == v);
            let ends: Vec<usize> = touching.iter().map(|&(a, b)| if a == v { b } else { a }).collect();
            edges = rest;
            edges.push((ends[0].min(ends[1]), ends[0].max(ends[1])));
            alive[v] = false;
        }
        let new_id: Vec<Option<usize>> = {
            let mut next = 0;
            alive
                .iter()
                .map(|&a| {
                    a.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let values = self.values.iter().zip(&alive).filter(|(_, &a)| a).map(|(&v, _)| v).collect();
        let mut edges: Vec<(usize, usize)> =
            edges.iter().map(|&(a, b)| (new_id[a].unwrap(), new_id[b].unwrap())).collect();
        edges.sort_unstable();
        ReebGraph { values, edges }
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct Node {
            id: usize,
            value: f64,
        }
        #[derive(Serialize)]
        struct Out {
            nodes: Vec<Node>,
            edges: Vec<[usize; 2]>,
        }
        let out = Out {
            nodes: self.values.iter().enumerate().map(|(id, &value)| Node { id, value }).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string_pretty(&out).expect("graph serialization cannot fail")
    }

    /// DOT with value labels; nodes of equal value share a rank.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph reeb {\n  rankdir=BT;\n");
        for (id, v) in self.values.iter().enumerate() {
            writeln!(s, "  n{id} [label=\"{}\"];", crate::cli::format_float(*v)).unwrap();
        }
        let mut by_value: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (id, v) in self.values.iter().enumerate() {
            by_value.entry(crate::cli::format_float(*v)).or_default().push(id);
        }
        for ids in by_value.values().filter(|ids| ids.len() > 1) {
            let names: Vec<String> = ids.iter().map(|i| format!("n{i}")).collect();
            writeln!(s, "  {{ rank=same; {}; }}", names.join("; ")).unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(s, "  n{a} -- n{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn require_real_valued(x: &RdSpace) -> Result<()> {
    if x.dim_range() != 1 {
        return Err(Error::Dimension { expected: 1, got: x.dim_range() });
    }
    Ok(())
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    let tol = tolerance();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for t in v {
        if out.last().is_none_or(|&last| t - last > tol) {
            out.push(t);
        }
    }
    out
}

/// Sorted vertex values, merged within the tolerance.
pub fn critical_values(x: &RdSpace) -> Result<Vec<f64>> {
    require_real_valued(x)?;
    Ok(dedup_sorted(x.map().values().iter().map(|v| v[0]).collect()))
}

/// Components of the level set `f^{-1}(t)`: simplices whose image contains
/// `t`, glued across shared facets. Returns the class of each simplex
/// (`usize::MAX` when inactive) and the class count.
fn level_components(x: &RdSpace, t: f64) -> (Vec<usize>, usize) {
    let tol = tolerance();
    let cx = x.complex();
    let active: Vec<bool> = (0..cx.len())
        .map(|id| {
            let vs = cx.simplex(id).vertices();
            let lo = vs.iter().map(|&v| x.map().value(v)[0]).fold(f64::INFINITY, f64::min);
            let hi = vs.iter().map(|&v| x.map().value(v)[0]).fold(f64::NEG_INFINITY, f64::max);
            lo - tol <= t && t <= hi + tol
        })
        .collect();
    let mut uf = UnionFind::new(cx.len());
    for id in 0..cx.len() {
        if active[id] {
            for &f in cx.facets(id) {
                if active[f] {
                    uf.union(id, f);
                }
            }
        }
    }
    let mut dense = BTreeMap::new();
    let class = (0..cx.len())
        .map(|id| {
            if !active[id] {
                return usize::MAX;
            }
            let root = uf.find(id);
            let n = dense.len();
            *dense.entry(root).or_insert(n)
        })
        .collect();
    (class, dense.len())
}

/// The Reeb graph with regular nodes contracted.
pub fn reeb_graph(x: &RdSpace) -> Result<ReebGraph> {
    reeb_graph_with(x, true)
}

/// Sweeps the critical values: a node per component of each critical level
/// set, an edge per component of each open slab between consecutive critical
/// values, attached to the levels it closes up onto.
pub fn reeb_graph_with(x: &RdSpace, contract: bool) -> Result<ReebGraph> {
    let crit = critical_values(x)?;
    let mut values = Vec::new();
    let mut levels = Vec::with_capacity(crit.len());
    for &t in &crit {
        let (class, count) = level_components(x, t);
        levels.push((values.len(), class));
        values.extend(std::iter::repeat_n(t, count));
    }
    let mut edges = Vec::new();
    for i in 0..crit.len().saturating_sub(1) {
        let slab = components(x, &OpenBox::interval(crit[i], crit[i + 1])?.into());
        for comp in slab.components() {
            let node_at = |level: usize| -> Result<usize> {
                let (offset, class) = &levels[level];
                let classes: BTreeSet<usize> =
                    comp.simplices.iter().map(|&s| class[s as usize]).filter(|&c| c != usize::MAX).collect();
                match classes.len() {
                    1 => Ok(offset + classes.into_iter().next().unwrap()),
                    n => Err(Error::WellDefinedness(format!(
                        "slab component {} closes onto {n} components at level {}",
                        comp.label, crit[level]
                    ))),
                }
            };
            edges.push((node_at(i)?, node_at(i + 1)?));
        }
    }
    let g = ReebGraph::new(values, edges)?;
    Ok(if contract { g.contract_regular() } else { g })
}

/// `pi_0 f^{-1}` on a finite family of open intervals that generates it,
/// with the maps induced by every nesting in the family.
#[derive(Clone, Debug)]
pub struct CosheafRep {
    critical_set: Vec<f64>,
    generators: Vec<OpenBox>,
    values: Vec<ComponentSet>,
    /// `(small, large, map)` for every nested pair of distinct generators.
    maps: Vec<(usize, usize, LabelMap)>,
    stars: Vec<usize>,
    slabs: Vec<usize>,
}

impl CosheafRep {
    pub fn critical_set(&self) -> &[f64] {
        &self.critical_set
    }

    pub fn generators(&self) -> &[OpenBox] {
        &self.generators
    }

    pub fn value(&self, generator: usize) -> &ComponentSet {
        &self.values[generator]
    }

    pub fn maps(&self) -> &[(usize, usize, LabelMap)] {
        &self.maps
    }

    /// Generator ids of `(t_{i-1}, t_{i+1})`, one per critical value.
    pub fn stars(&self) -> &[usize] {
        &self.stars
    }

    /// Generator ids of `(t_i, t_{i+1})`.
    pub fn slabs(&self) -> &[usize] {
        &self.slabs
    }

    fn map(&self, small: usize, large: usize) -> Option<&LabelMap> {
        self.maps.iter().find(|(a, b, _)| *a == small && *b == large).map(|(_, _, m)| m)
    }

    fn critical_inside(&self, g: usize) -> Vec<usize> {
        let b = &self.generators[g];
        (0..self.critical_set.len()).filter(|&i| b.contains_point(&[self.critical_set[i]])).collect()
    }

    /// Nested pairs containing the same critical values whose map is not a
    /// bijection.
    pub fn constructibility_failures(&self) -> Vec<(usize, usize)> {
        self.maps
            .iter()
            .filter(|(a, b, m)| {
                self.critical_inside(*a) == self.critical_inside(*b) && {
                    let image: BTreeSet<u32> = m.values().copied().collect();
                    !(m.len() == self.values[*b].len() && image.len() == m.len())
                }
            })
            .map(|(a, b, _)| (*a, *b))
            .collect()
    }

    /// Nested triples `A ⊆ B ⊆ C` where the stored maps fail to compose.
    pub fn composition_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, b, ab) in &self.maps {
            for (b2, c, bc) in &self.maps {
                if b2 != b {
                    continue;
                }
                let ac = self.map(*a, *c).expect("nesting is transitive");
                if crate::preimage::compose(bc, ab) != *ac {
                    out.push((*a, *b, *c));
                }
            }
        }
        out
    }

    /// The uncontracted Reeb graph read off the stars and slabs.
    pub fn graph(&self) -> ReebGraph {
        let mut values = Vec::new();
        let mut node = BTreeMap::new();
        for (i, &star) in self.stars.iter().enumerate() {
            for l in self.values[star].labels() {
                node.insert((i, l), values.len());
                values.push(self.critical_set[i]);
            }
        }
        let mut edges = Vec::new();
        for (i, &slab) in self.slabs.iter().enumerate() {
            let down = self.map(slab, self.stars[i]).unwrap();
            let up = self.map(slab, self.stars[i + 1]).unwrap();
            for l in self.values[slab].labels() {
                edges.push((node[&(i, down[&l])], node[&(i + 1, up[&l])]));
            }
        }
        ReebGraph { values, edges }
    }
}

/// Evaluates `pi_0 f^{-1}` on stars `(t_{i-1}, t_{i+1})`, slabs
/// `(t_i, t_{i+1})`, narrowed copies of both, and the whole range, where
/// `t_{-1}` and `t_{k+1}` lie one unit beyond the extreme critical values.
pub fn cosheaf_rep(x: &RdSpace) -> Result<CosheafRep> {
    let s = critical_values(x)?;
    let mut generators: Vec<OpenBox> = Vec::new();
    let mut stars = Vec::new();
    let mut slabs = Vec::new();
    if !s.is_empty() {
        let k = s.len();
        let ext = |i: isize| -> f64 {
            if i < 0 {
                s[0] - 1.0
            } else if i as usize >= k {
                s[k - 1] + 1.0
            } else {
                s[i as usize]
            }
        };
        for i in 0..k as isize {
            let (lo, hi) = (ext(i - 1), ext(i + 1));
            stars.push(generators.len());
            generators.push(OpenBox::interval(lo, hi)?);
            let q = 0.25 * (s[i as usize] - lo).min(hi - s[i as usize]);
            generators.push(OpenBox::interval(s[i as usize] - q, s[i as usize] + q)?);
        }
        for i in 0..k as isize - 1 {
            let (lo, hi) = (ext(i), ext(i + 1));
            slabs.push(generators.len());
            generators.push(OpenBox::interval(lo, hi)?);
            let q = 0.25 * (hi - lo);
            generators.push(OpenBox::interval(lo + q, hi - q)?);
        }
        generators.push(OpenBox::interval(ext(-1), ext(k as isize))?);
    }
    let values: Vec<ComponentSet> = generators.iter().map(|g| components(x, &g.clone().into())).collect();
    let mut maps = Vec::new();
    for (a, ga) in generators.iter().enumerate() {
        for (b, gb) in generators.iter().enumerate() {
            if a != b && ga.is_subset_of(gb) {
                maps.push((a, b, component_map(x, &values[a], &values[b])?));
            }
        }
    }
    Ok(CosheafRep { critical_set: s, generators, values, maps, stars, slabs })
}

/// Endpoints of the sorted cover intervals, after checking that only
/// consecutive intervals overlap: `a_i < a_{i+1} < b_i < a_{i+2}` and
/// `b_i < b_{i+1}`. Returns `(order, a, b)` with `order[i]` the cover index
/// of the `i`-th interval.
pub fn sorted_cover_intervals(cm: &CategoricalMapper) -> Result<(Vec<usize>, Vec<f64>, Vec<f64>)> {
    let c = cm.cover();
    if c.dim_range() != 1 {
        return Err(Error::Dimension { expected: 1, got: c.dim_range() });
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&i, &j| c.elements()[i].lo(0).total_cmp(&c.elements()[j].lo(0)));
    let a: Vec<f64> = order.iter().map(|&i| c.elements()[i].lo(0)).collect();
    let b: Vec<f64> = order.iter().map(|&i| c.elements()[i].hi(0)).collect();
    let n = a.len();
    for i in 0..n.saturating_sub(1) {
        let ok = a[i] < a[i + 1] && a[i + 1] < b[i] && b[i] < b[i + 1] && (i + 2 >= n || b[i] < a[i + 2]);
        if !ok {
            return Err(Error::Ordering(format!(
                "intervals ({}, {}) and ({}, {}) break the consecutive-overlap order",
                a[i],
                b[i],
                a[i + 1],
                b[i + 1]
            )));
        }
    }
    if !a.is_empty() && !b.iter().all(|v| v.is_finite()) || !a.iter().all(|v| v.is_finite()) {
        return Err(Error::Ordering("cover intervals must be bounded".into()));
    }
    Ok((order, a, b))
}

/// Whether the cover separates the critical values: every overlap
/// `(a_{i+1}, b_i)` is free of them and every core `[b_{i-1}, a_{i+1}]`
/// holds at most one.
pub fn adapted_cover(x: &RdSpace, cm: &CategoricalMapper) -> Result<bool> {
    let crit = critical_values(x)?;
    let (_, a, b) = sorted_cover_intervals(cm)?;
    let n = a.len();
    let tol = tolerance();
    for i in 0..n {
        let core_lo = if i == 0 { f64::NEG_INFINITY } else { b[i - 1] };
        let core_hi = if i + 1 == n { f64::INFINITY } else { a[i + 1] };
        if crit.iter().filter(|&&t| core_lo - tol <= t && t <= core_hi + tol).count() > 1 {
            return Ok(false);
        }
        if i + 1 < n && crit.iter().any(|&t| a[i + 1] - tol <= t && t <= b[i] + tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The graph obtained by laying out mapper components as edges over the
/// cover: for each interval `U_i`, an edge over `[b_{i-1}, a_{i+1}]` per
/// component over `U_i`; for each consecutive pair, an edge over
/// `[a_{i+1}, b_i]` per component of the mapper restricted to
/// `U_i ∪ U_{i+1}`. Endpoints of equal value are identified when their
/// components share a simplex. Empty intervals `U_0` and `U_{n+1}` pad both
/// ends.
pub fn geometric_mapper(cm: &CategoricalMapper) -> Result<ReebGraph> {
    let (order, a_in, b_in) = sorted_cover_intervals(cm)?;
    let n = order.len();
    if n == 0 {
        return Ok(ReebGraph { values: Vec::new(), edges: Vec::new() });
    }
    let k = cm.nerve();
    // padded endpoint arrays, index 0..=n+1
    let mut a = vec![0.0; n + 2];
    let mut b = vec![0.0; n + 2];
    a[1..=n].copy_from_slice(&a_in);
    b[1..=n].copy_from_slice(&b_in);
    if n == 1 {
        let w = b[1] - a[1];
        b[0] = a[1] + w / 3.0;
        a[2] = a[1] + 2.0 * w / 3.0;
    } else {
        b[0] = 0.5 * (a[1] + a[2]);
        a[n + 1] = 0.5 * (b[n - 1] + b[n]);
    }
    a[0] = a[1] - (b[1] - a[1]);
    b[n + 1] = b[n] + (b[n] - a[n]);

    // M[i]: components over U_i as simplex sets, i in 1..=n
    let comps_over = |i: usize| -> &ComponentSet {
        let v = k.vertex_id(order[i - 1]).expect("cover element is a nerve vertex");
        cm.value(v)
    };

    struct End {
        value: f64,
        simplices: BTreeSet<u32>,
    }
    let mut pink: Vec<End> = Vec::new();
    let mut yellow: Vec<End> = Vec::new();
    // (pink?, index) pairs for edge ends
    let mut edges: Vec<((bool, usize), (bool, usize))> = Vec::new();
    let mut add = |lo: End, hi: End, is_pink: bool, pink: &mut Vec<End>, yellow: &mut Vec<End>| {
        let list = if is_pink { pink } else { yellow };
        list.push(lo);
        list.push(hi);
        edges.push(((is_pink, list.len() - 2), (is_pink, list.len() - 1)));
    };

    for i in 1..=n {
        for comp in comps_over(i).components() {
            let set: BTreeSet<u32> = comp.simplices.iter().copied().collect();
            add(
                End { value: b[i - 1], simplices: set.clone() },
                End { value: a[i + 1], simplices: set },
                true,
                &mut pink,
                &mut yellow,
            );
        }
    }
    for i in 0..=n {
        // vertices of M[i, i+1]: components over U_i then U_{i+1}
        let mut nodes: Vec<&[u32]> = Vec::new();
        let mut index: BTreeMap<(usize, u32), usize> = BTreeMap::new();
        for side in [i, i + 1] {
            if (1..=n).contains(&side) {
                for comp in comps_over(side).components() {
                    index.insert((side, comp.label), nodes.len());
                    nodes.push(&comp.simplices);
                }
            }
        }
        let mut uf = UnionFind::new(nodes.len());
        if i >= 1 && i < n {
            if let Some(e) = k.id_of(&{
                let mut s = vec![order[i - 1], order[i]];
                s.sort_unstable();
                s
            }) {
                let to_lo = cm.map_to_face(e, k.vertex_id(order[i - 1]).unwrap());
                let to_hi = cm.map_to_face(e, k.vertex_id(order[i]).unwrap());
                for l in cm.value(e).labels() {
                    uf.union(index[&(i, to_lo[&l])], index[&(i + 1, to_hi[&l])]);
                }
            }
        }
        let (count, class) = uf.classes();
        let mut sets = vec![BTreeSet::new(); count];
        for (node, simplices) in nodes.iter().enumerate() {
            sets[class[node]].extend(simplices.iter().copied());
        }
        for set in sets {
            add(
                End { value: a[i + 1], simplices: set.clone() },
                End { value: b[i], simplices: set },
                false,
                &mut pink,
                &mut yellow,
            );
        }
    }

    let tol = tolerance();
    let total = pink.len() + yellow.len();
    let id = |(is_pink, i): (bool, usize)| if is_pink { i } else { pink.len() + i };
    let mut uf = UnionFind::new(total);
    for (pi, p) in pink.iter().enumerate() {
        for (yi, y) in yellow.iter().enumerate() {
            if (p.value - y.value).abs() <= tol && !p.simplices.is_disjoint(&y.simplices) {
                uf.union(pi, pink.len() + yi);
            }
        }
    }
    let (count, class) = uf.classes();
    let mut values = vec![0.0; count];
    for (i, e) in pink.iter().chain(yellow.iter()).enumerate() {
        values[class[i]] = e.value;
    }
    let edges = edges.into_iter().map(|(u, v)| (class[id(u)], class[id(v)])).collect();
    ReebGraph::new(values, edges)
}

/// How node values are compared by [`rgraph_isomorphic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMode {
    /// Matched nodes carry equal values, within the tolerance.
    ExactValues,
    /// Matched nodes carry values of equal rank among each graph's distinct
    /// values.
    Monotone,
}

/// Largest graph [`rgraph_isomorphic`] accepts.
pub const ISOMORPHISM_NODE_LIMIT: usize = 200;

fn ranks(values: &[f64]) -> Vec<f64> {
    let distinct = dedup_sorted(values.to_vec());
    let tol = tolerance();
    values.iter().map(|&v| distinct.iter().position(|&d| (d - v).abs() <= tol).unwrap() as f64).collect()
}

/// Whether a value-preserving multigraph isomorphism exists.
pub fn rgraph_isomorphic(g1: &ReebGraph, g2: &ReebGraph, mode: IsoMode) -> Result<bool> {
    for g in [g1, g2] {
        if g.node_count() > ISOMORPHISM_NODE_LIMIT {
            return Err(Error::SizeLimit(g.node_count()));
        }
    }
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let (l1, l2, tol) = match mode {
        IsoMode::ExactValues => (g1.values.clone(), g2.values.clone(), tolerance()),
        IsoMode::Monotone => (ranks(&g1.values), ranks(&g2.values), 0.5),
    };
    let n = g1.node_count();
    let adjacency = |g: &ReebGraph| {
        let mut m = vec![vec![0usize; n]; n];
        for &(a, b) in &g.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    };
    let (m1, m2) = (adjacency(g1), adjacency(g2));
    let deg1: Vec<usize> = (0..n).map(|v| g1.degree(v)).collect();
    let deg2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    let mut s1 = deg1.clone();
    let mut s2 = deg2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(false);
    }
    // visit g1 nodes in BFS order so earlier matches constrain later ones
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for v in 0..n {
                if m1[u][v] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn search(
        depth: usize,
        order: &[usize],
        assign: &mut [usize],
        used: &mut [bool],
        ctx: &(&[Vec<usize>], &[Vec<usize>], &[usize], &[usize], &[f64], &[f64], f64),
    ) -> bool {
        let (m1, m2, deg1, deg2, l1, l2, tol) = *ctx;
        let Some(&u) = order.get(depth) else { return true };
        for v in 0..used.len() {
            if used[v] || deg1[u] != deg2[v] || (l1[u] - l2[v]).abs() > tol || m1[u][u] != m2[v][v] {
                continue;
            }
            if order[..depth].iter().any(|&w| m1[u][w] != m2[v][assign[w]]) {
                continue;
            }
            assign[u] = v;
            used[v] = true;
            if search(depth + 1, order, assign, used, ctx) {
                return true;
            }
            used[v] = false;
            assign[u] = usize::MAX;
        }
        false
    }
    let ctx = (m1.as_slice(), m2.as_slice(), deg1.as_slice(), deg2.as_slice(), l1.as_slice(), l2.as_slice(), tol);
    Ok(search(0, &order, &mut assign, &mut used, &ctx))
}

/// Ranks of the zeroth and first homology of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BettiPair {
    pub b0: usize,
    pub b1: usize,
}

/// Betti numbers of a multigraph on `nodes` vertices.
pub fn graph_betti(nodes: usize, edges: &[(usize, usize)]) -> BettiPair {
    let mut uf = UnionFind::new(nodes);
    for &(a, b) in edges {
        uf.union(a, b);
    }
    let (b0, _) = uf.classes();
    BettiPair { b0, b1: edges.len() + b0 - nodes }
}

pub fn betti(g: &ReebGraph) -> BettiPair {
    graph_betti(g.node_count(), &g.edges)
}

/// Betti numbers of the 1-skeleton of a mapper nerve.
pub fn nerve_betti(m: &MapperNerve) -> BettiPair {
    graph_betti(m.vertex_count(), &m.edges())
}
