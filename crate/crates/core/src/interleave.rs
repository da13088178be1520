//! Explicit interleavings between the mapper functor
//! `F(I) = pi_0 f^{-1}(union of U_sigma over K_I)` and the cosheaf
//! `C(I) = pi_0 f^{-1}(I)`, with diagram-by-diagram verification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::cover::{nerve_of_cover, thicken, Cover, CoverNerve, OpenBox};
use crate::fixtures::{midpoints, random_test_boxes, scaled_boxes};
use crate::mapper::{direct_components, nested_pairs};
use crate::preimage::{component_map, component_map_covering, components, compose, identity, ComponentSet, LabelMap};
use crate::{Error, RdSpace, Result};

/// Number of sampled generators used for `d >= 2`.
pub const DEFAULT_SAMPLED_BOXES: usize = 64;

/// Largest `d = 1` family checked in full; larger ones are sampled.
pub const FULL_FAMILY_LIMIT: usize = 8192;

/// A set-valued functor on boxes, tabulated on a finite family of regions.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorTable {
    pub name: String,
    /// Labels of the value on each region.
    pub labels: Vec<Vec<u32>>,
    /// Maps for the inclusions `(small, large)` the diagrams need.
    pub maps: BTreeMap<(usize, usize), LabelMap>,
}

impl FunctorTable {
    fn map(&self, small: usize, large: usize) -> Option<LabelMap> {
        if small == large {
            return Some(identity(self.labels[small].iter().copied()));
        }
        self.maps.get(&(small, large)).cloned()
    }
}

/// Two tabulated functors `F`, `G` with maps `phi_R: F(R) -> G(R^eps)` and
/// `psi_R: G(R) -> F(R^eps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterleavingWitness {
    pub eps: f64,
    /// True when the generators are a random sample rather than a family
    /// that determines both functors.
    pub sampled: bool,
    pub regions: Vec<OpenBox>,
    /// Region ids of the generators `I`.
    pub generators: Vec<usize>,
    /// Nested generator pairs `I ⊆ J` checked for naturality.
    pub pairs: Vec<(usize, usize)>,
    /// `R -> R^eps` for every generator and every generator's thickening.
    pub shift: BTreeMap<usize, usize>,
    pub f: FunctorTable,
    pub g: FunctorTable,
    pub phi: BTreeMap<usize, LabelMap>,
    pub psi: BTreeMap<usize, LabelMap>,
}

impl InterleavingWitness {
    /// The same data read with the roles of the two functors exchanged.
    pub fn swapped(&self) -> InterleavingWitness {
        InterleavingWitness {
            f: self.g.clone(),
            g: self.f.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            ..self.clone()
        }
    }

    /// Redirects one image of one `phi_R` to another label of its target,
    /// choosing a change that some checked diagram must see. Returns false
    /// when no such change exists.
    pub fn corrupt_phi(&mut self) -> bool {
        let mut mapped: Vec<usize> = self.phi.keys().copied().collect();
        mapped.sort_unstable();
        for r in mapped {
            let re = self.shift[&r];
            for (&src, &old) in &self.phi[&r] {
                for &new in self.g.labels[re].iter().filter(|&&t| t != old) {
                    if self.corruption_visible(r, src, old, new) {
                        self.phi.get_mut(&r).unwrap().insert(src, new);
                        return true;
                    }
                }
            }
        }
        false
    }

    fn corruption_visible(&self, r: usize, src: u32, old: u32, new: u32) -> bool {
        let re = self.shift[&r];
        let separates = |m: Option<LabelMap>| m.is_some_and(|m| m.get(&old) != m.get(&new));
        let hits = |m: Option<&LabelMap>| m.is_some_and(|m| m.values().any(|&v| v == src));
        let is_generator = self.generators.binary_search(&r).is_ok();
        if is_generator && self.shift.contains_key(&re) && separates(self.psi.get(&re).cloned()) {
            return true;
        }
        if self.generators.iter().any(|&i| self.shift[&i] == r && hits(self.psi.get(&i))) {
            return true;
        }
        is_generator
            && self.pairs.iter().any(|&(a, b)| {
                (a == r && separates(self.g.map(re, self.shift[&b]))) || (b == r && hits(self.f.map(a, r).as_ref()))
            })
    }
}

/// A failed diagram with both sides of the equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub diagram: String,
    pub small: Vec<(f64, f64)>,
    pub large: Option<Vec<(f64, f64)>>,
    pub left: LabelMap,
    pub right: LabelMap,
}

/// Outcome of [`verify_interleaving`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramReport {
    pub eps: f64,
    /// `"sampled"` or `"complete"`.
    pub coverage: String,
    pub generators: usize,
    pub squares_checked: usize,
    pub triangles_checked: usize,
    pub passed: bool,
    pub failures: Vec<Counterexample>,
}

impl DiagramReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Checks naturality of `phi` and `psi` on every generator pair and both
/// triangle identities on every generator, as exact label maps.
pub fn verify_interleaving(w: &InterleavingWitness) -> DiagramReport {
    let mut failures = Vec::new();
    let mut squares = 0;
    let mut triangles = 0;
    let axes = |r: usize| w.regions[r].axes().to_vec();
    let mut check =
        |diagram: &str, small: usize, large: Option<usize>, left: Option<LabelMap>, right: Option<LabelMap>| {
            let defined = left.is_some() && right.is_some();
            let (left, right) = (left.unwrap_or_default(), right.unwrap_or_default());
            if !defined || left != right {
                failures.push(Counterexample {
                    diagram: diagram.to_string(),
                    small: axes(small),
                    large: large.map(axes),
                    left,
                    right,
                });
            }
        };
    let after = |g: Option<LabelMap>, f: Option<&LabelMap>| -> Option<LabelMap> {
        let (g, f) = (g?, f?);
        f.values().all(|v| g.contains_key(v)).then(|| compose(&g, f))
    };
    for &(i, j) in &w.pairs {
        let (ie, je) = (w.shift[&i], w.shift[&j]);
        check(
            "phi naturality",
            i,
            Some(j),
            after(w.g.map(ie, je), w.phi.get(&i)),
            after(w.phi.get(&j).cloned(), w.f.map(i, j).as_ref()),
        );
        check(
            "psi naturality",
            i,
            Some(j),
            after(w.f.map(ie, je), w.psi.get(&i)),
            after(w.psi.get(&j).cloned(), w.g.map(i, j).as_ref()),
        );
        squares += 2;
    }
    for &i in &w.generators {
        let ie = w.shift[&i];
        let i2e = w.shift[&ie];
        check("psi after phi", i, Some(i2e), after(w.psi.get(&ie).cloned(), w.phi.get(&i)), w.f.map(i, i2e));
        check("phi after psi", i, Some(i2e), after(w.phi.get(&ie).cloned(), w.psi.get(&i)), w.g.map(i, i2e));
        triangles += 2;
    }
    DiagramReport {
        eps: w.eps,
        coverage: if w.sampled { "sampled" } else { "complete" }.to_string(),
        generators: w.generators.len(),
        squares_checked: squares,
        triangles_checked: triangles,
        passed: failures.is_empty(),
        failures,
    }
}

/// Regions and lazily evaluated functor values.
struct Evaluator<'a> {
    x: &'a RdSpace,
    cover: &'a Cover,
    nerve: CoverNerve,
    regions: Vec<OpenBox>,
    index: HashMap<Vec<u64>, usize>,
    f: HashMap<usize, ComponentSet>,
    c: HashMap<usize, ComponentSet>,
}

impl<'a> Evaluator<'a> {
    fn new(x: &'a RdSpace, cover: &'a Cover) -> Self {
        Evaluator {
            x,
            cover,
            nerve: nerve_of_cover(cover),
            regions: Vec::new(),
            index: HashMap::new(),
            f: HashMap::new(),
            c: HashMap::new(),
        }
    }

    fn add(&mut self, b: OpenBox) -> usize {
        let key = b.key();
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        self.regions.push(b);
        self.index.insert(key, self.regions.len() - 1);
        self.regions.len() - 1
    }

    fn f(&mut self, r: usize) -> &ComponentSet {
        if !self.f.contains_key(&r) {
            let v = direct_components(self.x, self.cover, &self.nerve, &self.regions[r]);
            self.f.insert(r, v);
        }
        &self.f[&r]
    }

    fn c(&mut self, r: usize) -> &ComponentSet {
        if !self.c.contains_key(&r) {
            let v = components(self.x, &self.regions[r].clone().into());
            self.c.insert(r, v);
        }
        &self.c[&r]
    }

    fn f_map(&mut self, a: usize, b: usize) -> Result<LabelMap> {
        self.f(a);
        self.f(b);
        component_map(self.x, &self.f[&a], &self.f[&b])
    }

    fn c_map(&mut self, a: usize, b: usize) -> Result<LabelMap> {
        self.c(a);
        self.c(b);
        component_map(self.x, &self.c[&a], &self.c[&b])
    }

    /// `F(r) -> C(s)`; the union region over `K_r` must lie box-wise in `s`.
    fn phi(&mut self, r: usize, s: usize) -> Result<LabelMap> {
        self.f(r);
        self.c(s);
        component_map(self.x, &self.f[&r], &self.c[&s])
    }

    /// `C(r) -> F(s)`; `f^{-1}(r)` must lie in the preimage of the union
    /// region over `K_s`.
    fn psi(&mut self, r: usize, s: usize) -> Result<LabelMap> {
        self.c(r);
        self.f(s);
        component_map_covering(self.x, &self.c[&r], &self.f[&s])
    }

    fn labels_f(&mut self, r: usize) -> Vec<u32> {
        self.f(r).labels()
    }

    fn labels_c(&mut self, r: usize) -> Vec<u32> {
        self.c(r).labels()
    }
}

/// Generator boxes and nested pairs (indices into the box list).
///
/// For `d = 1`: all intervals between midpoints of the breakpoints formed by
/// cover endpoints and vertex values, each shifted by `0, ±eps, ±2 eps`.
/// Pairs are the elementary nestings that move one endpoint by one
/// midpoint; every nesting in the family is a composite of these. When that
/// family would exceed [`FULL_FAMILY_LIMIT`] boxes, and for `d >= 2`:
/// `sampled_boxes` random boxes at three scales with all nestings among them.
pub fn generator_family(
    x: &RdSpace,
    c: &Cover,
    eps: f64,
    sampled_boxes: usize,
    seed: u64,
) -> (Vec<OpenBox>, Vec<(usize, usize)>, bool) {
    if c.dim_range() != 1 {
        let boxes = random_test_boxes(x, c, sampled_boxes, seed);
        let pairs = nested_pairs(&boxes);
        return (boxes, pairs, true);
    }
    let mut base: Vec<f64> = c.elements().iter().flat_map(|b| [b.lo(0), b.hi(0)]).collect();
    base.extend(x.map().values().iter().map(|v| v[0]));
    let mut breaks = Vec::new();
    for shift in [0.0, eps, -eps, 2.0 * eps, -2.0 * eps] {
        breaks.extend(base.iter().map(|&t| t + shift).filter(|t| t.is_finite()));
    }
    let mids = midpoints(breaks);
    let m = mids.len();
    if m * m.saturating_sub(1) / 2 > FULL_FAMILY_LIMIT {
        let boxes = scaled_boxes(c, sampled_boxes, seed);
        let pairs = nested_pairs(&boxes);
        return (boxes, pairs, true);
    }
    let mut boxes = Vec::new();
    let mut id = HashMap::new();
    for i in 0..m {
        for j in i + 1..m {
            id.insert((i, j), boxes.len());
            boxes.push(OpenBox::interval(mids[i], mids[j]).expect("midpoints are increasing"));
        }
    }
    let mut pairs = Vec::new();
    for (&(i, j), &small) in &id {
        if i > 0 {
            pairs.push((small, id[&(i - 1, j)]));
        }
        if j + 1 < m {
            pairs.push((small, id[&(i, j + 1)]));
        }
    }
    pairs.sort_unstable();
    (boxes, pairs, false)
}

/// Options for [`build_interleaving_with`].
#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub sampled_boxes: usize,
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { sampled_boxes: DEFAULT_SAMPLED_BOXES, seed: 0 }
    }
}

/// The witness of the proof at `eps`: `phi_I` includes the union region over
/// `K_I` into `I^eps`, and `psi_I` includes `f^{-1}(I)` into the preimage of
/// the union region over `K_{I^eps}`.
pub fn build_interleaving(x: &RdSpace, c: &Cover, eps: f64) -> Result<InterleavingWitness> {
    build_interleaving_with(x, c, eps, &BuildOptions::default())
}

pub fn build_interleaving_with(x: &RdSpace, c: &Cover, eps: f64, opts: &BuildOptions) -> Result<InterleavingWitness> {
    let res = c.resolution();
    if !(eps >= res) {
        return Err(Error::Validation(format!("eps {eps} is below the cover resolution {res}")));
    }
    if x.dim_range() != c.dim_range() {
        return Err(Error::Dimension { expected: c.dim_range(), got: x.dim_range() });
    }
    let (boxes, pairs, sampled) = generator_family(x, c, eps, opts.sampled_boxes, opts.seed);
    let mut ev = Evaluator::new(x, c);
    let plan = Plan::new(&mut ev, boxes, &pairs, eps);
    let mut phi = BTreeMap::new();
    let mut psi = BTreeMap::new();
    for &r in &plan.mapped {
        let s = plan.shift[&r];
        phi.insert(r, ev.phi(r, s)?);
        psi.insert(r, ev.psi(r, s)?);
    }
    plan.finish(&mut ev, eps, sampled, phi, psi)
}

/// The witness at `eps2 >= w.eps` whose maps are those of the witness at
/// `eps`, built on the same generators, followed by the thickening
/// inclusions `R^eps ⊆ R^eps2`.
pub fn extend_witness(x: &RdSpace, c: &Cover, eps: f64, eps2: f64, opts: &BuildOptions) -> Result<InterleavingWitness> {
    if !(eps2 >= eps) {
        return Err(Error::Validation(format!("cannot extend from {eps} down to {eps2}")));
    }
    if !(eps >= c.resolution()) {
        return Err(Error::Validation(format!("eps {eps} is below the cover resolution {}", c.resolution())));
    }
    let (boxes, pairs, sampled) = generator_family(x, c, eps, opts.sampled_boxes, opts.seed);
    let mut ev = Evaluator::new(x, c);
    let plan = Plan::new(&mut ev, boxes, &pairs, eps2);
    let mut phi = BTreeMap::new();
    let mut psi = BTreeMap::new();
    for &r in &plan.mapped {
        let near = ev.add(thicken(&ev.regions[r].clone(), eps));
        let far = plan.shift[&r];
        let p = ev.phi(r, near)?;
        phi.insert(r, compose(&ev.c_map(near, far)?, &p));
        let q = ev.psi(r, near)?;
        psi.insert(r, compose(&ev.f_map(near, far)?, &q));
    }
    plan.finish(&mut ev, eps2, sampled, phi, psi)
}

/// The identity interleaving of `C` with itself at `eps = 0`.
pub fn identity_witness(x: &RdSpace, c: &Cover, opts: &BuildOptions) -> Result<InterleavingWitness> {
    let (boxes, pairs, sampled) = generator_family(x, c, 0.0, opts.sampled_boxes, opts.seed);
    let mut ev = Evaluator::new(x, c);
    let plan = Plan::new(&mut ev, boxes, &pairs, 0.0);
    let mut maps = BTreeMap::new();
    let mut table = FunctorTable { name: "C".into(), labels: Vec::new(), maps: BTreeMap::new() };
    for r in 0..ev.regions.len() {
        table.labels.push(ev.labels_c(r));
    }
    for &(a, b) in &plan.inclusions {
        table.maps.insert((a, b), ev.c_map(a, b)?);
    }
    for &r in &plan.mapped {
        maps.insert(r, identity(table.labels[r].iter().copied()));
    }
    Ok(InterleavingWitness {
        eps: 0.0,
        sampled,
        regions: ev.regions,
        generators: plan.generators,
        pairs: plan.pairs,
        shift: plan.shift,
        f: table.clone(),
        g: table,
        phi: maps.clone(),
        psi: maps,
    })
}

/// Region bookkeeping shared by the witness builders.
struct Plan {
    generators: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    shift: BTreeMap<usize, usize>,
    /// Regions carrying `phi` and `psi`: generators and their thickenings.
    mapped: Vec<usize>,
    /// Inclusions both functors must tabulate.
    inclusions: BTreeSet<(usize, usize)>,
}

impl Plan {
    fn new(ev: &mut Evaluator, boxes: Vec<OpenBox>, pairs: &[(usize, usize)], eps: f64) -> Plan {
        let generators: Vec<usize> = boxes.into_iter().map(|b| ev.add(b)).collect();
        let mut shift = BTreeMap::new();
        for &g in &generators {
            let ge = ev.add(thicken(&ev.regions[g].clone(), eps));
            let g2e = ev.add(thicken(&ev.regions[ge].clone(), eps));
            shift.insert(g, ge);
            shift.entry(ge).or_insert(g2e);
        }
        let pairs: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(a, b)| (generators[a], generators[b]))
            .filter(|(a, b)| a != b)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut inclusions = BTreeSet::new();
        for &(i, j) in &pairs {
            inclusions.insert((i, j));
            inclusions.insert((shift[&i], shift[&j]));
        }
        for &g in &generators {
            inclusions.insert((g, shift[&shift[&g]]));
        }
        inclusions.retain(|(a, b)| a != b);
        let mut mapped: BTreeSet<usize> = generators.iter().copied().collect();
        mapped.extend(generators.iter().map(|g| shift[g]));
        let mut generators = generators;
        generators.sort_unstable();
        generators.dedup();
        Plan { generators, pairs, shift, mapped: mapped.into_iter().collect(), inclusions }
    }

    fn finish(
        self,
        ev: &mut Evaluator,
        eps: f64,
        sampled: bool,
        phi: BTreeMap<usize, LabelMap>,
        psi: BTreeMap<usize, LabelMap>,
    ) -> Result<InterleavingWitness> {
        let mut f = FunctorTable { name: "F".into(), labels: Vec::new(), maps: BTreeMap::new() };
        let mut g = FunctorTable { name: "C".into(), labels: Vec::new(), maps: BTreeMap::new() };
        for r in 0..ev.regions.len() {
            f.labels.push(ev.labels_f(r));
            g.labels.push(ev.labels_c(r));
        }
        for &(a, b) in &self.inclusions {
            f.maps.insert((a, b), ev.f_map(a, b)?);
            g.maps.insert((a, b), ev.c_map(a, b)?);
        }
        Ok(InterleavingWitness {
            eps,
            sampled,
            regions: std::mem::take(&mut ev.regions),
            generators: self.generators,
            pairs: self.pairs,
            shift: self.shift,
            f,
            g,
            phi,
            psi,
        })
    }
}

/// Builds and verifies the witness at `eps = res(c)`; returns `res(c)`.
pub fn certified_upper_bound(x: &RdSpace, c: &Cover) -> Result<f64> {
    let res = c.resolution();
    let report = verify_interleaving(&build_interleaving(x, c, res)?);
    if !report.passed {
        return Err(Error::Verification(format!(
            "{} diagram(s) failed at eps = {res}; first: {:?}",
            report.failures.len(),
            report.failures.first()
        )));
    }
    Ok(res)
}

/// A functor from boxes to finite sets, evaluable on any box.
pub trait SetFunctor {
    fn size(&self, b: &OpenBox) -> usize;
    /// Size of the image of the map induced by `small ⊆ large`.
    fn image_size(&self, small: &OpenBox, large: &OpenBox) -> usize;
}

/// `I -> pi_0 f^{-1}(I)`.
pub struct ComponentsFunctor<'a>(pub &'a RdSpace);

impl SetFunctor for ComponentsFunctor<'_> {
    fn size(&self, b: &OpenBox) -> usize {
        components(self.0, &b.clone().into()).len()
    }

    fn image_size(&self, small: &OpenBox, large: &OpenBox) -> usize {
        let s = components(self.0, &small.clone().into());
        let l = components(self.0, &large.clone().into());
        let m = component_map(self.0, &s, &l).expect("boxes are nested");
        m.values().collect::<BTreeSet<_>>().len()
    }
}

/// `I -> pi_0 f^{-1}(union of U_sigma over K_I)`.
pub struct MapperFunctor<'a> {
    x: &'a RdSpace,
    cover: &'a Cover,
    nerve: CoverNerve,
}

impl<'a> MapperFunctor<'a> {
    pub fn new(x: &'a RdSpace, cover: &'a Cover) -> Self {
        MapperFunctor { x, cover, nerve: nerve_of_cover(cover) }
    }
}

impl SetFunctor for MapperFunctor<'_> {
    fn size(&self, b: &OpenBox) -> usize {
        direct_components(self.x, self.cover, &self.nerve, b).len()
    }

    fn image_size(&self, small: &OpenBox, large: &OpenBox) -> usize {
        let s = direct_components(self.x, self.cover, &self.nerve, small);
        let l = direct_components(self.x, self.cover, &self.nerve, large);
        let m = component_map(self.x, &s, &l).expect("boxes are nested");
        m.values().collect::<BTreeSet<_>>().len()
    }
}

/// The functor with empty values.
pub struct EmptyFunctor;

impl SetFunctor for EmptyFunctor {
    fn size(&self, _: &OpenBox) -> usize {
        0
    }

    fn image_size(&self, _: &OpenBox, _: &OpenBox) -> usize {
        0
    }
}

/// Multiples of `step / 8` up to `4 * step`, then infinity.
pub fn default_candidates(step: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (1..=32).map(|k| k as f64 * step / 8.0).collect();
    out.push(f64::INFINITY);
    out
}

/// Largest candidate `e` at which some probe `I` has
/// `|image(a(I) -> a(I^{2e}))| > |b(I^e)|` (or the same with `a` and `b`
/// exchanged). An `e`-interleaving forces the image to factor through
/// `b(I^e)`, so the result never exceeds the interleaving distance. Returns
/// 0 when no candidate is violated.
pub fn cardinality_lower_bound(a: &dyn SetFunctor, b: &dyn SetFunctor, probes: &[OpenBox], candidates: &[f64]) -> f64 {
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|p, q| q.total_cmp(p));
    for &e in sorted.iter().filter(|&&e| e > 0.0) {
        for i in probes {
            let ie = thicken(i, e);
            let i2e = thicken(&ie, e);
            if a.image_size(i, &i2e) > b.size(&ie) || b.image_size(i, &i2e) > a.size(&ie) {
                return e;
            }
        }
    }
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{refine, uniform_cover};
    use crate::fixtures::{circle4, tent};

    #[test]
    fn tent_witness_verifies() {
        let x = tent();
        let c = uniform_cover(&[(0.0, 1.0)], &[2], 0.5).unwrap();
        assert_eq!(c.resolution(), 1.5);
        let w = build_interleaving(&x, &c, 1.5).unwrap();
        let r = verify_interleaving(&w);
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.coverage, "complete");
        assert!(r.squares_checked > 0 && r.triangles_checked > 0);
    }

    #[test]
    fn eps_below_resolution_rejected() {
        let c = uniform_cover(&[(0.0, 1.0)], &[2], 0.5).unwrap();
        assert!(matches!(build_interleaving(&tent(), &c, 0.0), Err(Error::Validation(_))));
    }

    #[test]
    fn empty_k_i_gives_empty_phi() {
        let c = uniform_cover(&[(0.0, 1.0)], &[2], 0.5).unwrap();
        let w = build_interleaving(&tent(), &c, c.resolution()).unwrap();
        let far = w.generators.iter().find(|&&g| w.regions[g].hi(0) < -1.5).copied().unwrap();
        assert!(w.phi[&far].is_empty());
        assert!(w.f.labels[far].is_empty());
    }

    #[test]
    fn certified_bound_values() {
        let x = tent();
        let c = uniform_cover(&[(0.0, 1.0)], &[3], 0.5).unwrap();
        assert_eq!(certified_upper_bound(&x, &c).unwrap(), 0.75);
        let r = refine(&c).unwrap();
        let b = certified_upper_bound(&x, &r).unwrap();
        assert!(b < 0.75);
    }

    #[test]
    fn witness_variants() {
        let x = circle4();
        let c = uniform_cover(&[(0.0, 2.0)], &[8], 0.3).unwrap();
        let res = c.resolution();
        let w = build_interleaving(&x, &c, res).unwrap();
        assert!(verify_interleaving(&w.swapped()).passed);
        let id = identity_witness(&x, &c, &BuildOptions::default()).unwrap();
        assert!(verify_interleaving(&id).passed);
        let ext = extend_witness(&x, &c, res, 1.7 * res, &BuildOptions::default()).unwrap();
        assert!(verify_interleaving(&ext).passed);
        let mut bad = w.clone();
        assert!(bad.corrupt_phi());
        let r = verify_interleaving(&bad);
        assert!(!r.passed);
        assert!(r.to_json_string().contains("left"));
    }

    #[test]
    fn lower_bound_examples() {
        let x = circle4();
        let c = uniform_cover(&[(0.0, 2.0)], &[2], 0.5).unwrap();
        let probes: Vec<OpenBox> = random_test_boxes(&x, &c, 0, 0);
        let cands = default_candidates(c.resolution());
        let comp = ComponentsFunctor(&x);
        assert_eq!(cardinality_lower_bound(&comp, &comp, &probes, &cands), 0.0);
        assert_eq!(cardinality_lower_bound(&comp, &EmptyFunctor, &probes, &cands), f64::INFINITY);
        let mf = MapperFunctor::new(&x, &c);
        assert!(cardinality_lower_bound(&comp, &mf, &probes, &cands) <= c.resolution());
    }

    #[test]
    fn sampled_in_two_dimensions() {
        let x = crate::fixtures::square_grid(5, |a, b| vec![a, b]);
        let c = crate::cover::uniform_cover_of_image(&x, &[2, 2], 0.5).unwrap();
        let w = build_interleaving(&x, &c, c.resolution()).unwrap();
        let r = verify_interleaving(&w);
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.coverage, "sampled");
    }
}
