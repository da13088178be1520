//! The categorical mapper `C_K`, its colimit evaluation `P_K`, the direct
//! evaluation `pi_0 f^{-1}(U_{K_I})`, and the classic mapper nerve.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::cover::{nerve_of_cover, uniform_cover_of_image, Cover, CoverNerve, OpenBox};
use crate::preimage::{component_map, components, compose, ActiveRegion, ComponentSet, LabelMap};
use crate::unionfind::UnionFind;
use crate::{Error, RdSpace, Result};

/// Component sets over every nerve simplex, with the maps induced by the
/// face relations. Only codimension-1 face maps are stored; longer face
/// relations are composed on demand.
#[derive(Clone, Debug)]
pub struct CategoricalMapper {
    cover: Cover,
    nerve: CoverNerve,
    values: Vec<ComponentSet>,
    /// `face_maps[tau][k]`: `C(tau) -> C(nerve.facets(tau)[k])`.
    face_maps: Vec<Vec<LabelMap>>,
}

impl CategoricalMapper {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn nerve(&self) -> &CoverNerve {
        &self.nerve
    }

    /// `C_K(sigma) = pi_0 f^{-1}(U_sigma)`.
    pub fn value(&self, sigma: usize) -> &ComponentSet {
        &self.values[sigma]
    }

    pub fn face_map(&self, tau: usize, facet_index: usize) -> &LabelMap {
        &self.face_maps[tau][facet_index]
    }

    /// Map `C(tau) -> C(sigma)` for any face `sigma` of `tau`.
    pub fn map_to_face(&self, tau: usize, sigma: usize) -> LabelMap {
        let target = self.nerve.simplex(sigma);
        let mut current = tau;
        let mut acc: LabelMap = self.values[tau].labels().into_iter().map(|l| (l, l)).collect();
        while current != sigma {
            let (k, &next) = self
                .nerve
                .facets(current)
                .iter()
                .enumerate()
                .find(|(_, &f)| target.iter().all(|a| self.nerve.simplex(f).contains(a)))
                .expect("sigma is a face of tau");
            acc = compose(&self.face_maps[current][k], &acc);
            current = next;
        }
        acc
    }

    /// Cover elements whose nerve vertex exists.
    fn vertex_of(&self, element: usize) -> usize {
        self.nerve.vertex_id(element).expect("every cover element is a nerve vertex")
    }
}

/// Builds `C_K` for the nerve of `c`, checking that face maps compose.
pub fn categorical_mapper(x: &RdSpace, c: &Cover) -> Result<CategoricalMapper> {
    if x.dim_range() != c.dim_range() {
        return Err(Error::Dimension { expected: c.dim_range(), got: x.dim_range() });
    }
    let nerve = nerve_of_cover(c);
    let values: Vec<ComponentSet> =
        (0..nerve.len()).map(|s| components(x, &ActiveRegion::single(nerve.intersection_box(s).clone()))).collect();
    let mut face_maps = Vec::with_capacity(nerve.len());
    for tau in 0..nerve.len() {
        let maps = nerve
            .facets(tau)
            .iter()
            .map(|&sigma| component_map(x, &values[tau], &values[sigma]))
            .collect::<Result<Vec<_>>>()?;
        face_maps.push(maps);
    }
    let cm = CategoricalMapper { cover: c.clone(), nerve, values, face_maps };
    check_face_composition(&cm)?;
    Ok(cm)
}

/// For every codimension-2 face, the two routes through facets agree.
fn check_face_composition(cm: &CategoricalMapper) -> Result<()> {
    let k = &cm.nerve;
    for rho in (0..k.len()).filter(|&r| k.simplex(r).len() >= 3) {
        let facets = k.facets(rho);
        for (i, &t1) in facets.iter().enumerate() {
            for (j, &t2) in facets.iter().enumerate().skip(i + 1) {
                let common: Vec<usize> = k.simplex(t1).iter().copied().filter(|a| k.simplex(t2).contains(a)).collect();
                let sigma = k.id_of(&common).expect("nerve is closed under faces");
                let via = |t: usize, idx: usize| -> LabelMap {
                    let pos = k.facets(t).iter().position(|&f| f == sigma).unwrap();
                    compose(&cm.face_maps[t][pos], &cm.face_maps[rho][idx])
                };
                if via(t1, i) != via(t2, j) {
                    return Err(Error::WellDefinedness(format!(
                        "face maps of {:?} do not compose through {:?} and {:?}",
                        k.simplex(rho),
                        k.simplex(t1),
                        k.simplex(t2)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// One element of a finite set-valued evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetElement {
    pub label: u32,
    /// For colimit classes, the `(nerve simplex, component label)` pairs
    /// identified into this class; empty for direct evaluations.
    pub members: Vec<(usize, u32)>,
    /// Mesh simplices underlying the element.
    pub simplices: Vec<u32>,
}

/// A finite labelled set, with the box it was evaluated on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetFunctorValue {
    pub provenance: OpenBox,
    pub elements: Vec<SetElement>,
}

impl SetFunctorValue {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> Vec<u32> {
        self.elements.iter().map(|e| e.label).collect()
    }
}

/// `P_K(C_K)(I)`: the colimit of `C_K` over `K_I`, computed as a quotient of
/// the disjoint union by the face-map identifications. Classes are labelled
/// `0, 1, ...` in order of their smallest member.
pub fn pk_evaluate(cm: &CategoricalMapper, i: &OpenBox) -> SetFunctorValue {
    let k_i = cm.nerve.k_sub(i);
    let in_sub: BTreeSet<usize> = k_i.iter().copied().collect();
    let mut offset = BTreeMap::new();
    let mut members: Vec<(usize, u32)> = Vec::new();
    for &sigma in &k_i {
        offset.insert(sigma, members.len());
        members.extend(cm.values[sigma].labels().into_iter().map(|l| (sigma, l)));
    }
    let index_of = |sigma: usize, label: u32| -> usize {
        let labels = cm.values[sigma].labels();
        offset[&sigma] + labels.binary_search(&label).expect("label in component set")
    };
    let mut uf = UnionFind::new(members.len());
    for &tau in &k_i {
        for (pos, &sigma) in cm.nerve.facets(tau).iter().enumerate() {
            debug_assert!(in_sub.contains(&sigma));
            for (&v, &w) in &cm.face_maps[tau][pos] {
                uf.union(index_of(tau, v), index_of(sigma, w));
            }
        }
    }
    let (count, class) = uf.classes();
    let mut elements: Vec<SetElement> =
        (0..count).map(|c| SetElement { label: c as u32, members: Vec::new(), simplices: Vec::new() }).collect();
    for (n, &(sigma, l)) in members.iter().enumerate() {
        let e = &mut elements[class[n]];
        e.members.push((sigma, l));
        let comp = &cm.values[sigma].components()[cm.values[sigma].labels().binary_search(&l).unwrap()];
        e.simplices.extend_from_slice(&comp.simplices);
    }
    for e in &mut elements {
        e.simplices.sort_unstable();
        e.simplices.dedup();
    }
    SetFunctorValue { provenance: i.clone(), elements }
}

/// The region `U_{K_I} = union of U_sigma over K_I`, as the union of the
/// vertex boxes in `K_I`.
pub fn k_union_region(c: &Cover, k: &CoverNerve, i: &OpenBox) -> ActiveRegion {
    let boxes = k
        .k_sub(i)
        .into_iter()
        .filter(|&s| k.simplex(s).len() == 1)
        .map(|s| c.elements()[k.simplex(s)[0]].clone())
        .collect();
    ActiveRegion::union(boxes)
}

/// Components of `f^{-1}(U_{K_I})`.
pub fn direct_components(x: &RdSpace, c: &Cover, k: &CoverNerve, i: &OpenBox) -> ComponentSet {
    components(x, &k_union_region(c, k, i))
}

/// `F(I) = pi_0 f^{-1}(union of U_sigma over K_I)`, evaluated directly.
pub fn f_direct(x: &RdSpace, c: &Cover, k: &CoverNerve, i: &OpenBox) -> SetFunctorValue {
    let cs = direct_components(x, c, k, i);
    SetFunctorValue {
        provenance: i.clone(),
        elements: cs
            .components()
            .iter()
            .map(|comp| SetElement { label: comp.label, members: Vec::new(), simplices: comp.simplices.clone() })
            .collect(),
    }
}

/// The canonical map from colimit classes to direct components: each member
/// component of a class lies inside exactly one direct component.
pub fn canonical_map(
    x: &RdSpace,
    cm: &CategoricalMapper,
    colimit: &SetFunctorValue,
    direct: &ComponentSet,
) -> Result<LabelMap> {
    let mut out = LabelMap::new();
    let mut inclusion_cache: BTreeMap<usize, LabelMap> = BTreeMap::new();
    for e in &colimit.elements {
        let mut image = None;
        for &(sigma, l) in &e.members {
            if !inclusion_cache.contains_key(&sigma) {
                inclusion_cache.insert(sigma, component_map(x, &cm.values[sigma], direct)?);
            }
            let target = inclusion_cache[&sigma][&l];
            match image {
                None => image = Some(target),
                Some(t) if t != target => {
                    return Err(Error::WellDefinedness(format!(
                        "colimit class {} meets direct components {t} and {target}",
                        e.label
                    )))
                }
                _ => {}
            }
        }
        if let Some(t) = image {
            out.insert(e.label, t);
        }
    }
    Ok(out)
}

/// Map `P_K(I) -> P_K(J)` for `K_I ⊆ K_J`, through class membership.
pub fn colimit_map(small: &SetFunctorValue, large: &SetFunctorValue) -> Result<LabelMap> {
    let mut owner: BTreeMap<(usize, u32), u32> = BTreeMap::new();
    for e in &large.elements {
        for &m in &e.members {
            owner.insert(m, e.label);
        }
    }
    let mut out = LabelMap::new();
    for e in &small.elements {
        let images: BTreeSet<u32> = e
            .members
            .iter()
            .map(|m| owner.get(m).copied().ok_or_else(|| Error::Containment(format!("{m:?} missing from K_J"))))
            .collect::<Result<_>>()?;
        if images.len() != 1 {
            return Err(Error::WellDefinedness(format!("class {} maps to {images:?}", e.label)));
        }
        out.insert(e.label, *images.iter().next().unwrap());
    }
    Ok(out)
}

/// Outcome of comparing `P_K C_K` with the direct evaluation on test boxes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Lemma61Report {
    pub boxes_checked: usize,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl Lemma61Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Pairs `(i, j)` with `boxes[i] ⊆ boxes[j]`, `i != j`.
pub fn nested_pairs(boxes: &[OpenBox]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in boxes.iter().enumerate() {
        for (j, b) in boxes.iter().enumerate() {
            if i != j && a.is_subset_of(b) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Checks that the canonical map `P_K C_K(I) -> F(I)` is a bijection on every
/// test box and that it commutes with the inclusion maps of nested boxes.
pub fn lemma61_check(x: &RdSpace, c: &Cover, test_boxes: &[OpenBox]) -> Result<Lemma61Report> {
    let cm = categorical_mapper(x, c)?;
    lemma61_check_with(x, &cm, test_boxes)
}

pub fn lemma61_check_with(x: &RdSpace, cm: &CategoricalMapper, test_boxes: &[OpenBox]) -> Result<Lemma61Report> {
    let mut report = Lemma61Report::default();
    let mut evaluated = Vec::with_capacity(test_boxes.len());
    for b in test_boxes {
        let colimit = pk_evaluate(cm, b);
        let direct = direct_components(x, &cm.cover, &cm.nerve, b);
        let psi = match canonical_map(x, cm, &colimit, &direct) {
            Ok(m) => m,
            Err(e) => {
                report.failures.push(format!("box {:?}: {e}", b.axes()));
                evaluated.push(None);
                continue;
            }
        };
        let targets: BTreeSet<u32> = psi.values().copied().collect();
        let bijective = psi.len() == colimit.len()
            && targets.len() == psi.len()
            && targets == direct.labels().into_iter().collect();
        if !bijective {
            report.failures.push(format!(
                "box {:?}: colimit has {} classes, direct has {} components, map {psi:?}",
                b.axes(),
                colimit.len(),
                direct.len()
            ));
        }
        report.boxes_checked += 1;
        evaluated.push(Some((colimit, direct, psi)));
    }
    for (i, j) in nested_pairs(test_boxes) {
        let (Some((pi, di, psi_i)), Some((pj, dj, psi_j))) = (&evaluated[i], &evaluated[j]) else {
            continue;
        };
        let colim = colimit_map(pi, pj)?;
        let direct = component_map(x, di, dj)?;
        if compose(psi_j, &colim) != compose(&direct, psi_i) {
            report.failures.push(format!(
                "naturality fails for {:?} ⊆ {:?}",
                test_boxes[i].axes(),
                test_boxes[j].axes()
            ));
        }
        report.pairs_checked += 1;
    }
    Ok(report)
}

/// The classic mapper: the nerve of the pulled-back cover `f^*(U)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapperNerve {
    /// `(cover element, component label)` per vertex.
    pub vertices: Vec<(usize, u32)>,
    /// All simplices as sorted vertex-id lists, sorted by size then
    /// lexicographically; closed under faces.
    pub simplices: Vec<Vec<usize>>,
}

impl MapperNerve {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1])).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.simplices.iter().filter(|s| s.len() == 2).count()
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct V {
            id: usize,
            cover_index: usize,
            label: u32,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            vertices: Vec<V>,
            simplices: &'a [Vec<usize>],
        }
        let out = Out {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, &(cover_index, label))| V { id, cover_index, label })
                .collect(),
            simplices: &self.simplices,
        };
        serde_json::to_string_pretty(&out).expect("mapper serialization cannot fail")
    }

    /// The 1-skeleton in DOT.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph mapper {\n");
        for (id, &(a, l)) in self.vertices.iter().enumerate() {
            writeln!(s, "  n{id} [label=\"U{a}:{l}\"];").unwrap();
        }
        for (a, b) in self.edges() {
            writeln!(s, "  n{a} -- n{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Derives the mapper nerve from the categorical mapper: every component
/// over `U_sigma` contributes the simplex of its images over the vertices of
/// `sigma`.
pub fn mapper_nerve(cm: &CategoricalMapper) -> MapperNerve {
    let k = &cm.nerve;
    let mut vertices = Vec::new();
    let mut vertex_index = BTreeMap::new();
    for element in 0..cm.cover.len() {
        let Some(v) = k.vertex_id(element) else { continue };
        for l in cm.values[v].labels() {
            vertex_index.insert((element, l), vertices.len());
            vertices.push((element, l));
        }
    }
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    for sigma in 0..k.len() {
        let maps: Vec<(usize, LabelMap)> =
            k.simplex(sigma).iter().map(|&a| (a, cm.map_to_face(sigma, cm.vertex_of(a)))).collect();
        for l in cm.values[sigma].labels() {
            let mut simplex: Vec<usize> = maps.iter().map(|(a, m)| vertex_index[&(*a, m[&l])]).collect();
            simplex.sort_unstable();
            simplices.insert(simplex);
        }
    }
    // faces of images are images of faces already, but close explicitly
    let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = simplices.into_iter().collect();
    while let Some(s) = stack.pop() {
        if s.len() > 1 {
            for skip in 0..s.len() {
                let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                if !closed.contains(&f) {
                    stack.push(f);
                }
            }
        }
        closed.insert(s);
    }
    let mut simplices: Vec<Vec<usize>> = closed.into_iter().collect();
    simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    MapperNerve { vertices, simplices }
}

/// Joint Contour Net: the mapper of a uniform box cover of the bounding box of
/// the image, with `counts[i]` intervals on axis `i`.
pub fn jcn(x: &RdSpace, counts: &[usize], gain: f64) -> Result<MapperNerve> {
    if counts.len() != x.dim_range() {
        return Err(Error::Dimension { expected: x.dim_range(), got: counts.len() });
    }
    let cover = uniform_cover_of_image(x, counts, gain)?;
    Ok(mapper_nerve(&categorical_mapper(x, &cover)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::uniform_cover;
    use crate::fixtures::{disjoint_union, square_grid, tent};

    fn tent_cover() -> Cover {
        uniform_cover(&[(0.0, 1.0)], &[2], 0.5).unwrap()
    }

    #[test]
    fn tent_categorical_mapper() {
        let cm = categorical_mapper(&tent(), &tent_cover()).unwrap();
        let k = cm.nerve();
        let e = k.id_of(&[0, 1]).unwrap();
        assert_eq!(cm.value(0).len(), 2);
        assert_eq!(cm.value(1).len(), 1);
        assert_eq!(cm.value(e).len(), 2);
        let to0 = cm.map_to_face(e, 0);
        let to1 = cm.map_to_face(e, 1);
        assert_eq!(to0.values().collect::<BTreeSet<_>>().len(), 2);
        assert_eq!(to1.values().collect::<BTreeSet<_>>().len(), 1);
    }

    #[test]
    fn tent_mapper_is_a_path() {
        let m = mapper_nerve(&categorical_mapper(&tent(), &tent_cover()).unwrap());
        assert_eq!(m.vertex_count(), 3);
        assert_eq!(m.edge_count(), 2);
        let hub = m.vertices.iter().position(|&(a, _)| a == 1).unwrap();
        assert!(m.edges().iter().all(|&(a, b)| a == hub || b == hub));
    }

    #[test]
    fn mapper_of_disconnected_domain_doubles() {
        let two = disjoint_union(&tent(), &tent());
        let m = mapper_nerve(&categorical_mapper(&two, &tent_cover()).unwrap());
        assert_eq!(m.vertex_count(), 6);
        assert_eq!(m.edge_count(), 4);
    }

    #[test]
    fn single_element_cover() {
        let c = Cover::from_boxes(vec![OpenBox::interval(-1.0, 2.0).unwrap()]).unwrap();
        let m = mapper_nerve(&categorical_mapper(&tent(), &c).unwrap());
        assert_eq!(m.vertex_count(), 1);
        assert_eq!(m.edge_count(), 0);
    }

    #[test]
    fn image_inside_one_element() {
        let c = Cover::from_boxes(vec![
            OpenBox::interval(-1.0, 2.0).unwrap(),
            OpenBox::interval(1.5, 3.0).unwrap(),
            OpenBox::interval(1.8, 4.0).unwrap(),
        ])
        .unwrap();
        let cm = categorical_mapper(&tent(), &c).unwrap();
        assert_eq!(cm.nerve().len(), 7);
        for s in 1..cm.nerve().len() {
            assert!(cm.value(s).is_empty(), "{:?}", cm.nerve().simplex(s));
        }
    }

    #[test]
    fn colimit_examples() {
        let x = tent();
        let c = tent_cover();
        let cm = categorical_mapper(&x, &c).unwrap();
        let only_u1 = OpenBox::interval(1.0, 1.5).unwrap();
        assert_eq!(cm.nerve().k_sub(&only_u1), vec![1]);
        assert_eq!(pk_evaluate(&cm, &only_u1).len(), cm.value(1).len());
        let i = OpenBox::interval(0.2, 0.3).unwrap();
        assert_eq!(pk_evaluate(&cm, &i).len(), 1);
        assert_eq!(f_direct(&x, &c, cm.nerve(), &i).len(), 1);
        let far = OpenBox::interval(5.0, 6.0).unwrap();
        assert!(pk_evaluate(&cm, &far).is_empty());
        assert!(f_direct(&x, &c, cm.nerve(), &far).is_empty());
        let all = OpenBox::interval(-10.0, 10.0).unwrap();
        assert_eq!(f_direct(&x, &c, cm.nerve(), &all).len(), 1);
    }

    #[test]
    fn lemma61_on_tent() {
        let x = tent();
        for n in [2, 3] {
            let c = uniform_cover(&[(0.0, 1.0)], &[n], 0.5).unwrap();
            let boxes = crate::fixtures::random_test_boxes(&x, &c, 0, 0);
            let r = lemma61_check(&x, &c, &boxes).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert!(r.pairs_checked > 0);
        }
    }

    #[test]
    fn jcn_examples() {
        let sq = square_grid(9, |x, y| vec![x, y]);
        let m = jcn(&sq, &[2, 2], 0.5).unwrap();
        assert_eq!(m.vertex_count(), 4);
        // 4 box-adjacent pairs plus 2 diagonal pairs meeting at the center
        assert_eq!(m.edge_count(), 6);
        let constant = square_grid(4, |_, _| vec![0.3, 0.3]);
        let mc = jcn(&constant, &[3, 3], 0.5).unwrap();
        let holding = uniform_cover_of_image(&constant, &[3, 3], 0.5)
            .unwrap()
            .elements()
            .iter()
            .filter(|b| b.contains_point(&[0.3, 0.3]))
            .count();
        assert_eq!(mc.vertex_count(), holding);
        assert_eq!(mc.simplices.iter().map(|s| s.len()).max().unwrap(), holding);
        assert_eq!(jcn(&constant, &[1, 1], 0.5).unwrap().vertex_count(), 1);
        assert!(matches!(jcn(&sq, &[2], 0.5), Err(Error::Dimension { .. })));
    }

    #[test]
    fn exports() {
        let m = mapper_nerve(&categorical_mapper(&tent(), &tent_cover()).unwrap());
        let dot = m.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 2);
        let v: serde_json::Value = serde_json::from_str(&m.to_json_string()).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    }
}
