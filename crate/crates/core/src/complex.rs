//! Simplicial complexes carrying piecewise-linear maps into `R^d`.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A simplex given by its strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts the ids. Fails on an empty list or a repeated vertex.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Validation("empty simplex".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("duplicate vertex in simplex {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-1 faces, in the order obtained by dropping vertex 0, 1, ...
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n)
            .map(move |skip| Simplex(self.0.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()))
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

/// A finite abstract simplicial complex with its full face closure stored.
///
/// Simplices are indexed by dimension and then lexicographically, so the
/// 0-simplex of vertex `v` always has id `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the face closure of `maximal` over `vertex_count` vertices. Every
    /// vertex is present as a 0-simplex even if no listed simplex uses it.
    pub fn new(vertex_count: usize, maximal: Vec<Simplex>) -> Result<Self> {
        let mut all: Vec<Simplex> = (0..vertex_count as u32).map(|v| Simplex(vec![v])).collect();
        let mut seen: std::collections::HashSet<Simplex> = all.iter().cloned().collect();
        let mut stack = Vec::new();
        for s in maximal {
            if let Some(&v) = s.0.iter().find(|&&v| v as usize >= vertex_count) {
                return Err(Error::Validation(format!(
                    "simplex {:?} references vertex {v} but vertex_count is {vertex_count}",
                    s.0
                )));
            }
            stack.push(s);
        }
        while let Some(s) = stack.pop() {
            if seen.insert(s.clone()) {
                stack.extend(s.facets());
                all.push(s);
            }
        }
        all.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let index: HashMap<Simplex, usize> = all.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut facets = vec![Vec::new(); all.len()];
        let mut cofacets = vec![Vec::new(); all.len()];
        for (i, s) in all.iter().enumerate() {
            for f in s.facets() {
                let j = index[&f];
                facets[i].push(j);
                cofacets[j].push(i);
            }
        }
        Ok(SimplicialComplex { vertex_count, simplices: all, index, facets, cofacets })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn id_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Ids of the codimension-1 faces of simplex `id`.
    pub fn facets(&self, id: usize) -> &[usize] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: usize) -> &[usize] {
        &self.cofacets[id]
    }

    /// Simplices that are not a facet of anything.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        (0..self.len()).filter(|&i| self.cofacets[i].is_empty()).map(|i| &self.simplices[i]).collect()
    }

    pub fn count_of_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Connected components of the underlying space, as a class index per vertex.
    pub fn vertex_components(&self) -> (usize, Vec<usize>) {
        let mut uf = crate::unionfind::UnionFind::new(self.vertex_count);
        for s in &self.simplices {
            for w in s.0.windows(2) {
                uf.union(w[0] as usize, w[1] as usize);
            }
        }
        uf.classes()
    }
}

/// Per-vertex values of a PL map into `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlMap {
    dim_range: usize,
    values: Vec<Vec<f64>>,
}

impl PlMap {
    pub fn new(dim_range: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if dim_range < 1 {
            return Err(Error::Validation("dim_range must be at least 1".into()));
        }
        for (v, p) in values.iter().enumerate() {
            if p.len() != dim_range {
                return Err(Error::Validation(format!("vertex {v} has {} coordinates, expected {dim_range}", p.len())));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!("vertex {v} has a non-finite value")));
            }
        }
        Ok(PlMap { dim_range, values })
    }

    pub fn dim_range(&self) -> usize {
        self.dim_range
    }

    pub fn value(&self, vertex: u32) -> &[f64] {
        &self.values[vertex as usize]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Vertex images of `s`; their convex hull is `f(s)`.
pub fn image_polytope(s: &Simplex, m: &PlMap) -> Vec<Vec<f64>> {
    s.vertices().iter().map(|&v| m.value(v).to_vec()).collect()
}

/// A simplicial complex together with a PL map on it.
#[derive(Clone, Debug, PartialEq)]
pub struct RdSpace {
    complex: SimplicialComplex,
    map: PlMap,
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    dim_range: usize,
    vertices: Vec<Vec<f64>>,
    #[serde(default)]
    simplices: Vec<Vec<u32>>,
}

impl RdSpace {
    pub fn new(complex: SimplicialComplex, map: PlMap) -> Result<Self> {
        if complex.vertex_count() != map.len() {
            return Err(Error::Validation(format!(
                "map has {} values for {} vertices",
                map.len(),
                complex.vertex_count()
            )));
        }
        Ok(RdSpace { complex, map })
    }

    /// Convenience constructor from raw vertex values and maximal simplices.
    pub fn from_parts(dim_range: usize, values: Vec<Vec<f64>>, simplices: Vec<Vec<u32>>) -> Result<Self> {
        let map = PlMap::new(dim_range, values)?;
        let maximal = simplices.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
        let complex = SimplicialComplex::new(map.len(), maximal)?;
        RdSpace::new(complex, map)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn map(&self) -> &PlMap {
        &self.map
    }

    pub fn dim_range(&self) -> usize {
        self.map.dim_range()
    }

    /// Axis-wise `(min, max)` of the vertex values, or `None` without vertices.
    pub fn image_bounds(&self) -> Option<Vec<(f64, f64)>> {
        if self.map.is_empty() {
            return None;
        }
        let d = self.dim_range();
        let mut b = vec![(f64::INFINITY, f64::NEG_INFINITY); d];
        for p in self.map.values() {
            for (i, &x) in p.iter().enumerate() {
                b[i].0 = b[i].0.min(x);
                b[i].1 = b[i].1.max(x);
            }
        }
        Some(b)
    }

    /// Pairs of vertices sharing a value (d = 1 only); the construction does
    /// not require genericity, this is informational.
    pub fn genericity_warnings(&self) -> Vec<String> {
        if self.dim_range() != 1 {
            return Vec::new();
        }
        let tol = crate::tolerance();
        let mut order: Vec<usize> = (0..self.map.len()).collect();
        order.sort_by(|&a, &b| self.map.values[a][0].total_cmp(&self.map.values[b][0]));
        order
            .windows(2)
            .filter(|w| (self.map.values[w[1]][0] - self.map.values[w[0]][0]).abs() <= tol)
            .map(|w| format!("vertices {} and {} share value {}", w[0], w[1], self.map.values[w[0]][0]))
            .collect()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(s)?;
        RdSpace::from_parts(file.dim_range, file.vertices, file.simplices)
    }

    pub fn to_json_string(&self) -> String {
        let file = MeshFile {
            dim_range: self.dim_range(),
            vertices: self.map.values.clone(),
            simplices: self
                .complex
                .maximal_simplices()
                .into_iter()
                .filter(|s| s.dim() > 0)
                .map(|s| s.vertices().to_vec())
                .collect(),
        };
        serde_json::to_string(&file).expect("mesh serialization cannot fail")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}

/// Reads and validates a mesh file.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<RdSpace> {
    let text = std::fs::read_to_string(path)?;
    RdSpace::from_json_str(&text)
}
