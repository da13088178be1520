//! Canned meshes, seeded random instances and brute-force oracles.

mod oracle;
mod random;

pub use oracle::{raster_box_components, sampling_oracle, stable_sampling_oracle, OracleResult};
pub(crate) use random::{midpoints, scaled_boxes};
pub use random::{
    random_bivariate_grid, random_instance, random_region, random_test_boxes, BivariateField, Instance, InstanceParams,
};

use std::f64::consts::TAU;

use crate::{Error, RdSpace, Result};

/// A named input with the outputs it is known to produce.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub space: RdSpace,
    pub expected: &'static str,
}

/// Looks up a canned fixture: `tent`, `circle4`, `torus` or `square_grid_2d`.
pub fn canned(name: &str) -> Result<Fixture> {
    let (name, space, expected) = match name {
        "tent" => ("tent", tent(), "3 vertices, 2 edges; Reeb graph is a 3-node path with values 0, 1, 0"),
        "circle4" => ("circle4", circle4(), "4 vertices, 4 edges; Reeb graph has 2 nodes and 2 parallel edges"),
        "torus" => ("torus", torus(), "Euler characteristic 0; Reeb graph has b1 = 1 and 4 critical nodes"),
        "square_grid_2d" => ("square_grid_2d", square_grid(8, |x, y| vec![x, y]), "8x8 grid, f = (x, y)"),
        other => return Err(Error::Validation(format!("unknown fixture {other:?}"))),
    };
    Ok(Fixture { name, space, expected })
}

pub const CANNED_NAMES: [&str; 4] = ["tent", "circle4", "torus", "square_grid_2d"];

/// Path `v0 - v1 - v2` with `f = 0, 1, 0`.
pub fn tent() -> RdSpace {
    RdSpace::from_parts(1, vec![vec![0.0], vec![1.0], vec![0.0]], vec![vec![0, 1], vec![1, 2]]).unwrap()
}

/// 4-cycle at heights 0, 1, 2, 1.
pub fn circle4() -> RdSpace {
    RdSpace::from_parts(
        1,
        vec![vec![0.0], vec![1.0], vec![2.0], vec![1.0]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .unwrap()
}

pub const TORUS_MAJOR: usize = 12;
pub const TORUS_MINOR: usize = 8;

/// Triangulated torus standing on its rim, with a slightly tilted height.
///
/// Vertex `i * 8 + j` (i < 12, j < 8) sits at angles `theta = 2 pi i / 12`
/// around the ring and `phi = 2 pi j / 8` around the tube, with height
/// `(2 + cos phi) cos(theta + 0.05) + 0.05 sin(phi)`. Each grid square
/// `(i, j), (i+1, j), (i+1, j+1), (i, j+1)` (indices mod 12 / 8) is split
/// along its `(i, j) - (i+1, j+1)` diagonal.
pub fn torus() -> RdSpace {
    let (nu, nv) = (TORUS_MAJOR, TORUS_MINOR);
    let id = |i: usize, j: usize| ((i % nu) * nv + (j % nv)) as u32;
    let mut values = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let theta = TAU * i as f64 / nu as f64;
            let phi = TAU * j as f64 / nv as f64;
            values.push(vec![(2.0 + phi.cos()) * (theta + 0.05).cos() + 0.05 * phi.sin()]);
        }
    }
    let mut tris = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    RdSpace::from_parts(1, values, tris).unwrap()
}

/// `n x n` vertex grid on the unit square, each cell split along its
/// lower-left to upper-right diagonal, with values `field(x, y)`.
pub fn square_grid(n: usize, field: impl Fn(f64, f64) -> Vec<f64>) -> RdSpace {
    assert!(n >= 2, "grid needs at least 2 vertices per side");
    let h = 1.0 / (n - 1) as f64;
    let id = |i: usize, j: usize| (j * n + i) as u32;
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            values.push(field(i as f64 * h, j as f64 * h));
        }
    }
    let d = values[0].len();
    let mut tris = Vec::with_capacity(2 * (n - 1) * (n - 1));
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    RdSpace::from_parts(d, values, tris).unwrap()
}

/// Disjoint union of two meshes with the same range dimension.
pub fn disjoint_union(a: &RdSpace, b: &RdSpace) -> RdSpace {
    assert_eq!(a.dim_range(), b.dim_range());
    let offset = a.complex().vertex_count() as u32;
    let mut values = a.map().values().to_vec();
    values.extend(b.map().values().iter().cloned());
    let mut simplices: Vec<Vec<u32>> =
        a.complex().maximal_simplices().into_iter().map(|s| s.vertices().to_vec()).collect();
    simplices
        .extend(b.complex().maximal_simplices().into_iter().map(|s| s.vertices().iter().map(|v| v + offset).collect()));
    RdSpace::from_parts(a.dim_range(), values, simplices).unwrap()
}
