//! Does the convex hull of a few points meet an open box?
//!
//! The question is answered through the largest slack
//! `max_{p in hull} min_i min(p_i - lo_i, hi_i - p_i)`, which is positive
//! exactly when the hull meets the box. In one dimension the maximizer is the
//! box midpoint clamped to the hull; otherwise a small linear program over the
//! barycentric coordinates is solved with a dense tableau simplex.

use crate::OpenBox;

fn axis_slack(p: f64, lo: f64, hi: f64) -> f64 {
    (p - lo).min(hi - p)
}

/// Slack of a single point.
pub fn point_slack(p: &[f64], b: &OpenBox) -> f64 {
    p.iter().zip(b.axes()).map(|(&x, &(lo, hi))| axis_slack(x, lo, hi)).fold(f64::INFINITY, f64::min)
}

/// Largest slack over the convex hull of `points` (which must be nonempty).
pub fn max_slack(points: &[&[f64]], b: &OpenBox) -> f64 {
    debug_assert!(!points.is_empty());
    if b.dim() == 1 {
        let (lo, hi) = b.axes()[0];
        let (mn, mx) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, c), p| (a.min(p[0]), c.max(p[0])));
        let target = if lo.is_infinite() && hi.is_infinite() {
            mn
        } else if lo.is_infinite() {
            mn
        } else if hi.is_infinite() {
            mx
        } else {
            0.5 * (lo + hi)
        };
        return axis_slack(target.clamp(mn, mx), lo, hi);
    }
    if points.len() == 1 {
        return point_slack(points[0], b);
    }
    lp_max_slack(points, b)
}

/// Whether the hull of `points` meets `b` with slack above `tol`. Cheap tests
/// first, the linear program only when they are inconclusive.
pub fn hull_meets_box(points: &[&[f64]], b: &OpenBox, tol: f64) -> bool {
    let d = b.dim();
    if d == 1 || points.len() == 1 {
        return max_slack(points, b) > tol;
    }
    // the bounding box of the hull gives an upper bound on the slack
    for (axis, &(lo, hi)) in b.axes().iter().enumerate() {
        let (mn, mx) =
            points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, c), p| (a.min(p[axis]), c.max(p[axis])));
        let target = if lo.is_infinite() || hi.is_infinite() {
            if lo.is_infinite() {
                mn
            } else {
                mx
            }
        } else {
            0.5 * (lo + hi)
        };
        if axis_slack(target.clamp(mn, mx), lo, hi) <= tol {
            return false;
        }
    }
    if points.iter().any(|p| point_slack(p, b) > tol) {
        return true;
    }
    lp_max_slack(points, b) > tol
}

/// Maximize `t` subject to `lo_i + t <= sum_j l_j p_j,i <= hi_i - t`,
/// `l >= 0`, `sum l = 1`.
///
/// Substituting `l_0 = 1 - sum_{j>0} l_j` and `t = t' - shift` puts the
/// problem in the form `max c.x, A x <= b, x >= 0` with `b >= 0`, so the
/// origin is a feasible starting basis.
fn lp_max_slack(points: &[&[f64]], b: &OpenBox) -> f64 {
    let k = points.len() - 1;
    let base = points[0];
    let finite: Vec<(usize, f64, f64)> = b
        .axes()
        .iter()
        .enumerate()
        .flat_map(|(i, &(lo, hi))| {
            let mut rows = Vec::new();
            if lo.is_finite() {
                rows.push((i, -1.0, lo));
            }
            if hi.is_finite() {
                rows.push((i, 1.0, hi));
            }
            rows
        })
        .collect();
    if finite.is_empty() {
        return f64::INFINITY;
    }
    let shift = 1.0
        + finite
            .iter()
            .map(|&(i, sign, bound)| if sign < 0.0 { bound - base[i] } else { base[i] - bound })
            .fold(0.0, f64::max);

    // variables: l_1..l_k, t'
    let nvars = k + 1;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for &(i, sign, bound) in &finite {
        // sign = -1: -(base_i + sum l_j (p_j,i - base_i)) + t' <= -lo + shift
        // sign = +1:  (base_i + sum l_j (p_j,i - base_i)) + t' <= hi + shift
        let mut row: Vec<f64> = (1..=k).map(|j| sign * (points[j][i] - base[i])).collect();
        row.push(1.0);
        rows.push(row);
        rhs.push(sign * (bound - base[i]) + shift);
    }
    let mut simplex_row = vec![1.0; k];
    simplex_row.push(0.0);
    rows.push(simplex_row);
    rhs.push(1.0);
    let mut objective = vec![0.0; nvars];
    objective[k] = 1.0;
    let best = simplex_max(&rows, &rhs, &objective);
    best - shift
}

/// Dense tableau simplex with Bland's rule for `max c.x, A x <= b, x >= 0`,
/// `b >= 0`. Returns the optimal value; the problems built here are bounded.
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> f64 {
    const EPS: f64 = 1e-12;
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i].max(0.0);
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    for _ in 0..10_000 {
        let Some(col) = (0..width - 1).find(|&j| t[m][j] < -EPS) else {
            break;
        };
        let mut pivot: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > EPS {
                let ratio = t[i][width - 1] / t[i][col];
                let better = match pivot {
                    None => true,
                    Some((r, best)) => ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[r]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = pivot else {
            return f64::INFINITY;
        };
        let p = t[row][col];
        for v in t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row && r[col].abs() > 0.0 {
                let f = r[col];
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        basis[row] = col;
    }
    t[m][width - 1]
}
