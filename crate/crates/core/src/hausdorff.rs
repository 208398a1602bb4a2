//! Hausdorff distance between polylines, segment to segment.
//!
//! Edges of `A` are bisected until an upper bound for `d(p) = dist(p, B)` on
//! the piece no longer beats the best value found. Two bounds are used:
//! `d` is 1-Lipschitz, giving `(d(u) + d(v) + |uv|) / 2`, and the distance to
//! any single edge `e` of `B` is convex along a line, giving
//! `max(dist(u, e), dist(v, e))` for the edges nearest to `u` and `v`.
//! Nearest distances to `B` go through a uniform grid of its edges.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{ceil, hypot, sqrt};

pub type Point2 = [f64; 2];

/// Relative resolution of the branch-and-bound maximum.
const REL_TOL: f64 = 1e-10;

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy))
}

struct Grid<'a> {
    pts: &'a [Point2],
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    /// Edge indices per cell; edge `i` joins `pts[i]` and `pts[i + 1]`
    /// (a lone point is edge 0 with both ends equal).
    cells: Vec<Vec<u32>>,
}

impl<'a> Grid<'a> {
    fn new(pts: &'a [Point2]) -> Self {
        let mut lo = pts[0];
        let mut hi = pts[0];
        for p in pts {
            lo = [lo[0].min(p[0]), lo[1].min(p[1])];
            hi = [hi[0].max(p[0]), hi[1].max(p[1])];
        }
        let edges = pts.len().saturating_sub(1).max(1);
        let (w, h) = (hi[0] - lo[0], hi[1] - lo[1]);
        let length: f64 = pts.windows(2).map(|e| hypot(e[1][0] - e[0][0], e[1][1] - e[0][1])).sum();
        // a couple of edges per cell, and at most ~4 cells per edge overall
        let mut cell = (2.0 * length / edges as f64).max(sqrt(w * h / (4.0 * edges as f64)));
        if !(cell > 0.0) {
            cell = 1.0;
        }
        let nx = (ceil(w / cell) as usize).max(1);
        let ny = (ceil(h / cell) as usize).max(1);
        let mut grid = Self { pts, origin: lo, cell, nx, ny, cells: vec![Vec::new(); nx * ny] };
        for i in 0..edges {
            let a = pts[i];
            let b = pts[(i + 1).min(pts.len() - 1)];
            let (i0, j0) = grid.index([a[0].min(b[0]), a[1].min(b[1])]);
            let (i1, j1) = grid.index([a[0].max(b[0]), a[1].max(b[1])]);
            for ix in i0..=i1 {
                for jy in j0..=j1 {
                    grid.cells[jy * nx + ix].push(i as u32);
                }
            }
        }
        grid
    }

    fn index(&self, p: Point2) -> (usize, usize) {
        let f = |v: f64, o: f64, n: usize| -> usize {
            let k = (v - o) / self.cell;
            if k <= 0.0 {
                0
            } else {
                (k as usize).min(n - 1)
            }
        };
        (f(p[0], self.origin[0], self.nx), f(p[1], self.origin[1], self.ny))
    }

    fn edge_distance(&self, p: Point2, i: usize) -> f64 {
        let a = self.pts[i];
        let b = self.pts[(i + 1).min(self.pts.len() - 1)];
        point_segment_distance(p, a, b)
    }

    /// Distance from `p` to the polyline, searching rings of cells outward.
    fn nearest(&self, p: Point2, seen: &mut [u32], stamp: u32) -> (f64, usize) {
        let (ci, cj) = self.index(p);
        let mut best = f64::INFINITY;
        let mut arg = 0;
        let max_ring = self.nx.max(self.ny);
        for k in 0..=max_ring {
            if k >= 1 && best <= (k - 1) as f64 * self.cell {
                break;
            }
            let (i0, i1) = (ci as isize - k as isize, ci as isize + k as isize);
            let (j0, j1) = (cj as isize - k as isize, cj as isize + k as isize);
            for ix in i0..=i1 {
                for jy in j0..=j1 {
                    let on_ring = ix == i0 || ix == i1 || jy == j0 || jy == j1;
                    if !on_ring || ix < 0 || jy < 0 || ix >= self.nx as isize || jy >= self.ny as isize {
                        continue;
                    }
                    for &e in &self.cells[jy as usize * self.nx + ix as usize] {
                        if seen[e as usize] == stamp {
                            continue;
                        }
                        seen[e as usize] = stamp;
                        let d = self.edge_distance(p, e as usize);
                        if d < best {
                            best = d;
                            arg = e as usize;
                        }
                    }
                }
            }
        }
        (best, arg)
    }
}

/// Directed distance `sup_{a in A} dist(a, B)`.
pub fn directed_hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "hausdorff needs non-empty polylines");
    let grid = Grid::new(b);
    let mut seen = vec![0u32; b.len().max(1)];
    let mut stamp = 0u32;
    let mut query = |p: Point2| {
        stamp = stamp.wrapping_add(1);
        if stamp == 0 {
            seen.iter_mut().for_each(|s| *s = 0);
            stamp = 1;
        }
        grid.nearest(p, &mut seen, stamp)
    };
    let scale = a.iter().chain(b).fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
    let abs_tol = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let d: Vec<(f64, usize)> = a.iter().map(|&p| query(p)).collect();
    let mut best = d.iter().map(|x| x.0).fold(0.0, f64::max);
    let mut stack: Vec<(Point2, Point2, (f64, usize), (f64, usize))> =
        a.windows(2).zip(d.windows(2)).map(|(p, q)| (p[0], p[1], q[0], q[1])).collect();
    while let Some((u, v, du, dv)) = stack.pop() {
        let len = hypot(v[0] - u[0], v[1] - u[1]);
        let lipschitz = 0.5 * (du.0 + dv.0 + len);
        let via = |e: usize| grid.edge_distance(u, e).max(grid.edge_distance(v, e));
        let bound = lipschitz.min(via(du.1)).min(via(dv.1));
        if bound <= best + (REL_TOL * best).max(abs_tol) {
            continue;
        }
        let m = [0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1])];
        if m == u || m == v {
            continue;
        }
        let dm = query(m);
        best = best.max(dm.0);
        stack.push((u, m, du, dm));
        stack.push((m, v, dm, dv));
    }
    best
}

/// Symmetric Hausdorff distance between two polylines as point sets.
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Vertex-only variant, for comparison with [`hausdorff`].
pub fn hausdorff_vertices(a: &[Point2], b: &[Point2]) -> f64 {
    let d = |p: &Point2, q: &Point2| hypot(p[0] - q[0], p[1] - q[1]);
    let dir = |x: &[Point2], y: &[Point2]| {
        x.iter().map(|p| y.iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    dir(a, b).max(dir(b, a))
}
