use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use super::curve::{segment_distance, simpson_edge};
use crate::error::{Error, Result};
use crate::geom::{Aabb, DomainSpec, Point};

/// Neighbor offsets of the grid graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    /// 2-D, king moves.
    N8,
    /// 2-D, king and knight moves.
    N16,
    /// 3-D, axis moves.
    N6,
    /// 3-D, full unit cube.
    N26,
}

impl Stencil {
    pub fn default_for(dim: usize) -> Stencil {
        if dim == 3 {
            Stencil::N26
        } else {
            Stencil::N16
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Stencil::N8 | Stencil::N16 => 2,
            Stencil::N6 | Stencil::N26 => 3,
        }
    }

    pub fn offsets(&self) -> Vec<[i64; 3]> {
        let mut out = Vec::new();
        match self {
            Stencil::N8 | Stencil::N16 => {
                let r = if *self == Stencil::N16 { 2 } else { 1 };
                for i in -r..=r {
                    for j in -r..=r {
                        let king = i64::abs(i) <= 1 && i64::abs(j) <= 1;
                        let knight = (i * j).abs() == 2;
                        if (i, j) != (0, 0) && (king || knight) {
                            out.push([i, j, 0]);
                        }
                    }
                }
            }
            Stencil::N6 => {
                for k in 0..3 {
                    for s in [-1, 1] {
                        let mut o = [0; 3];
                        o[k] = s;
                        out.push(o);
                    }
                }
            }
            Stencil::N26 => {
                for i in -1..=1 {
                    for j in -1..=1 {
                        for k in -1..=1 {
                            if (i, j, k) != (0, 0, 0) {
                                out.push([i, j, k]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Stencil::N8 => 8,
            Stencil::N16 => 16,
            Stencil::N6 => 6,
            Stencil::N26 => 26,
        };
        write!(f, "{n}")
    }
}

impl FromStr for Stencil {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "8" => Ok(Stencil::N8),
            "16" => Ok(Stencil::N16),
            "6" => Ok(Stencil::N6),
            "26" => Ok(Stencil::N26),
            other => Err(Error::Parse(format!(
                "unknown stencil '{other}' (expected 8, 16, 6 or 26)"
            ))),
        }
    }
}

/// Grid parameters for `qh_distance`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    /// Search box. `None` picks a box around the query pair.
    pub bbox: Option<Aabb>,
    pub spacing: f64,
    /// `None` means the default stencil for the dimension.
    pub stencil: Option<Stencil>,
    /// Nodes with `d_D < margin * spacing` are inactive.
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            bbox: None,
            spacing: 1.0 / 64.0,
            stencil: None,
            margin: 4.0,
        }
    }
}

impl GridSpec {
    pub fn with_spacing(spacing: f64) -> Self {
        GridSpec {
            spacing,
            ..Default::default()
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid spacing must be positive, got {}",
                self.spacing
            )));
        }
        if !(self.margin >= 2.0 && self.margin.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid margin must be at least 2, got {}",
                self.margin
            )));
        }
        if let Some(s) = self.stencil {
            if s.dim() != dim {
                return Err(Error::InvalidArgument(format!(
                    "stencil {s} does not fit dimension {dim}"
                )));
            }
        }
        if let Some(b) = &self.bbox {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: b.dim(),
                });
            }
            if b.is_empty() || !(0..dim).all(|i| b.extent(i).is_finite()) {
                return Err(Error::InvalidArgument(
                    "grid box must be finite and non-empty".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn stencil_for(&self, dim: usize) -> Stencil {
        self.stencil.unwrap_or_else(|| Stencil::default_for(dim))
    }
}

/// Regular lattice `origin + h * ijk` covering a box.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    origin: [f64; 3],
    h: f64,
    n: [usize; 3],
    dim: usize,
}

impl Lattice {
    pub fn covering(bbox: &Aabb, h: f64) -> Result<Lattice> {
        let dim = bbox.dim();
        let mut origin = [0.0; 3];
        let mut n = [1usize; 3];
        let mut total: f64 = 1.0;
        for i in 0..dim {
            let lo = (bbox.min[i] / h).ceil() * h;
            let cnt = ((bbox.max[i] - lo) / h + 1e-9).floor() + 1.0;
            if !(cnt >= 1.0) {
                return Err(Error::InvalidArgument(
                    "grid box is thinner than one spacing".into(),
                ));
            }
            origin[i] = lo;
            n[i] = cnt as usize;
            total *= cnt;
        }
        if total > 6.0e7 {
            return Err(Error::GridTooLarge(total));
        }
        Ok(Lattice { origin, h, n, dim })
    }

    pub fn size(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    #[inline]
    fn index(&self, ijk: [i64; 3]) -> Option<usize> {
        let mut idx = 0usize;
        for k in (0..3).rev() {
            if ijk[k] < 0 || ijk[k] as usize >= self.n[k] {
                return None;
            }
            idx = idx * self.n[k] + ijk[k] as usize;
        }
        Some(idx)
    }

    #[inline]
    fn ijk(&self, mut idx: usize) -> [i64; 3] {
        let mut out = [0i64; 3];
        for (o, &n) in out.iter_mut().zip(&self.n) {
            *o = (idx % n) as i64;
            idx /= n;
        }
        out
    }

    #[inline]
    fn point(&self, ijk: [i64; 3]) -> Point {
        let mut p = Point::zeros(self.dim);
        for (k, &i) in ijk.iter().enumerate().take(self.dim) {
            p = p.with(k, self.origin[k] + self.h * i as f64);
        }
        p
    }

    /// Index ranges of nodes within the axis-aligned cube `[lo, hi]`.
    fn range(&self, lo: &Point, hi: &Point) -> [(i64, i64); 3] {
        let mut r = [(0i64, 0i64); 3];
        for k in 0..self.dim {
            let a = ((lo[k] - self.origin[k]) / self.h).ceil().max(0.0) as i64;
            let b = ((hi[k] - self.origin[k]) / self.h)
                .floor()
                .min(self.n[k] as f64 - 1.0) as i64;
            r[k] = (a, b);
        }
        r
    }

    fn for_each_in(&self, lo: &Point, hi: &Point, mut f: impl FnMut([i64; 3])) {
        let r = self.range(lo, hi);
        for k in r[2].0..=r[2].1 {
            for j in r[1].0..=r[1].1 {
                for i in r[0].0..=r[0].1 {
                    f([i, j, k]);
                }
            }
        }
    }

    /// Marks every node within `radius` of the polyline.
    pub fn band(&self, pts: &[Point], radius: f64) -> Vec<bool> {
        let mut mask = vec![false; self.size()];
        for w in pts.windows(2) {
            let lo = Aabb::around(&[w[0], w[1]]).padded(radius);
            self.for_each_in(&lo.min, &lo.max, |ijk| {
                let idx = self.index(ijk).unwrap();
                if !mask[idx] && segment_distance(&self.point(ijk), &w[0], &w[1]) <= radius {
                    mask[idx] = true;
                }
            });
        }
        mask
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    // Min-heap on cost, ties broken by the smaller node index.
    fn cmp(&self, o: &Self) -> Ordering {
        o.cost
            .total_cmp(&self.cost)
            .then_with(|| o.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

const NONE: u32 = u32::MAX;

/// Label-setting shortest path between `a` and `b` through active lattice nodes.
/// Returns the vertex sequence `a, nodes..., b`.
pub(crate) fn shortest_path(
    domain: &DomainSpec,
    a: &Point,
    b: &Point,
    lat: &Lattice,
    stencil: Stencil,
    min_depth: f64,
    band: Option<&[bool]>,
) -> Result<Vec<Point>> {
    let n = lat.size();
    if n >= (NONE - 2) as usize {
        return Err(Error::GridTooLarge(n as f64));
    }
    let src = n as u32;
    let tgt = n as u32 + 1;
    let mut depth = vec![f64::NAN; n];
    let mut dist = vec![f64::INFINITY; n + 2];
    let mut pred = vec![NONE; n + 2];
    let mut done = vec![false; n + 2];
    let offsets = stencil.offsets();

    let depth_at = |depth: &mut Vec<f64>, idx: usize, ijk: [i64; 3]| -> f64 {
        if depth[idx].is_nan() {
            let in_band = band.is_none_or(|m| m[idx]);
            depth[idx] = if in_band {
                let d = domain.depth(&lat.point(ijk));
                if d.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    d
                }
            } else {
                f64::NEG_INFINITY
            };
        }
        depth[idx]
    };
    let edge = |p: &Point, dp: f64, q: &Point, dq: f64| -> Option<f64> {
        let dm = domain.depth(&p.midpoint(q));
        if !(dm > 0.0) {
            return None;
        }
        Some(simpson_edge(p.dist(q), dp, dm, dq))
    };

    let da = domain.depth(a);
    let db = domain.depth(b);
    let reach = 2.0 * lat.h * (1.0 + 1e-9);
    let mut heap = BinaryHeap::new();
    // Direct a-b edge when the points are close.
    if a.dist(b) <= reach {
        if let Some(w) = edge(a, da, b, db) {
            dist[tgt as usize] = w;
            pred[tgt as usize] = src;
            heap.push(Entry { cost: w, node: tgt });
        }
    }
    dist[src as usize] = 0.0;
    done[src as usize] = true;
    let mut target_links: Vec<(u32, f64)> = Vec::new();
    let cube = |c: &Point| {
        let b = Aabb::new(*c, *c).padded(reach);
        let mut nodes = Vec::new();
        lat.for_each_in(&b.min, &b.max, |ijk| nodes.push(ijk));
        nodes
    };
    let seeds = cube(a);
    for ijk in seeds {
        let idx = lat.index(ijk).unwrap();
        let p = lat.point(ijk);
        if p.dist(a) > reach {
            continue;
        }
        let d = depth_at(&mut depth, idx, ijk);
        if d < min_depth {
            continue;
        }
        if let Some(w) = edge(a, da, &p, d) {
            if w < dist[idx] {
                dist[idx] = w;
                pred[idx] = src;
                heap.push(Entry {
                    cost: w,
                    node: idx as u32,
                });
            }
        }
    }
    for ijk in cube(b) {
        let idx = lat.index(ijk).unwrap();
        let p = lat.point(ijk);
        if p.dist(b) > reach {
            continue;
        }
        let d = depth_at(&mut depth, idx, ijk);
        if d < min_depth {
            continue;
        }
        if let Some(w) = edge(&p, d, b, db) {
            target_links.push((idx as u32, w));
        }
    }
    target_links.sort_by_key(|t| t.0);
    let link_of = |idx: u32| -> Option<f64> {
        target_links
            .binary_search_by_key(&idx, |t| t.0)
            .ok()
            .map(|k| target_links[k].1)
    };

    while let Some(Entry { cost, node }) = heap.pop() {
        let u = node as usize;
        if done[u] || cost > dist[u] {
            continue;
        }
        done[u] = true;
        if node == tgt {
            break;
        }
        if let Some(w) = link_of(node) {
            let c = cost + w;
            if c < dist[tgt as usize] {
                dist[tgt as usize] = c;
                pred[tgt as usize] = node;
                heap.push(Entry { cost: c, node: tgt });
            }
        }
        let ijk = lat.ijk(u);
        let p = lat.point(ijk);
        let du = depth[u];
        for o in &offsets {
            let nb = [ijk[0] + o[0], ijk[1] + o[1], ijk[2] + o[2]];
            let Some(v) = lat.index(nb) else { continue };
            if done[v] {
                continue;
            }
            let dv = depth_at(&mut depth, v, nb);
            if dv < min_depth {
                continue;
            }
            let q = lat.point(nb);
            let Some(w) = edge(&p, du, &q, dv) else {
                continue;
            };
            let c = cost + w;
            if c < dist[v] {
                dist[v] = c;
                pred[v] = node;
                heap.push(Entry {
                    cost: c,
                    node: v as u32,
                });
            }
        }
    }

    if pred[tgt as usize] == NONE {
        return Err(Error::Disconnected);
    }
    let mut path = vec![*b];
    let mut cur = pred[tgt as usize];
    while cur != src {
        path.push(lat.point(lat.ijk(cur as usize)));
        cur = pred[cur as usize];
    }
    path.push(*a);
    path.reverse();
    Ok(path)
}
