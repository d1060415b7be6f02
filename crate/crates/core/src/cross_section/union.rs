//! Union of disks by distance field and marching squares.
//!
//! The field `f(p) = min_i(|p - c_i| - r_i)` is sampled on a lattice aligned
//! to multiples of the cell size. Each disk only touches lattice points within
//! `r_i + 2·cell` of its centre; every point on an edge with a sign change is
//! inside that band, so the truncation never alters the sign pattern.
//! Crossings are placed exactly on the union boundary by walking each edge
//! through the disks that touch it. They are keyed by lattice edge,
//! which makes loop assembly exact and independent of floating-point
//! comparisons.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{signed_area, Vec2};
use crate::math;
use crate::midline::Midline;

use super::{ClosedContour, SectionError, ThicknessProfile};

/// Default cell size is the thinnest radius divided by this.
pub const DEFAULT_CELL_DIVISOR: f64 = 4.0;

const NONE: u32 = u32::MAX;

struct Field {
    origin_i: i64,
    origin_j: i64,
    nx: usize,
    ny: usize,
    cell: f64,
    values: Vec<f64>,
}

impl Field {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn point(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new((self.origin_i + i as i64) as f64 * self.cell, (self.origin_j + j as i64) as f64 * self.cell)
    }

    fn h_count(&self) -> usize {
        (self.nx - 1) * self.ny
    }

    /// Edge between (i, j) and (i + 1, j).
    fn h_edge(&self, i: usize, j: usize) -> usize {
        j * (self.nx - 1) + i
    }

    /// Edge between (i, j) and (i, j + 1).
    fn v_edge(&self, i: usize, j: usize) -> usize {
        self.h_count() + j * self.nx + i
    }

    fn edge_count(&self) -> usize {
        self.h_count() + self.nx * (self.ny - 1)
    }

    fn edge_endpoints(&self, e: usize) -> ((usize, usize), (usize, usize)) {
        if e < self.h_count() {
            let (j, i) = (e / (self.nx - 1), e % (self.nx - 1));
            ((i, j), (i + 1, j))
        } else {
            let e = e - self.h_count();
            let (j, i) = (e / self.nx, e % self.nx);
            ((i, j), (i, j + 1))
        }
    }

    /// Boundary point on a sign-changing edge.
    ///
    /// The union boundary consists of circular arcs, so the crossing is the
    /// exact exit point of the disk union when walking from the inside
    /// endpoint; linear interpolation of the field is only a fallback.
    fn crossing(&self, e: usize, disks: &Disks) -> Vec2 {
        let ((ia, ja), (ib, jb)) = self.edge_endpoints(e);
        let (mut fa, mut fb) = (self.at(ia, ja), self.at(ib, jb));
        let (mut a, mut b) = (self.point(ia, ja), self.point(ib, jb));
        if fa >= 0.0 {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
        let dir = b - a;
        let qa = dir.dot(dir);
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        disks.near(a.lerp(b, 0.5), |c, r| {
            let off = a - c;
            let qb = 2.0 * off.dot(dir);
            let qc = off.dot(off) - r * r;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let root = math::sqrt(disc);
                intervals.push(((-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)));
            }
        });
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut reach = 0.0f64;
        for &(lo, hi) in &intervals {
            if lo > reach {
                break;
            }
            reach = reach.max(hi);
        }
        let t = if reach > 0.0 && reach <= 1.0 {
            reach
        } else if fb.is_finite() {
            fa / (fa - fb)
        } else {
            0.0
        };
        a.lerp(b, t.clamp(0.0, 1.0))
    }
}

/// Disks bucketed on a coarse grid so that every disk touching a lattice
/// edge sits in the 3×3 buckets around the edge midpoint.
struct Disks<'a> {
    centers: &'a [Vec2],
    radii: &'a [f64],
    origin: Vec2,
    size: f64,
    nx: usize,
    ny: usize,
    starts: Vec<usize>,
    members: Vec<u32>,
}

impl<'a> Disks<'a> {
    fn new(centers: &'a [Vec2], radii: &'a [f64], cell: f64) -> Self {
        let size = radii.iter().copied().fold(0.0, f64::max) + cell;
        let (mut lo, mut hi) =
            (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for c in centers {
            lo = Vec2::new(lo.x.min(c.x), lo.y.min(c.y));
            hi = Vec2::new(hi.x.max(c.x), hi.y.max(c.y));
        }
        let nx = math::floor((hi.x - lo.x) / size) as usize + 1;
        let ny = math::floor((hi.y - lo.y) / size) as usize + 1;
        let mut disks =
            Self { centers, radii, origin: lo, size, nx, ny, starts: vec![0; nx * ny + 1], members: Vec::new() };
        let keys: Vec<usize> = centers.iter().map(|c| disks.bucket(*c)).collect();
        for &k in &keys {
            disks.starts[k + 1] += 1;
        }
        for k in 0..nx * ny {
            disks.starts[k + 1] += disks.starts[k];
        }
        let mut fill = disks.starts.clone();
        disks.members = vec![0; centers.len()];
        for (i, &k) in keys.iter().enumerate() {
            disks.members[fill[k]] = i as u32;
            fill[k] += 1;
        }
        disks
    }

    fn cell_of(&self, p: Vec2) -> (i64, i64) {
        (math::floor((p.x - self.origin.x) / self.size) as i64, math::floor((p.y - self.origin.y) / self.size) as i64)
    }

    fn bucket(&self, p: Vec2) -> usize {
        let (i, j) = self.cell_of(p);
        j as usize * self.nx + i as usize
    }

    fn near(&self, p: Vec2, mut f: impl FnMut(Vec2, f64)) {
        let (ci, cj) = self.cell_of(p);
        for j in cj - 1..=cj + 1 {
            for i in ci - 1..=ci + 1 {
                if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
                    continue;
                }
                let k = j as usize * self.nx + i as usize;
                for &m in &self.members[self.starts[k]..self.starts[k + 1]] {
                    f(self.centers[m as usize], self.radii[m as usize]);
                }
            }
        }
    }
}

fn sample_field(centers: &[Vec2], radii: &[f64], cell: f64) -> Field {
    let band = 2.0 * cell;
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for (c, &r) in centers.iter().zip(radii) {
        lo = Vec2::new(lo.x.min(c.x - r), lo.y.min(c.y - r));
        hi = Vec2::new(hi.x.max(c.x + r), hi.y.max(c.y + r));
    }
    let origin_i = math::floor(lo.x / cell) as i64 - 2;
    let origin_j = math::floor(lo.y / cell) as i64 - 2;
    let nx = (math::ceil(hi.x / cell) as i64 + 2 - origin_i + 1) as usize;
    let ny = (math::ceil(hi.y / cell) as i64 + 2 - origin_j + 1) as usize;
    let mut field = Field { origin_i, origin_j, nx, ny, cell, values: vec![f64::INFINITY; nx * ny] };
    for (c, &r) in centers.iter().zip(radii) {
        let reach = r + band;
        let i_lo = (math::ceil((c.x - reach) / cell) as i64 - origin_i).max(0) as usize;
        let i_hi = ((math::floor((c.x + reach) / cell) as i64 - origin_i).max(0) as usize).min(nx - 1);
        let j_lo = (math::ceil((c.y - reach) / cell) as i64 - origin_j).max(0) as usize;
        let j_hi = ((math::floor((c.y + reach) / cell) as i64 - origin_j).max(0) as usize).min(ny - 1);
        for j in j_lo..=j_hi {
            for i in i_lo..=i_hi {
                let d = field.point(i, j).distance(*c) - r;
                let slot = &mut field.values[j * nx + i];
                if d < *slot {
                    *slot = d;
                }
            }
        }
    }
    field
}

/// Connects crossing edges inside each lattice cell.
fn edge_links(field: &Field) -> Vec<[u32; 2]> {
    let mut links = vec![[NONE; 2]; field.edge_count()];
    let mut link = |a: usize, b: usize| {
        for (from, to) in [(a, b), (b, a)] {
            let slot = &mut links[from];
            if slot[0] == NONE {
                slot[0] = to as u32;
            } else {
                slot[1] = to as u32;
            }
        }
    };
    for j in 0..field.ny - 1 {
        for i in 0..field.nx - 1 {
            let v = [field.at(i, j), field.at(i + 1, j), field.at(i + 1, j + 1), field.at(i, j + 1)];
            let inside = v.map(|x| x < 0.0);
            let case = inside.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << k));
            if case == 0 || case == 15 {
                continue;
            }
            let bottom = field.h_edge(i, j);
            let right = field.v_edge(i + 1, j);
            let top = field.h_edge(i, j + 1);
            let left = field.v_edge(i, j);
            match case {
                5 | 10 => {
                    // Saddle: the cell centre decides whether the inside corners connect.
                    let center_inside = (v[0] + v[1] + v[2] + v[3]) * 0.25 < 0.0;
                    let around_corner_10_and_01 = (case == 5) == center_inside;
                    if around_corner_10_and_01 {
                        link(bottom, right);
                        link(top, left);
                    } else {
                        link(left, bottom);
                        link(right, top);
                    }
                }
                _ => {
                    let mut crossing = [0usize; 2];
                    let mut n = 0;
                    for (edge, (a, b)) in [(bottom, (0, 1)), (right, (1, 2)), (top, (2, 3)), (left, (3, 0))] {
                        if inside[a] != inside[b] {
                            crossing[n] = edge;
                            n += 1;
                        }
                    }
                    debug_assert_eq!(n, 2);
                    link(crossing[0], crossing[1]);
                }
            }
        }
    }
    links
}

fn assemble_loops(field: &Field, links: &[[u32; 2]], disks: &Disks) -> Vec<Vec<Vec2>> {
    let mut visited = vec![false; links.len()];
    let mut loops = Vec::new();
    for start in 0..links.len() {
        if visited[start] || links[start][0] == NONE {
            continue;
        }
        let mut ring = Vec::new();
        let mut prev = NONE;
        let mut cur = start as u32;
        loop {
            visited[cur as usize] = true;
            ring.push(field.crossing(cur as usize, disks));
            let [a, b] = links[cur as usize];
            let next = if a != prev { a } else { b };
            prev = cur;
            cur = next;
            if cur == start as u32 || cur == NONE || visited[cur as usize] {
                break;
            }
        }
        ring.dedup();
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        if ring.len() >= 3 {
            loops.push(ring);
        }
    }
    loops
}

/// Outer boundary of the union of disks centred on the midline samples.
///
/// The returned contour is counter-clockwise with its anchor on the vertex
/// nearest the midline's first sample.
pub fn union_of_circles(m: &Midline, t: &ThicknessProfile, cell: f64) -> Result<ClosedContour, SectionError> {
    if m.is_empty() {
        return Err(SectionError::EmptyMidline);
    }
    if t.radii().len() != m.len() {
        return Err(SectionError::LengthMismatch { radii: t.radii().len(), samples: m.len() });
    }
    let min_radius = t.min();
    let limit = 0.5 * min_radius;
    if !(cell.is_finite() && cell > 0.0 && cell <= limit) {
        return Err(SectionError::CellTooCoarse { cell, min_radius, limit });
    }
    let field = sample_field(m.samples(), t.radii(), cell);
    let links = edge_links(&field);
    let disks = Disks::new(m.samples(), t.radii(), cell);
    let loops = assemble_loops(&field, &links, &disks);
    let mut outer = loops
        .into_iter()
        .map(|ring| (signed_area(&ring).abs(), ring))
        .fold(None::<(f64, Vec<Vec2>)>, |best, cand| match best {
            Some(b) if b.0 >= cand.0 => Some(b),
            _ => Some(cand),
        })
        .map(|(_, ring)| ring)
        .ok_or(SectionError::NoContour)?;
    if signed_area(&outer) < 0.0 {
        outer.reverse();
    }
    Ok(ClosedContour::with_anchor_near(outer, m.samples()[0]))
}
