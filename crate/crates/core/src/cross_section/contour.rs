use alloc::vec::Vec;

use crate::geom::{self, Vec2};

use super::SectionError;

/// A closed polygon with a designated start vertex.
///
/// The anchor keeps vertex correspondence between sections: after
/// resampling, vertex 0 of every frame sits next to the outer end of its
/// midline.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedContour {
    vertices: Vec<Vec2>,
    anchor_index: usize,
}

impl ClosedContour {
    /// Wraps a vertex loop; the anchor is clamped into range.
    pub fn new(vertices: Vec<Vec2>, anchor_index: usize) -> Self {
        let anchor_index = if vertices.is_empty() { 0 } else { anchor_index.min(vertices.len() - 1) };
        Self { vertices, anchor_index }
    }

    /// Anchors on the vertex nearest `target`, lowest index on ties.
    pub fn with_anchor_near(vertices: Vec<Vec2>, target: Vec2) -> Self {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, v) in vertices.iter().enumerate() {
            let d = v.distance(target);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        Self::new(vertices, best)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn anchor_index(&self) -> usize {
        self.anchor_index
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        geom::signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        geom::perimeter(&self.vertices)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        geom::point_in_polygon(p, &self.vertices)
    }

    pub fn distance_to_boundary(&self, p: Vec2) -> f64 {
        geom::distance_to_boundary(p, &self.vertices)
    }

    /// Axis-aligned extents as (min, max).
    pub fn bounds(&self) -> (Vec2, Vec2) {
        self.vertices.iter().fold(
            (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), v| (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y))),
        )
    }

    /// `true` when no two edges touch except consecutive ones at their
    /// shared vertex.
    pub fn is_simple(&self) -> bool {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return false;
        }
        let boxes: Vec<(Vec2, Vec2)> = (0..n)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % n]);
                (Vec2::new(a.x.min(b.x), a.y.min(b.y)), Vec2::new(a.x.max(b.x), a.y.max(b.y)))
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (bi, bj) = (boxes[i], boxes[j]);
                if bi.1.x < bj.0.x || bj.1.x < bi.0.x || bi.1.y < bj.0.y || bj.1.y < bi.0.y {
                    continue;
                }
                let (a, b) = (v[i], v[(i + 1) % n]);
                let (c, d) = (v[j], v[(j + 1) % n]);
                if adjacent {
                    // Consecutive edges may only share their common vertex.
                    let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    if p == shared || q == shared || collinear_overlap(shared, p, q) {
                        return false;
                    }
                } else if segments_touch(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Same loop in counter-clockwise order, keeping the anchor vertex.
    pub fn to_ccw(&self) -> Self {
        if self.signed_area() >= 0.0 {
            return self.clone();
        }
        let n = self.vertices.len();
        let vertices: Vec<Vec2> = self.vertices.iter().rev().copied().collect();
        Self::new(vertices, n - 1 - self.anchor_index)
    }

    /// `k` vertices at uniform arc spacing, counter-clockwise, starting at the
    /// anchor vertex.
    pub fn resample(&self, k: usize) -> Result<Self, SectionError> {
        if k < 3 {
            return Err(SectionError::TooFewPoints(k));
        }
        let ccw = self.to_ccw();
        let n = ccw.vertices.len();
        let total = ccw.perimeter();
        if n < 2 || !(total > 0.0) {
            return Err(SectionError::DegenerateContour);
        }
        let ring: Vec<Vec2> = (0..n).map(|i| ccw.vertices[(ccw.anchor_index + i) % n]).collect();
        let step = total / k as f64;
        let mut out = Vec::with_capacity(k);
        out.push(ring[0]);
        let mut edge = 0;
        let mut edge_start = 0.0;
        let mut edge_len = ring[0].distance(ring[1 % n]);
        for i in 1..k {
            let target = step * i as f64;
            while edge_start + edge_len < target && edge + 1 < n {
                edge_start += edge_len;
                edge += 1;
                edge_len = ring[edge].distance(ring[(edge + 1) % n]);
            }
            let t = if edge_len > 0.0 { ((target - edge_start) / edge_len).clamp(0.0, 1.0) } else { 0.0 };
            out.push(ring[edge].lerp(ring[(edge + 1) % n], t));
        }
        Ok(Self::new(out, 0))
    }
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test.
fn segments_touch(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Edges `shared→p` and `shared→q` fold back onto each other.
fn collinear_overlap(shared: Vec2, p: Vec2, q: Vec2) -> bool {
    orient(shared, p, q) == 0.0 && (p - shared).dot(q - shared) > 0.0
}
