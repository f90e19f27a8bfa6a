use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    distance, dot, ConvexBody, DisplacementMap, IntrinsicDistance, MeanWidthMethod, Point,
};
use crate::error::{Error, Result};

/// Boundary of a convex polygon, vertices in counter-clockwise order,
/// parametrised by arc length from the first vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonBoundary {
    vertices: Vec<[f64; 2]>,
    /// `offsets[i]` is the arc length at vertex `i`; the last entry is the perimeter.
    offsets: Vec<f64>,
    name: String,
}

impl PolygonBoundary {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        PolygonBoundary::named(vertices, "polygon")
    }

    pub fn named(vertices: Vec<[f64; 2]>, name: impl Into<String>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::domain("a polygon needs at least 3 vertices"));
        }
        for i in 0..k {
            let a = vertices[i];
            let b = vertices[(i + 1) % k];
            let c = vertices[(i + 2) % k];
            let turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if !(turn > 0.0) {
                return Err(Error::domain(
                    "polygon vertices must be in strictly convex counter-clockwise position",
                ));
            }
        }
        let mut offsets = Vec::with_capacity(k + 1);
        let mut s = 0.0;
        offsets.push(0.0);
        for i in 0..k {
            s += distance(&vertices[i], &vertices[(i + 1) % k]);
            offsets.push(s);
        }
        Ok(PolygonBoundary {
            vertices,
            offsets,
            name: name.into(),
        })
    }

    /// Equilateral triangle with the given side, centroid at the origin.
    pub fn equilateral_triangle(side: f64) -> Result<Self> {
        PolygonBoundary::regular(3, side).map(|p| PolygonBoundary {
            name: "triangle".into(),
            ..p
        })
    }

    /// Regular `k`-gon with the given side, centred at the origin.
    pub fn regular(k: usize, side: f64) -> Result<Self> {
        if !(side > 0.0) {
            return Err(Error::domain("side must be positive"));
        }
        if k < 3 {
            return Err(Error::domain("a polygon needs at least 3 vertices"));
        }
        let circumradius = side / (2.0 * (PI / k as f64).sin());
        let vertices = (0..k)
            .map(|i| {
                let t = PI / 2.0 + 2.0 * PI * i as f64 / k as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect();
        PolygonBoundary::named(vertices, format!("regular_{k}gon"))
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        *self.offsets.last().expect("nonempty")
    }

    pub fn enclosed_area(&self) -> f64 {
        let k = self.vertices.len();
        0.5 * (0..k)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % k];
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
    }

    pub fn centroid(&self) -> Point {
        let k = self.vertices.len();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..k {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % k];
            let w = a[0] * b[1] - a[1] * b[0];
            cx += (a[0] + b[0]) * w;
            cy += (a[1] + b[1]) * w;
        }
        let area6 = 6.0 * self.enclosed_area();
        vec![cx / area6, cy / area6]
    }

    fn edge(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        let k = self.vertices.len();
        (self.vertices[i % k], self.vertices[(i + 1) % k])
    }

    /// Boundary point at arc length `s` (taken modulo the perimeter).
    pub fn point_at(&self, s: f64) -> Point {
        let l = self.perimeter();
        let s = s.rem_euclid(l);
        let i = match self.offsets.binary_search_by(|o| o.total_cmp(&s)) {
            Ok(i) => i.min(self.vertices.len() - 1),
            Err(i) => i - 1,
        };
        let (a, b) = self.edge(i);
        let t = (s - self.offsets[i]) / (self.offsets[i + 1] - self.offsets[i]);
        vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    }

    /// Arc-length parameter of a boundary point.
    pub fn parameter_of(&self, x: &[f64]) -> Option<f64> {
        let mut best: Option<(f64, f64)> = None;
        for i in 0..self.vertices.len() {
            let (a, b) = self.edge(i);
            let d = [b[0] - a[0], b[1] - a[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            let t = (((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
            let foot = [a[0] + t * d[0], a[1] + t * d[1]];
            let gap = distance(&foot, x);
            if best.is_none_or(|b| gap < b.0) {
                best = Some((
                    gap,
                    self.offsets[i] + t * (self.offsets[i + 1] - self.offsets[i]),
                ));
            }
        }
        best.filter(|b| b.0 <= 1e-9).map(|b| b.1 % self.perimeter())
    }

    fn outward_normal(&self, i: usize) -> ([f64; 2], f64) {
        let (a, b) = self.edge(i);
        let d = [b[0] - a[0], b[1] - a[1]];
        let len = d[0].hypot(d[1]);
        let n = [d[1] / len, -d[0] / len];
        (n, n[0] * a[0] + n[1] * a[1])
    }

    /// Arc-length parameters where the chord to the half-perimeter point is
    /// shortest on each piece between breakpoints.
    fn half_perimeter_chord_minimisers(&self) -> Vec<f64> {
        let l = self.perimeter();
        let half = 0.5 * l;
        let mut breaks: Vec<f64> = self.offsets[..self.vertices.len()]
            .iter()
            .flat_map(|&o| [o, (o - half).rem_euclid(l)])
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let mut out = Vec::new();
        for w in 0..breaks.len() {
            let a = breaks[w];
            let b = if w + 1 < breaks.len() {
                breaks[w + 1]
            } else {
                breaks[0] + l
            };
            if b - a < 1e-14 {
                continue;
            }
            let mid = 0.5 * (a + b);
            let x0 = self.point_at(a);
            let y0 = self.point_at(a + half);
            let dx = direction_at(self, mid);
            let dy = direction_at(self, mid + half);
            // |(x0 − y0) + t(dx − dy)|² is quadratic in t
            let p = [x0[0] - y0[0], x0[1] - y0[1]];
            let q = [dx[0] - dy[0], dx[1] - dy[1]];
            let qq = q[0] * q[0] + q[1] * q[1];
            let t = if qq > 0.0 {
                (-(p[0] * q[0] + p[1] * q[1]) / qq).clamp(0.0, b - a)
            } else {
                0.0
            };
            out.push((a + t).rem_euclid(l));
        }
        out
    }
}

fn direction_at(p: &PolygonBoundary, s: f64) -> [f64; 2] {
    let l = p.perimeter();
    let s = s.rem_euclid(l);
    let i = match p.offsets.binary_search_by(|o| o.total_cmp(&s)) {
        Ok(i) => i.min(p.vertices.len() - 1),
        Err(i) => i - 1,
    };
    let (a, b) = p.edge(i);
    let len = distance(&a, &b);
    [(b[0] - a[0]) / len, (b[1] - a[1]) / len]
}

impl ConvexBody for PolygonBoundary {
    fn id(&self) -> String {
        self.name.clone()
    }

    fn ambient_dimension(&self) -> usize {
        2
    }

    fn support(&self, direction: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, direction))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn boundary_area(&self) -> f64 {
        self.perimeter()
    }

    fn enclosed_volume(&self) -> f64 {
        self.enclosed_area()
    }

    fn interior_point(&self) -> Point {
        self.centroid()
    }

    fn surface_gap(&self, x: &[f64]) -> f64 {
        (0..self.vertices.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                let d = [b[0] - a[0], b[1] - a[1]];
                let len2 = d[0] * d[0] + d[1] * d[1];
                let t = (((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
                distance(&[a[0] + t * d[0], a[1] + t * d[1]], x)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn intrinsic_distance_unchecked(&self, x: &[f64], y: &[f64]) -> IntrinsicDistance {
        let l = self.perimeter();
        let (Some(sx), Some(sy)) = (self.parameter_of(x), self.parameter_of(y)) else {
            return IntrinsicDistance::exact(f64::NAN);
        };
        let d = (sx - sy).abs();
        IntrinsicDistance::exact(d.min(l - d))
    }

    fn sample_boundary(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
        let l = self.perimeter();
        (0..count)
            .map(|_| self.point_at(rng.random::<f64>() * l))
            .collect()
    }

    fn ray_exit(&self, origin: &[f64], direction: &[f64]) -> f64 {
        (0..self.vertices.len())
            .filter_map(|i| {
                let (n, c) = self.outward_normal(i);
                let along = n[0] * direction[0] + n[1] * direction[1];
                (along > 0.0).then(|| (c - n[0] * origin[0] - n[1] * origin[1]) / along)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn symmetry_center(&self) -> Option<Point> {
        let c = self.centroid();
        let k = self.vertices.len();
        if !k.is_multiple_of(2) {
            return None;
        }
        let symmetric = (0..k).all(|i| {
            let v = self.vertices[i];
            let w = self.vertices[(i + k / 2) % k];
            (v[0] + w[0] - 2.0 * c[0]).abs() < 1e-12 && (v[1] + w[1] - 2.0 * c[1]).abs() < 1e-12
        });
        symmetric.then_some(c)
    }

    fn width_candidates(&self) -> Option<Vec<Point>> {
        Some(
            (0..self.vertices.len())
                .map(|i| self.outward_normal(i).0.to_vec())
                .collect(),
        )
    }

    fn critical_points(&self, map: &DisplacementMap) -> Vec<Point> {
        let mut params: Vec<f64> = Vec::new();
        for i in 0..self.vertices.len() {
            let a = self.offsets[i];
            let len = self.offsets[i + 1] - a;
            params.extend([a, a + 0.25 * len, a + 0.5 * len, a + 0.75 * len]);
        }
        if matches!(map, DisplacementMap::HalfPerimeter) {
            params.extend(self.half_perimeter_chord_minimisers());
        }
        params.into_iter().map(|s| self.point_at(s)).collect()
    }

    fn half_perimeter_image(&self, x: &[f64]) -> Option<Point> {
        self.parameter_of(x)
            .map(|s| self.point_at(s + 0.5 * self.perimeter()))
    }

    fn exact_mean_width(&self) -> Option<(f64, MeanWidthMethod)> {
        Some((self.perimeter() / PI, MeanWidthMethod::CroftonCurve))
    }

    fn as_polygon(&self) -> Option<&PolygonBoundary> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        chordal_gauss_winding, displacement_stats, mean_width, min_width, ConvexBody,
    };

    #[test]
    fn triangle_measures() {
        let t = PolygonBoundary::equilateral_triangle(2.0).unwrap();
        assert!((t.perimeter() - 6.0).abs() < 1e-14);
        assert!((t.enclosed_area() - 3f64.sqrt()).abs() < 1e-14);
        let c = t.centroid();
        assert!(c[0].abs() < 1e-15 && c[1].abs() < 1e-15);
        let w = min_width(&t, 10, 0).unwrap();
        assert!(w.exact);
        assert!((w.value - 3f64.sqrt()).abs() < 1e-14);
        assert!(t.symmetry_center().is_none());
    }

    #[test]
    fn half_perimeter_map_on_triangle() {
        let side = 1.0;
        let t = PolygonBoundary::equilateral_triangle(side).unwrap();
        let s = displacement_stats(&t, &DisplacementMap::HalfPerimeter, 1000, 9).unwrap();
        assert!((s.rho_hat - 2.0).abs() < 1e-12);
        assert!((s.mu_hat - 1.5 * side).abs() < 1e-12);
        // the maximising point sits a quarter side from a vertex
        let from_vertex = t
            .vertices()
            .iter()
            .map(|v| distance(v, &s.argmax_point))
            .fold(f64::INFINITY, f64::min);
        assert!((from_vertex - 0.25 * side).abs() < 1e-12);
    }

    #[test]
    fn central_map_vertex_ratio() {
        let t = PolygonBoundary::equilateral_triangle(1.0).unwrap();
        let map = DisplacementMap::central(&t);
        let v = t.vertices()[0].to_vec();
        let image = map.apply(&t, &v).unwrap();
        let d = t.intrinsic_distance_unchecked(&v, &image).value;
        let ratio = d / distance(&v, &image);
        assert!((ratio - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn arc_length_round_trip() {
        let h = PolygonBoundary::regular(6, 1.0).unwrap();
        assert!((h.perimeter() - 6.0).abs() < 1e-13);
        for s in [0.0, 0.3, 1.0, 2.5, 5.99] {
            let p = h.point_at(s);
            assert!((h.parameter_of(&p).unwrap() - s).abs() < 1e-12);
            assert!(h.surface_gap(&p) < 1e-14);
        }
        assert!(h.symmetry_center().is_some());
        let mw = mean_width(&h, MeanWidthMethod::CroftonCurve, 0, 0).unwrap();
        assert!((mw.value - 6.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn winding_of_central_map() {
        let t = PolygonBoundary::equilateral_triangle(1.0).unwrap();
        let w = chordal_gauss_winding(&t, &DisplacementMap::central(&t), 600).unwrap();
        assert_eq!(w, 1);
    }

    #[test]
    fn rejects_non_convex() {
        assert!(
            PolygonBoundary::new(vec![[0.0, 0.0], [1.0, 0.0], [0.2, 0.2], [0.0, 1.0]]).is_err()
        );
        assert!(PolygonBoundary::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(PolygonBoundary::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
    }
}
