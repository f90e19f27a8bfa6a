use rand_chacha::ChaCha8Rng;

use super::{
    add, angle_between, distance, dot, norm, scale, sub, ConvexBody, DisplacementMap,
    IntrinsicDistance, MeanWidthMethod, Point,
};
use crate::error::{Error, Result};
use crate::numerics::{log_unit_ball_volume, log_unit_sphere_area};
use crate::rng::unit_vector;

/// Round ball of radius `r`; its boundary is the round sphere `Sⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereBody {
    center: Point,
    radius: f64,
}

impl SphereBody {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if center.len() < 2 {
            return Err(Error::domain("a sphere needs ambient dimension >= 2"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::domain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(SphereBody { center, radius })
    }

    /// Unit sphere `Sⁿ ⊂ ℝⁿ⁺¹` centred at the origin.
    pub fn unit(n: usize) -> Result<Self> {
        SphereBody::new(vec![0.0; n + 1], 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

impl ConvexBody for SphereBody {
    fn id(&self) -> String {
        format!("sphere_n{}", self.surface_dimension())
    }

    fn ambient_dimension(&self) -> usize {
        self.center.len()
    }

    fn support(&self, direction: &[f64]) -> f64 {
        dot(&self.center, direction) + self.radius * norm(direction)
    }

    fn boundary_area(&self) -> f64 {
        let n = self.surface_dimension() as u32;
        (log_unit_sphere_area(n) + n as f64 * self.radius.ln()).exp()
    }

    fn enclosed_volume(&self) -> f64 {
        let d = self.ambient_dimension() as u32;
        (log_unit_ball_volume(d) + d as f64 * self.radius.ln()).exp()
    }

    fn interior_point(&self) -> Point {
        self.center.clone()
    }

    fn surface_gap(&self, x: &[f64]) -> f64 {
        (distance(x, &self.center) - self.radius).abs()
    }

    fn intrinsic_distance_unchecked(&self, x: &[f64], y: &[f64]) -> IntrinsicDistance {
        let a = sub(x, &self.center);
        let b = sub(y, &self.center);
        IntrinsicDistance::exact(self.radius * angle_between(&a, &b))
    }

    fn sample_boundary(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
        (0..count)
            .map(|_| {
                add(
                    &self.center,
                    &scale(&unit_vector(rng, self.center.len()), self.radius),
                )
            })
            .collect()
    }

    fn ray_exit(&self, origin: &[f64], direction: &[f64]) -> f64 {
        // |o − c + t·u|² = r²
        let oc = sub(origin, &self.center);
        let a = dot(direction, direction);
        let b = dot(&oc, direction);
        let c = dot(&oc, &oc) - self.radius * self.radius;
        (-b + (b * b - a * c).max(0.0).sqrt()) / a
    }

    fn symmetry_center(&self) -> Option<Point> {
        Some(self.center.clone())
    }

    fn width_candidates(&self) -> Option<Vec<Point>> {
        let mut e = vec![0.0; self.center.len()];
        e[0] = 1.0;
        Some(vec![e])
    }

    fn critical_points(&self, _map: &DisplacementMap) -> Vec<Point> {
        (0..self.center.len())
            .map(|i| {
                let mut p = self.center.clone();
                p[i] += self.radius;
                p
            })
            .collect()
    }

    fn exact_mean_width(&self) -> Option<(f64, MeanWidthMethod)> {
        Some((2.0 * self.radius, MeanWidthMethod::Closed))
    }
}
