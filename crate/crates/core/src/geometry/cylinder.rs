use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    angle_between, dot, golden_section, norm, uniform_in_ball, ConvexBody, DisplacementMap,
    IntrinsicDistance, Point,
};
use crate::error::{Error, Result};
use crate::numerics::log_unit_ball_volume;
use crate::rng::unit_vector;

/// Right circular cylinder `Bⁿ(r) × [−h/2, h/2] ⊂ ℝⁿ⁺¹`, axis along the last
/// coordinate and centred at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderBody {
    n: usize,
    radius: f64,
    height: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Region {
    Top,
    Bottom,
    Side,
}

/// A boundary point seen in the plane spanned by the radial parts of a pair
/// of points: polar angle, radial distance and height.
#[derive(Clone, Copy, Debug)]
struct Flat {
    angle: f64,
    radial: f64,
    z: f64,
}

impl CylinderBody {
    pub fn new(n: usize, radius: f64, height: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("cylinder surface dimension must be >= 1"));
        }
        if !(radius > 0.0 && height > 0.0) || !(radius.is_finite() && height.is_finite()) {
            return Err(Error::domain(format!(
                "cylinder needs positive radius and height, got r={radius}, h={height}"
            )));
        }
        Ok(CylinderBody { n, radius, height })
    }

    /// The cylinder of height `1/ρ` and radius `(ρ−1)/(2ρ)` whose cap centres are
    /// at intrinsic distance 1 and extrinsic distance `1/ρ`.
    pub fn with_ratio(n: usize, rho: f64) -> Result<Self> {
        if !(rho > 1.0) {
            return Err(Error::domain(format!("rho must be > 1, got {rho}")));
        }
        CylinderBody::new(n, (rho - 1.0) / (2.0 * rho), 1.0 / rho)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Centre of the top (`+`) or bottom (`−`) cap.
    pub fn cap_center(&self, top: bool) -> Point {
        let mut p = vec![0.0; self.n + 1];
        p[self.n] = if top { 0.5 } else { -0.5 } * self.height;
        p
    }

    fn radial<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[..self.n]
    }

    fn region(&self, x: &[f64]) -> Region {
        let z = x[self.n];
        let half = 0.5 * self.height;
        if (z - half).abs() <= 1e-12 * half.max(1.0) {
            Region::Top
        } else if (z + half).abs() <= 1e-12 * half.max(1.0) {
            Region::Bottom
        } else {
            Region::Side
        }
    }

    fn lateral(&self, a: Flat, b: Flat) -> f64 {
        let mut dtheta = (a.angle - b.angle).abs() % (2.0 * PI);
        if dtheta > PI {
            dtheta = 2.0 * PI - dtheta;
        }
        (self.radius * dtheta).hypot(a.z - b.z)
    }

    fn rim(&self, angle: f64, top: bool) -> Flat {
        Flat {
            angle,
            radial: self.radius,
            z: if top { 0.5 } else { -0.5 } * self.height,
        }
    }

    fn in_cap(a: Flat, b: Flat) -> f64 {
        let (ax, ay) = (a.radial * a.angle.cos(), a.radial * a.angle.sin());
        let (bx, by) = (b.radial * b.angle.cos(), b.radial * b.angle.sin());
        (ax - bx).hypot(ay - by)
    }

    /// Best route `a → rim(top) → lateral → b` over the rim angle.
    fn via_rim(&self, a: Flat, b: Flat, top: bool) -> f64 {
        let f = |t: f64| Self::in_cap(a, self.rim(t, top)) + self.lateral(self.rim(t, top), b);
        minimize_angle(f, &[a.angle, b.angle])
    }

    /// Best route `a → rim(top1) → lateral → rim(top2) → b` over both rim angles.
    fn via_two_rims(&self, a: Flat, b: Flat, top_a: bool, top_b: bool) -> f64 {
        let f = |s: f64, t: f64| {
            Self::in_cap(a, self.rim(s, top_a))
                + self.lateral(self.rim(s, top_a), self.rim(t, top_b))
                + Self::in_cap(self.rim(t, top_b), b)
        };
        minimize_two_angles(f, &[a.angle, b.angle])
    }

    /// Route `a → lateral → rim → across cap → rim → lateral → b`.
    fn side_via_cap(&self, a: Flat, b: Flat, top: bool) -> f64 {
        let f = |s: f64, t: f64| {
            self.lateral(a, self.rim(s, top))
                + Self::in_cap(self.rim(s, top), self.rim(t, top))
                + self.lateral(self.rim(t, top), b)
        };
        minimize_two_angles(f, &[a.angle, b.angle])
    }

    fn flat_pair(&self, x: &[f64], y: &[f64]) -> (Flat, Flat) {
        let px = self.radial(x);
        let py = self.radial(y);
        let rx = norm(px);
        let ry = norm(py);
        let between = if rx > 1e-15 && ry > 1e-15 {
            angle_between(px, py)
        } else {
            0.0
        };
        (
            Flat {
                angle: 0.0,
                radial: rx,
                z: x[self.n],
            },
            Flat {
                angle: between,
                radial: ry,
                z: y[self.n],
            },
        )
    }
}

const ANGLE_GRID: usize = 36;

fn minimize_angle<F: Fn(f64) -> f64>(f: F, hints: &[f64]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    let mut starts: Vec<f64> = (0..ANGLE_GRID)
        .map(|i| -PI + 2.0 * PI * i as f64 / ANGLE_GRID as f64)
        .collect();
    starts.extend_from_slice(hints);
    for t in starts {
        let v = f(t);
        if v < best.0 {
            best = (v, t);
        }
    }
    let step = 2.0 * PI / ANGLE_GRID as f64;
    let (_, v) = golden_section(&f, best.1 - step, best.1 + step, 1e-12);
    v.min(best.0)
}

fn minimize_two_angles<F: Fn(f64, f64) -> f64>(f: F, hints: &[f64]) -> f64 {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut starts: Vec<f64> = (0..ANGLE_GRID)
        .map(|i| -PI + 2.0 * PI * i as f64 / ANGLE_GRID as f64)
        .collect();
    starts.extend_from_slice(hints);
    for &s in &starts {
        for &t in &starts {
            let v = f(s, t);
            if v < best.0 {
                best = (v, s, t);
            }
        }
    }
    let (mut value, mut s, mut t) = best;
    let mut width = 2.0 * PI / ANGLE_GRID as f64;
    for _ in 0..30 {
        let (ns, vs) = golden_section(|u| f(u, t), s - width, s + width, 1e-13);
        if vs <= value {
            s = ns;
            value = vs;
        }
        let (nt, vt) = golden_section(|u| f(s, u), t - width, t + width, 1e-13);
        if vt <= value {
            t = nt;
            value = vt;
        }
        width = (width * 0.7).max(1e-6);
    }
    value
}

impl ConvexBody for CylinderBody {
    fn id(&self) -> String {
        format!("cylinder_n{}", self.n)
    }

    fn ambient_dimension(&self) -> usize {
        self.n + 1
    }

    fn support(&self, direction: &[f64]) -> f64 {
        self.radius * norm(self.radial(direction)) + 0.5 * self.height * direction[self.n].abs()
    }

    fn boundary_area(&self) -> f64 {
        // two caps ωₙrⁿ plus the side σ_{n−1}r^{n−1}h with σ_{n−1} = nωₙ
        let n = self.n as f64;
        let omega = log_unit_ball_volume(self.n as u32).exp();
        2.0 * omega * self.radius.powf(n) + n * omega * self.radius.powf(n - 1.0) * self.height
    }

    fn enclosed_volume(&self) -> f64 {
        log_unit_ball_volume(self.n as u32).exp() * self.radius.powi(self.n as i32) * self.height
    }

    fn interior_point(&self) -> Point {
        vec![0.0; self.n + 1]
    }

    fn surface_gap(&self, x: &[f64]) -> f64 {
        let r = norm(self.radial(x));
        let z = x[self.n].abs();
        let half = 0.5 * self.height;
        let dr = r - self.radius;
        let dz = z - half;
        if dr <= 0.0 && dz <= 0.0 {
            (-dr).min(-dz)
        } else {
            dr.max(0.0).hypot(dz.max(0.0))
        }
    }

    fn intrinsic_distance_unchecked(&self, x: &[f64], y: &[f64]) -> IntrinsicDistance {
        let (a, b) = self.flat_pair(x, y);
        let value = match (self.region(x), self.region(y)) {
            (Region::Top, Region::Top) | (Region::Bottom, Region::Bottom) => Self::in_cap(a, b),
            (Region::Top, Region::Bottom) => self.via_two_rims(a, b, true, false),
            (Region::Bottom, Region::Top) => self.via_two_rims(a, b, false, true),
            (Region::Top, Region::Side) => self.via_rim(a, b, true),
            (Region::Bottom, Region::Side) => self.via_rim(a, b, false),
            (Region::Side, Region::Top) => self.via_rim(b, a, true),
            (Region::Side, Region::Bottom) => self.via_rim(b, a, false),
            (Region::Side, Region::Side) => self
                .lateral(a, b)
                .min(self.side_via_cap(a, b, true))
                .min(self.side_via_cap(a, b, false)),
        };
        IntrinsicDistance::exact(value)
    }

    fn sample_boundary(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
        let n = self.n as f64;
        let cap = self.radius / (2.0 * self.radius + n * self.height);
        (0..count)
            .map(|_| {
                let pick: f64 = rng.random();
                let (radial, z) = if pick < 2.0 * cap {
                    let top = pick < cap;
                    let p = uniform_in_ball(rng, self.n, self.radius);
                    (p, if top { 0.5 } else { -0.5 } * self.height)
                } else {
                    let dir = unit_vector(rng, self.n);
                    let z = (rng.random::<f64>() - 0.5) * self.height;
                    (dir.into_iter().map(|c| c * self.radius).collect(), z)
                };
                let mut p = radial;
                p.push(z);
                p
            })
            .collect()
    }

    fn ray_exit(&self, origin: &[f64], direction: &[f64]) -> f64 {
        let half = 0.5 * self.height;
        let dz = direction[self.n];
        let t_z = if dz > 0.0 {
            (half - origin[self.n]) / dz
        } else if dz < 0.0 {
            (-half - origin[self.n]) / dz
        } else {
            f64::INFINITY
        };
        let o = self.radial(origin);
        let u = self.radial(direction);
        let a = dot(u, u);
        let t_r = if a > 0.0 {
            let b = dot(o, u);
            let c = dot(o, o) - self.radius * self.radius;
            (-b + (b * b - a * c).max(0.0).sqrt()) / a
        } else {
            f64::INFINITY
        };
        t_z.min(t_r)
    }

    fn symmetry_center(&self) -> Option<Point> {
        Some(vec![0.0; self.n + 1])
    }

    fn width_candidates(&self) -> Option<Vec<Point>> {
        let mut axis = vec![0.0; self.n + 1];
        axis[self.n] = 1.0;
        let mut across = vec![0.0; self.n + 1];
        across[0] = 1.0;
        Some(vec![axis, across])
    }

    fn critical_points(&self, _map: &DisplacementMap) -> Vec<Point> {
        let mut pts = vec![self.cap_center(true), self.cap_center(false)];
        for top in [true, false] {
            let mut rim = self.cap_center(top);
            rim[0] = self.radius;
            pts.push(rim);
        }
        let mut equator = vec![0.0; self.n + 1];
        equator[0] = self.radius;
        pts.push(equator);
        pts
    }
}
