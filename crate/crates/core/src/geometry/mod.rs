//! Convex bodies, their boundary geometry and displacement maps.
//!
//! A body is a compact convex set `Ω ⊂ ℝⁿ⁺¹` with boundary hypersurface `M`.
//! Points are plain coordinate vectors. Intrinsic distances `d_M` are exact
//! for the analytic families and an upper bound for polytopes.

mod cylinder;
mod polygon;
mod polytope;
mod sphere;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{chunks, substream, unit_vector};

pub use cylinder::CylinderBody;
pub use polygon::PolygonBoundary;
pub use polytope::{Polytope3, DEFAULT_STEINER_POINTS};
pub use sphere::SphereBody;

pub type Point = Vec<f64>;

/// Tolerance for "this point lies on the boundary".
pub const SURFACE_TOLERANCE: f64 = 1e-9;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Point {
    a.iter().map(|x| x * s).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn normalize(a: &[f64]) -> Point {
    scale(a, 1.0 / norm(a))
}

pub(crate) fn cross(a: &[f64], b: &[f64]) -> Point {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Angle between two nonzero vectors, accurate for nearly parallel inputs.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let ua = normalize(a);
    let ub = normalize(b);
    let s = distance(&ua, &ub);
    let c = norm(&add(&ua, &ub));
    2.0 * s.atan2(c)
}

/// Whether an intrinsic distance is exact or only an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicDistance {
    pub value: f64,
    pub kind: DistanceKind,
}

impl IntrinsicDistance {
    pub fn exact(value: f64) -> Self {
        IntrinsicDistance {
            value,
            kind: DistanceKind::Exact,
        }
    }
}

/// What a compact convex body has to provide.
pub trait ConvexBody: Send + Sync + fmt::Debug {
    /// Stable identifier used in records.
    fn id(&self) -> String;

    /// `n + 1`, the dimension of the space containing the body.
    fn ambient_dimension(&self) -> usize;

    /// `n`, the dimension of the boundary.
    fn surface_dimension(&self) -> usize {
        self.ambient_dimension() - 1
    }

    /// Support function `h(u) = max_{x∈Ω} ⟨x, u⟩`.
    fn support(&self, direction: &[f64]) -> f64;

    /// `Area(M)`, the n-dimensional measure of the boundary.
    fn boundary_area(&self) -> f64;

    /// `Vol(Ω)`.
    fn enclosed_volume(&self) -> f64;

    /// A point in the interior.
    fn interior_point(&self) -> Point;

    /// Distance from `x` to the boundary surface, zero on the surface.
    fn surface_gap(&self, x: &[f64]) -> f64;

    /// Shortest path length within `M` between two boundary points.
    fn intrinsic_distance_unchecked(&self, x: &[f64], y: &[f64]) -> IntrinsicDistance;

    /// Uniform (area-weighted) boundary samples.
    fn sample_boundary(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point>;

    /// Largest `t` with `origin + t·direction` in the body, for interior `origin`.
    fn ray_exit(&self, origin: &[f64], direction: &[f64]) -> f64;

    /// Centre of central symmetry, if the body has one.
    fn symmetry_center(&self) -> Option<Point> {
        None
    }

    /// A finite direction set containing a minimiser of the width, if known.
    fn width_candidates(&self) -> Option<Vec<Point>> {
        None
    }

    /// Boundary points worth evaluating exactly for a given map (vertices,
    /// midpoints, cap centres, ...).
    fn critical_points(&self, _map: &DisplacementMap) -> Vec<Point> {
        Vec::new()
    }

    /// The point half the perimeter away, for closed curves.
    fn half_perimeter_image(&self, _x: &[f64]) -> Option<Point> {
        None
    }

    /// Closed-form mean width, if one is available.
    fn exact_mean_width(&self) -> Option<(f64, MeanWidthMethod)> {
        None
    }

    fn as_polygon(&self) -> Option<&PolygonBoundary> {
        None
    }

    fn as_polytope(&self) -> Option<&Polytope3> {
        None
    }
}

/// `d_M(x, y)` after checking that both points lie on the boundary.
pub fn intrinsic_distance(
    body: &dyn ConvexBody,
    x: &[f64],
    y: &[f64],
) -> Result<IntrinsicDistance> {
    for p in [x, y] {
        if p.len() != body.ambient_dimension() {
            return Err(Error::domain(format!(
                "point has {} coordinates, body lives in dimension {}",
                p.len(),
                body.ambient_dimension()
            )));
        }
        let gap = body.surface_gap(p);
        if !(gap <= SURFACE_TOLERANCE) {
            return Err(Error::domain(format!(
                "point {p:?} is {gap:e} off the surface"
            )));
        }
    }
    Ok(body.intrinsic_distance_unchecked(x, y))
}

/// Width `h(u) + h(−u)` for a unit direction.
pub fn width(body: &dyn ConvexBody, direction: &[f64]) -> Result<f64> {
    let len = norm(direction);
    if !(len > 0.0) || direction.len() != body.ambient_dimension() {
        return Err(Error::domain(
            "width needs a nonzero direction of matching dimension",
        ));
    }
    let u = scale(direction, 1.0 / len);
    Ok(body.support(&u) + body.support(&scale(&u, -1.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinWidth {
    pub value: f64,
    pub direction: Point,
    /// False when the value came from a sampled search and is only an upper bound.
    pub exact: bool,
}

/// Sampled directions in the generic minimum-width search.
pub const MIN_WIDTH_DIRECTIONS: usize = 20_000;
/// Local refinements after the sampled search.
pub const MIN_WIDTH_REFINEMENTS: usize = 50;

/// Minimum width. Uses the body's finite candidate set when it has one,
/// otherwise a sampled sphere search followed by local refinement.
pub fn min_width(body: &dyn ConvexBody, directions: usize, seed: u64) -> Result<MinWidth> {
    if let Some(candidates) = body.width_candidates() {
        return best_direction(body, candidates).map(|(value, direction)| MinWidth {
            value,
            direction,
            exact: true,
        });
    }
    sampled_min_width(body, directions, seed)
}

fn best_direction(body: &dyn ConvexBody, candidates: Vec<Point>) -> Result<(f64, Point)> {
    let mut best: Option<(f64, Point)> = None;
    for u in candidates {
        if norm(&u) < 1e-12 {
            continue;
        }
        let w = width(body, &u)?;
        if best.as_ref().is_none_or(|b| w < b.0) {
            best = Some((w, normalize(&u)));
        }
    }
    best.ok_or_else(|| Error::config("no usable width directions"))
}

/// Sampled minimum-width search; always reported as an upper bound.
pub fn sampled_min_width(body: &dyn ConvexBody, directions: usize, seed: u64) -> Result<MinWidth> {
    if directions == 0 {
        return Err(Error::config(
            "min-width search needs at least one direction",
        ));
    }
    let dim = body.ambient_dimension();
    let mut rng = substream(seed, "min_width", 0);
    let mut candidates: Vec<Point> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    candidates.extend((0..directions).map(|_| unit_vector(&mut rng, dim)));
    let widths: Vec<f64> = candidates
        .par_iter()
        .map(|u| body.support(u) + body.support(&scale(u, -1.0)))
        .collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| widths[a].total_cmp(&widths[b]).then(a.cmp(&b)));

    let refine = |start: &Point| -> (f64, Point) {
        let mut u = start.clone();
        let mut w = body.support(&u) + body.support(&scale(&u, -1.0));
        let mut step = 0.05;
        while step > 1e-10 {
            let mut improved = false;
            for axis in 0..dim {
                for sign in [1.0, -1.0] {
                    let mut v = u.clone();
                    v[axis] += sign * step;
                    let v = normalize(&v);
                    let wv = body.support(&v) + body.support(&scale(&v, -1.0));
                    if wv < w {
                        u = v;
                        w = wv;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (w, u)
    };
    let refined: Vec<(f64, Point)> = order
        .iter()
        .take(MIN_WIDTH_REFINEMENTS)
        .map(|&i| refine(&candidates[i]))
        .collect();
    let (value, direction) = refined
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one refinement");
    Ok(MinWidth {
        value,
        direction,
        exact: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanWidthMethod {
    MonteCarlo,
    PolytopeEdgeFormula,
    CroftonCurve,
    Closed,
}

impl std::str::FromStr for MeanWidthMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monte_carlo" => Ok(MeanWidthMethod::MonteCarlo),
            "polytope_edge_formula" => Ok(MeanWidthMethod::PolytopeEdgeFormula),
            "crofton_curve" => Ok(MeanWidthMethod::CroftonCurve),
            other => Err(Error::config(format!(
                "unknown mean-width method {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanWidth {
    pub value: f64,
    /// Zero for closed forms.
    pub std_error: f64,
    pub method: MeanWidthMethod,
    pub samples: usize,
}

/// Mean width `Ξ`: the average of `w(u)` over uniformly distributed unit `u`.
pub fn mean_width(
    body: &dyn ConvexBody,
    method: MeanWidthMethod,
    samples: usize,
    seed: u64,
) -> Result<MeanWidth> {
    match method {
        MeanWidthMethod::MonteCarlo => monte_carlo_mean_width(body, samples, seed),
        MeanWidthMethod::PolytopeEdgeFormula => body
            .as_polytope()
            .map(|p| MeanWidth {
                value: p.edge_formula_mean_width(),
                std_error: 0.0,
                method,
                samples: 0,
            })
            .ok_or_else(|| Error::config("the edge formula needs a polytope")),
        MeanWidthMethod::CroftonCurve => body
            .as_polygon()
            .map(|p| MeanWidth {
                value: p.perimeter() / PI,
                std_error: 0.0,
                method,
                samples: 0,
            })
            .ok_or_else(|| Error::config("the Crofton formula needs a closed plane curve")),
        MeanWidthMethod::Closed => body
            .exact_mean_width()
            .filter(|m| m.1 == MeanWidthMethod::Closed)
            .map(|(value, _)| MeanWidth {
                value,
                std_error: 0.0,
                method,
                samples: 0,
            })
            .ok_or_else(|| Error::config("no closed-form mean width for this body")),
    }
}

fn monte_carlo_mean_width(body: &dyn ConvexBody, samples: usize, seed: u64) -> Result<MeanWidth> {
    if samples < 2 {
        return Err(Error::config(
            "Monte Carlo mean width needs at least 2 samples",
        ));
    }
    let dim = body.ambient_dimension();
    let parts: Vec<(f64, f64)> = chunks(samples)
        .into_par_iter()
        .map(|(index, count)| {
            let mut rng = substream(seed, "mean_width", index);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let u = unit_vector(&mut rng, dim);
                let w = body.support(&u) + body.support(&scale(&u, -1.0));
                sum += w;
                sum_sq += w * w;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = parts
        .into_iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(MeanWidth {
        value: mean,
        std_error: (variance / n).sqrt(),
        method: MeanWidthMethod::MonteCarlo,
        samples,
    })
}

/// Boundary samples drawn in deterministic chunks.
pub fn sample_points(body: &dyn ConvexBody, samples: usize, seed: u64, label: &str) -> Vec<Point> {
    chunks(samples)
        .into_par_iter()
        .map(|(index, count)| body.sample_boundary(&mut substream(seed, label, index), count))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub type CustomMap = Arc<dyn Fn(&[f64]) -> Point + Send + Sync>;

/// A fixed-point-free self-map of the boundary.
#[derive(Clone)]
pub enum DisplacementMap {
    /// `x ↦` the other end of the chord through `x` and the interior point.
    CentralPoint(Point),
    /// `x ↦ 2c − x` for a centrally symmetric body with centre `c`.
    EuclideanAntipode,
    /// Closed curves: move half the perimeter along the curve.
    HalfPerimeter,
    Custom {
        id: String,
        map: CustomMap,
    },
}

impl fmt::Debug for DisplacementMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisplacementMap::CentralPoint(p) => write!(f, "CentralPoint({p:?})"),
            DisplacementMap::EuclideanAntipode => write!(f, "EuclideanAntipode"),
            DisplacementMap::HalfPerimeter => write!(f, "HalfPerimeter"),
            DisplacementMap::Custom { id, .. } => write!(f, "Custom({id})"),
        }
    }
}

impl DisplacementMap {
    /// The central-point map through the body's interior point.
    pub fn central(body: &dyn ConvexBody) -> Self {
        DisplacementMap::CentralPoint(body.interior_point())
    }

    pub fn id(&self) -> String {
        match self {
            DisplacementMap::CentralPoint(_) => "central_point".into(),
            DisplacementMap::EuclideanAntipode => "euclidean_antipode".into(),
            DisplacementMap::HalfPerimeter => "half_perimeter".into(),
            DisplacementMap::Custom { id, .. } => id.clone(),
        }
    }

    /// Whether the map is its own inverse.
    pub fn is_involution(&self) -> bool {
        !matches!(self, DisplacementMap::Custom { .. })
    }

    /// Checks that the map can act on this body.
    pub fn validate(&self, body: &dyn ConvexBody) -> Result<()> {
        match self {
            DisplacementMap::CentralPoint(p) => {
                if p.len() != body.ambient_dimension() {
                    return Err(Error::InvalidMap("centre has wrong dimension".into()));
                }
                let probe = body.ray_exit(p, &unit(body.ambient_dimension(), 0));
                if !(probe > SURFACE_TOLERANCE) {
                    return Err(Error::InvalidMap("centre is not an interior point".into()));
                }
                Ok(())
            }
            DisplacementMap::EuclideanAntipode => {
                body.symmetry_center().map(|_| ()).ok_or_else(|| {
                    Error::InvalidMap(format!("{} is not centrally symmetric", body.id()))
                })
            }
            DisplacementMap::HalfPerimeter => {
                if body.ambient_dimension() == 2 {
                    Ok(())
                } else {
                    Err(Error::InvalidMap(
                        "half-perimeter map needs a plane curve".into(),
                    ))
                }
            }
            DisplacementMap::Custom { .. } => Ok(()),
        }
    }

    pub fn apply(&self, body: &dyn ConvexBody, x: &[f64]) -> Result<Point> {
        match self {
            DisplacementMap::CentralPoint(p) => {
                let dir = sub(p, x);
                let len = norm(&dir);
                if !(len > 0.0) {
                    return Err(Error::InvalidMap(
                        "boundary point coincides with centre".into(),
                    ));
                }
                let u = scale(&dir, 1.0 / len);
                let t = body.ray_exit(p, &u);
                Ok(add(p, &scale(&u, t)))
            }
            DisplacementMap::EuclideanAntipode => {
                let c = body.symmetry_center().ok_or_else(|| {
                    Error::InvalidMap(format!("{} is not centrally symmetric", body.id()))
                })?;
                Ok(sub(&scale(&c, 2.0), x))
            }
            DisplacementMap::HalfPerimeter => body
                .half_perimeter_image(x)
                .ok_or_else(|| Error::InvalidMap("half-perimeter map needs a plane curve".into())),
            DisplacementMap::Custom { map, .. } => Ok(map(x)),
        }
    }
}

fn unit(dim: usize, axis: usize) -> Point {
    (0..dim)
        .map(|i| if i == axis { 1.0 } else { 0.0 })
        .collect()
}

/// Sampled estimates of `μ(α) = min d_M(x, α(x))` and
/// `ρ(α) = max d_M(x, α(x))/|α(x) − x|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDisplacementStats {
    /// Minimum over the evaluated points: never below the true `μ(α)`.
    pub mu_hat: f64,
    /// Maximum over the evaluated points: never above the true `ρ(α)` when
    /// distances are exact.
    pub rho_hat: f64,
    pub argmin_point: Point,
    pub argmax_point: Point,
    pub samples: usize,
    pub critical_points: usize,
    pub seed: u64,
    pub distance_kind: DistanceKind,
}

struct Evaluated {
    point: Point,
    intrinsic: f64,
    ratio: f64,
    kind: DistanceKind,
}

fn evaluate_point(body: &dyn ConvexBody, map: &DisplacementMap, x: &[f64]) -> Result<Evaluated> {
    let image = map.apply(body, x)?;
    let chord = distance(x, &image);
    if !(chord > 1e-12) {
        return Err(Error::InvalidMap(format!(
            "{} has a fixed point near {x:?}",
            map.id()
        )));
    }
    let d = body.intrinsic_distance_unchecked(x, &image);
    Ok(Evaluated {
        point: x.to_vec(),
        intrinsic: d.value,
        ratio: d.value / chord,
        kind: d.kind,
    })
}

/// Evaluates `d_M(x, α(x))` and `|α(x) − x|` over random boundary samples
/// plus the body's critical points.
pub fn displacement_stats(
    body: &dyn ConvexBody,
    map: &DisplacementMap,
    samples: usize,
    seed: u64,
) -> Result<MapDisplacementStats> {
    map.validate(body)?;
    let critical = body.critical_points(map);
    let mut points = critical.clone();
    points.extend(sample_points(body, samples, seed, "displacement"));
    if points.is_empty() {
        return Err(Error::config("no points to evaluate"));
    }
    let evaluated: Vec<Evaluated> = points
        .par_iter()
        .map(|x| evaluate_point(body, map, x))
        .collect::<Result<_>>()?;
    let mut min_i = 0;
    let mut max_i = 0;
    let mut kind = DistanceKind::Exact;
    for (i, e) in evaluated.iter().enumerate() {
        if e.intrinsic < evaluated[min_i].intrinsic {
            min_i = i;
        }
        if e.ratio > evaluated[max_i].ratio {
            max_i = i;
        }
        if e.kind == DistanceKind::UpperBound {
            kind = DistanceKind::UpperBound;
        }
    }
    Ok(MapDisplacementStats {
        mu_hat: evaluated[min_i].intrinsic,
        rho_hat: evaluated[max_i].ratio,
        argmin_point: evaluated[min_i].point.clone(),
        argmax_point: evaluated[max_i].point.clone(),
        samples,
        critical_points: critical.len(),
        seed,
        distance_kind: kind,
    })
}

/// Angular coverage of the chordal Gauss map `Ψ(x) = (α(x) − x)/|α(x) − x|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub grid_directions: usize,
    /// `(sample count, largest angle from a grid direction to the nearest Ψ value)`
    pub max_gap: Vec<(usize, f64)>,
}

impl CoverageReport {
    /// True when the largest gap never grows as samples increase and ends
    /// below where it started.
    pub fn shrinking(&self) -> bool {
        self.max_gap.windows(2).all(|w| w[1].1 <= w[0].1)
            && self.max_gap.first().map(|f| f.1) > self.max_gap.last().map(|l| l.1)
    }
}

/// Fibonacci points on S² or equally spaced angles on S¹.
pub fn direction_grid(dim: usize, count: usize) -> Vec<Point> {
    match dim {
        2 => (0..count)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = substream(0, "direction_grid", dim as u64);
            (0..count).map(|_| unit_vector(&mut rng, dim)).collect()
        }
    }
}

/// Coverage of a direction grid by `Ψ` for each sample count in `sample_counts`.
pub fn chordal_gauss_coverage(
    body: &dyn ConvexBody,
    map: &DisplacementMap,
    grid: &[Point],
    sample_counts: &[usize],
    seed: u64,
) -> Result<CoverageReport> {
    map.validate(body)?;
    let mut max_gap = Vec::with_capacity(sample_counts.len());
    for &count in sample_counts {
        let points = sample_points(body, count, seed, "coverage");
        let images: Vec<Point> = points
            .par_iter()
            .map(|x| {
                let y = map.apply(body, x)?;
                let d = sub(&y, x);
                let len = norm(&d);
                if !(len > 1e-12) {
                    return Err(Error::InvalidMap(format!("fixed point near {x:?}")));
                }
                Ok(scale(&d, 1.0 / len))
            })
            .collect::<Result<_>>()?;
        let gap = grid
            .par_iter()
            .map(|g| {
                images
                    .iter()
                    .map(|v| angle_between(g, v))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max);
        max_gap.push((count, gap));
    }
    Ok(CoverageReport {
        grid_directions: grid.len(),
        max_gap,
    })
}

/// Winding number of `Ψ` around a plane curve, sampled at `steps` points.
pub fn chordal_gauss_winding(
    polygon: &PolygonBoundary,
    map: &DisplacementMap,
    steps: usize,
) -> Result<i64> {
    let perimeter = polygon.perimeter();
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let mut first: Option<f64> = None;
    for i in 0..steps {
        let x = polygon.point_at(perimeter * i as f64 / steps as f64);
        let y = map.apply(polygon, &x)?;
        let angle = (y[1] - x[1]).atan2(y[0] - x[0]);
        if let Some(p) = prev {
            total += wrap_angle(angle - p);
        } else {
            first = Some(angle);
        }
        prev = Some(angle);
    }
    if let (Some(p), Some(f)) = (prev, first) {
        total += wrap_angle(f - p);
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a < -PI {
        a += 2.0 * PI;
    }
    a
}

/// Chord length along `ν` through the interior point.
pub fn chord_through_interior(body: &dyn ConvexBody, direction: &[f64]) -> f64 {
    let c = body.interior_point();
    let u = normalize(direction);
    body.ray_exit(&c, &u) + body.ray_exit(&c, &scale(&u, -1.0))
}

/// Uniform direction, exposed for callers that need seeded directions.
pub fn random_direction(seed: u64, label: &str, index: u64, dim: usize) -> Point {
    unit_vector(&mut substream(seed, label, index), dim)
}

/// Isoperimetric floor for the boundary area: `σₙ(Vol/ω_{n+1})^{n/(n+1)}`.
pub fn isoperimetric_area_floor(body: &dyn ConvexBody) -> f64 {
    use crate::numerics::{log_unit_ball_volume, log_unit_sphere_area};
    let n = body.surface_dimension() as u32;
    let nf = n as f64;
    (log_unit_sphere_area(n)
        + nf / (nf + 1.0) * (body.enclosed_volume().ln() - log_unit_ball_volume(n + 1)))
    .exp()
}

pub(crate) fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Point {
    let dir = unit_vector(rng, dim);
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    scale(&dir, r)
}

/// One-dimensional golden-section minimisation on `[a, b]`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
