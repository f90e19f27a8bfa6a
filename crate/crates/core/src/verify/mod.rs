//! Inequality checks on concrete bodies and maps.
//!
//! Every check evaluates both sides numerically and records which side an
//! approximation entered. Sampled `μ̂` is a minimum over finitely many points,
//! hence never below the true `μ(α)`; sampled `ρ̂` is a maximum, hence never
//! above the true `ρ(α)` when intrinsic distances are exact. A check that can
//! only be made weaker by an approximation is marked advisory.

mod record;
mod suite;

use std::f64::consts::PI;

use crate::constants::{
    area_constant, crossing_point, envelope, intrinsic_pair_bound, isoperimetric_bound,
    pal_constant, support_pair_bound, PalKind, CROSSING_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::geometry::{
    displacement_stats, dot, mean_width, min_width, norm, normalize, scale, sub, ConvexBody,
    DisplacementMap, DistanceKind, MapDisplacementStats, MeanWidthMethod, PolygonBoundary,
    Polytope3, MIN_WIDTH_DIRECTIONS,
};
use crate::numerics::log_unit_ball_volume;

pub use record::{
    audit_orientation, format_f64, read_csv, read_json_lines, sort_records, write_csv,
    write_json_lines, CheckId, Comparison, VerificationRecord, CSV_HEADER,
};
pub use suite::{
    run_bodies, run_suite, suite_bodies, SuiteConfig, SuiteFailure, SuiteReport, SuiteStatus,
    SuiteSummary,
};

/// Slack for non-strict closed-form comparisons, relative to `max(1, |lhs|)`.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-12;
/// Allowed relative gap `|L − πΞ|/L` in the Crofton check.
pub const CROFTON_RELATIVE_TOLERANCE: f64 = 0.005;

/// Sample floor for the Crofton estimator, so its standard error sits well
/// inside the fixed slack.
pub const CROFTON_MIN_SAMPLES: usize = 100_000;

const MU_NOTE: &str =
    "mu_hat is the minimum of d_M(x, a(x)) over the evaluated points, so mu_hat >= mu(a)";

/// Displacement statistics of one map on one body, shared by the map checks.
pub struct Evaluated<'a> {
    pub body: &'a dyn ConvexBody,
    pub map: &'a DisplacementMap,
    pub stats: MapDisplacementStats,
}

impl<'a> Evaluated<'a> {
    pub fn new(
        body: &'a dyn ConvexBody,
        map: &'a DisplacementMap,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let stats = displacement_stats(body, map, samples, seed)?;
        Ok(Evaluated { body, map, stats })
    }

    fn exact(&self) -> bool {
        self.stats.distance_kind == DistanceKind::Exact
    }

    fn record(&self, id: CheckId, lhs: f64, rhs: f64) -> VerificationRecord {
        VerificationRecord::new(
            id,
            self.body.id(),
            Some(self.map.id()),
            lhs,
            rhs,
            Comparison::Strict,
            0.0,
            self.stats.seed,
        )
        .param("n", self.body.surface_dimension())
        .param("samples", self.stats.samples)
        .param("critical_points", self.stats.critical_points)
        .param("mu_hat", self.stats.mu_hat)
        .param("rho_hat", self.stats.rho_hat)
        .param(
            "distance_kind",
            distance_kind_name(self.stats.distance_kind),
        )
    }

    fn rho_note(&self) -> &'static str {
        if self.exact() {
            "rho_hat is a maximum over evaluated points with exact d_M, so rho_hat <= rho(a)"
        } else {
            "rho_hat uses upper-bound d_M and may exceed rho(a), which would weaken the check"
        }
    }
}

fn distance_kind_name(kind: DistanceKind) -> &'static str {
    match kind {
        DistanceKind::Exact => "exact",
        DistanceKind::UpperBound => "upper_bound",
    }
}

fn surface_dimension(body: &dyn ConvexBody) -> Result<u32> {
    let n = body.surface_dimension();
    if n < 2 {
        return Err(Error::domain(format!(
            "{} has surface dimension {n}; this check needs n >= 2",
            body.id()
        )));
    }
    Ok(n as u32)
}

/// The volume constant actually used in dimension `d`: Bezdek's constant is
/// only available from `d = 3`, and Pál's is already sharp in the plane.
pub fn volume_constant_kind(d: u32, kind: PalKind) -> PalKind {
    if d < 3 {
        PalKind::PalFirey
    } else {
        kind
    }
}

fn power(base: f64, exponent: f64) -> f64 {
    (exponent * base.ln()).exp()
}

/// `Area(M) > hₙ μ(α)ⁿ`.
pub fn area_displacement(ev: &Evaluated, kind: PalKind) -> Result<VerificationRecord> {
    let n = surface_dimension(ev.body)?;
    let h = area_constant(n, kind)?;
    let rhs = (h.ln() + n as f64 * ev.stats.mu_hat.ln()).exp();
    Ok(ev
        .record(CheckId::AreaDisplacement, ev.body.boundary_area(), rhs)
        .param("kind", kind.as_str())
        .param("log_h_n", h.ln())
        .notes(format!(
            "{MU_NOTE}; rhs = h_n mu_hat^n is over-estimated, so the check is stronger than the statement; lhs is exact"
        )))
}

/// `Vol(Ω) > K_{n+1} μ^{n+1} / ρ^{n+1}`.
pub fn volume_displacement(ev: &Evaluated, kind: PalKind) -> Result<VerificationRecord> {
    let d = ev.body.ambient_dimension() as u32;
    let kind = volume_constant_kind(d, kind);
    let k = pal_constant(d, kind)?;
    let rhs = (k.ln() + d as f64 * (ev.stats.mu_hat / ev.stats.rho_hat).ln()).exp();
    Ok(ev
        .record(CheckId::VolumeDisplacement, ev.body.enclosed_volume(), rhs)
        .param("kind", kind.as_str())
        .advisory(!ev.exact())
        .notes(format!(
            "{MU_NOTE}; {}; rhs grows with mu and shrinks with rho, so both estimates strengthen the check only when d_M is exact",
            ev.rho_note()
        )))
}

/// `Area(M) > 𝓙ₙ(ρ) μⁿ`.
pub fn isoperimetric_area(ev: &Evaluated, kind: PalKind) -> Result<VerificationRecord> {
    let n = surface_dimension(ev.body)?;
    let rho = ev.stats.rho_hat.max(1.0);
    let j = isoperimetric_bound(n, rho, kind)?;
    let rhs = (j.ln() + n as f64 * ev.stats.mu_hat.ln()).exp();
    Ok(ev
        .record(CheckId::IsoperimetricArea, ev.body.boundary_area(), rhs)
        .param("kind", kind.as_str())
        .advisory(!ev.exact())
        .notes(format!(
            "{MU_NOTE}; {}; J_n decreases in rho, so rhs is over-estimated when d_M is exact",
            ev.rho_note()
        )))
}

/// `Area(M) > 𝓑ₙ(ρ) μⁿ`; counted only where `𝓑ₙ` is non-increasing (`ρ̂ ≤ ρₙ*`).
pub fn envelope_area(ev: &Evaluated, kind: PalKind) -> Result<VerificationRecord> {
    let n = surface_dimension(ev.body)?;
    let rho = ev.stats.rho_hat.max(1.0);
    let rho_star = crossing_point(n, kind, CROSSING_TOLERANCE)?.rho_star;
    let b = envelope(n, rho, kind)?;
    let rhs = (b.ln() + n as f64 * ev.stats.mu_hat.ln()).exp();
    let monotone = rho <= rho_star;
    let region = if monotone {
        "rho_hat <= rho_star where B_n = J_n is non-increasing, so an under-estimated rho over-estimates rhs"
    } else {
        "rho_hat > rho_star where B_n = I_n increases, so an under-estimated rho could under-estimate rhs: advisory"
    };
    Ok(ev
        .record(CheckId::EnvelopeArea, ev.body.boundary_area(), rhs)
        .param("kind", kind.as_str())
        .param("rho_star", rho_star)
        .advisory(!(ev.exact() && monotone))
        .notes(format!("{MU_NOTE}; {}; {region}", ev.rho_note())))
}

/// `Ξ(M) ≥ (2/π) μ(α)`, with equality for the round sphere.
pub fn mean_width_bound(ev: &Evaluated, samples: usize, seed: u64) -> Result<VerificationRecord> {
    let xi = match ev.body.exact_mean_width() {
        Some((_, method)) => mean_width(ev.body, method, 0, seed)?,
        None => mean_width(ev.body, MeanWidthMethod::MonteCarlo, samples, seed)?,
    };
    let rhs = 2.0 / PI * ev.stats.mu_hat;
    let tolerance = (3.0 * xi.std_error).max(CLOSED_FORM_TOLERANCE * xi.value.abs().max(1.0));
    let lhs_note = if xi.method == MeanWidthMethod::MonteCarlo {
        format!(
            "lhs is a Monte Carlo estimate over {} directions; slack is 3 standard errors",
            xi.samples
        )
    } else {
        "lhs is exact; slack is the closed-form floor".to_string()
    };
    let mut r = ev.record(CheckId::MeanWidth, xi.value, rhs);
    r.comparison = Comparison::AtLeast;
    r.tolerance = tolerance;
    r.pass = Comparison::AtLeast.passes(r.margin, tolerance);
    Ok(r.param("mean_width_method", format!("{:?}", xi.method))
        .param("mean_width_std_error", xi.std_error)
        .notes(format!(
            "{MU_NOTE}; rhs = (2/pi) mu_hat is over-estimated, a stronger check; {lhs_note}"
        )))
}

/// `ρ(α) > 1` for an involution.
pub fn involution_ratio(ev: &Evaluated) -> Result<VerificationRecord> {
    if !ev.map.is_involution() {
        return Err(Error::config(format!(
            "{} is not an involution",
            ev.map.id()
        )));
    }
    Ok(ev
        .record(CheckId::InvolutionRatio, ev.stats.rho_hat, 1.0)
        .advisory(!ev.exact())
        .notes(format!(
            "lhs: {}, so lhs > 1 implies rho(a) > 1",
            ev.rho_note()
        )))
}

/// Main inequality for one body and map.
pub fn check_main_theorem(
    body: &dyn ConvexBody,
    map: &DisplacementMap,
    kind: PalKind,
    samples: usize,
    seed: u64,
) -> Result<VerificationRecord> {
    area_displacement(&Evaluated::new(body, map, samples, seed)?, kind)
}

pub fn check_volume_bound(
    body: &dyn ConvexBody,
    map: &DisplacementMap,
    kind: PalKind,
    samples: usize,
    seed: u64,
) -> Result<VerificationRecord> {
    volume_displacement(&Evaluated::new(body, map, samples, seed)?, kind)
}

pub fn check_area_via_isoperimetric(
    body: &dyn ConvexBody,
    map: &DisplacementMap,
    kind: PalKind,
    samples: usize,
    seed: u64,
) -> Result<VerificationRecord> {
    isoperimetric_area(&Evaluated::new(body, map, samples, seed)?, kind)
}

pub fn check_mean_width(
    body: &dyn ConvexBody,
    map: &DisplacementMap,
    samples: usize,
    seed: u64,
) -> Result<VerificationRecord> {
    mean_width_bound(&Evaluated::new(body, map, samples, seed)?, samples, seed)
}

/// Whether the hyperplanes orthogonal to `y − x` through `x` and `y` both
/// support the body.
pub fn chord_ends_on_support_planes(body: &dyn ConvexBody, x: &[f64], y: &[f64]) -> bool {
    let u = normalize(&sub(y, x));
    let tol = 1e-9 * (1.0 + norm(x).max(norm(y)));
    body.support(&u) - dot(&u, y) <= tol && body.support(&scale(&u, -1.0)) + dot(&u, x) <= tol
}

/// `Area(M) > 𝓘ₙ(ρ) d_M(x,y)ⁿ` at `ρ = d_M(x,y)/|y−x|`, plus the sharper
/// support-plane variant when it applies.
pub fn check_point_pair_bound(
    body: &dyn ConvexBody,
    x: &[f64],
    y: &[f64],
    seed: u64,
) -> Result<Vec<VerificationRecord>> {
    let n = surface_dimension(body)?;
    let d = crate::geometry::intrinsic_distance(body, x, y)?;
    let chord = crate::geometry::distance(x, y);
    if !(chord > 0.0) || !(d.value > chord) {
        return Err(Error::domain(format!(
            "not applicable: d_M = {} does not exceed |y - x| = {chord}",
            d.value
        )));
    }
    let rho = d.value / chord;
    let exact = d.kind == DistanceKind::Exact;
    let area = body.boundary_area();
    let note = if exact {
        "d_M is exact, so rho and d_M^n are exact and only rounding enters rhs"
    } else {
        "d_M is an upper bound, which inflates both rho and d_M^n and so rhs: advisory"
    };
    let make = |id: CheckId, bound: f64| {
        VerificationRecord::new(
            id,
            body.id(),
            None,
            area,
            power(d.value, n as f64) * bound,
            Comparison::Strict,
            0.0,
            seed,
        )
        .param("n", n)
        .param("rho", rho)
        .param("d_m", d.value)
        .param("chord", chord)
        .param("distance_kind", distance_kind_name(d.kind))
        .param("x", format!("{x:?}"))
        .param("y", format!("{y:?}"))
        .advisory(!exact)
        .notes(note)
    };
    let mut out = vec![make(
        CheckId::PointPairArea,
        intrinsic_pair_bound(n, rho)?.to_f64_lossy(),
    )];
    if chord_ends_on_support_planes(body, x, y) {
        out.push(make(
            CheckId::SupportPairArea,
            support_pair_bound(n, rho)?.to_f64_lossy(),
        ));
    }
    Ok(out)
}

/// Volume of a cone of height 1 over a `(d−1)`-disc of radius `1/√3`, which
/// contains a unit segment in every direction, and of the ball of diameter 1.
pub fn cone_and_ball_volumes(d: u32) -> (f64, f64) {
    let df = d as f64;
    let cone = (log_unit_ball_volume(d - 1) - 0.5 * (df - 1.0) * 3f64.ln() - df.ln()).exp();
    let ball = (log_unit_ball_volume(d) - df * std::f64::consts::LN_2).exp();
    (cone, ball)
}

/// `Vol(Ω) ≥ K_d w̲(Ω)ᵈ`, with equality for the equilateral triangle.
pub fn check_pal_firey(
    body: &dyn ConvexBody,
    kind: PalKind,
    seed: u64,
) -> Result<VerificationRecord> {
    let d = body.ambient_dimension() as u32;
    let kind = volume_constant_kind(d, kind);
    let k = pal_constant(d, kind)?;
    let w = min_width(body, MIN_WIDTH_DIRECTIONS, seed)?;
    let lhs = body.enclosed_volume();
    let rhs = (k.ln() + d as f64 * w.value.ln()).exp();
    let (cone, ball) = cone_and_ball_volumes(d);
    let note = if w.exact {
        "min width is exact over the finite candidate directions; slack is the closed-form floor"
    } else {
        "min width is a sampled upper bound, which over-estimates rhs: a stronger check"
    };
    Ok(VerificationRecord::new(
        CheckId::MinWidthVolume,
        body.id(),
        None,
        lhs,
        rhs,
        Comparison::AtLeast,
        CLOSED_FORM_TOLERANCE * lhs.abs().max(1.0),
        seed,
    )
    .param("d", d)
    .param("kind", kind.as_str())
    .param("min_width", w.value)
    .param("min_width_exact", w.exact)
    .param("cone_volume_at_width", cone * power(w.value, d as f64))
    .param("ball_volume_at_width", ball * power(w.value, d as f64))
    .notes(note))
}

/// `Vol(Ω) ≥ L·Area(projection onto ν⊥)/3` for the chord of length `L`
/// along `ν` through the interior point.
pub fn check_chakerian(
    body: &Polytope3,
    direction: &[f64],
    index: usize,
    seed: u64,
) -> Result<VerificationRecord> {
    let u = normalize(direction);
    let chord = crate::geometry::chord_through_interior(body, &u);
    let projected = body.projected_area(&u);
    let lhs = body.enclosed_volume();
    Ok(VerificationRecord::new(
        CheckId::Chakerian,
        body.id(),
        None,
        lhs,
        chord * projected / 3.0,
        Comparison::AtLeast,
        CLOSED_FORM_TOLERANCE * lhs.abs().max(1.0),
        seed,
    )
    .param("direction_index", index)
    .param("direction", format!("{u:?}"))
    .param("chord", chord)
    .param("projected_area", projected)
    .notes(
        "volume, chord and projected area are exact for polytopes; slack is the closed-form floor",
    ))
}

/// `L = π Ξ` for a closed convex curve, with `Ξ` estimated by Monte Carlo.
pub fn check_crofton(
    polygon: &PolygonBoundary,
    samples: usize,
    seed: u64,
) -> Result<VerificationRecord> {
    let xi = mean_width(polygon, MeanWidthMethod::MonteCarlo, samples, seed)?;
    let perimeter = polygon.perimeter();
    Ok(VerificationRecord::new(
        CheckId::Crofton,
        polygon.id(),
        None,
        perimeter,
        PI * xi.value,
        Comparison::Equality,
        CROFTON_RELATIVE_TOLERANCE * perimeter,
        seed,
    )
    .param("samples", samples)
    .param("mean_width_std_error", xi.std_error)
    .notes("identity check: lhs exact, rhs a Monte Carlo estimate; slack is 0.5% of the perimeter"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CylinderBody, SphereBody};

    #[test]
    fn sphere_antipode_records() {
        let s = SphereBody::unit(2).unwrap();
        let map = DisplacementMap::EuclideanAntipode;
        let ev = Evaluated::new(&s, &map, 200, 1).unwrap();
        let main = area_displacement(&ev, PalKind::PalFirey).unwrap();
        let h2 = area_constant(2, PalKind::PalFirey).unwrap().to_f64_lossy();
        assert!((main.margin - (4.0 * PI - h2 * PI * PI)).abs() < 1e-12);
        assert!(main.pass && !main.advisory);

        let vol = volume_displacement(&ev, PalKind::PalFirey).unwrap();
        let k3 = 2.0 / (3f64.sqrt() * 6.0);
        assert!((vol.rhs - k3 * 8.0).abs() < 1e-12);
        assert!(vol.pass && !vol.advisory);

        let xi = mean_width_bound(&ev, 1000, 1).unwrap();
        assert!(xi.margin.abs() < 1e-12 && xi.pass);

        for r in [
            isoperimetric_area(&ev, PalKind::PalFirey).unwrap(),
            envelope_area(&ev, PalKind::PalFirey).unwrap(),
            involution_ratio(&ev).unwrap(),
        ] {
            assert!(r.pass && !r.advisory, "{r:?}");
        }
    }

    #[test]
    fn point_pairs() {
        let s = SphereBody::unit(2).unwrap();
        let r = check_point_pair_bound(&s, &[0.0, 0.0, 1.0], &[0.0, 0.0, -1.0], 0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].params["rho"].parse::<f64>().unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(r.iter().all(|r| r.pass && !r.advisory));

        let c = CylinderBody::with_ratio(3, 20.0).unwrap();
        let r = check_point_pair_bound(&c, &c.cap_center(true), &c.cap_center(false), 0).unwrap();
        assert_eq!(r[1].theorem_id, CheckId::SupportPairArea);
        assert!(r.iter().all(|r| r.pass));
        assert!(r[1].rhs > r[0].rhs);

        let near = [0.0, 0.6, 0.8];
        let e = check_point_pair_bound(&s, &[0.0, 0.0, 1.0], &near, 0);
        assert!(e.is_ok());
        let p = Polytope3::cube(1.0).unwrap();
        let e = check_point_pair_bound(&p, &[0.5, 0.0, 0.0], &[0.5, 0.1, 0.0], 0);
        assert!(matches!(e, Err(Error::Domain(_))));
        let r = check_point_pair_bound(&p, &[0.0, 0.0, 0.5], &[0.0, 0.0, -0.5], 0).unwrap();
        assert!(r.iter().all(|r| r.advisory));
    }

    #[test]
    fn triangle_equality_cases() {
        let t = PolygonBoundary::equilateral_triangle(1.0).unwrap();
        let pal = check_pal_firey(&t, PalKind::PalFirey, 0).unwrap();
        assert!(pal.margin.abs() < 1e-12 && pal.pass, "{pal:?}");
        let map = DisplacementMap::HalfPerimeter;
        let ev = Evaluated::new(&t, &map, 500, 2).unwrap();
        assert!((ev.stats.mu_hat - 1.5).abs() < 1e-12);
        assert!((ev.stats.rho_hat - 2.0).abs() < 1e-12);
        let xi = mean_width_bound(&ev, 0, 0).unwrap();
        assert!(xi.margin.abs() < 1e-12 && xi.pass);
        let vol = volume_displacement(&ev, PalKind::Bezdek).unwrap();
        assert_eq!(vol.params["kind"], "pal_firey");
        let k2 = 1.0 / 3f64.sqrt();
        assert!((vol.rhs - k2 * (1.5f64 / 2.0).powi(2)).abs() < 1e-12);
        assert!(area_displacement(&ev, PalKind::PalFirey).is_err());
    }

    #[test]
    fn cone_versus_ball() {
        for d in 2..=10 {
            let (cone, ball) = cone_and_ball_volumes(d);
            assert!(cone < ball, "d = {d}");
        }
        // the comparison reverses from d = 11 on
        for d in 11..20 {
            let (cone, ball) = cone_and_ball_volumes(d);
            assert!(cone > ball, "d = {d}");
        }
        let (cone, ball) = cone_and_ball_volumes(3);
        assert!((cone - PI / 9.0).abs() < 1e-13);
        assert!((ball - PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn chakerian_on_cube() {
        let c = Polytope3::cube(1.0).unwrap();
        let r = check_chakerian(&c, &[0.0, 0.0, 1.0], 0, 0).unwrap();
        assert!((r.rhs - 1.0 / 3.0).abs() < 1e-15 && r.pass);
    }

    #[test]
    fn crofton_on_hexagon() {
        let h = PolygonBoundary::regular(6, 1.0).unwrap();
        let r = check_crofton(&h, 20_000, 3).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
