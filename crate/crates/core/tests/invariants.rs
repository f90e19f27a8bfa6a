use std::f64::consts::{LN_2, PI};

use areabound::asymptotics::{
    bracket_threshold, coefficient_ratio_bound, coefficient_ratio_bound_limit, InverseSeries,
    MAX_SERIES_TERMS,
};
use areabound::constants::{
    area_constant, branch_offset, branch_point, crossing_point, cylinder_area_bound,
    first_branch_offset, intrinsic_pair_bound, intrinsic_pair_branch, isoperimetric_bound,
    CROSSING_TOLERANCE,
};
use areabound::geometry::{
    chordal_gauss_coverage, direction_grid, displacement_stats, isoperimetric_area_floor,
    ConvexBody, DisplacementMap, IntrinsicDistance, Polytope3,
};
use areabound::io::BodySpec;
use areabound::numerics::{log_unit_ball_volume, log_unit_sphere_area};
use areabound::verify::{audit_orientation, run_suite, SuiteConfig};
use areabound::{Branch, LogReal, PalKind};
use proptest::prelude::*;

const KIND: PalKind = PalKind::PalFirey;

fn rho_grid() -> Vec<f64> {
    // log-spaced on (1, 1e4]
    (0..=400)
        .map(|i| 1.0 + 10f64.powf(-8.0 + 12.0 * i as f64 / 400.0))
        .filter(|&r| r <= 1e4)
        .collect()
}

#[test]
fn sphere_area_is_two_pi_ball_volume() {
    for n in 1..=1_000_000u32 {
        let lhs = log_unit_sphere_area(n + 1);
        let rhs = (2.0 * PI).ln() + log_unit_ball_volume(n);
        // 1e-10 absolute until the values' own ulp spacing exceeds it
        let tol = 1e-10_f64.max(8.0 * f64::EPSILON * lhs.abs());
        assert!((lhs - rhs).abs() <= tol, "n = {n}: {lhs} vs {rhs}");
    }
}

#[test]
fn beta_bound_on_ball_volumes() {
    for n in 1..=1_000_000u32 {
        let lhs = LN_2 + log_unit_ball_volume(n - 1);
        let rhs = (n as f64).ln() + log_unit_ball_volume(n);
        assert!(lhs <= rhs + 1e-12, "n = {n}");
    }
}

#[test]
fn pair_bound_increases_and_isoperimetric_bound_decreases() {
    let grid = rho_grid();
    for n in 2..=50u32 {
        let i: Vec<LogReal> = grid
            .iter()
            .map(|&r| intrinsic_pair_bound(n, r).unwrap())
            .collect();
        let j: Vec<LogReal> = grid
            .iter()
            .map(|&r| isoperimetric_bound(n, r, KIND).unwrap())
            .collect();
        for w in i.windows(2) {
            assert!(w[1].ln() >= w[0].ln() - 1e-13, "n = {n}");
        }
        for w in j.windows(2) {
            assert!(w[1].ln() < w[0].ln(), "n = {n}");
        }
    }
}

#[test]
fn pair_bound_stays_below_range_limit() {
    for n in 2..=50u32 {
        let limit = log_unit_ball_volume(n) - (n as f64 - 1.0) * LN_2;
        for r in rho_grid() {
            assert!(
                intrinsic_pair_bound(n, r).unwrap().ln() < limit,
                "n = {n}, rho = {r}"
            );
        }
    }
}

#[test]
fn pieces_meet_at_branch_point() {
    for n in 2..=50u32 {
        let r = branch_point(n).unwrap();
        let a = intrinsic_pair_branch(n, r, Branch::First).unwrap();
        let b = intrinsic_pair_branch(n, r, Branch::Second).unwrap();
        assert!(a.log_distance(&b) <= 1e-13, "n = {n}");
    }
}

#[test]
fn cylinder_ratio_identity() {
    for n in 2..=50u32 {
        let nf = n as f64;
        for r in rho_grid()
            .into_iter()
            .filter(|&r| r >= branch_point(n).unwrap())
        {
            let ratio = (cylinder_area_bound(n, r).unwrap() / intrinsic_pair_bound(n, r).unwrap())
                .to_f64_lossy();
            let expected = (nf - 1.0) * PI + (nf - 1.0).powi(2) * PI / r;
            assert!(
                (ratio - expected).abs() <= 1e-12 * expected,
                "n = {n}, rho = {r}"
            );
        }
    }
}

#[test]
fn single_crossing_on_wide_range() {
    let grid: Vec<f64> = (0..=2000)
        .map(|i| 1.0 + 10f64.powf(-10.0 + 16.0 * i as f64 / 2000.0))
        .collect();
    for n in 2..=50u32 {
        let signs: Vec<bool> = grid
            .iter()
            .map(|&r| {
                intrinsic_pair_bound(n, r).unwrap() > isoperimetric_bound(n, r, KIND).unwrap()
            })
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1, "n = {n}");
        let c = crossing_point(n, KIND, CROSSING_TOLERANCE).unwrap();
        let k = signs.iter().position(|&s| s).unwrap();
        assert!(
            grid[k - 1] <= c.rho_star && c.rho_star <= grid[k],
            "n = {n}"
        );
    }
}

#[test]
fn branch_flag_matches_offset_comparison() {
    for n in 2..=100_000u32 {
        let c = crossing_point(n, KIND, CROSSING_TOLERANCE).unwrap();
        let a = first_branch_offset(n, KIND).unwrap();
        let b = branch_offset(n).unwrap();
        assert_eq!(c.branch == Branch::Second, a > b, "n = {n}");
    }
}

#[test]
fn area_constant_decreases_in_dimension() {
    let h: Vec<f64> = (2..=50)
        .map(|n| area_constant(n, KIND).unwrap().ln())
        .collect();
    assert!(h.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn series_radius_law() {
    let counts = [250, 500, 1000, 2000, 4000];
    for order in 1..=200u32 {
        let series = InverseSeries::new(order, MAX_SERIES_TERMS).unwrap();
        let outside = series
            .truncation_residuals(1.05 * series.radius(), &counts)
            .unwrap();
        assert!(
            outside.windows(2).all(|w| w[1] > w[0]),
            "N = {order}: {outside:?}"
        );
        let inside = series.evaluate(0.95 * series.radius()).unwrap();
        assert!(inside.residual <= 1e-8 * inside.rho, "N = {order}");
    }
}

#[test]
fn coefficient_ratio_bound_limit_is_reached() {
    for order in [1u32, 2, 10, 100] {
        let v = coefficient_ratio_bound(order, 1_000_000).unwrap();
        assert!((v - coefficient_ratio_bound_limit(order)).abs() <= 1e-5);
    }
}

#[test]
fn bracket_threshold_is_stable() {
    let a = bracket_threshold(KIND, 500).unwrap();
    let b = bracket_threshold(KIND, 500).unwrap();
    assert_eq!(a, b);
    assert!(a.n0.is_some());
}

#[test]
fn polytope_geodesics_shrink_with_refinement() {
    for seed in 0..4 {
        let p = Polytope3::random(seed, 16).unwrap();
        let v = p.vertices().to_vec();
        let (x, y) = (v[0].to_vec(), v[v.len() / 2].to_vec());
        let mut last = f64::INFINITY;
        // nested refinements: each point set contains the previous one
        for m in [1, 3, 7, 15] {
            let d: IntrinsicDistance = p
                .with_steiner_points(m)
                .intrinsic_distance_unchecked(&x, &y);
            assert!(d.value <= last + 1e-12, "seed {seed}, m = {m}");
            assert!(d.value >= areabound::geometry::distance(&x, &y) - 1e-12);
            last = d.value;
        }
    }
}

#[test]
fn isoperimetric_floor_and_involution_ratio_on_generated_bodies() {
    let config = SuiteConfig::quick(11);
    for spec in areabound::verify::suite_bodies(&config) {
        let body = spec.build_with(4).unwrap();
        // the sphere is the equality case
        if !matches!(spec, BodySpec::Sphere { .. }) {
            assert!(
                body.boundary_area() > isoperimetric_area_floor(body.as_ref()),
                "{}",
                body.id()
            );
        }
        let map = DisplacementMap::central(body.as_ref());
        let s = displacement_stats(body.as_ref(), &map, 300, 11).unwrap();
        assert!(s.rho_hat > 1.0, "{}", body.id());
    }
}

#[test]
fn chordal_gauss_coverage_shrinks() {
    let body = BodySpec::Cube { edge: 1.0 }.build().unwrap();
    let map = DisplacementMap::central(body.as_ref());
    let grid = direction_grid(3, 200);
    let report =
        chordal_gauss_coverage(body.as_ref(), &map, &grid, &[100, 1000, 10_000], 5).unwrap();
    assert!(report.shrinking(), "{report:?}");
}

#[test]
fn quick_suite_has_orientation_notes_everywhere() {
    let report = run_suite(&SuiteConfig::quick(3)).unwrap();
    assert!(audit_orientation(&report.records).is_empty());
    assert_eq!(report.summary.violations, 0);
}

proptest! {
    #[test]
    fn log_real_addition_is_associative_and_commutative(
        a in -230.0f64..230.0,
        b in -230.0f64..230.0,
        c in -230.0f64..230.0,
    ) {
        let (x, y, z) = (LogReal::from_ln(a), LogReal::from_ln(b), LogReal::from_ln(c));
        let left = (x + y) + z;
        let right = x + (y + z);
        prop_assert!((left.ln() - right.ln()).abs() <= 1e-12);
        prop_assert!(((x + y).ln() - (y + x).ln()).abs() <= 1e-12);
    }
}
