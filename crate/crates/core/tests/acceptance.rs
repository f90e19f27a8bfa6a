//! Acceptance run: evaluates every acceptance criterion at its stated
//! tolerance and prints one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always appear in the test log.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are reported but do not fail the
//! run; the reason is printed beside them.

use std::f64::consts::{E, PI};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use areabound::asymptotics::{
    bracket_threshold, compare, forward_map, InverseSeries, Quantity, MAX_SERIES_TERMS,
    THRESHOLD_SCAN_LIMIT,
};
use areabound::constants::{
    area_constant, branch_offset, branch_point, crossing_point, cylinder_area_bound,
    first_branch_offset, intrinsic_pair_bound, isoperimetric_bound, offset_ratio,
    quoted_area_constant, quoted_h2_closed_form, root_scale, scan_offsets, CROSSING_TOLERANCE,
};
use areabound::geometry::{
    displacement_stats, distance, mean_width, min_width, ConvexBody, CylinderBody, DisplacementMap,
    MeanWidthMethod, PolygonBoundary, SphereBody,
};
use areabound::io::BodySpec;
use areabound::verify::{run_suite, write_csv, write_json_lines, SuiteConfig, SuiteReport};
use areabound::{Branch, Error, PalKind};

const KIND: PalKind = PalKind::PalFirey;

/// Criteria that cannot be met as stated, with the reason.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "quoted h2 closed form",
    "the closed form evaluates to 0.2237919..., 9.2e-5 from 0.2237; the quoted value is truncated, not rounded",
)];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn offset_scan() -> Outcome {
    let start = Instant::now();
    let scan = scan_offsets(2, 100_000, KIND).expect("scan");
    let elapsed = start.elapsed();
    outcome(
        scan.violations.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "n = 2..100000: {} violations, min A/B = {:.6} at n = {}, {:.2?}",
            scan.violations.len(),
            scan.min_ratio,
            scan.argmin,
            elapsed
        ),
    )
}

fn offset_ratio_limit() -> Outcome {
    let limit = 2.0 * E.sqrt();
    let e5 = (offset_ratio(100_000, KIND).unwrap() - limit).abs();
    let e6 = (offset_ratio(1_000_000, KIND).unwrap() - limit).abs();
    outcome(
        e5 <= 0.02 && e6 <= 0.005,
        format!("|A/B - 2 sqrt(e)| = {e5:.5} at 1e5 (<= 0.02), {e6:.5} at 1e6 (<= 0.005)"),
    )
}

fn crossing_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_n = 0;
    let mut branch_mismatch = Vec::new();
    for n in 2..=1000u32 {
        let c = crossing_point(n, KIND, CROSSING_TOLERANCE).unwrap();
        let i = intrinsic_pair_bound(n, c.rho_star).unwrap().ln();
        let j = isoperimetric_bound(n, c.rho_star, KIND).unwrap().ln();
        let residual = (i - j).abs().max(c.log_residual);
        if residual > worst {
            worst = residual;
            worst_n = n;
        }
        let a = first_branch_offset(n, KIND).unwrap();
        let b = branch_offset(n).unwrap();
        if (c.branch == Branch::Second) != (a > b) {
            branch_mismatch.push(n);
        }
    }
    outcome(
        worst <= 1e-10 && branch_mismatch.is_empty(),
        format!(
            "n = 2..1000: worst |ln I - ln J| = {worst:.2e} at n = {worst_n}, branch mismatches {branch_mismatch:?}"
        ),
    )
}

fn crossing_bracket() -> Outcome {
    let first = bracket_threshold(KIND, THRESHOLD_SCAN_LIMIT).unwrap();
    let second = bracket_threshold(KIND, THRESHOLD_SCAN_LIMIT).unwrap();
    let stable = first == second;
    let ok = matches!(first.n0, Some(n0) if n0 <= 100) && stable;
    outcome(
        ok,
        format!(
            "bracket holds for n >= {:?} through {} (fails at {:?}); identical across runs: {stable}",
            first.n0, first.limit, first.failures
        ),
    )
}

fn series_inversion() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [50u32, 500, 5000] {
        let c = root_scale(n, KIND).unwrap().to_f64_lossy();
        let series = InverseSeries::new(n - 1, MAX_SERIES_TERMS).unwrap();
        match series.evaluate(c) {
            Ok(v) => {
                let rel = (forward_map(n - 1, v.rho) - c).abs() / c;
                ok &= rel <= 1e-8;
                parts.push(format!("n={n}: rel {rel:.1e}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("n={n}: {e}"));
            }
        }
    }
    let counts = [250, 500, 1000, 2000, 4000];
    for order in [1u32, 2, 10] {
        let series = InverseSeries::new(order, MAX_SERIES_TERMS).unwrap();
        let y = 1.05 * series.radius();
        let rejected = matches!(series.evaluate(y), Err(Error::Divergence { .. }));
        let residuals = series.truncation_residuals(y, &counts).unwrap();
        let growing = residuals.windows(2).all(|w| w[1] > w[0]);
        ok &= rejected && growing;
        parts.push(format!(
            "N={order}: rejected {rejected}, residual {:.1e} -> {:.1e}",
            residuals[0],
            residuals[residuals.len() - 1]
        ));
    }
    outcome(ok, parts.join("; "))
}

fn area_constant_asymptotics() -> Outcome {
    let reports = compare(&[100, 1000, 10_000], Quantity::LogHN, KIND).unwrap();
    let errors: Vec<f64> = reports.iter().map(|r| r.rel_error).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && errors[2] < 0.005,
        format!(
            "relative error of ln h_n at 1e2, 1e3, 1e4: {:.2e}, {:.2e}, {:.2e}",
            errors[0], errors[1], errors[2]
        ),
    )
}

fn quoted_h2() -> Outcome {
    let closed = quoted_h2_closed_form();
    let quoted = quoted_area_constant(2).unwrap();
    let pipeline = area_constant(2, KIND).unwrap().to_f64_lossy();
    let gap = (closed - quoted).abs();
    outcome(
        gap <= 5e-5,
        format!(
            "closed form {closed:.15} vs quoted {quoted}: gap {gap:.2e} (tolerance 5e-5); pipeline h_2 = {pipeline:.15}"
        ),
    )
}

fn cylinder_identity() -> Outcome {
    let mut worst_area: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for n in 2..=6u32 {
        for rho in [1.5, 2.0, 5.0, 20.0] {
            let cyl = CylinderBody::with_ratio(n as usize, rho).unwrap();
            let bound = cylinder_area_bound(n, rho).unwrap().to_f64_lossy();
            worst_area = worst_area.max((cyl.boundary_area() - bound).abs() / bound);
            if rho >= branch_point(n).unwrap() {
                let nf = n as f64;
                let expected = (nf - 1.0) * PI + (nf - 1.0).powi(2) * PI / rho;
                let ratio = (cylinder_area_bound(n, rho).unwrap()
                    / intrinsic_pair_bound(n, rho).unwrap())
                .to_f64_lossy();
                worst_ratio = worst_ratio.max((ratio - expected).abs() / expected);
            }
        }
    }
    outcome(
        worst_area <= 1e-12 && worst_ratio <= 1e-12,
        format!("worst relative error: area {worst_area:.1e}, ratio identity {worst_ratio:.1e}"),
    )
}

fn triangle_suite() -> Outcome {
    let side = 1.0;
    let t = PolygonBoundary::equilateral_triangle(side).unwrap();
    let half = DisplacementMap::HalfPerimeter;
    let v = t.vertices().to_vec();
    let mut quarter_err: f64 = 0.0;
    for i in 0..3 {
        let a = v[i];
        let b = v[(i + 1) % 3];
        for f in [0.25, 0.75] {
            let x = vec![a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])];
            let y = half.apply(&t, &x).unwrap();
            let ratio = t.intrinsic_distance_unchecked(&x, &y).value / distance(&x, &y);
            quarter_err = quarter_err.max((ratio - 2.0).abs());
        }
    }
    let stats = displacement_stats(&t, &half, 10_000, 1).unwrap();
    let mu_err = (stats.mu_hat - 1.5 * side).abs();
    let rho_err = (stats.rho_hat - 2.0).abs();
    let central = DisplacementMap::central(&t);
    let vertex = v[0].to_vec();
    let image = central.apply(&t, &vertex).unwrap();
    let altitude_ratio =
        t.intrinsic_distance_unchecked(&vertex, &image).value / distance(&vertex, &image);
    let altitude_err = (altitude_ratio - 3f64.sqrt()).abs();
    let w = min_width(&t, 10, 0).unwrap().value;
    let pal_err = (t.enclosed_area() - w * w / 3f64.sqrt()).abs();
    let ok = quarter_err <= 1e-12
        && mu_err <= 1e-12
        && rho_err <= 1e-12
        && altitude_err <= 1e-12
        && pal_err <= 1e-12;
    outcome(
        ok,
        format!(
            "quarter-edge ratio err {quarter_err:.1e}, mu err {mu_err:.1e}, rho_hat err {rho_err:.1e}, sqrt(3) ratio err {altitude_err:.1e}, Pal equality err {pal_err:.1e}"
        ),
    )
}

fn equality_cases() -> Outcome {
    let s = SphereBody::unit(2).unwrap();
    let stats = displacement_stats(&s, &DisplacementMap::EuclideanAntipode, 10_000, 3).unwrap();
    let xi = mean_width(&s, MeanWidthMethod::MonteCarlo, 1_000_000, 3).unwrap();
    let gap = (xi.value - 2.0 / PI * stats.mu_hat).abs();
    let tol = (3.0 * xi.std_error).max(1e-12);
    let mut ok = gap <= tol;
    let mut worst: f64 = 0.0;
    let config = SuiteConfig::default_suite(7);
    let mut polygons: Vec<BodySpec> = areabound::verify::suite_bodies(&config)
        .into_iter()
        .filter(|b| matches!(b, BodySpec::Polygon { .. }))
        .collect();
    polygons.push(BodySpec::Triangle { side: 1.0 });
    polygons.push(BodySpec::RegularPolygon {
        sides: 6,
        side: 1.0,
    });
    for (i, spec) in polygons.iter().enumerate() {
        let body = spec.build().unwrap();
        let p = body.as_polygon().unwrap();
        let mc = mean_width(p, MeanWidthMethod::MonteCarlo, 100_000, i as u64).unwrap();
        worst = worst.max((p.perimeter() - PI * mc.value).abs() / p.perimeter());
    }
    ok &= worst <= 0.005;
    outcome(
        ok,
        format!(
            "sphere |Xi - (2/pi) mu| = {gap:.1e} (tolerance {tol:.1e}, 1e6 samples); {} polygons worst |L - pi Xi|/L = {worst:.2e}",
            polygons.len()
        ),
    )
}

fn default_suite() -> &'static (SuiteReport, Duration) {
    static RUN: OnceLock<(SuiteReport, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let report = run_suite(&SuiteConfig::default_suite(7)).expect("suite");
        (report, start.elapsed())
    })
}

fn inequality_suite() -> Outcome {
    let (report, elapsed) = default_suite();
    let s = report.summary;
    outcome(
        s.violations == 0 && s.missing_notes == 0 && s.failures == 0 && *elapsed < Duration::from_secs(300),
        format!(
            "{} records ({} counted, {} advisory): {} violations, {} missing notes, {} evaluation failures, {:.1?}",
            s.records, s.counted, s.advisory, s.violations, s.missing_notes, s.failures, elapsed
        ),
    )
}

fn machine_output(report: &SuiteReport) -> (Vec<u8>, Vec<u8>) {
    let mut json = Vec::new();
    write_json_lines(&report.records, &mut json).unwrap();
    let mut csv = Vec::new();
    write_csv(&report.records, &mut csv).unwrap();
    (json, csv)
}

fn determinism() -> Outcome {
    let (first, _) = default_suite();
    let second = run_suite(&SuiteConfig::default_suite(7)).unwrap();
    let suite_same = machine_output(first) == machine_output(&second);
    let other = run_suite(&SuiteConfig::quick(8)).unwrap();
    let again = run_suite(&SuiteConfig::quick(8)).unwrap();
    let quick_same = machine_output(&other) == machine_output(&again);
    let rows = |_: ()| {
        (2..=10)
            .map(|n| {
                serde_json::to_string(&areabound::constants::constants_row(n, KIND).unwrap())
                    .unwrap()
            })
            .collect::<Vec<_>>()
    };
    let constants_same = rows(()) == rows(());
    let asym =
        |_: ()| serde_json::to_string(&compare(&[100, 1000], Quantity::CN, KIND).unwrap()).unwrap();
    let asym_same = asym(()) == asym(());
    outcome(
        suite_same && quick_same && constants_same && asym_same,
        format!(
            "byte-identical: default suite {suite_same}, quick suite {quick_same}, constants table {constants_same}, asymptotics {asym_same}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("offset scan", offset_scan),
        ("offset ratio limit", offset_ratio_limit),
        ("crossing consistency", crossing_consistency),
        ("crossing bracket", crossing_bracket),
        ("series inversion", series_inversion),
        ("area constant asymptotics", area_constant_asymptotics),
        ("quoted h2 closed form", quoted_h2),
        ("cylinder identity", cylinder_identity),
        ("triangle suite", triangle_suite),
        ("equality cases", equality_cases),
        ("inequality suite", inequality_suite),
        ("determinism", determinism),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let known = KNOWN_UNATTAINABLE.iter().find(|k| k.0 == *name);
        println!(
            "{:>2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        match (o.pass, known) {
            (false, Some((_, why))) => println!("     known unattainable: {why}"),
            (false, None) => unexpected += 1,
            _ => {}
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
