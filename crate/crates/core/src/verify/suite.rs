use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    area_displacement, audit_orientation, check_chakerian, check_crofton, check_pal_firey,
    check_point_pair_bound, envelope_area, involution_ratio, isoperimetric_area, mean_width_bound,
    sort_records, volume_displacement, Evaluated, VerificationRecord, CROFTON_MIN_SAMPLES,
};
use crate::constants::PalKind;
use crate::error::{Error, Result};
use crate::geometry::{random_direction, ConvexBody, DisplacementMap, DEFAULT_STEINER_POINTS};
use crate::io::{BodySpec, DEFAULT_POLYTOPE_VERTICES};
use crate::rng::substream;
use crate::SCHEMA_VERSION;

/// Parameters of a verification sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub name: String,
    pub seed: u64,
    /// Boundary samples per displacement estimate and Monte Carlo directions
    /// per mean-width estimate.
    pub samples: usize,
    pub kind: PalKind,
    pub polytopes: usize,
    pub polytope_vertices: usize,
    pub steiner_points: usize,
    pub crofton_polygons: usize,
    pub chakerian_directions: usize,
    /// `ρ` of the near-extremal cylinder.
    pub cylinder_ratio: f64,
}

impl SuiteConfig {
    pub fn default_suite(seed: u64) -> Self {
        SuiteConfig {
            name: "default".into(),
            seed,
            samples: 10_000,
            kind: PalKind::PalFirey,
            polytopes: 20,
            polytope_vertices: DEFAULT_POLYTOPE_VERTICES,
            steiner_points: DEFAULT_STEINER_POINTS,
            crofton_polygons: 5,
            chakerian_directions: 10,
            cylinder_ratio: 20.0,
        }
    }

    /// A small sweep with the same structure, for smoke tests.
    pub fn quick(seed: u64) -> Self {
        SuiteConfig {
            name: "quick".into(),
            samples: 1_000,
            polytopes: 4,
            crofton_polygons: 2,
            chakerian_directions: 3,
            ..SuiteConfig::default_suite(seed)
        }
    }

    pub fn named(name: &str, seed: u64) -> Result<Self> {
        match name {
            "default" => Ok(SuiteConfig::default_suite(seed)),
            "quick" => Ok(SuiteConfig::quick(seed)),
            _ => Err(Error::config(format!(
                "unknown suite {name:?}; expected default or quick"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::config("samples must be >= 1"));
        }
        if self.polytope_vertices < 4 {
            return Err(Error::config("random polytopes need at least 4 vertices"));
        }
        if !(self.cylinder_ratio > 1.0) {
            return Err(Error::config("cylinder ratio must exceed 1"));
        }
        Ok(())
    }
}

/// A check or body that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub body_id: String,
    pub map_id: Option<String>,
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub records: usize,
    /// Records counted as confirmations or violations.
    pub counted: usize,
    pub passed: usize,
    pub violations: usize,
    pub advisory: usize,
    pub advisory_failures: usize,
    pub missing_notes: usize,
    pub failures: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Pass,
    Violation,
    NumericalFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: SuiteConfig,
    pub records: Vec<VerificationRecord>,
    pub failures: Vec<SuiteFailure>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    fn new(
        config: SuiteConfig,
        mut records: Vec<VerificationRecord>,
        failures: Vec<SuiteFailure>,
    ) -> Self {
        sort_records(&mut records);
        let counted: Vec<_> = records.iter().filter(|r| !r.advisory).collect();
        let summary = SuiteSummary {
            records: records.len(),
            counted: counted.len(),
            passed: counted.iter().filter(|r| r.pass).count(),
            violations: counted.iter().filter(|r| !r.pass).count(),
            advisory: records.len() - counted.len(),
            advisory_failures: records.iter().filter(|r| r.advisory && !r.pass).count(),
            missing_notes: audit_orientation(&records).len(),
            failures: failures.len(),
        };
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            config,
            records,
            failures,
            summary,
        }
    }

    pub fn status(&self) -> SuiteStatus {
        if self.summary.violations > 0 || self.summary.missing_notes > 0 {
            SuiteStatus::Violation
        } else if self.summary.failures > 0 {
            SuiteStatus::NumericalFailure
        } else {
            SuiteStatus::Pass
        }
    }
}

/// Bodies of a sweep: unit sphere, near-extremal cylinder, equilateral
/// triangle, seeded random polytopes (the last two stretched into a cigar
/// and a pancake) and seeded ellipse polygons for the Crofton identity.
pub fn suite_bodies(config: &SuiteConfig) -> Vec<BodySpec> {
    let mut specs = vec![
        BodySpec::Sphere { n: 2, radius: 1.0 },
        BodySpec::cylinder_with_ratio(2, config.cylinder_ratio),
        BodySpec::Triangle { side: 1.0 },
    ];
    for i in 0..config.polytopes {
        let seed = substream(config.seed, "suite_polytope", i as u64).random::<u64>();
        let (stretch, prefix) = if config.polytopes >= 3 && i + 2 == config.polytopes {
            ([0.4, 0.4, 2.5], "cigar")
        } else if config.polytopes >= 3 && i + 1 == config.polytopes {
            ([1.5, 1.5, 0.15], "pancake")
        } else {
            ([1.0, 1.0, 1.0], "polytope")
        };
        specs.push(BodySpec::RandomPolytope {
            seed,
            vertices: config.polytope_vertices,
            stretch,
            name: Some(format!("{prefix}_{i:02}")),
        });
    }
    for i in 0..config.crofton_polygons {
        let mut rng = substream(config.seed, "suite_polygon", i as u64);
        let k = rng.random_range(5..16usize);
        let a = rng.random_range(0.5..1.5);
        let b = rng.random_range(0.5..1.5);
        let phase = rng.random_range(0.0..2.0 * PI);
        let points = (0..k)
            .map(|j| {
                let t = phase + 2.0 * PI * (j as f64 + 0.8 * rng.random::<f64>()) / k as f64;
                [a * t.cos(), b * t.sin()]
            })
            .collect();
        specs.push(BodySpec::Polygon {
            name: format!("ellipse_polygon_{i:02}"),
            points,
        });
    }
    specs
}

/// Runs the configured sweep.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    Ok(run_bodies(&suite_bodies(config), config))
}

enum Job {
    Body(usize),
    Map(usize, DisplacementMap),
}

type Outcome = (Vec<VerificationRecord>, Vec<SuiteFailure>);

/// Runs every applicable check on the given bodies.
pub fn run_bodies(specs: &[BodySpec], config: &SuiteConfig) -> SuiteReport {
    let mut failures = Vec::new();
    let mut bodies: Vec<Arc<dyn ConvexBody>> = Vec::new();
    for spec in specs {
        match spec.build_with(config.steiner_points) {
            Ok(b) => bodies.push(b),
            Err(e) => failures.push(SuiteFailure {
                body_id: spec.kind_name().to_string(),
                map_id: None,
                stage: "build".into(),
                message: e.to_string(),
            }),
        }
    }
    let mut jobs = Vec::new();
    for (i, body) in bodies.iter().enumerate() {
        jobs.push(Job::Body(i));
        jobs.push(Job::Map(i, DisplacementMap::central(body.as_ref())));
        if body.symmetry_center().is_some() {
            jobs.push(Job::Map(i, DisplacementMap::EuclideanAntipode));
        }
        if body.as_polygon().is_some() {
            jobs.push(Job::Map(i, DisplacementMap::HalfPerimeter));
        }
    }
    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|job| match job {
            Job::Body(i) => body_checks(bodies[*i].as_ref(), config),
            Job::Map(i, map) => map_checks(bodies[*i].as_ref(), map, config),
        })
        .collect();
    let mut records = Vec::new();
    for (r, f) in outcomes {
        records.extend(r);
        failures.extend(f);
    }
    SuiteReport::new(config.clone(), records, failures)
}

struct Collector<'a> {
    body: &'a dyn ConvexBody,
    map_id: Option<String>,
    records: Vec<VerificationRecord>,
    failures: Vec<SuiteFailure>,
}

impl Collector<'_> {
    fn push(&mut self, stage: &str, result: Result<VerificationRecord>) {
        match result {
            Ok(r) => self.records.push(r),
            Err(e) => self.fail(stage, e),
        }
    }

    fn fail(&mut self, stage: &str, e: Error) {
        self.failures.push(SuiteFailure {
            body_id: self.body.id(),
            map_id: self.map_id.clone(),
            stage: stage.into(),
            message: e.to_string(),
        });
    }
}

fn body_checks(body: &dyn ConvexBody, config: &SuiteConfig) -> Outcome {
    let mut c = Collector {
        body,
        map_id: None,
        records: Vec::new(),
        failures: Vec::new(),
    };
    c.push(
        "min_width_volume",
        check_pal_firey(body, config.kind, config.seed),
    );
    if let Some(p) = body.as_polytope() {
        for j in 0..config.chakerian_directions {
            let u = random_direction(
                config.seed,
                &format!("chakerian/{}", body.id()),
                j as u64,
                3,
            );
            c.push("chakerian", check_chakerian(p, &u, j, config.seed));
        }
    }
    if let Some(p) = body.as_polygon() {
        c.push(
            "crofton",
            check_crofton(p, config.samples.max(CROFTON_MIN_SAMPLES), config.seed),
        );
    }
    (c.records, c.failures)
}

fn map_checks(body: &dyn ConvexBody, map: &DisplacementMap, config: &SuiteConfig) -> Outcome {
    let mut c = Collector {
        body,
        map_id: Some(map.id()),
        records: Vec::new(),
        failures: Vec::new(),
    };
    let ev = match Evaluated::new(body, map, config.samples, config.seed) {
        Ok(ev) => ev,
        Err(e) => {
            c.fail("displacement", e);
            return (c.records, c.failures);
        }
    };
    let kind = config.kind;
    if body.surface_dimension() >= 2 {
        c.push("area_displacement", area_displacement(&ev, kind));
        c.push("isoperimetric_area", isoperimetric_area(&ev, kind));
        c.push("envelope_area", envelope_area(&ev, kind));
        if matches!(map, DisplacementMap::CentralPoint(_)) {
            let x = ev.stats.argmax_point.clone();
            match map
                .apply(body, &x)
                .and_then(|y| check_point_pair_bound(body, &x, &y, config.seed))
            {
                Ok(rs) => c.records.extend(rs),
                Err(Error::Domain(_)) => {}
                Err(e) => c.fail("point_pair_area", e),
            }
        }
    }
    c.push("volume_displacement", volume_displacement(&ev, kind));
    c.push(
        "mean_width",
        mean_width_bound(&ev, config.samples, config.seed),
    );
    if map.is_involution() {
        c.push("involution_ratio", involution_ratio(&ev));
    }
    (c.records, c.failures)
}
