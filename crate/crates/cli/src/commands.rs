use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use areabound::asymptotics::{bracket_threshold, compare, radius_entry_threshold, Quantity};
use areabound::constants::{
    branch_offset, constants_row, cylinder_area_bound, envelope, first_branch_offset,
    intrinsic_pair_bound, isoperimetric_bound, offset_ratio, quoted_area_constant, scan_offsets,
};
use areabound::geometry::{distance, intrinsic_distance, ConvexBody, DistanceKind, Polytope3};
use areabound::io::BodySpec;
use areabound::verify::{
    read_csv, read_json_lines, run_bodies, run_suite, suite_bodies, write_csv, write_json_lines,
    SuiteConfig, SuiteReport, SuiteStatus, VerificationRecord,
};
use areabound::PalKind;

use crate::table::{Cell, Format, Table};
use crate::{open_output, Common, Failure, EXIT_NUMERICAL, EXIT_PASS, EXIT_VIOLATION};

pub const MIN_DIMENSION: u32 = 2;
pub const MAX_DIMENSION: u32 = 1_000_000;
/// Largest range printed row by row by `scan-ab`; longer ranges get a summary row.
pub const SCAN_ROW_LIMIT: u32 = 1000;

/// A set of dimensions given as a range or a list.
#[derive(Clone, Debug, PartialEq)]
pub enum Dims {
    Range(u32, u32),
    List(Vec<u32>),
}

impl Dims {
    pub fn values(&self) -> Vec<u32> {
        match self {
            Dims::Range(a, b) => (*a..=*b).collect(),
            Dims::List(v) => v.clone(),
        }
    }
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| -> Result<u32, String> {
            let v: u32 = t
                .trim()
                .parse()
                .map_err(|_| format!("not a dimension: {t:?}"))?;
            if (MIN_DIMENSION..=MAX_DIMENSION).contains(&v) {
                Ok(v)
            } else {
                Err(format!(
                    "dimension {v} outside [{MIN_DIMENSION}, {MAX_DIMENSION}]"
                ))
            }
        };
        let dims = if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Dims::Range(a, b)
        } else {
            Dims::List(s.split(',').map(num).collect::<Result<_, _>>()?)
        };
        Ok(dims)
    }
}

fn finish(out: &mut dyn Write) -> Result<(), Failure> {
    out.flush()?;
    Ok(())
}

fn emit(table: &Table, common: &Common) -> Result<(), Failure> {
    let mut out = open_output(common)?;
    table.write(common.format, &mut out)?;
    finish(&mut out)
}

pub fn constants(dims: &Dims, rho: &[f64], kind: PalKind, common: &Common) -> Result<u8, Failure> {
    let table = if rho.is_empty() {
        constants_table(dims, kind)?
    } else {
        bounds_table(dims, rho, kind)?
    };
    emit(&table, common)?;
    Ok(EXIT_PASS)
}

fn constants_table(dims: &Dims, kind: PalKind) -> Result<Table, Failure> {
    let mut t = Table::new(&[
        "n",
        "kind",
        "rho_n",
        "a_n",
        "b_n",
        "c_n",
        "rho_star",
        "branch",
        "log_h_n",
        "h_n",
        "paper_quoted",
        "log_sphere_reference",
        "log_suboptimality",
        "log_residual",
    ]);
    for n in dims.values() {
        let row = constants_row(n, kind)?;
        let branch = serde_json::to_value(row.branch).expect("branch serialises");
        t.push(vec![
            n.into(),
            kind.as_str().into(),
            row.rho_n.into(),
            row.a_n.into(),
            row.b_n.into(),
            row.c_n.into(),
            row.rho_star.into(),
            branch.as_str().unwrap_or_default().into(),
            row.log_h_n.into(),
            row.h_n().map_or(Cell::from("underflow"), Cell::from),
            quoted_area_constant(n).into(),
            row.log_sphere_reference.into(),
            row.log_suboptimality.into(),
            row.log_residual.into(),
        ]);
    }
    Ok(t)
}

fn bounds_table(dims: &Dims, rho: &[f64], kind: PalKind) -> Result<Table, Failure> {
    let mut t = Table::new(&[
        "n",
        "rho",
        "log_pair_bound",
        "log_isoperimetric_bound",
        "log_envelope",
        "log_cylinder_area",
    ]);
    for n in dims.values() {
        for &r in rho {
            t.push(vec![
                n.into(),
                r.into(),
                intrinsic_pair_bound(n, r)?.ln().into(),
                isoperimetric_bound(n, r, kind)?.ln().into(),
                envelope(n, r, kind)?.ln().into(),
                cylinder_area_bound(n, r)?.ln().into(),
            ]);
        }
    }
    Ok(t)
}

pub fn scan_ab(dims: &Dims, kind: PalKind, common: &Common) -> Result<u8, Failure> {
    let ranges: Vec<(u32, u32)> = match dims {
        Dims::Range(a, b) => vec![(*a, *b)],
        Dims::List(v) => v.iter().map(|&n| (n, n)).collect(),
    };
    let count: u64 = ranges.iter().map(|(a, b)| (b - a + 1) as u64).sum();
    let mut violations = Vec::new();
    let mut table;
    if count <= SCAN_ROW_LIMIT as u64 {
        table = Table::new(&["n", "a_n", "b_n", "ratio", "pass"]);
        for n in dims.values() {
            let a = first_branch_offset(n, kind)?;
            let b = branch_offset(n)?;
            let ratio = offset_ratio(n, kind)?;
            let pass = a > b;
            if !pass {
                violations.push(n);
            }
            table.push(vec![
                n.into(),
                a.to_f64_lossy().into(),
                b.to_f64_lossy().into(),
                ratio.into(),
                pass.into(),
            ]);
        }
    } else {
        table = Table::new(&[
            "first",
            "last",
            "checked",
            "violations",
            "min_ratio",
            "argmin",
            "ratio_at_last",
            "limit",
        ]);
        for (a, b) in ranges {
            let scan = scan_offsets(a, b, kind)?;
            violations.extend(&scan.violations);
            table.push(vec![
                scan.first.into(),
                scan.last.into(),
                scan.checked.into(),
                scan.violations.len().into(),
                scan.min_ratio.into(),
                scan.argmin.into(),
                offset_ratio(b, kind)?.into(),
                (2.0 * std::f64::consts::E.sqrt()).into(),
            ]);
        }
    }
    emit(&table, common)?;
    if violations.is_empty() {
        eprintln!("{count} dimensions checked, no violations");
        Ok(EXIT_PASS)
    } else {
        eprintln!(
            "{} violations, first at n = {}",
            violations.len(),
            violations[0]
        );
        Ok(EXIT_VIOLATION)
    }
}

pub fn asymptotics(
    quantity: Quantity,
    dims: &Dims,
    kind: PalKind,
    common: &Common,
) -> Result<u8, Failure> {
    let reports = compare(&dims.values(), quantity, kind)?;
    let mut t = Table::new(&[
        "n",
        "quantity",
        "exact",
        "asymptotic",
        "abs_error",
        "rel_error",
    ]);
    for r in reports {
        t.push(vec![
            r.n.into(),
            r.quantity.as_str().into(),
            r.exact.into(),
            r.asymptotic.into(),
            r.abs_error.into(),
            r.rel_error.into(),
        ]);
    }
    emit(&t, common)?;
    Ok(EXIT_PASS)
}

pub fn thresholds(kind: PalKind, limit: u32, common: &Common) -> Result<u8, Failure> {
    let mut t = Table::new(&["property", "n0", "limit", "failures"]);
    for (name, th) in [
        ("crossing_bracket", bracket_threshold(kind, limit)?),
        ("series_radius_entry", radius_entry_threshold(kind, limit)?),
    ] {
        t.push(vec![
            name.into(),
            th.n0.into(),
            th.limit.into(),
            th.failures.len().into(),
        ]);
    }
    emit(&t, common)?;
    Ok(EXIT_PASS)
}

fn read_bodies(inline: &[String], files: &[PathBuf]) -> Result<Vec<BodySpec>, Failure> {
    let mut specs = Vec::new();
    for s in inline {
        specs.push(s.parse::<BodySpec>()?);
    }
    for path in files {
        specs.push(
            BodySpec::read_file(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        );
    }
    Ok(specs)
}

fn write_records(
    records: &[VerificationRecord],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        Format::Csv => write_csv(records, out)?,
        Format::JsonLines => write_json_lines(records, out)?,
        Format::Pretty => {
            let mut t = Table::new(&[
                "theorem_id",
                "body_id",
                "map_id",
                "lhs",
                "rhs",
                "margin",
                "pass",
                "advisory",
            ]);
            for r in records {
                t.push(vec![
                    r.theorem_id.as_str().into(),
                    r.body_id.clone().into(),
                    r.map_id.clone().into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    r.margin.into(),
                    r.pass.into(),
                    r.advisory.into(),
                ]);
            }
            t.write(Format::Pretty, out)?;
        }
    }
    Ok(())
}

pub fn verify(
    suite: &str,
    seed: u64,
    samples: Option<usize>,
    kind: PalKind,
    bodies: &[String],
    body_files: &[PathBuf],
    common: &Common,
) -> Result<u8, Failure> {
    let mut config = SuiteConfig::named(suite, seed)?;
    config.kind = kind;
    if let Some(s) = samples {
        config.samples = s;
    }
    config.validate()?;
    let specs = read_bodies(bodies, body_files)?;
    let report = if specs.is_empty() {
        run_suite(&config)?
    } else {
        run_bodies(&specs, &config)
    };
    let mut out = open_output(common)?;
    write_records(&report.records, common.format, &mut out)?;
    finish(&mut out)?;
    summarise(&report);
    Ok(status_code(report.status()))
}

pub fn status_code(status: SuiteStatus) -> u8 {
    match status {
        SuiteStatus::Pass => EXIT_PASS,
        SuiteStatus::Violation => EXIT_VIOLATION,
        SuiteStatus::NumericalFailure => EXIT_NUMERICAL,
    }
}

fn summarise(report: &SuiteReport) {
    let s = &report.summary;
    eprintln!(
        "{} records: {} counted, {} passed, {} violations, {} advisory ({} not passing), {} missing notes, {} evaluation failures",
        s.records, s.counted, s.passed, s.violations, s.advisory, s.advisory_failures, s.missing_notes, s.failures
    );
    for f in &report.failures {
        eprintln!(
            "failure: {} {:?} at {}: {}",
            f.body_id, f.map_id, f.stage, f.message
        );
    }
}

fn endpoint(
    body: &dyn ConvexBody,
    polytope: Option<&Polytope3>,
    s: &str,
) -> Result<Vec<f64>, Failure> {
    if let Some((what, index)) = s.split_once(':') {
        let p = polytope
            .ok_or_else(|| Failure::usage(format!("{what}:i endpoints need a polytope body")))?;
        let i: usize = index
            .parse()
            .map_err(|_| Failure::usage(format!("bad index in {s:?}")))?;
        let point = match what {
            "vertex" => p.vertices().get(i).map(|v| v.to_vec()),
            "face-center" => p.face_center(i),
            _ => return Err(Failure::usage(format!("unknown endpoint kind {what:?}"))),
        };
        return point.ok_or_else(|| Failure::usage(format!("{s:?} out of range")));
    }
    let coords: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("bad point {s:?}")))?;
    if coords.len() != body.ambient_dimension() {
        return Err(Failure::usage(format!(
            "point {s:?} needs {} coordinates",
            body.ambient_dimension()
        )));
    }
    Ok(coords)
}

pub fn geodesic(
    body: &str,
    body_file: Option<&Path>,
    from: &str,
    to: &str,
    subdiv: usize,
    common: &Common,
) -> Result<u8, Failure> {
    let spec = match body_file {
        Some(path) => BodySpec::read_file(path)?,
        None => body.parse()?,
    };
    let polytope = spec.build_polytope(subdiv).ok();
    let shape = spec.build_with(subdiv)?;
    let x = endpoint(shape.as_ref(), polytope.as_ref(), from)?;
    let y = endpoint(shape.as_ref(), polytope.as_ref(), to)?;
    let d = intrinsic_distance(shape.as_ref(), &x, &y)?;
    let mut t = Table::new(&[
        "body_id",
        "from",
        "to",
        "distance",
        "distance_kind",
        "euclidean",
        "steiner_points",
    ]);
    t.push(vec![
        shape.id().into(),
        from.into(),
        to.into(),
        d.value.into(),
        match d.kind {
            DistanceKind::Exact => "exact",
            DistanceKind::UpperBound => "upper_bound",
        }
        .into(),
        distance(&x, &y).into(),
        polytope.map(|_| subdiv).into(),
    ]);
    emit(&t, common)?;
    Ok(EXIT_PASS)
}

pub fn export_bodies(
    bodies: &[String],
    suite: Option<&str>,
    seed: u64,
    common: &Common,
) -> Result<u8, Failure> {
    let mut specs = read_bodies(bodies, &[])?;
    if let Some(name) = suite {
        specs.extend(suite_bodies(&SuiteConfig::named(name, seed)?));
    }
    if specs.is_empty() {
        return Err(Failure::usage(
            "nothing to export: give --body, --suite or --records",
        ));
    }
    match (&common.output, specs.len()) {
        (Some(dir), n) if n > 1 => {
            std::fs::create_dir_all(dir)?;
            for spec in &specs {
                let id = spec.build()?.id();
                std::fs::write(dir.join(format!("{id}.body")), spec.to_text())?;
            }
        }
        _ => {
            let mut out = open_output(common)?;
            for (i, spec) in specs.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                out.write_all(spec.to_text().as_bytes())?;
            }
            finish(&mut out)?;
        }
    }
    Ok(EXIT_PASS)
}

pub fn convert_records(path: &Path, common: &Common) -> Result<u8, Failure> {
    let file = std::fs::File::open(path)
        .map_err(|e| Failure::usage(format!("cannot open {}: {e}", path.display())))?;
    let head = std::fs::read(path)?;
    let records = if head.first() == Some(&b'{') {
        read_json_lines(BufReader::new(file))?
    } else {
        read_csv(file)?
    };
    let mut out = open_output(common)?;
    write_records(&records, common.format, &mut out)?;
    finish(&mut out)?;
    Ok(EXIT_PASS)
}
