use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;

/// Which inequality a record checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    /// `Area(M) > hₙ μ(α)ⁿ`
    AreaDisplacement,
    /// `Area(M) > 𝓘ₙ(ρ) d_M(x,y)ⁿ`
    PointPairArea,
    /// `Area(M) > 𝓘ₙ*(ρ) d_M(x,y)ⁿ` when both ends sit on support planes.
    SupportPairArea,
    /// `Vol(Ω) > K_{n+1} (μ/ρ)^{n+1}`
    VolumeDisplacement,
    /// `Area(M) > 𝓙ₙ(ρ) μⁿ`
    IsoperimetricArea,
    /// `Vol(Ω) ≥ K_d w̲(Ω)ᵈ`
    MinWidthVolume,
    /// `Ξ(M) ≥ (2/π) μ(α)`
    MeanWidth,
    /// `L = π Ξ` for closed plane curves.
    Crofton,
    /// `Vol(Ω) ≥ L·Area(projection)/(n+1)`
    Chakerian,
    /// `Area(M) > 𝓑ₙ(ρ) μⁿ`
    EnvelopeArea,
    /// `ρ(α) > 1` for involutions.
    InvolutionRatio,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::AreaDisplacement,
        CheckId::PointPairArea,
        CheckId::SupportPairArea,
        CheckId::VolumeDisplacement,
        CheckId::IsoperimetricArea,
        CheckId::MinWidthVolume,
        CheckId::MeanWidth,
        CheckId::Crofton,
        CheckId::Chakerian,
        CheckId::EnvelopeArea,
        CheckId::InvolutionRatio,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::AreaDisplacement => "area_displacement",
            CheckId::PointPairArea => "point_pair_area",
            CheckId::SupportPairArea => "support_pair_area",
            CheckId::VolumeDisplacement => "volume_displacement",
            CheckId::IsoperimetricArea => "isoperimetric_area",
            CheckId::MinWidthVolume => "min_width_volume",
            CheckId::MeanWidth => "mean_width",
            CheckId::Crofton => "crofton",
            CheckId::Chakerian => "chakerian",
            CheckId::EnvelopeArea => "envelope_area",
            CheckId::InvolutionRatio => "involution_ratio",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown check id {s:?}")))
    }
}

/// How `lhs` and `rhs` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `margin > 0`, no slack.
    Strict,
    /// `margin ≥ −tolerance`, for non-strict inequalities with equality cases.
    AtLeast,
    /// `|margin| ≤ tolerance`, for identities.
    Equality,
}

impl Comparison {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::Strict => "strict",
            Comparison::AtLeast => "at_least",
            Comparison::Equality => "equality",
        }
    }

    pub fn passes(self, margin: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Strict => margin > 0.0,
            Comparison::AtLeast => margin >= -tolerance,
            Comparison::Equality => margin.abs() <= tolerance,
        }
    }
}

impl FromStr for Comparison {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Comparison::Strict),
            "at_least" => Ok(Comparison::AtLeast),
            "equality" => Ok(Comparison::Equality),
            _ => Err(Error::config(format!("unknown comparison {s:?}"))),
        }
    }
}

/// One evaluated inequality instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub schema_version: u32,
    pub theorem_id: CheckId,
    pub body_id: String,
    pub map_id: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`
    pub margin: f64,
    pub comparison: Comparison,
    /// Slack allowed by non-strict comparisons; zero for strict ones.
    pub tolerance: f64,
    pub pass: bool,
    /// Evaluated but not counted: an approximation entered on the side that
    /// could make the check easier to pass.
    pub advisory: bool,
    pub bound_orientation_notes: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

impl VerificationRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theorem_id: CheckId,
        body_id: impl Into<String>,
        map_id: Option<String>,
        lhs: f64,
        rhs: f64,
        comparison: Comparison,
        tolerance: f64,
        seed: u64,
    ) -> Self {
        let margin = lhs - rhs;
        VerificationRecord {
            schema_version: SCHEMA_VERSION,
            theorem_id,
            body_id: body_id.into(),
            map_id,
            lhs,
            rhs,
            margin,
            comparison,
            tolerance,
            pass: comparison.passes(margin, tolerance),
            advisory: false,
            bound_orientation_notes: String::new(),
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn advisory(mut self, advisory: bool) -> Self {
        self.advisory = advisory;
        self
    }

    pub fn notes(mut self, notes: impl Into<String>) -> Self {
        self.bound_orientation_notes = notes.into();
        self
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Counted strict failure: fails and is not advisory.
    pub fn is_violation(&self) -> bool {
        !self.pass && !self.advisory
    }

    /// Sort key used before emission.
    pub fn sort_key(&self) -> (&'static str, &str, &str) {
        (
            self.theorem_id.as_str(),
            &self.body_id,
            self.map_id.as_deref().unwrap_or(""),
        )
    }
}

/// Stable sort by `(theorem_id, body_id, map_id)`.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Indices of records whose orientation notes are missing.
pub fn audit_orientation(records: &[VerificationRecord]) -> Vec<usize> {
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.bound_orientation_notes.trim().is_empty())
        .map(|(i, _)| i)
        .collect()
}

/// 17 significant digits: enough to reproduce any `f64` exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: [&str; 14] = [
    "schema_version",
    "theorem_id",
    "body_id",
    "map_id",
    "lhs",
    "rhs",
    "margin",
    "comparison",
    "tolerance",
    "pass",
    "advisory",
    "seed",
    "bound_orientation_notes",
    "params",
];

fn encode_params(params: &BTreeMap<String, String>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn decode_params(s: &str, line: usize) -> Result<BTreeMap<String, String>> {
    s.split(';')
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or(Error::Parse {
                    line,
                    message: format!("bad parameter {p:?}"),
                })
        })
        .collect()
}

/// Writes records as a CSV table with a header row.
pub fn write_csv<W: Write>(records: &[VerificationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            r.schema_version.to_string(),
            r.theorem_id.as_str().to_string(),
            r.body_id.clone(),
            r.map_id.clone().unwrap_or_default(),
            format_f64(r.lhs),
            format_f64(r.rhs),
            format_f64(r.margin),
            r.comparison.as_str().to_string(),
            format_f64(r.tolerance),
            r.pass.to_string(),
            r.advisory.to_string(),
            r.seed.to_string(),
            r.bound_orientation_notes.clone(),
            encode_params(&r.params),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<VerificationRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected CSV header".into(),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let field = |k: usize| row.get(k).unwrap_or("");
        fn parse<T: FromStr>(s: &str, what: &str, line: usize) -> Result<T>
        where
            T::Err: fmt::Display,
        {
            s.parse().map_err(|e| Error::Parse {
                line,
                message: format!("bad {what} {s:?}: {e}"),
            })
        }
        let map_id = field(3);
        out.push(VerificationRecord {
            schema_version: parse(field(0), "schema_version", line)?,
            theorem_id: field(1).parse().map_err(|e: Error| Error::Parse {
                line,
                message: e.to_string(),
            })?,
            body_id: field(2).to_string(),
            map_id: (!map_id.is_empty()).then(|| map_id.to_string()),
            lhs: parse(field(4), "lhs", line)?,
            rhs: parse(field(5), "rhs", line)?,
            margin: parse(field(6), "margin", line)?,
            comparison: field(7).parse().map_err(|e: Error| Error::Parse {
                line,
                message: e.to_string(),
            })?,
            tolerance: parse(field(8), "tolerance", line)?,
            pass: parse(field(9), "pass", line)?,
            advisory: parse(field(10), "advisory", line)?,
            seed: parse(field(11), "seed", line)?,
            bound_orientation_notes: field(12).to_string(),
            params: decode_params(field(13), line)?,
        });
    }
    Ok(out)
}

/// Writes one JSON object per line.
pub fn write_json_lines<W: Write>(records: &[VerificationRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(|e| Error::Io(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads records written by [`write_json_lines`].
pub fn read_json_lines<R: BufRead>(input: R) -> Result<Vec<VerificationRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_text = line?;
        if line_text.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line_text).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<VerificationRecord> {
        vec![
            VerificationRecord::new(
                CheckId::AreaDisplacement,
                "sphere_n2",
                Some("euclidean_antipode".into()),
                4.0 * std::f64::consts::PI,
                0.1 + 0.2,
                Comparison::Strict,
                0.0,
                7,
            )
            .notes("rhs uses mu_hat >= mu, a stronger check")
            .param("n", 2)
            .param("mu_hat", 1.0f64 / 3.0),
            VerificationRecord::new(
                CheckId::Crofton,
                "polygon, \"quoted\"",
                None,
                1e-300,
                -5e-324,
                Comparison::Equality,
                0.005,
                u64::MAX,
            )
            .advisory(true)
            .notes("multi\nline"),
        ]
    }

    #[test]
    fn comparisons() {
        assert!(!Comparison::Strict.passes(0.0, 1.0));
        assert!(Comparison::AtLeast.passes(-1e-13, 1e-12));
        assert!(!Comparison::AtLeast.passes(-1e-11, 1e-12));
        assert!(Comparison::Equality.passes(-0.001, 0.005));
        assert!(!Comparison::Equality.passes(0.01, 0.005));
    }

    #[test]
    fn csv_round_trip() {
        let records = sample();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn json_round_trip() {
        let records = sample();
        let mut buf = Vec::new();
        write_json_lines(&records, &mut buf).unwrap();
        assert_eq!(read_json_lines(buf.as_slice()).unwrap(), records);
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .lines()
            .next()
            .unwrap()
            .contains("\"theorem_id\":\"area_displacement\""));
    }

    #[test]
    fn ids_parse() {
        for c in CheckId::ALL {
            assert_eq!(c.as_str().parse::<CheckId>().unwrap(), c);
        }
        assert!("thm".parse::<CheckId>().is_err());
    }

    #[test]
    fn audit_flags_missing_notes() {
        let mut records = sample();
        records[1].bound_orientation_notes = " ".into();
        assert_eq!(audit_orientation(&records), vec![1]);
    }

    proptest::proptest! {
        #[test]
        fn finite_values_round_trip_exactly(
            lhs in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL,
            rhs in proptest::num::f64::NORMAL,
            seed in proptest::prelude::any::<u64>(),
        ) {
            let records = vec![VerificationRecord::new(
                CheckId::VolumeDisplacement, "b", None, lhs, rhs, Comparison::AtLeast, 1e-12, seed,
            ).notes("n").param("x", rhs)];
            let mut json = Vec::new();
            write_json_lines(&records, &mut json).unwrap();
            proptest::prop_assert_eq!(&read_json_lines(json.as_slice()).unwrap(), &records);
            let mut csv = Vec::new();
            write_csv(&records, &mut csv).unwrap();
            proptest::prop_assert_eq!(&read_csv(csv.as_slice()).unwrap(), &records);
        }
    }
}
