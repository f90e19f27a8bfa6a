//! Plain-text body definitions.
//!
//! A body file starts with a header line `kind <name> key=value ...` followed,
//! for vertex-defined bodies, by one point per line. Blank lines and anything
//! after `#` are ignored.
//!
//! ```text
//! # unit sphere in R^3
//! kind sphere n=2 radius=1
//! ```
//!
//! ```text
//! kind polytope name=wedge
//! 0 0 0
//! 1 0 0
//! 0 1 0
//! 0 0 1
//! ```
//!
//! Kinds and their keys (all optional, defaults in brackets):
//! `sphere n=[2] radius=[1]`, `cylinder n=[2] rho=[20]` or `cylinder n radius height`,
//! `triangle side=[1]`, `regular_polygon sides=[6] side=[1]`, `cube edge=[1]`,
//! `tetrahedron edge=[1]`, `random_polytope seed=[0] vertices=[24] sx sy sz name`,
//! `polytope name` (3-d points), `polygon name` (2-d points, counter-clockwise).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    ConvexBody, CylinderBody, PolygonBoundary, Polytope3, SphereBody, DEFAULT_STEINER_POINTS,
};

/// Vertices drawn for a random polytope when the count is not given.
pub const DEFAULT_POLYTOPE_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Sphere {
        n: usize,
        radius: f64,
    },
    Cylinder {
        n: usize,
        radius: f64,
        height: f64,
    },
    Triangle {
        side: f64,
    },
    RegularPolygon {
        sides: usize,
        side: f64,
    },
    Cube {
        edge: f64,
    },
    Tetrahedron {
        edge: f64,
    },
    /// Seeded random hull, optionally stretched along the axes.
    RandomPolytope {
        seed: u64,
        vertices: usize,
        stretch: [f64; 3],
        name: Option<String>,
    },
    Polytope {
        name: String,
        points: Vec<[f64; 3]>,
    },
    Polygon {
        name: String,
        points: Vec<[f64; 2]>,
    },
}

impl BodySpec {
    /// The cylinder whose cap centres have intrinsic distance 1 and chord `1/ρ`.
    pub fn cylinder_with_ratio(n: usize, rho: f64) -> Self {
        BodySpec::Cylinder {
            n,
            radius: (rho - 1.0) / (2.0 * rho),
            height: 1.0 / rho,
        }
    }

    pub fn random_polytope(seed: u64, vertices: usize) -> Self {
        BodySpec::RandomPolytope {
            seed,
            vertices,
            stretch: [1.0, 1.0, 1.0],
            name: None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BodySpec::Sphere { .. } => "sphere",
            BodySpec::Cylinder { .. } => "cylinder",
            BodySpec::Triangle { .. } => "triangle",
            BodySpec::RegularPolygon { .. } => "regular_polygon",
            BodySpec::Cube { .. } => "cube",
            BodySpec::Tetrahedron { .. } => "tetrahedron",
            BodySpec::RandomPolytope { .. } => "random_polytope",
            BodySpec::Polytope { .. } => "polytope",
            BodySpec::Polygon { .. } => "polygon",
        }
    }

    /// Builds the body with the default Steiner refinement for polytopes.
    pub fn build(&self) -> Result<Arc<dyn ConvexBody>> {
        self.build_with(DEFAULT_STEINER_POINTS)
    }

    /// Builds the body; `steiner_points` only affects polytopes.
    pub fn build_with(&self, steiner_points: usize) -> Result<Arc<dyn ConvexBody>> {
        Ok(match self {
            BodySpec::Sphere { n, radius } => Arc::new(SphereBody::new(vec![0.0; n + 1], *radius)?),
            BodySpec::Cylinder { n, radius, height } => {
                Arc::new(CylinderBody::new(*n, *radius, *height)?)
            }
            BodySpec::Triangle { side } => Arc::new(PolygonBoundary::equilateral_triangle(*side)?),
            BodySpec::RegularPolygon { sides, side } => {
                Arc::new(PolygonBoundary::regular(*sides, *side)?)
            }
            BodySpec::Polygon { name, points } => {
                Arc::new(PolygonBoundary::named(points.clone(), name.clone())?)
            }
            _ => Arc::new(self.build_polytope(steiner_points)?),
        })
    }

    /// Builds a vertex-defined 3-polytope; fails for other kinds.
    pub fn build_polytope(&self, steiner_points: usize) -> Result<Polytope3> {
        let p = match self {
            BodySpec::Cube { edge } => Polytope3::cube(*edge)?,
            BodySpec::Tetrahedron { edge } => Polytope3::regular_tetrahedron(*edge)?,
            BodySpec::RandomPolytope {
                seed,
                vertices,
                stretch,
                name,
            } => {
                let base = Polytope3::random(*seed, *vertices)?;
                let p = if *stretch == [1.0, 1.0, 1.0] {
                    base
                } else {
                    base.scaled(*stretch, base.id())?
                };
                match name {
                    Some(name) => p.with_name(name.clone()),
                    None => p,
                }
            }
            BodySpec::Polytope { name, points } => Polytope3::hull(name.clone(), points)?,
            other => {
                return Err(Error::config(format!(
                    "{} is not a 3-polytope",
                    other.kind_name()
                )))
            }
        };
        Ok(p.with_steiner_points(steiner_points))
    }

    /// Header line and point lines in the documented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("kind {}", self.kind_name());
        let mut points = String::new();
        match self {
            BodySpec::Sphere { n, radius } => write!(out, " n={n} radius={radius:?}"),
            BodySpec::Cylinder { n, radius, height } => {
                write!(out, " n={n} radius={radius:?} height={height:?}")
            }
            BodySpec::Triangle { side } => write!(out, " side={side:?}"),
            BodySpec::RegularPolygon { sides, side } => write!(out, " sides={sides} side={side:?}"),
            BodySpec::Cube { edge } | BodySpec::Tetrahedron { edge } => {
                write!(out, " edge={edge:?}")
            }
            BodySpec::RandomPolytope {
                seed,
                vertices,
                stretch,
                name,
            } => {
                let r = write!(
                    out,
                    " seed={seed} vertices={vertices} sx={:?} sy={:?} sz={:?}",
                    stretch[0], stretch[1], stretch[2]
                );
                match name {
                    Some(name) => write!(out, " name={name}"),
                    None => r,
                }
            }
            BodySpec::Polytope { name, points: pts } => {
                for p in pts {
                    let _ = writeln!(points, "{:?} {:?} {:?}", p[0], p[1], p[2]);
                }
                write!(out, " name={name}")
            }
            BodySpec::Polygon { name, points: pts } => {
                for p in pts {
                    let _ = writeln!(points, "{:?} {:?}", p[0], p[1]);
                }
                write!(out, " name={name}")
            }
        }
        .expect("writing to a String");
        out.push('\n');
        out.push_str(&points);
        out
    }

    /// Parses the text format.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty body file".into(),
        })?;
        let mut words = header.split_whitespace();
        if words.next() != Some("kind") {
            return Err(Error::Parse {
                line: header_line,
                message: "expected `kind <name> key=value ...`".into(),
            });
        }
        let kind = words.next().ok_or(Error::Parse {
            line: header_line,
            message: "missing body kind".into(),
        })?;
        let params = parse_params(words, header_line)?;
        let mut rows = Vec::new();
        for (line, l) in lines {
            let coords = l
                .split_whitespace()
                .map(|w| {
                    w.parse::<f64>().map_err(|e| Error::Parse {
                        line,
                        message: format!("bad coordinate {w:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push((line, coords));
        }
        build_spec(kind, &params, rows, header_line)
    }

    /// Reads a body file.
    pub fn read_file(path: &std::path::Path) -> Result<Self> {
        BodySpec::parse_text(&std::fs::read_to_string(path)?)
    }
}

/// Short inline form `kind[:key=value,key=value]`, e.g. `cube:edge=2`.
impl FromStr for BodySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = parse_params(rest.split(',').filter(|w| !w.is_empty()), 0)?;
        build_spec(kind.trim(), &params, Vec::new(), 0)
    }
}

fn parse_params<'a>(
    words: impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<BTreeMap<String, String>> {
    words
        .map(|w| {
            w.trim()
                .split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or(Error::Parse {
                    line,
                    message: format!("expected key=value, got {w:?}"),
                })
        })
        .collect()
}

struct Params<'a> {
    map: &'a BTreeMap<String, String>,
    line: usize,
}

impl Params<'_> {
    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e| Error::Parse {
                line: self.line,
                message: format!("bad value for {key}: {e}"),
            }),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Parse {
                line: self.line,
                message: format!("unknown key {k:?}; expected one of {allowed:?}"),
            }),
            None => Ok(()),
        }
    }
}

fn points<const D: usize>(rows: Vec<(usize, Vec<f64>)>) -> Result<Vec<[f64; D]>> {
    rows.into_iter()
        .map(|(line, r)| {
            <[f64; D]>::try_from(r.as_slice()).map_err(|_| Error::Parse {
                line,
                message: format!("expected {D} coordinates, got {}", r.len()),
            })
        })
        .collect()
}

fn build_spec(
    kind: &str,
    map: &BTreeMap<String, String>,
    rows: Vec<(usize, Vec<f64>)>,
    line: usize,
) -> Result<BodySpec> {
    let p = Params { map, line };
    let vertex_defined = matches!(kind, "polytope" | "polygon");
    if !vertex_defined && !rows.is_empty() {
        return Err(Error::Parse {
            line: rows[0].0,
            message: format!("{kind} takes no point lines"),
        });
    }
    let spec = match kind {
        "sphere" => {
            p.check_keys(&["n", "radius"])?;
            BodySpec::Sphere {
                n: p.get("n", 2)?,
                radius: p.get("radius", 1.0)?,
            }
        }
        "cylinder" => {
            p.check_keys(&["n", "rho", "radius", "height"])?;
            let n = p.get("n", 2)?;
            if map.contains_key("radius") || map.contains_key("height") {
                BodySpec::Cylinder {
                    n,
                    radius: p.get("radius", 0.5)?,
                    height: p.get("height", 1.0)?,
                }
            } else {
                BodySpec::cylinder_with_ratio(n, p.get("rho", 20.0)?)
            }
        }
        "triangle" => {
            p.check_keys(&["side"])?;
            BodySpec::Triangle {
                side: p.get("side", 1.0)?,
            }
        }
        "regular_polygon" => {
            p.check_keys(&["sides", "side"])?;
            BodySpec::RegularPolygon {
                sides: p.get("sides", 6)?,
                side: p.get("side", 1.0)?,
            }
        }
        "cube" => {
            p.check_keys(&["edge"])?;
            BodySpec::Cube {
                edge: p.get("edge", 1.0)?,
            }
        }
        "tetrahedron" => {
            p.check_keys(&["edge"])?;
            BodySpec::Tetrahedron {
                edge: p.get("edge", 1.0)?,
            }
        }
        "random_polytope" => {
            p.check_keys(&["seed", "vertices", "sx", "sy", "sz", "name"])?;
            BodySpec::RandomPolytope {
                seed: p.get("seed", 0)?,
                vertices: p.get("vertices", DEFAULT_POLYTOPE_VERTICES)?,
                stretch: [p.get("sx", 1.0)?, p.get("sy", 1.0)?, p.get("sz", 1.0)?],
                name: map.get("name").cloned(),
            }
        }
        "polytope" => {
            p.check_keys(&["name"])?;
            BodySpec::Polytope {
                name: p.get("name", "polytope".to_string())?,
                points: points::<3>(rows)?,
            }
        }
        "polygon" => {
            p.check_keys(&["name"])?;
            BodySpec::Polygon {
                name: p.get("name", "polygon".to_string())?,
                points: points::<2>(rows)?,
            }
        }
        other => {
            return Err(Error::Parse {
                line,
                message: format!("unknown body kind {other:?}"),
            })
        }
    };
    Ok(spec)
}
