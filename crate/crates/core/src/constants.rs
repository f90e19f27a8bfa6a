//! Closed-form constants of the area bound and the crossing point that
//! defines the area constant `hₙ`.
//!
//! Two lower bounds for `Area(M)/μ(α)ⁿ` compete as functions of the
//! displacement ratio `ρ`:
//!
//! * the *intrinsic pair bound* `𝓘ₙ(ρ)`, increasing in `ρ` and piecewise with a
//!   branch change at `ρₙ` ([`branch_point`]);
//! * the *isoperimetric bound* `𝓙ₙ(ρ)`, built from a Pál-type minimum-width
//!   volume constant and decreasing like `ρ⁻ⁿ`.
//!
//! Their unique crossing `ρₙ*` gives `hₙ = 𝓘ₙ(ρₙ*) = 𝓙ₙ(ρₙ*)`. The crossing
//! lies beyond the branch point exactly when the first-branch offset `Aₙ`
//! exceeds the branch offset `Bₙ = ρₙ − 1`; then `ρₙ*` is the root of
//! `ρ(ρ − 1)ⁿ⁻¹ = Cₙⁿ⁻¹`, otherwise `ρₙ* = 1 + Aₙ`.
//!
//! Everything is evaluated on log scale and returned as [`LogReal`].

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    ln_pi, log_double_factorial, log_factorial, log_unit_ball_volume, log_unit_sphere_area, LogReal,
};

/// Which minimum-width volume constant enters the isoperimetric bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PalKind {
    /// `2/(√3·d!)`, valid for every `d ≥ 2`.
    #[default]
    PalFirey,
    /// Bezdek's improved constant `F_d`, defined for `d ≥ 3`.
    Bezdek,
}

impl PalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PalKind::PalFirey => "pal_firey",
            PalKind::Bezdek => "bezdek",
        }
    }
}

impl std::str::FromStr for PalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pal_firey" | "pal-firey" => Ok(PalKind::PalFirey),
            "bezdek" => Ok(PalKind::Bezdek),
            other => Err(Error::config(format!("unknown constant kind {other:?}"))),
        }
    }
}

/// Which piece of the intrinsic pair bound contains the crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `ρₙ* ≤ ρₙ`
    First,
    /// `ρₙ* > ρₙ`
    Second,
}

/// A displacement ratio `ρ(α) ≥ 1`: intrinsic over extrinsic displacement.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DisplacementRatio(f64);

impl DisplacementRatio {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::domain(format!(
                "a displacement ratio is at least 1, got {rho}"
            )));
        }
        Ok(DisplacementRatio(rho))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("dimension n must be >= 2, got {n}")));
    }
    Ok(())
}

fn check_open_ratio(rho: f64) -> Result<()> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::domain(format!(
            "rho must be a finite value > 1, got {rho}"
        )));
    }
    Ok(())
}

/// `ln((ρ − 1)/ρ)`, evaluated through `ρ − 1` so it stays accurate near 1.
fn log_shrink(rho: f64) -> f64 {
    let excess = rho - 1.0;
    excess.ln() - excess.ln_1p()
}

/// `ln(ω_{n−1}/ω_{n−2})`
fn log_ball_ratio(n: u32) -> f64 {
    log_unit_ball_volume(n - 1) - log_unit_ball_volume(n - 2)
}

/// `Bₙ = 1/((n−1)ω_{n−1}/ω_{n−2} − 1)`, the offset of the branch point from 1.
pub fn branch_offset(n: u32) -> Result<LogReal> {
    check_dimension(n)?;
    let scaled = (n as f64 - 1.0) * log_ball_ratio(n).exp();
    Ok(LogReal::from_f64(scaled - 1.0).recip())
}

/// `ρₙ = (n−1)ω_{n−1} / ((n−1)ω_{n−1} − ω_{n−2})`, where the two pieces of the
/// intrinsic pair bound meet.
pub fn branch_point(n: u32) -> Result<f64> {
    Ok(1.0 + branch_offset(n)?.to_f64_lossy())
}

/// `mₙ(ρ)`, the smallest of the three volume terms `(ωₙ/2)t`, `(ω_{n−1}/n)t`
/// and `ω_{n−2}/(n(n−1))` with `t = (ρ−1)/ρ`.
pub fn pair_bound_minimum(n: u32, rho: f64) -> Result<LogReal> {
    check_dimension(n)?;
    check_open_ratio(rho)?;
    let nf = n as f64;
    let shrink = log_shrink(rho);
    let candidates = [
        log_unit_ball_volume(n) - LN_2 + shrink,
        log_unit_ball_volume(n - 1) - nf.ln() + shrink,
        log_unit_ball_volume(n - 2) - nf.ln() - (nf - 1.0).ln(),
    ];
    Ok(LogReal::from_ln(
        candidates.into_iter().fold(f64::INFINITY, f64::min),
    ))
}

/// One piece of the intrinsic pair bound, regardless of where `ρ` lies.
pub fn intrinsic_pair_branch(n: u32, rho: f64, branch: Branch) -> Result<LogReal> {
    check_dimension(n)?;
    check_open_ratio(rho)?;
    let nf = n as f64;
    let shrink = log_shrink(rho);
    let ln = match branch {
        Branch::First => log_unit_ball_volume(n - 1) - nf.ln() - (nf - 2.0) * LN_2 + nf * shrink,
        Branch::Second => {
            log_unit_ball_volume(n - 2) - nf.ln() - (nf - 1.0).ln() - (nf - 2.0) * LN_2
                + (nf - 1.0) * shrink
        }
    };
    Ok(LogReal::from_ln(ln))
}

/// `𝓘ₙ(ρ)`: area lower bound per `d_M(x,y)ⁿ` for a pair with
/// `d_M(x,y) ≥ ρ|y − x|`.
pub fn intrinsic_pair_bound(n: u32, rho: f64) -> Result<LogReal> {
    check_dimension(n)?;
    check_open_ratio(rho)?;
    let branch = if rho <= branch_point(n)? {
        Branch::First
    } else {
        Branch::Second
    };
    intrinsic_pair_branch(n, rho, branch)
}

/// Area of the right circular cylinder of height `1/ρ` whose cap centres are
/// at intrinsic distance 1: an upper bound for the best pair constant.
pub fn cylinder_area_bound(n: u32, rho: f64) -> Result<LogReal> {
    check_dimension(n)?;
    check_open_ratio(rho)?;
    let nf = n as f64;
    let ln = log_unit_ball_volume(n) - (nf - 1.0) * LN_2
        + (nf - 1.0) * log_shrink(rho)
        + ((nf - 1.0) / rho).ln_1p();
    Ok(LogReal::from_ln(ln))
}

/// `𝓘ₙ*(ρ) = ωₙ/2ⁿ⁻¹·((ρ−1)/ρ)ⁿ`, valid when both hyperplanes orthogonal to
/// the chord at its ends support the body.
pub fn support_pair_bound(n: u32, rho: f64) -> Result<LogReal> {
    check_dimension(n)?;
    check_open_ratio(rho)?;
    let nf = n as f64;
    Ok(LogReal::from_ln(
        log_unit_ball_volume(n) - (nf - 1.0) * LN_2 + nf * log_shrink(rho),
    ))
}

/// Minimum-width volume constant in dimension `d`: `2/(√3·d!)` or Bezdek's `F_d`.
pub fn pal_constant(d: u32, kind: PalKind) -> Result<LogReal> {
    if d < 2 {
        return Err(Error::domain(format!("dimension d must be >= 2, got {d}")));
    }
    let ln = match kind {
        PalKind::PalFirey => LN_2 - 0.5 * 3f64.ln() - log_factorial(d as u64),
        PalKind::Bezdek => {
            if d < 3 {
                return Err(Error::domain("the Bezdek constant needs d >= 3"));
            }
            let df = d as f64;
            let d64 = d as u64;
            let inner = if d.is_multiple_of(2) {
                3f64.ln() + (df - 3.0) * ln_pi() + log_double_factorial(d64 + 2)
                    - 2.0 * (df + 1.0).ln()
                    - 2.0 * log_double_factorial(d64)
                    - 3.0 * log_double_factorial(d64 - 1)
            } else {
                3f64.ln() + (df - 3.0) * ln_pi() + log_double_factorial(d64 + 1)
                    - (df - 2.0) * LN_2
                    - 5.0 * log_double_factorial(d64)
            };
            0.5 * inner
        }
    };
    Ok(LogReal::from_ln(ln))
}

/// `(n/(n+1))·ln(C/ω_{n+1})`, the part shared by `𝓙ₙ`, `Aₙ` and `Cₙ`.
fn log_width_term(n: u32, log_pal: f64) -> f64 {
    let nf = n as f64;
    nf / (nf + 1.0) * (log_pal - log_unit_ball_volume(n + 1))
}

fn isoperimetric_with(n: u32, rho: f64, log_pal: f64) -> LogReal {
    LogReal::from_ln(log_unit_sphere_area(n) + log_width_term(n, log_pal) - n as f64 * rho.ln())
}

/// `𝓙ₙ(ρ) = σₙ (C/ω_{n+1})^{n/(n+1)} ρ⁻ⁿ` with `C` the Pál-type constant in
/// dimension `n + 1`.
pub fn isoperimetric_bound(n: u32, rho: f64, kind: PalKind) -> Result<LogReal> {
    check_dimension(n)?;
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho must be >= 1, got {rho}")));
    }
    let log_pal = pal_constant(n + 1, kind)?.ln();
    Ok(isoperimetric_with(n, rho, log_pal))
}

fn first_branch_offset_with(n: u32, log_pal: f64) -> f64 {
    let nf = n as f64;
    ((nf - 1.0) * LN_2 + ln_pi() + nf.ln()) / nf
        + (log_pal - log_unit_ball_volume(n + 1)) / (nf + 1.0)
}

/// `Aₙ = (2ⁿ⁻¹πn)^{1/n} (C/ω_{n+1})^{1/(n+1)}`: the crossing offset `ρₙ* − 1`
/// when the crossing falls on the first branch.
pub fn first_branch_offset(n: u32, kind: PalKind) -> Result<LogReal> {
    check_dimension(n)?;
    let log_pal = pal_constant(n + 1, kind)?.ln();
    Ok(LogReal::from_ln(first_branch_offset_with(n, log_pal)))
}

fn root_scale_with(n: u32, log_pal: f64) -> f64 {
    let nf = n as f64;
    LN_2 + (ln_pi() + nf.ln() + (nf - 1.0).ln() + log_ball_ratio(n) + log_width_term(n, log_pal))
        / (nf - 1.0)
}

/// `Cₙ`, the `(n−1)`-st root of the right side of `ρ(ρ−1)ⁿ⁻¹ = Cₙⁿ⁻¹`.
pub fn root_scale(n: u32, kind: PalKind) -> Result<LogReal> {
    check_dimension(n)?;
    let log_pal = pal_constant(n + 1, kind)?.ln();
    Ok(LogReal::from_ln(root_scale_with(n, log_pal)))
}

/// Result of the crossing solve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub rho_star: f64,
    /// `ρₙ* − 1`, kept separately because it carries more digits near 1.
    pub rho_star_minus_one: f64,
    pub branch: Branch,
    /// `|ln 𝓘ₙ(ρₙ*) − ln 𝓙ₙ(ρₙ*)|`
    pub log_residual: f64,
    pub iterations: u32,
}

/// Default tolerance of [`crossing_point`].
pub const CROSSING_TOLERANCE: f64 = 1e-10;

const BRACKET_LOW: f64 = 1e-12;
const BRACKET_HIGH: f64 = 1e6;
const BISECTION_WIDTH: f64 = 1e-13;

/// Crossing `ρₙ*` of the intrinsic pair bound and the isoperimetric bound.
pub fn crossing_point(n: u32, kind: PalKind, tol: f64) -> Result<Crossing> {
    check_dimension(n)?;
    if !(tol > 0.0) {
        return Err(Error::config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let log_pal = pal_constant(n + 1, kind)?.ln();
    crossing_for_constant(n, log_pal, tol)
}

pub(crate) fn crossing_for_constant(n: u32, log_pal: f64, tol: f64) -> Result<Crossing> {
    let log_a = first_branch_offset_with(n, log_pal);
    let log_b = branch_offset(n)?.ln();
    let nm1 = n as f64 - 1.0;

    let (excess, branch, iterations) = if log_a <= log_b {
        (log_a.exp(), Branch::First, 0)
    } else {
        // Residual in s = ln(ρ − 1): ln ρ + (n−1)s − (n−1) ln Cₙ, increasing in s.
        let target = nm1 * root_scale_with(n, log_pal);
        let residual = |s: f64| s.exp().ln_1p() + nm1 * s - target;
        let slope = |s: f64| {
            let e = s.exp();
            e / (1.0 + e) + nm1
        };

        let floor = BRACKET_LOW.ln();
        let ceiling = (BRACKET_HIGH - 1.0).ln();
        let mut lo = log_b.max(floor);
        if residual(lo) > 0.0 {
            lo = floor;
        }
        if residual(lo) > 0.0 {
            return Err(Error::Numerical {
                what: "crossing point below the bracket".into(),
                diagnostics: format!("n={n}, residual at rho=1+1e-12 is {}", residual(lo)),
            });
        }
        let mut hi = lo;
        let mut step = 1.0;
        while residual(hi) <= 0.0 {
            hi += step;
            step *= 2.0;
            if hi > ceiling {
                hi = ceiling;
                if residual(hi) <= 0.0 {
                    return Err(Error::Numerical {
                        what: "crossing point above the bracket".into(),
                        diagnostics: format!("n={n}, residual at rho=1e6 is {}", residual(hi)),
                    });
                }
                break;
            }
        }

        let mut iterations = 0;
        while hi - lo > BISECTION_WIDTH * lo.abs().max(1.0) && iterations < 400 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
        let mut s = 0.5 * (lo + hi);
        for _ in 0..2 {
            let next = s - residual(s) / slope(s);
            if next.is_finite() && (lo - BISECTION_WIDTH..=hi + BISECTION_WIDTH).contains(&next) {
                s = next;
            }
        }
        (s.exp(), Branch::Second, iterations)
    };

    let rho = 1.0 + excess;
    let log_i = intrinsic_pair_branch(n, rho, branch)?.ln();
    let log_j = isoperimetric_with(n, rho, log_pal).ln();
    let log_residual = (log_i - log_j).abs();
    // both logs carry rounding proportional to their magnitude
    let floor = 64.0 * f64::EPSILON * log_i.abs().max(log_j.abs());
    if !(log_residual <= tol + floor) {
        return Err(Error::Numerical {
            what: "crossing residual above tolerance".into(),
            diagnostics: format!(
                "n={n}, |ln I - ln J| = {log_residual:e}, tol = {tol:e}, rounding floor = {floor:e}"
            ),
        });
    }
    Ok(Crossing {
        rho_star: rho,
        rho_star_minus_one: excess,
        branch,
        log_residual,
        iterations,
    })
}

/// The area constant `hₙ`: the common value of both bounds at the crossing.
pub fn area_constant(n: u32, kind: PalKind) -> Result<LogReal> {
    let crossing = crossing_point(n, kind, CROSSING_TOLERANCE)?;
    let log_pal = pal_constant(n + 1, kind)?.ln();
    Ok(LogReal::from_ln(
        log_unit_sphere_area(n) + log_width_term(n, log_pal)
            - n as f64 * crossing.rho_star_minus_one.ln_1p(),
    ))
}

/// `𝓑ₙ(ρ) = max(𝓘ₙ(ρ), 𝓙ₙ(ρ))` on `[1, ∞)`, with `𝓘ₙ(1) = 0`.
pub fn envelope(n: u32, rho: f64, kind: PalKind) -> Result<LogReal> {
    let j = isoperimetric_bound(n, rho, kind)?;
    if rho == 1.0 {
        return Ok(j);
    }
    let i = intrinsic_pair_bound(n, rho)?;
    Ok(if i > j { i } else { j })
}

/// Limit of the second piece of `𝓘ₙ` as `ρ → ∞`: `ω_{n−2}/(n(n−1)2ⁿ⁻²)`.
pub fn intrinsic_pair_limit(n: u32) -> Result<LogReal> {
    check_dimension(n)?;
    let nf = n as f64;
    Ok(LogReal::from_ln(
        log_unit_ball_volume(n - 2) - nf.ln() - (nf - 1.0).ln() - (nf - 2.0) * LN_2,
    ))
}

/// `σₙ/πⁿ`, the constant realised by the antipodal map of the round sphere.
pub fn sphere_reference(n: u32) -> LogReal {
    LogReal::from_ln(log_unit_sphere_area(n) - n as f64 * ln_pi())
}

/// `Pₙ = nⁿ⁻¹σₙ/π`, the mean-curvature constant.
pub fn mean_curvature_constant(n: u32) -> LogReal {
    let nf = n as f64;
    let power = if n == 0 { 0.0 } else { (nf - 1.0) * nf.ln() };
    LogReal::from_ln(power + log_unit_sphere_area(n) - ln_pi())
}

/// `hₙ / (σₙ/πⁿ)`: how far the proven constant sits below the sphere's.
pub fn suboptimality_factor(n: u32, kind: PalKind) -> Result<LogReal> {
    Ok(area_constant(n, kind)? / sphere_reference(n))
}

/// The closed form `(π/6)^{1/3} / (1 + (π/6)^{1/6})²` quoted for `h₂`.
pub fn quoted_h2_closed_form() -> f64 {
    let base = PI / 6.0;
    base.cbrt() / (1.0 + base.powf(1.0 / 6.0)).powi(2)
}

/// Values quoted alongside the closed form for `n = 2, 3, 4`.
pub fn quoted_area_constant(n: u32) -> Option<f64> {
    match n {
        2 => Some(0.2237),
        3 => Some(0.0443),
        4 => Some(0.0080),
        _ => None,
    }
}

/// All per-dimension constants for one `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub n: u32,
    pub kind: PalKind,
    pub rho_n: f64,
    pub a_n: f64,
    pub b_n: f64,
    pub c_n: f64,
    pub rho_star: f64,
    pub log_h_n: f64,
    pub branch: Branch,
    pub log_residual: f64,
    pub log_sphere_reference: f64,
    pub log_suboptimality: f64,
}

impl ConstantsRow {
    /// `hₙ` on linear scale, `None` if it underflows the decode range.
    pub fn h_n(&self) -> Option<f64> {
        LogReal::from_ln(self.log_h_n).to_f64()
    }
}

pub fn constants_row(n: u32, kind: PalKind) -> Result<ConstantsRow> {
    let crossing = crossing_point(n, kind, CROSSING_TOLERANCE)?;
    let log_h = area_constant(n, kind)?.ln();
    let sphere = sphere_reference(n).ln();
    Ok(ConstantsRow {
        n,
        kind,
        rho_n: branch_point(n)?,
        a_n: first_branch_offset(n, kind)?.to_f64_lossy(),
        b_n: branch_offset(n)?.to_f64_lossy(),
        c_n: root_scale(n, kind)?.to_f64_lossy(),
        rho_star: crossing.rho_star,
        log_h_n: log_h,
        branch: crossing.branch,
        log_residual: crossing.log_residual,
        log_sphere_reference: sphere,
        log_suboptimality: log_h - sphere,
    })
}

/// Summary of a scan of `Aₙ > Bₙ` over a range of dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffsetScan {
    pub first: u32,
    pub last: u32,
    pub checked: u64,
    /// Dimensions where `Aₙ ≤ Bₙ`.
    pub violations: Vec<u32>,
    pub min_ratio: f64,
    pub argmin: u32,
}

/// `Aₙ/Bₙ` on linear scale.
pub fn offset_ratio(n: u32, kind: PalKind) -> Result<f64> {
    Ok((first_branch_offset(n, kind)? / branch_offset(n)?).to_f64_lossy())
}

/// Checks `Aₙ > Bₙ` for every `n` in `first..=last`, in parallel with a
/// deterministic reduction.
pub fn scan_offsets(first: u32, last: u32, kind: PalKind) -> Result<OffsetScan> {
    check_dimension(first)?;
    if last < first {
        return Err(Error::config(format!("empty range {first}..={last}")));
    }
    const CHUNK: u32 = 4096;
    let starts: Vec<u32> = (first..=last).step_by(CHUNK as usize).collect();
    let log_pal_of = |n: u32| pal_constant(n + 1, kind).map(|c| c.ln());
    let partials: Vec<Result<(Vec<u32>, f64, u32)>> = starts
        .par_iter()
        .map(|&start| {
            let end = start.saturating_add(CHUNK - 1).min(last);
            let mut violations = Vec::new();
            let mut min_log = f64::INFINITY;
            let mut argmin = start;
            for n in start..=end {
                let log_ratio =
                    first_branch_offset_with(n, log_pal_of(n)?) - branch_offset(n)?.ln();
                if !(log_ratio > 0.0) {
                    violations.push(n);
                }
                if log_ratio < min_log {
                    min_log = log_ratio;
                    argmin = n;
                }
            }
            Ok((violations, min_log, argmin))
        })
        .collect();
    let mut violations = Vec::new();
    let mut min_log = f64::INFINITY;
    let mut argmin = first;
    for part in partials {
        let (v, m, a) = part?;
        violations.extend(v);
        if m < min_log {
            min_log = m;
            argmin = a;
        }
    }
    Ok(OffsetScan {
        first,
        last,
        checked: (last - first) as u64 + 1,
        violations,
        min_ratio: min_log.exp(),
        argmin,
    })
}
