//! Large-`n` behaviour of the crossing constants.
//!
//! The crossing equation `ρ(ρ − 1)ⁿ⁻¹ = Cₙⁿ⁻¹` is `f_N(ρ) = Cₙ` for
//! `f_N(ρ) = ρ^{1/N}(ρ − 1)` with `N = n − 1`. Its local inverse around
//! `ρ = 1` is the power series [`InverseSeries`]; the remaining functions are
//! the leading-order formulas for `Cₙ`, `ρₙ*`, `ln hₙ` and `Aₙ/Bₙ`, and a
//! comparison harness pairing them with the exact values.

use std::f64::consts::{E, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{
    area_constant, branch_offset, crossing_point, first_branch_offset, root_scale, PalKind,
    CROSSING_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::numerics::{log_factorial, LogReal, Sign};

/// Relative size of the next term at which series evaluation stops.
pub const TRUNCATION_RATIO: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// `f_N(ρ) = ρ^{1/N}(ρ − 1)`, extended to `ρ < 0` as `sign(ρ)|ρ|^{1/N}(ρ − 1)`.
pub fn forward_map(order: u32, rho: f64) -> f64 {
    rho.signum() * rho.abs().powf(1.0 / order as f64) * (rho - 1.0)
}

/// `N/(N+1)^{1+1/N}`, the radius of convergence of the inverse series.
pub fn inverse_radius(order: u32) -> f64 {
    let n = order as f64;
    (n.ln() - (1.0 + 1.0 / n) * (n + 1.0).ln()).exp()
}

/// `|a_{k+1}| / |a_k|` for the inverse-series coefficients.
pub fn coefficient_ratio(order: u32, k: usize) -> f64 {
    let n = order as f64;
    let kf = k as f64;
    let mut ratio = ((n + 1.0) * kf + 1.0 - n) / (n * kf + n);
    for j in 0..k.saturating_sub(1) {
        let base = kf + n * j as f64;
        ratio *= (base + 1.0) / base;
    }
    ratio
}

/// Truncated Lagrange inversion of `f_N` around `ρ = 1`:
/// `1 + Σ_{k≥1} a_k yᵏ` with `a_k = (−1)^{k−1}(k/N)^{(k−1)}/k!`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseSeries {
    order: u32,
    /// `a_1, a_2, …` with `a_k` at index `k − 1`.
    coefficients: Vec<LogReal>,
    radius: f64,
}

/// Value of the inverse series at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseValue {
    pub rho: f64,
    /// `|f_N(ρ) − y|`
    pub residual: f64,
    pub terms_used: usize,
}

impl InverseSeries {
    pub fn new(order: u32, max_terms: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("series order N must be >= 1"));
        }
        if !(2..=MAX_SERIES_TERMS).contains(&max_terms) {
            return Err(Error::config(format!(
                "max_terms must be in 2..={MAX_SERIES_TERMS}, got {max_terms}"
            )));
        }
        let mut coefficients = Vec::with_capacity(max_terms);
        let mut log_mag = 0.0;
        for k in 1..=max_terms {
            let sign = if k % 2 == 1 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            coefficients.push(LogReal::from_parts(sign, log_mag));
            log_mag += coefficient_ratio(order, k).ln();
        }
        Ok(InverseSeries {
            order,
            coefficients,
            radius: inverse_radius(order),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn max_terms(&self) -> usize {
        self.coefficients.len()
    }

    /// `a_k` for `k ≥ 1`.
    pub fn coefficient(&self, k: usize) -> Option<LogReal> {
        k.checked_sub(1)
            .and_then(|i| self.coefficients.get(i))
            .copied()
    }

    /// Sums the series at `y`, stopping once a term drops below
    /// [`TRUNCATION_RATIO`] of the partial sum.
    pub fn evaluate(&self, y: f64) -> Result<InverseValue> {
        if !(y.abs() < self.radius) {
            return Err(Error::Divergence {
                y: y.abs(),
                radius: self.radius,
            });
        }
        Ok(self.sum(y, self.coefficients.len(), true))
    }

    /// Partial sums with exactly `terms` terms each, without the radius check.
    /// Outside the radius the residuals grow with the term count.
    pub fn truncation_residuals(&self, y: f64, term_counts: &[usize]) -> Result<Vec<f64>> {
        term_counts
            .iter()
            .map(|&t| {
                if t == 0 || t > self.coefficients.len() {
                    Err(Error::config(format!(
                        "term count {t} outside 1..={}",
                        self.coefficients.len()
                    )))
                } else {
                    Ok(self.sum(y, t, false).residual)
                }
            })
            .collect()
    }

    fn sum(&self, y: f64, terms: usize, early_stop: bool) -> InverseValue {
        if y == 0.0 {
            return InverseValue {
                rho: 1.0,
                residual: forward_map(self.order, 1.0).abs(),
                terms_used: 0,
            };
        }
        let y_log = LogReal::from_f64(y);
        let mut partial: f64 = 1.0;
        let mut used = 0;
        for (i, coefficient) in self.coefficients[..terms].iter().enumerate() {
            let k = i as i32 + 1;
            let term = (*coefficient * y_log.powi(k)).to_f64_lossy();
            if early_stop && i > 0 && term.abs() < TRUNCATION_RATIO * partial.abs() {
                break;
            }
            partial += term;
            used += 1;
        }
        InverseValue {
            rho: partial,
            residual: (forward_map(self.order, partial) - y).abs(),
            terms_used: used,
        }
    }
}

/// `Φ_N(k) = (Nk+N)/((N+1)k+1−N)·(k/(k+1))^{k−1}`, a non-increasing bound
/// on the coefficient growth.
pub fn coefficient_ratio_bound(order: u32, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("k must be >= 2, got {k}")));
    }
    if order == 0 {
        return Err(Error::domain("order N must be >= 1"));
    }
    let n = order as f64;
    let kf = k as f64;
    let lead = (n * kf + n) / ((n + 1.0) * kf + 1.0 - n);
    Ok(lead * ((kf - 1.0) * (-1.0 / (kf + 1.0)).ln_1p()).exp())
}

/// `N/((N+1)e)`, the limit of `Φ_N(k)`.
pub fn coefficient_ratio_bound_limit(order: u32) -> f64 {
    let n = order as f64;
    n / ((n + 1.0) * E)
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("dimension n must be >= 2, got {n}")));
    }
    Ok(())
}

/// Leading behaviour of `Cₙ`.
pub fn asymptotic_root_scale(n: u32, kind: PalKind) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    Ok(match kind {
        PalKind::PalFirey => (2.0 * E / (PI * nf)).sqrt() * (1.0 + ln_n / nf),
        PalKind::Bezdek => {
            let scale = if n.is_multiple_of(2) { E } else { 2.0 * E };
            (scale / nf).sqrt() * (1.0 + 0.75 * ln_n / nf)
        }
    })
}

/// Leading behaviour of `ρₙ*`.
pub fn asymptotic_crossing(n: u32, kind: PalKind) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let tail = nf.ln() / nf.powf(1.5);
    Ok(match kind {
        PalKind::PalFirey => 1.0 + (2.0 * E / (PI * nf)).sqrt() + (2.0 * E / PI).sqrt() * tail,
        PalKind::Bezdek => {
            let scale = if n.is_multiple_of(2) { E } else { 2.0 * E };
            1.0 + (scale / nf).sqrt() + 0.75 * scale.sqrt() * tail
        }
    })
}

/// Leading behaviour of `ln hₙ`.
///
/// The `[1 − c·ln n/√n]` factor of the Bezdek variants enters as `−c·ln n/√n`,
/// the form in which it was derived; the literal logarithm is undefined for
/// small `n`.
pub fn asymptotic_log_area_constant(n: u32, kind: PalKind) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    let stirling = nf - nf * ln_n;
    Ok(match kind {
        PalKind::PalFirey => {
            stirling - (2.0 * E * nf / PI).sqrt() + 0.5 * (4.0 / (3.0 * E)).ln() + E / PI
                - (2.0 * E / PI).sqrt() * ln_n / nf.sqrt()
        }
        PalKind::Bezdek if n.is_multiple_of(2) => {
            (E - 1.0) / 2.0
                + 0.25 * (9.0 / (2.0 * PI * nf)).ln()
                + nf * (PI / 2.0).sqrt().ln()
                + stirling
                - (E * nf).sqrt()
                - 0.75 * E.sqrt() * ln_n / nf.sqrt()
        }
        PalKind::Bezdek => {
            E + 0.25 * (9.0 / (8.0 * PI.powi(3) * nf)).ln() + nf * PI.sqrt().ln() + stirling
                - (2.0 * E * nf).sqrt()
                - 0.75 * (2.0 * E).sqrt() * ln_n / nf.sqrt()
        }
    })
}

/// The factorial form `e^{e/π}/n!·√(8πn/(3e))·e^{−√(2en/π)}` of `hₙ`, on log scale.
pub fn asymptotic_log_area_constant_factorial(n: u32) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(
        E / PI - log_factorial(n as u64) + 0.5 * (8.0 * PI * nf / (3.0 * E)).ln()
            - (2.0 * E * nf / PI).sqrt(),
    )
}

/// `Aₙ/Bₙ ≈ exp(ln(2√e) + ln n/(2n) − 1/√(2πn))`.
pub fn asymptotic_offset_ratio(n: u32) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(((2.0 * E.sqrt()).ln() + nf.ln() / (2.0 * nf) - 1.0 / (2.0 * PI * nf).sqrt()).exp())
}

/// Leading behaviour of `hₙ/(σₙ/πⁿ)` on log scale:
/// `2e^{e/π}/√(6e)·e^{−√(2en/π)}(√(π/2))ⁿ(2πn)^{1/4}/√(n!)`.
pub fn asymptotic_log_suboptimality(n: u32) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(
        2f64.ln() + E / PI - 0.5 * (6.0 * E).ln() - (2.0 * E * nf / PI).sqrt()
            + nf * (PI / 2.0).sqrt().ln()
            + 0.25 * (2.0 * PI * nf).ln()
            - 0.5 * log_factorial(n as u64),
    )
}

/// Quantities that have a leading-order formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    CN,
    RhoStar,
    LogHN,
    AbRatio,
    BezdekLogHN,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::CN,
        Quantity::RhoStar,
        Quantity::LogHN,
        Quantity::AbRatio,
        Quantity::BezdekLogHN,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::CN => "c_n",
            Quantity::RhoStar => "rho_star",
            Quantity::LogHN => "log_h_n",
            Quantity::AbRatio => "ab_ratio",
            Quantity::BezdekLogHN => "bezdek_log_h_n",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown quantity {s:?}")))
    }
}

/// Exact value beside its asymptotic approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub n: u32,
    pub quantity: Quantity,
    pub exact: f64,
    pub asymptotic: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

fn report(n: u32, quantity: Quantity, kind: PalKind) -> Result<AsymptoticReport> {
    let (exact, asymptotic) = match quantity {
        Quantity::CN => (
            root_scale(n, kind)?.to_f64_lossy(),
            asymptotic_root_scale(n, kind)?,
        ),
        Quantity::RhoStar => (
            crossing_point(n, kind, CROSSING_TOLERANCE)?.rho_star,
            asymptotic_crossing(n, kind)?,
        ),
        Quantity::LogHN => (
            area_constant(n, kind)?.ln(),
            asymptotic_log_area_constant(n, kind)?,
        ),
        Quantity::AbRatio => {
            if kind != PalKind::PalFirey {
                return Err(Error::config(
                    "the offset-ratio formula exists only for the Pál-Firey constant",
                ));
            }
            (
                (first_branch_offset(n, kind)? / branch_offset(n)?).to_f64_lossy(),
                asymptotic_offset_ratio(n)?,
            )
        }
        Quantity::BezdekLogHN => {
            if n < 2 {
                return Err(Error::domain("dimension n must be >= 2"));
            }
            (
                area_constant(n, PalKind::Bezdek)?.ln(),
                asymptotic_log_area_constant(n, PalKind::Bezdek)?,
            )
        }
    };
    let abs_error = (exact - asymptotic).abs();
    Ok(AsymptoticReport {
        n,
        quantity,
        exact,
        asymptotic,
        abs_error,
        rel_error: abs_error / exact.abs(),
    })
}

/// Pairs exact and asymptotic values for each `n`, in input order.
pub fn compare(
    n_values: &[u32],
    quantity: Quantity,
    kind: PalKind,
) -> Result<Vec<AsymptoticReport>> {
    n_values
        .par_iter()
        .map(|&n| report(n, quantity, kind))
        .collect()
}

/// Where a "for sufficiently large n" statement starts to hold on a finite range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Smallest `n` from which the property holds through `limit`.
    pub n0: Option<u32>,
    pub limit: u32,
    /// Dimensions in `2..=limit` where the property fails.
    pub failures: Vec<u32>,
}

fn measure<F>(limit: u32, holds: F) -> Result<Threshold>
where
    F: Fn(u32) -> Result<bool> + Sync,
{
    if limit < 2 {
        return Err(Error::config(format!(
            "scan limit must be >= 2, got {limit}"
        )));
    }
    let flags: Vec<(u32, bool)> = (2..=limit)
        .into_par_iter()
        .map(|n| holds(n).map(|ok| (n, ok)))
        .collect::<Result<_>>()?;
    let failures: Vec<u32> = flags.iter().filter(|f| !f.1).map(|f| f.0).collect();
    let n0 = match failures.last() {
        None => Some(2),
        Some(&last) if last < limit => Some(last + 1),
        Some(_) => None,
    };
    Ok(Threshold {
        n0,
        limit,
        failures,
    })
}

/// Default upper end of threshold scans.
pub const THRESHOLD_SCAN_LIMIT: u32 = 2000;

/// Measures where `1 + Cₙ − Cₙ²/(n−1) ≤ ρₙ* ≤ 1 + Cₙ` starts to hold.
pub fn bracket_threshold(kind: PalKind, limit: u32) -> Result<Threshold> {
    measure(limit, |n| {
        let c = root_scale(n, kind)?.to_f64_lossy();
        let excess = crossing_point(n, kind, CROSSING_TOLERANCE)?.rho_star_minus_one;
        Ok(c - c * c / (n as f64 - 1.0) <= excess && excess <= c)
    })
}

/// Measures where `Cₙ` lies inside the radius of the order `n − 1` series.
pub fn radius_entry_threshold(kind: PalKind, limit: u32) -> Result<Threshold> {
    measure(limit, |n| {
        Ok(root_scale(n, kind)?.to_f64_lossy() < inverse_radius(n - 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quadratic_oracle_for_order_one() {
        let series = InverseSeries::new(1, 2000).unwrap();
        let y: f64 = 0.1;
        let oracle = (1.0 + (1.0 + 4.0 * y).sqrt()) / 2.0;
        let v = series.evaluate(y).unwrap();
        assert!((v.rho - oracle).abs() < 1e-12);
        assert!(v.residual < 1e-12);
        assert_eq!(series.evaluate(0.0).unwrap().rho, 1.0);
    }

    #[test]
    fn coefficient_examples() {
        for order in [1u32, 2, 3, 7, 50] {
            let s = InverseSeries::new(order, 10).unwrap();
            assert_eq!(s.coefficient(1).unwrap().to_f64(), Some(1.0));
            let a2 = s.coefficient(2).unwrap().to_f64().unwrap();
            assert!((a2 + 1.0 / order as f64).abs() < 1e-15);
            // rising factorial: a_3 = (3/N)(3/N + 1)/3!
            let n = order as f64;
            let a3 = s.coefficient(3).unwrap().to_f64().unwrap();
            assert!((a3 - (3.0 / n) * (3.0 / n + 1.0) / 6.0).abs() < 1e-15);
        }
        // order one gives the Catalan numbers with alternating sign
        let s = InverseSeries::new(1, 12).unwrap();
        let catalan = [1.0, 1.0, 2.0, 5.0, 14.0, 42.0, 132.0, 429.0, 1430.0, 4862.0];
        for (i, c) in catalan.iter().enumerate() {
            let a = s.coefficient(i + 1).unwrap().to_f64().unwrap();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - sign * c).abs() < 1e-12 * c);
        }
        assert!((inverse_radius(2) - 2.0 / 3f64.powf(1.5)).abs() < 1e-15);
        assert!((inverse_radius(1) - 0.25).abs() < 1e-16);
    }

    #[test]
    fn evaluate_rejects_outside_radius() {
        for order in [1u32, 2, 10] {
            let s = InverseSeries::new(order, 100).unwrap();
            let y = 1.05 * s.radius();
            assert!(matches!(s.evaluate(y), Err(Error::Divergence { .. })));
            assert!(matches!(s.evaluate(-y), Err(Error::Divergence { .. })));
        }
        assert!(InverseSeries::new(0, 10).is_err());
        assert!(InverseSeries::new(2, 1).is_err());
    }

    #[test]
    fn doubling_terms_shrinks_residual() {
        let s = InverseSeries::new(3, 1024).unwrap();
        let y = 0.8 * s.radius();
        let r = s.truncation_residuals(y, &[8, 16, 32, 64, 128]).unwrap();
        for w in r.windows(2) {
            assert!(w[1] < w[0], "{r:?}");
        }
    }

    #[test]
    fn inverse_matches_crossing_solver() {
        for n in [10u32, 50, 200] {
            let c = root_scale(n, PalKind::PalFirey).unwrap().to_f64().unwrap();
            let s = InverseSeries::new(n - 1, 2000).unwrap();
            let v = s.evaluate(c).unwrap();
            let exact = crossing_point(n, PalKind::PalFirey, 1e-10)
                .unwrap()
                .rho_star;
            assert!((v.rho - exact).abs() < 1e-10 * exact, "n={n}");
            assert!(v.residual < 1e-8 * c);
        }
    }

    #[test]
    fn ratio_bound_examples() {
        // (2+1)/(2·2+1−1) · (2/3) = 1/2
        assert!((coefficient_ratio_bound(1, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!(coefficient_ratio_bound(1, 1).is_err());
        for order in [1u32, 2, 10, 100] {
            let far = coefficient_ratio_bound(order, 1_000_000).unwrap();
            assert!((far - coefficient_ratio_bound_limit(order)).abs() <= 1e-5);
        }
        for order in [1u32, 2, 5, 50] {
            let mut prev = coefficient_ratio_bound(order, 2).unwrap();
            for k in 3..=10_000 {
                let cur = coefficient_ratio_bound(order, k).unwrap();
                assert!(cur <= prev, "N={order}, k={k}");
                prev = cur;
            }
        }
    }

    #[test]
    fn coefficient_ratio_limit() {
        for order in [1u32, 2, 5, 20, 200] {
            let n = order as f64;
            let limit = (n + 1.0).powf(1.0 + 1.0 / n) / n;
            let r = coefficient_ratio(order, 1000);
            assert!(
                ((r - limit) / limit).abs() < 0.01,
                "N={order}: {r} vs {limit}"
            );
            assert!((limit * inverse_radius(order) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn formulas_at_n4_by_hand() {
        let n = 4.0f64;
        let ln4 = n.ln();
        let c = (2.0 * E / (PI * n)).sqrt() * (1.0 + ln4 / n);
        assert!((asymptotic_root_scale(4, PalKind::PalFirey).unwrap() - c).abs() < 1e-15);
        let r = 1.0 + (2.0 * E / (PI * n)).sqrt() + (2.0 * E / PI).sqrt() * ln4 / 8.0;
        assert!((asymptotic_crossing(4, PalKind::PalFirey).unwrap() - r).abs() < 1e-15);
        let lh = -4.0 * ln4 + 4.0 - (8.0 * E / PI).sqrt() + 0.5 * (4.0 / (3.0 * E)).ln() + E / PI
            - (2.0 * E / PI).sqrt() * ln4 / 2.0;
        assert!((asymptotic_log_area_constant(4, PalKind::PalFirey).unwrap() - lh).abs() < 1e-13);
        let f =
            (E / PI).exp() / 24.0 * (32.0 * PI / (3.0 * E)).sqrt() * (-(8.0 * E / PI).sqrt()).exp();
        assert!((asymptotic_log_area_constant_factorial(4).unwrap() - f.ln()).abs() < 1e-12);
        let ab = (2.0 * E.sqrt()) * (ln4 / 8.0 - 1.0 / (8.0 * PI).sqrt()).exp();
        assert!((asymptotic_offset_ratio(4).unwrap() - ab).abs() < 1e-14);

        // even-n Bezdek variants
        let cb = (E / n).sqrt() * (1.0 + 0.75 * ln4 / n);
        assert!((asymptotic_root_scale(4, PalKind::Bezdek).unwrap() - cb).abs() < 1e-15);
        let rb = 1.0 + (E / n).sqrt() + 0.75 * E.sqrt() * ln4 / 8.0;
        assert!((asymptotic_crossing(4, PalKind::Bezdek).unwrap() - rb).abs() < 1e-15);
        let hb = ((E - 1.0) / 2.0).exp()
            * (9.0 / (8.0 * PI)).powf(0.25)
            * (PI / 2.0).powi(2)
            * (E / n).powi(4)
            * (-(4.0 * E).sqrt()).exp();
        let hb_log = hb.ln() - 0.75 * E.sqrt() * ln4 / 2.0;
        assert!((asymptotic_log_area_constant(4, PalKind::Bezdek).unwrap() - hb_log).abs() < 1e-12);

        // odd-n Bezdek variants at n = 5
        let m = 5.0f64;
        let ln5 = m.ln();
        let co = (2.0 * E / m).sqrt() * (1.0 + 0.75 * ln5 / m);
        assert!((asymptotic_root_scale(5, PalKind::Bezdek).unwrap() - co).abs() < 1e-15);
        let ho = E.exp()
            * (9.0 / (40.0 * PI.powi(3))).powf(0.25)
            * PI.sqrt().powi(5)
            * (E / m).powi(5)
            * (-(10.0 * E).sqrt()).exp();
        let ho_log = ho.ln() - 0.75 * (2.0 * E).sqrt() * ln5 / m.sqrt();
        assert!((asymptotic_log_area_constant(5, PalKind::Bezdek).unwrap() - ho_log).abs() < 1e-12);
    }

    #[test]
    fn forms_of_area_asymptotics_agree() {
        for n in [10u32, 100, 1000, 10_000] {
            let nf = n as f64;
            let a = asymptotic_log_area_constant(n, PalKind::PalFirey).unwrap();
            let b = asymptotic_log_area_constant_factorial(n).unwrap();
            // the factorial form drops the ln n/√n term; what remains is Stirling's 1/(12n)
            let correction = (2.0 * E / PI).sqrt() * nf.ln() / nf.sqrt();
            assert!(
                (a + correction - b - 1.0 / (12.0 * nf)).abs() < 1.0 / (nf * nf),
                "n={n}"
            );
            let ratio = a / (-nf * nf.ln());
            assert!(ratio > 0.0 && ratio < 1.0);
        }
        let r4 =
            asymptotic_log_area_constant(10_000, PalKind::PalFirey).unwrap() / (-1e4 * 1e4f64.ln());
        assert!((r4 - 1.0).abs() < 0.15);
    }

    #[test]
    fn compare_reports_are_consistent() {
        let rows = compare(&[100, 1000, 10_000], Quantity::CN, PalKind::PalFirey).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![100, 1000, 10_000]
        );
        for w in rows.windows(2) {
            assert!(w[1].rel_error < w[0].rel_error);
        }
        for r in &rows {
            assert_eq!(r.abs_error, (r.exact - r.asymptotic).abs());
        }
        // frozen high-precision exact values
        assert!((rows[0].exact - 0.139_127_137_617_702_62).abs() < 1e-13);
        assert!((rows[2].exact - 0.013_168_255_851_167_59).abs() < 1e-14);
        let lh = compare(&[10_000], Quantity::LogHN, PalKind::PalFirey).unwrap();
        assert!((lh[0].exact + 82_234.582_727_436_8).abs() < 1e-6);
        assert!(lh[0].abs_error <= 10.0 * 1e4f64.ln());
        assert!(compare(&[10], Quantity::AbRatio, PalKind::Bezdek).is_err());
        assert_eq!(
            "bezdek_log_h_n".parse::<Quantity>().unwrap(),
            Quantity::BezdekLogHN
        );
        assert!("h".parse::<Quantity>().is_err());
    }

    #[test]
    fn thresholds_small_scan() {
        let t = bracket_threshold(PalKind::PalFirey, 60).unwrap();
        assert!(t.n0.is_some());
        let r = radius_entry_threshold(PalKind::PalFirey, 60).unwrap();
        let n0 = r.n0.unwrap();
        assert!(n0 > 2 && n0 < 60);
        for n in n0..=60 {
            assert!(
                root_scale(n, PalKind::PalFirey).unwrap().to_f64().unwrap() < inverse_radius(n - 1)
            );
        }
        assert!(bracket_threshold(PalKind::PalFirey, 1).is_err());
    }

    proptest! {
        #[test]
        fn series_inverts_forward_map(order in 1u32..60, frac in -0.9f64..0.9) {
            let s = InverseSeries::new(order, 2000).unwrap();
            let y = frac * s.radius();
            let v = s.evaluate(y).unwrap();
            prop_assert!(v.residual <= 1e-12 * y.abs().max(1e-3));
        }

        #[test]
        fn ratio_bound_is_positive_and_above_limit(order in 1u32..500, k in 2u64..100_000) {
            let v = coefficient_ratio_bound(order, k).unwrap();
            prop_assert!(v > 0.0);
            prop_assert!(v >= coefficient_ratio_bound_limit(order) - 1e-12);
        }
    }
}
