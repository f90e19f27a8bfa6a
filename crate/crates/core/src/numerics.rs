//! Signed log-domain reals and the special functions built on them.
//!
//! Every factorial-scale quantity in the crate (ball volumes, sphere areas,
//! Pál-type constants, the area constants themselves) is carried as a natural
//! logarithm. Plain `f64` overflows or underflows long before the dimensions we
//! scan, so linear-scale decoding is only offered while `|ln x| < 700`.

use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `|ln x|` for which [`LogReal::to_f64`] decodes to linear scale.
pub const LINEAR_DECODE_LIMIT: f64 = 700.0;

/// Default absolute tolerance for comparisons on log scale.
pub const LOG_TOLERANCE: f64 = 1e-10;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Sign of a [`LogReal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }
}

/// A real number stored as a sign and the natural log of its magnitude.
///
/// The log magnitude of zero is `-inf` and is never consulted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogReal {
    sign: Sign,
    log_magnitude: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: Sign::Zero,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal {
        sign: Sign::Positive,
        log_magnitude: 0.0,
    };

    /// A positive value with the given natural log.
    pub fn from_ln(log_magnitude: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogReal {
            sign: Sign::Positive,
            log_magnitude,
        }
    }

    pub fn from_parts(sign: Sign, log_magnitude: f64) -> Self {
        match sign {
            Sign::Zero => Self::ZERO,
            _ if log_magnitude == f64::NEG_INFINITY => Self::ZERO,
            _ => LogReal {
                sign,
                log_magnitude,
            },
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            Self::from_ln(x.ln())
        } else {
            Self::from_parts(Sign::Negative, (-x).ln())
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn ln(&self) -> f64 {
        match self.sign {
            Sign::Zero => f64::NEG_INFINITY,
            _ => self.log_magnitude,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Linear-scale value, or `None` when `|ln x| >= 700`.
    pub fn to_f64(&self) -> Option<f64> {
        match self.sign {
            Sign::Zero => Some(0.0),
            _ if self.log_magnitude.abs() < LINEAR_DECODE_LIMIT => {
                Some(self.sign.as_f64() * self.log_magnitude.exp())
            }
            _ => None,
        }
    }

    /// Linear-scale value with IEEE overflow/underflow instead of `None`.
    pub fn to_f64_lossy(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            s => s.as_f64() * self.log_magnitude.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        match self.sign {
            Sign::Zero => Self::ZERO,
            _ => Self::from_ln(self.log_magnitude),
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::from_parts(self.sign, -self.log_magnitude)
    }

    /// Real power of a non-negative value.
    pub fn powf(&self, exponent: f64) -> Self {
        match self.sign {
            Sign::Zero => {
                if exponent == 0.0 {
                    Self::ONE
                } else {
                    Self::ZERO
                }
            }
            Sign::Positive => Self::from_ln(self.log_magnitude * exponent),
            Sign::Negative => panic!("real power of a negative LogReal"),
        }
    }

    pub fn powi(&self, exponent: i32) -> Self {
        if exponent == 0 {
            return Self::ONE;
        }
        let sign = match self.sign {
            Sign::Negative if exponent % 2 != 0 => Sign::Negative,
            Sign::Zero => return Self::ZERO,
            _ => Sign::Positive,
        };
        Self::from_parts(sign, self.log_magnitude * exponent as f64)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// Absolute difference of the log magnitudes, the natural distance on log scale.
    pub fn log_distance(&self, other: &LogReal) -> f64 {
        if self.sign != other.sign {
            return f64::INFINITY;
        }
        if self.is_zero() {
            return 0.0;
        }
        (self.log_magnitude - other.log_magnitude).abs()
    }
}

impl Default for LogReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for LogReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            s => {
                let prefix = if s == Sign::Negative { "-" } else { "" };
                write!(f, "{prefix}exp({})", self.log_magnitude)
            }
        }
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal {
            sign: self.sign.flip(),
            log_magnitude: self.log_magnitude,
        }
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        let sign = self.sign.times(rhs.sign);
        if sign == Sign::Zero {
            return LogReal::ZERO;
        }
        LogReal::from_parts(sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Div for LogReal {
    type Output = LogReal;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogReal) -> LogReal {
        self * rhs.recip()
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_magnitude >= rhs.log_magnitude {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let delta = small.log_magnitude - big.log_magnitude;
        if big.sign == small.sign {
            LogReal::from_parts(big.sign, big.log_magnitude + delta.exp().ln_1p())
        } else if delta == 0.0 {
            LogReal::ZERO
        } else {
            LogReal::from_parts(big.sign, big.log_magnitude + (-delta.exp_m1()).ln())
        }
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        self + (-rhs)
    }
}

impl PartialOrd for LogReal {
    fn partial_cmp(&self, other: &LogReal) -> Option<Ordering> {
        let rank = |s: Sign| match s {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        };
        match rank(self.sign).cmp(&rank(other.sign)) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Some(Ordering::Equal),
                Sign::Positive => self.log_magnitude.partial_cmp(&other.log_magnitude),
                Sign::Negative => other.log_magnitude.partial_cmp(&self.log_magnitude),
            },
            o => Some(o),
        }
    }
}

/// Parameters of the Binet/Stirling expansion of `ln Γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinetConfig {
    series_terms: usize,
    shift_threshold: f64,
}

impl BinetConfig {
    pub fn new(series_terms: usize, shift_threshold: f64) -> Result<Self> {
        if series_terms == 0 || series_terms > MAX_BERNOULLI {
            return Err(Error::config(format!(
                "series_terms must be in 1..={MAX_BERNOULLI}, got {series_terms}"
            )));
        }
        if !(shift_threshold >= 8.0) || !shift_threshold.is_finite() {
            return Err(Error::config(format!(
                "shift_threshold must be a finite value >= 8, got {shift_threshold}"
            )));
        }
        Ok(BinetConfig {
            series_terms,
            shift_threshold,
        })
    }

    pub fn series_terms(&self) -> usize {
        self.series_terms
    }

    pub fn shift_threshold(&self) -> f64 {
        self.shift_threshold
    }
}

impl Default for BinetConfig {
    fn default() -> Self {
        BinetConfig {
            series_terms: 5,
            shift_threshold: 10.0,
        }
    }
}

/// `ln Γ(z)` for real `z > 0`.
///
/// Arguments below the shift threshold are raised with `Γ(z+1) = zΓ(z)`
/// and the logs of the factors subtracted afterwards.
pub fn log_gamma(z: f64, cfg: &BinetConfig) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!(
            "log_gamma needs a finite positive argument, got {z}"
        )));
    }
    Ok(log_gamma_unchecked(z, cfg))
}

/// `ln Γ(z)` with the default Binet configuration. Returns NaN outside `z > 0`.
pub fn ln_gamma(z: f64) -> f64 {
    if !(z > 0.0) || !z.is_finite() {
        return f64::NAN;
    }
    log_gamma_unchecked(z, &BinetConfig::default())
}

fn log_gamma_unchecked(z: f64, cfg: &BinetConfig) -> f64 {
    let mut shifted = z;
    let mut correction = 0.0;
    while shifted < cfg.shift_threshold {
        correction += shifted.ln();
        shifted += 1.0;
    }
    binet(shifted, cfg.series_terms) - correction
}

// ln Γ(z) = (z - 1/2) ln z - z + ln(2π)/2 + Σ β_{2k} / (2k(2k-1) z^{2k-1})
fn binet(z: f64, terms: usize) -> f64 {
    let coeffs = binet_coefficients();
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut power = inv;
    let mut series = 0.0;
    for c in &coeffs[..terms] {
        series += c * power;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

fn binet_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        bernoulli_cache()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let k = (i + 1) as f64;
                b.to_f64().expect("finite Bernoulli number") / (2.0 * k * (2.0 * k - 1.0))
            })
            .collect()
    })
}

/// Largest `count` accepted by [`bernoulli_numbers`].
pub const MAX_BERNOULLI: usize = 30;

/// Even-index Bernoulli numbers `β₂, β₄, …, β_{2·count}` as exact rationals.
pub fn bernoulli_numbers(count: usize) -> Result<Vec<BigRational>> {
    if count == 0 || count > MAX_BERNOULLI {
        return Err(Error::config(format!(
            "bernoulli count must be in 1..={MAX_BERNOULLI}, got {count}"
        )));
    }
    Ok(bernoulli_cache()[..count].to_vec())
}

fn bernoulli_cache() -> &'static [BigRational] {
    static CACHE: OnceLock<Vec<BigRational>> = OnceLock::new();
    CACHE.get_or_init(|| {
        // Σ_{k=0}^{m} C(m+1, k) β_k = 0 for m >= 1.
        let top = 2 * MAX_BERNOULLI;
        let mut all: Vec<BigRational> = Vec::with_capacity(top + 1);
        all.push(BigRational::one());
        for m in 1..=top {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (k, b) in all.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * b;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            all.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        all.into_iter().skip(2).step_by(2).collect()
    })
}

/// `ln ωₙ`, the log volume of the unit ball in ℝⁿ (`ω₀ = 1`).
pub fn log_unit_ball_volume(n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let half = n as f64 / 2.0;
    half * LN_PI - ln_gamma(half + 1.0)
}

/// `ln σₙ`, the log area of the unit sphere Sⁿ ⊂ ℝⁿ⁺¹.
pub fn log_unit_sphere_area(n: u32) -> f64 {
    let half = (n as f64 + 1.0) / 2.0;
    LN_2 + half * LN_PI - ln_gamma(half)
}

/// `ln d!!`, summed over the integers of the same parity as `d` (`0!! = 1`).
pub fn log_double_factorial(d: u64) -> f64 {
    let mut sum = NeumaierSum::default();
    let mut k = d;
    while k >= 2 {
        sum.add((k as f64).ln());
        k -= 2;
    }
    sum.total()
}

/// `ln n!`.
pub fn log_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Compensated summation used wherever many logs are accumulated.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub(crate) fn ln_pi() -> f64 {
    LN_PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn log_factorial_sum(n: u64) -> f64 {
        (1..=n)
            .map(|k| (k as f64).ln())
            .collect::<NeumaierSum>()
            .total()
    }

    #[test]
    fn log_gamma_small_values() {
        // the default series leaves a remainder near 2e-14 at the shift threshold
        let cfg = BinetConfig::default();
        assert!((log_gamma(5.0, &cfg).unwrap() - 24f64.ln()).abs() < 1e-13);
        assert!((log_gamma(0.5, &cfg).unwrap() - PI.sqrt().ln()).abs() < 1e-13);
        assert!((log_gamma(1.0, &cfg).unwrap()).abs() < 1e-13);
        assert!((log_gamma(2.0, &cfg).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn log_gamma_frozen_values() {
        let cfg = BinetConfig::default();
        let frozen = [
            (10.0, 12.801_827_480_081_469),
            (50.0, 144.565_743_946_344_9),
            (100.0, 359.134_205_369_575_4),
            (1000.0, 5_905.220_423_209_181),
            (0.5, 0.572_364_942_924_700_1),
            (2.5, 0.284_682_870_472_919_2),
            (7.25, 7.052_185_450_738_539_5),
            (0.001, 6.907_178_885_383_853),
            (123.456, 469.605_547_129_929_45),
        ];
        for (z, want) in frozen {
            let got = log_gamma(z, &cfg).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "z={z}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn binet_error_decreases_with_terms() {
        let frozen = [
            (10.0, 12.801_827_480_081_469),
            (50.0, 144.565_743_946_344_9),
            (100.0, 359.134_205_369_575_4),
            (1000.0, 5_905.220_423_209_181),
        ];
        for (z, want) in frozen {
            let mut prev = f64::INFINITY;
            for terms in 2..=6 {
                let cfg = BinetConfig::new(terms, 10.0).unwrap();
                let rel = ((log_gamma(z, &cfg).unwrap() - want) / want).abs();
                if prev <= 1e-13 {
                    assert!(rel <= 1e-13, "z={z}, terms={terms}: {rel:e}");
                } else {
                    assert!(rel < prev, "z={z}, terms={terms}: {rel:e} !< {prev:e}");
                }
                prev = rel;
            }
            assert!(prev <= 1e-13);
        }
    }

    #[test]
    fn log_gamma_matches_log_factorial_sum() {
        let cfg = BinetConfig::default();
        let got = log_gamma(1001.0, &cfg).unwrap();
        let oracle = log_factorial_sum(1000);
        assert!(((got - oracle) / oracle).abs() < 1e-12, "{got} vs {oracle}");
    }

    #[test]
    fn log_gamma_rejects_bad_arguments() {
        let cfg = BinetConfig::default();
        for z in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(log_gamma(z, &cfg), Err(Error::Domain(_))));
        }
        assert!(ln_gamma(-2.0).is_nan());
    }

    #[test]
    fn binet_config_validation() {
        assert!(BinetConfig::new(0, 10.0).is_err());
        assert!(BinetConfig::new(5, 7.9).is_err());
        assert!(BinetConfig::new(5, f64::NAN).is_err());
        assert!(BinetConfig::new(31, 10.0).is_err());
        let cfg = BinetConfig::new(3, 8.0).unwrap();
        assert_eq!(cfg.series_terms(), 3);
        assert_eq!(BinetConfig::default().series_terms(), 5);
        assert_eq!(BinetConfig::default().shift_threshold(), 10.0);
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_numbers(1).unwrap(), vec![rat(1, 6)]);
        assert_eq!(bernoulli_numbers(2).unwrap(), vec![rat(1, 6), rat(-1, 30)]);
        let four = bernoulli_numbers(4).unwrap();
        assert_eq!(four[2], rat(1, 42));
        assert_eq!(four[3], rat(-1, 30));
        let all = bernoulli_numbers(30).unwrap();
        // β₁₂ = −691/2730
        assert_eq!(all[5], rat(-691, 2730));
        assert!(bernoulli_numbers(0).is_err());
        assert!(bernoulli_numbers(31).is_err());
    }

    #[test]
    fn bernoulli_cache_is_race_free() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| bernoulli_numbers(30).unwrap()))
            .collect();
        let first = bernoulli_numbers(30).unwrap();
        for h in handles {
            assert_eq!(h.join().unwrap(), first);
        }
    }

    #[test]
    fn ball_and_sphere_examples() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-13;
        assert_eq!(log_unit_ball_volume(0), 0.0);
        assert!(close(log_unit_ball_volume(1), 2f64.ln()));
        assert!(close(log_unit_ball_volume(2), PI.ln()));
        assert!(close(log_unit_ball_volume(3), (4.0 * PI / 3.0).ln()));
        assert!(close(log_unit_sphere_area(1), (2.0 * PI).ln()));
        assert!(close(log_unit_sphere_area(2), (4.0 * PI).ln()));
        assert!(close(log_unit_sphere_area(3), (2.0 * PI * PI).ln()));
    }

    #[test]
    fn double_factorial_examples() {
        assert!((log_double_factorial(5) - 15f64.ln()).abs() < 1e-14);
        assert!((log_double_factorial(6) - 48f64.ln()).abs() < 1e-14);
        assert_eq!(log_double_factorial(1), 0.0);
        assert_eq!(log_double_factorial(0), 0.0);
        // 101!! = 101! / 100!! and 100!! = 2^50 · 50!
        let oracle = log_factorial_sum(101) - (50.0 * LN_2 + log_factorial_sum(50));
        let got = log_double_factorial(101);
        assert!(((got - oracle) / oracle).abs() < 1e-12);
    }

    #[test]
    fn log_real_basic_arithmetic() {
        let a = LogReal::from_f64(3.0);
        let b = LogReal::from_f64(-5.0);
        assert!(((a * b).to_f64().unwrap() + 15.0).abs() < 1e-13);
        assert!(((a + b).to_f64().unwrap() + 2.0).abs() < 1e-13);
        assert!(((a - b).to_f64().unwrap() - 8.0).abs() < 1e-13);
        assert!(((b / a).to_f64().unwrap() + 5.0 / 3.0).abs() < 1e-13);
        assert!((a - a).is_zero());
        assert_eq!((LogReal::ZERO + a).to_f64(), a.to_f64());
        assert!(LogReal::ZERO < a && b < LogReal::ZERO && b < a);
        assert!(LogReal::from_f64(-2.0) > LogReal::from_f64(-3.0));
        assert_eq!(LogReal::from_ln(800.0).to_f64(), None);
        assert_eq!(LogReal::from_ln(-800.0).to_f64(), None);
        assert!(LogReal::from_ln(699.0).to_f64().is_some());
        assert_eq!(b.powi(2).sign(), Sign::Positive);
        assert_eq!(b.powi(3).sign(), Sign::Negative);
    }

    #[test]
    fn log_real_round_trip_extremes() {
        for x in [1e-300, 3.7e-150, 1.0, 42.0, 9.9e299, 1e300] {
            for s in [1.0, -1.0] {
                let v = s * x;
                let back = LogReal::from_f64(v).to_f64().unwrap();
                // exp(ln x) carries about |ln x|·ε relative error
                assert!(((back - v) / v).abs() < 1e-12, "{v} -> {back}");
            }
        }
    }
}
