//! Closed-form mixing-time bounds and the flow components they factor into.
//!
//! Logarithms are natural. Polynomial parts are exact rationals; the
//! logarithmic factor is a [`Real`], so `mixing_bound` and the product of
//! [`FlowComponents`] agree to the last bit.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::chain::nonadjacent_pairs;
use crate::degseq::{DegreeSequence, DirectedDegreeSequence};
use crate::error::{Error, Result};
use crate::precise::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Undirected,
    Directed,
}

pub const UNDIRECTED_FORMULA: &str = "d_max^14 * M^9 * (M ln M / 2 + ln(1/eps))";
pub const DIRECTED_FORMULA: &str = "r_max^16 * m^11 * (m ln m + ln(1/eps)) / 4";

/// Hypotheses of the mixing theorems, each checked separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub realizable: bool,
    /// `d_min >= 1` / `r_min >= 1`.
    pub min_degree: bool,
    /// `d_max >= 3` / `r_max >= 2`.
    pub max_degree_floor: bool,
    /// `9 d_max^2 <= M` / `16 r_max^2 <= m`.
    pub max_degree_ceiling: bool,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowComponents {
    pub mode: BoundMode,
    /// `M` or `m`.
    pub size: u64,
    /// `d_max` or `r_max`.
    pub max_degree: u32,
    /// Upper bound on `ln(1/pi*)`: `M ln M / 2` or `m ln m`.
    pub log_inv_pi_star: Real,
    /// Upper bound on the longest flow path: `M/2` or `m`.
    #[serde(serialize_with = "ratio")]
    pub path_length: BigRational,
    /// `1/Q(e)`: `6 a(d)` or `C(m, 2)`.
    #[serde(serialize_with = "int")]
    pub inv_q: BigInt,
    /// Encoding-to-state ratio bound: `2 M^6` or `m^8 / 8`.
    #[serde(serialize_with = "ratio")]
    pub encoding_ratio: BigRational,
    /// Load bound: `2 d_max^14 M^8` or `r_max^16 m^10 / 4`.
    #[serde(serialize_with = "ratio")]
    pub load: BigRational,
    /// Upper bound on the number of realizations: the configuration-model
    /// count `M! / (2^{M/2} (M/2)! prod d_i!)`, or `m!`.
    #[serde(serialize_with = "ratio")]
    pub size_bound: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub mode: BoundMode,
    pub formula: &'static str,
    pub epsilon: f64,
    pub applicability: Applicability,
    pub warnings: Vec<String>,
    /// Rational prefactor of the logarithmic term.
    #[serde(serialize_with = "ratio")]
    pub polynomial: BigRational,
    /// `ln(1/pi*)` bound plus `ln(1/eps)`.
    pub log_term: Real,
    pub value: Real,
    pub log10_value: f64,
}

fn ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow(b: u64, e: u32) -> BigRational {
    rat(BigInt::from(b).pow(e))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn ln_int(x: u64) -> Result<Real> {
    Real::ln(&rat(x))
}

fn check_eps(eps: f64) -> Result<BigRational> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Epsilon(eps));
    }
    BigRational::from_float(eps).ok_or(Error::Epsilon(eps))
}

/// `ln(1/eps)` from the exact binary value of `eps`.
fn ln_inv(eps: f64) -> Result<Real> {
    let e = check_eps(eps)?;
    Real::ln(&e.recip())
}

pub fn applicability(d: &DegreeSequence) -> Applicability {
    let total = d.total() as u128;
    let dmax = d.d_max() as u128;
    let realizable = d.is_graphical();
    let min_degree = d.d_min() >= 1;
    let max_degree_floor = dmax >= 3;
    let max_degree_ceiling = 9 * dmax * dmax <= total;
    Applicability {
        realizable,
        min_degree,
        max_degree_floor,
        max_degree_ceiling,
        applicable: realizable && min_degree && max_degree_floor && max_degree_ceiling,
    }
}

pub fn applicability_directed(dd: &DirectedDegreeSequence) -> Applicability {
    let s = dd.stats();
    let r = s.r_max as u128;
    let realizable = dd.is_digraphical();
    let min_degree = s.r_min >= 1;
    let max_degree_floor = r >= 2;
    let max_degree_ceiling = 16 * r * r <= s.arcs as u128;
    Applicability {
        realizable,
        min_degree,
        max_degree_floor,
        max_degree_ceiling,
        applicable: realizable && min_degree && max_degree_floor && max_degree_ceiling,
    }
}

pub fn flow_components(d: &DegreeSequence) -> Result<FlowComponents> {
    let total = d.total();
    if total % 2 == 1 {
        return Err(Error::OddDegreeSum(total));
    }
    if total == 0 {
        return Err(Error::TooFewEdges { what: "edges", found: 0 });
    }
    let dmax = d.d_max();
    let half = rat(total) / rat(2);
    let log_inv_pi_star = ln_int(total)?.mul_rational(&half);
    let prod: BigUint = d.degrees().iter().fold(BigUint::one(), |acc, &k| acc * factorial(k as u64));
    let denom = (BigUint::one() << (total / 2)) * factorial(total / 2) * prod;
    let size_bound = BigRational::new(factorial(total).into(), denom.into());
    Ok(FlowComponents {
        mode: BoundMode::Undirected,
        size: total,
        max_degree: dmax,
        log_inv_pi_star,
        path_length: half,
        inv_q: nonadjacent_pairs(d.degrees()) * 6,
        encoding_ratio: pow(total, 6) * rat(2),
        load: pow(dmax as u64, 14) * pow(total, 8) * rat(2),
        size_bound,
    })
}

pub fn flow_components_directed(dd: &DirectedDegreeSequence) -> Result<FlowComponents> {
    let m = dd.check_sums()?;
    if m == 0 {
        return Err(Error::TooFewEdges { what: "arcs", found: 0 });
    }
    let r = dd.stats().r_max;
    Ok(FlowComponents {
        mode: BoundMode::Directed,
        size: m,
        max_degree: r,
        log_inv_pi_star: ln_int(m)?.mul_rational(&rat(m)),
        path_length: rat(m),
        inv_q: binomial(BigInt::from(m), BigInt::from(2)),
        encoding_ratio: pow(m, 8) / rat(8),
        load: pow(r as u64, 16) * pow(m, 10) / rat(4),
        size_bound: BigRational::from_integer(factorial(m).into()),
    })
}

impl FlowComponents {
    /// `load * path_length * (ln(1/pi*) + ln(1/eps))`.
    pub fn product(&self, eps: f64) -> Result<Real> {
        let log_term = self.log_inv_pi_star.add(&ln_inv(eps)?);
        Ok(log_term.mul_rational(&(&self.load * &self.path_length)))
    }
}

fn report(mode: BoundMode, eps: f64, applicability: Applicability, polynomial: BigRational, log_pi: Real) -> Result<BoundReport> {
    let log_term = log_pi.add(&ln_inv(eps)?);
    let value = log_term.mul_rational(&polynomial);
    let mut warnings = Vec::new();
    if !applicability.applicable {
        warnings.push("degree hypotheses do not hold; the value is reported without a guarantee".to_string());
    }
    Ok(BoundReport {
        mode,
        formula: match mode {
            BoundMode::Undirected => UNDIRECTED_FORMULA,
            BoundMode::Directed => DIRECTED_FORMULA,
        },
        epsilon: eps,
        applicability,
        warnings,
        log10_value: value.log10()?,
        polynomial,
        log_term,
        value,
    })
}

/// Undirected bound `d_max^14 M^9 (M ln M / 2 + ln(1/eps))`.
pub fn mixing_bound(d: &DegreeSequence, eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    let total = d.total();
    if total % 2 == 1 {
        return Err(Error::OddDegreeSum(total));
    }
    if total == 0 {
        return Err(Error::TooFewEdges { what: "edges", found: 0 });
    }
    let polynomial = pow(d.d_max() as u64, 14) * pow(total, 9);
    let log_pi = ln_int(total)?.mul_rational(&(rat(total) / rat(2)));
    report(BoundMode::Undirected, eps, applicability(d), polynomial, log_pi)
}

/// Directed bound `r_max^16 m^11 (m ln m + ln(1/eps)) / 4`.
pub fn mixing_bound_directed(dd: &DirectedDegreeSequence, eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    let m = dd.check_sums()?;
    if m == 0 {
        return Err(Error::TooFewEdges { what: "arcs", found: 0 });
    }
    let polynomial = pow(dd.stats().r_max as u64, 16) * pow(m, 11) / rat(4);
    let log_pi = ln_int(m)?.mul_rational(&rat(m));
    report(BoundMode::Directed, eps, applicability_directed(dd), polynomial, log_pi)
}

/// `log10` of the size bound, for quick comparisons.
pub fn log10_size_bound(c: &FlowComponents) -> f64 {
    if c.size_bound.is_zero() {
        return f64::NEG_INFINITY;
    }
    Real::from_rational(&c.size_bound).log10().unwrap_or(f64::NAN)
}

impl BoundReport {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn polynomial_f64(&self) -> f64 {
        self.polynomial.to_f64().unwrap_or(f64::INFINITY)
    }
}
