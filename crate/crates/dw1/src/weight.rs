//! Weight sequences for d(w,1): strictly decreasing, positive, and
//! non-summable. Built-in families are the harmonic weight `w(n) = 1/n`,
//! power weights `w(n) = n^{-α}` with `0 < α ≤ 1`, and finite rational
//! tables extended by one of the named rules.

use crate::enclosure::{rational_to_f64, Enclosure};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Extension rule for a finite table; gives `w(n)` for `n` past the table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Continuation {
    Harmonic,
    Power { alpha: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFamily {
    /// `w(n) = 1/n`.
    Harmonic,
    /// `w(n) = n^{-alpha}`, `0 < alpha ≤ 1`. Values are irrational unless
    /// `alpha = 1`, so this family only supports the certified lane.
    Power { alpha: f64 },
    /// Explicit head values, then the continuation rule. The table must be
    /// strictly decreasing and positive, and must stay above the first
    /// continuation value.
    Table {
        #[serde(
            serialize_with = "crate::seq::serialize_rationals",
            deserialize_with = "crate::seq::deserialize_rationals"
        )]
        values: Vec<BigRational>,
        continuation: Continuation,
    },
}

/// A validated weight sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Weight {
    family: WeightFamily,
}

impl Weight {
    pub fn harmonic() -> Self {
        Weight {
            family: WeightFamily::Harmonic,
        }
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Weight::new(WeightFamily::Power { alpha })
    }

    pub fn table(values: Vec<BigRational>, continuation: Continuation) -> Result<Self> {
        Weight::new(WeightFamily::Table {
            values,
            continuation,
        })
    }

    pub fn new(family: WeightFamily) -> Result<Self> {
        match &family {
            WeightFamily::Harmonic => {}
            WeightFamily::Power { alpha } => {
                if !alpha.is_finite() || *alpha <= 0.0 || *alpha > 1.0 {
                    return Err(Error::InvalidWeight(format!(
                        "power exponent must lie in (0, 1], got {alpha}"
                    )));
                }
            }
            WeightFamily::Table {
                values,
                continuation,
            } => {
                if values.is_empty() {
                    return Err(Error::InvalidWeight("empty weight table".into()));
                }
                for (i, v) in values.iter().enumerate() {
                    if !v.is_positive() {
                        return Err(Error::InvalidWeight(format!(
                            "table entry {} is not positive",
                            i + 1
                        )));
                    }
                    if i > 0 && values[i - 1] <= *v {
                        return Err(Error::InvalidWeight(format!(
                            "table not strictly decreasing at entry {}",
                            i + 1
                        )));
                    }
                }
                if let Continuation::Power { alpha } = continuation {
                    if !alpha.is_finite() || *alpha <= 0.0 || *alpha > 1.0 {
                        return Err(Error::InvalidWeight(format!(
                            "continuation exponent must lie in (0, 1], got {alpha}"
                        )));
                    }
                }
                // The continuation must pick up strictly below the table.
                let m = values.len() as u64;
                let next = match continuation {
                    Continuation::Harmonic => 1.0 / (m + 1) as f64,
                    Continuation::Power { alpha } => ((m + 1) as f64).powf(-alpha),
                };
                let last = rational_to_f64(values.last().unwrap());
                if next >= last {
                    return Err(Error::InvalidWeight(format!(
                        "continuation value {next} at n={} does not stay below table end {last}",
                        m + 1
                    )));
                }
            }
        }
        Ok(Weight { family })
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// Parses a CLI weight name: `harmonic`, `power:<alpha>`.
    pub fn parse_name(name: &str) -> Result<Self> {
        if name == "harmonic" {
            return Ok(Weight::harmonic());
        }
        if let Some(a) = name.strip_prefix("power:") {
            let alpha: f64 = a
                .parse()
                .map_err(|_| Error::InvalidWeight(format!("bad exponent in {name:?}")))?;
            return Weight::power(alpha);
        }
        Err(Error::InvalidWeight(format!(
            "unknown weight {name:?}; expected harmonic or power:<alpha>"
        )))
    }

    /// True when every `w(n)` is rational and exactly computable.
    pub fn is_exact(&self) -> bool {
        match &self.family {
            WeightFamily::Harmonic => true,
            WeightFamily::Power { alpha } => *alpha == 1.0,
            WeightFamily::Table { continuation, .. } => match continuation {
                Continuation::Harmonic => true,
                Continuation::Power { alpha } => *alpha == 1.0,
            },
        }
    }

    /// Exact value of `w(n)` (1-based), when the family supports it.
    pub fn value_exact(&self, n: u64) -> Option<BigRational> {
        assert!(n >= 1, "weights are 1-based");
        let harmonic = |n: u64| BigRational::new(BigInt::one(), BigInt::from(n));
        match &self.family {
            WeightFamily::Harmonic => Some(harmonic(n)),
            WeightFamily::Power { alpha } if *alpha == 1.0 => Some(harmonic(n)),
            WeightFamily::Power { .. } => None,
            WeightFamily::Table {
                values,
                continuation,
            } => {
                if (n as usize) <= values.len() {
                    Some(values[n as usize - 1].clone())
                } else {
                    match continuation {
                        Continuation::Harmonic => Some(harmonic(n)),
                        Continuation::Power { alpha } if *alpha == 1.0 => Some(harmonic(n)),
                        Continuation::Power { .. } => None,
                    }
                }
            }
        }
    }

    /// Nearest-f64 value of `w(n)`; off by at most a few ulps.
    pub fn value_f64(&self, n: u64) -> f64 {
        assert!(n >= 1, "weights are 1-based");
        match &self.family {
            WeightFamily::Harmonic => 1.0 / n as f64,
            WeightFamily::Power { alpha } => (n as f64).powf(-alpha),
            WeightFamily::Table {
                values,
                continuation,
            } => {
                if (n as usize) <= values.len() {
                    rational_to_f64(&values[n as usize - 1])
                } else {
                    match continuation {
                        Continuation::Harmonic => 1.0 / n as f64,
                        Continuation::Power { alpha } => (n as f64).powf(-alpha),
                    }
                }
            }
        }
    }

    pub fn value_enc(&self, n: u64) -> Enclosure {
        let v = self.value_f64(n);
        Enclosure::new(v, 4.0 * f64::EPSILON * v)
    }

    /// Exact partial sum `W(n) = Σ_{j≤n} w(j)`.
    pub fn prefix_sum_exact(&self, n: u64) -> Option<BigRational> {
        let mut s = BigRational::zero();
        for j in 1..=n {
            s += self.value_exact(j)?;
        }
        Some(s)
    }

    /// Exponent `α` such that `w(n) ≤ C n^{-α}` with the matching constant;
    /// used by tail brackets. Returns `(C, α)`.
    pub fn envelope(&self) -> (f64, f64) {
        match &self.family {
            WeightFamily::Harmonic => (1.0, 1.0),
            WeightFamily::Power { alpha } => (1.0, *alpha),
            WeightFamily::Table {
                values,
                continuation,
            } => {
                // Beyond the table the rule is exact; cover the table by
                // scaling so that C n^{-α} ≥ values[n-1] there too.
                let (mut c, alpha) = match continuation {
                    Continuation::Harmonic => (1.0, 1.0),
                    Continuation::Power { alpha } => (1.0, *alpha),
                };
                for (i, v) in values.iter().enumerate() {
                    let n = (i + 1) as f64;
                    let need = rational_to_f64(v) * n.powf(alpha);
                    if need > c {
                        c = need;
                    }
                }
                (c * (1.0 + 4.0 * f64::EPSILON), alpha)
            }
        }
    }

    /// Matching lower envelope `(c, α)` with `w(n) ≥ c n^{-α}` everywhere.
    pub fn tail_lower_env(&self) -> (f64, f64) {
        match &self.family {
            WeightFamily::Harmonic => (1.0 - 4.0 * f64::EPSILON, 1.0),
            WeightFamily::Power { alpha } => (1.0 - 4.0 * f64::EPSILON, *alpha),
            WeightFamily::Table {
                values,
                continuation,
            } => {
                let (mut c, alpha) = match continuation {
                    Continuation::Harmonic => (1.0, 1.0),
                    Continuation::Power { alpha } => (1.0, *alpha),
                };
                for (i, v) in values.iter().enumerate() {
                    let n = (i + 1) as f64;
                    let have = rational_to_f64(v) * n.powf(alpha);
                    if have < c {
                        c = have;
                    }
                }
                (c * (1.0 - 4.0 * f64::EPSILON), alpha)
            }
        }
    }
}
