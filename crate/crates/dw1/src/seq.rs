//! Sequences with exact finite heads and analytic infinite tails.
//!
//! A [`Seq`] stores values for indices `1..=head_len` explicitly and,
//! optionally, a [`TailFamily`] rule giving `x(n)` for every `n > head_len`.
//! Head entries are usually exact rationals; computed constants (for
//! example a leading coordinate defined by an infinite series) are stored
//! as enclosures instead. Every built-in tail family evaluates pointwise to
//! a rational, tends to zero, and knows enough about its own ordering and
//! decay to support certified rearrangements and tail sums.
//!
//! The JSON descriptor format is
//! `{"head": ["p/q", ...], "tail": {"family": ..., ...} | null}`
//! with rationals written as `p/q` (or plain integer) strings.

use crate::enclosure::Enclosure;
use crate::weight::Weight;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

/// One explicit head entry.
#[derive(Clone, Debug)]
pub enum HeadValue {
    Exact(BigRational),
    /// A real constant known only through an enclosure (for example a
    /// convergent series value).
    Approx(Enclosure),
}

impl HeadValue {
    pub fn enc(&self) -> Enclosure {
        match self {
            HeadValue::Exact(r) => Enclosure::from_rational(r),
            HeadValue::Approx(e) => *e,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            HeadValue::Exact(r) => Some(r),
            HeadValue::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            HeadValue::Exact(r) => r.is_zero(),
            HeadValue::Approx(e) => e.value == 0.0 && e.error == 0.0,
        }
    }
}

/// Analytic tail rules. `n` is always the global 1-based index.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TailFamily {
    /// `t(n) = coef · (n + offset)^{-exponent}`.
    Power {
        #[serde(
            serialize_with = "serialize_rational",
            deserialize_with = "deserialize_rational"
        )]
        coef: BigRational,
        exponent: u32,
        #[serde(default)]
        offset: i64,
    },
    /// `t(n) = (-1)^n · coef · n^{-exponent}`.
    AlternatingPower {
        #[serde(
            serialize_with = "serialize_rational",
            deserialize_with = "deserialize_rational"
        )]
        coef: BigRational,
        exponent: u32,
    },
    /// The pairwise-swapped squares pattern, defined for `n ≥ 2`:
    /// `t(2k) = 1/(2k+1)²`, `t(2k+1) = 1/(2k)²`. Positive, tends to zero,
    /// and its consecutive differences alternate in sign forever.
    AlternatingSquares,
    /// A positive nonincreasing tail known only through power brackets:
    /// `lo_coef (n + lo_offset)^{-exponent} ≤ t(n) ≤ hi_coef (n + hi_offset)^{-exponent}`.
    /// Used for computed tails such as variation sums.
    Bracketed {
        lo_coef: f64,
        lo_offset: f64,
        hi_coef: f64,
        hi_offset: f64,
        exponent: f64,
    },
}

impl TailFamily {
    pub fn power(coef: BigRational, exponent: u32, offset: i64) -> Self {
        TailFamily::Power {
            coef,
            exponent,
            offset,
        }
    }

    /// Validates the family for use after a head of length `head_len`.
    pub fn validate(&self, head_len: u64) -> Result<()> {
        match self {
            TailFamily::Power {
                coef,
                exponent,
                offset,
            } => {
                if coef.is_zero() {
                    return Err(Error::InvalidSeq(
                        "power tail with zero coefficient; use a finite head instead".into(),
                    ));
                }
                if *exponent < 1 {
                    return Err(Error::InvalidSeq(
                        "power tail needs exponent ≥ 1 to stay in c₀".into(),
                    ));
                }
                if head_len as i64 + 1 + offset < 1 {
                    return Err(Error::InvalidSeq(format!(
                        "power tail offset {offset} makes n + offset nonpositive at n = {}",
                        head_len + 1
                    )));
                }
            }
            TailFamily::AlternatingPower { coef, exponent } => {
                if coef.is_zero() {
                    return Err(Error::InvalidSeq("alternating tail with zero coefficient".into()));
                }
                if *exponent < 1 {
                    return Err(Error::InvalidSeq(
                        "alternating power tail needs exponent ≥ 1".into(),
                    ));
                }
            }
            TailFamily::AlternatingSquares => {
                if head_len < 1 {
                    return Err(Error::InvalidSeq(
                        "alternating squares pattern starts at n = 2; provide head entry 1".into(),
                    ));
                }
            }
            TailFamily::Bracketed {
                lo_coef,
                lo_offset,
                hi_coef,
                hi_offset,
                exponent,
            } => {
                if !(*exponent > 1.0) {
                    return Err(Error::InvalidSeq("bracketed tail needs exponent > 1".into()));
                }
                if *lo_coef < 0.0 || *hi_coef < *lo_coef {
                    return Err(Error::InvalidSeq("bracketed tail with inverted bounds".into()));
                }
                let n0 = (head_len + 1) as f64;
                if n0 + lo_offset <= 0.0 || n0 + hi_offset <= 0.0 {
                    return Err(Error::InvalidSeq("bracketed tail offsets too negative".into()));
                }
            }
        }
        Ok(())
    }

    /// Exact rational value at global index `n`, when the family has one.
    pub fn value_exact(&self, n: u64) -> Option<BigRational> {
        match self {
            TailFamily::Power {
                coef,
                exponent,
                offset,
            } => {
                let base = BigInt::from(n as i64 + offset);
                Some(coef / BigRational::from(base.pow(*exponent)))
            }
            TailFamily::AlternatingPower { coef, exponent } => {
                let v = coef / BigRational::from(BigInt::from(n).pow(*exponent));
                Some(if n % 2 == 0 { v } else { -v })
            }
            TailFamily::AlternatingSquares => {
                debug_assert!(n >= 2);
                let j = if n % 2 == 0 { n + 1 } else { n - 1 };
                Some(BigRational::new(BigInt::one(), BigInt::from(j * j)))
            }
            TailFamily::Bracketed { .. } => None,
        }
    }

    pub fn value_enc(&self, n: u64) -> Enclosure {
        match self {
            TailFamily::Power {
                coef,
                exponent,
                offset,
            } => {
                let c = crate::enclosure::rational_to_f64(coef);
                let v = c * ((n as i64 + offset) as f64).powi(-(*exponent as i32));
                Enclosure::new(v, 8.0 * f64::EPSILON * v.abs())
            }
            TailFamily::AlternatingPower { coef, exponent } => {
                let c = crate::enclosure::rational_to_f64(coef);
                let v = c * (n as f64).powi(-(*exponent as i32));
                let v = if n % 2 == 0 { v } else { -v };
                Enclosure::new(v, 8.0 * f64::EPSILON * v.abs())
            }
            TailFamily::AlternatingSquares => {
                let j = if n % 2 == 0 { n + 1 } else { n - 1 } as f64;
                let v = 1.0 / (j * j);
                Enclosure::new(v, 4.0 * f64::EPSILON * v)
            }
            TailFamily::Bracketed {
                lo_coef,
                lo_offset,
                hi_coef,
                hi_offset,
                exponent,
            } => {
                let lo = lo_coef * (n as f64 + lo_offset).powf(-exponent);
                let hi = hi_coef * (n as f64 + hi_offset).powf(-exponent);
                Enclosure::from_bracket(lo * (1.0 - 4.0 * f64::EPSILON), hi * (1.0 + 4.0 * f64::EPSILON))
            }
        }
    }

    /// Upper envelope `(C, s, q)` with `|t(m)| ≤ C (m + s)^{-q}` for every
    /// `m` past the head.
    pub fn abs_upper_env(&self) -> (f64, f64, f64) {
        match self {
            TailFamily::Power {
                coef,
                exponent,
                offset,
            } => (
                crate::enclosure::rational_to_f64(coef).abs() * (1.0 + 4.0 * f64::EPSILON),
                *offset as f64,
                *exponent as f64,
            ),
            TailFamily::AlternatingPower { coef, exponent } => (
                crate::enclosure::rational_to_f64(coef).abs() * (1.0 + 4.0 * f64::EPSILON),
                0.0,
                *exponent as f64,
            ),
            TailFamily::AlternatingSquares => (1.0, -1.0, 2.0),
            TailFamily::Bracketed {
                hi_coef,
                hi_offset,
                exponent,
                ..
            } => (*hi_coef * (1.0 + 4.0 * f64::EPSILON), *hi_offset, *exponent),
        }
    }

    /// Lower envelope `(C, s, q)` with `|t(m)| ≥ C (m + s)^{-q}`, when the
    /// family is (absolutely) one-signed so the bound is meaningful.
    pub fn abs_lower_env(&self) -> (f64, f64, f64) {
        match self {
            TailFamily::Power {
                coef,
                exponent,
                offset,
            } => (
                crate::enclosure::rational_to_f64(coef).abs() * (1.0 - 4.0 * f64::EPSILON),
                *offset as f64,
                *exponent as f64,
            ),
            TailFamily::AlternatingPower { coef, exponent } => (
                crate::enclosure::rational_to_f64(coef).abs() * (1.0 - 4.0 * f64::EPSILON),
                0.0,
                *exponent as f64,
            ),
            TailFamily::AlternatingSquares => (1.0, 1.0, 2.0),
            TailFamily::Bracketed {
                lo_coef,
                lo_offset,
                exponent,
                ..
            } => (*lo_coef * (1.0 - 4.0 * f64::EPSILON), *lo_offset, *exponent),
        }
    }

    /// Is every tail value ≥ 0?
    pub fn nonnegative(&self) -> bool {
        match self {
            TailFamily::Power { coef, .. } => coef.is_positive(),
            TailFamily::AlternatingPower { .. } => false,
            TailFamily::AlternatingSquares => true,
            TailFamily::Bracketed { .. } => true,
        }
    }

    /// Is `|t|` nonincreasing along the natural index order?
    pub fn abs_monotone(&self) -> bool {
        match self {
            TailFamily::Power { .. } => true,
            TailFamily::AlternatingPower { .. } => true,
            TailFamily::AlternatingSquares => false,
            TailFamily::Bracketed { .. } => true,
        }
    }

    /// The `i`-th largest of `{|t(m)| : m > from}` (1-based `i`).
    ///
    /// Every built-in family knows its own sorted order, which is what makes
    /// rearrangements of infinite sequences computable.
    pub fn sorted_abs_value(&self, from: u64, i: u64) -> Enclosure {
        match self {
            TailFamily::Power { .. }
            | TailFamily::AlternatingPower { .. }
            | TailFamily::Bracketed { .. } => self.value_enc(from + i).abs(),
            TailFamily::AlternatingSquares => {
                // For a cut after an odd global index the remaining values are
                // exactly {1/j² : j > from}; after an even cut the single value
                // 1/from² leads and the rest continue from from + 2.
                debug_assert!(from >= 1);
                let j = if (from + 1) % 2 == 0 {
                    from + i
                } else if i == 1 {
                    from
                } else {
                    from + i
                };
                let v = 1.0 / (j as f64 * j as f64);
                Enclosure::new(v, 4.0 * f64::EPSILON * v)
            }
        }
    }

    /// Envelope `(C, s, q)` for the sorted stream: the `i`-th largest value
    /// past `from` is ≤ `C (i + s)^{-q}` and ≥ the matching lower form.
    pub fn sorted_env(&self, from: u64) -> ((f64, f64, f64), (f64, f64, f64)) {
        match self {
            TailFamily::Power { .. } | TailFamily::AlternatingPower { .. } => {
                let (c, s, q) = self.abs_upper_env();
                let (cl, sl, ql) = self.abs_lower_env();
                ((c, s + from as f64, q), (cl, sl + from as f64, ql))
            }
            TailFamily::AlternatingSquares => (
                (1.0, from as f64 - 1.0, 2.0),
                (1.0, from as f64, 2.0),
            ),
            TailFamily::Bracketed { .. } => {
                let (c, s, q) = self.abs_upper_env();
                let (cl, sl, ql) = self.abs_lower_env();
                ((c, s + from as f64, q), (cl, sl + from as f64, ql))
            }
        }
    }

    /// Sign of `t(n) - t(n+1)`, when the rule decides it.
    pub fn diff_sign(&self, n: u64) -> Option<i8> {
        match self {
            TailFamily::Power { coef, .. } => {
                Some(if coef.is_positive() { 1 } else { -1 })
            }
            TailFamily::AlternatingPower { coef, .. } => {
                let s = if n % 2 == 0 { 1 } else { -1 };
                Some(if coef.is_positive() { s } else { -s })
            }
            TailFamily::AlternatingSquares => Some(if n % 2 == 0 { -1 } else { 1 }),
            TailFamily::Bracketed { .. } => Some(1),
        }
    }

    /// Does the sign of `t(n) - t(n+1)` stay constant for all large `n`?
    pub fn eventually_monotone(&self) -> bool {
        matches!(
            self,
            TailFamily::Power { .. } | TailFamily::Bracketed { .. }
        )
    }

    /// Bracket of the total variation `Σ_{l ≥ l0} |t(l) - t(l+1)|`.
    ///
    /// Monotone null families telescope to `|t(l0)|` exactly; alternating
    /// ones need summable absolute values.
    pub fn variation_tail_bracket(&self, l0: u64) -> Result<Enclosure> {
        match self {
            TailFamily::Power { .. } => Ok(self.value_enc(l0).abs()),
            TailFamily::Bracketed { .. } => Ok(self.value_enc(l0).abs()),
            TailFamily::AlternatingPower { coef, exponent } => {
                if *exponent < 2 {
                    return Err(Error::InfiniteVariation(
                        "alternating tail with nonsummable terms has infinite variation".into(),
                    ));
                }
                // Signs alternate, so |Δt(l)| = |t(l)| + |t(l+1)| and the
                // variation is |t(l0)| + 2 Σ_{l>l0} |t(l)|.
                let c = crate::enclosure::rational_to_f64(coef).abs();
                let q = *exponent as f64;
                let first = self.value_enc(l0).abs();
                let hi = product_integral_hi(2.0 * c, 0.0, q, l0)?;
                let lo = product_integral_lo(2.0 * c, 0.0, q, l0);
                Ok(first.add(Enclosure::from_bracket(lo, hi)))
            }
            TailFamily::AlternatingSquares => {
                if l0 < 2 {
                    return Err(Error::InvalidSeq(
                        "variation of the swapped-squares pattern starts at index 2".into(),
                    ));
                }
                let l = l0 as f64;
                if l0 >= 2000 {
                    // Exact steps: even l gives |Δ| = (2l+1)/(l²(l+1)²), odd
                    // l gives (6l+3)/((l-1)²(l+2)²). Grouping consecutive
                    // pairs starting at m ∈ {l0, l0+1} bounds each pair sum
                    // by 8(1 + 1.125/m)/m³ above and 8(1 - 1.5/m)/(m+3)³
                    // below; the integral sandwich Σ_k f(m+2k) ∈
                    // [∫f/2, f(m) + ∫f/2] then yields, for m ≥ 2000,
                    //   2.006/(l0-1)² ≥ Σ ≥ 1.995/(l0+4)².
                    let lo = 1.995 / ((l + 4.0) * (l + 4.0)) * (1.0 - 4.0 * f64::EPSILON);
                    let hi = 2.006 / ((l - 1.0) * (l - 1.0)) * (1.0 + 4.0 * f64::EPSILON);
                    return Ok(Enclosure::from_bracket(lo, hi));
                }
                // Crude sandwich for small l0: |Δt(l)| lies between
                // 2(l+2)^{-3} and 6(l-1)^{-3} for both parities.
                let lo = (l + 2.0) * (l + 2.0);
                let lo = 1.0 / lo * (1.0 - 8.0 * f64::EPSILON);
                let lm = l - 1.0;
                let hi = (6.0 / (lm * lm * lm) + 3.0 / (lm * lm)) * (1.0 + 8.0 * f64::EPSILON);
                Ok(Enclosure::from_bracket(lo, hi))
            }
        }
    }
}

/// A sequence in (a candidate for) d(w,1): exact head, analytic tail.
#[derive(Clone, Debug)]
pub struct Seq {
    head: Vec<HeadValue>,
    tail: Option<TailFamily>,
}

impl Seq {
    pub fn new(head: Vec<HeadValue>, tail: Option<TailFamily>) -> Result<Self> {
        if let Some(t) = &tail {
            t.validate(head.len() as u64)?;
        }
        for (i, h) in head.iter().enumerate() {
            if let HeadValue::Approx(e) = h {
                if !e.value.is_finite() || !e.error.is_finite() {
                    return Err(Error::InvalidSeq(format!(
                        "non-finite head entry at index {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(Seq { head, tail })
    }

    pub fn from_rationals(values: Vec<BigRational>) -> Self {
        Seq {
            head: values.into_iter().map(HeadValue::Exact).collect(),
            tail: None,
        }
    }

    pub fn with_tail(values: Vec<BigRational>, tail: TailFamily) -> Result<Self> {
        Seq::new(
            values.into_iter().map(HeadValue::Exact).collect(),
            Some(tail),
        )
    }

    pub fn zero() -> Self {
        Seq {
            head: Vec::new(),
            tail: None,
        }
    }

    pub fn head_len(&self) -> u64 {
        self.head.len() as u64
    }

    pub fn head(&self) -> &[HeadValue] {
        &self.head
    }

    pub fn tail(&self) -> Option<&TailFamily> {
        self.tail.as_ref()
    }

    /// Finitely supported iff there is no tail rule.
    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    /// All head entries exact and the tail (if any) pointwise rational.
    pub fn is_exact(&self) -> bool {
        self.head.iter().all(|h| h.exact().is_some())
            && match &self.tail {
                None => true,
                Some(t) => !matches!(t, TailFamily::Bracketed { .. }),
            }
    }

    pub fn value_enc(&self, n: u64) -> Enclosure {
        assert!(n >= 1, "sequences are 1-based");
        if n <= self.head_len() {
            self.head[n as usize - 1].enc()
        } else {
            match &self.tail {
                Some(t) => t.value_enc(n),
                None => Enclosure::exact(0.0),
            }
        }
    }

    pub fn value_exact(&self, n: u64) -> Option<BigRational> {
        assert!(n >= 1, "sequences are 1-based");
        if n <= self.head_len() {
            self.head[n as usize - 1].exact().cloned()
        } else {
            match &self.tail {
                Some(t) => t.value_exact(n),
                None => Some(BigRational::zero()),
            }
        }
    }

    /// The head as exact rationals, failing on approximate entries.
    pub fn head_exact(&self) -> Result<Vec<BigRational>> {
        self.head
            .iter()
            .enumerate()
            .map(|(i, h)| {
                h.exact().cloned().ok_or_else(|| {
                    Error::ExactUnavailable(format!(
                        "head entry {} is a computed constant, not a rational",
                        i + 1
                    ))
                })
            })
            .collect()
    }

    /// Indices of nonzero head entries (1-based).
    pub fn head_support(&self) -> Vec<u64> {
        self.head
            .iter()
            .enumerate()
            .filter(|(_, h)| !h.is_zero())
            .map(|(i, _)| i as u64 + 1)
            .collect()
    }

    /// Bracket of `Σ_{n>N} |x(n)| w(n)` (natural order), the certified tail
    /// bound. Decreases to 0 in `N` by construction.
    pub fn tail_norm_bracket(&self, w: &Weight, n: u64) -> Result<Enclosure> {
        let Some(t) = &self.tail else {
            return Ok(Enclosure::exact(0.0));
        };
        debug_assert!(n >= self.head_len());
        let (cu, su, qu) = t.abs_upper_env();
        let (cl, sl, ql) = t.abs_lower_env();
        let (wc, wa) = w.envelope();
        let (wlc, wla) = w.tail_lower_env();
        let hi = product_integral_hi(cu * wc, su, qu + wa, n)?;
        let lo = if t.nonnegative() || matches!(t, TailFamily::AlternatingPower { .. }) {
            product_integral_lo(cl * wlc, sl, ql + wla, n)
        } else {
            0.0
        };
        Ok(Enclosure::from_bracket(lo.min(hi), hi))
    }

    /// Bracket of the signed natural sum `Σ_{n>N} x(n) w(n)`.
    pub fn tail_weighted_sum_bracket(&self, w: &Weight, n: u64) -> Result<Enclosure> {
        let Some(t) = &self.tail else {
            return Ok(Enclosure::exact(0.0));
        };
        match t {
            TailFamily::AlternatingPower { .. } => {
                // Alternating with |terms| decreasing: the remainder is no
                // larger than the first omitted term.
                let first = t.value_enc(n + 1).abs().hi() * w.value_f64(n + 1) * (1.0 + 1e-12);
                Ok(Enclosure::new(0.0, first))
            }
            _ if t.nonnegative() => self.tail_norm_bracket(w, n),
            _ => {
                let b = self.tail_norm_bracket(w, n)?;
                Ok(Enclosure::new(-b.value, 2.0 * b.value + b.error))
            }
        }
    }
}

/// Upper bound for `Σ_{m>n} c (m+s)^{-p}` via the integral test, valid for
/// any shift sign (the integrand is shifted to dominate the terms).
pub(crate) fn product_integral_hi(c: f64, s: f64, p: f64, n: u64) -> Result<f64> {
    if p <= 1.0 {
        return Err(Error::DivergentNorm(format!(
            "tail Σ (n+{s})^-{p} · w diverges; sequence is outside d(w,1)"
        )));
    }
    // For s ≥ 0: (m+s)^{-p} ≤ m^{-p}; keep the exact shift when it helps.
    let shift = s.min(0.0).max(-(n as f64) + 1.0);
    // Σ_{m>n} (m+shift)^{-p} ≤ ∫_n^∞ (t+shift)^{-p} dt.
    Ok(c * (n as f64 + shift).powf(1.0 - p) / (p - 1.0) * (1.0 + 8.0 * f64::EPSILON))
}

/// Lower bound for `Σ_{m>n} c (m+s)^{-p}` (positive terms).
pub(crate) fn product_integral_lo(c: f64, s: f64, p: f64, n: u64) -> f64 {
    if p <= 1.0 || c <= 0.0 {
        return 0.0;
    }
    let shift = s.max(0.0);
    // Σ_{m>n} (m+shift)^{-p} ≥ ∫_{n+1}^∞ (t+shift)^{-p} dt.
    (c * (n as f64 + 1.0 + shift).powf(1.0 - p) / (p - 1.0)) * (1.0 - 8.0 * f64::EPSILON)
}

// --- JSON descriptor --------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SeqDescriptor {
    head: Vec<String>,
    tail: Option<TailFamily>,
}

impl Serialize for Seq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let head: std::result::Result<Vec<String>, S::Error> = self
            .head
            .iter()
            .map(|h| match h {
                HeadValue::Exact(r) => Ok(format_rational(r)),
                HeadValue::Approx(_) => Err(serde::ser::Error::custom(
                    "sequence with computed (non-rational) head entries has no JSON form",
                )),
            })
            .collect();
        SeqDescriptor {
            head: head?,
            tail: self.tail.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Seq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let d = SeqDescriptor::deserialize(deserializer)?;
        let head = d
            .head
            .iter()
            .map(|s| parse_rational(s).map(HeadValue::Exact))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Seq::new(head, d.tail).map_err(D::Error::custom)
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| Error::InvalidSeq(format!("bad rational {s:?}: {e}")))
}

pub fn serialize_rational<S: Serializer>(
    r: &BigRational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(r))
}

pub fn deserialize_rational<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<BigRational, D::Error> {
    let s = String::deserialize(deserializer)?;
    parse_rational(&s).map_err(D::Error::custom)
}

pub fn serialize_rationals<S: Serializer>(
    rs: &[BigRational],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(rs.iter().map(|r| format_rational(r)))
}

pub fn deserialize_rationals<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<Vec<BigRational>, D::Error> {
    let ss: Vec<String> = Vec::deserialize(deserializer)?;
    ss.iter()
        .map(|s| parse_rational(s).map_err(D::Error::custom))
        .collect()
}
