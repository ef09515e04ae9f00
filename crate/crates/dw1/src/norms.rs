//! Norms on d(w,1) and its dual, plus tail-variation sums.
//!
//! Every certified routine returns an [`Enclosure`] whose error field is a
//! rigorous bound assembled from summation rounding, input widths paired
//! against the (nonincreasing) weights, and integral brackets for the
//! infinitely many discarded terms. Exact routines work on finite rational
//! vectors and exact weights only.

use crate::enclosure::{neumaier_sum, Enclosure};
use crate::rearrange::{sorted_abs_exact, MergedStream};
use crate::seq::Seq;
use crate::weight::Weight;
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

/// `‖x‖ = Σ_k x*(k) w(k)` for a finite rational vector and exact weight.
pub fn lorentz_norm_exact(values: &[BigRational], w: &Weight) -> Result<BigRational> {
    let sorted = sorted_abs_exact(values);
    let mut s = BigRational::zero();
    for (k, v) in sorted.iter().enumerate() {
        let wk = w.value_exact(k as u64 + 1).ok_or_else(|| {
            Error::ExactUnavailable("weight has no exact values; use certified mode".into())
        })?;
        s += v * wk;
    }
    Ok(s)
}

/// `‖x‖_W = max_n Σ_{j≤n} x*(j) / W(n)` for a finite rational vector.
pub fn marcinkiewicz_norm_exact(values: &[BigRational], w: &Weight) -> Result<BigRational> {
    let sorted = sorted_abs_exact(values);
    if sorted.is_empty() {
        return Ok(BigRational::zero());
    }
    let mut prefix = BigRational::zero();
    let mut wsum = BigRational::zero();
    let mut best = BigRational::zero();
    for (k, v) in sorted.iter().enumerate() {
        prefix += v;
        wsum += w.value_exact(k as u64 + 1).ok_or_else(|| {
            Error::ExactUnavailable("weight has no exact values; use certified mode".into())
        })?;
        let ratio = &prefix / &wsum;
        if ratio > best {
            best = ratio;
        }
    }
    // Past the support the numerator is constant and W(n) grows, so the
    // maximum is attained within the support.
    Ok(best)
}

/// Upper bound for `Σ_{j≥1} (j + a)^{-p}`, `a ≥ 0`, `p > 1`.
pub(crate) fn sum_power_hi(a: f64, p: f64) -> f64 {
    ((1.0 + a).powf(-p) + (1.0 + a).powf(1.0 - p) / (p - 1.0)) * (1.0 + 8.0 * f64::EPSILON)
}

/// Lower bound for `Σ_{j≥1} (j + a)^{-p}`.
pub(crate) fn sum_power_lo(a: f64, p: f64) -> f64 {
    ((1.0 + a).powf(1.0 - p) / (p - 1.0)) * (1.0 - 8.0 * f64::EPSILON)
}

const START_TERMS: u64 = 1 << 13;
const MAX_TERMS: u64 = 1 << 24;

struct Partial {
    sum: Enclosure,
    /// Widths too large to fold into the eps-proportional budget, to be
    /// paired against the largest weights.
    big_widths: Vec<f64>,
    consumed: u64,
}

/// One streaming pass of `Σ_{k≤n_max} x*(k) w(k)` over the merged
/// rearrangement, with error bookkeeping.
fn weighted_sorted_partial<'a>(x: &'a Seq, w: &Weight, n_max: u64) -> Result<(Partial, MergedStream<'a>)> {
    let mut stream = MergedStream::new(x)?;
    let mut terms: Vec<f64> = Vec::new();
    let mut big_widths: Vec<f64> = Vec::new();
    let mut abs_weighted = 0.0f64;
    let mut k = 0u64;
    while k < n_max {
        let Some((v, _)) = stream.next() else { break };
        k += 1;
        let wk = w.value_f64(k);
        terms.push(v.value * wk);
        abs_weighted += v.value.abs() * wk;
        if v.error > 32.0 * f64::EPSILON * v.value.abs() {
            big_widths.push(v.error);
        }
    }
    let mut sum = neumaier_sum(terms.iter().copied());
    // Input widths proportional to the values pair against their own
    // weights; the slack constant absorbs merging jitter and weight ulps.
    sum.error += 64.0 * f64::EPSILON * abs_weighted;
    Ok((
        Partial {
            sum,
            big_widths,
            consumed: k,
        },
        stream,
    ))
}

/// Pair the collected large widths with the largest weights (the extremal
/// matching), which dominates any true rank assignment.
fn big_width_error(big_widths: &mut [f64], w: &Weight) -> f64 {
    big_widths.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut e = 0.0;
    for (j, width) in big_widths.iter().enumerate() {
        e += width * w.value_f64(j as u64 + 1);
    }
    e * (1.0 + 16.0 * f64::EPSILON)
}

/// Bracket of `Σ_{k>consumed} x*(k) w(k)` given where the merge stopped.
fn sorted_remainder(x: &Seq, w: &Weight, stream: &MergedStream<'_>, consumed: u64) -> Result<Enclosure> {
    let Some(t) = x.tail() else {
        // Finite sequence fully consumed (the caller runs streams of finite
        // sequences to exhaustion).
        debug_assert!(stream.head_remaining().is_empty());
        return Ok(Enclosure::exact(0.0));
    };
    let from = stream.tail_from();
    let i0 = stream.tail_consumed() as f64;
    let ((cu, su, qu), (cl, sl, ql)) = t.sorted_env(from);
    let (wc, wa) = w.envelope();
    let (wlc, wla) = w.tail_lower_env();
    let p_hi = qu + wa;
    if p_hi <= 1.0 {
        return Err(Error::DivergentNorm(
            "tail decays too slowly against this weight; the norm sum diverges".into(),
        ));
    }
    let n = consumed as f64;
    let a_hi = (i0 + su).min(n).max(0.0);
    let mut hi = cu * wc * sum_power_hi(a_hi, p_hi);
    let p_lo = ql + wla;
    let a_lo = (i0 + sl).max(n);
    let lo = (cl * wlc * sum_power_lo(a_lo, p_lo)).min(hi);
    // Head entries not yet merged sit at ranks beyond `consumed`.
    let mut rest_head = 0.0;
    for v in stream.head_remaining() {
        rest_head += v.hi();
    }
    hi += rest_head * w.value_f64(consumed + 1) * (1.0 + 8.0 * f64::EPSILON);
    Ok(Enclosure::from_bracket(lo, hi))
}

/// Certified Lorentz norm `‖x‖ = Σ_k x*(k) w(k)`.
///
/// Grows the explicit part until the enclosure width is within `tol`;
/// fails with `ToleranceUnreachable` if the cap is hit first.
pub fn lorentz_norm(x: &Seq, w: &Weight, tol: f64) -> Result<Enclosure> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::ToleranceUnreachable("tolerance must be positive".into()));
    }
    let mut n = if x.is_finite() { u64::MAX } else { START_TERMS };
    loop {
        let (mut partial, stream) = weighted_sorted_partial(x, w, n)?;
        let remainder = sorted_remainder(x, w, &stream, partial.consumed)?;
        let big = big_width_error(&mut partial.big_widths, w);
        let result = Enclosure {
            value: partial.sum.value + remainder.value,
            error: partial.sum.error + big + remainder.error,
        };
        if result.error <= tol || x.is_finite() {
            if result.error > tol {
                return Err(Error::ToleranceUnreachable(format!(
                    "achieved ±{:.3e} > tol {:.3e} (input widths dominate)",
                    result.error, tol
                )));
            }
            return Ok(result);
        }
        if n >= MAX_TERMS {
            return Err(Error::ToleranceUnreachable(format!(
                "achieved ±{:.3e} > tol {:.3e} after {} terms",
                result.error, tol, partial.consumed
            )));
        }
        n = (n * 4).min(MAX_TERMS);
    }
}

/// Certified dual (Marcinkiewicz) norm `‖x‖_W = sup_n Σ_{j≤n} x*(j) / W(n)`.
pub fn marcinkiewicz_norm(x: &Seq, w: &Weight, tol: f64) -> Result<Enclosure> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::ToleranceUnreachable("tolerance must be positive".into()));
    }
    let mut n = if x.is_finite() { u64::MAX } else { START_TERMS };
    loop {
        let mut stream = MergedStream::new(x)?;
        let mut s = 0.0f64; // running Σ x*(j) midpoints
        let mut s_err = 0.0f64;
        let mut wsum = 0.0f64;
        let mut best = Enclosure::exact(0.0);
        let mut k = 0u64;
        while k < n {
            let Some((v, _)) = stream.next() else { break };
            k += 1;
            s += v.value;
            s_err += v.error + f64::EPSILON * s.abs() * 2.0;
            wsum += w.value_f64(k);
            let w_err = 8.0 * f64::EPSILON * wsum * k as f64;
            let ratio_lo = (s - s_err) / (wsum + w_err);
            let ratio_hi = (s + s_err) / (wsum - w_err).max(f64::MIN_POSITIVE);
            if ratio_hi > best.hi() || ratio_lo > best.lo() {
                best = Enclosure::from_bracket(best.lo().max(ratio_lo), best.hi().max(ratio_hi));
            }
        }
        let result = if x.is_finite() {
            // W(n) keeps growing past the support while the numerator stays
            // put, so the computed maximum is the supremum.
            best
        } else {
            let t = x.tail().expect("infinite sequence has a tail");
            let from = stream.tail_from();
            let ((cu, su, qu), _) = t.sorted_env(from);
            if qu <= 1.0 {
                return Err(Error::ToleranceUnreachable(
                    "rearranged tail is not summable; the ratio supremum cannot be bracketed"
                        .into(),
                ));
            }
            let rest = cu * sum_power_hi(stream.tail_consumed() as f64 + su.max(0.0), qu);
            let w_next = wsum + w.value_f64(k + 1);
            let sup_tail = (s + s_err + rest) / (w_next * (1.0 - 8.0 * f64::EPSILON * k as f64));
            Enclosure::from_bracket(best.lo(), best.hi().max(sup_tail))
        };
        if result.error <= tol || x.is_finite() {
            if result.error > tol {
                return Err(Error::ToleranceUnreachable(format!(
                    "achieved ±{:.3e} > tol {:.3e}",
                    result.error, tol
                )));
            }
            return Ok(result);
        }
        if n >= MAX_TERMS {
            return Err(Error::ToleranceUnreachable(format!(
                "achieved ±{:.3e} > tol {:.3e} after {} terms",
                result.error, tol, k
            )));
        }
        n = (n * 4).min(MAX_TERMS);
    }
}

/// Certified natural-order weighted sum `Σ_n x(n) w(n)` (no rearrangement).
pub fn weighted_sum(x: &Seq, w: &Weight, explicit: u64) -> Result<Enclosure> {
    let cut = x.head_len().max(explicit);
    let mut terms = Vec::with_capacity(cut as usize);
    let mut width_sum = 0.0;
    let mut abs_sum = 0.0;
    for j in 1..=cut {
        let v = x.value_enc(j);
        let wj = w.value_f64(j);
        terms.push(v.value * wj);
        width_sum += v.error * wj;
        abs_sum += v.value.abs() * wj;
    }
    let mut s = neumaier_sum(terms.iter().copied());
    s.error += width_sum + 16.0 * f64::EPSILON * abs_sum;
    let tail = x.tail_weighted_sum_bracket(w, cut)?;
    Ok(s.add(tail))
}

/// Cumulative variation data: `values[j-1] + anchor` encloses
/// `Σ_{l≥j} |x(l) - x(l+1)|` for `j ≤ upto`.
pub struct VariationCumulative {
    /// `S(j) = Σ_{l=j}^{anchor-1} |Δx(l)|` as plain floats, `j = 1..=upto`.
    pub values: Vec<f64>,
    /// Bound on the rounding + input-width error of each `values[j]`.
    pub indep_err: f64,
    /// Bracket of `Σ_{l≥anchor} |Δx(l)|`, shared by every entry.
    pub anchor: Enclosure,
    pub anchor_index: u64,
}

impl VariationCumulative {
    pub fn value(&self, j: u64) -> Enclosure {
        let s = self.values[j as usize - 1];
        Enclosure {
            value: s + self.anchor.value,
            error: self.indep_err + self.anchor.error,
        }
    }
}

/// Backward-accumulated variation sums with a bracketed far tail.
///
/// `anchor` picks where the explicit accumulation stops; the far tail is
/// bracketed analytically per family. For monotone tails the bracket is a
/// single telescoped value, so any anchor works; for oscillating tails the
/// bracket width shrinks like `anchor^{-2}`.
pub fn variation_cumulative(x: &Seq, upto: u64, anchor: u64) -> Result<VariationCumulative> {
    assert!(upto >= 1 && anchor > upto);
    let tail_bracket = match x.tail() {
        Some(t) => {
            debug_assert!(anchor > x.head_len());
            t.variation_tail_bracket(anchor)?
        }
        None => Enclosure::exact(0.0),
    };
    let mut values = vec![0.0f64; upto as usize];
    let mut s = 0.0f64;
    let mut err = 0.0f64;
    for l in (1..anchor).rev() {
        let d = x.value_enc(l).sub(x.value_enc(l + 1)).abs();
        s += d.value;
        err += d.error + 2.0 * f64::EPSILON * s.abs();
        if l <= upto {
            values[l as usize - 1] = s;
        }
    }
    Ok(VariationCumulative {
        values,
        indep_err: err,
        anchor: tail_bracket,
        anchor_index: anchor,
    })
}

/// Enclosure of `Σ_{l≥j} |x(l) - x(l+1)|`.
pub fn tail_variation(x: &Seq, j: u64, tol: f64) -> Result<Enclosure> {
    assert!(j >= 1);
    // Pick the anchor so the far-tail bracket width is within tol for
    // oscillating families; monotone ones telescope exactly anyway.
    let osc_anchor = (8.0 / tol.max(1e-14)).sqrt().ceil() as u64;
    let anchor = (j + 8).max(x.head_len() + 2).max(
        if x.tail().map(|t| t.eventually_monotone()).unwrap_or(true) {
            0
        } else {
            osc_anchor
        },
    );
    let c = variation_cumulative(x, j, anchor)?;
    let v = c.value(j);
    if v.error > tol {
        return Err(Error::ToleranceUnreachable(format!(
            "variation enclosure ±{:.3e} > tol {:.3e}",
            v.error, tol
        )));
    }
    Ok(v)
}
