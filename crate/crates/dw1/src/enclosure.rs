//! Certified scalars: an `f64` value paired with an absolute error bound.
//!
//! Every arithmetic operation propagates input error bounds and adds a
//! conservative rounding term, so an [`Enclosure`] always brackets the real
//! number it stands for. This is deliberately crude interval arithmetic;
//! the quantities in this crate are sums with well-understood tails, and
//! the error terms stay many orders of magnitude below the tolerances the
//! callers request.

use num_rational::BigRational;
use num_traits::ToPrimitive;

const EPS: f64 = f64::EPSILON;

/// A real number known to lie in `[value - error, value + error]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub value: f64,
    pub error: f64,
}

impl Enclosure {
    /// Encloses a value that is exactly representable (integers, dyadics).
    pub fn exact(value: f64) -> Self {
        Enclosure { value, error: 0.0 }
    }

    pub fn new(value: f64, error: f64) -> Self {
        debug_assert!(error >= 0.0, "negative error bound");
        Enclosure { value, error }
    }

    /// Enclosure of an interval `[lo, hi]` known to contain the value.
    pub fn from_bracket(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty bracket");
        let mid = 0.5 * (lo + hi);
        // Half-width plus slack for the midpoint rounding itself.
        let err = 0.5 * (hi - lo) + EPS * mid.abs();
        Enclosure::new(mid, err)
    }

    /// Rounds a rational to `f64`; the result carries the rounding error.
    pub fn from_rational(r: &BigRational) -> Self {
        let value = rational_to_f64(r);
        Enclosure::new(value, 2.0 * EPS * value.abs())
    }

    pub fn lo(&self) -> f64 {
        self.value - self.error
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    /// True when the whole enclosure is strictly above `x`.
    pub fn certainly_gt(&self, x: f64) -> bool {
        self.lo() > x
    }

    /// True when the whole enclosure is strictly below `x`.
    pub fn certainly_lt(&self, x: f64) -> bool {
        self.hi() < x
    }

    pub fn add(&self, other: Enclosure) -> Enclosure {
        let value = self.value + other.value;
        let error = self.error + other.error + EPS * value.abs();
        Enclosure::new(value, error)
    }

    pub fn sub(&self, other: Enclosure) -> Enclosure {
        let value = self.value - other.value;
        let error = self.error + other.error + EPS * value.abs();
        Enclosure::new(value, error)
    }

    pub fn mul(&self, other: Enclosure) -> Enclosure {
        let value = self.value * other.value;
        let error = self.value.abs() * other.error
            + other.value.abs() * self.error
            + self.error * other.error
            + EPS * value.abs();
        Enclosure::new(value, error)
    }

    pub fn scale(&self, c: f64) -> Enclosure {
        let value = c * self.value;
        Enclosure::new(value, c.abs() * self.error + EPS * value.abs())
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::new(-self.value, self.error)
    }

    pub fn abs(&self) -> Enclosure {
        // |.| is 1-Lipschitz, so the error bound carries over unchanged.
        Enclosure::new(self.value.abs(), self.error)
    }

    pub fn widen(&self, extra: f64) -> Enclosure {
        Enclosure::new(self.value, self.error + extra)
    }

    /// Intersection test: could both enclosures denote the same real?
    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }
}

/// Converts a rational to the nearest `f64`, falling back to a quotient of
/// approximations when the parts overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Compensated (Neumaier) summation of `f64` terms.
///
/// Returns the sum together with a rigorous rounding bound: compensated
/// summation of `n < 2^52` terms is off by at most `2 eps Σ|x_i|`; the
/// factor 4 leaves headroom for the final recombination.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> Enclosure {
    let mut s = 0.0_f64;
    let mut c = 0.0_f64;
    let mut abs = 0.0_f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
        abs += x.abs();
    }
    Enclosure::new(s + c, 4.0 * EPS * abs)
}

/// Sums enclosures: values by compensated summation, error bounds linearly.
pub fn sum_enclosures<I: IntoIterator<Item = Enclosure>>(xs: I) -> Enclosure {
    let mut err = 0.0_f64;
    let total = neumaier_sum(xs.into_iter().map(|e| {
        err += e.error;
        e.value
    }));
    total.widen(err)
}

/// Bracket of the tail `Σ_{m > n} c (m + s)^{-q}` for `c ≥ 0`, `q > 1`.
///
/// The terms are positive and decreasing, so the integral test sandwiches
/// the sum between `∫_{n+1}^∞` and `∫_n^∞` of `c (t + s)^{-q} dt`.
pub fn power_tail_bracket(c: f64, s: f64, q: f64, n: u64) -> Enclosure {
    assert!(q > 1.0, "power tail requires exponent > 1");
    assert!(c >= 0.0);
    let n = n as f64;
    debug_assert!(n + s > 0.0);
    let integral = |a: f64| c * (a + s).powf(1.0 - q) / (q - 1.0);
    let hi = integral(n);
    let lo = integral(n + 1.0);
    // powf is correctly rounded to within a few ulps; absorb that in the
    // bracket just in case.
    Enclosure::from_bracket(lo * (1.0 - 8.0 * EPS), hi * (1.0 + 8.0 * EPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_propagates_bounds() {
        let a = Enclosure::new(1.0, 1e-12);
        let b = Enclosure::new(2.0, 1e-12);
        let s = a.add(b);
        assert!(s.contains(3.0));
        assert!(s.error >= 2e-12);
        let p = a.mul(b);
        assert!(p.contains(2.0));
        let d = b.sub(a);
        assert!(d.contains(1.0));
        assert!(a.abs().contains(1.0));
        assert!(a.neg().contains(-1.0));
    }

    #[test]
    fn bracket_and_comparisons() {
        let e = Enclosure::from_bracket(0.9, 1.1);
        assert!(e.contains(1.0));
        assert!(e.certainly_gt(0.5));
        assert!(e.certainly_lt(1.5));
        assert!(!e.certainly_gt(1.0));
        let f = Enclosure::from_bracket(1.05, 1.2);
        assert!(e.overlaps(&f));
        let g = Enclosure::from_bracket(2.0, 2.1);
        assert!(!e.overlaps(&g));
    }

    #[test]
    fn rational_roundtrip() {
        let e = Enclosure::from_rational(&rat(1, 3));
        assert!(e.contains(1.0 / 3.0));
        assert!(e.error < 1e-15);
    }

    #[test]
    fn neumaier_handles_cancellation() {
        // 1 + 1e100 - 1e100 collapses to 0 in naive summation.
        let e = neumaier_sum(vec![1.0, 1e100, -1e100]);
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn neumaier_error_bound_is_sound() {
        let xs: Vec<f64> = (1..=100_000u64).map(|n| 1.0 / (n * n) as f64).collect();
        let e = neumaier_sum(xs.iter().copied());
        let mut exact = 0.0_f64;
        for &x in xs.iter().rev() {
            exact += x;
        }
        assert!((e.value - exact).abs() <= e.error + 1e-16);
    }

    #[test]
    fn power_tail_bracket_encloses_partial_sums() {
        // Σ_{m>n} 1/m² against a long explicit partial sum.
        let b = power_tail_bracket(1.0, 0.0, 2.0, 100);
        let mut s = 0.0;
        for m in 101..2_000_000u64 {
            s += 1.0 / (m as f64 * m as f64);
        }
        assert!(b.hi() >= s);
        assert!(b.lo() <= s + 1.0 / 2_000_000.0);
        // Bracket is tight: width about q / n² = 2e-4 at n = 100.
        assert!(b.error < 2e-4);
    }
}
