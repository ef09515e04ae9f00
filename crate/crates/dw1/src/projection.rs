//! Metric projection onto one-dimensional subspaces of d(w,1).
//!
//! For finite rational data the map `c ↦ h(c) = ‖x - c·y‖` is convex and
//! piecewise linear; its kinks lie where some coordinate of `x - c·y`
//! crosses zero or where two coordinates swap places in the decreasing
//! rearrangement. Both happen at rational points, so the solver evaluates
//! `h` exactly on the full candidate set and reads off the (possibly
//! degenerate) argmin interval.
//!
//! Infinite instances go through [`CoupledInstance`]: an explicit block of
//! the first `N` coordinates plus an analytically summed tail, with every
//! evaluation returning an enclosure. Differences `h(c') - h(c)` have a
//! fast path in which shared construction noise cancels exactly, which is
//! what makes one-sided certificates possible at slopes far below the
//! pointwise evaluation error.

use crate::enclosure::{neumaier_sum, Enclosure};
use crate::norms::lorentz_norm_exact;
use crate::seq::{Seq, TailFamily};
use crate::weight::Weight;
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

// --- exact lane -------------------------------------------------------------

/// Exact argmin interval of `c ↦ ‖x - c·y‖` with the attained distance.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactProjection {
    pub lo: BigRational,
    pub hi: BigRational,
    pub dist: BigRational,
}

impl ExactProjection {
    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, c: &BigRational) -> bool {
        &self.lo <= c && c <= &self.hi
    }
}

/// `h(c) = ‖x - c·y‖` evaluated exactly.
pub fn h_exact(x: &[BigRational], y: &[BigRational], c: &BigRational, w: &Weight) -> Result<BigRational> {
    let n = x.len().max(y.len());
    let mut u = Vec::with_capacity(n);
    for i in 0..n {
        let xi = x.get(i).cloned().unwrap_or_else(BigRational::zero);
        let yi = y.get(i).cloned().unwrap_or_else(BigRational::zero);
        u.push(xi - c * yi);
    }
    lorentz_norm_exact(&u, w)
}

/// All rational points where `h` can kink: zero crossings of single
/// coordinates and order swaps of coordinate pairs.
fn kink_candidates(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let n = x.len().max(y.len());
    let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
    let mut cands: Vec<BigRational> = Vec::new();
    let active: Vec<usize> = (0..n)
        .filter(|&i| !get(x, i).is_zero() || !get(y, i).is_zero())
        .collect();
    for (ai, &i) in active.iter().enumerate() {
        let (xi, yi) = (get(x, i), get(y, i));
        if !yi.is_zero() {
            cands.push(&xi / &yi);
        }
        for &j in &active[ai + 1..] {
            let (xj, yj) = (get(x, j), get(y, j));
            let dy = &yi - &yj;
            if !dy.is_zero() {
                cands.push((&xi - &xj) / dy);
            }
            let sy = &yi + &yj;
            if !sy.is_zero() {
                cands.push((&xi + &xj) / sy);
            }
        }
    }
    if cands.is_empty() {
        cands.push(BigRational::zero());
    }
    cands.sort_unstable();
    cands.dedup();
    cands
}

/// Exact metric projection of `x` onto `span{y}`, as the coefficient
/// interval `[lo, hi]` (an interval because the norm is not strictly
/// convex) together with the distance.
pub fn project_exact(x: &[BigRational], y: &[BigRational], w: &Weight) -> Result<ExactProjection> {
    if y.iter().all(|v| v.is_zero()) {
        return Err(Error::DegenerateSubspace(
            "direction sequence is zero; the spanned subspace is trivial".into(),
        ));
    }
    let cands = kink_candidates(x, y);
    let values: Vec<BigRational> = cands
        .iter()
        .map(|c| h_exact(x, y, c, w))
        .collect::<Result<_>>()?;
    let dist = values.iter().min().cloned().expect("candidate set is nonempty");
    let hits: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == dist)
        .map(|(i, _)| i)
        .collect();
    // h is convex, so the minimizing candidates must be consecutive.
    for pair in hits.windows(2) {
        assert!(
            pair[1] == pair[0] + 1,
            "convexity violation: non-contiguous minimizers"
        );
    }
    Ok(ExactProjection {
        lo: cands[hits[0]].clone(),
        hi: cands[*hits.last().expect("nonempty")].clone(),
        dist,
    })
}

// --- dual certificates --------------------------------------------------

/// An extreme dual functional `f(i) = sign(i) · w(rank(i))` on a finite
/// support, witnessing optimality: `f(x - c·y) = ‖x - c·y‖`, `f(y) = 0`,
/// `‖f‖_W = 1`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DualCertificate {
    /// 1-based coordinate indices carrying the functional.
    pub support: Vec<u64>,
    pub signs: Vec<i8>,
    /// `|f| = w(rank)` at the matching support position; ranks are a
    /// permutation of `1..=support.len()`.
    pub ranks: Vec<u64>,
}

/// Exact check of the three certificate identities.
pub fn verify_dual_certificate(
    x: &[BigRational],
    y: &[BigRational],
    c: &BigRational,
    w: &Weight,
    cert: &DualCertificate,
) -> Result<bool> {
    let m = cert.support.len();
    if cert.signs.len() != m || cert.ranks.len() != m {
        return Err(Error::InvalidCertificate("mismatched certificate arrays".into()));
    }
    let mut seen = vec![false; m];
    for &r in &cert.ranks {
        if r < 1 || r > m as u64 || seen[r as usize - 1] {
            return Err(Error::InvalidCertificate("ranks are not a permutation".into()));
        }
        seen[r as usize - 1] = true;
    }
    if cert.signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(Error::InvalidCertificate("signs must be ±1".into()));
    }
    let get = |v: &[BigRational], i: u64| {
        v.get(i as usize - 1)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    };
    let wv = |r: u64| {
        w.value_exact(r)
            .ok_or_else(|| Error::ExactUnavailable("certificate checking needs exact weights".into()))
    };
    // f(u) for u = x - c·y, and f(y).
    let mut fu = BigRational::zero();
    let mut fy = BigRational::zero();
    for k in 0..m {
        let i = cert.support[k];
        let sgn = BigRational::from(num_bigint::BigInt::from(cert.signs[k]));
        let f_i = &sgn * wv(cert.ranks[k])?;
        fu += &f_i * (get(x, i) - c * get(y, i));
        fy += &f_i * get(y, i);
    }
    let mut u = Vec::new();
    let n = x.len().max(y.len()).max(cert.support.iter().copied().max().unwrap_or(0) as usize);
    for i in 1..=n as u64 {
        u.push(get(x, i) - c * get(y, i));
    }
    let norm = lorentz_norm_exact(&u, w)?;
    Ok(fu == norm && fy.is_zero())
}

/// Search outcome for an extreme dual certificate at a claimed minimizer.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateSearch {
    Found { certificate: DualCertificate },
    /// No *extreme* functional aligns; optimality may still hold through a
    /// convex combination. Refutes extremality, not optimality.
    NotFoundAmongExtreme,
}

const MAX_CERT_SUPPORT: usize = 12;

/// Searches for an extreme dual certificate for `c` being a minimizer of
/// `‖x - c·y‖`. The aligned part of the functional is forced (up to ties)
/// by the residual; remaining mass is placed on spare coordinates of `y`
/// by exhaustive search.
pub fn dual_certificate(
    x: &[BigRational],
    y: &[BigRational],
    c: &BigRational,
    w: &Weight,
) -> Result<CertificateSearch> {
    let n = x.len().max(y.len());
    let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
    let mut u = Vec::with_capacity(n);
    for i in 0..n {
        u.push(get(x, i) - c * get(y, i));
    }
    let supp_u: Vec<usize> = (0..n).filter(|&i| !u[i].is_zero()).collect();
    let free: Vec<usize> = (0..n)
        .filter(|&i| u[i].is_zero() && !get(y, i).is_zero())
        .collect();
    if supp_u.len() + free.len() > MAX_CERT_SUPPORT {
        return Err(Error::SupportTooLarge(format!(
            "certificate search over {} coordinates exceeds the {} limit",
            supp_u.len() + free.len(),
            MAX_CERT_SUPPORT
        )));
    }
    // Group the forced part by |u| value; ranks inside a tie group are free.
    let mut order: Vec<usize> = supp_u.clone();
    order.sort_by(|&a, &b| u[b].abs().cmp(&u[a].abs()));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last() {
            Some(g) if u[g[0]].abs() == u[i].abs() => groups.last_mut().unwrap().push(i),
            _ => groups.push(vec![i]),
        }
    }
    let wv = |r: u64| -> Result<BigRational> {
        w.value_exact(r)
            .ok_or_else(|| Error::ExactUnavailable("certificate search needs exact weights".into()))
    };

    // Enumerate rank permutations within tie groups.
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for (k, &head) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(k);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    let mut group_perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| permutations(g)).collect();
    if group_perms.is_empty() {
        group_perms.push(vec![vec![]]);
    }

    // Cartesian product over group permutations.
    let mut forced_layouts: Vec<Vec<usize>> = vec![vec![]];
    for perms in &group_perms {
        let mut next = Vec::new();
        for base in &forced_layouts {
            for p in perms {
                let mut b = base.clone();
                b.extend_from_slice(p);
                next.push(b);
            }
        }
        forced_layouts = next;
    }

    for layout in &forced_layouts {
        // Forced: rank k+1 and the residual's sign at each aligned index.
        let mut fy = BigRational::zero();
        let mut signs_forced = Vec::with_capacity(layout.len());
        let mut ok = true;
        for (k, &i) in layout.iter().enumerate() {
            let s = if u[i].is_positive() { 1i8 } else { -1i8 };
            let f_i = BigRational::from(num_bigint::BigInt::from(s)) * wv(k as u64 + 1)?;
            fy += &f_i * get(y, i);
            signs_forced.push(s);
            if k > 0 {
                ok &= u[layout[k - 1]].abs() >= u[i].abs();
            }
        }
        if !ok {
            continue;
        }
        let base_rank = layout.len() as u64;
        // Try to cancel fy with spare coordinates: subsets × orders × signs.
        let outcome = search_free(&fy, &free, y, base_rank, &wv)?;
        if let Some((idx, signs, ranks)) = outcome {
            let mut support: Vec<u64> = layout.iter().map(|i| *i as u64 + 1).collect();
            let mut all_signs = signs_forced.clone();
            let mut all_ranks: Vec<u64> = (1..=base_rank).collect();
            support.extend(idx.iter().map(|i| *i as u64 + 1));
            all_signs.extend(signs);
            all_ranks.extend(ranks);
            let cert = DualCertificate {
                support,
                signs: all_signs,
                ranks: all_ranks,
            };
            if verify_dual_certificate(x, y, c, w, &cert)? {
                return Ok(CertificateSearch::Found { certificate: cert });
            }
        }
    }
    Ok(CertificateSearch::NotFoundAmongExtreme)
}

type FreeAssignment = (Vec<usize>, Vec<i8>, Vec<u64>);

/// Find spare coordinates, signs and ranks with
/// `Σ σ_j w(r_j) y_j = -target`, ranks consecutive after `base_rank`.
fn search_free(
    target: &BigRational,
    free: &[usize],
    y: &[BigRational],
    base_rank: u64,
    wv: &dyn Fn(u64) -> Result<BigRational>,
) -> Result<Option<FreeAssignment>> {
    let get = |i: usize| y.get(i).cloned().unwrap_or_else(BigRational::zero);
    // Depth-first over ordered selections (order fixes which rank each
    // chosen coordinate takes).
    fn dfs(
        want: &BigRational,
        pool: &[usize],
        used: &mut Vec<bool>,
        rank: u64,
        get: &dyn Fn(usize) -> BigRational,
        wv: &dyn Fn(u64) -> Result<BigRational>,
        picked: &mut Vec<(usize, i8)>,
        depth_left: usize,
    ) -> Result<Option<Vec<(usize, i8)>>> {
        if want.is_zero() {
            return Ok(Some(picked.clone()));
        }
        if depth_left == 0 {
            return Ok(None);
        }
        let wr = wv(rank)?;
        for (k, &i) in pool.iter().enumerate() {
            if used[k] {
                continue;
            }
            for s in [1i8, -1i8] {
                let contrib = BigRational::from(num_bigint::BigInt::from(s)) * &wr * get(i);
                let next = want - &contrib;
                used[k] = true;
                picked.push((i, s));
                if let Some(hit) = dfs(&next, pool, used, rank + 1, get, wv, picked, depth_left - 1)? {
                    return Ok(Some(hit));
                }
                picked.pop();
                used[k] = false;
            }
        }
        Ok(None)
    }

    let want = -target.clone();
    let mut used = vec![false; free.len()];
    let mut picked = Vec::new();
    let hit = dfs(
        &want,
        free,
        &mut used,
        base_rank + 1,
        &get,
        wv,
        &mut picked,
        free.len(),
    )?;
    Ok(hit.map(|sel| {
        let idx: Vec<usize> = sel.iter().map(|(i, _)| *i).collect();
        let signs: Vec<i8> = sel.iter().map(|(_, s)| *s).collect();
        let ranks: Vec<u64> = (0..sel.len() as u64).map(|k| base_rank + 1 + k).collect();
        (idx, signs, ranks)
    }))
}

// --- strong unicity -------------------------------------------------------

/// Local strength of a unique minimizer: the smaller one-sided slope of
/// `h` at the minimizer, normalized by `‖y‖`.
#[derive(Clone, Debug)]
pub struct UnicityEstimate {
    pub minimizer: BigRational,
    pub dist: BigRational,
    /// `min(h'(c+), -h'(c-)) / ‖y‖`; positive exactly when the minimizer
    /// is strongly unique.
    pub rate: BigRational,
}

impl UnicityEstimate {
    /// Projection-stability bound: perturbing the target by `dx` in norm
    /// moves the best approximation (in span{y}) by at most `2·dx / rate`.
    pub fn stability_bound(&self, dx: &BigRational) -> BigRational {
        BigRational::from(num_bigint::BigInt::from(2)) * dx / &self.rate
    }
}

/// Exact one-sided slopes at the minimizer; errors out when the argmin is
/// an interval (no strong unicity).
pub fn strong_unicity_estimate(
    x: &[BigRational],
    y: &[BigRational],
    w: &Weight,
) -> Result<UnicityEstimate> {
    let p = project_exact(x, y, w)?;
    if !p.is_singleton() {
        return Err(Error::NotStronglyUnique(format!(
            "minimizer set is a nondegenerate interval [{}, {}]",
            p.lo, p.hi
        )));
    }
    let c0 = p.lo.clone();
    let cands = kink_candidates(x, y);
    let pos = cands.binary_search(&c0).expect("minimizer is a kink candidate");
    let right = if pos + 1 < cands.len() {
        cands[pos + 1].clone()
    } else {
        &c0 + BigRational::one()
    };
    let left = if pos > 0 {
        cands[pos - 1].clone()
    } else {
        &c0 - BigRational::one()
    };
    let h0 = h_exact(x, y, &c0, w)?;
    let slope_r = (h_exact(x, y, &right, w)? - &h0) / (&right - &c0);
    let slope_l = (&h0 - h_exact(x, y, &left, w)?) / (&c0 - &left);
    let rate_raw = if slope_r < -slope_l.clone() {
        slope_r
    } else {
        -slope_l
    };
    let ynorm = lorentz_norm_exact(y, w)?;
    let rate = rate_raw / ynorm;
    if !rate.is_positive() {
        return Err(Error::NotStronglyUnique(
            "one-sided slopes vanish at the minimizer".into(),
        ));
    }
    Ok(UnicityEstimate {
        minimizer: c0,
        dist: p.dist,
        rate,
    })
}

// --- certified lane ---------------------------------------------------------

/// Analytic model of the coordinates beyond the explicit block.
#[derive(Clone, Debug)]
pub enum TailModel {
    /// No tail: the sequences are finitely supported.
    None,
    /// `|u(n)| = |sx - c·sy| · φ(n)` with `Σ_{n>N} φ(n) w(n)` enclosed by
    /// `k`; `φ` positive nonincreasing. Arises when both tails live on one
    /// power profile.
    Scaled {
        sx: f64,
        sy: f64,
        k: Enclosure,
        phi_first: f64,
    },
    /// `u(n) = x(n) - c·y(n)` entrywise nonnegative and nonincreasing for
    /// every admissible `c`; `a` encloses `Σ_{n>N} y(n) w(n)`, `b` encloses
    /// `Σ_{n>N} x(n) w(n)`. The builder owns the monotonicity argument.
    Coupled {
        a: Enclosure,
        b: Enclosure,
        x_first: Enclosure,
        y_first: Enclosure,
    },
}

/// Explicit-block-plus-tail evaluator for `h(c) = ‖x - c·y‖`.
///
/// The explicit block stores plain floats; `common_err` bounds a shift
/// shared by every block entry of `x` (one anchor bracket feeding all of
/// them), `indep_err` bounds the per-entry independent noise. The split
/// matters: shared shifts cancel exactly in difference evaluations.
pub struct CoupledInstance {
    pub u0: Vec<f64>,
    pub y: Vec<f64>,
    pub w: Vec<f64>,
    pub common_err: f64,
    pub indep_err: f64,
    pub y_err: f64,
    pub tail: TailModel,
    pub c_lo: f64,
    pub c_hi: f64,
    /// Set by builders that can argue analytically that every tail value of
    /// `|u|` is ≤ every block value for all admissible coefficients (e.g.
    /// the whole of `u` is nonnegative and nonincreasing). Skips the numeric
    /// block/tail boundary comparison, which cannot decide near-ties.
    pub tail_dominated: bool,
}

/// Certified minimization result on a coefficient range.
#[derive(Clone, Debug)]
pub struct CertifiedProjection {
    /// Certified localization: every minimizer lies in `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
    pub dist: Enclosure,
    /// An approximate minimizer inside `[lo, hi]`.
    pub c_hint: f64,
}

/// Result of a one-sided comparison certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `h(a) < h(b)` certified: every minimizer is `< b`.
    MinLeftOf,
    /// `h(a) > h(b)` certified: every minimizer is `> a`.
    MinRightOf,
    /// Enclosures overlap; no conclusion.
    Inconclusive,
}

impl CoupledInstance {
    pub fn from_finite(x: &Seq, y: &Seq, w: &Weight) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidSeq(
                "finite builder got a sequence with a tail rule".into(),
            ));
        }
        let n = x.head_len().max(y.head_len());
        let mut u0 = Vec::with_capacity(n as usize);
        let mut yv = Vec::with_capacity(n as usize);
        let mut wv = Vec::with_capacity(n as usize);
        let mut indep: f64 = 0.0;
        let mut y_err: f64 = 0.0;
        for i in 1..=n {
            let xe = x.value_enc(i);
            let ye = y.value_enc(i);
            u0.push(xe.value);
            yv.push(ye.value);
            wv.push(w.value_f64(i));
            indep = indep.max(xe.error);
            y_err = y_err.max(ye.error);
        }
        if yv.iter().all(|v| *v == 0.0) {
            return Err(Error::DegenerateSubspace("direction sequence is zero".into()));
        }
        Ok(CoupledInstance {
            u0,
            y: yv,
            w: wv,
            common_err: 0.0,
            indep_err: indep,
            y_err,
            tail: TailModel::None,
            c_lo: f64::NEG_INFINITY,
            c_hi: f64::INFINITY,
            tail_dominated: false,
        })
    }

    /// Builder for `x`, `y` whose tails live on a common power profile
    /// `φ(n) = (n+offset)^{-exponent}` with coefficients `sx`, `sy`.
    pub fn from_scaled_power(x: &Seq, y: &Seq, w: &Weight, explicit: u64) -> Result<Self> {
        let (sx, phix) = scaled_profile(x)?;
        let (sy, phiy) = scaled_profile(y)?;
        if let (Some(px), Some(py)) = (&phix, &phiy) {
            if px != py {
                return Err(Error::InvalidSeq(
                    "tails live on different power profiles; no shared model".into(),
                ));
            }
        }
        let profile = phix.or(phiy);
        let n = explicit.max(x.head_len()).max(y.head_len());
        let mut u0 = Vec::with_capacity(n as usize);
        let mut yv = Vec::with_capacity(n as usize);
        let mut wv = Vec::with_capacity(n as usize);
        let mut indep: f64 = 0.0;
        let mut y_err: f64 = 0.0;
        for i in 1..=n {
            let xe = x.value_enc(i);
            let ye = y.value_enc(i);
            u0.push(xe.value);
            yv.push(ye.value);
            wv.push(w.value_f64(i));
            indep = indep.max(xe.error);
            y_err = y_err.max(ye.error);
        }
        let tail = match profile {
            None => TailModel::None,
            Some((exponent, offset)) => {
                let probe = Seq::with_tail(
                    vec![BigRational::zero(); n as usize],
                    TailFamily::power(BigRational::one(), exponent, offset),
                )?;
                let k = probe.tail_norm_bracket(w, n)?;
                let phi_first = ((n + 1) as f64 + offset as f64).powi(-(exponent as i32));
                TailModel::Scaled {
                    sx,
                    sy,
                    k,
                    phi_first,
                }
            }
        };
        Ok(CoupledInstance {
            u0,
            y: yv,
            w: wv,
            common_err: 0.0,
            indep_err: indep,
            y_err,
            tail,
            c_lo: f64::NEG_INFINITY,
            c_hi: f64::INFINITY,
            tail_dominated: false,
        })
    }

    fn explicit_len(&self) -> usize {
        self.u0.len()
    }

    fn w_total(&self) -> f64 {
        self.w.iter().sum::<f64>() * (1.0 + 1e-12)
    }

    fn check_range(&self, c: f64) -> Result<()> {
        if c < self.c_lo || c > self.c_hi {
            return Err(Error::InvalidSeq(format!(
                "coefficient {c} outside the model's certified range [{}, {}]",
                self.c_lo, self.c_hi
            )));
        }
        Ok(())
    }

    fn tail_first_hi(&self, c: f64) -> f64 {
        match &self.tail {
            TailModel::None => 0.0,
            TailModel::Scaled { sx, sy, phi_first, .. } => (sx - c * sy).abs() * phi_first * 1.0000001,
            TailModel::Coupled {
                x_first, y_first, ..
            } => (x_first.hi() - c * y_first.value).abs().max(
                (x_first.hi() + c.abs() * y_first.hi()).min(x_first.hi() - c * y_first.lo()),
            ),
        }
    }

    fn tail_sum(&self, c: f64) -> Enclosure {
        match &self.tail {
            TailModel::None => Enclosure::exact(0.0),
            TailModel::Scaled { sx, sy, k, .. } => k.scale((sx - c * sy).abs()),
            TailModel::Coupled { a, b, .. } => b.sub(a.scale(c)),
        }
    }

    /// Certified value of `h(c)`.
    pub fn h(&self, c: f64) -> Result<Enclosure> {
        self.check_range(c)?;
        let n = self.explicit_len();
        let mut v: Vec<f64> = Vec::with_capacity(n);
        let mut max_abs: f64 = 0.0;
        for i in 0..n {
            let vi = (self.u0[i] - c * self.y[i]).abs();
            max_abs = max_abs.max(vi);
            v.push(vi);
        }
        v.sort_unstable_by(|p, q| q.total_cmp(p));
        // Sorted-block ordering must dominate the tail; zero entries are
        // harmless only when there is no tail to displace.
        let t_first = self.tail_first_hi(c);
        let min_nonzero = v.iter().rev().find(|x| **x > 0.0).copied().unwrap_or(0.0);
        let zeros = v.iter().filter(|x| **x == 0.0).count();
        let mut order_slack = 0.0;
        if !matches!(self.tail, TailModel::None) && !self.tail_dominated {
            if min_nonzero + 4.0 * (self.common_err + self.indep_err) < t_first {
                return Err(Error::ToleranceUnreachable(
                    "explicit block too short: tail values overtake block values".into(),
                ));
            }
            // Ties and zero entries can displace tail ranks by a bounded
            // amount of weight.
            order_slack = (zeros as f64 + 1.0) * t_first * self.w[n - 1];
        }
        let terms = v.iter().zip(&self.w).map(|(vi, wi)| vi * wi);
        let mut s = neumaier_sum(terms);
        let wtot = self.w_total();
        let per_entry = self.common_err + self.indep_err + c.abs() * self.y_err;
        s.error += per_entry * wtot + 8.0 * f64::EPSILON * max_abs * wtot + order_slack;
        Ok(s.add(self.tail_sum(c)))
    }

    /// Certified `h(c2) - h(c1)`, exploiting cancellation of shared noise.
    ///
    /// The fast path requires: identical sort order at both coefficients
    /// and all block entries positive with margin (then the shared shift
    /// and the per-entry noise both drop out exactly, leaving only dot
    /// rounding and the tail's `(c1-c2)`-scaled width).
    pub fn h_diff(&self, c1: f64, c2: f64) -> Result<Enclosure> {
        self.check_range(c1)?;
        self.check_range(c2)?;
        let n = self.explicit_len();
        let mut v1: Vec<f64> = Vec::with_capacity(n);
        let mut v2: Vec<f64> = Vec::with_capacity(n);
        let mut min_abs = f64::INFINITY;
        let mut signs_stable = true;
        for i in 0..n {
            let a = self.u0[i] - c1 * self.y[i];
            let b = self.u0[i] - c2 * self.y[i];
            min_abs = min_abs.min(a.abs()).min(b.abs());
            // u(c) is affine in c, so sign agreement at the two endpoints
            // pins the sign on the whole segment between them.
            signs_stable &= (a > 0.0) == (b > 0.0);
            v1.push(a);
            v2.push(b);
        }
        let margin = 8.0 * (self.common_err + self.indep_err + (c1.abs() + c2.abs()) * self.y_err);
        let mut idx1: Vec<u32> = (0..n as u32).collect();
        let mut idx2: Vec<u32> = (0..n as u32).collect();
        // The index tie-break keeps exactly tied magnitudes in one order on
        // both sides; a tie-broken permutation is still a valid descending
        // order for each.
        idx1.sort_unstable_by(|&a, &b| {
            v1[b as usize].abs().total_cmp(&v1[a as usize].abs()).then_with(|| a.cmp(&b))
        });
        idx2.sort_unstable_by(|&a, &b| {
            v2[b as usize].abs().total_cmp(&v2[a as usize].abs()).then_with(|| a.cmp(&b))
        });
        if min_abs > margin && signs_stable && idx1 == idx2 {
            // d_i = |v2_i| - |v1_i| = s_i·(v2_i - v1_i) = s_i·(c1 - c2)·y_i
            // exactly; construction noise is identical on both sides and
            // cancels (stable signs keep |·| linear on each entry).
            let terms = idx1.iter().zip(&self.w).map(|(&i, wi)| {
                let s = if v1[i as usize] > 0.0 { 1.0 } else { -1.0 };
                s * (v2[i as usize] - v1[i as usize]) * wi
            });
            let mut s = neumaier_sum(terms);
            let mut abs_scale = 0.0;
            for (i, wi) in idx1.iter().zip(&self.w) {
                abs_scale += (v1[*i as usize].abs() + v2[*i as usize].abs()) * wi;
            }
            s.error += 4.0 * f64::EPSILON * abs_scale
                + (c1 - c2).abs() * self.y_err * self.w_total();
            let tail = match &self.tail {
                TailModel::None => Enclosure::exact(0.0),
                TailModel::Scaled { sx, sy, k, .. } => {
                    k.mul(Enclosure::new(
                        (sx - c2 * sy).abs() - (sx - c1 * sy).abs(),
                        4.0 * f64::EPSILON * (sx.abs() + (c1.abs() + c2.abs()) * sy.abs()),
                    ))
                }
                TailModel::Coupled { a, .. } => a.scale(c1 - c2),
            };
            return Ok(s.add(tail));
        }
        // Wide fallback.
        Ok(self.h(c2)?.sub(self.h(c1)?))
    }

    /// One-sided location certificate from a certified comparison.
    pub fn side(&self, a: f64, b: f64) -> Result<Side> {
        assert!(a < b);
        let d = self.h_diff(a, b)?;
        Ok(if d.certainly_gt(0.0) {
            Side::MinLeftOf
        } else if d.certainly_lt(0.0) {
            Side::MinRightOf
        } else {
            Side::Inconclusive
        })
    }

    /// Golden-section localization plus a convexity-based distance bound.
    pub fn minimize(&self, lo: f64, hi: f64, tol: f64) -> Result<CertifiedProjection> {
        self.check_range(lo)?;
        self.check_range(hi)?;
        // Slope magnitude never exceeds Σ|y(n)|w(n); a crude upper bound
        // suffices to convert bracket width into value uncertainty.
        let mut slope = 0.0;
        for (yi, wi) in self.y.iter().zip(&self.w) {
            slope += yi.abs() * wi;
        }
        slope += match &self.tail {
            TailModel::None => 0.0,
            TailModel::Scaled { sy, k, .. } => sy.abs() * k.hi(),
            TailModel::Coupled { a, .. } => a.hi(),
        };
        slope = slope.max(1e-300) * (1.0 + 1e-9);
        let phi = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (lo, hi);
        let mut c1 = b - phi * (b - a);
        let mut c2 = a + phi * (b - a);
        let mut f1 = self.h(c1)?.value;
        let mut f2 = self.h(c2)?.value;
        let width_target = (tol / slope).max(f64::EPSILON * (lo.abs() + hi.abs() + 1.0));
        let mut iters = 0;
        while b - a > width_target && iters < 400 {
            if f1 <= f2 {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - phi * (b - a);
                f1 = self.h(c1)?.value;
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + phi * (b - a);
                f2 = self.h(c2)?.value;
            }
            iters += 1;
        }
        let c_hint = if f1 <= f2 { c1 } else { c2 };
        let hm = self.h(c_hint)?;
        // The true minimum over [a,b] sits within slope·(b-a) below h(c_hint),
        // and the minimum over [lo,hi] is in [a,b] only if the section moved
        // correctly on centers; cover center misordering with the enclosure
        // errors of the discarded endpoints instead.
        let dist = Enclosure {
            value: hm.value,
            error: hm.error + slope * (b - a),
        };
        // Certified localization by expanding comparisons around c_hint.
        let loc_lo = self.certified_bound(lo, hi, c_hint, dist, true)?;
        let loc_hi = self.certified_bound(lo, hi, c_hint, dist, false)?;
        Ok(CertifiedProjection {
            lo: loc_lo,
            hi: loc_hi,
            dist,
            c_hint,
        })
    }

    /// Largest `L ≤ c_hint` (resp. smallest `R ≥ c_hint`) such that every
    /// minimizer certifiably lies right of `L` (left of `R`). Falls back to
    /// the search boundary when the landscape is too flat to separate.
    fn certified_bound(
        &self,
        lo: f64,
        hi: f64,
        c_hint: f64,
        dist: Enclosure,
        left: bool,
    ) -> Result<f64> {
        let threshold = dist.hi() + 2.0 * dist.error + 4.0 * f64::EPSILON * dist.value.abs();
        let limit = if left { lo } else { hi };
        if (c_hint - limit).abs() < f64::EPSILON * (1.0 + limit.abs()) {
            return Ok(limit);
        }
        // A point with h certainly above every value the minimum can take
        // bounds the minimizer set by convexity.
        let above = |c: f64| -> Result<bool> { Ok(self.h(c)?.lo() > threshold) };
        if !above(limit)? {
            return Ok(limit);
        }
        let (mut out, mut inn) = (limit, c_hint);
        for _ in 0..80 {
            let mid = 0.5 * (out + inn);
            if above(mid)? {
                out = mid;
            } else {
                inn = mid;
            }
        }
        Ok(out)
    }
}

/// Tail profile of a sequence as `(scale, Some((exponent, offset)))`;
/// finite sequences report scale 0 and no profile.
fn scaled_profile(s: &Seq) -> Result<(f64, Option<(u32, i64)>)> {
    match s.tail() {
        None => Ok((0.0, None)),
        Some(TailFamily::Power {
            coef,
            exponent,
            offset,
        }) => Ok((
            crate::enclosure::rational_to_f64(coef),
            Some((*exponent, *offset)),
        )),
        Some(_) => Err(Error::InvalidSeq(
            "only power-profile tails fit the scaled model; use a dedicated builder".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rv(vals: &[(i64, i64)]) -> Vec<BigRational> {
        vals.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn projection_interval_of_reference_instance() {
        // x = (3, 1), y = (1, -2), harmonic weight: the best-approximation
        // coefficients form the interval [-1/2, 2/3] at distance 7/2.
        let w = Weight::harmonic();
        let p = project_exact(&rv(&[(3, 1), (1, 1)]), &rv(&[(1, 1), (-2, 1)]), &w).unwrap();
        assert_eq!(p.lo, rat(-1, 2));
        assert_eq!(p.hi, rat(2, 3));
        assert_eq!(p.dist, rat(7, 2));
        assert!(!p.is_singleton());
    }

    #[test]
    fn projection_flat_three_coordinate_instance() {
        let w = Weight::harmonic();
        let p = project_exact(
            &rv(&[(5, 1), (2, 1), (0, 1)]),
            &rv(&[(1, 1), (-2, 1), (0, 1)]),
            &w,
        )
        .unwrap();
        assert_eq!(p.lo, rat(-1, 1));
        assert_eq!(p.hi, rat(1, 1));
        assert_eq!(p.dist, rat(6, 1));
    }

    #[test]
    fn zero_direction_is_rejected() {
        let w = Weight::harmonic();
        assert!(matches!(
            project_exact(&rv(&[(1, 1)]), &rv(&[(0, 1)]), &w),
            Err(Error::DegenerateSubspace(_))
        ));
    }

    #[test]
    fn h_is_convex_on_candidates() {
        let w = Weight::harmonic();
        let x = rv(&[(3, 1), (1, 1), (-2, 1)]);
        let y = rv(&[(1, 1), (-2, 1), (1, 2)]);
        let cands = kink_candidates(&x, &y);
        let vals: Vec<BigRational> = cands
            .iter()
            .map(|c| h_exact(&x, &y, c, &w).unwrap())
            .collect();
        // Second differences of a convex piecewise-linear function sampled
        // at all kinks are nonnegative.
        for k in 1..vals.len() - 1 {
            let dl = (&vals[k] - &vals[k - 1]) / (&cands[k] - &cands[k - 1]);
            let dr = (&vals[k + 1] - &vals[k]) / (&cands[k + 1] - &cands[k]);
            assert!(dr >= dl);
        }
    }

    #[test]
    fn dual_certificate_at_endpoints_and_interior() {
        let w = Weight::harmonic();
        let x = rv(&[(3, 1), (1, 1)]);
        let y = rv(&[(1, 1), (-2, 1)]);
        for c in [rat(-1, 2), rat(0, 1), rat(2, 3)] {
            match dual_certificate(&x, &y, &c, &w).unwrap() {
                CertificateSearch::Found { certificate } => {
                    assert!(verify_dual_certificate(&x, &y, &c, &w, &certificate).unwrap());
                }
                CertificateSearch::NotFoundAmongExtreme => panic!("expected certificate at {c}"),
            }
        }
    }

    #[test]
    fn dual_certificate_rejects_non_minimizer() {
        // At c = 2 (outside [-1/2, 2/3]) no aligned functional can kill y.
        let w = Weight::harmonic();
        let x = rv(&[(3, 1), (1, 1)]);
        let y = rv(&[(1, 1), (-2, 1)]);
        match dual_certificate(&x, &y, &rat(2, 1), &w).unwrap() {
            CertificateSearch::Found { .. } => panic!("no certificate should exist at c = 2"),
            CertificateSearch::NotFoundAmongExtreme => {}
        }
    }

    #[test]
    fn strong_unicity_on_a_kinked_instance() {
        // x = (1, 0), y = (0, 1): h(c) = 1 + |c|/2 near 0, minimized only
        // at c = 0 with one-sided slopes ±1/2 and ‖y‖ = 1.
        let w = Weight::harmonic();
        let e = strong_unicity_estimate(&rv(&[(1, 1), (0, 1)]), &rv(&[(0, 1), (1, 1)]), &w).unwrap();
        assert_eq!(e.minimizer, rat(0, 1));
        assert_eq!(e.rate, rat(1, 2));
        assert_eq!(e.stability_bound(&rat(1, 10)), rat(2, 5));
    }

    #[test]
    fn strong_unicity_refused_on_flat_instance() {
        let w = Weight::harmonic();
        assert!(matches!(
            strong_unicity_estimate(&rv(&[(3, 1), (1, 1)]), &rv(&[(1, 1), (-2, 1)]), &w),
            Err(Error::NotStronglyUnique(_))
        ));
    }

    #[test]
    fn certified_finite_agrees_with_exact() {
        let w = Weight::harmonic();
        let x = Seq::from_rationals(rv(&[(3, 1), (1, 1)]));
        let y = Seq::from_rationals(rv(&[(1, 1), (-2, 1)]));
        let inst = CoupledInstance::from_finite(&x, &y, &w).unwrap();
        // h(0) = ‖(3,1)‖ = 3.5, h(2/3) = ‖(7/3,7/3)‖ = 3.5, h(-1) = ‖(4,-1)‖ = 4.5.
        assert!(inst.h(0.0).unwrap().contains(3.5));
        assert!(inst.h(2.0 / 3.0).unwrap().contains(3.5));
        assert!(inst.h(-1.0).unwrap().contains(4.5));
        let p = inst.minimize(-4.0, 4.0, 1e-9).unwrap();
        assert!(p.dist.contains(3.5));
        assert!(p.dist.error <= 1e-9);
        // Certified localization brackets the true interval [-1/2, 2/3].
        assert!(p.lo <= -0.5 + 1e-6 && p.lo >= -0.75);
        assert!(p.hi >= 2.0 / 3.0 - 1e-6 && p.hi <= 0.9);
    }

    #[test]
    fn certified_sides_on_finite_instance() {
        let w = Weight::harmonic();
        let x = Seq::from_rationals(rv(&[(3, 1), (1, 1)]));
        let y = Seq::from_rationals(rv(&[(1, 1), (-2, 1)]));
        let inst = CoupledInstance::from_finite(&x, &y, &w).unwrap();
        // Minimizers live in [-1/2, 2/3].
        assert_eq!(inst.side(0.7, 0.9).unwrap(), Side::MinLeftOf);
        assert_eq!(inst.side(-0.9, -0.7).unwrap(), Side::MinRightOf);
        assert_eq!(inst.side(0.0, 0.5).unwrap(), Side::Inconclusive);
    }

    #[test]
    fn scaled_power_model_handles_shared_tails() {
        // x(n) = 3/n² and y(n) = 1/n² for n > 2 share the profile; heads
        // differ. h(3) kills the tail entirely.
        let w = Weight::harmonic();
        let x = Seq::with_tail(rv(&[(5, 1), (0, 1)]), TailFamily::power(rat(3, 1), 2, 0)).unwrap();
        let y = Seq::with_tail(rv(&[(1, 1), (1, 1)]), TailFamily::power(rat(1, 1), 2, 0)).unwrap();
        let inst = CoupledInstance::from_scaled_power(&x, &y, &w, 64).unwrap();
        let h3 = inst.h(3.0).unwrap();
        // u = (5-3, 0-3, 0, 0, ...) = (2, -3): ‖u‖ = 3 + 2/2 = 4.
        assert!(h3.contains(4.0), "{h3:?}");
        // And at c = 0: ‖x‖ = Σ of head and tail; compare against the norm
        // routine on the same sequence.
        let direct = crate::norms::lorentz_norm(&x, &w, 1e-10).unwrap();
        let h0 = inst.h(0.0).unwrap();
        assert!(h0.overlaps(&direct), "{h0:?} vs {direct:?}");
    }
}
