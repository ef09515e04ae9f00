//! Experiment drivers: additive-splitting residuals on shrinking-bump
//! families, Hausdorff distances between projection sets, and continuity
//! reports for the metric projection under perturbations of the target.

use super::{
    fnorm, metric_projection_set, ConstraintClass, FNormSpec, GridFunction, GridSpace,
    ProjectionOptions,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

// --- additive-splitting residuals ---------------------------------------------------

/// One member of a residual family: a grid, the target, the limit
/// candidate, and the perturbed candidate.
#[derive(Clone, Debug)]
pub struct PropertySInstance {
    pub grid: GridSpace,
    pub f: GridFunction,
    pub c: GridFunction,
    pub c_n: GridFunction,
    /// Measure of the support on which `c_n` differs from `c`.
    pub bump_measure: f64,
}

/// `r_n = ‖f − c_n‖^p − ‖f − c‖^p − ‖c_n − c‖^p` for each instance.
///
/// When the candidates converge to `c` locally in measure the residuals
/// must vanish; on the shrinking-bump families built here they are
/// proportional to the bump measure.
pub fn property_s_residuals(
    family: &[PropertySInstance],
    spec: &FNormSpec,
    p_exp: f64,
) -> Result<Vec<f64>> {
    if !(p_exp > 0.0) || !p_exp.is_finite() {
        return Err(Error::InvalidNormSpec("residual exponent must be positive".into()));
    }
    let mut out = Vec::with_capacity(family.len());
    for inst in family {
        let a = fnorm(&inst.f.sub(&inst.c_n), &inst.grid, spec)?;
        let b = fnorm(&inst.f.sub(&inst.c), &inst.grid, spec)?;
        let d = fnorm(&inst.c_n.sub(&inst.c), &inst.grid, spec)?;
        out.push(a.powf(p_exp) - b.powf(p_exp) - d.powf(p_exp));
    }
    Ok(out)
}

/// The refining family behind the residual experiments: uniform grids with
/// `2^k` cells on `[0, 2]` for `k` in `exponents`, `f` the indicator of
/// `[0, 1]`, `c = 0`, and `c_n` the indicator of `[1, 1 + b_k]` with
/// `b_k = 2^{k₀−k}` — a unit-height bump whose support shrinks with every
/// refinement while staying aligned to the cells.
pub fn shrinking_bump_family(exponents: std::ops::RangeInclusive<u32>) -> Result<Vec<PropertySInstance>> {
    let k0 = *exponents.start();
    let mut family = Vec::new();
    for k in exponents {
        let cells = 1usize << k;
        let grid = GridSpace::uniform(cells, 2.0)?;
        let width = 2.0 / cells as f64;
        let bump = 0.5f64.powi((k - k0) as i32);
        let mut f = vec![0.0; cells];
        let mut c_n = vec![0.0; cells];
        for i in 0..cells {
            let left = i as f64 * width;
            if left < 1.0 - width / 2.0 {
                f[i] = 1.0;
            } else if left < 1.0 + bump - width / 2.0 {
                c_n[i] = 1.0;
            }
        }
        family.push(PropertySInstance {
            grid,
            f: GridFunction::new(f),
            c: GridFunction::zero(cells),
            c_n: GridFunction::new(c_n),
            bump_measure: bump,
        });
    }
    Ok(family)
}

// --- Hausdorff distance -------------------------------------------------------------

/// `sup_{a ∈ from} inf_{b ∈ to} ‖a − b‖`.
pub fn one_sided_deviation(
    from: &[Vec<f64>],
    to: &[Vec<f64>],
    grid: &GridSpace,
    spec: &FNormSpec,
) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::InvalidClass("deviation of an empty set".into()));
    }
    let mut sup = 0.0f64;
    for a in from {
        let mut inf = f64::INFINITY;
        for b in to {
            let d = fnorm(
                &GridFunction::new(a.iter().zip(b).map(|(x, y)| x - y).collect()),
                grid,
                spec,
            )?;
            inf = inf.min(d);
        }
        sup = sup.max(inf);
    }
    Ok(sup)
}

/// Hausdorff distance between two nonempty sets of grid functions in the
/// metric of the given F-norm.
pub fn hausdorff_distance(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    grid: &GridSpace,
    spec: &FNormSpec,
) -> Result<f64> {
    Ok(one_sided_deviation(a, b, grid, spec)?.max(one_sided_deviation(b, a, grid, spec)?))
}

// --- continuity of the metric projection ---------------------------------------------

/// Distances for one perturbed target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub n: usize,
    /// `sup{dist(c, P(f)) : c ∈ P(f_n)}` — vanishes under lower
    /// semicontinuity-type hypotheses.
    pub forward_sup: f64,
    /// `sup{dist(c, P(f_n)) : c ∈ P(f)}` — the side that can stay large.
    pub reverse_sup: f64,
    pub hausdorff: f64,
}

/// For one radius: the first index from which every later projection set
/// meets the ball around each unperturbed minimizer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallCheck {
    pub eps: f64,
    pub holds_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityVerdict {
    HausdorffConverging,
    OneSidedOnly,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub rows: Vec<ContinuityRow>,
    pub balls: Vec<BallCheck>,
    pub verdict: ContinuityVerdict,
}

/// Projects `f` and every perturbation onto the class, tabulating one-sided
/// deviations, Hausdorff distances, and the ball-intersection criterion on
/// the supplied radii.
pub fn continuity_experiment(
    f: &GridFunction,
    perturbations: &[GridFunction],
    class: &ConstraintClass,
    grid: &GridSpace,
    spec: &FNormSpec,
    eps_grid: &[f64],
    opts: &ProjectionOptions,
) -> Result<ContinuityReport> {
    if perturbations.is_empty() {
        return Err(Error::InvalidClass("no perturbations supplied".into()));
    }
    let base = metric_projection_set(f, class, grid, spec, opts)?;
    let base_set = base.minimizers.clone();
    let mut rows = Vec::with_capacity(perturbations.len());
    let mut sets = Vec::with_capacity(perturbations.len());
    for (k, f_n) in perturbations.iter().enumerate() {
        let p = metric_projection_set(f_n, class, grid, spec, opts)?;
        let forward = one_sided_deviation(&p.minimizers, &base_set, grid, spec)?;
        let reverse = one_sided_deviation(&base_set, &p.minimizers, grid, spec)?;
        rows.push(ContinuityRow {
            n: k + 1,
            forward_sup: forward,
            reverse_sup: reverse,
            hausdorff: forward.max(reverse),
        });
        sets.push(p.minimizers);
    }

    // Ball criterion: for each ε, the first index from which every later
    // projection set intersects B(c, ε) for every unperturbed minimizer c.
    let mut balls = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let mut holds_from = None;
        'from: for start in 0..sets.len() {
            for set in &sets[start..] {
                for c in &base_set {
                    let hit = set.iter().any(|p| {
                        fnorm(
                            &GridFunction::new(
                                c.iter().zip(p).map(|(a, b)| a - b).collect(),
                            ),
                            grid,
                            spec,
                        )
                        .map(|d| d <= eps)
                        .unwrap_or(false)
                    });
                    if !hit {
                        continue 'from;
                    }
                }
            }
            holds_from = Some(start + 1);
            break;
        }
        balls.push(BallCheck { eps, holds_from });
    }

    let first = &rows[0];
    let last = rows.last().unwrap();
    let small = |v: f64, v0: f64| v <= (v0 / 50.0).max(1e-9);
    let verdict = if small(last.hausdorff, first.hausdorff.max(1e-9)) {
        ContinuityVerdict::HausdorffConverging
    } else if small(last.forward_sup, first.forward_sup.max(1e-9))
        || last.forward_sup == 0.0
    {
        ContinuityVerdict::OneSidedOnly
    } else {
        ContinuityVerdict::Inconclusive
    };

    Ok(ContinuityReport {
        rows,
        balls,
        verdict,
    })
}

// --- the two-point preset -------------------------------------------------------------

/// The discontinuity witness on a single cell: `C = {−1, +1}`, `f = 0`,
/// `f_n = 1/n`. Every perturbed projection is `{+1}` while the
/// unperturbed one is all of `C`, so the reverse deviation is exactly 2
/// for every `n` and the forward deviation is exactly 0.
pub struct TwoPointPreset {
    pub grid: GridSpace,
    pub f: GridFunction,
    pub perturbations: Vec<GridFunction>,
    pub class: ConstraintClass,
    pub spec: FNormSpec,
    pub eps_grid: Vec<f64>,
}

pub fn two_point_preset(count: usize) -> Result<TwoPointPreset> {
    Ok(TwoPointPreset {
        grid: GridSpace::uniform(1, 1.0)?,
        f: GridFunction::zero(1),
        perturbations: (1..=count.max(1))
            .map(|n| GridFunction::new(vec![1.0 / n as f64]))
            .collect(),
        class: ConstraintClass::Finite {
            members: vec![vec![-1.0], vec![1.0]],
        },
        spec: FNormSpec::W1Discrete {
            weights: vec![1.0],
        },
        eps_grid: vec![0.5, 1.0, 2.5],
    })
}

#[cfg(test)]
mod tests {
    use super::super::StepTable;
    use super::*;

    #[test]
    fn two_point_projection_jumps() {
        let p = two_point_preset(8).unwrap();
        let report = continuity_experiment(
            &p.f,
            &p.perturbations,
            &p.class,
            &p.grid,
            &p.spec,
            &p.eps_grid,
            &ProjectionOptions::default(),
        )
        .unwrap();
        for row in &report.rows {
            assert_eq!(row.forward_sup, 0.0, "n = {}", row.n);
            assert_eq!(row.reverse_sup, 2.0, "n = {}", row.n);
            assert_eq!(row.hausdorff, 2.0);
        }
        assert_eq!(report.verdict, ContinuityVerdict::OneSidedOnly);
        // Small balls around −1 never meet {+1}; a radius of 2.5 always does.
        assert_eq!(report.balls[0].holds_from, None);
        assert_eq!(report.balls[1].holds_from, None);
        assert_eq!(report.balls[2].holds_from, Some(1));
    }

    #[test]
    fn identical_perturbations_give_zero_rows() {
        let g = GridSpace::uniform(3, 1.0).unwrap();
        let f = GridFunction::new(vec![2.0, 0.0, 1.0]);
        let spec = FNormSpec::BoundedIntegral;
        let report = continuity_experiment(
            &f,
            &[f.clone(), f.clone()],
            &ConstraintClass::MonotoneIncreasing,
            &g,
            &spec,
            &[0.1],
            &ProjectionOptions::default(),
        )
        .unwrap();
        for row in &report.rows {
            assert_eq!(row.forward_sup, 0.0);
            assert_eq!(row.reverse_sup, 0.0);
        }
        assert_eq!(report.verdict, ContinuityVerdict::HausdorffConverging);
    }

    #[test]
    fn hausdorff_basics() {
        let g = GridSpace::uniform(1, 1.0).unwrap();
        let spec = FNormSpec::W1Discrete {
            weights: vec![1.0],
        };
        let a = vec![vec![-1.0], vec![1.0]];
        let b = vec![vec![1.0]];
        assert_eq!(hausdorff_distance(&a, &a, &g, &spec).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &b, &g, &spec).unwrap(), 2.0);
        // Interval against shifted interval, sampled: {−1,0,1} vs {1,2}.
        let c = vec![vec![-1.0], vec![0.0], vec![1.0]];
        let d = vec![vec![1.0], vec![2.0]];
        assert_eq!(hausdorff_distance(&c, &d, &g, &spec).unwrap(), 2.0);
        assert!(hausdorff_distance(&[], &a, &g, &spec).is_err());
    }

    #[test]
    fn residuals_vanish_for_constant_candidates() {
        let fam = shrinking_bump_family(6..=8).unwrap();
        let degenerate: Vec<PropertySInstance> = fam
            .iter()
            .map(|i| PropertySInstance {
                grid: i.grid.clone(),
                f: i.f.clone(),
                c: i.c.clone(),
                c_n: i.c.clone(),
                bump_measure: 0.0,
            })
            .collect();
        let r = property_s_residuals(&degenerate, &FNormSpec::BoundedIntegral, 1.0).unwrap();
        assert!(r.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn bump_family_is_aligned_and_shrinking() {
        let fam = shrinking_bump_family(6..=12).unwrap();
        assert_eq!(fam.len(), 7);
        for (k, inst) in fam.iter().enumerate() {
            let cells = inst.grid.cells();
            assert_eq!(cells, 1 << (6 + k));
            // f occupies measure 1, the bump exactly bump_measure.
            let f_mass: f64 = inst
                .f
                .values
                .iter()
                .zip(&inst.grid.measures)
                .map(|(v, m)| v * m)
                .sum();
            let bump_mass: f64 = inst
                .c_n
                .values
                .iter()
                .zip(&inst.grid.measures)
                .map(|(v, m)| v * m)
                .sum();
            assert!((f_mass - 1.0).abs() < 1e-12);
            assert!((bump_mass - inst.bump_measure).abs() < 1e-12);
            // Disjoint supports.
            assert!(inst
                .f
                .values
                .iter()
                .zip(&inst.c_n.values)
                .all(|(a, b)| a * b == 0.0));
        }
        for w in fam.windows(2) {
            assert!(w[1].bump_measure == w[0].bump_measure / 2.0);
        }
    }

    #[test]
    fn lambda_residuals_scale_with_the_bump() {
        let fam = shrinking_bump_family(6..=12).unwrap();
        let spec = FNormSpec::LambdaPhi {
            phi_prime: StepTable::sqrt_phi_prime(2.0, 16).unwrap(),
        };
        let r = property_s_residuals(&fam, &spec, 1.0).unwrap();
        for w in r.windows(2) {
            assert!(
                w[1].abs() < w[0].abs(),
                "residuals must shrink: {} then {}",
                w[0],
                w[1]
            );
        }
        // Once the bump fits inside a single φ′ step the residual is exactly
        // linear in the bump measure; the fitted constant settles.
        let ratios: Vec<f64> = r
            .iter()
            .zip(&fam)
            .map(|(v, i)| v.abs() / i.bump_measure)
            .collect();
        let tail = &ratios[ratios.len() - 4..];
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().cloned().fold(0.0f64, f64::max);
        assert!(hi / lo < 1.25, "fitted constants drift: {ratios:?}");
    }
}
